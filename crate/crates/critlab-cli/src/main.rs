//! Command-line surface over the critlab library.
//!
//! Graphs travel as graph6, one per line; JSON appears only for reports and
//! certificates. Exit codes: 0 = success / all checks passed, 1 = a check
//! violation or certificate rejection, 2 = usage or parse error.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use critlab::census::{
    equality_census, run_census, run_census_stream, CensusConfig, CensusReport, Check, SourceKind,
};
use critlab::cliques::{clique_stats, enumerate_cliques, incidence_matrix};
use critlab::coloring::chromatic_number;
use critlab::criticality::{is_k_critical, CriticalityReport, Verdict};
use critlab::gf2::rank;
use critlab::graph::{Graph, WParams};
use critlab::trace::{build_trace, check_trace, TraceCertificate, TraceError};
use critlab::{canonical_form, graph6};

#[derive(Parser)]
#[command(
    name = "critlab",
    version,
    about = "Verification laboratory for clique-count bounds in k-critical graphs",
    after_help = "Graphs are read as graph6, one per line on stdin, unless the\nsubcommand takes no graph input."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    /// Join of a complete graph K_d with a cycle C_ell.
    #[value(name = "W", alias = "w")]
    W,
    Complete,
    Cycle,
    Wheel,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceArg {
    /// Internal exhaustive generator (n <= 10).
    Gen,
    /// graph6 lines on stdin.
    Stdin,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a named graph as graph6.
    Construct {
        #[arg(long)]
        family: Family,
        /// Cycle length for W and wheel.
        #[arg(long)]
        ell: Option<usize>,
        /// Hub clique size for W.
        #[arg(long)]
        d: Option<usize>,
        /// Vertex count for complete and cycle.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Chromatic number of each input graph: "g6 TAB chi".
    Chi,
    /// k-criticality verdict of each input graph.
    Critical {
        #[arg(long)]
        k: usize,
        /// Emit the full JSON report instead of the one-line verdict.
        #[arg(long)]
        report: bool,
    },
    /// Count cliques on `size` vertices: "g6 TAB count".
    Cliques {
        #[arg(long)]
        size: usize,
        /// Emit per-vertex and per-edge statistics as JSON.
        #[arg(long)]
        stats: bool,
    },
    /// GF(2) rank of the clique incidence rows: "g6 TAB rank".
    Rank {
        #[arg(long = "clique-size")]
        clique_size: usize,
        /// Extra singleton rows, as comma-separated vertex indices.
        #[arg(long, value_delimiter = ',')]
        singletons: Vec<usize>,
    },
    /// Run the census and audit every enabled check.
    Audit {
        #[arg(long)]
        k: usize,
        #[arg(long = "n-min")]
        n_min: usize,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = SourceArg::Gen)]
        source: SourceArg,
        /// Comma-separated check tokens; defaults to all of them.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: CRITLAB_JOBS, else the library default).
        #[arg(long)]
        jobs: Option<usize>,
        /// Where report-only findings land if any occur.
        #[arg(long, default_value = "su_findings.json")]
        findings: PathBuf,
        /// Also emit the equality graphs grouped by vertex count, as JSON on
        /// stderr-free stdout after the report (file output only).
        #[arg(long)]
        equality_summary: bool,
    },
    /// Build certificates for input graphs, or verify them against a file.
    Trace {
        #[arg(long)]
        k: usize,
        /// Verify: path to a file of certificates (one JSON per line)
        /// matching the input graphs line for line.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Canonically relabel each input graph: emits canonical graph6.
    Canon,
}

/// Data-level failure: malformed input, impossible request. Exit code 2.
#[derive(Debug)]
struct DataError(String);

impl std::fmt::Display for DataError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DataError {}

fn data_err<T>(msg: impl Into<String>) -> Result<T, DataError> {
    Err(DataError(msg.into()))
}

type CmdResult = Result<ExitCode, DataError>;

const PASS: ExitCode = ExitCode::SUCCESS;
const VIOLATION: ExitCode = ExitCode::FAILURE;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("critlab: {e}");
            ExitCode::from(2u8)
        }
    }
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Construct {
            family,
            ell,
            d,
            size,
        } => construct(family, ell, d, size),
        Cmd::Chi => chi(),
        Cmd::Critical { k, report } => critical(k, report),
        Cmd::Cliques { size, stats } => cliques(size, stats),
        Cmd::Rank {
            clique_size,
            singletons,
        } => rank_cmd(clique_size, &singletons),
        Cmd::Audit {
            k,
            n_min,
            n_max,
            source,
            checks,
            out,
            jobs,
            findings,
            equality_summary,
        } => audit(
            k,
            n_min,
            n_max,
            source,
            checks,
            out,
            jobs,
            findings,
            equality_summary,
        ),
        Cmd::Trace { k, check } => match check {
            None => trace_build(k),
            Some(path) => trace_check(k, &path),
        },
        Cmd::Canon => canon(),
    }
}

// ---------------------------------------------------------------------------
// Input plumbing.

/// Non-blank stdin lines decoded as graph6, with their 1-based line numbers.
fn read_graphs() -> Result<Vec<(usize, String, Graph)>, DataError> {
    let stdin = io::stdin();
    let mut out = Vec::new();
    for (idx, line) in stdin.lock().lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let g = graph6::decode(text)
            .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
        out.push((line_no, text.to_string(), g));
    }
    Ok(out)
}

fn require(value: Option<usize>, flag: &str, family: &str) -> Result<usize, DataError> {
    value.ok_or_else(|| DataError(format!("--family {family} requires --{flag}")))
}

// ---------------------------------------------------------------------------
// Subcommands.

fn construct(
    family: Family,
    ell: Option<usize>,
    d: Option<usize>,
    size: Option<usize>,
) -> CmdResult {
    let g = match family {
        Family::W => Graph::w_graph(WParams {
            ell: require(ell, "ell", "W")?,
            d: require(d, "d", "W")?,
        }),
        Family::Complete => Graph::complete(require(size, "size", "complete")?),
        Family::Cycle => Graph::cycle(require(size, "size", "cycle")?),
        Family::Wheel => Graph::wheel(require(ell, "ell", "wheel")?),
    }
    .map_err(|e| DataError(e.to_string()))?;
    println!("{}", graph6::encode(&g));
    Ok(PASS)
}

fn chi() -> CmdResult {
    for (_, text, g) in read_graphs()? {
        println!("{text}\t{}", chromatic_number(&g));
    }
    Ok(PASS)
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Critical => "critical".into(),
        Verdict::NotChromaticK { chi } => format!("not_chromatic_k chi={chi}"),
        Verdict::EdgeNotCritical { edge, chi_without } => format!(
            "edge_not_critical edge=({},{}) chi_without={chi_without}",
            edge.0, edge.1
        ),
        Verdict::IsolatedVertex { vertex } => format!("isolated_vertex vertex={vertex}"),
    }
}

fn report_json(text: &str, r: &CriticalityReport) -> serde_json::Value {
    let edge_chi: Vec<serde_json::Value> = r
        .edge_chi
        .iter()
        .map(|(&(u, v), &c)| serde_json::json!({ "edge": [u, v], "chi": c }))
        .collect();
    serde_json::json!({
        "graph6": text,
        "k": r.k,
        "chi": r.chi,
        "min_degree": r.min_degree,
        "edge_chi": edge_chi,
        "verdict": verdict_line(&r.verdict),
    })
}

fn critical(k: usize, report: bool) -> CmdResult {
    let mut all_critical = true;
    for (line_no, text, g) in read_graphs()? {
        let r = is_k_critical(&g, k)
            .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
        all_critical &= r.is_critical();
        if report {
            println!("{}", report_json(&text, &r));
        } else {
            println!("{text}\t{}", verdict_line(&r.verdict));
        }
    }
    Ok(if all_critical { PASS } else { VIOLATION })
}

fn cliques(size: usize, stats: bool) -> CmdResult {
    for (line_no, text, g) in read_graphs()? {
        if stats {
            let s = clique_stats(&g, size)
                .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
            let per_edge: Vec<serde_json::Value> = s
                .per_edge()
                .iter()
                .map(|(&(u, v), &c)| serde_json::json!({ "edge": [u, v], "count": c }))
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "graph6": text,
                    "size": size,
                    "total": s.total(),
                    "per_vertex": s.per_vertex(),
                    "per_edge": per_edge,
                    "min_count_vertex": s.min_count_vertex(),
                })
            );
        } else {
            let cat = enumerate_cliques(&g, size)
                .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
            println!("{text}\t{}", cat.len());
        }
    }
    Ok(PASS)
}

fn rank_cmd(clique_size: usize, singletons: &[usize]) -> CmdResult {
    for (line_no, text, g) in read_graphs()? {
        let cat = enumerate_cliques(&g, clique_size)
            .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
        let m = incidence_matrix(&cat, singletons)
            .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
        println!("{text}\t{}", rank(&m));
    }
    Ok(PASS)
}

#[allow(clippy::too_many_arguments)]
fn audit(
    k: usize,
    n_min: usize,
    n_max: usize,
    source: SourceArg,
    checks: Option<Vec<String>>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    findings: PathBuf,
    equality_summary: bool,
) -> CmdResult {
    let checks: BTreeSet<Check> = match checks {
        None => Check::ALL.into_iter().collect(),
        Some(tokens) => {
            let mut set = BTreeSet::new();
            for t in tokens {
                let c = Check::from_token(t.trim())
                    .ok_or_else(|| DataError(format!("unknown check token '{t}'")))?;
                set.insert(c);
            }
            set
        }
    };
    let parallelism = match jobs {
        Some(j) => j,
        None => match std::env::var("CRITLAB_JOBS") {
            Ok(s) => s
                .parse::<usize>()
                .map_err(|_| DataError(format!("CRITLAB_JOBS must be an integer, got '{s}'")))?,
            Err(_) => 0,
        },
    };
    let cfg = CensusConfig {
        k,
        n_min,
        n_max,
        source: match source {
            SourceArg::Gen => SourceKind::InternalGenerator,
            SourceArg::Stdin => SourceKind::Graph6Stream,
        },
        checks,
        parallelism,
    };
    let report: CensusReport = match source {
        SourceArg::Gen => run_census(&cfg),
        SourceArg::Stdin => run_census_stream(&cfg, io::stdin().lock()),
    }
    .map_err(|e| DataError(e.to_string()))?;

    let json = report.to_json();
    match &out {
        Some(path) => {
            fs::write(path, json.as_bytes())
                .map_err(|e| DataError(format!("cannot write {}: {e}", path.display())))?;
            eprintln!(
                "critlab: report written to {} ({} critical graphs, {} with violations)",
                path.display(),
                report.total_critical(),
                report
                    .per_n
                    .iter()
                    .map(|r| r.violations.len())
                    .sum::<usize>()
            );
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(json.as_bytes())
                .and_then(|_| stdout.write_all(b"\n"))
                .map_err(|e| DataError(format!("cannot write report: {e}")))?;
        }
    }

    let exceptions = report.su_exception_entries();
    if !exceptions.is_empty() {
        let payload: Vec<serde_json::Value> = exceptions
            .iter()
            .map(|(n, e)| {
                serde_json::json!({ "n": n, "graph6": e.graph6, "min_d": e.min_d, "k": k })
            })
            .collect();
        let body = serde_json::to_string_pretty(&payload).expect("findings serialize");
        fs::write(&findings, body.as_bytes())
            .map_err(|e| DataError(format!("cannot write {}: {e}", findings.display())))?;
        eprintln!(
            "critlab: {} report-only finding(s) written to {}",
            exceptions.len(),
            findings.display()
        );
    }

    if equality_summary {
        if out.is_none() {
            return data_err("--equality-summary needs --out so stdout stays single-purpose");
        }
        let grouped =
            equality_census(&report, k).map_err(|e| DataError(e.to_string()))?;
        println!(
            "{}",
            serde_json::to_string_pretty(&grouped).expect("grouping serializes")
        );
    }

    Ok(if report.has_violations() {
        VIOLATION
    } else {
        PASS
    })
}

fn trace_build(k: usize) -> CmdResult {
    let mut falsified = false;
    for (line_no, text, g) in read_graphs()? {
        let report = is_k_critical(&g, k)
            .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
        if !report.is_critical() {
            return data_err(format!(
                "stdin line {line_no}: graph {text} is not {k}-critical ({})",
                verdict_line(&report.verdict)
            ));
        }
        match build_trace(&g, k) {
            Ok(cert) => {
                println!(
                    "{}",
                    serde_json::to_string(&cert).expect("certificate serializes")
                );
            }
            Err(e @ TraceError::Falsification { .. }) => {
                eprintln!("critlab: stdin line {line_no}: {e}");
                falsified = true;
            }
            Err(e) => return data_err(format!("stdin line {line_no}: {e}")),
        }
    }
    Ok(if falsified { VIOLATION } else { PASS })
}

fn trace_check(k: usize, cert_path: &PathBuf) -> CmdResult {
    let cert_text = fs::read_to_string(cert_path)
        .map_err(|e| DataError(format!("cannot read {}: {e}", cert_path.display())))?;
    let certs: Vec<TraceCertificate> = cert_text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, l)| {
            serde_json::from_str(l.trim()).map_err(|e| {
                DataError(format!("{} line {}: {e}", cert_path.display(), idx + 1))
            })
        })
        .collect::<Result<_, _>>()?;
    let graphs = read_graphs()?;
    if graphs.len() != certs.len() {
        return data_err(format!(
            "{} certificates for {} input graphs",
            certs.len(),
            graphs.len()
        ));
    }
    let mut all_ok = true;
    for ((_, _, g), cert) in graphs.iter().zip(&certs) {
        let outcome = check_trace(g, k, cert);
        all_ok &= outcome.ok();
        println!(
            "{}",
            serde_json::json!({ "ok": outcome.ok(), "failures": outcome.failures })
        );
    }
    Ok(if all_ok { PASS } else { VIOLATION })
}

fn canon() -> CmdResult {
    for (line_no, _, g) in read_graphs()? {
        let c = canonical_form(&g)
            .map_err(|e| DataError(format!("stdin line {line_no}: {e}")))?;
        println!("{}", graph6::encode(&c));
    }
    Ok(PASS)
}
