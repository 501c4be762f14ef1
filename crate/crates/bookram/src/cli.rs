//! Command-line interface: every capability as a subcommand.
//!
//! Exit codes: 0 on success, 1 when a verification or search comes back
//! negative, 2 on usage errors (bad flags, unreadable files, bad
//! parameters). File-emitting subcommands are byte-deterministic given
//! identical flags. Reporting subcommands accept `--json` and emit the
//! same facts as the human-readable text.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use crate::circulant::{BlockCirculantSpec, MAX_BLOCK};
use crate::field::paley_book_graph;
use crate::graph::{BookParams, Graph};
use crate::ipenc::{encode_block_circulant_ip, write_lp, IpOptions};
use crate::satenc::{encode_books, write_dimacs, write_var_map, EncodeOptions};
use crate::search::{default_workers, enumerate_ramsey_graphs_with};
use crate::witness::{
    load_appendix, bundled_bounds, verify_bound, Registry, WitnessEntry, WitnessPayload,
};

#[derive(Parser)]
#[command(
    name = "bookram",
    version,
    about = "Construct, verify, encode, and enumerate book Ramsey graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Paley-type witness on 2q vertices and verify it.
    Paley {
        /// Field order; a prime power congruent to 1 mod 4.
        #[arg(long)]
        q: usize,
        #[arg(long)]
        json: bool,
    },
    /// Verify a graph file (adjacency matrix or graph6) against B_r/B_s.
    Check {
        /// Path to the graph; 0/1 adjacency rows or a graph6 line.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        json: bool,
    },
    /// Verify a two-block circulant description against B_r/B_s.
    SpecCheck {
        /// Path to a file holding `m; D11={..}; D12={..}[; D22={..}]`.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write a CNF whose models are the (B_r,B_s)-avoiding graphs on n
    /// labeled vertices, plus a variable-map sidecar.
    EncodeSat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Add lexicographic symmetry-breaking clauses.
        #[arg(long)]
        symmetry: bool,
        /// DIMACS output path; the sidecar gets a `.vars` suffix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write an integer program over two-block circulant descriptions.
    EncodeIp {
        /// Block size; the graph would have 2m vertices.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Fix D22 to the complement of D11 (minus 0).
        #[arg(long)]
        complement_ansatz: bool,
        /// Constrain D11 = D12.
        #[arg(long)]
        d11_eq_d12: bool,
        /// Comma-separated elements forced into D11.
        #[arg(long, value_delimiter = ',')]
        pin: Vec<usize>,
        /// LP-format output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate all (B_r,B_s)-avoiding graphs on n vertices up to
    /// isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Give up after this many seconds.
        #[arg(long)]
        budget: Option<u64>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Print each graph as graph6, one per line.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
    },
    /// Query or re-verify the bounds registry.
    Bounds {
        #[command(subcommand)]
        action: BoundsAction,
    },
    /// Verify every bundled witness table entry.
    VerifyAppendix {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum BoundsAction {
    /// Print the best known interval for R(B_r,B_s).
    Show {
        r: usize,
        s: usize,
        /// Registry file; defaults to the built-in record set.
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Re-verify every registry record that carries a witness.
    VerifyAll {
        /// Registry file; defaults to the built-in record set.
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `argv` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successful terminations.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// `Ok(exit code)` for completed runs; `Err` for usage-class failures.
fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::Paley { q, json } => cmd_paley(q, json),
        Command::Check { graph, r, s, json } => cmd_check(&graph, r, s, json),
        Command::SpecCheck { spec, r, s, json } => cmd_spec_check(&spec, r, s, json),
        Command::EncodeSat { n, r, s, symmetry, out } => cmd_encode_sat(n, r, s, symmetry, &out),
        Command::EncodeIp { m, r, s, complement_ansatz, d11_eq_d12, pin, out } => {
            cmd_encode_ip(m, r, s, complement_ansatz, d11_eq_d12, pin, &out)
        }
        Command::Enumerate { n, r, s, budget, workers, list, json } => {
            cmd_enumerate(n, r, s, budget, workers, list, json)
        }
        Command::Bounds { action } => match action {
            BoundsAction::Show { r, s, registry, json } => cmd_bounds_show(r, s, registry, json),
            BoundsAction::VerifyAll { registry, json } => cmd_bounds_verify_all(registry, json),
        },
        Command::VerifyAppendix { json } => cmd_verify_appendix(json),
    }
}

fn book_params(r: usize, s: usize) -> Result<BookParams, String> {
    if r == 0 || s == 0 {
        return Err("book sizes must be positive".to_string());
    }
    Ok(BookParams::new(r, s))
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

// ----------------------------------------------------------------------------
// paley
// ----------------------------------------------------------------------------

fn cmd_paley(q: usize, json: bool) -> Result<i32, String> {
    let graph = paley_book_graph(q).map_err(|e| e.to_string())?;
    let n = (q + 1) / 2;
    let claim = format!("R(B_{},B_{}) >= {}", n - 1, n, 4 * n - 1);
    let entry = WitnessEntry::from_claim(&claim, WitnessPayload::Matrix(graph.clone()))
        .map_err(|e| e.to_string())?;
    let report = verify_bound(&entry);
    let graph6 = graph.to_graph6().ok();
    if json {
        println!(
            "{}",
            json!({
                "q": q,
                "vertices": graph.n(),
                "graph6": graph6,
                "report": report,
            })
        );
    } else {
        match &graph6 {
            Some(text) => println!("{text}"),
            None => println!("({} vertices; too large for graph6)", graph.n()),
        }
        println!("{report}");
    }
    Ok(if report.passed { 0 } else { 1 })
}

// ----------------------------------------------------------------------------
// check / spec-check
// ----------------------------------------------------------------------------

fn parse_graph_file(text: &str) -> Result<Graph, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err("graph file is empty".to_string());
    }
    // A single line without matrix separators is treated as graph6.
    let lines: Vec<&str> = trimmed.lines().collect();
    if lines.len() == 1 && !lines[0].contains([' ', ',', '[']) {
        return Graph::from_graph6(lines[0]).map_err(|e| e.to_string());
    }
    Graph::parse_adjacency_text(trimmed).map_err(|e| e.to_string())
}

fn report_and_code(report: &crate::witness::VerificationReport, json: bool) -> i32 {
    if json {
        println!("{}", serde_json::to_string(report).expect("report serializes"));
    } else {
        println!("{report}");
    }
    if report.passed {
        0
    } else {
        1
    }
}

fn cmd_check(path: &Path, r: usize, s: usize, json: bool) -> Result<i32, String> {
    let p = book_params(r, s)?;
    let graph = parse_graph_file(&read_file(path)?)?;
    let claim = format!("R(B_{},B_{}) >= {}", p.r, p.s, graph.n() + 1);
    let entry = WitnessEntry::from_claim(&claim, WitnessPayload::Matrix(graph))
        .map_err(|e| e.to_string())?;
    Ok(report_and_code(&verify_bound(&entry), json))
}

fn cmd_spec_check(path: &Path, r: usize, s: usize, json: bool) -> Result<i32, String> {
    let p = book_params(r, s)?;
    let text = read_file(path)?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| "spec file has no content".to_string())?;
    let spec = BlockCirculantSpec::from_str(line).map_err(|e| e.to_string())?;
    let claim = format!("R(B_{},B_{}) >= {}", p.r, p.s, 2 * spec.m() + 1);
    let entry = WitnessEntry::from_claim(&claim, WitnessPayload::Spec(spec))
        .map_err(|e| e.to_string())?;
    Ok(report_and_code(&verify_bound(&entry), json))
}

// ----------------------------------------------------------------------------
// encode-sat / encode-ip
// ----------------------------------------------------------------------------

fn cmd_encode_sat(n: usize, r: usize, s: usize, symmetry: bool, out: &Path) -> Result<i32, String> {
    let p = book_params(r, s)?;
    let opts = EncodeOptions { symmetry_breaking: symmetry };
    let (formula, var_map) = encode_books(n, p, opts).map_err(|e| e.to_string())?;

    let file = fs::File::create(out).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    let mut sink = BufWriter::new(file);
    write_dimacs(&formula, &mut sink).map_err(|e| e.to_string())?;

    let mut vars_name = out.as_os_str().to_os_string();
    vars_name.push(".vars");
    let vars_path = PathBuf::from(vars_name);
    let file = fs::File::create(&vars_path)
        .map_err(|e| format!("cannot write {}: {e}", vars_path.display()))?;
    let mut sink = BufWriter::new(file);
    write_var_map(&var_map, &mut sink).map_err(|e| e.to_string())?;

    println!(
        "wrote {} ({} vars, {} clauses) and {}",
        out.display(),
        formula.num_vars,
        formula.clause_count(),
        vars_path.display()
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_encode_ip(
    m: usize,
    r: usize,
    s: usize,
    complement_ansatz: bool,
    d11_eq_d12: bool,
    pin: Vec<usize>,
    out: &Path,
) -> Result<i32, String> {
    let p = book_params(r, s)?;
    if !(2..=MAX_BLOCK).contains(&m) {
        return Err(format!("block size must be in 2..={MAX_BLOCK}"));
    }
    if let Some(&bad) = pin.iter().find(|&&e| e == 0 || e >= m) {
        return Err(format!("pinned element {bad} is outside 1..{m}"));
    }
    let opts = IpOptions { complement_ansatz, d11_eq_d12, pinned: pin };
    let model = encode_block_circulant_ip(m, p, &opts);

    let file = fs::File::create(out).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    let mut sink = BufWriter::new(file);
    write_lp(&model, &mut sink).map_err(|e| e.to_string())?;

    println!(
        "wrote {} ({} variables, {} constraints)",
        out.display(),
        model.variables().len(),
        model.constraints().len()
    );
    Ok(0)
}

// ----------------------------------------------------------------------------
// enumerate
// ----------------------------------------------------------------------------

fn cmd_enumerate(
    n: usize,
    r: usize,
    s: usize,
    budget: Option<u64>,
    workers: Option<usize>,
    list: bool,
    json: bool,
) -> Result<i32, String> {
    let p = book_params(r, s)?;
    let budget = budget.map(Duration::from_secs);
    let workers = workers.unwrap_or_else(default_workers).max(1);
    match enumerate_ramsey_graphs_with(n, p, budget, workers) {
        Ok(result) => {
            if json {
                let graphs: Option<Vec<&str>> =
                    list.then(|| result.graphs.iter().map(|g| g.as_str()).collect());
                println!(
                    "{}",
                    json!({
                        "n": n,
                        "r": p.r,
                        "s": p.s,
                        "count": result.graphs.len(),
                        "graphs": graphs,
                        "stats": {
                            "nodes": result.stats.nodes,
                            "leaves": result.stats.leaves,
                            "canonize_calls": result.stats.canonize_calls,
                            "elapsed_ms": result.stats.elapsed.as_millis() as u64,
                        },
                    })
                );
            } else {
                println!(
                    "n={} r={} s={}: {} graphs (nodes {}, leaves {}, canonizations {}, {:.2}s)",
                    n,
                    p.r,
                    p.s,
                    result.graphs.len(),
                    result.stats.nodes,
                    result.stats.leaves,
                    result.stats.canonize_calls,
                    result.stats.elapsed.as_secs_f64()
                );
                if list {
                    for g in &result.graphs {
                        println!("{g}");
                    }
                }
            }
            Ok(0)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(1)
        }
    }
}

// ----------------------------------------------------------------------------
// bounds
// ----------------------------------------------------------------------------

fn load_registry(path: Option<PathBuf>) -> Result<Registry, String> {
    match path {
        Some(p) => Registry::load(&p).map_err(|e| e.to_string()),
        None => Ok(Registry::from_records(bundled_bounds().map_err(|e| e.to_string())?)),
    }
}

fn cmd_bounds_show(
    r: usize,
    s: usize,
    registry: Option<PathBuf>,
    json: bool,
) -> Result<i32, String> {
    book_params(r, s)?;
    let reg = load_registry(registry)?;
    let summary = reg.query(r, s);
    if json {
        println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
    } else {
        println!("{summary}");
        let mut seen = std::collections::BTreeSet::new();
        for source in summary.lower_sources.iter().chain(&summary.upper_sources) {
            if seen.insert(source) {
                println!("  source: {source}");
            }
        }
    }
    Ok(0)
}

fn cmd_bounds_verify_all(registry: Option<PathBuf>, json: bool) -> Result<i32, String> {
    let reg = load_registry(registry)?;
    let checks = reg.verify_all();
    let mut all_ok = true;
    if json {
        let rows: Vec<serde_json::Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "record": &c.record,
                    "passed": c.passed(),
                    "skipped": c.report.is_none() && c.error.is_none(),
                    "error": &c.error,
                })
            })
            .collect();
        println!("{}", serde_json::to_string(&rows).expect("rows serialize"));
        all_ok = checks.iter().all(crate::witness::RecordCheck::passed);
    } else {
        for check in &checks {
            let tag = if !check.passed() {
                all_ok = false;
                "FAIL"
            } else if check.report.is_none() {
                "SKIP"
            } else {
                "PASS"
            };
            let note = match (&check.error, &check.report) {
                (Some(e), _) => format!("  [{e}]"),
                (None, None) => "  [provenance only]".to_string(),
                (None, Some(_)) => String::new(),
            };
            println!("{tag} {} -- {}{note}", check.record, check.record.provenance);
        }
        println!("{} records checked", checks.len());
    }
    Ok(if all_ok { 0 } else { 1 })
}

// ----------------------------------------------------------------------------
// verify-appendix
// ----------------------------------------------------------------------------

fn cmd_verify_appendix(json: bool) -> Result<i32, String> {
    let entries = load_appendix().map_err(|e| e.to_string())?;
    let mut all_ok = true;
    let mut reports = Vec::new();
    for entry in &entries {
        let report = verify_bound(entry);
        all_ok &= report.passed;
        if !json {
            let tag = if report.passed { "PASS" } else { "FAIL" };
            println!("{tag} {}: {}", entry.claim(), report.verdict_line());
        }
        reports.push(report);
    }
    if json {
        println!("{}", serde_json::to_string(&reports).expect("reports serialize"));
    } else {
        println!("{} entries checked", reports.len());
    }
    Ok(if all_ok { 0 } else { 1 })
}

// ============================================================================
// Tests
// ============================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        let mut argv = vec!["bookram".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        run(argv)
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&[]), 2);
        assert_eq!(run_args(&["no-such-command"]), 2);
        assert_eq!(run_args(&["paley"]), 2);
        assert_eq!(run_args(&["paley", "--q", "5", "--bogus"]), 2);
        assert_eq!(run_args(&["check", "--graph", "/no/such/file", "--r", "1", "--s", "1"]), 2);
    }

    #[test]
    fn help_and_version_exit_zero() {
        assert_eq!(run_args(&["--help"]), 0);
        assert_eq!(run_args(&["--version"]), 0);
        assert_eq!(run_args(&["enumerate", "--help"]), 0);
    }

    #[test]
    fn paley_witness_passes() {
        assert_eq!(run_args(&["paley", "--q", "5"]), 0);
        assert_eq!(run_args(&["paley", "--q", "5", "--json"]), 0);
        // 6 is not a prime power.
        assert_eq!(run_args(&["paley", "--q", "6"]), 2);
    }

    #[test]
    fn check_distinguishes_pass_and_fail() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("c5.txt");
        fs::write(
            &good,
            "0 1 0 0 1\n1 0 1 0 0\n0 1 0 1 0\n0 0 1 0 1\n1 0 0 1 0\n",
        )
        .unwrap();
        assert_eq!(run_args(&["check", "--graph", good.to_str().unwrap(), "--r", "1", "--s", "1"]), 0);

        // K_4 has edges with two common neighbors, so it contains B_1.
        let bad = dir.path().join("k4.txt");
        fs::write(&bad, "0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n").unwrap();
        assert_eq!(run_args(&["check", "--graph", bad.to_str().unwrap(), "--r", "1", "--s", "3"]), 1);

        // graph6 input takes the single-line path.
        let g6 = dir.path().join("c5.g6");
        fs::write(&g6, "DLo\n").unwrap();
        assert_eq!(run_args(&["check", "--graph", g6.to_str().unwrap(), "--r", "1", "--s", "1"]), 0);
    }

    #[test]
    fn spec_check_reads_a_spec_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.txt");
        fs::write(&path, "# two pentagon blocks, Paley-type connections\n5; D11={1,4}; D12={1,4}\n").unwrap();
        assert_eq!(
            run_args(&["spec-check", "--spec", path.to_str().unwrap(), "--r", "2", "--s", "3"]),
            0
        );
        assert_eq!(
            run_args(&["spec-check", "--spec", path.to_str().unwrap(), "--r", "1", "--s", "1"]),
            1
        );
    }

    #[test]
    fn encoders_write_deterministic_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.cnf");
        let b = dir.path().join("b.cnf");
        for out in [&a, &b] {
            assert_eq!(
                run_args(&[
                    "encode-sat", "--n", "6", "--r", "1", "--s", "2", "--symmetry", "--out",
                    out.to_str().unwrap(),
                ]),
                0
            );
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        assert_eq!(
            fs::read(dir.path().join("a.cnf.vars")).unwrap(),
            fs::read(dir.path().join("b.cnf.vars")).unwrap()
        );

        let lp_a = dir.path().join("a.lp");
        let lp_b = dir.path().join("b.lp");
        for out in [&lp_a, &lp_b] {
            assert_eq!(
                run_args(&[
                    "encode-ip", "--m", "6", "--r", "2", "--s", "2", "--complement-ansatz",
                    "--pin", "1,2", "--out", out.to_str().unwrap(),
                ]),
                0
            );
        }
        assert_eq!(fs::read(&lp_a).unwrap(), fs::read(&lp_b).unwrap());

        // Out-of-range pins are usage errors.
        assert_eq!(
            run_args(&[
                "encode-ip", "--m", "6", "--r", "2", "--s", "2", "--pin", "6", "--out",
                dir.path().join("x.lp").to_str().unwrap(),
            ]),
            2
        );
    }

    #[test]
    fn enumerate_reports_counts() {
        assert_eq!(run_args(&["enumerate", "--n", "5", "--r", "1", "--s", "1", "--list"]), 0);
        assert_eq!(run_args(&["enumerate", "--n", "6", "--r", "1", "--s", "2", "--json"]), 0);
    }

    #[test]
    fn bounds_subcommands_run() {
        assert_eq!(run_args(&["bounds", "show", "6", "8"]), 0);
        assert_eq!(run_args(&["bounds", "show", "6", "8", "--json"]), 0);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reg.jsonl");
        let reg = Registry::from_records(bundled_bounds().unwrap());
        reg.save(&path).unwrap();
        assert_eq!(
            run_args(&["bounds", "show", "5", "7", "--registry", path.to_str().unwrap()]),
            0
        );
        assert_eq!(run_args(&["bounds", "show", "5", "7", "--registry", "/no/such"]), 2);
    }

    #[test]
    fn verify_appendix_passes() {
        assert_eq!(run_args(&["verify-appendix"]), 0);
    }
}
