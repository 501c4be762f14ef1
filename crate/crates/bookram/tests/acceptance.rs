//! Delivery gate: one test per acceptance criterion. Each test prints a
//! single `criterion N: PASS` line with its headline numbers and asserts
//! its runtime ceiling; tolerances are pinned as constants next to the
//! checks that use them.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use bookram::circulant::BlockCirculantSpec;
use bookram::field::{paley_book_graph, prime_power_split, FiniteField};
use bookram::graph::{BookParams, Graph};
use bookram::ipenc::{
    encode_block_circulant_ip, lp_string, spec_to_assignment, IpModel, IpOptions, Sense,
};
use bookram::satenc::{
    check_model, dimacs_string, encode_books, graph_to_assignment, EncodeOptions,
};
use bookram::search::{canonical_form, enumerate_ramsey_graphs, SearchError};
use bookram::witness::{load_appendix, resolve_reference, verify_bound, WitnessPayload};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ============================================================================
// Shared helpers
// ============================================================================

fn assert_within(start: Instant, limit: Duration, label: &str) -> Duration {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{label} took {:.1}s, over the {:.0}s ceiling",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    elapsed
}

/// Pair count of `n` vertices; edge bit `b` of a mask is the `b`-th pair
/// in row-major upper-triangle order.
fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n).expect("small n");
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(i, j);
            }
            bit += 1;
        }
    }
    g
}

/// Canonical forms of all labeled Ramsey graphs on exactly `n` vertices,
/// found by testing every one of the `2^C(n,2)` graphs.
fn brute_force_classes(n: usize, p: BookParams) -> BTreeSet<String> {
    let mut classes = BTreeSet::new();
    for mask in 0u64..1 << pair_count(n) {
        let g = graph_from_mask(n, mask);
        if g.is_ramsey_graph(p) {
            let c = canonical_form(&g).expect("small n canonizes");
            classes.insert(c.into_string());
        }
    }
    classes
}

// ============================================================================
// Criterion 1: residue-difference closed forms
// ============================================================================

const CLOSED_FORM_ORDERS: [usize; 16] =
    [5, 9, 13, 17, 25, 29, 37, 41, 49, 53, 61, 73, 81, 89, 97, 101];

#[test]
fn criterion_1_residue_difference_closed_forms() {
    let start = Instant::now();
    for q in CLOSED_FORM_ORDERS {
        let (p, k) = prime_power_split(q).expect("orders are prime powers");
        let field = FiniteField::new(p, k).expect("parameters are valid");
        let (squares, non_squares) = field.residues().expect("odd order");
        let mut is_square = vec![false; q];
        for &e in &squares {
            is_square[e] = true;
        }

        // Independent tally, straight from the definition.
        let tally = |x: &[usize], y: &[usize]| {
            let mut counts = vec![0usize; q];
            for &a in x {
                for &b in y {
                    counts[field.sub(a, b)] += 1;
                }
            }
            counts
        };
        let qq = tally(&squares, &squares);
        let nn = tally(&non_squares, &non_squares);
        let qn = tally(&squares, &non_squares);

        // Closed forms: (q−1)/4 − 1 when the difference lies in the same
        // class as the pair, (q−1)/4 otherwise; mixed pairs always (q−1)/4.
        let quarter = (q - 1) / 4;
        for d in 1..q {
            let (want_qq, want_nn) =
                if is_square[d] { (quarter - 1, quarter) } else { (quarter, quarter - 1) };
            assert_eq!(qq[d], want_qq, "q={q} d={d} square/square");
            assert_eq!(nn[d], want_nn, "q={q} d={d} non-square/non-square");
            assert_eq!(qn[d], quarter, "q={q} d={d} mixed");
        }
        assert_eq!(qn[0], 0, "q={q} mixed at zero");

        // The library's published counts agree with the tally.
        let counts = field.residue_difference_counts().expect("q ≡ 1 mod 4");
        assert_eq!(counts.qq, qq, "q={q} library qq");
        assert_eq!(counts.nn, nn, "q={q} library nn");
        assert_eq!(counts.qn, qn, "q={q} library qn");
    }
    let elapsed = assert_within(start, Duration::from_secs(10), "criterion 1");
    println!(
        "criterion 1: PASS ({} field orders, 0 tolerance, {:.2}s)",
        CLOSED_FORM_ORDERS.len(),
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 2: Paley-type graphs certify their lower bounds
// ============================================================================

#[test]
fn criterion_2_paley_graphs_avoid_both_books() {
    let start = Instant::now();
    let orders = [5usize, 9, 13, 17, 25, 29, 37, 41];
    for q in orders {
        let n = (q + 1) / 2;
        let g = paley_book_graph(q).expect("orders are valid");
        assert_eq!(g.n(), 2 * q, "q={q} vertex count");

        // Explicit-graph oracle: adjacency-level page maxima on the graph
        // and its complement, no difference-count shortcut.
        let pages = g.max_book_pages();
        let co_pages = g.complement().max_book_pages();
        assert!(pages <= n - 2, "q={q}: page count {pages} admits B_{}", n - 1);
        assert!(co_pages <= n - 1, "q={q}: co-page count {co_pages} admits B_{n}");
        assert!(g.is_ramsey_graph(BookParams::new(n - 1, n)), "q={q} oracle verdict");
    }
    let elapsed = assert_within(start, Duration::from_secs(30), "criterion 2");
    println!(
        "criterion 2: PASS ({} orders up to q=41, witnesses on up to 82 vertices, {:.2}s)",
        orders.len(),
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 3: common-neighbor formula equals the expanded-graph oracle
// ============================================================================

#[test]
fn criterion_3_formula_matches_oracle_on_random_specs() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b00c_4a43);
    let mut pairs_checked = 0usize;
    for _ in 0..1000 {
        let m = rng.gen_range(1..=20);
        let diagonal = |rng: &mut ChaCha8Rng| {
            let mut set = BTreeSet::new();
            for i in 1..=m / 2 {
                if rng.gen_bool(0.5) {
                    set.insert(i);
                    set.insert(m - i);
                }
            }
            set.into_iter().collect::<Vec<_>>()
        };
        let d11 = diagonal(&mut rng);
        let d22 = diagonal(&mut rng);
        let d12 = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
        let spec = BlockCirculantSpec::new(m, d11, d12, d22).expect("construction is valid");

        let g = spec.expand();
        for u in 0..2 * m {
            for v in (u + 1)..2 * m {
                assert_eq!(
                    spec.common_neighbors_formula(u, v),
                    g.common_neighbors(u, v),
                    "m={m} u={u} v={v} D11={:?} D12={:?} D22={:?}",
                    spec.d11(),
                    spec.d12(),
                    spec.d22()
                );
                pairs_checked += 1;
            }
        }
    }
    let elapsed = assert_within(start, Duration::from_secs(60), "criterion 3");
    println!(
        "criterion 3: PASS (1000 random specs, {pairs_checked} vertex pairs, 0 mismatches, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 4: every bundled witness row verifies its claimed bound
// ============================================================================

#[test]
fn criterion_4_appendix_rows_verify_their_bounds() {
    let start = Instant::now();
    let entries = load_appendix().expect("bundled tables parse");
    let mut rows = 0;
    let mut matrices = 0;
    for entry in &entries {
        match entry.payload() {
            WitnessPayload::Spec(_) => rows += 1,
            WitnessPayload::Matrix(_) => matrices += 1,
        }
        let report = verify_bound(entry);
        assert!(report.vertex_count_ok, "{}: vertex count off", entry.claim());
        assert!(report.is_ramsey, "{}: {}", entry.claim(), report.verdict_line());
        assert!(report.passed, "{}: {}", entry.claim(), report.verdict_line());
    }
    assert_eq!((rows, matrices), (25, 3), "bundled table shape");
    let elapsed = assert_within(start, Duration::from_secs(60), "criterion 4");
    println!(
        "criterion 4: PASS ({rows} difference-set rows + {matrices} matrices, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 5: small enumeration rows reproduce exactly
// ============================================================================

#[test]
fn criterion_5_small_enumeration_rows_reproduce() {
    let start = Instant::now();
    let overall = Duration::from_secs(30 * 60);
    // (r, s, n, expected class count); the last row is the stretch row.
    let rows = [
        (1, 1, 5, 1),
        (1, 1, 6, 0),
        (1, 2, 6, 4),
        (1, 3, 8, 8),
        (2, 2, 9, 1),
        (2, 3, 10, 4),
        (3, 3, 13, 1),
    ];
    let mut done = 0;
    let mut stretch_skipped = false;
    for (r, s, n, expected) in rows {
        let remaining = overall.saturating_sub(start.elapsed());
        match enumerate_ramsey_graphs(n, BookParams::new(r, s), Some(remaining)) {
            Ok(result) => {
                assert_eq!(
                    result.graphs.len(),
                    expected,
                    "({r},{s}) at n={n}: wrong class count"
                );
                done += 1;
            }
            Err(SearchError::BudgetExhausted { .. }) if (r, s) == (3, 3) => {
                // The one row allowed to overrun; everything else is
                // mandatory.
                stretch_skipped = true;
            }
            Err(e) => panic!("({r},{s}) at n={n}: {e}"),
        }
    }
    let elapsed = assert_within(start, overall, "criterion 5");
    let note = if stretch_skipped { ", stretch row (3,3) skipped" } else { "" };
    println!(
        "criterion 5: PASS ({done}/7 rows exact{note}, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 6: orderly generation equals labeled brute force
// ============================================================================

#[test]
fn criterion_6_orderly_counts_match_labeled_brute_force() {
    let start = Instant::now();
    let mut combos = 0;
    for n in 1..=6 {
        for (r, s) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let p = BookParams::new(r, s);
            let brute = brute_force_classes(n, p);
            let orderly = enumerate_ramsey_graphs(n, p, None).expect("small n");
            let generated: BTreeSet<String> =
                orderly.graphs.iter().map(|c| c.as_str().to_owned()).collect();
            assert_eq!(generated.len(), orderly.graphs.len(), "n={n} ({r},{s}): duplicates");
            assert_eq!(generated, brute, "n={n} ({r},{s}): class sets differ");
            combos += 1;
        }
    }
    let elapsed = assert_within(start, Duration::from_secs(300), "criterion 6");
    println!(
        "criterion 6: PASS ({combos} (n,r,s) combinations, canonical class sets equal, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 7: the clause system tracks graph search at desk scale
// ============================================================================

#[test]
fn criterion_7_sat_encoding_matches_graph_search() {
    let start = Instant::now();
    let plain = EncodeOptions::default();

    // (a) Exhaustive assignment search on the triangle instance flips from
    // satisfiable to unsatisfiable exactly where the Ramsey number sits.
    for (n, want_sat) in [(5usize, true), (6usize, false)] {
        let p = BookParams::new(1, 1);
        let (f, vm) = encode_books(n, p, plain).expect("small n");
        let mut found_model = false;
        let mut found_graph = false;
        for mask in 0u64..1 << pair_count(n) {
            let g = graph_from_mask(n, mask);
            let a = graph_to_assignment(&g, &vm).expect("matching vertex count");
            if check_model(&f, &a).expect("complete assignment") {
                found_model = true;
            }
            if g.is_ramsey_graph(p) {
                found_graph = true;
            }
        }
        assert_eq!(found_model, want_sat, "n={n}: satisfiability");
        assert_eq!(found_graph, want_sat, "n={n}: graph existence");
    }

    // (b) The 9-vertex quadratic-residue graph model-checks at (2,2).
    let field = FiniteField::new(3, 2).expect("order nine");
    let (squares, _) = field.residues().expect("odd order");
    let mut p9 = Graph::empty(9).expect("nine vertices");
    for u in 0..9 {
        for v in (u + 1)..9 {
            if squares.contains(&field.sub(u, v)) {
                p9.add_edge(u, v);
            }
        }
    }
    let p22 = BookParams::new(2, 2);
    assert!(p9.is_ramsey_graph(p22), "quadratic-residue graph avoids both books");
    let (f9, vm9) = encode_books(9, p22, plain).expect("nine vertices");
    let a9 = graph_to_assignment(&p9, &vm9).expect("matching vertex count");
    assert!(check_model(&f9, &a9).expect("complete assignment"), "model check at (2,2)");

    // (c) Symmetry breaking keeps at least one labeling per isomorphism
    // class and never admits a non-model, so satisfiability is preserved.
    let with_sym = EncodeOptions { symmetry_breaking: true };
    for n in 2..=6 {
        for (r, s) in [(1, 1), (1, 2), (2, 2)] {
            let p = BookParams::new(r, s);
            let (base, vm_base) = encode_books(n, p, plain).expect("small n");
            let (sym, vm_sym) = encode_books(n, p, with_sym).expect("small n");
            let mut class_models: HashMap<String, (bool, bool)> = HashMap::new();
            for mask in 0u64..1 << pair_count(n) {
                let g = graph_from_mask(n, mask);
                let ab = graph_to_assignment(&g, &vm_base).expect("vertex count");
                let base_ok = check_model(&base, &ab).expect("complete");
                let asym = graph_to_assignment(&g, &vm_sym).expect("vertex count");
                let sym_ok = check_model(&sym, &asym).expect("complete");
                assert!(!sym_ok || base_ok, "n={n} ({r},{s}): symmetry admitted a non-model");
                if base_ok {
                    let c = canonical_form(&g).expect("small n").into_string();
                    let e = class_models.entry(c).or_insert((false, false));
                    e.0 = true;
                    e.1 |= sym_ok;
                }
            }
            for (class, (_, survived)) in &class_models {
                assert!(survived, "n={n} ({r},{s}): class {class} lost every labeling");
            }
        }
    }

    let elapsed = assert_within(start, Duration::from_secs(300), "criterion 7");
    println!(
        "criterion 7: PASS (sat/unsat flip at n=5/6, 9-vertex model check, symmetry preserves all classes to n=6, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 8: the linear model tracks the difference-set conditions
// ============================================================================

/// Rows resolved to variable indices for fast repeated evaluation.
struct ResolvedModel {
    names: Vec<String>,
    rows: Vec<(Vec<(i64, usize)>, Sense, i64)>,
}

impl ResolvedModel {
    fn new(model: &IpModel) -> ResolvedModel {
        let names: Vec<String> = model.variables().to_vec();
        let index: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let rows = model
            .constraints()
            .iter()
            .map(|c| {
                let terms =
                    c.terms.iter().map(|(k, v)| (*k, index[v.as_str()])).collect::<Vec<_>>();
                (terms, c.sense, c.rhs)
            })
            .collect();
        ResolvedModel { names, rows }
    }

    fn feasible(&self, assignment: &HashMap<String, bool>) -> bool {
        let bits: Vec<bool> = self.names.iter().map(|v| assignment[v]).collect();
        self.rows.iter().all(|(terms, sense, rhs)| {
            let lhs: i64 = terms.iter().map(|&(k, i)| k * i64::from(bits[i])).sum();
            match sense {
                Sense::Le => lhs <= *rhs,
                Sense::Ge => lhs >= *rhs,
                Sense::Eq => lhs == *rhs,
            }
        })
    }
}

/// All negation-closed subsets of `Z_m \ {0}`.
fn diagonal_sets(m: usize) -> Vec<Vec<usize>> {
    let half: Vec<usize> = (1..=m / 2).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << half.len() {
        let mut set = BTreeSet::new();
        for (b, &i) in half.iter().enumerate() {
            if mask >> b & 1 == 1 {
                set.insert(i);
                set.insert(m - i);
            }
        }
        out.push(set.into_iter().collect());
    }
    out
}

#[test]
fn criterion_8_ip_feasibility_matches_spec_search() {
    let start = Instant::now();
    let ansatz = IpOptions { complement_ansatz: true, ..IpOptions::default() };

    // (a) The bundled R(B_5,B_7) witness satisfies the m=12 model.
    let entries = load_appendix().expect("bundled tables parse");
    let witness = entries
        .iter()
        .find(|e| e.params() == BookParams::new(5, 7))
        .expect("the (5,7) row is bundled");
    let WitnessPayload::Spec(spec) = witness.payload() else {
        panic!("the (5,7) row is a difference-set row");
    };
    assert_eq!(spec.m(), 12);
    let model = encode_block_circulant_ip(12, witness.params(), &ansatz);
    let a = spec_to_assignment(spec, &ansatz);
    assert!(model.satisfied_by(&a).expect("assignment is complete"), "witness infeasible");

    // (b) Exhaustive search over every valid spec at m ≤ 6, r,s ≤ 3: the
    // model is satisfied exactly by the specs that pass the conditions,
    // so feasibility of the program matches feasibility of the search.
    let mut points = 0usize;
    for m in 2..=6 {
        let diagonals = diagonal_sets(m);
        for r in 1..=3 {
            for s in 1..=3 {
                let p = BookParams::new(r, s);
                for ansatz_on in [false, true] {
                    let opts = IpOptions {
                        complement_ansatz: ansatz_on,
                        ..IpOptions::default()
                    };
                    let resolved = ResolvedModel::new(&encode_block_circulant_ip(m, p, &opts));
                    let mut any_feasible = false;
                    let mut any_passing = false;
                    let d22_choices: &[Vec<usize>] =
                        if ansatz_on { &diagonals[..1] } else { &diagonals };
                    for d11 in &diagonals {
                        for d12_mask in 0u32..1 << m {
                            let d12: Vec<usize> =
                                (0..m).filter(|&i| d12_mask >> i & 1 == 1).collect();
                            for d22 in d22_choices {
                                let spec = if ansatz_on {
                                    BlockCirculantSpec::with_complement_d22(
                                        m,
                                        d11.clone(),
                                        d12.clone(),
                                    )
                                } else {
                                    BlockCirculantSpec::new(
                                        m,
                                        d11.clone(),
                                        d12.clone(),
                                        d22.clone(),
                                    )
                                }
                                .expect("generated sets are valid");
                                let feasible =
                                    resolved.feasible(&spec_to_assignment(&spec, &opts));
                                let passing = spec.check_book_conditions(p).passes();
                                assert_eq!(
                                    feasible, passing,
                                    "m={m} r={r} s={s} ansatz={ansatz_on} spec {spec:?}"
                                );
                                any_feasible |= feasible;
                                any_passing |= passing;
                                points += 1;
                            }
                        }
                    }
                    assert_eq!(
                        any_feasible, any_passing,
                        "m={m} r={r} s={s} ansatz={ansatz_on}: feasibility verdicts differ"
                    );
                }
            }
        }
    }

    let elapsed = assert_within(start, Duration::from_secs(300), "criterion 8");
    println!(
        "criterion 8: PASS (m=12 witness feasible, {points} exhaustive points agree, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

// ============================================================================
// Criterion 9: out-of-reach results get well-formed, stable instances
// ============================================================================

/// DIMACS sanity: header arity matches the body, every literal is a
/// nonzero variable in range, every clause line is zero-terminated.
fn assert_well_formed_dimacs(text: &str) {
    let mut lines = text.lines();
    let header = lines.next().expect("nonempty");
    let fields: Vec<&str> = header.split_whitespace().collect();
    assert_eq!(fields[..2], ["p", "cnf"], "header shape");
    let vars: i64 = fields[2].parse().expect("variable count");
    let clauses: usize = fields[3].parse().expect("clause count");
    let mut seen = 0;
    for line in lines {
        let mut lits: Vec<i64> =
            line.split_whitespace().map(|t| t.parse().expect("literal")).collect();
        assert_eq!(lits.pop(), Some(0), "clause termination");
        assert!(!lits.is_empty(), "empty clause");
        for l in lits {
            assert!(l != 0 && l.abs() <= vars, "literal {l} out of range");
        }
        seen += 1;
    }
    assert_eq!(seen, clauses, "clause count");
}

/// LP sanity: section lines in order and one line per row and variable.
fn assert_well_formed_lp(text: &str, model: &IpModel) {
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "Minimize");
    assert_eq!(lines[2], "Subject To");
    let body = 3 + model.constraints().len();
    assert_eq!(lines[body], "Binary");
    assert_eq!(lines.last(), Some(&"End"));
    assert_eq!(lines.len(), body + model.variables().len() + 2);
}

#[test]
fn criterion_9_out_of_reach_instances_are_stable_and_witnessed() {
    let start = Instant::now();
    let sym = EncodeOptions { symmetry_breaking: true };

    // Refutation-scale CNF instances: the two long upper-bound runs.
    let mut cnf_bytes = Vec::new();
    for (n, r, s) in [(20usize, 3usize, 7usize), (29, 2, 13)] {
        let p = BookParams::new(r, s);
        let (f1, _) = encode_books(n, p, sym).expect("within encoder range");
        let (f2, _) = encode_books(n, p, sym).expect("within encoder range");
        let text = dimacs_string(&f1);
        assert_eq!(text, dimacs_string(&f2), "n={n} ({r},{s}): encoding not byte-stable");
        assert_well_formed_dimacs(&text);
        cnf_bytes.push(text.len());
    }

    // The block-circulant program at the same out-of-reach size.
    let ansatz = IpOptions { complement_ansatz: true, ..IpOptions::default() };
    let model = encode_block_circulant_ip(14, BookParams::new(2, 13), &ansatz);
    let lp = lp_string(&model);
    assert_eq!(lp, lp_string(&model), "LP output not byte-stable");
    assert_well_formed_lp(&lp, &model);

    // Known lower-bound witnesses at those parameters model-check: the
    // complete bipartite witness one vertex below the (2,13) refutation,
    // and the three bundled matrices behind the large enumeration rows.
    let plain = EncodeOptions::default();
    let k1414 = resolve_reference("construction:K_{14,14}").expect("known scheme");
    let (f, vm) = encode_books(28, BookParams::new(2, 13), plain).expect("within range");
    let a = graph_to_assignment(&k1414, &vm).expect("vertex count");
    assert!(check_model(&f, &a).expect("complete"), "K_{{14,14}} fails its instance");

    let entries = load_appendix().expect("bundled tables parse");
    let mut matrices_checked = 0;
    for entry in entries.iter().filter(|e| matches!(e.payload(), WitnessPayload::Matrix(_))) {
        let g = entry.graph();
        let p = entry.params();
        let (f, vm) = encode_books(g.n(), p, plain).expect("within range");
        let a = graph_to_assignment(&g, &vm).expect("vertex count");
        assert!(
            check_model(&f, &a).expect("complete"),
            "{} matrix fails its instance",
            entry.claim()
        );
        matrices_checked += 1;
    }
    assert_eq!(matrices_checked, 3);

    let elapsed = start.elapsed();
    println!(
        "criterion 9: PASS (2 CNF instances of {} and {} bytes, 1 LP, 4 witnesses model-check, {:.2}s)",
        cnf_bytes[0],
        cnf_bytes[1],
        elapsed.as_secs_f64()
    );
}
