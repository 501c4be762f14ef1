//! CNF encodings of the two-sided book-avoidance question, DIMACS
//! emission, and model checking.
//!
//! Two encodings are provided. The naive one has a clause per embedded
//! book: for every edge slot and every choice of page vertices, either
//! some book edge is absent or some co-book pair is adjacent. The compact
//! one introduces a triangle indicator `y_ijk` and a co-triangle
//! indicator `y'_ijk` per vertex triple via one-directional clauses, then
//! bounds each edge slot to at most `r − 1` triangles and at most `s − 1`
//! co-triangles with tree counter constraints. A graph avoiding `B_r`
//! whose complement avoids `B_s` extends to a model by setting the
//! indicators exactly and evaluating the counters bottom-up; conversely
//! any model's edge variables describe such a graph, so both formulas are
//! satisfiable exactly when an avoiding graph exists.

use std::fmt;
use std::io::{self, Write};

use crate::graph::{BookParams, Graph};

/// Vertex cap for the naive encoding; clause counts explode past it.
pub const NAIVE_MAX_VERTICES: usize = 12;

/// Vertex cap for the indicator encoding.
pub const ENCODE_MAX_VERTICES: usize = 128;

// ============================================================================
// Errors
// ============================================================================

/// Failure modes of encoding and model handling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatError {
    /// Naive encoding refused; carries the clause-count estimate that
    /// triggered the refusal.
    TooCostly { n: usize, estimated_clauses: u128 },
    /// Indicator encoding refused above [`ENCODE_MAX_VERTICES`].
    TooManyVertices { n: usize },
    /// Graph order does not match the variable map.
    WrongVertexCount { expected: usize, got: usize },
    /// Assignment length does not cover the variable range.
    IncompleteAssignment { expected: usize, got: usize },
}

impl fmt::Display for SatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatError::TooCostly { n, estimated_clauses } => write!(
                f,
                "naive encoding for n={n} refused: about {estimated_clauses} clauses \
                 (cap is n={NAIVE_MAX_VERTICES})"
            ),
            SatError::TooManyVertices { n } => {
                write!(f, "n={n} exceeds the encoding cap {ENCODE_MAX_VERTICES}")
            }
            SatError::WrongVertexCount { expected, got } => {
                write!(f, "graph has {got} vertices, the variable map covers {expected}")
            }
            SatError::IncompleteAssignment { expected, got } => {
                write!(f, "assignment covers {got} variables, the formula has {expected}")
            }
        }
    }
}

impl std::error::Error for SatError {}

// ============================================================================
// Formula and variable map
// ============================================================================

/// A CNF formula over 1-based variables with signed integer literals.
///
/// Invariants: literals are nonzero with absolute value at most
/// `num_vars`, and no clause contains both a literal and its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    fn rep_ok(&self) -> bool {
        self.clauses.iter().all(|cl| {
            cl.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= self.num_vars)
                && cl.iter().all(|&l| !cl.contains(&-l))
        })
    }
}

/// Semantics of one auxiliary variable, closed over base literals so a
/// graph assignment can evaluate it directly.
#[derive(Debug, Clone)]
enum AuxSemantics {
    /// True when at least `threshold` of the literals hold.
    CountAtLeast { literals: Vec<i32>, threshold: usize },
    /// True when every pair holds equal values.
    PrefixEqual { pairs: Vec<(i32, i32)> },
}

/// Dense 1-based variable numbering: first the `C(n,2)` edge variables in
/// lexicographic pair order, then `C(n,3)` triangle indicators and
/// `C(n,3)` co-triangle indicators in lexicographic triple order, then
/// auxiliary variables in emission order.
#[derive(Debug, Clone)]
pub struct VarMap {
    n: usize,
    aux: Vec<AuxSemantics>,
}

impl VarMap {
    pub fn new(n: usize) -> VarMap {
        VarMap { n, aux: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge variable for the unordered pair `{i, j}`.
    ///
    /// # Panics
    ///
    /// Panics when the vertices coincide or fall outside the graph.
    pub fn x_var(&self, i: usize, j: usize) -> i32 {
        assert!(i != j && i < self.n && j < self.n, "bad pair ({i},{j})");
        let (i, j) = (i.min(j), i.max(j));
        (1 + i * (2 * self.n - i - 1) / 2 + (j - i - 1)) as i32
    }

    /// Triangle indicator for the unordered triple `{i, j, k}`.
    ///
    /// # Panics
    ///
    /// Panics on repeated or out-of-range vertices.
    pub fn y_var(&self, i: usize, j: usize, k: usize) -> i32 {
        (pairs(self.n) + 1 + self.triple_rank(i, j, k)) as i32
    }

    /// Co-triangle indicator for the unordered triple `{i, j, k}`.
    ///
    /// # Panics
    ///
    /// Panics on repeated or out-of-range vertices.
    pub fn yp_var(&self, i: usize, j: usize, k: usize) -> i32 {
        (pairs(self.n) + triples(self.n) + 1 + self.triple_rank(i, j, k)) as i32
    }

    fn triple_rank(&self, i: usize, j: usize, k: usize) -> usize {
        let mut v = [i, j, k];
        v.sort_unstable();
        let [i, j, k] = v;
        assert!(i < j && j < k && k < self.n, "bad triple ({i},{j},{k})");
        let n = self.n;
        let before_i: usize = (0..i).map(|a| (n - 1 - a) * (n - 2 - a) / 2).sum();
        let before_j: usize = (i + 1..j).map(|b| n - 1 - b).sum();
        before_i + before_j + (k - j - 1)
    }

    /// Edge, triangle, and co-triangle variables together.
    pub fn num_base_vars(&self) -> usize {
        pairs(self.n) + 2 * triples(self.n)
    }

    /// Base variables plus recorded auxiliaries.
    pub fn num_vars(&self) -> usize {
        self.num_base_vars() + self.aux.len()
    }
}

fn pairs(n: usize) -> usize {
    n * (n - 1) / 2
}

fn triples(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    out
}

// ============================================================================
// Naive encoding
// ============================================================================

/// One clause per embedded book over the edge variables alone: for each
/// pair and each page set, either a book edge is missing (all-negative
/// clause) or a co-book pair is present (all-positive clause). Satisfiable
/// exactly when a graph avoiding `B_r` with complement avoiding `B_s`
/// exists on `n` vertices.
///
/// Clause order: all book clauses in (pair, page-set) lexicographic
/// order, then all co-book clauses likewise.
///
/// # Errors
///
/// `TooCostly` above [`NAIVE_MAX_VERTICES`], carrying the clause-count
/// estimate.
pub fn encode_naive(n: usize, p: BookParams) -> Result<CnfFormula, SatError> {
    if n > NAIVE_MAX_VERTICES {
        let est = binom(n, 2)
            .saturating_mul(binom(n.saturating_sub(2), p.r).saturating_add(binom(
                n.saturating_sub(2),
                p.s,
            )));
        return Err(SatError::TooCostly { n, estimated_clauses: est });
    }
    let vm = VarMap::new(n);
    let mut clauses = Vec::new();
    for (pages, sign) in [(p.r, -1i32), (p.s, 1i32)] {
        for i in 0..n {
            for j in (i + 1)..n {
                let others: Vec<usize> = (0..n).filter(|&w| w != i && w != j).collect();
                for_each_combination(others.len(), pages, &mut |picked| {
                    let mut clause = vec![sign * vm.x_var(i, j)];
                    for &idx in picked {
                        let w = others[idx];
                        clause.push(sign * vm.x_var(i, w));
                        clause.push(sign * vm.x_var(j, w));
                    }
                    clauses.push(clause);
                });
            }
        }
    }
    let f = CnfFormula { num_vars: pairs(n), clauses };
    debug_assert!(f.rep_ok());
    Ok(f)
}

/// Calls `visit` with every `k`-subset of `0..len` in lexicographic order.
fn for_each_combination(len: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    fn step(
        start: usize,
        len: usize,
        k: usize,
        picked: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if picked.len() == k {
            visit(picked);
            return;
        }
        for i in start..len {
            picked.push(i);
            step(i + 1, len, k, picked, visit);
            picked.pop();
        }
    }
    step(0, len, k, &mut Vec::new(), visit);
}

// ============================================================================
// Indicator encoding
// ============================================================================

/// Switches for the indicator encoding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    pub symmetry_breaking: bool,
}

/// The indicator encoding: per triple the two one-directional clauses
/// `(¬x_ij ∨ ¬x_ik ∨ ¬x_jk ∨ y_ijk)` and `(x_ij ∨ x_ik ∨ x_jk ∨ y'_ijk)`,
/// then per pair an at-most-`(r−1)` constraint over its triangle
/// indicators and an at-most-`(s−1)` constraint over its co-triangle
/// indicators, then optional symmetry breaking. A constraint whose bound
/// reaches the family size is vacuous and emits nothing.
///
/// Clause order: Tseitin clauses in triple order (book then co-book per
/// triple), then both cardinality blocks per pair in pair order, then
/// symmetry blocks per adjacent transposition.
///
/// # Errors
///
/// `TooManyVertices` above [`ENCODE_MAX_VERTICES`].
pub fn encode_books(
    n: usize,
    p: BookParams,
    opts: EncodeOptions,
) -> Result<(CnfFormula, VarMap), SatError> {
    if n > ENCODE_MAX_VERTICES {
        return Err(SatError::TooManyVertices { n });
    }
    let mut vm = VarMap::new(n);
    let mut clauses = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (xij, xik, xjk) = (vm.x_var(i, j), vm.x_var(i, k), vm.x_var(j, k));
                clauses.push(vec![-xij, -xik, -xjk, vm.y_var(i, j, k)]);
                clauses.push(vec![xij, xik, xjk, vm.yp_var(i, j, k)]);
            }
        }
    }
    let mut next = (vm.num_base_vars() + 1) as i32;
    for i in 0..n {
        for j in (i + 1)..n {
            for (bound, co) in [(p.r - 1, false), (p.s - 1, true)] {
                let lits: Vec<i32> = (0..n)
                    .filter(|&k| k != i && k != j)
                    .map(|k| if co { vm.yp_var(i, j, k) } else { vm.y_var(i, j, k) })
                    .collect();
                at_most_tree(&lits, bound, &mut next, &mut clauses, &mut |sem| {
                    vm.aux.push(sem)
                });
            }
        }
    }
    if opts.symmetry_breaking {
        transposition_lex_clauses(n, &mut next, &mut clauses, &mut |sem| vm.aux.push(sem));
    }
    let f = CnfFormula { num_vars: (next - 1) as usize, clauses };
    debug_assert_eq!(f.num_vars, vm.num_vars());
    debug_assert!(f.rep_ok());
    Ok((f, vm))
}

// ============================================================================
// Cardinality constraints
// ============================================================================

/// Tree counter constraint allowing at most `k` of the literals to hold.
/// Fresh variables start at `next_var`; the return value is the clause
/// list and the number of variables consumed.
///
/// `k = 0` degenerates to unit clauses; `k` at or above the literal count
/// is vacuous and emits nothing. Each internal tree node carries unary
/// counters for its subtree truncated at `k + 1`; the root's overflow
/// counter is forced off. Any assignment with at most `k` true literals
/// extends to the counters by evaluating each as "at least this many true
/// below", and none with more than `k` does.
pub fn at_most_k(literals: &[i32], k: usize, next_var: i32) -> (Vec<Vec<i32>>, usize) {
    let mut clauses = Vec::new();
    let mut next = next_var;
    at_most_tree(literals, k, &mut next, &mut clauses, &mut |_| {});
    (clauses, (next - next_var) as usize)
}

fn at_most_tree(
    literals: &[i32],
    k: usize,
    next: &mut i32,
    clauses: &mut Vec<Vec<i32>>,
    record: &mut impl FnMut(AuxSemantics),
) {
    if literals.is_empty() || k >= literals.len() {
        return;
    }
    if k == 0 {
        for &l in literals {
            clauses.push(vec![-l]);
        }
        return;
    }
    let outs = totalizer_node(literals, k, next, clauses, record);
    // The counter for k+1 true literals exists whenever the subtree holds
    // more than k literals, which the vacuity check above guarantees.
    clauses.push(vec![-outs[k]]);
}

/// Emits counters for one subtree and returns its output variables;
/// `outs[t]` means "at least t+1 literals below are true".
fn totalizer_node(
    lits: &[i32],
    k: usize,
    next: &mut i32,
    clauses: &mut Vec<Vec<i32>>,
    record: &mut impl FnMut(AuxSemantics),
) -> Vec<i32> {
    if lits.len() == 1 {
        return vec![lits[0]];
    }
    let mid = lits.len() / 2;
    let left = totalizer_node(&lits[..mid], k, next, clauses, record);
    let right = totalizer_node(&lits[mid..], k, next, clauses, record);
    let width = lits.len().min(k + 1);
    let outs: Vec<i32> = (0..width)
        .map(|t| {
            let v = *next;
            *next += 1;
            record(AuxSemantics::CountAtLeast { literals: lits.to_vec(), threshold: t + 1 });
            v
        })
        .collect();
    for a in 0..=left.len() {
        for b in 0..=right.len() {
            if a + b == 0 {
                continue;
            }
            let sigma = (a + b).min(k + 1);
            let mut clause = Vec::with_capacity(3);
            if a > 0 {
                clause.push(-left[a - 1]);
            }
            if b > 0 {
                clause.push(-right[b - 1]);
            }
            clause.push(outs[sigma - 1]);
            clauses.push(clause);
        }
    }
    outs
}

// ============================================================================
// Symmetry breaking
// ============================================================================

/// Lexicographic constraints against every adjacent label transposition:
/// the upper-triangle adjacency word, restricted to the positions the
/// transposition moves, must not exceed its swapped image. Fresh
/// equality-prefix variables start at `next_var`; returns the clauses and
/// the variable count consumed.
///
/// Every graph keeps at least one satisfying labeling: a labeling whose
/// word is minimal over all relabelings beats each transposition image.
pub fn symmetry_breaking_clauses(
    n: usize,
    vm: &VarMap,
    next_var: i32,
) -> (Vec<Vec<i32>>, usize) {
    assert_eq!(vm.n(), n, "variable map covers a different vertex count");
    let mut clauses = Vec::new();
    let mut next = next_var;
    transposition_lex_clauses(n, &mut next, &mut clauses, &mut |_| {});
    (clauses, (next - next_var) as usize)
}

fn transposition_lex_clauses(
    n: usize,
    next: &mut i32,
    clauses: &mut Vec<Vec<i32>>,
    record: &mut impl FnMut(AuxSemantics),
) {
    let vm = VarMap::new(n);
    for t in 0..n.saturating_sub(1) {
        // Positions moved by swapping labels t and t+1, as (value, image)
        // variable pairs in word order. The pair {t, t+1} itself is fixed.
        let mut moved: Vec<(i32, i32)> = Vec::with_capacity(n.saturating_sub(2));
        for a in 0..t {
            moved.push((vm.x_var(a, t), vm.x_var(a, t + 1)));
        }
        for b in (t + 2)..n {
            moved.push((vm.x_var(t, b), vm.x_var(t + 1, b)));
        }
        let total = moved.len();
        let mut prev_eq: Option<i32> = None;
        for (step, &(u, v)) in moved.iter().enumerate() {
            let mut lex = Vec::with_capacity(3);
            if let Some(e) = prev_eq {
                lex.push(-e);
            }
            lex.push(-u);
            lex.push(v);
            clauses.push(lex);
            if step + 1 < total {
                let e = *next;
                *next += 1;
                record(AuxSemantics::PrefixEqual { pairs: moved[..=step].to_vec() });
                let mut both = vec![u, v, e];
                let mut neither = vec![-u, -v, e];
                if let Some(prev) = prev_eq {
                    both.insert(0, -prev);
                    neither.insert(0, -prev);
                }
                clauses.push(both);
                clauses.push(neither);
                prev_eq = Some(e);
            }
        }
    }
}

// ============================================================================
// DIMACS, models, assignments
// ============================================================================

/// Writes the formula in DIMACS CNF form with a deterministic layout:
/// `p cnf <vars> <clauses>` then one clause per line, zero-terminated.
///
/// # Errors
///
/// Propagates sink I/O errors.
pub fn write_dimacs(f: &CnfFormula, sink: &mut impl Write) -> io::Result<()> {
    writeln!(sink, "p cnf {} {}", f.num_vars, f.clauses.len())?;
    for clause in &f.clauses {
        for &lit in clause {
            write!(sink, "{lit} ")?;
        }
        writeln!(sink, "0")?;
    }
    Ok(())
}

/// DIMACS text of the formula.
pub fn dimacs_string(f: &CnfFormula) -> String {
    let mut buf = Vec::new();
    write_dimacs(f, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

/// Writes the sidecar variable map: `x i j <var>` per pair, then
/// `y i j k <var>` and `yp i j k <var>` per triple, vertices 0-based.
///
/// # Errors
///
/// Propagates sink I/O errors.
pub fn write_var_map(vm: &VarMap, sink: &mut impl Write) -> io::Result<()> {
    let n = vm.n();
    for i in 0..n {
        for j in (i + 1)..n {
            writeln!(sink, "x {i} {j} {}", vm.x_var(i, j))?;
        }
    }
    for tag in ["y", "yp"] {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let v = if tag == "y" { vm.y_var(i, j, k) } else { vm.yp_var(i, j, k) };
                    writeln!(sink, "{tag} {i} {j} {k} {v}")?;
                }
            }
        }
    }
    Ok(())
}

/// True when every clause holds a true literal under the assignment,
/// indexed `assignment[v − 1]` for variable `v`.
///
/// # Errors
///
/// `IncompleteAssignment` when the slice does not cover `num_vars`.
pub fn check_model(f: &CnfFormula, assignment: &[bool]) -> Result<bool, SatError> {
    if assignment.len() != f.num_vars {
        return Err(SatError::IncompleteAssignment {
            expected: f.num_vars,
            got: assignment.len(),
        });
    }
    Ok(f
        .clauses
        .iter()
        .all(|clause| clause.iter().any(|&l| lit_true(assignment, l))))
}

fn lit_true(assignment: &[bool], l: i32) -> bool {
    let v = l.unsigned_abs() as usize - 1;
    if l > 0 {
        assignment[v]
    } else {
        !assignment[v]
    }
}

/// The canonical assignment for a graph: edge variables from adjacency,
/// indicators set to exact triangle and co-triangle membership, recorded
/// auxiliaries evaluated from their stored semantics. The result
/// satisfies the indicator encoding without symmetry breaking exactly
/// when the graph avoids both books.
///
/// # Errors
///
/// `WrongVertexCount` when the graph and map disagree.
pub fn graph_to_assignment(g: &Graph, vm: &VarMap) -> Result<Vec<bool>, SatError> {
    let n = vm.n();
    if g.n() != n {
        return Err(SatError::WrongVertexCount { expected: n, got: g.n() });
    }
    let mut a = vec![false; vm.num_vars()];
    for i in 0..n {
        for j in (i + 1)..n {
            a[vm.x_var(i, j) as usize - 1] = g.has_edge(i, j);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (ij, ik, jk) = (g.has_edge(i, j), g.has_edge(i, k), g.has_edge(j, k));
                a[vm.y_var(i, j, k) as usize - 1] = ij && ik && jk;
                a[vm.yp_var(i, j, k) as usize - 1] = !ij && !ik && !jk;
            }
        }
    }
    for (idx, sem) in vm.aux.iter().enumerate() {
        a[vm.num_base_vars() + idx] = match sem {
            AuxSemantics::CountAtLeast { literals, threshold } => {
                literals.iter().filter(|&&l| lit_true(&a, l)).count() >= *threshold
            }
            AuxSemantics::PrefixEqual { pairs } => {
                pairs.iter().all(|&(u, v)| lit_true(&a, u) == lit_true(&a, v))
            }
        };
    }
    Ok(a)
}

// ============================================================================
// Tests
// ============================================================================
