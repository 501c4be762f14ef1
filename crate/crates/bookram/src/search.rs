//! Exact canonical forms and isomorph-free enumeration of two-sided
//! book-avoiding graphs.
//!
//! The canonizer runs equitable partition refinement with backtracking over
//! individualized vertices, pruned by discovered automorphisms, and returns
//! the lexicographically least relabeled adjacency encoding. Equality of
//! forms is exactly isomorphism: a form decodes to a relabeling of its
//! source graph, so two graphs sharing a form are isomorphic, and the
//! backtracking minimum is invariant under relabeling.
//!
//! The enumerator grows graphs vertex by vertex. Each accepted graph on
//! `k` vertices is extended by a new vertex `w = k` whose neighborhood is
//! chosen as a bitmask explored in decreasing numeric order, with exact
//! pruning: a branch dies as soon as a settled edge reaches `r` common
//! neighbors or a settled co-edge reaches `s` common co-neighbors in every
//! completion. A child survives only when deleting its canonically last
//! vertex lands back in the parent's isomorphism class; combined with
//! per-parent deduplication this yields exactly one representative per
//! isomorphism class without a global seen-set.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use crate::graph::{BookParams, Graph};

/// Canonical labeling works on single-word adjacency rows.
pub const MAX_CANON_VERTICES: usize = 64;

/// Generator list cap for automorphism pruning; beyond this the search
/// stays correct but prunes less.
const MAX_AUT_GENERATORS: usize = 256;

/// How many search-tree nodes pass between wall-clock checks.
const DEADLINE_STRIDE: u64 = 0xFFF;

// ============================================================================
// Errors
// ============================================================================

/// Failure modes of canonization and enumeration.
#[derive(Debug)]
pub enum SearchError {
    /// Vertex count is zero or above [`MAX_CANON_VERTICES`].
    UnsupportedVertexCount(usize),
    /// The wall-clock budget ran out; carries how far the run got.
    BudgetExhausted { completed_level: usize, graphs_at_level: usize, stats: SearchStats },
    /// No empty level was found at or below the cap.
    Inconclusive { n_cap: usize, count_at_cap: usize },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::UnsupportedVertexCount(n) => {
                write!(f, "vertex count {n} outside 1..={MAX_CANON_VERTICES}")
            }
            SearchError::BudgetExhausted { completed_level, graphs_at_level, .. } => write!(
                f,
                "budget exhausted after completing level {completed_level} \
                 ({graphs_at_level} graphs at that level)"
            ),
            SearchError::Inconclusive { n_cap, count_at_cap } => write!(
                f,
                "every level up to {n_cap} is nonempty ({count_at_cap} graphs at the cap)"
            ),
        }
    }
}

impl std::error::Error for SearchError {}

// ============================================================================
// Canonical forms
// ============================================================================

/// Isomorphism-invariant byte string: equal iff the graphs are isomorphic.
///
/// The text is the graph6 encoding of the canonically relabeled graph for
/// up to 62 vertices; 63 and 64 vertices use a `#`-prefixed row encoding
/// that no graph6 string can collide with.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Canonical form of `g`, invariant under every relabeling.
///
/// # Errors
///
/// `UnsupportedVertexCount` when `g` has more than [`MAX_CANON_VERTICES`]
/// vertices.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, SearchError> {
    if g.n() > MAX_CANON_VERTICES {
        return Err(SearchError::UnsupportedVertexCount(g.n()));
    }
    let (rows, _) = canonize(g);
    Ok(CanonicalForm(encode_canonical(&Graph::from_row_words(g.n(), &rows))))
}

fn encode_canonical(g: &Graph) -> String {
    match g.to_graph6() {
        Ok(text) => text,
        Err(_) => {
            // 63 or 64 vertices: '#' (byte 35) is below the graph6 header
            // range, so the namespaces stay disjoint.
            let mut text = format!("#{}:", g.n());
            for u in 0..g.n() {
                text.push_str(&format!("{:016x}", g.row_word(u)));
            }
            text
        }
    }
}

// ============================================================================
// Canonizer internals
// ============================================================================

struct CanonState {
    n: usize,
    rows: Vec<u64>,
    /// Least relabeled adjacency seen so far, with its labeling (new to old).
    best: Option<(Vec<u64>, Vec<usize>)>,
    /// Discovered automorphisms, old vertex to old vertex.
    auts: Vec<Vec<usize>>,
}

/// Returns the canonical adjacency rows and the labeling (new to old) that
/// produces them.
fn canonize(g: &Graph) -> (Vec<u64>, Vec<usize>) {
    let n = g.n();
    assert!(n >= 1 && n <= MAX_CANON_VERTICES);
    let rows: Vec<u64> = (0..n).map(|u| g.row_word(u)).collect();
    let mut state = CanonState { n, rows, best: None, auts: Vec::new() };
    let mut cells = vec![(0..n).collect::<Vec<usize>>()];
    state.refine(&mut cells);
    state.search(&cells, &mut Vec::new());
    state.best.expect("the search visits at least one leaf")
}

fn cell_mask(cell: &[usize]) -> u64 {
    cell.iter().fold(0u64, |m, &v| m | 1u64 << v)
}

impl CanonState {
    /// Splits cells by neighbor counts into splitter cells until the
    /// partition is equitable. Subcells are ordered by ascending count, so
    /// the outcome depends only on the isomorphism class of the start.
    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        loop {
            let splitters: Vec<u64> = cells.iter().map(|c| cell_mask(c)).collect();
            let mut changed = false;
            for &w in &splitters {
                let mut i = 0;
                while i < cells.len() {
                    if cells[i].len() == 1 {
                        i += 1;
                        continue;
                    }
                    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                    for &v in &cells[i] {
                        groups.entry((self.rows[v] & w).count_ones()).or_default().push(v);
                    }
                    if groups.len() == 1 {
                        i += 1;
                        continue;
                    }
                    let parts: Vec<Vec<usize>> = groups.into_values().collect();
                    let added = parts.len();
                    cells.splice(i..=i, parts);
                    changed = true;
                    i += added;
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn search(&mut self, cells: &[Vec<usize>], individualized: &mut Vec<usize>) {
        if cells.iter().all(|c| c.len() == 1) {
            self.leaf(cells);
            return;
        }
        let min_size =
            cells.iter().map(|c| c.len()).filter(|&l| l > 1).min().expect("non-discrete");
        let target =
            cells.iter().position(|c| c.len() == min_size).expect("minimum came from the list");
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            // An automorphism fixing the individualized prefix and carrying
            // v onto an already-handled candidate maps this subtree onto a
            // handled one leaf for leaf; skipping it loses nothing.
            let pruned = self.auts.iter().any(|a| {
                individualized.iter().all(|&u| a[u] == u) && tried.contains(&a[v])
            });
            if !pruned {
                let mut child: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
                for (i, cell) in cells.iter().enumerate() {
                    if i == target {
                        child.push(vec![v]);
                        child.push(cell.iter().copied().filter(|&x| x != v).collect());
                    } else {
                        child.push(cell.clone());
                    }
                }
                self.refine(&mut child);
                individualized.push(v);
                self.search(&child, individualized);
                individualized.pop();
            }
            tried.push(v);
        }
    }

    fn leaf(&mut self, cells: &[Vec<usize>]) {
        let n = self.n;
        let perm: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let mut word = vec![0u64; n];
        for (i, w) in word.iter_mut().enumerate() {
            let row = self.rows[perm[i]];
            for (j, &old_j) in perm.iter().enumerate() {
                *w |= (row >> old_j & 1) << j;
            }
        }
        match &mut self.best {
            None => self.best = Some((word, perm)),
            Some((best_word, best_perm)) => {
                if word < *best_word {
                    self.best = Some((word, perm));
                } else if word == *best_word {
                    // Two labelings with the same image compose to an
                    // automorphism of the input graph.
                    let mut a = vec![0usize; n];
                    for i in 0..n {
                        a[perm[i]] = best_perm[i];
                    }
                    if self.auts.len() < MAX_AUT_GENERATORS {
                        self.auts.push(a);
                    }
                }
            }
        }
    }
}

/// Removes vertex `v`, shifting higher labels down by one.
fn delete_vertex(g: &Graph, v: usize) -> Graph {
    let n = g.n();
    debug_assert!(n >= 2 && n <= MAX_CANON_VERTICES && v < n);
    let low = (1u64 << v) - 1;
    let mut rows = Vec::with_capacity(n - 1);
    for u in (0..n).filter(|&u| u != v) {
        let r = g.row_word(u);
        let high = if v + 1 >= 64 { 0 } else { (r >> (v + 1)) << v };
        rows.push((r & low) | high);
    }
    Graph::from_row_words(n - 1, &rows)
}

// ============================================================================
// Enumeration results
// ============================================================================

/// Search-effort counters plus elapsed wall-clock time.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchStats {
    /// Extension-tree nodes visited.
    pub nodes: u64,
    /// Completed neighborhood masks that survived pruning.
    pub leaves: u64,
    /// Canonization calls.
    pub canonize_calls: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    fn absorb(&mut self, c: Counters) {
        self.nodes += c.nodes;
        self.leaves += c.leaves;
        self.canonize_calls += c.canonize;
    }
}

/// One representative per isomorphism class of graphs on `n` vertices that
/// avoid `B_r` while their complements avoid `B_s`.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub n: usize,
    pub params: BookParams,
    /// Sorted, duplicate-free canonical forms.
    pub graphs: Vec<CanonicalForm>,
    pub stats: SearchStats,
}

/// A book Ramsey number established by exhausting every level up to it.
#[derive(Debug, Clone)]
pub struct RamseyNumberResult {
    pub params: BookParams,
    /// Smallest vertex count admitting no avoiding graph.
    pub value: usize,
    /// The full level below `value`, sorted.
    pub critical_graphs: Vec<CanonicalForm>,
    pub stats: SearchStats,
}

impl RamseyNumberResult {
    pub fn critical_count(&self) -> usize {
        self.critical_graphs.len()
    }
}

// ============================================================================
// Enumeration
// ============================================================================

/// Enumerates, up to isomorphism, the graphs on `n` vertices with no
/// `B_r` and no `B_s` in the complement, by growing one vertex at a time
/// from `K_1`. Output order is sorted canonical forms, independent of
/// scheduling.
///
/// # Errors
///
/// `UnsupportedVertexCount` for `n` outside `1..=64`; `BudgetExhausted`
/// when the time limit strikes first, carrying the last completed level.
pub fn enumerate_ramsey_graphs(
    n: usize,
    p: BookParams,
    budget: Option<Duration>,
) -> Result<EnumerationResult, SearchError> {
    enumerate_ramsey_graphs_with(n, p, budget, default_workers())
}

/// [`enumerate_ramsey_graphs`] with an explicit worker count. Results are
/// identical for every worker count.
pub fn enumerate_ramsey_graphs_with(
    n: usize,
    p: BookParams,
    budget: Option<Duration>,
    workers: usize,
) -> Result<EnumerationResult, SearchError> {
    if n == 0 || n > MAX_CANON_VERTICES {
        return Err(SearchError::UnsupportedVertexCount(n));
    }
    let start = Instant::now();
    let deadline = budget.and_then(|b| start.checked_add(b));
    let abort = AtomicBool::new(false);
    let mut stats = SearchStats::default();
    let mut level = first_level();
    for completed in 1..n {
        match advance_level(&level, p, workers, deadline, &abort, &mut stats) {
            Some(next) => level = next,
            None => {
                stats.elapsed = start.elapsed();
                return Err(SearchError::BudgetExhausted {
                    completed_level: completed,
                    graphs_at_level: level.len(),
                    stats,
                });
            }
        }
    }
    stats.elapsed = start.elapsed();
    Ok(EnumerationResult {
        n,
        params: p,
        graphs: level.into_keys().map(CanonicalForm).collect(),
        stats,
    })
}

/// Finds the smallest `n <= n_cap` with no avoiding graph on `n` vertices,
/// together with the full critical level at `n − 1`.
///
/// # Errors
///
/// `Inconclusive` when every level up to the cap is nonempty,
/// `BudgetExhausted` when time runs out, `UnsupportedVertexCount` for a
/// cap outside `2..=64`.
pub fn ramsey_number_smallcase(
    p: BookParams,
    n_cap: usize,
    budget: Option<Duration>,
) -> Result<RamseyNumberResult, SearchError> {
    ramsey_number_smallcase_with(p, n_cap, budget, default_workers())
}

/// [`ramsey_number_smallcase`] with an explicit worker count.
pub fn ramsey_number_smallcase_with(
    p: BookParams,
    n_cap: usize,
    budget: Option<Duration>,
    workers: usize,
) -> Result<RamseyNumberResult, SearchError> {
    if n_cap < 2 || n_cap > MAX_CANON_VERTICES {
        return Err(SearchError::UnsupportedVertexCount(n_cap));
    }
    let start = Instant::now();
    let deadline = budget.and_then(|b| start.checked_add(b));
    let abort = AtomicBool::new(false);
    let mut stats = SearchStats::default();
    let mut level = first_level();
    for next_n in 2..=n_cap {
        match advance_level(&level, p, workers, deadline, &abort, &mut stats) {
            Some(next) if next.is_empty() => {
                stats.elapsed = start.elapsed();
                return Ok(RamseyNumberResult {
                    params: p,
                    value: next_n,
                    critical_graphs: level.into_keys().map(CanonicalForm).collect(),
                    stats,
                });
            }
            Some(next) => level = next,
            None => {
                stats.elapsed = start.elapsed();
                return Err(SearchError::BudgetExhausted {
                    completed_level: next_n - 1,
                    graphs_at_level: level.len(),
                    stats,
                });
            }
        }
    }
    Err(SearchError::Inconclusive { n_cap, count_at_cap: level.len() })
}

/// Worker count used when the caller does not pick one: the available
/// parallelism, capped at 8.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|w| w.get()).unwrap_or(1).min(8)
}

/// Level 1 is `K_1`, valid for every page bound.
fn first_level() -> BTreeMap<String, Graph> {
    let k1 = Graph::empty(1).expect("one vertex is in range");
    let mut level = BTreeMap::new();
    level.insert(encode_canonical(&k1), k1);
    level
}

#[derive(Debug, Clone, Copy, Default)]
struct Counters {
    nodes: u64,
    leaves: u64,
    canonize: u64,
}

/// Extends every parent by one vertex and merges the accepted children.
/// Returns `None` when the deadline fired mid-level.
fn advance_level(
    parents: &BTreeMap<String, Graph>,
    p: BookParams,
    workers: usize,
    deadline: Option<Instant>,
    abort: &AtomicBool,
    stats: &mut SearchStats,
) -> Option<BTreeMap<String, Graph>> {
    let parent_list: Vec<(&String, &Graph)> = parents.iter().collect();
    let workers = workers.clamp(1, parent_list.len().max(1));
    let worker_results: Vec<(BTreeMap<String, Graph>, Counters)> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let chunk: Vec<(&String, &Graph)> =
                parent_list.iter().copied().skip(w).step_by(workers).collect();
            handles.push(scope.spawn(move || {
                let mut local = BTreeMap::new();
                let mut counters = Counters::default();
                for (form, parent) in chunk {
                    if deadline_hit(deadline, abort) {
                        break;
                    }
                    extend_parent(form, parent, p, deadline, abort, &mut local, &mut counters);
                }
                (local, counters)
            }));
        }
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut next = BTreeMap::new();
    for (local, counters) in worker_results {
        stats.absorb(counters);
        next.extend(local);
    }
    if abort.load(Ordering::Relaxed) {
        return None;
    }
    Some(next)
}

fn deadline_hit(deadline: Option<Instant>, abort: &AtomicBool) -> bool {
    if abort.load(Ordering::Relaxed) {
        return true;
    }
    if let Some(d) = deadline {
        if Instant::now() >= d {
            abort.store(true, Ordering::Relaxed);
            return true;
        }
    }
    false
}

struct Extend<'a> {
    p: BookParams,
    k: usize,
    rows: Vec<u64>,
    full: u64,
    /// Common-neighbor counts between parent vertices.
    common: Vec<Vec<usize>>,
    /// Common co-neighbor counts between parent vertices.
    co_common: Vec<Vec<usize>>,
    parent_form: &'a str,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
    /// Canonical forms of every child built from this parent.
    seen: HashSet<String>,
    out: &'a mut BTreeMap<String, Graph>,
    counters: &'a mut Counters,
}

fn extend_parent(
    parent_form: &str,
    parent: &Graph,
    p: BookParams,
    deadline: Option<Instant>,
    abort: &AtomicBool,
    out: &mut BTreeMap<String, Graph>,
    counters: &mut Counters,
) {
    let k = parent.n();
    debug_assert!(k < MAX_CANON_VERTICES);
    let rows: Vec<u64> = (0..k).map(|u| parent.row_word(u)).collect();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut common = vec![vec![0usize; k]; k];
    let mut co_common = vec![vec![0usize; k]; k];
    for a in 0..k {
        for b in (a + 1)..k {
            let c = (rows[a] & rows[b]).count_ones() as usize;
            common[a][b] = c;
            common[b][a] = c;
            let cc = (full & !(rows[a] | rows[b] | 1 << a | 1 << b)).count_ones() as usize;
            co_common[a][b] = cc;
            co_common[b][a] = cc;
        }
    }
    let mut ext = Extend {
        p,
        k,
        rows,
        full,
        common,
        co_common,
        parent_form,
        deadline,
        abort,
        seen: HashSet::new(),
        out,
        counters,
    };
    ext.dfs(k, 0, 0);
}

impl Extend<'_> {
    /// Decides membership of vertex `undecided − 1` in the new vertex's
    /// neighborhood; vertices at and above `undecided` are settled in `s`
    /// (in) or `out_mask` (out).
    fn dfs(&mut self, undecided: usize, s: u64, out_mask: u64) {
        self.counters.nodes += 1;
        if self.counters.nodes & DEADLINE_STRIDE == 0 && deadline_hit(self.deadline, self.abort) {
            return;
        }
        if self.abort.load(Ordering::Relaxed) {
            return;
        }
        if undecided == 0 {
            self.leaf(s);
            return;
        }
        let a = undecided - 1;
        let abit = 1u64 << a;
        if self.include_ok(a, s) {
            self.dfs(a, s | abit, out_mask);
        }
        if self.exclude_ok(a, s, out_mask) {
            self.dfs(a, s, out_mask | abit);
        }
    }

    /// Once `a` joins the neighborhood these constraints can only tighten:
    /// the new edge to `a` gets every later member of `N(a)` as a common
    /// neighbor, and each settled edge inside the neighborhood has gained
    /// the new vertex for good.
    fn include_ok(&self, a: usize, s: u64) -> bool {
        let abit = 1u64 << a;
        let in_nbrs = self.rows[a] & s;
        if in_nbrs.count_ones() as usize >= self.p.r {
            return false;
        }
        let mut t = in_nbrs;
        while t != 0 {
            let b = t.trailing_zeros() as usize;
            t &= t - 1;
            if self.common[a][b] >= self.p.r - 1 {
                return false;
            }
            if (self.rows[b] & (s | abit)).count_ones() as usize >= self.p.r {
                return false;
            }
        }
        true
    }

    /// Settled co-edges with both ends outside the neighborhood keep the
    /// new vertex as a common co-neighbor in every completion, and the new
    /// co-edge to `a` has a floor reached by sending all undecided
    /// vertices into the neighborhood.
    fn exclude_ok(&self, a: usize, s: u64, out_mask: u64) -> bool {
        let mut t = out_mask & !self.rows[a];
        while t != 0 {
            let b = t.trailing_zeros() as usize;
            t &= t - 1;
            if self.co_common[a][b] >= self.p.s - 1 {
                return false;
            }
        }
        let undecided_mask = (1u64 << a) - 1;
        let widest = self.rows[a] | s | undecided_mask;
        self.k - 1 - (widest.count_ones() as usize) < self.p.s
    }

    fn leaf(&mut self, s: u64) {
        self.counters.leaves += 1;
        // In-branch pruning already enforced every constraint except the
        // exact co-page count of the new co-edges.
        let mut t = self.full & !s;
        while t != 0 {
            let a = t.trailing_zeros() as usize;
            t &= t - 1;
            if self.k - 1 - ((self.rows[a] | s).count_ones() as usize) >= self.p.s {
                return;
            }
        }
        let k = self.k;
        let mut child_rows = Vec::with_capacity(k + 1);
        let mut new_row = 0u64;
        for a in 0..k {
            let mut row = self.rows[a];
            if s >> a & 1 == 1 {
                row |= 1u64 << k;
                new_row |= 1u64 << a;
            }
            child_rows.push(row);
        }
        child_rows.push(new_row);
        let child = Graph::from_row_words(k + 1, &child_rows);
        debug_assert!(child.is_ramsey_graph(self.p));
        self.counters.canonize += 1;
        let (canon_rows, perm) = canonize(&child);
        let canon_child = Graph::from_row_words(k + 1, &canon_rows);
        let form = encode_canonical(&canon_child);
        if !self.seen.insert(form.clone()) {
            return;
        }
        // Keep the child only if deleting the canonically last vertex
        // recovers the parent's class. Parents are unique per class and the
        // deleted class is an isomorphism invariant, so each child class
        // survives under exactly one parent.
        let vstar = perm[k];
        let accept = vstar == k || {
            self.counters.canonize += 1;
            let (reduced_rows, _) = canonize(&delete_vertex(&child, vstar));
            encode_canonical(&Graph::from_row_words(k, &reduced_rows)) == self.parent_form
        };
        if accept {
            self.out.insert(form, canon_child);
        }
    }
}

// ============================================================================
// Tests
// ============================================================================
