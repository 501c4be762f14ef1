//! Dense undirected graphs with bitset adjacency rows.
//!
//! The load-bearing query is the common-neighbor count: a graph contains the
//! book `B_r` exactly when some edge has at least `r` common neighbors of its
//! endpoints, so book detection never needs subgraph isomorphism. Everything
//! else here is plumbing around that fact: complements for the two-sided
//! check, graph6 for compact interchange, and an adjacency-matrix text parser
//! for published witness tables.

use std::fmt;

/// Hard cap on vertex count; keeps adjacency rows as flat bitset words.
pub const MAX_VERTICES: usize = 1024;

// ============================================================================
// Errors
// ============================================================================

/// Failure modes for graph construction and the two text codecs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// Vertex count outside `1..=MAX_VERTICES`.
    BadVertexCount(usize),
    /// Malformed graph6: 0-based byte offset and what was wrong there.
    Graph6 { byte: usize, reason: &'static str },
    /// graph6 short form stops at 62 vertices.
    Graph6TooLarge(usize),
    /// Adjacency-matrix text rejected: 1-based input line and the reason.
    Matrix { line: usize, reason: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::BadVertexCount(n) => {
                write!(f, "vertex count {n} outside 1..={MAX_VERTICES}")
            }
            GraphError::Graph6 { byte, reason } => {
                write!(f, "bad graph6 at byte {byte}: {reason}")
            }
            GraphError::Graph6TooLarge(n) => {
                write!(f, "graph6 short form encodes at most 62 vertices, got {n}")
            }
            GraphError::Matrix { line, reason } => {
                write!(f, "bad adjacency matrix at line {line}: {reason}")
            }
        }
    }
}

impl std::error::Error for GraphError {}

// ============================================================================
// Book parameters
// ============================================================================

/// Page bounds for the two-sided book check: the graph must avoid `B_r` and
/// its complement must avoid `B_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct BookParams {
    pub r: usize,
    pub s: usize,
}

impl BookParams {
    /// # Panics
    ///
    /// Panics if either bound is zero; `B_0` is a bare edge and the avoidance
    /// question degenerates to edge counting.
    pub fn new(r: usize, s: usize) -> Self {
        assert!(r >= 1 && s >= 1, "book page bounds must be at least 1");
        BookParams { r, s }
    }

    /// Bounds with the two sides exchanged; pairs with [`Graph::complement`].
    pub fn swapped(self) -> Self {
        BookParams { r: self.s, s: self.r }
    }
}

// ============================================================================
// Graph
// ============================================================================

/// Undirected simple graph on `n` vertices, adjacency stored as `n` bitset
/// rows of `ceil(n/64)` words each.
///
/// Invariants: adjacency is symmetric, the diagonal is zero, and bits at
/// column `n` and beyond are zero in every row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    ///
    /// # Errors
    ///
    /// `BadVertexCount` unless `1 <= n <= MAX_VERTICES`.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::BadVertexCount(n));
        }
        let words = n.div_ceil(64);
        Ok(Graph { n, words, bits: vec![0; n * words] })
    }

    /// Vertex count.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    /// Adjacency row of `u` as a single word; callers guarantee `n <= 64`.
    #[inline]
    pub(crate) fn row_word(&self, u: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.bits[u]
    }

    /// Builds a graph on `n <= 64` vertices directly from adjacency words.
    pub(crate) fn from_row_words(n: usize, rows: &[u64]) -> Graph {
        debug_assert!(n >= 1 && n <= 64 && rows.len() == n);
        let mut g = Graph::empty(n).expect("row-word graphs are within the cap");
        g.bits.copy_from_slice(rows);
        debug_assert!(g.rep_ok());
        g
    }

    #[inline]
    fn set_bit(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1u64 << (v % 64);
    }

    /// Inserts the edge `{u, v}`; idempotent.
    ///
    /// # Panics
    ///
    /// Panics on an out-of-range vertex or `u == v`.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        assert_ne!(u, v, "loops are not representable");
        self.set_bit(u, v);
        self.set_bit(v, u);
    }

    /// True iff `{u, v}` is an edge. `has_edge(u, u)` is always false.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Number of neighbors of `u`.
    pub fn degree(&self, u: usize) -> usize {
        assert!(u < self.n, "vertex out of range");
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        let total: usize = self.bits.iter().map(|w| w.count_ones() as usize).sum();
        total / 2
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n).filter_map(move |v| self.has_edge(u, v).then_some((u, v)))
        })
    }

    /// Count of vertices adjacent to both `u` and `v`.
    ///
    /// # Panics
    ///
    /// Panics on an out-of-range vertex or `u == v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        assert!(u < self.n && v < self.n, "vertex out of range");
        assert_ne!(u, v, "common neighbors need two distinct endpoints");
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Largest common-neighbor count over all edges; 0 for edgeless graphs.
    ///
    /// The graph contains `B_r` iff the result is at least `r`.
    pub fn max_book_pages(&self) -> usize {
        self.max_book_pages_edge().map_or(0, |(_, _, pages)| pages)
    }

    /// Like [`max_book_pages`](Self::max_book_pages), but also reports the
    /// first edge (row-major) attaining the maximum. `None` iff edgeless.
    pub fn max_book_pages_edge(&self) -> Option<(usize, usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    continue;
                }
                let pages = self.common_neighbors(u, v);
                if best.is_none_or(|(_, _, b)| pages > b) {
                    best = Some((u, v, pages));
                }
            }
        }
        best
    }

    /// True iff the graph avoids `B_r` and its complement avoids `B_s`.
    pub fn is_ramsey_graph(&self, p: BookParams) -> bool {
        self.max_book_pages() < p.r && self.complement().max_book_pages() < p.s
    }

    /// Complement on the same vertex labels. Involution.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n).expect("same vertex count");
        for u in 0..self.n {
            let dst = &mut g.bits[u * self.words..(u + 1) * self.words];
            for (w, src) in dst.iter_mut().zip(self.row(u)) {
                *w = !src;
            }
            dst[u / 64] &= !(1u64 << (u % 64));
            mask_tail(self.n, dst);
        }
        debug_assert!(g.rep_ok());
        g
    }

    // ------------------------------------------------------------------
    // graph6
    // ------------------------------------------------------------------

    /// graph6 short form: vertex-count byte, then the upper triangle read
    /// column by column, packed into 6-bit groups offset by 63.
    ///
    /// # Errors
    ///
    /// `Graph6TooLarge` for more than 62 vertices.
    pub fn to_graph6(&self) -> Result<String, GraphError> {
        if self.n > 62 {
            return Err(GraphError::Graph6TooLarge(self.n));
        }
        let mut out = String::new();
        out.push((self.n as u8 + 63) as char);
        let mut acc = 0u8;
        let mut nbits = 0u8;
        for j in 1..self.n {
            for i in 0..j {
                acc = (acc << 1) | u8::from(self.has_edge(i, j));
                nbits += 1;
                if nbits == 6 {
                    out.push((acc + 63) as char);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push(((acc << (6 - nbits)) + 63) as char);
        }
        Ok(out)
    }

    /// Decodes the graph6 short form; trailing newline tolerated.
    ///
    /// # Errors
    ///
    /// `Graph6` naming the first bad byte: header outside the short-form
    /// range, body byte outside `63..=126`, wrong body length, or a nonzero
    /// padding bit.
    pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
        let bytes = text.trim_end().as_bytes();
        if bytes.is_empty() {
            return Err(GraphError::Graph6 { byte: 0, reason: "empty input" });
        }
        if !(63..=125).contains(&bytes[0]) {
            return Err(GraphError::Graph6 {
                byte: 0,
                reason: "vertex-count byte outside the short form",
            });
        }
        let n = (bytes[0] - 63) as usize;
        if n == 0 {
            return Err(GraphError::BadVertexCount(0));
        }
        let pair_bits = n * (n - 1) / 2;
        let need = pair_bits.div_ceil(6);
        if bytes.len() - 1 != need {
            return Err(GraphError::Graph6 {
                byte: (1 + need).min(bytes.len()),
                reason: "body length does not match the vertex count",
            });
        }
        let mut g = Graph::empty(n)?;
        let mut pos = 0usize;
        for (k, &b) in bytes[1..].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(GraphError::Graph6 { byte: k + 1, reason: "body byte outside 63..=126" });
            }
            let val = b - 63;
            for t in (0..6).rev() {
                let bit = (val >> t) & 1;
                if pos < pair_bits {
                    if bit == 1 {
                        let (i, j) = pair_from_rank(pos);
                        g.add_edge(i, j);
                    }
                } else if bit == 1 {
                    return Err(GraphError::Graph6 { byte: k + 1, reason: "nonzero padding bit" });
                }
                pos += 1;
            }
        }
        debug_assert!(g.rep_ok());
        Ok(g)
    }

    // ------------------------------------------------------------------
    // adjacency-matrix text
    // ------------------------------------------------------------------

    /// Parses 0/1 adjacency rows, one per line; commas and square brackets
    /// are treated as whitespace, blank lines are skipped.
    ///
    /// # Errors
    ///
    /// `Matrix` naming the first offending 1-based input line: a token other
    /// than 0/1, a ragged row, a nonzero diagonal entry, or an asymmetric
    /// pair.
    pub fn parse_adjacency_text(text: &str) -> Result<Graph, GraphError> {
        let mut rows: Vec<(usize, Vec<bool>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let cleaned: String = raw
                .chars()
                .map(|c| if matches!(c, '[' | ']' | ',') { ' ' } else { c })
                .collect();
            let mut row = Vec::new();
            for tok in cleaned.split_whitespace() {
                match tok {
                    "0" => row.push(false),
                    "1" => row.push(true),
                    _ => {
                        return Err(GraphError::Matrix {
                            line,
                            reason: format!("expected 0 or 1, got {tok:?}"),
                        })
                    }
                }
            }
            if !row.is_empty() {
                rows.push((line, row));
            }
        }
        if rows.is_empty() {
            return Err(GraphError::Matrix { line: 1, reason: "no matrix rows found".into() });
        }
        let n = rows.len();
        for &(line, ref row) in &rows {
            if row.len() != n {
                return Err(GraphError::Matrix {
                    line,
                    reason: format!("row has {} entries, expected {n}", row.len()),
                });
            }
        }
        let mut g = Graph::empty(n)?;
        for (i, &(line, ref row)) in rows.iter().enumerate() {
            if row[i] {
                return Err(GraphError::Matrix {
                    line,
                    reason: format!("nonzero diagonal entry at column {i}"),
                });
            }
            for (j, &bit) in row.iter().enumerate().take(i) {
                if bit != rows[j].1[i] {
                    return Err(GraphError::Matrix {
                        line,
                        reason: format!("asymmetric with row {} at column {j}", j + 1),
                    });
                }
            }
            for (j, &bit) in row.iter().enumerate() {
                if bit && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        debug_assert!(g.rep_ok());
        Ok(g)
    }

    /// Representation invariant; used in debug assertions only.
    fn rep_ok(&self) -> bool {
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return false;
            }
            let row = self.row(u);
            if self.n % 64 != 0 && row[self.words - 1] & !((1u64 << (self.n % 64)) - 1) != 0 {
                return false;
            }
            for v in 0..u {
                if self.has_edge(u, v) != self.has_edge(v, u) {
                    return false;
                }
            }
        }
        true
    }
}

/// Zeroes bits at columns `n..` in a row's final word.
#[inline]
fn mask_tail(n: usize, row: &mut [u64]) {
    if n % 64 != 0 {
        *row.last_mut().expect("rows are nonempty") &= (1u64 << (n % 64)) - 1;
    }
}

/// Inverse of the graph6 bit order: rank within the column-major upper
/// triangle back to the pair `(i, j)`, `i < j`.
fn pair_from_rank(rank: usize) -> (usize, usize) {
    // Column j holds j bits, so ranks [j(j-1)/2, j(j+1)/2) belong to column j.
    let mut j = 1usize;
    while j * (j + 1) / 2 <= rank {
        j += 1;
    }
    (rank - j * (j - 1) / 2, j)
}

// ============================================================================
// Tests
// ============================================================================
