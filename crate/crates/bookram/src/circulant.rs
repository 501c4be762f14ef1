//! Two-block circulant graphs over `Z_m` and their difference calculus.
//!
//! A two-block circulant graph on `2m` vertices is determined by three
//! difference sets: `D11` and `D22` give circulant adjacency inside each
//! block of `m` vertices, and `D12` gives the cross-block adjacency. The
//! point of the representation is that common-neighbor counts, and therefore
//! book containment, collapse to difference counts `Δ` and sum counts `Σ`
//! over the three sets. Checking the six per-difference condition families
//! here is equivalent to the edge-by-edge book check on the expanded graph,
//! but costs `O(m²)` instead of `O(m³)`.

use std::fmt;
use std::str::FromStr;

use crate::graph::{BookParams, Graph, MAX_VERTICES};

/// Block sizes above this would expand past the graph vertex cap.
pub const MAX_BLOCK: usize = MAX_VERTICES / 2;

// ============================================================================
// Errors
// ============================================================================

/// Validation and parse failures for two-block circulant specs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    /// Block size must be in `1..=MAX_BLOCK`.
    BadBlockSize(usize),
    /// A set element was not a canonical residue below `m`.
    ElementOutOfRange { set: &'static str, value: usize },
    /// Zero is not a legal difference inside a diagonal block.
    ZeroInDiagonal { set: &'static str },
    /// A diagonal set must contain the negation of each element.
    NotSymmetric { set: &'static str, value: usize },
    /// Spec text did not match `m; D11={..}; D12={..}[; D22={..}]`.
    Parse(String),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::BadBlockSize(m) => write!(f, "block size {m} outside 1..={MAX_BLOCK}"),
            SpecError::ElementOutOfRange { set, value } => {
                write!(f, "{set} element {value} is not a residue below the block size")
            }
            SpecError::ZeroInDiagonal { set } => write!(f, "{set} must not contain 0"),
            SpecError::NotSymmetric { set, value } => {
                write!(f, "{set} contains {value} but not its negation")
            }
            SpecError::Parse(reason) => write!(f, "bad spec text: {reason}"),
        }
    }
}

impl std::error::Error for SpecError {}

// ============================================================================
// Difference calculus
// ============================================================================

/// Number of pairs `(x, y)` in `X × Y` with `x − y ≡ d (mod m)`.
///
/// # Panics
///
/// Panics if `d >= m` or any set element is `>= m`.
pub fn delta(x: &[usize], y: &[usize], d: usize, m: usize) -> usize {
    assert!(m >= 1 && d < m, "difference must be a canonical residue");
    let in_y = membership(y, m);
    let mut count = 0;
    for &e in x {
        assert!(e < m, "set element {e} is not a residue below {m}");
        if in_y[(e + m - d) % m] {
            count += 1;
        }
    }
    count
}

/// Number of pairs `(x, y)` in `X × Y` with `x + y ≡ d (mod m)`.
///
/// Equals `delta(X, −Y, d, m)`.
///
/// # Panics
///
/// As [`delta`].
pub fn sigma(x: &[usize], y: &[usize], d: usize, m: usize) -> usize {
    assert!(m >= 1 && d < m, "difference must be a canonical residue");
    let in_y = membership(y, m);
    let mut count = 0;
    for &e in x {
        assert!(e < m, "set element {e} is not a residue below {m}");
        if in_y[(d + m - e) % m] {
            count += 1;
        }
    }
    count
}

/// The set `{−x mod m : x ∈ X}`, sorted.
pub fn negate_set(x: &[usize], m: usize) -> Vec<usize> {
    let mut out: Vec<usize> = x.iter().map(|&e| (m - e % m) % m).collect();
    out.sort_unstable();
    out
}

/// Membership table; also validates residues.
fn membership(set: &[usize], m: usize) -> Vec<bool> {
    let mut table = vec![false; m];
    for &e in set {
        assert!(e < m, "set element {e} is not a residue below {m}");
        table[e] = true;
    }
    table
}

// ============================================================================
// Spec type
// ============================================================================

/// Difference sets `(m, D11, D12, D22)` defining a two-block circulant graph.
///
/// `D11` and `D22` live in `Z_m \ {0}` and are closed under negation, so the
/// diagonal blocks are symmetric; `D12` may be any subset of `Z_m`. Sets are
/// stored sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCirculantSpec {
    m: usize,
    d11: Vec<usize>,
    d12: Vec<usize>,
    d22: Vec<usize>,
}

impl BlockCirculantSpec {
    /// Validates and normalizes the three difference sets.
    ///
    /// # Errors
    ///
    /// Rejects a block size outside `1..=MAX_BLOCK`, elements at or above
    /// `m`, zero inside a diagonal set, and diagonal sets not closed under
    /// negation mod `m`.
    pub fn new(
        m: usize,
        d11: Vec<usize>,
        d12: Vec<usize>,
        d22: Vec<usize>,
    ) -> Result<Self, SpecError> {
        if m == 0 || m > MAX_BLOCK {
            return Err(SpecError::BadBlockSize(m));
        }
        let d11 = normalize("D11", d11, m, true)?;
        let d12 = normalize("D12", d12, m, false)?;
        let d22 = normalize("D22", d22, m, true)?;
        Ok(BlockCirculantSpec { m, d11, d12, d22 })
    }

    /// Builds a spec with `D22` taken as the complement of `D11` in
    /// `Z_m \ {0}`, the convention used by published witness tables.
    ///
    /// # Errors
    ///
    /// As [`new`](Self::new).
    pub fn with_complement_d22(
        m: usize,
        d11: Vec<usize>,
        d12: Vec<usize>,
    ) -> Result<Self, SpecError> {
        if m == 0 || m > MAX_BLOCK {
            return Err(SpecError::BadBlockSize(m));
        }
        let d11 = normalize("D11", d11, m, true)?;
        let d22 = complement_of(&d11, m, true);
        Self::new(m, d11, d12, d22)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d11(&self) -> &[usize] {
        &self.d11
    }

    pub fn d12(&self) -> &[usize] {
        &self.d12
    }

    pub fn d22(&self) -> &[usize] {
        &self.d22
    }

    /// True iff `D22` is exactly the complement of `D11` in `Z_m \ {0}`.
    pub fn has_complement_d22(&self) -> bool {
        self.d22 == complement_of(&self.d11, self.m, true)
    }

    /// Expands to the explicit graph on `2m` vertices: block `V1` is
    /// `{0..m−1}`, block `V2` is `{m..2m−1}`; `u,v ∈ V1` are adjacent iff
    /// `v−u mod m ∈ D11`, both-in-`V2` likewise via `D22`, and `u ∈ V1` is
    /// adjacent to `m+j ∈ V2` iff `j−u mod m ∈ D12`.
    pub fn expand(&self) -> Graph {
        let m = self.m;
        let mut g = Graph::empty(2 * m).expect("block size is capped");
        for u in 0..m {
            for &d in &self.d11 {
                g.add_edge(u, (u + d) % m);
            }
            for &d in &self.d22 {
                g.add_edge(m + u, m + (u + d) % m);
            }
            for &d in &self.d12 {
                g.add_edge(u, m + (u + d) % m);
            }
        }
        g
    }

    /// Common-neighbor count of the expanded graph computed from difference
    /// counts alone, without building the graph.
    ///
    /// Three cases: both endpoints in `V1` use `Δ(D11,D11,·) + Δ(D12,D12,·)`,
    /// both in `V2` use `Δ(D22,D22,·) + Δ(D12,D12,·)`, and a cross pair
    /// `u ∈ V1`, `v = m+j` uses `Σ(D11,D12,j−u) + Δ(D12,D22,j−u)`.
    ///
    /// # Panics
    ///
    /// Panics if `u == v` or either label is outside `0..2m`.
    pub fn common_neighbors_formula(&self, u: usize, v: usize) -> usize {
        let m = self.m;
        assert!(u < 2 * m && v < 2 * m, "vertex out of range");
        assert_ne!(u, v, "common neighbors need two distinct endpoints");
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        if v < m {
            let d = (v - u) % m;
            delta(&self.d11, &self.d11, d, m) + delta(&self.d12, &self.d12, d, m)
        } else if u >= m {
            let d = (v - u) % m;
            delta(&self.d22, &self.d22, d, m) + delta(&self.d12, &self.d12, d, m)
        } else {
            let j = v - m;
            let d = (j + m - u) % m;
            sigma(&self.d11, &self.d12, d, m) + delta(&self.d12, &self.d22, d, m)
        }
    }

    /// Evaluates the six condition families that bound common-neighbor
    /// counts per difference class; passing certifies that the expanded
    /// graph avoids `B_r` and its complement avoids `B_s`.
    pub fn check_book_conditions(&self, p: BookParams) -> ConditionReport {
        let co = self.complement_spec();
        let side = |a11: &[usize], a12: &[usize], a22: &[usize], bound: usize| {
            [
                family("D11", a11, bound, |d| {
                    delta(a11, a11, d, self.m) + delta(a12, a12, d, self.m)
                }),
                family("D22", a22, bound, |d| {
                    delta(a22, a22, d, self.m) + delta(a12, a12, d, self.m)
                }),
                family("D12", a12, bound, |d| {
                    sigma(a11, a12, d, self.m) + delta(a12, a22, d, self.m)
                }),
            ]
        };
        let [f1, f2, f3] = side(&self.d11, &self.d12, &self.d22, p.r);
        let [mut f4, mut f5, mut f6] = side(&co.d11, &co.d12, &co.d22, p.s);
        f4.name = "coD11";
        f5.name = "coD22";
        f6.name = "coD12";
        ConditionReport { families: [f1, f2, f3, f4, f5, f6] }
    }

    /// The complementary spec `(D̄11, D̄12, D̄22)`: diagonal sets complemented
    /// in `Z_m \ {0}`, the cross set in `Z_m`. Involution; expansion commutes
    /// with graph complement.
    pub fn complement_spec(&self) -> BlockCirculantSpec {
        BlockCirculantSpec {
            m: self.m,
            d11: complement_of(&self.d11, self.m, true),
            d12: complement_of(&self.d12, self.m, false),
            d22: complement_of(&self.d22, self.m, true),
        }
    }
}

/// Sorts, dedups, and validates one difference set.
fn normalize(
    name: &'static str,
    mut set: Vec<usize>,
    m: usize,
    diagonal: bool,
) -> Result<Vec<usize>, SpecError> {
    set.sort_unstable();
    set.dedup();
    for &e in &set {
        if e >= m {
            return Err(SpecError::ElementOutOfRange { set: name, value: e });
        }
    }
    if diagonal {
        if set.first() == Some(&0) {
            return Err(SpecError::ZeroInDiagonal { set: name });
        }
        for &e in &set {
            if set.binary_search(&((m - e) % m)).is_err() {
                return Err(SpecError::NotSymmetric { set: name, value: e });
            }
        }
    }
    Ok(set)
}

/// Complement in `Z_m` (or `Z_m \ {0}` for diagonal sets); input sorted.
fn complement_of(set: &[usize], m: usize, diagonal: bool) -> Vec<usize> {
    let start = usize::from(diagonal);
    (start..m).filter(|e| set.binary_search(e).is_err()).collect()
}

// ============================================================================
// Condition report
// ============================================================================

/// One condition family: every difference `d` in `domain` must keep its
/// common-neighbor value strictly below `bound`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FamilyReport {
    /// Which difference set indexes the family.
    pub name: &'static str,
    /// The page bound the family is checked against (`r` or `s`).
    pub bound: usize,
    /// Maximum value attained over the domain; 0 when the domain is empty.
    pub max: usize,
    /// First `d` attaining the maximum, if the domain is nonempty.
    pub argmax: Option<usize>,
    /// First `d` whose value reaches the bound, if any.
    pub first_violation: Option<usize>,
}

impl FamilyReport {
    pub fn passes(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Results for all six families: three on the spec against `r`, three on its
/// complement against `s`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ConditionReport {
    pub families: [FamilyReport; 6],
}

impl ConditionReport {
    /// True iff every family's maximum is strictly below its bound.
    pub fn passes(&self) -> bool {
        self.families.iter().all(FamilyReport::passes)
    }

    /// Maxima in family order; the first three are the graph side, the last
    /// three the complement side.
    pub fn maxima(&self) -> [usize; 6] {
        let mut out = [0; 6];
        for (slot, fam) in out.iter_mut().zip(&self.families) {
            *slot = fam.max;
        }
        out
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in &self.families {
            write!(f, "{:>6}: max {} < {}", fam.name, fam.max, fam.bound)?;
            match fam.first_violation {
                None => writeln!(f, "  ok")?,
                Some(d) => writeln!(f, "  VIOLATED at d={d}")?,
            }
        }
        write!(f, "overall: {}", if self.passes() { "pass" } else { "fail" })
    }
}

/// Evaluates one family over its domain.
fn family(
    name: &'static str,
    domain: &[usize],
    bound: usize,
    value: impl Fn(usize) -> usize,
) -> FamilyReport {
    let mut max = 0;
    let mut argmax = None;
    let mut first_violation = None;
    for &d in domain {
        let v = value(d);
        if argmax.is_none() || v > max {
            max = v;
            argmax = Some(d);
        }
        if first_violation.is_none() && v >= bound {
            first_violation = Some(d);
        }
    }
    FamilyReport { name, bound, max, argmax, first_violation }
}

// ============================================================================
// Text format
// ============================================================================

impl fmt::Display for BlockCirculantSpec {
    /// `m; D11={..}; D12={..}`, appending `; D22={..}` only when `D22` is
    /// not the complement-of-`D11` convention.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; D11={}; D12={}", self.m, fmt_set(&self.d11), fmt_set(&self.d12))?;
        if !self.has_complement_d22() {
            write!(f, "; D22={}", fmt_set(&self.d22))?;
        }
        Ok(())
    }
}

impl FromStr for BlockCirculantSpec {
    type Err = SpecError;

    fn from_str(text: &str) -> Result<Self, SpecError> {
        let mut parts = text.split(';').map(str::trim);
        let m: usize = parts
            .next()
            .filter(|p| !p.is_empty())
            .ok_or_else(|| SpecError::Parse("missing block size".into()))?
            .parse()
            .map_err(|_| SpecError::Parse("block size is not a number".into()))?;
        let mut d11 = None;
        let mut d12 = None;
        let mut d22 = None;
        for part in parts {
            if part.is_empty() {
                continue;
            }
            let (key, set) = parse_set_clause(part)?;
            let slot = match key {
                "D11" => &mut d11,
                "D12" => &mut d12,
                "D22" => &mut d22,
                other => return Err(SpecError::Parse(format!("unknown set {other:?}"))),
            };
            if slot.replace(set).is_some() {
                return Err(SpecError::Parse(format!("{key} given twice")));
            }
        }
        let d11 = d11.ok_or_else(|| SpecError::Parse("missing D11".into()))?;
        let d12 = d12.ok_or_else(|| SpecError::Parse("missing D12".into()))?;
        match d22 {
            Some(d22) => Self::new(m, d11, d12, d22),
            None => Self::with_complement_d22(m, d11, d12),
        }
    }
}

fn fmt_set(set: &[usize]) -> String {
    let inner: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Parses one `KEY={a,b,c}` clause.
fn parse_set_clause(part: &str) -> Result<(&str, Vec<usize>), SpecError> {
    let (key, rest) = part
        .split_once('=')
        .ok_or_else(|| SpecError::Parse(format!("expected KEY={{..}} in {part:?}")))?;
    let rest = rest.trim();
    let body = rest
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| SpecError::Parse(format!("expected braces around the set in {part:?}")))?;
    let mut set = Vec::new();
    for tok in body.split(',').map(str::trim) {
        if tok.is_empty() {
            continue;
        }
        let value = tok
            .parse()
            .map_err(|_| SpecError::Parse(format!("bad set element {tok:?}")))?;
        set.push(value);
    }
    Ok((key.trim(), set))
}

// ============================================================================
// Tests
// ============================================================================
