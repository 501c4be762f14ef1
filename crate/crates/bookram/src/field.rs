//! GF(p^k) arithmetic, quadratic residues, and the Paley-type two-block
//! Cayley construction.
//!
//! For a prime power `q = 2n−1` congruent to 1 mod 4, the graph
//! `Γ_{F_q}(Q,Q,N)` built from the nonzero squares `Q` and non-squares `N`
//! avoids `B_{n−1}` while its complement avoids `B_n`, witnessing
//! `R(B_{n−1},B_n) ≥ 4n−1`. The arithmetic here is deliberately plain:
//! elements are indices whose base-`p` digits are polynomial coefficients,
//! multiplication reduces modulo a fixed monic irreducible, and residues are
//! classified by enumerating squares. Orders are capped at `2^20`, so
//! nothing needs to be clever.

use std::fmt;

use crate::graph::Graph;

/// Largest permitted field order.
pub const MAX_ORDER: usize = 1 << 20;

// ============================================================================
// Errors
// ============================================================================

/// Failure modes for field construction and the residue machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(usize),
    BadExtensionDegree(usize),
    OrderTooLarge { p: usize, k: usize },
    /// Supplied modulus rejected: wrong shape or reducible.
    BadModulus(&'static str),
    /// Residue classification needs odd order.
    EvenOrder(usize),
    /// The residue case split needs −1 to be a square.
    NotOneModFour(usize),
    NotPrimePower(usize),
    /// A Cayley connection set failed validation.
    BadConnectionSet { set: &'static str, reason: String },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::BadExtensionDegree(k) => write!(f, "extension degree {k} must be >= 1"),
            FieldError::OrderTooLarge { p, k } => {
                write!(f, "{p}^{k} exceeds the field order cap {MAX_ORDER}")
            }
            FieldError::BadModulus(reason) => write!(f, "bad modulus: {reason}"),
            FieldError::EvenOrder(q) => write!(f, "residues need odd order, got q={q}"),
            FieldError::NotOneModFour(q) => {
                write!(f, "q={q} is not congruent to 1 mod 4")
            }
            FieldError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            FieldError::BadConnectionSet { set, reason } => {
                write!(f, "bad connection set {set}: {reason}")
            }
        }
    }
}

impl std::error::Error for FieldError {}

// ============================================================================
// Finite field
// ============================================================================

/// The field GF(p^k) with elements addressed as indices in `0..q`.
///
/// The index of an element is its coefficient vector read low-degree-first
/// as base-`p` digits, so index 0 is the additive identity and index 1 the
/// multiplicative identity. All arithmetic reduces modulo a fixed monic
/// irreducible of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: usize,
    k: usize,
    q: usize,
    /// Monic modulus, `k+1` coefficients low-to-high.
    modulus: Vec<usize>,
}

impl FiniteField {
    /// Builds GF(p^k) with the lexicographically smallest monic irreducible
    /// modulus of degree `k` (coefficient lists compared low-to-high).
    ///
    /// # Errors
    ///
    /// `NotPrime`, `BadExtensionDegree`, or `OrderTooLarge` when the
    /// parameters are out of range.
    pub fn new(p: usize, k: usize) -> Result<Self, FieldError> {
        let q = check_parameters(p, k)?;
        // Candidate constant-first enumeration is exactly lexicographic
        // order on the coefficient list.
        let mut coeffs = vec![0usize; k + 1];
        coeffs[k] = 1;
        for t in 0..q {
            let mut rest = t;
            for i in (0..k).rev() {
                coeffs[k - 1 - i] = rest / p.pow(i as u32);
                rest %= p.pow(i as u32);
            }
            if poly_is_irreducible(&coeffs, p) {
                return Ok(FiniteField { p, k, q, modulus: coeffs });
            }
        }
        unreachable!("an irreducible polynomial exists in every degree");
    }

    /// Builds GF(p^k) over a caller-chosen monic irreducible modulus,
    /// coefficients low-to-high with length `k+1`.
    ///
    /// # Errors
    ///
    /// As [`new`](Self::new), plus `BadModulus` for a modulus that is the
    /// wrong shape, not monic, not reduced, or reducible.
    pub fn with_modulus(p: usize, k: usize, modulus: Vec<usize>) -> Result<Self, FieldError> {
        let q = check_parameters(p, k)?;
        if modulus.len() != k + 1 {
            return Err(FieldError::BadModulus("coefficient list must have length k+1"));
        }
        if modulus[k] != 1 {
            return Err(FieldError::BadModulus("modulus must be monic"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus("coefficients must be reduced mod p"));
        }
        if !poly_is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus("modulus is reducible"));
        }
        Ok(FiniteField { p, k, q, modulus })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Field order `q = p^k`.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Modulus coefficients, low-to-high.
    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    /// Coefficient vector of an element, low-degree-first.
    pub fn coeffs(&self, a: usize) -> Vec<usize> {
        debug_assert!(a < self.q);
        let mut digits = vec![0; self.k];
        let mut rest = a;
        for digit in digits.iter_mut() {
            *digit = rest % self.p;
            rest /= self.p;
        }
        digits
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.q && b < self.q);
        let (mut out, mut pw) = (0, 1);
        let (mut a, mut b) = (a, b);
        for _ in 0..self.k {
            out += (a % self.p + b % self.p) % self.p * pw;
            a /= self.p;
            b /= self.p;
            pw *= self.p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        debug_assert!(a < self.q);
        let (mut out, mut pw) = (0, 1);
        let mut a = a;
        for _ in 0..self.k {
            out += (self.p - a % self.p) % self.p * pw;
            a /= self.p;
            pw *= self.p;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0usize; 2 * self.k.max(1)];
        for (i, &ai) in ca.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // Reduce by the monic modulus from the top down.
        for t in (self.k..prod.len()).rev() {
            let c = prod[t];
            if c == 0 {
                continue;
            }
            prod[t] = 0;
            for (i, &mi) in self.modulus.iter().enumerate().take(self.k) {
                let pos = t - self.k + i;
                prod[pos] = (prod[pos] + self.p - (c * mi) % self.p) % self.p;
            }
        }
        let mut out = 0;
        for (i, &c) in prod.iter().enumerate().take(self.k) {
            out += c * self.p.pow(i as u32);
        }
        out
    }

    pub fn pow(&self, a: usize, mut e: usize) -> usize {
        let mut base = a;
        let mut out = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        out
    }

    /// Nonzero squares and non-squares, each sorted by element index.
    ///
    /// # Errors
    ///
    /// `EvenOrder` when q is even (every element is a square there and the
    /// residue/non-residue split is vacuous).
    pub fn residues(&self) -> Result<(Vec<usize>, Vec<usize>), FieldError> {
        if self.q % 2 == 0 {
            return Err(FieldError::EvenOrder(self.q));
        }
        let table = self.square_table();
        let squares = (1..self.q).filter(|&e| table[e]).collect();
        let non_squares = (1..self.q).filter(|&e| !table[e]).collect();
        Ok((squares, non_squares))
    }

    fn square_table(&self) -> Vec<bool> {
        let mut table = vec![false; self.q];
        for x in 1..self.q {
            table[self.mul(x, x)] = true;
        }
        table
    }

    /// Difference counts Δ(Q,Q,d), Δ(N,N,d), Δ(Q,N,d) for every nonzero d,
    /// tallied by direct enumeration of pairs.
    ///
    /// # Errors
    ///
    /// `NotOneModFour` unless `q ≡ 1 (mod 4)`; the case split below needs
    /// −1 to be a square.
    ///
    /// # Panics
    ///
    /// Panics if any tallied count disagrees with its closed form
    /// ((q−1)/4 − 1 on the matching side, (q−1)/4 otherwise, and (q−1)/4
    /// for every nonzero mixed difference); a mismatch would mean the field
    /// arithmetic is broken.
    pub fn residue_difference_counts(&self) -> Result<ResidueDifferenceCounts, FieldError> {
        if self.q % 4 != 1 {
            return Err(FieldError::NotOneModFour(self.q));
        }
        let (squares, non_squares) = self.residues()?;
        let is_square = self.square_table();
        let tally = |x: &[usize], y: &[usize]| {
            let mut counts = vec![0usize; self.q];
            for &a in x {
                for &b in y {
                    counts[self.sub(a, b)] += 1;
                }
            }
            counts
        };
        let qq = tally(&squares, &squares);
        let nn = tally(&non_squares, &non_squares);
        let qn = tally(&squares, &non_squares);
        let quarter = (self.q - 1) / 4;
        for d in 1..self.q {
            let (want_qq, want_nn) = if is_square[d] {
                (quarter - 1, quarter)
            } else {
                (quarter, quarter - 1)
            };
            assert_eq!(qq[d], want_qq, "square/square count at d={d}");
            assert_eq!(nn[d], want_nn, "non-square/non-square count at d={d}");
            assert_eq!(qn[d], quarter, "mixed count at d={d}");
        }
        assert_eq!(qn[0], 0, "mixed count at d=0");
        Ok(ResidueDifferenceCounts { q: self.q, qq, nn, qn })
    }
}

/// Per-difference tallies over the residue classes, indexed by element
/// label; entry 0 is meaningful only for `qn` (where it is 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueDifferenceCounts {
    pub q: usize,
    pub qq: Vec<usize>,
    pub nn: Vec<usize>,
    pub qn: Vec<usize>,
}

fn check_parameters(p: usize, k: usize) -> Result<usize, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::BadExtensionDegree(k));
    }
    let mut q = 1usize;
    for _ in 0..k {
        q = q.checked_mul(p).filter(|&q| q <= MAX_ORDER).ok_or(FieldError::OrderTooLarge { p, k })?;
    }
    Ok(q)
}

fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ============================================================================
// Polynomial helpers (coefficients low-to-high, arithmetic over F_p)
// ============================================================================

/// Trial enumeration: a degree-k polynomial is reducible iff some monic
/// divisor of degree in `1..=k/2` divides it.
fn poly_is_irreducible(poly: &[usize], p: usize) -> bool {
    let k = poly.len() - 1;
    let mut divisor = Vec::new();
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for t in 0..count {
            divisor.clear();
            let mut rest = t;
            for _ in 0..d {
                divisor.push(rest % p);
                rest /= p;
            }
            divisor.push(1);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

/// True iff the monic `divisor` divides `poly` over F_p.
fn poly_rem_is_zero(poly: &[usize], divisor: &[usize], p: usize) -> bool {
    let db = divisor.len() - 1;
    let mut rem: Vec<usize> = poly.to_vec();
    while rem.len() > db {
        let c = *rem.last().expect("length checked") % p;
        if c != 0 {
            let shift = rem.len() - 1 - db;
            for (i, &bi) in divisor.iter().enumerate().take(db) {
                rem[shift + i] = (rem[shift + i] + p - (c * bi) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c % p == 0)
}

// ============================================================================
// Two-block Cayley graphs
// ============================================================================

/// Finite abelian group with elements addressed as indices in `0..order`,
/// index 0 the identity.
pub trait AdditiveGroup {
    fn order(&self) -> usize;
    fn add(&self, a: usize, b: usize) -> usize;
    fn neg(&self, a: usize) -> usize;
}

/// The cyclic group Z_m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zm(pub usize);

impl AdditiveGroup for Zm {
    fn order(&self) -> usize {
        self.0
    }

    fn add(&self, a: usize, b: usize) -> usize {
        (a + b) % self.0
    }

    fn neg(&self, a: usize) -> usize {
        (self.0 - a % self.0) % self.0
    }
}

impl AdditiveGroup for FiniteField {
    fn order(&self) -> usize {
        self.q
    }

    fn add(&self, a: usize, b: usize) -> usize {
        FiniteField::add(self, a, b)
    }

    fn neg(&self, a: usize) -> usize {
        FiniteField::neg(self, a)
    }
}

/// Two-block Cayley graph on `2|G|` vertices: blocks are two copies of `G`,
/// adjacency inside block `i` via `D_ii`, across blocks via `D12` (first
/// block `u` adjacent to second-block `v` iff `v − u ∈ D12`). For `G = Z_m`
/// this coincides with the circulant expansion.
///
/// # Errors
///
/// `BadConnectionSet` when a diagonal set contains the identity or is not
/// closed under negation, or when any element is outside the group.
pub fn cayley_two_block<G: AdditiveGroup>(
    group: &G,
    d11: &[usize],
    d12: &[usize],
    d22: &[usize],
) -> Result<Graph, FieldError> {
    let m = group.order();
    check_connection_set(group, "D11", d11, true)?;
    check_connection_set(group, "D12", d12, false)?;
    check_connection_set(group, "D22", d22, true)?;
    let mut g = Graph::empty(2 * m).map_err(|_| FieldError::BadConnectionSet {
        set: "D11",
        reason: format!("group order {m} expands past the graph vertex cap"),
    })?;
    for u in 0..m {
        for &d in d11 {
            g.add_edge(u, group.add(u, d));
        }
        for &d in d22 {
            g.add_edge(m + u, m + group.add(u, d));
        }
        for &d in d12 {
            g.add_edge(u, m + group.add(u, d));
        }
    }
    Ok(g)
}

fn check_connection_set<G: AdditiveGroup>(
    group: &G,
    name: &'static str,
    set: &[usize],
    diagonal: bool,
) -> Result<(), FieldError> {
    let m = group.order();
    let mut member = vec![false; m];
    for &e in set {
        if e >= m {
            return Err(FieldError::BadConnectionSet {
                set: name,
                reason: format!("element {e} outside the group of order {m}"),
            });
        }
        member[e] = true;
    }
    if diagonal {
        if set.contains(&0) {
            return Err(FieldError::BadConnectionSet {
                set: name,
                reason: "contains the identity".into(),
            });
        }
        for &e in set {
            if !member[group.neg(e)] {
                return Err(FieldError::BadConnectionSet {
                    set: name,
                    reason: format!("element {e} present without its negation"),
                });
            }
        }
    }
    Ok(())
}

/// The Paley-type witness `Γ_{F_q}(Q,Q,N)` on `2q` vertices.
///
/// For `q = 2n−1` this graph avoids `B_{n−1}` and its complement avoids
/// `B_n`, so it certifies `R(B_{n−1},B_n) ≥ 4n−1`.
///
/// # Errors
///
/// `NotPrimePower` or `NotOneModFour` for unusable q; `OrderTooLarge` past
/// the field cap.
pub fn paley_book_graph(q: usize) -> Result<Graph, FieldError> {
    let (p, k) = prime_power_split(q).ok_or(FieldError::NotPrimePower(q))?;
    if q % 4 != 1 {
        return Err(FieldError::NotOneModFour(q));
    }
    let field = FiniteField::new(p, k)?;
    let (squares, non_squares) = field.residues()?;
    cayley_two_block(&field, &squares, &squares, &non_squares)
}

/// Writes `q = p^k` with `p` prime, if possible.
pub fn prime_power_split(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return (rest == 1).then_some((p, k));
        }
        p += 1;
    }
    Some((q, 1))
}

// ============================================================================
// Tests
// ============================================================================
