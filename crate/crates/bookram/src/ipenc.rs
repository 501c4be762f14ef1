//! Feasibility integer programs whose 0/1 points are exactly the
//! two-block difference specs passing the book conditions, in CPLEX LP
//! form, plus decoding of solver solutions back into specs.
//!
//! Indicator variables `x_i`, `z_i`, and `w_i` mark membership of `i` in
//! `D11`, `D12`, and `D22`. Each condition family contributes, per
//! difference `d`, products of three indicators (the family's own domain
//! membership of `d` and the two endpoint memberships of one counted
//! pair), linearized the standard way: the product variable is bounded
//! above by each factor and below by their sum minus one less than their
//! count. The family row sums its products and stays below the page
//! bound. Complement memberships appear inline as `1 − v` rather than as
//! mirrored variables, and products with an identically zero factor are
//! skipped, so rows exist for every relevant difference and go slack
//! whenever `d` leaves the family's domain.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{self, Write};

use crate::circulant::{BlockCirculantSpec, SpecError, MAX_BLOCK};
use crate::graph::BookParams;

// ============================================================================
// Errors
// ============================================================================

/// Failure modes of solution handling and decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpError {
    /// The assignment lacks a variable the model or decoder needs.
    MissingVariable { name: String },
    /// A diagonal indicator family is not closed under negation mod `m`.
    NegationClosureViolated { set: &'static str, element: usize },
    /// A solution file line is not `name value`.
    BadSolutionLine { line_number: usize },
    /// The decoded sets fail spec validation.
    Invalid(SpecError),
}

impl fmt::Display for IpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IpError::MissingVariable { name } => {
                write!(f, "assignment is missing variable {name}")
            }
            IpError::NegationClosureViolated { set, element } => {
                write!(f, "{set} holds {element} without its negation")
            }
            IpError::BadSolutionLine { line_number } => {
                write!(f, "solution line {line_number} is not `name value`")
            }
            IpError::Invalid(e) => write!(f, "decoded spec is invalid: {e}"),
        }
    }
}

impl std::error::Error for IpError {}

impl From<SpecError> for IpError {
    fn from(e: SpecError) -> IpError {
        IpError::Invalid(e)
    }
}

// ============================================================================
// Model
// ============================================================================

/// Direction of one linear row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// One linear row: named, integer coefficients over named binaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpConstraint {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// A pure feasibility model over binary variables. Variable and
/// constraint names are unique, and every referenced variable is
/// declared; both are enforced at insertion.
#[derive(Debug, Clone, Default)]
pub struct IpModel {
    vars: Vec<String>,
    var_set: HashSet<String>,
    constraint_names: HashSet<String>,
    constraints: Vec<IpConstraint>,
}

impl IpModel {
    pub fn new() -> IpModel {
        IpModel::default()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn constraints(&self) -> &[IpConstraint] {
        &self.constraints
    }

    /// # Panics
    ///
    /// Panics on a duplicate variable name.
    pub fn add_variable(&mut self, name: String) {
        assert!(self.var_set.insert(name.clone()), "duplicate variable {name}");
        self.vars.push(name);
    }

    /// # Panics
    ///
    /// Panics on a duplicate row name or an undeclared variable.
    pub fn add_constraint(&mut self, c: IpConstraint) {
        assert!(
            self.constraint_names.insert(c.name.clone()),
            "duplicate constraint {}",
            c.name
        );
        for (_, v) in &c.terms {
            assert!(self.var_set.contains(v), "row {} references undeclared {v}", c.name);
        }
        self.constraints.push(c);
    }

    /// Evaluates every row under a 0/1 assignment.
    ///
    /// # Errors
    ///
    /// `MissingVariable` when a referenced variable has no value.
    pub fn satisfied_by(&self, assignment: &HashMap<String, bool>) -> Result<bool, IpError> {
        for c in &self.constraints {
            let mut lhs: i64 = 0;
            for (coef, var) in &c.terms {
                let bit = assignment
                    .get(var)
                    .copied()
                    .ok_or_else(|| IpError::MissingVariable { name: var.clone() })?;
                lhs += coef * i64::from(bit);
            }
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Ge => lhs >= c.rhs,
                Sense::Eq => lhs == c.rhs,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Structural restrictions layered onto the base model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IpOptions {
    /// Eliminate `w` by taking `D22` as the complement of `D11` away
    /// from zero.
    pub complement_ansatz: bool,
    /// Force `D12 = D11` with equality rows.
    pub d11_eq_d12: bool,
    /// Elements forced into `D11`; each must lie in `1..m`.
    pub pinned: Vec<usize>,
}

// ============================================================================
// Family table
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SetRef {
    D11,
    D12,
    D22,
    CoD11,
    CoD12,
    CoD22,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarKind {
    X,
    Z,
    W,
}

impl VarKind {
    fn name(self, i: usize) -> String {
        match self {
            VarKind::X => format!("x{i}"),
            VarKind::Z => format!("z{i}"),
            VarKind::W => format!("w{i}"),
        }
    }
}

/// One membership factor after resolving set conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    Var(VarKind, usize),
    OneMinus(VarKind, usize),
    Zero,
}

/// Membership indicator of `i` in the referenced set, with complements
/// inlined and the forced-empty zero positions resolved away.
fn indicator(set: SetRef, i: usize, ansatz: bool) -> Factor {
    match set {
        SetRef::D11 => {
            if i == 0 {
                Factor::Zero
            } else {
                Factor::Var(VarKind::X, i)
            }
        }
        SetRef::D12 => Factor::Var(VarKind::Z, i),
        SetRef::D22 => {
            if i == 0 {
                Factor::Zero
            } else if ansatz {
                Factor::OneMinus(VarKind::X, i)
            } else {
                Factor::Var(VarKind::W, i)
            }
        }
        SetRef::CoD11 => {
            if i == 0 {
                Factor::Zero
            } else {
                Factor::OneMinus(VarKind::X, i)
            }
        }
        SetRef::CoD12 => Factor::OneMinus(VarKind::Z, i),
        SetRef::CoD22 => {
            if i == 0 {
                Factor::Zero
            } else if ansatz {
                Factor::Var(VarKind::X, i)
            } else {
                Factor::OneMinus(VarKind::W, i)
            }
        }
    }
}

/// One counted pair family: terms `[i ∈ a][μ(i) ∈ b]` summed over `i`,
/// where `μ` pairs `i` with `i − d` (difference count) or `d − i`
/// (sum count).
#[derive(Debug, Clone, Copy)]
struct CountSpec {
    a: SetRef,
    b: SetRef,
    negate: bool,
}

#[derive(Debug, Clone, Copy)]
struct FamilySpec {
    tag: &'static str,
    dom: SetRef,
    counts: [CountSpec; 2],
    /// Whether difference 0 is a relevant row (cross-set domains only).
    zero_d: bool,
}

fn families() -> [FamilySpec; 6] {
    use SetRef::*;
    [
        FamilySpec {
            tag: "d11",
            dom: D11,
            counts: [
                CountSpec { a: D11, b: D11, negate: false },
                CountSpec { a: D12, b: D12, negate: false },
            ],
            zero_d: false,
        },
        FamilySpec {
            tag: "d22",
            dom: D22,
            counts: [
                CountSpec { a: D22, b: D22, negate: false },
                CountSpec { a: D12, b: D12, negate: false },
            ],
            zero_d: false,
        },
        FamilySpec {
            tag: "d12",
            dom: D12,
            counts: [
                CountSpec { a: D11, b: D12, negate: true },
                CountSpec { a: D12, b: D22, negate: false },
            ],
            zero_d: true,
        },
        FamilySpec {
            tag: "cod11",
            dom: CoD11,
            counts: [
                CountSpec { a: CoD11, b: CoD11, negate: false },
                CountSpec { a: CoD12, b: CoD12, negate: false },
            ],
            zero_d: false,
        },
        FamilySpec {
            tag: "cod22",
            dom: CoD22,
            counts: [
                CountSpec { a: CoD22, b: CoD22, negate: false },
                CountSpec { a: CoD12, b: CoD12, negate: false },
            ],
            zero_d: false,
        },
        FamilySpec {
            tag: "cod12",
            dom: CoD12,
            counts: [
                CountSpec { a: CoD11, b: CoD12, negate: true },
                CountSpec { a: CoD12, b: CoD22, negate: false },
            ],
            zero_d: true,
        },
    ]
}

/// Resolves one product term to its name and distinct factors, or `None`
/// when a factor is identically zero or a variable meets its own
/// complement.
fn term(
    m: usize,
    ansatz: bool,
    fam: &FamilySpec,
    count_idx: usize,
    d: usize,
    i: usize,
) -> Option<(String, Vec<Factor>)> {
    let count = &fam.counts[count_idx];
    // delta pairs difference d: partner of i is i − d; sigma pairs sum d:
    // partner is d − i.
    let bj = if count.negate { (d + m - i) % m } else { (i + m - d) % m };
    let raw = [
        indicator(fam.dom, d, ansatz),
        indicator(count.a, i, ansatz),
        indicator(count.b, bj, ansatz),
    ];
    let mut factors: Vec<Factor> = Vec::with_capacity(3);
    for f in raw {
        if f == Factor::Zero {
            return None;
        }
        if !factors.contains(&f) {
            factors.push(f);
        }
    }
    for f in &factors {
        let opposite = match *f {
            Factor::Var(k, i) => Factor::OneMinus(k, i),
            Factor::OneMinus(k, i) => Factor::Var(k, i),
            Factor::Zero => unreachable!(),
        };
        if factors.contains(&opposite) {
            return None;
        }
    }
    let prefix = if count_idx == 0 { "s" } else { "u" };
    Some((format!("{prefix}_{}_{d}_{i}", fam.tag), factors))
}

// ============================================================================
// Encoding
// ============================================================================

/// Builds the feasibility program for block size `m` and the given page
/// bounds. Feasible 0/1 points correspond exactly to specs passing the
/// book conditions: indicators decode to the difference sets, equality
/// rows force diagonal negation closure and an empty zero position, and
/// each family row caps its gated product sum at one below the bound.
///
/// # Panics
///
/// Panics when `m` is outside `2..=MAX_BLOCK` or a pinned element is
/// outside `1..m`.
pub fn encode_block_circulant_ip(m: usize, p: BookParams, opts: &IpOptions) -> IpModel {
    assert!((2..=MAX_BLOCK).contains(&m), "block size {m} out of range");
    for &e in &opts.pinned {
        assert!((1..m).contains(&e), "pinned element {e} outside 1..{m}");
    }
    let mut model = IpModel::new();
    for i in 0..m {
        model.add_variable(VarKind::X.name(i));
    }
    for i in 0..m {
        model.add_variable(VarKind::Z.name(i));
    }
    if !opts.complement_ansatz {
        for i in 0..m {
            model.add_variable(VarKind::W.name(i));
        }
    }
    for (idx, fam) in families().iter().enumerate() {
        let bound = if idx < 3 { p.r } else { p.s };
        let d_start = usize::from(!fam.zero_d);
        for d in d_start..m {
            let mut row_terms: Vec<(i64, String)> = Vec::new();
            for count_idx in 0..2 {
                for i in 0..m {
                    let Some((pv, factors)) = term(m, opts.complement_ansatz, fam, count_idx, d, i)
                    else {
                        continue;
                    };
                    model.add_variable(pv.clone());
                    let mut lb_terms = vec![(1, pv.clone())];
                    let mut lb_rhs = -(factors.len() as i64 - 1);
                    for (fi, f) in factors.iter().enumerate() {
                        let (up_terms, up_rhs, lb_term) = match *f {
                            Factor::Var(k, i) => {
                                (vec![(1, pv.clone()), (-1, k.name(i))], 0, (-1, k.name(i)))
                            }
                            Factor::OneMinus(k, i) => {
                                // t ≤ 1 − v and the lower bound picks up
                                // the complement's constant.
                                lb_rhs += 1;
                                (vec![(1, pv.clone()), (1, k.name(i))], 1, (1, k.name(i)))
                            }
                            Factor::Zero => unreachable!(),
                        };
                        model.add_constraint(IpConstraint {
                            name: format!("{pv}_u{}", fi + 1),
                            terms: up_terms,
                            sense: Sense::Le,
                            rhs: up_rhs,
                        });
                        lb_terms.push(lb_term);
                    }
                    model.add_constraint(IpConstraint {
                        name: format!("{pv}_lb"),
                        terms: lb_terms,
                        sense: Sense::Ge,
                        rhs: lb_rhs,
                    });
                    row_terms.push((1, pv));
                }
            }
            if row_terms.is_empty() {
                continue;
            }
            model.add_constraint(IpConstraint {
                name: format!("row_{}_{d}", fam.tag),
                terms: row_terms,
                sense: Sense::Le,
                rhs: bound as i64 - 1,
            });
        }
    }
    model.add_constraint(IpConstraint {
        name: "fix_x0".into(),
        terms: vec![(1, "x0".into())],
        sense: Sense::Eq,
        rhs: 0,
    });
    if !opts.complement_ansatz {
        model.add_constraint(IpConstraint {
            name: "fix_w0".into(),
            terms: vec![(1, "w0".into())],
            sense: Sense::Eq,
            rhs: 0,
        });
    }
    for kind in [VarKind::X, VarKind::W] {
        if kind == VarKind::W && opts.complement_ansatz {
            continue;
        }
        let tag = if kind == VarKind::X { "x" } else { "w" };
        for i in 1..m {
            if i < m - i {
                model.add_constraint(IpConstraint {
                    name: format!("sym_{tag}_{i}"),
                    terms: vec![(1, kind.name(i)), (-1, kind.name(m - i))],
                    sense: Sense::Eq,
                    rhs: 0,
                });
            }
        }
    }
    if opts.d11_eq_d12 {
        for i in 0..m {
            model.add_constraint(IpConstraint {
                name: format!("eq_xz_{i}"),
                terms: vec![(1, VarKind::Z.name(i)), (-1, VarKind::X.name(i))],
                sense: Sense::Eq,
                rhs: 0,
            });
        }
    }
    let mut pins = opts.pinned.clone();
    pins.sort_unstable();
    pins.dedup();
    for e in pins {
        model.add_constraint(IpConstraint {
            name: format!("pin_{e}"),
            terms: vec![(1, VarKind::X.name(e))],
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    model
}

// ============================================================================
// Assignments and decoding
// ============================================================================

/// Full assignment from raw indicator bits: indicator variables per the
/// options' variable layout, every product evaluated from its factors.
fn assignment_from_bits(
    m: usize,
    ansatz: bool,
    bit: &impl Fn(VarKind, usize) -> bool,
) -> HashMap<String, bool> {
    let mut a = HashMap::new();
    for i in 0..m {
        a.insert(VarKind::X.name(i), bit(VarKind::X, i));
        a.insert(VarKind::Z.name(i), bit(VarKind::Z, i));
        if !ansatz {
            a.insert(VarKind::W.name(i), bit(VarKind::W, i));
        }
    }
    for fam in &families() {
        let d_start = usize::from(!fam.zero_d);
        for d in d_start..m {
            for count_idx in 0..2 {
                for i in 0..m {
                    let Some((pv, factors)) = term(m, ansatz, fam, count_idx, d, i) else {
                        continue;
                    };
                    let value = factors.iter().all(|f| match *f {
                        Factor::Var(k, i) => bit(k, i),
                        Factor::OneMinus(k, i) => !bit(k, i),
                        Factor::Zero => unreachable!(),
                    });
                    a.insert(pv, value);
                }
            }
        }
    }
    a
}

/// The canonical assignment of a spec: indicators from set membership,
/// products from their factors. Satisfies the model built with the same
/// options exactly when the spec passes the book conditions; under the
/// complement ansatz the spec's `D22` should follow that convention or
/// the model's rows will not match.
pub fn spec_to_assignment(spec: &BlockCirculantSpec, opts: &IpOptions) -> HashMap<String, bool> {
    let contains = |set: &[usize], i: usize| set.binary_search(&i).is_ok();
    let bit = |k: VarKind, i: usize| match k {
        VarKind::X => contains(spec.d11(), i),
        VarKind::Z => contains(spec.d12(), i),
        VarKind::W => contains(spec.d22(), i),
    };
    assignment_from_bits(spec.m(), opts.complement_ansatz, &bit)
}

/// Reads the difference sets back out of a solution's indicator values.
///
/// # Errors
///
/// `MissingVariable` when an indicator is absent, `NegationClosureViolated`
/// when a diagonal set is asymmetric, `Invalid` when spec validation
/// rejects the sets.
pub fn solution_to_spec(
    m: usize,
    assignment: &HashMap<String, bool>,
    opts: &IpOptions,
) -> Result<BlockCirculantSpec, IpError> {
    let read = |kind: VarKind, i: usize| -> Result<bool, IpError> {
        let name = kind.name(i);
        assignment
            .get(&name)
            .copied()
            .ok_or(IpError::MissingVariable { name })
    };
    let read_diagonal = |kind: VarKind, set_name: &'static str| -> Result<Vec<usize>, IpError> {
        let mut set = Vec::new();
        for i in 1..m {
            if read(kind, i)? {
                set.push(i);
            }
        }
        for &e in &set {
            if set.binary_search(&(m - e)).is_err() {
                return Err(IpError::NegationClosureViolated { set: set_name, element: e });
            }
        }
        Ok(set)
    };
    let d11 = read_diagonal(VarKind::X, "D11")?;
    let mut d12 = Vec::new();
    for i in 0..m {
        if read(VarKind::Z, i)? {
            d12.push(i);
        }
    }
    if opts.complement_ansatz {
        Ok(BlockCirculantSpec::with_complement_d22(m, d11, d12)?)
    } else {
        let d22 = read_diagonal(VarKind::W, "D22")?;
        Ok(BlockCirculantSpec::new(m, d11, d12, d22)?)
    }
}

/// Parses the common solver dump shape: one `name value` pair per line,
/// numeric values rounded to bits. Blank lines are skipped.
///
/// # Errors
///
/// `BadSolutionLine` (1-based) on any other shape.
pub fn parse_solution(text: &str) -> Result<HashMap<String, bool>, IpError> {
    let mut out = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let Some(name) = parts.next() else { continue };
        let value: f64 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or(IpError::BadSolutionLine { line_number: idx + 1 })?;
        if parts.next().is_some() {
            return Err(IpError::BadSolutionLine { line_number: idx + 1 });
        }
        out.insert(name.to_string(), value > 0.5);
    }
    Ok(out)
}

// ============================================================================
// LP output
// ============================================================================

/// Writes the model in CPLEX LP form: constant objective, rows in
/// declaration order, every variable listed under `Binary`.
///
/// # Errors
///
/// Propagates sink I/O errors.
pub fn write_lp(model: &IpModel, sink: &mut impl Write) -> io::Result<()> {
    writeln!(sink, "Minimize")?;
    writeln!(sink, " obj: 0")?;
    writeln!(sink, "Subject To")?;
    for c in &model.constraints {
        write!(sink, " {}:", c.name)?;
        for (idx, (coef, var)) in c.terms.iter().enumerate() {
            let sign = if *coef < 0 { "-" } else if idx == 0 { "" } else { "+" };
            let mag = coef.unsigned_abs();
            if sign.is_empty() {
                write!(sink, " ")?;
            } else {
                write!(sink, " {sign} ")?;
            }
            if mag != 1 {
                write!(sink, "{mag} ")?;
            }
            write!(sink, "{var}")?;
        }
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        writeln!(sink, " {sense} {}", c.rhs)?;
    }
    writeln!(sink, "Binary")?;
    for v in &model.vars {
        writeln!(sink, " {v}")?;
    }
    writeln!(sink, "End")?;
    Ok(())
}

/// LP text of the model.
pub fn lp_string(model: &IpModel) -> String {
    let mut buf = Vec::new();
    write_lp(model, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("LP output is ASCII")
}

// ============================================================================
// Tests
// ============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn appendix_b5_b7() -> BlockCirculantSpec {
        BlockCirculantSpec::with_complement_d22(
            12,
            vec![2, 4, 5, 7, 8, 10],
            vec![0, 3, 4, 6, 11],
        )
        .unwrap()
    }

    fn ansatz() -> IpOptions {
        IpOptions { complement_ansatz: true, ..IpOptions::default() }
    }

    #[test]
    fn appendix_witness_satisfies_every_row() {
        let p = BookParams::new(5, 7);
        let spec = appendix_b5_b7();
        assert!(spec.check_book_conditions(p).passes());
        let model = encode_block_circulant_ip(12, p, &ansatz());
        let a = spec_to_assignment(&spec, &ansatz());
        assert!(model.satisfied_by(&a).unwrap());
    }

    #[test]
    fn full_sets_violate_the_rows() {
        let p = BookParams::new(5, 7);
        let all: Vec<usize> = (1..12).collect();
        let spec = BlockCirculantSpec::new(12, all.clone(), (0..12).collect(), all).unwrap();
        assert!(!spec.check_book_conditions(p).passes());
        let model = encode_block_circulant_ip(12, p, &IpOptions::default());
        let a = spec_to_assignment(&spec, &IpOptions::default());
        assert!(!model.satisfied_by(&a).unwrap());
    }

    #[test]
    fn row_satisfaction_tracks_the_condition_report() {
        let p = BookParams::new(5, 7);
        let base = appendix_b5_b7();
        let model = encode_block_circulant_ip(12, p, &ansatz());
        let mut disagreements = 0;
        for extra in 1..12usize {
            if base.d12().contains(&extra) {
                continue;
            }
            let mut d12 = base.d12().to_vec();
            d12.push(extra);
            let spec =
                BlockCirculantSpec::with_complement_d22(12, base.d11().to_vec(), d12).unwrap();
            let a = spec_to_assignment(&spec, &ansatz());
            let feasible = model.satisfied_by(&a).unwrap();
            assert_eq!(feasible, spec.check_book_conditions(p).passes());
            if !feasible {
                disagreements += 1;
            }
        }
        assert!(disagreements > 0, "no perturbation exercised the failing side");
    }

    #[test]
    fn variable_count_matches_hand_accounting() {
        // 24 indicators; per family and difference the nonskipped terms:
        // diagonal-domain families lose the zero positions, cross-domain
        // families keep all twelve rows.
        let model = encode_block_circulant_ip(12, BookParams::new(5, 7), &ansatz());
        let products = 4 * (11 * 10 + 11 * 12) + 2 * (12 * 11 + 12 * 11);
        assert_eq!(model.variables().len(), 24 + products);
        assert_eq!(model.variables().len(), 1520);
    }

    /// Exhausts indicator assignments and compares model feasibility with
    /// the reference predicate on decoded sets.
    fn assert_bijection(m: usize, p: BookParams, ansatz_on: bool) {
        let opts = IpOptions { complement_ansatz: ansatz_on, ..IpOptions::default() };
        let model = encode_block_circulant_ip(m, p, &opts);
        let w_masks = if ansatz_on { 1u32 } else { 1 << m };
        for xm in 0u32..1 << m {
            for zm in 0u32..1 << m {
                for wm in 0..w_masks {
                    let bit = |k: VarKind, i: usize| match k {
                        VarKind::X => xm >> i & 1 == 1,
                        VarKind::Z => zm >> i & 1 == 1,
                        VarKind::W => wm >> i & 1 == 1,
                    };
                    let a = assignment_from_bits(m, ansatz_on, &bit);
                    let feasible = model.satisfied_by(&a).unwrap();
                    let closed = |mask: u32| (1..m).all(|i| mask >> i & 1 == mask >> (m - i) & 1);
                    let structural = xm & 1 == 0
                        && closed(xm)
                        && (ansatz_on || (wm & 1 == 0 && closed(wm)));
                    let reference = structural && {
                        let collect = |mask: u32, from: usize| {
                            (from..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>()
                        };
                        let spec = if ansatz_on {
                            BlockCirculantSpec::with_complement_d22(
                                m,
                                collect(xm, 1),
                                collect(zm, 0),
                            )
                        } else {
                            BlockCirculantSpec::new(
                                m,
                                collect(xm, 1),
                                collect(zm, 0),
                                collect(wm, 1),
                            )
                        };
                        spec.unwrap().check_book_conditions(p).passes()
                    };
                    assert_eq!(
                        feasible, reference,
                        "m={m} r={} s={} ansatz={ansatz_on} x={xm:b} z={zm:b} w={wm:b}",
                        p.r, p.s
                    );
                }
            }
        }
    }

    #[test]
    fn feasible_points_are_exactly_the_passing_specs() {
        for m in 2..=4 {
            for (r, s) in [(1, 1), (1, 2), (2, 2)] {
                assert_bijection(m, BookParams::new(r, s), false);
                assert_bijection(m, BookParams::new(r, s), true);
            }
        }
    }

    #[test]
    fn four_vertex_avoiders_make_the_smallest_model_feasible() {
        // The path on four vertices and its complement are triangle-free.
        let p = BookParams::new(1, 1);
        let spec = BlockCirculantSpec::new(2, vec![1], vec![1], vec![]).unwrap();
        assert!(spec.check_book_conditions(p).passes());
        let model = encode_block_circulant_ip(2, p, &IpOptions::default());
        let a = spec_to_assignment(&spec, &IpOptions::default());
        assert!(model.satisfied_by(&a).unwrap());
    }

    #[test]
    fn option_rows_append_without_touching_base_rows() {
        let p = BookParams::new(2, 2);
        let base = encode_block_circulant_ip(8, p, &IpOptions::default());
        let restricted = encode_block_circulant_ip(
            8,
            p,
            &IpOptions { complement_ansatz: false, d11_eq_d12: true, pinned: vec![1, 3] },
        );
        assert_eq!(
            base.constraints(),
            &restricted.constraints()[..base.constraints().len()]
        );
        assert_eq!(
            restricted.constraints().len(),
            base.constraints().len() + 8 + 2
        );
    }

    #[test]
    fn decoding_reads_back_the_appendix_indicators() {
        let spec = appendix_b5_b7();
        let a = spec_to_assignment(&spec, &ansatz());
        let decoded = solution_to_spec(12, &a, &ansatz()).unwrap();
        assert_eq!(decoded, spec);
    }

    #[test]
    fn decoding_all_zero_indicators_yields_empty_sets() {
        let a = assignment_from_bits(5, true, &|_, _| false);
        let spec = solution_to_spec(5, &a, &ansatz()).unwrap();
        assert!(spec.d11().is_empty());
        assert!(spec.d12().is_empty());
        assert_eq!(spec.d22(), &[1, 2, 3, 4]);
    }

    #[test]
    fn decoding_rejects_asymmetric_indicators() {
        let mut a = assignment_from_bits(5, true, &|_, _| false);
        a.insert("x1".into(), true);
        assert_eq!(
            solution_to_spec(5, &a, &ansatz()),
            Err(IpError::NegationClosureViolated { set: "D11", element: 1 })
        );
    }

    #[test]
    fn decoding_requires_every_indicator() {
        let mut a = assignment_from_bits(5, true, &|_, _| false);
        a.remove("z3");
        assert_eq!(
            solution_to_spec(5, &a, &ansatz()),
            Err(IpError::MissingVariable { name: "z3".into() })
        );
    }

    #[test]
    fn random_specs_round_trip_through_assignments() {
        let mut rng = StdRng::seed_from_u64(0x1b0c);
        for _ in 0..100 {
            let m = rng.gen_range(2..=20usize);
            let symmetric = |rng: &mut StdRng| {
                let mut set = Vec::new();
                for i in 1..=m / 2 {
                    if rng.gen_bool(0.5) {
                        set.push(i);
                        set.push(m - i);
                    }
                }
                set
            };
            let d11 = symmetric(&mut rng);
            let d12: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
            let (spec, opts) = if rng.gen_bool(0.5) {
                (
                    BlockCirculantSpec::with_complement_d22(m, d11, d12).unwrap(),
                    ansatz(),
                )
            } else {
                let d22 = symmetric(&mut rng);
                (
                    BlockCirculantSpec::new(m, d11, d12, d22).unwrap(),
                    IpOptions::default(),
                )
            };
            let a = spec_to_assignment(&spec, &opts);
            assert_eq!(solution_to_spec(spec.m(), &a, &opts).unwrap(), spec);
        }
    }

    #[test]
    fn solution_parsing_accepts_the_common_dump_shape() {
        let text = "x1 1\nz0 0.0000\n\nw2 0.99999\n";
        let map = parse_solution(text).unwrap();
        assert_eq!(map.get("x1"), Some(&true));
        assert_eq!(map.get("z0"), Some(&false));
        assert_eq!(map.get("w2"), Some(&true));
        assert_eq!(map.len(), 3);
        assert_eq!(
            parse_solution("x1 one\n"),
            Err(IpError::BadSolutionLine { line_number: 1 })
        );
        assert_eq!(
            parse_solution("x1\n"),
            Err(IpError::BadSolutionLine { line_number: 1 })
        );
    }

    #[test]
    fn lp_output_formats_the_pinned_examples() {
        assert_eq!(lp_string(&IpModel::new()), "Minimize\n obj: 0\nSubject To\nBinary\nEnd\n");
        let mut model = IpModel::new();
        model.add_variable("x".into());
        model.add_variable("y".into());
        model.add_constraint(IpConstraint {
            name: "c1".into(),
            terms: vec![(1, "x".into()), (1, "y".into())],
            sense: Sense::Le,
            rhs: 1,
        });
        assert_eq!(
            lp_string(&model),
            "Minimize\n obj: 0\nSubject To\n c1: x + y <= 1\nBinary\n x\n y\nEnd\n"
        );
    }

    #[test]
    fn lp_output_is_deterministic() {
        let p = BookParams::new(5, 7);
        let a = lp_string(&encode_block_circulant_ip(12, p, &ansatz()));
        let b = lp_string(&encode_block_circulant_ip(12, p, &ansatz()));
        assert_eq!(a, b);
        assert!(a.contains(" row_d11_1:"));
        assert!(a.contains(" fix_x0: x0 = 0"));
    }
}
