use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::simplex::{lp_max, FeasibilitySystem, LpOutcome, Relation};
use crate::iru::{right_product, IruSet, DEFAULT_ENUM_CAP};
use crate::linalg::{Matrix, Rational, Vector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CertificateKind {
    /// `ρ̂ < α`: positive `v` with `A v < α v` for all members.
    JsrLt,
    /// `ρ̂ ≤ α`: positive `v` with `A v ≤ α v`.
    JsrLe,
    /// `ρ̌ > α`: positive `v` with `A v > α v`.
    JssrGt,
    /// `ρ̌ ≥ α`: non-negative non-zero `v` with `A v ≥ α v`.
    JssrGe,
    /// Minimax value `< α`: a first-player matrix and a `JsrLt` vector for the
    /// second player's family multiplied by it.
    MmLt,
    /// Minimax value `≥ α`: a second-player matrix and a `JssrGe` vector.
    MmGe,
    /// Minimax value `≤ α` (positive families only).
    MmLe,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::JsrLt => "jsr<",
            CertificateKind::JsrLe => "jsr<=",
            CertificateKind::JssrGt => "jssr>",
            CertificateKind::JssrGe => "jssr>=",
            CertificateKind::MmLt => "mm<",
            CertificateKind::MmGe => "mm>=",
            CertificateKind::MmLe => "mm<=",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "jsr<" => CertificateKind::JsrLt,
            "jsr<=" => CertificateKind::JsrLe,
            "jssr>" => CertificateKind::JssrGt,
            "jssr>=" => CertificateKind::JssrGe,
            "mm<" => CertificateKind::MmLt,
            "mm>=" => CertificateKind::MmGe,
            "mm<=" => CertificateKind::MmLe,
            _ => return None,
        })
    }

    fn is_minimax(self) -> bool {
        matches!(self, CertificateKind::MmLt | CertificateKind::MmGe | CertificateKind::MmLe)
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub vector: Vector,
    pub chosen_matrix: Option<Matrix>,
}

/// Answer to a threshold query, with a witness when the answer is yes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

impl Decision {
    fn no() -> Self {
        Decision { holds: false, certificate: None }
    }

    fn yes(certificate: Certificate) -> Self {
        Decision { holds: true, certificate: Some(certificate) }
    }
}

fn check_square(s: &IruSet) -> Result<()> {
    if s.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: s.n_rows(), cols: s.n_cols() })
    }
}

fn require_positive(s: &IruSet, what: &str) -> Result<()> {
    if s.is_positive() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{what} is only decided for entrywise positive families")))
    }
}

/// Rows of `row · v − α v_i` (plus an optional trailing ε column).
fn row_constraints(s: &IruSet, alpha: &Rational, extra: usize) -> Vec<(Vec<Rational>, usize)> {
    let n = s.n_cols();
    let mut out = Vec::new();
    for (i, rs) in s.row_sets().iter().enumerate() {
        for r in rs.rows() {
            let mut coeffs: Vec<Rational> = r.clone();
            coeffs[i] -= alpha;
            coeffs.resize(n + extra, Rational::zero());
            out.push((coeffs, i));
        }
    }
    out
}

fn vector_part(point: &[Rational], n: usize) -> Vector {
    Vector::column(point[..n].to_vec())
}

/// Maximizes ε subject to `sign·(row·v − α v_i) + ε ≤ 0`, `v ≥ 1`, `ε ≤ 1`.
fn strict_margin(s: &IruSet, alpha: &Rational, sign: i32) -> Option<Vector> {
    let n = s.n_cols();
    let mut sys = FeasibilitySystem::new(n + 1);
    sys.set_free(n);
    for (mut coeffs, _) in row_constraints(s, alpha, 1) {
        if sign < 0 {
            coeffs.iter_mut().for_each(|c| *c = -c.clone());
        }
        coeffs[n] = Rational::one();
        sys.add(coeffs, Relation::Le, Rational::zero()).expect("consistent width");
    }
    for i in 0..n {
        sys.bound(i, Relation::Ge, Rational::one());
    }
    sys.bound(n, Relation::Le, Rational::one());
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = Rational::one();
    sys.maximize(objective).expect("consistent width");
    match lp_max(&sys) {
        LpOutcome::Optimal { value, point } if value.is_positive() => Some(vector_part(&point, n)),
        _ => None,
    }
}

/// Exact decision of `ρ̂(s) < α`.
pub fn decide_jsr_lt(s: &IruSet, alpha: &Rational) -> Result<Decision> {
    check_square(s)?;
    Ok(match strict_margin(s, alpha, 1) {
        Some(v) => Decision::yes(Certificate { kind: CertificateKind::JsrLt, vector: v, chosen_matrix: None }),
        None => Decision::no(),
    })
}

/// Exact decision of `ρ̌(s) > α`, for positive families.
pub fn decide_jssr_gt(s: &IruSet, alpha: &Rational) -> Result<Decision> {
    check_square(s)?;
    require_positive(s, "jssr>")?;
    Ok(match strict_margin(s, alpha, -1) {
        Some(v) => Decision::yes(Certificate { kind: CertificateKind::JssrGt, vector: v, chosen_matrix: None }),
        None => Decision::no(),
    })
}

/// Exact decision of `ρ̂(s) ≤ α`, for positive families.
pub fn decide_jsr_le(s: &IruSet, alpha: &Rational) -> Result<Decision> {
    check_square(s)?;
    require_positive(s, "jsr<=")?;
    let n = s.n_cols();
    let mut sys = FeasibilitySystem::new(n);
    for (coeffs, _) in row_constraints(s, alpha, 0) {
        sys.add(coeffs, Relation::Le, Rational::zero())?;
    }
    for i in 0..n {
        sys.bound(i, Relation::Ge, Rational::one());
    }
    Ok(match lp_max(&sys) {
        LpOutcome::Optimal { point, .. } => Decision::yes(Certificate {
            kind: CertificateKind::JsrLe,
            vector: vector_part(&point, n),
            chosen_matrix: None,
        }),
        _ => Decision::no(),
    })
}

/// Exact decision of `ρ̌(s) ≥ α`, as a disjunction over which coordinate of
/// the witness is normalized to be at least one.
pub fn decide_jssr_ge(s: &IruSet, alpha: &Rational) -> Result<Decision> {
    check_square(s)?;
    let n = s.n_cols();
    let rows = row_constraints(s, alpha, 0);
    for pivot in 0..n {
        let mut sys = FeasibilitySystem::new(n);
        for (coeffs, _) in &rows {
            sys.add(coeffs.clone(), Relation::Ge, Rational::zero())?;
        }
        sys.bound(pivot, Relation::Ge, Rational::one());
        if let LpOutcome::Optimal { point, .. } = lp_max(&sys) {
            return Ok(Decision::yes(Certificate {
                kind: CertificateKind::JssrGe,
                vector: vector_part(&point, n),
                chosen_matrix: None,
            }));
        }
    }
    Ok(Decision::no())
}

fn check_pair(a_set: &IruSet, e_set: &IruSet) -> Result<()> {
    if a_set.n_cols() != e_set.n_rows() || e_set.n_cols() != a_set.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "families of shapes {}x{} and {}x{} do not compose",
            a_set.n_rows(),
            a_set.n_cols(),
            e_set.n_rows(),
            e_set.n_cols()
        )));
    }
    Ok(())
}

/// Searches `guesses` (in enumeration order) for one whose induced family
/// passes `inner`; the first success in order wins even when run in parallel.
fn search(
    guesses: &IruSet,
    other: &IruSet,
    cap: u128,
    kind: CertificateKind,
    inner: impl Fn(&IruSet) -> Result<Decision> + Sync,
) -> Result<Decision> {
    let choices: Vec<Vec<usize>> = guesses.choices(cap)?.collect();
    let found = choices
        .par_iter()
        .map(|c| -> Result<Option<Certificate>> {
            let chosen = guesses.member(c);
            let family = right_product(other, &chosen)?;
            let d = inner(&family)?;
            Ok(d.certificate.map(|cert| Certificate { kind, vector: cert.vector, chosen_matrix: Some(chosen) }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        Some(Ok(Some(cert))) => Ok(Decision::yes(cert)),
        Some(Err(e)) => Err(e),
        _ => Ok(Decision::no()),
    }
}

/// Exact decision of `min_A max_E ρ(A E) < α`.
pub fn decide_mm_lt(a_set: &IruSet, e_set: &IruSet, alpha: &Rational) -> Result<Decision> {
    decide_mm_lt_with_cap(a_set, e_set, alpha, DEFAULT_ENUM_CAP)
}

pub fn decide_mm_lt_with_cap(a_set: &IruSet, e_set: &IruSet, alpha: &Rational, cap: u128) -> Result<Decision> {
    check_pair(a_set, e_set)?;
    search(a_set, e_set, cap, CertificateKind::MmLt, |f| decide_jsr_lt(f, alpha))
}

/// Exact decision of `min_A max_E ρ(A E) ≥ α`; always the negation of
/// [`decide_mm_lt`].
pub fn decide_mm_ge(a_set: &IruSet, e_set: &IruSet, alpha: &Rational) -> Result<Decision> {
    decide_mm_ge_with_cap(a_set, e_set, alpha, DEFAULT_ENUM_CAP)
}

pub fn decide_mm_ge_with_cap(a_set: &IruSet, e_set: &IruSet, alpha: &Rational, cap: u128) -> Result<Decision> {
    check_pair(a_set, e_set)?;
    search(e_set, a_set, cap, CertificateKind::MmGe, |f| decide_jssr_ge(f, alpha))
}

/// Exact decision of `min_A max_E ρ(A E) ≤ α` for positive families.
pub fn decide_mm_le(a_set: &IruSet, e_set: &IruSet, alpha: &Rational) -> Result<Decision> {
    decide_mm_le_with_cap(a_set, e_set, alpha, DEFAULT_ENUM_CAP)
}

pub fn decide_mm_le_with_cap(a_set: &IruSet, e_set: &IruSet, alpha: &Rational, cap: u128) -> Result<Decision> {
    check_pair(a_set, e_set)?;
    require_positive(a_set, "mm<=")?;
    require_positive(e_set, "mm<=")?;
    search(a_set, e_set, cap, CertificateKind::MmLe, |f| decide_jsr_le(f, alpha))
}

/// Re-checks every inequality a certificate claims, without solving anything.
///
/// `a_set` is the family for single-family kinds and the first player's
/// family for minimax kinds; `e_set` is required for the latter.
pub fn verify_certificate(
    cert: &Certificate,
    a_set: &IruSet,
    e_set: Option<&IruSet>,
    alpha: &Rational,
) -> Result<bool> {
    use CertificateKind::*;
    let family = if cert.kind.is_minimax() {
        let e_set =
            e_set.ok_or_else(|| Error::CertificateShape(format!("{} certificate needs both families", cert.kind)))?;
        check_pair(a_set, e_set)?;
        let chosen = cert
            .chosen_matrix
            .as_ref()
            .ok_or_else(|| Error::CertificateShape(format!("{} certificate lacks its chosen matrix", cert.kind)))?;
        let (owner, other) = match cert.kind {
            MmGe => (e_set, a_set),
            _ => (a_set, e_set),
        };
        if chosen.rows() != owner.n_rows() || chosen.cols() != owner.n_cols() {
            return Err(Error::CertificateShape(format!(
                "chosen matrix is {}x{}, expected {}x{}",
                chosen.rows(),
                chosen.cols(),
                owner.n_rows(),
                owner.n_cols()
            )));
        }
        if !owner.contains(chosen) {
            return Ok(false);
        }
        right_product(other, chosen)?
    } else {
        a_set.clone()
    };
    if cert.vector.len() != family.n_cols() || !family.is_square() {
        return Err(Error::CertificateShape(format!(
            "vector of length {} for a {}x{} family",
            cert.vector.len(),
            family.n_rows(),
            family.n_cols()
        )));
    }
    let v = cert.vector.entries();
    let sign_ok = match cert.kind {
        JssrGe | MmGe => cert.vector.is_semipositive(),
        _ => cert.vector.is_positive(),
    };
    if !sign_ok {
        return Ok(false);
    }
    for (rs, vi) in family.row_sets().iter().zip(v) {
        let bound = alpha * vi;
        for r in rs.rows() {
            let lhs: Rational = r.iter().zip(v).map(|(a, x)| a * x).sum();
            let ok = match cert.kind {
                JsrLt | MmLt => lhs < bound,
                JsrLe | MmLe => lhs <= bound,
                JssrGt => lhs > bound,
                JssrGe | MmGe => lhs >= bound,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Bracket `[lower, upper]` around the minimax value with certificates for
/// `value ≥ lower` and `value < upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueInterval {
    pub lower: Rational,
    pub upper: Rational,
    pub lower_witness: Certificate,
    pub upper_witness: Certificate,
}

impl ValueInterval {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }
}

/// `max ‖A E‖` over both families, computed row by row: the sum-of-entries
/// norm of `A E` is `Σ_i a_i · w` where `w_k` is the row sum of `E`'s row `k`.
pub fn max_product_norm(a_set: &IruSet, e_set: &IruSet) -> Result<Rational> {
    check_pair(a_set, e_set)?;
    let w: Vec<Rational> =
        e_set.row_sets().iter().map(|rs| rs.rows().iter().map(|r| r.iter().sum::<Rational>()).max().unwrap()).collect();
    Ok(a_set
        .row_sets()
        .iter()
        .map(|rs| rs.rows().iter().map(|r| r.iter().zip(&w).map(|(a, b)| a * b).sum::<Rational>()).max().unwrap())
        .sum())
}

/// Simplest rational (smallest denominator) in `[lo, hi]`, `0 ≤ lo ≤ hi`.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // Same integer part: recurse on reciprocals of the fractional parts.
    let rest = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + rest.recip()
}

/// Minimax value by bisection on exact threshold decisions, stopping once
/// the bracket is no wider than `tol`.
pub fn value_bisection(a_set: &IruSet, e_set: &IruSet, tol: &Rational) -> Result<ValueInterval> {
    value_bisection_with_cap(a_set, e_set, tol, DEFAULT_ENUM_CAP)
}

pub fn value_bisection_with_cap(a_set: &IruSet, e_set: &IruSet, tol: &Rational, cap: u128) -> Result<ValueInterval> {
    if !tol.is_positive() {
        return Err(Error::PreconditionViolated("tolerance must be positive".into()));
    }
    let lt = |alpha: &Rational| decide_mm_lt_with_cap(a_set, e_set, alpha, cap);
    let ge = |alpha: &Rational| decide_mm_ge_with_cap(a_set, e_set, alpha, cap);
    let hi = Rational::from_integer(max_product_norm(a_set, e_set)?.ceil().to_integer());
    let at_hi = lt(&hi)?;
    let Some(mut upper_cert) = at_hi.certificate else {
        // The value never exceeds the norm bound, so it equals it.
        let lower_witness = ge(&hi)?.certificate.expect("complementary decision");
        let upper = &hi + tol;
        let upper_witness = lt(&upper)?.certificate.expect("value equals the bound");
        return Ok(ValueInterval { lower: hi, upper, lower_witness, upper_witness });
    };
    let two = Rational::from_integer(2.into());
    let mut lo = Rational::zero();
    let mut up = hi;
    let mut lower_cert = None;
    while &(&up - &lo) > tol {
        let mid = (&lo + &up) / &two;
        let d = lt(&mid)?;
        match d.certificate {
            Some(c) => {
                up = mid;
                upper_cert = c;
            }
            None => lo = mid,
        }
    }
    // Snap to the simplest rational in the bracket when the value reaches it,
    // so exact values come out exactly.
    let snap = simplest_between(&lo, &up);
    if snap > lo && snap < up {
        if let Some(c) = ge(&snap)?.certificate {
            let upper = &snap + tol;
            if let Some(uc) = lt(&upper)?.certificate {
                return Ok(ValueInterval { lower: snap, upper, lower_witness: c, upper_witness: uc });
            }
            lower_cert = Some(c);
            lo = snap;
        }
    }
    let lower_witness = match lower_cert {
        Some(c) => c,
        None => ge(&lo)?.certificate.expect("value is at least the lower end"),
    };
    Ok(ValueInterval { lower: lo, upper: up, lower_witness, upper_witness: upper_cert })
}
