//! Exact univariate polynomials over the rationals, used to compare spectral
//! radii (algebraic numbers) without any rounding.
//!
//! For a non-negative square matrix the spectral radius is the largest real
//! root of its characteristic polynomial, so every comparison reduces to
//! Sturm root counting.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::Rational;
use crate::{Error, Result};

/// Coefficients from the constant term upwards; never has a zero leading
/// coefficient (the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(k.into())).collect())
    }

    fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    /// Quotient and remainder of polynomial division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dl = d.lead();
        let dd = d.degree();
        if rem.len() < d.0.len() {
            return (Poly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / dl;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Same roots, each with multiplicity one.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    /// Cauchy bound: every real root is strictly below the returned value.
    pub fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let max = self.0[..self.0.len() - 1].iter().map(|c| c.abs() / &l).max().unwrap_or_else(Rational::zero);
        max + Rational::one()
    }
}

/// Characteristic polynomial `det(λI − m)` by Faddeev–LeVerrier.
pub fn char_poly(m: &Matrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let identity = Matrix::identity(n);
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = super::mat_mul(m, &mk)?.add(&identity.scale(&coeffs[n - k + 1]))?;
        let t = super::mat_mul(m, &mk)?.trace();
        coeffs[n - k] = -t / Rational::from_integer(k.into());
    }
    Ok(Poly::new(coeffs))
}

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let r = chain.last().unwrap().div_rem(&next).1;
            chain.push(next);
            next = Poly::new(r.0.into_iter().map(|c| -c).collect());
        }
        Sturm { chain }
    }

    pub fn poly(&self) -> &Poly {
        &self.chain[0]
    }

    fn sign_changes(&self, x: &Rational) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                continue;
            };
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if a >= b {
            return 0;
        }
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Bracket `(lo, hi]` around the largest real root of a squarefree
/// polynomial, refined by bisection.
#[derive(Clone, Debug)]
pub struct LargestRoot {
    sturm: Sturm,
    lo: Rational,
    hi: Rational,
}

impl LargestRoot {
    /// Spectral radius of a non-negative square matrix as an isolated root.
    pub fn of_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_nonnegative() {
            let pos = m.entries().iter().position(Signed::is_negative).unwrap();
            return Err(Error::NegativeEntry { row: pos / m.cols(), col: pos % m.cols() });
        }
        let p = char_poly(m)?.squarefree();
        let sturm = Sturm::new(&p);
        // The radius is non-negative, so -1 is a strict lower bound.
        let hi = if p.is_zero() { Rational::one() } else { p.root_bound() };
        Ok(LargestRoot { sturm, lo: -Rational::one(), hi })
    }

    pub fn lower(&self) -> &Rational {
        &self.lo
    }

    pub fn upper(&self) -> &Rational {
        &self.hi
    }

    pub fn poly(&self) -> &Poly {
        self.sturm.poly()
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        if self.sturm.count_roots(&mid, &self.hi) > 0 {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Shrinks until the bracket holds a single root of the polynomial.
    pub fn isolate(&mut self) {
        while self.sturm.count_roots(&self.lo, &self.hi) > 1 {
            self.bisect();
        }
    }

    pub fn refine_to(&mut self, tol: &Rational) {
        while &self.width() > tol {
            self.bisect();
        }
    }

    /// Exact comparison of the isolated root with a rational.
    pub fn compare(&self, alpha: &Rational) -> Ordering {
        if self.sturm.count_roots(alpha, &self.hi) > 0 {
            Ordering::Greater
        } else if self.poly().eval(alpha).is_zero() {
            Ordering::Equal
        } else {
            Ordering::Less
        }
    }
}

/// Exact sign of `ρ(m) − alpha` for a non-negative square matrix.
pub fn compare_radius_with(m: &Matrix, alpha: &Rational) -> Result<Ordering> {
    let root = LargestRoot::of_matrix(m)?;
    Ok(root.compare(alpha))
}

/// Exact sign of `ρ(x) − ρ(y)` for two non-negative square matrices.
pub fn compare_spectral_radii(x: &Matrix, y: &Matrix) -> Result<Ordering> {
    let mut rx = LargestRoot::of_matrix(x)?;
    let mut ry = LargestRoot::of_matrix(y)?;
    rx.isolate();
    ry.isolate();
    let common = rx.poly().gcd(ry.poly());
    let common = (common.degree() > 0).then(|| Sturm::new(&common));
    loop {
        if rx.upper() <= ry.lower() {
            return Ok(Ordering::Less);
        }
        if ry.upper() <= rx.lower() {
            return Ok(Ordering::Greater);
        }
        // Overlap: each bracket holds exactly one root of its polynomial, so
        // a common root inside the intersection must be both radii.
        if let Some(common) = &common {
            let lo = rx.lower().max(ry.lower());
            let hi = rx.upper().min(ry.upper());
            if common.count_roots(lo, hi) > 0 {
                return Ok(Ordering::Equal);
            }
        }
        if rx.width() >= ry.width() {
            rx.bisect();
        } else {
            ry.bisect();
        }
    }
}

/// Exact enclosure `[lo, hi]` of `ρ(m)` with `hi − lo ≤ tol`.
pub fn radius_enclosure(m: &Matrix, tol: &Rational) -> Result<(Rational, Rational)> {
    let mut root = LargestRoot::of_matrix(m)?;
    root.refine_to(tol);
    let lo = if root.lower().is_negative() { Rational::zero() } else { root.lower().clone() };
    Ok((lo, root.upper().clone()))
}
