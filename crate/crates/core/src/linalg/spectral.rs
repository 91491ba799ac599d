use num_traits::{Signed, Zero};

use super::matrix::{dot, Matrix, Vector};
use super::poly::radius_enclosure;
use super::rational::{rational_from_f64, to_f64, Rational};
use crate::{Error, Result};

pub const DEFAULT_ITERATION_CAP: usize = 10_000;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Spectral radius estimate with an exact rational enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub value: f64,
    pub lower: Rational,
    pub upper: Rational,
    pub iterations: usize,
    pub converged: bool,
}

impl RadiusEstimate {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    fn exact(value: Rational) -> Self {
        RadiusEstimate { value: to_f64(&value), lower: value.clone(), upper: value, iterations: 0, converged: true }
    }
}

/// Vectors certifying a Collatz–Wielandt enclosure: `m·upper ≤ ρ⁺·upper`
/// with `upper > 0`, and `m·lower ≥ ρ⁻·lower` with `lower ≥ 0, ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CollatzWitness {
    pub upper: Vector,
    pub lower: Vector,
}

fn check_nonnegative_square(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.rows() == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    if let Some(pos) = m.entries().iter().position(Signed::is_negative) {
        return Err(Error::NegativeEntry { row: pos / m.cols(), col: pos % m.cols() });
    }
    Ok(())
}

struct FloatMatrix {
    n: usize,
    data: Vec<f64>,
}

impl FloatMatrix {
    fn new(m: &Matrix) -> Self {
        FloatMatrix { n: m.rows(), data: m.entries().iter().map(to_f64).collect() }
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }
}

// Smallest coordinate kept in an iterate; keeps every entry representable
// so the exact witness stays strictly positive.
const FLOOR: f64 = 1e-250;

/// Largest lower Collatz–Wielandt bound over supports made of the `k`
/// largest coordinates; returns the bound and the chosen `k`.
fn truncated_lower(fm: &FloatMatrix, v: &[f64]) -> (f64, usize) {
    let n = fm.n;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    let mut best = (f64::NEG_INFINITY, n);
    let mut trunc = vec![0.0; n];
    let mut mv = vec![0.0; n];
    for k in 1..=n {
        trunc[order[k - 1]] = v[order[k - 1]];
        fm.apply(&trunc, &mut mv);
        let bound = order[..k].iter().map(|&i| mv[i] / trunc[i]).fold(f64::INFINITY, f64::min);
        if bound > best.0 {
            best = (bound, k);
        }
    }
    best
}

fn exact_vector(v: &[f64]) -> Vec<Rational> {
    v.iter().map(|&x| rational_from_f64(x)).collect()
}

/// Exact upper ratio bound `max (m v)_i / v_i` for positive `v`.
fn exact_upper(m: &Matrix, v: &[Rational]) -> Rational {
    m.row_iter().zip(v).map(|(r, vi)| dot(r, v) / vi).max().expect("non-empty matrix")
}

/// Exact lower ratio bound over the support of `v`.
fn exact_lower(m: &Matrix, v: &[Rational]) -> Rational {
    m.row_iter()
        .zip(v)
        .filter(|(_, vi)| vi.is_positive())
        .map(|(r, vi)| dot(r, v) / vi)
        .min()
        .unwrap_or_else(Rational::zero)
}

/// Power iteration on `m + I` from the all-ones vector, returning the exact
/// enclosure derived from the final iterate together with its witnesses.
pub fn spectral_radius_with_witness(m: &Matrix, tol: &Rational) -> Result<(RadiusEstimate, CollatzWitness)> {
    check_nonnegative_square(m)?;
    let n = m.rows();
    let fm = FloatMatrix::new(m);
    let tol_f = to_f64(tol);
    let mut v = vec![1.0; n];
    let mut mv = vec![0.0; n];
    let mut iterations = 0;
    let mut best_k;
    loop {
        fm.apply(&v, &mut mv);
        let hi = v.iter().zip(&mv).map(|(x, y)| y / x).fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().zip(&mv).map(|(x, y)| y / x).fold(f64::INFINITY, f64::min);
        let stop = iterations >= DEFAULT_ITERATION_CAP;
        let cheap_ok = hi - lo <= tol_f * 0.25;
        if cheap_ok || stop || iterations % 16 == 15 {
            let (tlo, k) = truncated_lower(&fm, &v);
            best_k = k;
            if cheap_ok || stop || hi - tlo.max(lo) <= tol_f * 0.25 {
                break;
            }
        }
        let mut max = 0.0f64;
        for (x, y) in v.iter_mut().zip(&mv) {
            *x += y;
            max = max.max(*x);
        }
        for x in v.iter_mut() {
            *x = (*x / max).max(FLOOR);
        }
        iterations += 1;
    }

    let exact = exact_vector(&v);
    let upper = exact_upper(m, &exact);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    let mut trunc = vec![Rational::zero(); n];
    for &i in &order[..best_k] {
        trunc[i] = exact[i].clone();
    }
    let (lower, lower_vec) = {
        let full = exact_lower(m, &exact);
        let cut = exact_lower(m, &trunc);
        if cut > full {
            (cut, trunc)
        } else {
            (full, exact.clone())
        }
    };
    let lower = lower.max(Rational::zero());
    let estimate = finish(lower, upper, iterations, tol);
    Ok((estimate, CollatzWitness { upper: Vector::column(exact), lower: Vector::column(lower_vec) }))
}

fn finish(mut lower: Rational, mut upper: Rational, iterations: usize, tol: &Rational) -> RadiusEstimate {
    let value = to_f64(&((&lower + &upper) / Rational::from_integer(2.into())));
    // The float may round outside a very narrow enclosure; widening keeps
    // both bounds valid.
    let value_q = rational_from_f64(value);
    if value_q < lower {
        lower = value_q.clone();
    }
    if value_q > upper {
        upper = value_q;
    }
    let converged = &upper - &lower <= *tol;
    RadiusEstimate { value, lower, upper, iterations, converged }
}

/// Spectral radius of a non-negative square matrix with an exact rational
/// enclosure.
///
/// Power iteration is tried first; when the Collatz–Wielandt enclosure does
/// not reach `tol` (defective or reducible cases) the enclosure is tightened
/// by exact root isolation on the characteristic polynomial.
pub fn spectral_radius(m: &Matrix, tol: &Rational) -> Result<RadiusEstimate> {
    let (estimate, _) = spectral_radius_with_witness(m, tol)?;
    if estimate.converged {
        return Ok(estimate);
    }
    if estimate.upper.is_zero() {
        return Ok(RadiusEstimate::exact(Rational::zero()));
    }
    let (lo, hi) = radius_enclosure(m, tol)?;
    let lower = lo.max(estimate.lower.clone());
    let upper = hi.min(estimate.upper.clone());
    Ok(finish(lower, upper, estimate.iterations, tol))
}

/// Fast float estimate of the spectral radius, accurate to roughly `1e-12`
/// relative; falls back to exact root isolation when power iteration stalls.
pub fn radius_f64(m: &Matrix) -> Result<f64> {
    check_nonnegative_square(m)?;
    let fm = FloatMatrix::new(m);
    let n = fm.n;
    let mut v = vec![1.0; n];
    let mut mv = vec![0.0; n];
    for it in 0..3000 {
        fm.apply(&v, &mut mv);
        let hi = v.iter().zip(&mv).map(|(x, y)| y / x).fold(f64::NEG_INFINITY, f64::max);
        if hi == 0.0 {
            return Ok(0.0);
        }
        let mut lo = v.iter().zip(&mv).map(|(x, y)| y / x).fold(f64::INFINITY, f64::min);
        if hi - lo > 1e-13 * hi && it % 16 == 15 {
            lo = lo.max(truncated_lower(&fm, &v).0);
        }
        if hi - lo <= 1e-13 * hi {
            return Ok(0.5 * (hi + lo));
        }
        let mut max = 0.0f64;
        for (x, y) in v.iter_mut().zip(&mv) {
            *x += y;
            max = max.max(*x);
        }
        for x in v.iter_mut() {
            *x = (*x / max).max(FLOOR);
        }
    }
    let tol = rational_from_f64(1e-13);
    let (lo, hi) = radius_enclosure(m, &tol)?;
    Ok(to_f64(&((lo + hi) / Rational::from_integer(2.into()))))
}

/// Strongly connected components of the support graph (edge `i → j` when
/// `m[i][j] ≠ 0`), in Tarjan order.
pub fn strongly_connected_components(m: &Matrix) -> Vec<Vec<usize>> {
    struct State<'a> {
        m: &'a Matrix,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in 0..s.m.cols() {
            if s.m.get(v, w).is_zero() {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let n = m.rows();
    let mut s = State {
        m,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// Positive eigenvector for `ρ(m)`, normalized to unit 1-norm.
///
/// Requires `m` irreducible; otherwise the error carries the strongly
/// connected blocks.
pub fn perron_vector(m: &Matrix, tol: &Rational) -> Result<Vector> {
    check_nonnegative_square(m)?;
    let n = m.rows();
    if n == 1 {
        return Ok(Vector::from_ints(&[1]));
    }
    let blocks = strongly_connected_components(m);
    if blocks.len() > 1 {
        return Err(Error::Reducible(blocks));
    }
    // The residual ‖m v − ρ v‖ for unit v is at most the enclosure width, so
    // iterate to a tighter target than requested.
    let target = tol / Rational::from_integer(4.into());
    let (estimate, witness) = spectral_radius_with_witness(m, &target)?;
    let v = witness.upper.into_entries();
    let norm: Rational = v.iter().sum();
    let v: Vec<Rational> = v.into_iter().map(|x| x / &norm).collect();
    let rho = estimate.value;
    let residual: f64 = m.row_iter().zip(&v).map(|(r, vi)| (to_f64(&dot(r, &v)) - rho * to_f64(vi)).abs()).sum();
    if residual > to_f64(tol) && !estimate.converged {
        return Err(Error::PreconditionViolated(format!("power iteration did not converge (residual {residual:e})")));
    }
    Ok(Vector::column(v))
}

fn check_witness(m: &Matrix, v: &Vector) -> Result<()> {
    check_nonnegative_square(m)?;
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix with witness of length {}",
            m.rows(),
            m.cols(),
            v.len()
        )));
    }
    Ok(())
}

/// Exact check of `m v ≤ rho v` for a positive `v`; `true` proves `ρ(m) ≤ rho`.
pub fn certify_radius_upper(m: &Matrix, rho: &Rational, v: &Vector) -> Result<bool> {
    check_witness(m, v)?;
    if !v.is_positive() {
        return Err(Error::InvalidVector("upper witness must be entrywise positive"));
    }
    Ok(m.row_iter().zip(v.entries()).all(|(r, vi)| dot(r, v.entries()) <= rho * vi))
}

/// Exact check of `m v ≥ rho v` for a non-negative non-zero `v`; `true` proves
/// `ρ(m) ≥ rho`.
pub fn certify_radius_lower(m: &Matrix, rho: &Rational, v: &Vector) -> Result<bool> {
    check_witness(m, v)?;
    if !v.is_semipositive() {
        return Err(Error::InvalidVector("lower witness must be non-negative and non-zero"));
    }
    if rho.is_negative() {
        return Err(Error::PreconditionViolated("radius bound must be non-negative".into()));
    }
    Ok(m.row_iter().zip(v.entries()).all(|(r, vi)| dot(r, v.entries()) >= rho * vi))
}

/// Gelfand upper bounds `‖m^(2^j)‖^(1/2^j)` for `j = 0..steps`, using the
/// sum-of-entries norm (submultiplicative on non-negative matrices, so the
/// sequence is non-increasing).
pub fn gelfand_bounds(m: &Matrix, steps: usize) -> Result<Vec<f64>> {
    check_nonnegative_square(m)?;
    let n = m.rows();
    let mut p: Vec<f64> = m.entries().iter().map(to_f64).collect();
    let mut log_scale = 0.0f64;
    let mut out = Vec::with_capacity(steps);
    for j in 0..steps {
        let s: f64 = p.iter().sum();
        let exponent = 2f64.powi(j as i32);
        if s == 0.0 {
            out.push(0.0);
            out.resize(steps, 0.0);
            break;
        }
        out.push(((s.ln() + log_scale) / exponent).exp());
        // Renormalize before squaring to stay in range.
        let norm_p: Vec<f64> = p.iter().map(|x| x / s).collect();
        log_scale = 2.0 * (log_scale + s.ln());
        let mut sq = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = norm_p[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for jj in 0..n {
                    sq[i * n + jj] += a * norm_p[k * n + jj];
                }
            }
        }
        p = sq;
    }
    Ok(out)
}
