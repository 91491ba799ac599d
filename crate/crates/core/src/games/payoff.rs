//! Growth rate of `‖A1 E1 A2 E2 ⋯ Ak Ek‖^(1/k)` along simulated plays.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::iru::{sample_conv, IruSet};
use crate::linalg::{mat_mul, Matrix};
use crate::{Error, Result};

/// Chooses the next matrix from the sequence played so far
/// (`A1, E1, A2, E2, ...`).
pub trait MatrixOracle {
    fn next(&mut self, history: &[Matrix]) -> Matrix;
}

/// Always the same matrix.
#[derive(Clone, Debug)]
pub struct ConstantOracle(pub Matrix);

impl MatrixOracle for ConstantOracle {
    fn next(&mut self, _: &[Matrix]) -> Matrix {
        self.0.clone()
    }
}

/// Uniformly random member of a family, drawn fresh each turn.
#[derive(Clone, Debug)]
pub struct RandomVertexOracle {
    set: IruSet,
    rng: ChaCha8Rng,
}

impl RandomVertexOracle {
    pub fn new(set: IruSet, seed: u64) -> Self {
        RandomVertexOracle { set, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl MatrixOracle for RandomVertexOracle {
    fn next(&mut self, _: &[Matrix]) -> Matrix {
        let choice: Vec<usize> = self.set.row_sets().iter().map(|rs| self.rng.random_range(0..rs.len())).collect();
        self.set.member(&choice)
    }
}

/// Random point of the convex hull of a family, drawn fresh each turn.
#[derive(Clone, Debug)]
pub struct RandomHullOracle {
    set: IruSet,
    rng: ChaCha8Rng,
}

impl RandomHullOracle {
    pub fn new(set: IruSet, seed: u64) -> Self {
        RandomHullOracle { set, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl MatrixOracle for RandomHullOracle {
    fn next(&mut self, _: &[Matrix]) -> Matrix {
        let seed = self.rng.random();
        sample_conv(&self.set, seed)
    }
}

/// Any closure of the history.
pub struct FnOracle<F: FnMut(&[Matrix]) -> Matrix>(pub F);

impl<F: FnMut(&[Matrix]) -> Matrix> MatrixOracle for FnOracle<F> {
    fn next(&mut self, history: &[Matrix]) -> Matrix {
        (self.0)(history)
    }
}

/// Finite-horizon approximation of the limsup growth rate.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    /// `log2 ‖Π_k‖` for `k = 1..=steps` (`-inf` once the product is zero).
    pub log2_norms: Vec<f64>,
    /// `‖Π_k‖^(1/k)` for `k = 1..=steps`.
    pub rates: Vec<f64>,
    /// Maximum rate over the last quarter of the horizon.
    pub tail: f64,
    /// Maximum over the last quarter of `(‖Π_k‖ / ‖Π_{k/2}‖)^(1/(k - k/2))`;
    /// cancels the constant factor in `‖Π_k‖ ≈ c·ρ^k` and so converges much
    /// faster than `tail` for regular plays.
    pub trend: f64,
    /// First step at which the product vanished.
    pub zero_at: Option<usize>,
}

impl GrowthReport {
    pub fn from_log2_norms(log2_norms: Vec<f64>) -> Self {
        let rates: Vec<f64> = log2_norms
            .iter()
            .enumerate()
            .map(|(k, l)| if l.is_finite() { (l / (k + 1) as f64).exp2() } else { 0.0 })
            .collect();
        let zero_at = log2_norms.iter().position(|l| !l.is_finite()).map(|k| k + 1);
        let start = rates.len() - rates.len().div_ceil(4).min(rates.len());
        let tail = rates[start..].iter().copied().fold(0.0, f64::max);
        let trend = (start..rates.len())
            .map(|i| {
                let k = i + 1;
                let j = k / 2;
                let (lk, lj) = (log2_norms[k - 1], if j == 0 { 0.0 } else { log2_norms[j - 1] });
                if lk.is_finite() && lj.is_finite() {
                    ((lk - lj) / (k - j) as f64).exp2()
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        GrowthReport { log2_norms, rates, tail, trend, zero_at }
    }

    pub fn steps(&self) -> usize {
        self.rates.len()
    }
}

/// Plays `steps` turns and tracks the norm of the running product in log
/// space, renormalizing the stored product after every turn.
pub fn simulate_payoff(
    a_set: &IruSet,
    e_set: &IruSet,
    adam: &mut dyn MatrixOracle,
    eve: &mut dyn MatrixOracle,
    steps: usize,
) -> Result<GrowthReport> {
    if steps == 0 {
        return Err(Error::PreconditionViolated("simulation needs at least one step".into()));
    }
    let (n, m) = (a_set.n_rows(), a_set.n_cols());
    if e_set.n_rows() != m || e_set.n_cols() != n {
        return Err(Error::DimensionMismatch("families do not compose".into()));
    }
    let check = |x: &Matrix, rows: usize, cols: usize| {
        if x.rows() == rows && x.cols() == cols {
            Ok(())
        } else {
            Err(Error::OracleShape { rows, cols, got_rows: x.rows(), got_cols: x.cols() })
        }
    };
    let mut history: Vec<Matrix> = Vec::with_capacity(2 * steps);
    let mut product: Vec<f64> = identity(n);
    let mut log2 = 0.0f64;
    let mut log2_norms = Vec::with_capacity(steps);
    for _ in 0..steps {
        let a = adam.next(&history);
        check(&a, n, m)?;
        history.push(a);
        let e = eve.next(&history);
        check(&e, m, n)?;
        history.push(e);
        if !log2.is_finite() {
            log2_norms.push(log2);
            continue;
        }
        let ae = mat_mul(&history[history.len() - 2], &history[history.len() - 1])?;
        product = mul_f64(&product, &ae.to_f64(), n);
        let s: f64 = product.iter().map(|x| x.abs()).sum();
        if s == 0.0 {
            log2 = f64::NEG_INFINITY;
        } else {
            log2 += s.log2();
            product.iter_mut().for_each(|x| *x /= s);
        }
        log2_norms.push(log2);
    }
    Ok(GrowthReport::from_log2_norms(log2_norms))
}

fn identity(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    v
}

fn mul_f64(p: &[f64], m: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = p[i * n + k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * m[k][j];
            }
        }
    }
    out
}

/// Entropy (bits per symbol) matching a payoff, one turn being four symbols.
pub fn eg_payoff_entropy(growth: &GrowthReport) -> Result<f64> {
    entropy_of_payoff(growth.tail)
}

pub fn entropy_of_payoff(payoff: f64) -> Result<f64> {
    if payoff <= 0.0 || !payoff.is_finite() {
        return Err(Error::PreconditionViolated(format!("entropy needs a positive payoff, got {payoff}")));
    }
    Ok(payoff.log2() / 4.0)
}
