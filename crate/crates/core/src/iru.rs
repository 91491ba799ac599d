//! Independent-row-uncertainty (IRU) families: every member is built by
//! picking each row independently from its own row set.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::linalg::poly::compare_spectral_radii;
use crate::linalg::{spectral_radius, Matrix, RadiusEstimate, Rational, Vector};
use crate::{Error, Result};

/// Default bound on the number of enumerated family members.
pub const DEFAULT_ENUM_CAP: u128 = 1_000_000;

/// A finite, non-empty set of non-negative rows of a common length, stored
/// without duplicates in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowSet {
    dim: usize,
    rows: Vec<Vec<Rational>>,
}

impl RowSet {
    pub fn new(mut rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = match rows.first() {
            Some(r) => r.len(),
            None => return Err(Error::DimensionMismatch("row set must be non-empty".into())),
        };
        for (k, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!("row {k} has length {}, expected {dim}", r.len())));
            }
            if let Some(col) = r.iter().position(Signed::is_negative) {
                return Err(Error::NegativeEntry { row: k, col });
            }
        }
        rows.sort();
        rows.dedup();
        Ok(RowSet { dim, rows })
    }

    /// Panics on ragged or negative rows.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        RowSet::new(Matrix::from_ints(rows).to_rows()).expect("invalid integer row set")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.rows.iter().flatten().all(Signed::is_positive)
    }

    pub fn position(&self, row: &[Rational]) -> Option<usize> {
        self.rows.binary_search_by(|r| r.as_slice().cmp(row)).ok()
    }
}

/// IRU family given by one row set per matrix row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IruSet {
    n_cols: usize,
    row_sets: Vec<RowSet>,
}

impl IruSet {
    pub fn new(row_sets: Vec<RowSet>) -> Result<Self> {
        let n_cols = match row_sets.first() {
            Some(r) => r.dim(),
            None => return Err(Error::DimensionMismatch("IRU set needs at least one row".into())),
        };
        if let Some(bad) = row_sets.iter().position(|r| r.dim() != n_cols) {
            return Err(Error::DimensionMismatch(format!(
                "row set {bad} has dimension {}, expected {n_cols}",
                row_sets[bad].dim()
            )));
        }
        Ok(IruSet { n_cols, row_sets })
    }

    /// Panics on invalid input; convenient for fixtures.
    pub fn from_ints<S: AsRef<[R]>, R: AsRef<[i64]>>(row_sets: &[S]) -> Self {
        IruSet::new(row_sets.iter().map(|s| RowSet::from_ints(s.as_ref())).collect()).expect("invalid integer IRU set")
    }

    /// The one-member family `{m}`.
    pub fn singleton(m: &Matrix) -> Result<Self> {
        IruSet::new(m.row_iter().map(|r| RowSet::new(vec![r.to_vec()])).collect::<Result<_>>()?)
    }

    pub fn n_rows(&self) -> usize {
        self.row_sets.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows() == self.n_cols
    }

    pub fn row_sets(&self) -> &[RowSet] {
        &self.row_sets
    }

    /// Number of members, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        self.row_sets.iter().try_fold(1u128, |acc, r| acc.checked_mul(r.len() as u128)).unwrap_or(u128::MAX)
    }

    pub fn is_positive(&self) -> bool {
        self.row_sets.iter().all(RowSet::is_positive)
    }

    /// The member picking row `choice[i]` from row set `i`.
    pub fn member(&self, choice: &[usize]) -> Matrix {
        let rows = self.row_sets.iter().zip(choice).map(|(s, &c)| s.rows[c].clone()).collect();
        Matrix::from_rows(rows).expect("row sets share a dimension")
    }

    /// Row choice producing `m`, if `m` is a member.
    pub fn choice_of(&self, m: &Matrix) -> Option<Vec<usize>> {
        if m.rows() != self.n_rows() || m.cols() != self.n_cols {
            return None;
        }
        self.row_sets.iter().zip(m.row_iter()).map(|(s, r)| s.position(r)).collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.choice_of(m).is_some()
    }

    fn check_cap(&self, cap: u128) -> Result<()> {
        let size = self.size();
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(())
    }

    /// Row choices of every member, lexicographic in the choice indices.
    pub fn choices(&self, cap: u128) -> Result<Choices> {
        self.check_cap(cap)?;
        Ok(Choices { sizes: self.row_sets.iter().map(RowSet::len).collect(), next: Some(vec![0; self.n_rows()]) })
    }

    /// Every member exactly once, in lexicographic order of row choices.
    pub fn enumerate(&self, cap: u128) -> Result<impl Iterator<Item = Matrix> + '_> {
        Ok(self.choices(cap)?.map(move |c| self.member(&c)))
    }
}

/// Odometer over row choices; the last row varies fastest.
#[derive(Clone, Debug)]
pub struct Choices {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for Choices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.sizes[i] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// The family `{A·b : A ∈ s}`, again IRU.
pub fn right_product(s: &IruSet, b: &Matrix) -> Result<IruSet> {
    if s.n_cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "IRU set with {} columns times {}x{} matrix",
            s.n_cols(),
            b.rows(),
            b.cols()
        )));
    }
    if let Some(pos) = b.entries().iter().position(Signed::is_negative) {
        return Err(Error::NegativeEntry { row: pos / b.cols(), col: pos % b.cols() });
    }
    let row_sets = s
        .row_sets()
        .iter()
        .map(|rs| {
            let rows = rs
                .rows()
                .iter()
                .map(|r| Ok(b.vec_mul(&Vector::row(r.clone()))?.into_entries()))
                .collect::<Result<Vec<_>>>()?;
            RowSet::new(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    IruSet::new(row_sets)
}

/// Joint spectral radius and subradius of a finite IRU family, which are the
/// largest and smallest spectral radii of its members.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusPair {
    pub jsr: RadiusEstimate,
    pub jssr: RadiusEstimate,
    pub argmax: Matrix,
    pub argmin: Matrix,
}

pub fn jsr_jssr(s: &IruSet, tol: &Rational) -> Result<RadiusPair> {
    jsr_jssr_with_cap(s, tol, DEFAULT_ENUM_CAP)
}

pub fn jsr_jssr_with_cap(s: &IruSet, tol: &Rational, cap: u128) -> Result<RadiusPair> {
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.n_rows(), cols: s.n_cols() });
    }
    let members: Vec<Matrix> = s.enumerate(cap)?.collect();
    let estimates = members.par_iter().map(|m| spectral_radius(m, tol)).collect::<Result<Vec<_>>>()?;
    let max_lower = estimates.iter().map(|e| &e.lower).max().expect("non-empty family");
    let min_upper = estimates.iter().map(|e| &e.upper).min().expect("non-empty family");
    let top = pick_extreme(&members, &estimates, |e| &e.upper >= max_lower, Ordering::Greater)?;
    let bottom = pick_extreme(&members, &estimates, |e| &e.lower <= min_upper, Ordering::Less)?;
    Ok(RadiusPair {
        jsr: estimates[top].clone(),
        jssr: estimates[bottom].clone(),
        argmax: members[top].clone(),
        argmin: members[bottom].clone(),
    })
}

/// Among members whose enclosure can still reach the extreme, returns the
/// first one (in enumeration order) that is exactly extremal.
fn pick_extreme(
    members: &[Matrix],
    estimates: &[RadiusEstimate],
    candidate: impl Fn(&RadiusEstimate) -> bool,
    better: Ordering,
) -> Result<usize> {
    let mut best: Option<usize> = None;
    for (k, e) in estimates.iter().enumerate() {
        if !candidate(e) {
            continue;
        }
        best = match best {
            None => Some(k),
            Some(b) => {
                let b_est = &estimates[b];
                let clearly = match better {
                    Ordering::Greater => e.lower > b_est.upper,
                    _ => e.upper < b_est.lower,
                };
                let clearly_not = match better {
                    Ordering::Greater => e.upper < b_est.lower,
                    _ => e.lower > b_est.upper,
                };
                if clearly {
                    Some(k)
                } else if clearly_not {
                    Some(b)
                } else if compare_spectral_radii(&members[k], &members[b])? == better {
                    Some(k)
                } else {
                    Some(b)
                }
            }
        };
    }
    Ok(best.expect("some member attains the extreme"))
}

/// Draws a member of the convex hull: each row is an independent random
/// convex combination of its row set, with exact rational weights.
pub fn sample_conv(s: &IruSet, seed: u64) -> Matrix {
    sample_conv_with_weights(s, seed).0
}

/// Like [`sample_conv`], also returning the per-row convex weights.
pub fn sample_conv_with_weights(s: &IruSet, seed: u64) -> (Matrix, Vec<Vec<Rational>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<Vec<Rational>> = s
        .row_sets()
        .iter()
        .map(|rs| {
            let mut raw: Vec<u32> = (0..rs.len()).map(|_| rng.random_range(0..=1000)).collect();
            if raw.iter().all(|&w| w == 0) {
                raw[0] = 1;
            }
            let total: u32 = raw.iter().sum();
            raw.iter().map(|&w| Rational::new(w.into(), total.into())).collect()
        })
        .collect();
    let m = convex_member(s, &weights).expect("weights are well formed");
    (m, weights)
}

/// Member of the convex hull with the given per-row weights.
pub fn convex_member(s: &IruSet, weights: &[Vec<Rational>]) -> Result<Matrix> {
    if weights.len() != s.n_rows() {
        return Err(Error::DimensionMismatch(format!("{} weight rows for {} row sets", weights.len(), s.n_rows())));
    }
    let mut rows = Vec::with_capacity(s.n_rows());
    for (i, (rs, w)) in s.row_sets().iter().zip(weights).enumerate() {
        if w.len() != rs.len() {
            return Err(Error::DimensionMismatch(format!("row set {i} has {} rows but {} weights", rs.len(), w.len())));
        }
        let total: Rational = w.iter().sum();
        if w.iter().any(Signed::is_negative) || total != Rational::from_integer(1.into()) {
            return Err(Error::PreconditionViolated(format!("weights of row {i} are not a convex combination")));
        }
        let mut row = vec![Rational::zero(); rs.dim()];
        for (r, c) in rs.rows().iter().zip(w) {
            for (o, x) in row.iter_mut().zip(r) {
                *o += c * x;
            }
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

/// Outcome of one clause of the hourglass alternative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Every member satisfies the inequality.
    Holds,
    /// A member on the other side of `v`, differing from it somewhere.
    Counterexample(Matrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HourglassReport {
    /// `A u ≥ v` for all members, or a member with `Ā u ≤ v`, `Ā u ≠ v`.
    pub all_ge: Clause,
    /// `A u ≤ v` for all members, or a member with `Ā u ≥ v`, `Ā u ≠ v`.
    pub all_le: Clause,
}

/// Decides both clauses of the hourglass alternative for `witness · u = v`.
///
/// Rows are independent, so it suffices to look for a single row that falls
/// on the wrong side and splice it into the witness.
pub fn hourglass_check(s: &IruSet, u: &Vector, v: &Vector, witness: &Matrix) -> Result<HourglassReport> {
    if u.len() != s.n_cols() || v.len() != s.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {}, {} for a {}x{} family",
            u.len(),
            v.len(),
            s.n_rows(),
            s.n_cols()
        )));
    }
    if !s.contains(witness) {
        return Err(Error::PreconditionViolated("witness is not a member of the family".into()));
    }
    if witness.mul_vec(u)?.entries() != v.entries() {
        return Err(Error::PreconditionViolated("witness does not map u to v".into()));
    }
    let splice = |i: usize, row: &[Rational]| {
        let mut m = witness.clone();
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, x.clone());
        }
        m
    };
    let mut all_ge = Clause::Holds;
    let mut all_le = Clause::Holds;
    for (i, (rs, vi)) in s.row_sets().iter().zip(v.entries()).enumerate() {
        for r in rs.rows() {
            let value = crate::linalg::Vector::row(r.clone()).dot(u)?;
            if all_ge == Clause::Holds && &value < vi {
                all_ge = Clause::Counterexample(splice(i, r));
            }
            if all_le == Clause::Holds && &value > vi {
                all_le = Clause::Counterexample(splice(i, r));
            }
        }
    }
    Ok(HourglassReport { all_ge, all_le })
}
