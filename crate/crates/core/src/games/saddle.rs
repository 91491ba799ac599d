use std::cmp::Ordering;

use rayon::prelude::*;

use super::arena::{Arena, Player, PositionalStrategy};
use super::translate::{arena_to_iru, IruTranslation};
use crate::iru::{IruSet, DEFAULT_ENUM_CAP};
use crate::linalg::poly::{compare_radius_with, compare_spectral_radii};
use crate::linalg::{
    certify_radius_lower, certify_radius_upper, mat_mul, radius_f64, rational_from_f64, spectral_radius_with_witness,
    Matrix, Rational, Vector,
};
use crate::lp::{value_bisection_with_cap, ValueInterval};
use crate::{Error, Result};

/// Why one opponent cannot improve on the saddle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// The opponent is the saddle matrix itself.
    Same,
    /// A rational separating the two radii, with Collatz–Wielandt vectors
    /// proving each side of it.
    Separated { bound: Rational, product_witness: Vector, opponent_witness: Vector },
    /// Exact comparison `ρ(saddle product)` vs `ρ(opponent product)`.
    Algebraic(Ordering),
}

/// Exact proof that `(a0, e0)` is a saddle point:
/// `ρ(a0·E) ≤ ρ(a0·e0) ≤ ρ(A·e0)` for every member `A`, `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaddleCertificate {
    pub a_choice: Vec<usize>,
    pub e_choice: Vec<usize>,
    pub a0: Matrix,
    pub e0: Matrix,
    pub product: Matrix,
    /// One entry per member of the second family, in enumeration order.
    pub against_e: Vec<Evidence>,
    /// One entry per member of the first family, in enumeration order.
    pub against_a: Vec<Evidence>,
}

// Tolerance for the exact enclosures used as a fast path before falling back
// to algebraic comparison.
const WITNESS_TOL: f64 = 1e-13;

impl SaddleCertificate {
    /// Re-checks every piece of evidence exactly.
    pub fn verify(&self, a_set: &IruSet, e_set: &IruSet) -> Result<bool> {
        self.verify_with_cap(a_set, e_set, DEFAULT_ENUM_CAP)
    }

    pub fn verify_with_cap(&self, a_set: &IruSet, e_set: &IruSet, cap: u128) -> Result<bool> {
        if !a_set.contains(&self.a0) || !e_set.contains(&self.e0) {
            return Ok(false);
        }
        if mat_mul(&self.a0, &self.e0)? != self.product {
            return Ok(false);
        }
        let es: Vec<Matrix> = e_set.enumerate(cap)?.collect();
        let as_: Vec<Matrix> = a_set.enumerate(cap)?.collect();
        if es.len() != self.against_e.len() || as_.len() != self.against_a.len() {
            return Ok(false);
        }
        for (e, ev) in es.iter().zip(&self.against_e) {
            let p = mat_mul(&self.a0, e)?;
            if !check_evidence(&self.product, &p, ev, e == &self.e0, true)? {
                return Ok(false);
            }
        }
        for (a, ev) in as_.iter().zip(&self.against_a) {
            let p = mat_mul(a, &self.e0)?;
            if !check_evidence(&self.product, &p, ev, a == &self.a0, false)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `center_dominates`: the opponent product must not exceed the center
/// (second player deviating); otherwise it must not fall below it.
fn check_evidence(center: &Matrix, other: &Matrix, ev: &Evidence, same: bool, center_dominates: bool) -> Result<bool> {
    Ok(match ev {
        Evidence::Same => same,
        Evidence::Separated { bound, product_witness, opponent_witness } => {
            if center_dominates {
                certify_radius_upper(other, bound, opponent_witness)?
                    && certify_radius_lower(center, bound, product_witness)?
            } else {
                certify_radius_upper(center, bound, product_witness)?
                    && certify_radius_lower(other, bound, opponent_witness)?
            }
        }
        Evidence::Algebraic(ord) => {
            let actual = compare_spectral_radii(center, other)?;
            let allowed = if center_dominates { actual != Ordering::Less } else { actual != Ordering::Greater };
            actual == *ord && allowed
        }
    })
}

/// Float table `ρ(A_i E_j)` over both enumerations.
pub fn radius_table(a_set: &IruSet, e_set: &IruSet, cap: u128) -> Result<Vec<Vec<f64>>> {
    let a: Vec<Matrix> = a_set.enumerate(cap)?.collect();
    let e: Vec<Matrix> = e_set.enumerate(cap)?.collect();
    let size = (a.len() as u128) * (e.len() as u128);
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    a.par_iter().map(|ai| e.iter().map(|ej| radius_f64(&mat_mul(ai, ej)?)).collect::<Result<Vec<f64>>>()).collect()
}

/// `(min over rows of row max, max over columns of column min)` of a table.
pub fn table_minimax(table: &[Vec<f64>]) -> (f64, f64) {
    let min_max =
        table.iter().map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max)).fold(f64::INFINITY, f64::min);
    let cols = table.first().map_or(0, Vec::len);
    let max_min =
        (0..cols).map(|j| table.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min)).fold(f64::NEG_INFINITY, f64::max);
    (min_max, max_min)
}

/// Evidence that `center_dominates ? ρ(other) ≤ ρ(center) : ρ(center) ≤ ρ(other)`,
/// or `None` when that inequality is false.
fn prove(center: &Matrix, other: &Matrix, center_dominates: bool) -> Result<Option<Evidence>> {
    let tol = rational_from_f64(WITNESS_TOL);
    let (c_est, c_w) = spectral_radius_with_witness(center, &tol)?;
    let (o_est, o_w) = spectral_radius_with_witness(other, &tol)?;
    if center_dominates && o_est.upper <= c_est.lower {
        return Ok(Some(Evidence::Separated {
            bound: c_est.lower,
            product_witness: c_w.lower,
            opponent_witness: o_w.upper,
        }));
    }
    if !center_dominates && c_est.upper <= o_est.lower {
        return Ok(Some(Evidence::Separated {
            bound: c_est.upper,
            product_witness: c_w.upper,
            opponent_witness: o_w.lower,
        }));
    }
    let ord = compare_spectral_radii(center, other)?;
    let ok = if center_dominates { ord != Ordering::Less } else { ord != Ordering::Greater };
    Ok(ok.then_some(Evidence::Algebraic(ord)))
}

/// First pair, in lexicographic enumeration order, that is an exactly
/// certified saddle point of `ρ(A E)`.
pub fn find_saddle(a_set: &IruSet, e_set: &IruSet, cap: u128) -> Result<SaddleCertificate> {
    if a_set.n_cols() != e_set.n_rows() || e_set.n_cols() != a_set.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "families of shapes {}x{} and {}x{} do not compose",
            a_set.n_rows(),
            a_set.n_cols(),
            e_set.n_rows(),
            e_set.n_cols()
        )));
    }
    let a_choices: Vec<Vec<usize>> = a_set.choices(cap)?.collect();
    let e_choices: Vec<Vec<usize>> = e_set.choices(cap)?.collect();
    let a: Vec<Matrix> = a_choices.iter().map(|c| a_set.member(c)).collect();
    let e: Vec<Matrix> = e_choices.iter().map(|c| e_set.member(c)).collect();
    let table = radius_table(a_set, e_set, cap)?;
    let row_max: Vec<f64> = table.iter().map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max)).collect();
    let col_min: Vec<f64> = (0..e.len()).map(|j| table.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min)).collect();
    let slack = |x: f64| 1e-9 * x.abs().max(1.0);
    for i in 0..a.len() {
        for j in 0..e.len() {
            let r = table[i][j];
            if r < row_max[i] - slack(r) || r > col_min[j] + slack(r) {
                continue;
            }
            if let Some(cert) = confirm(&a, &e, i, j, &a_choices[i], &e_choices[j])? {
                return Ok(cert);
            }
        }
    }
    Err(Error::NoSaddle)
}

fn confirm(
    a: &[Matrix],
    e: &[Matrix],
    i: usize,
    j: usize,
    a_choice: &[usize],
    e_choice: &[usize],
) -> Result<Option<SaddleCertificate>> {
    let center = mat_mul(&a[i], &e[j])?;
    let against_e = e
        .par_iter()
        .enumerate()
        .map(|(k, ek)| {
            if k == j {
                return Ok(Some(Evidence::Same));
            }
            prove(&center, &mat_mul(&a[i], ek)?, true)
        })
        .collect::<Result<Option<Vec<_>>>>()?;
    let Some(against_e) = against_e else {
        return Ok(None);
    };
    let against_a = a
        .par_iter()
        .enumerate()
        .map(|(k, ak)| {
            if k == i {
                return Ok(Some(Evidence::Same));
            }
            prove(&center, &mat_mul(ak, &e[j])?, false)
        })
        .collect::<Result<Option<Vec<_>>>>()?;
    let Some(against_a) = against_a else {
        return Ok(None);
    };
    Ok(Some(SaddleCertificate {
        a_choice: a_choice.to_vec(),
        e_choice: e_choice.to_vec(),
        a0: a[i].clone(),
        e0: e[j].clone(),
        product: center,
        against_e,
        against_a,
    }))
}

/// Value bracket and certified saddle of a pair of families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSolution {
    pub value: ValueInterval,
    pub saddle: SaddleCertificate,
}

pub fn solve_sets(a_set: &IruSet, e_set: &IruSet, tol: &Rational) -> Result<SetSolution> {
    solve_sets_with_cap(a_set, e_set, tol, DEFAULT_ENUM_CAP)
}

pub fn solve_sets_with_cap(a_set: &IruSet, e_set: &IruSet, tol: &Rational, cap: u128) -> Result<SetSolution> {
    let saddle = find_saddle(a_set, e_set, cap)?;
    let value = value_bisection_with_cap(a_set, e_set, tol, cap)?;
    // Both are exact, so disagreement can only be a bug.
    assert!(
        compare_radius_with(&saddle.product, &value.lower)? != Ordering::Less
            && compare_radius_with(&saddle.product, &value.upper)? != Ordering::Greater,
        "saddle radius outside the bisection bracket"
    );
    Ok(SetSolution { value, saddle })
}

/// Optimal positional strategies and value of an entropy game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSolution {
    pub value: ValueInterval,
    pub despot_strategy: PositionalStrategy,
    pub tribune_strategy: PositionalStrategy,
    pub saddle_matrices: (Matrix, Matrix),
    pub certificate: SaddleCertificate,
    pub translation: IruTranslation,
}

pub fn solve(arena: &Arena, tol: &Rational) -> Result<GameSolution> {
    solve_with_cap(arena, tol, DEFAULT_ENUM_CAP)
}

pub fn solve_with_cap(arena: &Arena, tol: &Rational, cap: u128) -> Result<GameSolution> {
    let translation = arena_to_iru(arena)?;
    let SetSolution { value, saddle } = solve_sets_with_cap(&translation.a_set, &translation.e_set, tol, cap)?;
    let despot_strategy = translation.strategy_of(arena, Player::Despot, &saddle.a0)?;
    let tribune_strategy = translation.strategy_of(arena, Player::Tribune, &saddle.e0)?;
    Ok(GameSolution {
        value,
        despot_strategy,
        tribune_strategy,
        saddle_matrices: (saddle.a0.clone(), saddle.e0.clone()),
        certificate: saddle,
        translation,
    })
}
