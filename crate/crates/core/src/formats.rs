//! JSON file formats. Rationals are written as `"p/q"` strings so every file
//! round-trips exactly.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::games::{Arena, MpgArena, MpgEdge, Transition};
use crate::iru::{IruSet, RowSet};
use crate::linalg::{format_rational, parse_rational, Matrix, Rational, Vector};
use crate::lp::{Certificate, CertificateKind};
use crate::machine::{EncodedMmg, NamedMatrix, Variant};
use crate::{Error, Result};

fn texts(row: &[Rational]) -> Vec<String> {
    row.iter().map(format_rational).collect()
}

fn rationals(row: &[String]) -> Result<Vec<Rational>> {
    row.iter().map(|s| parse_rational(s)).collect()
}

fn matrix_texts(m: &Matrix) -> Vec<Vec<String>> {
    m.row_iter().map(texts).collect()
}

fn matrix_from_texts(rows: &[Vec<String>]) -> Result<Matrix> {
    Matrix::from_rows(rows.iter().map(|r| rationals(r)).collect::<Result<_>>()?)
}

/// Transition weight: a JSON number when it fits in 64 bits, a decimal
/// string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Number(u64),
    Text(String),
}

impl Default for Weight {
    fn default() -> Self {
        Weight::Number(1)
    }
}

impl Weight {
    fn from_big(w: &BigUint) -> Weight {
        u64::try_from(w).map(Weight::Number).unwrap_or_else(|_| Weight::Text(w.to_string()))
    }

    fn to_big(&self) -> Result<BigUint> {
        match self {
            Weight::Number(n) => Ok(BigUint::from(*n)),
            Weight::Text(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad transition weight {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionEntry {
    pub from: String,
    pub action: String,
    pub to: String,
    #[serde(default)]
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArenaFile {
    pub despot_states: Vec<String>,
    pub tribune_states: Vec<String>,
    pub alphabet: Vec<String>,
    pub transitions: Vec<TransitionEntry>,
}

impl ArenaFile {
    pub fn from_arena(a: &Arena) -> Self {
        ArenaFile {
            despot_states: a.despot_states().to_vec(),
            tribune_states: a.tribune_states().to_vec(),
            alphabet: a.alphabet().to_vec(),
            transitions: a
                .transitions()
                .iter()
                .map(|t| TransitionEntry {
                    from: t.from.clone(),
                    action: t.action.clone(),
                    to: t.to.clone(),
                    weight: Weight::from_big(&t.weight),
                })
                .collect(),
        }
    }

    pub fn to_arena(&self) -> Result<Arena> {
        let transitions = self
            .transitions
            .iter()
            .map(|t| Ok(Transition::weighted(&t.from, &t.action, &t.to, t.weight.to_big()?)))
            .collect::<Result<_>>()?;
        Arena::new(self.despot_states.clone(), self.tribune_states.clone(), self.alphabet.clone(), transitions)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMatrixEntry {
    pub name: String,
    pub entries: Vec<Vec<String>>,
}

/// Either an IRU family given by its row sets, or an explicit list of
/// matrices. `nonnegative: false` marks sets that must not be fed to the
/// IRU solvers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSetFile {
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_sets: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<NamedMatrixEntry>>,
    #[serde(default = "yes")]
    pub nonnegative: bool,
}

fn yes() -> bool {
    true
}

impl MatrixSetFile {
    pub fn from_iru(s: &IruSet) -> Self {
        MatrixSetFile {
            rows: s.n_rows(),
            cols: s.n_cols(),
            row_sets: Some(s.row_sets().iter().map(|r| r.rows().iter().map(|row| texts(row)).collect()).collect()),
            matrices: None,
            nonnegative: true,
        }
    }

    pub fn from_named(dimension: usize, list: &[NamedMatrix]) -> Self {
        MatrixSetFile {
            rows: dimension,
            cols: dimension,
            row_sets: None,
            matrices: Some(
                list.iter()
                    .map(|nm| NamedMatrixEntry { name: nm.name.clone(), entries: matrix_texts(&nm.matrix) })
                    .collect(),
            ),
            nonnegative: list.iter().all(|nm| nm.matrix.is_nonnegative()),
        }
    }

    pub fn to_iru(&self) -> Result<IruSet> {
        if !self.nonnegative {
            return Err(Error::PreconditionViolated("matrix set is flagged as containing negative entries".into()));
        }
        let sets = self
            .row_sets
            .as_ref()
            .ok_or_else(|| Error::Parse("expected \"row_sets\"; explicit matrix lists are not IRU families".into()))?;
        let row_sets = sets
            .iter()
            .map(|set| RowSet::new(set.iter().map(|r| rationals(r)).collect::<Result<_>>()?))
            .collect::<Result<Vec<_>>>()?;
        let s = IruSet::new(row_sets)?;
        if s.n_rows() != self.rows || s.n_cols() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "declared {}x{}, row sets give {}x{}",
                self.rows,
                self.cols,
                s.n_rows(),
                s.n_cols()
            )));
        }
        Ok(s)
    }

    pub fn to_named(&self) -> Result<Vec<NamedMatrix>> {
        let list = self.matrices.as_ref().ok_or_else(|| Error::Parse("expected \"matrices\"".into()))?;
        list.iter()
            .map(|e| {
                let matrix = matrix_from_texts(&e.entries)?;
                if matrix.rows() != self.rows || matrix.cols() != self.cols {
                    return Err(Error::DimensionMismatch(format!("matrix {} has the wrong shape", e.name)));
                }
                Ok(NamedMatrix { name: e.name.clone(), matrix })
            })
            .collect()
    }
}

/// Adam's (minimizer, Despot) and Eve's (maximizer, Tribune) sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFile {
    pub adam: MatrixSetFile,
    pub eve: MatrixSetFile,
}

impl PairFile {
    pub fn from_sets(adam: &IruSet, eve: &IruSet) -> Self {
        PairFile { adam: MatrixSetFile::from_iru(adam), eve: MatrixSetFile::from_iru(eve) }
    }

    pub fn to_sets(&self) -> Result<(IruSet, IruSet)> {
        Ok((self.adam.to_iru()?, self.eve.to_iru()?))
    }
}

pub const ROW_VECTOR_CONVENTION: &str = "row vectors, v -> v*M";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedFile {
    pub variant: String,
    pub dimension: usize,
    pub convention: String,
    pub coordinate_labels: Vec<String>,
    pub adam: MatrixSetFile,
    pub eve: MatrixSetFile,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl EncodedFile {
    pub fn from_encoded(g: &EncodedMmg) -> Self {
        EncodedFile {
            variant: g.variant.name().to_string(),
            dimension: g.dimension,
            convention: ROW_VECTOR_CONVENTION.to_string(),
            coordinate_labels: g.coordinate_labels.clone(),
            adam: MatrixSetFile::from_named(g.dimension, &g.adam),
            eve: MatrixSetFile::from_named(g.dimension, &g.eve),
            warnings: g.warnings.clone(),
        }
    }

    pub fn to_encoded(&self) -> Result<EncodedMmg> {
        let variant = Variant::from_name(&self.variant)
            .ok_or_else(|| Error::Parse(format!("unknown variant {:?}", self.variant)))?;
        if self.coordinate_labels.len() != self.dimension {
            return Err(Error::DimensionMismatch("one label per coordinate expected".into()));
        }
        Ok(EncodedMmg {
            variant,
            dimension: self.dimension,
            coordinate_labels: self.coordinate_labels.clone(),
            adam: self.adam.to_named()?,
            eve: self.eve.to_named()?,
            warnings: self.warnings.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpgEdgeEntry {
    pub from: String,
    pub to: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpgFile {
    pub despot_states: Vec<String>,
    pub tribune_states: Vec<String>,
    pub edges: Vec<MpgEdgeEntry>,
}

impl MpgFile {
    pub fn from_mpg(m: &MpgArena) -> Self {
        MpgFile {
            despot_states: m.despot_states().to_vec(),
            tribune_states: m.tribune_states().to_vec(),
            edges: m
                .edges()
                .iter()
                .map(|e| MpgEdgeEntry { from: e.from.clone(), to: e.to.clone(), weight: e.weight })
                .collect(),
        }
    }

    pub fn to_mpg(&self) -> Result<MpgArena> {
        MpgArena::new(
            self.despot_states.clone(),
            self.tribune_states.clone(),
            self.edges.iter().map(|e| MpgEdge { from: e.from.clone(), to: e.to.clone(), weight: e.weight }).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub kind: String,
    pub vector: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen_matrix: Option<Vec<Vec<String>>>,
}

impl CertificateFile {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertificateFile {
            kind: c.kind.name().to_string(),
            vector: texts(c.vector.entries()),
            chosen_matrix: c.chosen_matrix.as_ref().map(matrix_texts),
        }
    }

    pub fn to_certificate(&self) -> Result<Certificate> {
        let kind = CertificateKind::from_name(&self.kind)
            .ok_or_else(|| Error::Parse(format!("unknown certificate kind {:?}", self.kind)))?;
        Ok(Certificate {
            kind,
            vector: Vector::column(rationals(&self.vector)?),
            chosen_matrix: self.chosen_matrix.as_deref().map(matrix_from_texts).transpose()?,
        })
    }
}

/// A game read from disk: an arena or a pair of IRU sets.
#[derive(Clone, Debug)]
pub enum GameInput {
    Arena(Arena),
    Pair(IruSet, IruSet),
}

/// Reads an arena file or a pair file, told apart by their keys.
pub fn read_game(json: &str) -> Result<GameInput> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    if value.get("transitions").is_some() {
        let file: ArenaFile = serde_json::from_value(value)?;
        Ok(GameInput::Arena(file.to_arena()?))
    } else if value.get("adam").is_some() {
        let file: PairFile = serde_json::from_value(value)?;
        let (a, e) = file.to_sets()?;
        Ok(GameInput::Pair(a, e))
    } else {
        Err(Error::Parse("expected an arena (\"transitions\") or a pair (\"adam\", \"eve\")".into()))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types always serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(json: &str) -> Result<T> {
    Ok(serde_json::from_str(json)?)
}
