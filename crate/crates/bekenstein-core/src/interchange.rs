//! Serde views of the numerical objects for JSON export.
//!
//! Complex numbers are written as two-element arrays `[re, im]`; matrices as
//! row-major lists of rows.

use crate::chiral::{NetRegion, NetSubspace};
use crate::prelude::*;
use crate::stdsubspace::StandardSubspace;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `[re, im]`.
pub type ComplexPair = [f64; 2];

pub fn pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

pub fn from_pair(p: ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

/// Serde adapter for a single `C64` field: `#[serde(with = "interchange::complex")]`.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> core::result::Result<S::Ok, S::Error> {
        pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<C64, D::Error> {
        ComplexPair::deserialize(d).map(from_pair)
    }
}

/// Complex vector as a list of pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexVector(pub Vec<ComplexPair>);

impl From<&CVec> for ComplexVector {
    fn from(v: &CVec) -> Self {
        ComplexVector(v.iter().map(|z| pair(*z)).collect())
    }
}

impl ComplexVector {
    pub fn to_cvec(&self) -> CVec {
        CVec::from_iterator(self.0.len(), self.0.iter().map(|p| from_pair(*p)))
    }
}

/// Complex matrix as a list of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrix(pub Vec<Vec<ComplexPair>>);

impl From<&CMat> for ComplexMatrix {
    fn from(m: &CMat) -> Self {
        ComplexMatrix((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect())
    }
}

impl ComplexMatrix {
    /// Back to a matrix; rows must have equal length.
    pub fn to_cmat(&self) -> Result<CMat> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, Vec::len);
        if let Some(bad) = self.0.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(CMat::from_fn(rows, cols, |i, j| from_pair(self.0[i][j])))
    }
}

/// Export of a chiral region subspace: the knots define the basis, the Gram
/// matrix and symplectic spectrum its modular data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceRecord {
    pub region: NetRegion,
    pub knots: Vec<f64>,
    pub gram: ComplexMatrix,
    /// Symplectic eigenvalues `μ`, ascending.
    pub mu: Vec<f64>,
    /// `(1 - μ)/(1 + μ)` in the same order.
    pub delta_eigenvalues: Vec<f64>,
}

impl From<&NetSubspace> for SubspaceRecord {
    fn from(sub: &NetSubspace) -> Self {
        let modular = sub.modular();
        SubspaceRecord {
            region: sub.region(),
            knots: sub.basis().knots().to_vec(),
            gram: sub.gram().into(),
            mu: modular.mu().iter().copied().collect(),
            delta_eigenvalues: modular.delta_eigenvalues().iter().copied().collect(),
        }
    }
}

/// Tomita data of a standard subspace of `C^n`. Antilinear maps are stored
/// as the matrix `M` with `x ↦ M conj(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularRecord {
    pub dim: usize,
    pub basis: ComplexMatrix,
    pub s: ComplexMatrix,
    pub j: ComplexMatrix,
    pub delta: ComplexMatrix,
}

impl From<&StandardSubspace> for ModularRecord {
    fn from(h: &StandardSubspace) -> Self {
        ModularRecord {
            dim: h.dim(),
            basis: h.subspace().basis().into(),
            s: (&h.tomita_s().matrix).into(),
            j: (&h.j().matrix).into(),
            delta: h.delta().matrix().into(),
        }
    }
}
