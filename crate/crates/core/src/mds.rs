//! Vandermonde (Reed-Solomon) generator matrices.
//!
//! An `(n, k)` code evaluates polynomials of degree `< k` at the points
//! `0, 1, ..., n-1`; row `i` of the generator is `(i^0, i^1, ..., i^(k-1))`
//! with `0^0 = 1`. Any `k` rows form a square Vandermonde matrix on distinct
//! nodes, hence are invertible, which is the MDS property.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldModulus;
use crate::linalg::Matrix;

/// Codes up to this length are checked exhaustively when constructed.
pub const EXHAUSTIVE_CHECK_MAX_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MdsSpec {
    pub n: usize,
    pub k: usize,
    pub modulus: FieldModulus,
}

impl MdsSpec {
    pub fn new(n: usize, k: usize, modulus: FieldModulus) -> Result<Self> {
        if k == 0 || n < k {
            return Err(Error::InvalidParams(format!("MDS code needs n >= k >= 1, got ({n}, {k})")));
        }
        if (modulus.value() as u128) < n as u128 {
            return Err(Error::FieldTooSmall {
                q: modulus.value(),
                needed: n,
                context: format!("({n}, {k}) code"),
            });
        }
        Ok(Self { n, k, modulus })
    }
}

/// `n x k` Vandermonde generator on the points `0..n`.
pub fn generator(spec: MdsSpec) -> Result<Matrix> {
    let spec = MdsSpec::new(spec.n, spec.k, spec.modulus)?;
    let q = spec.modulus;
    let mut data = Vec::with_capacity(spec.n * spec.k);
    for x in 0..spec.n as u64 {
        let mut power = 1 % q.value();
        for _ in 0..spec.k {
            data.push(power);
            power = q.mul(power, x);
        }
    }
    Matrix::new(spec.n, spec.k, q, data)
}

/// A generator matrix together with the shape it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsCode {
    spec: MdsSpec,
    generator: Matrix,
    vandermonde: bool,
}

impl MdsCode {
    pub fn new(spec: MdsSpec) -> Result<Self> {
        let generator = generator(spec)?;
        let code = Self {
            spec,
            generator,
            vandermonde: true,
        };
        if spec.n <= EXHAUSTIVE_CHECK_MAX_N {
            if let Some(bad) = code.first_singular_subset() {
                return Err(Error::Invariant(format!(
                    "({}, {}) generator rows {bad:?} are singular",
                    spec.n, spec.k
                )));
            }
        }
        Ok(code)
    }

    /// Repetition code: row `i` is the unit vector `e_(i mod k)`. Not MDS
    /// for `n > k`; exists only to build deliberately broken query plans.
    pub fn repetition(spec: MdsSpec) -> Self {
        let mut generator = Matrix::zeros(spec.n, spec.k, spec.modulus);
        for i in 0..spec.n {
            generator.set(i, i % spec.k, 1);
        }
        Self {
            spec,
            generator,
            vandermonde: false,
        }
    }

    pub fn spec(&self) -> MdsSpec {
        self.spec
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn is_vandermonde(&self) -> bool {
        self.vandermonde
    }

    pub fn encode(&self, info: &Matrix) -> Result<Matrix> {
        if info.rows() != self.spec.k {
            return Err(Error::ShapeMismatch {
                op: "encode",
                left: self.generator.shape(),
                right: info.shape(),
            });
        }
        self.generator.mat_mul(info)
    }

    /// Recovers the information rows from `k` codeword coordinates.
    pub fn recover_info(&self, coords: &[usize], values: &Matrix) -> Result<Matrix> {
        check_coords(coords, self.spec.k, self.spec.n)?;
        if values.rows() != coords.len() {
            return Err(Error::ShapeMismatch {
                op: "recover_info",
                left: (coords.len(), self.spec.k),
                right: values.shape(),
            });
        }
        self.generator.select_rows(coords)?.solve(values)
    }

    /// Whether the given distinct rows of the generator are linearly independent.
    pub fn rows_independent(&self, coords: &[usize]) -> Result<bool> {
        Ok(self.generator.select_rows(coords)?.rank() == coords.len())
    }

    fn first_singular_subset(&self) -> Option<Vec<usize>> {
        (0..self.spec.n)
            .combinations(self.spec.k)
            .find(|rows| !self.rows_independent(rows).unwrap_or(false))
    }
}

pub fn encode(spec: MdsSpec, info: &Matrix) -> Result<Matrix> {
    MdsCode::new(spec)?.encode(info)
}

pub fn recover_info(spec: MdsSpec, coords: &[usize], values: &Matrix) -> Result<Matrix> {
    MdsCode::new(spec)?.recover_info(coords, values)
}

fn check_coords(coords: &[usize], k: usize, n: usize) -> Result<()> {
    if coords.len() != k {
        return Err(Error::InvalidParams(format!("need exactly {k} coordinates, got {}", coords.len())));
    }
    let mut seen = vec![false; n];
    for &c in coords {
        if c >= n {
            return Err(Error::IndexOutOfRange { index: c, limit: n });
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::DuplicateCoordinate(c));
        }
    }
    Ok(())
}
