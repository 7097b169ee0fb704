//! JSON interchange: a complex entry is `[re, im]`, a matrix is a row-major
//! list of rows, a tuple is a list of matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gentest::{FiberedTuple, FiniteFiberAlgebra};
use crate::matalg::MatrixTuple;
use crate::scalar::{CMat, Real, C};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;
pub type JsonTuple = Vec<JsonMatrix>;

pub fn matrix_from_json<T: Real>(rows: &JsonMatrix) -> Result<CMat<T>> {
    let n = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "row {i} has {} entries, expected {n} (matrices must be square)",
            r.len()
        )));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("non-finite matrix entry".into()));
    }
    Ok(CMat::from_fn(n, n, |i, j| {
        let [re, im] = rows[i][j];
        C::new(T::lit(re), T::lit(im))
    }))
}

pub fn matrix_to_json<T: Real>(m: &CMat<T>) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()])
                .collect()
        })
        .collect()
}

pub fn tuple_from_json<T: Real>(raw: &JsonTuple) -> Result<MatrixTuple<T>> {
    MatrixTuple::new(raw.iter().map(matrix_from_json).collect::<Result<_>>()?)
}

pub fn tuple_to_json<T: Real>(t: &MatrixTuple<T>) -> JsonTuple {
    t.entries().iter().map(matrix_to_json).collect()
}

pub fn tuple_from_json_str<T: Real>(s: &str) -> Result<MatrixTuple<T>> {
    let raw: JsonTuple = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    tuple_from_json(&raw)
}

/// Input of the generation check: fiber sizes and one tuple per fiber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDocument {
    pub fibers: Vec<usize>,
    pub tuple: Vec<JsonTuple>,
}

impl CheckDocument {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_parts<T: Real>(alg: &FiniteFiberAlgebra, t: &FiberedTuple<T>) -> Self {
        Self {
            fibers: alg.fibers().to_vec(),
            tuple: t.fibers().iter().map(tuple_to_json).collect(),
        }
    }

    pub fn decode<T: Real>(&self) -> Result<(FiniteFiberAlgebra, FiberedTuple<T>)> {
        let alg = FiniteFiberAlgebra::new(self.fibers.clone())?;
        if self.tuple.len() != self.fibers.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} fiber sizes but {} fiber tuples",
                self.fibers.len(),
                self.tuple.len()
            )));
        }
        let fibers = self
            .tuple
            .iter()
            .map(tuple_from_json)
            .collect::<Result<Vec<MatrixTuple<T>>>>()?;
        let t = FiberedTuple::new(fibers)?;
        if t.sizes() != alg.fibers() {
            return Err(Error::ShapeMismatch(format!(
                "declared fiber sizes {:?}, tuple sizes {:?}",
                alg.fibers(),
                t.sizes()
            )));
        }
        Ok((alg, t))
    }
}
