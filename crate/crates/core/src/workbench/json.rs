//! JSON file formats.
//!
//! Complex numbers are `[re, im]`; matrices are `{rows, cols, data}` with
//! `data` in row-major order. Floats are written in shortest round-trip form,
//! so serialize → parse is bit-exact.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::OperatorAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexVector, Tolerance, SPAN_TOL};
use crate::observables::ObservablePair;
use crate::tps::Tps;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for row in 0..m.nrows() {
            for col in 0..m.ncols() {
                let z = m[(row, col)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.rows * self.cols != self.data.len() {
            return Err(Error::Input(format!(
                "data: expected {} entries for a {}x{} matrix, found {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |row, col| {
            let [re, im] = self.data[row * self.cols + col];
            c(re, im)
        }))
    }
}

/// `#[serde(with = ...)]` adapter for [`ComplexMatrix`] fields.
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        raw.to_matrix().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TpsJson {
    pub dim: usize,
    pub k: usize,
    pub l: usize,
    pub basis: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservablePairJson {
    pub r: MatrixJson,
    pub t: MatrixJson,
    pub hermitian: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub n: usize,
    pub span: Vec<MatrixJson>,
}

/// Deserializes `text`, reporting the JSON path of the first bad field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Input(format!("at `{path}`: {}", e.into_inner()))
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("tpskit values always serialize")
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

/// A state file is a matrix with a single column (a single row is accepted).
pub fn parse_state(text: &str) -> Result<ComplexVector> {
    let m = parse_matrix(text)?;
    if m.ncols() != 1 && m.nrows() != 1 {
        return Err(Error::Input(format!(
            "state must be a column vector, got a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(ComplexVector::from_iterator(m.len(), m.transpose().iter().copied()))
}

pub fn state_json(w: &ComplexVector) -> MatrixJson {
    MatrixJson::from(&ComplexMatrix::from_column_slice(w.len(), 1, w.as_slice()))
}

impl From<&Tps> for TpsJson {
    fn from(t: &Tps) -> Self {
        TpsJson {
            dim: t.dim(),
            k: t.k(),
            l: t.l(),
            basis: MatrixJson::from(t.basis()),
        }
    }
}

impl TpsJson {
    pub fn to_tps(&self, tol: &Tolerance) -> Result<Tps> {
        let basis = self.basis.to_matrix()?;
        if basis.nrows() != self.dim || basis.ncols() != self.dim {
            return Err(Error::Input(format!(
                "basis: expected {0}x{0}, found {1}x{2}",
                self.dim,
                basis.nrows(),
                basis.ncols()
            )));
        }
        Tps::with_tolerance(self.k, self.l, basis, tol)
    }
}

pub fn parse_tps(text: &str, tol: &Tolerance) -> Result<Tps> {
    parse::<TpsJson>(text)?.to_tps(tol)
}

impl From<&ObservablePair> for ObservablePairJson {
    fn from(p: &ObservablePair) -> Self {
        ObservablePairJson {
            r: MatrixJson::from(&p.r),
            t: MatrixJson::from(&p.t),
            hermitian: p.hermitian,
        }
    }
}

impl ObservablePairJson {
    pub fn to_pair(&self, tol: &Tolerance) -> Result<ObservablePair> {
        ObservablePair::from_parts(self.r.to_matrix()?, self.t.to_matrix()?, self.hermitian, tol)
    }
}

pub fn parse_pair(text: &str, tol: &Tolerance) -> Result<ObservablePair> {
    parse::<ObservablePairJson>(text)?.to_pair(tol)
}

impl From<&OperatorAlgebra> for AlgebraJson {
    fn from(a: &OperatorAlgebra) -> Self {
        AlgebraJson {
            n: a.dim_space(),
            span: a.span_basis().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl AlgebraJson {
    /// The span must already be closed under multiplication.
    pub fn to_algebra(&self) -> Result<OperatorAlgebra> {
        let mats = self
            .span
            .iter()
            .enumerate()
            .map(|(p, m)| {
                m.to_matrix()
                    .map_err(|e| Error::Input(format!("span[{p}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let a = OperatorAlgebra::from_span(self.n, &mats).map_err(|e| Error::Input(e.to_string()))?;
        let residual = a.closure_residual();
        if residual > SPAN_TOL {
            return Err(Error::Input(format!(
                "span is not closed under multiplication (residual {residual:e})"
            )));
        }
        Ok(a)
    }
}

pub fn parse_algebra(text: &str) -> Result<OperatorAlgebra> {
    parse::<AlgebraJson>(text)?.to_algebra()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{span_equal, tps_to_tpp};
    use crate::random;

    #[test]
    fn matrix_round_trip_is_bit_exact() {
        let mut g = random::rng(1);
        let m = random::matrix(3, 5, &mut g) * c(1.0 / 3.0, 0.0);
        let text = to_json(&MatrixJson::from(&m));
        let back = parse_matrix(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn layout_is_row_major() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.5), c(3.0, 0.0), c(4.0, -1.0)]);
        let v = serde_json::to_value(MatrixJson::from(&m)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"rows": 2, "cols": 2, "data": [[1.0, 0.0], [2.0, 0.5], [3.0, 0.0], [4.0, -1.0]]})
        );
    }

    #[test]
    fn tps_and_pair_round_trip() {
        let tol = Tolerance::default();
        let mut g = random::rng(2);
        let t = Tps::new(2, 3, random::invertible(6, 1e3, &mut g)).unwrap();
        let back = parse_tps(&to_json(&TpsJson::from(&t)), &tol).unwrap();
        assert_eq!(back, t);

        let r = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c(0.1, 0.0), c(-2.0 / 3.0, 0.0)]));
        let p = ObservablePair::new(r.clone(), r, &tol).unwrap();
        assert_eq!(parse_pair(&to_json(&ObservablePairJson::from(&p)), &tol).unwrap(), p);
    }

    #[test]
    fn algebra_round_trip() {
        let (a1, _) = tps_to_tpp(&Tps::god_given(2, 2));
        let back = parse_algebra(&to_json(&AlgebraJson::from(&a1))).unwrap();
        assert!(span_equal(&a1, &back));
    }

    #[test]
    fn errors_name_the_field() {
        let err = parse_tps(r#"{"dim": 1, "k": 1, "l": 1, "basis": {"rows": 1, "cols": 1, "data": [[1.0, "x"]]}}"#, &Tolerance::default())
            .unwrap_err();
        match err {
            Error::Input(msg) => assert!(msg.contains("basis.data"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_matrix(r#"{"rows": 2, "cols": 2, "data": [[1.0, 0.0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Input(ref m) if m.contains("data")));
        let err = parse::<ObservablePairJson>(r#"{"r": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]}}"#).unwrap_err();
        assert!(matches!(err, Error::Input(ref m) if m.contains("`t`") || m.contains("missing field `t`")));
    }

    #[test]
    fn non_closed_span_is_rejected() {
        let e01 = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let text = to_json(&AlgebraJson {
            n: 2,
            span: vec![MatrixJson::from(&e01), MatrixJson::from(&e01.transpose())],
        });
        assert!(matches!(parse_algebra(&text), Err(Error::Input(_))));
    }
}
