//! JSON interchange for matrices, density operators and measurement models.
//!
//! Matrices are `{"rows": n, "cols": m, "re": [...], "im": [...]}` with
//! row-major entries. Density operators add `"kind": "density"`. Every float
//! is written with 17 significant digits.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::ComplexMatrix;
use crate::measurement::{MeasurementModel, ModelParts};
use crate::states::{make_density, DensityOperator, StateVector, STATE_TOL};

/// Serde helpers writing floats as `{:.16e}`.
pub mod num17 {
    use serde::ser::{Error, SerializeSeq};
    use serde::Serializer;
    use serde_json::value::RawValue;

    pub fn format(x: f64) -> String {
        format!("{x:.16e}")
    }

    fn raw(x: f64) -> Result<Box<RawValue>, String> {
        if !x.is_finite() {
            return Err(format!("cannot write non-finite number {x}"));
        }
        RawValue::from_string(format(x)).map_err(|e| e.to_string())
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&*raw(*x).map_err(S::Error::custom)?, s)
    }

    pub fn serialize_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn serialize_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for &x in xs {
            seq.serialize_element(&*raw(x).map_err(S::Error::custom)?)?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kind: Option<String>,
    pub rows: usize,
    pub cols: usize,
    #[serde(serialize_with = "num17::serialize_vec")]
    pub re: Vec<f64>,
    #[serde(serialize_with = "num17::serialize_vec")]
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            kind: None,
            rows: m.rows(),
            cols: m.cols(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        }
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        Self { kind: Some("density".into()), ..Self::from_matrix(rho.matrix()) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.im.len() {
            return Err(LabError::Format(format!("re has {} entries but im has {}", self.re.len(), self.im.len())));
        }
        let data = self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }

    /// Re-validates as a density operator.
    pub fn to_density(&self) -> Result<DensityOperator> {
        if let Some(kind) = &self.kind {
            if kind != "density" {
                return Err(LabError::Format(format!("expected kind \"density\", found \"{kind}\"")));
            }
        }
        make_density(&self.to_matrix()?, STATE_TOL)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorJson {
    #[serde(serialize_with = "num17::serialize_vec")]
    pub re: Vec<f64>,
    #[serde(serialize_with = "num17::serialize_vec")]
    pub im: Vec<f64>,
}

impl VectorJson {
    pub fn from_state(v: &StateVector) -> Self {
        Self { re: v.amplitudes().iter().map(|z| z.re).collect(), im: v.amplitudes().iter().map(|z| z.im).collect() }
    }

    pub fn to_state(&self) -> Result<StateVector> {
        if self.re.len() != self.im.len() {
            return Err(LabError::Format("vector re/im lengths differ".into()));
        }
        StateVector::new(self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelJson {
    pub kind: String,
    pub d_s: usize,
    pub d_e: usize,
    pub psi1: VectorJson,
    pub psi2: VectorJson,
    pub pointer1: VectorJson,
    pub pointer2: VectorJson,
    pub ready: MatrixJson,
    pub unitary: MatrixJson,
}

impl ModelJson {
    pub fn from_model(model: &MeasurementModel) -> Self {
        let p = model.parts();
        Self {
            kind: "model".into(),
            d_s: p.d_s,
            d_e: p.d_e,
            psi1: VectorJson::from_state(&p.psi1),
            psi2: VectorJson::from_state(&p.psi2),
            pointer1: VectorJson::from_state(&p.pointer1),
            pointer2: VectorJson::from_state(&p.pointer2),
            ready: MatrixJson::from_density(&p.ready),
            unitary: MatrixJson::from_matrix(&p.unitary),
        }
    }

    /// Rebuilds the model, re-checking every invariant.
    pub fn to_model(&self) -> Result<MeasurementModel> {
        if self.kind != "model" {
            return Err(LabError::Format(format!("expected kind \"model\", found \"{}\"", self.kind)));
        }
        MeasurementModel::from_parts(ModelParts {
            d_s: self.d_s,
            d_e: self.d_e,
            psi1: self.psi1.to_state()?,
            psi2: self.psi2.to_state()?,
            ready: self.ready.to_density()?,
            pointer1: self.pointer1.to_state()?,
            pointer2: self.pointer2.to_state()?,
            unitary: self.unitary.to_matrix()?,
        })
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializing finite data cannot fail")
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    to_json(&MatrixJson::from_matrix(m))
}

pub fn matrix_from_json(s: &str) -> Result<ComplexMatrix> {
    serde_json::from_str::<MatrixJson>(s).map_err(|e| LabError::Format(e.to_string()))?.to_matrix()
}

pub fn density_to_json(rho: &DensityOperator) -> String {
    to_json(&MatrixJson::from_density(rho))
}

pub fn density_from_json(s: &str) -> Result<DensityOperator> {
    serde_json::from_str::<MatrixJson>(s).map_err(|e| LabError::Format(e.to_string()))?.to_density()
}

pub fn model_to_json(model: &MeasurementModel) -> String {
    to_json(&ModelJson::from_model(model))
}

pub fn model_from_json(s: &str) -> Result<MeasurementModel> {
    serde_json::from_str::<ModelJson>(s).map_err(|e| LabError::Format(e.to_string()))?.to_model()
}
