//! Glue between the registry's model kinds and the core models.

use solverlab_core::{BurgersModel, IdealGas, Isothermal, Model};

use crate::cases::ModelKind;

/// Final or reference field of any model.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldData {
    Scalar(Vec<[f64; 1]>),
    Iso(Vec<[f64; 2]>),
    Gas(Vec<[f64; 3]>),
}

impl FieldData {
    pub fn len(&self) -> usize {
        match self {
            FieldData::Scalar(v) => v.len(),
            FieldData::Iso(v) => v.len(),
            FieldData::Gas(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_components(&self) -> usize {
        match self {
            FieldData::Scalar(_) => 1,
            FieldData::Iso(_) => 2,
            FieldData::Gas(_) => 3,
        }
    }

    /// Conserved component `k` as a flat vector.
    pub fn component(&self, k: usize) -> Vec<f64> {
        match self {
            FieldData::Scalar(v) => v.iter().map(|u| u[k]).collect(),
            FieldData::Iso(v) => v.iter().map(|u| u[k]).collect(),
            FieldData::Gas(v) => v.iter().map(|u| u[k]).collect(),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            FieldData::Scalar(_) => ModelKind::Burgers,
            FieldData::Iso(_) => ModelKind::Isothermal,
            FieldData::Gas(_) => ModelKind::Gas,
        }
    }
}

/// A core model the harness can drive.
pub trait CaseModel<const N: usize>: Model<f64, N> + Copy + 'static {
    const KIND: ModelKind;

    fn build(gamma: f64, c_sound: f64) -> Self;

    fn conserved(&self, w: &[f64]) -> [f64; N] {
        let w: [f64; N] = std::array::from_fn(|k| w[k]);
        self.from_primitive(&w)
    }

    fn wrap(cells: Vec<[f64; N]>) -> FieldData;

    fn unwrap(field: &FieldData) -> Option<&[[f64; N]]>;

    /// Density, or the unknown itself for scalar laws.
    fn density(u: &[f64; N]) -> f64 {
        u[0]
    }

    /// Entropy flux paired with [`Model::entropy`].
    fn entropy_flux(&self, u: &[f64; N]) -> f64;

    /// Specific internal energy; infinite where the model has none.
    fn internal_energy(&self, _u: &[f64; N]) -> f64 {
        f64::INFINITY
    }
}

impl CaseModel<1> for BurgersModel {
    const KIND: ModelKind = ModelKind::Burgers;

    fn build(_: f64, _: f64) -> Self {
        BurgersModel::default()
    }

    fn wrap(cells: Vec<[f64; 1]>) -> FieldData {
        FieldData::Scalar(cells)
    }

    fn unwrap(field: &FieldData) -> Option<&[[f64; 1]]> {
        match field {
            FieldData::Scalar(v) => Some(v),
            _ => None,
        }
    }

    fn entropy_flux(&self, u: &[f64; 1]) -> f64 {
        u[0].powi(3) / 3.0
    }
}

impl CaseModel<2> for Isothermal<f64> {
    const KIND: ModelKind = ModelKind::Isothermal;

    fn build(_: f64, c_sound: f64) -> Self {
        Isothermal::new(c_sound)
    }

    fn wrap(cells: Vec<[f64; 2]>) -> FieldData {
        FieldData::Iso(cells)
    }

    fn unwrap(field: &FieldData) -> Option<&[[f64; 2]]> {
        match field {
            FieldData::Iso(v) => Some(v),
            _ => None,
        }
    }

    fn entropy_flux(&self, u: &[f64; 2]) -> f64 {
        let v = u[1] / u[0];
        v * (self.entropy(u) + self.c * self.c * u[0])
    }
}

impl CaseModel<3> for IdealGas<f64> {
    const KIND: ModelKind = ModelKind::Gas;

    fn build(gamma: f64, _: f64) -> Self {
        IdealGas::new(gamma)
    }

    fn wrap(cells: Vec<[f64; 3]>) -> FieldData {
        FieldData::Gas(cells)
    }

    fn unwrap(field: &FieldData) -> Option<&[[f64; 3]]> {
        match field {
            FieldData::Gas(v) => Some(v),
            _ => None,
        }
    }

    fn entropy_flux(&self, u: &[f64; 3]) -> f64 {
        u[1] / u[0] * self.entropy(u)
    }

    fn internal_energy(&self, u: &[f64; 3]) -> f64 {
        IdealGas::internal_energy(self, u)
    }
}
