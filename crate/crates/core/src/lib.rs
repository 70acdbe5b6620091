//! Differential geometry on coordinate charts, evaluated exactly through truncated Taylor jets.

pub mod chart;
pub mod constructions;
pub mod error;
pub mod field;
pub mod frame;
pub mod jet;
pub mod linalg;
pub mod pseudo_hermitian;
pub mod sampling;
pub mod semi_riemannian;
pub mod tensor;

pub use chart::{Chart, Point};
pub use error::{GeomError, Result};
pub use field::{
    apply_endomorphism, exterior_derivative, lie_bracket, symmetric_product, wedge, Endomorphism, OneForm,
    ScalarField, SymmetricTwoTensor, TensorField, TwoForm, VectorField,
};
pub use jet::Jet;
pub use semi_riemannian::{ConnectionCoefficients, CurvatureTensor, MetricField};
pub use pseudo_hermitian::{PHStructure, WebsterCurvature, WebsterData};
