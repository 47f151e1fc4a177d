//! Small dense linear algebra for two-qubit work: complex matrices up to 4x4,
//! Jacobi eigensolvers, 3x3 singular values, tensor products, partial traces
//! and the partial transpose.

mod eigen;
mod matrix;
pub mod real;

pub use eigen::{
    hermitian_eigen, singular_values_3x3, symmetric_eigen3, HermitianEigen, SpectrumTriple,
    HERMITIAN_TOL,
};
pub use matrix::{
    partial_trace, partial_transpose_b, tensor_product, ComplexMatrix, PauliBasis, Subsystem,
};
pub use real::{Mat3, UnitVector, Vec3};
