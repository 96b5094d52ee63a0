//! Bernstein-Euler-Jacobi operators: evaluation, exact moments, the annex
//! moment tables with reconciliation, moduli of continuity and
//! Chebyshev-Grüss bounds.

pub mod error;
pub mod expr;
pub mod families;
pub mod gruss;
pub mod modulus;
pub mod moments;
pub mod operator;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod tables;

pub use error::{Error, Result};
pub use operator::{
    apply, make_bej1, make_bej2, Bej1Spec, Bej2Spec, BejSpec, ExtendedIndex, ExtendedRate, Function,
    OperatorDescriptor,
};
pub use quadrature::QuadratureConfig;
pub use scalar::Param;
