//! Numerical and exact machinery for reconstructing a genus-2 cover of the elliptic curve
//! `y^2 = x^3 - x`: period integrals, a Newton solve for the curve parameter, algebraic
//! recognition, exact verification over `Q(sqrt d)`, the Abel map and the map fit.

pub mod elliptic;
pub mod exact;
pub mod mapfit;
pub mod monodromy;
pub mod periods;
pub mod quadrature;
pub mod recognize;
pub mod scalar;
pub mod solver;

pub use scalar::{BigReal, Complex, PrecisionContext, Real};

pub type BigComplex = Complex<BigReal>;
