//! Exact computations for diagonal co-quasi-invariant spaces of the complex
//! reflection groups `G(r, n)`.

pub mod colored_quotient;
pub mod hilbert;
pub mod linalg;
pub mod paths;
pub mod polyring;
pub mod quasi;
pub mod shapes;
pub mod symfunc;
pub mod tables;
