//! Exact deformation quantization of regular coadjoint orbits.
//!
//! The crate builds the enveloping algebra `U_h` of a Lie algebra over
//! `C[h]`, the quotient `U_h / I_h` by the quantized orbit ideal
//! `I_h = (P_i - c_i(h))`, and the star product it induces on polynomial
//! functions of the orbit. All arithmetic is exact over the Gaussian
//! rationals, optionally extended by symbolic constants.
//!
//! - [`scalar`]: Gaussian rationals, symbolic scalars and polynomials in `h`.
//! - [`liealg`]: Lie algebras from structure constants, Killing form,
//!   Casimirs, regularity, changes of basis, presets.
//! - [`commpoly`]: commutative polynomials, Lie–Poisson bracket, Gröbner bases.
//! - [`uea`]: PBW normal forms in `U_h`, symmetrizer, automorphisms.
//! - [`orbit`]: reduction modulo `I_h`, quantization maps, star products,
//!   deformation checks and relation tables.
//! - [`tdo`]: sl(2) on homogeneous polynomials and its Casimir identities.
//! - [`expr`], [`io`]: expression parsing and file loading.

pub mod commpoly;
pub mod error;
pub mod expr;
pub mod io;
pub mod liealg;
pub mod matrix;
pub mod orbit;
pub mod scalar;
pub mod tdo;
pub mod uea;

pub use commpoly::{CommPoly, IdealBasis, MonomialOrder};
pub use error::{Error, Result};
pub use liealg::{BasisChange, LieAlgebra};
pub use orbit::{OrbitAlgebra, OrbitElement, OrbitSpec, QuantizationMap};
pub use scalar::{GaussRat, HPoly, Scalar};
pub use uea::{Enveloping, PbwMonomial, UElement};
