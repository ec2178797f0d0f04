//! Representation data of non-Kac compact quantum groups and the Khintchine
//! constants of their central Fourier series.
//!
//! Modules, bottom-up:
//! - [`numeric`]: exact rationals, quadratic surds, high-precision floats.
//! - [`rootsys`]: root systems, weight multiplicities, modular spectra.
//! - [`chebyshev`]: second-kind Chebyshev dimension functions and envelopes.
//! - [`fusion`]: SU(2)- and SO(3)-type fusion rings.
//! - [`models`]: Drinfeld-Jimbo, free orthogonal and quantum automorphism families.
//! - [`khintchine`]: certified evaluation of `K_p` and related constants.
//! - [`schur`]: Schur orthogonality, modular automorphism and the `p = 2` checks.

pub mod numeric;
pub mod rootsys;
pub mod chebyshev;
pub mod fusion;
pub mod models;
pub mod khintchine;
pub mod schur;
