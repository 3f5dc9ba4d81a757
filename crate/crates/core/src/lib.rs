//! Special functions, tau functions and Ablowitz–Ladik flows for the
//! Gromov–Witten theory of the resolved conifold.
//!
//! * [`specfun`] — Bernoulli numbers, generalized Bernoulli polynomials, polylogarithms.
//! * [`barnes`] — multiple zeta/gamma/sine functions, `H`, `G`.
//! * [`gw`] — genus expansion, difference equations and asymptotics of `log G`.
//! * [`lattice`] — periodic Ablowitz–Ladik lattice and RK4 integration.
//! * [`hirota`] — truncated power series and bilinear residuals for tau triples.
//! * [`disp`] — dispersionless flows, Hamiltonian densities, Frobenius data.

pub mod barnes;
pub mod disp;
pub mod error;
pub mod gw;
pub mod hirota;
pub mod lattice;
pub mod specfun;

pub use error::{Error, Result};
