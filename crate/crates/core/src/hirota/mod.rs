//! Truncated power-series engine, Miwa shifts and the bilinear (Hirota)
//! equations of the Ablowitz–Ladik hierarchy.

pub mod bilinear;
pub mod series;
pub mod tau;

pub use bilinear::{hirota_residual, hirota_weights, max_reliable_order, miwa_shift, weighted_residual_norm, HirotaEq};
pub use series::{Monomial, SeriesSpace, TruncatedSeries};
pub use tau::{
    extract_lattice_derivatives, extract_time_derivatives, Direction, FlowDerivatives, LatticeTau, TauTriple,
};
