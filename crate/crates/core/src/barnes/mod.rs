//! Barnes multiple zeta, multiple gamma and multiple sine functions, and the
//! functions `H` and `G` of the resolved conifold.

pub mod quad;
pub mod sine;
pub mod zeta;

pub use sine::{f_np, log_g, log_g_with_config, log_h, log_h_with_config, log_multiple_sine};
pub use zeta::{barnes_zeta, log_multiple_gamma, BarnesConfig, BarnesEvaluation, LogMultipleGamma};
