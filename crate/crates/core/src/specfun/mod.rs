//! Bernoulli data, generalized Bernoulli polynomials, integer-order
//! polylogarithms and the complex gamma function.

pub mod bernoulli;
pub mod branch;
pub mod gamma;
pub mod polylog;

pub use bernoulli::{
    bernoulli_f64, bernoulli_number, gen_bernoulli, gen_bernoulli_exact, gen_bernoulli_series,
    BernoulliTable,
};
pub use branch::{fold_2pi_i, Folded};
pub use gamma::{ln_gamma, recip_gamma, EULER_GAMMA};
pub use polylog::{polylog, polylog_with_tol};
