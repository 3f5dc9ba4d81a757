//! Dispersionless Ablowitz–Ladik hierarchy: flows on a periodic grid,
//! Hamiltonian densities, the Frobenius structure of the conifold and the
//! `x`-difference relation.

pub mod flows;
pub mod grid;
pub mod hamiltonian;
pub mod xdif;
pub mod zseries;

pub use flows::{
    evolve_dispersionless, export_fields, flow_rhs, log_generating_series, varpi_x_rhs, DispersionlessFields,
    DispersionlessRun, EvolveOptions, FieldSample, UFlowSign,
};
pub use grid::{spectral_derivative, GridFunction};
pub use hamiltonian::{
    check_density_constraint, check_hamiltonian_form, delta_closed_form, hamiltonian_density,
    hamiltonian_density_point, hamiltonian_partials, poisson_flow, recombined_flow, ConstraintSample,
    DensityConstraintReport, FdEstimate, FrobeniusData, HamiltonianFormReport, HamiltonianPartials,
};
pub use xdif::{
    check_principal_identification, check_xdif, classical_varpi, r_from_u, second_difference, u_lambda,
    varpi_lambda, PrincipalIdentification, XdifReport,
};
pub use zseries::{Dual, ZSeries};
