//! Certified polynomial root finding and zero location for theta functions.

mod aberth;
mod theta_zeros;

pub use aberth::{
    cauchy_bound, find_roots, find_roots_with, reconstruction_relative_error, vieta_relative_error,
    RootSet, SolverOptions,
};
pub use theta_zeros::{
    theta_zeros, theta_zeros_with, DiscZeroReport, ZeroRecord, ZeroSearchOptions,
};
