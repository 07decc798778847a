//! Hook-length polynomials, their generating functions, and the analytic
//! machinery for locating and explaining their zeros.

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod numerics;
pub mod par;
pub mod partitions;
pub mod qseries;
pub mod roots;

pub use error::{Error, Result};
