//! Exact truncated q-series with polynomial-in-`w` coefficients.

mod families;
mod record;
mod series;
mod wpoly;

pub use families::{
    coloured_partitions, expand_ht, expand_ht_product, expand_pab, expand_qn, expand_tcore,
    pab_coefficient, RationalPair,
};
pub use record::{format_rational, parse_rational, Family, PolyRecord};
pub use series::{series_mul_factor, QSeries, MAX_DELTA, MAX_GRID_POINTS};
pub use wpoly::{evaluate_wpoly, WPolynomial};
