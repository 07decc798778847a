//! Error-tracked multiprecision evaluation of the analytic quantities.

mod at;
mod dedekind;
mod euler;
mod prec;
mod theta;

pub use at::{at_tail_bound, eval_at, eval_at_with, AtOptions};
pub use dedekind::{dedekind_sum, dedekind_sum_6k, omega, omega_prime, ExactRational};
pub use euler::{euler_inf, euler_inf_f64, from_c64, log_tail_bound, terms_needed, EulerOptions};
pub use prec::{PrecComplex, ERR_PREC};
pub use theta::{
    box_radius, lattice_counts, lattice_counts_explicit, lattice_tail_bound, partition_tail_bound,
    principal_root, reduced_theta_coeffs, theta, theta_lattice, theta_lattice_with,
    theta_partition_form, theta_partition_form_with, theta_roots_of_unity_form,
    theta_roots_of_unity_form_with, unit_root, ReducedTheta, ThetaForm, ThetaOptions, ThetaSpec,
};

/// Runs `f` at increasing precision, doubling from `start` up to `max` bits,
/// until its error bound is at most `tol`. Returns the last attempt.
pub fn with_escalation<F>(start: u32, max: u32, tol: f64, mut f: F) -> crate::Result<PrecComplex>
where
    F: FnMut(u32) -> crate::Result<PrecComplex>,
{
    let mut prec = start.max(64);
    loop {
        let v = f(prec)?;
        if v.err_f64() <= tol || prec >= max {
            return Ok(v);
        }
        prec = (prec * 2).min(max);
    }
}
