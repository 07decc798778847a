//! Asymptotic main terms and the comparison harnesses built on them.

mod checks;
mod main_terms;

pub use checks::{
    ratio_report, ratio_report_in, rr_claim_check, validate_w0, zero_localization_check,
    AsymptoticReport, LocalizationVerdict, RatioEntry, Regime, ReportOptions, RrVerdict, W0Check,
};
pub use main_terms::{
    hardy_ramanujan_main, main_term_large_w, main_term_large_w_with, main_term_small_w,
    small_w_prefactor, LargeWConstant, LargeWMain,
};
