//! Independent checks of the closed forms: exact symbolic residuals and
//! Wronskians, principal-value quadrature of the confluent second solution,
//! a defining-integral `Ei` oracle, and the published coefficient table.

pub mod ei;
pub mod golden;
pub mod pv;
pub mod quad;
mod report;
pub mod symbolic;

pub use ei::{ei_one_neg_defining_integral, ei_zero_by_bisection};
pub use golden::{golden_table, golden_table_check, GoldenEntry};
pub use pv::{
    first_integral_closed_form_check, phi2_closed_form, phi2_pv_oracle, pole_split_identity_check,
};
pub use report::{Residual, Subject, VerificationReport};
pub use symbolic::{numeric_residual_check, ode_residual_symbolic, wronskian_of, wronskian_symbolic};

use crate::closedform::{p2_doublesum, p2_simplified};
use crate::ratpoly::BigRational;
use num_traits::{One, Signed};

/// Both `P₂` constructions agree exactly, have integer coefficients, degree
/// `n̄ + m - 1` and leading coefficient `(-1)^n̄`.
pub fn p2_consistency_check(n_bar: u32, m: u32) -> VerificationReport {
    const NAME: &str = "p2";
    let subject = Subject::Confluent { n_bar, m };
    let double = p2_doublesum(n_bar, m);
    let simple = p2_simplified(n_bar, m);
    let mut problems = Vec::new();
    let diff = &double - &simple;
    if !diff.is_zero() {
        problems.push(format!("double sum and simplified form differ by {diff}"));
    }
    if !simple.is_integral() {
        problems.push("non-integer coefficient".to_string());
    }
    if simple.has_negative_powers() {
        problems.push("negative power".to_string());
    }
    let expected_degree = (n_bar + m) as i64 - 1;
    if simple.degree() != Some(expected_degree) {
        problems.push(format!("degree {:?}, expected {expected_degree}", simple.degree()));
    }
    let sign = if n_bar % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    if simple.leading_coeff() != Some(&sign) {
        problems.push(format!("leading coefficient {:?}, expected {sign}", simple.leading_coeff()));
    }
    if problems.is_empty() {
        VerificationReport::exact(subject, NAME, Residual::ExactZero, "")
    } else {
        let norm = diff
            .coefficients()
            .iter()
            .map(|c| crate::ratpoly::rational_to_f64(&c.abs()))
            .fold(1.0, f64::max);
        VerificationReport::exact(subject, NAME, Residual::Norm(norm), problems.join("; "))
    }
}
