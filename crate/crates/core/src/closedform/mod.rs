//! Exact closed forms for the hydrogenic radial problem: quantum-number
//! bookkeeping, the Laguerre and `P₂` polynomial families, and assembly of
//! the regular solution `R₁` and the irregular solution `R₂` as [`ExpEiForm`]s.

mod form;
mod polys;
mod quantum;

pub use form::{ExpEiForm, Variable};
pub use polys::{hyp1f1_terminating, laguerre_l1, p2_doublesum, p2_simplified};
pub use quantum::{energy, QuantumNumbers};

use crate::ratpoly::{factorial, BigRational, RatPoly};

/// `x^l L₁(n_r, 2l+1, x)`, the polynomial multiplying `e^{-x/2}` in `R₁`.
fn regular_polynomial_x(qn: &QuantumNumbers) -> RatPoly {
    laguerre_l1(qn.n_r(), qn.m()).shift(qn.l() as i64)
}

/// Regular solution `R₁ = (2κr)^l e^{-κr} L₁(n_r, 2l+1, 2κr)`, unnormalized.
pub fn assemble_r1(qn: &QuantumNumbers) -> ExpEiForm {
    ExpEiForm::new(
        RatPoly::zero(),
        regular_polynomial_x(qn),
        RatPoly::zero(),
        qn.kappa(),
        Variable::X,
    )
    .to_r_variable()
}

/// Irregular solution
///
/// ```text
/// R₂ = 1/n_r! (2κr)^{-l-1} e^{κr} P₂(n_r, 2l+1, 2κr)
///    + (2κr)^l e^{-κr} L₁(n_r, 2l+1, 2κr) Ei(1, -2κr)
/// ```
///
/// scaled so that the Ei term carries exactly the regular polynomial.
pub fn assemble_r2(qn: &QuantumNumbers) -> ExpEiForm {
    let inv_nr_fact = BigRational::new(1.into(), factorial(qn.n_r()));
    let q_plus = p2_simplified(qn.n_r(), qn.m())
        .shift(-(qn.l() as i64) - 1)
        .scale(&inv_nr_fact);
    ExpEiForm::new(
        q_plus,
        RatPoly::zero(),
        regular_polynomial_x(qn),
        qn.kappa(),
        Variable::X,
    )
    .to_r_variable()
}

/// One row of the reference table: both solutions for a level, in `r`.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub qn: QuantumNumbers,
    pub r1: ExpEiForm,
    pub r2: ExpEiForm,
}

/// `R₁` and `R₂` for every `(n, l)` with `n <= n_max`, radii in reduced-mass
/// Bohr radii divided by `Z`.
pub fn coefficient_table(n_max: u32) -> Vec<TableEntry> {
    QuantumNumbers::enumerate(n_max)
        .map(|qn| TableEntry {
            qn,
            r1: assemble_r1(&qn),
            r2: assemble_r2(&qn),
        })
        .collect()
}
