use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratpoly::{rat, rat_int, BigRational, RatPoly};

/// Independent variable of an [`ExpEiForm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variable {
    /// Scaled variable `x = 2κr`; exponentials are `e^{±x/2}`, Ei argument `-x`.
    X,
    /// Radius `r`; exponentials are `e^{±κr}`, Ei argument `-2κr`.
    R,
}

/// Symbolic closed form
///
/// ```text
/// q_plus(v) e^{+a v} + q_minus(v) e^{-a v} + q_ei(v) e^{-a v} Ei(1, -2 a v)
/// ```
///
/// with Laurent-polynomial coefficients in the variable `v` and rate `a`
/// (`a = κ` for [`Variable::R`], `a = 1/2` for [`Variable::X`]), where
/// `Ei(1, -x) = PV ∫_{-x}^∞ e^{-s}/s ds`. The set is closed under `d/dv`
/// because `d/dv Ei(1, -2av) = -e^{2av}/v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpEiForm {
    pub q_plus: RatPoly,
    pub q_minus: RatPoly,
    pub q_ei: RatPoly,
    kappa: BigRational,
    variable: Variable,
}

impl ExpEiForm {
    pub fn new(
        q_plus: RatPoly,
        q_minus: RatPoly,
        q_ei: RatPoly,
        kappa: BigRational,
        variable: Variable,
    ) -> Self {
        assert!(kappa > BigRational::zero(), "kappa must be positive");
        ExpEiForm {
            q_plus,
            q_minus,
            q_ei,
            kappa,
            variable,
        }
    }

    pub fn zero(kappa: BigRational, variable: Variable) -> Self {
        Self::new(RatPoly::zero(), RatPoly::zero(), RatPoly::zero(), kappa, variable)
    }

    pub fn kappa(&self) -> &BigRational {
        &self.kappa
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    /// Exponential rate in the form's own variable.
    pub fn rate(&self) -> BigRational {
        match self.variable {
            Variable::R => self.kappa.clone(),
            Variable::X => rat(1, 2),
        }
    }

    /// Scale of the Ei argument: the form contains `Ei(1, ei_arg_scale · v)`.
    pub fn ei_arg_scale(&self) -> BigRational {
        -(self.rate() * rat_int(2))
    }

    pub fn is_zero(&self) -> bool {
        self.q_plus.is_zero() && self.q_minus.is_zero() && self.q_ei.is_zero()
    }

    pub fn buckets(&self) -> [(&'static str, &RatPoly); 3] {
        [
            ("q_plus", &self.q_plus),
            ("q_minus", &self.q_minus),
            ("q_ei", &self.q_ei),
        ]
    }

    fn compatible(&self, other: &ExpEiForm) -> bool {
        self.variable == other.variable && self.kappa == other.kappa
    }

    pub fn checked_add(&self, other: &ExpEiForm) -> Result<ExpEiForm> {
        if !self.compatible(other) {
            return Err(Error::ConventionMismatch);
        }
        Ok(self.map_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &ExpEiForm) -> Result<ExpEiForm> {
        if !self.compatible(other) {
            return Err(Error::ConventionMismatch);
        }
        Ok(self.map_with(other, |a, b| a - b))
    }

    fn map_with(&self, other: &ExpEiForm, f: impl Fn(&RatPoly, &RatPoly) -> RatPoly) -> ExpEiForm {
        ExpEiForm {
            q_plus: f(&self.q_plus, &other.q_plus),
            q_minus: f(&self.q_minus, &other.q_minus),
            q_ei: f(&self.q_ei, &other.q_ei),
            kappa: self.kappa.clone(),
            variable: self.variable,
        }
    }

    fn map(&self, f: impl Fn(&RatPoly) -> RatPoly) -> ExpEiForm {
        ExpEiForm {
            q_plus: f(&self.q_plus),
            q_minus: f(&self.q_minus),
            q_ei: f(&self.q_ei),
            kappa: self.kappa.clone(),
            variable: self.variable,
        }
    }

    /// Multiplies every bucket by a Laurent polynomial in the form's variable.
    pub fn mul_poly(&self, p: &RatPoly) -> ExpEiForm {
        self.map(|q| q * p)
    }

    pub fn scale(&self, c: &BigRational) -> ExpEiForm {
        self.map(|q| q.scale(c))
    }

    /// Exact derivative with respect to the form's own variable.
    pub fn derivative(&self) -> ExpEiForm {
        let a = self.rate();
        let ei_migrated = self.q_ei.shift(-1);
        ExpEiForm {
            q_plus: &(&self.q_plus.derivative() + &self.q_plus.scale(&a)) - &ei_migrated,
            q_minus: &self.q_minus.derivative() - &self.q_minus.scale(&a),
            q_ei: &self.q_ei.derivative() - &self.q_ei.scale(&a),
            kappa: self.kappa.clone(),
            variable: self.variable,
        }
    }

    /// Re-expresses an `x`-variable form in `r` via `x = 2κr`.
    pub fn to_r_variable(&self) -> ExpEiForm {
        match self.variable {
            Variable::R => self.clone(),
            Variable::X => {
                let s = &self.kappa * rat_int(2);
                let mut out = self.map(|q| q.substitute_scaled(&s));
                out.variable = Variable::R;
                out
            }
        }
    }

    /// Applies `r² f'' + 2r f' + (-κ²r² + 2r - l(l+1)) f`, the radial
    /// Coulomb operator in library units (Coulomb scale κ₀ = 1).
    pub fn apply_radial_operator(&self, l: u32) -> Result<ExpEiForm> {
        if self.variable != Variable::R {
            return Err(Error::ConventionMismatch);
        }
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let k2 = &self.kappa * &self.kappa;
        let ll = rat_int(l as i64 * (l as i64 + 1));
        let potential = RatPoly::from_coeffs(0, vec![-ll, rat_int(2), -k2]);
        let r2 = RatPoly::monomial(BigRational::one(), 2);
        let two_r = RatPoly::monomial(rat_int(2), 1);
        d2.mul_poly(&r2)
            .checked_add(&d1.mul_poly(&two_r))?
            .checked_add(&self.mul_poly(&potential))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn in_r(q_plus: RatPoly, q_minus: RatPoly, q_ei: RatPoly) -> ExpEiForm {
        ExpEiForm::new(q_plus, q_minus, q_ei, rat(1, 1), Variable::R)
    }

    #[test]
    fn derivative_of_decaying_exponential() {
        let f = in_r(RatPoly::zero(), RatPoly::one(), RatPoly::zero());
        let d = f.derivative();
        assert_eq!(d.q_minus, -RatPoly::one());
        assert!(d.q_plus.is_zero() && d.q_ei.is_zero());
    }

    #[test]
    fn derivative_moves_ei_mass_to_growing_bucket() {
        let f = in_r(RatPoly::zero(), RatPoly::zero(), RatPoly::one());
        let d = f.derivative();
        assert_eq!(d.q_ei, -RatPoly::one());
        assert_eq!(d.q_plus, RatPoly::from_ints(-1, &[-1]));
        assert!(d.q_minus.is_zero());
    }

    #[test]
    fn mixing_variables_is_rejected() {
        let a = ExpEiForm::zero(rat(1, 2), Variable::R);
        let b = ExpEiForm::zero(rat(1, 2), Variable::X);
        let c = ExpEiForm::zero(rat(1, 3), Variable::R);
        assert_eq!(a.checked_add(&b), Err(Error::ConventionMismatch));
        assert_eq!(a.checked_add(&c), Err(Error::ConventionMismatch));
        assert_eq!(b.apply_radial_operator(0), Err(Error::ConventionMismatch));
    }

    #[test]
    fn x_to_r_conversion() {
        let f = ExpEiForm::new(
            RatPoly::from_ints(-1, &[1]),
            RatPoly::zero(),
            RatPoly::x(),
            rat(1, 3),
            Variable::X,
        );
        let g = f.to_r_variable();
        assert_eq!(g.variable(), Variable::R);
        assert_eq!(g.q_plus, RatPoly::from_coeffs(-1, vec![rat(3, 2)]));
        assert_eq!(g.q_ei, RatPoly::from_coeffs(1, vec![rat(2, 3)]));
        assert_eq!(g.ei_arg_scale(), rat(-2, 3));
        assert_eq!(f.ei_arg_scale(), rat(-1, 1));
    }
}
