//! Floating-point evaluation of `Ei(1, -x)` and of [`ExpEiForm`] values.
//!
//! `Ei(1, -x) = PV ∫_{-x}^∞ e^{-s}/s ds` equals `-Ei(x)` in the classical
//! convention. Below [`SERIES_CROSSOVER`] it is summed from the power series
//! `Ei(x) = γ + ln x + Σ x^k/(k·k!)`; above, from the asymptotic series
//! `Ei(x) ~ (e^x/x) Σ k!/x^k` truncated before its smallest term.
//!
//! Every result carries an error estimate. Closed forms for the irregular
//! solution cancel heavily at large radius, and the estimate grows with that
//! cancellation; [`eval_form_extended`] is the escape hatch when double
//! precision is not enough.

use num_traits::Signed;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::closedform::ExpEiForm;
use crate::error::{Error, Result};
use crate::ratpoly::{rational_to_f64, BigRational, FloatPoly, RatPoly};

/// Euler–Mascheroni constant to 30 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Arguments above this use the asymptotic series.
pub const SERIES_CROSSOVER: f64 = 40.0;

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMethod {
    Series,
    Asymptotic,
    /// No exponential-integral term was needed.
    Elementary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub est_rel_error: f64,
    pub method: EvalMethod,
}

/// `Ei(x)` as `(value, absolute error bound, method)` for finite results.
/// `scaled` multiplies everything by `e^{-x}`.
fn ei_positive(x: f64, scaled: bool) -> (f64, f64, EvalMethod) {
    if x <= SERIES_CROSSOVER {
        // Terms are all positive; each carries the rounding of the recurrence
        // that produced it.
        let mut term = 1.0;
        let mut sum = 0.0;
        let mut err = 0.0;
        let mut k = 1.0;
        loop {
            term *= x / k;
            let contrib = term / k;
            sum += contrib;
            err += contrib * (2.0 * k + 2.0) * EPS;
            if contrib < 0.25 * EPS * sum {
                break;
            }
            k += 1.0;
        }
        let ln_x = x.ln();
        let value = EULER_GAMMA + ln_x + sum;
        err += (EULER_GAMMA + 2.0 * ln_x.abs() + sum + value.abs()) * EPS;
        if scaled {
            let e = (-x).exp();
            (value * e, err * e + value.abs() * e * 2.0 * EPS, EvalMethod::Series)
        } else {
            (value, err, EvalMethod::Series)
        }
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut err = 0.0;
        let mut k = 1.0;
        loop {
            let next = term * k / x;
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            err += term * (2.0 * k + 1.0) * EPS;
            if term < 0.25 * EPS {
                break;
            }
            k += 1.0;
        }
        // The first omitted term bounds the truncation error.
        err += term * k / x + 2.0 * sum * EPS;
        let (pref, pref_err) = if scaled {
            (1.0 / x, EPS / x)
        } else {
            let p = x.exp() / x;
            (p, 2.0 * p * EPS)
        };
        (pref * sum, pref * err + pref_err * sum, EvalMethod::Asymptotic)
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::Domain(x));
    }
    Ok(())
}

/// `Ei(1, -x)` for `x > 0`.
///
/// Returns [`Error::Overflow`] once `e^x` leaves the double range (about
/// `x > 709`); [`ei_one_neg_scaled`] stays finite there.
pub fn ei_one_neg(x: f64) -> Result<EvalResult> {
    check_positive(x)?;
    let (ei, err, method) = ei_positive(x, false);
    if !ei.is_finite() {
        return Err(Error::Overflow(x));
    }
    Ok(EvalResult {
        value: -ei,
        est_rel_error: if ei == 0.0 { f64::INFINITY } else { err / ei.abs() },
        method,
    })
}

/// `e^{-x} Ei(1, -x)` for `x > 0`; finite for every positive double.
pub fn ei_one_neg_scaled(x: f64) -> Result<EvalResult> {
    check_positive(x)?;
    let (ei, err, method) = ei_positive(x, true);
    Ok(EvalResult {
        value: -ei,
        est_rel_error: if ei == 0.0 { f64::INFINITY } else { err / ei.abs() },
        method,
    })
}

/// Double-precision image of an [`ExpEiForm`], cached for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatForm {
    q_plus: FloatPoly,
    q_minus: FloatPoly,
    q_ei: FloatPoly,
    rate: f64,
}

impl FloatForm {
    pub fn new(form: &ExpEiForm) -> Self {
        FloatForm {
            q_plus: FloatPoly::from_exact(&form.q_plus),
            q_minus: FloatPoly::from_exact(&form.q_minus),
            q_ei: FloatPoly::from_exact(&form.q_ei),
            rate: rational_to_f64(&form.rate()),
        }
    }

    /// Evaluates at `v > 0` (the form's own variable).
    pub fn eval(&self, v: f64) -> Result<EvalResult> {
        check_positive(v)?;
        let av = self.rate * v;
        let horner = |p: &FloatPoly| (p.eval_with_magnitude(v), 2.0 * (p.len() as f64 + 1.0) * EPS);
        let ((p, p_mag), p_eps) = horner(&self.q_plus);
        let ((m, m_mag), m_eps) = horner(&self.q_minus);
        let ((q, q_mag), q_eps) = horner(&self.q_ei);
        let exp_eps = (1.0 + av) * EPS;

        let mut value = 0.0;
        let mut abs_err = 0.0;
        let mut method = EvalMethod::Elementary;

        if !self.q_plus.is_zero() || !self.q_ei.is_zero() {
            let (s, s_err) = if self.q_ei.is_zero() {
                (0.0, 0.0)
            } else {
                let s = ei_one_neg_scaled(2.0 * av)?;
                method = s.method;
                (s.value, s.est_rel_error * s.value.abs())
            };
            // q_plus e^{av} + q_ei e^{-av} Ei(1,-2av) = e^{av} (q_plus + q_ei · e^{-2av} Ei(1,-2av))
            let growing = p + q * s;
            let e = av.exp();
            if !e.is_finite() {
                return Err(Error::Overflow(v));
            }
            value += e * growing;
            abs_err += e
                * (p_eps * p_mag
                    + q_mag * s.abs() * q_eps
                    + q.abs() * s_err
                    + (p.abs() + (q * s).abs()) * EPS
                    + growing.abs() * exp_eps);
        }
        if !self.q_minus.is_zero() {
            let e = (-av).exp();
            value += m * e;
            abs_err += e * (m_eps * m_mag + m.abs() * exp_eps);
        }
        abs_err += value.abs() * EPS;
        if !value.is_finite() {
            return Err(Error::Overflow(v));
        }
        let est_rel_error = if value == 0.0 {
            if abs_err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            abs_err / value.abs()
        };
        Ok(EvalResult {
            value,
            est_rel_error,
            method,
        })
    }
}

/// Evaluates `f` at `r > 0` in double precision.
pub fn eval_form(f: &ExpEiForm, r: f64) -> Result<EvalResult> {
    FloatForm::new(f).eval(r)
}

pub(crate) fn to_rug_rational(q: &BigRational) -> Rational {
    let parse = |i: &num_bigint::BigInt| {
        Integer::from_str_radix(&i.to_str_radix(16), 16).expect("hex digits from num-bigint")
    };
    Rational::from((parse(q.numer()), parse(q.denom())))
}

fn horner_extended(p: &RatPoly, v: &Float, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    if p.is_zero() {
        return acc;
    }
    for c in p.coefficients().iter().rev() {
        acc *= v;
        acc += Float::with_val(prec, to_rug_rational(c));
    }
    let shift = v.clone().pow(p.lowest_degree() as i32);
    acc * shift
}

/// Evaluates `f` at an exact rational point in `precision_bits` of working
/// precision (MPFR), including `Ei` via MPFR's exponential integral.
pub fn eval_form_extended(f: &ExpEiForm, r: &BigRational, precision_bits: u32) -> Result<Float> {
    if !r.is_positive() {
        return Err(Error::Domain(rational_to_f64(r)));
    }
    let prec = precision_bits.max(64);
    let v = Float::with_val(prec, to_rug_rational(r));
    let av = Float::with_val(prec, &v * Float::with_val(prec, to_rug_rational(&f.rate())));
    let e_plus = Float::with_val(prec, av.exp_ref());
    let e_minus = Float::with_val(prec, (-av.clone()).exp_ref());

    let mut total = horner_extended(&f.q_plus, &v, prec) * &e_plus;
    total += horner_extended(&f.q_minus, &v, prec) * &e_minus;
    if !f.q_ei.is_zero() {
        let two_av = Float::with_val(prec, &av * 2u32);
        // Ei(1, -x) = -Ei(x)
        let ei = -Float::with_val(prec, two_av.eint_ref());
        total += horner_extended(&f.q_ei, &v, prec) * e_minus * ei;
    }
    Ok(total)
}

/// [`eval_form_extended`] at a double-precision radius (converted exactly).
pub fn eval_form_extended_f64(f: &ExpEiForm, r: f64, precision_bits: u32) -> Result<Float> {
    let exact = BigRational::from_float(r).ok_or(Error::Domain(r))?;
    eval_form_extended(f, &exact, precision_bits)
}
