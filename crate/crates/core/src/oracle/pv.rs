//! Numeric reconstruction of the confluent second solution
//!
//! ```text
//! Φ₂(x) = 1/ρ(x) · PV ∫₀^∞ ρ(s) Φ₁(s) / (s - x) ds,   ρ(s) = e^{-s} s^m
//! ```
//!
//! with `Φ₁ = ₁F₁(-n̄; m+1; x)`, compared against the closed form
//! `m!/(n̄+m)! · P₂ · e^x / x^m + Φ₁ · Ei(1, -x)`.

use rug::ops::Pow;
use rug::Float;

use super::quad::integrate;
use super::report::{Subject, VerificationReport};
use crate::closedform::{hyp1f1_terminating, p2_simplified};
use crate::error::{Error, Result};
use crate::numeval::to_rug_rational;
use crate::ratpoly::{factorial, rational_to_f64, BigRational, RatPoly};

/// Relative error above which the principal-value quadrature gives up.
pub const PV_FAILURE_THRESHOLD: f64 = 1e-6;

const QUAD_REL_TOL: f64 = 1e-13;

/// Polynomial `p(s) = s^m Φ₁(s)` in double precision, with its Taylor data at
/// a chosen point for the removable singularity of `(p(s) - p(x))/(s - x)`.
struct Weighted {
    coeffs: Vec<f64>,
}

impl Weighted {
    fn new(n_bar: u32, m: u32) -> Self {
        let p = hyp1f1_terminating(n_bar, m).shift(m as i64);
        let degree = p.degree().unwrap_or(0).max(0) as usize;
        let mut coeffs = vec![0.0; degree + 1];
        for (k, c) in p.terms() {
            coeffs[k as usize] = rational_to_f64(c);
        }
        Weighted { coeffs }
    }

    fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    /// `p^{(k)}(x) / k!` for `k = 0..=3`.
    fn taylor(&self, x: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in (k..self.coeffs.len()).rev() {
                acc = acc * x + self.coeffs[j] * binomial(j, k);
            }
            *slot = acc;
        }
        out
    }

    /// `Σ |c_k| s^k`, used for tail bounds.
    fn abs_eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c.abs())
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(p(s) - p(x)) / (s - x)` with a cubic Taylor fallback close to `s = x`.
struct DifferenceQuotient<'a> {
    p: &'a Weighted,
    x: f64,
    px: f64,
    taylor: [f64; 4],
    near: f64,
}

impl<'a> DifferenceQuotient<'a> {
    fn new(p: &'a Weighted, x: f64) -> Self {
        DifferenceQuotient {
            p,
            x,
            px: p.eval(x),
            taylor: p.taylor(x),
            near: 1e-4 * x.max(1.0),
        }
    }

    fn at(&self, s: f64) -> f64 {
        let d = s - self.x;
        if d.abs() < self.near {
            self.taylor[1] + d * (self.taylor[2] + d * self.taylor[3])
        } else {
            (self.p.eval(s) - self.px) / d
        }
    }

    /// Value at the removable singularity, `p'(x)`.
    fn limit(&self) -> f64 {
        self.taylor[1]
    }
}

fn upper_limit(n_bar: u32, m: u32, x: f64) -> f64 {
    x + 60.0 + 10.0 * (m + n_bar) as f64
}

/// Bound on `∫_S^∞ e^{-s} |p|(s) / (s - x) ds`.
fn tail_bound(p: &Weighted, s_max: f64, x: f64) -> f64 {
    let deg = p.degree() as f64;
    let incomplete_gamma_factor = 1.0 / (1.0 - deg / s_max).max(0.5);
    (-s_max).exp() * p.abs_eval(s_max) * incomplete_gamma_factor / (s_max - x)
}

/// Closed form of `Φ₂(n̄, m, x)`, evaluated in extended precision.
pub fn phi2_closed_form(n_bar: u32, m: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(x));
    }
    let prec = 192;
    let norm = BigRational::new(factorial(m), factorial(n_bar + m));
    let p2 = p2_simplified(n_bar, m).scale(&norm);
    let phi1 = hyp1f1_terminating(n_bar, m);
    let xf = Float::with_val(prec, x);
    let horner = |p: &RatPoly| {
        let mut acc = Float::with_val(prec, 0);
        for c in p.coefficients().iter().rev() {
            acc *= &xf;
            acc += Float::with_val(prec, to_rug_rational(c));
        }
        acc * xf.clone().pow(p.lowest_degree() as i32)
    };
    let growing = horner(&p2) * Float::with_val(prec, xf.exp_ref())
        / xf.clone().pow(m);
    let ei = -Float::with_val(prec, xf.eint_ref());
    Ok((growing + horner(&phi1) * ei).to_f64())
}

/// `PV ∫₀^S ρΦ₁/(s - x) ds` with symmetric excision of half-width `delta`,
/// returned with an absolute error estimate.
fn pv_integral(p: &Weighted, x: f64, delta: f64, s_max: f64) -> (f64, f64) {
    let g = |s: f64| (-s).exp() * p.eval(s);
    let gx = g(x);
    let left = integrate(|s: f64| g(s) / (s - x), 0.0, x - delta, 0.0, QUAD_REL_TOL);
    let right = integrate(|s: f64| g(s) / (s - x), x + delta, s_max, 0.0, QUAD_REL_TOL);
    // Across the excised interval the odd part g(x)/(s - x) integrates to
    // zero, leaving the smooth difference quotient.
    let middle = integrate(
        |s: f64| {
            let d = s - x;
            if d.abs() < 1e-7 * x.max(1.0) {
                (-x).exp() * (p.taylor(x)[1] - p.eval(x))
            } else {
                (g(s) - gx) / d
            }
        },
        x - delta,
        x + delta,
        0.0,
        QUAD_REL_TOL,
    );
    let value = left.value + right.value + middle.value;
    let error = left.abs_error + right.abs_error + middle.abs_error;
    (value, error)
}

/// Numeric principal-value evaluation of `Φ₂(n̄, m, x)`.
pub fn phi2_pv_oracle(n_bar: u32, m: u32, x: f64) -> Result<f64> {
    phi2_pv_oracle_with_error(n_bar, m, x).map(|(v, _)| v)
}

/// [`phi2_pv_oracle`] together with its estimated relative error.
pub fn phi2_pv_oracle_with_error(n_bar: u32, m: u32, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(x));
    }
    let p = Weighted::new(n_bar, m);
    let s_max = upper_limit(n_bar, m, x);
    let delta = (1e-3 * x.max(1.0)).min(0.5 * x);
    let (coarse, err_coarse) = pv_integral(&p, x, delta, s_max);
    let (fine, err_fine) = pv_integral(&p, x, 0.5 * delta, s_max);
    let tail = tail_bound(&p, s_max, x);
    let abs_err = err_coarse.max(err_fine) + (fine - coarse).abs() + tail;
    let scale = x.exp() / x.powi(m as i32);
    let value = fine * scale;
    let rel = abs_err * scale / value.abs();
    if !(rel <= PV_FAILURE_THRESHOLD) {
        return Err(Error::QuadratureFailure {
            estimate: rel,
            limit: PV_FAILURE_THRESHOLD,
        });
    }
    Ok((value, rel))
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Closed form against the principal-value oracle at each `x`.
pub fn phi2_agreement_check(n_bar: u32, m: u32, xs: &[f64], tolerance: f64) -> VerificationReport {
    const NAME: &str = "pv-closed-form";
    let subject = Subject::Confluent { n_bar, m };
    let mut worst = 0.0f64;
    let mut offsets = Vec::new();
    for &x in xs {
        let (pv, closed) = match (phi2_pv_oracle(n_bar, m, x), phi2_closed_form(n_bar, m, x)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                return VerificationReport::failed(subject, NAME, format!("x = {x}: {e}"))
            }
        };
        let d = rel_diff(pv, closed);
        if d > tolerance {
            // Record the offset in units of Φ₁(x) so a constant multiple of
            // the regular solution would show up as a repeated number.
            let phi1 = rational_to_f64(
                &hyp1f1_terminating(n_bar, m)
                    .eval(&BigRational::from_float(x).expect("finite x"))
                    .expect("polynomial has no negative powers"),
            );
            offsets.push(format!("x={x}: (pv - closed)/phi1 = {:e}", (pv - closed) / phi1));
        }
        worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
    }
    let details = if offsets.is_empty() {
        format!("{} points", xs.len())
    } else {
        offsets.join("; ")
    };
    VerificationReport::numeric(subject, NAME, worst, tolerance, details)
}

/// Checks the rearrangement
///
/// ```text
/// Φ₂ = x^{-m} e^x ∫₀^∞ e^{-s} [s^m Φ₁(s) - x^m Φ₁(x)] / (s - x) ds + Φ₁(x) Ei(1, -x)
/// ```
///
/// by quadrature of the pole-free bracket, against the principal-value oracle.
/// Also confirms the bracketed integrand tends to `e^{-x} d/ds[s^m Φ₁](x)`
/// at the removable singularity.
pub fn pole_split_identity_check(n_bar: u32, m: u32, xs: &[f64]) -> VerificationReport {
    const NAME: &str = "pole-split";
    const TOL: f64 = 1e-8;
    let subject = Subject::Confluent { n_bar, m };
    let p = Weighted::new(n_bar, m);
    let mut worst = 0.0f64;
    for &x in xs {
        let pv = match phi2_pv_oracle(n_bar, m, x) {
            Ok(v) => v,
            Err(e) => return VerificationReport::failed(subject, NAME, format!("x = {x}: {e}")),
        };
        let dq = DifferenceQuotient::new(&p, x);
        let bracket = |s: f64| (-s).exp() * dq.at(s);

        let limit = (-x).exp() * dq.limit();
        let eps = 1e-3 * x.max(1.0);
        let approach = 0.5 * ((-(x - eps)).exp() * (p.eval(x - eps) - dq.px) / -eps
            + (-(x + eps)).exp() * (p.eval(x + eps) - dq.px) / eps);
        let limit_scale = (-x).exp() * dq.taylor.iter().map(|c| c.abs()).fold(0.0, f64::max);
        if !((approach - limit).abs() <= 1e-4 * limit_scale) {
            return VerificationReport::failed(
                subject,
                NAME,
                format!("x = {x}: difference quotient tends to {approach:e}, expected {limit:e}"),
            );
        }

        let s_max = upper_limit(n_bar, m, x);
        let first = integrate(bracket, 0.0, s_max, 0.0, QUAD_REL_TOL);
        let phi1 = p.eval(x) / x.powi(m as i32);
        let ei = -Float::with_val(128, Float::with_val(128, x).eint_ref()).to_f64();
        let split = x.exp() / x.powi(m as i32) * first.value + phi1 * ei;
        let d = rel_diff(split, pv);
        worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
    }
    VerificationReport::numeric(subject, NAME, worst, TOL, format!("{} points", xs.len()))
}

/// `Σ_{j=0}^{N-1} (N-1-j)! x^j`, the closed value of
/// `∫₀^∞ e^{-s} (s^N - x^N)/(s - x) ds`.
pub fn first_integral_sum(big_n: u32, x: f64) -> f64 {
    (0..big_n)
        .map(|j| rational_to_f64(&BigRational::from(factorial(big_n - 1 - j))) * x.powi(j as i32))
        .sum()
}

/// Verifies the finite-sum evaluation of the pole-free first integral for
/// `N = m + k`, `k = 0..=n̄`, at `x ∈ {0.5, 1, 2}` by quadrature.
pub fn first_integral_closed_form_check(n_bar: u32, m: u32) -> VerificationReport {
    const NAME: &str = "first-integral";
    const TOL: f64 = 1e-8;
    let subject = Subject::Confluent { n_bar, m };
    let mut worst = 0.0f64;
    for k in 0..=n_bar {
        let big_n = m + k;
        let mut coeffs = vec![0.0; big_n as usize + 1];
        coeffs[big_n as usize] = 1.0;
        let p = Weighted { coeffs };
        for &x in &[0.5, 1.0, 2.0] {
            let dq = DifferenceQuotient::new(&p, x);
            let s_max = x + 60.0 + 10.0 * big_n as f64;
            let q = integrate(|s: f64| (-s).exp() * dq.at(s), 0.0, s_max, 0.0, QUAD_REL_TOL);
            let rel_err = (q.abs_error + tail_bound(&p, s_max, x)) / q.value.abs();
            if !(rel_err <= PV_FAILURE_THRESHOLD) {
                let e = Error::QuadratureFailure {
                    estimate: rel_err,
                    limit: PV_FAILURE_THRESHOLD,
                };
                return VerificationReport::failed(subject, NAME, format!("N = {big_n}, x = {x}: {e}"));
            }
            let d = rel_diff(q.value, first_integral_sum(big_n, x));
            worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
        }
    }
    VerificationReport::numeric(
        subject,
        NAME,
        worst,
        TOL,
        format!("N = {}..={}", m, m + n_bar),
    )
}

/// Default sample points `(n̄, m, x)` with `n̄ + m <= 8`.
pub const SAMPLE_POINTS: [(u32, u32, f64); 14] = [
    (0, 1, 2.0),
    (1, 1, 1.0),
    (1, 3, 0.5),
    (0, 1, 0.5),
    (0, 3, 1.0),
    (2, 1, 1.5),
    (2, 3, 2.0),
    (3, 1, 0.7),
    (1, 5, 3.0),
    (3, 3, 2.5),
    (4, 1, 1.0),
    (2, 5, 1.2),
    (0, 7, 4.0),
    (5, 3, 2.0),
];
