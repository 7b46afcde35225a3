//! Exact checks on assembled closed forms: radial-ODE residual, Wronskian,
//! and an extended-precision finite-difference cross-check that does not go
//! through the symbolic derivative.

use std::collections::BTreeMap;

use num_traits::Signed;
use rug::Float;

use super::report::{Residual, VerificationReport};
use crate::closedform::{assemble_r1, assemble_r2, ExpEiForm, QuantumNumbers, Variable};
use crate::numeval::{eval_form_extended, to_rug_rational};
use crate::ratpoly::{rat_int, rational_to_f64, BigRational, RatPoly};

/// Largest absolute coefficient over a set of polynomials.
fn max_abs_coeff<'a>(polys: impl IntoIterator<Item = &'a RatPoly>) -> f64 {
    polys
        .into_iter()
        .flat_map(|p| p.coefficients().iter())
        .map(|c| rational_to_f64(&c.abs()))
        .fold(0.0, f64::max)
}

/// Applies the radial operator for `qn` to `f` and passes iff every bucket of
/// the result vanishes identically.
pub fn ode_residual_symbolic(f: &ExpEiForm, qn: &QuantumNumbers) -> VerificationReport {
    const NAME: &str = "ode-residual";
    if f.variable() != Variable::R || *f.kappa() != qn.kappa() {
        return VerificationReport::failed(
            *qn,
            NAME,
            format!(
                "form is in {:?} with kappa {}, expected r with kappa {}",
                f.variable(),
                f.kappa(),
                qn.kappa()
            ),
        );
    }
    let residual = match f.apply_radial_operator(qn.l()) {
        Ok(r) => r,
        Err(e) => return VerificationReport::failed(*qn, NAME, e.to_string()),
    };
    if residual.is_zero() {
        return VerificationReport::exact(*qn, NAME, Residual::ExactZero, "all three buckets vanish");
    }
    let nonzero: Vec<&str> = residual
        .buckets()
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(name, _)| *name)
        .collect();
    let norm = max_abs_coeff(residual.buckets().iter().map(|(_, p)| *p));
    VerificationReport::exact(
        *qn,
        NAME,
        Residual::Norm(norm),
        format!("nonzero buckets: {}", nonzero.join(", ")),
    )
}

/// Key `(k, j)` stands for `e^{k·a·v} Ei(1, -2av)^j`.
type ProductBuckets = BTreeMap<(i32, u32), RatPoly>;

fn as_terms(f: &ExpEiForm) -> [((i32, u32), &RatPoly); 3] {
    [((1, 0), &f.q_plus), ((-1, 0), &f.q_minus), ((-1, 1), &f.q_ei)]
}

fn accumulate(out: &mut ProductBuckets, f: &ExpEiForm, g: &ExpEiForm, sign: i64) {
    let s = rat_int(sign);
    for (kf, pf) in as_terms(f) {
        for (kg, pg) in as_terms(g) {
            if pf.is_zero() || pg.is_zero() {
                continue;
            }
            let key = (kf.0 + kg.0, kf.1 + kg.1);
            let prod = (pf * pg).scale(&s);
            let slot = out.entry(key).or_default();
            *slot = &*slot + &prod;
        }
    }
}

/// `W(f, g) = f g' - f' g` as exact product buckets; zero buckets are dropped.
pub fn wronskian_buckets(f: &ExpEiForm, g: &ExpEiForm) -> crate::Result<BTreeMap<(i32, u32), RatPoly>> {
    if f.variable() != g.variable() || f.kappa() != g.kappa() {
        return Err(crate::Error::ConventionMismatch);
    }
    let mut out = ProductBuckets::new();
    accumulate(&mut out, f, &g.derivative(), 1);
    accumulate(&mut out, &f.derivative(), g, -1);
    out.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// Checks that `r² W(f, g)` is a nonzero constant; returns `r² W` restricted
/// to its pure-polynomial bucket together with the report.
pub fn wronskian_of(f: &ExpEiForm, g: &ExpEiForm, qn: &QuantumNumbers) -> (RatPoly, VerificationReport) {
    const NAME: &str = "wronskian";
    let buckets = match wronskian_buckets(f, g) {
        Ok(b) => b,
        Err(e) => return (RatPoly::zero(), VerificationReport::failed(*qn, NAME, e.to_string())),
    };
    let plain = buckets.get(&(0, 0)).cloned().unwrap_or_default().shift(2);
    let stray: Vec<&RatPoly> = buckets
        .iter()
        .filter(|(k, _)| **k != (0, 0))
        .map(|(_, p)| p)
        .collect();
    let constant = plain.degree() == Some(0) && plain.lowest_degree() == 0;
    let report = if stray.is_empty() && constant {
        VerificationReport::exact(
            *qn,
            NAME,
            Residual::ExactZero,
            format!("r^2 W = {plain}"),
        )
    } else {
        let non_constant = &plain - &RatPoly::constant(plain.coeff(0));
        let norm = max_abs_coeff(stray.into_iter().chain(std::iter::once(&non_constant)));
        let details = if plain.is_zero() {
            "r^2 W vanishes".to_string()
        } else {
            format!("r^2 W = {plain}, exponential buckets left: {}", buckets.len() - usize::from(buckets.contains_key(&(0, 0))))
        };
        // A vanishing Wronskian has zero residual norm but still fails.
        VerificationReport {
            passed: false,
            ..VerificationReport::exact(*qn, NAME, Residual::Norm(norm), details)
        }
    };
    (plain, report)
}

/// `r² W(R₁, R₂)` for the assembled pair of `qn`.
pub fn wronskian_symbolic(qn: &QuantumNumbers) -> (RatPoly, VerificationReport) {
    wronskian_of(&assemble_r1(qn), &assemble_r2(qn), qn)
}

/// Working precision and step for the finite-difference cross-check.
const FD_PREC: u32 = 384;
const FD_STEP_LOG2: i32 = -80;

/// Evaluates the radial operator on `f` at each `r` with fourth-order central
/// differences of extended-precision point values, and compares against
/// zero relative to `|r² f''| + |2r f'| + |V f|`.
pub fn numeric_residual_check(
    f: &ExpEiForm,
    qn: &QuantumNumbers,
    samples: &[BigRational],
    tolerance: f64,
) -> VerificationReport {
    const NAME: &str = "numeric-residual";
    let prec = FD_PREC;
    let h = Float::with_val(prec, Float::i_exp(1, FD_STEP_LOG2));
    let kappa = Float::with_val(prec, to_rug_rational(f.kappa()));
    let ll = (qn.l() * (qn.l() + 1)) as u32;
    let mut worst = 0.0f64;
    let mut worst_at = 0.0f64;
    for r in samples {
        let r0 = Float::with_val(prec, to_rug_rational(r));
        let at = |k: i32| -> crate::Result<Float> {
            let shifted = Float::with_val(prec, &r0 + Float::with_val(prec, &h * k));
            let exact = shifted.to_rational().expect("finite sample point");
            let q = BigRational::new(
                exact.numer().to_string().parse().expect("integer digits"),
                exact.denom().to_string().parse().expect("integer digits"),
            );
            eval_form_extended(f, &q, prec)
        };
        let vals: crate::Result<Vec<Float>> = (-2..=2).map(at).collect();
        let vals = match vals {
            Ok(v) => v,
            Err(e) => return VerificationReport::failed(*qn, NAME, format!("r = {}: {e}", r)),
        };
        let [fm2, fm1, f0, fp1, fp2] = <[Float; 5]>::try_from(vals).expect("five stencil points");
        // f'  ≈ (f(-2) - 8f(-1) + 8f(1) - f(2)) / 12h
        let d1 = (Float::with_val(prec, &fm2 - &fp2) + Float::with_val(prec, &fp1 - &fm1) * 8u32)
            / Float::with_val(prec, &h * 12u32);
        // f'' ≈ (-f(-2) + 16f(-1) - 30f(0) + 16f(1) - f(2)) / 12h²
        let d2 = (Float::with_val(prec, &fm1 + &fp1) * 16u32
            - Float::with_val(prec, &fm2 + &fp2)
            - Float::with_val(prec, &f0 * 30u32))
            / (Float::with_val(prec, &h * &h) * 12u32);
        let r2 = Float::with_val(prec, &r0 * &r0);
        let t2 = Float::with_val(prec, &r2 * &d2);
        let t1 = Float::with_val(prec, &r0 * &d1) * 2u32;
        let k2r2 = Float::with_val(prec, &kappa * &kappa) * &r2;
        let v = Float::with_val(prec, &r0 * 2u32) - k2r2 - ll;
        let t0 = Float::with_val(prec, &v * &f0);
        let magnitude = Float::with_val(prec, t2.abs_ref()) + Float::with_val(prec, t1.abs_ref())
            + Float::with_val(prec, t0.abs_ref());
        let total = t2 + t1 + t0;
        let rel = if magnitude.is_zero() {
            0.0
        } else {
            (total / magnitude).abs().to_f64()
        };
        if rel > worst || rel.is_nan() {
            worst = rel;
            worst_at = rational_to_f64(r);
        }
    }
    VerificationReport::numeric(
        *qn,
        NAME,
        worst,
        tolerance,
        format!("{} radii, worst relative residual at r = {worst_at}", samples.len()),
    )
}

/// Deterministic spread of rational radii over `(0, 6 n²]` for the
/// finite-difference check.
pub fn sample_radii(qn: &QuantumNumbers, count: usize) -> Vec<BigRational> {
    let span = 6 * qn.n() as i64 * qn.n() as i64;
    (0..count as i64)
        .map(|i| {
            // Golden-ratio low-discrepancy sequence on a 1/997 lattice.
            let frac = ((i + 1) * 616) % 997;
            BigRational::new((frac * span + 50).into(), 997.into())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    fn qn(n: i64, l: i64) -> QuantumNumbers {
        QuantumNumbers::new(n, l).unwrap()
    }

    #[test]
    fn assembled_forms_are_annihilated() {
        for q in QuantumNumbers::enumerate(5) {
            assert!(ode_residual_symbolic(&assemble_r1(&q), &q).passed, "{q}");
            assert!(ode_residual_symbolic(&assemble_r2(&q), &q).passed, "{q}");
        }
    }

    #[test]
    fn perturbed_p2_coefficient_is_caught() {
        let q = qn(3, 1);
        let mut r2 = assemble_r2(&q);
        let lowest = r2.q_plus.lowest_degree();
        r2.q_plus = &r2.q_plus + &RatPoly::monomial(rat(1, 1), lowest);
        let report = ode_residual_symbolic(&r2, &q);
        assert!(!report.passed);
        assert!(matches!(report.residual_norm, Residual::Norm(v) if v > 0.0));
    }

    #[test]
    fn wrong_kappa_is_reported() {
        let report = ode_residual_symbolic(&assemble_r2(&qn(2, 0)), &qn(3, 0));
        assert!(!report.passed);
    }

    #[test]
    fn wronskian_ground_state() {
        let (w, report) = wronskian_symbolic(&qn(1, 0));
        assert!(report.passed, "{report:?}");
        assert_eq!(w, RatPoly::constant(rat(-1, 2)));
    }

    #[test]
    fn wronskian_of_a_solution_with_itself_fails() {
        let q = qn(2, 1);
        let r1 = assemble_r1(&q);
        let (w, report) = wronskian_of(&r1, &r1, &q);
        assert!(w.is_zero());
        assert!(!report.passed);
    }

    #[test]
    fn finite_differences_agree_with_symbolic_engine() {
        let q = qn(3, 1);
        let radii = sample_radii(&q, 5);
        assert_eq!(radii.len(), 5);
        let good = numeric_residual_check(&assemble_r2(&q), &q, &radii, 1e-9);
        assert!(good.passed, "{good:?}");
        let mut bad = assemble_r2(&q);
        bad.q_ei = bad.q_ei.scale(&rat(2, 1));
        assert!(!numeric_residual_check(&bad, &q, &radii, 1e-9).passed);
    }
}
