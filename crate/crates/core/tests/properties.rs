use coulomb_irregular::closedform::{
    assemble_r1, assemble_r2, hyp1f1_terminating, laguerre_l1, p2_doublesum, p2_simplified,
    QuantumNumbers,
};
use coulomb_irregular::numeval::{ei_one_neg, eval_form, eval_form_extended_f64};
use coulomb_irregular::oracle::{numeric_residual_check, wronskian_of};
use coulomb_irregular::ratpoly::{factorial, rat, BigRational, RatPoly};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn laurent() -> impl Strategy<Value = RatPoly> {
    (-3i64..=3, prop::collection::vec(small_rational(), 0..5))
        .prop_map(|(lowest, coeffs)| RatPoly::from_coeffs(lowest, coeffs))
}

fn nonzero_point() -> impl Strategy<Value = BigRational> {
    small_rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn is_reduced(p: &RatPoly) -> bool {
    let c = p.coefficients();
    c.is_empty() || (!c[0].is_zero() && !c[c.len() - 1].is_zero())
}

proptest! {
    #[test]
    fn ring_axioms(p in laurent(), q in laurent(), s in laurent()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &RatPoly::one(), p.clone());
        for r in [&p + &q, &p * &q, &p - &q, p.derivative()] {
            prop_assert!(is_reduced(&r));
        }
    }

    #[test]
    fn product_rule(p in laurent(), q in laurent()) {
        let lhs = (&p * &q).derivative();
        let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in laurent(), q in laurent(), x in nonzero_point()) {
        let (px, qx) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        prop_assert_eq!((&p * &q).eval(&x).unwrap(), &px * &qx);
        prop_assert_eq!((&p + &q).eval(&x).unwrap(), &px + &qx);
    }

    #[test]
    fn p2_invariants(n_bar in 0u32..=30, m in 1u32..=40) {
        let p = p2_simplified(n_bar, m);
        prop_assert_eq!(&p, &p2_doublesum(n_bar, m));
        prop_assert!(p.is_integral());
        prop_assert!(!p.has_negative_powers());
        prop_assert_eq!(p.degree(), Some((n_bar + m) as i64 - 1));
        let sign = if n_bar % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        prop_assert_eq!(p.leading_coeff(), Some(&sign));
    }

    #[test]
    fn laguerre_relations(n_r in 0u32..=12, m in 0u32..=12) {
        let l1 = laguerre_l1(n_r, m);
        // x y'' + (m + 1 - x) y' + n_r y = 0
        let d1 = l1.derivative();
        let d2 = d1.derivative();
        let coeff = RatPoly::from_coeffs(0, vec![rat(m as i64 + 1, 1), rat(-1, 1)]);
        let ode = &(&(&RatPoly::x() * &d2) + &(&coeff * &d1)) + &l1.scale(&rat(n_r as i64, 1));
        prop_assert!(ode.is_zero());
        // L₁ = C(n_r + m, n_r) ₁F₁(-n_r; m + 1; x)
        let binom = BigRational::new(factorial(n_r + m), factorial(n_r) * factorial(m));
        prop_assert_eq!(l1, hyp1f1_terminating(n_r, m).scale(&binom));
    }

    #[test]
    fn ei_branches_agree_near_crossover(x in 35.0f64..45.0) {
        let got = ei_one_neg(x).unwrap().value;
        let reference = -Float::with_val(160, Float::with_val(160, x).eint_ref()).to_f64();
        prop_assert!(((got - reference) / reference).abs() < 1e-11);
    }
}

#[test]
fn double_precision_error_estimates_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let levels: Vec<QuantumNumbers> = QuantumNumbers::enumerate(6).collect();
    let mut worst_ratio = 0.0f64;
    for _ in 0..1000 {
        let qn = levels[rng.random_range(0..levels.len())];
        let form = if rng.random_bool(0.5) { assemble_r1(&qn) } else { assemble_r2(&qn) };
        let r: f64 = rng.random_range(0.01..60.0);
        let fast = eval_form(&form, r).unwrap();
        let exact = eval_form_extended_f64(&form, r, 256).unwrap().to_f64();
        let err = ((fast.value - exact) / exact).abs();
        assert!(
            err <= fast.est_rel_error,
            "{qn} r={r}: error {err:e} above estimate {:e}",
            fast.est_rel_error
        );
        worst_ratio = worst_ratio.max(err / fast.est_rel_error);
    }
    assert!(worst_ratio <= 1.0);
}

#[test]
fn boundary_behavior_at_origin() {
    for qn in QuantumNumbers::enumerate(5) {
        let r1 = eval_form(&assemble_r1(&qn), 1e-6).unwrap().value;
        let r2 = eval_form(&assemble_r2(&qn), 1e-6).unwrap().value;
        if qn.l() == 0 {
            // L₁(n_r, 1, 0) = n_r + 1
            let at_origin = (qn.n_r() + 1) as f64;
            assert!(((r1 - at_origin) / at_origin).abs() < 1e-5, "{qn}: {r1}");
        } else {
            assert!(r1.abs() < 1e-5, "{qn}: {r1}");
        }
        assert!(r2.abs() > 1e5, "{qn}: {r2}");
    }
}

#[test]
fn finite_difference_residual_at_random_radii() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for qn in [(1, 0), (2, 1), (3, 0), (4, 3), (6, 2)] {
        let qn = QuantumNumbers::new(qn.0, qn.1).unwrap();
        let radii: Vec<BigRational> = (0..20)
            .map(|_| rat(rng.random_range(1..=4000), 100))
            .collect();
        for form in [assemble_r1(&qn), assemble_r2(&qn)] {
            let report = numeric_residual_check(&form, &qn, &radii, 1e-9);
            assert!(report.passed, "{report:?}");
        }
    }
}

#[test]
fn wronskian_is_bilinear() {
    for qn in QuantumNumbers::enumerate(5) {
        let r1 = assemble_r1(&qn);
        let r2 = assemble_r2(&qn);
        let (w, _) = wronskian_of(&r1, &r2, &qn);
        let (w2, report) = wronskian_of(&r1, &r2.scale(&rat(2, 1)), &qn);
        assert!(report.passed);
        assert_eq!(w2, w.scale(&rat(2, 1)));
    }
}
