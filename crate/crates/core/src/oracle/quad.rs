//! Quadrature used by the oracles: adaptive Gauss–Kronrod (7/15) in double
//! precision and composite Gauss–Legendre in MPFR precision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rug::Float;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
}

/// One Kronrod-15 panel: `(kronrod, |kronrod - gauss|)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive bisection on `[a, b]` until the summed `|K15 - G7|` estimate
/// drops below `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadResult {
    integrate_with_limit(&f, a, b, abs_tol, rel_tol, 20_000)
}

pub fn integrate_with_limit<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_error: 0.0,
        };
    }
    let (v, e) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < max_panels {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in double precision.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|p| p.value).sum();
    let abs_error = heap.iter().map(|p| p.err).sum();
    QuadResult { value, abs_error }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` at `prec` bits, by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre_rule(order: usize, prec: u32) -> Vec<(Float, Float)> {
    let work = prec + 32;
    let tol = Float::with_val(work, Float::i_exp(1, -(prec as i32) - 8));
    let mut rule = Vec::with_capacity(order);
    for i in 0..order {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut x = Float::with_val(work, guess);
        let mut dp = Float::with_val(work, 0);
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, &x, work);
            let step = Float::with_val(work, &p / &d);
            x -= &step;
            dp = d;
            if step.abs() < tol {
                let (_, d) = legendre_with_derivative(order, &x, work);
                dp = d;
                break;
            }
        }
        let one_minus_x2 = Float::with_val(work, 1) - Float::with_val(work, &x * &x);
        let w = Float::with_val(work, 2) / (one_minus_x2 * Float::with_val(work, &dp * &dp));
        rule.push((Float::with_val(prec, &x), Float::with_val(prec, &w)));
    }
    rule
}

fn legendre_with_derivative(order: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=order {
        let kf = k as u32;
        // k P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2}
        let t = Float::with_val(prec, x * &p1) * (2 * kf - 1);
        let p2 = (t - Float::with_val(prec, &p0 * (kf - 1))) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P'_n = n (x P_n - P_{n-1}) / (x² - 1)
    let x2m1 = Float::with_val(prec, x * x) - 1u32;
    let d = (Float::with_val(prec, x * &p1) - &p0) * order as u32 / x2m1;
    (p1, d)
}

/// Composite Gauss–Legendre over consecutive panels `breaks[i]..breaks[i+1]`.
pub fn composite_gauss_legendre<F: Fn(&Float) -> Float>(
    f: F,
    breaks: &[Float],
    rule: &[(Float, Float)],
    prec: u32,
) -> Float {
    let mut total = Float::with_val(prec, 0);
    for w in breaks.windows(2) {
        let half = Float::with_val(prec, &w[1] - &w[0]) / 2u32;
        let center = Float::with_val(prec, &w[1] + &w[0]) / 2u32;
        let mut panel = Float::with_val(prec, 0);
        for (node, weight) in rule {
            let s = Float::with_val(prec, &half * node) + &center;
            panel += f(&s) * weight;
        }
        total += panel * half;
    }
    total
}
