//! Shell toy problem: Coulomb potential on `[a, b]`, zero potential inside
//! and outside, at a fixed hydrogenic energy. The shell solution
//! `c1 R₁ + c2 R₂` is matched to a numerically integrated interior solution
//! at `a`, and the outer boundary `b` is searched so the log-derivative also
//! matches the decaying exterior solution.

use serde::Serialize;

use crate::closedform::{assemble_r1, assemble_r2, QuantumNumbers};
use crate::error::{Error, Result};
use crate::numeval::FloatForm;

/// Relative Richardson disagreement above which integration is rejected.
pub const RICHARDSON_LIMIT: f64 = 1e-8;
/// A bisected bracket counts as a root only if `|mismatch|` ends below this.
pub const MISMATCH_TOLERANCE: f64 = 1e-8;
/// Number of scan points over `b_range` when bracketing roots.
pub const SCAN_POINTS: usize = 64;

const MIN_STEPS: usize = 1000;
const EXTERIOR_START: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShellConfig {
    pub qn: QuantumNumbers,
    pub a: f64,
    pub b_range: (f64, f64),
    pub grid_step: f64,
}

impl ShellConfig {
    pub fn validate(&self) -> Result<()> {
        let (b_min, b_max) = self.b_range;
        let ok = |c: bool, msg: &str| if c { Ok(()) } else { Err(Error::InvalidShellConfig(msg.to_string())) };
        ok(self.a.is_finite() && self.a > 0.0, "a must be positive")?;
        ok(b_min.is_finite() && b_max.is_finite(), "b range must be finite")?;
        ok(self.a < b_min, "need a < b_min")?;
        ok(b_min < b_max, "need b_min < b_max")?;
        ok(self.grid_step.is_finite() && self.grid_step > 0.0, "grid step must be positive")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MatchResult {
    pub b_star: f64,
    /// Mixing coefficients with `c1² + c2² = 1` and `c1 >= 0`.
    pub c1: f64,
    pub c2: f64,
    /// Outer log-derivative mismatch at `b_star`.
    pub mismatch: f64,
    /// Relative derivative jump at `a` after matching values.
    pub inner_continuity: f64,
    /// Relative derivative jump at `b_star` after matching values.
    pub outer_continuity: f64,
}

/// `u'' + (2/r) u' - (κ² + l(l+1)/r²) u = 0`, the zero-potential radial
/// equation at `E = -κ²/2`, as a first-order system.
#[derive(Clone, Copy)]
struct FreeRadial {
    kappa2: f64,
    ll: f64,
}

impl FreeRadial {
    fn new(qn: &QuantumNumbers) -> Self {
        let kappa = qn.kappa_f64();
        let l = qn.l() as f64;
        FreeRadial {
            kappa2: kappa * kappa,
            ll: l * (l + 1.0),
        }
    }

    fn rhs(&self, r: f64, (u, du): (f64, f64)) -> (f64, f64) {
        (du, -2.0 * du / r + (self.kappa2 + self.ll / (r * r)) * u)
    }

    /// Fixed-step RK4 from `r0` to `r1` (either direction) in `steps` steps.
    fn rk4(&self, r0: f64, r1: f64, y0: (f64, f64), steps: usize) -> (f64, f64) {
        let h = (r1 - r0) / steps as f64;
        let mut y = y0;
        for i in 0..steps {
            let r = r0 + h * i as f64;
            let k1 = self.rhs(r, y);
            let k2 = self.rhs(r + 0.5 * h, (y.0 + 0.5 * h * k1.0, y.1 + 0.5 * h * k1.1));
            let k3 = self.rhs(r + 0.5 * h, (y.0 + 0.5 * h * k2.0, y.1 + 0.5 * h * k2.1));
            let k4 = self.rhs(r + h, (y.0 + h * k3.0, y.1 + h * k3.1));
            y.0 += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            y.1 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        y
    }

    /// RK4 at `steps` and `2·steps`; returns the Richardson-extrapolated end
    /// state after checking the two log-derivatives agree.
    fn rk4_richardson(&self, r0: f64, r1: f64, y0: (f64, f64), steps: usize) -> Result<(f64, f64)> {
        let coarse = self.rk4(r0, r1, y0, steps);
        let fine = self.rk4(r0, r1, y0, 2 * steps);
        let (lc, lf) = (coarse.1 / coarse.0, fine.1 / fine.0);
        let disagreement = ((lf - lc) / lf).abs();
        if !(disagreement <= RICHARDSON_LIMIT) {
            return Err(Error::StepSizeTooCoarse {
                disagreement,
                limit: RICHARDSON_LIMIT,
            });
        }
        Ok((
            fine.0 + (fine.0 - coarse.0) / 15.0,
            fine.1 + (fine.1 - coarse.1) / 15.0,
        ))
    }
}

fn step_count(length: f64, grid_step: f64) -> usize {
    ((length.abs() / grid_step).ceil() as usize).max(MIN_STEPS)
}

/// Regular zero-potential solution `r^l Σ c_k r^{2k}` and its derivative,
/// normalized so the series starts at 1.
fn interior_series(qn: &QuantumNumbers, r: f64) -> (f64, f64) {
    let kappa2 = qn.kappa_f64().powi(2);
    let l = qn.l() as f64;
    let (mut c, mut sum, mut dsum) = (1.0, 1.0, 0.0);
    let r2 = r * r;
    for k in 1..60 {
        let kf = k as f64;
        c *= kappa2 / ((2.0 * kf) * (2.0 * kf + 2.0 * l + 1.0));
        let term = c * r2.powi(k);
        sum += term;
        dsum += 2.0 * kf * term / r;
        if term < 1e-18 * sum {
            break;
        }
    }
    // u = r^l S(r): scale out r^l so deep starts do not underflow.
    (sum, l / r * sum + dsum)
}

/// `(u(a), u'(a))` of the regular interior solution, up to overall scale:
/// series start at `a/8`, then RK4 with one Richardson halving.
pub fn integrate_interior(qn: &QuantumNumbers, a: f64, grid_step: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(a));
    }
    if !(grid_step > 0.0) {
        return Err(Error::InvalidShellConfig("grid step must be positive".into()));
    }
    let r0 = a / 8.0;
    let y0 = interior_series(qn, r0);
    FreeRadial::new(qn).rk4_richardson(r0, a, y0, step_count(a - r0, grid_step))
}

/// Log-derivative `u'/u` at `b` of the decaying exterior solution, integrated
/// inward from `b + 40/κ`.
pub fn exterior_logderiv(qn: &QuantumNumbers, b: f64, grid_step: f64) -> Result<f64> {
    exterior_logderiv_from(qn, b, grid_step, EXTERIOR_START)
}

/// [`exterior_logderiv`] starting at `b + start/κ`.
pub fn exterior_logderiv_from(qn: &QuantumNumbers, b: f64, grid_step: f64, start: f64) -> Result<f64> {
    let (u, du) = exterior_state(qn, b, grid_step, start)?;
    Ok(du / u)
}

fn exterior_state(qn: &QuantumNumbers, b: f64, grid_step: f64, start: f64) -> Result<(f64, f64)> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(b));
    }
    if !(grid_step > 0.0) {
        return Err(Error::InvalidShellConfig("grid step must be positive".into()));
    }
    let kappa = qn.kappa_f64();
    let r_start = b + start / kappa;
    // Leading behavior e^{-κr}/r; the growing admixture decays inward.
    let y0 = (1.0, -(kappa + 1.0 / r_start));
    FreeRadial::new(qn).rk4_richardson(r_start, b, y0, step_count(r_start - b, grid_step))
}

/// Value and derivative of `R₁` and `R₂` at `r`, by double-precision
/// evaluation of the symbolic forms and their symbolic derivatives.
struct ShellBasis {
    r1: FloatForm,
    dr1: FloatForm,
    r2: FloatForm,
    dr2: FloatForm,
}

impl ShellBasis {
    fn new(qn: &QuantumNumbers) -> Self {
        let r1 = assemble_r1(qn);
        let r2 = assemble_r2(qn);
        ShellBasis {
            dr1: FloatForm::new(&r1.derivative()),
            dr2: FloatForm::new(&r2.derivative()),
            r1: FloatForm::new(&r1),
            r2: FloatForm::new(&r2),
        }
    }

    /// `(ψ(r), ψ'(r))` for `ψ = c1 R₁ + c2 R₂`.
    fn psi(&self, c1: f64, c2: f64, r: f64) -> Result<(f64, f64)> {
        let [v1, d1, v2, d2] = self.raw(r)?;
        Ok((c1 * v1 + c2 * v2, c1 * d1 + c2 * d2))
    }

    fn raw(&self, r: f64) -> Result<[f64; 4]> {
        Ok([
            self.r1.eval(r)?.value,
            self.dr1.eval(r)?.value,
            self.r2.eval(r)?.value,
            self.dr2.eval(r)?.value,
        ])
    }
}

/// Mixing `(c1, c2)` whose combination has log-derivative `derivative/value`
/// at `a`, normalized to unit length with `c1 >= 0`.
pub fn mixing_from_interior(qn: &QuantumNumbers, a: f64, value: f64, derivative: f64) -> Result<(f64, f64)> {
    mixing(&ShellBasis::new(qn), a, value, derivative)
}

fn mixing(basis: &ShellBasis, a: f64, value: f64, derivative: f64) -> Result<(f64, f64)> {
    let [v1, d1, v2, d2] = basis.raw(a)?;
    // c1 (d1 u - v1 u') + c2 (d2 u - v2 u') = 0, scale-free in (u, u').
    let w1 = d1 * value - v1 * derivative;
    let w2 = d2 * value - v2 * derivative;
    let (mut c1, mut c2) = (w2, -w1);
    let norm = c1.hypot(c2);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidShellConfig(format!(
            "degenerate inner matching at a = {a}"
        )));
    }
    c1 /= norm;
    c2 /= norm;
    if c1 < 0.0 || (c1 == 0.0 && c2 < 0.0) {
        c1 = -c1;
        c2 = -c2;
    }
    Ok((c1, c2))
}

/// Relative log-derivative mismatch at `a` between the interior solution and
/// `c1 R₁ + c2 R₂`.
pub fn inner_mismatch(qn: &QuantumNumbers, a: f64, c1: f64, c2: f64, grid_step: f64) -> Result<f64> {
    let (u, du) = integrate_interior(qn, a, grid_step)?;
    let (psi, dpsi) = ShellBasis::new(qn).psi(c1, c2, a)?;
    Ok(relative_jump(du / u, dpsi / psi))
}

fn relative_jump(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

struct Matcher<'a> {
    config: &'a ShellConfig,
    basis: ShellBasis,
    c1: f64,
    c2: f64,
}

impl Matcher<'_> {
    fn mismatch(&self, b: f64) -> Result<f64> {
        let (psi, dpsi) = self.basis.psi(self.c1, self.c2, b)?;
        Ok(dpsi / psi - exterior_logderiv(&self.config.qn, b, self.config.grid_step)?)
    }

    /// Bisection on a bracket with a sign change; `None` if the bracket holds
    /// a pole of `ψ'/ψ` rather than a root.
    fn bisect(&self, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<Option<(f64, f64)>> {
        let mut best = (lo, f_lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let f_mid = self.mismatch(mid)?;
            if f_mid.abs() < best.1.abs() {
                best = (mid, f_mid);
            }
            if f_mid == 0.0 || hi - lo <= 4.0 * f64::EPSILON * mid.abs() {
                break;
            }
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        Ok((best.1.abs() < MISMATCH_TOLERANCE).then_some(best))
    }
}

/// Solves the inner matching at `a`, then finds `b` in `b_range` where the
/// shell log-derivative meets the decaying exterior one. The first root in
/// increasing `b` is returned.
pub fn match_shell(config: &ShellConfig) -> Result<MatchResult> {
    config.validate()?;
    let qn = config.qn;
    let basis = ShellBasis::new(&qn);
    let (u, du) = integrate_interior(&qn, config.a, config.grid_step)?;
    let (c1, c2) = mixing(&basis, config.a, u, du)?;
    let matcher = Matcher {
        config,
        basis,
        c1,
        c2,
    };

    let (b_min, b_max) = config.b_range;
    let mut scanned = Vec::with_capacity(SCAN_POINTS + 1);
    for i in 0..=SCAN_POINTS {
        let b = b_min + (b_max - b_min) * i as f64 / SCAN_POINTS as f64;
        scanned.push((b, matcher.mismatch(b)?));
    }
    let mut found = None;
    for w in scanned.windows(2) {
        let ((b0, f0), (b1, f1)) = (w[0], w[1]);
        if f0 == 0.0 {
            found = Some((b0, f0));
            break;
        }
        if (f0 < 0.0) != (f1 < 0.0) {
            if let Some(root) = matcher.bisect(b0, b1, f0)? {
                found = Some(root);
                break;
            }
        }
    }
    let Some((b_star, mismatch)) = found else {
        return Err(Error::NoRootInRange {
            b_min,
            b_max,
            scanned,
        });
    };

    let (psi_a, dpsi_a) = matcher.basis.psi(c1, c2, config.a)?;
    let inner_continuity = relative_jump(du * psi_a / u, dpsi_a);
    let (v, dv) = exterior_state(&qn, b_star, config.grid_step, EXTERIOR_START)?;
    let (psi_b, dpsi_b) = matcher.basis.psi(c1, c2, b_star)?;
    let outer_continuity = relative_jump(dv * psi_b / v, dpsi_b);

    Ok(MatchResult {
        b_star,
        c1,
        c2,
        mismatch,
        inner_continuity,
        outer_continuity,
    })
}

/// Piecewise wavefunction of a matched shell at the given radii: interior
/// and exterior solutions scaled to meet `c1 R₁ + c2 R₂` at `a` and `b_star`.
pub fn piecewise_wavefunction(config: &ShellConfig, result: &MatchResult, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let qn = config.qn;
    let basis = ShellBasis::new(&qn);
    let (u_a, _) = integrate_interior(&qn, config.a, config.grid_step)?;
    let (psi_a, _) = basis.psi(result.c1, result.c2, config.a)?;
    let (psi_b, _) = basis.psi(result.c1, result.c2, result.b_star)?;
    let kappa = qn.kappa_f64();
    let r_start = result.b_star + EXTERIOR_START / kappa;
    let y0 = (1.0, -(kappa + 1.0 / r_start));
    let system = FreeRadial::new(&qn);
    let exterior = |r: f64| {
        if r < r_start {
            system.rk4(r_start, r, y0, step_count(r_start - r, config.grid_step)).0
        } else {
            (-kappa * (r - r_start)).exp() * r_start / r
        }
    };
    let v_b = exterior(result.b_star);
    radii
        .iter()
        .map(|&r| {
            let value = if r < config.a {
                integrate_interior(&qn, r, config.grid_step)?.0 * psi_a / u_a
                    * interior_scale_ratio(&qn, r, config.a)
            } else if r <= result.b_star {
                basis.psi(result.c1, result.c2, r)?.0
            } else {
                exterior(r) * psi_b / v_b
            };
            Ok((r, value))
        })
        .collect()
}

/// The interior integrator scales out `r0^l` with `r0 = r/8`; this restores
/// the relative scale between two end points.
fn interior_scale_ratio(qn: &QuantumNumbers, r: f64, a: f64) -> f64 {
    (r / a).powi(qn.l() as i32)
}
