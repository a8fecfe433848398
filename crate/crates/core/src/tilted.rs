//! Straight lines `k = q e^{iφ}` through the origin, the continuous argument of
//! `k + iε`, and the Sokhotski-Plemelj identity in the real variable `q`:
//!
//! ```text
//! 1/(k + i0⁺) = e^{-iφ} PV(1/q) - iπ δ(k)
//! ```

use crate::contour::{Contour, IntegrationOptions, Segment};
use crate::error::{Error, Result};
use crate::functionals::{DecayClass, FunctionalResult, TestFunction};
use crate::kernels::{kernel_limit, RegularizationSchedule, Status};
use crate::quadrature::{self, Tolerance};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const FOLD_STEPS: usize = 8;

/// The tilted line `{q e^{iφ} : q_min ≤ q ≤ q_max}`; infinite bounds give rays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiltedLine {
    pub phi: f64,
    pub q_range: (f64, f64),
}

impl TiltedLine {
    pub fn new(phi: f64, q_min: f64, q_max: f64) -> Result<Self> {
        if phi.is_nan() || phi.abs() >= FRAC_PI_2 {
            return Err(Error::InvalidLine(format!("tilt {phi} must lie in (-pi/2, pi/2)")));
        }
        if !(q_min < 0.0 && q_max > 0.0) {
            return Err(Error::InvalidLine(format!("range ({q_min}, {q_max}) must contain 0 in its interior")));
        }
        Ok(TiltedLine { phi, q_range: (q_min, q_max) })
    }

    /// The whole line, `q ∈ ℝ`.
    pub fn full(phi: f64) -> Result<Self> {
        Self::new(phi, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// True when `k + iε` stays inside `D+`, i.e. `|φ| < π/4`.
    pub fn strict_kernel_valid(&self) -> bool {
        self.phi.abs() < FRAC_PI_4
    }

    pub fn direction(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phi)
    }

    pub fn to_contour(&self) -> Result<Contour> {
        let e = self.direction();
        let zero = Complex64::new(0.0, 0.0);
        let (lo, hi) = self.q_range;
        let first = if lo.is_finite() {
            Segment::line(e * lo, zero)
        } else {
            Segment::Ray { anchor: zero, angle: self.phi + PI, inbound: true }
        };
        let second = if hi.is_finite() {
            Segment::line(zero, e * hi)
        } else {
            Segment::Ray { anchor: zero, angle: self.phi, inbound: false }
        };
        Contour::new(vec![first, second], Some(1))
    }
}

fn check_angle(phi: f64) -> Result<()> {
    if phi.is_finite() && phi.cos() > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLine(format!("tilt {phi} must satisfy cos(phi) > 0")))
    }
}

/// `arg(q e^{iφ} + iε) = arctan[(q sin φ + ε)/(q cos φ)] + π Θ(-q)`, continuous in `q`
/// and equal to `π/2` at `q = 0`.
pub fn arg_regularized(q: f64, phi: f64, epsilon: f64) -> Result<f64> {
    check_angle(phi)?;
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidLine(format!("epsilon must be positive, got {epsilon}")));
    }
    if q == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let base = ((q * phi.sin() + epsilon) / (q * phi.cos())).atan();
    Ok(if q < 0.0 { base + PI } else { base })
}

/// `arg(k + i0⁺) = φ + π Θ(-q)`, undefined at the jump.
pub fn arg_limit(q: f64, phi: f64) -> Result<f64> {
    check_angle(phi)?;
    if q == 0.0 {
        Err(Error::UndefinedAtJump)
    } else if q > 0.0 {
        Ok(phi)
    } else {
        Ok(phi + PI)
    }
}

/// `ln(k + iε) = ln|k + iε| + i arg(k + iε)` on the continuous branch.
pub fn log_regularized(q: f64, phi: f64, epsilon: f64) -> Result<Complex64> {
    let k = Complex64::from_polar(q, phi) + Complex64::new(0.0, epsilon);
    Ok(Complex64::new(k.norm().ln(), arg_regularized(q, phi, epsilon)?))
}

/// Result of [`tilted_plemelj`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TiltedResult {
    pub result: FunctionalResult,
    pub strict_kernel_valid: bool,
    /// Set when the regularized kernel has no finite limit on the line, so the
    /// formula route has nothing to agree with.
    pub lambda_route_mismatch: bool,
}

/// `∫ g(q) dq` over `[a, b]`, either bound possibly infinite.
fn integrate_q(g: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> Result<Complex64> {
    let tol = Tolerance::default();
    match (a.is_finite(), b.is_finite()) {
        (true, true) => Ok(quadrature::integrate(g, &[a, b], tol)?.value),
        (true, false) => {
            let ray = Segment::Ray { anchor: Complex64::new(a, 0.0), angle: 0.0, inbound: false };
            Ok(ray.integrate(&|z: Complex64| g(z.re), &IntegrationOptions::default())?.value)
        }
        (false, true) => integrate_q(&|q| g(-q), -b, f64::INFINITY),
        (false, false) => unreachable!("folded ranges always have a finite end"),
    }
}

/// Action of `1/(k + i0⁺)` on `f` along the tilted line: `PV ∫ f(q e^{iφ})/q dq - iπ f(0)`.
///
/// The principal value is folded, `∫_0^c [f(q e^{iφ}) - f(-q e^{iφ})]/q dq` plus the
/// unpaired outer parts, so it shares no code path with the contour excision ladder.
pub fn tilted_plemelj(f: &TestFunction, line: &TiltedLine) -> Result<TiltedResult> {
    let contour = line.to_contour()?;
    if !contour.is_finite() && f.decay() != DecayClass::GaussianDecay {
        return Err(Error::NotIntegrable(f.name().to_string()));
    }
    let f0 = f.value_at_zero()?;
    let e = line.direction();
    let (lo, hi) = line.q_range;
    let c = (-lo).min(hi);
    let fold = |q: f64| (f.eval(e * q) - f.eval(-e * q)) / q;
    let inner_end = if c.is_finite() { c } else { 1.0 };
    let inner = integrate_q(&fold, 0.0, inner_end)?;
    let mut outer = Complex64::new(0.0, 0.0);
    if c.is_finite() {
        if hi > c {
            outer += integrate_q(&|q| f.eval(e * q) / q, c, hi)?;
        }
        if -lo > c {
            outer += integrate_q(&|q| f.eval(e * q) / q, lo, -c)?;
        }
    } else {
        outer += integrate_q(&fold, 1.0, f64::INFINITY)?;
    }
    let pv = inner + outer;
    let delta_part = Complex64::new(0.0, -PI) * f0;

    let delta0 = 0.1 * inner_end;
    let epsilon_trace = (0..FOLD_STEPS)
        .map(|k| {
            let d = delta0 * 0.5f64.powi(k as i32);
            Ok((d, pv - integrate_q(&fold, 0.0, d)? + delta_part))
        })
        .collect::<Result<Vec<_>>>()?;

    let schedule = RegularizationSchedule::default();
    let converged = |z: Complex64| -> Result<bool> { Ok(kernel_limit(z, &schedule)?.status == Status::Converged) };
    let mismatch = !(converged(e)? && converged(-e)?);

    Ok(TiltedResult {
        result: FunctionalResult { value: pv + delta_part, pv_part: pv, delta_part, epsilon_trace, pv_error: 0.0 },
        strict_kernel_valid: line.strict_kernel_valid(),
        lambda_route_mismatch: mismatch,
    })
}
