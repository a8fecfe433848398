//! The Gaussian-regularized plane-wave kernels
//!
//! ```text
//! J(z, λ) = ∫_0^∞ e^{-λx²} e^{izx} dx = (i/z) √π w erfcx(w),   w = -iz / (2√λ)
//! K(z, λ) = ∫_{-∞}^{∞} e^{-λx²} e^{izx} dx = √(π/λ) e^{-z²/(4λ)}
//! ```
//!
//! and their `λ → 0⁺` limits.

use crate::error::{Error, Result};
use crate::quadrature::{self, extrapolate_to_zero, Tolerance};
use crate::special::{erfcx, exp_square, Tagged, LN_MAX};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const CHUNK_PANELS: usize = 32;
const MAX_PANELS: usize = 2_000_000;
const SADDLE_MAX_PANELS: f64 = 200_000.0;
const EXTRAPOLATION_POINTS: usize = 4;

/// Decreasing ladder of regularization parameters together with the thresholds
/// that decide convergence and divergence of a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizationSchedule {
    lambdas: Vec<f64>,
    divergence_threshold: f64,
    convergence_tol: f64,
}

impl RegularizationSchedule {
    pub fn new(lambdas: Vec<f64>, divergence_threshold: f64, convergence_tol: f64) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidSchedule("no lambda values".into()));
        }
        if lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidSchedule("lambda values must be positive and finite".into()));
        }
        if lambdas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidSchedule("lambda values must be strictly decreasing".into()));
        }
        if convergence_tol.is_nan() || divergence_threshold.is_nan() || convergence_tol <= 0.0 || divergence_threshold <= 0.0 {
            return Err(Error::InvalidSchedule("thresholds must be positive".into()));
        }
        if divergence_threshold <= 1.0 / convergence_tol {
            return Err(Error::InvalidSchedule(format!(
                "divergence threshold {divergence_threshold} must exceed 1/tol = {}",
                1.0 / convergence_tol
            )));
        }
        Ok(RegularizationSchedule { lambdas, divergence_threshold, convergence_tol })
    }

    /// `λ_n = start · ratio^n` for `n = 0..steps`.
    pub fn geometric(start: f64, ratio: f64, steps: usize, divergence_threshold: f64, convergence_tol: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidSchedule(format!("ratio {ratio} must lie in (0, 1)")));
        }
        let lambdas = (0..steps).map(|n| start * ratio.powi(n as i32)).collect();
        Self::new(lambdas, divergence_threshold, convergence_tol)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn divergence_threshold(&self) -> f64 {
        self.divergence_threshold
    }

    pub fn convergence_tol(&self) -> f64 {
        self.convergence_tol
    }
}

impl Default for RegularizationSchedule {
    /// `λ_n = 10^{-n/2}`, `n = 0..=12`, tolerance `1e-4`, threshold `1e6`.
    fn default() -> Self {
        let lambdas = (0..=12).map(|n| 10f64.powf(-(n as f64) / 2.0)).collect();
        RegularizationSchedule { lambdas, divergence_threshold: 1e6, convergence_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Converged,
    Diverged,
    Undecided,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Diverged => "diverged",
            Status::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelResult {
    /// The limit for converged traces; otherwise the value at the smallest λ
    /// (NaN when that overflowed).
    pub value: Complex64,
    pub status: Status,
    pub lambda_trace: Vec<(f64, Tagged)>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSchedule(format!("lambda must be positive and finite, got {lambda}")))
    }
}

fn check_point(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("z"))
    }
}

/// `J(z, λ)` written as `½ √(π/λ) erfcx(w)`, which is regular at `z = 0`.
pub fn half_line_kernel(z: Complex64, lambda: f64) -> Result<Tagged> {
    check_point(z)?;
    check_lambda(lambda)?;
    let root = lambda.sqrt();
    let w = Complex64::new(z.im, -z.re) / (2.0 * root);
    Ok(erfcx(w).scale(Complex64::new(0.5 * (PI / lambda).sqrt(), 0.0)))
}

/// Closed form of `J(z, λ)`; `z = 0` is rejected.
pub fn j_closed_form(z: Complex64, lambda: f64) -> Result<Tagged> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularInput);
    }
    half_line_kernel(z, lambda)
}

/// `K(z, λ) = √(π/λ) e^{-z²/(4λ)}`, the full-line kernel `J(z, λ) + J(-z, λ)`.
pub fn full_line_kernel(z: Complex64, lambda: f64) -> Result<Tagged> {
    check_point(z)?;
    check_lambda(lambda)?;
    let w = Complex64::new(z.im, -z.re) / (2.0 * lambda.sqrt());
    Ok(exp_square(w, 1.0, 0.5 * (PI / lambda).ln()))
}

/// Adaptive quadrature of `∫_0^∞ e^{-λx²} e^{izx} dx`.
///
/// Along the real axis the range is cut into half-period panels and marched out
/// until the tail drops below `1e-16` of the running sum. When `Im z` is negative
/// enough that the real-axis integrand grows by more than `e` before decaying, the
/// path is moved onto the steepest-descent route `0 → x* → x* + ∞` through the
/// saddle `x* = iz / (2λ)`, whose horizontal tail is an elementary Gaussian.
pub fn direct_quadrature(z: Complex64, lambda: f64) -> Result<Complex64> {
    check_point(z)?;
    check_lambda(lambda)?;
    let root = lambda.sqrt();
    if z.im >= -2.0 * root {
        real_axis(z, lambda)
    } else {
        saddle_route(z, lambda)
    }
}

fn real_axis(z: Complex64, lambda: f64) -> Result<Complex64> {
    let tol = Tolerance::new(1e-15, 1e-14);
    let g = |x: f64| Complex64::new(-lambda * x * x - z.im * x, z.re * x).exp();
    let h = PI / z.re.abs().max(lambda.sqrt());
    let mut total = Complex64::new(0.0, 0.0);
    let mut start = 0.0;
    let mut panels = 0;
    let mut quiet = 0;
    while panels < MAX_PANELS {
        let bps: Vec<f64> = (0..=CHUNK_PANELS).map(|k| start + h * k as f64).collect();
        let part = quadrature::integrate(g, &bps, tol)?.value;
        total += part;
        start = bps[CHUNK_PANELS];
        panels += CHUNK_PANELS;
        let floor = 1e-16 * total.norm();
        // past the peak of the envelope and below the floor
        let beyond_peak = -lambda * 2.0 * start - z.im <= 0.0;
        if beyond_peak && part.norm() <= floor && g(start).norm() * h <= floor {
            quiet += 1;
            if quiet >= 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::TruncationFailure(format!(
        "no cut-off found within {MAX_PANELS} panels for z = {z}, lambda = {lambda}"
    )))
}

fn saddle_route(z: Complex64, lambda: f64) -> Result<Complex64> {
    let saddle = Complex64::i() * z / (2.0 * lambda);
    let peak = -z * z / (4.0 * lambda);
    if peak.re > LN_MAX {
        return Err(Error::TruncationFailure(format!(
            "|J| exceeds the f64 range for z = {z}, lambda = {lambda}; use the closed form"
        )));
    }
    let scale = z * z / (4.0 * lambda);
    // phase along s ↦ s·x* is Im(scale)·(s² − 2s)
    let turns = scale.im.abs() / PI;
    if turns > SADDLE_MAX_PANELS {
        return Err(Error::TruncationFailure(format!(
            "saddle segment oscillates {turns:.3e} times for z = {z}, lambda = {lambda}"
        )));
    }
    let panels = (2.0 * turns).ceil().max(8.0) as usize;
    let bps: Vec<f64> = (0..=panels).map(|k| k as f64 / panels as f64).collect();
    let g = |s: f64| (scale * (s * s - 2.0 * s)).exp() * saddle;
    let segment = quadrature::integrate(g, &bps, Tolerance::new(1e-300, 1e-14))?.value;
    let tail = peak.exp() * (0.5 * (PI / lambda).sqrt());
    let value = segment + tail;
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::TruncationFailure(format!("non-finite quadrature result for z = {z}")))
    }
}

/// Which of the three limits a trace is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    /// `J(z, λ) → i/z` inside `D+`.
    Plus,
    /// `J(-z, λ) → -i/z` inside `D-`.
    Minus,
    /// `K(z, λ) → 0` inside `D`.
    FullLine,
}

fn trace(z: Complex64, schedule: &RegularizationSchedule, kind: KernelKind) -> Result<Vec<(f64, Tagged)>> {
    schedule
        .lambdas()
        .iter()
        .map(|&l| {
            let v = match kind {
                KernelKind::Plus => half_line_kernel(z, l)?,
                KernelKind::Minus => half_line_kernel(-z, l)?,
                KernelKind::FullLine => full_line_kernel(z, l)?,
            };
            Ok((l, v))
        })
        .collect()
}

fn diverging(trace: &[(f64, Tagged)], threshold: f64) -> bool {
    if trace.len() < 3 {
        return trace.last().is_some_and(|(_, v)| v.ln_abs() > threshold.ln());
    }
    let tail = &trace[trace.len() - 3..];
    let ln: Vec<f64> = tail.iter().map(|(_, v)| v.ln_abs()).collect();
    ln[2] > threshold.ln() && ln[0] < ln[1] && ln[1] < ln[2]
}

fn settling(values: &[Complex64], slack: f64) -> bool {
    if values.len() < 3 {
        return true;
    }
    let n = values.len();
    let d1 = (values[n - 1] - values[n - 2]).norm();
    let d0 = (values[n - 2] - values[n - 3]).norm();
    d1 <= d0 + slack
}

/// Runs a kernel along `schedule` and classifies the trace.
pub fn kernel_trace(z: Complex64, schedule: &RegularizationSchedule, kind: KernelKind) -> Result<KernelResult> {
    check_point(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularInput);
    }
    let lambda_trace = trace(z, schedule, kind)?;
    let last = lambda_trace.last().unwrap().1;
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let last_value = last.finite().unwrap_or(nan);

    if diverging(&lambda_trace, schedule.divergence_threshold()) {
        return Ok(KernelResult { value: last_value, status: Status::Diverged, lambda_trace });
    }
    let finite: Option<Vec<Complex64>> = lambda_trace.iter().map(|(_, v)| v.finite()).collect();
    let undecided = |lambda_trace| Ok(KernelResult { value: last_value, status: Status::Undecided, lambda_trace });
    let Some(values) = finite else {
        return undecided(lambda_trace);
    };
    let tol = schedule.convergence_tol();

    match kind {
        KernelKind::FullLine => {
            let bound = tol / z.norm();
            let tail_ok = values.iter().rev().take(3).all(|v| v.norm() <= bound.max(1e-300) || v.norm() == 0.0);
            if last_value.norm() <= bound && tail_ok {
                Ok(KernelResult { value: last_value, status: Status::Converged, lambda_trace })
            } else {
                undecided(lambda_trace)
            }
        }
        KernelKind::Plus | KernelKind::Minus => {
            let target = match kind {
                KernelKind::Plus => Complex64::i() / z,
                _ => -Complex64::i() / z,
            };
            let scale = target.norm();
            if (last_value - target).norm() <= tol * scale && settling(&values, 1e-12 * scale) {
                let k = values.len().min(EXTRAPOLATION_POINTS);
                let xs: Vec<f64> = lambda_trace[lambda_trace.len() - k..].iter().map(|p| p.0).collect();
                let limit = extrapolate_to_zero(&xs, &values[values.len() - k..]).value;
                Ok(KernelResult { value: limit, status: Status::Converged, lambda_trace })
            } else {
                undecided(lambda_trace)
            }
        }
    }
}

/// `λ → 0⁺` limit of `J(z, λ)`: `i/z` inside `D+`, divergent in the lower wedge.
pub fn kernel_limit(z: Complex64, schedule: &RegularizationSchedule) -> Result<KernelResult> {
    kernel_trace(z, schedule, KernelKind::Plus)
}

/// `λ → 0⁺` limit of `J(-z, λ)`: `-i/z` inside `D-`, divergent in the upper wedge.
pub fn kernel_limit_mirror(z: Complex64, schedule: &RegularizationSchedule) -> Result<KernelResult> {
    kernel_trace(z, schedule, KernelKind::Minus)
}

/// `λ → 0⁺` limit of `K(z, λ)`: zero inside `D`, divergent in both wedges.
pub fn kernel_limit_full(z: Complex64, schedule: &RegularizationSchedule) -> Result<KernelResult> {
    kernel_trace(z, schedule, KernelKind::FullLine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn j(z: Complex64, l: f64) -> Complex64 {
        j_closed_form(z, l).unwrap().finite().unwrap()
    }

    #[test]
    fn schedule_validation() {
        assert!(RegularizationSchedule::new(vec![], 1e6, 1e-4).is_err());
        assert!(RegularizationSchedule::new(vec![1.0, 1.0], 1e6, 1e-4).is_err());
        assert!(RegularizationSchedule::new(vec![1.0, -0.5], 1e6, 1e-4).is_err());
        assert!(RegularizationSchedule::new(vec![1.0, 0.5], 1e3, 1e-4).is_err());
        let d = RegularizationSchedule::default();
        assert_eq!(d.lambdas().len(), 13);
        assert!((d.lambdas()[12] - 1e-6).abs() < 1e-21);
    }

    #[test]
    fn closed_form_examples() {
        assert!((j(c(0.0, 1.0), 1e-6) - c(1.0, 0.0)).norm() < 1e-3);
        assert!(matches!(j_closed_form(c(0.0, 0.0), 1.0), Err(Error::SingularInput)));
        // w = 1 when z = 2√λ i
        let l: f64 = 0.09;
        let z = c(0.0, 2.0 * l.sqrt());
        let expect = Complex64::i() / z * PI.sqrt() * 0.427_583_576_155_807;
        assert!((j(z, l) - expect).norm() < 1e-15 * expect.norm());
    }

    #[test]
    fn quadrature_examples() {
        let v = direct_quadrature(c(0.0, 0.0), 1.0).unwrap();
        assert!((v - c(0.5 * PI.sqrt(), 0.0)).norm() < 1e-14);
        let z = c(0.0, 1.0);
        assert!((direct_quadrature(z, 0.01).unwrap() - j(z, 0.01)).norm() < 1e-8);
        let v = direct_quadrature(c(1.0, 0.0), 1e-4).unwrap();
        assert!((v - c(0.0, 1.0)).norm() < 1e-3);
    }

    #[test]
    fn quadrature_in_lower_half_plane() {
        for &(z, l) in &[(c(0.5, -1.0), 0.05), (c(-2.0, -0.5), 0.01), (c(0.0, -3.0), 0.5), (c(3.0, -2.9), 0.1)] {
            let a = direct_quadrature(z, l).unwrap();
            let b = j(z, l);
            assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()), "{z} {l}: {a} vs {b}");
        }
    }

    #[test]
    fn scaling_law() {
        let z = c(0.7, 0.4);
        let l = 0.2;
        for &s in &[0.5, 2.0, 10.0] {
            let a = j(z, l);
            let b = j(z * s, s * s * l) * s;
            assert!((a - b).norm() < 1e-10 * a.norm());
        }
    }

    #[test]
    fn full_line_is_sum_of_half_lines() {
        for &z in &[c(0.3, 0.2), c(-1.0, 0.5), c(2.0, -0.1)] {
            let k = full_line_kernel(z, 0.1).unwrap().finite().unwrap();
            let s = j(z, 0.1) + j(-z, 0.1);
            assert!((k - s).norm() < 1e-12 * k.norm().max(1.0));
        }
    }

    #[test]
    fn limit_examples() {
        let s = RegularizationSchedule::default();
        let r = kernel_limit(c(1.0, 0.0), &s).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - c(0.0, 1.0)).norm() < 1e-9);
        assert_eq!(kernel_limit(c(0.0, -1.0), &s).unwrap().status, Status::Diverged);
        let out = Complex64::from_polar(1.0, 5.0 * FRAC_PI_4 + 0.05);
        let inn = Complex64::from_polar(1.0, 5.0 * FRAC_PI_4 - 0.05);
        assert_eq!(kernel_limit(out, &s).unwrap().status, Status::Diverged);
        assert_eq!(kernel_limit(inn, &s).unwrap().status, Status::Converged);
        assert!(matches!(kernel_limit(c(0.0, 0.0), &s), Err(Error::SingularInput)));
    }

    #[test]
    fn mirror_examples() {
        let s = RegularizationSchedule::default();
        let r = kernel_limit_mirror(c(1.0, 0.0), &s).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - c(0.0, -1.0)).norm() < 1e-9);
        let r = kernel_limit_mirror(c(0.0, -1.0), &s).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - c(1.0, 0.0)).norm() < 1e-9);
        let up = Complex64::i() * Complex64::from_polar(3.0, 0.1);
        assert_eq!(kernel_limit_mirror(up, &s).unwrap().status, Status::Diverged);
    }

    #[test]
    fn full_line_limits() {
        let s = RegularizationSchedule::default();
        assert_eq!(kernel_limit_full(c(1.0, 0.2), &s).unwrap().status, Status::Converged);
        assert_eq!(kernel_limit_full(c(0.0, 1.0), &s).unwrap().status, Status::Diverged);
        assert_eq!(kernel_limit_full(c(0.0, -1.0), &s).unwrap().status, Status::Diverged);
    }

    #[test]
    fn upper_half_plane_is_exact() {
        let s = RegularizationSchedule::default();
        for &z in &[c(0.0, 0.2), c(-4.0, 0.2), c(3.0, 3.0), c(0.1, 0.5)] {
            let r = kernel_limit(z, &s).unwrap();
            let t = Complex64::i() / z;
            assert_eq!(r.status, Status::Converged, "{z}");
            assert!((r.value - t).norm() <= 1e-6 * t.norm(), "{z}: {}", r.value);
        }
    }
}
