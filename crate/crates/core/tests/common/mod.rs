//! Reference values computed without touching the library's special functions.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the disc of radius `r`.
pub fn in_disc(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rho, rng.gen_range(-PI..PI))
}

/// erf(x) from its Maclaurin series `2/√π Σ (-1)^n x^{2n+1} / (n! (2n+1))`.
pub fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        term *= -x * x / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 / PI.sqrt() * sum
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, (a, fa): (f64, f64), (b, fb): (f64, f64), fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, (a, fa), (m, fm), flm, left, tol / 2.0, depth - 1) + simpson_step(f, (m, fm), (b, fb), frm, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of a real function.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, (a, fa), (b, fb), fm, whole, tol, 50)
}

/// erfc(1) as `2/√π ∫_1^7 e^{-t²} dt` (the tail beyond 7 is below 1e-22).
pub fn erfc_one_by_quadrature() -> f64 {
    2.0 / PI.sqrt() * simpson(|t| (-t * t).exp(), 1.0, 7.0, 1e-17)
}

/// Shi(1) = Σ 1 / ((2k+1)·(2k+1)!).
pub fn shi_one() -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 0..20u32 {
        let n = 2 * k + 1;
        if k > 0 {
            fact *= ((n - 1) * n) as f64;
        }
        sum += 1.0 / (n as f64 * fact);
    }
    sum
}

/// `∫_{-3}^{3} e^{-t²} dt` by adaptive Simpson.
pub fn gauss_mass_three() -> f64 {
    2.0 * simpson(|t| (-t * t).exp(), 0.0, 3.0, 1e-16)
}
