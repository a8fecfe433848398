use num_complex::Complex64;
use plemelj_core::{
    arg_limit, arg_regularized, asymptotic_factor, cross_check, delta_action, direct_quadrature, erfc, erfcx, j_closed_form,
    kernel_limit, kernel_limit_full, kernel_limit_mirror, plemelj_minus, plemelj_plus, tilted_plemelj, Contour, Kernel,
    RegularizationSchedule, Status, TestFunction, TiltedLine,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Special,
    Kernels,
    Plemelj,
    Tilted,
    All,
}

impl Suite {
    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Special, Suite::Kernels, Suite::Plemelj, Suite::Tilted],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Kernels => "kernels",
            Suite::Plemelj => "plemelj",
            Suite::Tilted => "tilted",
            Suite::All => "all",
        }
    }
}

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured <= self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}/{}: measured {:.3e}, tol {:.1e}", self.suite, self.name, self.measured, self.tol)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn in_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI))
}

/// Any error counts as an unbounded measurement.
fn measure(r: plemelj_core::Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

fn finite(t: plemelj_core::Tagged) -> plemelj_core::Result<Complex64> {
    t.finite().ok_or(plemelj_core::Error::Overflow { ln_abs: t.ln_abs() })
}

fn erfc_one_series() -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 0..40 {
        sum += term / (2 * n + 1) as f64;
        term *= -1.0 / (n + 1) as f64;
    }
    1.0 - 2.0 / PI.sqrt() * sum
}

fn special() -> Vec<Check> {
    let mut r = rng(11);
    let points: Vec<Complex64> = (0..300).map(|_| in_disc(&mut r, 8.0)).collect();
    let reflection = measure(points.iter().try_fold(0.0f64, |acc, &w| {
        let (a, b) = (finite(erfc(w))?, finite(erfc(-w))?);
        Ok(acc.max((a + b - 2.0).norm() / a.norm().max(b.norm()).max(2.0)))
    }));
    let conjugation = measure(points.iter().try_fold(0.0f64, |acc, &w| {
        let a = finite(erfc(w))?;
        Ok(acc.max((finite(erfc(w.conj()))? - a.conj()).norm() / a.norm().max(f64::MIN_POSITIVE)))
    }));
    let scaled = measure(points.iter().filter(|w| w.norm() <= 4.0).try_fold(0.0f64, |acc, &w| {
        let x = finite(erfcx(w))?;
        Ok(acc.max(((w * w).exp() * finite(erfc(w))? - x).norm() / x.norm()))
    }));
    let series = erfc_one_series();
    let one = measure(finite(erfc(c(1.0, 0.0))).map(|v| (v.re - series).abs() / series));

    let inside: Vec<f64> = (0..8).map(|k| -0.75 * PI + (k as f64 + 0.5) * 1.5 * PI / 8.0).collect();
    let asymptotic = measure(inside.iter().try_fold(0.0f64, |acc, &t| {
        let w = Complex64::from_polar(100.0, t);
        let w2 = w * w;
        let series = 1.0 - 0.5 / w2 + 0.75 / (w2 * w2);
        Ok(acc.max((finite(asymptotic_factor(w))? - series).norm()))
    }));
    let outside = [0.75 * PI + 0.2, PI, -PI + 0.3, -0.75 * PI - 0.2];
    let growth = outside.iter().map(|&t| (-asymptotic_factor(Complex64::from_polar(100.0, t)).ln_abs()).exp()).fold(0.0, f64::max);

    vec![
        check(Suite::Special, "erfc reflection, 300 points |w| <= 8", reflection, 1e-12),
        check(Suite::Special, "erfc conjugation, 300 points |w| <= 8", conjugation, 1e-12),
        check(Suite::Special, "erfcx = exp(w^2) erfc(w), |w| <= 4", scaled, 1e-12),
        check(Suite::Special, "erfc(1) against Taylor series", one, 1e-12),
        check(Suite::Special, "sector law at |w| = 100 against 3-term series", asymptotic, 1e-10),
        check(Suite::Special, "1/|sqrt(pi) w erfcx(w)| outside the sector, |w| = 100", growth, 1e-6),
    ]
}

fn kernels() -> Vec<Check> {
    let s = RegularizationSchedule::default();
    let mut r = rng(12);
    let mut upper = Vec::new();
    while upper.len() < 40 {
        let z = c(r.gen_range(-5.0..5.0), r.gen_range(0.2..5.0));
        if z.norm() <= 5.0 {
            upper.push(z);
        }
    }
    let limit = measure(upper.iter().try_fold(0.0f64, |acc, &z| {
        let k = kernel_limit(z, &s)?;
        let t = Complex64::i() / z;
        Ok(acc.max(if k.status == Status::Converged { (k.value - t).norm() / t.norm() } else { f64::INFINITY }))
    }));

    let pairs: Vec<(Complex64, f64)> = (0..8).map(|_| (in_disc(&mut r, 3.0), 10f64.powf(r.gen_range(-2.0..0.0)))).collect();
    let quadrature = measure(pairs.iter().try_fold(0.0f64, |acc, &(z, l)| {
        let j = finite(j_closed_form(z, l)?)?;
        Ok(acc.max((j - direct_quadrature(z, l)?).norm() / (1.0 + j.norm())))
    }));

    let scaling = measure(pairs.iter().try_fold(0.0f64, |acc, &(z, l)| {
        let a = finite(j_closed_form(z, l)?)?;
        let b = finite(j_closed_form(2.0 * z, 4.0 * l)?)?;
        Ok(acc.max((2.0 * b - a).norm() / a.norm()))
    }));

    let (conv, div) = (Status::Converged, Status::Diverged);
    let below = Complex64::from_polar(1.0, -FRAC_PI_2 + 0.4);
    let expected = [
        (kernel_limit as fn(_, _) -> _, c(0.0, 1.0), conv),
        (kernel_limit, c(1.0, 0.0), conv),
        (kernel_limit, c(-1.0, -0.3), conv),
        (kernel_limit, c(0.0, -1.0), div),
        (kernel_limit, below, div),
        (kernel_limit_mirror, c(0.0, -1.0), conv),
        (kernel_limit_mirror, c(0.0, 1.0), div),
        (kernel_limit_full, c(1.0, 0.0), conv),
        (kernel_limit_full, c(0.0, 1.0), div),
        (kernel_limit_full, c(0.0, -1.0), div),
    ];
    let misclassified = expected.iter().filter(|(run, z, want)| run(*z, &s).map(|k| k.status) != Ok(*want)).count();

    vec![
        check(Suite::Kernels, "upper half-plane limit i/z, 40 points", limit, 1e-6),
        check(Suite::Kernels, "closed form vs direct quadrature, 8 pairs", quadrature, 1e-8),
        check(Suite::Kernels, "scaling J(2z, 4 lambda) = J(z, lambda)/2", scaling, 1e-12),
        check(Suite::Kernels, "wedge classification, misclassified points", misclassified as f64, 0.0),
    ]
}

fn plemelj() -> Vec<Check> {
    let real = |a: f64, b: f64| Contour::segment(c(a, 0.0), c(b, 0.0));
    let bent = || Contour::polyline(&[c(-2.0, 0.0), c(-0.5, 0.4), c(0.0, 0.0), c(0.5, 0.4), c(2.0, 0.0)]);
    let tilted = || {
        let e = Complex64::from_polar(1.0, PI / 8.0);
        Contour::segment(-2.0 * e, 2.0 * e)
    };

    let symmetric = measure(real(-3.0, 3.0).and_then(|p| plemelj_plus(&TestFunction::gauss(0.0), &p)).map(|r| (r.value - PI).norm()));

    let route = |kernel: Kernel, f: TestFunction, path: plemelj_core::Result<Contour>| {
        measure(path.and_then(|p| cross_check(kernel, &f, &p)).map(|(r, cmp)| {
            let scale = 1e-8f64.max(1e-5 * r.value.norm());
            if cmp.agree {
                cmp.difference / scale * 1e-5
            } else {
                f64::INFINITY
            }
        }))
    };

    let sum = measure(bent().and_then(|p| {
        let f = TestFunction::poly_gauss(1, 0.3);
        let want = 2.0 * PI * f.value_at_zero()?;
        let got = plemelj_plus(&f, &p)?.value + plemelj_minus(&f, &p)?.value;
        Ok((got - want).norm() / want.norm().max(1.0))
    }));
    let delta = measure(bent().and_then(|p| delta_action(&TestFunction::gauss(0.0), &p)).map(|r| (r.value - 2.0 * PI).norm()));

    vec![
        check(Suite::Plemelj, "I_plus gauss(0) on [-3, 3] equals pi", symmetric, 1e-10),
        check(Suite::Plemelj, "route equivalence I_plus gauss(0.3) on [-2, 2.5]", route(Kernel::IPlus, TestFunction::gauss(0.3), real(-2.0, 2.5)), 1e-5),
        check(Suite::Plemelj, "route equivalence I_plus gauss(0.3) tilted pi/8", route(Kernel::IPlus, TestFunction::gauss(0.3), tilted()), 1e-5),
        check(Suite::Plemelj, "route equivalence I_minus poly_gauss(1,0.2) on [-2, 2]", route(Kernel::IMinus, TestFunction::poly_gauss(1, 0.2), real(-2.0, 2.0)), 1e-5),
        check(Suite::Plemelj, "route equivalence delta gauss(0) on bent path", route(Kernel::Delta, TestFunction::gauss(0.0), bent()), 1e-5),
        check(Suite::Plemelj, "plus + minus = 2 pi f(0) on bent path", sum, 1e-10),
        check(Suite::Plemelj, "delta gauss(0) on bent path equals 2 pi", delta, 1e-10),
    ]
}

fn tilted() -> Vec<Check> {
    let f = TestFunction::gauss(0.3);
    let consistency = measure([-PI / 8.0, 0.0, PI / 8.0].iter().try_fold(0.0f64, |acc, &phi| {
        let line = TiltedLine::new(phi, -3.0, 3.0)?;
        let t = tilted_plemelj(&f, &line)?.result.value;
        let p = plemelj_plus(&f, &line.to_contour()?)?.value;
        Ok(acc.max((t + Complex64::i() * p).norm()))
    }));

    let flags = [(FRAC_PI_4 + 0.05, true), (-(FRAC_PI_4 + 0.05), true), (FRAC_PI_4 - 0.05, false), (-(FRAC_PI_4 - 0.05), false)];
    let wrong_flags = flags
        .iter()
        .filter(|&&(phi, want)| {
            TiltedLine::new(phi, -1.0, 1.0).and_then(|l| tilted_plemelj(&f, &l)).map(|r| r.lambda_route_mismatch) != Ok(want)
        })
        .count();

    let phis: Vec<f64> = (0..=20).map(|k| -FRAC_PI_2 + 0.1 + (PI - 0.2) * k as f64 / 20.0).collect();
    let jump = measure(phis.iter().try_fold(0.0f64, |acc, &phi| {
        let dq = 1e-9;
        let grid = (-3..=3).map(|i| arg_regularized(i as f64 * dq, phi, 1e-2)).collect::<plemelj_core::Result<Vec<_>>>()?;
        Ok(grid.windows(2).map(|w| (w[1] - w[0]).abs()).fold(acc, f64::max))
    }));
    let limit = measure(phis.iter().try_fold(0.0f64, |acc, &phi| {
        let mut worst = acc;
        for i in 0..=100 {
            let mag = 0.01 * 500f64.powf(i as f64 / 100.0);
            for q in [mag, -mag] {
                worst = worst.max((arg_regularized(q, phi, 1e-9)? - arg_limit(q, phi)?).abs());
            }
        }
        Ok(worst)
    }));

    vec![
        check(Suite::Tilted, "tilted_plemelj = -i plemelj_plus, phi in {-pi/8, 0, pi/8}", consistency, 1e-6),
        check(Suite::Tilted, "mismatch flag at phi = +-(pi/4 +- 0.05), wrong flags", wrong_flags as f64, 0.0),
        check(Suite::Tilted, "arg continuity across q = 0", jump, 1e-6),
        check(Suite::Tilted, "arg limit on |q| >= 0.01", limit, 1e-6),
    ]
}

fn check(suite: Suite, name: &str, measured: f64, tol: f64) -> Check {
    Check { suite: suite.name(), name: name.to_string(), measured, tol }
}

/// Runs the checks of `suite` in a fixed order.
pub fn run_verify(suite: Suite) -> Vec<Check> {
    suite
        .parts()
        .into_iter()
        .flat_map(|s| match s {
            Suite::Special => special(),
            Suite::Kernels => kernels(),
            Suite::Plemelj => plemelj(),
            Suite::Tilted => tilted(),
            Suite::All => unreachable!(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_oracle() {
        assert!((erfc_one_series() - 0.157_299_207_050_285_13).abs() < 1e-16);
    }

    #[test]
    fn nan_fails() {
        assert!(!check(Suite::Special, "x", f64::NAN, 1.0).passed());
        assert!(check(Suite::Special, "x", 0.0, 0.0).passed());
    }

    #[test]
    fn special_suite_passes() {
        for c in run_verify(Suite::Special) {
            assert!(c.passed(), "{c}");
        }
    }
}
