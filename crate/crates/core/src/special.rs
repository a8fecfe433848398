//! Complementary error function of complex argument.
//!
//! Two identities from the Abramowitz-Stegun handbook anchor this module:
//!
//! ```text
//! (7.1.2)   erfc(w) = (2/sqrt(pi)) * integral_w^inf exp(-t^2) dt
//! (7.1.23)  sqrt(pi) * w * exp(w^2) * erfc(w) ~ 1 + sum_m (-1)^m (1*3*...*(2m-1)) / (2 w^2)^m,
//!           |w| -> inf, |arg w| < 3 pi / 4
//! ```
//!
//! Everything is evaluated through the scaled function `erfcx(w) = exp(w^2) erfc(w)`
//! on the closed right half-plane, where it is bounded. Three regions are used there:
//! a Taylor series near the origin, Weideman's rational expansion in the middle band
//! and the Laplace continued fraction far out. The left half-plane follows from the
//! reflection `erfc(-w) = 2 - erfc(w)`, which is also where `exp(w^2)` can leave the
//! range of `f64`; that case comes back as [`Tagged::Overflow`].

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

pub(crate) const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_948_079_451_560_772_586;

/// `ln(f64::MAX)`.
pub const LN_MAX: f64 = 709.782_712_893_384;

const SERIES_RADIUS: f64 = 0.5;
const SERIES_TERMS: usize = 32;
const FRACTION_RADIUS: f64 = 50.0;
const FRACTION_DEPTH: usize = 16;
const RATIONAL_TERMS: usize = 40;

/// A complex value that may be too large for `f64`.
///
/// Overflowed values keep their logarithmic magnitude and phase so that callers can
/// still compare and rank them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tagged {
    Finite(Complex64),
    Overflow { ln_abs: f64, arg: f64 },
}

impl Tagged {
    fn from_ln_polar(ln_abs: f64, arg: f64) -> Self {
        if ln_abs < LN_MAX {
            Tagged::Finite(Complex64::from_polar(ln_abs.exp(), arg))
        } else {
            Tagged::Overflow { ln_abs, arg }
        }
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            Tagged::Finite(v) => Some(v),
            Tagged::Overflow { .. } => None,
        }
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self, Tagged::Overflow { .. })
    }

    /// `|value|`, or `+inf` for an overflowed value.
    pub fn abs(&self) -> f64 {
        match self {
            Tagged::Finite(v) => v.norm(),
            Tagged::Overflow { .. } => f64::INFINITY,
        }
    }

    pub fn ln_abs(&self) -> f64 {
        match self {
            Tagged::Finite(v) => v.norm().ln(),
            Tagged::Overflow { ln_abs, .. } => *ln_abs,
        }
    }

    pub fn conj(self) -> Self {
        match self {
            Tagged::Finite(v) => Tagged::Finite(v.conj()),
            Tagged::Overflow { ln_abs, arg } => Tagged::Overflow { ln_abs, arg: -arg },
        }
    }

    /// Multiplies by a finite complex factor.
    pub fn scale(self, factor: Complex64) -> Self {
        match self {
            Tagged::Finite(v) => {
                let p = v * factor;
                if p.re.is_finite() && p.im.is_finite() {
                    Tagged::Finite(p)
                } else {
                    Tagged::from_ln_polar(v.norm().ln() + factor.norm().ln(), v.arg() + factor.arg())
                }
            }
            Tagged::Overflow { ln_abs, arg } => {
                Tagged::from_ln_polar(ln_abs + factor.norm().ln(), arg + factor.arg())
            }
        }
    }

    /// `2 - self`.
    fn reflect(self) -> Self {
        match self {
            Tagged::Finite(v) => Tagged::Finite(Complex64::new(2.0, 0.0) - v),
            Tagged::Overflow { ln_abs, arg } => Tagged::Overflow { ln_abs, arg: arg + PI },
        }
    }
}

/// `exp(sign * w^2 + ln_scale)`, with `w^2` formed in double-double so that the
/// exponent carries no cancellation error near the diagonals `|Re w| = |Im w|`.
pub(crate) fn exp_square(w: Complex64, sign: f64, ln_scale: f64) -> Tagged {
    let (x, y) = (w.re, w.im);
    let x2 = x * x;
    let ex = x.mul_add(x, -x2);
    let y2 = y * y;
    let ey = y.mul_add(y, -y2);
    let re_hi = x2 - y2;
    let bb = re_hi - x2;
    let re_lo = (x2 - (re_hi - bb)) + (-y2 - bb) + (ex - ey);
    let xy = x * y;
    let exy = x.mul_add(y, -xy);
    let (im_hi, im_lo) = (2.0 * xy, 2.0 * exy);

    let ln_abs = sign * (re_hi + re_lo) + ln_scale;
    let (s, c) = (sign * im_hi).sin_cos();
    let d = sign * im_lo;
    let phase = Complex64::new(c - d * s, s + d * c);
    if ln_abs < LN_MAX {
        Tagged::Finite(phase * (sign * re_hi + ln_scale).exp() * (sign * re_lo).exp())
    } else {
        Tagged::Overflow { ln_abs, arg: phase.arg() }
    }
}

fn series_coefficients() -> &'static [f64; SERIES_TERMS] {
    static COEFFS: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        // 1 / Gamma(n/2 + 1)
        let mut c = [0.0; SERIES_TERMS];
        c[0] = 1.0;
        c[1] = 2.0 * FRAC_1_SQRT_PI;
        for n in 2..SERIES_TERMS {
            c[n] = c[n - 2] / (n as f64 / 2.0);
        }
        c
    })
}

struct Rational {
    half_width: f64,
    coeffs: [f64; RATIONAL_TERMS],
}

fn rational() -> &'static Rational {
    static TABLE: OnceLock<Rational> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = RATIONAL_TERMS;
        let m = 2 * n;
        let half_width = (n as f64 / 2f64.sqrt()).sqrt();
        let samples: Vec<(f64, f64)> = (-(m as i64) + 1..m as i64)
            .map(|k| {
                let theta = k as f64 * PI / m as f64;
                let t = half_width * (theta / 2.0).tan();
                (k as f64, (-t * t).exp() * (half_width * half_width + t * t))
            })
            .collect();
        let mut coeffs = [0.0; RATIONAL_TERMS];
        // Cosine transform of the samples; highest order first for Horner.
        for j in 1..=n {
            let a: f64 = samples
                .iter()
                .map(|&(k, f)| f * (PI * j as f64 * k / m as f64).cos())
                .sum();
            coeffs[n - j] = a / (2 * m) as f64;
        }
        Rational { half_width, coeffs }
    })
}

fn taylor(w: Complex64) -> Complex64 {
    let c = series_coefficients();
    let minus_w = -w;
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &cn| acc * minus_w + cn)
}

/// Weideman's rational series for the Faddeeva function `exp(-z^2) erfc(-iz)`, `Im z >= 0`.
fn faddeeva_rational(z: Complex64) -> Complex64 {
    let table = rational();
    let l = Complex64::new(table.half_width, 0.0);
    let iz = Complex64::i() * z;
    let denom = l - iz;
    let zz = (l + iz) / denom;
    let p = table
        .coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * zz + a);
    2.0 * p / (denom * denom) + FRAC_1_SQRT_PI / denom
}

/// Laplace continued fraction `1/sqrt(pi) / (w + (1/2)/(w + 1/(w + (3/2)/(w + ...))))`.
fn continued_fraction(w: Complex64) -> Complex64 {
    let mut t = w;
    for k in (1..=FRACTION_DEPTH).rev() {
        t = w + (k as f64 * 0.5) / t;
    }
    FRAC_1_SQRT_PI / t
}

/// `exp(w^2) erfc(w)` for `Re w >= 0`, where it is bounded by 1.
fn erfcx_right(w: Complex64) -> Complex64 {
    let r = w.norm();
    if r < SERIES_RADIUS {
        taylor(w)
    } else if r <= FRACTION_RADIUS {
        faddeeva_rational(Complex64::i() * w)
    } else {
        continued_fraction(w)
    }
}

fn non_finite() -> Tagged {
    Tagged::Finite(Complex64::new(f64::NAN, f64::NAN))
}

/// Scaled complementary error function `exp(w^2) * erfc(w)`.
///
/// Finite everywhere except deep in the sector `|arg w| > 3 pi / 4`, where
/// `exp(w^2)` itself leaves the range of `f64`.
pub fn erfcx(w: Complex64) -> Tagged {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return non_finite();
    }
    if w.im < 0.0 {
        return erfcx(w.conj()).conj();
    }
    if w.re >= 0.0 {
        return Tagged::Finite(erfcx_right(w));
    }
    let tail = erfcx_right(-w);
    match exp_square(w, 1.0, LN_2) {
        Tagged::Finite(e) => Tagged::Finite(e - tail),
        overflow => overflow,
    }
}

/// Complementary error function `erfc(w)`.
pub fn erfc(w: Complex64) -> Tagged {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return non_finite();
    }
    if w.im < 0.0 {
        return erfc(w.conj()).conj();
    }
    if w.re < 0.0 {
        return erfc(-w).reflect();
    }
    exp_square(w, -1.0, 0.0).scale(erfcx_right(w))
}

/// `sqrt(pi) * w * erfcx(w)`, the factor whose large-`|w|` limit decides the
/// fate of the regularized kernel.
pub fn asymptotic_factor(w: Complex64) -> Tagged {
    erfcx(w).scale(w * PI.sqrt())
}
