//! Globally adaptive Gauss-Kronrod (10/21) quadrature for complex integrands of a
//! real parameter, and polynomial extrapolation of a ladder of estimates to zero.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const MAX_INTERVALS: usize = 4000;

/// Requested accuracy: the estimate is accepted once `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-15, 1e-13)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

impl Integral {
    pub fn zero() -> Self {
        Integral { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 }
    }
}

impl std::ops::Add for Integral {
    type Output = Integral;
    fn add(self, rhs: Integral) -> Integral {
        Integral {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
            evaluations: self.evaluations + rhs.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut kronrod = fc * WGK[10];
    let mut res_abs = fc.norm() * WGK[10];
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let abs_half = half.abs();
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Piece { a, b, value: kronrod * half, error }
}

/// Integrates `f` over the union of consecutive intervals given by `breakpoints`
/// (ascending, at least two entries).
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, breakpoints: &[f64], tol: Tolerance) -> Result<Integral> {
    debug_assert!(breakpoints.len() >= 2);
    let mut heap: BinaryHeap<Piece> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod21(&f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * heap.len();
    loop {
        let value: Complex64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite("integrand"));
        }
        if error <= tol.abs.max(tol.rel * value.norm()) {
            return Ok(Integral { value, error, evaluations });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => return Ok(Integral::zero()),
        };
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() >= MAX_INTERVALS || !(worst.a < mid && mid < worst.b) {
            heap.push(worst);
            let error: f64 = heap.iter().map(|p| p.error).sum();
            // roundoff-limited: accept if within a few orders of the request
            if error <= 1e3 * tol.abs.max(tol.rel * value.norm()) {
                return Ok(Integral { value, error, evaluations });
            }
            return Err(Error::QuadratureNotConverged { error, evaluations });
        }
        heap.push(kronrod21(&f, worst.a, mid));
        heap.push(kronrod21(&f, mid, worst.b));
        evaluations += 42;
    }
}

/// Limit estimate produced by [`extrapolate_to_zero`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: Complex64,
    pub error: f64,
}

/// Neville extrapolation of the samples `(x_k, y_k)` to `x = 0`.
///
/// Returns the diagonal tableau entry whose difference to its predecessor is
/// smallest, with that difference as the error estimate.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64]) -> Extrapolated {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let n = xs.len();
    let mut table: Vec<Complex64> = ys.to_vec();
    let mut best = Extrapolated { value: ys[n - 1], error: f64::INFINITY };
    let mut prev_diag = ys[n - 1];
    if n >= 2 {
        best.error = (ys[n - 1] - ys[n - 2]).norm();
    }
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xim) = (xs[i], xs[i + m]);
            table[i] = (table[i + 1] * xi - table[i] * xim) / (xi - xim);
        }
        let diag = table[n - m - 1];
        let err = (diag - prev_diag).norm();
        if err < best.error {
            best = Extrapolated { value: diag, error: err };
        }
        prev_diag = diag;
    }
    best
}
