//! Shared inputs for the criterion benchmarks under `benches/`.

use num_complex::Complex64;
use plemelj_core::{Contour, TestFunction};

/// Points spread over the regimes of the Faddeeva evaluator: Taylor disc,
/// rational region, continued-fraction tail and the reflected half-plane.
pub fn erfc_points() -> Vec<Complex64> {
    [(0.1, 0.2), (1.5, -0.7), (-3.0, 2.0), (4.0, 6.0), (-20.0, -35.0), (60.0, 10.0), (0.0, -4.0), (-7.5, 0.3)]
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect()
}

/// `(z, λ)` pairs off the real axis and below it, where the direct route changes shape.
pub fn kernel_pairs() -> Vec<(Complex64, f64)> {
    vec![
        (Complex64::new(2.0, 0.5), 0.1),
        (Complex64::new(-1.0, 1.5), 1e-2),
        (Complex64::new(0.7, -0.4), 0.5),
        (Complex64::new(1.0, -3.0), 1e-2),
    ]
}

pub fn real_segment() -> Contour {
    Contour::segment(Complex64::new(-3.0, 0.0), Complex64::new(3.0, 0.0)).expect("valid segment")
}

pub fn bent_path() -> Contour {
    let p = |re, im| Complex64::new(re, im);
    Contour::polyline(&[p(-2.0, 0.0), p(-0.5, 0.4), p(0.0, 0.0), p(0.5, 0.4), p(2.0, 0.0)]).expect("valid polyline")
}

pub fn test_function() -> TestFunction {
    TestFunction::poly_gauss(1, 0.3)
}
