//! Distributions acting on analytic test functions along complex paths:
//! `⟨I(z), f⟩ = i PV∫ f/z + π f(0)`, `⟨I(-z), f⟩ = -i PV∫ f/z + π f(0)` and their sum
//! `⟨2πδ, f⟩`, each with an independent `λ → 0⁺` route through the regularized kernels.

use crate::contour::{path_in_domain, Contour, IntegrationOptions, PathMembership, Segment, Side, WedgeDomain};
use crate::error::{Error, Result};
use crate::kernels::{full_line_kernel, half_line_kernel};
use crate::quadrature::{extrapolate_to_zero, Extrapolated, Tolerance};
use crate::special::Tagged;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::f64::consts::{FRAC_PI_4, PI};
use std::str::FromStr;
use std::sync::Arc;

/// Number of ε values in the principal-value ladder.
pub const PV_STEPS: usize = 8;
/// Number of λ values in the regularized-kernel ladder.
pub const LAMBDA_STEPS: usize = 7;
pub const LAMBDA_START: f64 = 1e-2;
/// Relative tolerance (with an absolute floor) at which two routes are said to agree.
pub const ROUTE_RTOL: f64 = 1e-5;
pub const ROUTE_ATOL: f64 = 1e-8;

const VALUE_AT_ZERO_TOL: f64 = 1e-10;
const ANALYTIC_TOL: f64 = 1e-6;
const ANALYTIC_SAMPLES: usize = 20;
const PV_EXTRAPOLATION_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// How fast a test function decays, which decides whether it may be integrated
/// along paths with infinite rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    /// Only meant for finite paths.
    CompactlySupportedPath,
    GaussianDecay,
    PolynomialBounded,
}

impl DecayClass {
    fn rank(self) -> u8 {
        match self {
            DecayClass::GaussianDecay => 0,
            DecayClass::PolynomialBounded => 1,
            DecayClass::CompactlySupportedPath => 2,
        }
    }
}

type Eval = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// An analytic function handle with the metadata the functionals need.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    eval: Eval,
    value_at_zero: Option<Complex64>,
    decay: DecayClass,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("value_at_zero", &self.value_at_zero)
            .field("decay", &self.decay)
            .finish()
    }
}

impl TestFunction {
    pub fn new<F>(name: impl Into<String>, decay: DecayClass, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        TestFunction { name: name.into(), eval: Arc::new(f), value_at_zero: None, decay }
    }

    pub fn with_value_at_zero(mut self, v: Complex64) -> Self {
        self.value_at_zero = Some(v);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    /// `f(0)`: the declared value when present, after checking it against evaluation.
    pub fn value_at_zero(&self) -> Result<Complex64> {
        let evaluated = self.eval(c(0.0, 0.0));
        match self.value_at_zero {
            None => Ok(evaluated),
            Some(declared) => {
                if (declared - evaluated).norm() <= VALUE_AT_ZERO_TOL * declared.norm().max(1.0) {
                    Ok(declared)
                } else {
                    Err(Error::ValueAtZeroMismatch { declared: declared.to_string(), evaluated: evaluated.to_string() })
                }
            }
        }
    }

    /// `e^{-(z-a)²}`.
    pub fn gauss(a: f64) -> Self {
        TestFunction::new(format!("gauss({a})"), DecayClass::GaussianDecay, move |z| {
            let d = z - a;
            (-d * d).exp()
        })
        .with_value_at_zero(c((-a * a).exp(), 0.0))
    }

    /// `zⁿ e^{-(z-a)²}`.
    pub fn poly_gauss(n: u32, a: f64) -> Self {
        let f0 = if n == 0 { (-a * a).exp() } else { 0.0 };
        TestFunction::new(format!("poly_gauss({n},{a})"), DecayClass::GaussianDecay, move |z| {
            let d = z - a;
            z.powu(n) * (-d * d).exp()
        })
        .with_value_at_zero(c(f0, 0.0))
    }

    /// `cos(z) e^{-z²}`.
    pub fn cos_gauss() -> Self {
        TestFunction::new("cos_gauss", DecayClass::GaussianDecay, |z| z.cos() * (-z * z).exp())
            .with_value_at_zero(c(1.0, 0.0))
    }

    pub fn one() -> Self {
        TestFunction::new("one", DecayClass::PolynomialBounded, |_| c(1.0, 0.0)).with_value_at_zero(c(1.0, 0.0))
    }

    /// Names understood by [`TestFunction::parse`].
    pub fn catalog() -> &'static [&'static str] {
        &["one", "gauss(a)", "poly_gauss(n,a)", "cos_gauss"]
    }

    /// Looks a function up in the built-in catalog.
    pub fn parse(spec: &str) -> Result<Self> {
        let s: String = spec.chars().filter(|ch| !ch.is_whitespace()).collect();
        let unknown = || Error::UnknownFunction(spec.to_string());
        if s == "one" {
            return Ok(TestFunction::one());
        }
        if s == "cos_gauss" {
            return Ok(TestFunction::cos_gauss());
        }
        let (head, rest) = s.split_once('(').ok_or_else(unknown)?;
        let args: Vec<&str> = rest.strip_suffix(')').ok_or_else(unknown)?.split(',').collect();
        let real = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(unknown);
        match (head, args.as_slice()) {
            ("gauss", [a]) => Ok(TestFunction::gauss(real(a)?)),
            ("poly_gauss", [n, a]) => Ok(TestFunction::poly_gauss(n.parse().map_err(|_| unknown())?, real(a)?)),
            _ => Err(unknown()),
        }
    }

    /// `Σ c_k f_k`.
    pub fn linear_combination(terms: &[(Complex64, TestFunction)]) -> Self {
        let parts: Vec<(Complex64, Eval)> = terms.iter().map(|(k, f)| (*k, f.eval.clone())).collect();
        let decay = terms
            .iter()
            .map(|(_, f)| f.decay)
            .max_by_key(|d| d.rank())
            .unwrap_or(DecayClass::GaussianDecay);
        let declared: Option<Complex64> = terms.iter().map(|(k, f)| f.value_at_zero.map(|v| k * v)).sum();
        let name = terms.iter().map(|(k, f)| format!("({k})*{}", f.name)).collect::<Vec<_>>().join(" + ");
        let mut out = TestFunction::new(name, decay, move |z| parts.iter().map(|(k, g)| k * g(z)).sum());
        out.value_at_zero = declared;
        out
    }

    /// Cauchy-Riemann spot check at points spread along `path`; returns the worst
    /// residual `|∂f/∂x - ∂f/∂(iy)| / (1 + |∂f/∂x|)`.
    pub fn check_analytic(&self, path: &Contour) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for z in sample_points(path, ANALYTIC_SAMPLES) {
            let h = 1e-4 * z.norm().max(1.0);
            let dx = (self.eval(z + h) - self.eval(z - h)) / (2.0 * h);
            let dy = (self.eval(z + c(0.0, h)) - self.eval(z - c(0.0, h))) / c(0.0, 2.0 * h);
            let r = (dx - dy).norm() / (1.0 + dx.norm());
            if !r.is_finite() {
                return Err(Error::NonFinite("test function"));
            }
            worst = worst.max(r);
        }
        if worst > ANALYTIC_TOL {
            Err(Error::NotAnalytic { residual: worst })
        } else {
            Ok(worst)
        }
    }

    fn admissible_on(&self, path: &Contour) -> Result<()> {
        if !path.is_finite() && self.decay != DecayClass::GaussianDecay {
            return Err(Error::NotIntegrable(self.name.clone()));
        }
        Ok(())
    }
}

/// `n` points spread along the path, rays cut at distance 4 from their anchor.
fn sample_points(path: &Contour, n: usize) -> Vec<Complex64> {
    let segs = path.segments();
    (0..n)
        .map(|k| {
            let u = (k as f64 + 0.5) / n as f64 * segs.len() as f64;
            let i = (u as usize).min(segs.len() - 1);
            let t = u - i as f64;
            match segs[i] {
                Segment::Ray { anchor, angle, inbound } => {
                    let s = if inbound { 4.0 * (1.0 - t) } else { 4.0 * t };
                    anchor + Complex64::from_polar(s, angle)
                }
                s => s.point(t),
            }
        })
        .collect()
}

/// Which distribution acts on the test function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    /// `I(z) = i/(z + i0⁺)`, for paths in `D+`.
    #[serde(rename = "I_plus")]
    IPlus,
    /// `I(-z) = -i/(z - i0⁺)`, for paths in `D-`.
    #[serde(rename = "I_minus")]
    IMinus,
    /// `I(z) + I(-z) = 2πδ(z)`, for paths in `D`.
    #[serde(rename = "delta")]
    Delta,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::IPlus => "I_plus",
            Kernel::IMinus => "I_minus",
            Kernel::Delta => "delta",
        }
    }

    pub fn domain(self) -> WedgeDomain {
        match self {
            Kernel::IPlus => WedgeDomain::plus(),
            Kernel::IMinus => WedgeDomain::minus(),
            Kernel::Delta => WedgeDomain::intersection(),
        }
    }
}

impl FromStr for Kernel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "I_plus" => Ok(Kernel::IPlus),
            "I_minus" => Ok(Kernel::IMinus),
            "delta" => Ok(Kernel::Delta),
            _ => Err(format!("unknown kernel `{s}` (expected I_plus, I_minus or delta)")),
        }
    }
}

/// A functional value split into its principal-value and delta contributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalResult {
    pub value: Complex64,
    pub pv_part: Complex64,
    pub delta_part: Complex64,
    /// `(ε, partial value)` pairs of the excision ladder.
    pub epsilon_trace: Vec<(f64, Complex64)>,
    /// Extrapolation error estimate of the principal value.
    pub pv_error: f64,
}

/// Principal value along a path together with its excision ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalValue {
    pub value: Complex64,
    pub error: f64,
    pub trace: Vec<(f64, Complex64)>,
}

fn pv_ladder(path: &Contour) -> Result<Vec<f64>> {
    let geo = path.crossing_geometry()?;
    let eps0 = 0.1 * geo.shorter_arm().min(1.0);
    Ok((0..PV_STEPS).map(|k| eps0 * 0.5f64.powi(k as i32)).collect())
}

/// `∫ g(z)/z dz` over the path with `|z| < ε` cut out, for every ε of the ladder.
/// The ladder is built incrementally: the widest excision once, then the thin
/// annular pieces between consecutive ε on both arms.
fn excision_trace<G: Fn(Complex64) -> Complex64>(g: &G, path: &Contour, ladder: &[f64]) -> Result<Vec<(f64, Complex64)>> {
    let geo = path.crossing_geometry()?;
    let opts = IntegrationOptions::default();
    let h = |z: Complex64| g(z) / z;
    let (before, after) = path.excise(ladder[0])?;
    let mut acc = before.integrate(h, &opts)?.value + after.integrate(h, &opts)?.value;
    let mut trace = vec![(ladder[0], acc)];
    for w in ladder.windows(2) {
        let (outer, inner) = (w[0], w[1]);
        let arm_in = Segment::line(geo.incoming * outer, geo.incoming * inner);
        let arm_out = Segment::line(geo.outgoing * inner, geo.outgoing * outer);
        acc += arm_in.integrate(&h, &opts)?.value + arm_out.integrate(&h, &opts)?.value;
        trace.push((inner, acc));
    }
    Ok(trace)
}

fn cauchy_check(trace: &[(f64, Complex64)]) -> Result<()> {
    let n = trace.len();
    if n < 3 {
        return Ok(());
    }
    let scale = trace.iter().map(|p| p.1.norm()).fold(1.0, f64::max);
    let diffs: Vec<f64> = trace.windows(2).map(|w| (w[1].1 - w[0].1).norm()).collect();
    let m = diffs.len();
    let noise = 1e-13 * scale;
    if diffs[m - 1] <= diffs[m - 2] + noise && diffs[m - 2] <= diffs[m - 3].max(diffs[m - 2]) + noise && diffs[m - 1] <= diffs[m - 3] + noise {
        Ok(())
    } else {
        Err(Error::PvDivergence(diffs[m.saturating_sub(3)..].to_vec()))
    }
}

fn extrapolate_trace(trace: &[(f64, Complex64)]) -> Extrapolated {
    let xs: Vec<f64> = trace.iter().map(|p| p.0).collect();
    let ys: Vec<Complex64> = trace.iter().map(|p| p.1).collect();
    extrapolate_to_zero(&xs, &ys)
}

/// `PV ∫_Γ f(z)/z dz`, the symmetric-excision limit at the marked crossing.
pub fn pv_contour(f: &TestFunction, path: &Contour) -> Result<PrincipalValue> {
    f.admissible_on(path)?;
    let ladder = pv_ladder(path)?;
    let trace = excision_trace(&|z| f.eval(z), path, &ladder)?;
    cauchy_check(&trace)?;
    let ex = extrapolate_trace(&trace);
    if ex.error.is_nan() || ex.error > PV_EXTRAPOLATION_TOL * ex.value.norm().max(1.0) {
        return Err(Error::Extrapolation(ex.error));
    }
    Ok(PrincipalValue { value: ex.value, error: ex.error, trace })
}

fn require_domain(path: &Contour, kernel: Kernel) -> Result<()> {
    let domain = kernel.domain();
    match path_in_domain(path, &domain)? {
        PathMembership::InsideExceptCrossing => Ok(()),
        PathMembership::FullyInside => Err(Error::MissingCrossing),
        PathMembership::Violates { segment } => Err(Error::DomainViolation { domain: domain.kind.name(), segment }),
    }
}

fn signed(pv: &PrincipalValue, f0: Complex64, kernel: Kernel, path: &Contour) -> Result<FunctionalResult> {
    let geo = path.crossing_geometry()?;
    let (coef, delta_part) = match kernel {
        Kernel::IPlus => (Complex64::i(), -geo.sweep(Side::Above) * f0),
        Kernel::IMinus => (-Complex64::i(), geo.sweep(Side::Below) * f0),
        Kernel::Delta => (c(0.0, 0.0), (geo.sweep(Side::Below) - geo.sweep(Side::Above)) * f0),
    };
    let pv_part = coef * pv.value;
    let epsilon_trace = pv.trace.iter().map(|&(e, v)| (e, coef * v)).collect();
    Ok(FunctionalResult { value: pv_part + delta_part, pv_part, delta_part, epsilon_trace, pv_error: pv.error })
}

/// `⟨I(z), f⟩ = i PV∫ f/z dz + θ f(0)` where θ is the opening angle the upper
/// deformation sweeps around the crossing (`π` for a straight crossing).
pub fn plemelj_plus(f: &TestFunction, path: &Contour) -> Result<FunctionalResult> {
    functional(Kernel::IPlus, f, path)
}

/// `⟨I(-z), f⟩ = -i PV∫ f/z dz + θ f(0)` with θ swept by the lower deformation.
pub fn plemelj_minus(f: &TestFunction, path: &Contour) -> Result<FunctionalResult> {
    functional(Kernel::IMinus, f, path)
}

/// `⟨2πδ, f⟩` along a path in `D` crossing from the left half-plane to the right.
pub fn delta_action(f: &TestFunction, path: &Contour) -> Result<FunctionalResult> {
    functional(Kernel::Delta, f, path)
}

fn check_orientation(path: &Contour) -> Result<()> {
    let geo = path.crossing_geometry()?;
    if geo.incoming.re < 0.0 && geo.outgoing.re > 0.0 {
        Ok(())
    } else {
        Err(Error::Orientation)
    }
}

/// Evaluates the functional of `kernel` on `f` along `path` by the formula route.
pub fn functional(kernel: Kernel, f: &TestFunction, path: &Contour) -> Result<FunctionalResult> {
    require_domain(path, kernel)?;
    if kernel == Kernel::Delta {
        check_orientation(path)?;
    }
    let f0 = f.value_at_zero()?;
    let pv = pv_contour(f, path)?;
    signed(&pv, f0, kernel, path)
}

/// Limit of `∫ k(z) f(z) dz` over the path deformed by an arc of radius ε, with
/// `k = i/z` (above) for `I_plus`, `-i/z` (below) for `I_minus` and their sum
/// for `delta`. The arc is integrated numerically.
pub fn semicircle_route(kernel: Kernel, f: &TestFunction, path: &Contour) -> Result<Extrapolated> {
    f.admissible_on(path)?;
    let geo = path.crossing_geometry()?;
    let ladder = pv_ladder(path)?;
    let opts = IntegrationOptions::default();
    let trace = excision_trace(&|z| f.eval(z), path, &ladder)?;
    let arc = |eps: f64, side: Side, coef: Complex64| -> Result<Complex64> {
        let seg = Segment::Arc { center: c(0.0, 0.0), start: geo.incoming * eps, sweep: geo.sweep(side) };
        Ok(coef * seg.integrate(&|z: Complex64| f.eval(z) / z, &opts)?.value)
    };
    let points: Result<Vec<(f64, Complex64)>> = trace
        .iter()
        .map(|&(eps, v)| {
            let total = match kernel {
                Kernel::IPlus => Complex64::i() * v + arc(eps, Side::Above, Complex64::i())?,
                Kernel::IMinus => -Complex64::i() * v + arc(eps, Side::Below, -Complex64::i())?,
                Kernel::Delta => arc(eps, Side::Above, Complex64::i())? + arc(eps, Side::Below, -Complex64::i())?,
            };
            Ok((eps, total))
        })
        .collect();
    Ok(extrapolate_trace(&points?))
}

/// The regularization ladder `λ_k = 10⁻² · 4^{-k}` used by the λ routes.
pub fn lambda_ladder() -> Vec<f64> {
    (0..LAMBDA_STEPS).map(|k| LAMBDA_START * 0.25f64.powi(k as i32)).collect()
}

fn finite(t: Tagged) -> Result<Complex64> {
    t.finite().ok_or(Error::Overflow { ln_abs: t.ln_abs() })
}

/// `∫_Γ k(z, λ) f(z) dz` at a single λ with the regularized kernel of `kernel`.
pub fn regularized_integral(kernel: Kernel, f: &TestFunction, path: &Contour, lambda: f64) -> Result<Complex64> {
    f.admissible_on(path)?;
    let tol = Tolerance::new(1e-15, 1e-13);
    let opts = IntegrationOptions::default().with_tol(tol).with_focus(c(0.0, 0.0), lambda.sqrt());
    let eval_err = std::cell::Cell::new(None);
    let g = |z: Complex64| {
        let k = match kernel {
            Kernel::IPlus => half_line_kernel(z, lambda),
            Kernel::IMinus => half_line_kernel(-z, lambda),
            Kernel::Delta => full_line_kernel(z, lambda),
        }
        .and_then(finite);
        match k {
            Ok(k) => k * f.eval(z),
            Err(e) => {
                eval_err.set(Some(e));
                c(f64::NAN, f64::NAN)
            }
        }
    };
    let r = path.integrate(g, &opts);
    if let Some(e) = eval_err.take() {
        return Err(e);
    }
    Ok(r?.value)
}

/// Limit `λ → 0⁺` of [`regularized_integral`], extrapolated in `√λ`.
pub fn lambda_route(kernel: Kernel, f: &TestFunction, path: &Contour) -> Result<Extrapolated> {
    let lambdas = lambda_ladder();
    let ys: Result<Vec<Complex64>> = lambdas.iter().map(|&l| regularized_integral(kernel, f, path, l)).collect();
    let xs: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    Ok(extrapolate_to_zero(&xs, &ys?))
}

/// Outcome of comparing the formula route against the independent routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteComparison {
    pub formula_route: Complex64,
    pub lambda_route: Complex64,
    pub lambda_error: f64,
    pub semicircle_route: Complex64,
    /// `|lambda_route - formula_route|`.
    pub difference: f64,
    pub agree: bool,
}

/// Runs the formula route and both verification routes.
pub fn cross_check(kernel: Kernel, f: &TestFunction, path: &Contour) -> Result<(FunctionalResult, RouteComparison)> {
    let formula = functional(kernel, f, path)?;
    let lam = lambda_route(kernel, f, path)?;
    let semi = semicircle_route(kernel, f, path)?;
    let difference = (lam.value - formula.value).norm();
    let semi_diff = (semi.value - formula.value).norm();
    let bound = ROUTE_ATOL.max(ROUTE_RTOL * formula.value.norm());
    let agree = difference <= bound && semi_diff <= bound;
    let cmp = RouteComparison {
        formula_route: formula.value,
        lambda_route: lam.value,
        lambda_error: lam.error,
        semicircle_route: semi.value,
        difference,
        agree,
    };
    Ok((formula, cmp))
}

/// Regularized plane-wave overlap `⟨z₂|z₁⟩_λ = ∫ e^{-λx²} e^{i(z₁ - z₂)x} dx`.
pub fn overlap_kernel(z1: Complex64, z2: Complex64, lambda: f64) -> Result<Tagged> {
    full_line_kernel(z1 - z2, lambda)
}

/// Every tangent of the path must have slope angle in `(-π/4, π/4)` so that all
/// differences of path points stay inside `D`.
pub fn check_slope(path: &Contour) -> Result<()> {
    for (i, seg) in path.segments().iter().enumerate() {
        let ts: Vec<f64> = match seg {
            Segment::Arc { .. } => (0..=64).map(|k| k as f64 / 64.0).collect(),
            _ => vec![0.0],
        };
        for t in ts {
            let d = seg.tangent(t);
            // slope of the undirected line
            let angle = (d.im / d.re).atan();
            if !(d.re != 0.0 && angle.abs() < FRAC_PI_4) {
                return Err(Error::SlopeViolation { segment: i, angle: d.im.atan2(d.re) });
            }
        }
    }
    Ok(())
}

/// Smeared orthogonality: `lim_{λ→0⁺} ∫_Υ ⟨z₂|z₁⟩_λ f(z₁) dz₁`, which approaches
/// `2π f(z₂)` for `z₂` on a path `Υ` of bounded slope.
pub fn overlap_delta(z2: Complex64, f: &TestFunction, path: &Contour) -> Result<Extrapolated> {
    check_slope(path)?;
    f.admissible_on(path)?;
    if path.locate(z2, 1e-12 * z2.norm().max(1.0)).is_none() {
        return Err(Error::NotOnPath(z2.to_string()));
    }
    let lambdas = lambda_ladder();
    let tol = Tolerance::new(1e-15, 1e-13);
    let ys: Result<Vec<Complex64>> = lambdas
        .iter()
        .map(|&l| {
            let opts = IntegrationOptions::default().with_tol(tol).with_focus(z2, l.sqrt());
            let scale = (PI / l).sqrt();
            let w = 1.0 / (4.0 * l);
            // the kernel never overflows here since the path slope keeps Re((z1 - z2)²) >= 0
            Ok(path.integrate(|z| { let d = z - z2; (-d * d * w).exp() * scale * f.eval(z) }, &opts)?.value)
        })
        .collect();
    let xs: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    Ok(extrapolate_to_zero(&xs, &ys?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: f64, b: f64) -> Contour {
        Contour::segment(c(a, 0.0), c(b, 0.0)).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    /// Shi(1) = Σ 1 / ((2k+1) (2k+1)!)
    fn shi_one() -> f64 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 0..20 {
            let n = 2 * k + 1;
            if k > 0 {
                fact *= ((n - 1) * n) as f64;
            }
            sum += 1.0 / (n as f64 * fact);
        }
        sum
    }

    #[test]
    fn pv_examples() {
        let p = seg(-1.0, 1.0);
        assert!(pv_contour(&TestFunction::one(), &p).unwrap().value.norm() < 1e-14);
        let id = TestFunction::new("z", DecayClass::PolynomialBounded, |z| z);
        assert!(close(pv_contour(&id, &p).unwrap().value, c(2.0, 0.0), 1e-13));
        let exp = TestFunction::new("exp", DecayClass::CompactlySupportedPath, |z| z.exp());
        let v = pv_contour(&exp, &p).unwrap().value;
        assert!(close(v, c(2.0 * shi_one(), 0.0), 1e-12), "{v}");
    }

    #[test]
    fn pole_at_origin_is_rejected() {
        let f = TestFunction::new("1/z", DecayClass::CompactlySupportedPath, |z| 1.0 / z);
        let p = Contour::polyline(&[c(-1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!(matches!(pv_contour(&f, &p), Err(Error::PvDivergence(_))));
    }

    #[test]
    fn plus_examples() {
        let r = plemelj_plus(&TestFunction::one(), &seg(-1.0, 1.0)).unwrap();
        assert!(close(r.value, c(PI, 0.0), 1e-13));
        assert!(r.pv_part.norm() < 1e-14);
        assert!(close(r.delta_part, c(PI, 0.0), 1e-15));
        let r = plemelj_plus(&TestFunction::gauss(0.0), &seg(-3.0, 3.0)).unwrap();
        assert!(close(r.value, c(PI, 0.0), 1e-12));
        assert!((r.value - r.pv_part - r.delta_part).norm() < 1e-12);
    }

    #[test]
    fn minus_examples() {
        let r = plemelj_minus(&TestFunction::one(), &seg(-1.0, 1.0)).unwrap();
        assert!(close(r.value, c(PI, 0.0), 1e-13));
        // f = z e^{-z²}: the PV is ∫ e^{-t²} dt over [-3, 3] = √π erf(3)
        let r = plemelj_minus(&TestFunction::poly_gauss(1, 0.0), &seg(-3.0, 3.0)).unwrap();
        let erf3 = 0.999_977_909_503_001_4;
        assert!(close(r.value, c(0.0, -PI.sqrt() * erf3), 1e-12), "{}", r.value);
    }

    #[test]
    fn sum_and_difference_identities() {
        let p = Contour::polyline(&[c(-2.0, -0.2), c(0.0, 0.0), c(1.5, 0.15)]).unwrap();
        let f = TestFunction::gauss(0.4);
        let plus = plemelj_plus(&f, &p).unwrap();
        let minus = plemelj_minus(&f, &p).unwrap();
        let pv = pv_contour(&f, &p).unwrap().value;
        let f0 = f.value_at_zero().unwrap();
        assert!(((plus.value + minus.value) - 2.0 * PI * f0).norm() < 1e-10);
        assert!(((plus.value - minus.value) - 2.0 * Complex64::i() * pv).norm() < 1e-10);
        let d = delta_action(&f, &p).unwrap();
        assert!((d.value - 2.0 * PI * f0).norm() < 1e-12);
    }

    #[test]
    fn cornered_crossing_uses_opening_angle() {
        let p = Contour::polyline(&[c(-2.0, 0.3), c(0.0, 0.0), c(1.5, 0.2)]).unwrap();
        let f = TestFunction::gauss(0.4);
        let plus = plemelj_plus(&f, &p).unwrap();
        let minus = plemelj_minus(&f, &p).unwrap();
        let f0 = f.value_at_zero().unwrap();
        assert!(((plus.value + minus.value) - 2.0 * PI * f0).norm() < 1e-10);
        assert!((plus.delta_part - PI * f0).norm() > 1e-2);
        let lam = lambda_route(Kernel::IPlus, &f, &p).unwrap().value;
        assert!((lam - plus.value).norm() < 1e-6 * plus.value.norm(), "{lam} vs {}", plus.value);
        let lam = lambda_route(Kernel::IMinus, &f, &p).unwrap().value;
        assert!((lam - minus.value).norm() < 1e-6 * minus.value.norm(), "{lam} vs {}", minus.value);
    }

    #[test]
    fn domain_and_orientation_errors() {
        let low = Contour::polyline(&[c(-1.0, -1.5), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(plemelj_plus(&TestFunction::one(), &low), Err(Error::DomainViolation { domain: "D+", segment: 0 })));
        assert!(plemelj_minus(&TestFunction::one(), &low).is_ok());
        let back = seg(-1.0, 1.0).reversed();
        assert!(matches!(delta_action(&TestFunction::one(), &back), Err(Error::Orientation)));
    }

    #[test]
    fn reversed_path_negates() {
        let f = TestFunction::gauss(0.3);
        let p = seg(-2.0, 1.0);
        let a = plemelj_plus(&f, &p).unwrap();
        let b = plemelj_plus(&f, &p.reversed()).unwrap();
        assert!((a.value + b.value).norm() < 1e-12);
    }

    #[test]
    fn semicircle_route_matches_formula() {
        let p = Contour::polyline(&[c(-2.0, 0.0), c(-0.5, 0.4), c(0.0, 0.0), c(0.5, 0.4), c(2.0, 0.0)]).unwrap();
        let f = TestFunction::cos_gauss();
        for k in [Kernel::IPlus, Kernel::IMinus, Kernel::Delta] {
            let formula = functional(k, &f, &p).unwrap().value;
            let semi = semicircle_route(k, &f, &p).unwrap().value;
            assert!((formula - semi).norm() < 1e-6, "{k:?}: {formula} vs {semi}");
        }
    }

    #[test]
    fn lambda_route_on_tilted_segment() {
        let e = Complex64::from_polar(2.0, PI / 8.0);
        let p = Contour::segment(-e, e).unwrap();
        let f = TestFunction::gauss(0.3);
        let (res, cmp) = cross_check(Kernel::IPlus, &f, &p).unwrap();
        assert!(cmp.agree, "{cmp:?}");
        assert!((res.value - cmp.lambda_route).norm() <= 1e-5 * res.value.norm());
    }

    #[test]
    fn catalog_parsing() {
        assert_eq!(TestFunction::parse("gauss(0.3)").unwrap().name(), "gauss(0.3)");
        let f = TestFunction::parse("poly_gauss(2, -0.5)").unwrap();
        let z = c(0.3, 0.1);
        let d = z + 0.5;
        assert!((f.eval(z) - z * z * (-d * d).exp()).norm() < 1e-15);
        assert!(TestFunction::parse("cos_gauss").is_ok());
        assert!(matches!(TestFunction::parse("sin"), Err(Error::UnknownFunction(_))));
        assert!(TestFunction::parse("gauss(x)").is_err());
        assert!(TestFunction::parse("poly_gauss(1)").is_err());
    }

    #[test]
    fn declared_value_is_checked() {
        let f = TestFunction::new("bad", DecayClass::GaussianDecay, |z| (-z * z).exp()).with_value_at_zero(c(2.0, 0.0));
        assert!(matches!(f.value_at_zero(), Err(Error::ValueAtZeroMismatch { .. })));
    }

    #[test]
    fn analyticity_check() {
        let p = seg(-1.0, 1.0);
        assert!(TestFunction::cos_gauss().check_analytic(&p).is_ok());
        let conj = TestFunction::new("conj", DecayClass::PolynomialBounded, |z: Complex64| z.conj());
        assert!(matches!(conj.check_analytic(&p), Err(Error::NotAnalytic { .. })));
    }

    #[test]
    fn infinite_paths_need_decay() {
        let line = Contour::full_line(0.2).unwrap();
        assert!(matches!(plemelj_plus(&TestFunction::one(), &line), Err(Error::NotIntegrable(_))));
        let r = plemelj_plus(&TestFunction::gauss(0.0), &line).unwrap();
        assert!(close(r.value, c(PI, 0.0), 1e-10), "{}", r.value);
    }

    #[test]
    fn overlap_on_real_path() {
        let p = seg(-6.0, 6.0);
        let v = overlap_delta(c(0.7, 0.0), &TestFunction::gauss(0.7), &p).unwrap().value;
        assert!(close(v, c(2.0 * PI, 0.0), 1e-4), "{v}");
        let steep = Contour::segment(c(-1.0, -1.0), c(1.0, 1.0)).unwrap();
        assert!(matches!(overlap_delta(c(0.0, 0.0), &TestFunction::one(), &steep), Err(Error::SlopeViolation { .. })));
        assert!(matches!(overlap_delta(c(0.7, 0.1), &TestFunction::one(), &p), Err(Error::NotOnPath(_))));
    }

    #[test]
    fn overlap_kernel_is_symmetric_shift() {
        let a = overlap_kernel(c(0.3, 0.1), c(-0.2, 0.0), 0.05).unwrap().finite().unwrap();
        let b = full_line_kernel(c(0.5, 0.1), 0.05).unwrap().finite().unwrap();
        assert_eq!(a, b);
    }
}
