use crate::{format_float, CliError};
use num_complex::Complex64;
use plemelj_core::{cross_check, functional, Contour, FunctionalResult, Kernel, RouteComparison, TestFunction};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::path::Path;

/// Float serialized with the fixed 17-digit format; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format_float(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsonComplex {
    pub re: Num,
    pub im: Num,
}

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        JsonComplex { re: Num(z.re), im: Num(z.im) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonStep {
    pub epsilon: Num,
    pub value: JsonComplex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub lambda_route: JsonComplex,
    pub lambda_error: Num,
    pub formula_route: JsonComplex,
    pub semicircle_route: JsonComplex,
    pub difference: Num,
    pub agree: bool,
}

impl From<&RouteComparison> for CrossCheck {
    fn from(c: &RouteComparison) -> Self {
        CrossCheck {
            lambda_route: c.lambda_route.into(),
            lambda_error: Num(c.lambda_error),
            formula_route: c.formula_route.into(),
            semicircle_route: c.semicircle_route.into(),
            difference: Num(c.difference),
            agree: c.agree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalReport {
    pub kernel: String,
    pub function: String,
    pub value: JsonComplex,
    pub pv_part: JsonComplex,
    pub delta_part: JsonComplex,
    pub pv_error: Num,
    pub epsilon_trace: Vec<EpsilonStep>,
    pub cross_check: Option<CrossCheck>,
}

impl FunctionalReport {
    fn new(kernel: Kernel, function: &str, r: &FunctionalResult, cmp: Option<&RouteComparison>) -> Self {
        FunctionalReport {
            kernel: kernel.name().to_string(),
            function: function.to_string(),
            value: r.value.into(),
            pv_part: r.pv_part.into(),
            delta_part: r.delta_part.into(),
            pv_error: Num(r.pv_error),
            epsilon_trace: r.epsilon_trace.iter().map(|&(e, v)| EpsilonStep { epsilon: Num(e), value: v.into() }).collect(),
            cross_check: cmp.map(CrossCheck::from),
        }
    }

    /// False only when a cross-check ran and disagreed.
    pub fn agrees(&self) -> bool {
        self.cross_check.as_ref().is_none_or(|c| c.agree)
    }
}

pub fn load_contour(path: &Path) -> Result<Contour, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Evaluates `⟨kernel, f⟩` along the contour in `contour_file`.
pub fn run_functional(kernel: Kernel, function: &str, contour_file: &Path, check: bool) -> Result<FunctionalReport, CliError> {
    let f = TestFunction::parse(function).map_err(|e| CliError::Usage(e.to_string()))?;
    let path = load_contour(contour_file)?;
    if check {
        let (r, cmp) = cross_check(kernel, &f, &path)?;
        Ok(FunctionalReport::new(kernel, function, &r, Some(&cmp)))
    } else {
        let r = functional(kernel, &f, &path)?;
        Ok(FunctionalReport::new(kernel, function, &r, None))
    }
}

pub fn write_report(report: &FunctionalReport, out: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(out, text).map_err(|e| CliError::io(out.display(), e))
}
