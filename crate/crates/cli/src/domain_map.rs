use crate::{format_float, CliError};
use num_complex::Complex64;
use plemelj_core::{kernel_limit, kernel_limit_full, kernel_limit_mirror, RegularizationSchedule, Status};
use rayon::prelude::*;
use std::io::Write;
use std::path::Path;

/// Ratio between consecutive λ values of a domain-map schedule.
pub const LAMBDA_RATIO: f64 = 0.316_227_766_016_837_94;
const DIVERGENCE_THRESHOLD: f64 = 1e6;
const CONVERGENCE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MapKernel {
    #[value(name = "I_plus")]
    IPlus,
    #[value(name = "I_minus")]
    IMinus,
    #[value(name = "full_line")]
    FullLine,
}

/// Rectangular sample grid. An axis with one sample must have equal bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

fn axis(lo: f64, hi: f64, n: usize, label: &str) -> Result<(), CliError> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Usage(format!("{label} bounds must be finite")));
    }
    match n {
        0 => Err(CliError::Usage(format!("{label} needs at least one sample"))),
        1 if lo != hi => Err(CliError::Usage(format!("{label}: a single sample needs equal bounds, got {lo}:{hi}"))),
        1 => Ok(()),
        _ if lo >= hi => Err(CliError::Usage(format!("{label} bounds must be increasing, got {lo}:{hi}"))),
        _ => Ok(()),
    }
}

impl Grid {
    pub fn new(re: (f64, f64, usize), im: (f64, f64, usize)) -> Result<Self, CliError> {
        axis(re.0, re.1, re.2, "real axis")?;
        axis(im.0, im.1, im.2, "imaginary axis")?;
        Ok(Grid { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1, n_re: re.2, n_im: im.2 })
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major: the real part runs fastest.
    pub fn point(&self, index: usize) -> Complex64 {
        let (i, j) = (index / self.n_re, index % self.n_re);
        Complex64::new(sample(self.re_min, self.re_max, self.n_re, j), sample(self.im_min, self.im_max, self.n_im, i))
    }
}

fn sample(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if n == 1 {
        lo
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

/// Parses `RE_MIN:RE_MAX:N,IM_MIN:IM_MAX:N`.
pub fn parse_grid(s: &str) -> Result<Grid, CliError> {
    let bad = || CliError::Usage(format!("grid `{s}` is not of the form RE_MIN:RE_MAX:N,IM_MIN:IM_MAX:N"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let part = |p: &str| -> Result<(f64, f64, usize), CliError> {
        let fields: Vec<&str> = p.trim().split(':').collect();
        let [lo, hi, n] = fields.as_slice() else { return Err(bad()) };
        Ok((lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?))
    };
    Grid::new(part(re)?, part(im)?)
}

#[derive(Debug, Clone)]
pub struct DomainMapRequest {
    pub grid: Grid,
    pub schedule: RegularizationSchedule,
    pub kernel: MapKernel,
}

impl DomainMapRequest {
    /// Schedule `λ_n = start · 10^{-n/2}` for `n < steps`.
    pub fn new(grid: Grid, kernel: MapKernel, lambda_start: f64, lambda_steps: usize) -> Result<Self, CliError> {
        if lambda_steps < 3 {
            return Err(CliError::Usage(format!("--lambda-steps must be at least 3, got {lambda_steps}")));
        }
        let schedule =
            RegularizationSchedule::geometric(lambda_start, LAMBDA_RATIO, lambda_steps, DIVERGENCE_THRESHOLD, CONVERGENCE_TOL)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(DomainMapRequest { grid, schedule, kernel })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapRow {
    pub z: Complex64,
    pub status: Status,
    /// `|limit|` for converged points.
    pub abs_value: Option<f64>,
}

fn classify(z: Complex64, req: &DomainMapRequest) -> Result<MapRow, CliError> {
    // every kernel grows like λ^{-1/2} at the apex
    if z == Complex64::new(0.0, 0.0) {
        return Ok(MapRow { z, status: Status::Diverged, abs_value: None });
    }
    let r = match req.kernel {
        MapKernel::IPlus => kernel_limit(z, &req.schedule),
        MapKernel::IMinus => kernel_limit_mirror(z, &req.schedule),
        MapKernel::FullLine => kernel_limit_full(z, &req.schedule),
    }?;
    let abs_value = (r.status == Status::Converged).then(|| r.value.norm());
    Ok(MapRow { z, status: r.status, abs_value })
}

/// Classifies every grid point; rows come back in row-major order.
pub fn run_domain_map(req: &DomainMapRequest) -> Result<Vec<MapRow>, CliError> {
    (0..req.grid.len()).into_par_iter().map(|k| classify(req.grid.point(k), req)).collect()
}

pub fn write_domain_map(rows: &[MapRow], out: &Path) -> Result<(), CliError> {
    let io = |e| CliError::io(out.display(), e);
    let file = std::fs::File::create(out).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "re,im,status,abs_value").map_err(io)?;
    for row in rows {
        let abs = row.abs_value.map(format_float).unwrap_or_default();
        writeln!(w, "{},{},{},{}", format_float(row.z.re), format_float(row.z.im), row.status.as_str(), abs).map_err(io)?;
    }
    w.flush().map_err(io)
}
