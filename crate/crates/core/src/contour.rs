//! Oriented piecewise paths in the complex plane, the wedge domains `D+`, `D-`
//! and `D = D+ ∩ D-`, and the semicircle deformation around the origin.

use crate::error::{Error, Result};
use crate::quadrature::{self, Integral, Tolerance};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

/// Consecutive segments must meet within this distance.
pub const CONTINUITY_TOL: f64 = 1e-14;
/// A path closer than this to a wedge apex must mark the crossing.
pub const CROSSING_TOL: f64 = 1e-12;

const RAY_MAX_PANELS: usize = 400;
const RAY_MAX_EXTENT: f64 = 1e8;
const ARC_SAMPLES: usize = 2048;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One piece of a [`Contour`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Segment {
    /// Straight piece from `start` to `end`.
    Line { start: Complex64, end: Complex64 },
    /// Circular arc about `center`, beginning at `start` and turning through
    /// `sweep` radians (positive = counter-clockwise).
    Arc { center: Complex64, start: Complex64, sweep: f64 },
    /// Half-infinite straight piece along direction `angle` from `anchor`.
    /// An inbound ray arrives from infinity and ends at `anchor`; an outbound ray
    /// leaves `anchor` towards infinity.
    Ray { anchor: Complex64, angle: f64, inbound: bool },
}

impl Segment {
    pub fn line(start: Complex64, end: Complex64) -> Self {
        Segment::Line { start, end }
    }

    pub fn start(&self) -> Complex64 {
        match *self {
            Segment::Line { start, .. } | Segment::Arc { start, .. } => start,
            Segment::Ray { anchor, inbound: false, .. } => anchor,
            Segment::Ray { anchor, angle, inbound: true } => anchor + Complex64::from_polar(f64::INFINITY, angle),
        }
    }

    pub fn end(&self) -> Complex64 {
        match *self {
            Segment::Line { end, .. } => end,
            Segment::Arc { center, start, sweep } => center + (start - center) * Complex64::from_polar(1.0, sweep),
            Segment::Ray { anchor, inbound: true, .. } => anchor,
            Segment::Ray { anchor, angle, inbound: false } => anchor + Complex64::from_polar(f64::INFINITY, angle),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { start, end } => (end - start).norm(),
            Segment::Arc { center, start, sweep } => (start - center).norm() * sweep.abs(),
            Segment::Ray { .. } => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Segment::Ray { .. })
    }

    /// Point at normalized parameter `t` in `[0, 1]` (finite pieces only).
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { start, end } => start + (end - start) * t,
            Segment::Arc { center, start, sweep } => center + (start - center) * Complex64::from_polar(1.0, sweep * t),
            Segment::Ray { .. } => panic!("Segment::point on an infinite ray"),
        }
    }

    /// Unit tangent in the direction of travel at parameter `t`.
    pub fn tangent(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { start, end } => (end - start).unscale((end - start).norm()),
            Segment::Arc { center, start, sweep } => {
                let r = start - center;
                let d = Complex64::i() * r * Complex64::from_polar(sweep.signum(), sweep * t);
                d.unscale(d.norm())
            }
            Segment::Ray { angle, inbound, .. } => {
                let d = Complex64::from_polar(1.0, angle);
                if inbound {
                    -d
                } else {
                    d
                }
            }
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        let bad = |msg: &str| Err(Error::InvalidContour(format!("segment {index}: {msg}")));
        match *self {
            Segment::Line { start, end } => {
                if !finite(start) || !finite(end) {
                    return bad("non-finite endpoint");
                }
                if start == end {
                    return bad("zero-length line");
                }
            }
            Segment::Arc { center, start, sweep } => {
                if !finite(center) || !finite(start) || !sweep.is_finite() {
                    return bad("non-finite arc data");
                }
                if center == start || sweep == 0.0 || sweep.abs() > TAU {
                    return bad("degenerate arc");
                }
            }
            Segment::Ray { anchor, angle, .. } => {
                if !finite(anchor) || !angle.is_finite() {
                    return bad("non-finite ray data");
                }
            }
        }
        Ok(())
    }

    /// Distance from `p` to the closest point of the segment.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { start, end } => {
                let d = end - start;
                let t = (((p - start) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (start + d * t - p).norm()
            }
            Segment::Ray { anchor, angle, .. } => {
                let d = Complex64::from_polar(1.0, angle);
                let s = ((p - anchor) * d.conj()).re.max(0.0);
                (anchor + d * s - p).norm()
            }
            Segment::Arc { center, start, sweep } => {
                let r = (start - center).norm();
                let a0 = (start - center).arg();
                let rel = p - center;
                if rel.norm() > 0.0 {
                    let mut off = (rel.arg() - a0) * sweep.signum();
                    off = off.rem_euclid(TAU);
                    if off <= sweep.abs() {
                        return (rel.norm() - r).abs();
                    }
                }
                (self.point(0.0) - p).norm().min((self.point(1.0) - p).norm())
            }
        }
    }

    /// Parameter positions (normalized for finite pieces, distance from anchor for
    /// rays) of the point closest to `p`.
    fn closest_param(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { start, end } => {
                let d = end - start;
                (((p - start) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
            }
            Segment::Ray { anchor, angle, .. } => {
                let d = Complex64::from_polar(1.0, angle);
                ((p - anchor) * d.conj()).re.max(0.0)
            }
            Segment::Arc { center, start, sweep } => {
                let a0 = (start - center).arg();
                let off = (((p - center).arg() - a0) * sweep.signum()).rem_euclid(TAU);
                (off / sweep.abs()).min(1.0)
            }
        }
    }

    /// Line integral of `g(z) dz` along this piece.
    pub fn integrate<G: Fn(Complex64) -> Complex64>(&self, g: &G, opts: &IntegrationOptions) -> Result<Integral> {
        match *self {
            Segment::Line { start, end } => {
                let d = end - start;
                let bps = self.breakpoints(opts, d.norm());
                quadrature::integrate(|t| g(start + d * t) * d, &bps, opts.tol)
            }
            Segment::Arc { center, start, sweep } => {
                let r = start - center;
                let bps = self.breakpoints(opts, r.norm() * sweep.abs());
                quadrature::integrate(
                    |t| {
                        let rot = r * Complex64::from_polar(1.0, sweep * t);
                        g(center + rot) * Complex64::i() * rot * sweep
                    },
                    &bps,
                    opts.tol,
                )
            }
            Segment::Ray { anchor, angle, inbound } => {
                let d = Complex64::from_polar(1.0, angle);
                let out = integrate_ray(|s| g(anchor + d * s) * d, self, opts)?;
                Ok(if inbound { Integral { value: -out.value, ..out } } else { out })
            }
        }
    }

    fn breakpoints(&self, opts: &IntegrationOptions, length: f64) -> Vec<f64> {
        let mut bps = vec![0.0, 1.0];
        for &(p, scale) in &opts.focus {
            if self.distance_to(p) > 64.0 * scale.max(1e-300) * 4f64.powi(8) {
                continue;
            }
            let t0 = self.closest_param(p);
            bps.push(t0);
            for k in 0..12 {
                let dt = scale * 4f64.powi(k) / length;
                for t in [t0 - dt, t0 + dt] {
                    if t > 0.0 && t < 1.0 {
                        bps.push(t);
                    }
                }
            }
        }
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        bps
    }
}

/// Outward integration along a ray in growing panels until the tail is negligible.
fn integrate_ray<F: Fn(f64) -> Complex64>(h: F, seg: &Segment, opts: &IntegrationOptions) -> Result<Integral> {
    let mut bps = vec![0.0];
    for &(p, scale) in &opts.focus {
        let s0 = seg.closest_param(p);
        if seg.distance_to(p) > 64.0 * scale * 4f64.powi(8) {
            continue;
        }
        bps.push(s0);
        for k in 0..12 {
            let ds = scale * 4f64.powi(k);
            for s in [s0 - ds, s0 + ds] {
                if s > 0.0 {
                    bps.push(s);
                }
            }
        }
    }
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    let mut total = Integral::zero();
    if bps.len() >= 2 {
        total = quadrature::integrate(&h, &bps, opts.tol)?;
    }
    let mut s = *bps.last().unwrap();
    let mut width = opts.ray_panel.max(s * 0.5);
    let mut quiet = 0;
    for _ in 0..RAY_MAX_PANELS {
        let panel = quadrature::integrate(&h, &[s, s + width], opts.tol)?;
        total = total + panel;
        s += width;
        let edge = h(s).norm() * width;
        let negligible = 1e-16 * total.value.norm().max(f64::MIN_POSITIVE);
        if panel.value.norm() <= negligible && edge <= negligible {
            quiet += 1;
            if quiet >= 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        if s > RAY_MAX_EXTENT {
            break;
        }
        width *= 1.5;
    }
    Err(Error::TruncationFailure(format!(
        "integrand does not decay along the ray at angle {:.4}",
        match *seg {
            Segment::Ray { angle, .. } => angle,
            _ => f64::NAN,
        }
    )))
}

/// Knobs for [`Contour::integrate`].
#[derive(Debug, Clone)]
pub struct IntegrationOptions {
    pub tol: Tolerance,
    /// Points where the integrand varies on the given length scale; segments near
    /// them receive geometrically spaced breakpoints.
    pub focus: Vec<(Complex64, f64)>,
    /// First panel width when marching out along a ray.
    pub ray_panel: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions { tol: Tolerance::default(), focus: Vec::new(), ray_panel: 1.0 }
    }
}

impl IntegrationOptions {
    pub fn with_focus(mut self, point: Complex64, scale: f64) -> Self {
        self.focus.push((point, scale));
        self
    }

    pub fn with_tol(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }
}

/// An oriented path: continuous segments plus an optional marked passage through
/// `z = 0`. The marker is a vertex index `k` (the end of segment `k - 1` and the
/// start of segment `k`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contour {
    segments: Vec<Segment>,
    crossing: Option<usize>,
}

#[derive(Deserialize)]
struct RawContour {
    segments: Vec<Segment>,
    crossing: Option<usize>,
}

impl<'de> Deserialize<'de> for Contour {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawContour::deserialize(deserializer)?;
        Contour::new(raw.segments, raw.crossing).map_err(serde::de::Error::custom)
    }
}

/// Local picture of the path at its marked crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingGeometry {
    /// Unit vector from the origin towards the incoming arm.
    pub incoming: Complex64,
    /// Unit vector from the origin along the outgoing arm.
    pub outgoing: Complex64,
    pub arm_in: f64,
    pub arm_out: f64,
    pub vertex: usize,
}

/// Side on which a deformation circles the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

impl CrossingGeometry {
    /// Signed angle swept by the small arc that replaces the crossing on `side`.
    /// `Above` keeps clear of the `-i` direction, `Below` of `+i`; a straight
    /// left-to-right crossing gives `-pi` above and `+pi` below.
    pub fn sweep(&self, side: Side) -> f64 {
        let a_in = self.incoming.arg();
        let a_out = self.outgoing.arg();
        let ccw = (a_out - a_in).rem_euclid(TAU);
        let avoid = match side {
            Side::Above => -FRAC_PI_2,
            Side::Below => FRAC_PI_2,
        };
        let hits = (avoid - a_in).rem_euclid(TAU) < ccw;
        if hits {
            ccw - TAU
        } else {
            ccw
        }
    }

    /// Arc length of path excised on each side before the geometry stops being straight.
    pub fn shorter_arm(&self) -> f64 {
        self.arm_in.min(self.arm_out)
    }
}

impl Contour {
    /// Validates continuity, ray placement and the crossing marker.
    pub fn new(segments: Vec<Segment>, crossing: Option<usize>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidContour("no segments".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            s.validate(i)?;
            if let Segment::Ray { inbound, .. } = s {
                if *inbound && i != 0 {
                    return Err(Error::InvalidContour(format!("inbound ray at position {i} must come first")));
                }
                if !*inbound && i != segments.len() - 1 {
                    return Err(Error::InvalidContour(format!("outbound ray at position {i} must come last")));
                }
            }
        }
        for (i, w) in segments.windows(2).enumerate() {
            let gap = (w[0].end() - w[1].start()).norm();
            let scale = w[1].start().norm().max(1.0);
            if gap.is_nan() || gap > CONTINUITY_TOL * scale {
                return Err(Error::InvalidContour(format!(
                    "segments {i} and {} are not continuous (gap {gap:.3e})",
                    i + 1
                )));
            }
        }
        if let Some(k) = crossing {
            if k == 0 || k >= segments.len() {
                return Err(Error::InvalidContour(format!("crossing vertex {k} is not an interior vertex")));
            }
            let z = segments[k].start();
            if z.norm() > CONTINUITY_TOL {
                return Err(Error::InvalidContour(format!("crossing vertex {k} is at {z}, not the origin")));
            }
        }
        Ok(Contour { segments, crossing })
    }

    /// Polyline through `points`. A vertex at the origin is marked as the crossing;
    /// a piece passing through the origin in its interior is split there and marked.
    pub fn polyline(points: &[Complex64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidContour("a polyline needs two points".into()));
        }
        let mut verts = vec![points[0]];
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = b - a;
            let t = ((-a) * d.conj()).re / d.norm_sqr();
            if t > 0.0 && t < 1.0 && (a + d * t).norm() <= CONTINUITY_TOL * d.norm().max(1.0) {
                verts.push(Complex64::new(0.0, 0.0));
            }
            verts.push(b);
        }
        let crossing = verts[1..verts.len() - 1].iter().position(|z| z.norm() <= CONTINUITY_TOL).map(|i| i + 1);
        let segments = verts.windows(2).map(|w| Segment::line(w[0], w[1])).collect();
        Contour::new(segments, crossing)
    }

    /// Straight segment from `a` to `b`, marked at the origin when it passes through it.
    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        Contour::polyline(&[a, b])
    }

    /// Full straight line through the origin at angle `phi`, built from two rays.
    pub fn full_line(phi: f64) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        Contour::new(
            vec![
                Segment::Ray { anchor: zero, angle: phi + PI, inbound: true },
                Segment::Ray { anchor: zero, angle: phi, inbound: false },
            ],
            Some(1),
        )
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn crossing(&self) -> Option<usize> {
        self.crossing
    }

    pub fn start(&self) -> Complex64 {
        self.segments[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn is_finite(&self) -> bool {
        self.segments.iter().all(Segment::is_finite)
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Reverses the orientation; the crossing marker follows its vertex.
    pub fn reversed(&self) -> Contour {
        let n = self.segments.len();
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| match *s {
                Segment::Line { start, end } => Segment::Line { start: end, end: start },
                Segment::Arc { center, sweep, .. } => Segment::Arc { center, start: s.end(), sweep: -sweep },
                Segment::Ray { anchor, angle, inbound } => Segment::Ray { anchor, angle, inbound: !inbound },
            })
            .collect();
        Contour { segments, crossing: self.crossing.map(|k| n - k) }
    }

    /// Geometry of the marked crossing; both adjoining pieces must be straight.
    pub fn crossing_geometry(&self) -> Result<CrossingGeometry> {
        let k = self.crossing.ok_or(Error::MissingCrossing)?;
        let (before, after) = (&self.segments[k - 1], &self.segments[k]);
        if matches!(before, Segment::Arc { .. }) || matches!(after, Segment::Arc { .. }) {
            return Err(Error::InvalidContour("the pieces meeting at the crossing must be straight".into()));
        }
        Ok(CrossingGeometry {
            incoming: -before.tangent(1.0),
            outgoing: after.tangent(0.0),
            arm_in: before.length(),
            arm_out: after.length(),
            vertex: k,
        })
    }

    /// Line integral `∫ g(z) dz` along the whole path.
    pub fn integrate<G: Fn(Complex64) -> Complex64>(&self, g: G, opts: &IntegrationOptions) -> Result<Integral> {
        self.segments
            .iter()
            .try_fold(Integral::zero(), |acc, s| Ok(acc + s.integrate(&g, opts)?))
    }

    /// The path with the pieces of length `epsilon` on either side of the crossing
    /// removed, returned as the part before and the part after the gap.
    pub fn excise(&self, epsilon: f64) -> Result<(Contour, Contour)> {
        let geo = self.crossing_geometry()?;
        check_epsilon(epsilon, &geo)?;
        let k = geo.vertex;
        let mut before = self.segments[..k].to_vec();
        let mut after = self.segments[k..].to_vec();
        let p_in = geo.incoming * epsilon;
        let p_out = geo.outgoing * epsilon;
        trim_end(before.last_mut().unwrap(), p_in);
        trim_start(&mut after[0], p_out);
        Ok((Contour::new(before, None)?, Contour::new(after, None)?))
    }

    /// Index of the first piece within `tol` of `p`.
    pub fn locate(&self, p: Complex64, tol: f64) -> Option<usize> {
        self.segments.iter().position(|s| s.distance_to(p) <= tol)
    }
}

fn check_epsilon(epsilon: f64, geo: &CrossingGeometry) -> Result<()> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidContour(format!("epsilon must be positive, got {epsilon}")));
    }
    let arm = geo.shorter_arm();
    if epsilon >= arm {
        return Err(Error::EpsilonTooLarge { epsilon, arm });
    }
    Ok(())
}

fn trim_end(seg: &mut Segment, new_end: Complex64) {
    match seg {
        Segment::Line { end, .. } => *end = new_end,
        Segment::Ray { anchor, .. } => *anchor = new_end,
        Segment::Arc { .. } => unreachable!("crossing pieces are straight"),
    }
}

fn trim_start(seg: &mut Segment, new_start: Complex64) {
    match seg {
        Segment::Line { start, .. } => *start = new_start,
        Segment::Ray { anchor, .. } => *anchor = new_start,
        Segment::Arc { .. } => unreachable!("crossing pieces are straight"),
    }
}

/// Replaces the crossing by an arc of radius `epsilon` about the origin on `side`.
/// For a straight crossing this is the semicircle; the result carries no marker.
pub fn deform_at_origin(path: &Contour, epsilon: f64, side: Side) -> Result<Contour> {
    let geo = path.crossing_geometry()?;
    let (before, after) = path.excise(epsilon)?;
    let p_in = geo.incoming * epsilon;
    let arc = Segment::Arc { center: c(0.0, 0.0), start: p_in, sweep: geo.sweep(side) };
    let mut segments = before.segments;
    segments.push(arc);
    segments.extend(after.segments);
    Contour::new(segments, None)
}

/// Which of the three convergence domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    /// Plane minus the closed wedge `arg ∈ [5π/4, 7π/4]` below the apex.
    DPlus,
    /// Plane minus the closed wedge `arg ∈ [π/4, 3π/4]` above the apex.
    DMinus,
    /// Both wedges removed.
    DIntersection,
}

impl DomainKind {
    pub fn name(self) -> &'static str {
        match self {
            DomainKind::DPlus => "D+",
            DomainKind::DMinus => "D-",
            DomainKind::DIntersection => "D",
        }
    }
}

/// A wedge domain with apex. For [`DomainKind::DIntersection`] the `D-` wedge
/// sits at the point reflection of `apex`, so that apexes `-iε` and `+iε` pair up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeDomain {
    pub kind: DomainKind,
    pub apex: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Apex,
}

impl WedgeDomain {
    pub fn plus() -> Self {
        WedgeDomain { kind: DomainKind::DPlus, apex: c(0.0, 0.0) }
    }

    pub fn minus() -> Self {
        WedgeDomain { kind: DomainKind::DMinus, apex: c(0.0, 0.0) }
    }

    pub fn intersection() -> Self {
        WedgeDomain { kind: DomainKind::DIntersection, apex: c(0.0, 0.0) }
    }

    pub fn with_apex(self, apex: Complex64) -> Self {
        WedgeDomain { apex, ..self }
    }

    /// Excluded wedges as `(apex, central direction)`; each has half-opening π/4.
    fn wedges(&self) -> Vec<(Complex64, f64)> {
        match self.kind {
            DomainKind::DPlus => vec![(self.apex, -FRAC_PI_2)],
            DomainKind::DMinus => vec![(self.apex, FRAC_PI_2)],
            DomainKind::DIntersection => vec![(self.apex, -FRAC_PI_2), (-self.apex, FRAC_PI_2)],
        }
    }

    pub fn classify(&self, z: Complex64) -> Membership {
        classify_point(z, self)
    }
}

/// `z` relative to a wedge whose closed excluded sector is centred on `axis`.
fn in_closed_wedge(z: Complex64, apex: Complex64, axis: f64) -> bool {
    let d = z - apex;
    // angle normalized into [axis - π, axis + π)
    let off = (d.arg() - axis + PI).rem_euclid(TAU) - PI;
    off.abs() <= FRAC_PI_4
}

/// Membership of `z` in `domain`: boundary rays count as outside, the apex is
/// reported separately.
pub fn classify_point(z: Complex64, domain: &WedgeDomain) -> Membership {
    let wedges = domain.wedges();
    if wedges.iter().any(|&(apex, _)| (z - apex).norm() <= CONTINUITY_TOL) {
        return Membership::Apex;
    }
    if wedges.iter().any(|&(apex, axis)| in_closed_wedge(z, apex, axis)) {
        Membership::Outside
    } else {
        Membership::Inside
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMembership {
    FullyInside,
    InsideExceptCrossing,
    Violates { segment: usize },
}

/// Parameter interval `[lo, hi]` of `p0 + τ d` (τ within `[0, tmax]`) lying in the
/// closed cone `{apex + s u + t v : s, t >= 0}`.
fn cone_interval(p0: Complex64, d: Complex64, tmax: f64, apex: Complex64, axis: f64) -> Option<(f64, f64)> {
    let u = Complex64::from_polar(1.0, axis - FRAC_PI_4);
    let v = Complex64::from_polar(1.0, axis + FRAC_PI_4);
    // solve q = s u + t v; u ⟂ v so s = <q,u>, t = <q,v>
    let q0 = p0 - apex;
    let dot = |a: Complex64, b: Complex64| a.re * b.re + a.im * b.im;
    let (s0, ds) = (dot(q0, u), dot(d, u));
    let (t0, dt) = (dot(q0, v), dot(d, v));
    let mut lo = 0.0f64;
    let mut hi = tmax;
    for (a, b) in [(s0, ds), (t0, dt)] {
        // a + τ b >= 0
        if b == 0.0 {
            if a < 0.0 {
                return None;
            }
        } else if b > 0.0 {
            lo = lo.max(-a / b);
        } else {
            hi = hi.min(-a / b);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Classifies a whole path against `domain`. Straight pieces are clipped exactly
/// against the excluded cones; arcs are sampled, densely towards their ends.
pub fn path_in_domain(path: &Contour, domain: &WedgeDomain) -> Result<PathMembership> {
    let crossing = path.crossing();
    let wedges = domain.wedges();
    let mut touched_crossing = false;

    for (i, seg) in path.segments().iter().enumerate() {
        let ends_at_crossing = crossing == Some(i + 1);
        let starts_at_crossing = crossing == Some(i);
        for &(apex, axis) in &wedges {
            let dist = seg.distance_to(apex);
            let apex_is_crossing = apex.norm() <= CONTINUITY_TOL;
            let at_marked_end = apex_is_crossing && (ends_at_crossing || starts_at_crossing);
            if dist <= CROSSING_TOL && !at_marked_end {
                return Err(Error::UnmarkedCrossing { segment: i, distance: dist });
            }

            let hit = match *seg {
                Segment::Line { start, end } => {
                    let len = (end - start).norm();
                    let d = (end - start).unscale(len);
                    cone_interval(start, d, len, apex, axis).and_then(|(lo, hi)| {
                        // the marked vertex itself is allowed
                        let width = hi - lo;
                        let tiny = CROSSING_TOL.max(1e-14 * len);
                        if at_marked_end && width <= tiny && ((ends_at_crossing && lo >= len - tiny) || (starts_at_crossing && hi <= tiny)) {
                            None
                        } else {
                            Some(())
                        }
                    })
                }
                Segment::Ray { anchor, angle, inbound } => {
                    let d = Complex64::from_polar(1.0, angle);
                    cone_interval(anchor, d, f64::INFINITY, apex, axis).and_then(|(lo, hi)| {
                        let at_anchor_only = hi - lo <= CROSSING_TOL && lo <= CROSSING_TOL;
                        let anchor_marked = at_marked_end && ((inbound && ends_at_crossing) || (!inbound && starts_at_crossing));
                        if at_anchor_only && anchor_marked {
                            None
                        } else {
                            Some(())
                        }
                    })
                }
                Segment::Arc { .. } => {
                    let mut ts: Vec<f64> = (0..=ARC_SAMPLES).map(|j| j as f64 / ARC_SAMPLES as f64).collect();
                    for j in 1..40 {
                        let h = 0.5f64.powi(j);
                        ts.push(h);
                        ts.push(1.0 - h);
                    }
                    ts.iter()
                        .filter(|&&t| !(at_marked_end && ((t == 1.0 && ends_at_crossing) || (t == 0.0 && starts_at_crossing))))
                        .any(|&t| in_closed_wedge(seg.point(t), apex, axis) || (seg.point(t) - apex).norm() <= CONTINUITY_TOL)
                        .then_some(())
                }
            };
            if hit.is_some() {
                return Ok(PathMembership::Violates { segment: i });
            }
            if at_marked_end {
                touched_crossing = true;
            }
        }
    }
    Ok(if touched_crossing { PathMembership::InsideExceptCrossing } else { PathMembership::FullyInside })
}
