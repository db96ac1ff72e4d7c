//! Near-field coupling between a reader loop and a tag coil.
//!
//! Coils become chains of straight filament segments; mutual inductance is
//! the Neumann double sum over segment pairs with the midpoint rule,
//! M = (µ0/4π)·Σ (dl_a·dl_b)/|r_a − r_b|. Read range is the largest
//! separation at which the induced EMF ωMI still clears a calibrated
//! detection threshold. Only ordering between coils is meaningful; the
//! absolute threshold comes from calibration, not from reader physics.

use std::f64::consts::PI;

use thiserror::Error;

use crate::coil::{coil_centerline, CoilError, CoilGeometry};

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// µ0/4π (H/m).
pub const MU0_OVER_4PI: f64 = 1e-7;

/// Segments closer than this count as touching coils.
pub const MIN_SEGMENT_CLEARANCE_M: f64 = 1e-6;

/// Default reader: smartphone-scale single-turn square loop.
pub const DEFAULT_READER_SIDE_MM: f64 = 40.0;

/// Default midpoint-rule resolution.
pub const DEFAULT_SUBDIVISIONS: u32 = 40;

/// Search resolution of the range bisection (0.1 mm).
pub const RANGE_RESOLUTION_M: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CouplingError {
    #[error("CoilsIntersect: minimum segment distance {min_distance_m:.3e} m")]
    CoilsIntersect { min_distance_m: f64 },
    #[error("NonPositiveSeparation: z = {z_m} m")]
    NonPositiveSeparation { z_m: f64 },
    #[error("ThresholdNotCalibrated: threshold EMF must be positive")]
    ThresholdNotCalibrated,
    #[error(transparent)]
    Geometry(#[from] CoilError),
}

/// One directed straight filament, metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment3 {
    pub start: [f64; 3],
    pub delta: [f64; 3],
}

impl Segment3 {
    pub fn midpoint(&self) -> [f64; 3] {
        [
            self.start[0] + 0.5 * self.delta[0],
            self.start[1] + 0.5 * self.delta[1],
            self.start[2] + 0.5 * self.delta[2],
        ]
    }

    pub fn length(&self) -> f64 {
        dot(self.delta, self.delta).sqrt()
    }
}

/// A coil as a connected chain of filament segments.
#[derive(Debug, Clone, PartialEq)]
pub struct FilamentCoil {
    pub segments: Vec<Segment3>,
}

impl FilamentCoil {
    /// Closed single-turn rectangle centered on the z axis at height
    /// `z_m`, wound clockwise seen from +z so it matches the spiral
    /// winding of [`coil_centerline`].
    pub fn single_turn_rectangle(
        width_m: f64,
        height_m: f64,
        z_m: f64,
        subdivisions_per_side: u32,
    ) -> Self {
        let w2 = width_m / 2.0;
        let h2 = height_m / 2.0;
        let corners = [[-w2, h2], [w2, h2], [w2, -h2], [-w2, -h2], [-w2, h2]];
        let mut segments = Vec::with_capacity(4 * subdivisions_per_side as usize);
        for pair in corners.windows(2) {
            subdivide_into(pair[0], pair[1], z_m, subdivisions_per_side, &mut segments);
        }
        Self { segments }
    }

    pub fn total_length_m(&self) -> f64 {
        self.segments.iter().map(Segment3::length).sum()
    }

    pub fn max_segment_length_m(&self) -> f64 {
        self.segments
            .iter()
            .map(Segment3::length)
            .fold(0.0, f64::max)
    }
}

fn subdivide_into(a: [f64; 2], b: [f64; 2], z_m: f64, subs: u32, out: &mut Vec<Segment3>) {
    let subs = subs.max(1);
    let dx = (b[0] - a[0]) / subs as f64;
    let dy = (b[1] - a[1]) / subs as f64;
    for k in 0..subs {
        out.push(Segment3 {
            start: [a[0] + k as f64 * dx, a[1] + k as f64 * dy, z_m],
            delta: [dx, dy, 0.0],
        });
    }
}

/// Turn a spiral geometry into filaments: every centerline segment is split
/// into `subdivisions_per_side` equal parts, the coil centered on the z
/// axis in the plane at height `z_m`.
pub fn discretize_coil(
    geometry: &CoilGeometry,
    z_m: f64,
    subdivisions_per_side: u32,
) -> Result<FilamentCoil, CoilError> {
    let centerline = coil_centerline(geometry)?;
    let cx = geometry.outer_length_mm / 2.0;
    let cy = geometry.outer_width_mm / 2.0;
    let mut segments =
        Vec::with_capacity((centerline.len() - 1) * subdivisions_per_side.max(1) as usize);
    for pair in centerline.windows(2) {
        let a = [(pair[0].x_mm - cx) * 1e-3, (pair[0].y_mm - cy) * 1e-3];
        let b = [(pair[1].x_mm - cx) * 1e-3, (pair[1].y_mm - cy) * 1e-3];
        subdivide_into(a, b, z_m, subdivisions_per_side, &mut segments);
    }
    Ok(FilamentCoil { segments })
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Closest distance between two segments (clamped closest-point method).
fn segment_distance(p: &Segment3, q: &Segment3) -> f64 {
    let r = sub(p.start, q.start);
    let a = dot(p.delta, p.delta);
    let e = dot(q.delta, q.delta);
    let f = dot(q.delta, r);
    let (s, t);
    if a == 0.0 && e == 0.0 {
        return dot(r, r).sqrt();
    }
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = dot(p.delta, r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = dot(p.delta, q.delta);
            let denom = a * e - b * b;
            let s0 = if denom != 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            } else {
                t = t0;
                s = s0;
            }
        }
    }
    let closest = sub(
        [
            p.start[0] + s * p.delta[0],
            p.start[1] + s * p.delta[1],
            p.start[2] + s * p.delta[2],
        ],
        [
            q.start[0] + t * q.delta[0],
            q.start[1] + t * q.delta[1],
            q.start[2] + t * q.delta[2],
        ],
    );
    dot(closest, closest).sqrt()
}

// Pick a canonical operand order so mutual_inductance(a, b) and
// mutual_inductance(b, a) run the identical summation and agree exactly.
fn canonical_order<'a>(
    a: &'a FilamentCoil,
    b: &'a FilamentCoil,
) -> (&'a FilamentCoil, &'a FilamentCoil) {
    fn key(c: &FilamentCoil) -> impl Iterator<Item = f64> + '_ {
        c.segments
            .iter()
            .flat_map(|s| s.start.iter().chain(s.delta.iter()))
            .copied()
    }
    if a.segments.len() != b.segments.len() {
        if a.segments.len() < b.segments.len() {
            return (a, b);
        }
        return (b, a);
    }
    for (x, y) in key(a).zip(key(b)) {
        match x.total_cmp(&y) {
            std::cmp::Ordering::Less => return (a, b),
            std::cmp::Ordering::Greater => return (b, a),
            std::cmp::Ordering::Equal => {}
        }
    }
    (a, b)
}

/// Neumann mutual inductance between two filament coils, henries.
///
/// Midpoint rule over all segment pairs, summed in a fixed order so runs
/// are bit-reproducible. Fails if any segment pair approaches closer than
/// [`MIN_SEGMENT_CLEARANCE_M`].
pub fn mutual_inductance(a: &FilamentCoil, b: &FilamentCoil) -> Result<f64, CouplingError> {
    let (first, second) = canonical_order(a, b);
    let mid_second: Vec<[f64; 3]> = second.segments.iter().map(Segment3::midpoint).collect();

    let mut sum = 0.0;
    let mut min_distance = f64::INFINITY;
    for sa in &first.segments {
        let ma = sa.midpoint();
        for (sb, mb) in second.segments.iter().zip(&mid_second) {
            let d = segment_distance(sa, sb);
            if d < min_distance {
                min_distance = d;
            }
            let r = sub(ma, *mb);
            sum += dot(sa.delta, sb.delta) / dot(r, r).sqrt();
        }
    }
    if min_distance <= MIN_SEGMENT_CLEARANCE_M {
        return Err(CouplingError::CoilsIntersect {
            min_distance_m: min_distance,
        });
    }
    Ok(MU0_OVER_4PI * sum)
}

/// Reader at z = 0 facing a tag coil placed at variable separation, plus
/// the calibrated detection threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingScenario {
    pub reader: FilamentCoil,
    pub tag_geometry: CoilGeometry,
    pub subdivisions_per_side: u32,
    pub drive_current_a: f64,
    pub threshold_emf_v: f64,
    pub max_range_m: f64,
}

impl CouplingScenario {
    /// Default reader loop, 1 A drive, uncalibrated threshold.
    pub fn new(tag_geometry: CoilGeometry) -> Self {
        let side_m = DEFAULT_READER_SIDE_MM * 1e-3;
        Self {
            reader: FilamentCoil::single_turn_rectangle(side_m, side_m, 0.0, DEFAULT_SUBDIVISIONS),
            tag_geometry,
            subdivisions_per_side: DEFAULT_SUBDIVISIONS,
            drive_current_a: 1.0,
            threshold_emf_v: 0.0,
            max_range_m: 0.3,
        }
    }

    /// Tag filament coil at separation `z_m`.
    pub fn tag_coil_at(&self, z_m: f64) -> Result<FilamentCoil, CoilError> {
        discretize_coil(&self.tag_geometry, z_m, self.subdivisions_per_side)
    }

    /// Reader-to-tag mutual inductance at separation `z_m`.
    pub fn mutual_at(&self, z_m: f64) -> Result<f64, CouplingError> {
        if !positive(z_m) {
            return Err(CouplingError::NonPositiveSeparation { z_m });
        }
        mutual_inductance(&self.reader, &self.tag_coil_at(z_m)?)
    }

    /// Open-circuit EMF induced in the tag: 2πf·M(z)·I_drive.
    pub fn induced_emf(&self, z_m: f64, frequency_hz: f64) -> Result<f64, CouplingError> {
        Ok(2.0 * PI * frequency_hz * self.mutual_at(z_m)? * self.drive_current_a)
    }

    /// Fix the threshold so that `estimate_range` returns `range_m`;
    /// returns the threshold EMF installed.
    pub fn calibrate_threshold(
        &mut self,
        range_m: f64,
        frequency_hz: f64,
    ) -> Result<f64, CouplingError> {
        let emf = self.induced_emf(range_m, frequency_hz)?;
        self.threshold_emf_v = emf;
        Ok(emf)
    }

    /// Largest separation in (0, max_range] where the induced EMF still
    /// reaches the threshold, bisected on the monotone decay of M(z) to
    /// 0.1 mm; 0 when the tag is below threshold everywhere.
    pub fn estimate_range(&self, frequency_hz: f64) -> Result<f64, CouplingError> {
        if !positive(self.threshold_emf_v) {
            return Err(CouplingError::ThresholdNotCalibrated);
        }
        let detected = |z: f64| -> Result<bool, CouplingError> {
            Ok(self.induced_emf(z, frequency_hz)? >= self.threshold_emf_v)
        };
        if detected(self.max_range_m)? {
            return Ok(self.max_range_m);
        }
        let mut lo = RANGE_RESOLUTION_M;
        if !detected(lo)? {
            return Ok(0.0);
        }
        let mut hi = self.max_range_m;
        while hi - lo > RANGE_RESOLUTION_M {
            let mid = 0.5 * (lo + hi);
            if detected(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
