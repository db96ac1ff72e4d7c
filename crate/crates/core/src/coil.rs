//! Planar spiral coil geometry and its electrical estimates.
//!
//! A coil is a rectangular (or square) spiral of `N` turns etched on a
//! flexible substrate. From the parametric description this module derives
//! the side-averaged diameters, the modified-Wheeler inductance estimate,
//! the drawable centerline polyline, and the DC/AC trace resistance.
//! Geometry fields are millimetres; operation results are SI (H, m, Ω).

use std::f64::consts::PI;

use thiserror::Error;

/// Permeability of free space (H/m).
pub const MU_0: f64 = 4.0e-7 * PI;

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Errors raised by coil geometry and conductor operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoilError {
    /// The turn stack consumes the outline: min side − 2·(N·w + (N−1)·s) ≤ 0.
    #[error("InnerOpeningNonPositive: inner opening {d_in_mm:.3} mm (turn stack {stack_mm:.3} mm over a {min_side_mm:.3} mm side)")]
    InnerOpeningNonPositive {
        d_in_mm: f64,
        stack_mm: f64,
        min_side_mm: f64,
    },
    #[error("NonPositiveFrequency: {frequency_hz} Hz")]
    NonPositiveFrequency { frequency_hz: f64 },
    #[error("InvalidGeometry: {0}")]
    InvalidGeometry(&'static str),
}

/// Outline shape of the spiral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoilShape {
    Rectangular,
    Square,
}

/// Substrate description. Stored as metadata; no implemented formula
/// consumes the permittivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstrateSpec {
    pub thickness_mm: f64,
    pub relative_permittivity: f64,
}

impl Default for SubstrateSpec {
    /// 5-mil flexible fiberglass.
    fn default() -> Self {
        Self {
            thickness_mm: 0.127,
            relative_permittivity: 4.6,
        }
    }
}

/// Conductor material for resistance and skin-depth estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConductorMaterial {
    pub resistivity_ohm_m: f64,
    pub relative_permeability: f64,
}

impl ConductorMaterial {
    pub fn copper() -> Self {
        Self::default()
    }
}

impl Default for ConductorMaterial {
    fn default() -> Self {
        Self {
            resistivity_ohm_m: 1.72e-8,
            relative_permeability: 1.0,
        }
    }
}

/// Constants of the modified Wheeler inductance formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WheelerConstants {
    pub k1: f64,
    pub k2: f64,
    pub mu0_h_per_m: f64,
}

impl Default for WheelerConstants {
    fn default() -> Self {
        Self {
            k1: 2.34,
            k2: 2.75,
            mu0_h_per_m: MU_0,
        }
    }
}

/// Parametric description of a rectangular or square planar spiral coil.
///
/// `outer_length_mm` is the long side (Lx), `outer_width_mm` the short side
/// (Ly), both measured to the outer copper edge. `turn_spacing_mm` is the
/// edge-to-edge clearance between adjacent turns.
#[derive(Debug, Clone, PartialEq)]
pub struct CoilGeometry {
    pub shape: CoilShape,
    pub outer_length_mm: f64,
    pub outer_width_mm: f64,
    pub turns: u32,
    pub trace_width_mm: f64,
    pub turn_spacing_mm: f64,
    pub conductor_thickness_mm: f64,
    pub substrate: SubstrateSpec,
}

impl CoilGeometry {
    pub fn rectangular(
        outer_length_mm: f64,
        outer_width_mm: f64,
        turns: u32,
        trace_width_mm: f64,
        turn_spacing_mm: f64,
        conductor_thickness_mm: f64,
    ) -> Self {
        Self {
            shape: CoilShape::Rectangular,
            outer_length_mm,
            outer_width_mm,
            turns,
            trace_width_mm,
            turn_spacing_mm,
            conductor_thickness_mm,
            substrate: SubstrateSpec::default(),
        }
    }

    pub fn square(
        side_mm: f64,
        turns: u32,
        trace_width_mm: f64,
        turn_spacing_mm: f64,
        conductor_thickness_mm: f64,
    ) -> Self {
        Self {
            shape: CoilShape::Square,
            outer_length_mm: side_mm,
            outer_width_mm: side_mm,
            turns,
            trace_width_mm,
            turn_spacing_mm,
            conductor_thickness_mm,
            substrate: SubstrateSpec::default(),
        }
    }

    /// Radial depth of the winding: N·w + (N−1)·s.
    pub fn turn_stack_mm(&self) -> f64 {
        let n = self.turns as f64;
        n * self.trace_width_mm + (n - 1.0) * self.turn_spacing_mm
    }

    /// Inner opening side lengths (copper edge to copper edge).
    pub fn inner_opening_mm(&self) -> (f64, f64) {
        let stack = self.turn_stack_mm();
        (
            self.outer_length_mm - 2.0 * stack,
            self.outer_width_mm - 2.0 * stack,
        )
    }

    /// Check every construction invariant.
    pub fn validate(&self) -> Result<(), CoilError> {
        if self.turns < 1 {
            return Err(CoilError::InvalidGeometry("turns must be at least 1"));
        }
        if !positive(self.trace_width_mm) {
            return Err(CoilError::InvalidGeometry("trace width must be positive"));
        }
        if !(self.turn_spacing_mm.is_finite() && self.turn_spacing_mm >= 0.0) {
            return Err(CoilError::InvalidGeometry(
                "turn spacing must be non-negative",
            ));
        }
        if !positive(self.conductor_thickness_mm) {
            return Err(CoilError::InvalidGeometry(
                "conductor thickness must be positive",
            ));
        }
        if !positive(self.outer_length_mm) || !positive(self.outer_width_mm) {
            return Err(CoilError::InvalidGeometry(
                "outline dimensions must be positive",
            ));
        }
        if self.shape == CoilShape::Square && self.outer_length_mm != self.outer_width_mm {
            return Err(CoilError::InvalidGeometry(
                "square shape requires equal outline sides",
            ));
        }
        if !positive(self.substrate.thickness_mm) {
            return Err(CoilError::InvalidGeometry(
                "substrate thickness must be positive",
            ));
        }
        if !(self.substrate.relative_permittivity.is_finite()
            && self.substrate.relative_permittivity >= 1.0)
        {
            return Err(CoilError::InvalidGeometry(
                "substrate permittivity must be at least 1",
            ));
        }
        let min_side = self.outer_length_mm.min(self.outer_width_mm);
        let stack = self.turn_stack_mm();
        let inner = min_side - 2.0 * stack;
        if inner <= 0.0 {
            return Err(CoilError::InnerOpeningNonPositive {
                d_in_mm: inner,
                stack_mm: stack,
                min_side_mm: min_side,
            });
        }
        Ok(())
    }
}

/// Side-averaged diameters of the spiral annulus.
///
/// `d_out_mm` averages the two outer side lengths (outer copper edge),
/// `d_in_mm` averages the two inner opening sides (inner copper edge).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedDimensions {
    pub d_out_mm: f64,
    pub d_in_mm: f64,
    pub d_mean_mm: f64,
    pub fill_ratio: f64,
}

/// Side-averaged outer/inner/mean diameters and fill ratio.
pub fn derive_dimensions(geometry: &CoilGeometry) -> Result<DerivedDimensions, CoilError> {
    geometry.validate()?;
    let d_out = (geometry.outer_length_mm + geometry.outer_width_mm) / 2.0;
    let d_in = d_out - 2.0 * geometry.turn_stack_mm();
    Ok(DerivedDimensions {
        d_out_mm: d_out,
        d_in_mm: d_in,
        d_mean_mm: (d_out + d_in) / 2.0,
        fill_ratio: (d_out - d_in) / (d_out + d_in),
    })
}

/// Modified-Wheeler inductance estimate in henries:
/// L = K1·µ0·N²·d / (1 + K2·p), with the mean diameter d in metres.
///
/// The formula is stated for square coils; rectangles are handled by
/// side-averaging the outline first, which widens the expected error band.
pub fn inductance_wheeler(
    geometry: &CoilGeometry,
    constants: &WheelerConstants,
) -> Result<f64, CoilError> {
    let dims = derive_dimensions(geometry)?;
    let n = geometry.turns as f64;
    let d_mean_m = dims.d_mean_mm * 1e-3;
    Ok(constants.k1 * constants.mu0_h_per_m * n * n * d_mean_m
        / (1.0 + constants.k2 * dims.fill_ratio))
}

/// A point on the layout plane, millimetres, y up, origin at the
/// bottom-left corner of the coil outline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x_mm: f64,
    pub y_mm: f64,
}

impl Point {
    pub fn new(x_mm: f64, y_mm: f64) -> Self {
        Self { x_mm, y_mm }
    }

    pub fn distance_to(&self, other: &Point) -> f64 {
        (self.x_mm - other.x_mm).hypot(self.y_mm - other.y_mm)
    }
}

/// Centerline of the spiral as an ordered vertex list.
///
/// N turns, constant pitch w+s, right-angle corners, wound inward clockwise
/// from the outer terminal at the top-left corner of the outline. Vertices
/// sit on the trace centerline, so the path is inset w/2 from the stated
/// outline on every side. 4 segments per turn, 4N+1 vertices; the final
/// vertex stops one pitch short of the turn's top side (entry gap).
pub fn coil_centerline(geometry: &CoilGeometry) -> Result<Vec<Point>, CoilError> {
    geometry.validate()?;
    let lx = geometry.outer_length_mm;
    let ly = geometry.outer_width_mm;
    let half = geometry.trace_width_mm / 2.0;
    let pitch = geometry.trace_width_mm + geometry.turn_spacing_mm;

    let mut verts = Vec::with_capacity(4 * geometry.turns as usize + 1);
    verts.push(Point::new(half, ly - half));
    for k in 0..geometry.turns as u64 {
        let inset = half + k as f64 * pitch;
        let left = inset;
        let right = lx - inset;
        let top = ly - inset;
        let bottom = inset;
        verts.push(Point::new(right, top));
        verts.push(Point::new(right, bottom));
        verts.push(Point::new(left, bottom));
        // Entry gap: stop one pitch below the top side. Clamped for the
        // single-turn case where the pitch can exceed the opening.
        verts.push(Point::new(left, (top - pitch).max(bottom)));
    }
    Ok(verts)
}

/// Total polyline length in metres. Returns 0 for fewer than 2 vertices.
pub fn trace_length(polyline: &[Point]) -> f64 {
    polyline
        .windows(2)
        .map(|pair| pair[0].distance_to(&pair[1]))
        .sum::<f64>()
        * 1e-3
}

/// Skin depth δ = sqrt(2ρ / (2πf·µ0·µr)) in metres.
pub fn skin_depth(frequency_hz: f64, material: &ConductorMaterial) -> Result<f64, CoilError> {
    if !positive(frequency_hz) {
        return Err(CoilError::NonPositiveFrequency { frequency_hz });
    }
    let omega = 2.0 * PI * frequency_hz;
    Ok((2.0 * material.resistivity_ohm_m / (omega * MU_0 * material.relative_permeability)).sqrt())
}

/// Series resistance of the spiral trace in ohms.
///
/// DC: ρ·ℓ/(w·t). Above DC the cross-section thickness is replaced by the
/// effective thickness t_eff = δ·(1 − e^(−t/δ)). Proximity effect between
/// adjacent turns is not modeled, so measured values run higher.
pub fn trace_resistance(
    geometry: &CoilGeometry,
    material: &ConductorMaterial,
    frequency_hz: f64,
) -> Result<f64, CoilError> {
    if frequency_hz < 0.0 || frequency_hz.is_nan() {
        return Err(CoilError::NonPositiveFrequency { frequency_hz });
    }
    let length_m = trace_length(&coil_centerline(geometry)?);
    let width_m = geometry.trace_width_mm * 1e-3;
    let thickness_m = geometry.conductor_thickness_mm * 1e-3;
    let t_eff = if frequency_hz == 0.0 {
        thickness_m
    } else {
        let delta = skin_depth(frequency_hz, material)?;
        delta * (1.0 - (-thickness_m / delta).exp())
    };
    Ok(material.resistivity_ohm_m * length_m / (width_m * t_eff))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn antenna1() -> CoilGeometry {
        CoilGeometry::rectangular(160.0, 80.0, 4, 0.5, 2.0, 0.0175)
    }

    pub(crate) fn antenna2() -> CoilGeometry {
        CoilGeometry::square(80.0, 3, 0.6, 2.0, 0.0175)
    }

    fn rel_err(actual: f64, expected: f64) -> f64 {
        (actual - expected).abs() / expected.abs()
    }

    #[test]
    fn derive_antenna2() {
        let d = derive_dimensions(&antenna2()).unwrap();
        assert!((d.d_out_mm - 80.0).abs() < 1e-12);
        assert!((d.d_in_mm - 68.4).abs() < 1e-12);
        assert!((d.d_mean_mm - 74.2).abs() < 1e-12);
        assert!(rel_err(d.fill_ratio, 0.0781671) < 1e-5);
    }

    #[test]
    fn derive_antenna1() {
        let d = derive_dimensions(&antenna1()).unwrap();
        let (ix, iy) = antenna1().inner_opening_mm();
        assert!((ix - 144.0).abs() < 1e-12);
        assert!((iy - 64.0).abs() < 1e-12);
        assert!((d.d_out_mm - 120.0).abs() < 1e-12);
        assert!((d.d_in_mm - 104.0).abs() < 1e-12);
        assert!((d.d_mean_mm - 112.0).abs() < 1e-12);
        assert!(rel_err(d.fill_ratio, 1.0 / 14.0) < 1e-12);
    }

    #[test]
    fn derive_single_thin_turn_degenerates() {
        // N=1, w→0: d_in → d_out, p → 0, regardless of spacing.
        let g = CoilGeometry::square(80.0, 1, 1e-9, 50.0, 0.0175);
        let d = derive_dimensions(&g).unwrap();
        assert!((d.d_in_mm - d.d_out_mm).abs() < 1e-8);
        assert!(d.fill_ratio < 1e-10);
    }

    #[test]
    fn derive_rejects_consumed_outline() {
        let g = CoilGeometry::square(80.0, 17, 0.6, 2.0, 0.0175);
        match derive_dimensions(&g) {
            Err(CoilError::InnerOpeningNonPositive { d_in_mm, .. }) => {
                assert!((d_in_mm - -4.4).abs() < 1e-9)
            }
            other => panic!("expected InnerOpeningNonPositive, got {other:?}"),
        }
    }

    #[test]
    fn wheeler_antenna2() {
        let l = inductance_wheeler(&antenna2(), &WheelerConstants::default()).unwrap();
        assert!(rel_err(l, 1.616257e-6) < 1e-5);
        // within 5% of the measured 1.62 uH
        assert!(rel_err(l, 1.62e-6) < 0.05);
    }

    #[test]
    fn wheeler_antenna1() {
        let l = inductance_wheeler(&antenna1(), &WheelerConstants::default()).unwrap();
        assert!(rel_err(l, 4.404301e-6) < 1e-5);
        // side-averaged rectangle adaptation: 15% band vs measured 4.85 uH
        assert!(rel_err(l, 4.85e-6) < 0.15);
    }

    #[test]
    fn wheeler_turns_squared() {
        // Holding d_mean and p fixed, doubling N quadruples L.
        let k = WheelerConstants::default();
        let d_m = 0.0742;
        let p = 0.078;
        let l_n = |n: f64| k.k1 * k.mu0_h_per_m * n * n * d_m / (1.0 + k.k2 * p);
        assert!((l_n(6.0) / l_n(3.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn centerline_single_turn() {
        let g = CoilGeometry::square(80.0, 1, 0.5, 2.0, 0.0175);
        let v = coil_centerline(&g).unwrap();
        assert_eq!(v.len(), 5);
        // closes the turn up to the entry gap of one pitch
        assert_eq!(v[0], Point::new(0.25, 79.75));
        assert_eq!(v[4], Point::new(0.25, 79.75 - 2.5));
    }

    #[test]
    fn centerline_antenna1_shape() {
        let v = coil_centerline(&antenna1()).unwrap();
        assert_eq!(v.len(), 17);
        for pair in v.windows(2) {
            let axis_aligned = pair[0].x_mm == pair[1].x_mm || pair[0].y_mm == pair[1].y_mm;
            assert!(axis_aligned);
        }
        // bounding box inset by w/2 from the outline on every side
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &v {
            xmin = xmin.min(p.x_mm);
            xmax = xmax.max(p.x_mm);
            ymin = ymin.min(p.y_mm);
            ymax = ymax.max(p.y_mm);
        }
        assert_eq!((xmin, xmax), (0.25, 159.75));
        assert_eq!((ymin, ymax), (0.25, 79.75));
    }

    #[test]
    fn trace_length_antenna1() {
        let v = coil_centerline(&antenna1()).unwrap();
        assert!(rel_err(trace_length(&v), 1.7895) < 1e-9);
    }

    #[test]
    fn trace_length_single_turn() {
        // 80x80 single turn: perimeter of the inset square minus the entry gap
        let g = CoilGeometry::square(80.0, 1, 0.5, 2.0, 0.0175);
        let v = coil_centerline(&g).unwrap();
        let expected = (4.0 * 79.5 - 2.5) * 1e-3;
        assert!((trace_length(&v) - expected).abs() < 1e-12);
    }

    #[test]
    fn trace_length_two_vertices() {
        let v = [Point::new(0.0, 0.0), Point::new(10.0, 0.0)];
        assert!((trace_length(&v) - 0.010).abs() < 1e-15);
        assert_eq!(trace_length(&v[..1]), 0.0);
    }

    #[test]
    fn skin_depth_copper() {
        let cu = ConductorMaterial::copper();
        let d = skin_depth(13.56e6, &cu).unwrap();
        assert!(rel_err(d, 17.925e-6) < 1e-3);
        let d60 = skin_depth(60.0, &cu).unwrap();
        assert!(rel_err(d60, 8.521e-3) < 1e-3);
        assert!(skin_depth(0.0, &cu).is_err());
        assert!(skin_depth(-1.0, &cu).is_err());
    }

    #[test]
    fn skin_depth_quarter_frequency() {
        let cu = ConductorMaterial::copper();
        let f = 7.3e6;
        let d1 = skin_depth(f, &cu).unwrap();
        let d4 = skin_depth(4.0 * f, &cu).unwrap();
        assert_eq!(d4, d1 / 2.0);
    }

    #[test]
    fn resistance_antenna1_dc() {
        let r = trace_resistance(&antenna1(), &ConductorMaterial::copper(), 0.0).unwrap();
        assert!(rel_err(r, 3.5176) < 1e-3);
    }

    #[test]
    fn resistance_rises_with_frequency() {
        let cu = ConductorMaterial::copper();
        let r_dc = trace_resistance(&antenna1(), &cu, 0.0).unwrap();
        for f in [1e3, 1e5, 1e6, 13.56e6, 1e9] {
            assert!(trace_resistance(&antenna1(), &cu, f).unwrap() >= r_dc);
        }
    }

    #[test]
    fn resistance_antenna1_hf_band() {
        let cu = ConductorMaterial::copper();
        let r_dc = trace_resistance(&antenna1(), &cu, 0.0).unwrap();
        let r_ac = trace_resistance(&antenna1(), &cu, 13.56e6).unwrap();
        assert!(r_ac >= r_dc && r_ac <= 3.0 * r_dc);
        // measured 10 ohm, proximity effect unmodeled: factor-3 band only
        assert!(r_ac > 10.0 / 3.0 && r_ac < 10.0 * 3.0);
    }

    #[test]
    fn validate_rejects_bad_fields() {
        let mut g = antenna2();
        g.trace_width_mm = 0.0;
        assert!(g.validate().is_err());
        let mut g = antenna2();
        g.turns = 0;
        assert!(g.validate().is_err());
        let mut g = antenna2();
        g.outer_width_mm = 79.0;
        assert!(matches!(g.validate(), Err(CoilError::InvalidGeometry(_))));
    }
}
