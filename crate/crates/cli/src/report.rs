//! Analysis report assembly: one human-readable text form and one
//! machine-readable JSON form. The JSON form is the stable test surface;
//! every numeric field name carries its unit.

use std::fmt::Write;

use serde::Serialize;

use tagcoil::circuit::{q_factor, synthesize_tuning, ChipModel, SnapSeries, TagNetwork};
use tagcoil::coil::{
    coil_centerline, derive_dimensions, inductance_wheeler, skin_depth, trace_length,
    trace_resistance, CoilGeometry, CoilShape, ConductorMaterial, WheelerConstants,
};

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub geometry: GeometryReport,
    pub derived: DerivedReport,
    pub inductance_uh: f64,
    pub trace_length_m: f64,
    pub skin_depth_um: f64,
    pub resistance_dc_ohm: f64,
    pub resistance_ac_ohm: f64,
    pub q_factor: f64,
    pub tuning: TuningReport,
    pub frequency_mhz: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct GeometryReport {
    pub shape: String,
    pub outer_length_mm: f64,
    pub outer_width_mm: f64,
    pub turns: u32,
    pub trace_width_mm: f64,
    pub turn_spacing_mm: f64,
    pub conductor_thickness_mm: f64,
}

#[derive(Debug, Serialize)]
pub struct DerivedReport {
    pub d_out_mm: f64,
    pub d_in_mm: f64,
    pub d_mean_mm: f64,
    pub fill_ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct TuningReport {
    pub topology: String,
    pub c_tune_pf: f64,
    pub achieved_frequency_mhz: f64,
    pub snapped: bool,
}

impl From<&tagcoil::circuit::TuningSolution> for TuningReport {
    fn from(sol: &tagcoil::circuit::TuningSolution) -> Self {
        Self {
            topology: sol.topology.as_str().to_string(),
            c_tune_pf: sol.c_tune_f * 1e12,
            achieved_frequency_mhz: sol.achieved_frequency_hz * 1e-6,
            snapped: sol.snapped,
        }
    }
}

/// Run the full analysis pipeline for one geometry at one frequency.
pub fn analyze(
    geometry: &CoilGeometry,
    chip: &ChipModel,
    material: &ConductorMaterial,
    constants: &WheelerConstants,
    frequency_mhz: f64,
) -> Result<AnalysisReport, String> {
    let frequency_hz = frequency_mhz * 1e6;
    let derived = derive_dimensions(geometry).map_err(|e| e.to_string())?;
    let inductance = inductance_wheeler(geometry, constants).map_err(|e| e.to_string())?;
    let centerline = coil_centerline(geometry).map_err(|e| e.to_string())?;
    let length_m = trace_length(&centerline);
    let delta = skin_depth(frequency_hz, material).map_err(|e| e.to_string())?;
    let r_dc = trace_resistance(geometry, material, 0.0).map_err(|e| e.to_string())?;
    let r_ac = trace_resistance(geometry, material, frequency_hz).map_err(|e| e.to_string())?;
    let tuning = synthesize_tuning(inductance, chip, frequency_hz, SnapSeries::Exact)
        .map_err(|e| e.to_string())?;
    let network = TagNetwork {
        antenna_inductance_h: inductance,
        antenna_resistance_ohm: r_ac,
        chip: *chip,
        tuning: Some(tuning),
    };
    let q = q_factor(&network).map_err(|e| e.to_string())?;

    let mut warnings = Vec::new();
    if geometry.shape == CoilShape::Rectangular {
        warnings.push(
            "rectangular outline: inductance uses the side-averaged square model; \
             expect a wider error band than for squares"
                .to_string(),
        );
    }
    warnings.push(
        "AC resistance models skin effect only; proximity effect between turns \
         is unmodeled, measured values run higher"
            .to_string(),
    );

    Ok(AnalysisReport {
        geometry: GeometryReport {
            shape: match geometry.shape {
                CoilShape::Rectangular => "rectangular".to_string(),
                CoilShape::Square => "square".to_string(),
            },
            outer_length_mm: geometry.outer_length_mm,
            outer_width_mm: geometry.outer_width_mm,
            turns: geometry.turns,
            trace_width_mm: geometry.trace_width_mm,
            turn_spacing_mm: geometry.turn_spacing_mm,
            conductor_thickness_mm: geometry.conductor_thickness_mm,
        },
        derived: DerivedReport {
            d_out_mm: derived.d_out_mm,
            d_in_mm: derived.d_in_mm,
            d_mean_mm: derived.d_mean_mm,
            fill_ratio: derived.fill_ratio,
        },
        inductance_uh: inductance * 1e6,
        trace_length_m: length_m,
        skin_depth_um: delta * 1e6,
        resistance_dc_ohm: r_dc,
        resistance_ac_ohm: r_ac,
        q_factor: q,
        tuning: TuningReport::from(&tuning),
        frequency_mhz,
        warnings,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let g = &self.geometry;
        let _ = writeln!(
            s,
            "coil       {} {} x {} mm, {} turns, trace {} mm, spacing {} mm, copper {} mm",
            g.shape,
            g.outer_length_mm,
            g.outer_width_mm,
            g.turns,
            g.trace_width_mm,
            g.turn_spacing_mm,
            g.conductor_thickness_mm
        );
        let _ = writeln!(
            s,
            "derived    d_out {:.3} mm, d_in {:.3} mm, d_mean {:.3} mm, fill ratio {:.5}",
            self.derived.d_out_mm,
            self.derived.d_in_mm,
            self.derived.d_mean_mm,
            self.derived.fill_ratio
        );
        let _ = writeln!(s, "inductance {:.4} uH", self.inductance_uh);
        let _ = writeln!(
            s,
            "trace      {:.4} m, {:.3} ohm dc, {:.3} ohm at {:.2} MHz (skin depth {:.2} um)",
            self.trace_length_m,
            self.resistance_dc_ohm,
            self.resistance_ac_ohm,
            self.frequency_mhz,
            self.skin_depth_um
        );
        let _ = writeln!(
            s,
            "tuning     {}, {:.1} pF -> {:.3} MHz{}",
            self.tuning.topology,
            self.tuning.c_tune_pf,
            self.tuning.achieved_frequency_mhz,
            if self.tuning.snapped {
                " (snapped)"
            } else {
                ""
            }
        );
        let _ = writeln!(s, "q factor   {:.1}", self.q_factor);
        for w in &self.warnings {
            let _ = writeln!(s, "note       {w}");
        }
        s
    }
}
