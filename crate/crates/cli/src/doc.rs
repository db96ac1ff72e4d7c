//! Design-document format: a TOML file with explicit unit suffixes on
//! every field name. Unknown keys are rejected; unit mistakes are the
//! dominant failure mode this format is built to catch.

use serde::Deserialize;

use tagcoil::circuit::ChipModel;
use tagcoil::coil::{CoilGeometry, CoilShape, ConductorMaterial, SubstrateSpec, WheelerConstants};
use tagcoil::coupling::CouplingScenario;
use tagcoil::synth::{DesignRules, SynthesisTarget};
use tagcoil::NFC_FREQUENCY_HZ;

/// A document problem, split by whose fault it is: `Usage` covers missing
/// or malformed input, `Domain` a well-formed document the physics rejects.
#[derive(Debug)]
pub enum DocError {
    Usage(String),
    Domain(String),
}

/// Parsed design document. Only the sections a command needs must be
/// present; `geometry` is required by every current command.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDocument {
    pub geometry: Option<GeometrySection>,
    pub antenna: Option<AntennaSection>,
    pub chip: Option<ChipSection>,
    pub conductor: Option<ConductorSection>,
    pub wheeler: Option<WheelerSection>,
    pub rules: Option<RulesSection>,
    pub target: Option<TargetSection>,
    pub scenario: Option<ScenarioSection>,
}

/// Measured antenna values from an impedance analyzer. When present they
/// take precedence over the geometry estimates for circuit work (tuning,
/// sweeps), matching the measure-then-tune workflow. A soldered tuning
/// capacitor can be recorded too, so sweeps simulate the as-built tag.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaSection {
    pub inductance_uh: Option<f64>,
    pub resistance_ohm: Option<f64>,
    pub tuning_topology: Option<TopologyField>,
    pub c_tune_pf: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyField {
    Series,
    Parallel,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub shape: ShapeField,
    pub outer_length_mm: f64,
    pub outer_width_mm: f64,
    pub turns: u32,
    pub trace_width_mm: f64,
    pub turn_spacing_mm: f64,
    pub conductor_thickness_mm: f64,
    pub substrate: Option<SubstrateSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeField {
    Rectangular,
    Square,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstrateSection {
    pub thickness_mm: f64,
    pub relative_permittivity: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChipSection {
    pub capacitance_pf: f64,
    /// Use `inf` for an unloaded chip branch.
    pub resistance_kohm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductorSection {
    pub resistivity_ohm_m: f64,
    pub relative_permeability: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WheelerSection {
    pub k1: f64,
    pub k2: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RulesSection {
    pub min_trace_width_mm: Option<f64>,
    pub max_trace_width_mm: Option<f64>,
    pub min_spacing_mm: Option<f64>,
    pub max_spacing_mm: Option<f64>,
    pub max_outer_length_mm: Option<f64>,
    pub max_outer_width_mm: Option<f64>,
    pub max_turns: Option<u32>,
    pub width_grid_mm: Option<f64>,
    pub spacing_grid_mm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub mode: TargetModeField,
    pub inductance_uh: Option<f64>,
    pub frequency_mhz: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetModeField {
    Inductance,
    Resonance,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub reader_side_mm: Option<f64>,
    pub subdivisions: Option<u32>,
    pub drive_a: Option<f64>,
    /// Detection threshold. When absent the threshold is calibrated per
    /// `calibrate_range_m`, or against the reference square fixture.
    pub threshold_emf_v: Option<f64>,
    /// Calibrate the threshold so this document's own tag reads at the
    /// given separation.
    pub calibrate_range_m: Option<f64>,
    pub max_range_m: Option<f64>,
    pub frequency_mhz: Option<f64>,
}

impl DesignDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("design document: {e}"))
    }

    pub fn geometry(&self) -> Result<CoilGeometry, String> {
        let section = self
            .geometry
            .as_ref()
            .ok_or("design document: missing [geometry] section")?;
        let substrate = section
            .substrate
            .as_ref()
            .map(|s| SubstrateSpec {
                thickness_mm: s.thickness_mm,
                relative_permittivity: s.relative_permittivity,
            })
            .unwrap_or_default();
        let geometry = CoilGeometry {
            shape: match section.shape {
                ShapeField::Rectangular => CoilShape::Rectangular,
                ShapeField::Square => CoilShape::Square,
            },
            outer_length_mm: section.outer_length_mm,
            outer_width_mm: section.outer_width_mm,
            turns: section.turns,
            trace_width_mm: section.trace_width_mm,
            turn_spacing_mm: section.turn_spacing_mm,
            conductor_thickness_mm: section.conductor_thickness_mm,
            substrate,
        };
        Ok(geometry)
    }

    /// Antenna inductance for circuit work: the measured value when given,
    /// the modified-Wheeler estimate otherwise.
    pub fn antenna_inductance_h(&self) -> Result<f64, DocError> {
        if let Some(a) = &self.antenna {
            if let Some(uh) = a.inductance_uh {
                return Ok(uh * 1e-6);
            }
        }
        let geometry = self.geometry().map_err(DocError::Usage)?;
        tagcoil::coil::inductance_wheeler(&geometry, &self.wheeler())
            .map_err(|e| DocError::Domain(e.to_string()))
    }

    /// Antenna series resistance at `frequency_hz`: measured when given,
    /// the skin-effect trace model otherwise.
    pub fn antenna_resistance_ohm(&self, frequency_hz: f64) -> Result<f64, DocError> {
        if let Some(a) = &self.antenna {
            if let Some(ohm) = a.resistance_ohm {
                return Ok(ohm);
            }
        }
        let geometry = self.geometry().map_err(DocError::Usage)?;
        tagcoil::coil::trace_resistance(&geometry, &self.conductor(), frequency_hz)
            .map_err(|e| DocError::Domain(e.to_string()))
    }

    /// Tuning capacitor already installed on the tag, if the document
    /// records one. Its achieved frequency is recomputed from the
    /// document's inductance and chip.
    pub fn installed_tuning(&self) -> Result<Option<tagcoil::circuit::TuningSolution>, DocError> {
        let Some(a) = &self.antenna else {
            return Ok(None);
        };
        match (a.tuning_topology, a.c_tune_pf) {
            (None, None) => Ok(None),
            (Some(topology), Some(pf)) => {
                let topology = match topology {
                    TopologyField::Series => tagcoil::circuit::Topology::Series,
                    TopologyField::Parallel => tagcoil::circuit::Topology::Parallel,
                };
                let c_tune_f = pf * 1e-12;
                let ls = self.antenna_inductance_h()?;
                let ceq = tagcoil::circuit::equivalent_capacitance(
                    self.chip().capacitance_f,
                    c_tune_f,
                    topology,
                )
                .map_err(|e| DocError::Domain(e.to_string()))?;
                let achieved = tagcoil::circuit::resonance_frequency(ls, ceq)
                    .map_err(|e| DocError::Domain(e.to_string()))?;
                Ok(Some(tagcoil::circuit::TuningSolution {
                    topology,
                    c_tune_f,
                    achieved_frequency_hz: achieved,
                    snapped: true,
                }))
            }
            _ => Err(DocError::Usage(
                "design document: [antenna] needs both tuning_topology and c_tune_pf or neither"
                    .into(),
            )),
        }
    }

    pub fn chip(&self) -> ChipModel {
        match &self.chip {
            Some(c) => ChipModel {
                capacitance_f: c.capacitance_pf * 1e-12,
                resistance_ohm: c.resistance_kohm.map_or(50e3, |k| k * 1e3),
            },
            None => ChipModel::default(),
        }
    }

    pub fn conductor(&self) -> ConductorMaterial {
        match &self.conductor {
            Some(c) => ConductorMaterial {
                resistivity_ohm_m: c.resistivity_ohm_m,
                relative_permeability: c.relative_permeability.unwrap_or(1.0),
            },
            None => ConductorMaterial::copper(),
        }
    }

    pub fn wheeler(&self) -> WheelerConstants {
        match &self.wheeler {
            Some(w) => WheelerConstants {
                k1: w.k1,
                k2: w.k2,
                ..WheelerConstants::default()
            },
            None => WheelerConstants::default(),
        }
    }

    pub fn rules(&self) -> DesignRules {
        let mut rules = DesignRules::default();
        if let Some(r) = &self.rules {
            if let Some(v) = r.min_trace_width_mm {
                rules.min_trace_width_mm = v;
            }
            if let Some(v) = r.max_trace_width_mm {
                rules.max_trace_width_mm = v;
            }
            if let Some(v) = r.min_spacing_mm {
                rules.min_spacing_mm = v;
            }
            if let Some(v) = r.max_spacing_mm {
                rules.max_spacing_mm = v;
            }
            if let Some(v) = r.max_outer_length_mm {
                rules.max_outer_length_mm = v;
            }
            if let Some(v) = r.max_outer_width_mm {
                rules.max_outer_width_mm = v;
            }
            if let Some(v) = r.max_turns {
                rules.max_turns = v;
            }
            if let Some(v) = r.width_grid_mm {
                rules.width_grid_mm = v;
            }
            if let Some(v) = r.spacing_grid_mm {
                rules.spacing_grid_mm = v;
            }
        }
        rules
    }

    pub fn target(&self) -> Result<SynthesisTarget, String> {
        let section = self
            .target
            .as_ref()
            .ok_or("design document: missing [target] section")?;
        let tolerance = section
            .tolerance
            .unwrap_or(tagcoil::synth::DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err("design document: target tolerance must be in (0, 1)".into());
        }
        match section.mode {
            TargetModeField::Inductance => {
                let uh = section
                    .inductance_uh
                    .ok_or("design document: inductance mode needs inductance_uh")?;
                Ok(SynthesisTarget::Inductance {
                    henries: uh * 1e-6,
                    tolerance,
                })
            }
            TargetModeField::Resonance => {
                let mhz = section
                    .frequency_mhz
                    .ok_or("design document: resonance mode needs frequency_mhz")?;
                Ok(SynthesisTarget::Resonance {
                    frequency_hz: mhz * 1e6,
                    chip: self.chip(),
                    tolerance,
                })
            }
        }
    }

    /// Build the coupling scenario for this document's tag. The threshold
    /// resolution order: explicit `threshold_emf_v`, else calibration at
    /// `calibrate_range_m` on this tag, else the reference calibration
    /// (80 mm square fixture reading at 5.0 cm).
    pub fn scenario(&self) -> Result<(CouplingScenario, f64), String> {
        let geometry = self.geometry()?;
        let section = self.scenario.as_ref();
        let frequency_hz = section
            .and_then(|s| s.frequency_mhz)
            .map_or(NFC_FREQUENCY_HZ, |mhz| mhz * 1e6);

        let mut scenario = CouplingScenario::new(geometry);
        if let Some(s) = section {
            if let Some(side) = s.reader_side_mm {
                let subs = s
                    .subdivisions
                    .unwrap_or(tagcoil::coupling::DEFAULT_SUBDIVISIONS);
                scenario.reader = tagcoil::coupling::FilamentCoil::single_turn_rectangle(
                    side * 1e-3,
                    side * 1e-3,
                    0.0,
                    subs,
                );
            }
            if let Some(subs) = s.subdivisions {
                scenario.subdivisions_per_side = subs;
            }
            if let Some(drive) = s.drive_a {
                scenario.drive_current_a = drive;
            }
            if let Some(max) = s.max_range_m {
                scenario.max_range_m = max;
            }
        }

        match section {
            Some(s) if s.threshold_emf_v.is_some() => {
                scenario.threshold_emf_v = s.threshold_emf_v.unwrap();
            }
            Some(s) if s.calibrate_range_m.is_some() => {
                scenario
                    .calibrate_threshold(s.calibrate_range_m.unwrap(), frequency_hz)
                    .map_err(|e| e.to_string())?;
            }
            _ => {
                // Reference calibration: the published square fixture reads
                // at 5.0 cm with the same reader, drive and resolution.
                let reference = CoilGeometry::square(80.0, 3, 0.6, 2.0, 0.0175);
                let mut ref_scenario = CouplingScenario {
                    reader: scenario.reader.clone(),
                    tag_geometry: reference,
                    subdivisions_per_side: scenario.subdivisions_per_side,
                    drive_current_a: scenario.drive_current_a,
                    threshold_emf_v: 0.0,
                    max_range_m: scenario.max_range_m,
                };
                let threshold = ref_scenario
                    .calibrate_threshold(0.05, frequency_hz)
                    .map_err(|e| e.to_string())?;
                scenario.threshold_emf_v = threshold;
            }
        }
        Ok((scenario, frequency_hz))
    }
}
