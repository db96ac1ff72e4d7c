//! Geometry synthesis: exhaustive grid search over turns, trace width and
//! spacing to hit an inductance or resonance target under manufacturing
//! rules, plus the design-rule check itself.

use crate::circuit::{synthesize_tuning, ChipModel, SnapSeries, TuningSolution};
use crate::coil::{
    derive_dimensions, inductance_wheeler, CoilGeometry, CoilShape, WheelerConstants,
};

/// What the search is asked to hit.
#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisTarget {
    /// Match a coil inductance within `tolerance` (relative).
    Inductance { henries: f64, tolerance: f64 },
    /// Resonate with the given chip at `frequency_hz` within `tolerance`.
    /// Any coil tunes exactly with an ideal capacitor, so ranking falls
    /// through to the tie-breaks (fewer turns, wider trace).
    Resonance {
        frequency_hz: f64,
        chip: ChipModel,
        tolerance: f64,
    },
}

pub const DEFAULT_TOLERANCE: f64 = 0.05;

impl SynthesisTarget {
    pub fn inductance(henries: f64) -> Self {
        SynthesisTarget::Inductance {
            henries,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn resonance(frequency_hz: f64, chip: ChipModel) -> Self {
        SynthesisTarget::Resonance {
            frequency_hz,
            chip,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            SynthesisTarget::Inductance { tolerance, .. } => *tolerance,
            SynthesisTarget::Resonance { tolerance, .. } => *tolerance,
        }
    }
}

/// Manufacturing limits for hobby chemical etching. Grids define the
/// enumeration lattice for the search.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignRules {
    pub min_trace_width_mm: f64,
    pub max_trace_width_mm: f64,
    pub min_spacing_mm: f64,
    pub max_spacing_mm: f64,
    pub max_outer_length_mm: f64,
    pub max_outer_width_mm: f64,
    pub max_turns: u32,
    pub width_grid_mm: f64,
    pub spacing_grid_mm: f64,
}

impl Default for DesignRules {
    fn default() -> Self {
        Self {
            min_trace_width_mm: 0.3,
            max_trace_width_mm: 2.0,
            min_spacing_mm: 0.2,
            max_spacing_mm: 3.0,
            max_outer_length_mm: 200.0,
            max_outer_width_mm: 200.0,
            max_turns: 12,
            width_grid_mm: 0.1,
            spacing_grid_mm: 0.1,
        }
    }
}

/// A single design-rule violation. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq)]
pub enum DrcViolation {
    MinTraceWidth { actual_mm: f64, min_mm: f64 },
    MaxTraceWidth { actual_mm: f64, max_mm: f64 },
    MinSpacing { actual_mm: f64, min_mm: f64 },
    MaxSpacing { actual_mm: f64, max_mm: f64 },
    MaxOuterLength { actual_mm: f64, max_mm: f64 },
    MaxOuterWidth { actual_mm: f64, max_mm: f64 },
    MaxTurns { actual: u32, max: u32 },
    InnerOpeningNonPositive { d_in_mm: f64 },
}

impl std::fmt::Display for DrcViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DrcViolation::MinTraceWidth { actual_mm, min_mm } => {
                write!(f, "MinTraceWidth: {actual_mm} mm < {min_mm} mm")
            }
            DrcViolation::MaxTraceWidth { actual_mm, max_mm } => {
                write!(f, "MaxTraceWidth: {actual_mm} mm > {max_mm} mm")
            }
            DrcViolation::MinSpacing { actual_mm, min_mm } => {
                write!(f, "MinSpacing: {actual_mm} mm < {min_mm} mm")
            }
            DrcViolation::MaxSpacing { actual_mm, max_mm } => {
                write!(f, "MaxSpacing: {actual_mm} mm > {max_mm} mm")
            }
            DrcViolation::MaxOuterLength { actual_mm, max_mm } => {
                write!(f, "MaxOuterLength: {actual_mm} mm > {max_mm} mm")
            }
            DrcViolation::MaxOuterWidth { actual_mm, max_mm } => {
                write!(f, "MaxOuterWidth: {actual_mm} mm > {max_mm} mm")
            }
            DrcViolation::MaxTurns { actual, max } => {
                write!(f, "MaxTurns: {actual} > {max}")
            }
            DrcViolation::InnerOpeningNonPositive { d_in_mm } => {
                write!(f, "InnerOpeningNonPositive: d_in {d_in_mm:.3} mm")
            }
        }
    }
}

/// Check a geometry against the rules. Empty result means clean.
pub fn drc_check(geometry: &CoilGeometry, rules: &DesignRules) -> Vec<DrcViolation> {
    let mut violations = Vec::new();
    if geometry.trace_width_mm < rules.min_trace_width_mm {
        violations.push(DrcViolation::MinTraceWidth {
            actual_mm: geometry.trace_width_mm,
            min_mm: rules.min_trace_width_mm,
        });
    }
    if geometry.trace_width_mm > rules.max_trace_width_mm {
        violations.push(DrcViolation::MaxTraceWidth {
            actual_mm: geometry.trace_width_mm,
            max_mm: rules.max_trace_width_mm,
        });
    }
    if geometry.turn_spacing_mm < rules.min_spacing_mm {
        violations.push(DrcViolation::MinSpacing {
            actual_mm: geometry.turn_spacing_mm,
            min_mm: rules.min_spacing_mm,
        });
    }
    if geometry.turn_spacing_mm > rules.max_spacing_mm {
        violations.push(DrcViolation::MaxSpacing {
            actual_mm: geometry.turn_spacing_mm,
            max_mm: rules.max_spacing_mm,
        });
    }
    if geometry.outer_length_mm > rules.max_outer_length_mm {
        violations.push(DrcViolation::MaxOuterLength {
            actual_mm: geometry.outer_length_mm,
            max_mm: rules.max_outer_length_mm,
        });
    }
    if geometry.outer_width_mm > rules.max_outer_width_mm {
        violations.push(DrcViolation::MaxOuterWidth {
            actual_mm: geometry.outer_width_mm,
            max_mm: rules.max_outer_width_mm,
        });
    }
    if geometry.turns > rules.max_turns {
        violations.push(DrcViolation::MaxTurns {
            actual: geometry.turns,
            max: rules.max_turns,
        });
    }
    let min_side = geometry.outer_length_mm.min(geometry.outer_width_mm);
    let d_in = min_side - 2.0 * geometry.turn_stack_mm();
    if d_in <= 0.0 {
        violations.push(DrcViolation::InnerOpeningNonPositive { d_in_mm: d_in });
    }
    violations
}

/// One scored entry of the search result.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateDesign {
    pub geometry: CoilGeometry,
    pub predicted_inductance_h: f64,
    /// |L − L_target|/L_target in inductance mode,
    /// |achieved − target|/target in resonance mode.
    pub relative_error: f64,
    pub tuning: Option<TuningSolution>,
}

// Errors equal to within this quantum count as tied, so ranking falls to
// the declared tie-breaks instead of float noise. Designs with the same
// turn count and turn stack predict identical inductance up to rounding.
const ERROR_QUANTUM: f64 = 1e-12;

fn error_bucket(relative_error: f64) -> i64 {
    (relative_error / ERROR_QUANTUM).round() as i64
}

/// Exhaustively enumerate turns and the width/spacing grids inside a fixed
/// outline, keep DRC-clean candidates within tolerance, and rank them by
/// relative error; ties break toward fewer turns, then wider trace.
pub fn search_geometry(
    target: &SynthesisTarget,
    outline_mm: (f64, f64),
    rules: &DesignRules,
) -> Vec<CandidateDesign> {
    let (outer_length, outer_width) = outline_mm;
    let shape = if outer_length == outer_width {
        CoilShape::Square
    } else {
        CoilShape::Rectangular
    };
    let constants = WheelerConstants::default();
    // Conductor thickness does not enter the inductance model; candidates
    // carry the common half-ounce foil value.
    let thickness_mm = 0.0175;

    let mut candidates = Vec::new();
    let widths = grid_values(
        rules.min_trace_width_mm,
        rules.max_trace_width_mm,
        rules.width_grid_mm,
    );
    let spacings = grid_values(
        rules.min_spacing_mm,
        rules.max_spacing_mm,
        rules.spacing_grid_mm,
    );

    for turns in 1..=rules.max_turns {
        for &width in &widths {
            // Spacing is irrelevant for a single turn; enumerate once.
            let spacing_slice = if turns == 1 {
                &spacings[..1]
            } else {
                &spacings[..]
            };
            for &spacing in spacing_slice {
                let geometry = CoilGeometry {
                    shape,
                    outer_length_mm: outer_length,
                    outer_width_mm: outer_width,
                    turns,
                    trace_width_mm: width,
                    turn_spacing_mm: spacing,
                    conductor_thickness_mm: thickness_mm,
                    substrate: Default::default(),
                };
                if !drc_check(&geometry, rules).is_empty() {
                    continue;
                }
                if derive_dimensions(&geometry).is_err() {
                    continue;
                }
                let inductance = match inductance_wheeler(&geometry, &constants) {
                    Ok(l) => l,
                    Err(_) => continue,
                };
                let (relative_error, tuning) = match target {
                    SynthesisTarget::Inductance { henries, .. } => {
                        ((inductance - henries).abs() / henries, None)
                    }
                    SynthesisTarget::Resonance {
                        frequency_hz, chip, ..
                    } => {
                        match synthesize_tuning(inductance, chip, *frequency_hz, SnapSeries::Exact)
                        {
                            Ok(sol) => (
                                (sol.achieved_frequency_hz - frequency_hz).abs() / frequency_hz,
                                Some(sol),
                            ),
                            Err(_) => continue,
                        }
                    }
                };
                if relative_error > target.tolerance() {
                    continue;
                }
                candidates.push(CandidateDesign {
                    geometry,
                    predicted_inductance_h: inductance,
                    relative_error,
                    tuning,
                });
            }
        }
    }

    candidates.sort_by(|a, b| {
        error_bucket(a.relative_error)
            .cmp(&error_bucket(b.relative_error))
            .then(a.geometry.turns.cmp(&b.geometry.turns))
            .then(
                b.geometry
                    .trace_width_mm
                    .total_cmp(&a.geometry.trace_width_mm),
            )
            .then(
                b.geometry
                    .turn_spacing_mm
                    .total_cmp(&a.geometry.turn_spacing_mm),
            )
    });
    candidates
}

/// Inclusive lattice from `min` to `max` in steps of `step`. A top value
/// that reaches `max` only up to rounding snaps onto it exactly, so the
/// boundary survives the strict DRC comparison.
fn grid_values(min: f64, max: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "grid step must be positive");
    let count = ((max - min) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|k| {
            let v = min + k as f64 * step;
            if (v - max).abs() < 1e-9 {
                max
            } else {
                v
            }
        })
        .collect()
}
