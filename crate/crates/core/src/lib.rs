//! Design and verification toolkit for 13.56 MHz planar spiral NFC tag
//! antennas on flexible substrates.
//!
//! The crate covers the full tag design loop:
//!
//! - [`coil`] — parametric spiral geometry, modified-Wheeler inductance,
//!   trace length, skin depth, DC/AC resistance
//! - [`circuit`] — tag equivalent circuit, resonance, tuning-capacitor
//!   synthesis with E-series snapping, impedance sweeps, Q factor
//! - [`synth`] — design-rule checking and grid search for geometries that
//!   hit an inductance or resonance target
//! - [`layout`] — etch-mask output as SVG preview and RS-274X Gerber
//! - [`coupling`] — filament-method mutual inductance, induced EMF, and
//!   threshold-calibrated read-range estimation
//!
//! All operations are pure functions of immutable inputs and safe to call
//! from any number of threads.

pub mod circuit;
pub mod coil;
pub mod coupling;
pub mod eseries;
pub mod layout;
pub mod synth;

pub use circuit::{
    equivalent_capacitance, find_resonance, q_factor, required_equivalent_capacitance,
    resonance_frequency, sweep, synthesize_tuning, ChipModel, CircuitError, ImpedancePoint,
    SnapSeries, TagNetwork, Topology, TuningSolution,
};
pub use coil::{
    coil_centerline, derive_dimensions, inductance_wheeler, skin_depth, trace_length,
    trace_resistance, CoilError, CoilGeometry, CoilShape, ConductorMaterial, DerivedDimensions,
    Point, SubstrateSpec, WheelerConstants, MU_0,
};
pub use coupling::{
    discretize_coil, mutual_inductance, CouplingError, CouplingScenario, FilamentCoil, Segment3,
};
pub use layout::{
    build_layout, build_layout_with_pad_size, to_gerber, to_svg, LayoutDocument, PadSpec,
};
pub use synth::{
    drc_check, search_geometry, CandidateDesign, DesignRules, DrcViolation, SynthesisTarget,
};

/// 13.56 MHz, the HF RFID carrier every design here targets.
pub const NFC_FREQUENCY_HZ: f64 = 13.56e6;
