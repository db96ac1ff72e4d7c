//! Tag equivalent circuit: a series Rs + Ls antenna loop closed by the
//! chip branch (Rc parallel Cc) plus an optional external tuning capacitor
//! in series with or parallel to the chip.
//!
//! Resonance follows f_r = 1/(2π·sqrt(Ls·Ceq)); inter-turn stray
//! capacitance is a few picofarads and is not modeled.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::eseries;

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("NonPositiveComponent: {0}")]
    NonPositiveComponent(&'static str),
    #[error("NonPositiveFrequency: {frequency_hz} Hz")]
    NonPositiveFrequency { frequency_hz: f64 },
    #[error("ZeroSeriesCapacitor: series topology with c_tune = 0")]
    ZeroSeriesCapacitor,
    #[error("Untunable: required equivalent capacitance {c_req_f} F cannot be reached")]
    Untunable { c_req_f: f64 },
    #[error("BadRange: need 0 < f_lo < f_hi and at least 2 points")]
    BadRange,
    #[error("NoResonanceInRange: imaginary part never changes sign")]
    NoResonanceInRange,
    #[error("ZeroResistance: q factor undefined for a lossless loop")]
    ZeroResistance,
}

/// Tag IC model: capacitance in parallel with a load resistance.
/// `resistance_ohm` may be infinite for an unloaded chip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChipModel {
    pub capacitance_f: f64,
    pub resistance_ohm: f64,
}

impl ChipModel {
    /// Chip capacitance only, no resistive loading.
    pub fn unloaded(capacitance_f: f64) -> Self {
        Self {
            capacitance_f,
            resistance_ohm: f64::INFINITY,
        }
    }
}

impl Default for ChipModel {
    /// NTAG-class defaults: Cc = 50 pF, Rc = 50 kΩ.
    fn default() -> Self {
        Self {
            capacitance_f: 50e-12,
            resistance_ohm: 50e3,
        }
    }
}

/// Where the external tuning capacitor sits relative to the chip branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Series,
    Parallel,
    None,
}

impl Topology {
    pub fn as_str(&self) -> &'static str {
        match self {
            Topology::Series => "series",
            Topology::Parallel => "parallel",
            Topology::None => "none",
        }
    }
}

/// A synthesized tuning capacitor choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningSolution {
    pub topology: Topology,
    pub c_tune_f: f64,
    pub achieved_frequency_hz: f64,
    /// True when the capacitor was rounded to an E-series value.
    pub snapped: bool,
}

/// Complete tag network: antenna series branch, chip, optional tuning.
#[derive(Debug, Clone, PartialEq)]
pub struct TagNetwork {
    pub antenna_inductance_h: f64,
    pub antenna_resistance_ohm: f64,
    pub chip: ChipModel,
    pub tuning: Option<TuningSolution>,
}

/// One sample of an impedance sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedancePoint {
    pub frequency_hz: f64,
    pub impedance_ohm: Complex64,
}

/// E-series used when snapping a synthesized capacitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapSeries {
    Exact,
    E12,
    E24,
}

/// Equivalent capacitance of the chip Cc combined with C_tune.
pub fn equivalent_capacitance(
    cc_f: f64,
    c_tune_f: f64,
    topology: Topology,
) -> Result<f64, CircuitError> {
    if !positive(cc_f) {
        return Err(CircuitError::NonPositiveComponent("chip capacitance"));
    }
    if c_tune_f < 0.0 {
        return Err(CircuitError::NonPositiveComponent("tuning capacitance"));
    }
    match topology {
        Topology::Series => {
            if c_tune_f == 0.0 {
                Err(CircuitError::ZeroSeriesCapacitor)
            } else {
                Ok(cc_f * c_tune_f / (cc_f + c_tune_f))
            }
        }
        Topology::Parallel => Ok(cc_f + c_tune_f),
        Topology::None => Ok(cc_f),
    }
}

/// f_r = 1 / (2π·sqrt(Ls·Ceq)).
pub fn resonance_frequency(ls_h: f64, ceq_f: f64) -> Result<f64, CircuitError> {
    if !positive(ls_h) {
        return Err(CircuitError::NonPositiveComponent("inductance"));
    }
    if !positive(ceq_f) {
        return Err(CircuitError::NonPositiveComponent("equivalent capacitance"));
    }
    Ok(1.0 / (2.0 * PI * (ls_h * ceq_f).sqrt()))
}

/// Ceq needed to resonate `ls_h` at `f_target_hz`: 1/((2πf)²·Ls).
pub fn required_equivalent_capacitance(ls_h: f64, f_target_hz: f64) -> Result<f64, CircuitError> {
    if !positive(ls_h) {
        return Err(CircuitError::NonPositiveComponent("inductance"));
    }
    if !positive(f_target_hz) {
        return Err(CircuitError::NonPositiveComponent("target frequency"));
    }
    let omega = 2.0 * PI * f_target_hz;
    Ok(1.0 / (omega * omega * ls_h))
}

// Relative band around Cc within which the required capacitance counts as
// equal to Cc (no external capacitor) rather than forcing a huge series part.
const TUNING_EQUALITY_EPS: f64 = 1e-12;

/// Pick topology and C_tune so the loop resonates at `f_target_hz`.
///
/// c_req above Cc can only be reached by adding capacitance in parallel;
/// below Cc only by dividing it down in series. With an E-series snap the
/// capacitor is rounded and the achieved frequency recomputed.
pub fn synthesize_tuning(
    ls_h: f64,
    chip: &ChipModel,
    f_target_hz: f64,
    snap: SnapSeries,
) -> Result<TuningSolution, CircuitError> {
    let cc = chip.capacitance_f;
    if !positive(cc) {
        return Err(CircuitError::NonPositiveComponent("chip capacitance"));
    }
    let c_req = required_equivalent_capacitance(ls_h, f_target_hz)?;
    if c_req <= 0.0 {
        return Err(CircuitError::Untunable { c_req_f: c_req });
    }

    if (c_req - cc).abs() <= TUNING_EQUALITY_EPS * cc {
        return Ok(TuningSolution {
            topology: Topology::None,
            c_tune_f: 0.0,
            achieved_frequency_hz: f_target_hz,
            snapped: false,
        });
    }

    let (topology, c_exact) = if c_req > cc {
        (Topology::Parallel, c_req - cc)
    } else {
        let denom = cc - c_req;
        if denom <= TUNING_EQUALITY_EPS * cc {
            return Err(CircuitError::Untunable { c_req_f: c_req });
        }
        (Topology::Series, cc * c_req / denom)
    };

    let (c_tune, snapped) = match snap {
        SnapSeries::Exact => (c_exact, false),
        SnapSeries::E12 => (eseries::snap_nearest(c_exact, &eseries::E12), true),
        SnapSeries::E24 => (eseries::snap_nearest(c_exact, &eseries::E24), true),
    };
    let achieved = resonance_frequency(ls_h, equivalent_capacitance(cc, c_tune, topology)?)?;
    Ok(TuningSolution {
        topology,
        c_tune_f: c_tune,
        achieved_frequency_hz: achieved,
        snapped,
    })
}

impl TagNetwork {
    /// Equivalent capacitance of the chip plus the installed tuning.
    pub fn equivalent_capacitance(&self) -> Result<f64, CircuitError> {
        match &self.tuning {
            Some(t) => equivalent_capacitance(self.chip.capacitance_f, t.c_tune_f, t.topology),
            None => equivalent_capacitance(self.chip.capacitance_f, 0.0, Topology::None),
        }
    }

    /// Loop impedance seen around the tag circuit at `f_hz`.
    ///
    /// Chip branch admittance Y = 1/Rc + jωCc; a parallel C_tune adds jωC
    /// to Y, a series C_tune appends 1/(jωC) to 1/Y. The loop closes with
    /// the antenna: Z = Rs + jωLs + Z_branch.
    pub fn impedance_at(&self, f_hz: f64) -> Result<Complex64, CircuitError> {
        if !positive(f_hz) {
            return Err(CircuitError::NonPositiveFrequency { frequency_hz: f_hz });
        }
        let omega = 2.0 * PI * f_hz;
        let g_chip = if self.chip.resistance_ohm.is_finite() {
            1.0 / self.chip.resistance_ohm
        } else {
            0.0
        };
        let mut y = Complex64::new(g_chip, omega * self.chip.capacitance_f);
        let mut z_branch = match &self.tuning {
            Some(t) if t.topology == Topology::Parallel => {
                y += Complex64::new(0.0, omega * t.c_tune_f);
                y.inv()
            }
            Some(t) if t.topology == Topology::Series => {
                if t.c_tune_f == 0.0 {
                    return Err(CircuitError::ZeroSeriesCapacitor);
                }
                y.inv() + Complex64::new(0.0, omega * t.c_tune_f).inv()
            }
            _ => y.inv(),
        };
        z_branch += Complex64::new(
            self.antenna_resistance_ohm,
            omega * self.antenna_inductance_h,
        );
        Ok(z_branch)
    }
}

/// Sample the loop impedance at `n_points` log-spaced frequencies,
/// endpoints included.
pub fn sweep(
    network: &TagNetwork,
    f_lo_hz: f64,
    f_hi_hz: f64,
    n_points: usize,
) -> Result<Vec<ImpedancePoint>, CircuitError> {
    if !positive(f_lo_hz) || !positive(f_hi_hz) || f_lo_hz >= f_hi_hz || n_points < 2 {
        return Err(CircuitError::BadRange);
    }
    let log_lo = f_lo_hz.ln();
    let log_hi = f_hi_hz.ln();
    let mut points = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let f = if i == 0 {
            f_lo_hz
        } else if i == n_points - 1 {
            f_hi_hz
        } else {
            (log_lo + (log_hi - log_lo) * i as f64 / (n_points - 1) as f64).exp()
        };
        points.push(ImpedancePoint {
            frequency_hz: f,
            impedance_ohm: network.impedance_at(f)?,
        });
    }
    Ok(points)
}

/// Locate the first zero crossing of Im(Z) in a sweep by linear
/// interpolation between the bracketing samples.
pub fn find_resonance(points: &[ImpedancePoint]) -> Result<f64, CircuitError> {
    for pair in points.windows(2) {
        let (im0, im1) = (pair[0].impedance_ohm.im, pair[1].impedance_ohm.im);
        if im0 == 0.0 && im1 != 0.0 {
            return Ok(pair[0].frequency_hz);
        }
        if im0 * im1 < 0.0 {
            let t = im0 / (im0 - im1);
            return Ok(pair[0].frequency_hz + t * (pair[1].frequency_hz - pair[0].frequency_hz));
        }
    }
    match points.last() {
        Some(last) if last.impedance_ohm.im == 0.0 && points.len() > 1 => {
            // crossing exactly on the final sample
            let prev = points[points.len() - 2].impedance_ohm.im;
            if prev != 0.0 {
                return Ok(last.frequency_hz);
            }
            Err(CircuitError::NoResonanceInRange)
        }
        _ => Err(CircuitError::NoResonanceInRange),
    }
}

/// Series-loop quality factor 2π·f_r·Ls/Rs at the network's own resonance.
pub fn q_factor(network: &TagNetwork) -> Result<f64, CircuitError> {
    if !positive(network.antenna_resistance_ohm) {
        return Err(CircuitError::ZeroResistance);
    }
    let f_r = resonance_frequency(
        network.antenna_inductance_h,
        network.equivalent_capacitance()?,
    )?;
    Ok(2.0 * PI * f_r * network.antenna_inductance_h / network.antenna_resistance_ohm)
}
