//! Standard component value ladders (E12, E24) and nearest-value snapping.

/// E12 series (10% tolerance), one decade.
pub const E12: [f64; 12] = [1.0, 1.2, 1.5, 1.8, 2.2, 2.7, 3.3, 3.9, 4.7, 5.6, 6.8, 8.2];

/// E24 series (5% tolerance), one decade.
pub const E24: [f64; 24] = [
    1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.4, 2.7, 3.0, 3.3, 3.6, 3.9, 4.3, 4.7, 5.1, 5.6,
    6.2, 6.8, 7.5, 8.2, 9.1,
];

// Relative-error slack below which two candidates count as tied. Exact
// midpoints (e.g. 1.1 between E12's 1.0 and 1.2) differ only by rounding
// noise, and the tie must resolve toward the smaller value.
const TIE_EPS: f64 = 1e-9;

/// Snap a positive value to the nearest entry of a decade-scaled series,
/// minimizing relative error; ties resolve to the smaller value.
pub fn snap_nearest(value: f64, series: &[f64]) -> f64 {
    assert!(
        value > 0.0 && value.is_finite(),
        "snap target must be positive"
    );
    let decade = 10f64.powi(value.log10().floor() as i32);
    // Candidates: the in-decade values plus the first value of the next
    // decade, which can be nearest for targets near the decade top.
    let mut best = f64::NAN;
    let mut best_err = f64::INFINITY;
    for cand in series
        .iter()
        .map(|m| m * decade)
        .chain(std::iter::once(series[0] * decade * 10.0))
    {
        let err = (cand - value).abs() / value;
        if err + TIE_EPS < best_err || ((err - best_err).abs() <= TIE_EPS && cand < best) {
            best = cand;
            best_err = err;
        }
    }
    best
}
