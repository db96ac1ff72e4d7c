//! Minimal deterministic SVG plot for impedance sweeps: |Z| on a log-log
//! grid with the phase overlaid on a linear right-hand axis.

use std::fmt::Write;

use tagcoil::circuit::ImpedancePoint;

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 70.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

pub fn sweep_plot_svg(points: &[ImpedancePoint]) -> String {
    assert!(points.len() >= 2, "plot needs at least two sweep points");
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;

    let f_lo = points.first().unwrap().frequency_hz;
    let f_hi = points.last().unwrap().frequency_hz;
    let (lx0, lx1) = (f_lo.log10(), f_hi.log10());
    let x_of = |f: f64| MARGIN_L + (f.log10() - lx0) / (lx1 - lx0) * plot_w;

    let mags: Vec<f64> = points.iter().map(|p| p.impedance_ohm.norm()).collect();
    let (mut m_lo, mut m_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for m in &mags {
        m_lo = m_lo.min(*m);
        m_hi = m_hi.max(*m);
    }
    let ly0 = m_lo.log10().floor();
    // keep a nonzero span even for a flat magnitude curve
    let ly1 = m_hi.log10().ceil().max(ly0 + 1.0);
    let y_of_mag = |m: f64| MARGIN_T + (ly1 - m.log10()) / (ly1 - ly0) * plot_h;
    let y_of_phase = |deg: f64| MARGIN_T + (90.0 - deg) / 180.0 * plot_h;

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(
        s,
        "  <rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#888\"/>"
    );

    // decade grid lines on both axes
    let mut dec = lx0.ceil() as i64;
    while (dec as f64) <= lx1 {
        let x = x_of(10f64.powi(dec as i32));
        let _ = writeln!(
            s,
            "  <line x1=\"{x}\" y1=\"{MARGIN_T}\" x2=\"{x}\" y2=\"{}\" stroke=\"#ddd\"/>",
            fmt(MARGIN_T + plot_h),
            x = fmt(x),
        );
        let _ = writeln!(
            s,
            "  <text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">1e{dec} Hz</text>",
            fmt(MARGIN_T + plot_h + 18.0),
            x = fmt(x),
        );
        dec += 1;
    }
    let mut mag_dec = ly0 as i64;
    while (mag_dec as f64) <= ly1 {
        let y = y_of_mag(10f64.powi(mag_dec as i32));
        let _ = writeln!(
            s,
            "  <line x1=\"{MARGIN_L}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#ddd\"/>",
            fmt(MARGIN_L + plot_w),
            y = fmt(y),
        );
        let _ = writeln!(
            s,
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">1e{mag_dec}</text>",
            fmt(MARGIN_L - 6.0),
            fmt(y + 4.0),
        );
        mag_dec += 1;
    }
    for deg in [-90.0f64, -45.0, 0.0, 45.0, 90.0] {
        let y = y_of_phase(deg);
        let _ = writeln!(
            s,
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"start\" fill=\"#a33\">{deg}&#176;</text>",
            fmt(MARGIN_L + plot_w + 6.0),
            fmt(y + 4.0),
        );
    }

    let mag_path: Vec<String> = points
        .iter()
        .zip(&mags)
        .map(|(p, m)| format!("{},{}", fmt(x_of(p.frequency_hz)), fmt(y_of_mag(*m))))
        .collect();
    let _ = writeln!(
        s,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1a56a8\" stroke-width=\"1.5\"/>",
        mag_path.join(" ")
    );
    let phase_path: Vec<String> = points
        .iter()
        .map(|p| {
            let deg = p.impedance_ohm.im.atan2(p.impedance_ohm.re).to_degrees();
            format!("{},{}", fmt(x_of(p.frequency_hz)), fmt(y_of_phase(deg)))
        })
        .collect();
    let _ = writeln!(
        s,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#a33\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\"/>",
        phase_path.join(" ")
    );
    let _ = writeln!(
        s,
        "  <text x=\"{}\" y=\"{}\" fill=\"#1a56a8\">|Z| (ohm)</text>",
        fmt(MARGIN_L + 8.0),
        fmt(MARGIN_T + 16.0),
    );
    let _ = writeln!(
        s,
        "  <text x=\"{}\" y=\"{}\" fill=\"#a33\">phase</text>",
        fmt(MARGIN_L + 8.0),
        fmt(MARGIN_T + 32.0),
    );
    s.push_str("</svg>\n");
    s
}
