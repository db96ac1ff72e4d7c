//! Etch-mask artifacts for a coil: SVG preview and RS-274X Gerber
//! photomask, single copper layer, with terminal pads at both ends of the
//! spiral. The inner pad needs a wire bridge back out of the coil; that is
//! left to the fabricator and noted in the Gerber comments.
//!
//! Both writers emit the same y-up millimetre coordinates with a 10⁻⁶ mm
//! quantum and are byte-deterministic for identical input.

use std::fmt::Write;

use crate::coil::{coil_centerline, CoilError, CoilGeometry, Point};

pub const DEFAULT_PAD_SIZE_MM: (f64, f64) = (1.5, 1.5);

/// A rectangular terminal pad centered on a centerline endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadSpec {
    pub center: Point,
    pub width_mm: f64,
    pub height_mm: f64,
}

/// Etch-ready description: centerline, stroke width, pads, outline.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutDocument {
    pub centerline: Vec<Point>,
    pub trace_width_mm: f64,
    pub pads: Vec<PadSpec>,
    pub outline_mm: (f64, f64),
}

/// Build the layout with default 1.5 x 1.5 mm pads.
pub fn build_layout(geometry: &CoilGeometry) -> Result<LayoutDocument, CoilError> {
    build_layout_with_pad_size(geometry, DEFAULT_PAD_SIZE_MM)
}

/// Build the layout with explicit pad dimensions. Pads sit on the first
/// and last centerline vertices (outer and inner terminals).
pub fn build_layout_with_pad_size(
    geometry: &CoilGeometry,
    pad_size_mm: (f64, f64),
) -> Result<LayoutDocument, CoilError> {
    if !(pad_size_mm.0.is_finite()
        && pad_size_mm.0 > 0.0
        && pad_size_mm.1.is_finite()
        && pad_size_mm.1 > 0.0)
    {
        return Err(CoilError::InvalidGeometry("pad size must be positive"));
    }
    let centerline = coil_centerline(geometry)?;
    let pads = vec![
        PadSpec {
            center: centerline[0],
            width_mm: pad_size_mm.0,
            height_mm: pad_size_mm.1,
        },
        PadSpec {
            center: *centerline.last().expect("centerline is never empty"),
            width_mm: pad_size_mm.0,
            height_mm: pad_size_mm.1,
        },
    ];
    Ok(LayoutDocument {
        centerline,
        trace_width_mm: geometry.trace_width_mm,
        pads,
        outline_mm: (geometry.outer_length_mm, geometry.outer_width_mm),
    })
}

fn fmt_mm(value: f64) -> String {
    format!("{value:.6}")
}

/// SVG preview: the outline as viewport, copper-colored stroked path with
/// round joins, and filled pad rectangles. Path coordinates match the
/// Gerber output; the group transform flips the y-up frame for rendering.
pub fn to_svg(layout: &LayoutDocument) -> String {
    let (w, h) = layout.outline_mm;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\">",
        w = fmt_mm(w),
        h = fmt_mm(h),
    );
    let _ = writeln!(
        s,
        "  <g transform=\"translate(0,{}) scale(1,-1)\">",
        fmt_mm(h)
    );
    let mut d = String::new();
    for (i, p) in layout.centerline.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        if i > 0 {
            d.push(' ');
        }
        let _ = write!(d, "{cmd} {} {}", fmt_mm(p.x_mm), fmt_mm(p.y_mm));
    }
    let _ = writeln!(
        s,
        "    <path d=\"{d}\" fill=\"none\" stroke=\"#b87333\" stroke-width=\"{}\" stroke-linejoin=\"round\" stroke-linecap=\"round\"/>",
        fmt_mm(layout.trace_width_mm),
    );
    for pad in &layout.pads {
        let _ = writeln!(
            s,
            "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#b87333\"/>",
            fmt_mm(pad.center.x_mm - pad.width_mm / 2.0),
            fmt_mm(pad.center.y_mm - pad.height_mm / 2.0),
            fmt_mm(pad.width_mm),
            fmt_mm(pad.height_mm),
        );
    }
    s.push_str("  </g>\n</svg>\n");
    s
}

// RS-274X 3.6 format: millimetre coordinates scaled to integer micro-mm.
fn gerber_coord(value_mm: f64) -> i64 {
    (value_mm * 1e6).round() as i64
}

/// RS-274X photomask: millimetre units, absolute 3.6 coordinates, one
/// circular aperture for the trace, one rectangular aperture per pad size,
/// trace drawn with D01 along the centerline, pads flashed with D03.
pub fn to_gerber(layout: &LayoutDocument) -> String {
    let mut s = String::new();
    s.push_str("G04 planar spiral coil etch mask, single copper layer*\n");
    let _ = writeln!(
        s,
        "G04 outline {} x {} mm; inner terminal needs a wire bridge, left to the fabricator*",
        fmt_mm(layout.outline_mm.0),
        fmt_mm(layout.outline_mm.1),
    );
    s.push_str("%FSLAX36Y36*%\n");
    s.push_str("%MOMM*%\n");
    s.push_str("%LPD*%\n");
    let _ = writeln!(s, "%ADD10C,{:.3}*%", layout.trace_width_mm);

    // One rectangular aperture per distinct pad size, D11 upward.
    let mut pad_sizes: Vec<(i64, i64)> = Vec::new();
    let mut pad_aperture = Vec::with_capacity(layout.pads.len());
    for pad in &layout.pads {
        let key = (gerber_coord(pad.width_mm), gerber_coord(pad.height_mm));
        let idx = match pad_sizes.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                pad_sizes.push(key);
                let code = 11 + pad_sizes.len() - 1;
                let _ = writeln!(s, "%ADD{code}R,{:.3}X{:.3}*%", pad.width_mm, pad.height_mm);
                pad_sizes.len() - 1
            }
        };
        pad_aperture.push(11 + idx);
    }

    s.push_str("D10*\n");
    for (i, p) in layout.centerline.iter().enumerate() {
        let op = if i == 0 { "D02" } else { "D01" };
        let _ = writeln!(s, "X{}Y{}{op}*", gerber_coord(p.x_mm), gerber_coord(p.y_mm));
    }
    for (pad, code) in layout.pads.iter().zip(&pad_aperture) {
        let _ = writeln!(s, "D{code}*");
        let _ = writeln!(
            s,
            "X{}Y{}D03*",
            gerber_coord(pad.center.x_mm),
            gerber_coord(pad.center.y_mm)
        );
    }
    s.push_str("M02*\n");
    s
}
