//! `tagcoil` — command-line front end for the NFC coil design toolkit.
//!
//! Exit codes: 0 success, 1 domain error (invalid physics/geometry,
//! reported with the originating error name), 2 usage or document error.
//! Usage errors never leave partial output files behind: every artifact
//! is fully assembled in memory before anything is written.

mod doc;
mod plot;
mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use doc::DesignDocument;
use tagcoil::circuit::{sweep, synthesize_tuning, SnapSeries, TagNetwork};
use tagcoil::layout::{build_layout, to_gerber, to_svg};
use tagcoil::synth::{drc_check, search_geometry};

#[derive(Parser)]
#[command(
    name = "tagcoil",
    version,
    about = "Design and verify 13.56 MHz planar spiral NFC tag antennas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full electrical analysis of the coil in a design document
    Analyze {
        doc: PathBuf,
        /// Analysis frequency in MHz
        #[arg(long, default_value_t = 13.56)]
        frequency_mhz: f64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Pick the tuning capacitor for a target resonance
    Tune {
        doc: PathBuf,
        #[arg(long)]
        target_mhz: f64,
        #[arg(long, value_enum, default_value_t = SnapArg::Exact)]
        snap: SnapArg,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Impedance sweep over a frequency band (CSV, optional SVG plot)
    Sweep {
        doc: PathBuf,
        #[arg(long)]
        from_mhz: f64,
        #[arg(long)]
        to_mhz: f64,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Also write an SVG magnitude/phase plot
        #[arg(long)]
        svg: bool,
        #[arg(long, default_value_t = 13.56)]
        frequency_mhz: f64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Search coil geometries that hit the document's target
    Synthesize {
        doc: PathBuf,
        /// Keep at most this many ranked candidates
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Emit etch-mask artifacts (SVG preview, RS-274X Gerber)
    Export {
        doc: PathBuf,
        /// Write only the SVG preview
        #[arg(long)]
        svg: bool,
        /// Write only the Gerber mask
        #[arg(long)]
        gerber: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Estimate read range and export the coupling curve
    Range {
        doc: PathBuf,
        /// Points in the exported z curve
        #[arg(long, default_value_t = 60)]
        points: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SnapArg {
    Exact,
    E12,
    E24,
}

impl From<SnapArg> for SnapSeries {
    fn from(s: SnapArg) -> Self {
        match s {
            SnapArg::Exact => SnapSeries::Exact,
            SnapArg::E12 => SnapSeries::E12,
            SnapArg::E24 => SnapSeries::E24,
        }
    }
}

enum CliError {
    /// Bad invocation, unreadable or invalid document: exit 2.
    Usage(String),
    /// The document is well-formed but the physics rejects it: exit 1.
    Domain(String),
}

impl CliError {
    fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<doc::DocError> for CliError {
    fn from(e: doc::DocError) -> Self {
        match e {
            doc::DocError::Usage(msg) => CliError::Usage(msg),
            doc::DocError::Domain(msg) => CliError::Domain(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_document(path: &Path) -> Result<(DesignDocument, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let doc = DesignDocument::parse(&text).map_err(CliError::Usage)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| CliError::Usage(format!("{}: not a usable file name", path.display())))?
        .to_string();
    Ok((doc, stem))
}

fn write_artifact(out_dir: &Path, name: &str, content: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Usage(format!("{}: {e}", out_dir.display())))?;
    let path = out_dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze {
            doc,
            frequency_mhz,
            out_dir,
        } => {
            let (document, stem) = load_document(&doc)?;
            let geometry = document.geometry().map_err(CliError::Usage)?;
            let rep = report::analyze(
                &geometry,
                &document.chip(),
                &document.conductor(),
                &document.wheeler(),
                frequency_mhz,
            )
            .map_err(CliError::Domain)?;
            let text = rep.to_text();
            write_artifact(&out_dir, &format!("{stem}_report.txt"), &text)?;
            write_artifact(&out_dir, &format!("{stem}_report.json"), &rep.to_json())?;
            print!("{text}");
            Ok(())
        }

        Command::Tune {
            doc,
            target_mhz,
            snap,
            out_dir,
        } => {
            let (document, stem) = load_document(&doc)?;
            let inductance = document.antenna_inductance_h()?;
            let solution =
                synthesize_tuning(inductance, &document.chip(), target_mhz * 1e6, snap.into())
                    .map_err(CliError::domain)?;
            let rep = report::TuningReport::from(&solution);
            let json = {
                let mut s = serde_json::to_string_pretty(&rep).expect("tuning serialization");
                s.push('\n');
                s
            };
            write_artifact(&out_dir, &format!("{stem}_tuning.json"), &json)?;
            println!("inductance: {:.4} uH", inductance * 1e6);
            println!(
                "tuning: {}, {:.1} pF -> {:.4} MHz{}",
                rep.topology,
                rep.c_tune_pf,
                rep.achieved_frequency_mhz,
                if rep.snapped { " (snapped)" } else { "" }
            );
            Ok(())
        }

        Command::Sweep {
            doc,
            from_mhz,
            to_mhz,
            points,
            svg,
            frequency_mhz,
            out_dir,
        } => {
            let (document, stem) = load_document(&doc)?;
            let inductance = document.antenna_inductance_h()?;
            let resistance = document.antenna_resistance_ohm(frequency_mhz * 1e6)?;
            // Simulate the as-built tag when the document records its
            // capacitor; otherwise tune ideally at the nominal frequency.
            let tuning = match document.installed_tuning()? {
                Some(t) => t,
                None => synthesize_tuning(
                    inductance,
                    &document.chip(),
                    frequency_mhz * 1e6,
                    SnapSeries::Exact,
                )
                .map_err(CliError::domain)?,
            };
            let network = TagNetwork {
                antenna_inductance_h: inductance,
                antenna_resistance_ohm: resistance,
                chip: document.chip(),
                tuning: Some(tuning),
            };
            let samples =
                sweep(&network, from_mhz * 1e6, to_mhz * 1e6, points).map_err(CliError::domain)?;

            let mut csv = String::from("frequency_hz,re_ohm,im_ohm\n");
            for p in &samples {
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    p.frequency_hz, p.impedance_ohm.re, p.impedance_ohm.im
                );
            }
            write_artifact(&out_dir, &format!("{stem}_sweep.csv"), &csv)?;
            if svg {
                write_artifact(
                    &out_dir,
                    &format!("{stem}_sweep.svg"),
                    &plot::sweep_plot_svg(&samples),
                )?;
            }
            match tagcoil::circuit::find_resonance(&samples) {
                Ok(f) => println!(
                    "swept {} points, {:.4}-{:.4} MHz; resonance near {:.4} MHz",
                    samples.len(),
                    from_mhz,
                    to_mhz,
                    f / 1e6
                ),
                Err(_) => println!(
                    "swept {} points, {:.4}-{:.4} MHz; no resonance in range",
                    samples.len(),
                    from_mhz,
                    to_mhz
                ),
            }
            Ok(())
        }

        Command::Synthesize { doc, top, out_dir } => {
            let (document, stem) = load_document(&doc)?;
            let geometry = document.geometry().map_err(CliError::Usage)?;
            let target = document.target().map_err(CliError::Usage)?;
            let rules = document.rules();
            let outline = (geometry.outer_length_mm, geometry.outer_width_mm);
            let mut candidates = search_geometry(&target, outline, &rules);
            candidates.truncate(top);

            #[derive(serde::Serialize)]
            struct CandidateRow {
                rank: usize,
                turns: u32,
                trace_width_mm: f64,
                turn_spacing_mm: f64,
                predicted_inductance_uh: f64,
                relative_error: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                tuning: Option<report::TuningReport>,
            }
            let rows: Vec<CandidateRow> = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| CandidateRow {
                    rank: i + 1,
                    turns: c.geometry.turns,
                    trace_width_mm: c.geometry.trace_width_mm,
                    turn_spacing_mm: c.geometry.turn_spacing_mm,
                    predicted_inductance_uh: c.predicted_inductance_h * 1e6,
                    relative_error: c.relative_error,
                    tuning: c.tuning.as_ref().map(report::TuningReport::from),
                })
                .collect();
            let json = {
                let mut s = serde_json::to_string_pretty(&rows).expect("candidate serialization");
                s.push('\n');
                s
            };
            write_artifact(&out_dir, &format!("{stem}_candidates.json"), &json)?;

            if rows.is_empty() {
                println!("no feasible candidate inside the rules and tolerance");
            } else {
                println!("rank  N  w(mm)  s(mm)  L(uH)    error");
                for r in &rows {
                    println!(
                        "{:>4}  {}  {:<5.2} {:<5.2}  {:<7.4} {:.3}%",
                        r.rank,
                        r.turns,
                        r.trace_width_mm,
                        r.turn_spacing_mm,
                        r.predicted_inductance_uh,
                        r.relative_error * 100.0
                    );
                }
            }
            Ok(())
        }

        Command::Export {
            doc,
            svg,
            gerber,
            out_dir,
        } => {
            let (document, stem) = load_document(&doc)?;
            let geometry = document.geometry().map_err(CliError::Usage)?;
            let violations = drc_check(&geometry, &document.rules());
            for v in &violations {
                eprintln!("drc: {v}");
            }
            let layout = build_layout(&geometry).map_err(CliError::domain)?;
            let want_both = !svg && !gerber;
            let mut written = Vec::new();
            if svg || want_both {
                written.push(write_artifact(
                    &out_dir,
                    &format!("{stem}.svg"),
                    &to_svg(&layout),
                )?);
            }
            if gerber || want_both {
                written.push(write_artifact(
                    &out_dir,
                    &format!("{stem}.gbr"),
                    &to_gerber(&layout),
                )?);
            }
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }

        Command::Range {
            doc,
            points,
            out_dir,
        } => {
            if points < 2 {
                return Err(CliError::Usage(
                    "range curve needs at least 2 points".into(),
                ));
            }
            let (document, stem) = load_document(&doc)?;
            let (scenario, frequency_hz) = document.scenario().map_err(CliError::Usage)?;

            let z_lo = 0.005;
            let z_hi = scenario.max_range_m;
            let mut csv = String::from("z_m,mutual_h,emf_v\n");
            for i in 0..points {
                let z = z_lo + (z_hi - z_lo) * i as f64 / (points - 1) as f64;
                let m = scenario.mutual_at(z).map_err(CliError::domain)?;
                let emf = scenario
                    .induced_emf(z, frequency_hz)
                    .map_err(CliError::domain)?;
                let _ = writeln!(csv, "{z},{m},{emf}");
            }
            let range = scenario
                .estimate_range(frequency_hz)
                .map_err(CliError::domain)?;
            write_artifact(&out_dir, &format!("{stem}_range.csv"), &csv)?;
            println!(
                "threshold {:.6} V at {:.2} MHz drive {:.2} A",
                scenario.threshold_emf_v,
                frequency_hz / 1e6,
                scenario.drive_current_a
            );
            println!("estimated read range: {:.1} cm", range * 100.0);
            Ok(())
        }
    }
}
