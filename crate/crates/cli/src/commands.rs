use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use pulsekit_core::analysis::{self, AnalysisReport, HypothesisCheck, Regime};
use pulsekit_core::impulse_sim::{self, ImpulseTrajectory};
use pulsekit_core::presets;
use pulsekit_core::spectral_map::{self, SpectralCurve};
use pulsekit_core::symmetrize::{SymmetrizationCertificate, Verdict, Witness};
use pulsekit_core::ControlSystem;
use serde::Serialize;

use crate::system_file::SystemFile;

/// Outcome of a command that did not succeed outright.
#[derive(Debug)]
pub enum Failure {
    /// Bad input, unreadable file, or unwritable output (exit 1).
    Input(String),
    /// The command ran but the verdict is negative (exit 2).
    Negative,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type CmdResult = Result<(), Failure>;

/// A system loaded from a file or the preset registry.
pub struct Loaded {
    pub label: String,
    pub system: ControlSystem,
}

pub fn load(input: Option<&Path>, preset: Option<&str>) -> Result<Loaded, Failure> {
    match (input, preset) {
        (Some(path), None) => {
            let file = SystemFile::read(path).map_err(Failure::Input)?;
            let label = file
                .name
                .clone()
                .unwrap_or_else(|| path.display().to_string());
            let system = file
                .into_system()
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(Loaded { label, system })
        }
        (None, Some(id)) => {
            let p = presets::get(id).ok_or_else(|| {
                let known: Vec<_> = presets::ids().collect();
                Failure::Input(format!(
                    "unknown preset '{id}' (known: {})",
                    known.join(", ")
                ))
            })?;
            Ok(Loaded {
                label: p.id.to_owned(),
                system: p.system,
            })
        }
        _ => Err(Failure::Input(
            "exactly one of --input or --preset is required".into(),
        )),
    }
}

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_output(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum WitnessJson {
    Pair {
        indices: [usize; 2],
    },
    Cycle {
        indices: Vec<usize>,
        forward: f64,
        reverse: f64,
    },
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    system: &'a str,
    verdict: Verdict,
    #[serde(rename = "T")]
    t: Option<&'a [f64]>,
    residual: f64,
    witness: Option<WitnessJson>,
}

fn certificate_json<'a>(
    label: &'a str,
    cert: &'a SymmetrizationCertificate,
) -> CertificateJson<'a> {
    let witness = cert.witness.as_ref().map(|w| match w {
        Witness::Pair(i, j) => WitnessJson::Pair {
            indices: [i + 1, j + 1],
        },
        Witness::Cycle(c) => WitnessJson::Cycle {
            indices: c.indices.iter().map(|i| i + 1).collect(),
            forward: c.forward,
            reverse: c.reverse,
        },
    });
    CertificateJson {
        system: label,
        verdict: cert.verdict,
        t: cert.scaling.as_deref(),
        residual: cert.residual,
        witness,
    }
}

pub fn symmetrize(loaded: &Loaded) -> CmdResult {
    let cert = loaded.system.certificate();
    print_json(&certificate_json(&loaded.label, cert))?;
    if cert.is_symmetrizable() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

pub fn curve_csv(curve: &SpectralCurve) -> String {
    let mut out = String::from("tau,r,method\n");
    for ((tau, r), m) in curve.taus.iter().zip(&curve.radii).zip(&curve.methods) {
        writeln!(out, "{},{},{}", fmt_float(*tau), fmt_float(*r), m.as_str())
            .expect("string write");
    }
    out
}

pub fn curve(loaded: &Loaded, tau_max: f64, samples: usize, out: Option<&Path>) -> CmdResult {
    let curve = spectral_map::sample_curve(&loaded.system, tau_max, samples)
        .map_err(|e| Failure::Input(e.to_string()))?;
    write_output(out, &curve_csv(&curve))
}

#[derive(Serialize)]
struct ReportJson<'a> {
    system: &'a str,
    regime: Regime,
    lambda_max: Option<f64>,
    k: Option<usize>,
    tau_s: Option<f64>,
    tau_m: Option<f64>,
    r_at_tau_m: Option<f64>,
    diagnostics: &'a [HypothesisCheck],
    time_unit: &'a str,
}

fn report_json<'a>(
    label: &'a str,
    report: &'a AnalysisReport,
    time_unit: &'a str,
) -> ReportJson<'a> {
    ReportJson {
        system: label,
        regime: report.regime,
        lambda_max: report.lambda_max,
        k: report.k.map(|k| k + 1),
        tau_s: report.tau_s,
        tau_m: report.tau_m,
        r_at_tau_m: report.r_at_tau_m,
        diagnostics: &report.diagnostics,
        time_unit,
    }
}

pub fn analyze(loaded: &Loaded) -> CmdResult {
    let report = analysis::classify(&loaded.system);
    print_json(&report_json(
        &loaded.label,
        &report,
        loaded.system.time_unit(),
    ))
}

pub fn trajectory_csv(traj: &ImpulseTrajectory, dim: usize) -> String {
    let mut out = String::from("t,tag");
    for i in 1..=dim {
        write!(out, ",x{i}").expect("string write");
    }
    out.push('\n');
    for s in &traj.samples {
        out.push_str(&fmt_float(s.t));
        out.push(',');
        out.push_str(s.tag.as_str());
        for v in &s.x {
            out.push(',');
            out.push_str(&fmt_float(*v));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SimulationSummary<'a> {
    system: &'a str,
    tau: f64,
    periods: usize,
    empirical_growth_factor: f64,
    extinct: bool,
    r_tau: f64,
    method: &'static str,
    time_unit: &'a str,
}

pub fn parse_state(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Failure::Input(format!("invalid --x0 entry '{s}': {e}")))
        })
        .collect()
}

pub fn simulate(
    loaded: &Loaded,
    tau: f64,
    periods: usize,
    x0: Option<&str>,
    interior: usize,
    out: Option<&Path>,
) -> CmdResult {
    let sys = &loaded.system;
    let x0 = match x0 {
        Some(text) => parse_state(text)?,
        None => vec![1.0; sys.dim()],
    };
    if x0.len() != sys.dim() {
        return Err(Failure::Input(format!(
            "--x0 has {} entries but the system has dimension {}",
            x0.len(),
            sys.dim()
        )));
    }
    if periods < 1 {
        return Err(Failure::Input("--periods must be at least 1".into()));
    }
    let input_err = |e: pulsekit_core::Error| Failure::Input(e.to_string());
    let traj = impulse_sim::propagate(sys, &x0, tau, periods, interior).map_err(input_err)?;
    let (r, method) = spectral_map::radius(sys, tau).map_err(input_err)?;
    // fewer than 10 periods: report the mean over all of them
    let growth = match impulse_sim::empirical_growth_factor(&traj) {
        Ok(g) => g,
        Err(_) => overall_growth(&traj),
    };
    let csv = trajectory_csv(&traj, sys.dim());
    match out {
        Some(path) => write_output(Some(path), &csv)?,
        None => {
            return Err(Failure::Input(
                "simulate requires --out for the trajectory CSV".into(),
            ))
        }
    }
    print_json(&SimulationSummary {
        system: &loaded.label,
        tau,
        periods,
        empirical_growth_factor: growth.factor,
        extinct: growth.extinct,
        r_tau: r,
        method: method.as_str(),
        time_unit: sys.time_unit(),
    })
}

fn overall_growth(traj: &ImpulseTrajectory) -> impulse_sim::GrowthFactor {
    let norms: Vec<f64> = traj
        .pre_jump_states()
        .map(|s| s.x.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let (first, last) = (norms[0], norms[norms.len() - 1]);
    if last == 0.0 || first == 0.0 {
        return impulse_sim::GrowthFactor {
            factor: 0.0,
            extinct: last == 0.0,
        };
    }
    let factor = (last / first).powf(1.0 / (norms.len() - 1) as f64);
    impulse_sim::GrowthFactor {
        factor,
        extinct: false,
    }
}

pub fn preset_table() -> String {
    let all = presets::all();
    let width = all.iter().map(|p| p.id.len()).max().unwrap_or(2);
    let mut out = format!("{:<width$}  {:>3}  {:<5}  provenance\n", "id", "n", "unit");
    for p in &all {
        writeln!(
            out,
            "{:<width$}  {:>3}  {:<5}  {}",
            p.id,
            p.system.dim(),
            p.system.time_unit(),
            p.provenance
        )
        .expect("string write");
    }
    out
}

pub fn preset(export: Option<&str>, out: Option<&Path>) -> CmdResult {
    match export {
        None => write_output(out, &preset_table()),
        Some(id) => {
            let p =
                presets::get(id).ok_or_else(|| Failure::Input(format!("unknown preset '{id}'")))?;
            let mut text = SystemFile::from_system(Some(p.id), &p.system).to_json();
            text.push('\n');
            write_output(out, &text)
        }
    }
}
