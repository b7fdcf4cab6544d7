//! Executes a resolved configuration and writes its outputs.

use std::path::PathBuf;

use biphoton::{
    classical_curve, default_delta_grid, idler_spectrum, measured_curve, quantum_comb,
    recover_waveform_with, signal_spectrum, sum_rules, BiphotonModel, FrequencyGrid, ModulatorSpec,
    ModulatorWarning,
};

use crate::config::{Format, ModelConfig, ModulatorConfig, RunConfig, Scenario};
use crate::error::CliError;
use crate::output::{output_path, write_csv, write_svg, ChartStyle, Key, Series};

/// What a run produced: files written, summary lines and warnings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

/// A named series to serialize, with the chart style used for SVG.
struct Output {
    suffix: &'static str,
    title: String,
    series: Series,
    style: ChartStyle,
}

fn build_model(cfg: &RunConfig) -> Result<BiphotonModel, CliError> {
    let grid = FrequencyGrid::symmetric(cfg.grid.half_width, cfg.grid.n_points)?;
    Ok(match cfg.model {
        ModelConfig::Rectangular { center } => BiphotonModel::rectangular(center, grid)?,
        ModelConfig::Gaussian { duration, delay } => {
            BiphotonModel::gaussian_delayed(duration, delay, grid)?
        }
    })
}

fn build_modulator(
    m: ModulatorConfig,
    fallback_omega_m: f64,
    tol: f64,
) -> Result<ModulatorSpec, CliError> {
    Ok(match m {
        ModulatorConfig::Identity => ModulatorSpec::identity(fallback_omega_m)?,
        ModulatorConfig::Phase { depth, omega_m } => ModulatorSpec::phase(depth, omega_m, tol)?,
        ModulatorConfig::Amplitude { depth, omega_m } => {
            ModulatorSpec::amplitude(depth, omega_m.unwrap_or(fallback_omega_m))?
        }
    })
}

fn modulator_pair(cfg: &RunConfig) -> Result<(ModulatorSpec, ModulatorSpec), CliError> {
    let fallback = cfg
        .signal
        .omega_m()
        .or_else(|| cfg.idler.omega_m())
        .unwrap_or(1.0);
    let s = build_modulator(cfg.signal, fallback, cfg.tol)?;
    let i = build_modulator(cfg.idler, fallback, cfg.tol)?;
    Ok((s, i))
}

fn describe(w: &ModulatorWarning) -> String {
    match w {
        ModulatorWarning::DepthExceedsTransmission { depth } => {
            format!("amplitude depth {depth} drives transmission above one")
        }
        ModulatorWarning::DepthProductNotSmall { product } => format!(
            "depth product {product} is not small; the lowest-order measurement theory may not hold"
        ),
    }
}

fn real_keys(xs: &[f64]) -> Vec<Key> {
    xs.iter().map(|&x| Key::Real(x)).collect()
}

fn spectrum(cfg: &RunConfig, report: &mut RunReport) -> Result<Vec<Output>, CliError> {
    let model = build_model(cfg)?;
    let (ms, mi) = modulator_pair(cfg)?;
    for m in [&ms, &mi] {
        report.warnings.extend(m.warnings().iter().map(describe));
    }
    let s = signal_spectrum(&model, &ms, cfg.gatewidth)?;
    let i = idler_spectrum(&model, &mi, cfg.gatewidth)?;
    let rt = model.pair_rate() * cfg.gatewidth;
    report
        .summary
        .push(format!("pair_rate R = {:.9}", model.pair_rate()));
    report
        .summary
        .push(format!("signal total/RT = {:.9}", s.total_counts / rt));
    report
        .summary
        .push(format!("idler total/RT = {:.9}", i.total_counts / rt));
    let keys = real_keys(&model.grid().points());
    Ok(vec![
        Output {
            suffix: "signal",
            title: "signal spectrum".into(),
            series: Series {
                columns: ["omega", "counts"],
                keys: keys.clone(),
                values: s.values,
            },
            style: ChartStyle::Line,
        },
        Output {
            suffix: "idler",
            title: "idler spectrum".into(),
            series: Series {
                columns: ["omega", "counts"],
                keys,
                values: i.values,
            },
            style: ChartStyle::Line,
        },
    ])
}

fn correlate(
    cfg: &RunConfig,
    report: &mut RunReport,
    with_files: bool,
) -> Result<Vec<Output>, CliError> {
    let model = build_model(cfg)?;
    let (ms, mi) = modulator_pair(cfg)?;
    for m in [&ms, &mi] {
        report.warnings.extend(m.warnings().iter().map(describe));
    }
    let dg = match cfg.delta_grid {
        Some(g) => FrequencyGrid::symmetric(g.half_width, g.n_points)?,
        None => default_delta_grid(model.grid())?,
    };
    let comb = quantum_comb(&model, &ms, &mi, cfg.gatewidth)?;
    let curve = classical_curve(&model, &ms, &mi, cfg.gatewidth, &dg)?;
    let rep = sum_rules(&comb, &curve, &model)?;
    report.summary.extend([
        format!("pair_rate R = {:.9}", rep.pair_rate),
        format!("gatewidth T = {}", rep.gatewidth),
        format!(
            "quantum_sum/RT = {:.6}",
            rep.quantum_sum / (rep.pair_rate * rep.gatewidth)
        ),
        format!("quantum_deviation = {:.3e}", rep.quantum_deviation),
        format!(
            "classical_integral/(RT)^2 = {:.6}",
            rep.classical_integral / (rep.pair_rate * rep.gatewidth).powi(2)
        ),
        format!("classical_deviation = {:.3e}", rep.classical_deviation),
        format!("off_center_fraction = {:.6}", comb.off_center_fraction()),
        format!("single_pair_regime = {}", rep.single_pair_regime),
    ]);
    if !with_files {
        return Ok(Vec::new());
    }
    Ok(vec![
        Output {
            suffix: "comb",
            title: "quantum correlation comb".into(),
            series: Series {
                columns: ["z", "f_normalized"],
                keys: comb.iter().map(|(z, _)| Key::Int(z)).collect(),
                values: comb.normalized(),
            },
            style: ChartStyle::Stem,
        },
        Output {
            suffix: "classical",
            title: "classical correlation".into(),
            series: Series {
                columns: ["delta", "c"],
                keys: real_keys(&dg.points()),
                values: curve.values,
            },
            style: ChartStyle::Line,
        },
    ])
}

fn measure(cfg: &RunConfig, report: &mut RunReport) -> Result<Vec<Output>, CliError> {
    let model = build_model(cfg)?;
    let depth = |m: ModulatorConfig| match m {
        ModulatorConfig::Amplitude { depth, .. } => Ok(depth),
        _ => Err(CliError::Config(
            "measure requires amplitude modulators".into(),
        )),
    };
    let (ds, di) = (depth(cfg.signal)?, depth(cfg.idler)?);
    let sw = cfg.sweep;
    let curve = measured_curve(&model, ds, di, sw.omega_m_max, sw.n_samples)?;
    report.warnings.extend(curve.warnings.iter().map(describe));
    let wave = recover_waveform_with(&curve, sw.tau_max, sw.n_tau, sw.window)?;
    report.summary.extend([
        format!("kappa = {:.9e}", curve.kappa),
        format!("F(0) = {:.9e}", curve.f_values[0]),
        format!("peak_tau = {:.6}", wave.peak_tau()),
        format!("tau_step = {:.6}", wave.tau_step()),
        format!("clipped_fraction = {:.6}", wave.clipped_fraction),
    ]);
    Ok(vec![
        Output {
            suffix: "curve",
            title: "coincidence rate vs modulation frequency".into(),
            series: Series {
                columns: ["omega_m", "F"],
                keys: real_keys(&curve.omega_m_values),
                values: curve.mean_subtracted(),
            },
            style: ChartStyle::Line,
        },
        Output {
            suffix: "waveform",
            title: "recovered biphoton intensity".into(),
            series: Series {
                columns: ["tau", "intensity"],
                keys: real_keys(&wave.tau_values),
                values: wave.intensity,
            },
            style: ChartStyle::Line,
        },
    ])
}

/// Runs one configuration on the current rayon pool.
pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::default();
    let outputs = match cfg.scenario {
        Scenario::Spectrum => spectrum(cfg, &mut report)?,
        Scenario::Correlate => correlate(cfg, &mut report, true)?,
        Scenario::Sumrules => correlate(cfg, &mut report, false)?,
        Scenario::Measure => measure(cfg, &mut report)?,
        Scenario::FigurePreset => {
            return Err(CliError::Config(
                "figure-preset must be resolved to a scenario".into(),
            ))
        }
    };
    for out in &outputs {
        let csv = output_path(&cfg.output, out.suffix, "csv");
        write_csv(&csv, &out.series)?;
        report.files.push(csv);
        if cfg.format == Format::CsvSvg {
            let svg = output_path(&cfg.output, out.suffix, "svg");
            write_svg(&svg, &out.title, &out.series, out.style)?;
            report.files.push(svg);
        }
    }
    Ok(report)
}
