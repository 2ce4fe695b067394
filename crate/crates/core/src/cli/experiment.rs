//! Parameter sweeps and CSV output.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{self, QuadratureRule};
use crate::channel::CeeModel;
use crate::error::{Error, Result};
use crate::mc::{self, IpMode};
use crate::scenario::{EavesdropTarget, Scheme};

use super::config::ConfigDocument;

/// First line of every CSV file; bump when columns change.
pub const CSV_VERSION_LINE: &str = "# iqisec-csv v1";
pub const CSV_COLUMNS: [&str; 11] = [
    "metric",
    "scheme",
    "mode",
    "sweep_var",
    "sweep_value",
    "value",
    "stderr",
    "trials",
    "seed",
    "y_nodes",
    "note",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Metric {
    Op,
    IpDirect,
    IpRelay,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Op => "op",
            Metric::IpDirect => "ip_direct",
            Metric::IpRelay => "ip_relay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Mc,
    Analytic,
    Asymptotic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Mc => "mc",
            Mode::Analytic => "analytic",
            Mode::Asymptotic => "asymptotic",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mc" => Ok(Mode::Mc),
            "analytic" => Ok(Mode::Analytic),
            "asymptotic" => Ok(Mode::Asymptotic),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected mc, analytic or asymptotic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    PbDb,
    Xi,
    PhiDeg,
    Alpha,
    Sigma1,
    Sigma2,
    M,
    SigmaE2,
    Delta,
    RTh,
}

impl SweepVar {
    pub const ALL: [SweepVar; 10] = [
        SweepVar::PbDb,
        SweepVar::Xi,
        SweepVar::PhiDeg,
        SweepVar::Alpha,
        SweepVar::Sigma1,
        SweepVar::Sigma2,
        SweepVar::M,
        SweepVar::SigmaE2,
        SweepVar::Delta,
        SweepVar::RTh,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::PbDb => "pb_db",
            SweepVar::Xi => "xi",
            SweepVar::PhiDeg => "phi_deg",
            SweepVar::Alpha => "alpha",
            SweepVar::Sigma1 => "sigma1",
            SweepVar::Sigma2 => "sigma2",
            SweepVar::M => "m",
            SweepVar::SigmaE2 => "sigma_e2",
            SweepVar::Delta => "delta",
            SweepVar::RTh => "r_th",
        }
    }

    /// Writes `value` into the document.
    pub fn apply(self, doc: &mut ConfigDocument, value: f64) -> Result<()> {
        match self {
            SweepVar::PbDb => doc.set_pb_db(value),
            SweepVar::Xi => doc.iqi.xi = value,
            SweepVar::PhiDeg => doc.iqi.phi_deg = value,
            SweepVar::Alpha => doc.alpha = value,
            SweepVar::Sigma1 => doc.sigma1 = value,
            SweepVar::Sigma2 => doc.sigma2 = value,
            SweepVar::M => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::Config(format!(
                        "relay count must be a positive integer, got {value}"
                    )));
                }
                doc.relays = value as usize;
            }
            SweepVar::SigmaE2 => doc.cee = CeeModel::Fixed { variance: value },
            SweepVar::Delta => doc.cee = CeeModel::SnrDependent { delta: value },
            SweepVar::RTh => doc.r_th = value,
        }
        Ok(())
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepVar::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep variable `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            var: SweepVar::PbDb,
            start: 0.0,
            stop: 30.0,
            step: 10.0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Config(format!(
                "sweep step must be > 0, got {}",
                self.step
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.stop >= self.start) {
            return Err(Error::Config(format!(
                "sweep needs finite start <= stop, got {}..{}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Grid `start, start + step, ...` up to and including `stop`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| {
                let v = self.start + i as f64 * self.step;
                (v * 1e12).round() / 1e12
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = Error;
    /// `VAR:START:STOP:STEP`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!(
                "sweep `{s}` is not VAR:START:STOP:STEP"
            )));
        }
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Config(format!("sweep `{s}`: `{t}` is not a number")))
        };
        let spec = SweepSpec {
            var: parts[0].parse()?,
            start: num(parts[1])?,
            stop: num(parts[2])?,
            step: num(parts[3])?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSpec {
    pub metric: Metric,
    pub schemes: Vec<Scheme>,
    pub sweep: SweepSpec,
    pub modes: Vec<Mode>,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub chunk: u64,
    pub y_nodes: usize,
    pub quadrature: QuadratureRule,
    /// CSV destination; standard output when absent.
    pub output: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let mc = mc::McConfig::default();
        Self {
            metric: Metric::Op,
            schemes: Scheme::ALL.to_vec(),
            sweep: SweepSpec::default(),
            modes: vec![Mode::Analytic, Mode::Mc],
            trials: mc.trials,
            seed: mc.seed,
            workers: mc.workers,
            chunk: mc.chunk,
            y_nodes: analytic::QuadratureConfig::default().nodes,
            quadrature: QuadratureRule::default(),
            output: None,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        if self.metric == Metric::Op && self.schemes.is_empty() {
            return Err(Error::Config("at least one scheme is required".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("at least one mode is required".into()));
        }
        Ok(())
    }
}

/// One CSV line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub metric: &'static str,
    pub scheme: &'static str,
    pub mode: &'static str,
    pub sweep_var: &'static str,
    pub sweep_value: f64,
    pub value: f64,
    pub stderr: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub y_nodes: Option<usize>,
    pub note: String,
}

impl Row {
    /// True when the value came from the SINR-ceiling short-circuit.
    pub fn is_short_circuit(&self) -> bool {
        self.note.starts_with("threshold")
    }
}

/// Evaluates every (sweep point, scheme, mode) combination of `doc`.
pub fn run_experiment(doc: &ConfigDocument) -> Result<Vec<Row>> {
    let spec = &doc.experiment;
    spec.validate()?;
    let mut rows = Vec::new();
    for x in spec.sweep.points() {
        let mut point = doc.clone();
        spec.sweep.var.apply(&mut point, x)?;
        log::info!("{} = {x}", spec.sweep.var.as_str());
        let scenario = point.scenario()?;
        let mcfg = point.mc_config();
        let quad = point.quadrature();
        let base = |scheme: &'static str, mode: Mode| Row {
            metric: spec.metric.as_str(),
            scheme,
            mode: mode.as_str(),
            sweep_var: spec.sweep.var.as_str(),
            sweep_value: x,
            value: f64::NAN,
            stderr: None,
            trials: None,
            seed: None,
            y_nodes: None,
            note: String::new(),
        };
        let analytic_row = |scheme, mode, e: analytic::Evaluation, nodes: Option<usize>| Row {
            value: e.probability,
            y_nodes: nodes,
            note: e.note.unwrap_or_default(),
            ..base(scheme, mode)
        };
        let mc_row = |scheme, e: mc::MetricEstimate| Row {
            value: e.p_hat,
            stderr: Some(e.stderr),
            trials: Some(e.trials),
            seed: Some(e.seed),
            ..base(scheme, Mode::Mc)
        };

        match spec.metric {
            Metric::Op => {
                let mc_all = if spec.modes.contains(&Mode::Mc) {
                    Some(mc::estimate_op_all(&scenario, &mcfg)?)
                } else {
                    None
                };
                for &scheme in &spec.schemes {
                    for &mode in &spec.modes {
                        let row = match mode {
                            Mode::Analytic => analytic_row(
                                scheme.as_str(),
                                mode,
                                analytic::op(scheme, &scenario, &quad)?,
                                Some(quad.nodes),
                            ),
                            Mode::Asymptotic => analytic_row(
                                scheme.as_str(),
                                mode,
                                analytic::op_asymptotic(scheme, &scenario)?,
                                None,
                            ),
                            Mode::Mc => {
                                let idx =
                                    Scheme::ALL.iter().position(|s| *s == scheme).unwrap_or(0);
                                let est = mc_all.as_ref().map(|a| a[idx]).ok_or_else(|| {
                                    Error::Numeric("missing Monte Carlo estimate".into())
                                })?;
                                mc_row(scheme.as_str(), est)
                            }
                        };
                        rows.push(row);
                    }
                }
            }
            Metric::IpDirect | Metric::IpRelay => {
                let (ip_mode, label) = match spec.metric {
                    Metric::IpDirect => (IpMode::Direct, ""),
                    _ => match scenario.eavesdrop {
                        EavesdropTarget::Selected(s) => (IpMode::Relay, s.as_str()),
                        EavesdropTarget::Fixed(_) => (IpMode::Relay, ""),
                    },
                };
                for &mode in &spec.modes {
                    match mode {
                        Mode::Analytic => {
                            let mut e = match ip_mode {
                                IpMode::Direct => analytic::ip_direct(&scenario, &quad)?,
                                IpMode::Relay => analytic::ip_relay(&scenario, &quad, 1)?,
                            };
                            // Relays are exchangeable unless the choice looks at P_R.
                            if ip_mode == IpMode::Relay
                                && scenario.eavesdrop == EavesdropTarget::Selected(Scheme::Ors)
                                && e.note.is_none()
                            {
                                e.note = Some("closed form ignores the ORS selection bias".into());
                            }
                            rows.push(analytic_row(label, mode, e, Some(quad.nodes)));
                        }
                        Mode::Mc => {
                            rows.push(mc_row(label, mc::estimate_ip(ip_mode, &scenario, &mcfg)?))
                        }
                        // No high-power interception limit is tabulated.
                        Mode::Asymptotic => {}
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Writes the version line, the header and every row.
pub fn write_csv<W: Write>(rows: &[Row], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Numeric(format!("csv: {e}"))
}
