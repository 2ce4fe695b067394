//! Command-line flags. Flags override values from the configuration file.

use std::path::PathBuf;

use clap::Parser;

use crate::error::Result;
use crate::scenario::Scheme;

use super::config::{load_config, ConfigDocument};
use super::experiment::{Metric, Mode, SweepSpec};

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "iqisec",
    version,
    about = "Outage and intercept probability sweeps for wireless-powered relay networks"
)]
pub struct Flags {
    /// JSON configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub metric: Option<Metric>,
    /// Comma-separated subset of rrs,srs,ors.
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    pub scheme: Option<Vec<Scheme>>,
    /// VAR:START:STOP:STEP, e.g. pb_db:0:40:2.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Option<SweepSpec>,
    /// Monte Carlo trials per point (integer).
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Chebyshev nodes per finite integral.
    #[arg(long = "y-nodes")]
    pub y_nodes: Option<usize>,
    /// Worker threads for Monte Carlo; 0 uses every core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Comma-separated subset of mc,analytic,asymptotic.
    #[arg(long, value_delimiter = ',', value_parser = parse_mode)]
    pub modes: Option<Vec<Mode>>,
    /// CSV destination; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Exit with status 3 if any point hits the SINR-ceiling short-circuit.
    #[arg(long)]
    pub strict: bool,
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_sweep(s: &str) -> std::result::Result<SweepSpec, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

impl Flags {
    /// Loads the configuration (or defaults) and applies the overrides.
    pub fn resolve(&self) -> Result<ConfigDocument> {
        let mut doc = match &self.config {
            Some(p) => load_config(p)?,
            None => ConfigDocument::default(),
        };
        let e = &mut doc.experiment;
        if let Some(m) = self.metric {
            e.metric = m;
        }
        if let Some(s) = &self.scheme {
            e.schemes = s.clone();
        }
        if let Some(s) = self.sweep {
            e.sweep = s;
        }
        if let Some(t) = self.trials {
            e.trials = t;
        }
        if let Some(s) = self.seed {
            e.seed = s;
        }
        if let Some(y) = self.y_nodes {
            e.y_nodes = y;
        }
        if let Some(w) = self.workers {
            e.workers = w;
        }
        if let Some(m) = &self.modes {
            e.modes = m.clone();
        }
        if let Some(o) = &self.out {
            e.output = Some(o.clone());
        }
        doc.validate()?;
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> std::result::Result<Flags, clap::Error> {
        Flags::try_parse_from(std::iter::once("iqisec").chain(args.iter().copied()))
    }

    #[test]
    fn sweep_flag() {
        let f = parse(&["--sweep", "pb_db:0:40:2"]).unwrap();
        assert_eq!(f.sweep.unwrap().points().len(), 21);
        assert!(parse(&["--sweep", "pb_db:0:40"]).is_err());
    }

    #[test]
    fn trials_must_be_integer() {
        assert!(parse(&["--trials", "1e6"]).is_err());
        assert_eq!(
            parse(&["--trials", "1000000"]).unwrap().trials,
            Some(1_000_000)
        );
    }

    #[test]
    fn unknown_flag_rejected() {
        assert!(parse(&["--bogus"]).is_err());
    }

    #[test]
    fn lists_and_defaults() {
        let f = parse(&[
            "--scheme",
            "rrs,ors",
            "--modes",
            "mc,asymptotic",
            "--metric",
            "ip_relay",
        ])
        .unwrap();
        assert_eq!(f.scheme, Some(vec![Scheme::Rrs, Scheme::Ors]));
        assert_eq!(f.modes, Some(vec![Mode::Mc, Mode::Asymptotic]));
        assert_eq!(f.metric, Some(Metric::IpRelay));
        assert!(f.out.is_none());
        let doc = f.resolve().unwrap();
        assert_eq!(doc.experiment.metric, Metric::IpRelay);
        assert!(doc.output().is_none());
        assert!(parse(&["--scheme", "best"]).is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"experiment": {"seed": 5, "trials": 10}}"#).unwrap();
        let f = parse(&["--config", path.to_str().unwrap(), "--seed", "9"]).unwrap();
        let doc = f.resolve().unwrap();
        assert_eq!(doc.experiment.seed, 9);
        assert_eq!(doc.experiment.trials, 10);
    }
}
