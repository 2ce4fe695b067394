//! JSON configuration documents.
//!
//! Every key is optional; omitted keys take the defaults below. Unknown keys
//! are rejected and errors name the offending field path.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analytic::QuadratureConfig;
use crate::channel::{CeeModel, Distances, NetworkModel, NoisePowers};
use crate::energy::EhConfig;
use crate::error::{Error, Result};
use crate::iqi::IqiMismatch;
use crate::mc::McConfig;
use crate::scenario::{db_to_linear, EavesdropTarget, IqiProfile, RrsChoice, Scenario, Scheme};

use super::experiment::ExperimentSpec;

/// Saturation thresholds serialize `f64::INFINITY` as `null`.
mod saturation {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_none()
        } else {
            s.serialize_some(v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Mismatch on one link; missing entries fall back to the shared values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkIqiDoc {
    pub xi_t: Option<f64>,
    pub phi_t_deg: Option<f64>,
    pub xi_r: Option<f64>,
    pub phi_r_deg: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkIqiOverrides {
    pub sr: LinkIqiDoc,
    pub rd: LinkIqiDoc,
    pub se: LinkIqiDoc,
    pub re: LinkIqiDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IqiDoc {
    /// Amplitude mismatch applied at both ends of every link.
    pub xi: f64,
    pub phi_deg: f64,
    pub links: LinkIqiOverrides,
}

impl Default for IqiDoc {
    fn default() -> Self {
        Self {
            xi: 1.1,
            phi_deg: 5.0,
            links: LinkIqiOverrides::default(),
        }
    }
}

impl IqiDoc {
    fn link(&self, o: &LinkIqiDoc) -> Result<IqiMismatch> {
        IqiMismatch::new(
            o.xi_t.unwrap_or(self.xi),
            o.phi_t_deg.unwrap_or(self.phi_deg).to_radians(),
            o.xi_r.unwrap_or(self.xi),
            o.phi_r_deg.unwrap_or(self.phi_deg).to_radians(),
        )
    }

    pub fn profile(&self) -> Result<IqiProfile> {
        Ok(IqiProfile {
            sr: self.link(&self.links.sr)?,
            rd: self.link(&self.links.rd)?,
            se: self.link(&self.links.se)?,
            re: self.link(&self.links.re)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RrsDoc {
    /// Always use `rrs_relay`.
    #[default]
    Designated,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EavesdropDoc {
    Fixed(usize),
    Selected(Scheme),
}

impl Default for EavesdropDoc {
    fn default() -> Self {
        EavesdropDoc::Fixed(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigDocument {
    pub relays: usize,
    pub distances: Distances,
    pub path_loss_exponent: f64,
    pub noise: NoisePowers,
    /// Estimation error on the legitimate links.
    pub cee: CeeModel,
    /// Estimation error on the eavesdropper links; follows `cee` when absent.
    pub cee_eve: Option<CeeModel>,
    pub alpha: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    #[serde(with = "saturation")]
    pub gamma1: f64,
    #[serde(with = "saturation")]
    pub gamma2: f64,
    /// Beacon power in dB relative to unit noise.
    pub pb_db: Option<f64>,
    /// Beacon power, linear. Mutually exclusive with `pb_db`.
    pub pb: Option<f64>,
    pub t_block: f64,
    pub iqi: IqiDoc,
    pub r_th: f64,
    pub rrs: RrsDoc,
    pub rrs_relay: usize,
    pub eavesdrop: EavesdropDoc,
    pub experiment: ExperimentSpec,
}

impl Default for ConfigDocument {
    fn default() -> Self {
        let net = NetworkModel::default();
        let eh = EhConfig::default();
        Self {
            relays: net.relays,
            distances: net.distances,
            path_loss_exponent: net.path_loss_exponent,
            noise: net.noise,
            cee: CeeModel::Fixed { variance: 0.05 },
            cee_eve: None,
            alpha: eh.alpha,
            sigma1: eh.sigma1,
            sigma2: eh.sigma2,
            gamma1: eh.gamma1,
            gamma2: eh.gamma2,
            pb_db: None,
            pb: None,
            t_block: eh.t_block,
            iqi: IqiDoc::default(),
            r_th: 0.05,
            rrs: RrsDoc::default(),
            rrs_relay: 1,
            eavesdrop: EavesdropDoc::default(),
            experiment: ExperimentSpec::default(),
        }
    }
}

pub const DEFAULT_PB_DB: f64 = 10.0;

impl ConfigDocument {
    /// Matched I/Q branches and perfect estimates, everything else default.
    pub fn ideal() -> Self {
        Self {
            cee: CeeModel::Fixed { variance: 0.0 },
            iqi: IqiDoc {
                xi: 1.0,
                phi_deg: 0.0,
                links: LinkIqiOverrides::default(),
            },
            ..Self::default()
        }
    }

    pub fn beacon_power(&self) -> Result<f64> {
        match (self.pb_db, self.pb) {
            (Some(_), Some(_)) => Err(Error::Config("set either `pb_db` or `pb`, not both".into())),
            (Some(db), None) => Ok(db_to_linear(db)),
            (None, Some(p)) => Ok(p),
            (None, None) => Ok(db_to_linear(DEFAULT_PB_DB)),
        }
    }

    pub fn set_pb_db(&mut self, db: f64) {
        self.pb_db = Some(db);
        self.pb = None;
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let s = Scenario {
            network: NetworkModel {
                relays: self.relays,
                distances: self.distances,
                path_loss_exponent: self.path_loss_exponent,
                noise: self.noise,
                cee: self.cee,
                cee_eve: self.cee_eve.unwrap_or(self.cee),
            },
            harvester: EhConfig {
                alpha: self.alpha,
                sigma1: self.sigma1,
                sigma2: self.sigma2,
                gamma1: self.gamma1,
                gamma2: self.gamma2,
                p_b: self.beacon_power()?,
                t_block: self.t_block,
            },
            iqi: self.iqi.profile()?,
            r_th: self.r_th,
            rrs: match self.rrs {
                RrsDoc::Designated => RrsChoice::Designated(self.rrs_relay),
                RrsDoc::Uniform => RrsChoice::Uniform,
            },
            eavesdrop: match self.eavesdrop {
                EavesdropDoc::Fixed(m) => EavesdropTarget::Fixed(m),
                EavesdropDoc::Selected(s) => EavesdropTarget::Selected(s),
            },
        };
        s.validate()?;
        Ok(s)
    }

    pub fn mc_config(&self) -> McConfig {
        let e = &self.experiment;
        McConfig {
            trials: e.trials,
            seed: e.seed,
            workers: e.workers,
            chunk: e.chunk,
        }
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            nodes: self.experiment.y_nodes,
            rule: self.experiment.quadrature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario()?;
        self.experiment.validate()?;
        self.mc_config().validate()?;
        self.quadrature().validate()
    }

    pub fn output(&self) -> Option<&PathBuf> {
        self.experiment.output.as_ref()
    }
}

/// Parses and validates a configuration from JSON text.
pub fn parse_config(json: &str) -> Result<ConfigDocument> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let doc: ConfigDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Config(format!("at `{path}`: {}", e.into_inner()))
    })?;
    doc.validate()?;
    Ok(doc)
}

pub fn load_config(path: &Path) -> Result<ConfigDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}
