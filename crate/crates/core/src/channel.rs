//! Topology, Rayleigh fading with path loss, and channel-estimation error.
//!
//! All relays are statistically identical: every `S -> R_m` link shares one
//! distance, noise power and estimation model, and likewise for the other
//! link classes. Power gains of estimated channels are exponential with
//! rate `1 / (Omega - sigma_e^2)` (orthogonal LMMSE decomposition
//! `h = h_hat + e`).

use std::fmt;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkClass {
    /// Beacon to source (energy transfer).
    BeaconSource,
    /// Beacon to relay (energy transfer).
    BeaconRelay,
    SourceRelay,
    RelayDestination,
    SourceEavesdropper,
    RelayEavesdropper,
}

impl LinkClass {
    /// Links that carry information and therefore suffer estimation error.
    pub fn carries_data(self) -> bool {
        !matches!(self, LinkClass::BeaconSource | LinkClass::BeaconRelay)
    }

    pub fn is_eavesdropper(self) -> bool {
        matches!(
            self,
            LinkClass::SourceEavesdropper | LinkClass::RelayEavesdropper
        )
    }
}

/// A concrete link. Relay numbers are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkId {
    BS,
    BR(usize),
    SR(usize),
    RD(usize),
    SE,
    RE(usize),
}

impl LinkId {
    pub fn class(self) -> LinkClass {
        match self {
            LinkId::BS => LinkClass::BeaconSource,
            LinkId::BR(_) => LinkClass::BeaconRelay,
            LinkId::SR(_) => LinkClass::SourceRelay,
            LinkId::RD(_) => LinkClass::RelayDestination,
            LinkId::SE => LinkClass::SourceEavesdropper,
            LinkId::RE(_) => LinkClass::RelayEavesdropper,
        }
    }

    pub fn relay(self) -> Option<usize> {
        match self {
            LinkId::BR(m) | LinkId::SR(m) | LinkId::RD(m) | LinkId::RE(m) => Some(m),
            LinkId::BS | LinkId::SE => None,
        }
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkId::BS => write!(f, "B->S"),
            LinkId::BR(m) => write!(f, "B->R{m}"),
            LinkId::SR(m) => write!(f, "S->R{m}"),
            LinkId::RD(m) => write!(f, "R{m}->D"),
            LinkId::SE => write!(f, "S->E"),
            LinkId::RE(m) => write!(f, "R{m}->E"),
        }
    }
}

/// Channel-estimation error model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum CeeModel {
    /// Constant error variance.
    Fixed { variance: f64 },
    /// `sigma^2 = Omega / (1 + delta * rho * Omega)`.
    SnrDependent { delta: f64 },
}

impl CeeModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CeeModel::Fixed { variance } if !(variance.is_finite() && variance >= 0.0) => {
                Err(Error::invalid(
                    "cee.variance",
                    format!("must be finite and >= 0, got {variance}"),
                ))
            }
            CeeModel::SnrDependent { delta } if !(delta.is_finite() && delta > 0.0) => Err(
                Error::invalid("cee.delta", format!("must be > 0, got {delta}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn fixed_variance(&self) -> Option<f64> {
        match *self {
            CeeModel::Fixed { variance } => Some(variance),
            CeeModel::SnrDependent { .. } => None,
        }
    }
}

impl Default for CeeModel {
    fn default() -> Self {
        CeeModel::Fixed { variance: 0.0 }
    }
}

/// Node distances, one per link class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Distances {
    pub sr: f64,
    pub rd: f64,
    pub re: f64,
    pub se: f64,
    pub bs: f64,
    pub br: f64,
}

impl Default for Distances {
    fn default() -> Self {
        Self {
            sr: 1.5,
            rd: 1.5,
            re: 1.5,
            se: 2.0,
            bs: 1.0,
            br: 1.0,
        }
    }
}

/// Receiver noise power per data-carrying link class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoisePowers {
    pub sr: f64,
    pub rd: f64,
    pub se: f64,
    pub re: f64,
}

impl Default for NoisePowers {
    fn default() -> Self {
        Self {
            sr: 1.0,
            rd: 1.0,
            se: 1.0,
            re: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    pub relays: usize,
    pub distances: Distances,
    pub path_loss_exponent: f64,
    pub noise: NoisePowers,
    /// Estimation error on the legitimate links (S->R, R->D).
    pub cee: CeeModel,
    /// Estimation error on the eavesdropper links (S->E, R->E).
    pub cee_eve: CeeModel,
}

impl Default for NetworkModel {
    fn default() -> Self {
        Self {
            relays: 2,
            distances: Distances::default(),
            path_loss_exponent: 3.0,
            noise: NoisePowers::default(),
            cee: CeeModel::default(),
            cee_eve: CeeModel::default(),
        }
    }
}

impl NetworkModel {
    pub fn validate(&self) -> Result<()> {
        if self.relays == 0 {
            return Err(Error::invalid("relays", "at least one relay is required"));
        }
        if !(self.path_loss_exponent.is_finite() && self.path_loss_exponent > 0.0) {
            return Err(Error::invalid("path_loss_exponent", "must be > 0"));
        }
        let d = &self.distances;
        for (name, v) in [
            ("distances.sr", d.sr),
            ("distances.rd", d.rd),
            ("distances.re", d.re),
            ("distances.se", d.se),
            ("distances.bs", d.bs),
            ("distances.br", d.br),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        let n = &self.noise;
        for (name, v) in [
            ("noise.sr", n.sr),
            ("noise.rd", n.rd),
            ("noise.se", n.se),
            ("noise.re", n.re),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        self.cee.validate()?;
        self.cee_eve.validate()?;
        // A fixed variance must leave room for the estimated channel.
        for link in [LinkId::SR(1), LinkId::RD(1), LinkId::SE, LinkId::RE(1)] {
            estimated_gain_rate(self, link, 1.0)?;
        }
        Ok(())
    }

    pub fn distance(&self, class: LinkClass) -> f64 {
        let d = &self.distances;
        match class {
            LinkClass::BeaconSource => d.bs,
            LinkClass::BeaconRelay => d.br,
            LinkClass::SourceRelay => d.sr,
            LinkClass::RelayDestination => d.rd,
            LinkClass::SourceEavesdropper => d.se,
            LinkClass::RelayEavesdropper => d.re,
        }
    }

    /// Channel-gain variance `Omega = d^-beta`.
    pub fn omega(&self, class: LinkClass) -> f64 {
        self.distance(class).powf(-self.path_loss_exponent)
    }

    /// Noise power at the receiving end; energy links report 1.
    pub fn noise_power(&self, class: LinkClass) -> f64 {
        let n = &self.noise;
        match class {
            LinkClass::SourceRelay => n.sr,
            LinkClass::RelayDestination => n.rd,
            LinkClass::SourceEavesdropper => n.se,
            LinkClass::RelayEavesdropper => n.re,
            LinkClass::BeaconSource | LinkClass::BeaconRelay => 1.0,
        }
    }

    pub fn cee_for(&self, class: LinkClass) -> Option<CeeModel> {
        if !class.carries_data() {
            None
        } else if class.is_eavesdropper() {
            Some(self.cee_eve)
        } else {
            Some(self.cee)
        }
    }

    pub fn check_relay(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.relays {
            Err(Error::RelayOutOfRange {
                index,
                relays: self.relays,
            })
        } else {
            Ok(())
        }
    }

    /// Fading statistics of every link class at average SNR `P_B / N_j`.
    pub fn statistics(&self, p_b: f64) -> Result<LinkStatistics> {
        let stat = |link: LinkId| -> Result<LinkStat> {
            let class = link.class();
            let noise = self.noise_power(class);
            let rho = p_b / noise;
            Ok(LinkStat {
                rate: estimated_gain_rate(self, link, rho)?,
                sigma_e2: estimation_variance(self, link, rho)?,
                noise,
            })
        };
        Ok(LinkStatistics {
            bs: stat(LinkId::BS)?,
            br: stat(LinkId::BR(1))?,
            sr: stat(LinkId::SR(1))?,
            rd: stat(LinkId::RD(1))?,
            se: stat(LinkId::SE)?,
            re: stat(LinkId::RE(1))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStat {
    /// Exponential rate of the estimated power gain.
    pub rate: f64,
    pub sigma_e2: f64,
    pub noise: f64,
}

/// Per-class statistics shared by the simulator and the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStatistics {
    pub bs: LinkStat,
    pub br: LinkStat,
    pub sr: LinkStat,
    pub rd: LinkStat,
    pub se: LinkStat,
    pub re: LinkStat,
}

fn check_link(model: &NetworkModel, link: LinkId) -> Result<()> {
    match link.relay() {
        Some(m) => model.check_relay(m),
        None => Ok(()),
    }
}

/// Variance of the estimation error on `link` at average SNR `rho`.
///
/// Energy-transfer links are not estimated and report zero.
pub fn estimation_variance(model: &NetworkModel, link: LinkId, rho: f64) -> Result<f64> {
    check_link(model, link)?;
    if !(rho >= 0.0) {
        return Err(Error::invalid(
            "rho",
            format!("average SNR must be >= 0, got {rho}"),
        ));
    }
    let class = link.class();
    let omega = model.omega(class);
    match model.cee_for(class) {
        None => Ok(0.0),
        Some(CeeModel::Fixed { variance }) => {
            if variance >= omega {
                Err(Error::DegenerateVariance {
                    link,
                    sigma_e2: variance,
                    omega,
                })
            } else {
                Ok(variance)
            }
        }
        Some(CeeModel::SnrDependent { delta }) => {
            if rho.is_infinite() {
                Ok(0.0)
            } else {
                Ok(omega / (1.0 + delta * rho * omega))
            }
        }
    }
}

/// Exponential rate of `|h_hat|^2`: `1 / (Omega - sigma_e^2)`.
pub fn estimated_gain_rate(model: &NetworkModel, link: LinkId, rho: f64) -> Result<f64> {
    let sigma_e2 = estimation_variance(model, link, rho)?;
    let omega = model.omega(link.class());
    let spread = omega - sigma_e2;
    if spread <= 0.0 {
        return Err(Error::DegenerateVariance {
            link,
            sigma_e2,
            omega,
        });
    }
    Ok(1.0 / spread)
}

/// One exponential power-gain draw with the given rate (mean `1/rate`).
#[inline]
pub fn sample_gain<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    e / rate
}
