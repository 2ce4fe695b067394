//! Everything needed to evaluate one operating point: network geometry,
//! harvester, per-link I/Q imbalance, rate threshold and selection policy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{CeeModel, LinkStatistics, NetworkModel};
use crate::energy::EhConfig;
use crate::error::{Error, Result};
use crate::iqi::{IqiLinkGains, IqiMismatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Rrs,
    Srs,
    Ors,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Rrs, Scheme::Srs, Scheme::Ors];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Rrs => "rrs",
            Scheme::Srs => "srs",
            Scheme::Ors => "ors",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rrs" => Ok(Scheme::Rrs),
            "srs" => Ok(Scheme::Srs),
            "ors" => Ok(Scheme::Ors),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected rrs, srs or ors)"
            ))),
        }
    }
}

/// I/Q mismatch of each data link, transmitter and receiver ends included.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IqiProfile {
    pub sr: IqiMismatch,
    pub rd: IqiMismatch,
    pub se: IqiMismatch,
    pub re: IqiMismatch,
}

impl IqiProfile {
    pub fn uniform(m: IqiMismatch) -> Self {
        Self {
            sr: m,
            rd: m,
            se: m,
            re: m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sr.validate()?;
        self.rd.validate()?;
        self.se.validate()?;
        self.re.validate()
    }

    pub fn link_gains(&self) -> ProfileGains {
        ProfileGains {
            sr: IqiLinkGains::from_mismatch(&self.sr),
            rd: IqiLinkGains::from_mismatch(&self.rd),
            se: IqiLinkGains::from_mismatch(&self.se),
            re: IqiLinkGains::from_mismatch(&self.re),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileGains {
    pub sr: IqiLinkGains,
    pub rd: IqiLinkGains,
    pub se: IqiLinkGains,
    pub re: IqiLinkGains,
}

/// How RRS picks its relay in simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrsChoice {
    /// Always the given 1-based relay.
    Designated(usize),
    /// A fresh uniform draw every trial.
    Uniform,
}

/// Which relay the eavesdropper listens to in via-relay interception.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EavesdropTarget {
    Fixed(usize),
    /// Whatever relay the scheme selects in that trial.
    Selected(Scheme),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub network: NetworkModel,
    pub harvester: EhConfig,
    pub iqi: IqiProfile,
    /// Target rate in bit/s/Hz.
    pub r_th: f64,
    pub rrs: RrsChoice,
    pub eavesdrop: EavesdropTarget,
}

impl Default for Scenario {
    fn default() -> Self {
        Self::non_ideal()
    }
}

impl Scenario {
    /// Matched I/Q branches and perfect channel estimates.
    pub fn ideal() -> Self {
        Self {
            network: NetworkModel::default(),
            harvester: EhConfig::default(),
            iqi: IqiProfile::default(),
            r_th: 0.05,
            rrs: RrsChoice::Designated(1),
            eavesdrop: EavesdropTarget::Fixed(1),
        }
    }

    /// `xi = 1.1`, `phi = 5 deg` everywhere and estimation-error variance 0.05.
    pub fn non_ideal() -> Self {
        let mut s = Self::ideal();
        s.iqi = IqiProfile::uniform(IqiMismatch::symmetric_deg(1.1, 5.0).expect("valid mismatch"));
        s.network.cee = CeeModel::Fixed { variance: 0.05 };
        s.network.cee_eve = CeeModel::Fixed { variance: 0.05 };
        s
    }

    pub fn with_pb_db(mut self, pb_db: f64) -> Self {
        self.harvester.p_b = db_to_linear(pb_db);
        self
    }

    pub fn with_relays(mut self, relays: usize) -> Self {
        self.network.relays = relays;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        self.harvester.validate()?;
        self.iqi.validate()?;
        if !(self.r_th.is_finite() && self.r_th >= 0.0) {
            return Err(Error::invalid(
                "r_th",
                format!("rate threshold must be >= 0, got {}", self.r_th),
            ));
        }
        if let RrsChoice::Designated(m) = self.rrs {
            self.network.check_relay(m)?;
        }
        if let EavesdropTarget::Fixed(m) = self.eavesdrop {
            self.network.check_relay(m)?;
        }
        Ok(())
    }

    /// Fading statistics at the current beacon power.
    pub fn statistics(&self) -> Result<LinkStatistics> {
        self.network.statistics(self.harvester.p_b)
    }

    pub fn link_gains(&self) -> ProfileGains {
        self.iqi.link_gains()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
