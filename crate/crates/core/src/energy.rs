//! Time-switching harvesting from the power beacon with a hard-saturating
//! (nonlinear) harvester at the source and at every relay.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EhConfig {
    /// Fraction of the block spent harvesting.
    pub alpha: f64,
    /// Conversion efficiency at the source.
    pub sigma1: f64,
    /// Conversion efficiency at each relay.
    pub sigma2: f64,
    /// Saturation threshold at the source; `f64::INFINITY` for a linear harvester.
    pub gamma1: f64,
    /// Saturation threshold at each relay.
    pub gamma2: f64,
    /// Beacon transmit power (linear). Defaults to 10, i.e. 10 dB over unit noise.
    pub p_b: f64,
    /// Block duration. Cancels out of every rate expression.
    pub t_block: f64,
}

impl Default for EhConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            sigma1: 0.5,
            sigma2: 0.5,
            gamma1: 10.0,
            gamma2: 10.0,
            p_b: 10.0,
            t_block: 1.0,
        }
    }
}

impl EhConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid("alpha", "alpha must lie in (0,1)"));
        }
        for (name, v) in [("sigma1", self.sigma1), ("sigma2", self.sigma2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(
                    name,
                    format!("{name} must lie in (0,1), got {v}"),
                ));
            }
        }
        for (name, v) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if !(v > 0.0) {
                return Err(Error::invalid(name, format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.p_b.is_finite() && self.p_b >= 0.0) {
            return Err(Error::invalid(
                "p_b",
                format!("beacon power must be >= 0, got {}", self.p_b),
            ));
        }
        if !(self.t_block.is_finite() && self.t_block > 0.0) {
            return Err(Error::invalid("t_block", "block duration must be > 0"));
        }
        Ok(())
    }

    /// `A1 = 2 alpha sigma1 / (1 - alpha)`.
    pub fn a1(&self) -> f64 {
        2.0 * self.alpha * self.sigma1 / (1.0 - self.alpha)
    }

    /// `A2 = 2 alpha sigma2 / (1 - alpha)`.
    pub fn a2(&self) -> f64 {
        2.0 * self.alpha * self.sigma2 / (1.0 - self.alpha)
    }

    /// Energy collected at the source during the harvesting slot.
    pub fn source_energy(&self, gain_bs: f64) -> f64 {
        self.sigma1 * self.p_b * gain_bs * self.alpha * self.t_block
    }

    pub fn relay_energy(&self, gain_br: f64) -> f64 {
        self.sigma2 * self.p_b * gain_br * self.alpha * self.t_block
    }
}

/// Source transmit power `A1 * min(P_B |h_BS|^2, Gamma1)`.
#[inline]
pub fn source_power(cfg: &EhConfig, gain_bs: f64) -> f64 {
    cfg.a1() * (cfg.p_b * gain_bs).min(cfg.gamma1)
}

/// Relay transmit power `A2 * min(P_B |h_BR|^2, Gamma2)`.
#[inline]
pub fn relay_power(cfg: &EhConfig, gain_br: f64) -> f64 {
    cfg.a2() * (cfg.p_b * gain_br).min(cfg.gamma2)
}
