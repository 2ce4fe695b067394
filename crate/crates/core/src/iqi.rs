//! Transceiver I/Q imbalance.
//!
//! The asymmetric model keeps the I branch ideal and puts the amplitude
//! mismatch `xi` and phase mismatch `phi` on the Q branch. A transmitter
//! and a receiver each contribute one coefficient pair; a link combines
//! them into the signal gain `p`, image-leakage gain `q` and noise scaling
//! `g` that enter the SINR.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitude/phase mismatch at both ends of one link. Phases in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IqiMismatch {
    pub xi_t: f64,
    pub phi_t: f64,
    pub xi_r: f64,
    pub phi_r: f64,
}

impl IqiMismatch {
    pub fn new(xi_t: f64, phi_t: f64, xi_r: f64, phi_r: f64) -> Result<Self> {
        let m = Self {
            xi_t,
            phi_t,
            xi_r,
            phi_r,
        };
        m.validate()?;
        Ok(m)
    }

    /// Perfectly matched I/Q branches.
    pub const fn ideal() -> Self {
        Self {
            xi_t: 1.0,
            phi_t: 0.0,
            xi_r: 1.0,
            phi_r: 0.0,
        }
    }

    /// Same mismatch at TX and RX, phase given in degrees.
    pub fn symmetric_deg(xi: f64, phi_deg: f64) -> Result<Self> {
        let phi = phi_deg.to_radians();
        Self::new(xi, phi, xi, phi)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, xi) in [("xi_t", self.xi_t), ("xi_r", self.xi_r)] {
            if !(xi.is_finite() && xi > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("amplitude mismatch must be > 0, got {xi}"),
                ));
            }
        }
        for (name, phi) in [("phi_t", self.phi_t), ("phi_r", self.phi_r)] {
            if !phi.is_finite() {
                return Err(Error::invalid(name, "phase mismatch must be finite"));
            }
        }
        Ok(())
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::ideal()
    }
}

impl Default for IqiMismatch {
    fn default() -> Self {
        Self::ideal()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IqiCoefficients {
    pub mu_t: Complex64,
    pub nu_t: Complex64,
    pub mu_r: Complex64,
    pub nu_r: Complex64,
}

/// Aggregate per-link impairment: signal gain, image leakage, noise scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IqiLinkGains {
    pub p: f64,
    pub q: f64,
    pub g: f64,
}

impl IqiLinkGains {
    pub const IDEAL: IqiLinkGains = IqiLinkGains {
        p: 1.0,
        q: 0.0,
        g: 1.0,
    };

    pub fn from_mismatch(m: &IqiMismatch) -> Self {
        link_gains(&coefficients_from_mismatch(m))
    }
}

/// Upper bound `p/q` on the SINR of a link with image leakage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SinrCeiling {
    Bounded(f64),
    /// No image leakage (`q = 0`): the SINR grows without bound.
    Unbounded,
}

impl SinrCeiling {
    /// True when an SINR threshold can never be exceeded on this link.
    pub fn blocks(&self, threshold: f64) -> bool {
        match *self {
            SinrCeiling::Bounded(c) => threshold >= c,
            SinrCeiling::Unbounded => false,
        }
    }
}

/// TX: `mu = (1 + xi e^{j phi})/2`, `nu = (1 - xi e^{-j phi})/2`.
/// RX uses the conjugate phases.
pub fn coefficients_from_mismatch(m: &IqiMismatch) -> IqiCoefficients {
    let half = 0.5;
    let one = Complex64::new(1.0, 0.0);
    let tx = Complex64::from_polar(m.xi_t, m.phi_t);
    let rx = Complex64::from_polar(m.xi_r, -m.phi_r);
    IqiCoefficients {
        mu_t: (one + tx) * half,
        nu_t: (one - tx.conj()) * half,
        mu_r: (one + rx) * half,
        nu_r: (one - rx.conj()) * half,
    }
}

pub fn link_gains(c: &IqiCoefficients) -> IqiLinkGains {
    let p = (c.mu_t * c.mu_r + c.nu_t.conj() * c.nu_r).norm_sqr();
    let q = (c.mu_r * c.nu_t + c.mu_t.conj() * c.nu_r).norm_sqr();
    let g = (c.mu_r + c.nu_r).norm_sqr();
    IqiLinkGains { p, q, g }
}

pub fn sinr_ceiling(gains: &IqiLinkGains) -> SinrCeiling {
    if gains.q == 0.0 {
        SinrCeiling::Unbounded
    } else {
        SinrCeiling::Bounded(gains.p / gains.q)
    }
}
