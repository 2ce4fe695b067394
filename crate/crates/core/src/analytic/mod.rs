//! Closed-form outage and intercept probabilities.
//!
//! Each hop's success probability is a Bessel-K1 term minus a finite
//! Chebyshev integral (see [`HopConstants::success`]). The selection schemes
//! combine hop terms as follows, with `I2` the R->D success and `J_k` the
//! S->R success when the first-hop gain is the minimum of `k` copies:
//!
//! * RRS: `1 - J_1 I2`
//! * SRS: `1 - I2 sum_{k=1..M} C(M,k) (-1)^(k-1) J_k`
//! * ORS: `sum_{k=0..M} C(M,k) (-I2)^k J_k`
//!
//! The ORS expansion keeps the correlation created by the single source
//! power shared by all first hops. [`op_ors_product`] gives the
//! per-relay product that ignores it.

pub mod constants;
pub mod quadrature;
pub mod special;

pub use constants::{AnalyticConstants, HopConstants, HopInputs};
pub use quadrature::{chebyshev_sum, chebyshev_sum_plain, QuadratureConfig, QuadratureRule};
pub use special::{bessel_k1, bessel_k1_scaled};

use crate::error::{Error, Result};
use crate::scenario::{Scenario, Scheme};

/// A probability together with an optional remark for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub probability: f64,
    /// Set when the value comes from a short-circuit or was clamped.
    pub note: Option<String>,
}

impl Evaluation {
    fn exact(probability: f64) -> Self {
        Self {
            probability,
            note: None,
        }
    }

    fn short_circuit(probability: f64, note: impl Into<String>) -> Self {
        Self {
            probability,
            note: Some(note.into()),
        }
    }

    pub fn is_short_circuit(&self) -> bool {
        self.note
            .as_deref()
            .is_some_and(|n| n.starts_with("threshold"))
    }
}

const CLAMP_SLACK: f64 = 1e-9;

fn clamp(raw: f64, what: &str) -> Evaluation {
    if raw.is_nan() {
        log::warn!("{what}: evaluation produced NaN");
        return Evaluation::short_circuit(f64::NAN, "nan");
    }
    let p = raw.clamp(0.0, 1.0);
    let excursion = (raw - p).abs();
    if excursion > CLAMP_SLACK {
        log::warn!("{what}: raw value {raw} left [0,1] by {excursion:e}; clamped");
        Evaluation::short_circuit(p, format!("clamped from {raw}"))
    } else {
        Evaluation::exact(p)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ceiling_note(link: &str) -> String {
    format!("threshold at or above the {link} SINR ceiling")
}

fn check(scenario: &Scenario, quad: &QuadratureConfig) -> Result<AnalyticConstants> {
    quad.validate()?;
    AnalyticConstants::new(scenario)
}

/// Returns `Some(note)` when a data hop can never meet the threshold.
fn blocked_hops(k: &AnalyticConstants) -> Option<String> {
    if !k.sr.below_ceiling {
        Some(ceiling_note("S->R"))
    } else if !k.rd.below_ceiling {
        Some(ceiling_note("R->D"))
    } else {
        None
    }
}

/// Outage probability under random relay selection.
pub fn op_rrs(scenario: &Scenario, quad: &QuadratureConfig) -> Result<Evaluation> {
    let k = check(scenario, quad)?;
    if let Some(note) = blocked_hops(&k) {
        return Ok(Evaluation::short_circuit(1.0, note));
    }
    let i1 = k.sr.success(1.0, quad);
    let i2 = k.rd.success(1.0, quad);
    Ok(clamp(1.0 - i1 * i2, "op_rrs"))
}

/// Success probability of the best of `m` first hops sharing one source power.
fn best_first_hop(k: &AnalyticConstants, m: usize, quad: &QuadratureConfig) -> f64 {
    (1..=m)
        .map(|j| {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            sign * binomial(m, j) * k.sr.success(j as f64, quad)
        })
        .sum()
}

/// Outage probability when the relay with the strongest first hop is used.
pub fn op_srs(scenario: &Scenario, quad: &QuadratureConfig) -> Result<Evaluation> {
    let k = check(scenario, quad)?;
    if let Some(note) = blocked_hops(&k) {
        return Ok(Evaluation::short_circuit(1.0, note));
    }
    let m = scenario.network.relays;
    let i3 = best_first_hop(&k, m, quad);
    let i2 = k.rd.success(1.0, quad);
    Ok(clamp(1.0 - i3 * i2, "op_srs"))
}

/// Outage probability when the relay with the strongest bottleneck is used.
pub fn op_ors(scenario: &Scenario, quad: &QuadratureConfig) -> Result<Evaluation> {
    let k = check(scenario, quad)?;
    if let Some(note) = blocked_hops(&k) {
        return Ok(Evaluation::short_circuit(1.0, note));
    }
    let m = scenario.network.relays;
    let i2 = k.rd.success(1.0, quad);
    let mut sum = 1.0;
    for j in 1..=m {
        sum += binomial(m, j) * (-i2).powi(j as i32) * k.sr.success(j as f64, quad);
    }
    Ok(clamp(sum, "op_ors"))
}

/// ORS outage treating every relay's two-hop path as independent:
/// `(1 - I1 I2)^M`. Overstates outage because the first hops share `P_S`.
pub fn op_ors_product(scenario: &Scenario, quad: &QuadratureConfig) -> Result<Evaluation> {
    let k = check(scenario, quad)?;
    if let Some(note) = blocked_hops(&k) {
        return Ok(Evaluation::short_circuit(1.0, note));
    }
    let per = 1.0 - k.sr.success(1.0, quad) * k.rd.success(1.0, quad);
    Ok(clamp(
        per.powi(scenario.network.relays as i32),
        "op_ors_product",
    ))
}

pub fn op(scheme: Scheme, scenario: &Scenario, quad: &QuadratureConfig) -> Result<Evaluation> {
    match scheme {
        Scheme::Rrs => op_rrs(scenario, quad),
        Scheme::Srs => op_srs(scenario, quad),
        Scheme::Ors => op_ors(scenario, quad),
    }
}

/// High-power outage floor left by channel-estimation error.
///
/// Takes the beacon power to infinity with a linear harvester, so the value
/// does not depend on `P_B` or the saturation thresholds. Under
/// SNR-dependent estimation error the variance vanishes in that limit and
/// the floor is zero.
pub fn op_asymptotic(scheme: Scheme, scenario: &Scenario) -> Result<Evaluation> {
    scenario.validate()?;
    let k = AnalyticConstants::at_power(scenario, f64::INFINITY)?;
    if let Some(note) = blocked_hops(&k) {
        return Ok(Evaluation::short_circuit(1.0, note));
    }
    let m = scenario.network.relays as i32;
    let s1 = k.sr.success_limit(1.0);
    let s2 = k.rd.success_limit(1.0);
    let raw = match scheme {
        Scheme::Rrs => 1.0 - s1 * s2,
        Scheme::Srs => 1.0 - (1.0 - (1.0 - s1).powi(m)) * s2,
        Scheme::Ors => (1.0 - s1 * s2).powi(m),
    };
    Ok(clamp(raw, "op_asymptotic"))
}

/// Least-squares slope of `-ln OP` against `ln rho`.
pub fn diversity_order(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Numeric(
            "diversity order needs at least two points".into(),
        ));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(rho, op) in points {
        if !(rho > 0.0) {
            return Err(Error::Domain(rho));
        }
        if !(op > 0.0) {
            return Err(Error::Domain(op));
        }
        xs.push(rho.ln());
        ys.push(-op.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Numeric(
            "diversity order needs distinct SNR values".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Probability the eavesdropper decodes the source directly.
pub fn ip_direct(scenario: &Scenario, quad: &QuadratureConfig) -> Result<Evaluation> {
    let k = check(scenario, quad)?;
    if !k.se.below_ceiling {
        return Ok(Evaluation::short_circuit(0.0, ceiling_note("S->E")));
    }
    Ok(clamp(k.se.success(1.0, quad), "ip_direct"))
}

/// Probability the eavesdropper decodes relay `relay_index` (1-based).
/// Relays are statistically identical, so the index only has to be valid.
pub fn ip_relay(
    scenario: &Scenario,
    quad: &QuadratureConfig,
    relay_index: usize,
) -> Result<Evaluation> {
    scenario.network.check_relay(relay_index)?;
    let k = check(scenario, quad)?;
    if !k.re.below_ceiling {
        return Ok(Evaluation::short_circuit(0.0, ceiling_note("R->E")));
    }
    Ok(clamp(k.re.success(1.0, quad), "ip_relay"))
}
