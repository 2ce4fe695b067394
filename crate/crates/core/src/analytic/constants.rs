//! Constants shared by the closed forms.
//!
//! Every hop (S->R, R->D, S->E, R->E) has the same structure: a transmitter
//! whose power comes from a saturating harvester fed over an exponential
//! beacon link, and an exponential data link with I/Q leakage and
//! estimation error. One `HopConstants` describes such a hop.

use super::quadrature::QuadratureConfig;
use super::special::bessel_k1_scaled;
use crate::error::Result;
use crate::iqi::IqiLinkGains;
use crate::link::{sinr_threshold, threshold_epsilon};
use crate::scenario::Scenario;

/// Raw parameters of one hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopInputs {
    /// Exponential rate of the estimated data-link gain.
    pub lambda: f64,
    /// Exponential rate of the beacon-to-transmitter gain.
    pub lambda_beacon: f64,
    /// Harvester prefactor `2 alpha sigma / (1 - alpha)`.
    pub a: f64,
    pub p_b: f64,
    /// Saturation threshold; infinite for a linear harvester.
    pub saturation: f64,
    pub gains: IqiLinkGains,
    pub noise: f64,
    pub sigma_e2: f64,
    /// SINR threshold.
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopConstants {
    pub lambda: f64,
    pub lambda_beacon: f64,
    /// `A P_B (p - theta q)`.
    pub c: f64,
    /// `sigma^2 A P_B theta (p + q)`.
    pub c_prime: f64,
    /// `Gamma / P_B`.
    pub e: f64,
    /// `g N theta / (C E) + C' / C`.
    pub t: f64,
    /// `(theta sigma^2 A Gamma (p + q) + theta g N) / (A Gamma (p - theta q))`.
    pub theta_cap: f64,
    /// `4 lambda_B g N theta`.
    pub beta: f64,
    /// `lambda / C`.
    pub gamma: f64,
    /// `C T - C'`, the upper end of the finite integral.
    pub lambda_cap: f64,
    /// High-SNR offset `theta sigma^2 (p + q) / (p - theta q)`.
    pub h: f64,
    /// Threshold strictly below the SINR ceiling `p/q`.
    pub below_ceiling: bool,
    /// Below the ceiling and the hop has power to transmit.
    pub valid: bool,
}

impl HopConstants {
    pub fn new(i: &HopInputs) -> Self {
        let IqiLinkGains { p, q, g } = i.gains;
        let margin = p - i.theta * q;
        let c = i.a * i.p_b * margin;
        let c_prime = i.sigma_e2 * i.a * i.p_b * i.theta * (p + q);
        let e = i.saturation / i.p_b;
        let gnt = g * i.noise * i.theta;
        let h = i.theta * i.sigma_e2 * (p + q) / margin;
        Self {
            lambda: i.lambda,
            lambda_beacon: i.lambda_beacon,
            c,
            c_prime,
            e,
            t: gnt / (c * e) + c_prime / c,
            theta_cap: h + gnt / (i.a * i.saturation * margin),
            beta: 4.0 * i.lambda_beacon * gnt,
            gamma: i.lambda / c,
            lambda_cap: gnt / e,
            h,
            below_ceiling: margin > 0.0,
            valid: margin > 0.0 && c > 0.0,
        }
    }

    /// Probability the hop's SINR exceeds the threshold when the data-link
    /// rate is `k lambda`, i.e. the gain is the minimum of `k` independent
    /// copies. `k = 1` is the ordinary single-hop success probability.
    pub fn success(&self, k: f64, quad: &QuadratureConfig) -> f64 {
        if !self.valid {
            return 0.0;
        }
        let lam = k * self.lambda;
        let gam = lam / self.c;
        let b = 0.25 * self.beta;
        let lead = lam * self.c_prime / self.c;
        let z = 2.0 * (b * gam).sqrt();

        // lam/C e^{-lam C'/C} 2 sqrt(b/gam) K1(z) == e^{-lam C'/C} z K1(z)
        let full = if z == 0.0 {
            (-lead).exp()
        } else {
            (-(lead + z)).exp() * z * bessel_k1_scaled(z).unwrap_or(0.0)
        };

        let cut = if self.lambda_cap > 0.0 && self.lambda_cap.is_finite() {
            let finite = quad.integrate(|u| (-gam * u - b / u).exp(), self.lambda_cap);
            gam * (-lead).exp() * finite
        } else {
            0.0
        };

        let tail = self.lambda_beacon * self.e;
        let saturated = if tail.is_finite() {
            (-tail).exp() * ((-lam * self.theta_cap).exp() - (-lam * self.t).exp())
        } else {
            0.0
        };

        full - cut + saturated
    }

    /// High-SNR success probability with a linear harvester.
    pub fn success_limit(&self, k: f64) -> f64 {
        if !self.below_ceiling {
            return 0.0;
        }
        (-k * self.lambda * self.h).exp()
    }
}

/// Constants of all four hop types at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticConstants {
    pub a1: f64,
    pub a2: f64,
    pub e1: f64,
    pub e2: f64,
    /// `2^(2 R_th / (1 - alpha))`.
    pub epsilon: f64,
    /// SINR threshold `epsilon - 1`.
    pub theta: f64,
    pub sr: HopConstants,
    pub rd: HopConstants,
    pub se: HopConstants,
    pub re: HopConstants,
}

impl AnalyticConstants {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        Self::at_power(scenario, scenario.harvester.p_b)
    }

    /// Constants evaluated with fading statistics taken at beacon power `p_stats`
    /// (the harvester still uses the scenario's own beacon power).
    pub(crate) fn at_power(scenario: &Scenario, p_stats: f64) -> Result<Self> {
        let eh = &scenario.harvester;
        let stats = scenario.network.statistics(p_stats)?;
        let gains = scenario.link_gains();
        let theta = sinr_threshold(scenario.r_th, eh.alpha);
        let (a1, a2) = (eh.a1(), eh.a2());
        let hop =
            |stat: crate::channel::LinkStat, beacon: f64, a: f64, sat: f64, g: IqiLinkGains| {
                HopConstants::new(&HopInputs {
                    lambda: stat.rate,
                    lambda_beacon: beacon,
                    a,
                    p_b: eh.p_b,
                    saturation: sat,
                    gains: g,
                    noise: stat.noise,
                    sigma_e2: stat.sigma_e2,
                    theta,
                })
            };
        Ok(Self {
            a1,
            a2,
            e1: eh.gamma1 / eh.p_b,
            e2: eh.gamma2 / eh.p_b,
            epsilon: threshold_epsilon(scenario.r_th, eh.alpha),
            theta,
            sr: hop(stats.sr, stats.bs.rate, a1, eh.gamma1, gains.sr),
            rd: hop(stats.rd, stats.br.rate, a2, eh.gamma2, gains.rd),
            se: hop(stats.se, stats.bs.rate, a1, eh.gamma1, gains.se),
            re: hop(stats.re, stats.br.rate, a2, eh.gamma2, gains.re),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs() -> HopInputs {
        HopInputs {
            lambda: 1.0 / (1.5f64.powi(-3) - 0.05),
            lambda_beacon: 1.0,
            a: 1.0,
            p_b: 10.0,
            saturation: 10.0,
            gains: IqiLinkGains {
                p: 1.210910817995073,
                q: 0.010102127422686904,
                g: 1.009191309427614,
            },
            noise: 1.0,
            sigma_e2: 0.05,
            theta: 2f64.powf(0.2) - 1.0,
        }
    }

    #[test]
    fn saturation_bracket_cancels() {
        let h = HopConstants::new(&inputs());
        assert!(((h.t - h.theta_cap) / h.t).abs() < 1e-13);
        assert!((h.c * h.t - h.c_prime - h.lambda_cap).abs() < 1e-12 * h.lambda_cap);
    }

    #[test]
    fn ceiling_invalidates() {
        let mut i = inputs();
        i.theta = i.gains.p / i.gains.q;
        let h = HopConstants::new(&i);
        assert!(!h.valid);
        assert_eq!(h.success(1.0, &QuadratureConfig::default()), 0.0);
        let h = HopConstants::new(&HopInputs {
            p_b: 0.0,
            ..inputs()
        });
        assert_eq!(h.success(1.0, &QuadratureConfig::default()), 0.0);
    }

    #[test]
    fn linear_harvester_has_no_finite_integral() {
        let h = HopConstants::new(&HopInputs {
            saturation: f64::INFINITY,
            ..inputs()
        });
        assert_eq!(h.lambda_cap, 0.0);
        assert!(h.theta_cap.is_finite());
        let s = h.success(1.0, &QuadratureConfig::default());
        assert!(s > 0.0 && s < 1.0);
    }

    #[test]
    fn zero_threshold_always_succeeds() {
        let h = HopConstants::new(&HopInputs {
            theta: 0.0,
            ..inputs()
        });
        assert!((h.success(1.0, &QuadratureConfig::default()) - 1.0).abs() < 1e-15);
    }
}
