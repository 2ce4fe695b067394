//! Per-link SINR and capacity, decode-and-forward end-to-end capacity, and
//! the three relay-selection rules.

use crate::iqi::IqiLinkGains;

/// Inputs of the unified SINR expression for one link in one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkRealization {
    /// Estimated power gain `|h_hat|^2`.
    pub gain: f64,
    pub sigma_e2: f64,
    /// Instantaneous transmit SNR `P / N`.
    pub rho: f64,
    pub gains: IqiLinkGains,
}

impl LinkRealization {
    pub fn sinr(&self) -> f64 {
        sinr(self)
    }
}

/// SINR with image leakage and estimation error:
/// `gain rho p / (sigma^2 rho p + gain rho q + sigma^2 rho q + g)`.
#[inline]
pub fn sinr(l: &LinkRealization) -> f64 {
    if l.rho == 0.0 {
        return 0.0;
    }
    let IqiLinkGains { p, q, g } = l.gains;
    let signal = l.gain * l.rho * p;
    let disturbance = l.sigma_e2 * l.rho * p + l.gain * l.rho * q + l.sigma_e2 * l.rho * q + g;
    signal / disturbance
}

/// `((1 - alpha) / 2) log2(1 + sinr)`; the half accounts for the two hops.
#[inline]
pub fn capacity(sinr: f64, alpha: f64) -> f64 {
    0.5 * (1.0 - alpha) * sinr.ln_1p() / std::f64::consts::LN_2
}

#[inline]
pub fn e2e_capacity(c_sr: f64, c_rd: f64) -> f64 {
    c_sr.min(c_rd)
}

/// `epsilon = 2^(2 R_th / (1 - alpha))`, the capacity threshold mapped to `1 + SINR`.
pub fn threshold_epsilon(r_th: f64, alpha: f64) -> f64 {
    (2.0 * r_th / (1.0 - alpha)).exp2()
}

/// SINR a link must exceed to carry `r_th`: `epsilon - 1`.
pub fn sinr_threshold(r_th: f64, alpha: f64) -> f64 {
    (2.0 * r_th / (1.0 - alpha) * std::f64::consts::LN_2).exp_m1()
}

/// State of one trial: beacon gains, harvested powers and every data link.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub gain_bs: f64,
    pub gain_br: Vec<f64>,
    pub p_s: f64,
    pub p_r: Vec<f64>,
    pub sr: Vec<LinkRealization>,
    pub rd: Vec<LinkRealization>,
    pub se: LinkRealization,
    pub re: Vec<LinkRealization>,
}

impl NetworkRealization {
    pub fn relays(&self) -> usize {
        self.sr.len()
    }

    /// Bottleneck SINR of relay `m` (1-based); capacity is monotone in SINR.
    pub fn hop_min_sinr(&self, m: usize) -> f64 {
        self.sr[m - 1].sinr().min(self.rd[m - 1].sinr())
    }

    pub fn e2e_capacity(&self, m: usize, alpha: f64) -> f64 {
        e2e_capacity(
            capacity(self.sr[m - 1].sinr(), alpha),
            capacity(self.rd[m - 1].sinr(), alpha),
        )
    }
}

/// Random relay selection with a designated relay.
pub fn select_rrs(_state: &NetworkRealization, m_fixed: usize) -> usize {
    m_fixed
}

/// Relay with the strongest first hop. Ties go to the lowest index.
pub fn select_srs(state: &NetworkRealization) -> usize {
    argmax(state.sr.iter().map(LinkRealization::sinr))
}

/// Relay with the strongest bottleneck hop. Ties go to the lowest index.
pub fn select_ors(state: &NetworkRealization) -> usize {
    argmax(
        state
            .sr
            .iter()
            .zip(&state.rd)
            .map(|(a, b)| a.sinr().min(b.sinr())),
    )
}

/// 1-based index of the first maximum.
pub(crate) fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut index = 0;
    for (i, v) in values.enumerate() {
        if v > best || index == 0 {
            best = v;
            index = i + 1;
        }
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn link(gain: f64, rho: f64) -> LinkRealization {
        LinkRealization {
            gain,
            sigma_e2: 0.0,
            rho,
            gains: IqiLinkGains::IDEAL,
        }
    }

    fn state(sr: &[f64], rd: &[f64]) -> NetworkRealization {
        let m = sr.len();
        NetworkRealization {
            gain_bs: 1.0,
            gain_br: vec![1.0; m],
            p_s: 1.0,
            p_r: vec![1.0; m],
            sr: sr.iter().map(|&g| link(g, 1.0)).collect(),
            rd: rd.iter().map(|&g| link(g, 1.0)).collect(),
            se: link(1.0, 1.0),
            re: vec![link(1.0, 1.0); m],
        }
    }

    const NONIDEAL: IqiLinkGains = IqiLinkGains {
        p: 1.210910817995073,
        q: 0.010102127422686904,
        g: 1.009191309427614,
    };

    #[test]
    fn ideal_sinr_is_plain_snr() {
        assert!((sinr(&link(0.7, 20.0)) - 14.0).abs() < 1e-12);
        assert_eq!(sinr(&link(0.7, 0.0)), 0.0);
    }

    #[test]
    fn high_snr_limits() {
        let l = LinkRealization {
            gain: 0.8,
            sigma_e2: 0.0,
            rho: 1e15,
            gains: NONIDEAL,
        };
        assert!((sinr(&l) - NONIDEAL.p / NONIDEAL.q).abs() < 1e-6);

        let l = LinkRealization {
            sigma_e2: 0.05,
            ..l
        };
        let IqiLinkGains { p, q, .. } = NONIDEAL;
        let limit = 0.8 * p / (0.05 * p + 0.8 * q + 0.05 * q);
        assert!((sinr(&l) - limit).abs() < 1e-9);
    }

    #[test]
    fn capacities() {
        assert_eq!(capacity(0.0, 0.5), 0.0);
        assert!((capacity(3.0, 0.5) - 0.5).abs() < 1e-15);
        assert!((capacity(1.0, 0.2) - 0.4).abs() < 1e-15);
        assert_eq!(e2e_capacity(1.0, 2.0), 1.0);
        assert_eq!(e2e_capacity(0.0, 5.0), 0.0);
        assert_eq!(e2e_capacity(0.3, 0.3), 0.3);
    }

    #[test]
    fn thresholds() {
        assert!((threshold_epsilon(0.05, 0.5) - 1.148698354997035).abs() < 1e-12);
        assert_eq!(threshold_epsilon(0.0, 0.5), 1.0);
        assert!((threshold_epsilon(0.1, 0.0) - threshold_epsilon(0.05, 0.5)).abs() < 1e-15);
        assert!((sinr_threshold(0.05, 0.5) - (threshold_epsilon(0.05, 0.5) - 1.0)).abs() < 1e-15);
        assert_eq!(sinr_threshold(0.0, 0.3), 0.0);
        // capacity(threshold) == R_th
        let th = sinr_threshold(0.05, 0.5);
        assert!((capacity(th, 0.5) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn single_relay_selection() {
        let s = state(&[0.3], &[0.9]);
        assert_eq!(select_srs(&s), 1);
        assert_eq!(select_ors(&s), 1);
        assert_eq!(select_rrs(&s, 1), 1);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let s = state(&[0.5, 0.5, 0.2], &[0.5, 0.5, 0.5]);
        assert_eq!(select_srs(&s), 1);
        assert_eq!(select_ors(&s), 1);
    }

    #[test]
    fn srs_and_ors_disagree_when_second_hop_bottlenecks() {
        // Relay 1 has the best first hop but a weak second hop.
        let s = state(&[2.0, 1.0, 0.2], &[0.1, 0.8, 3.0]);
        assert_eq!(select_srs(&s), 1);
        assert_eq!(select_ors(&s), 2);
    }

    fn brute_force(values: &[f64]) -> usize {
        let mut best = 0;
        for i in 1..values.len() {
            if values[i] > values[best] {
                best = i;
            }
        }
        best + 1
    }

    proptest! {
        #[test]
        fn selection_matches_exhaustive_search(
            sr in prop::collection::vec(0.0f64..5.0, 5),
            rd in prop::collection::vec(0.0f64..5.0, 5),
            rho in 0.1f64..100.0,
            scale in 0.01f64..100.0,
        ) {
            let mut s = state(&sr, &rd);
            for l in s.sr.iter_mut().chain(s.rd.iter_mut()) {
                l.rho = rho;
                l.gains = NONIDEAL;
                l.sigma_e2 = 0.05;
            }
            let alpha = 0.5;
            let c_sr: Vec<f64> = s.sr.iter().map(|l| capacity(l.sinr(), alpha)).collect();
            let c_e2e: Vec<f64> = (1..=5).map(|m| s.e2e_capacity(m, alpha)).collect();
            prop_assert_eq!(select_srs(&s), brute_force(&c_sr));
            prop_assert_eq!(select_ors(&s), brute_force(&c_e2e));

            // ORS never loses to another rule in the same trial.
            let ors = s.e2e_capacity(select_ors(&s), alpha);
            prop_assert!(ors >= s.e2e_capacity(select_srs(&s), alpha));
            prop_assert!(ors >= s.e2e_capacity(select_rrs(&s, 1), alpha));

            let before = select_srs(&s);
            for l in s.sr.iter_mut() {
                l.gain *= scale;
            }
            prop_assert_eq!(select_srs(&s), before);
        }

        #[test]
        fn sinr_monotonicity(gain in 0.01f64..10.0, rho in 0.01f64..1e4, s2 in 0.0f64..0.2) {
            let base = LinkRealization { gain, sigma_e2: s2, rho, gains: NONIDEAL };
            let g0 = base.sinr();
            prop_assert!((0.0..NONIDEAL.p / NONIDEAL.q).contains(&g0));
            let more_gain = LinkRealization { gain: gain * 1.01, ..base }.sinr();
            let more_power = LinkRealization { rho: rho * 1.01, ..base }.sinr();
            let more_error = LinkRealization { sigma_e2: s2 + 0.01, ..base }.sinr();
            let leaky = IqiLinkGains { q: NONIDEAL.q * 1.5, ..NONIDEAL };
            let more_leak = LinkRealization { gains: leaky, ..base }.sinr();
            prop_assert!(more_gain > g0);
            prop_assert!(more_power > g0);
            prop_assert!(more_error < g0);
            prop_assert!(more_leak < g0);
        }
    }
}
