//! Monte Carlo estimators that simulate the system model trial by trial.
//!
//! Trials are grouped into fixed-size chunks. Chunk `i` draws from ChaCha8
//! seeded with `seed` on stream `i`, so the estimate depends on
//! `(seed, trials, chunk)` only and never on how chunks land on threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{sample_gain, LinkStatistics};
use crate::energy::{relay_power, source_power};
use crate::error::{Error, Result};
use crate::link::{
    capacity, select_ors, select_rrs, select_srs, LinkRealization, NetworkRealization,
};
use crate::scenario::{EavesdropTarget, ProfileGains, RrsChoice, Scenario, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Trials per random stream.
    pub chunk: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 1,
            workers: 0,
            chunk: 1 << 16,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials", "at least one trial is required"));
        }
        if self.chunk == 0 {
            return Err(Error::invalid("chunk", "chunk size must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub p_hat: f64,
    /// Binomial standard error `sqrt(p (1 - p) / n)`.
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl MetricEstimate {
    fn from_count(hits: u64, cfg: &McConfig) -> Self {
        let n = cfg.trials as f64;
        let p_hat = hits as f64 / n;
        Self {
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / n).sqrt(),
            trials: cfg.trials,
            seed: cfg.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IpMode {
    /// Eavesdropper overhears the source.
    Direct,
    /// Eavesdropper overhears a relay.
    Relay,
}

impl IpMode {
    pub fn as_str(self) -> &'static str {
        match self {
            IpMode::Direct => "direct",
            IpMode::Relay => "relay",
        }
    }
}

/// Draws every random quantity of one trial into `state`.
pub fn sample_realization<R: Rng + ?Sized>(
    scenario: &Scenario,
    stats: &LinkStatistics,
    gains: &ProfileGains,
    rng: &mut R,
    state: &mut NetworkRealization,
) {
    let eh = &scenario.harvester;
    let m = scenario.network.relays;
    state.gain_br.resize(m, 0.0);
    state.p_r.resize(m, 0.0);
    let blank = LinkRealization {
        gain: 0.0,
        sigma_e2: 0.0,
        rho: 0.0,
        gains: gains.sr,
    };
    state.sr.resize(m, blank);
    state.rd.resize(m, blank);
    state.re.resize(m, blank);

    state.gain_bs = sample_gain(stats.bs.rate, rng);
    state.p_s = source_power(eh, state.gain_bs);
    for i in 0..m {
        state.gain_br[i] = sample_gain(stats.br.rate, rng);
        state.p_r[i] = relay_power(eh, state.gain_br[i]);
    }
    for i in 0..m {
        state.sr[i] = LinkRealization {
            gain: sample_gain(stats.sr.rate, rng),
            sigma_e2: stats.sr.sigma_e2,
            rho: state.p_s / stats.sr.noise,
            gains: gains.sr,
        };
        state.rd[i] = LinkRealization {
            gain: sample_gain(stats.rd.rate, rng),
            sigma_e2: stats.rd.sigma_e2,
            rho: state.p_r[i] / stats.rd.noise,
            gains: gains.rd,
        };
        state.re[i] = LinkRealization {
            gain: sample_gain(stats.re.rate, rng),
            sigma_e2: stats.re.sigma_e2,
            rho: state.p_r[i] / stats.re.noise,
            gains: gains.re,
        };
    }
    state.se = LinkRealization {
        gain: sample_gain(stats.se.rate, rng),
        sigma_e2: stats.se.sigma_e2,
        rho: state.p_s / stats.se.noise,
        gains: gains.se,
    };
}

pub fn empty_realization() -> NetworkRealization {
    let blank = LinkRealization {
        gain: 0.0,
        sigma_e2: 0.0,
        rho: 0.0,
        gains: crate::iqi::IqiLinkGains::IDEAL,
    };
    NetworkRealization {
        gain_bs: 0.0,
        gain_br: Vec::new(),
        p_s: 0.0,
        p_r: Vec::new(),
        sr: Vec::new(),
        rd: Vec::new(),
        se: blank,
        re: Vec::new(),
    }
}

fn chosen_relay<R: Rng + ?Sized>(
    scheme: Scheme,
    scenario: &Scenario,
    state: &NetworkRealization,
    rng: &mut R,
) -> usize {
    match scheme {
        Scheme::Rrs => match scenario.rrs {
            RrsChoice::Designated(m) => select_rrs(state, m),
            RrsChoice::Uniform => rng.random_range(1..=state.relays()),
        },
        Scheme::Srs => select_srs(state),
        Scheme::Ors => select_ors(state),
    }
}

/// Runs `trials` independent trials and counts those where `event` fires.
/// `K` events are tallied from the same trials.
fn count<const K: usize, F>(scenario: &Scenario, cfg: &McConfig, event: F) -> Result<[u64; K]>
where
    F: Fn(&NetworkRealization, &mut ChaCha8Rng) -> [bool; K] + Sync,
{
    scenario.validate()?;
    cfg.validate()?;
    let stats = scenario.statistics()?;
    let gains = scenario.link_gains();
    let chunks = cfg.trials.div_ceil(cfg.chunk);

    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(c);
                let n = cfg.chunk.min(cfg.trials - c * cfg.chunk);
                let mut state = empty_realization();
                let mut hits = [0u64; K];
                for _ in 0..n {
                    sample_realization(scenario, &stats, &gains, &mut rng, &mut state);
                    for (h, e) in hits.iter_mut().zip(event(&state, &mut rng)) {
                        *h += e as u64;
                    }
                }
                hits
            })
            .reduce(
                || [0u64; K],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    };

    if cfg.workers == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

fn outage(
    scheme: Scheme,
    scenario: &Scenario,
    state: &NetworkRealization,
    rng: &mut ChaCha8Rng,
) -> bool {
    let m = chosen_relay(scheme, scenario, state, rng);
    state.e2e_capacity(m, scenario.harvester.alpha) < scenario.r_th
}

fn intercept(
    mode: IpMode,
    scenario: &Scenario,
    state: &NetworkRealization,
    rng: &mut ChaCha8Rng,
) -> bool {
    let alpha = scenario.harvester.alpha;
    let link = match mode {
        IpMode::Direct => state.se,
        IpMode::Relay => {
            let c = match scenario.eavesdrop {
                EavesdropTarget::Fixed(m) => m,
                EavesdropTarget::Selected(s) => chosen_relay(s, scenario, state, rng),
            };
            state.re[c - 1]
        }
    };
    capacity(link.sinr(), alpha) > scenario.r_th
}

/// Outage probability of one selection scheme.
pub fn estimate_op(scheme: Scheme, scenario: &Scenario, cfg: &McConfig) -> Result<MetricEstimate> {
    let [hits] = count(scenario, cfg, |s, rng| [outage(scheme, scenario, s, rng)])?;
    Ok(MetricEstimate::from_count(hits, cfg))
}

/// Outage of RRS, SRS and ORS evaluated on shared trials.
pub fn estimate_op_all(scenario: &Scenario, cfg: &McConfig) -> Result<[MetricEstimate; 3]> {
    let hits = count(scenario, cfg, |s, rng| {
        Scheme::ALL.map(|k| outage(k, scenario, s, rng))
    })?;
    Ok(hits.map(|h| MetricEstimate::from_count(h, cfg)))
}

/// Intercept probability at the eavesdropper.
pub fn estimate_ip(mode: IpMode, scenario: &Scenario, cfg: &McConfig) -> Result<MetricEstimate> {
    let [hits] = count(scenario, cfg, |s, rng| [intercept(mode, scenario, s, rng)])?;
    Ok(MetricEstimate::from_count(hits, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iqi::IqiMismatch;
    use crate::scenario::IqiProfile;

    fn quick(trials: u64) -> McConfig {
        McConfig {
            trials,
            seed: 11,
            workers: 2,
            chunk: 4096,
        }
    }

    #[test]
    fn no_beacon_power_means_certain_outage() {
        let s = Scenario::non_ideal().with_pb_db(f64::NEG_INFINITY);
        assert_eq!(s.harvester.p_b, 0.0);
        for est in estimate_op_all(&s, &quick(20_000)).unwrap() {
            assert_eq!(est.p_hat, 1.0);
            assert_eq!(est.stderr, 0.0);
        }
        assert_eq!(
            estimate_ip(IpMode::Direct, &s, &quick(5_000))
                .unwrap()
                .p_hat,
            0.0
        );
    }

    #[test]
    fn sinr_ceiling_blocks_every_scheme() {
        // p/q ~ 119.9 at xi = 1.1, phi = 5 deg; R_th = 2 needs SINR 255.
        let mut s = Scenario::non_ideal().with_pb_db(40.0);
        s.r_th = 2.0;
        for est in estimate_op_all(&s, &quick(20_000)).unwrap() {
            assert_eq!(est.p_hat, 1.0);
        }
    }

    #[test]
    fn zero_rate_target_is_always_intercepted() {
        let mut s = Scenario::non_ideal().with_pb_db(10.0);
        s.r_th = 0.0;
        assert_eq!(
            estimate_ip(IpMode::Direct, &s, &quick(20_000))
                .unwrap()
                .p_hat,
            1.0
        );
        assert_eq!(
            estimate_ip(IpMode::Relay, &s, &quick(20_000))
                .unwrap()
                .p_hat,
            1.0
        );
        s.r_th = 50.0;
        assert_eq!(
            estimate_ip(IpMode::Relay, &s, &quick(20_000))
                .unwrap()
                .p_hat,
            0.0
        );
    }

    #[test]
    fn independent_of_worker_count() {
        let s = Scenario::non_ideal().with_pb_db(10.0);
        let base = McConfig {
            trials: 50_001,
            seed: 99,
            workers: 1,
            chunk: 1000,
        };
        let a = estimate_op_all(&s, &base).unwrap();
        for w in [3, 8, 0] {
            let b = estimate_op_all(&s, &McConfig { workers: w, ..base }).unwrap();
            assert_eq!(a, b);
        }
        let other = estimate_op_all(&s, &McConfig { seed: 100, ..base }).unwrap();
        assert_ne!(a[0].p_hat, other[0].p_hat);
    }

    #[test]
    fn joint_estimate_matches_single_scheme_runs() {
        let s = Scenario::non_ideal().with_pb_db(10.0);
        let cfg = quick(30_000);
        let all = estimate_op_all(&s, &cfg).unwrap();
        for (k, scheme) in Scheme::ALL.into_iter().enumerate() {
            assert_eq!(estimate_op(scheme, &s, &cfg).unwrap(), all[k]);
        }
    }

    #[test]
    fn stderr_is_binomial() {
        let s = Scenario::non_ideal().with_pb_db(10.0);
        let e = estimate_op(Scheme::Rrs, &s, &quick(40_000)).unwrap();
        assert!(e.p_hat > 0.0 && e.p_hat < 1.0);
        assert!((e.stderr - (e.p_hat * (1.0 - e.p_hat) / 40_000.0).sqrt()).abs() < 1e-15);
        assert_eq!(e.trials, 40_000);
        assert_eq!(e.seed, 11);
    }

    #[test]
    fn rejects_bad_configs() {
        let s = Scenario::ideal();
        assert!(estimate_op(
            Scheme::Ors,
            &s,
            &McConfig {
                trials: 0,
                ..quick(1)
            }
        )
        .is_err());
        assert!(estimate_op(
            Scheme::Ors,
            &s,
            &McConfig {
                chunk: 0,
                ..quick(10)
            }
        )
        .is_err());
        let mut s = Scenario::ideal();
        s.eavesdrop = EavesdropTarget::Fixed(5);
        assert!(estimate_ip(IpMode::Relay, &s, &quick(10)).is_err());
    }

    #[test]
    fn ors_never_loses_to_the_other_rules() {
        let mut s = Scenario::non_ideal().with_pb_db(10.0).with_relays(4);
        s.iqi = IqiProfile::uniform(IqiMismatch::symmetric_deg(1.2, 10.0).unwrap());
        let stats = s.statistics().unwrap();
        let gains = s.link_gains();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = empty_realization();
        let alpha = s.harvester.alpha;
        for _ in 0..20_000 {
            sample_realization(&s, &stats, &gains, &mut rng, &mut state);
            let ors = state.e2e_capacity(select_ors(&state), alpha);
            assert!(ors >= state.e2e_capacity(select_srs(&state), alpha));
            for m in 1..=4 {
                assert!(ors >= state.e2e_capacity(m, alpha));
            }
        }
    }

    #[test]
    fn uniform_rrs_matches_designated_statistically() {
        let s = Scenario::non_ideal().with_pb_db(10.0);
        let cfg = quick(200_000);
        let a = estimate_op(Scheme::Rrs, &s, &cfg).unwrap();
        let mut u = s.clone();
        u.rrs = RrsChoice::Uniform;
        let b = estimate_op(Scheme::Rrs, &u, &McConfig { seed: 12, ..cfg }).unwrap();
        let sd = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.p_hat - b.p_hat).abs() < 4.0 * sd, "{a:?} {b:?}");
    }

    #[test]
    fn eavesdropped_relay_index_does_not_matter() {
        let s = Scenario::non_ideal().with_pb_db(10.0).with_relays(3);
        let cfg = quick(200_000);
        let mut est = Vec::new();
        for m in 1..=3 {
            let mut t = s.clone();
            t.eavesdrop = EavesdropTarget::Fixed(m);
            est.push(estimate_ip(IpMode::Relay, &t, &cfg).unwrap());
        }
        for e in &est[1..] {
            let sd = (e.stderr.powi(2) + est[0].stderr.powi(2)).sqrt();
            assert!((e.p_hat - est[0].p_hat).abs() < 4.0 * sd);
        }
    }
}
