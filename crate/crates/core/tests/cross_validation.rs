//! Simulation against closed forms away from the default operating point.

use iqisec::analytic::{self, QuadratureConfig};
use iqisec::channel::CeeModel;
use iqisec::iqi::IqiMismatch;
use iqisec::mc::{self, IpMode, McConfig};
use iqisec::scenario::{IqiProfile, RrsChoice, Scheme};
use iqisec::Scenario;

fn cfg(seed: u64) -> McConfig {
    McConfig {
        trials: 400_000,
        seed,
        workers: 0,
        chunk: 1 << 16,
    }
}

fn assert_op_agrees(s: &Scenario, seed: u64, label: &str) {
    let quad = QuadratureConfig::default();
    let est = mc::estimate_op_all(s, &cfg(seed)).unwrap();
    for (k, scheme) in Scheme::ALL.into_iter().enumerate() {
        let a = analytic::op(scheme, s, &quad).unwrap().probability;
        let e = est[k];
        assert!(
            (a - e.p_hat).abs() <= 3.0 * e.stderr.max(1e-12),
            "{label} {scheme}: analytic {a} mc {} +- {}",
            e.p_hat,
            e.stderr
        );
    }
}

fn assert_ip_agrees(s: &Scenario, seed: u64, label: &str) {
    let quad = QuadratureConfig::default();
    for (mode, a) in [
        (IpMode::Direct, analytic::ip_direct(s, &quad).unwrap()),
        (IpMode::Relay, analytic::ip_relay(s, &quad, 1).unwrap()),
    ] {
        let e = mc::estimate_ip(mode, s, &cfg(seed)).unwrap();
        assert!(
            (a.probability - e.p_hat).abs() <= 3.0 * e.stderr.max(1e-12),
            "{label} {mode:?}: analytic {} mc {} +- {}",
            a.probability,
            e.p_hat,
            e.stderr
        );
    }
}

#[test]
fn three_relays() {
    let s = Scenario::non_ideal().with_pb_db(15.0).with_relays(3);
    assert_op_agrees(&s, 21, "M=3");
}

#[test]
fn four_relays_strong_mismatch() {
    let mut s = Scenario::non_ideal().with_pb_db(12.0).with_relays(4);
    s.iqi = IqiProfile::uniform(IqiMismatch::symmetric_deg(1.25, 12.0).unwrap());
    assert_op_agrees(&s, 22, "M=4 xi=1.25");
    assert_ip_agrees(&s, 23, "M=4 xi=1.25");
}

#[test]
fn snr_dependent_estimation_error() {
    for (pb, seed) in [(5.0, 31), (20.0, 32)] {
        let mut s = Scenario::non_ideal().with_pb_db(pb);
        s.network.cee = CeeModel::SnrDependent { delta: 1.0 };
        s.network.cee_eve = CeeModel::SnrDependent { delta: 1.0 };
        assert_op_agrees(&s, seed, "snr-dependent");
        assert_ip_agrees(&s, seed + 100, "snr-dependent");
    }
}

#[test]
fn linear_harvester() {
    let mut s = Scenario::non_ideal().with_pb_db(20.0);
    s.harvester.gamma1 = f64::INFINITY;
    s.harvester.gamma2 = f64::INFINITY;
    assert_op_agrees(&s, 41, "linear");
    assert_ip_agrees(&s, 42, "linear");
}

#[test]
fn asymmetric_links_and_harvesters() {
    let mut s = Scenario::non_ideal().with_pb_db(8.0);
    s.iqi.sr = IqiMismatch::new(1.2, 0.1, 0.9, -0.2).unwrap();
    s.iqi.rd = IqiMismatch::new(0.95, 0.05, 1.05, 0.15).unwrap();
    s.iqi.se = IqiMismatch::new(1.0, 0.0, 1.3, 0.3).unwrap();
    s.harvester.alpha = 0.3;
    s.harvester.sigma1 = 0.7;
    s.harvester.gamma1 = 4.0;
    s.harvester.gamma2 = 25.0;
    s.network.distances.rd = 1.2;
    s.network.noise.rd = 0.5;
    s.r_th = 0.12;
    assert_op_agrees(&s, 51, "asymmetric");
    assert_ip_agrees(&s, 52, "asymmetric");
}

#[test]
fn uniform_random_relay_matches_closed_form() {
    let mut s = Scenario::non_ideal().with_pb_db(10.0).with_relays(3);
    s.rrs = RrsChoice::Uniform;
    let quad = QuadratureConfig::default();
    let a = analytic::op_rrs(&s, &quad).unwrap().probability;
    let e = mc::estimate_op(Scheme::Rrs, &s, &cfg(61)).unwrap();
    assert!((a - e.p_hat).abs() <= 3.0 * e.stderr);
}

#[test]
fn independent_product_is_rejected_by_simulation() {
    // The shared source power correlates the first hops, which the exact
    // expansion captures and the per-relay product does not.
    let s = Scenario::non_ideal().with_pb_db(10.0);
    let quad = QuadratureConfig::default();
    let product = analytic::op_ors_product(&s, &quad).unwrap().probability;
    let e = mc::estimate_op(
        Scheme::Ors,
        &s,
        &McConfig {
            trials: 1_000_000,
            ..cfg(71)
        },
    )
    .unwrap();
    assert!((product - e.p_hat).abs() > 10.0 * e.stderr);
}

#[test]
fn statistical_monotonicity_in_beacon_power() {
    let mut last_op = [f64::INFINITY; 3];
    let mut last_ip = f64::NEG_INFINITY;
    let mut last_sd = [0.0; 3];
    let mut last_ip_sd = 0.0;
    for (i, pb) in [0.0, 5.0, 10.0, 15.0, 20.0].into_iter().enumerate() {
        let s = Scenario::non_ideal().with_pb_db(pb);
        let op = mc::estimate_op_all(&s, &cfg(80 + i as u64)).unwrap();
        for k in 0..3 {
            let slack = 3.0 * (op[k].stderr.powi(2) + last_sd[k] * last_sd[k]).sqrt();
            assert!(op[k].p_hat <= last_op[k] + slack);
            last_op[k] = op[k].p_hat;
            last_sd[k] = op[k].stderr;
        }
        let ip = mc::estimate_ip(IpMode::Direct, &s, &cfg(90 + i as u64)).unwrap();
        let slack = 3.0 * (ip.stderr.powi(2) + last_ip_sd * last_ip_sd).sqrt();
        assert!(ip.p_hat >= last_ip - slack);
        last_ip = ip.p_hat;
        last_ip_sd = ip.stderr;
    }
}

#[test]
fn relay_count_effects() {
    let quad = QuadratureConfig::default();
    let s2 = Scenario::non_ideal().with_pb_db(10.0);
    let s4 = s2.clone().with_relays(4);
    let m2 = mc::estimate_op_all(&s2, &cfg(101)).unwrap();
    let m4 = mc::estimate_op_all(&s4, &cfg(102)).unwrap();
    let joint = |a: &mc::MetricEstimate, b: &mc::MetricEstimate| {
        3.0 * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt()
    };
    // RRS is blind to the other relays.
    assert!((m2[0].p_hat - m4[0].p_hat).abs() <= joint(&m2[0], &m4[0]));
    // SRS and ORS gain from more candidates.
    assert!(m4[1].p_hat + joint(&m2[1], &m4[1]) < m2[1].p_hat);
    assert!(m4[2].p_hat + joint(&m2[2], &m4[2]) < m2[2].p_hat);
    let r2 = analytic::op_rrs(&s2, &quad).unwrap().probability;
    let r4 = analytic::op_rrs(&s4, &quad).unwrap().probability;
    assert!((r2 - r4).abs() < 1e-12);
}
