//! Modified Bessel function of the second kind, order one.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `K1(x)` for `x > 0`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    check(x)?;
    if x <= 2.0 {
        Ok(k1_series(x))
    } else {
        Ok(k1_scaled_cf(x) * (-x).exp())
    }
}

/// `exp(x) K1(x)`, finite for large `x` where `K1` itself underflows.
pub fn bessel_k1_scaled(x: f64) -> Result<f64> {
    check(x)?;
    if x <= 2.0 {
        Ok(k1_series(x) * x.exp())
    } else {
        Ok(k1_scaled_cf(x))
    }
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() || x == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::Domain(x))
    }
}

/// Ascending series around the origin.
fn k1_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0; // y^k / (k! (k+1)!)
    let mut psi_k1 = -EULER_GAMMA; // psi(k+1)
    let mut i1 = 0.0;
    let mut s = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        let psi_k2 = psi_k1 + 1.0 / (kf + 1.0);
        i1 += term;
        s += (psi_k1 + psi_k2) * term;
        if term < 1e-18 * i1 {
            break;
        }
        term *= y / ((kf + 1.0) * (kf + 2.0));
        psi_k1 = psi_k2;
    }
    let i1 = 0.5 * x * i1;
    1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * s
}

/// Steed's continued fraction (Temme's variant) for `exp(x) K1(x)`, `x >= 2`.
fn k1_scaled_cf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 0.0;
    }
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    k0 * (0.5 + x - h) / x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_value() {
        assert!((bessel_k1(1.0).unwrap() - 0.601_907_230_197_234_6).abs() < 1e-15);
    }

    #[test]
    fn small_argument_limit() {
        let x = 1e-6;
        assert!((x * bessel_k1(x).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn large_argument_limit() {
        let x = 50.0;
        let v = bessel_k1_scaled(x).unwrap() * (2.0 * x / std::f64::consts::PI).sqrt();
        assert!((v - 1.0).abs() < 1e-2);
        // Next asymptotic term: 1 + 3/(8x).
        assert!((v - (1.0 + 3.0 / (8.0 * x) - 15.0 / (128.0 * x * x))).abs() < 1e-6);
    }

    #[test]
    fn branches_agree_at_the_switch() {
        let lo = k1_series(2.0);
        let hi = k1_scaled_cf(2.0) * (-2.0f64).exp();
        assert!(((lo - hi) / lo).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(bessel_k1(0.0), Err(Error::Domain(_))));
        assert!(bessel_k1(-1.0).is_err());
        assert!(bessel_k1(f64::NAN).is_err());
        assert_eq!(bessel_k1(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn scaled_matches_unscaled() {
        for x in [0.3, 1.7, 2.5, 9.0, 30.0] {
            let a = bessel_k1(x).unwrap() * x.exp();
            let b = bessel_k1_scaled(x).unwrap();
            assert!(((a - b) / b).abs() < 1e-13);
        }
    }
}
