//! Gauss-Chebyshev quadrature on a finite interval `[0, upper]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureRule {
    /// Chebyshev nodes after a `sin^2` endpoint-smoothing change of variable.
    #[default]
    Smoothed,
    /// Chebyshev nodes applied to the integrand as is.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Nodes per finite-range integral.
    pub nodes: usize,
    pub rule: QuadratureRule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes: 200,
            rule: QuadratureRule::Smoothed,
        }
    }
}

impl QuadratureConfig {
    pub fn with_nodes(nodes: usize) -> Self {
        Self {
            nodes,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 4 {
            return Err(Error::invalid(
                "y_nodes",
                format!("need at least 4 nodes, got {}", self.nodes),
            ));
        }
        Ok(())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, upper: f64) -> f64 {
        match self.rule {
            QuadratureRule::Smoothed => chebyshev_sum(f, upper, self.nodes),
            QuadratureRule::Plain => chebyshev_sum_plain(f, upper, self.nodes),
        }
    }
}

/// `(pi upper / 2Y) sum_{l=1..Y} f(upper (d_l + 1) / 2) sqrt(1 - d_l^2)`,
/// `d_l = cos((2l - 1) pi / 2Y)`.
///
/// The weight `sqrt(1 - d^2)` is only piecewise smooth at the ends, so the
/// error decays like `Y^-2` for generic `f`.
pub fn chebyshev_sum_plain(f: impl Fn(f64) -> f64, upper: f64, y: usize) -> f64 {
    if upper == 0.0 || y == 0 {
        return 0.0;
    }
    let yf = y as f64;
    let mut acc = 0.0;
    for l in 1..=y {
        let d = ((2 * l - 1) as f64 * std::f64::consts::PI / (2.0 * yf)).cos();
        acc += f(0.5 * upper * (d + 1.0)) * (1.0 - d * d).sqrt();
    }
    std::f64::consts::PI * upper / (2.0 * yf) * acc
}

/// The same Chebyshev rule after substituting `x = upper w(x'/upper)` with
/// `w(s) = s - sin(2 pi s) / 2 pi`. The Jacobian `1 - cos(2 pi s)` vanishes
/// to second order at both ends, which cancels the weight's endpoint kink.
pub fn chebyshev_sum(f: impl Fn(f64) -> f64, upper: f64, y: usize) -> f64 {
    use std::f64::consts::TAU;
    if upper == 0.0 {
        return 0.0;
    }
    let g = |x: f64| {
        let s = x / upper;
        let w = s - (TAU * s).sin() / TAU;
        let dw = 1.0 - (TAU * s).cos();
        if dw == 0.0 {
            0.0
        } else {
            f(upper * w) * dw
        }
    };
    chebyshev_sum_plain(g, upper, y)
}
