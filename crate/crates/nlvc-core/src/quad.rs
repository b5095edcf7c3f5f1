//! Gauss-Legendre rules and piecewise integration helpers.
//!
//! Every kernel integral in this crate is split at element boundaries, at the
//! kernel support edges `x +- eps`, and at the domain-closure endpoints before
//! a fixed-order Gauss rule is applied, so polynomial integrands are
//! integrated exactly.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// Quadrature configuration: Gauss points per subinterval after the standard
/// subdivision. Order 4 integrates products of hats with the quintic
/// manufactured solutions exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { points: 4 }
    }
}

impl QuadratureSpec {
    pub fn new(points: usize) -> Result<Self> {
        if (2..=16).contains(&points) {
            Ok(QuadratureSpec { points })
        } else {
            Err(Error::InvalidQuadrature { points })
        }
    }

    pub fn rule(&self) -> GaussRule {
        GaussRule::new(self.points).expect("validated on construction")
    }
}

/// Gauss-Legendre rule on `[-1, 1]`, exact for polynomials of degree
/// `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Result<GaussRule> {
        if !(2..=16).contains(&n) {
            return Err(Error::InvalidQuadrature { points: n });
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Newton iteration on P_n from the asymptotic root estimate; the
        // middle root of odd rules converges to exactly zero.
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = math::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let step = p / d;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            nodes[i] = -x.abs();
            weights[i] = w;
            nodes[n - 1 - i] = x.abs();
            weights[n - 1 - i] = w;
        }
        Ok(GaussRule { nodes, weights })
    }

    /// Scaled abscissas and weights on `[lo, hi]`.
    pub fn points_on<'a>(
        &'a self,
        lo: f64,
        hi: f64,
    ) -> impl Iterator<Item = (f64, f64)> + 'a {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let mut acc = 0.0;
        for (x, w) in self.points_on(lo, hi) {
            acc += w * f(x);
        }
        acc
    }

    /// Integrates over `[lo, hi]` split at the interior points of `cuts`
    /// (unsorted, possibly outside the interval; duplicates are merged).
    pub fn integrate_with_cuts<F: FnMut(f64) -> f64>(
        &self,
        lo: f64,
        hi: f64,
        cuts: &[f64],
        mut f: F,
    ) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let mut pts: Vec<f64> = cuts
            .iter()
            .copied()
            .filter(|&c| c > lo && c < hi)
            .collect();
        pts.sort_unstable_by(|p, q| p.partial_cmp(q).expect("finite cuts"));
        let mut acc = 0.0;
        let mut left = lo;
        for c in pts {
            if c - left > 0.0 {
                acc += self.integrate(left, c, &mut f);
                left = c;
            }
        }
        acc + self.integrate(left, hi, &mut f)
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::powi;

    #[test]
    fn rule_is_exact_to_design_order() {
        for n in 2..=16 {
            let rule = GaussRule::new(n).unwrap();
            for deg in 0..=(2 * n - 1) {
                let exact = (powi(3.0, deg as u32 + 1) - powi(-2.0, deg as u32 + 1))
                    / (deg as f64 + 1.0);
                let num = rule.integrate(-2.0, 3.0, |x| powi(x, deg as u32));
                assert!(
                    (num - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                    "n={n} deg={deg}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [2usize, 5, 9, 16] {
            let rule = GaussRule::new(n).unwrap();
            let total: f64 = rule.points_on(0.0, 0.75).map(|(_, w)| w).sum();
            assert!((total - 0.75).abs() < 1e-14);
        }
    }

    #[test]
    fn cuts_partition_the_integral() {
        let rule = GaussRule::new(4).unwrap();
        // |x| has a kink at 0: cutting there makes the rule exact
        let v = rule.integrate_with_cuts(-1.0, 2.0, &[0.0, -5.0, 7.0], |x| x.abs());
        assert!((v - 2.5).abs() < 1e-14);
    }

    #[test]
    fn spec_validates_range() {
        assert!(QuadratureSpec::new(1).is_err());
        assert!(QuadratureSpec::new(17).is_err());
        assert_eq!(QuadratureSpec::default().points, 4);
    }
}
