//! Exact polynomial calculus for manufactured solutions.
//!
//! Manufactured data in every experiment are polynomials, so sources, fluxes,
//! surrogate solutions and the truncated nonlocal operator applied to them
//! all have closed forms; no golden value in the test suite depends on
//! quadrature error.

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::Domain1D;
use crate::error::{Error, Result};
use crate::kernel::Kernel;

/// Coefficient cap; the experiments use degree 5, property tests go to 8.
pub const MAX_DEGREE: usize = 12;

/// Dense polynomial `c0 + c1 x + ... + cn x^n`, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Normalizes trailing zeros away. Panics above [`MAX_DEGREE`].
    pub fn new(coeffs: &[f64]) -> Polynomial {
        let mut c: Vec<f64> = coeffs.to_vec();
        while c.len() > 1 && *c.last().unwrap() == 0.0 {
            c.pop();
        }
        if c.is_empty() {
            c.push(0.0);
        }
        assert!(
            c.len() <= MAX_DEGREE + 1,
            "polynomial degree {} exceeds cap {}",
            c.len() - 1,
            MAX_DEGREE
        );
        Polynomial { coeffs: c }
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Polynomial {
        Polynomial::new(&[c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Polynomial {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Polynomial::new(&c)
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact derivative of the given order.
    pub fn derivative(&self, order: u32) -> Polynomial {
        let mut c = self.coeffs.clone();
        for _ in 0..order {
            if c.len() == 1 {
                return Polynomial::zero();
            }
            c = c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, ck)| k as f64 * ck)
                .collect();
        }
        Polynomial::new(&c)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Polynomial {
        let mut c = vec![0.0];
        c.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, ck)| ck / (k as f64 + 1.0)),
        );
        Polynomial { coeffs: c }
    }

    /// Exact definite integral over `[lo, hi]`.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::new(
            &self
                .coeffs
                .iter()
                .map(|c| c * factor)
                .collect::<Vec<f64>>(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![0.0; n];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = self.coeffs.get(k).copied().unwrap_or(0.0)
                + other.coeffs.get(k).copied().unwrap_or(0.0);
        }
        Polynomial::new(&c)
    }

    /// Truncated nonlocal diffusion applied analytically:
    /// `int_{window} (p(y) - p(x)) gamma(x,y) dy` with the interaction ball
    /// clipped to the domain closure.
    pub fn apply_l_truncated(
        &self,
        kernel: &Kernel,
        domain: &Domain1D,
        x: f64,
    ) -> Result<f64> {
        let (lo, hi) = (domain.lo(), domain.hi());
        if x < lo || x > hi {
            return Err(Error::OutsideDomain { x });
        }
        let w0 = lo.max(x - kernel.epsilon);
        let w1 = hi.min(x + kernel.epsilon);
        let anti = self.antiderivative();
        Ok(kernel.strength() * (anti.eval(w1) - anti.eval(w0) - self.eval(x) * (w1 - w0)))
    }

    /// Local Neumann datum at Gamma_N: with outward normal -1 at the left
    /// surface point, `-p'. n = g_l` reduces to `g_l = p'(a - eps)`.
    pub fn local_neumann_data(&self, domain: &Domain1D) -> f64 {
        self.derivative(1).eval(domain.lo())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::build_domain;

    #[test]
    fn eval_examples() {
        assert_eq!(Polynomial::monomial(4).eval(2.0), 16.0);
        assert_eq!(Polynomial::new(&[0.0, 2.0, 0.0, 0.0, 0.0, 1.0]).eval(1.0), 3.0);
        assert_eq!(Polynomial::monomial(3).eval(-0.25), -0.015625);
    }

    #[test]
    fn derivative_examples() {
        let x4 = Polynomial::monomial(4);
        assert_eq!(x4.derivative(2).coeffs(), &[0.0, 0.0, 12.0]);
        assert_eq!(x4.derivative(4).coeffs(), &[24.0]);
        assert_eq!(Polynomial::monomial(1).derivative(2).coeffs(), &[0.0]);
        assert_eq!(x4.derivative(5).coeffs(), &[0.0]);
    }

    #[test]
    fn integrate_examples() {
        let eps = 0.25;
        let v = Polynomial::monomial(2).integrate(-eps, eps);
        assert!((v - 2.0 * eps * eps * eps / 3.0).abs() < 1e-15);
        assert_eq!(Polynomial::constant(1.0).integrate(0.0, 1.0), 1.0);
        assert_eq!(Polynomial::monomial(3).integrate(-1.0, 1.0), 0.0);
    }

    #[test]
    fn truncated_operator_full_ball() {
        // full ball: L x^4 = 12 x^2 + (6/5) eps^2, L x = 0, L x^3 = 6 x
        for eps in [0.25, 0.125] {
            let d = build_domain(0.0, 1.0, eps).unwrap();
            let k = Kernel::constant(eps);
            for x in [0.3, 0.5, 0.75] {
                let v4 = Polynomial::monomial(4).apply_l_truncated(&k, &d, x).unwrap();
                let expect = 12.0 * x * x + 1.2 * eps * eps;
                assert!((v4 - expect).abs() < 1e-11 * expect.abs());

                let v1 = Polynomial::monomial(1).apply_l_truncated(&k, &d, x).unwrap();
                assert!(v1.abs() < 1e-12);

                let v3 = Polynomial::monomial(3).apply_l_truncated(&k, &d, x).unwrap();
                assert!((v3 - 6.0 * x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truncated_operator_rejects_outside_points() {
        let d = build_domain(0.0, 1.0, 0.25).unwrap();
        let k = Kernel::constant(0.25);
        assert!(matches!(
            Polynomial::monomial(2).apply_l_truncated(&k, &d, 1.5),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn neumann_data_examples() {
        for eps in [0.25, 0.0625] {
            let d = build_domain(0.0, 1.0, eps).unwrap();
            let g4 = Polynomial::monomial(4).local_neumann_data(&d);
            assert!((g4 - (-4.0 * eps * eps * eps)).abs() < 1e-14);
            let g3 = Polynomial::monomial(3).local_neumann_data(&d);
            assert!((g3 - 3.0 * eps * eps).abs() < 1e-14);
            let q = Polynomial::new(&[0.0, 2.0, 0.0, 0.0, 0.0, 1.0]);
            let gq = q.local_neumann_data(&d);
            assert!((gq - (2.0 + 5.0 * eps * eps * eps * eps)).abs() < 1e-14);
        }
    }

    #[test]
    fn neumann_data_sign_matches_finite_difference() {
        let eps = 0.125;
        let d = build_domain(0.0, 1.0, eps).unwrap();
        let p = Polynomial::new(&[1.0, -3.0, 0.5, 2.0]);
        let g = p.local_neumann_data(&d);
        let step = 1e-5;
        let fd = (p.eval(d.lo() + step) - p.eval(d.lo() - step)) / (2.0 * step);
        assert!((g - fd).abs() < 1e-6);
    }

    #[test]
    fn trailing_zeros_normalized() {
        let p = Polynomial::new(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Polynomial::new(&[0.0, 0.0]).degree(), 0);
    }

    #[test]
    #[should_panic(expected = "exceeds cap")]
    fn degree_cap_enforced() {
        let mut c = vec![0.0; 14];
        c[13] = 1.0;
        let _ = Polynomial::new(&c);
    }
}
