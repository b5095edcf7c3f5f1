//! Strong-form nonlocal operators on general scalar functions.
//!
//! All integrals run over the interaction ball clipped to the domain closure
//! and are split at kernel support edges and at argument kinks before the
//! Gauss rule is applied. Everything here uses the factor-free convention
//!
//! ```text
//!   L u(x)       =  int (u(y) - u(x)) gamma(x,y) dy
//!   N-op u(x)    =  int (u(x) - u(y)) gamma(x,y) dy      (x in the layer)
//! ```
//!
//! under which the constant kernel gives `L u -> u''` and the weak form
//! `(1/2) iint (u(x)-u(y))(z(x)-z(y)) gamma = int_N g z + int_O s z` holds as
//! an exact Green identity.

use alloc::vec::Vec;

use crate::domain::{Domain1D, Region};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::kernel::Kernel;
use crate::poly::Polynomial;
use crate::quad::{GaussRule, QuadratureSpec};

/// Truncated nonlocal diffusion `L u(x)` by subdivided quadrature.
pub fn apply_l(
    u: &dyn ScalarFunction,
    kernel: &Kernel,
    domain: &Domain1D,
    x: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    let (lo, hi) = (domain.lo(), domain.hi());
    if x < lo || x > hi {
        return Err(Error::OutsideDomain { x });
    }
    let rule = q.rule();
    Ok(l_integral(u, kernel, domain, x, &rule))
}

fn l_integral(
    u: &dyn ScalarFunction,
    kernel: &Kernel,
    domain: &Domain1D,
    x: f64,
    rule: &GaussRule,
) -> f64 {
    let w0 = domain.lo().max(x - kernel.epsilon);
    let w1 = domain.hi().min(x + kernel.epsilon);
    let mut cuts: Vec<f64> = Vec::new();
    if let Some(b) = u.breaks() {
        b.collect_inside(w0, w1, &mut cuts);
    }
    let ux = u.eval(x);
    rule.integrate_with_cuts(w0, w1, &cuts, |y| (u.eval(y) - ux) * kernel.gamma(x, y))
}

/// Interaction (Neumann) operator on the flux layer: the value that plays the
/// role of a flux density and, prescribed as data, acts as a body force.
pub fn neumann_operator(
    u: &dyn ScalarFunction,
    kernel: &Kernel,
    domain: &Domain1D,
    x: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if domain.classify(x) != Region::NeumannLayer {
        return Err(Error::NotInNeumannLayer { x });
    }
    let rule = q.rule();
    Ok(-l_integral(u, kernel, domain, x, &rule))
}

/// Both sides of the nonlocal Gauss theorem: the interior integral of the
/// diffusion operator against the layer integral of the interaction-operator
/// integrand (oriented so the two agree). Equality to 1e-7 relative is the
/// acceptance check for polynomial input.
pub fn gauss_check(
    u: &dyn ScalarFunction,
    kernel: &Kernel,
    domain: &Domain1D,
    q: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let rule = q.rule();
    let outer = |seg_lo: f64, seg_hi: f64, sign: f64| -> f64 {
        let mut cuts: Vec<f64> = Vec::new();
        if let Some(b) = u.breaks() {
            b.collect_inside(seg_lo, seg_hi, &mut cuts);
            // window truncation pattern changes an interaction-ball length
            // away from each kink
            let shifted: Vec<f64> = cuts
                .iter()
                .flat_map(|&c| [c - kernel.epsilon, c + kernel.epsilon])
                .collect();
            cuts.extend(shifted);
        }
        rule.integrate_with_cuts(seg_lo, seg_hi, &cuts, |x| {
            sign * l_integral(u, kernel, domain, x, &rule)
        })
    };
    let interior = outer(domain.a, domain.b, -1.0);
    let layers = outer(domain.lo(), domain.a, 1.0) + outer(domain.b, domain.hi(), 1.0);
    Ok((interior, layers))
}

/// Difference between the truncated nonlocal operator and the Laplacian at a
/// full-ball point: `L u(x) - u''(x)`, which for the constant kernel equals
/// `eps^2 u''''(x) / 20` exactly through degree five.
pub fn taylor_remainder(
    u: &Polynomial,
    kernel: &Kernel,
    domain: &Domain1D,
    x: f64,
) -> Result<f64> {
    if x < domain.a || x > domain.b {
        return Err(Error::OutsideFullBall { x });
    }
    let l = u.apply_l_truncated(kernel, domain, x)?;
    Ok(l - u.derivative(2).eval(x))
}
