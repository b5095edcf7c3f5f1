//! Error measures: the nonlocal energy seminorm, the L2 norm over the domain
//! closure, and convergence-rate bookkeeping.
//!
//! Both norms measure `w - reference` with the reference evaluated exactly
//! inside the quadrature, never interpolated onto the mesh; on the finest
//! grids an interpolated reference would contribute error comparable to the
//! smallest tabulated values.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fem::NodalField;
use crate::function::ScalarFunction;
use crate::kernel::Kernel;
use crate::math;
use crate::quad::QuadratureSpec;

/// Energy and L2 errors of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    pub energy: f64,
    pub l2: f64,
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub h: f64,
    pub epsilon: f64,
    pub e_energy: f64,
    pub rate_energy: Option<f64>,
    pub e_l2: f64,
    pub rate_l2: Option<f64>,
}

/// Nonlocal energy seminorm of `w - reference`:
/// `||| v |||^2 = (1/2) iint (v(y) - v(x))^2 gamma(x,y) dy dx` over the
/// squared closure.
///
/// The outer integral uses the per-element Gauss rule; for each outer point
/// the inner window is split at element boundaries and the support edges.
/// Full inner elements are accumulated through prefix sums of the quadratic
/// expansion `(v(y) - v(x))^2 = v(y)^2 - 2 v(x) v(y) + v(x)^2`, which is the
/// same quadrature reorganized, so the cost stays linear in the node count.
pub fn energy_seminorm(
    w: &NodalField,
    reference: &dyn ScalarFunction,
    kernel: &Kernel,
    q: &QuadratureSpec,
) -> f64 {
    let mesh = w.mesh();
    let h = mesh.h;
    let n_el = mesh.n_elements();
    let ratio = kernel.epsilon / h;
    let k = math::round(ratio) as usize;
    assert!(
        (ratio - k as f64).abs() <= 1e-9 * ratio.max(1.0) && k >= 1,
        "kernel horizon must be grid aligned"
    );
    let rule = q.rule();
    let lo = mesh.domain.lo();
    let hi = mesh.domain.hi();
    let strength = kernel.strength();
    let values = w.values();

    // difference at every standard Gauss point, and its prefix moments
    let pts: Vec<(f64, f64)> = rule.points_on(0.0, 1.0).collect();
    let g = pts.len();
    let mut dvals = vec![0.0; n_el * g];
    let mut p0 = vec![0.0; n_el + 1];
    let mut p1 = vec![0.0; n_el + 1];
    let mut p2 = vec![0.0; n_el + 1];
    for e in 0..n_el {
        let x0 = lo + h * e as f64;
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (gi, &(t, wt)) in pts.iter().enumerate() {
            let x = x0 + t * h;
            let d = values[e] * (1.0 - t) + values[e + 1] * t - reference.eval(x);
            dvals[e * g + gi] = d;
            let wq = wt * h;
            s0 += wq;
            s1 += wq * d;
            s2 += wq * d * d;
        }
        p0[e + 1] = p0[e] + s0;
        p1[e + 1] = p1[e] + s1;
        p2[e + 1] = p2[e] + s2;
    }

    let eval_d = |e: usize, y: f64| -> f64 {
        let t = (y - (lo + h * e as f64)) / h;
        values[e] * (1.0 - t) + values[e + 1] * t - reference.eval(y)
    };

    let mut acc = 0.0;
    for e in 0..n_el {
        let x0 = lo + h * e as f64;
        for (gi, &(t, wt)) in pts.iter().enumerate() {
            let x = x0 + t * h;
            let dx = dvals[e * g + gi];
            // full elements entirely inside the interaction window
            let elo = e.saturating_sub(k - 1);
            let ehi = (e + k - 1).min(n_el - 1);
            let mut inner = (p2[ehi + 1] - p2[elo]) - 2.0 * dx * (p1[ehi + 1] - p1[elo])
                + dx * dx * (p0[ehi + 1] - p0[elo]);
            // partial element at the left support edge
            if e >= k {
                let y0 = (x - kernel.epsilon).max(lo);
                let y1 = lo + h * (e - k + 1) as f64;
                inner += rule.integrate(y0, y1, |y| {
                    let dy = eval_d(e - k, y);
                    (dy - dx) * (dy - dx)
                });
            }
            // partial element at the right support edge
            if e + k <= n_el - 1 {
                let y0 = lo + h * (e + k) as f64;
                let y1 = (x + kernel.epsilon).min(hi);
                inner += rule.integrate(y0, y1, |y| {
                    let dy = eval_d(e + k, y);
                    (dy - dx) * (dy - dx)
                });
            }
            acc += 0.5 * (wt * h) * strength * inner;
        }
    }
    math::sqrt(acc.max(0.0))
}

/// L2 norm of `w - reference` over the domain closure.
pub fn l2_norm(w: &NodalField, reference: &dyn ScalarFunction, q: &QuadratureSpec) -> f64 {
    let mesh = w.mesh();
    let h = mesh.h;
    let rule = q.rule();
    let values = w.values();
    let mut acc = 0.0;
    for e in 0..mesh.n_elements() {
        let x0 = mesh.element_lo(e);
        acc += rule.integrate(x0, x0 + h, |x| {
            let t = (x - x0) / h;
            let d = values[e] * (1.0 - t) + values[e + 1] * t - reference.eval(x);
            d * d
        });
    }
    math::sqrt(acc.max(0.0))
}

/// Both error measures at once.
pub fn errors(
    w: &NodalField,
    reference: &dyn ScalarFunction,
    kernel: &Kernel,
    q: &QuadratureSpec,
) -> ErrorPair {
    ErrorPair {
        energy: energy_seminorm(w, reference, kernel, q),
        l2: l2_norm(w, reference, q),
    }
}

/// Fills the rate columns: `rate[k] = log2(e[k-1] / e[k])`, defined when the
/// horizon halves row to row; the first row stays empty.
pub fn rates(mut records: Vec<ConvergenceRecord>) -> Result<Vec<ConvergenceRecord>> {
    for i in 1..records.len() {
        let prev = records[i - 1].epsilon;
        let cur = records[i].epsilon;
        if (prev / cur - 2.0).abs() > 1e-9 {
            return Err(Error::NonHalvingEpsilon {
                previous: prev,
                current: cur,
            });
        }
        records[i].rate_energy = rate_of(records[i - 1].e_energy, records[i].e_energy);
        records[i].rate_l2 = rate_of(records[i - 1].e_l2, records[i].e_l2);
    }
    Ok(records)
}

fn rate_of(prev: f64, cur: f64) -> Option<f64> {
    if prev > 0.0 && cur > 0.0 {
        Some(math::log2(prev / cur))
    } else {
        None
    }
}

/// Formats an error to three significant figures in scientific notation and a
/// rate to two decimals, matching the table layout of the study reports.
pub fn format_error(e: f64) -> String {
    alloc::format!("{:.2e}", e)
}

pub fn format_rate(r: Option<f64>) -> String {
    match r {
        Some(v) => alloc::format!("{:.2}", v),
        None => String::from("-"),
    }
}
