//! Surrogate local problem on the domain closure:
//!
//! ```text
//!   -u'' = s          on (a-eps, b+eps)
//!   -u'.n = g_l       at the left surface point  (n = -1, so u' = g_l)
//!    u    = v_trace   at the right surface point
//! ```
//!
//! Polynomial sources are solved exactly by double antidifferentiation; any
//! other source goes through a second-order finite-difference path on an
//! auxiliary grid that is independent of the nonlocal mesh.

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::Domain1D;
use crate::error::{Error, Result};
use crate::function::{Field, GridFunction, ScalarFunction};
use crate::poly::Polynomial;

#[derive(Debug, Clone)]
pub struct LocalProblem {
    pub domain: Domain1D,
    pub source: Field,
    /// Flux datum `g_l` at the left surface point.
    pub flux: f64,
    /// Dirichlet trace at the right surface point.
    pub trace: f64,
}

/// Surrogate solution in whichever form the source admitted.
#[derive(Debug, Clone)]
pub enum LocalSolution {
    Poly(Polynomial),
    Grid(GridFunction),
}

impl ScalarFunction for LocalSolution {
    fn eval(&self, x: f64) -> f64 {
        match self {
            LocalSolution::Poly(p) => p.eval(x),
            LocalSolution::Grid(g) => g.eval(x),
        }
    }

    fn breaks(&self) -> Option<crate::function::Breaks> {
        match self {
            LocalSolution::Poly(_) => None,
            LocalSolution::Grid(g) => g.breaks(),
        }
    }
}

impl LocalProblem {
    /// Analytic route when the source is polynomial, otherwise the
    /// finite-difference route at `n_cells` resolution.
    pub fn solve(&self, n_cells: usize) -> Result<LocalSolution> {
        match &self.source {
            Field::Poly(p) => Ok(LocalSolution::Poly(solve_local_analytic(
                &self.domain,
                p,
                self.flux,
                self.trace,
            ))),
            Field::Grid(_) => Ok(LocalSolution::Grid(solve_local_numeric(self, n_cells)?)),
        }
    }
}

/// Exact surrogate solution for polynomial source: the unique polynomial with
/// `u'' = -s`, `u'(a-eps) = g_l`, `u(b+eps) = v_trace`.
pub fn solve_local_analytic(
    domain: &Domain1D,
    source: &Polynomial,
    flux: f64,
    trace: f64,
) -> Polynomial {
    let minus_s = source.scale(-1.0);
    let du = minus_s.antiderivative();
    let c1 = flux - du.eval(domain.lo());
    let du = du.add(&Polynomial::constant(c1));
    let u = du.antiderivative();
    let c0 = trace - u.eval(domain.hi());
    u.add(&Polynomial::constant(c0))
}

/// Second-order finite differences on a uniform auxiliary grid: central
/// stencil inside, a one-sided second-order flux row on the left (folded into
/// the first equation to keep the system tridiagonal), strong Dirichlet on
/// the right.
pub fn solve_local_numeric(prob: &LocalProblem, n_cells: usize) -> Result<GridFunction> {
    if n_cells < 4 {
        return Err(Error::TooFewCells { n_cells });
    }
    let lo = prob.domain.lo();
    let h = prob.domain.len() / n_cells as f64;
    let n = n_cells + 1;

    // tridiagonal rows: sub[i] u_{i-1} + diag[i] u_i + sup[i] u_{i+1} = rhs[i]
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];

    // flux row combined with the first interior row:
    //   u_1 - u_0 = h g_l - (h^2/2) s(x_1)
    diag[0] = -1.0;
    sup[0] = 1.0;
    rhs[0] = h * prob.flux - 0.5 * h * h * prob.source.eval(lo + h);

    for i in 1..n - 1 {
        sub[i] = -1.0;
        diag[i] = 2.0;
        sup[i] = -1.0;
        rhs[i] = h * h * prob.source.eval(lo + h * i as f64);
    }

    diag[n - 1] = 1.0;
    rhs[n - 1] = prob.trace;

    let values = thomas(&mut sub, &mut diag, &mut sup, &mut rhs)?;
    Ok(GridFunction::new(lo, h, values))
}

/// Thomas elimination; destroys its inputs.
fn thomas(sub: &mut [f64], diag: &mut [f64], sup: &mut [f64], rhs: &mut [f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    for i in 1..n {
        let pivot = diag[i - 1];
        if pivot.abs() < 1e-300 {
            return Err(Error::SingularSystem);
        }
        let m = sub[i] / pivot;
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if diag[n - 1].abs() < 1e-300 {
        return Err(Error::SingularSystem);
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    }
    Ok(x)
}
