//! Piecewise-linear finite elements for the volume-constrained nonlocal
//! problem: stiffness assembly from the bilinear form
//!
//! ```text
//!   a(u, z) = (1/2) iint (u(x)-u(y)) (z(x)-z(y)) gamma(x,y) dy dx
//! ```
//!
//! over the squared domain closure, load vectors from the interior source and
//! the layer force, Dirichlet elimination by lifting, and a banded direct
//! solve.
//!
//! On a uniform horizon-aligned mesh the element-pair integrals depend only
//! on the pair offset, so assembly computes one local matrix per offset and
//! scatters it along the diagonals; the straddling offsets `+-eps/h` are the
//! only ones whose inner integral needs a cut at the kernel support edge.

use alloc::vec;
use alloc::vec::Vec;

use crate::band::SymBandMatrix;
use crate::domain::{Mesh1D, Region};
use crate::error::{Error, Result};
use crate::function::{Breaks, ScalarFunction};
use crate::kernel::Kernel;
use crate::math;
use crate::quad::QuadratureSpec;

/// Piecewise-linear function given by one value per mesh node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    mesh: Mesh1D,
    values: Vec<f64>,
}

impl NodalField {
    pub fn new(mesh: Mesh1D, values: Vec<f64>) -> NodalField {
        assert_eq!(values.len(), mesh.n_nodes(), "one value per node");
        NodalField { mesh, values }
    }

    /// Nodal interpolant of `f` (the projection of data onto the trial
    /// space).
    pub fn interpolate(mesh: &Mesh1D, f: &dyn ScalarFunction) -> NodalField {
        let values = mesh.nodes().iter().map(|&x| f.eval(x)).collect();
        NodalField {
            mesh: mesh.clone(),
            values,
        }
    }

    #[inline]
    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Exact integral of the interpolant over `[lo, hi]` (clipped to the
    /// mesh): trapezoids on full elements plus partial end pieces.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let mesh = &self.mesh;
        let lo = lo.max(mesh.domain.lo());
        let hi = hi.min(mesh.domain.hi());
        if hi <= lo {
            return 0.0;
        }
        let e0 = mesh.element_of(lo);
        let e1 = mesh.element_of(hi - 1e-14 * mesh.h);
        let mut acc = 0.0;
        for e in e0..=e1 {
            let y0 = lo.max(mesh.element_lo(e));
            let y1 = hi.min(mesh.element_lo(e) + mesh.h);
            if y1 > y0 {
                acc += 0.5 * (self.eval_in(e, y0) + self.eval_in(e, y1)) * (y1 - y0);
            }
        }
        acc
    }

    #[inline]
    fn eval_in(&self, e: usize, x: f64) -> f64 {
        let t = (x - self.mesh.element_lo(e)) / self.mesh.h;
        self.values[e] * (1.0 - t) + self.values[e + 1] * t
    }
}

impl ScalarFunction for NodalField {
    fn eval(&self, x: f64) -> f64 {
        let mesh = &self.mesh;
        assert!(
            x >= mesh.domain.lo() - 1e-6 * mesh.h && x <= mesh.domain.hi() + 1e-6 * mesh.h,
            "evaluation at {x} outside the mesh"
        );
        let e = mesh.element_of(x);
        self.eval_in(e, x)
    }

    fn breaks(&self) -> Option<Breaks> {
        Some(Breaks {
            lo: self.mesh.domain.lo(),
            h: self.mesh.h,
            n: self.mesh.n_nodes(),
        })
    }
}

/// Reduced linear system after constraint elimination. Free nodes form the
/// contiguous index range `free`, so the reduced matrix keeps its band.
#[derive(Debug, Clone)]
pub struct NonlocalSystem {
    pub matrix: SymBandMatrix,
    pub rhs: Vec<f64>,
    pub free: core::ops::Range<usize>,
    pub constrained: Vec<(usize, f64)>,
    pub n_total: usize,
}

/// Hat value of the node at relative offset `r` (node coordinate `r * h`).
#[inline]
fn hat(t: f64, r: f64, h: f64) -> f64 {
    (1.0 - (t - r * h).abs() / h).max(0.0)
}

/// Stiffness matrix of the bilinear form on the full node set.
pub fn assemble_stiffness(
    mesh: &Mesh1D,
    kernel: &Kernel,
    q: &QuadratureSpec,
) -> Result<SymBandMatrix> {
    let h = mesh.h;
    let k_cells = mesh.horizon_cells() as isize;
    let ratio = kernel.epsilon / h;
    if (ratio - math::round(ratio)).abs() > 1e-12 * ratio.max(1.0)
        || math::round(ratio) as isize != k_cells
    {
        return Err(Error::MisalignedHorizon {
            epsilon: kernel.epsilon,
            h,
        });
    }

    let n = mesh.n_nodes();
    let n_el = mesh.n_elements() as isize;
    let rule = q.rule();
    let mut matrix = SymBandMatrix::zeros(n, k_cells as usize + 1);

    for d in -k_cells..=k_cells {
        // distinct node offsets touched by the reference pair (element 0 and
        // element d)
        let mut rel: Vec<isize> = vec![0, 1, d, d + 1];
        rel.sort_unstable();
        rel.dedup();

        // local interaction matrix on the reference pair
        let mut loc = vec![vec![0.0; rel.len()]; rel.len()];
        let mut v = vec![0.0; rel.len()];
        for (x, wx) in rule.points_on(0.0, h) {
            let (y0, y1) = if d == k_cells {
                (d as f64 * h, x + kernel.epsilon)
            } else if d == -k_cells {
                (x - kernel.epsilon, (d + 1) as f64 * h)
            } else {
                (d as f64 * h, (d + 1) as f64 * h)
            };
            for (y, wy) in rule.points_on(y0, y1) {
                let g = kernel.gamma(x, y);
                if g == 0.0 {
                    continue;
                }
                for (slot, &r) in rel.iter().enumerate() {
                    v[slot] = hat(x, r as f64, h) - hat(y, r as f64, h);
                }
                let w = 0.5 * wx * wy * g;
                for a in 0..rel.len() {
                    let va = w * v[a];
                    for b in 0..rel.len() {
                        loc[a][b] += va * v[b];
                    }
                }
            }
        }

        // scatter along the diagonals: every admissible pair position adds
        // the same local value
        let e_lo = 0.max(-d);
        let e_hi = n_el - 1 - 0.max(d);
        if e_hi < e_lo {
            continue;
        }
        let count = (e_hi - e_lo + 1) as usize;
        for (a, &ra) in rel.iter().enumerate() {
            for (b, &rb) in rel.iter().enumerate() {
                if rb < ra {
                    continue;
                }
                let diag = (rb - ra) as usize;
                let value = loc[a][b];
                let i0 = (e_lo + ra) as usize;
                let run = &mut matrix.diag_mut(diag)[i0..i0 + count];
                for slot in run {
                    *slot += value;
                }
            }
        }
    }
    Ok(matrix)
}

/// Load vector: interior source against the hats plus, when present, the
/// layer force against the hats over the flux layer. Hats that do not touch
/// a region receive nothing from its term.
pub fn assemble_load(
    mesh: &Mesh1D,
    source: &dyn ScalarFunction,
    layer_force: Option<&dyn ScalarFunction>,
    q: &QuadratureSpec,
) -> Vec<f64> {
    let rule = q.rule();
    let h = mesh.h;
    let mut rhs = vec![0.0; mesh.n_nodes()];
    for e in 0..mesh.n_elements() {
        let f: &dyn ScalarFunction = match mesh.element_region(e) {
            Region::Interior => source,
            Region::NeumannLayer => match layer_force {
                Some(g) => g,
                None => continue,
            },
            _ => continue,
        };
        let x0 = mesh.element_lo(e);
        for (x, w) in rule.points_on(x0, x0 + h) {
            let t = (x - x0) / h;
            let fv = w * f.eval(x);
            rhs[e] += fv * (1.0 - t);
            rhs[e + 1] += fv * t;
        }
    }
    rhs
}

/// Eliminates constrained nodes by lifting. The constrained set must form
/// leading and/or trailing runs of the node list; the spacing-contiguous free
/// middle keeps the reduced matrix banded.
pub fn apply_dirichlet(
    matrix: &SymBandMatrix,
    rhs: &[f64],
    mesh: &Mesh1D,
    constraints: &[(usize, f64)],
) -> Result<NonlocalSystem> {
    let n = mesh.n_nodes();
    assert_eq!(rhs.len(), n);
    let mut sorted = constraints.to_vec();
    sorted.sort_unstable_by_key(|(i, _)| *i);
    for pair in sorted.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::InvalidConstraints);
        }
    }

    // split into a leading run [0, p) and a trailing run [s, n)
    let mut p = 0;
    for (idx, (node, _)) in sorted.iter().enumerate() {
        if *node == idx {
            p = idx + 1;
        } else {
            break;
        }
    }
    let mut s = n;
    for (back, (node, _)) in sorted.iter().rev().enumerate() {
        if *node == n - 1 - back && *node >= p {
            s = *node;
        } else {
            break;
        }
    }
    if p + (n - s) != sorted.len() {
        return Err(Error::InvalidConstraints);
    }
    if p >= s {
        return Err(Error::EmptyFreeSet);
    }

    let mut full = vec![0.0; n];
    for &(i, v) in &sorted {
        full[i] = v;
    }
    let lift = matrix.matvec(&full);
    let reduced_rhs: Vec<f64> = (p..s).map(|i| rhs[i] - lift[i]).collect();
    Ok(NonlocalSystem {
        matrix: matrix.principal_block(p, s),
        rhs: reduced_rhs,
        free: p..s,
        constrained: sorted,
        n_total: n,
    })
}

/// Direct banded solve; returns the full-length nodal vector with the
/// constrained values re-inserted. The relative residual of the reduced
/// system is asserted below 1e-10.
pub fn solve(system: &NonlocalSystem) -> Result<Vec<f64>> {
    let chol = system.matrix.cholesky()?;
    let u_free = chol.solve(&system.rhs);

    let residual = system.matrix.matvec(&u_free);
    let mut res_inf = 0.0f64;
    let mut rhs_inf = 0.0f64;
    let mut u_inf = 0.0f64;
    for i in 0..u_free.len() {
        res_inf = res_inf.max((residual[i] - system.rhs[i]).abs());
        rhs_inf = rhs_inf.max(system.rhs[i].abs());
        u_inf = u_inf.max(u_free[i].abs());
    }
    let scale = rhs_inf.max(system.matrix.max_abs() * u_inf);
    assert!(
        res_inf <= 1e-10 * scale.max(f64::MIN_POSITIVE),
        "solver residual {res_inf} exceeds 1e-10 * {scale}"
    );

    let mut full = vec![0.0; system.n_total];
    for &(i, v) in &system.constrained {
        full[i] = v;
    }
    for (offset, v) in u_free.into_iter().enumerate() {
        full[system.free.start + offset] = v;
    }
    Ok(full)
}
