//! 1D geometry: the open domain, its two interaction layers, and uniform
//! meshes over the closure.
//!
//! Layout on the line, with horizon `eps`:
//!
//! ```text
//!   a-eps        a                     b        b+eps
//!     |-- Omega_N --|------ Omega ------|-- Omega_D --|
//!   Gamma_N                                        Gamma_D
//! ```
//!
//! The Neumann layer carries converted flux data, the Dirichlet layer carries
//! volumetric Dirichlet data. Meshes are uniform and horizon-aligned
//! (`eps/h` integer), so kernel support edges always coincide with element
//! boundaries and piecewise Gauss quadrature of kernel integrals is exact.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Relative tolerance for the grid-alignment checks in [`build_mesh`].
const ALIGN_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain1D {
    pub a: f64,
    pub b: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Closed interval `[a, b]`; nodes at both ends are free unknowns.
    Interior,
    /// `[a-eps, a)`; the leftmost point belongs to the layer.
    NeumannLayer,
    /// `(b, b+eps]`; the rightmost point belongs to the layer.
    DirichletLayer,
    Outside,
}

/// Builds the domain of Fig.-3 type: `Omega = (a, b)` with an interaction
/// layer of thickness `epsilon` on each side.
pub fn build_domain(a: f64, b: f64, epsilon: f64) -> Result<Domain1D> {
    if !(b > a) || !(epsilon > 0.0) || !(epsilon < (b - a) / 2.0) {
        return Err(Error::InvalidGeometry { a, b, epsilon });
    }
    Ok(Domain1D { a, b, epsilon })
}

impl Domain1D {
    /// Left end of the closure, `a - eps` (the surface point Gamma_N).
    #[inline]
    pub fn lo(&self) -> f64 {
        self.a - self.epsilon
    }

    /// Right end of the closure, `b + eps` (the surface point Gamma_D).
    #[inline]
    pub fn hi(&self) -> f64 {
        self.b + self.epsilon
    }

    /// Total length of the closure, `b - a + 2 eps`.
    #[inline]
    pub fn len(&self) -> f64 {
        self.hi() - self.lo()
    }

    pub fn classify(&self, x: f64) -> Region {
        self.classify_with_tol(x, 0.0)
    }

    /// Region of `x` with boundary comparisons softened by `tol` (used for
    /// mesh nodes whose coordinates carry rounding).
    pub fn classify_with_tol(&self, x: f64, tol: f64) -> Region {
        if x < self.lo() - tol || x > self.hi() + tol {
            Region::Outside
        } else if x < self.a - tol {
            Region::NeumannLayer
        } else if x <= self.b + tol {
            Region::Interior
        } else {
            Region::DirichletLayer
        }
    }
}

/// Region of `x` relative to `domain` (exact comparisons).
pub fn classify(domain: &Domain1D, x: f64) -> Region {
    domain.classify(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    pub domain: Domain1D,
    pub h: f64,
    nodes: Vec<f64>,
    regions: Vec<Region>,
    /// Horizon in cells, `eps/h`.
    horizon_cells: usize,
    /// Interior in cells, `(b-a)/h`.
    interior_cells: usize,
}

/// Uniform mesh over the domain closure. Requires `eps/h` and `(b-a)/h` to be
/// integers so that kernel support edges land on element boundaries.
pub fn build_mesh(domain: &Domain1D, h: f64) -> Result<Mesh1D> {
    if !(h > 0.0) {
        return Err(Error::MisalignedDomain {
            length: domain.b - domain.a,
            h,
        });
    }
    let k = as_integer(domain.epsilon / h).ok_or(Error::MisalignedHorizon {
        epsilon: domain.epsilon,
        h,
    })?;
    let m = as_integer((domain.b - domain.a) / h).ok_or(Error::MisalignedDomain {
        length: domain.b - domain.a,
        h,
    })?;
    let n_nodes = m + 2 * k + 1;
    let lo = domain.lo();
    let tol = h * 1e-9;
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut regions = Vec::with_capacity(n_nodes);
    for i in 0..n_nodes {
        let x = lo + h * i as f64;
        nodes.push(x);
        regions.push(domain.classify_with_tol(x, tol));
    }
    Ok(Mesh1D {
        domain: *domain,
        h,
        nodes,
        regions,
        horizon_cells: k,
        interior_cells: m,
    })
}

fn as_integer(ratio: f64) -> Option<usize> {
    let r = math::round(ratio);
    if r >= 1.0 && (ratio - r).abs() <= ALIGN_RTOL * ratio.max(1.0) {
        Some(r as usize)
    } else {
        None
    }
}

impl Mesh1D {
    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `eps/h`: number of cells (and of layer nodes) per interaction layer.
    #[inline]
    pub fn horizon_cells(&self) -> usize {
        self.horizon_cells
    }

    /// `(b-a)/h`: number of cells across the interior.
    #[inline]
    pub fn interior_cells(&self) -> usize {
        self.interior_cells
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn region_of_node(&self, i: usize) -> Region {
        self.regions[i]
    }

    #[inline]
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Left edge of element `e` (spanning `[node(e), node(e+1)]`).
    #[inline]
    pub fn element_lo(&self, e: usize) -> f64 {
        self.nodes[e]
    }

    /// Region of element `e`, decided at its midpoint.
    pub fn element_region(&self, e: usize) -> Region {
        let mid = self.nodes[e] + 0.5 * self.h;
        self.domain.classify_with_tol(mid, self.h * 1e-9)
    }

    /// Element index containing `x`, clamped to the mesh.
    #[inline]
    pub fn element_of(&self, x: f64) -> usize {
        let t = (x - self.domain.lo()) / self.h;
        let i = math::floor(t) as isize;
        i.clamp(0, self.n_elements() as isize - 1) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_layout_quarter_horizon() {
        let d = build_domain(0.0, 1.0, 0.25).unwrap();
        assert_eq!(d.lo(), -0.25);
        assert_eq!(d.hi(), 1.25);
        assert_eq!(d.classify(0.5), Region::Interior);
        assert_eq!(d.classify(-0.1), Region::NeumannLayer);
        assert_eq!(d.classify(1.0), Region::Interior);
        assert_eq!(d.classify(0.0), Region::Interior);
        assert_eq!(d.classify(-0.25), Region::NeumannLayer);
        assert_eq!(d.classify(1.25), Region::DirichletLayer);
        assert_eq!(d.classify(1.2500001), Region::Outside);
        assert_eq!(d.classify(-0.2500001), Region::Outside);
    }

    #[test]
    fn domain_rejects_bad_geometry() {
        assert!(matches!(
            build_domain(0.0, 1.0, 0.5),
            Err(Error::InvalidGeometry { .. })
        ));
        assert!(matches!(
            build_domain(1.0, 0.0, 0.1),
            Err(Error::InvalidGeometry { .. })
        ));
        assert!(matches!(
            build_domain(0.0, 1.0, 0.0),
            Err(Error::InvalidGeometry { .. })
        ));
    }

    #[test]
    fn shifted_domain_layout() {
        let d = build_domain(-1.0, 1.0, 0.125).unwrap();
        assert_eq!(d.lo(), -1.125);
        assert_eq!(d.hi(), 1.125);
        assert_eq!(d.classify(-1.06), Region::NeumannLayer);
    }

    #[test]
    fn mesh_node_counts() {
        let d = build_domain(0.0, 1.0, 0.25).unwrap();
        let m = build_mesh(&d, 0.25).unwrap();
        assert_eq!(m.n_nodes(), 7);
        assert_eq!(m.node(0), -0.25);
        assert_eq!(m.node(6), 1.25);

        let d = build_domain(0.0, 1.0, 0.25).unwrap();
        let m = build_mesh(&d, f64::powi(2.0, -12)).unwrap();
        assert_eq!(m.n_nodes(), 6145);
        // uniform spacing to within a ulp
        for i in 0..m.n_nodes() - 1 {
            assert!((m.node(i + 1) - m.node(i) - m.h).abs() <= 1e-15 * m.h.max(1.0));
        }
    }

    #[test]
    fn mesh_rejects_misalignment() {
        let d = build_domain(0.0, 1.0, 0.25).unwrap();
        assert!(matches!(
            build_mesh(&d, 0.3),
            Err(Error::MisalignedHorizon { .. })
        ));
        let d = build_domain(0.0, 1.1, 0.25).unwrap();
        assert!(matches!(
            build_mesh(&d, 0.25),
            Err(Error::MisalignedDomain { .. })
        ));
    }

    #[test]
    fn node_regions_and_counts() {
        let d = build_domain(0.0, 1.0, 0.25).unwrap();
        let m = build_mesh(&d, 0.0625).unwrap();
        let k = m.horizon_cells();
        assert_eq!(k, 4);
        let n_neumann = m
            .regions()
            .iter()
            .filter(|r| **r == Region::NeumannLayer)
            .count();
        let n_dirichlet = m
            .regions()
            .iter()
            .filter(|r| **r == Region::DirichletLayer)
            .count();
        assert_eq!(n_neumann, k);
        assert_eq!(n_dirichlet, k);
        // classify agrees with stored labels
        for i in 0..m.n_nodes() {
            assert_eq!(
                m.domain.classify_with_tol(m.node(i), m.h * 1e-9),
                m.region_of_node(i)
            );
        }
    }

    #[test]
    fn mesh_is_mirror_symmetric_up_to_region_swap() {
        let d = build_domain(0.0, 1.0, 0.125).unwrap();
        let m = build_mesh(&d, 0.03125).unwrap();
        let n = m.n_nodes();
        for i in 0..n {
            let j = n - 1 - i;
            assert!((m.node(i) - (d.a + d.b - m.node(j))).abs() < 1e-12);
            let swapped = match m.region_of_node(j) {
                Region::NeumannLayer => Region::DirichletLayer,
                Region::DirichletLayer => Region::NeumannLayer,
                r => r,
            };
            assert_eq!(m.region_of_node(i), swapped);
        }
    }
}
