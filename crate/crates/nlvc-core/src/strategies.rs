//! The two conversion pipelines from surface flux data to volume constraints.
//!
//! Both start from the same surrogate local solve. The Neumann route turns
//! the surrogate solution into a body force on the flux layer through the
//! interaction operator and keeps the layer nodes free; the Dirichlet route
//! pins the surrogate values on the layer directly.
//!
//! Constraints are imposed on the **closed** layers: the Dirichlet block is
//! `[b, b+eps]` and, for the Dirichlet route, the flux-layer block is
//! `[a-eps, a]`. Every free hat is then supported where its weak equation
//! holds, which is what makes the linear consistency case exact to machine
//! precision. The layer force is evaluated from the nodal projection of the
//! surrogate solution, so the force the discrete system sees is exactly the
//! interaction operator applied to a member of the trial space.

use alloc::vec::Vec;

use crate::domain::{Domain1D, Mesh1D};
use crate::error::Result;
use crate::fem::{self, NodalField};
use crate::function::{Field, ScalarFunction};
use crate::kernel::Kernel;
use crate::local::{LocalProblem, LocalSolution};
use crate::quad::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Neumann,
    Dirichlet,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Neumann => "neumann",
            Strategy::Dirichlet => "dirichlet",
        }
    }
}

/// Default resolution of the auxiliary local grid when the source is not
/// polynomial.
pub const DEFAULT_LOCAL_CELLS: usize = 16_384;

/// Everything one conversion run needs: geometry, kernel, mesh, and the three
/// available data items (interior source, surface flux, volumetric Dirichlet
/// datum with its trace).
#[derive(Debug, Clone)]
pub struct ConversionProblem {
    pub domain: Domain1D,
    pub kernel: Kernel,
    pub mesh: Mesh1D,
    pub source: Field,
    /// Surface flux datum `g_l` at the left end of the closure.
    pub flux: f64,
    /// Volumetric Dirichlet datum on the right layer.
    pub volume_data: Field,
    /// Trace of the volumetric datum at the right surface point.
    pub trace: f64,
    pub quad: QuadratureSpec,
    pub local_cells: usize,
}

impl ConversionProblem {
    /// The trace is taken from the volumetric datum itself, keeping the two
    /// mutually consistent.
    pub fn new(
        domain: Domain1D,
        kernel: Kernel,
        mesh: Mesh1D,
        source: Field,
        flux: f64,
        volume_data: Field,
        quad: QuadratureSpec,
    ) -> ConversionProblem {
        let trace = volume_data.eval(domain.hi());
        ConversionProblem {
            domain,
            kernel,
            mesh,
            source,
            flux,
            volume_data,
            trace,
            quad,
            local_cells: DEFAULT_LOCAL_CELLS,
        }
    }

    fn local_problem(&self) -> LocalProblem {
        LocalProblem {
            domain: self.domain,
            source: self.source.clone(),
            flux: self.flux,
            trace: self.trace,
        }
    }

    /// Solves the surrogate local problem this conversion starts from.
    pub fn surrogate(&self) -> Result<LocalSolution> {
        self.local_problem().solve(self.local_cells)
    }

    /// Node/value pairs for the closed right layer `[b, b+eps]`.
    fn dirichlet_constraints(&self) -> Vec<(usize, f64)> {
        let n = self.mesh.n_nodes();
        let k = self.mesh.horizon_cells();
        (n - k - 1..n)
            .map(|i| (i, self.volume_data.eval(self.mesh.node(i))))
            .collect()
    }

    /// Node/value pairs for the closed left layer `[a-eps, a]` carrying the
    /// surrogate solution (Dirichlet route only).
    fn flux_layer_constraints(&self, u_l: &LocalSolution) -> Vec<(usize, f64)> {
        let k = self.mesh.horizon_cells();
        (0..=k)
            .map(|i| (i, u_l.eval(self.mesh.node(i))))
            .collect()
    }
}

/// Outcome of one conversion run.
#[derive(Debug, Clone)]
pub struct StrategyResult {
    /// Discrete nonlocal solution.
    pub solution: NodalField,
    /// Surrogate local solution the conversion was built from.
    pub local_solution: LocalSolution,
    /// Layer force sampled at the load-assembly quadrature points
    /// (Neumann route only): `(x, g~(x))`.
    pub layer_force: Option<Vec<(f64, f64)>>,
}

/// Interaction operator applied to the nodal projection of the surrogate
/// solution; exact for the piecewise-linear argument, evaluated lazily at
/// whatever points the load assembly asks for.
pub struct LayerForce<'a> {
    projected: &'a NodalField,
    epsilon: f64,
    strength: f64,
    lo: f64,
    hi: f64,
}

impl<'a> LayerForce<'a> {
    pub fn new(projected: &'a NodalField, kernel: &Kernel, domain: &Domain1D) -> LayerForce<'a> {
        LayerForce {
            projected,
            epsilon: kernel.epsilon,
            strength: kernel.strength(),
            lo: domain.lo(),
            hi: domain.hi(),
        }
    }
}

impl ScalarFunction for LayerForce<'_> {
    fn eval(&self, x: f64) -> f64 {
        let w0 = self.lo.max(x - self.epsilon);
        let w1 = self.hi.min(x + self.epsilon);
        let vx = self.projected.eval(x);
        self.strength * (vx * (w1 - w0) - self.projected.integrate(w0, w1))
    }
}

/// Flux-to-force route: surrogate solve, interaction operator on the
/// projected surrogate as layer force, nonlocal solve with the layer free.
pub fn neumann_strategy(problem: &ConversionProblem) -> Result<StrategyResult> {
    let u_l = problem.local_problem().solve(problem.local_cells)?;
    let projected = NodalField::interpolate(&problem.mesh, &u_l);
    let force = LayerForce::new(&projected, &problem.kernel, &problem.domain);

    let matrix = fem::assemble_stiffness(&problem.mesh, &problem.kernel, &problem.quad)?;
    let rhs = fem::assemble_load(&problem.mesh, &problem.source, Some(&force), &problem.quad);
    let constraints = problem.dirichlet_constraints();
    let system = fem::apply_dirichlet(&matrix, &rhs, &problem.mesh, &constraints)?;
    let values = fem::solve(&system)?;

    // record the force where the load assembly sampled it
    let rule = problem.quad.rule();
    let k = problem.mesh.horizon_cells();
    let mut samples = Vec::with_capacity(k * problem.quad.points);
    for e in 0..k {
        let x0 = problem.mesh.element_lo(e);
        for (x, _) in rule.points_on(x0, x0 + problem.mesh.h) {
            samples.push((x, force.eval(x)));
        }
    }

    Ok(StrategyResult {
        solution: NodalField::new(problem.mesh.clone(), values),
        local_solution: u_l,
        layer_force: Some(samples),
    })
}

/// Direct route: surrogate solve, surrogate values pinned on the closed flux
/// layer, nonlocal solve on the interior unknowns.
pub fn dirichlet_strategy(problem: &ConversionProblem) -> Result<StrategyResult> {
    let u_l = problem.local_problem().solve(problem.local_cells)?;

    let matrix = fem::assemble_stiffness(&problem.mesh, &problem.kernel, &problem.quad)?;
    let rhs = fem::assemble_load(&problem.mesh, &problem.source, None, &problem.quad);
    let mut constraints = problem.flux_layer_constraints(&u_l);
    constraints.extend(problem.dirichlet_constraints());
    let system = fem::apply_dirichlet(&matrix, &rhs, &problem.mesh, &constraints)?;
    let values = fem::solve(&system)?;

    Ok(StrategyResult {
        solution: NodalField::new(problem.mesh.clone(), values),
        local_solution: u_l,
        layer_force: None,
    })
}

pub fn run(strategy: Strategy, problem: &ConversionProblem) -> Result<StrategyResult> {
    match strategy {
        Strategy::Neumann => neumann_strategy(problem),
        Strategy::Dirichlet => dirichlet_strategy(problem),
    }
}
