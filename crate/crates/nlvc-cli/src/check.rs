//! Runtime property suite: operator identities, kernel normalization and
//! matrix structure, printed one line per property. Returns whether
//! everything held.

use nlvc_core::domain::{build_domain, build_mesh};
use nlvc_core::fem;
use nlvc_core::ops;
use nlvc_core::poly::Polynomial;
use nlvc_core::quad::QuadratureSpec;
use nlvc_core::strategies::{self, ConversionProblem, Strategy};
use nlvc_core::{Field, Kernel};

struct Reporter {
    failures: usize,
}

impl Reporter {
    fn report(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("check {name}: PASS");
        } else {
            self.failures += 1;
            println!("check {name}: FAIL ({detail})");
        }
    }
}

/// Deterministic uniform stream in [-2, 2).
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
    }
}

pub fn run() -> bool {
    let mut r = Reporter { failures: 0 };
    let q = QuadratureSpec::default();

    // kernel normalization and moments
    let mut worst = 0.0f64;
    for k in 2..=5 {
        let eps = 2f64.powi(-k);
        let kernel = Kernel::constant(eps);
        if !kernel.local_limit_check() {
            worst = f64::INFINITY;
        }
        let rule = q.rule();
        for (order, expect) in [
            (0u32, 6.0 / (eps * eps)),
            (2, 2.0),
            (4, 6.0 * eps * eps / 5.0),
        ] {
            let num = rule.integrate(-eps, 0.0, |s| s.powi(order as i32) * kernel.gamma(0.0, s))
                + rule.integrate(0.0, eps, |s| s.powi(order as i32) * kernel.gamma(0.0, s));
            worst = worst.max((num - expect).abs() / expect);
        }
    }
    r.report(
        "kernel moments vs quadrature",
        worst <= 1e-10,
        format!("worst relative deviation {worst:.3e}"),
    );

    // nonlocal Gauss theorem on seeded random quintics
    let mut rng = Lcg(0x5eed5eed5eed5eed);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let coeffs: Vec<f64> = (0..6).map(|_| rng.next()).collect();
        let p = Polynomial::new(&coeffs);
        let eps = [0.25, 0.125, 0.0625][trial % 3];
        let domain = build_domain(0.0, 1.0, eps).unwrap();
        let kernel = Kernel::constant(eps);
        let (lhs, rhs) = ops::gauss_check(&p, &kernel, &domain, &q).unwrap();
        worst = worst.max((lhs - rhs).abs() / (lhs.abs().max(rhs.abs()) + 1e-12));
    }
    r.report(
        "nonlocal Gauss theorem",
        worst <= 1e-7,
        format!("worst relative imbalance {worst:.3e}"),
    );

    // operator consistency through cubic data
    let mut worst = 0.0f64;
    for k in 2..=5 {
        let eps = 2f64.powi(-k);
        let domain = build_domain(0.0, 1.0, eps).unwrap();
        let kernel = Kernel::constant(eps);
        let p = Polynomial::new(&[0.7, -1.5, 2.0, 0.5]);
        for x in [0.1, 0.5, 0.9] {
            let l = p.apply_l_truncated(&kernel, &domain, x).unwrap();
            let upp = p.derivative(2).eval(x);
            worst = worst.max((l - upp).abs() / upp.abs().max(1.0));
        }
    }
    r.report(
        "cubic operator consistency",
        worst <= 1e-9,
        format!("worst relative deviation {worst:.3e}"),
    );

    // quartic-tail remainder scaling for the quintic
    let mut worst = 0.0f64;
    for k in 2..=5 {
        let eps = 2f64.powi(-k);
        let domain = build_domain(0.0, 1.0, eps).unwrap();
        let kernel = Kernel::constant(eps);
        let u = Polynomial::monomial(5);
        for x in [0.25, 0.5, 0.75] {
            let rem = ops::taylor_remainder(&u, &kernel, &domain, x).unwrap();
            let expect = eps * eps * u.derivative(4).eval(x) / 20.0;
            worst = worst.max((rem - expect).abs() / (eps * eps));
        }
    }
    r.report(
        "nonlocal-to-local remainder scaling",
        worst <= 1e-8,
        format!("worst deviation {worst:.3e} (scaled by eps^2)"),
    );

    // matrix structure on a representative mesh
    let eps = 0.125;
    let domain = build_domain(0.0, 1.0, eps).unwrap();
    let mesh = build_mesh(&domain, 2f64.powi(-6)).unwrap();
    let kernel = Kernel::constant(eps);
    let a = fem::assemble_stiffness(&mesh, &kernel, &q).unwrap();
    let scale = a.max_abs();
    let row_worst = a
        .row_sums()
        .iter()
        .fold(0.0f64, |acc, s| acc.max(s.abs()));
    r.report(
        "stiffness row sums (constants in kernel)",
        row_worst <= 1e-10 * scale,
        format!("worst row sum {row_worst:.3e} against scale {scale:.3e}"),
    );
    let mut sym = 0.0f64;
    for i in 0..a.n() {
        for j in i..(i + a.half_bandwidth() + 1).min(a.n()) {
            sym = sym.max((a.at(i, j) - a.at(j, i)).abs());
        }
    }
    r.report(
        "stiffness symmetry",
        sym <= 1e-12 * scale,
        format!("worst asymmetry {sym:.3e}"),
    );
    let n = mesh.n_nodes();
    let k = mesh.horizon_cells();
    let constraints: Vec<(usize, f64)> = (n - k - 1..n).map(|i| (i, 0.0)).collect();
    let sys = fem::apply_dirichlet(&a, &vec![0.0; n], &mesh, &constraints).unwrap();
    match sys.matrix.cholesky() {
        Ok(f) => r.report(
            "constrained operator coercivity",
            f.min_pivot() > 0.0,
            format!("min pivot {:.3e}", f.min_pivot()),
        ),
        Err(e) => r.report("constrained operator coercivity", false, format!("{e}")),
    }

    // end-to-end consistency: linear data reproduced to machine precision
    let eps = 0.25;
    let domain = build_domain(0.0, 1.0, eps).unwrap();
    let mesh = build_mesh(&domain, 2f64.powi(-6)).unwrap();
    let mut worst = 0.0f64;
    for strategy in [Strategy::Neumann, Strategy::Dirichlet] {
        let problem = ConversionProblem::new(
            domain,
            Kernel::constant(eps),
            mesh.clone(),
            Field::Poly(Polynomial::zero()),
            1.0,
            Field::Poly(Polynomial::monomial(1)),
            q,
        );
        let sol = strategies::run(strategy, &problem).unwrap();
        for (i, v) in sol.solution.values().iter().enumerate() {
            worst = worst.max((v - mesh.node(i)).abs());
        }
    }
    r.report(
        "linear data reproduced exactly",
        worst <= 1e-10,
        format!("worst nodal error {worst:.3e}"),
    );

    if r.failures == 0 {
        println!("check: all properties hold");
        true
    } else {
        println!("check: {} propert(ies) failed", r.failures);
        false
    }
}
