//! Scalar functions on the line: the operator and metric routines accept
//! anything evaluable, and query an optional kink lattice so integrals can be
//! split where piecewise-linear arguments lose smoothness.

use alloc::vec::Vec;

use crate::math;
use crate::poly::Polynomial;

/// Uniform lattice of potential kinks of a piecewise-linear function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breaks {
    pub lo: f64,
    pub h: f64,
    /// Number of lattice points (`lo, lo + h, ..., lo + (n-1) h`).
    pub n: usize,
}

impl Breaks {
    /// Pushes the lattice points strictly inside `(lo, hi)` onto `out`.
    pub fn collect_inside(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        if self.n == 0 {
            return;
        }
        let first = math::floor((lo - self.lo) / self.h) as isize + 1;
        let first = first.max(0) as usize;
        for i in first..self.n {
            let x = self.lo + self.h * i as f64;
            if x >= hi {
                break;
            }
            if x > lo {
                out.push(x);
            }
        }
    }
}

pub trait ScalarFunction {
    fn eval(&self, x: f64) -> f64;

    /// Kink lattice for quadrature subdivision; `None` for smooth functions.
    fn breaks(&self) -> Option<Breaks> {
        None
    }
}

impl<T: ScalarFunction + ?Sized> ScalarFunction for &T {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
    fn breaks(&self) -> Option<Breaks> {
        (**self).breaks()
    }
}

impl ScalarFunction for Polynomial {
    fn eval(&self, x: f64) -> f64 {
        Polynomial::eval(self, x)
    }
}

/// Adapter for closed-form samplers.
pub struct Sampler<F: Fn(f64) -> f64>(pub F);

impl<F: Fn(f64) -> f64> ScalarFunction for Sampler<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// Samples on a uniform grid with linear interpolation between them; the
/// return type of the auxiliary local solver, deliberately independent of the
/// nonlocal mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    lo: f64,
    h: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lo: f64, h: f64, values: Vec<f64>) -> GridFunction {
        assert!(h > 0.0 && values.len() >= 2, "need a real grid");
        GridFunction { lo, h, values }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.lo + self.h * (self.values.len() - 1) as f64
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl ScalarFunction for GridFunction {
    fn eval(&self, x: f64) -> f64 {
        let n_cells = self.values.len() - 1;
        let t = (x - self.lo) / self.h;
        let cell = (math::floor(t) as isize).clamp(0, n_cells as isize - 1) as usize;
        let frac = t - cell as f64;
        self.values[cell] * (1.0 - frac) + self.values[cell + 1] * frac
    }

    fn breaks(&self) -> Option<Breaks> {
        Some(Breaks {
            lo: self.lo,
            h: self.h,
            n: self.values.len(),
        })
    }
}

/// Problem-data function: either an exact polynomial (analytic paths apply)
/// or gridded samples (numeric paths apply).
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Poly(Polynomial),
    Grid(GridFunction),
}

impl Field {
    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            Field::Poly(p) => Some(p),
            Field::Grid(_) => None,
        }
    }
}

impl ScalarFunction for Field {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Field::Poly(p) => p.eval(x),
            Field::Grid(g) => g.eval(x),
        }
    }

    fn breaks(&self) -> Option<Breaks> {
        match self {
            Field::Poly(_) => None,
            Field::Grid(g) => g.breaks(),
        }
    }
}

impl From<Polynomial> for Field {
    fn from(p: Polynomial) -> Field {
        Field::Poly(p)
    }
}

impl From<GridFunction> for Field {
    fn from(g: GridFunction) -> Field {
        Field::Grid(g)
    }
}
