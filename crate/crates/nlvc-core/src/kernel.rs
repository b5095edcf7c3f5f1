//! Interaction kernels with compact support of radius `epsilon`.
//!
//! The constant integrable family `gamma(x,y) = 3/eps^3` on `|x-y| < eps` is
//! normalized so that the nonlocal diffusion operator reproduces the second
//! derivative in the vanishing-horizon limit: its second moment is exactly 2,
//! and `L u = (M2/2) u'' + (M4/24) u'''' + ...` for smooth `u`.

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    ConstantIntegrable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub family: KernelFamily,
    pub epsilon: f64,
}

impl Kernel {
    pub fn constant(epsilon: f64) -> Kernel {
        assert!(epsilon > 0.0, "horizon must be positive");
        Kernel {
            family: KernelFamily::ConstantIntegrable,
            epsilon,
        }
    }

    /// Scale constant of the family; `3/eps^3` for the constant kernel.
    #[inline]
    pub fn strength(&self) -> f64 {
        match self.family {
            KernelFamily::ConstantIntegrable => 3.0 / math::powi(self.epsilon, 3),
        }
    }

    #[inline]
    pub fn gamma(&self, x: f64, y: f64) -> f64 {
        match self.family {
            KernelFamily::ConstantIntegrable => {
                if (x - y).abs() < self.epsilon {
                    self.strength()
                } else {
                    0.0
                }
            }
        }
    }

    /// Closed-form moment `M_k = int_{-eps}^{eps} s^k gamma(s) ds` over the
    /// full (untruncated) ball; available for k in {0, 2, 4}.
    pub fn moment(&self, order: u32) -> Result<f64> {
        let eps = self.epsilon;
        match (self.family, order) {
            (KernelFamily::ConstantIntegrable, 0) => Ok(6.0 / (eps * eps)),
            (KernelFamily::ConstantIntegrable, 2) => Ok(2.0),
            (KernelFamily::ConstantIntegrable, 4) => Ok(6.0 * eps * eps / 5.0),
            _ => Err(Error::UnsupportedOrder { order }),
        }
    }

    /// True when the kernel normalization yields the local Laplacian limit,
    /// i.e. the second moment equals 2 to within 1e-10 relative.
    pub fn local_limit_check(&self) -> bool {
        match self.moment(2) {
            Ok(m2) => (m2 - 2.0).abs() <= 1e-10 * 2.0,
            Err(_) => false,
        }
    }
}
