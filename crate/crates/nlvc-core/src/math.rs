//! Float routines routed through `libm` so results are identical with and
//! without `std`.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Integer power by repeated multiplication; exponents stay small here.
#[inline]
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_std() {
        assert_eq!(powi(2.0, 10), 1024.0);
        assert_eq!(powi(0.25, 3), 0.015625);
        assert_eq!(powi(7.5, 0), 1.0);
    }

    #[test]
    fn log2_of_powers_of_two_is_exact() {
        assert_eq!(log2(0.25), -2.0);
        assert_eq!(log2(4096.0), 12.0);
    }
}
