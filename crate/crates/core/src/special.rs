//! Gamma function wrappers over the `libm` ports of musl's `tgamma` and
//! `lgamma`, which stay within a few ulp on the positive axis.

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}
