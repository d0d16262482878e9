use crate::error::{Error, Result};
use crate::special::{gamma, ln_gamma};

const MAX_TERMS: usize = 10_000;
/// Relative accuracy the alternating series must still be able to deliver.
const TARGET: f64 = 1e-10;

/// One-parameter Mittag-Leffler function `E_β(z) = Σ_k z^k / Γ(1 + kβ)`
/// for real `z`, by direct summation.
///
/// Terms are evaluated directly while `Γ(1 + kβ)` is finite and in log
/// space beyond; summation stops once a term falls below `1e-17` of the
/// partial sum. Returns an error when the sum overflows, or when `z < 0` and
/// a running bound on the rounding error of the terms exceeds `1e-10` of
/// the result (cancellation).
pub fn mittag_leffler(beta: f64, z: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::invalid("beta", format!("must be positive, got {beta}")));
    }
    if !z.is_finite() {
        return Err(Error::invalid("z", "must be finite"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let log_abs = z.abs().ln();
    let negative = z < 0.0;
    let mut sum = 1.0;
    // running bound on the accumulated rounding error, in units of ε
    let mut error_bound = 1.0;
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        let arg = 1.0 + kf * beta;
        // direct evaluation is accurate to O(k ε); log space only when Γ overflows
        let direct = if arg < 170.0 { z.abs().powi(k as i32) / gamma(arg) } else { f64::NAN };
        let magnitude = if direct.is_finite() {
            direct
        } else {
            (kf * log_abs - ln_gamma(arg)).exp()
        };
        if !magnitude.is_finite() {
            return Err(Error::MittagLeffler { beta, z, kind: "overflows" });
        }
        let term = if negative && k % 2 == 1 { -magnitude } else { magnitude };
        sum += term;
        let digits = if direct.is_finite() { kf + 8.0 } else { kf * log_abs.abs() + ln_gamma(arg) + 4.0 };
        error_bound += magnitude * digits;
        if !sum.is_finite() {
            return Err(Error::MittagLeffler { beta, z, kind: "overflows" });
        }
        // terms decrease monotonically once k·β exceeds |z| comfortably
        if magnitude <= 1e-17 * sum.abs() && (kf * beta) > z.abs() {
            break;
        }
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::MittagLeffler { beta, z, kind: "did not converge" });
        }
    }
    if error_bound * f64::EPSILON > TARGET * sum.abs() {
        return Err(Error::MittagLeffler {
            beta,
            z,
            kind: "loses precision to cancellation",
        });
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        for &b in &[0.1, 0.5, 1.0, 1.7] {
            assert_eq!(mittag_leffler(b, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn exponential_case() {
        assert!((mittag_leffler(1.0, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-14);
        for i in -50..=50 {
            let z = i as f64 / 10.0;
            let e = mittag_leffler(1.0, z).unwrap();
            // for z < 0 the alternating series cancels, so bound absolutely
            assert!((e - z.exp()).abs() <= 1e-10 * z.exp().max(1e-2), "z={z}");
        }
    }

    #[test]
    fn half_order_at_one() {
        // e · erfc(−1), 30-digit reference
        let v = mittag_leffler(0.5, 1.0).unwrap();
        assert!((v - 5.008_980_080_762_283).abs() < 1e-12);
    }

    #[test]
    fn half_order_against_erfc_closed_form() {
        use libm::erfc;
        for i in 0..=20 {
            let z = i as f64 * 0.25;
            let expect = (z * z).exp() * erfc(-z);
            let v = mittag_leffler(0.5, z).unwrap();
            assert!((v - expect).abs() <= 1e-10 * expect, "z={z}: {v} vs {expect}");
        }
    }

    #[test]
    fn cosh_identity() {
        // E_2(z²) = cosh z
        for i in 0..20 {
            let x = i as f64 * 0.4;
            let v = mittag_leffler(2.0, x * x).unwrap();
            assert!((v - x.cosh()).abs() <= 1e-11 * x.cosh());
        }
    }

    #[test]
    fn large_positive_argument() {
        // bound reports use z = 4Λ tₙ^β with moderate Λ
        let v = mittag_leffler(0.7, 50.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn signals_failure_modes() {
        assert!(matches!(
            mittag_leffler(0.1, 50.0),
            Err(Error::MittagLeffler { kind: "overflows", .. })
        ));
        assert!(matches!(
            mittag_leffler(1.0, -40.0),
            Err(Error::MittagLeffler { .. })
        ));
        assert!(mittag_leffler(0.0, 1.0).is_err());
        assert!(mittag_leffler(0.5, f64::NAN).is_err());
    }
}
