//! Log-factorials and the other closed forms used by the entropy formulas.
//! Everything is in nats.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SMALL: u64 = 20;

/// `ln(n!)`.
///
/// Sums `ln i` directly up to 20 and uses the Stirling series for
/// `ln Gamma(n + 1)` above that, where the truncation error is below
/// `1e-15` relative.
pub fn log_factorial(n: u64) -> f64 {
    if n <= SMALL {
        return (2..=n).map(|i| (i as f64).ln()).sum();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + series
}

/// `h(x) = (1 + x) ln(1 + x) - x ln x`, with `h(0) = 0`.
pub fn binary_entropy_h(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("h(x) needs a finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 + x) * x.ln_1p() - x * x.ln())
}

/// Log of the number of multisets of size `n` drawn from `t` classes,
/// `ln C(t + n - 1, n)`.
pub fn multiset_sequence_cost(t: u64, n: u64) -> f64 {
    if t == 0 {
        return 0.0;
    }
    log_factorial(t + n - 1) - log_factorial(n) - log_factorial(t - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn summed(n: u64) -> f64 {
        (2..=n).map(|i| (i as f64).ln()).sum()
    }

    #[test]
    fn small_factorials() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn factorial_378_against_direct_sum() {
        let oracle = summed(378);
        assert!((oracle - 1869.2766120337).abs() < 1e-9);
        assert!((log_factorial(378) - oracle).abs() / oracle < 1e-12);
    }

    #[test]
    fn stirling_matches_lgamma_across_the_switch() {
        for n in [21u64, 22, 50, 100, 1_000, 123_456, 10_000_000] {
            let reference = statrs::function::gamma::ln_gamma(n as f64 + 1.0);
            let rel = (log_factorial(n) - reference).abs() / reference;
            assert!(rel < 1e-12, "n={n} rel={rel}");
        }
    }

    #[test]
    fn h_values() {
        assert_eq!(binary_entropy_h(0.0).unwrap(), 0.0);
        assert!((binary_entropy_h(1.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        // 56/378 is g(g+1)/2E for the 7-layer Cayley tree
        let x: f64 = 56.0 / 378.0;
        let direct = (1.0 + x) * (1.0 + x).ln() - x * x.ln();
        assert!((binary_entropy_h(x).unwrap() - direct).abs() < 1e-14);
        assert!((binary_entropy_h(x).unwrap() - 0.441512).abs() < 1e-6);
        assert!(binary_entropy_h(-0.1).is_err());
        assert!(binary_entropy_h(f64::NAN).is_err());
    }

    #[test]
    fn multiset_examples() {
        for n in [1, 7, 190, 5000] {
            assert_eq!(multiset_sequence_cost(1, n), 0.0);
        }
        assert!((multiset_sequence_cost(2, 190) - 191f64.ln()).abs() < 1e-12);
        assert!((multiset_sequence_cost(2, 3) - 4f64.ln()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn factorial_recurrence(n in 1u64..5_000) {
            let step = log_factorial(n) - log_factorial(n - 1);
            prop_assert!((step - (n as f64).ln()).abs() < 1e-9);
        }

        #[test]
        fn factorial_relative_error(n in 0u64..3_000) {
            let oracle = summed(n);
            let err = (log_factorial(n) - oracle).abs();
            prop_assert!(err <= 1e-12 * oracle.max(1.0));
        }
    }
}
