//! Multiplicative-error metrics and error-budget formulas.

use crate::circuit::OutcomeString;
use crate::error::{Error, Result};

/// Probabilities at or below this are treated as exactly zero.
pub const ZERO_THRESHOLD: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    /// Smallest `c >= 1` with `P/c <= P_ap <= c·P` everywhere; `+inf` when the
    /// supports differ.
    pub c: f64,
    /// Index of an outcome attaining `c` (`None` when `c == 1` trivially,
    /// i.e. both distributions vanish everywhere).
    pub worst_index: Option<usize>,
}

impl ErrorReport {
    pub fn worst_outcome(&self, n: usize) -> Option<OutcomeString> {
        self.worst_index
            .map(|i| OutcomeString::from_index(i as u64, n))
    }
}

pub fn multiplicative_error(p: &[f64], p_ap: &[f64]) -> Result<ErrorReport> {
    if p.len() != p_ap.len() {
        return Err(Error::DomainMismatch(p.len(), p_ap.len()));
    }
    let mut report = ErrorReport {
        c: 1.0,
        worst_index: None,
    };
    for (i, (&a, &b)) in p.iter().zip(p_ap).enumerate() {
        let za = a <= ZERO_THRESHOLD;
        let zb = b <= ZERO_THRESHOLD;
        let ratio = match (za, zb) {
            (true, true) => continue,
            (true, false) | (false, true) => f64::INFINITY,
            (false, false) => (a / b).max(b / a),
        };
        if report.worst_index.is_none() || ratio > report.c {
            report.c = ratio.max(1.0);
            report.worst_index = Some(i);
        }
    }
    Ok(report)
}

/// Largest per-step relative error `ε` such that `n` steps still compose to
/// a factor of at most `√2`: `(2^{1/(2n)} - 1)/(2^{1/(2n)} + 1)`.
///
/// # Panics
/// If `n == 0`.
pub fn epsilon_budget(n: usize) -> f64 {
    assert!(n >= 1, "epsilon_budget needs n >= 1");
    let a = (std::f64::consts::LN_2 / (2.0 * n as f64)).exp_m1();
    a / (a + 2.0)
}

/// `∏_k (1 + ε_k)/(1 - ε_k)`.
pub fn per_step_error_compose(eps: &[f64]) -> Result<f64> {
    eps.iter().try_fold(1.0, |acc, &e| {
        if !(0.0..1.0).contains(&e) {
            return Err(Error::InvalidEpsilon(e));
        }
        Ok(acc * (1.0 + e) / (1.0 - e))
    })
}

/// `||I - D(ε, S)||² = 2(1 - cos ε)`.
pub fn gate_norm_error(eps: f64) -> f64 {
    2.0 * (1.0 - eps.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn ratios() {
        let p = [0.5, 0.25, 0.25, 0.0];
        assert_eq!(multiplicative_error(&p, &p).unwrap().c, 1.0);
        let q = [0.5, 0.5, 0.25, 0.0];
        let r = multiplicative_error(&p, &q).unwrap();
        assert_eq!(r.c, 2.0);
        assert_eq!(r.worst_index, Some(1));
        assert_eq!(r.worst_outcome(2).unwrap().to_string(), "10");
        let z = [0.5, 0.25, 0.25, 0.1];
        assert_eq!(multiplicative_error(&p, &z).unwrap().c, f64::INFINITY);
        assert!(multiplicative_error(&p, &p[..2]).is_err());
    }

    #[test]
    fn budget() {
        let e1 = epsilon_budget(1);
        assert!((e1 - (SQRT_2 - 1.0) / (SQRT_2 + 1.0)).abs() < 1e-15);
        assert!((e1 - 0.171573).abs() < 1e-6);
        for n in 1..100 {
            assert!(epsilon_budget(n + 1) < epsilon_budget(n));
        }
        let f = per_step_error_compose(&[epsilon_budget(7); 7]).unwrap();
        assert!((f - SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn compose_and_norm() {
        assert_eq!(per_step_error_compose(&[]).unwrap(), 1.0);
        assert_eq!(per_step_error_compose(&[0.0, 0.0]).unwrap(), 1.0);
        assert!((per_step_error_compose(&[0.2]).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(per_step_error_compose(&[1.0]), Err(Error::InvalidEpsilon(1.0)));
        assert_eq!(gate_norm_error(0.0), 0.0);
        assert_eq!(gate_norm_error(PI), 4.0);
        assert!((gate_norm_error(PI / 2.0) - 2.0).abs() < 1e-15);
    }
}
