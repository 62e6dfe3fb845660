//! Bounds on the matrix multiplication exponent `ω` from a realization and
//! the character degrees of its group.
//!
//! A group with pseudo-exponent at most `α` and character degrees `d_i`
//! yields `|G|^{ω/α} <= Σ d_i^ω`. All bounds here are conditional on the `α`
//! supplied, which in practice comes from a certificate and is only an upper
//! bound on the true pseudo-exponent.

use serde::Serialize;
use thiserror::Error;

use crate::chardeg::{CharDegError, CharacterDegrees};
use crate::tpp::Certificate;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("alpha = {0} is below 2, which no realization can produce")]
    AlphaTooSmall(f64),
    #[error("a certificate can never give alpha = {0} <= 2; it is corrupted")]
    CorruptCertificate(f64),
    #[error("degrees describe a group of order {degrees}, certificate group has order {group}")]
    OrderMismatch { degrees: u64, group: u64 },
    #[error("gamma = {gamma} at position {index} is not above 2")]
    GammaTooSmall { index: usize, gamma: f64 },
    #[error("alpha and gamma sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("certificate is not verified")]
    Unverified,
    #[error(transparent)]
    Degrees(#[from] CharDegError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OmegaOutcome {
    /// `ω <= value`, with `value` in `[2, 3)`.
    Bound(f64),
    /// The inequality already holds at `ω = 3`, so nothing below 3 follows.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaBound {
    pub order: u64,
    pub alpha: f64,
    pub outcome: OmegaOutcome,
    pub tolerance: f64,
}

/// `f(ω) = log Σ d^ω - (ω/α) log|G|`; the inequality holds where `f >= 0`.
fn slack(deg: &CharacterDegrees, alpha: f64, omega: f64) -> Result<f64, BoundsError> {
    Ok(deg.log_power_sum(omega)? - omega / alpha * (deg.order() as f64).ln())
}

/// Solves `|G|^{ω/α} <= Σ d^ω` for the largest admissible `ω` in `[2, 3]`.
///
/// Accepts any `α >= 2`; `α = 2` gives exactly 2. The `ω = 3` test decides
/// triviality before any bisection.
pub fn omega_bound_solve(alpha: f64, deg: &CharacterDegrees, tol: f64) -> Result<OmegaBound, BoundsError> {
    if !(alpha >= 2.0) {
        return Err(BoundsError::AlphaTooSmall(alpha));
    }
    let log_order = (deg.order() as f64).ln();
    let outcome = if slack(deg, alpha, 3.0)? >= -1e-12 * log_order.max(1.0) {
        OmegaOutcome::Trivial
    } else {
        let (mut lo, mut hi) = (2.0f64, 3.0f64);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if slack(deg, alpha, mid)? >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        OmegaOutcome::Bound(0.5 * (lo + hi))
    };
    Ok(OmegaBound { order: deg.order(), alpha, outcome, tolerance: tol })
}

/// The bound from a verified certificate's `α` upper bound.
pub fn omega_bound_for_certificate(cert: &Certificate, deg: &CharacterDegrees) -> Result<OmegaBound, BoundsError> {
    check_pair(cert, deg)?;
    let alpha = cert.alpha_upper().unwrap_or(f64::INFINITY);
    if alpha <= 2.0 {
        return Err(BoundsError::CorruptCertificate(alpha));
    }
    if alpha.is_infinite() {
        return Ok(OmegaBound { order: deg.order(), alpha, outcome: OmegaOutcome::Trivial, tolerance: DEFAULT_TOLERANCE });
    }
    omega_bound_solve(alpha, deg, DEFAULT_TOLERANCE)
}

fn check_pair(cert: &Certificate, deg: &CharacterDegrees) -> Result<(), BoundsError> {
    if !cert.verified {
        return Err(BoundsError::Unverified);
    }
    if cert.group.order() != deg.order() {
        return Err(BoundsError::OrderMismatch { degrees: deg.order(), group: cert.group.order() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GammaBound {
    Bound(f64),
    Inapplicable,
}

/// `ω <= α (γ - 2) / (γ - α)` when `α < γ`; infinite `γ` gives `α`.
///
/// `α` and `γ` closer than `1e-12` relative count as equal.
pub fn gamma_bound(alpha: f64, gamma: f64) -> GammaBound {
    if gamma.is_infinite() {
        return GammaBound::Bound(alpha);
    }
    if alpha >= gamma - 1e-12 * gamma.abs().max(1.0) {
        return GammaBound::Inapplicable;
    }
    GammaBound::Bound(alpha * (gamma - 2.0) / (gamma - alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CubeSumTest {
    pub nmp: u128,
    /// `Σ d^3`, or `d_max^3` when only the largest degree is known.
    pub sum_d3: u128,
    pub sum_d3_exact: bool,
    /// Whether `nmp > Σ d^3`.
    pub satisfied: bool,
}

/// Evaluates `nmp > Σ d^3`. With only `d_max` known the answer is still
/// decided when `nmp <= d_max^3`.
pub fn cube_sum_check(cert: &Certificate, deg: &CharacterDegrees) -> Result<CubeSumTest, BoundsError> {
    check_pair(cert, deg)?;
    let nmp = cert.nmp();
    if deg.is_complete() {
        let sum_d3 = deg.sum_cubes()?;
        return Ok(CubeSumTest { nmp, sum_d3, sum_d3_exact: true, satisfied: nmp > sum_d3 });
    }
    let lower = (deg.max_degree() as u128).pow(3);
    if nmp > lower {
        return Err(BoundsError::Degrees(CharDegError::Incomplete(cert.group.descriptor().into())));
    }
    Ok(CubeSumTest { nmp, sum_d3: lower, sum_d3_exact: false, satisfied: false })
}

/// `(α - 2) / (γ - 2)` per item; infinite `γ` gives 0.
pub fn race_report(alphas: &[f64], gammas: &[f64]) -> Result<Vec<f64>, BoundsError> {
    if alphas.len() != gammas.len() {
        return Err(BoundsError::LengthMismatch(alphas.len(), gammas.len()));
    }
    alphas
        .iter()
        .zip(gammas)
        .enumerate()
        .map(|(index, (&a, &gamma))| {
            if !(gamma > 2.0) {
                Err(BoundsError::GammaTooSmall { index, gamma })
            } else if gamma.is_infinite() {
                Ok(0.0)
            } else {
                Ok((a - 2.0) / (gamma - 2.0))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::chardeg::{abelian_degrees, dihedral_degrees, sl2_degrees, symmetric_degrees, DegreeSource};
    use crate::group::parse_descriptor;
    use crate::tpp::verify_tpp;

    fn frob_degrees() -> CharacterDegrees {
        CharacterDegrees::from_counts(80, [(1, 5), (5, 3)], DegreeSource::Formula)
    }

    fn sample_degrees() -> Vec<CharacterDegrees> {
        vec![
            frob_degrees(),
            sl2_degrees(3),
            sl2_degrees(5),
            sl2_degrees(49),
            dihedral_degrees(9),
            symmetric_degrees(10),
            abelian_degrees(30),
        ]
    }

    #[test]
    fn frobenius_is_trivial() {
        let alpha = 3.0 * 80f64.ln() / 200f64.ln();
        let b = omega_bound_solve(alpha, &frob_degrees(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(b.outcome, OmegaOutcome::Trivial);
        let gamma = frob_degrees().gamma();
        let GammaBound::Bound(c) = gamma_bound(alpha, gamma) else { panic!() };
        assert!((c - 7.43).abs() < 0.01, "{c}");
    }

    #[test]
    fn alpha_two_gives_two() {
        for d in sample_degrees() {
            let b = omega_bound_solve(2.0, &d, DEFAULT_TOLERANCE).unwrap();
            let OmegaOutcome::Bound(w) = b.outcome else { panic!("trivial for {:?}", d.counts()) };
            assert!((w - 2.0).abs() < 1e-6);
        }
        assert!(matches!(omega_bound_solve(1.9, &frob_degrees(), 1e-9), Err(BoundsError::AlphaTooSmall(_))));
        assert!(omega_bound_solve(f64::NAN, &frob_degrees(), 1e-9).is_err());
    }

    #[test]
    fn abelian_alpha_three_is_trivial() {
        let b = omega_bound_solve(3.0, &abelian_degrees(64), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(b.outcome, OmegaOutcome::Trivial);
    }

    #[test]
    fn bisection_root_is_a_crossing() {
        let d = symmetric_degrees(10);
        let b = omega_bound_solve(2.05, &d, 1e-10).unwrap();
        let OmegaOutcome::Bound(w) = b.outcome else { panic!() };
        assert!(w > 2.0 && w < 3.0);
        assert!(slack(&d, 2.05, w - 1e-8).unwrap() >= 0.0);
        assert!(slack(&d, 2.05, w + 1e-8).unwrap() < 0.0);
    }

    #[test]
    fn gamma_bound_cases() {
        assert_eq!(gamma_bound(2.0, 2.7), GammaBound::Bound(2.0));
        assert_eq!(gamma_bound(2.9, 2.8), GammaBound::Inapplicable);
        assert_eq!(gamma_bound(3.0, f64::INFINITY), GammaBound::Bound(3.0));
        let a = 3.0 * 24f64.ln() / 27f64.ln();
        assert_eq!(gamma_bound(a, sl2_degrees(3).gamma()), GammaBound::Inapplicable);
        let GammaBound::Bound(v) = gamma_bound(2.4, 2.9) else { panic!() };
        assert!((v - 2.4 * 0.9 / 0.5).abs() < 1e-12);
    }

    #[test]
    fn cube_sum_examples() {
        let g = parse_descriptor("cyclic:6").unwrap();
        let all: Vec<_> = g.elements().unwrap().collect();
        let cert = verify_tpp(&g, &[vec![g.identity()], vec![g.identity()], all]).unwrap().certificate().unwrap();
        let q = cube_sum_check(&cert, &abelian_degrees(6)).unwrap();
        assert_eq!((q.nmp, q.sum_d3, q.satisfied), (6, 6, false));
        assert!(matches!(
            cube_sum_check(&cert, &abelian_degrees(7)),
            Err(BoundsError::OrderMismatch { .. })
        ));
        let mut unverified = cert.clone();
        unverified.verified = false;
        assert_eq!(cube_sum_check(&unverified, &abelian_degrees(6)).unwrap_err(), BoundsError::Unverified);
        let t = CharacterDegrees::max_only(6, 2);
        assert!(!cube_sum_check(&cert, &t).unwrap().satisfied);
    }

    #[test]
    fn race_ratios() {
        let r = race_report(&[2.4811], &[2.7224]).unwrap();
        assert!((r[0] - 0.4811 / 0.7224).abs() < 1e-12);
        assert_eq!(race_report(&[3.0], &[f64::INFINITY]).unwrap(), [0.0]);
        assert!(matches!(race_report(&[2.5], &[2.0]), Err(BoundsError::GammaTooSmall { index: 0, .. })));
        assert!(race_report(&[2.5, 2.6], &[3.0]).is_err());
        let ns: Vec<f64> = (3..200).map(f64::from).collect();
        let alphas: Vec<f64> = ns.iter().map(|n| 2.0 + 1.0 / n).collect();
        let gammas: Vec<f64> = ns.iter().map(|n| 2.0 + 1.0 / n.ln()).collect();
        let r = race_report(&alphas, &gammas).unwrap();
        assert!(r.windows(2).all(|w| w[1] < w[0]));
        assert!(*r.last().unwrap() < 0.03);
    }

    proptest! {
        #[test]
        fn solver_is_monotone_in_alpha(di in 0usize..7, a in 2.0f64..3.2, da in 0.0f64..0.5) {
            let d = &sample_degrees()[di];
            let value = |o: OmegaOutcome| match o { OmegaOutcome::Bound(w) => w, OmegaOutcome::Trivial => 3.0 };
            let lo = value(omega_bound_solve(a, d, 1e-9).unwrap().outcome);
            let hi = value(omega_bound_solve(a + da, d, 1e-9).unwrap().outcome);
            prop_assert!(hi >= lo - 1e-8);
            prop_assert!(lo >= 2.0);
        }

        #[test]
        fn pretest_matches_cubes(di in 0usize..7, a in 2.0f64..3.2) {
            let d = &sample_degrees()[di];
            let outcome = omega_bound_solve(a, d, 1e-9).unwrap().outcome;
            let lhs = 3.0 / a * (d.order() as f64).ln();
            let rhs = (d.sum_cubes().unwrap() as f64).ln();
            if (lhs - rhs).abs() > 1e-9 {
                prop_assert_eq!(outcome == OmegaOutcome::Trivial, lhs < rhs);
            }
        }

        #[test]
        fn alpha_at_least_gamma_is_trivial(di in 0usize..6, extra in 0.0f64..1.0) {
            let d = &sample_degrees()[di];
            let a = d.gamma() + extra;
            prop_assert_eq!(omega_bound_solve(a, d, 1e-9).unwrap().outcome, OmegaOutcome::Trivial);
            prop_assert_eq!(gamma_bound(a, d.gamma()), GammaBound::Inapplicable);
        }
    }
}
