//! Exact minimisation of the counting-multiplicities objectives, the
//! quadratic-form minimum on a Noether–Fano hyperplane, polynomial identity
//! checks for the Φ forms, and bound-propagation pipelines.

mod interval;
mod mpoly;
mod pipeline;
mod roots;
mod triangle;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::Rat;

pub use interval::Interval;
pub use mpoly::{check_phi_identity, check_phi_identity_at, estimate_sides, three_level_phi, MultivarPoly, PhiCase, PhiReport};
pub use pipeline::{run_pipeline, PipelineReport, StepReport};
pub use roots::{rational_roots, roots_in_q_sqrt2, sqrt_in_q_sqrt2};
pub use triangle::{min_on_triangle, HalfPlane, IntervalWitness, MinResult, Objective, TriangleRegion, WITNESS_TOL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptError {
    #[error("the region has no point with theta > 1")]
    EmptyRegion,
    /// Reserved: both objectives tend to `+∞` on the open edge `θ → 1⁺`.
    #[error("objective unbounded below")]
    UnboundedBelow,
    #[error("the minimiser is not representable in Q(sqrt2)")]
    NotRepresentable,
    #[error("bad region: {0}")]
    Region(String),
    #[error("the weights after the first sum to zero")]
    DegenerateWeights,
    #[error("negative weight {0}")]
    NegativeWeight(Rat),
    #[error("unknown pipeline `{0}`")]
    UnknownPipeline(String),
    #[error("pipeline line {line}: {msg}")]
    Pipeline { line: usize, msg: String },
}

/// Minimum of `Σ pᵢνᵢ²` on `{Σ pᵢνᵢ = C, ν₁ = nu1}`.
///
/// By Cauchy–Schwarz the free coordinates are all equal at the minimum:
/// `θ = (C − p₁·nu1)/Σ_{i≥2} pᵢ` and the value is `p₁·nu1² + (Σ_{i≥2} pᵢ)·θ²`.
pub fn min_quadratic_on_hyperplane(p: &[Rat], c: &Rat, nu1: &Rat) -> Result<(Rat, Rat), OptError> {
    if let Some(w) = p.iter().find(|w| w.is_negative()) {
        return Err(OptError::NegativeWeight(w.clone()));
    }
    let (p1, rest) = p.split_first().ok_or(OptError::DegenerateWeights)?;
    let s: Rat = rest.iter().sum();
    if s.is_zero() {
        return Err(OptError::DegenerateWeights);
    }
    let theta = (c - p1 * nu1) / &s;
    let value = p1 * nu1 * nu1 + &s * &theta * &theta;
    Ok((theta, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn hyperplane_minimum() {
        assert_eq!(min_quadratic_on_hyperplane(&[int(1), int(1), int(1)], &int(6), &int(2)), Ok((int(2), int(12))));
        assert_eq!(min_quadratic_on_hyperplane(&[int(2), int(1), int(1)], &int(10), &int(3)), Ok((int(2), int(26))));
        assert_eq!(min_quadratic_on_hyperplane(&[int(1), int(0), int(0)], &int(6), &int(2)), Err(OptError::DegenerateWeights));
        assert!(matches!(min_quadratic_on_hyperplane(&[int(1), rat(-1, 2)], &int(1), &int(1)), Err(OptError::NegativeWeight(_))));
    }
}
