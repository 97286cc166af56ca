//! Feasible decision sets: Euclidean balls and axis-aligned boxes.
//!
//! Both variants are bounded and closed, have closed-form Euclidean
//! projections, and a closed-form diameter, which is all the online loop and
//! the regret bounds need from the constraint side.

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};

/// A bounded, closed, convex decision set.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    Ball {
        center: DVector<f64>,
        radius: f64,
    },
    Box {
        lower: DVector<f64>,
        upper: DVector<f64>,
    },
}

impl FeasibleSet {
    /// Euclidean ball of strictly positive radius.
    pub fn ball(center: DVector<f64>, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::invalid(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        if center.is_empty() || center.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "ball center must be a nonempty finite vector",
            ));
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    /// Axis-aligned box `[lower, upper]`; degenerate (single-point) boxes are allowed.
    pub fn box_set(lower: DVector<f64>, upper: DVector<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::invalid(
                "box bounds must be nonempty and share a dimension",
            ));
        }
        if lower.iter().chain(upper.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("box bounds must be finite"));
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::invalid(
                "box requires lower[i] <= upper[i] for all i",
            ));
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Ball { center, .. } => center.len(),
            FeasibleSet::Box { lower, .. } => lower.len(),
        }
    }

    fn check_dim(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: point has {} components, set has {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Euclidean projection onto the set. Members are returned unchanged.
    pub fn project(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(x)?;
        Ok(match self {
            FeasibleSet::Ball { center, radius } => {
                let offset = x - center;
                let dist = offset.norm();
                if dist <= *radius {
                    x.clone()
                } else {
                    center + offset * (*radius / dist)
                }
            }
            FeasibleSet::Box { lower, upper } => {
                DVector::from_fn(lower.len(), |i, _| x[i].clamp(lower[i], upper[i]))
            }
        })
    }

    /// Largest Euclidean distance between two members (the `D` of the regret
    /// bounds). Finite by construction.
    pub fn diameter(&self) -> f64 {
        match self {
            FeasibleSet::Ball { radius, .. } => 2.0 * radius,
            FeasibleSet::Box { lower, upper } => (upper - lower).norm(),
        }
    }

    /// Euclidean distance from `x` to the set (zero for members).
    pub fn distance(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            FeasibleSet::Ball { center, radius } => ((x - center).norm() - radius).max(0.0),
            FeasibleSet::Box { lower, upper } => {
                let mut sq = 0.0;
                for i in 0..lower.len() {
                    let excess = (lower[i] - x[i]).max(x[i] - upper[i]).max(0.0);
                    sq += excess * excess;
                }
                sq.sqrt()
            }
        })
    }

    /// True iff `x` lies within Euclidean distance `tol` of the set.
    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        if tol.is_nan() || tol < 0.0 {
            return Err(Error::invalid(format!("tolerance must be >= 0, got {tol}")));
        }
        Ok(self.distance(x)? <= tol)
    }

    /// Largest Euclidean distance from `point` to any member of the set.
    ///
    /// For a ball this is attained on the boundary along the axis through the
    /// ball center; for a box it separates per coordinate (the far endpoint of
    /// each interval), which is the same as maximizing over corners.
    pub fn max_distance_from(&self, point: &DVector<f64>) -> Result<f64> {
        self.check_dim(point)?;
        Ok(match self {
            FeasibleSet::Ball { center, radius } => (point - center).norm() + radius,
            FeasibleSet::Box { lower, upper } => {
                let mut sq = 0.0;
                for i in 0..lower.len() {
                    let far = (point[i] - lower[i]).abs().max((point[i] - upper[i]).abs());
                    sq += far * far;
                }
                sq.sqrt()
            }
        })
    }

    /// Draws a point uniformly from the set. Used for randomized starting
    /// points and test sampling; deterministic given the RNG state.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> DVector<f64> {
        match self {
            FeasibleSet::Ball { center, radius } => {
                let dim = center.len();
                let mut direction = DVector::zeros(dim);
                loop {
                    for i in 0..dim {
                        direction[i] = rng.sample::<f64, _>(rand_distr::StandardNormal);
                    }
                    let norm = direction.norm();
                    if norm > 0.0 {
                        direction /= norm;
                        break;
                    }
                }
                let shell: f64 = rng.random_range(0.0..=1.0);
                center + direction * (radius * shell.powf(1.0 / dim as f64))
            }
            FeasibleSet::Box { lower, upper } => {
                DVector::from_fn(lower.len(), |i, _| rng.random_range(lower[i]..=upper[i]))
            }
        }
    }

    /// Short human-readable descriptor for run metadata.
    pub fn descriptor(&self) -> String {
        match self {
            FeasibleSet::Ball { center, radius } => {
                format!("ball(d={}, r={})", center.len(), radius)
            }
            FeasibleSet::Box { lower, .. } => format!("box(d={})", lower.len()),
        }
    }
}
