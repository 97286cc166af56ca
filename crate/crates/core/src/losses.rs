//! Per-round convex quadratic losses and seeded time-varying sequences.
//!
//! Every loss has the form `f(x) = 0.5 (x - c)' A (x - c) + b` with symmetric
//! positive-semidefinite curvature `A`, so gradients are affine, the gradient
//! Lipschitz constant is the top eigenvalue of `A`, and the hindsight
//! minimizer of a sum of rounds stays closed-form.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::FeasibleSet;

/// Componentwise symmetry slack accepted at construction.
const SYMMETRY_TOL: f64 = 1e-12;
/// Round-off slack below zero accepted for the smallest curvature eigenvalue.
const PSD_TOL: f64 = 1e-10;

/// One round's loss `f(x) = 0.5 (x - center)' curvature (x - center) + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLoss {
    curvature: DMatrix<f64>,
    center: DVector<f64>,
    offset: f64,
    eig_max: f64,
    eig_min: f64,
}

impl QuadraticLoss {
    /// Validates symmetry (componentwise within 1e-12), positive
    /// semidefiniteness, and finiteness, and caches the curvature spectrum
    /// bounds.
    pub fn new(curvature: DMatrix<f64>, center: DVector<f64>, offset: f64) -> Result<Self> {
        let n = center.len();
        if n == 0 {
            return Err(Error::invalid("loss dimension must be positive"));
        }
        if curvature.nrows() != n || curvature.ncols() != n {
            return Err(Error::invalid(format!(
                "curvature must be {n}x{n} to match the center, got {}x{}",
                curvature.nrows(),
                curvature.ncols()
            )));
        }
        if curvature.iter().any(|v| !v.is_finite())
            || center.iter().any(|v| !v.is_finite())
            || !offset.is_finite()
        {
            return Err(Error::invalid("loss parameters must be finite"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (curvature[(i, j)] - curvature[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::invalid(format!(
                        "curvature is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let eigenvalues = curvature.clone().symmetric_eigen().eigenvalues;
        let eig_max = eigenvalues
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let eig_min = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if eig_min < -PSD_TOL {
            return Err(Error::invalid(format!(
                "curvature must be positive semidefinite, smallest eigenvalue {eig_min}"
            )));
        }
        Ok(QuadraticLoss {
            curvature,
            center,
            offset,
            eig_max: eig_max.max(0.0),
            eig_min: eig_min.max(0.0),
        })
    }

    /// Constructor for generators that already know the spectrum (a shared
    /// validated curvature, or freshly drawn eigenvalues): skips the
    /// eigendecomposition that `new` would redo every round.
    pub(crate) fn with_spectrum(
        curvature: DMatrix<f64>,
        center: DVector<f64>,
        offset: f64,
        eig_max: f64,
        eig_min: f64,
    ) -> Result<Self> {
        if center.iter().any(|v| !v.is_finite()) || !offset.is_finite() {
            return Err(Error::invalid("loss parameters must be finite"));
        }
        Ok(QuadraticLoss {
            curvature,
            center,
            offset,
            eig_max,
            eig_min,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn curvature(&self) -> &DMatrix<f64> {
        &self.curvature
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn check_dim(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: point has {} components, loss has {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `0.5 (x - c)' A (x - c) + b`; never below the offset.
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_dim(x)?;
        let diff = x - &self.center;
        Ok(0.5 * (&self.curvature * &diff).dot(&diff) + self.offset)
    }

    /// `A (x - c)`; vanishes at the center.
    pub fn gradient(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(x)?;
        Ok(&self.curvature * (x - &self.center))
    }

    /// Gradient Lipschitz constant, i.e. the top curvature eigenvalue.
    pub fn lipschitz_constant(&self) -> f64 {
        self.eig_max
    }

    /// Smallest curvature eigenvalue (zero for merely semidefinite losses).
    pub fn min_eigenvalue(&self) -> f64 {
        self.eig_min
    }
}

/// Generator family behind a [`LossSequence`].
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// The same loss every round.
    Stationary { loss: QuadraticLoss },
    /// Fixed curvature, center translated by `drift * decay^(k-1)` each round.
    DriftingCenter {
        base: QuadraticLoss,
        drift: DVector<f64>,
        decay: f64,
    },
    /// Fresh curvature per round: eigenvalues drawn uniformly from
    /// `eig_range`, a Haar-random rotation, and a center drawn uniformly from
    /// `center_range` per coordinate.
    RandomRotation {
        dim: usize,
        eig_range: (f64, f64),
        center_range: (f64, f64),
    },
}

/// A seeded, deterministic sequence of `horizon` quadratic losses.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSequence {
    generator: Generator,
    horizon: usize,
    seed: u64,
}

impl LossSequence {
    pub fn new(generator: Generator, horizon: usize, seed: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon must be at least 1"));
        }
        match &generator {
            Generator::Stationary { .. } => {}
            Generator::DriftingCenter { base, drift, decay } => {
                if drift.len() != base.dim() {
                    return Err(Error::invalid(
                        "drift vector must match the base loss dimension",
                    ));
                }
                if drift.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("drift vector must be finite"));
                }
                if !decay.is_finite() || *decay < 0.0 {
                    return Err(Error::invalid(format!("decay must be >= 0, got {decay}")));
                }
            }
            Generator::RandomRotation {
                dim,
                eig_range,
                center_range,
            } => {
                if *dim == 0 {
                    return Err(Error::invalid("dimension must be positive"));
                }
                let (lo, hi) = *eig_range;
                if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
                    return Err(Error::invalid(format!(
                        "eigenvalue range must satisfy 0 <= lo <= hi, got [{lo}, {hi}]"
                    )));
                }
                let (clo, chi) = *center_range;
                if !(clo.is_finite() && chi.is_finite()) || clo > chi {
                    return Err(Error::invalid(format!(
                        "center range must satisfy lo <= hi, got [{clo}, {chi}]"
                    )));
                }
            }
        }
        Ok(LossSequence {
            generator,
            horizon,
            seed,
        })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        match &self.generator {
            Generator::Stationary { loss } => loss.dim(),
            Generator::DriftingCenter { base, .. } => base.dim(),
            Generator::RandomRotation { dim, .. } => *dim,
        }
    }

    /// The loss revealed at round `k` (1-based). Deterministic in
    /// `(seed, parameters, k)`: repeated calls agree bitwise.
    pub fn generate(&self, k: usize) -> Result<QuadraticLoss> {
        if k == 0 || k > self.horizon {
            return Err(Error::invalid(format!(
                "round {k} outside 1..={}",
                self.horizon
            )));
        }
        match &self.generator {
            Generator::Stationary { loss } => Ok(loss.clone()),
            Generator::DriftingCenter { base, drift, decay } => {
                // Sum of the first k-1 drift steps: drift * (1 + decay + ... + decay^(k-2)).
                let steps = k - 1;
                let scale = if (*decay - 1.0).abs() == 0.0 {
                    steps as f64
                } else {
                    (1.0 - decay.powi(steps as i32)) / (1.0 - decay)
                };
                let center = base.center() + drift * scale;
                QuadraticLoss::with_spectrum(
                    base.curvature().clone(),
                    center,
                    base.offset(),
                    base.lipschitz_constant(),
                    base.min_eigenvalue(),
                )
            }
            Generator::RandomRotation {
                dim,
                eig_range,
                center_range,
            } => {
                let mut rng = self.round_rng(k);
                sample_rotated_loss(*dim, *eig_range, *center_range, &mut rng)
            }
        }
    }

    /// One independent RNG stream per round, so `generate` is pure in `k`.
    fn round_rng(&self, k: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k as u64);
        rng
    }

    /// `L = max_k L_k` over the whole horizon.
    pub fn sequence_lipschitz(&self) -> Result<f64> {
        match &self.generator {
            // Curvature never changes for these two.
            Generator::Stationary { loss } => Ok(loss.lipschitz_constant()),
            Generator::DriftingCenter { base, .. } => Ok(base.lipschitz_constant()),
            Generator::RandomRotation { .. } => {
                let mut max = 0.0f64;
                for k in 1..=self.horizon {
                    max = max.max(self.generate(k)?.lipschitz_constant());
                }
                Ok(max)
            }
        }
    }

    /// Upper envelope of gradient norms over the set and the horizon:
    /// `max_k lambda_max(A_k) * max_{x in X} ||x - c_k||`.
    ///
    /// `||A (x - c)|| <= lambda_max ||x - c||`, with equality whenever the
    /// farthest set point from `c_k` lies along a top eigenvector (always for
    /// isotropic curvature), so this is a valid and cheap stand-in for the
    /// exact maximum in the bounds it feeds.
    pub fn max_gradient_norm(&self, set: &FeasibleSet) -> Result<f64> {
        if set.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: sequence has {}, set has {}",
                self.dim(),
                set.dim()
            )));
        }
        let mut max = 0.0f64;
        for k in 1..=self.horizon {
            let loss = self.generate(k)?;
            let reach = set.max_distance_from(loss.center())?;
            max = max.max(loss.lipschitz_constant() * reach);
            if matches!(self.generator, Generator::Stationary { .. }) {
                break;
            }
        }
        Ok(max)
    }
}

/// Draws a random PSD quadratic: eigenvalues uniform in `eig_range`, a
/// Haar-random orthogonal frame from the QR of a Gaussian matrix, and a
/// center uniform per coordinate in `center_range`.
pub fn sample_rotated_loss<R: Rng>(
    dim: usize,
    eig_range: (f64, f64),
    center_range: (f64, f64),
    rng: &mut R,
) -> Result<QuadraticLoss> {
    let rotation = random_orthogonal(dim, rng);
    let eigenvalues = DVector::from_fn(dim, |_, _| rng.random_range(eig_range.0..=eig_range.1));
    let scaled = {
        let mut m = rotation.clone();
        for j in 0..dim {
            let mut col = m.column_mut(j);
            col *= eigenvalues[j];
        }
        m
    };
    let mut curvature = &scaled * rotation.transpose();
    // Kill round-off asymmetry so downstream symmetry checks are exact.
    let transposed = curvature.transpose();
    curvature = (&curvature + &transposed) * 0.5;
    let center = DVector::from_fn(dim, |_, _| {
        rng.random_range(center_range.0..=center_range.1)
    });
    // The spectrum is the drawn one up to round-off; reuse it instead of
    // re-decomposing on every round.
    let eig_max = eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let eig_min = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    QuadraticLoss::with_spectrum(curvature, center, 0.0, eig_max, eig_min)
}

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix with the
/// sign convention that makes the factorization unique.
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let gaussian = DMatrix::from_fn(dim, dim, |_, _| {
        rng.sample::<f64, _>(rand_distr::StandardNormal)
    });
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn iso(dim: usize, scale: f64) -> QuadraticLoss {
        QuadraticLoss::new(
            DMatrix::identity(dim, dim) * scale,
            DVector::zeros(dim),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_matches_hand_values() {
        let loss = iso(2, 1.0);
        assert_eq!(loss.evaluate(&dvector![1.0, 1.0]).unwrap(), 1.0);

        let centered =
            QuadraticLoss::new(DMatrix::identity(2, 2), dvector![1.0, 1.0], 0.0).unwrap();
        assert_eq!(centered.evaluate(&dvector![1.0, 1.0]).unwrap(), 0.0);

        let aniso =
            QuadraticLoss::new(dmatrix![2.0, 0.0; 0.0, 8.0], DVector::zeros(2), 0.0).unwrap();
        // 0.5 * (2 + 8)
        assert_eq!(aniso.evaluate(&dvector![1.0, 1.0]).unwrap(), 5.0);
    }

    #[test]
    fn gradient_matches_hand_values() {
        let loss = iso(2, 1.0);
        assert_eq!(
            loss.gradient(&dvector![3.0, 4.0]).unwrap(),
            dvector![3.0, 4.0]
        );

        let aniso =
            QuadraticLoss::new(dmatrix![2.0, 0.0; 0.0, 8.0], DVector::zeros(2), 0.0).unwrap();
        assert_eq!(
            aniso.gradient(&dvector![1.0, 1.0]).unwrap(),
            dvector![2.0, 8.0]
        );

        let centered =
            QuadraticLoss::new(dmatrix![2.0, 1.0; 1.0, 2.0], dvector![0.5, -0.5], 3.0).unwrap();
        let grad = centered.gradient(&dvector![0.5, -0.5]).unwrap();
        assert_eq!(grad, dvector![0.0, 0.0]);
    }

    #[test]
    fn lipschitz_constant_is_the_top_eigenvalue() {
        let diag =
            QuadraticLoss::new(dmatrix![2.0, 0.0; 0.0, 5.0], DVector::zeros(2), 0.0).unwrap();
        assert!((diag.lipschitz_constant() - 5.0).abs() < 1e-12);
        assert!((iso(2, 1.0).lipschitz_constant() - 1.0).abs() < 1e-12);
        // eigenvalues of [[2,1],[1,2]] are 2 +- 1
        let coupled =
            QuadraticLoss::new(dmatrix![2.0, 1.0; 1.0, 2.0], DVector::zeros(2), 0.0).unwrap();
        assert!((coupled.lipschitz_constant() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_losses_are_rejected() {
        // asymmetric
        assert!(QuadraticLoss::new(dmatrix![1.0, 0.5; 0.2, 1.0], DVector::zeros(2), 0.0).is_err());
        // indefinite
        assert!(QuadraticLoss::new(dmatrix![1.0, 0.0; 0.0, -1.0], DVector::zeros(2), 0.0).is_err());
        // dimension mismatch
        assert!(QuadraticLoss::new(DMatrix::identity(2, 2), DVector::zeros(3), 0.0).is_err());
        // non-finite
        assert!(QuadraticLoss::new(DMatrix::identity(1, 1), dvector![f64::NAN], 0.0).is_err());
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        let loss = iso(2, 1.0);
        assert!(loss.evaluate(&dvector![1.0]).is_err());
        assert!(loss.gradient(&dvector![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn stationary_generate_returns_the_same_loss() {
        let seq = LossSequence::new(Generator::Stationary { loss: iso(2, 2.0) }, 5, 9).unwrap();
        for k in 1..=5 {
            assert_eq!(seq.generate(k).unwrap(), iso(2, 2.0));
        }
        assert!(seq.generate(0).is_err());
        assert!(seq.generate(6).is_err());
    }

    #[test]
    fn drifting_center_walks_the_center() {
        let seq = LossSequence::new(
            Generator::DriftingCenter {
                base: iso(2, 1.0),
                drift: dvector![0.1, 0.0],
                decay: 1.0,
            },
            10,
            0,
        )
        .unwrap();
        let at3 = seq.generate(3).unwrap();
        assert!((at3.center() - dvector![0.2, 0.0]).norm() < 1e-15);
        assert_eq!(seq.generate(1).unwrap().center(), &dvector![0.0, 0.0]);
    }

    #[test]
    fn random_rotation_is_deterministic_per_round() {
        let seq = LossSequence::new(
            Generator::RandomRotation {
                dim: 3,
                eig_range: (1.0, 3.0),
                center_range: (-1.0, 1.0),
            },
            8,
            42,
        )
        .unwrap();
        let a = seq.generate(5).unwrap();
        let b = seq.generate(5).unwrap();
        assert_eq!(a, b);
        // distinct rounds draw distinct losses
        assert_ne!(a, seq.generate(4).unwrap());
    }

    #[test]
    fn sequence_lipschitz_takes_the_max_over_rounds() {
        let stationary = LossSequence::new(
            Generator::Stationary {
                loss: QuadraticLoss::new(dmatrix![2.0, 0.0; 0.0, 5.0], DVector::zeros(2), 0.0)
                    .unwrap(),
            },
            7,
            0,
        )
        .unwrap();
        assert!((stationary.sequence_lipschitz().unwrap() - 5.0).abs() < 1e-12);

        let rotating = LossSequence::new(
            Generator::RandomRotation {
                dim: 3,
                eig_range: (1.0, 3.0),
                center_range: (0.0, 0.0),
            },
            6,
            11,
        )
        .unwrap();
        let per_round: Vec<f64> = (1..=6)
            .map(|k| rotating.generate(k).unwrap().lipschitz_constant())
            .collect();
        let expect = per_round.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let got = rotating.sequence_lipschitz().unwrap();
        assert_eq!(got, expect);
        assert!((1.0 - 1e-9..=3.0 + 1e-9).contains(&got));
    }

    #[test]
    fn max_gradient_norm_matches_hand_values() {
        let ball = FeasibleSet::ball(dvector![0.0, 0.0], 1.0).unwrap();

        let unit = LossSequence::new(Generator::Stationary { loss: iso(2, 1.0) }, 3, 0).unwrap();
        assert!((unit.max_gradient_norm(&ball).unwrap() - 1.0).abs() < 1e-12);

        let doubled = LossSequence::new(Generator::Stationary { loss: iso(2, 2.0) }, 3, 0).unwrap();
        assert!((doubled.max_gradient_norm(&ball).unwrap() - 2.0).abs() < 1e-12);

        let shifted = LossSequence::new(
            Generator::Stationary {
                loss: QuadraticLoss::new(DMatrix::identity(2, 2), dvector![2.0, 0.0], 0.0).unwrap(),
            },
            3,
            0,
        )
        .unwrap();
        assert!((shifted.max_gradient_norm(&ball).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn max_gradient_norm_dominates_sampled_gradients() {
        let ball = FeasibleSet::ball(dvector![0.5, -0.5, 0.0], 2.0).unwrap();
        let seq = LossSequence::new(
            Generator::RandomRotation {
                dim: 3,
                eig_range: (0.5, 4.0),
                center_range: (-1.0, 1.0),
            },
            4,
            7,
        )
        .unwrap();
        let bound = seq.max_gradient_norm(&ball).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for k in 1..=4 {
            let loss = seq.generate(k).unwrap();
            for _ in 0..2500 {
                let x = ball.sample(&mut rng);
                let g = loss.gradient(&x).unwrap().norm();
                assert!(
                    g <= bound + 1e-9,
                    "sampled gradient {g} exceeds bound {bound}"
                );
            }
        }
    }
}
