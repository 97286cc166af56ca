//! The online loop: predict, observe the round's loss, take a gradient step
//! with the policy's step size, project back onto the feasible set.
//!
//! Round `k` plays `x(k)`, observes `f_k`, records the loss and gradient at
//! the played point, and forms `x(k+1) = project(x(k) - alpha(k) g(k))`. The
//! secant pair feeding the BB formulas uses the played (projected) iterates
//! and the gradients of the two revealed losses.

use std::io::Write;

use nalgebra::DVector;

use crate::csvfmt;
use crate::error::{Error, Result};
use crate::geometry::FeasibleSet;
use crate::losses::LossSequence;
use crate::steppers::{SecantPair, StepPolicy};

/// Projection movements above this mark the round as projection-active.
const PROJECTION_ACTIVITY_TOL: f64 = 1e-12;

/// Run metadata carried alongside the per-round series.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub seed: u64,
    pub policy: String,
    pub set: String,
    pub horizon: usize,
    pub dim: usize,
}

/// Everything one run produced, round by round (1-based round `k` lives at
/// index `k - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// Played iterates `x(k)`; always feasible.
    pub iterates: Vec<DVector<f64>>,
    /// Loss values `f_k(x(k))`.
    pub losses: Vec<f64>,
    /// Gradients `g(k) = grad f_k(x(k))`.
    pub gradients: Vec<DVector<f64>>,
    /// Step sizes `alpha(k)` chosen at round `k`.
    pub steps: Vec<f64>,
    /// True where the policy fell back on a degenerate secant pair.
    pub degenerate: Vec<bool>,
    /// True where the projection that produced `x(k)` moved the point.
    pub projection_active: Vec<bool>,
    pub meta: RunMeta,
}

impl TrajectoryRecord {
    pub fn rounds(&self) -> usize {
        self.iterates.len()
    }

    /// Aggregate loss `f(K) = sum_k f_k(x(k))`.
    pub fn aggregate_loss(&self) -> f64 {
        self.losses.iter().sum()
    }

    pub fn degenerate_rounds(&self) -> usize {
        self.degenerate.iter().filter(|&&d| d).count()
    }

    /// The `K - 1` secant pairs of the played trajectory, in round order.
    pub fn secant_pairs(&self) -> impl Iterator<Item = SecantPair> + '_ {
        self.iterates
            .windows(2)
            .zip(self.gradients.windows(2))
            .map(|(xs, gs)| SecantPair {
                s: &xs[1] - &xs[0],
                y: &gs[1] - &gs[0],
            })
    }

    /// CSV export: `k,x_1..x_n,loss,grad_norm,alpha,degenerate,projected`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let dim = self.meta.dim;
        let mut header = String::from("k");
        for i in 1..=dim {
            header.push_str(&format!(",x_{i}"));
        }
        header.push_str(",loss,grad_norm,alpha,degenerate,projected");
        writeln!(out, "{header}")?;
        for k in 0..self.rounds() {
            let mut row = format!("{}", k + 1);
            for i in 0..dim {
                row.push(',');
                row.push_str(&csvfmt::float17(self.iterates[k][i]));
            }
            row.push(',');
            row.push_str(&csvfmt::float17(self.losses[k]));
            row.push(',');
            row.push_str(&csvfmt::float17(self.gradients[k].norm()));
            row.push(',');
            row.push_str(&csvfmt::float17(self.steps[k]));
            row.push(',');
            row.push_str(csvfmt::boolean(self.degenerate[k]));
            row.push(',');
            row.push_str(csvfmt::boolean(self.projection_active[k]));
            writeln!(out, "{row}")?;
        }
        Ok(())
    }
}

fn ensure_finite(round: usize, what: &str, values: &DVector<f64>) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure {
            round,
            message: format!("{what} is not finite"),
        });
    }
    Ok(())
}

/// Runs the online loop for `rounds` rounds (at most the sequence horizon).
///
/// `x0` is projected onto the set if needed; the round-1 prediction is that
/// projected point. Deterministic given all inputs.
pub fn run(
    seq: &LossSequence,
    policy: &mut StepPolicy,
    set: &FeasibleSet,
    x0: &DVector<f64>,
    rounds: usize,
) -> Result<TrajectoryRecord> {
    if rounds == 0 {
        return Err(Error::invalid("a run needs at least one round"));
    }
    if rounds > seq.horizon() {
        return Err(Error::invalid(format!(
            "run length {rounds} exceeds the sequence horizon {}",
            seq.horizon()
        )));
    }
    if seq.dim() != set.dim() || x0.len() != set.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: sequence {}, set {}, x0 {}",
            seq.dim(),
            set.dim(),
            x0.len()
        )));
    }

    let dim = set.dim();
    let mut record = TrajectoryRecord {
        iterates: Vec::with_capacity(rounds),
        losses: Vec::with_capacity(rounds),
        gradients: Vec::with_capacity(rounds),
        steps: Vec::with_capacity(rounds),
        degenerate: Vec::with_capacity(rounds),
        projection_active: Vec::with_capacity(rounds),
        meta: RunMeta {
            seed: seq.seed(),
            policy: policy.descriptor(),
            set: set.descriptor(),
            horizon: rounds,
            dim,
        },
    };

    ensure_finite(1, "starting point", x0)?;
    let mut x = set.project(x0)?;
    let mut projected = (&x - x0).norm() > PROJECTION_ACTIVITY_TOL;
    let mut previous: Option<(DVector<f64>, DVector<f64>)> = None;

    for k in 1..=rounds {
        ensure_finite(k, "iterate", &x)?;
        let loss = seq.generate(k)?;
        let value = loss.evaluate(&x)?;
        if !value.is_finite() {
            return Err(Error::NumericalFailure {
                round: k,
                message: "loss value is not finite".into(),
            });
        }
        let gradient = loss.gradient(&x)?;
        ensure_finite(k, "gradient", &gradient)?;

        let pair = previous.as_ref().map(|(px, pg)| SecantPair {
            s: &x - px,
            y: &gradient - pg,
        });
        let choice = policy.next_step(pair.as_ref(), k);

        record.iterates.push(x.clone());
        record.losses.push(value);
        record.gradients.push(gradient.clone());
        record.steps.push(choice.alpha);
        record.degenerate.push(choice.degenerate);
        record.projection_active.push(projected);

        let raw_next = &x - &gradient * choice.alpha;
        let next = set.project(&raw_next)?;
        projected = (&next - &raw_next).norm() > PROJECTION_ACTIVITY_TOL;
        previous = Some((x, gradient));
        x = next;
    }

    Ok(record)
}
