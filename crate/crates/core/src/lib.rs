//! Online gradient methods with Barzilai-Borwein step sizes.
//!
//! An online player repeatedly commits a point from a bounded, closed,
//! convex set, then observes a convex quadratic loss and pays it at the
//! played point. The learner here follows the gradient update
//! `x(k+1) = project(x(k) - alpha(k) grad f_k(x(k)))` with pluggable step
//! policies: the two Barzilai-Borwein formulas built from the secant pair of
//! successive iterates and gradients, an alternating BB schedule, and
//! constant/diminishing baselines.
//!
//! The regret side measures the player against the best fixed decision in
//! hindsight: static and linearized regret curves, the generalized
//! online-gradient bound, the trajectory diagnostics of the BB regret
//! theorems, and a log-log slope fit that certifies empirically sublinear
//! regret. The [`mod@bench`] module wraps all of it behind a JSON run
//! configuration and deterministic CSV outputs (see the `obb-bench` binary).

pub mod bench;
mod csvfmt;
pub mod error;
pub mod geometry;
pub mod learner;
pub mod losses;
pub mod regret;
pub mod steppers;

pub use error::{Error, Result};
pub use geometry::FeasibleSet;
pub use learner::{run, RunMeta, TrajectoryRecord};
pub use losses::{Generator, LossSequence, QuadraticLoss};
pub use regret::{
    hindsight_minimizer, linearized_regret, projected_gradient_minimizer, sedrakyan_check,
    static_regret, sublinearity_slope, theorem1_diagnostics, theorem2_bound, zinkevich_bound,
    RegretReport, SlopeFit, Theorem1Diagnostics, Theorem2Diagnostics,
};
pub use steppers::{bb1, bb2, PolicyKind, Safeguard, SecantPair, StepChoice, StepPolicy};
