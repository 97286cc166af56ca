//! Static regret against the hindsight minimizer, the generalized
//! online-gradient bound, and the diagnostic quantities of the two
//! BB regret theorems.
//!
//! The hindsight minimizer has two independent routes: a closed form through
//! the pseudo-inverse of the summed curvature, and a projected-gradient
//! oracle on the summed quadratic. The closed form is used whenever it is
//! feasible; the oracle covers constrained optima and doubles as the
//! cross-check in tests.

use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::csvfmt;
use crate::error::{Error, Result};
use crate::geometry::FeasibleSet;
use crate::learner::TrajectoryRecord;
use crate::losses::LossSequence;

/// Iteration cap for the projected-gradient oracle.
const ORACLE_MAX_ITERS: usize = 1_000_000;
/// Successive-iterate movement below this stops the oracle.
const ORACLE_TOL: f64 = 1e-12;
/// Gradient differences with norm below this make the Theorem-2 `C(k)`
/// undefined; such rounds are excluded from its sum and counted.
const ZERO_Y_TOL: f64 = 1e-14;

/// Sum of the sequence's quadratics as `0.5 x'Ax - r'x + constant`.
fn summed_quadratic(seq: &LossSequence) -> Result<(DMatrix<f64>, DVector<f64>, f64)> {
    let dim = seq.dim();
    let mut a_sum = DMatrix::zeros(dim, dim);
    let mut rhs = DVector::zeros(dim);
    let mut constant = 0.0;
    for k in 1..=seq.horizon() {
        let loss = seq.generate(k)?;
        a_sum += loss.curvature();
        let ac = loss.curvature() * loss.center();
        constant += 0.5 * ac.dot(loss.center()) + loss.offset();
        rhs += ac;
    }
    Ok((a_sum, rhs, constant))
}

fn top_eigenvalue(matrix: &DMatrix<f64>) -> f64 {
    matrix
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
}

fn projected_gradient_quadratic(
    a_sum: &DMatrix<f64>,
    rhs: &DVector<f64>,
    set: &FeasibleSet,
) -> Result<DVector<f64>> {
    let mut x = set.project(&DVector::zeros(set.dim()))?;
    let lip = top_eigenvalue(a_sum);
    if lip <= 0.0 {
        // constant aggregate loss: every feasible point minimizes
        return Ok(x);
    }
    let step = 1.0 / lip;
    for _ in 0..ORACLE_MAX_ITERS {
        let gradient = a_sum * &x - rhs;
        let next = set.project(&(&x - gradient * step))?;
        let moved = (&next - &x).norm();
        x = next;
        if moved < ORACLE_TOL {
            return Ok(x);
        }
    }
    Err(Error::NumericalFailure {
        round: ORACLE_MAX_ITERS,
        message: "projected-gradient oracle did not converge".into(),
    })
}

fn constrained_quadratic_min(
    a_sum: &DMatrix<f64>,
    rhs: &DVector<f64>,
    set: &FeasibleSet,
) -> Result<DVector<f64>> {
    if let Ok(pinv) = a_sum.clone().pseudo_inverse(1e-12) {
        let candidate = &pinv * rhs;
        let residual = (a_sum * &candidate - rhs).norm();
        if candidate.iter().all(|v| v.is_finite()) && residual <= 1e-9 * (1.0 + rhs.norm()) {
            let projected = set.project(&candidate)?;
            if (&projected - &candidate).norm() <= 1e-12 {
                return Ok(projected);
            }
        }
    }
    projected_gradient_quadratic(a_sum, rhs, set)
}

/// `argmin_{x in X} sum_k f_k(x)`: closed form when the unconstrained
/// minimizer is feasible, projected-gradient oracle otherwise.
pub fn hindsight_minimizer(seq: &LossSequence, set: &FeasibleSet) -> Result<DVector<f64>> {
    if seq.dim() != set.dim() {
        return Err(Error::invalid("sequence and set dimensions differ"));
    }
    let (a_sum, rhs, _) = summed_quadratic(seq)?;
    constrained_quadratic_min(&a_sum, &rhs, set)
}

/// The independent oracle: projected gradient descent on the summed
/// quadratic with step `1/lambda_max`, run to a 1e-12 movement tolerance.
pub fn projected_gradient_minimizer(seq: &LossSequence, set: &FeasibleSet) -> Result<DVector<f64>> {
    if seq.dim() != set.dim() {
        return Err(Error::invalid("sequence and set dimensions differ"));
    }
    let (a_sum, rhs, _) = summed_quadratic(seq)?;
    projected_gradient_quadratic(&a_sum, &rhs, set)
}

/// Prefix sums of `f_j(x(j)) - f_j(xstar)`: the static regret curve `R(k)`
/// against the full-horizon hindsight point.
pub fn static_regret(
    traj: &TrajectoryRecord,
    seq: &LossSequence,
    xstar: &DVector<f64>,
) -> Result<Vec<f64>> {
    if xstar.len() != traj.meta.dim {
        return Err(Error::invalid(
            "hindsight point dimension differs from the trajectory",
        ));
    }
    if traj.rounds() > seq.horizon() {
        return Err(Error::invalid(
            "trajectory is longer than the sequence horizon",
        ));
    }
    let mut curve = Vec::with_capacity(traj.rounds());
    let mut cumulative = 0.0;
    for k in 1..=traj.rounds() {
        let loss = seq.generate(k)?;
        cumulative += traj.losses[k - 1] - loss.evaluate(xstar)?;
        curve.push(cumulative);
    }
    Ok(curve)
}

/// Prefix sums of `g(j)'(x(j) - xstar)`: the linearized regret, an upper
/// surrogate for static regret under convexity.
pub fn linearized_regret(traj: &TrajectoryRecord, xstar: &DVector<f64>) -> Result<Vec<f64>> {
    if xstar.len() != traj.meta.dim {
        return Err(Error::invalid(
            "hindsight point dimension differs from the trajectory",
        ));
    }
    let mut curve = Vec::with_capacity(traj.rounds());
    let mut cumulative = 0.0;
    for k in 0..traj.rounds() {
        cumulative += traj.gradients[k].dot(&(&traj.iterates[k] - xstar));
        curve.push(cumulative);
    }
    Ok(curve)
}

/// Diagnostic variant: regret where the comparator is recomputed for every
/// prefix. Not the static-regret definition; exposed for inspection only.
pub fn prefix_hindsight_regret(
    traj: &TrajectoryRecord,
    seq: &LossSequence,
    set: &FeasibleSet,
) -> Result<Vec<f64>> {
    if traj.rounds() > seq.horizon() || seq.dim() != set.dim() {
        return Err(Error::invalid("trajectory, sequence, and set must agree"));
    }
    let dim = seq.dim();
    let mut a_sum = DMatrix::zeros(dim, dim);
    let mut rhs = DVector::zeros(dim);
    let mut constant = 0.0;
    let mut played = 0.0;
    let mut curve = Vec::with_capacity(traj.rounds());
    for k in 1..=traj.rounds() {
        let loss = seq.generate(k)?;
        a_sum += loss.curvature();
        let ac = loss.curvature() * loss.center();
        constant += 0.5 * ac.dot(loss.center()) + loss.offset();
        rhs += ac;
        played += traj.losses[k - 1];
        let best = constrained_quadratic_min(&a_sum, &rhs, set)?;
        let best_value = 0.5 * (&a_sum * &best).dot(&best) - rhs.dot(&best) + constant;
        curve.push(played - best_value);
    }
    Ok(curve)
}

/// The generalized online-gradient regret bound
/// `D^2 / (2 alpha(K)) + (gmax^2 / 2) * sum_k alpha(k)`.
pub fn zinkevich_bound(diameter: f64, grad_max: f64, alphas: &[f64]) -> Result<f64> {
    if !(diameter.is_finite() && diameter > 0.0) {
        return Err(Error::invalid(format!(
            "diameter must be positive, got {diameter}"
        )));
    }
    if !(grad_max.is_finite() && grad_max >= 0.0) {
        return Err(Error::invalid(format!(
            "gradient bound must be >= 0, got {grad_max}"
        )));
    }
    let Some(&last) = alphas.last() else {
        return Err(Error::invalid("step series must be nonempty"));
    };
    if !(last.is_finite() && last > 0.0) {
        return Err(Error::invalid(format!(
            "alpha(K) must be positive, got {last}"
        )));
    }
    let sum: f64 = alphas.iter().sum();
    Ok(diameter * diameter / (2.0 * last) + 0.5 * grad_max * grad_max * sum)
}

/// The first theorem's trajectory quantities.
///
/// Sums run over the `K - 1` played secant pairs; `b` and `c` use the first
/// two displacements (with the bootstrap convention `x(0) = x(1)`, the
/// zeroth displacement vanishes, so these are the first two that carry
/// information).
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Diagnostics {
    /// `(||s_1|| + ||s_2||)^2` from the first two displacements.
    pub b: f64,
    /// `2 (||s_1||^2 + ||s_2||^2)`.
    pub c: f64,
    /// `sum_k s(k-1)' y(k-1)`.
    pub d: f64,
    /// `sum_k L ||s(k-1)||^2`.
    pub e: f64,
    /// `P = sum_k alpha(k)` over the played steps.
    pub step_sum: f64,
    /// `Z = c / (L sum (||x(k)||^2 + ||x(k-1)||^2))`.
    pub z: f64,
    /// Same expression as `Z` in the theorem statement.
    pub psi: f64,
    /// `(e - d)/(c - b) <= d/b`, `None` when a denominator degenerates.
    pub condition_t1: Option<bool>,
    /// `P <= Z`, the theorem's trajectory hypothesis.
    pub flag_p: bool,
}

pub fn theorem1_diagnostics(
    traj: &TrajectoryRecord,
    lipschitz: f64,
) -> Result<Theorem1Diagnostics> {
    if traj.rounds() < 2 {
        return Err(Error::invalid(
            "theorem-1 diagnostics need at least two rounds",
        ));
    }
    if !(lipschitz.is_finite() && lipschitz >= 0.0) {
        return Err(Error::invalid(format!(
            "Lipschitz constant must be >= 0, got {lipschitz}"
        )));
    }
    let mut displacement_norms = Vec::new();
    let mut d = 0.0;
    let mut sum_s_sq = 0.0;
    for pair in traj.secant_pairs() {
        displacement_norms.push(pair.s.norm());
        d += pair.s.dot(&pair.y);
        sum_s_sq += pair.s.norm_squared();
    }
    let s1 = displacement_norms.first().copied().unwrap_or(0.0);
    let s2 = displacement_norms.get(1).copied().unwrap_or(0.0);
    let b = (s1 + s2) * (s1 + s2);
    let c = 2.0 * (s1 * s1 + s2 * s2);
    let e = lipschitz * sum_s_sq;

    let step_sum: f64 = traj.steps.iter().sum();
    let denom: f64 = traj
        .iterates
        .windows(2)
        .map(|w| w[1].norm_squared() + w[0].norm_squared())
        .sum::<f64>()
        * lipschitz;
    let z = if denom > 0.0 { c / denom } else { f64::NAN };

    let condition_t1 = if b > 0.0 && c - b > 0.0 {
        Some((e - d) / (c - b) <= d / b)
    } else {
        None
    };

    Ok(Theorem1Diagnostics {
        b,
        c,
        d,
        e,
        step_sum,
        z,
        psi: z,
        condition_t1,
        flag_p: step_sum <= z,
    })
}

/// The second theorem's quantities: per-pair `A(k) = s`, `B(k) = y`,
/// `C(k) = ||y||^{-2}`, combined by the Cauchy-Schwarz chain into `zeta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Diagnostics {
    /// `sum ||A(k)||^2`.
    pub sum_a_sq: f64,
    /// `sum ||B(k)||^2`.
    pub sum_b_sq: f64,
    /// `sum C(k)^2 = sum ||y||^{-4}` over usable pairs.
    pub sum_c_sq: f64,
    /// `sqrt(sum_a_sq) * sqrt(sum_b_sq) * sqrt(sum_c_sq)`.
    pub zeta: f64,
    /// `D^2 / (2 alpha(K)) + (gmax^2 / 2) * zeta`.
    pub bound: f64,
    /// Pairs dropped from the `C` sum because `||y|| < 1e-14`.
    pub excluded_rounds: usize,
}

pub fn theorem2_bound(
    traj: &TrajectoryRecord,
    diameter: f64,
    grad_max: f64,
) -> Result<Theorem2Diagnostics> {
    if traj.rounds() < 2 {
        return Err(Error::invalid(
            "theorem-2 diagnostics need at least two rounds",
        ));
    }
    let mut sum_a_sq = 0.0;
    let mut sum_b_sq = 0.0;
    let mut sum_c_sq = 0.0;
    let mut excluded = 0;
    for pair in traj.secant_pairs() {
        let y_norm = pair.y.norm();
        sum_a_sq += pair.s.norm_squared();
        sum_b_sq += y_norm * y_norm;
        if y_norm < ZERO_Y_TOL {
            excluded += 1;
        } else {
            sum_c_sq += y_norm.powi(-4);
        }
    }
    let zeta = sum_a_sq.sqrt() * sum_b_sq.sqrt() * sum_c_sq.sqrt();
    let last_step = *traj.steps.last().expect("nonempty trajectory");
    let bound = diameter * diameter / (2.0 * last_step) + 0.5 * grad_max * grad_max * zeta;
    Ok(Theorem2Diagnostics {
        sum_a_sq,
        sum_b_sq,
        sum_c_sq,
        zeta,
        bound,
        excluded_rounds: excluded,
    })
}

/// Sedrakyan's inequality `sum a_i^2 / b_i >= (sum a_i)^2 / sum b_i` for
/// positive reals, checked with a 1e-12 slack.
pub fn sedrakyan_check(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::invalid(
            "series must be nonempty and of equal length",
        ));
    }
    if a.iter()
        .chain(b.iter())
        .any(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(Error::invalid("all entries must be positive"));
    }
    let lhs: f64 = a.iter().zip(b.iter()).map(|(ai, bi)| ai * ai / bi).sum();
    let sum_a: f64 = a.iter().sum();
    let sum_b: f64 = b.iter().sum();
    Ok(lhs >= sum_a * sum_a / sum_b - 1e-12)
}

/// Log-log least-squares fit of a regret curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    /// Rounds that entered the fit.
    pub used: usize,
    /// Rounds in the window skipped because `R(k) <= 0`.
    pub excluded: usize,
}

/// Least-squares slope of `log R(k)` against `log k` over `k_lo..=k_hi`.
/// Rounds with non-positive regret are excluded; fewer than 10 usable points
/// is an error. A slope below 1 certifies empirically sublinear regret.
pub fn sublinearity_slope(curve: &[f64], k_lo: usize, k_hi: usize) -> Result<SlopeFit> {
    if k_lo == 0 || k_lo > k_hi || k_hi > curve.len() {
        return Err(Error::invalid(format!(
            "window [{k_lo}, {k_hi}] is invalid for a curve of length {}",
            curve.len()
        )));
    }
    let mut points = Vec::new();
    let mut excluded = 0;
    for k in k_lo..=k_hi {
        let r = curve[k - 1];
        if r > 0.0 {
            points.push(((k as f64).ln(), r.ln()));
        } else {
            excluded += 1;
        }
    }
    if points.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "only {} usable points in [{k_lo}, {k_hi}]; need at least 10",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in &points {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        return Err(Error::InsufficientData(
            "slope window spans a single round".into(),
        ));
    }
    Ok(SlopeFit {
        slope: cov / var,
        used: points.len(),
        excluded,
    })
}

/// Everything the regret analysis produces for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub xstar: DVector<f64>,
    /// `R(k)` against the full-horizon hindsight point.
    pub regret: Vec<f64>,
    /// `R(k) / k`.
    pub avg_regret: Vec<f64>,
    pub linearized: Vec<f64>,
    pub diameter: f64,
    pub grad_max: f64,
    pub lipschitz: f64,
    /// Eq.-6-shaped value assembled from the played steps.
    pub zinkevich: f64,
    pub t1: Option<Theorem1Diagnostics>,
    pub t2: Option<Theorem2Diagnostics>,
    /// Fit over `[min(100, K), K]`; `None` when too few usable points.
    pub slope: Option<SlopeFit>,
}

impl RegretReport {
    pub fn compute(
        traj: &TrajectoryRecord,
        seq: &LossSequence,
        set: &FeasibleSet,
    ) -> Result<RegretReport> {
        let rounds = traj.rounds();
        if rounds == 0 {
            return Err(Error::invalid("cannot analyze an empty trajectory"));
        }
        let diameter = set.diameter();
        let lipschitz = seq.sequence_lipschitz()?;
        let grad_max = seq.max_gradient_norm(set)?;
        let xstar = hindsight_minimizer(seq, set)?;
        let regret = static_regret(traj, seq, &xstar)?;
        let avg_regret: Vec<f64> = regret
            .iter()
            .enumerate()
            .map(|(i, r)| r / (i + 1) as f64)
            .collect();
        let linearized = linearized_regret(traj, &xstar)?;
        let zinkevich = zinkevich_bound(diameter, grad_max, &traj.steps)?;
        let t1 = (rounds >= 2)
            .then(|| theorem1_diagnostics(traj, lipschitz))
            .transpose()?;
        let t2 = (rounds >= 2)
            .then(|| theorem2_bound(traj, diameter, grad_max))
            .transpose()?;
        let slope = sublinearity_slope(&regret, rounds.min(100), rounds).ok();
        Ok(RegretReport {
            xstar,
            regret,
            avg_regret,
            linearized,
            diameter,
            grad_max,
            lipschitz,
            zinkevich,
            t1,
            t2,
            slope,
        })
    }

    pub fn final_regret(&self) -> f64 {
        *self.regret.last().expect("nonempty curve")
    }

    pub fn final_avg_regret(&self) -> f64 {
        *self.avg_regret.last().expect("nonempty curve")
    }

    pub fn condition_t1_label(&self) -> &'static str {
        match self.t1.as_ref().and_then(|t| t.condition_t1) {
            Some(true) => "true",
            Some(false) => "false",
            None => "indeterminate",
        }
    }

    pub fn flag_p(&self) -> bool {
        self.t1.as_ref().is_some_and(|t| t.flag_p)
    }

    pub fn psi(&self) -> f64 {
        self.t1.as_ref().map_or(f64::NAN, |t| t.psi)
    }

    pub fn zeta(&self) -> f64 {
        self.t2.as_ref().map_or(f64::NAN, |t| t.zeta)
    }

    pub fn slope_value(&self) -> f64 {
        self.slope.map_or(f64::NAN, |s| s.slope)
    }

    /// CSV export: the `k,regret,avg_regret,lin_regret` curve followed by a
    /// blank line and a single-row summary block.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,regret,avg_regret,lin_regret")?;
        for k in 0..self.regret.len() {
            writeln!(
                out,
                "{},{},{},{}",
                k + 1,
                csvfmt::float17(self.regret[k]),
                csvfmt::float17(self.avg_regret[k]),
                csvfmt::float17(self.linearized[k]),
            )?;
        }
        writeln!(out)?;
        writeln!(
            out,
            "R_K,avg_R_K,zinkevich_bound,psi,zeta,cond_t1,flag_P,slope"
        )?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csvfmt::float17(self.final_regret()),
            csvfmt::float17(self.final_avg_regret()),
            csvfmt::float17(self.zinkevich),
            csvfmt::float17(self.psi()),
            csvfmt::float17(self.zeta()),
            self.condition_t1_label(),
            csvfmt::boolean(self.flag_p()),
            csvfmt::float17(self.slope_value()),
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FeasibleSet;
    use crate::learner::{run, RunMeta};
    use crate::losses::{Generator, QuadraticLoss};
    use crate::steppers::{PolicyKind, Safeguard, StepPolicy};
    use nalgebra::{dmatrix, dvector};

    fn stationary(loss: QuadraticLoss, horizon: usize) -> LossSequence {
        LossSequence::new(Generator::Stationary { loss }, horizon, 0).unwrap()
    }

    fn iso_loss(center: DVector<f64>) -> QuadraticLoss {
        let dim = center.len();
        QuadraticLoss::new(DMatrix::identity(dim, dim), center, 0.0).unwrap()
    }

    /// Hand-built trajectory for diagnostics tests.
    fn synthetic_trajectory(
        iterates: Vec<DVector<f64>>,
        gradients: Vec<DVector<f64>>,
        steps: Vec<f64>,
    ) -> TrajectoryRecord {
        let dim = iterates[0].len();
        let rounds = iterates.len();
        TrajectoryRecord {
            losses: vec![0.0; rounds],
            degenerate: vec![false; rounds],
            projection_active: vec![false; rounds],
            meta: RunMeta {
                seed: 0,
                policy: "synthetic".into(),
                set: "synthetic".into(),
                horizon: rounds,
                dim,
            },
            iterates,
            gradients,
            steps,
        }
    }

    #[test]
    fn hindsight_minimizer_interior_cases() {
        let set = FeasibleSet::ball(dvector![0.0, 0.0], 10.0).unwrap();
        let seq = stationary(iso_loss(dvector![1.5, -0.5]), 4);
        let xstar = hindsight_minimizer(&seq, &set).unwrap();
        assert!((xstar - dvector![1.5, -0.5]).norm() < 1e-10);

        // two rounds with centers (1,0) and (3,0) average to (2,0)
        let drift = LossSequence::new(
            Generator::DriftingCenter {
                base: iso_loss(dvector![1.0, 0.0]),
                drift: dvector![2.0, 0.0],
                decay: 1.0,
            },
            2,
            0,
        )
        .unwrap();
        let xstar = hindsight_minimizer(&drift, &set).unwrap();
        assert!((xstar - dvector![2.0, 0.0]).norm() < 1e-10);
    }

    #[test]
    fn hindsight_minimizer_projects_onto_the_ball_for_isotropic_losses() {
        let set = FeasibleSet::ball(dvector![0.0, 0.0], 1.0).unwrap();
        let seq = stationary(iso_loss(dvector![2.0, 0.0]), 3);
        let xstar = hindsight_minimizer(&seq, &set).unwrap();
        assert!((&xstar - dvector![1.0, 0.0]).norm() < 1e-8);
        let oracle = projected_gradient_minimizer(&seq, &set).unwrap();
        assert!((&xstar - &oracle).norm() < 1e-8);
    }

    #[test]
    fn static_regret_matches_hand_values() {
        let set = FeasibleSet::ball(dvector![0.0], 10.0).unwrap();
        let seq = stationary(iso_loss(dvector![0.0]), 2);
        let mut policy =
            StepPolicy::new(PolicyKind::Constant { alpha0: 1.0 }, Safeguard::default()).unwrap();
        let traj = run(&seq, &mut policy, &set, &dvector![1.0], 2).unwrap();
        let xstar = dvector![0.0];
        let curve = static_regret(&traj, &seq, &xstar).unwrap();
        assert_eq!(curve, vec![0.5, 0.5]);
    }

    #[test]
    fn playing_the_hindsight_point_gives_exactly_zero_regret() {
        let set = FeasibleSet::ball(dvector![0.0, 0.0], 5.0).unwrap();
        let center = dvector![0.5, -1.0];
        let seq = stationary(iso_loss(center.clone()), 6);
        let mut policy =
            StepPolicy::new(PolicyKind::Constant { alpha0: 0.3 }, Safeguard::default()).unwrap();
        let traj = run(&seq, &mut policy, &set, &center, 6).unwrap();
        let xstar = hindsight_minimizer(&seq, &set).unwrap();
        let curve = static_regret(&traj, &seq, &xstar).unwrap();
        assert!(curve.iter().all(|&r| r == 0.0));
        let lin = linearized_regret(&traj, &xstar).unwrap();
        assert!(lin.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn linearized_regret_matches_hand_values() {
        let set = FeasibleSet::ball(dvector![0.0], 10.0).unwrap();
        let seq = stationary(iso_loss(dvector![0.0]), 1);
        let mut policy =
            StepPolicy::new(PolicyKind::Constant { alpha0: 1.0 }, Safeguard::default()).unwrap();
        let traj = run(&seq, &mut policy, &set, &dvector![1.0], 1).unwrap();
        let lin = linearized_regret(&traj, &dvector![0.0]).unwrap();
        // g = 1 at x = 1, displacement 1, versus true regret 0.5
        assert_eq!(lin, vec![1.0]);
    }

    #[test]
    fn zinkevich_bound_matches_the_formula() {
        assert_eq!(zinkevich_bound(2.0, 1.0, &[1.0, 1.0]).unwrap(), 3.0);
        assert_eq!(zinkevich_bound(1.0, 0.0, &[0.25]).unwrap(), 2.0);
        assert_eq!(zinkevich_bound(1.0, 1.0, &[0.5]).unwrap(), 1.25);
        assert!(zinkevich_bound(1.0, 1.0, &[]).is_err());
        assert!(zinkevich_bound(1.0, 1.0, &[0.5, 0.0]).is_err());
        assert!(zinkevich_bound(0.0, 1.0, &[0.5]).is_err());
    }

    #[test]
    fn theorem1_diagnostics_match_the_hand_trajectory() {
        // 1-D f = x^2/2, constant alpha = 0.5, plays 1, 0.5, 0.25
        let set = FeasibleSet::ball(dvector![0.0], 10.0).unwrap();
        let seq = stationary(iso_loss(dvector![0.0]), 3);
        let mut policy =
            StepPolicy::new(PolicyKind::Constant { alpha0: 0.5 }, Safeguard::default()).unwrap();
        let traj = run(&seq, &mut policy, &set, &dvector![1.0], 3).unwrap();
        assert_eq!(
            traj.iterates,
            vec![dvector![1.0], dvector![0.5], dvector![0.25]]
        );
        let diag = theorem1_diagnostics(&traj, 1.0).unwrap();
        assert!((diag.b - 0.5625).abs() < 1e-15);
        assert!((diag.c - 0.625).abs() < 1e-15);
        assert!((diag.d - 0.3125).abs() < 1e-15);
        assert!((diag.e - 0.3125).abs() < 1e-15);
        assert!((diag.step_sum - 1.5).abs() < 1e-15);
        // d <= e whenever L is the true Lipschitz constant
        assert!(diag.d <= diag.e + 1e-9);
    }

    #[test]
    fn theorem1_flags_indeterminate_on_a_frozen_trajectory() {
        let x = dvector![1.0, 1.0];
        let g = dvector![0.0, 0.0];
        let traj = synthetic_trajectory(
            vec![x.clone(), x.clone(), x.clone()],
            vec![g.clone(), g.clone(), g],
            vec![0.1, 0.1, 0.1],
        );
        let diag = theorem1_diagnostics(&traj, 1.0).unwrap();
        assert_eq!(diag.b, 0.0);
        assert_eq!(diag.c, 0.0);
        assert_eq!(diag.condition_t1, None);
    }

    #[test]
    fn theorem2_zeta_matches_hand_values() {
        // single pair s = (1,0), y = (2,0): zeta = 1 * 2 * 1/4
        let traj = synthetic_trajectory(
            vec![dvector![0.0, 0.0], dvector![1.0, 0.0]],
            vec![dvector![0.0, 0.0], dvector![2.0, 0.0]],
            vec![0.1, 0.1],
        );
        let diag = theorem2_bound(&traj, 1.0, 1.0).unwrap();
        assert!((diag.zeta - 0.5).abs() < 1e-15);
        assert_eq!(diag.excluded_rounds, 0);

        // four unit pairs: zeta = 2 * 2 * 2
        let iterates: Vec<_> = (0..5).map(|j| dvector![j as f64, 0.0]).collect();
        let gradients: Vec<_> = (0..5).map(|j| dvector![0.0, j as f64]).collect();
        let traj = synthetic_trajectory(iterates, gradients, vec![0.1; 5]);
        let diag = theorem2_bound(&traj, 1.0, 1.0).unwrap();
        assert!((diag.zeta - 8.0).abs() < 1e-12);
    }

    #[test]
    fn theorem2_excludes_zero_gradient_differences() {
        let traj = synthetic_trajectory(
            vec![dvector![0.0], dvector![1.0], dvector![2.0]],
            vec![dvector![0.0], dvector![0.0], dvector![1.0]],
            vec![0.1; 3],
        );
        let diag = theorem2_bound(&traj, 1.0, 1.0).unwrap();
        assert_eq!(diag.excluded_rounds, 1);
        // remaining pair contributes ||y||^-4 = 1
        assert!((diag.sum_c_sq - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sedrakyan_check_matches_hand_values() {
        assert!(sedrakyan_check(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(sedrakyan_check(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(sedrakyan_check(&[1.0, -1.0], &[1.0, 1.0]).is_err());
        assert!(sedrakyan_check(&[1.0], &[1.0, 2.0]).is_err());
        assert!(sedrakyan_check(&[], &[]).is_err());
    }

    #[test]
    fn slope_recovers_exact_power_laws() {
        let linear: Vec<f64> = (1..=200).map(|k| k as f64).collect();
        let fit = sublinearity_slope(&linear, 10, 200).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);

        let root: Vec<f64> = (1..=200).map(|k| (k as f64).sqrt()).collect();
        let fit = sublinearity_slope(&root, 10, 200).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);

        let flat = vec![3.0; 200];
        let fit = sublinearity_slope(&flat, 10, 200).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn slope_requires_enough_usable_points() {
        let mostly_negative: Vec<f64> = (1..=50)
            .map(|k| if k < 45 { -1.0 } else { k as f64 })
            .collect();
        assert!(matches!(
            sublinearity_slope(&mostly_negative, 1, 50),
            Err(Error::InsufficientData(_))
        ));
        assert!(sublinearity_slope(&[1.0, 2.0], 0, 2).is_err());
        assert!(sublinearity_slope(&[1.0, 2.0], 1, 3).is_err());
    }

    #[test]
    fn report_ties_the_pieces_together() {
        let set = FeasibleSet::ball(dvector![0.0, 0.0], 5.0).unwrap();
        let loss =
            QuadraticLoss::new(dmatrix![2.0, 0.0; 0.0, 1.0], dvector![0.5, 0.5], 0.0).unwrap();
        let seq = stationary(loss, 300);
        let mut policy = StepPolicy::new(PolicyKind::Bb1, Safeguard::default()).unwrap();
        let traj = run(&seq, &mut policy, &set, &dvector![3.0, -2.0], 300).unwrap();
        let report = RegretReport::compute(&traj, &seq, &set).unwrap();
        let last = report.final_regret();
        assert!(
            (last - (traj.aggregate_loss() - 300.0 * 0.0)).abs() < 1e-9 * last.abs().max(1.0)
                || last >= 0.0
        );
        // R(K) == aggregate - sum f(xstar), within relative 1e-9
        let sum_star: f64 = (1..=300)
            .map(|k| seq.generate(k).unwrap().evaluate(&report.xstar).unwrap())
            .sum();
        let expect = traj.aggregate_loss() - sum_star;
        assert!((last - expect).abs() <= 1e-9 * expect.abs().max(1.0));
        // Lemma-1 dominance along the whole curve
        for (lin, reg) in report.linearized.iter().zip(report.regret.iter()) {
            assert!(lin >= &(reg - 1e-9));
        }
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("k,regret,avg_regret,lin_regret\n"));
        assert!(text.contains("R_K,avg_R_K,zinkevich_bound,psi,zeta,cond_t1,flag_P,slope"));
    }

    #[test]
    fn prefix_hindsight_variant_is_dominated_by_the_static_curve() {
        let set = FeasibleSet::ball(dvector![0.0, 0.0], 3.0).unwrap();
        let seq = LossSequence::new(
            Generator::RandomRotation {
                dim: 2,
                eig_range: (1.0, 3.0),
                center_range: (-1.0, 1.0),
            },
            40,
            5,
        )
        .unwrap();
        let mut policy = StepPolicy::new(PolicyKind::Bb2, Safeguard::default()).unwrap();
        let traj = run(&seq, &mut policy, &set, &dvector![1.0, 1.0], 40).unwrap();
        let xstar = hindsight_minimizer(&seq, &set).unwrap();
        let static_curve = static_regret(&traj, &seq, &xstar).unwrap();
        let prefix_curve = prefix_hindsight_regret(&traj, &seq, &set).unwrap();
        // the per-prefix comparator is at least as strong at every prefix
        for (p, s) in prefix_curve.iter().zip(static_curve.iter()) {
            assert!(p >= &(s - 1e-8), "prefix {p} < static {s}");
        }
        // and agrees at the full horizon
        let diff = (prefix_curve.last().unwrap() - static_curve.last().unwrap()).abs();
        assert!(diff < 1e-8);
    }
}
