//! Step-size policies: the two Barzilai-Borwein formulas, an alternating
//! schedule, and constant/diminishing baselines.
//!
//! The raw BB formulas live here unguarded; the policy layer clamps them to
//! `[alpha_min, alpha_max]` and substitutes a fallback step whenever the
//! secant pair is degenerate, so the online loop always receives a positive
//! finite step.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Denominators with magnitude below this are treated as degenerate.
pub const DEGENERACY_EPS: f64 = 1e-14;

/// Successive displacement `s = x(k) - x(k-1)` and gradient difference
/// `y = grad f_k(x(k)) - grad f_{k-1}(x(k-1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecantPair {
    pub s: DVector<f64>,
    pub y: DVector<f64>,
}

impl SecantPair {
    pub fn new(s: DVector<f64>, y: DVector<f64>) -> Result<Self> {
        if s.len() != y.len() {
            return Err(Error::invalid(format!(
                "secant pair dimensions differ: s has {}, y has {}",
                s.len(),
                y.len()
            )));
        }
        Ok(SecantPair { s, y })
    }
}

/// First BB step size, `s's / s'y`.
pub fn bb1(pair: &SecantPair) -> Result<f64> {
    let sy = pair.s.dot(&pair.y);
    if sy == 0.0 {
        return Err(Error::DegenerateSecant("s'y is zero in bb1".into()));
    }
    Ok(pair.s.dot(&pair.s) / sy)
}

/// Second BB step size, `s'y / y'y`.
pub fn bb2(pair: &SecantPair) -> Result<f64> {
    let yy = pair.y.dot(&pair.y);
    if yy == 0.0 {
        return Err(Error::DegenerateSecant("y is zero in bb2".into()));
    }
    Ok(pair.s.dot(&pair.y) / yy)
}

/// Which formula (or baseline schedule) a policy follows.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicyKind {
    Bb1,
    Bb2,
    /// BB1 for the first `period` rounds, BB2 for the next `period`, and so on.
    AlternatingBb {
        period: usize,
    },
    Constant {
        alpha0: f64,
    },
    /// `scale / sqrt(k)`.
    Diminishing {
        scale: f64,
    },
}

impl PolicyKind {
    pub fn is_bb(&self) -> bool {
        matches!(
            self,
            PolicyKind::Bb1 | PolicyKind::Bb2 | PolicyKind::AlternatingBb { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Bb1 => "bb1",
            PolicyKind::Bb2 => "bb2",
            PolicyKind::AlternatingBb { .. } => "alt_bb",
            PolicyKind::Constant { .. } => "constant",
            PolicyKind::Diminishing { .. } => "diminishing",
        }
    }
}

/// Clamp interval and fallback for the BB variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Safeguard {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub fallback: f64,
}

impl Default for Safeguard {
    fn default() -> Self {
        Safeguard {
            alpha_min: 1e-6,
            alpha_max: 1e3,
            fallback: 0.1,
        }
    }
}

impl Safeguard {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha_min.is_finite()
            && self.alpha_max.is_finite()
            && self.fallback.is_finite()
            && self.alpha_min > 0.0
            && self.alpha_min <= self.fallback
            && self.fallback <= self.alpha_max;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "safeguard requires 0 < alpha_min <= fallback <= alpha_max, got \
                 min={} fallback={} max={}",
                self.alpha_min, self.fallback, self.alpha_max
            )))
        }
    }
}

/// The step emitted for one round.
///
/// `degenerate` is set only when a secant pair was available but unusable
/// (tiny or non-positive denominator, non-positive or non-finite raw value).
/// The round-1 bootstrap uses the fallback too but is not flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepChoice {
    pub alpha: f64,
    pub degenerate: bool,
}

/// A per-run step-size policy; owns its round counter and last emitted step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPolicy {
    kind: PolicyKind,
    safeguard: Safeguard,
    last_step: Option<f64>,
    rounds: usize,
}

impl StepPolicy {
    pub fn new(kind: PolicyKind, safeguard: Safeguard) -> Result<Self> {
        safeguard.validate()?;
        match &kind {
            PolicyKind::AlternatingBb { period } if *period == 0 => {
                return Err(Error::invalid("alternation period must be at least 1"));
            }
            PolicyKind::Constant { alpha0 } if !(alpha0.is_finite() && *alpha0 > 0.0) => {
                return Err(Error::invalid(format!(
                    "constant step must be positive and finite, got {alpha0}"
                )));
            }
            PolicyKind::Diminishing { scale } if !(scale.is_finite() && *scale > 0.0) => {
                return Err(Error::invalid(format!(
                    "diminishing scale must be positive and finite, got {scale}"
                )));
            }
            _ => {}
        }
        Ok(StepPolicy {
            kind,
            safeguard,
            last_step: None,
            rounds: 0,
        })
    }

    pub fn kind(&self) -> &PolicyKind {
        &self.kind
    }

    pub fn safeguard(&self) -> Safeguard {
        self.safeguard
    }

    pub fn last_step(&self) -> Option<f64> {
        self.last_step
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn descriptor(&self) -> String {
        match &self.kind {
            PolicyKind::AlternatingBb { period } => format!("alt_bb(period={period})"),
            PolicyKind::Constant { alpha0 } => format!("constant(alpha0={alpha0})"),
            PolicyKind::Diminishing { scale } => format!("diminishing(scale={scale})"),
            other => other.name().to_string(),
        }
    }

    /// The step size for round `k` (1-based). BB variants need `pair` from
    /// round 2 on; they receive the fallback at `k = 1` and whenever the pair
    /// is degenerate. Only the BB variants are clamped.
    ///
    /// The policy sees only `k` and the pair, never the horizon.
    pub fn next_step(&mut self, pair: Option<&SecantPair>, k: usize) -> StepChoice {
        debug_assert!(k >= 1, "rounds are 1-based");
        let choice = match &self.kind {
            PolicyKind::Constant { alpha0 } => StepChoice {
                alpha: *alpha0,
                degenerate: false,
            },
            PolicyKind::Diminishing { scale } => StepChoice {
                alpha: scale / (k as f64).sqrt(),
                degenerate: false,
            },
            PolicyKind::Bb1 => self.safeguarded_bb(pair, true),
            PolicyKind::Bb2 => self.safeguarded_bb(pair, false),
            PolicyKind::AlternatingBb { period } => {
                let block = k.div_ceil(*period);
                self.safeguarded_bb(pair, block % 2 == 1)
            }
        };
        self.last_step = Some(choice.alpha);
        self.rounds += 1;
        choice
    }

    fn safeguarded_bb(&self, pair: Option<&SecantPair>, first_formula: bool) -> StepChoice {
        let Some(pair) = pair else {
            return StepChoice {
                alpha: self.safeguard.fallback,
                degenerate: false,
            };
        };
        let raw = if first_formula {
            let sy = pair.s.dot(&pair.y);
            (sy.abs() >= DEGENERACY_EPS).then(|| pair.s.dot(&pair.s) / sy)
        } else {
            let yy = pair.y.dot(&pair.y);
            (yy >= DEGENERACY_EPS).then(|| pair.s.dot(&pair.y) / yy)
        };
        match raw {
            Some(value) if value.is_finite() && value > 0.0 => StepChoice {
                alpha: value.clamp(self.safeguard.alpha_min, self.safeguard.alpha_max),
                degenerate: false,
            },
            _ => StepChoice {
                alpha: self.safeguard.fallback,
                degenerate: true,
            },
        }
    }
}
