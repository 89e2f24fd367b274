//! Detector-conditioned post-selection.
//!
//! A [`HeraldPattern`] places photon-number detectors on some modes. Every
//! mode without a detector is *kept*. Conditioning returns the
//! unnormalized state of the kept modes; its squared norm is the
//! probability of the heralding event.
//!
//! With only [`DetectorConstraint::Exactly`] detectors there is a single
//! detector record and the conditional state is pure. An
//! [`DetectorConstraint::AtLeast`] detector can fire with several photon
//! counts. Each distinct record is a separate [`HeraldBranch`]. Records are
//! classically distinguishable, so branches are never added coherently.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector, PolarizedMode, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorConstraint {
    /// Number-resolving detector that must report exactly `k` photons.
    Exactly(u32),
    /// Threshold-style detector satisfied by `k` or more photons.
    AtLeast(u32),
    /// No detector; the mode is kept.
    Any,
}

impl DetectorConstraint {
    pub fn accepts(self, n: u32) -> bool {
        match self {
            DetectorConstraint::Exactly(k) => n == k,
            DetectorConstraint::AtLeast(k) => n >= k,
            DetectorConstraint::Any => true,
        }
    }

    pub fn is_detector(self) -> bool {
        !matches!(self, DetectorConstraint::Any)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeraldPattern {
    num_modes: usize,
    constraints: BTreeMap<PolarizedMode, DetectorConstraint>,
}

impl HeraldPattern {
    /// No detectors at all; every mode is kept.
    pub fn none(num_modes: usize) -> Self {
        Self {
            num_modes,
            constraints: BTreeMap::new(),
        }
    }

    pub fn new(
        num_modes: usize,
        constraints: impl IntoIterator<Item = (PolarizedMode, DetectorConstraint)>,
    ) -> Result<Self> {
        let mut pattern = Self::none(num_modes);
        for (mode, c) in constraints {
            pattern = pattern.with(mode, c)?;
        }
        Ok(pattern)
    }

    pub fn with(mut self, mode: PolarizedMode, constraint: DetectorConstraint) -> Result<Self> {
        if mode.index() >= self.num_modes {
            return Err(Error::ModeOutOfRange {
                mode: mode.index(),
                modes: self.num_modes,
            });
        }
        self.constraints.insert(mode, constraint);
        Ok(self)
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn constraint(&self, mode: PolarizedMode) -> DetectorConstraint {
        self.constraints
            .get(&mode)
            .copied()
            .unwrap_or(DetectorConstraint::Any)
    }

    pub fn constraints(&self) -> impl Iterator<Item = (PolarizedMode, DetectorConstraint)> + '_ {
        self.constraints.iter().map(|(&m, &c)| (m, c))
    }

    /// Flattened indices of detector modes, ascending.
    pub fn herald_modes(&self) -> Vec<usize> {
        (0..self.num_modes)
            .filter(|&i| self.constraint(PolarizedMode::from_index(i)).is_detector())
            .collect()
    }

    /// Flattened indices of modes without a detector, ascending.
    pub fn kept_modes(&self) -> Vec<usize> {
        (0..self.num_modes)
            .filter(|&i| !self.constraint(PolarizedMode::from_index(i)).is_detector())
            .collect()
    }

    /// True when every detector is number-resolving with a fixed count.
    pub fn is_exact(&self) -> bool {
        self.constraints
            .values()
            .all(|c| !matches!(c, DetectorConstraint::AtLeast(_)))
    }

    fn accepts(&self, occ: &OccupationVector) -> bool {
        self.constraints
            .iter()
            .all(|(m, c)| c.accepts(occ.get(m.index())))
    }
}

/// One detector record and the kept-mode state it heralds.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldBranch {
    /// Photon counts on the herald modes, in [`HeraldPattern::herald_modes`] order.
    pub outcome: OccupationVector,
    /// Unnormalized kept-mode state.
    pub state: StateVector,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    pub herald_modes: Vec<usize>,
    pub kept_modes: Vec<usize>,
    pub branches: Vec<HeraldBranch>,
    /// Total heralding probability, summed over branches.
    pub probability: f64,
}

impl ConditionalState {
    /// The kept-mode state when exactly one detector record is possible.
    pub fn state(&self) -> Option<&StateVector> {
        match self.branches.as_slice() {
            [only] => Some(&only.state),
            _ => None,
        }
    }

    /// More than one detector record: the conditional state is a mixture.
    pub fn is_mixed(&self) -> bool {
        self.branches.len() > 1
    }
}

/// Post-selects `state` on `pattern`.
pub fn condition(state: &StateVector, pattern: &HeraldPattern) -> Result<ConditionalState> {
    if pattern.num_modes() != state.num_modes() {
        return Err(Error::PatternSize {
            pattern: pattern.num_modes(),
            state: state.num_modes(),
        });
    }
    let herald_modes = pattern.herald_modes();
    let kept_modes = pattern.kept_modes();
    if kept_modes.is_empty() {
        return Err(Error::NoKeptModes);
    }
    let total = state.total_photons();

    // Detector records in first-seen basis order, which is deterministic.
    let mut order: Vec<OccupationVector> = Vec::new();
    let mut groups: BTreeMap<OccupationVector, Vec<(OccupationVector, Complex64)>> =
        BTreeMap::new();
    for (occ, amp) in state.iter() {
        if !pattern.accepts(occ) {
            continue;
        }
        let outcome = occ.project(&herald_modes);
        let kept = occ.project(&kept_modes);
        groups
            .entry(outcome.clone())
            .or_insert_with(|| {
                order.push(outcome);
                Vec::new()
            })
            .push((kept, amp));
    }

    // An exact pattern always has its single record, even when nothing survives.
    if pattern.is_exact() && order.is_empty() {
        let outcome = OccupationVector::new(
            herald_modes
                .iter()
                .map(
                    |&m| match pattern.constraint(PolarizedMode::from_index(m)) {
                        DetectorConstraint::Exactly(k) => k,
                        _ => 0,
                    },
                )
                .collect(),
        );
        if outcome.total() <= total {
            order.push(outcome.clone());
            groups.insert(outcome, Vec::new());
        }
    }

    let mut branches = Vec::with_capacity(order.len());
    for outcome in order {
        let kept_total = total - outcome.total();
        let basis = Arc::new(FockBasis::new(kept_modes.len(), kept_total)?);
        let mut amps = vec![Complex64::new(0.0, 0.0); basis.len()];
        for (kept, amp) in &groups[&outcome] {
            amps[basis.position(kept)?] += amp;
        }
        let branch_state = StateVector::new(basis, amps)?;
        let probability = branch_state.norm_sqr();
        branches.push(HeraldBranch {
            outcome,
            state: branch_state,
            probability,
        });
    }
    let probability = branches.iter().map(|b| b.probability).sum();
    Ok(ConditionalState {
        herald_modes,
        kept_modes,
        branches,
        probability,
    })
}
