use num_traits::Zero;

use crate::error::PaError;
use crate::pa::{Label, Pa, StateId, TransitionId};

/// A finite path: a start state followed by (transition, chosen successor) steps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start: StateId,
    steps: Vec<(TransitionId, StateId)>,
}

impl Path {
    pub fn new(start: StateId) -> Path {
        Path { start, steps: Vec::new() }
    }

    /// Builds and validates a path in one go.
    pub fn from_steps(
        pa: &Pa,
        start: StateId,
        steps: impl IntoIterator<Item = (TransitionId, StateId)>,
    ) -> Result<Path, PaError> {
        pa.check_state(start)?;
        let mut path = Path::new(start);
        for (t, s) in steps {
            path = path.extend(pa, t, s)?;
        }
        Ok(path)
    }

    /// Appends a step, checking that `t` leaves the current last state and that `succ`
    /// has positive probability under it.
    pub fn extend(&self, pa: &Pa, t: TransitionId, succ: StateId) -> Result<Path, PaError> {
        if t >= pa.num_transitions() {
            return Err(PaError::UnknownTransition(t));
        }
        let tr = pa.transition(t);
        if tr.source != self.last() {
            return Err(PaError::InvalidPath(format!(
                "transition {t} leaves {} but the path ends in {}",
                tr.source,
                self.last()
            )));
        }
        if tr.dist.prob(&succ).is_zero() {
            return Err(PaError::InvalidPath(format!(
                "state {succ} has probability zero under transition {t}"
            )));
        }
        let mut steps = self.steps.clone();
        steps.push((t, succ));
        Ok(Path { start: self.start, steps })
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn last(&self) -> StateId {
        self.steps.last().map_or(self.start, |&(_, s)| s)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[(TransitionId, StateId)] {
        &self.steps
    }

    /// The path consisting of the first `i` steps.
    pub fn prefix(&self, i: usize) -> Path {
        Path { start: self.start, steps: self.steps[..i.min(self.steps.len())].to_vec() }
    }
}

/// Visible labels along the path (tau steps are dropped).
pub fn trace(pa: &Pa, path: &Path) -> Vec<Label> {
    path.steps
        .iter()
        .map(|&(t, _)| pa.transition(t).label.clone())
        .filter(|l| !l.is_tau())
        .collect()
}
