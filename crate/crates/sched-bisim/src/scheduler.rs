use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use pa_core::{Pa, Path, Prob, StateId, SubDistribution, TransitionId};

use crate::SchedError;

/// One scheduling decision: `None` is the halting choice, `Some(t)` schedules transition `t`.
pub type Choice = BTreeMap<Option<TransitionId>, Prob>;

/// A scheduler with a finite choice table. Choices can be attached to individual paths or,
/// as a fallback, to every path ending in a given state. Paths covered by neither halt.
#[derive(Clone, Debug, Default)]
pub struct FiniteScheduler {
    by_path: HashMap<Path, Choice>,
    by_last_state: BTreeMap<StateId, Choice>,
}

fn validate_choice(pa: &Pa, last: StateId, choice: &Choice) -> Result<(), SchedError> {
    let total: Prob = choice.values().sum();
    if !total.is_one() {
        return Err(SchedError::ChoiceNotNormalized(total.to_string()));
    }
    for (t, p) in choice {
        if p < &Prob::zero() {
            return Err(SchedError::ChoiceNotNormalized(p.to_string()));
        }
        if let Some(t) = t {
            if *t >= pa.num_transitions() || pa.transition(*t).source != last {
                return Err(SchedError::ForeignTransition { transition: *t, state: last });
            }
        }
    }
    Ok(())
}

impl FiniteScheduler {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the choice for one particular path.
    pub fn set_path(&mut self, pa: &Pa, path: Path, choice: Choice) -> Result<(), SchedError> {
        validate_choice(pa, path.last(), &choice)?;
        self.by_path.insert(path, choice);
        Ok(())
    }

    /// Sets the choice for every path ending in `s` that has no path-specific entry.
    pub fn set_state(&mut self, pa: &Pa, s: StateId, choice: Choice) -> Result<(), SchedError> {
        validate_choice(pa, s, &choice)?;
        self.by_last_state.insert(s, choice);
        Ok(())
    }

    /// The choice made after `path`; the halting choice when none is recorded.
    pub fn choice(&self, path: &Path) -> Choice {
        self.by_path
            .get(path)
            .or_else(|| self.by_last_state.get(&path.last()))
            .cloned()
            .unwrap_or_else(|| Choice::from([(None, Prob::one())]))
    }

    fn prob_of(&self, path: &Path, t: Option<TransitionId>) -> Prob {
        self.choice(path).get(&t).cloned().unwrap_or_else(Prob::zero)
    }
}

/// Probability that `sched`, started in `path.start()`, produces exactly `path`.
pub fn path_probability(pa: &Pa, sched: &FiniteScheduler, path: &Path) -> Prob {
    let mut prob = Prob::one();
    for i in 0..path.len() {
        let prefix = path.prefix(i);
        let (t, succ) = path.steps()[i];
        prob *= sched.prob_of(&prefix, Some(t)) * pa.transition(t).dist.prob(&succ);
        if prob.is_zero() {
            break;
        }
    }
    prob
}

/// Limits for [`final_distribution`]'s path enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationLimits {
    pub max_path_length: usize,
    pub max_paths: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_path_length: 256, max_paths: 1_000_000 }
    }
}

/// Final-state sub-distribution of `sched` started in `s`, by enumerating maximal paths.
pub fn final_distribution(
    pa: &Pa,
    sched: &FiniteScheduler,
    s: StateId,
) -> Result<SubDistribution, SchedError> {
    final_distribution_with(pa, sched, s, EnumerationLimits::default())
}

pub fn final_distribution_with(
    pa: &Pa,
    sched: &FiniteScheduler,
    s: StateId,
    limits: EnumerationLimits,
) -> Result<SubDistribution, SchedError> {
    pa.check_state(s).map_err(SchedError::Pa)?;
    let mut finals: BTreeMap<StateId, Prob> = BTreeMap::new();
    let mut stack = vec![(Path::new(s), Prob::one())];
    let mut explored = 0usize;
    while let Some((path, prob)) = stack.pop() {
        explored += 1;
        if explored > limits.max_paths || path.len() > limits.max_path_length {
            return Err(SchedError::NotFinitelyEnumerable { explored, length: path.len() });
        }
        for (t, p) in sched.choice(&path) {
            if p.is_zero() {
                continue;
            }
            match t {
                None => *finals.entry(path.last()).or_insert_with(Prob::zero) += &prob * &p,
                Some(t) => {
                    for (succ, q) in pa.transition(t).dist.iter() {
                        let next = path.extend(pa, t, *succ).map_err(SchedError::Pa)?;
                        stack.push((next, &prob * &p * q));
                    }
                }
            }
        }
    }
    SubDistribution::new(finals).map_err(SchedError::Pa)
}
