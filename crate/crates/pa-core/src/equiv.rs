use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dist::{Distribution, Prob};
use crate::error::PaError;
use crate::pa::StateId;

pub type ClassId = usize;

/// A partition of `0..n`. Class ids are canonical: classes are numbered by their smallest
/// member, so two equal partitions always compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EquivRel {
    class_of: Vec<ClassId>,
    classes: Vec<Vec<StateId>>,
}

impl EquivRel {
    /// Builds the partition induced by an arbitrary labelling `key(s)`.
    pub fn from_keys<K: Ord>(keys: &[K]) -> EquivRel {
        let mut first: BTreeMap<&K, ClassId> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(keys.len());
        for k in keys {
            let next = first.len();
            class_of.push(*first.entry(k).or_insert(next));
        }
        Self::from_dense(class_of)
    }

    fn from_dense(class_of: Vec<ClassId>) -> EquivRel {
        // Ids are already assigned in order of first occurrence, hence by smallest member.
        let mut classes: Vec<Vec<StateId>> = Vec::new();
        for (s, &c) in class_of.iter().enumerate() {
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(s);
        }
        EquivRel { class_of, classes }
    }

    /// Builds a partition from explicit classes, which must cover `0..n` exactly once.
    pub fn from_classes(n: usize, classes: &[Vec<StateId>]) -> Result<EquivRel, PaError> {
        let mut key = vec![usize::MAX; n];
        for (c, members) in classes.iter().enumerate() {
            for &s in members {
                if s >= n {
                    return Err(PaError::InvalidPartition(format!("state {s} out of range")));
                }
                if key[s] != usize::MAX {
                    return Err(PaError::InvalidPartition(format!("state {s} listed twice")));
                }
                key[s] = c;
            }
        }
        if let Some(s) = key.iter().position(|&k| k == usize::MAX) {
            return Err(PaError::InvalidPartition(format!("state {s} not covered")));
        }
        Ok(Self::from_keys(&key))
    }

    pub fn identity(n: usize) -> EquivRel {
        Self::from_dense((0..n).collect())
    }

    pub fn total(n: usize) -> EquivRel {
        Self::from_dense(vec![0; n])
    }

    pub fn carrier_size(&self) -> usize {
        self.class_of.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, s: StateId) -> ClassId {
        self.class_of[s]
    }

    pub fn try_class_of(&self, s: StateId) -> Result<ClassId, PaError> {
        self.class_of.get(s).copied().ok_or(PaError::CarrierMismatch(s))
    }

    pub fn class(&self, c: ClassId) -> &[StateId] {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[Vec<StateId>] {
        &self.classes
    }

    pub fn related(&self, s: StateId, t: StateId) -> bool {
        self.class_of[s] == self.class_of[t]
    }

    /// True when every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &EquivRel) -> bool {
        self.classes
            .iter()
            .all(|c| c.iter().all(|&s| other.related(s, c[0])))
    }
}

impl std::fmt::Debug for EquivRel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.classes.iter()).finish()
    }
}

/// Pushes `mu` forward onto the classes of `r`.
pub fn lift_dist(mu: &Distribution, r: &EquivRel) -> Result<Distribution<ClassId>, PaError> {
    if let Some(&s) = mu.support().find(|&&s| s >= r.carrier_size()) {
        return Err(PaError::CarrierMismatch(s));
    }
    Ok(mu.map(|&s| r.class_of(s)))
}

/// Decides `mu ≡_R nu`: every class receives the same mass from both distributions.
pub fn dist_eq_mod_r(mu: &Distribution, nu: &Distribution, r: &EquivRel) -> Result<bool, PaError> {
    let lm = lift_dist(mu, r)?;
    let ln = lift_dist(nu, r)?;
    Ok(lm == ln)
}

/// Class masses as a sparse map; handy for sub-distributions and partial sums.
pub fn class_masses<'a>(
    entries: impl IntoIterator<Item = (&'a StateId, &'a Prob)>,
    r: &EquivRel,
) -> BTreeMap<ClassId, Prob> {
    let mut out: BTreeMap<ClassId, Prob> = BTreeMap::new();
    for (&s, p) in entries {
        *out.entry(r.class_of(s)).or_insert_with(Prob::zero) += p;
    }
    out.retain(|_, p| !p.is_zero());
    out
}
