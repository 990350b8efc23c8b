use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::PaError;

/// Exact probability value. Every semantic computation in the workspace uses this type.
pub type Prob = BigRational;

/// Parses `p/q`, `p` or a decimal-free integer into a rational.
pub fn parse_prob(text: &str) -> Result<Prob, PaError> {
    let text = text.trim();
    let bad = || PaError::BadProb(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

fn collect<K: Ord + Clone>(
    entries: impl IntoIterator<Item = (K, Prob)>,
) -> Result<BTreeMap<K, Prob>, PaError> {
    let mut map: BTreeMap<K, Prob> = BTreeMap::new();
    for (k, p) in entries {
        if p.is_negative() || p > Prob::one() {
            return Err(PaError::ProbOutOfRange(p.to_string()));
        }
        *map.entry(k).or_insert_with(Prob::zero) += p;
    }
    map.retain(|_, p| !p.is_zero());
    Ok(map)
}

/// A finitely supported probability distribution; zero entries are never stored and the
/// total mass is exactly one. Repeated keys passed to the constructor are summed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distribution<K: Ord = usize> {
    support: BTreeMap<K, Prob>,
}

impl<K: Ord + Clone> Distribution<K> {
    pub fn new(entries: impl IntoIterator<Item = (K, Prob)>) -> Result<Self, PaError> {
        let support = collect(entries)?;
        if support.is_empty() {
            return Err(PaError::EmptyDistribution);
        }
        let total: Prob = support.values().sum();
        if !total.is_one() {
            return Err(PaError::NotNormalized(total.to_string()));
        }
        Ok(Distribution { support })
    }

    pub fn dirac(k: K) -> Self {
        let mut support = BTreeMap::new();
        support.insert(k, Prob::one());
        Distribution { support }
    }

    /// Uniform distribution over the given keys (duplicates accumulate).
    pub fn uniform(keys: impl IntoIterator<Item = K>) -> Result<Self, PaError> {
        let keys: Vec<K> = keys.into_iter().collect();
        if keys.is_empty() {
            return Err(PaError::EmptyDistribution);
        }
        let p = Prob::new(BigInt::one(), BigInt::from(keys.len()));
        Self::new(keys.into_iter().map(|k| (k, p.clone())))
    }

    pub fn prob(&self, k: &K) -> Prob {
        self.support.get(k).cloned().unwrap_or_else(Prob::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Prob)> {
        self.support.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.support.keys()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_dirac(&self) -> bool {
        self.support.len() == 1
    }

    /// The single support element of a Dirac distribution.
    pub fn dirac_target(&self) -> Option<&K> {
        if self.is_dirac() {
            self.support.keys().next()
        } else {
            None
        }
    }

    /// Pushes the distribution forward along `f`, summing colliding images.
    pub fn map<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> Distribution<J> {
        let mut support: BTreeMap<J, Prob> = BTreeMap::new();
        for (k, p) in &self.support {
            *support.entry(f(k)).or_insert_with(Prob::zero) += p;
        }
        Distribution { support }
    }

    pub fn mass_of(&self, mut pred: impl FnMut(&K) -> bool) -> Prob {
        self.support
            .iter()
            .filter(|(k, _)| pred(k))
            .map(|(_, p)| p.clone())
            .sum()
    }

    pub fn as_map(&self) -> &BTreeMap<K, Prob> {
        &self.support
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Distribution<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, p)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k:?}: {p}")?;
        }
        f.write_str("}")
    }
}

/// A finitely supported sub-probability distribution (total mass at most one).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SubDistribution<K: Ord = usize> {
    support: BTreeMap<K, Prob>,
}

impl<K: Ord + Clone> SubDistribution<K> {
    pub fn new(entries: impl IntoIterator<Item = (K, Prob)>) -> Result<Self, PaError> {
        let support = collect(entries)?;
        let total: Prob = support.values().sum();
        if total > Prob::one() {
            return Err(PaError::SubNormExceeded(total.to_string()));
        }
        Ok(SubDistribution { support })
    }

    pub fn prob(&self, k: &K) -> Prob {
        self.support.get(k).cloned().unwrap_or_else(Prob::zero)
    }

    pub fn total(&self) -> Prob {
        self.support.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Prob)> {
        self.support.iter()
    }

    /// Converts to a full distribution when the mass is exactly one.
    pub fn to_distribution(&self) -> Option<Distribution<K>> {
        Distribution::new(self.support.clone()).ok()
    }

    pub fn as_map(&self) -> &BTreeMap<K, Prob> {
        &self.support
    }
}

impl<K: Ord + Clone> From<Distribution<K>> for SubDistribution<K> {
    fn from(d: Distribution<K>) -> Self {
        SubDistribution { support: d.support }
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for SubDistribution<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.support.iter().map(|(k, p)| (k, p.to_string()))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Prob {
        Prob::new(n.into(), d.into())
    }

    #[test]
    fn zero_entries_vanish_and_duplicates_add() {
        let d = Distribution::new([(1usize, q(1, 2)), (2, q(0, 1)), (1, q(1, 2))]).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.prob(&1), q(1, 1));
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(matches!(
            Distribution::new([(0usize, q(1, 3))]),
            Err(PaError::NotNormalized(_))
        ));
        assert!(matches!(
            SubDistribution::new([(0usize, q(2, 3)), (1, q(2, 3))]),
            Err(PaError::SubNormExceeded(_))
        ));
        assert!(Distribution::new([(0usize, q(-1, 2)), (1, q(3, 2))]).is_err());
    }

    #[test]
    fn parses_prob_literals() {
        assert_eq!(parse_prob("2/6").unwrap(), q(1, 3));
        assert_eq!(parse_prob(" 1 ").unwrap(), q(1, 1));
        assert!(parse_prob("1/0").is_err());
        assert!(parse_prob("0.5").is_err());
    }
}
