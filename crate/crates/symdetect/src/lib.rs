//! Symbolic detection of confluent summands.
//!
//! A tau summand with a deterministic target is confluent when it commutes with every
//! summand, itself included. For each pair this crate builds the commutation formula
//! ([`obligation`]) and tries to prove it with cheap syntactic rules ([`discharge`]):
//! contradictory guards, disjoint variable use, and self-commutation, after constant
//! folding. There is no solver; anything the rules cannot settle counts as not proven,
//! and [`smt::to_smtlib`] writes the formula out for an external prover.

mod discharge;
mod obligation;
pub mod random;
mod simplify;
pub mod smt;

use std::collections::BTreeSet;
use std::fmt;

use lppe::{Instance, Spec};

pub use discharge::{discharge, footprint, ProofResult, Rule};
pub use obligation::{candidate_summands, is_candidate, obligation, var_name, var_sort, ObVar, Obligation};
pub use simplify::{conjunction, conjuncts, simplify};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("summand {summand} is not a candidate: it must be a tau summand with a deterministic target")]
    NotCandidate { summand: usize },
    #[error("there is no summand {summand}; the specification has {count}")]
    NoSuchSummand { summand: usize, count: usize },
}

/// Outcome for one (candidate, partner) pair; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub result: ProofResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detection {
    pub candidates: Vec<usize>,
    pub pairs: Vec<PairReport>,
    pub confluent: BTreeSet<usize>,
}

impl Detection {
    /// Table with one row per pair, summands numbered from 1.
    pub fn table(&self) -> String {
        let mut out = String::from("i\tj\tresult\n");
        for p in &self.pairs {
            out.push_str(&format!("{}\t{}\t{}\n", p.i + 1, p.j + 1, p.result));
        }
        out
    }
}

impl fmt::Display for Detection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &mut dyn Iterator<Item = usize>| xs.map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(", ");
        writeln!(f, "candidates: {{{}}}", list(&mut self.candidates.iter().copied()))?;
        writeln!(f, "confluent:  {{{}}}", list(&mut self.confluent.iter().copied()))?;
        f.write_str(&self.table())
    }
}

/// Discharges every obligation of every candidate. A candidate is confluent when all of
/// its obligations are proven; pairs after the first failure are still reported.
pub fn analyse(spec: &Spec) -> Detection {
    let candidates = candidate_summands(spec);
    let mut pairs = Vec::new();
    let mut confluent = BTreeSet::new();
    for &i in &candidates {
        let mut all = true;
        for j in 0..spec.summands.len() {
            let ob = obligation(spec, i, j).expect("candidates have obligations");
            let result = discharge(&ob, spec);
            all &= result.is_proven();
            pairs.push(PairReport { i, j, result });
        }
        if all {
            confluent.insert(i);
        }
    }
    Detection { candidates, pairs, confluent }
}

pub fn detect(spec: &Spec) -> BTreeSet<usize> {
    analyse(spec).confluent
}

/// Transitions of an instantiated specification generated by any of `summands`.
pub fn generated_by(inst: &Instance, summands: &BTreeSet<usize>) -> Vec<usize> {
    (0..inst.origins.len()).filter(|&t| !inst.origins[t].is_disjoint(summands)).collect()
}
