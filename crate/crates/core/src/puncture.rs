//! Puncturing-side pattern analysis: which encoder input bits a punctured
//! output set silences, the minimal output patterns that silence a given
//! input bit, and the complete family of puncturing patterns that produce a
//! prescribed incapable set.

use std::collections::BTreeSet;

use crate::codec::zero_llr_propagate;
use crate::domination::{BitIndex, ClosureDirection, IndexSet, Posequence};
use crate::error::{Error, Result};

/// Largest order for which the minimal-pattern family is computed. Family
/// sizes grow doubly exponentially in the order.
pub const MAX_PSI_ORDER: u32 = 5;

/// Largest order for which widely-equivalent enumeration is allowed; the
/// cross-union of minimal families can exhaust memory beyond this.
pub const MAX_EQUIVALENCE_ORDER: u32 = 4;

/// A family of index sets (all within the same `Z_{2^n}`), kept sorted and
/// free of duplicate member sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFamily {
    n: u32,
    patterns: Vec<IndexSet>,
}

impl PatternFamily {
    fn from_sorted_members(n: u32, sets: BTreeSet<Vec<u32>>) -> Self {
        let patterns = sets
            .into_iter()
            .map(|members| IndexSet::new(n, members).expect("members validated by construction"))
            .collect();
        Self { n, patterns }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Member sets in canonical (lexicographic) order.
    pub fn patterns(&self) -> &[IndexSet] {
        &self.patterns
    }

    pub fn iter(&self) -> impl Iterator<Item = &IndexSet> {
        self.patterns.iter()
    }

    pub fn contains(&self, set: &IndexSet) -> bool {
        self.patterns.iter().any(|p| p == set)
    }
}

/// The incapable input set induced by a punctured output set: the stage-0
/// zero-LLR pattern. Always the same size as the input and downward-closed.
pub fn incapable_set(punctured: &IndexSet) -> IndexSet {
    zero_llr_propagate(punctured).into_incapable()
}

/// Whether input bit `j` can be silenced by puncturing one more output bit,
/// given the incapable set already in force: true exactly when everything `j`
/// strictly dominates is already incapable.
pub fn can_make_incapable(j: BitIndex, current: &IndexSet) -> Result<bool> {
    if j.order() != current.n() {
        return Err(Error::OrderMismatch {
            left: j.order(),
            right: current.n(),
        });
    }
    if current.contains(j.value()) {
        return Err(Error::InvalidArgument(format!(
            "index {} is already incapable",
            j.value()
        )));
    }
    if let Some((member, missing)) = current.closure_witness(ClosureDirection::Downward) {
        return Err(Error::PatternNotClosed {
            direction: ClosureDirection::Downward,
            member,
            missing,
        });
    }
    Ok(j.dominated_set(true).is_subset_of(current))
}

/// The family of minimal puncturing patterns that silence input bit `j`.
///
/// Built stage by stage from the target bit outward: where the stage bit of
/// `j` is 0 each pattern element independently stays or shifts up by the
/// stage offset (a check-side zero needs only one zero parent); where it is 1
/// the pattern doubles with a shifted copy (a variable-side zero needs both).
/// Every member has size `2^weight(j)` and the family has size
/// `2^(Σ_t j̄_t · Π_{k<t} 2^{j_k})`.
pub fn psi_family(j: BitIndex) -> Result<PatternFamily> {
    let n = j.order();
    if n > MAX_PSI_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            max: MAX_PSI_ORDER,
        });
    }
    let mut family: BTreeSet<Vec<u32>> = BTreeSet::new();
    family.insert(vec![j.value()]);
    for t in 0..n {
        let step = 1u32 << t;
        let mut next = BTreeSet::new();
        if j.value() >> t & 1 == 0 {
            for q in &family {
                let width = q.len() as u32;
                for selection in 0u64..(1u64 << width) {
                    let mut grown: Vec<u32> = q
                        .iter()
                        .enumerate()
                        .map(|(pos, &e)| e + if selection >> pos & 1 == 1 { step } else { 0 })
                        .collect();
                    grown.sort_unstable();
                    next.insert(grown);
                }
            }
        } else {
            for q in &family {
                let mut grown: Vec<u32> = q.iter().flat_map(|&e| [e, e - step]).collect();
                grown.sort_unstable();
                grown.dedup();
                next.insert(grown);
            }
        }
        family = next;
    }
    Ok(PatternFamily::from_sorted_members(n, family))
}

/// The two closure-compliant members of `psi_family(j)`: the dominated set of
/// `j` and its elementwise bitwise complement.
pub fn canonical_patterns(j: BitIndex) -> (IndexSet, IndexSet) {
    let dominated = j.dominated_set(false);
    let reversed = dominated.elementwise_complement();
    (dominated, reversed)
}

/// All puncturing patterns that induce exactly the given incapable set: the
/// size-preserving cross-unions of the minimal families of its most dominant
/// members. The target must be downward-closed; no other set is achievable.
pub fn widely_equivalent_patterns(target: &IndexSet) -> Result<PatternFamily> {
    let n = target.n();
    if n > MAX_EQUIVALENCE_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            max: MAX_EQUIVALENCE_ORDER,
        });
    }
    if let Some((member, missing)) = target.closure_witness(ClosureDirection::Downward) {
        return Err(Error::PatternNotClosed {
            direction: ClosureDirection::Downward,
            member,
            missing,
        });
    }
    let mut unions: BTreeSet<Vec<u32>> = BTreeSet::new();
    unions.insert(Vec::new());
    for j in target.most_dominant().iter() {
        let family = psi_family(BitIndex::new(j, n)?)?;
        let mut next = BTreeSet::new();
        for partial in &unions {
            for pattern in family.iter() {
                let mut merged = partial.clone();
                merged.extend(pattern.iter());
                merged.sort_unstable();
                merged.dedup();
                next.insert(merged);
            }
        }
        unions = next;
    }
    let want = target.len();
    unions.retain(|u| u.len() == want);
    Ok(PatternFamily::from_sorted_members(n, unions))
}

/// The first `count` entries of a posequence, as a puncturing pattern. The
/// result is downward-closed and induces itself as the incapable set.
pub fn identical_pattern(count: usize, p: &Posequence) -> Result<IndexSet> {
    p.prefix_set(count)
}

/// The last `count` entries of a posequence, as a puncturing pattern. The
/// result is upward-closed and induces the elementwise complement of itself
/// as the incapable set, which allows puncturing to start from high-indexed
/// outputs.
pub fn reverse_pattern(count: usize, p: &Posequence) -> Result<IndexSet> {
    p.suffix_set(count)
}
