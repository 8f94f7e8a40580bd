//! The bitwise domination partial order on `Z_{2^n}`.
//!
//! Index `i` is dominated by `j` (written `i ⪯ j`) when every binary digit of
//! `i` is at most the matching digit of `j`. The order drives everything else
//! in this crate: which input bits a puncturing pattern silences, which output
//! bits a shortening pattern fixes, and which buffer interleavers are valid.
//!
//! A *posequence* is a permutation of `Z_{2^n}` that lists indices in an order
//! compatible with domination: no element is strictly dominated by a later
//! one. Prefixes of a posequence are downward-closed sets, suffixes are
//! upward-closed sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest code order supported by set operations (`N = 2^16`).
pub const MAX_ORDER: u32 = 16;

/// Largest order for which posequence enumeration is allowed. The number of
/// posequences at n=5 is already far beyond what exhaustive search can touch.
pub const MAX_ENUMERATION_ORDER: u32 = 4;

pub(crate) fn check_order(n: u32) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "code order n must be in [1, {MAX_ORDER}], got {n}"
        )));
    }
    Ok(())
}

pub(crate) fn check_index(value: u32, n: u32) -> Result<()> {
    check_order(n)?;
    if value >= (1u32 << n) {
        return Err(Error::IndexOutOfRange { value, n });
    }
    Ok(())
}

/// Returns true when `i ⪯ j`: every binary digit of `i` is at most the
/// matching digit of `j`. Equivalently, the set bits of `i` are a subset of
/// the set bits of `j`.
#[inline]
pub fn dominates(i: u32, j: u32) -> bool {
    i & !j == 0
}

/// Returns true when `i ≺ j`: `i ⪯ j` and `i ≠ j`.
#[inline]
pub fn strictly_dominates(i: u32, j: u32) -> bool {
    i != j && dominates(i, j)
}

/// The bitwise complement of `i` within `Z_{2^n}`, i.e. `(2^n - 1) - i`.
#[inline]
pub fn complement_index(i: u32, n: u32) -> u32 {
    ((1u32 << n) - 1) ^ i
}

/// A bit index paired with the code order it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitIndex {
    value: u32,
    n: u32,
}

impl BitIndex {
    pub fn new(value: u32, n: u32) -> Result<Self> {
        check_index(value, n)?;
        Ok(Self { value, n })
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    /// The code order `n`; the index lives in `Z_{2^n}`.
    #[inline]
    pub fn order(self) -> u32 {
        self.n
    }

    /// Hamming weight of the binary representation.
    #[inline]
    pub fn weight(self) -> u32 {
        self.value.count_ones()
    }

    /// Bitwise complement within the same order. An involution, and
    /// anti-monotone: `i ≺ j` implies `complement(j) ≺ complement(i)`.
    pub fn complement(self) -> Self {
        Self {
            value: complement_index(self.value, self.n),
            n: self.n,
        }
    }

    /// `self ⪯ other`. Fails when the two indices carry different orders.
    pub fn dominated_by(self, other: Self) -> Result<bool> {
        self.check_same_order(other)?;
        Ok(dominates(self.value, other.value))
    }

    /// `self ≺ other`.
    pub fn strictly_dominated_by(self, other: Self) -> Result<bool> {
        self.check_same_order(other)?;
        Ok(strictly_dominates(self.value, other.value))
    }

    /// The dominated integer set `{k : k ⪯ self}` (or `{k : k ≺ self}` when
    /// `strict`). Its size is `2^weight` (minus one when strict).
    pub fn dominated_set(self, strict: bool) -> IndexSet {
        let mut members = Vec::with_capacity(1 << self.weight());
        let mut sub = self.value;
        loop {
            if !(strict && sub == self.value) {
                members.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.value;
        }
        members.sort_unstable();
        IndexSet { n: self.n, members }
    }

    /// The dominating integer set `{k : k ⪰ self}` (or strict). Its size is
    /// `2^(n - weight)` (minus one when strict).
    pub fn dominating_set(self, strict: bool) -> IndexSet {
        let free = complement_index(self.value, self.n);
        let mut members = Vec::with_capacity(1 << free.count_ones());
        let mut sub = free;
        loop {
            let candidate = self.value | sub;
            if !(strict && candidate == self.value) {
                members.push(candidate);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        members.sort_unstable();
        IndexSet { n: self.n, members }
    }

    fn check_same_order(self, other: Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::OrderMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for BitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Direction of a domination-closure requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureDirection {
    /// Every member's dominated set is contained in the set.
    Downward,
    /// Every member's dominating set is contained in the set.
    Upward,
}

impl fmt::Display for ClosureDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureDirection::Downward => write!(f, "downward"),
            ClosureDirection::Upward => write!(f, "upward"),
        }
    }
}

/// A set of bit indices within `Z_{2^n}`, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    n: u32,
    members: Vec<u32>,
}

impl IndexSet {
    pub fn new<I: IntoIterator<Item = u32>>(n: u32, members: I) -> Result<Self> {
        check_order(n)?;
        let mut members: Vec<u32> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.last() {
            if v >= (1u32 << n) {
                return Err(Error::IndexOutOfRange { value: v, n });
            }
        }
        Ok(Self { n, members })
    }

    /// The empty set in `Z_{2^n}`. Panics on an invalid order.
    pub fn empty(n: u32) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "invalid order n={n}");
        Self {
            n,
            members: Vec::new(),
        }
    }

    /// All of `Z_{2^n}`. Panics on an invalid order.
    pub fn full(n: u32) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "invalid order n={n}");
        Self {
            n,
            members: (0..1u32 << n).collect(),
        }
    }

    /// Builds a set from a membership bitmask (bit `i` set means `i` is a
    /// member). Only meaningful for `n ≤ 6`.
    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        check_order(n)?;
        if n > 6 {
            return Err(Error::UnsupportedOrder { n, max: 6 });
        }
        let len = 1u32 << n;
        if n < 6 && mask >> len != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask {mask:#x} has bits beyond 2^{n} positions"
            )));
        }
        Ok(Self {
            n,
            members: (0..len).filter(|&i| mask >> i & 1 == 1).collect(),
        })
    }

    /// Membership bitmask, available for `n ≤ 6`.
    pub fn mask(&self) -> Option<u64> {
        if self.n > 6 {
            return None;
        }
        Some(self.members.iter().fold(0u64, |m, &v| m | 1u64 << v))
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, value: u32) -> bool {
        self.members.binary_search(&value).is_ok()
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        if self.n != other.n {
            return Err(Error::OrderMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Ok(IndexSet { n: self.n, members })
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.n == other.n && self.members.iter().all(|&v| other.contains(v))
    }

    /// Maps every member to its bitwise complement: `{ī : i ∈ self}`.
    pub fn elementwise_complement(&self) -> IndexSet {
        let mut members: Vec<u32> = self
            .members
            .iter()
            .map(|&v| complement_index(v, self.n))
            .collect();
        members.sort_unstable();
        IndexSet { n: self.n, members }
    }

    /// The set complement `Z_{2^n} \ self`.
    pub fn universe_complement(&self) -> IndexSet {
        let members = (0..1u32 << self.n).filter(|&v| !self.contains(v)).collect();
        IndexSet { n: self.n, members }
    }

    fn membership_table(&self) -> Vec<bool> {
        let mut table = vec![false; 1usize << self.n];
        for &v in &self.members {
            table[v as usize] = true;
        }
        table
    }

    /// True when the dominated set of every member is contained in the set.
    /// It suffices to check immediate predecessors (one bit cleared).
    pub fn is_downward_closed(&self) -> bool {
        self.closure_witness(ClosureDirection::Downward).is_none()
    }

    /// True when the dominating set of every member is contained in the set.
    pub fn is_upward_closed(&self) -> bool {
        self.closure_witness(ClosureDirection::Upward).is_none()
    }

    /// Returns a `(member, missing)` pair violating the closure, if any.
    pub fn closure_witness(&self, direction: ClosureDirection) -> Option<(u32, u32)> {
        let table = self.membership_table();
        for &v in &self.members {
            for t in 0..self.n {
                let neighbor = match direction {
                    ClosureDirection::Downward => {
                        if v >> t & 1 == 0 {
                            continue;
                        }
                        v & !(1 << t)
                    }
                    ClosureDirection::Upward => {
                        if v >> t & 1 == 1 {
                            continue;
                        }
                        v | 1 << t
                    }
                };
                if !table[neighbor as usize] {
                    return Some((v, neighbor));
                }
            }
        }
        None
    }

    /// The most dominant members: those not strictly dominated by any other
    /// member.
    pub fn most_dominant(&self) -> IndexSet {
        let table = self.membership_table();
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&v| {
                // v is kept unless some strict supermask is also a member
                let free = complement_index(v, self.n);
                let mut sub = free;
                loop {
                    if sub != 0 && table[(v | sub) as usize] {
                        return false;
                    }
                    if sub == 0 {
                        return true;
                    }
                    sub = (sub - 1) & free;
                }
            })
            .collect();
        IndexSet { n: self.n, members }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Checks the requested domination closure (Downward: `D_j ⊆ s` for all
/// members `j`; Upward: `G_j ⊆ s`). Empty and full sets comply both ways.
pub fn complies_with_domination(s: &IndexSet, direction: ClosureDirection) -> bool {
    s.closure_witness(direction).is_none()
}

/// Why a sequence failed posequence validation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosequenceError {
    #[error("expected {expected} entries for order n, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("entry {value} at position {position} is out of range")]
    OutOfRange { position: usize, value: u32 },
    #[error("entry {value} at position {position} repeats an earlier entry")]
    Duplicate { position: usize, value: u32 },
    #[error(
        "entry {earlier_value} at position {earlier_position} strictly dominates \
         entry {later_value} at position {later_position}"
    )]
    OrderViolation {
        earlier_position: usize,
        earlier_value: u32,
        later_position: usize,
        later_value: u32,
    },
}

/// Validates that `order` is a permutation of `Z_{2^n}` in which no element is
/// strictly dominated by an earlier one. Reports the first violation found,
/// scanning positions left to right.
pub fn check_posequence(n: u32, order: &[u32]) -> std::result::Result<(), PosequenceError> {
    let len = 1usize << n;
    if order.len() != len {
        return Err(PosequenceError::LengthMismatch {
            expected: len,
            actual: order.len(),
        });
    }
    let mut position_of = vec![usize::MAX; len];
    for (p, &v) in order.iter().enumerate() {
        if v as usize >= len {
            return Err(PosequenceError::OutOfRange {
                position: p,
                value: v,
            });
        }
        if position_of[v as usize] != usize::MAX {
            return Err(PosequenceError::Duplicate {
                position: p,
                value: v,
            });
        }
        position_of[v as usize] = p;
    }
    // Placing an element requires all its immediate predecessors (one bit
    // cleared) to be placed already; by induction this enforces the full
    // strict dominated set.
    let mut placed = vec![false; len];
    for (p, &v) in order.iter().enumerate() {
        for t in 0..n {
            if v >> t & 1 == 0 {
                continue;
            }
            let pred = v & !(1 << t);
            if !placed[pred as usize] {
                return Err(PosequenceError::OrderViolation {
                    earlier_position: p,
                    earlier_value: v,
                    later_position: position_of[pred as usize],
                    later_value: pred,
                });
            }
        }
        placed[v as usize] = true;
    }
    Ok(())
}

/// Convenience predicate over [`check_posequence`].
pub fn is_posequence(n: u32, order: &[u32]) -> bool {
    check_posequence(n, order).is_ok()
}

/// A permutation of `Z_{2^n}` compatible with the domination order: every
/// prefix is downward-closed and every suffix is upward-closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Posequence {
    n: u32,
    order: Vec<u32>,
}

impl Posequence {
    pub fn new(n: u32, order: Vec<u32>) -> Result<Self> {
        check_order(n)?;
        check_posequence(n, &order)?;
        Ok(Self { n, order })
    }

    /// The ascending order `(0, 1, ..., 2^n - 1)`, which is always valid.
    pub fn natural(n: u32) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "invalid order n={n}");
        Self {
            n,
            order: (0..1u32 << n).collect(),
        }
    }

    /// The reference buffer order shipped for `N = 16`. Used throughout the
    /// documentation examples and tests.
    pub fn reference_16() -> Self {
        Self {
            n: 4,
            order: vec![0, 1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15],
        }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// Position of each value: `inverse()[v]` is the buffer slot of `v`.
    pub fn inverse(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            inv[v as usize] = p as u32;
        }
        inv
    }

    /// The set of the first `count` entries; always downward-closed.
    pub fn prefix_set(&self, count: usize) -> Result<IndexSet> {
        if count > self.order.len() {
            return Err(Error::InvalidArgument(format!(
                "prefix of {count} entries exceeds sequence length {}",
                self.order.len()
            )));
        }
        IndexSet::new(self.n, self.order[..count].iter().copied())
    }

    /// The set of the last `count` entries; always upward-closed.
    pub fn suffix_set(&self, count: usize) -> Result<IndexSet> {
        if count > self.order.len() {
            return Err(Error::InvalidArgument(format!(
                "suffix of {count} entries exceeds sequence length {}",
                self.order.len()
            )));
        }
        IndexSet::new(
            self.n,
            self.order[self.order.len() - count..].iter().copied(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PosequenceRepr {
    n: u32,
    order: Vec<u32>,
}

impl Serialize for Posequence {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        PosequenceRepr {
            n: self.n,
            order: self.order.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Posequence {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = PosequenceRepr::deserialize(deserializer)?;
        Posequence::new(repr.n, repr.order).map_err(serde::de::Error::custom)
    }
}

fn check_enumeration_order(n: u32) -> Result<()> {
    check_order(n)?;
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            max: MAX_ENUMERATION_ORDER,
        });
    }
    Ok(())
}

/// Counts the posequences of order `n` without listing them, by dynamic
/// programming over downward-closed subsets. Supported for `n ≤ 4`.
pub fn count_posequences(n: u32) -> Result<u64> {
    check_enumeration_order(n)?;
    let len = 1u32 << n;
    let full: u32 = (1u32 << len) - 1;
    let mut dp = vec![0u64; 1usize << len];
    dp[0] = 1;
    for mask in 1..=full {
        let mut total = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let j = bits.trailing_zeros();
            bits &= bits - 1;
            let rest = mask & !(1 << j);
            // j can be the last element placed iff all its immediate
            // predecessors are present in the remainder
            let mut ok = true;
            for t in 0..n {
                if j >> t & 1 == 1 && rest >> (j & !(1 << t)) & 1 == 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                total += dp[rest as usize];
            }
        }
        dp[mask as usize] = total;
    }
    Ok(dp[full as usize])
}

/// Streams every posequence of order `n` in depth-first lexicographic order.
/// Supported for `n ≤ 4`.
pub fn enumerate_posequences(n: u32) -> Result<PosequenceIter> {
    check_enumeration_order(n)?;
    let len = 1u32 << n;
    Ok(PosequenceIter {
        n,
        len,
        path: Vec::with_capacity(len as usize),
        next_try: vec![0; len as usize],
        placed: 0,
        exhausted: false,
    })
}

/// Single-consumer stream over all posequences of a given order.
pub struct PosequenceIter {
    n: u32,
    len: u32,
    path: Vec<u32>,
    next_try: Vec<u32>,
    placed: u32,
    exhausted: bool,
}

impl PosequenceIter {
    fn candidate_ready(&self, v: u32) -> bool {
        if self.placed >> v & 1 == 1 {
            return false;
        }
        for t in 0..self.n {
            if v >> t & 1 == 1 && self.placed >> (v & !(1 << t)) & 1 == 0 {
                return false;
            }
        }
        true
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("non-empty path");
        self.placed &= !(1 << v);
    }
}

impl Iterator for PosequenceIter {
    type Item = Posequence;

    fn next(&mut self) -> Option<Posequence> {
        if self.exhausted {
            return None;
        }
        if self.path.len() == self.len as usize {
            self.pop();
        }
        loop {
            let depth = self.path.len();
            if depth == self.len as usize {
                return Some(Posequence {
                    n: self.n,
                    order: self.path.clone(),
                });
            }
            let mut chosen = None;
            let mut v = self.next_try[depth];
            while v < self.len {
                if self.candidate_ready(v) {
                    chosen = Some(v);
                    break;
                }
                v += 1;
            }
            match chosen {
                Some(v) => {
                    self.next_try[depth] = v + 1;
                    self.path.push(v);
                    self.placed |= 1 << v;
                }
                None => {
                    self.next_try[depth] = 0;
                    if depth == 0 {
                        self.exhausted = true;
                        return None;
                    }
                    self.pop();
                }
            }
        }
    }
}

/// Draws a posequence uniformly at each step among the currently placeable
/// indices. Useful for sampling-based checks at orders where exhaustive
/// enumeration is out of reach.
pub fn random_posequence<R: rand::Rng>(n: u32, rng: &mut R) -> Result<Posequence> {
    check_order(n)?;
    let len = 1usize << n;
    let mut placed = vec![false; len];
    let mut order = Vec::with_capacity(len);
    for _ in 0..len {
        let ready: Vec<u32> = (0..len as u32)
            .filter(|&v| {
                !placed[v as usize]
                    && (0..n).all(|t| v >> t & 1 == 0 || placed[(v & !(1 << t)) as usize])
            })
            .collect();
        let v = ready[rng.gen_range(0..ready.len())];
        placed[v as usize] = true;
        order.push(v);
    }
    Ok(Posequence { n, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domination_examples() {
        // 5 = (0101), 13 = (1101): 5 ⪯ 13
        assert!(dominates(5, 13));
        assert!(!dominates(13, 5));
        // 7 and 8 are not comparable
        assert!(!dominates(7, 8));
        assert!(!dominates(8, 7));
        // reflexivity
        for i in 0..16 {
            assert!(dominates(i, i));
        }
    }

    #[test]
    fn strict_domination_examples() {
        assert!(!strictly_dominates(5, 5));
        assert!(strictly_dominates(5, 13));
        for k in 1..16 {
            assert!(strictly_dominates(0, k));
        }
    }

    #[test]
    fn bit_index_checks_range_and_order() {
        assert!(BitIndex::new(16, 4).is_err());
        assert!(BitIndex::new(15, 4).is_ok());
        let a = BitIndex::new(5, 4).unwrap();
        let b = BitIndex::new(5, 3).unwrap();
        assert!(matches!(
            a.dominated_by(b),
            Err(Error::OrderMismatch { .. })
        ));
        let c = BitIndex::new(13, 4).unwrap();
        assert!(a.dominated_by(c).unwrap());
        assert!(a.strictly_dominated_by(c).unwrap());
    }

    #[test]
    fn dominated_set_examples() {
        let j0 = BitIndex::new(0, 3).unwrap();
        assert_eq!(j0.dominated_set(false).members(), &[0]);
        assert!(j0.dominated_set(true).is_empty());

        let j5 = BitIndex::new(5, 3).unwrap();
        assert_eq!(j5.dominated_set(false).members(), &[0, 1, 4, 5]);

        let j7 = BitIndex::new(7, 3).unwrap();
        assert_eq!(j7.dominated_set(false), IndexSet::full(3));
    }

    #[test]
    fn dominating_set_examples() {
        let top = BitIndex::new(7, 3).unwrap();
        assert_eq!(top.dominating_set(false).members(), &[7]);
        assert!(top.dominating_set(true).is_empty());

        let j2 = BitIndex::new(2, 3).unwrap();
        assert_eq!(j2.dominating_set(false).members(), &[2, 3, 6, 7]);

        let j0 = BitIndex::new(0, 3).unwrap();
        assert_eq!(j0.dominating_set(false), IndexSet::full(3));
    }

    #[test]
    fn set_cardinalities_follow_weight() {
        for n in 1..=4u32 {
            for v in 0..1u32 << n {
                let j = BitIndex::new(v, n).unwrap();
                assert_eq!(j.dominated_set(false).len(), 1 << j.weight());
                assert_eq!(j.dominating_set(false).len(), 1 << (n - j.weight()));
            }
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement_index(3, 3), 4);
        assert_eq!(complement_index(0, 4), 15);
        for n in 1..=4u32 {
            for v in 0..1u32 << n {
                let j = BitIndex::new(v, n).unwrap();
                assert_eq!(j.complement().complement(), j);
            }
        }
    }

    #[test]
    fn complement_is_anti_monotone() {
        let n = 4;
        for i in 0..16u32 {
            for j in 0..16u32 {
                if strictly_dominates(i, j) {
                    assert!(strictly_dominates(
                        complement_index(j, n),
                        complement_index(i, n)
                    ));
                }
            }
        }
    }

    #[test]
    fn posequence_examples() {
        assert!(is_posequence(2, &[0, 2, 1, 3]));
        assert!(!is_posequence(2, &[0, 1, 3, 2]));
        assert!(is_posequence(
            4,
            &[0, 1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15]
        ));
    }

    #[test]
    fn posequence_diagnostics() {
        // non-permutation
        assert_eq!(
            check_posequence(2, &[0, 1, 1, 2]),
            Err(PosequenceError::Duplicate {
                position: 2,
                value: 1
            })
        );
        assert_eq!(
            check_posequence(2, &[0, 1, 4, 2]),
            Err(PosequenceError::OutOfRange {
                position: 2,
                value: 4
            })
        );
        assert!(matches!(
            check_posequence(2, &[0, 1, 2]),
            Err(PosequenceError::LengthMismatch {
                expected: 4,
                actual: 3
            })
        ));
        // 3 appears before the 2 it dominates
        assert_eq!(
            check_posequence(2, &[0, 1, 3, 2]),
            Err(PosequenceError::OrderViolation {
                earlier_position: 2,
                earlier_value: 3,
                later_position: 3,
                later_value: 2,
            })
        );
    }

    #[test]
    fn posequence_counts_match_reference_table() {
        assert_eq!(count_posequences(1).unwrap(), 1);
        assert_eq!(count_posequences(2).unwrap(), 2);
        assert_eq!(count_posequences(3).unwrap(), 48);
        assert!(matches!(
            count_posequences(5),
            Err(Error::UnsupportedOrder { n: 5, max: 4 })
        ));
    }

    #[test]
    fn enumeration_agrees_with_count_close_to_exhaustion() {
        for n in 1..=3u32 {
            let listed = enumerate_posequences(n).unwrap().count() as u64;
            assert_eq!(listed, count_posequences(n).unwrap());
        }
        assert!(enumerate_posequences(5).is_err());
    }

    #[test]
    fn enumerated_posequences_are_valid_and_distinct() {
        let all: Vec<Posequence> = enumerate_posequences(3).unwrap().collect();
        assert_eq!(all.len(), 48);
        for p in &all {
            assert!(is_posequence(3, p.order()));
        }
        let mut orders: Vec<&[u32]> = all.iter().map(|p| p.order()).collect();
        orders.sort();
        orders.dedup();
        assert_eq!(orders.len(), 48);
    }

    #[test]
    fn compliance_examples() {
        let a = IndexSet::new(3, [0, 1, 4]).unwrap();
        assert!(complies_with_domination(&a, ClosureDirection::Downward));
        assert!(!complies_with_domination(&a, ClosureDirection::Upward));

        let b = IndexSet::new(3, [7, 6, 3]).unwrap();
        assert!(complies_with_domination(&b, ClosureDirection::Upward));

        for n in 1..=4 {
            let empty = IndexSet::empty(n);
            let full = IndexSet::full(n);
            for dir in [ClosureDirection::Downward, ClosureDirection::Upward] {
                assert!(complies_with_domination(&empty, dir));
                assert!(complies_with_domination(&full, dir));
            }
        }
    }

    #[test]
    fn most_dominant_examples() {
        let u = IndexSet::new(3, [0, 1, 2, 4, 5, 6]).unwrap();
        assert_eq!(u.most_dominant().members(), &[5, 6]);

        let single = IndexSet::new(3, [3]).unwrap();
        assert_eq!(single.most_dominant().members(), &[3]);

        let d5 = BitIndex::new(5, 3).unwrap().dominated_set(false);
        assert_eq!(d5.most_dominant().members(), &[5]);
    }

    #[test]
    fn prefix_and_suffix_sets() {
        let p = Posequence::reference_16();
        assert_eq!(p.prefix_set(0).unwrap(), IndexSet::empty(4));
        assert_eq!(p.suffix_set(4).unwrap().members(), &[11, 13, 14, 15]);
        assert!(p.prefix_set(17).is_err());
    }

    #[test]
    fn posequence_serde_roundtrip_validates() {
        let p = Posequence::reference_16();
        let json = serde_json::to_string(&p).unwrap();
        let back: Posequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"n":2,"order":[0,1,3,2]}"#;
        assert!(serde_json::from_str::<Posequence>(bad).is_err());
    }

    #[test]
    fn random_posequences_are_valid() {
        let mut rng = rand::thread_rng();
        for _ in 0..50 {
            let p = random_posequence(4, &mut rng).unwrap();
            assert!(is_posequence(4, p.order()));
        }
    }
}
