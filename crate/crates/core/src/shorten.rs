//! Shortening-side pattern analysis: which encoder output bits a shortened
//! input set fixes to zero, feasibility of fixing one more output, the greedy
//! constructions, and an independent generator-column oracle.

use crate::codec::generator_entry;
use crate::domination::{BitIndex, ClosureDirection, IndexSet, Posequence};
use crate::error::{Error, Result};

/// The output bits fixed to zero when the inputs in `shortened` are forced to
/// zero: exactly those columns whose entire dominating set is shortened. The
/// result is upward-closed.
pub fn fixed_set(shortened: &IndexSet) -> IndexSet {
    let n = shortened.n();
    let len = 1usize << n;
    let mut fixed = vec![false; len];
    for v in shortened.iter() {
        fixed[v as usize] = true;
    }
    // Fold an AND over supersets, one bit direction at a time: after all
    // passes, fixed[j] holds iff every k ⪰ j is shortened.
    for t in 0..n {
        let step = 1usize << t;
        for j in 0..len {
            if j & step == 0 {
                fixed[j] = fixed[j] && fixed[j | step];
            }
        }
    }
    IndexSet::new(
        n,
        fixed
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(j, _)| j as u32),
    )
    .expect("indices in range")
}

/// Whether output bit `j` can be fixed by shortening one more input bit,
/// given the fixed set already in force: true exactly when every strict
/// dominator of `j` is already fixed.
pub fn can_fix(j: BitIndex, current_fixed: &IndexSet) -> Result<bool> {
    if j.order() != current_fixed.n() {
        return Err(Error::OrderMismatch {
            left: j.order(),
            right: current_fixed.n(),
        });
    }
    if current_fixed.contains(j.value()) {
        return Err(Error::InvalidArgument(format!(
            "index {} is already fixed",
            j.value()
        )));
    }
    if let Some((member, missing)) = current_fixed.closure_witness(ClosureDirection::Upward) {
        return Err(Error::PatternNotClosed {
            direction: ClosureDirection::Upward,
            member,
            missing,
        });
    }
    Ok(j.dominating_set(true).is_subset_of(current_fixed))
}

/// The last `count` entries of a posequence, as a shortening pattern. The
/// induced fixed set equals the pattern itself.
pub fn greedy_shortening(count: usize, p: &Posequence) -> Result<IndexSet> {
    p.suffix_set(count)
}

/// The order in which the weight-one-column greedy shortens input bits:
/// repeatedly pick the highest-indexed column of the effective generator with
/// exactly one remaining nonzero entry and remove that row/column pair.
pub fn weight_one_removal_order(count: usize, n: u32) -> Result<Vec<u32>> {
    crate::domination::check_order(n)?;
    let len = 1usize << n;
    if count > len {
        return Err(Error::InvalidArgument(format!(
            "cannot shorten {count} of {len} bits"
        )));
    }
    // column j starts with |G_j| = 2^(n - weight) nonzero rows
    let mut weight: Vec<u32> = (0..len)
        .map(|j| 1u32 << (n - (j as u32).count_ones()))
        .collect();
    let mut removed = vec![false; len];
    let mut order = Vec::with_capacity(count);
    for _ in 0..count {
        let j = (0..len)
            .rev()
            .find(|&j| !removed[j] && weight[j] == 1)
            .expect("a weight-one column always exists in the triangular generator");
        removed[j] = true;
        order.push(j as u32);
        // dropping row j clears one entry from every column it covers
        let mut sub = j;
        loop {
            weight[sub] -= 1;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & j;
        }
    }
    Ok(order)
}

/// The set produced by [`weight_one_removal_order`]. Satisfies
/// `fixed_set(result) == result`.
pub fn weight_one_column_shortening(count: usize, n: u32) -> Result<IndexSet> {
    let order = weight_one_removal_order(count, n)?;
    IndexSet::new(n, order)
}

/// Independent check of [`fixed_set`]: scans the generator matrix directly
/// for columns that are zero on every unshortened row.
pub fn generator_column_oracle(shortened: &IndexSet) -> IndexSet {
    let n = shortened.n();
    let len = 1usize << n;
    let mut is_shortened = vec![false; len];
    for v in shortened.iter() {
        is_shortened[v as usize] = true;
    }
    IndexSet::new(
        n,
        (0..len as u32).filter(|&j| {
            (0..len as u32).all(|i| is_shortened[i as usize] || generator_entry(i, j, n) == 0)
        }),
    )
    .expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u32, members: &[u32]) -> IndexSet {
        IndexSet::new(n, members.iter().copied()).unwrap()
    }

    #[test]
    fn fixed_set_examples() {
        let s = set(4, &[15, 14, 13, 11, 7, 12, 10]);
        assert_eq!(fixed_set(&s), s);
        assert_eq!(fixed_set(&IndexSet::empty(3)), IndexSet::empty(3));
        assert_eq!(fixed_set(&set(3, &[7])).members(), &[7]);
        // shortening {7, 6} fixes exactly x7 and x6
        assert_eq!(fixed_set(&set(3, &[6, 7])).members(), &[6, 7]);
        // {6} alone fixes nothing but... G_6 = {6, 7} is not covered
        assert_eq!(fixed_set(&set(3, &[6])).members(), &[] as &[u32]);
    }

    #[test]
    fn fixed_set_is_upward_closed_exhaustively() {
        for mask in 0u64..256 {
            let s = IndexSet::from_mask(3, mask).unwrap();
            assert!(fixed_set(&s).is_upward_closed());
        }
    }

    #[test]
    fn can_fix_examples() {
        let top = BitIndex::new(7, 3).unwrap();
        assert!(can_fix(top, &IndexSet::empty(3)).unwrap());

        let j5 = BitIndex::new(5, 3).unwrap();
        assert!(can_fix(j5, &set(3, &[7])).unwrap());
        assert!(!can_fix(j5, &IndexSet::empty(3)).unwrap());
    }

    #[test]
    fn can_fix_rejects_bad_preconditions() {
        let j7 = BitIndex::new(7, 3).unwrap();
        assert!(matches!(
            can_fix(j7, &set(3, &[7])),
            Err(Error::InvalidArgument(_))
        ));
        let j5 = BitIndex::new(5, 3).unwrap();
        // {6} is not upward-closed (misses 7)
        assert!(matches!(
            can_fix(j5, &set(3, &[6])),
            Err(Error::PatternNotClosed { .. })
        ));
    }

    #[test]
    fn greedy_shortening_examples() {
        let p16 = Posequence::reference_16();
        let s = greedy_shortening(7, &p16).unwrap();
        assert_eq!(s.members(), &[7, 10, 11, 12, 13, 14, 15]);
        assert_eq!(fixed_set(&s), s);

        assert!(greedy_shortening(0, &p16).unwrap().is_empty());
        for p in crate::domination::enumerate_posequences(3).unwrap() {
            assert_eq!(greedy_shortening(1, &p).unwrap().members(), &[7]);
        }
    }

    #[test]
    fn weight_one_greedy_examples() {
        assert_eq!(weight_one_column_shortening(1, 3).unwrap().members(), &[7]);
        assert_eq!(
            weight_one_column_shortening(2, 3).unwrap().members(),
            &[6, 7]
        );
        assert_eq!(weight_one_removal_order(2, 3).unwrap(), vec![7, 6]);
        assert_eq!(
            weight_one_column_shortening(8, 3).unwrap(),
            IndexSet::full(3)
        );
    }

    #[test]
    fn weight_one_greedy_outputs_are_fixed_points() {
        for n in 1..=4u32 {
            for count in 0..=(1usize << n) {
                let s = weight_one_column_shortening(count, n).unwrap();
                assert_eq!(s.len(), count);
                assert!(s.is_upward_closed());
                assert_eq!(fixed_set(&s), s);
            }
        }
    }

    #[test]
    fn weight_one_removal_order_respects_domination() {
        // each removed index has all strict dominators removed before it, so
        // the reversed order extends to a posequence suffix
        for n in 1..=4u32 {
            let order = weight_one_removal_order(1 << n, n).unwrap();
            let mut removed = IndexSet::empty(n);
            for &j in &order {
                let bi = BitIndex::new(j, n).unwrap();
                assert!(bi.dominating_set(true).is_subset_of(&removed));
                removed = removed.union(&set(n, &[j])).unwrap();
            }
            let mut reversed: Vec<u32> = order.clone();
            reversed.reverse();
            // prepending any completion yields a full posequence; check via
            // the natural order on the complement
            let mut full: Vec<u32> = (0..1u32 << n).filter(|v| !order.contains(v)).collect();
            full.extend_from_slice(&reversed);
            assert!(crate::domination::is_posequence(n, &full));
        }
    }

    #[test]
    fn column_oracle_matches_fixed_set() {
        let fig = set(4, &[15, 14, 13, 11, 7, 12, 10]);
        assert_eq!(generator_column_oracle(&fig), fixed_set(&fig));
        assert_eq!(
            generator_column_oracle(&IndexSet::empty(3)),
            IndexSet::empty(3)
        );
        for mask in (0u64..256).step_by(7) {
            let s = IndexSet::from_mask(3, mask).unwrap();
            assert_eq!(generator_column_oracle(&s), fixed_set(&s));
        }
    }

    #[test]
    fn puncture_and_shorten_select_the_same_tail() {
        let p16 = Posequence::reference_16();
        for count in 0..=16 {
            assert_eq!(
                crate::puncture::reverse_pattern(count, &p16).unwrap(),
                greedy_shortening(count, &p16).unwrap()
            );
        }
    }
}
