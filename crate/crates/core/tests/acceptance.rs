//! Acceptance suite. One test per criterion; each prints a single
//! `ACCEPTANCE <id> ... PASS` line on success (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Every expected value here is either a pinned reference row or the output
//! of an independent brute-force oracle computed in this file.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::{downward_closed_sets, rng, set};
use polar_rm::codec::zero_llr_propagate;
use polar_rm::domination::{
    count_posequences, enumerate_posequences, random_posequence, BitIndex, IndexSet, Posequence,
};
use polar_rm::puncture::{incapable_set, psi_family, widely_equivalent_patterns};
use polar_rm::rate_match::{zero_capacity_set, RateMode, RmConfig};
use polar_rm::shorten::{fixed_set, generator_column_oracle, greedy_shortening};
use polar_rm::sim::{simulate, SimSpec};
use rand::Rng;

fn pass(id: &str, detail: &str) {
    println!("ACCEPTANCE {id} {detail} PASS");
}

/// Criterion 1: the minimal puncturing families for n=3 match the reference
/// table exactly, for every input bit, in under a second.
#[test]
fn acceptance_1_minimal_pattern_families_n3() {
    let started = Instant::now();
    let expected: [&[&[u32]]; 8] = [
        &[&[0], &[1], &[2], &[3], &[4], &[5], &[6], &[7]],
        &[
            &[0, 1],
            &[2, 1],
            &[4, 1],
            &[6, 1],
            &[0, 3],
            &[2, 3],
            &[4, 3],
            &[6, 3],
            &[0, 5],
            &[2, 5],
            &[4, 5],
            &[6, 5],
            &[0, 7],
            &[2, 7],
            &[4, 7],
            &[6, 7],
        ],
        &[
            &[0, 2],
            &[0, 6],
            &[4, 2],
            &[4, 6],
            &[1, 3],
            &[1, 7],
            &[5, 3],
            &[5, 7],
        ],
        &[
            &[0, 1, 2, 3],
            &[0, 1, 2, 7],
            &[0, 1, 6, 3],
            &[0, 1, 6, 7],
            &[0, 5, 2, 3],
            &[0, 5, 2, 7],
            &[0, 5, 6, 3],
            &[0, 5, 6, 7],
            &[4, 1, 2, 3],
            &[4, 1, 2, 7],
            &[4, 1, 6, 3],
            &[4, 1, 6, 7],
            &[4, 5, 2, 3],
            &[4, 5, 2, 7],
            &[4, 5, 6, 3],
            &[4, 5, 6, 7],
        ],
        &[&[0, 4], &[1, 5], &[2, 6], &[3, 7]],
        &[&[0, 1, 4, 5], &[2, 1, 5, 6], &[0, 3, 4, 7], &[2, 3, 6, 7]],
        &[&[0, 2, 4, 6], &[1, 3, 5, 7]],
        &[&[0, 1, 2, 3, 4, 5, 6, 7]],
    ];
    for (j, rows) in expected.iter().enumerate() {
        let family = psi_family(BitIndex::new(j as u32, 3).unwrap()).unwrap();
        let want: BTreeSet<IndexSet> = rows.iter().map(|r| set(3, r)).collect();
        let got: BTreeSet<IndexSet> = family.iter().cloned().collect();
        assert_eq!(got, want, "family for input bit {j}");
        assert_eq!(family.len(), rows.len(), "duplicate sets for input bit {j}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass("1", "minimal pattern families n=3 (8 rows, exact)");
}

/// Criterion 2: posequence counts for n = 1..4 are 1, 2, 48, 1 680 384; the
/// n=4 count finishes within five minutes.
#[test]
fn acceptance_2_posequence_counts() {
    let expected = [(1u32, 1u64), (2, 2), (3, 48)];
    for (n, want) in expected {
        assert_eq!(count_posequences(n).unwrap(), want, "count at n={n}");
    }
    let started = Instant::now();
    let n4 = count_posequences(4).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(n4, 1_680_384);
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, budget 5 min");
    pass("2", "posequence counts 1, 2, 48, 1680384 (exact)");
}

/// Criterion 3: the widely-equivalent family of {0,1,2,4,5,6} at n=3 is
/// exactly the four reference patterns.
#[test]
fn acceptance_3_widely_equivalent_worked_example() {
    let target = set(3, &[0, 1, 2, 4, 5, 6]);
    let family = widely_equivalent_patterns(&target).unwrap();
    let want: BTreeSet<IndexSet> = [
        &[0u32, 1, 2, 4, 5, 6][..],
        &[0, 1, 3, 4, 5, 7],
        &[0, 2, 3, 4, 6, 7],
        &[1, 2, 3, 5, 6, 7],
    ]
    .iter()
    .map(|r| set(3, r))
    .collect();
    let got: BTreeSet<IndexSet> = family.iter().cloned().collect();
    assert_eq!(got, want);
    assert_eq!(family.len(), 4);
    pass(
        "3",
        "widely equivalent family of {0,1,2,4,5,6} (4 sets, exact)",
    );
}

/// Criterion 4: the two reference patterns at n=3 both induce the incapable
/// set {0,1,4}.
#[test]
fn acceptance_4_reference_incapable_patterns() {
    assert_eq!(
        incapable_set(&set(3, &[0, 1, 4])),
        set(3, &[0, 1, 4]),
        "identical pattern"
    );
    assert_eq!(
        incapable_set(&set(3, &[7, 6, 3])),
        set(3, &[0, 1, 4]),
        "reverse pattern"
    );
    pass(
        "4",
        "incapable({0,1,4}) = incapable({7,6,3}) = {0,1,4} (exact)",
    );
}

/// Criterion 5: with the reference 16-entry buffer order, 12-bit puncturing
/// drops outputs {11,13,14,15} and silences inputs {0,1,2,4}; 9-bit
/// shortening shortens exactly the fixed set {7,10,11,12,13,14,15}.
#[test]
fn acceptance_5_reference_buffer_configs() {
    let p = Posequence::reference_16();

    let punct = RmConfig::builder(12, 4)
        .mother_order(4)
        .posequence(p.clone())
        .build()
        .unwrap();
    assert_eq!(punct.mode(), RateMode::Puncture);
    let dropped = p.suffix_set(punct.dropped() as usize).unwrap();
    assert_eq!(dropped.members(), &[11, 13, 14, 15], "dropped outputs");
    assert_eq!(
        zero_capacity_set(&punct).members(),
        &[0, 1, 2, 4],
        "silenced inputs"
    );
    assert_eq!(
        zero_llr_propagate(&dropped).incapable().members(),
        &[0, 1, 2, 4]
    );

    let short = RmConfig::builder(9, 4)
        .mother_order(4)
        .mode(RateMode::Shorten)
        .posequence(p)
        .build()
        .unwrap();
    let shortened = zero_capacity_set(&short);
    assert_eq!(shortened.members(), &[7, 10, 11, 12, 13, 14, 15]);
    assert_eq!(
        fixed_set(&shortened),
        shortened,
        "shortened set is its own fixed set"
    );
    pass(
        "5",
        "reference buffer: puncture M=12 and shorten M=9 (exact)",
    );
}

/// Criterion 6: the brute-force oracle suites (a)-(f), within ten minutes.
#[test]
fn acceptance_6_oracle_suites() {
    let started = Instant::now();

    // (a) + (b): cardinality conservation and downward closure, exhaustive
    // at n=3 and 10^4 random subsets at n=4.
    for mask in 0u64..256 {
        let punctured = IndexSet::from_mask(3, mask).unwrap();
        let incapable = incapable_set(&punctured);
        assert_eq!(incapable.len(), punctured.len());
        assert!(incapable.is_downward_closed());
    }
    let mut r = rng(0xacce97);
    for _ in 0..10_000 {
        let mask = r.gen_range(0u64..1 << 16);
        let punctured = IndexSet::from_mask(4, mask).unwrap();
        let incapable = incapable_set(&punctured);
        assert_eq!(incapable.len(), punctured.len());
        assert!(incapable.is_downward_closed());
    }
    println!("  6a cardinality |incapable| = |punctured| (256 @ n=3, 10^4 @ n=4) PASS");
    println!("  6b incapable sets downward-closed (same coverage) PASS");

    // (c): widely-equivalent enumeration equals the brute-force preimage of
    // every downward-closed target at n=3.
    let mut preimages: Vec<(IndexSet, BTreeSet<IndexSet>)> = downward_closed_sets(3)
        .into_iter()
        .map(|t| (t, BTreeSet::new()))
        .collect();
    for mask in 0u64..256 {
        let pattern = IndexSet::from_mask(3, mask).unwrap();
        let target = incapable_set(&pattern);
        let slot = preimages
            .iter_mut()
            .find(|(t, _)| *t == target)
            .expect("every incapable set is downward-closed");
        slot.1.insert(pattern);
    }
    assert_eq!(preimages.len(), 20);
    for (target, brute) in &preimages {
        let family = widely_equivalent_patterns(target).unwrap();
        let got: BTreeSet<IndexSet> = family.iter().cloned().collect();
        assert_eq!(&got, brute, "preimage of {target}");
    }
    println!("  6c widely-equivalent = brute-force preimage (20 targets @ n=3) PASS");

    // (d): every posequence prefix punctures identically and every suffix
    // punctures reversely; all 48 at n=3, 10^3 random at n=4.
    let check_prefix_suffix = |p: &Posequence| {
        let len = p.len();
        for count in 0..=len {
            let prefix = p.prefix_set(count).unwrap();
            assert_eq!(incapable_set(&prefix), prefix);
            let suffix = p.suffix_set(count).unwrap();
            assert_eq!(incapable_set(&suffix), suffix.elementwise_complement());
        }
    };
    for p in enumerate_posequences(3).unwrap() {
        check_prefix_suffix(&p);
    }
    let mut r = rng(0xacce5);
    for _ in 0..1_000 {
        check_prefix_suffix(&random_posequence(4, &mut r).unwrap());
    }
    println!("  6d identical prefixes / reverse suffixes (48 @ n=3, 10^3 @ n=4) PASS");

    // (e): the domination route and the generator-column scan agree on every
    // subset at n=3, and every posequence suffix is its own fixed set for
    // n <= 4 (all suffix sets reached by full enumeration).
    for mask in 0u64..256 {
        let s = IndexSet::from_mask(3, mask).unwrap();
        assert_eq!(generator_column_oracle(&s), fixed_set(&s));
    }
    for n in 1..=3u32 {
        for p in enumerate_posequences(n).unwrap() {
            for count in 0..=p.len() {
                let tail = greedy_shortening(count, &p).unwrap();
                assert_eq!(fixed_set(&tail), tail);
            }
        }
    }
    let mut seen = vec![false; 1 << 16];
    let mut enumerated = 0u64;
    for p in enumerate_posequences(4).unwrap() {
        enumerated += 1;
        let mut mask = 0usize;
        // suffix sets grow from the tail; check each new one once
        if !seen[0] {
            seen[0] = true;
            // empty suffix: nothing to check
        }
        for &v in p.order().iter().rev() {
            mask |= 1 << v;
            if !seen[mask] {
                seen[mask] = true;
                let tail = IndexSet::from_mask(4, mask as u64).unwrap();
                assert_eq!(fixed_set(&tail), tail, "suffix {tail}");
                assert_eq!(generator_column_oracle(&tail), tail);
            }
        }
    }
    assert_eq!(enumerated, 1_680_384, "full enumeration at n=4");
    let distinct_suffixes = seen.iter().filter(|&&s| s).count();
    assert_eq!(distinct_suffixes, 168, "distinct suffix sets at n=4");
    println!("  6e fixed-set oracle agreement and tail fixed points (n <= 4) PASS");

    // (f): minimality and completeness of every minimal-pattern family at
    // n=3, against exhaustive subset search.
    for j in 0..8u32 {
        let mut brute: BTreeSet<IndexSet> = BTreeSet::new();
        for mask in 1u64..256 {
            let pattern = IndexSet::from_mask(3, mask).unwrap();
            if !incapable_set(&pattern).contains(j) {
                continue;
            }
            // minimal iff removing any single element loses the target
            // (propagation is monotone in the punctured set)
            let minimal = pattern.iter().all(|drop| {
                let smaller = IndexSet::new(3, pattern.iter().filter(|&v| v != drop)).unwrap();
                !incapable_set(&smaller).contains(j)
            });
            if minimal {
                brute.insert(pattern);
            }
        }
        let family = psi_family(BitIndex::new(j, 3).unwrap()).unwrap();
        let got: BTreeSet<IndexSet> = family.iter().cloned().collect();
        assert_eq!(got, brute, "minimal families for input bit {j}");
    }
    println!("  6f minimal families complete and minimal (exhaustive @ n=3) PASS");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}, budget 10 min");
    pass("6", &format!("oracle suites a-f in {elapsed:.2?}"));
}

/// Criterion 7: link-simulator sanity at N=128, K=64, M=128 over
/// {0,1,2,3} dB: positive block error rate at 0 dB, non-increasing across
/// the grid within the confidence width, bit-identical replay, two-minute
/// budget at 10^4 trials per point.
#[test]
fn acceptance_7_simulator_sanity() {
    let cfg = RmConfig::builder(128, 64).build().unwrap();
    assert_eq!(cfg.mother_len(), 128);
    let spec = SimSpec {
        cfg,
        esn0_grid_db: vec![0.0, 1.0, 2.0, 3.0],
        max_trials: 10_000,
        target_errors: 0,
        seed: 2024,
    };
    let started = Instant::now();
    let result = simulate(&spec).unwrap();
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 2 min");

    for p in &result.points {
        assert_eq!(p.trials, 10_000);
        assert!(p.bler.is_finite());
    }
    assert!(
        result.points[0].block_errors > 0,
        "block errors must occur at 0 dB"
    );
    for w in result.points.windows(2) {
        let width = w[0].ci_hi - w[0].ci_lo;
        assert!(
            w[1].bler <= w[0].bler + width,
            "BLER rose beyond the confidence width: {} -> {}",
            w[0].bler,
            w[1].bler
        );
    }

    let replay = simulate(&spec).unwrap();
    assert_eq!(
        replay, result,
        "replay with the same seed must be identical"
    );
    pass(
        "7",
        &format!(
            "simulator sanity N=128 K=64 ({:.2?}, bler at 0 dB = {})",
            elapsed, result.points[0].bler
        ),
    );
}
