//! Property tests over randomly generated maps and arrays.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use tworow::{types_of, BijectiveMap, ComponentKind, Label, Triple, TwoRowArray};

/// A random bijection f: A -> B with |A| = |B| = n and a random overlap.
fn random_map(rng: &mut StdRng, n: u32) -> BijectiveMap {
    let mut labels: Vec<u32> = (1..=2 * n).collect();
    labels.shuffle(rng);
    let a: Vec<u32> = labels[..n as usize].to_vec();
    let overlap = rng.gen_range(0..=n) as usize;
    let mut b: Vec<u32> = a[..overlap].to_vec();
    b.extend_from_slice(&labels[n as usize..2 * n as usize - overlap]);
    b.shuffle(rng);
    BijectiveMap::new(
        a.iter()
            .zip(&b)
            .map(|(&x, &y)| (Label::new(x), Label::new(y))),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn decompose_partitions_the_ground_sets(seed in any::<u64>(), n in 1u32..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_map(&mut rng, n);
        let comps = f.decompose();

        let mut seen: Vec<Label> = comps.iter().flat_map(|c| c.elements().to_vec()).collect();
        seen.sort();
        let mut expected: Vec<Label> = f.domain().union(&f.codomain()).iter().collect();
        expected.sort();
        prop_assert_eq!(seen, expected);

        let paths = comps.iter().filter(|c| c.kind() == ComponentKind::Path).count();
        prop_assert_eq!(paths, f.domain().difference(&f.codomain()).len());

        // sizes add up to n
        let total: usize = comps.iter().map(|c| c.size()).sum();
        prop_assert_eq!(total, n as usize);
    }

    #[test]
    fn triple_identity_on_random_arrays(seed in any::<u64>(), n in 1u32..11) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = random_map(&mut rng, n);
        let mut top: Vec<Label> = d.codomain().iter().collect();
        top.shuffle(&mut rng);
        let psi = TwoRowArray::from_top_and_diagonal(top, &d).unwrap();
        prop_assert_eq!(psi.diagonal(), d.clone());
        prop_assert_eq!(
            psi.diagonal().compose(&psi.vertical()).unwrap(),
            psi.top_cycle()
        );
    }

    #[test]
    fn transpose_moves_exactly_three_points(seed in any::<u64>(), n in 3u32..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = random_map(&mut rng, n);
        let mut top: Vec<Label> = d.codomain().iter().collect();
        top.shuffle(&mut rng);
        let psi = TwoRowArray::from_top_and_diagonal(top, &d).unwrap();

        let k = rng.gen_range(2..n as usize);
        let j = rng.gen_range(1..k);
        let i = rng.gen_range(1..=j);
        let h = Triple::new(i, j, k).unwrap();
        let out = psi.transpose(h).unwrap();

        prop_assert_eq!(out.diagonal(), psi.diagonal());
        prop_assert_eq!(out.anchor(), psi.anchor());
        let moved = [psi.top()[i - 1], psi.top()[j], psi.top()[k]];
        let f = psi.vertical();
        let g = out.vertical();
        let diffs: Vec<Label> = f
            .pairs()
            .filter(|&(x, y)| g.apply(x) != Some(y))
            .map(|(x, _)| x)
            .collect();
        prop_assert!(diffs.iter().all(|x| moved.contains(x)), "diffs {:?}", diffs);
        prop_assert_eq!(out.transpose(h.inverse()).unwrap(), psi);
    }
}

/// Independent count of pairs of partitions (λ, μ) with |λ| + |μ| = n,
/// via a plain partition-counting recurrence.
fn partition_pair_count(n: u32) -> u64 {
    fn p(n: i64, max: i64) -> u64 {
        if n == 0 {
            return 1;
        }
        if n < 0 || max == 0 {
            return 0;
        }
        p(n - max, max) + p(n, max - 1)
    }
    (0..=n).map(|a| p(a as i64, a as i64) * p((n - a) as i64, (n - a) as i64)).sum()
}

#[test]
fn types_of_counts_match_partition_pairs() {
    for n in 1..=12u32 {
        assert_eq!(types_of(n, 0).len() as u64, partition_pair_count(n), "n = {n}");
    }
}

#[test]
fn canonical_map_round_trips_up_to_ten() {
    for n in 1..=10u32 {
        for t in types_of(n, 0) {
            assert_eq!(t.canonical_map().component_type(), t, "type {t}");
        }
    }
}
