use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn s5() -> PermutationGroup {
    PermutationGroup::symmetric(5)
}

/// All symplectic transvections x -> x + <x,v>v of GF(2)^(2n), as
/// permutations of the nonzero vectors (vector v sits at index v-1).
fn symplectic_transvections(n: usize) -> Vec<Permutation> {
    let dim = 2 * n;
    let form = |x: usize, y: usize| -> usize {
        let mut s = 0;
        for i in 0..n {
            s ^= ((x >> i) & 1) & ((y >> (i + n)) & 1);
            s ^= ((x >> (i + n)) & 1) & ((y >> i) & 1);
        }
        s
    };
    (1..1usize << dim)
        .map(|v| {
            let images = (1..1usize << dim)
                .map(|x| if form(x, v) == 1 { (x ^ v) - 1 } else { x - 1 })
                .collect();
            Permutation::from_images(images).unwrap()
        })
        .collect()
}

/// Brute-force closure, independent of the chain code.
fn naive_elements(degree: usize, gens: &[Permutation]) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = HashSet::new();
    seen.insert(id.clone());
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&p| g.apply(p)).collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

fn pairs_action(group: &PermutationGroup) -> GroupAction<Vec<usize>> {
    induced_action(
        group,
        &Closure {
            seeds: vec![vec![0, 1]],
            act: act_on_set,
        },
    )
    .unwrap()
}

#[test]
fn orbit_examples() {
    let pairs = pairs_action(&s5());
    assert_eq!(orbit(&pairs, &vec![0, 1]).unwrap().len(), 10);

    let sp4 = PermutationGroup::new(15, symplectic_transvections(2)).unwrap();
    let natural = GroupAction::natural(&sp4);
    // exhaustive closure oracle: every nonzero vector is reachable
    for seed in 0..15 {
        assert_eq!(orbit(&natural, &seed).unwrap().len(), 15);
    }

    let trivial = GroupAction::natural(&PermutationGroup::trivial(4));
    assert_eq!(orbit(&trivial, &2).unwrap(), vec![2]);
    assert_eq!(orbit(&trivial, &7), Err(PermError::OutsideDomain));
}

#[test]
fn group_order_examples() {
    assert_eq!(s5().order(), 120);
    let sp6 = PermutationGroup::new(63, symplectic_transvections(3)).unwrap();
    // 2^9 * (2^2-1)(2^4-1)(2^6-1)
    assert_eq!(sp6.order(), 1_451_520);
    assert_eq!(512 * 3 * 15 * 63, 1_451_520);
    assert_eq!(PermutationGroup::trivial(3).order(), 1);
    assert_eq!(
        PermutationGroup::new(4, vec![Permutation::identity(4)])
            .unwrap()
            .order(),
        1
    );
}

#[test]
fn stabilizer_examples() {
    let s = stabilizer(&s5(), &[0], StabilizerMode::Pointwise).unwrap();
    assert_eq!(s.order(), 24);

    let pairs = pairs_action(&s5());
    let img = pairs.image_group();
    let v = stabilizer(img, &[0], StabilizerMode::Pointwise).unwrap();
    assert_eq!(v.order(), 12);
    assert_eq!(120 / 10, 12);

    let all: Vec<usize> = (0..5).collect();
    assert!(stabilizer(&s5(), &all, StabilizerMode::Pointwise).unwrap().is_trivial());
    assert_eq!(stabilizer(&s5(), &[], StabilizerMode::Pointwise).unwrap().order(), 120);
    // setwise stabilizer of {0,1} in S5 is S2 x S3
    assert_eq!(stabilizer(&s5(), &[0, 1], StabilizerMode::Setwise).unwrap().order(), 12);
    assert!(stabilizer(&s5(), &[9], StabilizerMode::Pointwise).is_err());
}

fn s4() -> PermutationGroup {
    PermutationGroup::symmetric(4)
}

#[test]
fn minimal_normal_examples() {
    let m = minimal_normal_subgroups(&s4(), DEFAULT_NORMAL_BOUND).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].order(), 4);

    let m = minimal_normal_subgroups(&PermutationGroup::symmetric(3), DEFAULT_NORMAL_BOUND).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].order(), 3);

    let a5 = PermutationGroup::alternating(5);
    let m = minimal_normal_subgroups(&a5, DEFAULT_NORMAL_BOUND).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].order(), 60);

    assert!(matches!(
        minimal_normal_subgroups(&s5(), 100),
        Err(PermError::Capacity { .. })
    ));
}

/// Brute-force oracle: normal closures of every element, minimal by inclusion.
#[test]
fn minimal_normal_matches_brute_force() {
    for group in [s4(), PermutationGroup::symmetric(3), PermutationGroup::alternating(4)] {
        let elems = naive_elements(group.degree(), group.generators());
        let mut closures: Vec<HashSet<Vec<usize>>> = Vec::new();
        for e in &elems {
            if e.iter().enumerate().all(|(i, &x)| i == x) {
                continue;
            }
            let p = Permutation::from_images(e.clone()).unwrap();
            let n = group.normal_closure(&[p]);
            let set = naive_elements(n.degree(), n.generators());
            if !closures.contains(&set) {
                closures.push(set);
            }
        }
        let minimal: Vec<usize> = closures
            .iter()
            .filter(|c| !closures.iter().any(|d| d.len() < c.len() && d.is_subset(c)))
            .map(|c| c.len())
            .collect();
        let mut found: Vec<usize> = minimal_normal_subgroups(&group, DEFAULT_NORMAL_BOUND)
            .unwrap()
            .iter()
            .map(|g| g.order() as usize)
            .collect();
        let mut expected = minimal.clone();
        expected.sort();
        found.sort();
        assert_eq!(found, expected);
    }
}

#[test]
fn minimal_normal_members_are_normal_and_incomparable() {
    let c2xs3 = PermutationGroup::new(
        5,
        vec![
            Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
            Permutation::from_cycles(5, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(5, &[&[3, 4]]).unwrap(),
        ],
    )
    .unwrap();
    let m = minimal_normal_subgroups(&c2xs3, DEFAULT_NORMAL_BOUND).unwrap();
    // A3 and the central C2
    assert_eq!(m.len(), 2);
    for a in &m {
        assert!(a.is_normal_in(&c2xs3));
        for b in &m {
            if !std::ptr::eq(a, b) {
                assert!(!a.is_subgroup_of(b));
            }
        }
    }
}

#[test]
fn subgroup_search_examples() {
    let pred = SubgroupPredicate {
        order: 12,
        contains: None,
        quotient_order: None,
    };
    let out = subgroup_search(&s4(), &pred, 7, 1000).unwrap();
    let a4 = out.subgroup.expect("A4 found");
    assert_eq!(a4.order(), 12);
    assert!(a4.is_subgroup_of(&PermutationGroup::alternating(4)));

    let full = SubgroupPredicate {
        order: 24,
        contains: None,
        quotient_order: None,
    };
    let out = subgroup_search(&s4(), &full, 1, 10).unwrap();
    assert_eq!(out.subgroup.unwrap().order(), 24);

    let impossible = SubgroupPredicate {
        order: 5,
        contains: None,
        quotient_order: None,
    };
    assert!(subgroup_search(&s4(), &impossible, 1, 10).is_err());

    // budget exhaustion is not an error
    let none = SubgroupPredicate {
        order: 8,
        contains: Some(PermutationGroup::alternating(4)),
        quotient_order: None,
    };
    assert!(subgroup_search(&s4(), &none, 1, 5).is_err());
    let d8 = SubgroupPredicate {
        order: 8,
        contains: None,
        quotient_order: None,
    };
    let out = subgroup_search(&s4(), &d8, 3, 0).unwrap();
    assert!(out.subgroup.is_none());
}

#[test]
fn subgroup_search_is_deterministic() {
    let pred = SubgroupPredicate {
        order: 12,
        contains: None,
        quotient_order: None,
    };
    let a = subgroup_search(&s5(), &pred, 11, 10_000).unwrap();
    let b = subgroup_search(&s5(), &pred, 11, 10_000).unwrap();
    assert_eq!(a.log.attempts, b.log.attempts);
    assert_eq!(a.subgroup.unwrap().generators(), b.subgroup.unwrap().generators());
}

/// GL4(2) on the 35 two-dimensional subspaces of GF(2)^4.
#[test]
fn induced_action_examples() {
    // transvection e1 += e2 and the coordinate 4-cycle, acting on nonzero vectors
    let transvection = |x: usize| if x & 2 != 0 { x ^ 1 } else { x };
    let rotate = |x: usize| ((x << 1) | (x >> 3)) & 15;
    let g1 = Permutation::from_images((1..16).map(|x| transvection(x) - 1).collect()).unwrap();
    let g2 = Permutation::from_images((1..16).map(|x| rotate(x) - 1).collect()).unwrap();
    let gl4 = PermutationGroup::new(15, vec![g1, g2]).unwrap();
    assert_eq!(gl4.order(), 20160);
    // a 2-subspace {a, b, a^b} as a sorted triple of point indices
    let seeds = vec![vec![0, 1, 2]];
    let act = |g: &Permutation, s: &Vec<usize>| act_on_set(g, s);
    let lines = induced_action(&gl4, &Closure { seeds, act }).unwrap();
    assert_eq!(lines.len(), 35);
    // exhaustive oracle: count 2-subspaces directly
    let mut count = 0;
    for a in 1..16usize {
        for b in (a + 1)..16usize {
            if (a ^ b) > b {
                count += 1;
            }
        }
    }
    assert_eq!(count, 35);
    for p in lines.images() {
        assert_eq!(p.degree(), 35);
    }

    let pairs = pairs_action(&s5());
    assert_eq!(pairs.len(), 10);
    let ident = induced_action(
        &s5(),
        &FixedDomain {
            domain: (0..5).collect(),
            act: |g: &Permutation, x: &usize| g.apply(*x),
        },
    )
    .unwrap();
    assert_eq!(ident.images(), s5().generators());

    let not_closed = FixedDomain {
        domain: vec![0usize, 1],
        act: |g: &Permutation, x: &usize| g.apply(*x),
    };
    assert!(matches!(
        induced_action(&s5(), &not_closed),
        Err(PermError::NotClosed { .. })
    ));
}

#[test]
fn group_file_round_trip_and_expected_order() {
    let file = GroupFile::from_group(&s5(), Some("S5".into()));
    let text = serde_json::to_string(&file).unwrap();
    assert_eq!(load_group_json(&text).unwrap().order(), 120);
    let bad = r#"{"degree": 3, "generators": [[1,2,0]], "expected_order": 6}"#;
    assert!(matches!(
        load_group_json(bad),
        Err(PermError::OrderMismatch { expected: 6, found: 3 })
    ));
    assert!(load_group_json(r#"{"degree": 3, "generators": [[1,1,0]]}"#).is_err());
}

fn random_perm(rng: &mut ChaCha8Rng, degree: usize) -> Permutation {
    let mut v: Vec<usize> = (0..degree).collect();
    for i in (1..degree).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
    Permutation::from_images(v).unwrap()
}

#[test]
fn chain_membership_agrees_with_naive_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..30 {
        let degree = rng.gen_range(3..8);
        let ngens = rng.gen_range(1..3);
        // sparse generators keep the groups small
        let gens: Vec<Permutation> = (0..ngens)
            .map(|_| {
                let a = rng.gen_range(0..degree);
                let b = (a + rng.gen_range(1..degree)) % degree;
                let c = (a + 1 + rng.gen_range(0..degree - 1)) % degree;
                if rng.gen_bool(0.5) || c == b || c == a {
                    Permutation::from_cycles(degree, &[&[a, b]]).unwrap()
                } else {
                    Permutation::from_cycles(degree, &[&[a, b, c]]).unwrap()
                }
            })
            .collect();
        let group = PermutationGroup::new(degree, gens.clone()).unwrap();
        let elems = naive_elements(degree, &gens);
        if elems.len() > 10_000 {
            continue;
        }
        assert_eq!(group.order() as usize, elems.len());
        for _ in 0..40 {
            let p = random_perm(&mut rng, degree);
            let naive = elems.contains(&p.images().collect::<Vec<_>>());
            assert_eq!(group.contains(&p), naive);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn order_invariant_under_generator_shuffle(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree = 7;
        let mut gens: Vec<Permutation> = (0..3).map(|_| random_perm(&mut rng, degree)).collect();
        let order = PermutationGroup::new(degree, gens.clone()).unwrap().order();
        prop_assert_eq!(5040 % order, 0);
        gens.reverse();
        let shuffled = PermutationGroup::new(degree, gens.clone()).unwrap();
        prop_assert_eq!(shuffled.order(), order);
        // random words in the generators, plus the originals, generate the same group
        let words: Vec<Permutation> = (0..3)
            .map(|_| {
                let mut w = Permutation::identity(degree);
                for _ in 0..5 {
                    w = w.then(&gens[rng.gen_range(0..gens.len())]);
                }
                w
            })
            .chain(gens.iter().cloned())
            .collect();
        let rewritten = PermutationGroup::new(degree, words).unwrap();
        prop_assert!(rewritten.is_subgroup_of(&shuffled));
        prop_assert!(shuffled.is_subgroup_of(&rewritten));
        prop_assert_eq!(rewritten.order(), order);
    }

    #[test]
    fn orbit_stabilizer(seed in 0u64..1000, point in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Permutation> = (0..2).map(|_| random_perm(&mut rng, 6)).collect();
        let group = PermutationGroup::new(6, gens).unwrap();
        let orb = group.point_orbit(point).len() as u128;
        let stab = stabilizer(&group, &[point], StabilizerMode::Pointwise).unwrap();
        prop_assert_eq!(orb * stab.order(), group.order());
        for g in stab.generators() {
            prop_assert_eq!(g.apply(point), point);
        }
    }
}
