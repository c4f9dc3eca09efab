mod common;

use proptest::prelude::*;

use ssetkit::corpus::{objects, random_object, rng, CorpusConfig};
use ssetkit::delta::{compose, enumerate_injections, enumerate_monotone, enumerate_surjections, epi_mono_factor, OrdinalMap};
use ssetkit::sset::standard::{boundary, circle, codiscrete, horn, simplex, FiniteGroup, Nerve};
use ssetkit::sset::FiniteSSet;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn monotone_enumeration_counts() {
    for m in 0..=4 {
        for n in 0..=4 {
            assert_eq!(enumerate_monotone(m, n).len(), binomial(m + n + 1, m + 1));
            assert_eq!(enumerate_injections(m, n).len(), if m <= n { binomial(n + 1, m + 1) } else { 0 });
            assert_eq!(enumerate_surjections(m, n).len(), if n <= m { binomial(m, n) } else { 0 });
        }
    }
}

fn ordinal_map(max: usize) -> impl Strategy<Value = OrdinalMap> {
    (0..=max, 0..=max).prop_flat_map(|(m, n)| {
        proptest::collection::vec(0..=n, m + 1).prop_map(move |mut v| {
            v.sort();
            OrdinalMap::new(v, n).unwrap()
        })
    })
}

fn composable(max: usize) -> impl Strategy<Value = (OrdinalMap, OrdinalMap, OrdinalMap)> {
    (0..=max, 0..=max, 0..=max, 0..=max).prop_flat_map(|(a, b, c, d)| {
        let map = |m: usize, n: usize| {
            proptest::collection::vec(0..=n, m + 1).prop_map(move |mut v| {
                v.sort();
                OrdinalMap::new(v, n).unwrap()
            })
        };
        (map(a, b), map(b, c), map(c, d))
    })
}

proptest! {
    #[test]
    fn composition_is_associative((f, g, h) in composable(4)) {
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_units(f in ordinal_map(5)) {
        prop_assert_eq!(compose(&f, &OrdinalMap::identity(f.source_dim())).unwrap(), f.clone());
        prop_assert_eq!(compose(&OrdinalMap::identity(f.target_dim()), &f).unwrap(), f);
    }

    #[test]
    fn epi_mono_factorization_is_unique(f in ordinal_map(5)) {
        let (e, m) = epi_mono_factor(&f);
        prop_assert!(e.is_surjective());
        prop_assert!(m.is_injective());
        prop_assert_eq!(compose(&m, &e).unwrap(), f.clone());
        let image: Vec<usize> = f.values().iter().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        prop_assert_eq!(m.values(), &image[..]);
    }

    #[test]
    fn random_objects_satisfy_the_identities(seed in any::<u64>()) {
        let cfg = CorpusConfig { max_dim: 2, max_summands: 2, max_relations: 3 };
        let x = random_object(&mut rng(seed), &cfg, "X").unwrap();
        prop_assert!(x.validate().is_ok());
        prop_assert_eq!(common::ez_check(&x), Ok(()));
        let back = FiniteSSet::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn standard_objects_satisfy_the_identities() {
    let objs = [
        simplex(3),
        boundary(3),
        horn(3, 1),
        circle(),
        codiscrete(3, 2),
        Nerve::new(FiniteGroup::cyclic(3), 3).object().as_ref().clone(),
    ];
    for x in &objs {
        x.validate().unwrap();
        common::ez_check(x).unwrap();
    }
}

#[test]
fn corpus_satisfies_the_identities() {
    let objs = objects(1, 100, &CorpusConfig::default()).unwrap();
    assert!(objs.iter().any(|x| x.dim() == 3));
    for x in &objs {
        x.validate().unwrap();
        common::ez_check(x).unwrap_or_else(|e| panic!("{}: {e}", x.name()));
    }
}

#[test]
fn corpus_is_reproducible() {
    let cfg = CorpusConfig::default();
    assert_eq!(objects(5, 20, &cfg).unwrap(), objects(5, 20, &cfg).unwrap());
    assert_ne!(objects(5, 20, &cfg).unwrap(), objects(6, 20, &cfg).unwrap());
}
