mod common;

use std::sync::Arc;

use proptest::prelude::*;

use ssetkit::corpus::{maps, random_map, random_object, rng, CorpusConfig};
use ssetkit::degeneracy::{factor_through_quotient, is_degeneracy_detecting, is_degeneracy_quotient, lr_factor};
use ssetkit::sset::standard::{circle, simplex};
use ssetkit::sset::SimplicialMap;

fn check_lr(f: &SimplicialMap) {
    let lr = lr_factor(f).unwrap();
    assert!(is_degeneracy_quotient(&lr.q).holds, "{}", f.source.name());
    assert!(is_degeneracy_detecting(&lr.m).holds, "{}", f.source.name());
    assert_eq!(lr.m.after(&lr.q).unwrap(), *f);
    let again = lr_factor(&lr.q).unwrap();
    assert!(again.m.is_isomorphism());
    assert_eq!(again.mid.counts(), lr.mid.counts());
    let right = lr_factor(&lr.m).unwrap();
    assert!(right.q.is_isomorphism());
}

#[test]
fn corpus_factorizations() {
    for f in maps(3, 120, &CorpusConfig::default()).unwrap() {
        check_lr(&f);
    }
}

#[test]
fn collapsing_the_circle() {
    let f = SimplicialMap::to_point(Arc::new(circle()));
    let lr = lr_factor(&f).unwrap();
    assert_eq!(lr.mid.counts(), vec![1]);
    assert!(!is_degeneracy_detecting(&f).holds);
    assert!(is_degeneracy_quotient(&f).holds);
    let g = SimplicialMap::to_point(Arc::new(simplex(1)));
    assert!(is_degeneracy_quotient(&g).holds);
}

#[test]
fn factoring_matches_brute_force() {
    let (mut small, mut yes, mut no) = (0, 0, 0);
    for f in maps(4, 150, &CorpusConfig::default()).unwrap() {
        if f.source.len() > 20 || f.target.len() > 20 {
            continue;
        }
        small += 1;
        for p in common::candidate_quotients(&f) {
            let verdict = factor_through_quotient(&f, &p).unwrap();
            let oracle = common::count_factorizations(&f, &p);
            assert!(oracle <= 1, "factorizations through an epimorphism are unique");
            assert_eq!(verdict.factors(), oracle == 1, "{} through {}", f.source.name(), p.target.name());
            if let Some(g) = verdict.into_option() {
                assert_eq!(g.after(&p).unwrap(), f);
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert!(small >= 50 && yes > 0 && no > 0, "{small} instances, {yes} factor, {no} refuse");
}

#[test]
fn non_quotients_are_rejected() {
    let v = common::vertex(1, 0);
    let f = SimplicialMap::identity(v.source.clone());
    assert!(factor_through_quotient(&f, &v).is_err() || !is_degeneracy_quotient(&v).holds);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_maps_factor(seed in any::<u64>()) {
        let cfg = CorpusConfig::default();
        let mut r = rng(seed);
        let y = Arc::new(random_object(&mut r, &cfg, "Y").unwrap());
        let f = random_map(&mut r, &cfg, &y, "S").unwrap();
        f.check_naturality().unwrap();
        check_lr(&f);
    }

    #[test]
    fn composites_of_quotients_are_quotients(seed in any::<u64>()) {
        let cfg = CorpusConfig::default();
        let mut r = rng(seed);
        let y = Arc::new(random_object(&mut r, &cfg, "Y").unwrap());
        let f = random_map(&mut r, &cfg, &y, "S").unwrap();
        let q1 = lr_factor(&f).unwrap().q;
        let q2 = lr_factor(&SimplicialMap::to_point(q1.target.clone())).unwrap().q;
        prop_assert!(is_degeneracy_quotient(&q2.after(&q1).unwrap()).holds);
    }
}
