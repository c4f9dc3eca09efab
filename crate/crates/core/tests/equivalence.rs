mod common;

use std::sync::Arc;
use std::time::Instant;

use ssetkit::classify::{classifying_functor, fiber_over_cell, reassemble, FiberAssignment};
use ssetkit::equivalence::{deformation_retract, inv_object, is_univalent, weq_object};
use ssetkit::lifting::{certify_rlp, kan_structure_nerve, truncate_map, Generators};
use ssetkit::sset::standard::{simplex, FiniteGroup, Nerve};
use ssetkit::sset::{coproduct, pullback, SimplicialMap};

#[test]
fn univalence_desk_checks() {
    let start = Instant::now();
    let id = SimplicialMap::identity(Arc::new(simplex(0)));
    let u = is_univalent(&id, 2).unwrap();
    assert!(u.univalent);
    let u = is_univalent(&common::fold(), 0).unwrap();
    assert!(!u.univalent);
    assert!(u.certificate.failure.is_some());
    assert!(u.to_json()["evidence"]["certificate"].get("evidence").is_some());
    assert!(start.elapsed().as_secs() < 120);
}

#[test]
fn identity_of_two_points_is_not_univalent() {
    let pt = Arc::new(simplex(0));
    let (two, _, _) = coproduct(&pt, &pt);
    let id = SimplicialMap::identity(two);
    assert!(!is_univalent(&id, 0).unwrap().univalent);
    assert_eq!(weq_object(&id, 1).unwrap().object().counts(), vec![4, 4]);
}

#[test]
fn fold_has_automorphisms_in_its_weq_object() {
    // over the point: the two bijections of a two-point fibre
    let w = weq_object(&common::fold(), 1).unwrap();
    assert!(w.i_is_diagonal());
    assert_eq!(w.object().counts(), vec![2, 2]);
}

#[test]
fn witnesses_round_trip() {
    let u = common::vertex(1, 1);
    let q = SimplicialMap::to_point(u.target.clone());
    let qb = SimplicialMap::to_point(u.source.clone());
    let r = deformation_retract(&u, &q, &qb, 2).unwrap().unwrap();
    r.verify().unwrap();
    let inv = inv_object(&u, &qb, &q, 1).unwrap();
    let w = inv.witness_from_retract(0, &r).unwrap();
    inv.check_witness(&u, &w).unwrap();
    let v = inv.locate(&w).unwrap();
    assert_eq!(inv.witness(v), w);
    assert_eq!(inv.from_retract(0, &r).unwrap(), Some(v));
    for c in 0..inv.inv.inv.object.count(0) {
        inv.check_witness(&u, &inv.witness(c)).unwrap();
    }
}

#[test]
fn retraction_respects_orientation() {
    let q = SimplicialMap::to_point(Arc::new(simplex(1)));
    let qb = SimplicialMap::to_point(Arc::new(simplex(0)));
    assert!(deformation_retract(&common::vertex(1, 0), &q, &qb, 2).unwrap().is_none());
    assert!(deformation_retract(&common::vertex(1, 1), &q, &qb, 2).unwrap().is_some());
}

#[test]
fn no_inverses_for_a_summand_inclusion() {
    let pt = Arc::new(simplex(0));
    let (two, inl, _) = coproduct(&pt, &pt);
    let inv = inv_object(&inl, &SimplicialMap::to_point(pt), &SimplicialMap::to_point(two), 1).unwrap();
    assert_eq!(inv.inv.inv.object.counts(), vec![0, 0]);
}

#[test]
fn fibres_classify_maps() {
    for p in [common::fold(), SimplicialMap::identity(Arc::new(simplex(1)))] {
        let (_, report) = classifying_functor(&p, 2, None).unwrap();
        assert!(report.passed(), "{report:?}");
    }
    let e = SimplicialMap::to_point(Arc::new(simplex(1)));
    let pb = pullback(&common::fold(), &e).unwrap();
    let fa = FiberAssignment::new(&pb.proj_right, 2).unwrap();
    // over the edge: two copies of the edge
    assert_eq!(fa.fiber(1, 2).object.counts(), vec![4, 2]);
    let re = reassemble(&fa).unwrap();
    assert!(re.is_isomorphism() && re.degeneracy_matches());
}

#[test]
fn kan_structure_passes_to_fibres() {
    let g = FiniteGroup::cyclic(2);
    let p = SimplicialMap::to_point(Nerve::new(g.clone(), 3).object().clone());
    let s = kan_structure_nerve(&g, 2).unwrap();
    let (_, report) = classifying_functor(&p, 2, Some(&s)).unwrap();
    assert!(report.passed() && report.structures_inherited);
    let fibre = fiber_over_cell(&p, &p.target.nondeg(0), Some(&s)).unwrap();
    let inherited = fibre.structure.unwrap();
    inherited.check().unwrap();
}

#[test]
fn structures_for_another_map_are_rejected() {
    let g = FiniteGroup::cyclic(3);
    let other = kan_structure_nerve(&g, 2).unwrap();
    let (_, report) = classifying_functor(&common::fold(), 2, Some(&other)).unwrap();
    assert!(!report.structures_inherited && !report.passed());
    assert!(report.failure.unwrap().contains("not carried"));
    let p = SimplicialMap::to_point(Arc::new(simplex(1)));
    let (_, _, pt) = truncate_map(&p, 2);
    let cert = certify_rlp(&pt, Generators::Horns, 2).unwrap();
    assert!(cert.structure(&pt).is_none());
}
