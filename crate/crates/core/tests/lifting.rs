mod common;

use std::sync::Arc;
use std::time::Instant;

use ssetkit::lifting::{
    certify_rlp, factor_cof_trivfib, kan_structure_nerve, solve_lift_kernel, truncate_map, Generators, Shape,
};
use ssetkit::replacement::cofibrant_replace_kernel;
use ssetkit::sset::standard::{boundary, boundary_inclusion, circle, horn_inclusion, simplex, FiniteGroup, Nerve};
use ssetkit::sset::{is_cofibration, FiniteSSet, SimplicialMap};

fn eps_certified(x: FiniteSSet, bound: usize) {
    let (rep, _) = cofibrant_replace_kernel(&Arc::new(x), bound).unwrap();
    let cert = certify_rlp(&rep.eps, Generators::Boundaries, bound).unwrap();
    assert!(cert.passed(), "{}: {:?}", rep.object.name(), cert.failure);
    for (key, filler) in cert.problems.iter().zip(&cert.fillers) {
        assert_eq!(&rep.constructive_filler(key).unwrap(), filler, "{}", key.shape.name());
    }
}

#[test]
fn replacement_projection_is_a_trivial_fibration() {
    let start = Instant::now();
    eps_certified(simplex(0), 3);
    eps_certified(simplex(1), 3);
    eps_certified(simplex(2), 3);
    eps_certified(boundary(2), 3);
    eps_certified(circle(), 3);
    eps_certified(Nerve::new(FiniteGroup::cyclic(2), 3).object().as_ref().clone(), 3);
    assert!(start.elapsed().as_secs() < 300);
}

#[test]
fn nerves_are_kan_with_algebraic_fillers() {
    for order in [2, 3] {
        let g = FiniteGroup::cyclic(order);
        let p = SimplicialMap::to_point(Nerve::new(g.clone(), 3).object().clone());
        let (_, _, pt) = truncate_map(&p, 3);
        let cert = certify_rlp(&pt, Generators::Horns, 3).unwrap();
        assert!(cert.passed());
        let s = kan_structure_nerve(&g, 3).unwrap();
        assert_eq!(s.carrier, pt);
        let mut compared = 0;
        for (key, filler) in cert.problems.iter().zip(&cert.fillers) {
            if key.shape.n == 2 {
                assert_eq!(s.filler(key), Some(&filler[..]));
                compared += 1;
            }
        }
        // a 2-horn in N(G) is a pair of group elements, for each of 3 horns
        assert_eq!(compared, 3 * order * order);
    }
}

#[test]
fn interval_fails_at_the_first_outer_horn() {
    let p = SimplicialMap::to_point(Arc::new(simplex(1)));
    let run = || {
        let (_, _, pt) = truncate_map(&p, 3);
        let cert = certify_rlp(&pt, Generators::Horns, 3).unwrap();
        (cert.failure.clone(), cert.to_json(&pt))
    };
    let (failure, json) = run();
    assert_eq!(failure.unwrap().shape, Shape { n: 2, horn: Some(0) });
    assert_eq!(json["evidence"]["generator"], "Λ0[2]");
    assert_eq!(run().1, json);
}

#[test]
fn kernel_lifting() {
    let i = boundary_inclusion(1);
    let p = SimplicialMap::to_point(Arc::new(simplex(1)));
    let d = solve_lift_kernel(&i, &p, &i, &SimplicialMap::to_point(i.target.clone())).unwrap().unwrap();
    assert_eq!(d.after(&i).unwrap(), i);
    let h = horn_inclusion(2, 0);
    let top = SimplicialMap::new(h.source.clone(), i.target.clone(), {
        let t = &i.target;
        // 0 ↦ 0, 1 ↦ 1, 2 ↦ 0: the horn edges 01 and 02 go to the edge and a vertex
        let v = |id: &str| t.nondeg_by_id(id).unwrap();
        let mut assign = Vec::new();
        for c in 0..h.source.len() {
            assign.push(match h.source.id(c) {
                "0" => v("0"),
                "1" => v("1"),
                "2" => v("0"),
                "01" => v("01"),
                _ => t.degeneracy(&v("0"), 0),
            });
        }
        assign
    })
    .unwrap();
    let none = solve_lift_kernel(&h, &p, &top, &SimplicialMap::to_point(h.target.clone())).unwrap();
    assert!(none.is_none());
}

#[test]
fn cofibration_trivial_fibration_factorization() {
    let f = SimplicialMap::to_point(Arc::new(boundary(1)));
    let r = factor_cof_trivfib(&f, 2).unwrap();
    assert!(r.certificate.passed());
    assert!(is_cofibration(&r.i).holds);
    assert_eq!(r.p.after(&r.i).unwrap(), f);
}
