mod common;

use std::sync::Arc;

use ssetkit::corpus::{random_map, rng, CorpusConfig};
use ssetkit::lifting::{certify_rlp, Generators};
use ssetkit::search::{all_maps, MAP_LIMIT};
use ssetkit::slice::{
    dependent_product_kernel, exponential_kernel, path_of_map, pi_type, pushout_product, trivfib_extend, weq_extension,
};
use ssetkit::sset::standard::{boundary_inclusion, codiscrete, horn_inclusion, simplex, FiniteGroup, Nerve};
use ssetkit::sset::{coproduct, is_cofibration, product, SimplicialMap};
use ssetkit::truncated::KMap;

#[test]
fn counit_is_an_isomorphism() {
    let cfg = CorpusConfig { max_dim: 2, max_summands: 3, max_relations: 2 };
    let mut r = rng(21);
    for f in [boundary_inclusion(1), horn_inclusion(2, 1)] {
        for k in 0..10 {
            let q = random_map(&mut r, &cfg, &f.source, format!("B{k}")).unwrap();
            let (pi, _) = dependent_product_kernel(&f, &q, 3).unwrap();
            let (_, counit) = pi.counit().unwrap();
            assert!(counit.is_isomorphism(), "{} over {}", q.source.name(), f.source.name());
        }
    }
}

#[test]
fn trivial_fibrations_extend() {
    let f = boundary_inclusion(1);
    let q = SimplicialMap::identity(f.source.clone());
    let e = trivfib_extend(&f, &q, 3).unwrap();
    assert!(e.counit_is_iso());
    assert!(e.q_certificate.passed() && e.p_certificate.passed());
}

fn weq_instances() -> Vec<(&'static str, SimplicialMap, SimplicialMap, SimplicialMap, SimplicialMap)> {
    let d1 = Arc::new(simplex(1));
    let pt = Arc::new(simplex(0));
    let f = common::vertex(1, 0);
    let idp = SimplicialMap::identity(pt.clone());
    let cd = Arc::new(codiscrete(2, 2));
    let prod = product(d1.clone(), cd.clone());
    let a0 = prod.pair(&d1.nondeg(0), &cd.nondeg(0)).unwrap();
    let u = SimplicialMap::from_cell(prod.object.clone(), &a0);
    vec![
        ("vertex", f.clone(), SimplicialMap::identity(d1.clone()), idp.clone(), f.clone()),
        ("point", idp.clone(), idp.clone(), idp.clone(), idp.clone()),
        ("codiscrete", f, prod.proj_left.clone(), idp, u),
    ]
}

#[test]
fn weak_equivalences_extend() {
    for (name, f, p, q, u) in weq_instances() {
        let e = weq_extension(&f, &p, &q, &u, 2).unwrap();
        assert!(e.restriction_is_iso(), "{name}");
        // u is a trivial cofibration in every instance
        let v = e.v_retract.as_ref().unwrap_or_else(|| panic!("{name}: no retraction of v"));
        v.verify().unwrap();
    }
}

#[test]
fn pushout_products_of_boundaries_are_cofibrations() {
    for m in 0..=2 {
        for n in 0..=2 {
            let pp = pushout_product(&boundary_inclusion(m), &boundary_inclusion(n)).unwrap();
            assert!(is_cofibration(&pp).holds, "({m}, {n})");
        }
    }
}

#[test]
fn square_complement_matches_shuffles() {
    let pp = pushout_product(&boundary_inclusion(1), &boundary_inclusion(1)).unwrap();
    let square = &pp.target;
    let mut hit = vec![false; square.len()];
    for r in pp.assignment() {
        hit[r.cell] = true;
    }
    let mut complement = vec![0; square.dim() + 1];
    for c in (0..square.len()).filter(|&c| !hit[c]) {
        complement[square.cell_dim(c)] += 1;
    }
    assert_eq!(complement, common::shuffle_interior(square.dim()));
    assert_eq!(complement, vec![0, 1, 2]);
}

#[test]
fn path_object_of_a_nerve() {
    let p = SimplicialMap::to_point(Nerve::new(FiniteGroup::cyclic(2), 3).object().clone());
    let pm = path_of_map(&p, 2).unwrap();
    assert!(pm.boundary_factors_diagonal());
    assert!(certify_rlp(&pm.ev0, Generators::Boundaries, 2).unwrap().passed());
    assert!(pm.r.is_injective());
    let path = &pm.object.object;
    assert!(path.flags_agree_with_tables());
    for n in 0..=2 {
        for c in 0..pm.r.source.count(n) {
            assert_eq!(pm.r.source.is_degenerate(n, c), path.is_degenerate(n, pm.r.apply(n, c)));
        }
    }
    assert!(pm.path_a.r_is_cofibration());
}

#[test]
fn exponential_counts() {
    let (e, _) = exponential_kernel(&Arc::new(simplex(1)), &Arc::new(ssetkit::sset::standard::boundary(1)), 1).unwrap();
    // Δ[1]^∂Δ[1] = Δ[1] × Δ[1]
    assert_eq!(e.object().counts(), vec![4, 9]);
    assert_eq!(e.object().nondegenerate_counts(), vec![4, 5]);
}

fn sections(pi: &ssetkit::slice::PiType) -> Vec<KMap> {
    let a = &pi.a.kernel;
    let filter = |cell: usize, cand: usize, _: &[usize]| {
        pi.pi.q.apply(a.cell_dim(cell), cand) == pi.a.index_of(&a.nondeg(cell))
    };
    all_maps(a, &pi.b.trunc, &vec![None; a.len()], &filter, MAP_LIMIT)
        .unwrap()
        .into_iter()
        .map(|assign| KMap { source: a.clone(), target: pi.b.trunc.clone(), assign })
        .collect()
}

#[test]
fn pi_types_satisfy_beta() {
    let pt = Arc::new(simplex(0));
    let (two, _, _) = coproduct(&pt, &pt);
    let (four, _, _) = coproduct(&two, &two);
    let pair = SimplicialMap::new(
        four.clone(),
        two.clone(),
        (0..4).map(|c| two.nondeg(c / 2)).collect(),
    )
    .unwrap();
    let d1 = Arc::new(simplex(1));
    let cd = Arc::new(codiscrete(2, 2));
    let prod = product(d1.clone(), cd);
    let instances = [
        (SimplicialMap::to_point(two.clone()), SimplicialMap::identity(two.clone()), 1),
        (SimplicialMap::to_point(two.clone()), pair, 4),
        (SimplicialMap::to_point(d1.clone()), prod.proj_left.clone(), 4),
    ];
    for (p, q, expected) in instances {
        let pi = pi_type(&p, &q, 2).unwrap();
        let all = sections(&pi);
        assert_eq!(all.len(), expected, "{}", q.source.name());
        for s in &all {
            assert!(pi.beta(s).unwrap());
            let searched = pi.lambda_tilde_search(s).unwrap().unwrap();
            assert_eq!(searched.levels(&pi.x), pi.lambda_tilde(s).unwrap());
        }
    }
}
