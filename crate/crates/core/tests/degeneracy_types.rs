mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use ssetkit::degeneracy::{enumerate_d, idempotent_p, type_faces, DTruncation, DegeneracyType};
use ssetkit::delta::enumerate_monotone;
use ssetkit::replacement::{cofibrant_replace_kernel, is_isomorphic_via};
use ssetkit::sset::standard::simplex;

fn as_sets(types: &[DegeneracyType]) -> BTreeSet<BTreeSet<Vec<usize>>> {
    types.iter().map(|t| t.members().into_iter().collect()).collect()
}

#[test]
fn low_dimensional_counts() {
    assert_eq!(enumerate_d(0).unwrap().len(), 1);
    assert_eq!(enumerate_d(1).unwrap().len(), 2);
}

#[test]
fn types_match_saturation_oracle() {
    for n in 0..=2 {
        let oracle = common::saturation_types(n);
        assert_eq!(as_sets(&enumerate_d(n).unwrap()), oracle, "dimension {n}");
    }
    assert_eq!(common::saturation_types(2).len(), 11);
}

fn all_face_sets(n: usize) -> impl Iterator<Item = DegeneracyType> {
    let faces = type_faces(n);
    (0u32..1 << faces.len()).map(move |m| {
        let members: Vec<Vec<usize>> = (0..faces.len()).filter(|p| m & (1 << p) != 0).map(|p| faces[p].clone()).collect();
        DegeneracyType::from_members(n, &members).unwrap()
    })
}

#[test]
fn p_is_idempotent_with_image_d() {
    for n in 0..=3 {
        let d: BTreeSet<DegeneracyType> = enumerate_d(n).unwrap().into_iter().collect();
        for c in all_face_sets(n) {
            let p = idempotent_p(&c);
            assert_eq!(idempotent_p(&p), p, "{c}");
            assert!(d.contains(&p), "{c} ↦ {p} is not a type");
        }
    }
}

#[test]
fn p_commutes_with_operators() {
    for n in 0..=3 {
        for c in all_face_sets(n).step_by(7) {
            for m in 0..=3 {
                for theta in enumerate_monotone(m, n) {
                    assert_eq!(idempotent_p(&c.act(&theta)), idempotent_p(&c).act(&theta), "{c} along {theta:?}");
                }
            }
        }
    }
}

#[test]
fn degenerate_types_contain_the_maximal_face() {
    for n in 1..=3 {
        for t in enumerate_d(n).unwrap() {
            assert_eq!(t.is_degenerate(), t.contains_max(), "{t}");
        }
    }
}

#[test]
fn replacement_of_the_point_is_d() {
    let (r, _) = cofibrant_replace_kernel(&Arc::new(simplex(0)), 3).unwrap();
    let d = DTruncation::new(3).unwrap();
    assert_eq!(r.object.counts(), d.trunc.counts());
    assert!(is_isomorphic_via(&r.object, &d.trunc, &r.to_d.levels));
}
