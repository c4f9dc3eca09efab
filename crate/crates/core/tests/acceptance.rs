//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use ssetkit::classify::classifying_functor;
use ssetkit::corpus::{maps, objects, random_map, rng, CorpusConfig};
use ssetkit::degeneracy::{
    enumerate_d, factor_through_quotient, idempotent_p, is_degeneracy_detecting, is_degeneracy_quotient, lr_factor,
    type_faces, DTruncation, DegeneracyType,
};
use ssetkit::equivalence::is_univalent;
use ssetkit::lifting::{certify_rlp, kan_structure_nerve, truncate_map, Generators, Shape};
use ssetkit::replacement::{cofibrant_replace_kernel, is_isomorphic_via};
use ssetkit::search::{all_maps, MAP_LIMIT};
use ssetkit::slice::{dependent_product_kernel, path_of_map, pi_type, pushout_product, weq_extension};
use ssetkit::sset::standard::{
    boundary, boundary_inclusion, circle, codiscrete, horn_inclusion, simplex, FiniteGroup, Nerve,
};
use ssetkit::sset::{coproduct, is_cofibration, product, FiniteSSet, SimplicialMap};
use ssetkit::truncated::KMap;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn ez_normal_forms() -> Outcome {
    let start = Instant::now();
    let objs = objects(1, 100, &CorpusConfig::default()).map_err(|e| e.to_string())?;
    for x in &objs {
        x.validate().map_err(|v| format!("{}: {v}", x.name()))?;
        common::ez_check(x).map_err(|e| format!("{}: {e}", x.name()))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} objects in {:.1?}", objs.len(), start.elapsed()))
}

fn lr_factorization() -> Outcome {
    let fs = maps(3, 120, &CorpusConfig::default()).map_err(|e| e.to_string())?;
    for f in &fs {
        let lr = lr_factor(f).map_err(|e| e.to_string())?;
        ensure(is_degeneracy_quotient(&lr.q).holds && is_degeneracy_detecting(&lr.m).holds, || {
            format!("{}: wrong classes", f.source.name())
        })?;
        ensure(lr.m.after(&lr.q).ok().as_ref() == Some(f), || format!("{}: no recomposition", f.source.name()))?;
        let again = lr_factor(&lr.q).map_err(|e| e.to_string())?;
        ensure(again.m.is_isomorphism(), || format!("{}: refactoring is not idempotent", f.source.name()))?;
    }
    let mut small = 0;
    for f in maps(4, 150, &CorpusConfig::default()).map_err(|e| e.to_string())? {
        if f.source.len() > 20 || f.target.len() > 20 {
            continue;
        }
        small += 1;
        for p in common::candidate_quotients(&f) {
            let verdict = factor_through_quotient(&f, &p).map_err(|e| e.to_string())?.factors();
            let oracle = common::count_factorizations(&f, &p) == 1;
            ensure(verdict == oracle, || format!("{} through {}: {verdict} vs oracle {oracle}", f.source.name(), p.target.name()))?;
        }
    }
    Ok(format!("{} maps factored, {small} small instances against the oracle", fs.len()))
}

fn d_counts() -> Outcome {
    let counts: Vec<usize> = (0..=2).map(|n| enumerate_d(n).map(|t| t.len())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(counts[0] == 1 && counts[1] == 2, || format!("counts {counts:?}"))?;
    let oracle = common::saturation_types(2);
    let ours: BTreeSet<BTreeSet<Vec<usize>>> =
        enumerate_d(2).unwrap().iter().map(|t| t.members().into_iter().collect()).collect();
    ensure(ours == oracle, || format!("{} types, oracle {}", ours.len(), oracle.len()))?;
    for n in 0..=3 {
        let faces = type_faces(n);
        for m in 0u32..1 << faces.len() {
            let members: Vec<Vec<usize>> = (0..faces.len()).filter(|p| m & (1 << p) != 0).map(|p| faces[p].clone()).collect();
            let c = DegeneracyType::from_members(n, &members).map_err(|e| e.to_string())?;
            let p = idempotent_p(&c);
            ensure(idempotent_p(&p) == p, || format!("P∘P ≠ P at {c}"))?;
        }
    }
    Ok(format!("|D| = {counts:?}, oracle {} at n = 2", oracle.len()))
}

fn replacement_of_point() -> Outcome {
    let (r, _) = cofibrant_replace_kernel(&Arc::new(simplex(0)), 3).map_err(|e| e.to_string())?;
    let d = DTruncation::new(3).map_err(|e| e.to_string())?;
    ensure(is_isomorphic_via(&r.object, &d.trunc, &r.to_d.levels), || "not isomorphic".into())?;
    Ok(format!("counts {:?}", r.object.counts()))
}

fn eps_trivial_fibration() -> Outcome {
    let start = Instant::now();
    let objs: Vec<FiniteSSet> = vec![
        simplex(0),
        simplex(1),
        simplex(2),
        boundary(2),
        circle(),
        Nerve::new(FiniteGroup::cyclic(2), 3).object().as_ref().clone(),
    ];
    let mut problems = 0;
    for x in objs {
        let (rep, _) = cofibrant_replace_kernel(&Arc::new(x), 3).map_err(|e| e.to_string())?;
        let cert = certify_rlp(&rep.eps, Generators::Boundaries, 3).map_err(|e| e.to_string())?;
        ensure(cert.passed(), || format!("{} fails", rep.object.name()))?;
        for (key, filler) in cert.problems.iter().zip(&cert.fillers) {
            let built = rep.constructive_filler(key).map_err(|e| e.to_string())?;
            ensure(&built == filler, || format!("{}: fillers differ at {}", rep.object.name(), key.shape.name()))?;
        }
        problems += cert.problems.len();
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{problems} problems in {:.1?}", start.elapsed()))
}

fn counit_iso() -> Outcome {
    let cfg = CorpusConfig { max_dim: 2, max_summands: 3, max_relations: 2 };
    let mut r = rng(21);
    let mut checked = 0;
    for f in [boundary_inclusion(1), horn_inclusion(2, 1)] {
        for k in 0..10 {
            let q = random_map(&mut r, &cfg, &f.source, format!("B{k}")).map_err(|e| e.to_string())?;
            let (pi, _) = dependent_product_kernel(&f, &q, 3).map_err(|e| e.to_string())?;
            let (_, counit) = pi.counit().map_err(|e| e.to_string())?;
            ensure(counit.is_isomorphism(), || format!("{} over {}", q.source.name(), f.source.name()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} instances"))
}

fn weq_extension_instances() -> Outcome {
    let d1 = Arc::new(simplex(1));
    let pt = Arc::new(simplex(0));
    let f = common::vertex(1, 0);
    let idp = SimplicialMap::identity(pt);
    let cd = Arc::new(codiscrete(2, 2));
    let prod = product(d1.clone(), cd.clone());
    let a0 = prod.pair(&d1.nondeg(0), &cd.nondeg(0)).ok_or("no base cell")?;
    let u = SimplicialMap::from_cell(prod.object.clone(), &a0);
    let instances = [
        ("vertex", f.clone(), SimplicialMap::identity(d1.clone()), idp.clone(), f.clone()),
        ("point", idp.clone(), idp.clone(), idp.clone(), idp.clone()),
        ("codiscrete", f, prod.proj_left.clone(), idp, u),
    ];
    for (name, f, p, q, u) in instances {
        let e = weq_extension(&f, &p, &q, &u, 2).map_err(|e| format!("{name}: {e}"))?;
        ensure(e.restriction_is_iso(), || format!("{name}: B̄[f] ≇ B"))?;
        let v = e.v_retract.as_ref().ok_or_else(|| format!("{name}: no retraction of v"))?;
        v.verify().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("3 instances".into())
}

fn pushout_products() -> Outcome {
    for m in 0..=2 {
        for n in 0..=2 {
            let pp = pushout_product(&boundary_inclusion(m), &boundary_inclusion(n)).map_err(|e| e.to_string())?;
            ensure(is_cofibration(&pp).holds, || format!("({m}, {n}) is not a cofibration"))?;
        }
    }
    let pp = pushout_product(&boundary_inclusion(1), &boundary_inclusion(1)).map_err(|e| e.to_string())?;
    let square = &pp.target;
    let mut hit = vec![false; square.len()];
    for r in pp.assignment() {
        hit[r.cell] = true;
    }
    let mut complement = vec![0; square.dim() + 1];
    for c in (0..square.len()).filter(|&c| !hit[c]) {
        complement[square.cell_dim(c)] += 1;
    }
    let oracle = common::shuffle_interior(square.dim());
    ensure(complement == oracle && complement == [0, 1, 2], || format!("{complement:?} vs {oracle:?}"))?;
    Ok(format!("complement {complement:?}"))
}

fn kan_nerves() -> Outcome {
    for order in [2, 3] {
        let g = FiniteGroup::cyclic(order);
        let p = SimplicialMap::to_point(Nerve::new(g.clone(), 3).object().clone());
        let (_, _, pt) = truncate_map(&p, 3);
        let cert = certify_rlp(&pt, Generators::Horns, 3).map_err(|e| e.to_string())?;
        ensure(cert.passed(), || format!("N(Z/{order}) fails"))?;
        let s = kan_structure_nerve(&g, 3).map_err(|e| e.to_string())?;
        for (key, filler) in cert.problems.iter().zip(&cert.fillers).filter(|(k, _)| k.shape.n == 2) {
            ensure(s.filler(key) == Some(&filler[..]), || format!("N(Z/{order}): fillers differ"))?;
        }
    }
    let p = SimplicialMap::to_point(Arc::new(simplex(1)));
    let run = || -> Result<_, String> {
        let (_, _, pt) = truncate_map(&p, 3);
        let cert = certify_rlp(&pt, Generators::Horns, 3).map_err(|e| e.to_string())?;
        Ok((cert.failure.clone(), cert.to_json(&pt)))
    };
    let (failure, json) = run()?;
    ensure(failure.map(|k| k.shape) == Some(Shape { n: 2, horn: Some(0) }), || "Δ[1] does not fail at Λ0[2]".into())?;
    ensure(run()?.1 == json, || "evidence is not reproducible".into())?;
    Ok("Z/2, Z/3 Kan; Δ[1] fails at Λ0[2]".into())
}

fn path_factorization() -> Outcome {
    let p = SimplicialMap::to_point(Nerve::new(FiniteGroup::cyclic(2), 3).object().clone());
    let pm = path_of_map(&p, 2).map_err(|e| e.to_string())?;
    ensure(pm.boundary_factors_diagonal(), || "∂∘r ≠ δ".into())?;
    let cert = certify_rlp(&pm.ev0, Generators::Boundaries, 2).map_err(|e| e.to_string())?;
    ensure(cert.passed(), || "∂₀ is not a trivial fibration".into())?;
    let path = &pm.object.object;
    let reflects = (0..=2).all(|n| {
        (0..pm.r.source.count(n)).all(|c| pm.r.source.is_degenerate(n, c) == path.is_degenerate(n, pm.r.apply(n, c)))
    });
    ensure(pm.r.is_injective() && path.flags_agree_with_tables() && reflects, || "r is not a cofibration".into())?;
    Ok(format!("Path counts {:?}", path.counts()))
}

fn pi_beta() -> Outcome {
    let pt = Arc::new(simplex(0));
    let (two, _, _) = coproduct(&pt, &pt);
    let (four, _, _) = coproduct(&two, &two);
    let pair = SimplicialMap::new(four, two.clone(), (0..4).map(|c| two.nondeg(c / 2)).collect()).map_err(|e| e.to_string())?;
    let d1 = Arc::new(simplex(1));
    let prod = product(d1.clone(), Arc::new(codiscrete(2, 2)));
    let instances = [
        (SimplicialMap::to_point(two.clone()), SimplicialMap::identity(two.clone())),
        (SimplicialMap::to_point(two.clone()), pair),
        (SimplicialMap::to_point(d1), prod.proj_left.clone()),
    ];
    let mut tested = 0;
    for (p, q) in instances {
        let pi = pi_type(&p, &q, 2).map_err(|e| e.to_string())?;
        let a = &pi.a.kernel;
        let filter = |cell: usize, cand: usize, _: &[usize]| pi.pi.q.apply(a.cell_dim(cell), cand) == pi.a.index_of(&a.nondeg(cell));
        let all = all_maps(a, &pi.b.trunc, &vec![None; a.len()], &filter, MAP_LIMIT).map_err(|e| e.to_string())?;
        ensure(!all.is_empty(), || format!("{}: no sections", q.source.name()))?;
        for assign in all {
            let s = KMap { source: a.clone(), target: pi.b.trunc.clone(), assign };
            ensure(pi.beta(&s).map_err(|e| e.to_string())?, || format!("{}: β fails", q.source.name()))?;
            tested += 1;
        }
    }
    Ok(format!("{tested} sections"))
}

fn univalence() -> Outcome {
    let start = Instant::now();
    let id = SimplicialMap::identity(Arc::new(simplex(0)));
    ensure(is_univalent(&id, 2).map_err(|e| e.to_string())?.univalent, || "id over Δ[0] is not univalent".into())?;
    let u = is_univalent(&common::fold(), 0).map_err(|e| e.to_string())?;
    ensure(!u.univalent && u.certificate.failure.is_some(), || "fold has no failure evidence".into())?;
    let (_, report) = classifying_functor(&common::fold(), 1, None).map_err(|e| e.to_string())?;
    ensure(report.passed(), || "fold fibres do not classify".into())?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{:.1?}", start.elapsed()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("EZ normal forms on the corpus", ez_normal_forms),
        ("(L,R) factorization", lr_factorization),
        ("degeneracy type counts", d_counts),
        ("replacement of the point is D", replacement_of_point),
        ("ε is a trivial fibration at bound 3", eps_trivial_fibration),
        ("counit isomorphism", counit_iso),
        ("weak equivalence extension", weq_extension_instances),
        ("pushout-product closure", pushout_products),
        ("Kan nerves", kan_nerves),
        ("path factorization", path_factorization),
        ("Π-type β-rule", pi_beta),
        ("univalence desk checks", univalence),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
