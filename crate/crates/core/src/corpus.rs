//! Seeded random objects and maps: quotients of coproducts of simplices.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::sset::standard::simplex;
use crate::sset::{CellRef, FiniteSSet, SSetBuilder, SimplicialMap};
use crate::truncated::{TQuotient, Truncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub max_dim: usize,
    pub max_summands: usize,
    pub max_relations: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { max_dim: 3, max_summands: 3, max_relations: 3 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Δ[n_0] ⊔ ... ⊔ Δ[n_k]`, cell `v` of summand `i` named `i.v`.
pub fn simplex_coproduct(dims: &[usize], name: impl Into<String>) -> Result<FiniteSSet> {
    let mut b = SSetBuilder::new();
    for (i, &n) in dims.iter().enumerate() {
        let s = simplex(n);
        let off = b.len();
        for c in 0..s.len() {
            let faces = s.faces(c).iter().map(|f| CellRef::new(f.op.clone(), f.cell + off)).collect();
            b.add(format!("{i}.{}", s.id(c)), s.cell_dim(c), faces);
        }
    }
    b.build(name)
}

fn random_dims(rng: &mut impl Rng, cfg: &CorpusConfig) -> Vec<usize> {
    let k = rng.gen_range(1..=cfg.max_summands.max(1));
    (0..k).map(|_| rng.gen_range(0..=cfg.max_dim)).collect()
}

/// Random identifications `(dim, a, b)` among cells of a truncation.
fn random_relations(rng: &mut impl Rng, t: &Truncation, count: usize) -> Vec<(usize, usize, usize)> {
    let dims: Vec<usize> = (0..=t.bound()).filter(|&n| t.trunc.count(n) > 1).collect();
    let mut out = Vec::new();
    for _ in 0..count {
        let Some(&n) = dims.choose(rng) else { break };
        let a = rng.gen_range(0..t.trunc.count(n));
        let b = rng.gen_range(0..t.trunc.count(n));
        out.push((n, a, b));
    }
    out
}

/// A random quotient of a coproduct of simplices.
pub fn random_object(rng: &mut impl Rng, cfg: &CorpusConfig, name: impl Into<String>) -> Result<FiniteSSet> {
    let dims = random_dims(rng, cfg);
    let cop = simplex_coproduct(&dims, "cop")?;
    let bound = cop.dim();
    let t = Truncation::new(Arc::new(cop), bound);
    let count = rng.gen_range(0..=cfg.max_relations);
    let rel = random_relations(rng, &t, count);
    let q = t.trunc.quotient(&rel, name)?;
    Ok(Arc::try_unwrap(q.object).unwrap_or_else(|a| (*a).clone()))
}

/// A random map into `target`: simplices sent to random cells, then the
/// source is cut down by random identifications the map respects.
pub fn random_map(rng: &mut impl Rng, cfg: &CorpusConfig, target: &Arc<FiniteSSet>, name: impl Into<String>) -> Result<SimplicialMap> {
    if target.is_empty() {
        return Ok(SimplicialMap::from_empty(target.clone()));
    }
    let top = cfg.max_dim.min(target.dim().max(1));
    let dims: Vec<usize> = random_dims(rng, cfg).into_iter().map(|n| n.min(top)).collect();
    let cop = Arc::new(simplex_coproduct(&dims, "cop")?);
    let tt = Truncation::new(target.clone(), cop.dim());
    let mut assign = vec![None; cop.len()];
    for (i, &n) in dims.iter().enumerate() {
        let s = simplex(n);
        let img = tt.cell_ref(n, rng.gen_range(0..tt.trunc.count(n))).clone();
        let pick = SimplicialMap::from_cell(target.clone(), &img);
        for c in 0..s.len() {
            let at = cop.index_of(&format!("{i}.{}", s.id(c))).expect("summand cells are named by position");
            assign[at] = Some(pick.image_of(c).clone());
        }
    }
    let assign: Vec<CellRef> = assign.into_iter().map(|a| a.expect("every summand is assigned")).collect();
    let f = SimplicialMap::new(cop.clone(), target.clone(), assign)?;
    let ts = Truncation::new(cop.clone(), cop.dim());
    let img = |n: usize, c: usize| f.apply(ts.cell_ref(n, c));
    let mut rel = Vec::new();
    let count = rng.gen_range(0..=cfg.max_relations) * 2;
    for (n, a, b) in random_relations(rng, &ts, count) {
        if img(n, a) == img(n, b) {
            rel.push((n, a, b));
        }
    }
    let q = ts.trunc.quotient(&rel, name)?;
    induced(&q, &ts, &f)
}

/// The map out of a quotient induced by a map that respects it.
fn induced(q: &TQuotient, ts: &Truncation, f: &SimplicialMap) -> Result<SimplicialMap> {
    let src = q.object.clone();
    let mut assign: Vec<Option<CellRef>> = vec![None; src.len()];
    for (n, layer) in q.class_nf.iter().enumerate() {
        for (c, r) in layer.iter().enumerate() {
            if r.is_degenerate() {
                continue;
            }
            let img = f.apply(ts.cell_ref(n, c));
            match &assign[r.cell] {
                Some(prev) if *prev != img => {
                    return Err(Error::InvalidMap("map does not respect the quotient".into()));
                }
                _ => assign[r.cell] = Some(img),
            }
        }
    }
    let assign = assign
        .into_iter()
        .map(|a| a.ok_or_else(|| Error::InvalidMap("quotient cell without a representative".into())))
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::new(src, f.target.clone(), assign)
}

/// `count` random objects from one seed.
pub fn objects(seed: u64, count: usize, cfg: &CorpusConfig) -> Result<Vec<FiniteSSet>> {
    let mut r = rng(seed);
    (0..count).map(|i| random_object(&mut r, cfg, format!("R{i}"))).collect()
}

/// `count` random maps, each into a fresh random object.
pub fn maps(seed: u64, count: usize, cfg: &CorpusConfig) -> Result<Vec<SimplicialMap>> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let y = Arc::new(random_object(&mut r, cfg, format!("Y{i}"))?);
            random_map(&mut r, cfg, &y, format!("S{i}"))
        })
        .collect()
}

pub fn corpus_json(objects: &[FiniteSSet], maps: &[SimplicialMap]) -> Value {
    json!({
        "objects": objects.iter().map(FiniteSSet::to_json).collect::<Vec<_>>(),
        "maps": maps.iter().map(|f| json!({
            "source": f.source.to_json(),
            "target": f.target.to_json(),
            "map": f.to_json(),
        })).collect::<Vec<_>>(),
    })
}
