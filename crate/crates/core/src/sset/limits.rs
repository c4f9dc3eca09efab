//! Finite limits and the colimits that preserve the normal-form presentation.

use std::collections::HashMap;
use std::sync::Arc;

use super::{CellRef, FiniteSSet, SSetBuilder, SimplicialMap};
use crate::delta::OrdinalMap;
use crate::error::{Error, Result};
use crate::truncated::{tcoproduct, Truncation};

/// A product or fibre product, with non-degenerate cells presented as
/// jointly injective pairs of cells (shuffles).
#[derive(Clone, Debug)]
pub struct PairObject {
    pub object: Arc<FiniteSSet>,
    pub left: Arc<FiniteSSet>,
    pub right: Arc<FiniteSSet>,
    pub proj_left: SimplicialMap,
    pub proj_right: SimplicialMap,
    components: Vec<(CellRef, CellRef)>,
    index: HashMap<(CellRef, CellRef), usize>,
}

/// All pairs of surjections `[r] -> [k]`, `[r] -> [l]` that are jointly
/// injective, ordered by `r` then lexicographically by step sequence.
pub(crate) fn shuffles(k: usize, l: usize) -> Vec<(OrdinalMap, OrdinalMap)> {
    fn walk(a: usize, b: usize, k: usize, l: usize, sv: &mut Vec<usize>, tv: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        if a == k && b == l {
            out.push((sv.clone(), tv.clone()));
            return;
        }
        for (da, db) in [(1, 0), (0, 1), (1, 1)] {
            if a + da <= k && b + db <= l {
                sv.push(a + da);
                tv.push(b + db);
                walk(a + da, b + db, k, l, sv, tv, out);
                sv.pop();
                tv.pop();
            }
        }
    }
    let mut raw = Vec::new();
    walk(0, 0, k, l, &mut vec![0], &mut vec![0], &mut raw);
    raw.sort_by_key(|(s, _)| s.len());
    raw.into_iter()
        .map(|(s, t)| (OrdinalMap::from_parts(s, k), OrdinalMap::from_parts(t, l)))
        .collect()
}

impl PairObject {
    fn build(
        left: Arc<FiniteSSet>,
        right: Arc<FiniteSSet>,
        keep: &dyn Fn(&CellRef, &CellRef) -> bool,
        name: String,
    ) -> Result<Self> {
        let mut keys: Vec<(CellRef, CellRef)> = Vec::new();
        for x in 0..left.len() {
            let k = left.cell_dim(x);
            for y in 0..right.len() {
                let l = right.cell_dim(y);
                for (s, t) in shuffles(k, l) {
                    let a = CellRef::new(s, x);
                    let b = CellRef::new(t, y);
                    if keep(&a, &b) {
                        keys.push((a, b));
                    }
                }
            }
        }
        keys.sort_by_key(|(a, _)| a.dim());
        let index: HashMap<(CellRef, CellRef), usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut partial = PairObject {
            object: Arc::new(FiniteSSet::empty("")),
            left: left.clone(),
            right: right.clone(),
            proj_left: SimplicialMap::from_empty(left.clone()),
            proj_right: SimplicialMap::from_empty(right.clone()),
            components: keys.clone(),
            index,
        };
        let mut b = SSetBuilder::new();
        for (a, c) in &keys {
            let n = a.dim();
            let faces = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| {
                        partial
                            .pair(&left.face(a, i), &right.face(c, i))
                            .ok_or_else(|| Error::InvalidObject("fibre product is not closed under faces".into()))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            b.add(format!("({},{})", left.describe(a), right.describe(c)), n, faces);
        }
        // keys are already sorted by dimension, so builder indices are final
        let object = Arc::new(b.build(name)?);
        partial.proj_left = SimplicialMap::new_unchecked(object.clone(), left, keys.iter().map(|k| k.0.clone()).collect())?;
        partial.proj_right = SimplicialMap::new_unchecked(object.clone(), right, keys.iter().map(|k| k.1.clone()).collect())?;
        partial.object = object;
        Ok(partial)
    }

    /// The cell with the given components, in normal form, if it belongs to the object.
    pub fn pair(&self, a: &CellRef, b: &CellRef) -> Option<CellRef> {
        let m = a.dim();
        if b.dim() != m {
            return None;
        }
        let mut rho = vec![0usize];
        let mut sv = vec![a.op.at(0)];
        let mut tv = vec![b.op.at(0)];
        for i in 1..=m {
            let cur = (a.op.at(i), b.op.at(i));
            if cur != (*sv.last().unwrap(), *tv.last().unwrap()) {
                sv.push(cur.0);
                tv.push(cur.1);
            }
            rho.push(sv.len() - 1);
        }
        let r = sv.len() - 1;
        let key = (
            CellRef::new(OrdinalMap::from_parts(sv, a.op.target_dim()), a.cell),
            CellRef::new(OrdinalMap::from_parts(tv, b.op.target_dim()), b.cell),
        );
        self.index.get(&key).map(|&c| CellRef::new(OrdinalMap::from_parts(rho, r), c))
    }

    /// Components of a non-degenerate cell.
    pub fn components(&self, cell: usize) -> &(CellRef, CellRef) {
        &self.components[cell]
    }

    /// Components of an arbitrary cell.
    pub fn split(&self, x: &CellRef) -> (CellRef, CellRef) {
        let (a, b) = &self.components[x.cell];
        (self.left.act(a, &x.op), self.right.act(b, &x.op))
    }

    /// The mediating map `⟨u, v⟩` out of a common source.
    pub fn pairing(&self, u: &SimplicialMap, v: &SimplicialMap) -> Result<SimplicialMap> {
        if *u.source != *v.source {
            return Err(Error::CodomainMismatch("pairing needs a common source".into()));
        }
        let assign = (0..u.source.len())
            .map(|c| {
                self.pair(u.image_of(c), v.image_of(c)).ok_or_else(|| {
                    Error::CodomainMismatch(format!("images of `{}` are not compatible", u.source.id(c)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialMap::new(u.source.clone(), self.object.clone(), assign)
    }
}

pub fn product(x: Arc<FiniteSSet>, y: Arc<FiniteSSet>) -> PairObject {
    let name = format!("{}×{}", x.name(), y.name());
    PairObject::build(x, y, &|_, _| true, name).expect("products are well formed")
}

/// Fibre product of `f: A -> Z` and `g: B -> Z`.
pub fn pullback(f: &SimplicialMap, g: &SimplicialMap) -> Result<PairObject> {
    if *f.target != *g.target {
        return Err(Error::CodomainMismatch(format!(
            "{} and {} are different codomains",
            f.target.name(),
            g.target.name()
        )));
    }
    let name = format!("{}×_{}{}", f.source.name(), f.target.name(), g.source.name());
    PairObject::build(f.source.clone(), g.source.clone(), &|a, b| f.apply(a) == g.apply(b), name)
}

/// Disjoint union with its injections. Identifiers are prefixed only when they clash.
pub fn coproduct(x: &Arc<FiniteSSet>, y: &Arc<FiniteSSet>) -> (Arc<FiniteSSet>, SimplicialMap, SimplicialMap) {
    let clash = x.ids().iter().any(|id| y.index_of(id).is_some());
    let tag = |side: usize, id: &str| if clash { format!("{side}:{id}") } else { id.to_string() };
    let mut b = SSetBuilder::new();
    for c in 0..x.len() {
        b.add(tag(0, x.id(c)), x.cell_dim(c), x.faces(c).to_vec());
    }
    let off = x.len();
    for c in 0..y.len() {
        let faces = y.faces(c).iter().map(|f| CellRef::new(f.op.clone(), f.cell + off)).collect();
        b.add(tag(1, y.id(c)), y.cell_dim(c), faces);
    }
    let obj = Arc::new(b.build(format!("{}⊔{}", x.name(), y.name())).expect("coproducts are well formed"));
    let inl = (0..x.len())
        .map(|c| obj.nondeg(obj.index_of(&tag(0, x.id(c))).unwrap()))
        .collect();
    let inr = (0..y.len())
        .map(|c| obj.nondeg(obj.index_of(&tag(1, y.id(c))).unwrap()))
        .collect();
    let inl = SimplicialMap::new_unchecked(x.clone(), obj.clone(), inl).unwrap();
    let inr = SimplicialMap::new_unchecked(y.clone(), obj.clone(), inr).unwrap();
    (obj, inl, inr)
}

/// The sub-object on the non-degenerate cells flagged in `keep`, with its inclusion.
pub fn subobject(x: &FiniteSSet, keep: &[bool], name: impl Into<String>) -> Result<(FiniteSSet, Vec<usize>)> {
    let mut new_index = vec![usize::MAX; x.len()];
    let mut kept = Vec::new();
    for c in 0..x.len() {
        if keep[c] {
            new_index[c] = kept.len();
            kept.push(c);
        }
    }
    let mut b = SSetBuilder::new();
    for &c in &kept {
        let faces = x
            .faces(c)
            .iter()
            .map(|f| {
                if keep[f.cell] {
                    Ok(CellRef::new(f.op.clone(), new_index[f.cell]))
                } else {
                    Err(Error::InvalidObject(format!("face of `{}` is not kept", x.id(c))))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        b.add(x.id(c), x.cell_dim(c), faces);
    }
    Ok((b.build(name)?, kept))
}

/// A sub-object together with its inclusion map.
pub fn subobject_inclusion(x: &Arc<FiniteSSet>, keep: &[bool], name: impl Into<String>) -> Result<SimplicialMap> {
    let (sub, kept) = subobject(x, keep, name)?;
    let assign = kept.iter().map(|&c| x.nondeg(c)).collect();
    SimplicialMap::new_unchecked(Arc::new(sub), x.clone(), assign)
}

/// Result of [`pushout`]: the object and the two cocone maps.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Arc<FiniteSSet>,
    /// From the codomain of `f`.
    pub inl: SimplicialMap,
    /// From the codomain of `g`.
    pub inr: SimplicialMap,
}

/// Pushout of `f: C -> A` and `g: C -> B`, for `f` a cofibration or a degeneracy quotient.
pub fn pushout(f: &SimplicialMap, g: &SimplicialMap) -> Result<Pushout> {
    if *f.source != *g.source {
        return Err(Error::CodomainMismatch("pushout legs need a common domain".into()));
    }
    if !is_cofibration(f).holds && !crate::degeneracy::is_degeneracy_quotient(f).holds {
        return Err(Error::UnsupportedPushout(format!(
            "{} -> {} is neither a cofibration nor a degeneracy quotient",
            f.source.name(),
            f.target.name()
        )));
    }
    let (a, b, c) = (&f.target, &g.target, &f.source);
    let bound = a.dim().max(b.dim()).max(c.dim());
    let ta = Truncation::new(a.clone(), bound);
    let tb = Truncation::new(b.clone(), bound);
    let (cop, _, _) = tcoproduct(&tb.trunc, &ta.trunc);
    let off: Vec<usize> = (0..=bound).map(|n| tb.trunc.count(n)).collect();
    let relations: Vec<(usize, usize, usize)> = (0..c.len())
        .map(|x| {
            let n = c.cell_dim(x);
            (n, off[n] + ta.index_of(f.image_of(x)), tb.index_of(g.image_of(x)))
        })
        .collect();
    let q = cop.quotient(&relations, format!("{}⊔_{}{}", a.name(), c.name(), b.name()))?;
    let inl = (0..a.len())
        .map(|x| {
            let n = a.cell_dim(x);
            q.class_nf[n][off[n] + ta.nondeg_index(x)].clone()
        })
        .collect();
    let inr = (0..b.len())
        .map(|x| q.class_nf[b.cell_dim(x)][tb.nondeg_index(x)].clone())
        .collect();
    Ok(Pushout {
        inl: SimplicialMap::new_unchecked(a.clone(), q.object.clone(), inl)?,
        inr: SimplicialMap::new_unchecked(b.clone(), q.object.clone(), inr)?,
        object: q.object,
    })
}

/// Outcome of [`is_cofibration`]: the verdict and, on failure, two distinct
/// source cells with the same image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofibrationWitness {
    pub holds: bool,
    pub collision: Option<(String, String)>,
}

/// Injectivity on cells of all dimensions. Since objects here have decidable
/// degeneracies this is the same as being a cofibration.
pub fn is_cofibration(f: &SimplicialMap) -> CofibrationWitness {
    let x = &f.source;
    for n in 0..=x.dim() {
        let mut seen: HashMap<&CellRef, usize> = HashMap::new();
        for &c in x.cells_of_dim(n) {
            let img = f.image_of(c);
            if let Some(&d) = seen.get(img) {
                return CofibrationWitness { holds: false, collision: Some((x.id(d).to_string(), x.id(c).to_string())) };
            }
            seen.insert(img, c);
        }
        for &c in x.cells_of_dim(n) {
            let img = f.image_of(c);
            if let Some(j) = img.op.first_repeat() {
                let cell = x.nondeg(c);
                let other = x.degeneracy(&x.face(&cell, j), j);
                return CofibrationWitness {
                    holds: false,
                    collision: Some((x.id(c).to_string(), x.describe(&other))),
                };
            }
        }
    }
    CofibrationWitness { holds: true, collision: None }
}

#[cfg(test)]
mod tests {
    use super::super::standard::*;
    use super::*;

    #[test]
    fn product_counts() {
        let d1 = Arc::new(simplex(1));
        let p = product(d1.clone(), d1.clone());
        assert_eq!(p.object.counts(), vec![4, 5, 2]);
        p.object.validate().unwrap();
        let q = product(d1.clone(), Arc::new(simplex(0)));
        assert_eq!(q.object.counts(), vec![2, 1]);
        let b = Arc::new(boundary(1));
        assert_eq!(product(b.clone(), b).object.counts(), vec![4]);
    }

    #[test]
    fn circle_as_pushout() {
        let i = boundary_inclusion(1);
        let g = SimplicialMap::to_point(i.source.clone());
        let po = pushout(&i, &g).unwrap();
        assert_eq!(po.object.counts(), vec![1, 1]);
        po.inl.check_naturality().unwrap();
    }

    #[test]
    fn collapsing_an_edge() {
        let d2 = Arc::new(simplex(2));
        // the long edge {0,2}
        let e02 = SimplicialMap::from_cell(d2.clone(), &d2.nondeg_by_id("02").unwrap());
        let c = SimplicialMap::to_point(e02.source.clone());
        let po = pushout(&c, &e02).unwrap();
        assert_eq!(po.object.counts(), vec![2, 2, 1]);
        po.object.validate().unwrap();
    }

    #[test]
    fn cofibration_checks() {
        assert!(is_cofibration(&boundary_inclusion(2)).holds);
        let c = SimplicialMap::to_point(Arc::new(simplex(1)));
        let w = is_cofibration(&c);
        assert!(!w.holds);
        assert_eq!(w.collision, Some(("0".into(), "1".into())));
    }
}
