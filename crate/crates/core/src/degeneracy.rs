//! Degeneracy types, the (degeneracy quotient, degeneracy-detecting)
//! factorization system, and factoring through degeneracy quotients.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::delta::{compose_unchecked, OrdinalMap};
use crate::error::{Error, Result};
use crate::sset::{CellRef, FiniteSSet, SimplicialMap};
use crate::truncated::{KMap, TruncatedSSet, Truncation};

/// Largest dimension whose faces fit in the bitmask.
pub const MAX_TYPE_DIM: usize = 6;

/// Faces of `[n]` with at least two vertices, in lexicographic order of
/// vertex lists. Vertices are never degenerate and are not stored.
pub fn type_faces(n: usize) -> &'static [Vec<usize>] {
    static TABLE: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_TYPE_DIM)
            .map(|n| {
                let mut faces: Vec<Vec<usize>> = (0u32..1 << (n + 1))
                    .filter(|m| m.count_ones() >= 2)
                    .map(|m| (0..=n).filter(|&v| m & (1 << v) != 0).collect())
                    .collect();
                faces.sort();
                faces
            })
            .collect()
    });
    &table[n]
}

fn face_position(n: usize, face: &[usize]) -> Option<usize> {
    type_faces(n).binary_search_by(|f| f.as_slice().cmp(face)).ok()
}

/// A set of faces of `[dim]` (of dimension at least one), stored as a bitmask
/// over [`type_faces`]. Cells of the object of face sets and, when fixed by
/// [`idempotent_p`], degeneracy types.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegeneracyType {
    dim: usize,
    mask: u128,
}

/// Cells of the object of all face sets share the representation.
pub type DZeroCell = DegeneracyType;

impl fmt::Debug for DegeneracyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for DegeneracyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for v in m {
                write!(f, "{v}")?;
            }
        }
        write!(f, "}}")
    }
}

impl DegeneracyType {
    pub fn empty(dim: usize) -> Self {
        assert!(dim <= MAX_TYPE_DIM);
        DegeneracyType { dim, mask: 0 }
    }

    pub fn from_members(dim: usize, members: &[Vec<usize>]) -> Result<Self> {
        if dim > MAX_TYPE_DIM {
            return Err(Error::ResourceBound(format!("degeneracy types stop at dimension {MAX_TYPE_DIM}")));
        }
        let mut t = Self::empty(dim);
        for m in members {
            let pos = face_position(dim, m)
                .ok_or_else(|| Error::InvalidParameters(format!("{m:?} is not a face of [{dim}] with two or more vertices")))?;
            t.mask |= 1 << pos;
        }
        Ok(t)
    }

    pub(crate) fn from_mask(dim: usize, mask: u128) -> Self {
        DegeneracyType { dim, mask }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        face_position(self.dim, face).is_some_and(|p| self.mask & (1 << p) != 0)
    }

    /// Whether the face `[0..dim]` itself is a member.
    pub fn contains_max(&self) -> bool {
        self.dim > 0 && self.contains(&(0..=self.dim).collect::<Vec<_>>())
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        type_faces(self.dim)
            .iter()
            .enumerate()
            .filter(|(p, _)| self.mask & (1 << p) != 0)
            .map(|(_, f)| f.clone())
            .collect()
    }

    pub fn is_subset(&self, other: &DegeneracyType) -> bool {
        self.dim == other.dim && self.mask & !other.mask == 0
    }

    /// `θ^*` for `θ: [m] -> [dim]`: a face of `[m]` belongs to the result
    /// when its composite with `θ` is non-injective or a member.
    pub fn act(&self, theta: &OrdinalMap) -> DegeneracyType {
        debug_assert_eq!(theta.target_dim(), self.dim);
        let m = theta.source_dim();
        let mut mask = 0u128;
        for (p, face) in type_faces(m).iter().enumerate() {
            let img: Vec<usize> = face.iter().map(|&v| theta.at(v)).collect();
            let injective = img.windows(2).all(|w| w[0] < w[1]);
            if !injective || self.contains(&img) {
                mask |= 1 << p;
            }
        }
        DegeneracyType { dim: m, mask }
    }

    /// Whether the cell is degenerate in the object of face sets.
    pub fn is_degenerate(&self) -> bool {
        let n = self.dim;
        (0..n).any(|j| {
            let op = compose_unchecked(&OrdinalMap::face(n, j), &OrdinalMap::degeneracy(n - 1, j));
            self.act(&op) == *self
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TypeJson {
    dim: usize,
    members: Vec<Vec<usize>>,
}

impl Serialize for DegeneracyType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TypeJson { dim: self.dim, members: self.members() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DegeneracyType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TypeJson::deserialize(d)?;
        DegeneracyType::from_members(j.dim, &j.members).map_err(serde::de::Error::custom)
    }
}

/// The degeneracy type of a face set computed in the object of face sets:
/// the faces along which it restricts to a degenerate cell.
pub fn idempotent_p(c: &DZeroCell) -> DegeneracyType {
    let n = c.dim;
    let mut mask = 0u128;
    for (p, face) in type_faces(n).iter().enumerate() {
        let delta = OrdinalMap::from_parts(face.clone(), n);
        if c.act(&delta).is_degenerate() {
            mask |= 1 << p;
        }
    }
    DegeneracyType { dim: n, mask }
}

/// Degeneracy type of a cell of a kernel object.
pub fn degeneracy_type(x: &FiniteSSet, cell: &CellRef) -> DegeneracyType {
    let n = cell.dim();
    let mut mask = 0u128;
    for (p, face) in type_faces(n).iter().enumerate() {
        let delta = OrdinalMap::from_parts(face.clone(), n);
        if x.act(cell, &delta).is_degenerate() {
            mask |= 1 << p;
        }
    }
    DegeneracyType { dim: n, mask }
}

/// Degeneracy type of a cell of a truncated object with exact flags.
pub fn degeneracy_type_truncated(x: &TruncatedSSet, n: usize, c: usize) -> DegeneracyType {
    let mut mask = 0u128;
    for (p, face) in type_faces(n).iter().enumerate() {
        let delta = OrdinalMap::from_parts(face.clone(), n);
        if x.is_degenerate(face.len() - 1, x.act(n, c, &delta)) {
            mask |= 1 << p;
        }
    }
    DegeneracyType { dim: n, mask }
}

/// All degeneracy types of dimension `n`: non-degenerate ones first, each
/// group in increasing mask order.
pub fn enumerate_d(n: usize) -> Result<Vec<DegeneracyType>> {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<usize, Vec<DegeneracyType>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let mut types = if n <= 3 {
        let count = type_faces(n).len();
        (0u128..1 << count)
            .map(|m| DegeneracyType::from_mask(n, m))
            .filter(|t| idempotent_p(t) == *t)
            .collect::<Vec<_>>()
    } else if n <= 5 {
        from_boundaries(n)?
    } else {
        return Err(Error::ResourceBound(format!("degeneracy types are enumerated up to dimension 5, not {n}")));
    };
    types.sort_by_key(|t| (t.contains_max(), t.mask));
    cache.lock().unwrap().insert(n, types.clone());
    Ok(types)
}

/// Types of dimension `n` from compatible tuples of facets plus the top bit.
fn from_boundaries(n: usize) -> Result<Vec<DegeneracyType>> {
    let lower = enumerate_d(n - 1)?;
    let faces = type_faces(n);
    let full: Vec<usize> = (0..=n).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<DegeneracyType> = Vec::with_capacity(n + 1);
    fn rec(n: usize, lower: &[DegeneracyType], chosen: &mut Vec<DegeneracyType>, found: &mut dyn FnMut(&[DegeneracyType])) {
        let i = chosen.len();
        if i == n + 1 {
            found(chosen);
            return;
        }
        for cand in lower {
            // d_k d_i = d_{i-1} d_k for k < i
            let ok = (0..i).all(|k| {
                cand.act(&OrdinalMap::face(n - 1, k)) == chosen[k].act(&OrdinalMap::face(n - 1, i - 1))
            });
            if ok {
                chosen.push(*cand);
                rec(n, lower, chosen, found);
                chosen.pop();
            }
        }
    }
    rec(n, &lower, &mut chosen, &mut |facets| {
        let mut base = 0u128;
        for (p, face) in faces.iter().enumerate() {
            if face.len() == n + 1 {
                continue;
            }
            let missing = full.iter().position(|v| !face.contains(v)).unwrap();
            let sub: Vec<usize> = face.iter().map(|&v| if v > missing { v - 1 } else { v }).collect();
            if facets[missing].contains(&sub) {
                base |= 1 << p;
            }
        }
        let top = 1u128 << face_position(n, &full).unwrap();
        for mask in [base, base | top] {
            let t = DegeneracyType::from_mask(n, mask);
            if idempotent_p(&t) == t {
                out.push(t);
            }
        }
    });
    Ok(out)
}

/// The object of degeneracy types, truncated.
#[derive(Clone, Debug)]
pub struct DTruncation {
    pub trunc: Arc<TruncatedSSet>,
    pub types: Vec<Vec<DegeneracyType>>,
    index: Vec<HashMap<DegeneracyType, usize>>,
}

impl DTruncation {
    pub fn new(bound: usize) -> Result<Self> {
        let types: Vec<Vec<DegeneracyType>> = (0..=bound).map(enumerate_d).collect::<Result<_>>()?;
        let index: Vec<HashMap<DegeneracyType, usize>> =
            types.iter().map(|l| l.iter().enumerate().map(|(i, t)| (*t, i)).collect()).collect();
        let labels = types.iter().map(|l| l.iter().map(|t| t.to_string()).collect()).collect();
        let faces = (0..=bound)
            .map(|n| {
                types[n]
                    .iter()
                    .map(|t| {
                        if n == 0 {
                            Vec::new()
                        } else {
                            (0..=n).map(|i| index[n - 1][&t.act(&OrdinalMap::face(n, i))]).collect()
                        }
                    })
                    .collect()
            })
            .collect();
        let degens = (0..=bound)
            .map(|n| {
                if n == bound {
                    return Vec::new();
                }
                types[n]
                    .iter()
                    .map(|t| (0..=n).map(|j| index[n + 1][&t.act(&OrdinalMap::degeneracy(n, j))]).collect())
                    .collect()
            })
            .collect();
        let trunc = TruncatedSSet::from_tables("D", bound, labels, faces, degens, None)?;
        Ok(DTruncation { trunc: Arc::new(trunc), types, index })
    }

    pub fn index_of(&self, t: &DegeneracyType) -> Option<usize> {
        self.index.get(t.dim).and_then(|m| m.get(t).copied())
    }

    pub fn bound(&self) -> usize {
        self.trunc.bound()
    }
}

/// The unique non-degenerate extension of a boundary map `∂Δ[n] -> D`: the
/// proper faces whose image is degenerate.
pub fn extend_boundary_to_d(f: &KMap, d: &DTruncation) -> Result<DegeneracyType> {
    let b = &f.source;
    let n = b.dim() + 1;
    if n < 1 || b.len() != (1usize << (n + 1)) - 2 {
        return Err(Error::InvalidParameters("source is not the boundary of a simplex".into()));
    }
    f.check().map_err(|e| Error::InvalidMap(format!("boundary map is not simplicial: {e}")))?;
    let mut mask = 0u128;
    for (p, face) in type_faces(n).iter().enumerate() {
        if face.len() == n + 1 {
            continue;
        }
        let id = crate::sset::standard::face_id(face);
        let c = b.index_of(&id).ok_or_else(|| Error::InvalidParameters(format!("boundary lacks face {id}")))?;
        let k = face.len() - 1;
        if f.target.is_degenerate(k, f.assign[c]) {
            mask |= 1 << p;
        }
    }
    let t = DegeneracyType::from_mask(n, mask);
    if idempotent_p(&t) != t {
        return Err(Error::Verification(format!("extension {t} is not a degeneracy type")));
    }
    for i in 0..=n {
        let face: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
        let c = b.index_of(&crate::sset::standard::face_id(&face)).unwrap();
        let expected = d.types[n - 1][f.assign[c]];
        if t.act(&OrdinalMap::face(n, i)) != expected {
            return Err(Error::Verification(format!("extension {t} does not restrict to the given face d{i}")));
        }
    }
    Ok(t)
}

/// A yes/no answer with an offending cell or pair on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Decision {
    fn yes() -> Self {
        Decision { holds: true, witness: None }
    }

    fn no(w: String) -> Self {
        Decision { holds: false, witness: Some(w) }
    }
}

/// Non-degenerate cells go to non-degenerate cells.
pub fn is_degeneracy_detecting(f: &SimplicialMap) -> Decision {
    match f.first_collapsed() {
        None => Decision::yes(),
        Some(c) => Decision::no(f.source.id(c).to_string()),
    }
}

/// The factorization `f = m ∘ q`.
#[derive(Clone, Debug)]
pub struct LrFactorization {
    pub mid: Arc<FiniteSSet>,
    pub q: SimplicialMap,
    pub m: SimplicialMap,
}

/// Factors `f` as a degeneracy quotient followed by a degeneracy-detecting
/// map, by imposing `c ~ σ^*(δ^*c)` whenever `f(c) = σ^*y` until no
/// non-degenerate cell of the quotient is sent to a degenerate cell.
pub fn lr_factor(f: &SimplicialMap) -> Result<LrFactorization> {
    let a = &f.source;
    let t = Truncation::new(a.clone(), a.dim());
    let mut relations: Vec<(usize, usize, usize)> = Vec::new();
    loop {
        let q = t.trunc.quotient(&relations, a.name().to_string())?;
        let reps = representatives(&q.class_nf, &q.object);
        let mut added = false;
        for (k, rep) in reps.iter().enumerate() {
            let n = q.object.cell_dim(k);
            let img = f.apply(t.cell_ref(n, *rep));
            if img.is_degenerate() {
                let sigma = &img.op;
                let op = compose_unchecked(&sigma.min_section(), sigma);
                let other = a.act(t.cell_ref(n, *rep), &op);
                relations.push((n, *rep, t.index_of(&other)));
                added = true;
            }
        }
        if added {
            continue;
        }
        let mid = q.object.clone();
        let q_assign = (0..a.len()).map(|c| q.class_nf[a.cell_dim(c)][t.nondeg_index(c)].clone()).collect();
        let m_assign = reps
            .iter()
            .enumerate()
            .map(|(k, rep)| f.apply(t.cell_ref(mid.cell_dim(k), *rep)))
            .collect();
        let qmap = SimplicialMap::new(a.clone(), mid.clone(), q_assign)?;
        let mmap = SimplicialMap::new(mid.clone(), f.target.clone(), m_assign)?;
        return Ok(LrFactorization { mid, q: qmap, m: mmap });
    }
}

/// For each non-degenerate cell of a quotient, the first truncation cell in its class.
pub(crate) fn representatives(class_nf: &[Vec<CellRef>], quotient: &FiniteSSet) -> Vec<usize> {
    let mut reps = vec![usize::MAX; quotient.len()];
    for layer in class_nf {
        for (c, r) in layer.iter().enumerate() {
            if !r.is_degenerate() && reps[r.cell] == usize::MAX {
                reps[r.cell] = c;
            }
        }
    }
    reps
}

/// Whether `f` is a degeneracy quotient: the detecting part of its
/// factorization is an isomorphism.
pub fn is_degeneracy_quotient(f: &SimplicialMap) -> Decision {
    let lr = match lr_factor(f) {
        Ok(lr) => lr,
        Err(e) => return Decision::no(e.to_string()),
    };
    if lr.m.is_isomorphism() {
        return Decision::yes();
    }
    let target = &f.target;
    let mut hit = vec![None; target.len()];
    for (k, img) in lr.m.assignment().iter().enumerate() {
        if let Some(prev) = hit[img.cell] {
            return Decision::no(format!("{} and {} have the same image", lr.mid.id(prev), lr.mid.id(k)));
        }
        hit[img.cell] = Some(k);
    }
    let missed = hit.iter().position(Option::is_none).unwrap_or(0);
    Decision::no(format!("{} is not in the image", target.id(missed)))
}

/// Result of factoring a map through a degeneracy quotient.
#[derive(Clone, Debug, PartialEq)]
pub enum FactorOutcome<M> {
    Factors(M),
    /// The first source cell whose image is not forced as required.
    Refused(String),
}

impl<M> FactorOutcome<M> {
    pub fn factors(&self) -> bool {
        matches!(self, FactorOutcome::Factors(_))
    }

    pub fn into_option(self) -> Option<M> {
        match self {
            FactorOutcome::Factors(m) => Some(m),
            FactorOutcome::Refused(_) => None,
        }
    }
}

/// For each non-degenerate cell of `p`'s target, a non-degenerate source cell over it.
pub(crate) fn quotient_sections(p: &SimplicialMap) -> Option<Vec<usize>> {
    let mut pre = vec![usize::MAX; p.target.len()];
    for (a, img) in p.assignment().iter().enumerate() {
        if !img.is_degenerate() && pre[img.cell] == usize::MAX {
            pre[img.cell] = a;
        }
    }
    if pre.contains(&usize::MAX) {
        None
    } else {
        Some(pre)
    }
}

/// Decides whether `f: A -> X` factors as `g ∘ p` through the degeneracy
/// quotient `p: A -> B`, returning the unique `g` when it does.
pub fn factor_through_quotient(f: &SimplicialMap, p: &SimplicialMap) -> Result<FactorOutcome<SimplicialMap>> {
    if *f.source != *p.source {
        return Err(Error::CodomainMismatch("f and p need a common source".into()));
    }
    let d = is_degeneracy_quotient(p);
    if !d.holds {
        return Err(Error::NotAQuotient(d.witness.unwrap_or_default()));
    }
    let pre = quotient_sections(p).ok_or_else(|| Error::NotAQuotient("not surjective".into()))?;
    let assign: Vec<CellRef> = pre.iter().map(|&a| f.image_of(a).clone()).collect();
    let g = SimplicialMap::new_unchecked(p.target.clone(), f.target.clone(), assign)?;
    for a in 0..f.source.len() {
        if g.apply(p.image_of(a)) != *f.image_of(a) {
            return Ok(FactorOutcome::Refused(f.source.id(a).to_string()));
        }
    }
    if g.check_naturality().is_err() {
        return Ok(FactorOutcome::Refused(f.source.id(pre[0]).to_string()));
    }
    Ok(FactorOutcome::Factors(g))
}

/// As [`factor_through_quotient`], for a map into a truncated object and a
/// quotient already known to be a degeneracy quotient.
pub fn factor_kmap_through_quotient(f: &KMap, p: &SimplicialMap, sections: &[usize]) -> FactorOutcome<KMap> {
    let assign: Vec<usize> = sections.iter().map(|&a| f.assign[a]).collect();
    let g = KMap { source: p.target.clone(), target: f.target.clone(), assign };
    for a in 0..f.source.len() {
        if g.eval(p.image_of(a)) != f.assign[a] {
            return FactorOutcome::Refused(f.source.id(a).to_string());
        }
    }
    if g.check().is_err() {
        return FactorOutcome::Refused(f.source.id(sections[0]).to_string());
    }
    FactorOutcome::Factors(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::{circle, simplex};

    fn surj(v: &[usize]) -> OrdinalMap {
        OrdinalMap::surjection(v.to_vec()).unwrap()
    }

    #[test]
    fn small_type_counts() {
        assert_eq!(enumerate_d(0).unwrap().len(), 1);
        assert_eq!(enumerate_d(1).unwrap().len(), 2);
        assert_eq!(enumerate_d(2).unwrap().len(), 11);
    }

    #[test]
    fn types_of_simplex_cells() {
        let d2 = simplex(2);
        let top = d2.nondeg_by_id("012").unwrap();
        assert!(degeneracy_type(&d2, &top).is_empty());
        let d1 = simplex(1);
        let x = CellRef::new(surj(&[0, 0, 1]), d1.index_of("01").unwrap());
        let t = degeneracy_type(&d1, &x);
        assert_eq!(t.members(), vec![vec![0, 1], vec![0, 1, 2]]);
        let v = CellRef::new(surj(&[0, 0, 0]), 0);
        assert_eq!(degeneracy_type(&d1, &v).members().len(), 4);
    }

    #[test]
    fn p_on_the_degenerate_edge() {
        let c = DegeneracyType::from_members(1, &[vec![0, 1]]).unwrap();
        assert_eq!(idempotent_p(&c), c);
        assert!(idempotent_p(&DegeneracyType::empty(1)).is_empty());
    }

    #[test]
    fn circle_quotient_detects_but_is_no_quotient() {
        let s1 = Arc::new(circle());
        let d1 = Arc::new(simplex(1));
        let e = s1.nondeg_by_id("e").unwrap();
        let f = SimplicialMap::from_cell(s1.clone(), &e);
        assert_eq!(*f.source, *d1);
        assert!(is_degeneracy_detecting(&f).holds);
        assert!(!is_degeneracy_quotient(&f).holds);
    }

    #[test]
    fn collapse_is_quotient() {
        let c = SimplicialMap::to_point(Arc::new(simplex(1)));
        assert!(is_degeneracy_quotient(&c).holds);
        let lr = lr_factor(&c).unwrap();
        assert!(lr.m.is_isomorphism());
    }

    #[test]
    fn json_shape() {
        let t = DegeneracyType::from_members(2, &[vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"dim":2,"members":[[0,1],[0,1,2]]}"#);
    }
}
