//! Lifting problems, bounded lifting certificates, algebraic Kan fillers for
//! nerves of groups, and the stratified (cofibration, trivial fibration)
//! factorization.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::search::{all_maps, find_map, for_each_map, no_filter, MAP_LIMIT};
use crate::sset::standard::{boundary_inclusion, horn_inclusion, simplex_face_op, FiniteGroup, Nerve};
use crate::sset::{is_cofibration, CellRef, FiniteSSet, SSetBuilder, SimplicialMap};
use crate::truncated::{KMap, TruncMap, Truncation};

/// Which generating cofibrations a certificate is taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generators {
    Horns,
    Boundaries,
}

impl std::str::FromStr for Generators {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "horns" => Ok(Generators::Horns),
            "boundaries" => Ok(Generators::Boundaries),
            other => Err(Error::Parse(format!("unknown generator family `{other}`"))),
        }
    }
}

/// A generating cofibration: `∂Δ[n] -> Δ[n]` or `Λ^k[n] -> Δ[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape {
    pub n: usize,
    pub horn: Option<usize>,
}

impl Shape {
    pub fn inclusion(&self) -> SimplicialMap {
        match self.horn {
            Some(k) => horn_inclusion(self.n, k),
            None => boundary_inclusion(self.n),
        }
    }

    pub fn name(&self) -> String {
        match self.horn {
            Some(k) => format!("Λ{k}[{}]", self.n),
            None => format!("∂Δ[{}]", self.n),
        }
    }
}

/// Generators of dimension at most `bound`, by dimension then horn index.
pub fn shapes(kind: Generators, bound: usize) -> Vec<Shape> {
    match kind {
        Generators::Boundaries => (0..=bound).map(|n| Shape { n, horn: None }).collect(),
        Generators::Horns => (1..=bound)
            .flat_map(|n| (0..=n).map(move |k| Shape { n, horn: Some(k) }))
            .collect(),
    }
}

/// A commuting square `p ∘ top = bottom ∘ left` with `left` a kernel
/// cofibration and `right` a map of truncated objects.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: SimplicialMap,
    pub right: TruncMap,
    pub top: KMap,
    pub bottom: KMap,
}

impl LiftingProblem {
    pub fn new(left: SimplicialMap, right: TruncMap, top: KMap, bottom: KMap) -> Result<Self> {
        let w = is_cofibration(&left);
        if !w.holds {
            let (a, b) = w.collision.unwrap_or_default();
            return Err(Error::NotACofibration(format!("`{a}` and `{b}` have the same image")));
        }
        if *top.source != *left.source || *bottom.source != *left.target {
            return Err(Error::CodomainMismatch("square legs do not match".into()));
        }
        for a in 0..left.source.len() {
            let n = left.source.cell_dim(a);
            if right.apply(n, top.assign[a]) != bottom.eval(left.image_of(a)) {
                return Err(Error::NonCommuting(format!("at `{}`", left.source.id(a))));
            }
        }
        Ok(LiftingProblem { left, right, top, bottom })
    }

    fn fixed(&self) -> Vec<Option<usize>> {
        let mut fixed = vec![None; self.left.target.len()];
        for (a, img) in self.left.assignment().iter().enumerate() {
            fixed[img.cell] = Some(self.top.assign[a]);
        }
        fixed
    }

    /// Whether `d` makes both triangles commute.
    pub fn is_filler(&self, d: &KMap) -> bool {
        d.check().is_ok()
            && (0..self.left.source.len()).all(|a| d.eval(self.left.image_of(a)) == self.top.assign[a])
            && (0..d.source.len()).all(|b| self.right.apply(d.source.cell_dim(b), d.assign[b]) == self.bottom.assign[b])
    }
}

/// The first diagonal filler in enumeration order, or `None` when none exists.
pub fn solve_lift(prob: &LiftingProblem) -> Result<Option<KMap>> {
    let b = &prob.left.target;
    let bottom = &prob.bottom.assign;
    let p = &prob.right;
    let filter = |cell: usize, cand: usize, _: &[usize]| p.apply(b.cell_dim(cell), cand) == bottom[cell];
    let found = find_map(b, &p.source, &prob.fixed(), &filter)?;
    Ok(found.map(|assign| KMap { source: b.clone(), target: p.source.clone(), assign }))
}

/// A filler defined on the cells of dimension at most `max_dim` only.
pub fn solve_lift_skeletal(prob: &LiftingProblem, max_dim: usize) -> Result<Option<KMap>> {
    let b = &prob.left.target;
    if b.dim() <= max_dim {
        return solve_lift(prob);
    }
    let keep: Vec<bool> = (0..b.len()).map(|c| b.cell_dim(c) <= max_dim).collect();
    let (sk, kept) = crate::sset::subobject(b, &keep, format!("sk{max_dim}({})", b.name()))?;
    let mut fixed_full = prob.fixed();
    let fixed: Vec<Option<usize>> = kept.iter().map(|&c| fixed_full[c].take()).collect();
    let bottom: Vec<usize> = kept.iter().map(|&c| prob.bottom.assign[c]).collect();
    let p = &prob.right;
    let filter = |cell: usize, cand: usize, _: &[usize]| p.apply(sk.cell_dim(cell), cand) == bottom[cell];
    let found = find_map(&sk, &p.source, &fixed, &filter)?;
    Ok(found.map(|assign| KMap { source: Arc::new(sk.clone()), target: p.source.clone(), assign }))
}

/// Lifting for kernel maps throughout.
pub fn solve_lift_kernel(
    i: &SimplicialMap,
    p: &SimplicialMap,
    top: &SimplicialMap,
    bottom: &SimplicialMap,
) -> Result<Option<SimplicialMap>> {
    let ends = [(&top.source, &i.source), (&top.target, &p.source), (&bottom.source, &i.target), (&bottom.target, &p.target)];
    if ends.iter().any(|(a, b)| a != b) {
        return Err(Error::InvalidParameters("the square's maps do not share endpoints".into()));
    }
    let bound = i.target.dim();
    let tx = Truncation::new(p.source.clone(), bound);
    let ty = Truncation::new(p.target.clone(), bound);
    let prob = LiftingProblem::new(i.clone(), p.truncate(&tx, &ty), top.to_kmap(&tx), bottom.to_kmap(&ty))?;
    Ok(solve_lift(&prob)?.map(|d| kmap_to_kernel(&d, &tx)))
}

/// A map into a kernel truncation read back as a kernel map.
pub fn kmap_to_kernel(d: &KMap, t: &Truncation) -> SimplicialMap {
    let assign = (0..d.source.len()).map(|c| t.cell_ref(d.source.cell_dim(c), d.assign[c]).clone()).collect();
    SimplicialMap::new_unchecked(d.source.clone(), t.kernel.clone(), assign).expect("shapes agree")
}

/// One lifting problem against a generator, identified by its data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProblemKey {
    pub shape: Shape,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

/// Chosen fillers for all generator problems up to a bound.
#[derive(Clone, Debug)]
pub struct FibrationStructure {
    pub carrier: TruncMap,
    pub kind: Generators,
    pub bound: usize,
    pub fillers: BTreeMap<ProblemKey, Vec<usize>>,
}

impl FibrationStructure {
    pub fn filler(&self, key: &ProblemKey) -> Option<&[usize]> {
        self.fillers.get(key).map(Vec::as_slice)
    }

    /// Every stored filler solves its problem.
    pub fn check(&self) -> Result<()> {
        for (key, filler) in &self.fillers {
            let prob = problem_from_key(&self.carrier, key)?;
            let d = KMap { source: prob.left.target.clone(), target: self.carrier.source.clone(), assign: filler.clone() };
            if !prob.is_filler(&d) {
                return Err(Error::Verification(format!("stored filler for a {} problem fails", key.shape.name())));
            }
        }
        Ok(())
    }

    /// The same structure on generators of dimension at most `bound`.
    pub fn restrict(&self, bound: usize) -> FibrationStructure {
        FibrationStructure {
            carrier: self.carrier.clone(),
            kind: self.kind,
            bound: bound.min(self.bound),
            fillers: self.fillers.iter().filter(|(k, _)| k.shape.n <= bound).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }
}

fn problem_from_key(p: &TruncMap, key: &ProblemKey) -> Result<LiftingProblem> {
    let i = key.shape.inclusion();
    let top = KMap { source: i.source.clone(), target: p.source.clone(), assign: key.top.clone() };
    let bottom = KMap { source: i.target.clone(), target: p.target.clone(), assign: key.bottom.clone() };
    LiftingProblem::new(i, p.clone(), top, bottom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of [`certify_rlp`]: every problem with its filler on a pass, the
/// first unfillable problem on a fail.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    pub kind: Generators,
    pub bound: usize,
    pub problems: Vec<ProblemKey>,
    pub fillers: Vec<Vec<usize>>,
    pub failure: Option<ProblemKey>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn structure(&self, p: &TruncMap) -> Option<FibrationStructure> {
        if !self.passed() {
            return None;
        }
        Some(FibrationStructure {
            carrier: p.clone(),
            kind: self.kind,
            bound: self.bound,
            fillers: self.problems.iter().cloned().zip(self.fillers.iter().cloned()).collect(),
        })
    }

    pub fn to_json(&self, p: &TruncMap) -> Value {
        let render = |key: &ProblemKey| {
            let i = key.shape.inclusion();
            let top: Map<String, Value> = (0..i.source.len())
                .map(|c| (i.source.id(c).to_string(), json!(p.source.label(i.source.cell_dim(c), key.top[c]))))
                .collect();
            let bottom: Map<String, Value> = (0..i.target.len())
                .map(|c| (i.target.id(c).to_string(), json!(p.target.label(i.target.cell_dim(c), key.bottom[c]))))
                .collect();
            json!({"generator": key.shape.name(), "top": top, "bottom": bottom})
        };
        let fillers: Map<String, Value> = self
            .problems
            .iter()
            .zip(&self.fillers)
            .enumerate()
            .map(|(idx, (key, f))| {
                let b = key.shape.inclusion().target;
                let cells: Map<String, Value> =
                    (0..b.len()).map(|c| (b.id(c).to_string(), json!(p.source.label(b.cell_dim(c), f[c])))).collect();
                (idx.to_string(), Value::Object(cells))
            })
            .collect();
        let mut out = json!({
            "verdict": self.verdict,
            "generators": self.kind,
            "bound": self.bound,
            "problems": self.problems.iter().map(render).collect::<Vec<_>>(),
            "fillers": fillers,
        });
        if let Some(f) = &self.failure {
            out["evidence"] = render(f);
        }
        out
    }
}

/// All lifting problems of `shape` against `p`, in enumeration order.
pub fn problems(p: &TruncMap, shape: Shape) -> Result<Vec<ProblemKey>> {
    let i = shape.inclusion();
    let (a, b) = (&i.source, &i.target);
    let tops = all_maps(a, &p.source, &vec![None; a.len()], &no_filter, MAP_LIMIT)?;
    let mut out = Vec::new();
    for top in tops {
        let mut fixed = vec![None; b.len()];
        for (c, img) in i.assignment().iter().enumerate() {
            fixed[img.cell] = Some(p.apply(a.cell_dim(c), top[c]));
        }
        for_each_map(b, &p.target, &fixed, &no_filter, &mut |bottom| {
            out.push(ProblemKey { shape, top: top.clone(), bottom: bottom.to_vec() });
            out.len() <= MAP_LIMIT
        })?;
        if out.len() > MAP_LIMIT {
            return Err(Error::ResourceBound("too many lifting problems".into()));
        }
    }
    Ok(out)
}

/// Solves a generator problem given by its key.
pub fn solve_key(p: &TruncMap, key: &ProblemKey) -> Result<Option<Vec<usize>>> {
    let i = key.shape.inclusion();
    let b = &i.target;
    let mut fixed = vec![None; b.len()];
    for (c, img) in i.assignment().iter().enumerate() {
        fixed[img.cell] = Some(key.top[c]);
    }
    let filter = |cell: usize, cand: usize, _: &[usize]| p.apply(b.cell_dim(cell), cand) == key.bottom[cell];
    find_map(b, &p.source, &fixed, &filter)
}

/// Enumerates every generator problem of dimension at most `bound` against
/// `p` and solves each one.
pub fn certify_rlp(p: &TruncMap, kind: Generators, bound: usize) -> Result<Certificate> {
    if p.source.bound() < bound || p.target.bound() < bound {
        return Err(Error::ResourceBound(format!(
            "certifying up to dimension {bound} needs both objects known that far"
        )));
    }
    let mut cert = Certificate { verdict: Verdict::Pass, kind, bound, problems: Vec::new(), fillers: Vec::new(), failure: None };
    for shape in shapes(kind, bound) {
        for key in problems(p, shape)? {
            match solve_key(p, &key)? {
                Some(f) => {
                    cert.problems.push(key);
                    cert.fillers.push(f);
                }
                None => {
                    cert.verdict = Verdict::Fail;
                    cert.failure = Some(key);
                    return Ok(cert);
                }
            }
        }
    }
    Ok(cert)
}

/// A kernel map truncated on both sides.
pub fn truncate_map(f: &SimplicialMap, bound: usize) -> (Truncation, Truncation, TruncMap) {
    let ts = Truncation::new(f.source.clone(), bound);
    let tt = Truncation::new(f.target.clone(), bound);
    let m = f.truncate(&ts, &tt);
    (ts, tt, m)
}

/// Horn fillers for `N(G) -> Δ[0]` computed from the group law: the filling
/// tuple is read off the edges of the horn, reconstructing the missing edge
/// by one multiplication when `n = 2`.
pub fn kan_structure_nerve(group: &FiniteGroup, bound: usize) -> Result<FibrationStructure> {
    let nerve = Nerve::new(group.clone(), bound);
    let point = SimplicialMap::to_point(nerve.object().clone());
    let (tx, _, p) = truncate_map(&point, bound);
    let mut fillers = BTreeMap::new();
    for shape in shapes(Generators::Horns, bound) {
        let i = shape.inclusion();
        let (a, b) = (&i.source, &i.target);
        let n = shape.n;
        let k = shape.horn.unwrap();
        for key in problems(&p, shape)? {
            let edge = |u: usize, v: usize| -> Option<usize> {
                let id = crate::sset::standard::face_id(&[u, v]);
                a.index_of(&id).map(|c| nerve.tuple_of(tx.cell_ref(1, key.top[c]))[0])
            };
            let tuple: Vec<usize> = if n == 1 {
                vec![0]
            } else if n == 2 && k == 0 {
                let (g01, g02) = (edge(0, 1).unwrap(), edge(0, 2).unwrap());
                vec![g01, group.mul(group.inv(g01), g02)]
            } else if n == 2 && k == 2 {
                let (g02, g12) = (edge(0, 2).unwrap(), edge(1, 2).unwrap());
                vec![group.mul(g02, group.inv(g12)), g12]
            } else {
                (1..=n).map(|j| edge(j - 1, j).expect("horns of dimension 3 and up contain every edge")).collect()
            };
            let top_cell = tx.index_of(&nerve.cell_of(&tuple));
            let assign = (0..b.len()).map(|c| tx.trunc.act(n, top_cell, &simplex_face_op(b, c))).collect();
            fillers.insert(key, assign);
        }
    }
    let s = FibrationStructure { carrier: p, kind: Generators::Horns, bound, fillers };
    s.check()?;
    Ok(s)
}

/// Result of [`factor_cof_trivfib`].
#[derive(Clone, Debug)]
pub struct CofTrivFib {
    pub middle: Arc<FiniteSSet>,
    pub i: SimplicialMap,
    pub p: SimplicialMap,
    /// Number of cells attached in each dimension.
    pub attached: Vec<usize>,
    pub certificate: Certificate,
}

/// Factors `f: A -> B` as a cofibration followed by a map with boundary
/// fillers up to `bound`, attaching one `n`-simplex for every square from
/// `∂Δ[n] -> Δ[n]` into the current map, one dimension at a time.
pub fn factor_cof_trivfib(f: &SimplicialMap, bound: usize) -> Result<CofTrivFib> {
    let a = f.source.clone();
    let b = f.target.clone();
    let tb = Truncation::new(b.clone(), bound);
    // (id, dim, faces, image in B)
    let mut cells: Vec<(String, usize, Vec<CellRef>, CellRef)> = (0..a.len())
        .map(|c| (a.id(c).to_string(), a.cell_dim(c), a.faces(c).to_vec(), f.image_of(c).clone()))
        .collect();
    let mut attached = Vec::new();
    let build = |cells: &[(String, usize, Vec<CellRef>, CellRef)]| -> Result<(Arc<FiniteSSet>, SimplicialMap)> {
        let mut bld = SSetBuilder::new();
        for (id, d, faces, _) in cells {
            bld.add(id.clone(), *d, faces.clone());
        }
        let e = Arc::new(bld.build(format!("E({})", f.source.name()))?);
        let assign = cells.iter().map(|c| c.3.clone()).collect();
        Ok((e.clone(), SimplicialMap::new_unchecked(e, b.clone(), assign)?))
    };
    for n in 0..=bound {
        let (e, p) = build(&cells)?;
        let te = Truncation::new(e.clone(), bound);
        let pt = p.truncate(&te, &tb);
        let shape = Shape { n, horn: None };
        let i = shape.inclusion();
        let keys = problems(&pt, shape)?;
        let mut count = 0;
        let mut next = cells.len();
        for key in keys {
            let faces = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|j| {
                        let id: Vec<usize> = (0..=n).filter(|&v| v != j).collect();
                        let c = i.source.index_of(&crate::sset::standard::face_id(&id)).unwrap();
                        te.cell_ref(n - 1, key.top[c]).clone()
                    })
                    .collect()
            };
            let top = i.target.len() - 1;
            let image = tb.cell_ref(n, key.bottom[top]).clone();
            cells.push((format!("e{n}.{next}"), n, faces, image));
            next += 1;
            count += 1;
        }
        attached.push(count);
    }
    let (e, p) = build(&cells)?;
    // cells were appended in dimension order, so the original cells keep their indices
    let i_assign = (0..a.len()).map(|c| e.nondeg(e.index_of(a.id(c)).unwrap())).collect();
    let i = SimplicialMap::new(a.clone(), e.clone(), i_assign)?;
    p.check_naturality()?;
    let (_, _, pt) = truncate_map(&p, bound);
    let certificate = certify_rlp(&pt, Generators::Boundaries, bound)?;
    Ok(CofTrivFib { middle: e, i, p, attached, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::simplex;

    #[test]
    fn interval_is_not_kan() {
        let p = SimplicialMap::to_point(Arc::new(simplex(1)));
        let (_, _, pt) = truncate_map(&p, 2);
        let cert = certify_rlp(&pt, Generators::Horns, 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert_eq!(cert.failure.unwrap().shape, Shape { n: 2, horn: Some(0) });
    }

    #[test]
    fn identity_passes() {
        let p = SimplicialMap::identity(Arc::new(simplex(2)));
        let (_, _, pt) = truncate_map(&p, 2);
        assert!(certify_rlp(&pt, Generators::Boundaries, 2).unwrap().passed());
        assert!(certify_rlp(&pt, Generators::Horns, 2).unwrap().passed());
    }

    #[test]
    fn attaching_over_a_point() {
        let f = SimplicialMap::from_empty(Arc::new(simplex(0)));
        let r = factor_cof_trivfib(&f, 1).unwrap();
        assert_eq!(r.attached, vec![1, 1]);
        assert!(r.certificate.passed());
    }
}
