//! Witnesses for weak equivalences over a base: strong deformation
//! retractions, the objects of left and right inverse data, `Inv(f)`,
//! `Weq(p)` and the univalence check.
//!
//! Conventions: homotopies run from the identity at `0`. A left inverse of
//! `w: U -> V` is `g: V -> U` with `G: Δ[1] × U -> U`, `G(0) = id`,
//! `G(1) = g ∘ w`; a right inverse is `h: V -> U` with `K: Δ[1] × V -> V`,
//! `K(0) = id`, `K(1) = w ∘ h`. All maps lie over the base.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::delta::OrdinalMap;
use crate::error::{Error, Result};
use crate::lifting::{certify_rlp, solve_lift_kernel, Certificate, Generators};
use crate::slice::{MappingObject, PullbackShapes, ShapeFamily};
use crate::sset::standard::{simplex, simplex_map};
use crate::sset::{coproduct, product, subobject, CellRef, FiniteSSet, PairObject, SimplicialMap};
use crate::truncated::{tcoproduct, tpullback, tproduct, TPullback, TruncMap, TruncatedSSet, Truncation};

/// `r: E -> B` with `r ∘ u = id` and `H: Δ[1] × E -> E` from `id` to
/// `u ∘ r`, constant on `B` and over the base. Both are defined on
/// skeleta up to `bound`.
#[derive(Clone, Debug)]
pub struct DeformationRetract {
    pub bound: usize,
    pub u: SimplicialMap,
    pub r: SimplicialMap,
    pub h: SimplicialMap,
    pub cylinder: PairObject,
    /// The base projection of `E`, on the skeleton.
    pub over: SimplicialMap,
}

fn restrict_to(f: &SimplicialMap, source: &Arc<FiniteSSet>, target: &Arc<FiniteSSet>) -> Result<SimplicialMap> {
    SimplicialMap::new(source.clone(), target.clone(), f.assignment()[..source.len()].to_vec())
}

/// Searches for a strong deformation retraction of the cofibration
/// `u: B -> E` over `Y` (with `qe ∘ u = qb`), up to `bound`. `None` means
/// the search is exhausted at this bound.
pub fn deformation_retract(
    u: &SimplicialMap,
    qe: &SimplicialMap,
    qb: &SimplicialMap,
    bound: usize,
) -> Result<Option<DeformationRetract>> {
    if qe.after(u)? != *qb {
        return Err(Error::NonCommuting("u does not lie over the base".into()));
    }
    let bs = Arc::new(u.source.skeleton(bound));
    let es = Arc::new(u.target.skeleton(bound));
    let us = restrict_to(u, &bs, &es)?;
    let qes = restrict_to(qe, &es, &qe.target)?;
    let qbs = restrict_to(qb, &bs, &qb.target)?;
    let Some(r) = solve_lift_kernel(&us, &qbs, &SimplicialMap::identity(bs.clone()), &qes)? else {
        return Ok(None);
    };
    let cylinder = product(Arc::new(simplex(1)), es.clone());
    let mut in_u = vec![false; es.len()];
    for img in us.assignment() {
        in_u[img.cell] = true;
    }
    let whole_keep: Vec<bool> = (0..cylinder.object.len()).map(|c| cylinder.object.cell_dim(c) <= bound).collect();
    let (whole, whole_cells) = subobject(&cylinder.object, &whole_keep, format!("sk{bound}(Δ[1]×{})", es.name()))?;
    let whole = Arc::new(whole);
    let keep: Vec<bool> = whole_cells
        .iter()
        .map(|&c| {
            let (t, e) = cylinder.components(c);
            t.cell < 2 || in_u[e.cell]
        })
        .collect();
    let (part, kept) = subobject(&whole, &keep, "∂Δ[1]×E ∪ Δ[1]×B")?;
    let part = Arc::new(part);
    let left = SimplicialMap::new(part.clone(), whole.clone(), kept.iter().map(|&c| whole.nondeg(c)).collect())?;
    let ur = us.after(&r)?;
    let top_assign = kept
        .iter()
        .map(|&c| {
            let (t, e) = cylinder.components(whole_cells[c]);
            if t.cell == 1 {
                ur.apply(e)
            } else {
                e.clone()
            }
        })
        .collect();
    let top = SimplicialMap::new(part, es.clone(), top_assign)?;
    let bottom_assign = whole_cells.iter().map(|&c| qes.apply(&cylinder.components(c).1)).collect();
    let bottom = SimplicialMap::new(whole.clone(), qe.target.clone(), bottom_assign)?;
    let Some(h) = solve_lift_kernel(&left, &qes, &top, &bottom)? else {
        return Ok(None);
    };
    let cert = DeformationRetract { bound, u: us, r, h, cylinder, over: qes };
    cert.verify()?;
    Ok(Some(cert))
}

impl DeformationRetract {
    /// Recomputes every defining equation exactly.
    pub fn verify(&self) -> Result<()> {
        let b = &self.u.source;
        if self.r.after(&self.u)? != SimplicialMap::identity(b.clone()) {
            return Err(Error::Verification("r ∘ u is not the identity".into()));
        }
        let whole = &self.h.source;
        let ur = self.u.after(&self.r)?;
        let mut in_u = vec![false; self.u.target.len()];
        for img in self.u.assignment() {
            in_u[img.cell] = true;
        }
        for c in 0..whole.len() {
            let full = self.cylinder.object.index_of(whole.id(c)).expect("cells of the cylinder skeleton");
            let (t, e) = self.cylinder.components(full);
            let hv = self.h.image_of(c);
            let expected = match t.cell {
                0 => Some(e.clone()),
                1 => Some(ur.apply(e)),
                _ if in_u[e.cell] => Some(e.clone()),
                _ => None,
            };
            if expected.is_some_and(|x| x != *hv) {
                return Err(Error::Verification(format!("homotopy boundary fails at `{}`", whole.id(c))));
            }
            if self.over.apply(hv) != self.over.apply(e) {
                return Err(Error::Verification(format!("homotopy leaves its fibre at `{}`", whole.id(c))));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let show = |m: &SimplicialMap| -> Value {
            (0..m.source.len())
                .map(|c| (m.source.id(c).to_string(), Value::String(m.target.describe(m.image_of(c)))))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        json!({"bound": self.bound, "retraction": show(&self.r), "homotopy": show(&self.h)})
    }
}

/// The shapes `S ×_X Δ[n]` of one side together with the cylinders `Δ[1] × (S ×_X Δ[n])`.
#[derive(Clone, Debug)]
pub struct Side {
    pub q: SimplicialMap,
    pub total: Truncation,
    pub shapes: Arc<PullbackShapes>,
    pub cylinders: Vec<Vec<PairObject>>,
    cyl_faces: Vec<Vec<Vec<SimplicialMap>>>,
    cyl_degens: Vec<Vec<Vec<SimplicialMap>>>,
    q_levels: TruncMap,
    /// The base, truncated as far as the shapes reach.
    base_reach: Truncation,
}

impl Side {
    pub fn new(q: &SimplicialMap, bound: usize, reach: usize) -> Result<Self> {
        let shapes = Arc::new(PullbackShapes::new(q, bound)?);
        let total = Truncation::new(q.source.clone(), reach);
        let base_reach = Truncation::new(q.target.clone(), reach);
        let q_levels = q.truncate(&total, &base_reach);
        let interval = Arc::new(simplex(1));
        let cylinders: Vec<Vec<PairObject>> = shapes
            .pairs
            .iter()
            .map(|l| l.iter().map(|p| product(interval.clone(), p.object.clone())).collect())
            .collect();
        let times = |rho: &SimplicialMap, src: &PairObject, dst: &PairObject| {
            dst.pairing(&src.proj_left, &rho.after(&src.proj_right)?)
        };
        let fam = &shapes.family;
        let t = &shapes.base.trunc;
        let mut cyl_faces = Vec::new();
        let mut cyl_degens = Vec::new();
        for n in 0..=bound {
            let mut fl = Vec::new();
            let mut dl = Vec::new();
            for x in 0..t.count(n) {
                let faces = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| times(&fam.face_maps[n][x][i], &cylinders[n - 1][t.face(n, x, i)], &cylinders[n][x]))
                        .collect::<Result<Vec<_>>>()?
                };
                fl.push(faces);
                if n < bound {
                    dl.push(
                        (0..=n)
                            .map(|j| {
                                times(&fam.degen_maps[n][x][j], &cylinders[n + 1][t.degen(n, x, j)], &cylinders[n][x])
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
            }
            cyl_faces.push(fl);
            cyl_degens.push(dl);
        }
        Ok(Side { q: q.clone(), total, shapes, cylinders, cyl_faces, cyl_degens, q_levels, base_reach })
    }

    fn base_of(&self, n: usize, c: usize) -> usize {
        self.q_levels.apply(n, c)
    }
}

/// Which inverse data a mapping object carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseKind {
    Left,
    Right,
}

#[derive(Clone, Debug)]
enum Role {
    /// Cell of `V_z`; its value is `g` or `h` there, in `U`.
    Inverse { x: usize },
    /// Cell `(s, c)` of the cylinder, valued in `U` (left) or `V` (right).
    Homotopy { x: usize, end: Option<usize>, comp: CellRef, t: CellRef },
}

struct GluedShape {
    object: Arc<FiniteSSet>,
    inl: SimplicialMap,
    inr: SimplicialMap,
    roles: Vec<Role>,
}

fn glue_map(src: &GluedShape, dst: &GluedShape, f1: &SimplicialMap, f2: &SimplicialMap) -> Result<SimplicialMap> {
    let mut assign = vec![None; src.object.len()];
    for (k, img) in src.inl.assignment().iter().enumerate() {
        assign[img.cell] = Some(dst.inl.apply(f1.image_of(k)));
    }
    for (k, img) in src.inr.assignment().iter().enumerate() {
        assign[img.cell] = Some(dst.inr.apply(f2.image_of(k)));
    }
    SimplicialMap::new(src.object.clone(), dst.object.clone(), assign.into_iter().map(Option::unwrap).collect())
}

/// `LInv` or `RInv` of a family of maps `w_z: U_z -> V_z` over a base `Z`,
/// together with the common target `U ⊔ V`.
#[derive(Clone, Debug)]
pub struct InverseObject {
    pub kind: InverseKind,
    pub mapping: MappingObject,
}

/// Data shared by the inverse objects of one family `w`.
pub struct InverseProblem<'a> {
    pub base: Arc<TruncatedSSet>,
    pub xu: TruncMap,
    pub xv: TruncMap,
    pub u: &'a Side,
    pub v: &'a Side,
    /// `w_z` on a cell of `U_z`, as a cell index of `V`.
    pub w: &'a dyn Fn(usize, usize, &CellRef) -> usize,
    pub target: Arc<TruncatedSSet>,
}

impl InverseProblem<'_> {
    fn x_of(&self, side_x: usize, n: usize, t: &CellRef, simplices: &[FiniteSSet]) -> usize {
        self.u.base_reach.trunc.act(n, side_x, &simplex_map(&simplices[n], n, t))
    }

    fn glued(&self, kind: InverseKind, n: usize, z: usize, simplices: &[FiniteSSet]) -> GluedShape {
        let xu = self.xu.apply(n, z);
        let xv = self.xv.apply(n, z);
        let vz = &self.v.shapes.pairs[n][xv];
        let (cyl, cx) = match kind {
            InverseKind::Left => (&self.u.cylinders[n][xu], xu),
            InverseKind::Right => (&self.v.cylinders[n][xv], xv),
        };
        let (object, inl, inr) = coproduct(&vz.object, &cyl.object);
        let mut roles = vec![None; object.len()];
        for (k, img) in inl.assignment().iter().enumerate() {
            let (_, t) = vz.components(k);
            roles[img.cell] = Some(Role::Inverse { x: self.x_of(xu, n, t, simplices) });
        }
        let side = match kind {
            InverseKind::Left => &self.u.shapes.pairs[n][xu],
            InverseKind::Right => vz,
        };
        for (k, img) in inr.assignment().iter().enumerate() {
            let (s, comp) = cyl.components(k);
            let (_, t) = side.split(comp);
            let end = if s.cell < 2 { Some(s.cell) } else { None };
            roles[img.cell] = Some(Role::Homotopy { x: self.x_of(cx, n, &t, simplices), end, comp: comp.clone(), t });
        }
        GluedShape { object, inl, inr, roles: roles.into_iter().map(Option::unwrap).collect() }
    }

    /// Builds `LInv` or `RInv` over the base.
    pub fn build(&self, kind: InverseKind) -> Result<InverseObject> {
        let base = &self.base;
        let bound = base.bound();
        let simplices: Vec<FiniteSSet> = (0..=bound + 1).map(simplex).collect();
        let glued: Vec<Vec<GluedShape>> =
            (0..=bound).map(|n| (0..base.count(n)).map(|z| self.glued(kind, n, z, &simplices)).collect()).collect();
        let vf = &self.v.shapes.family;
        let restrict = |n: usize, z: usize, zz: usize, m: usize, op: usize, face: bool| -> Result<SimplicialMap> {
            let (xu, xv) = (self.xu.apply(n, z), self.xv.apply(n, z));
            let pick = |fam: &ShapeFamily, x: usize| {
                if face {
                    fam.face_maps[n][x][op].clone()
                } else {
                    fam.degen_maps[n][x][op].clone()
                }
            };
            let vmap = pick(vf, xv);
            let cmap = match (kind, face) {
                (InverseKind::Left, true) => self.u.cyl_faces[n][xu][op].clone(),
                (InverseKind::Left, false) => self.u.cyl_degens[n][xu][op].clone(),
                (InverseKind::Right, true) => self.v.cyl_faces[n][xv][op].clone(),
                (InverseKind::Right, false) => self.v.cyl_degens[n][xv][op].clone(),
            };
            glue_map(&glued[m][zz], &glued[n][z], &vmap, &cmap)
        };
        let mut face_maps = Vec::new();
        let mut degen_maps = Vec::new();
        for n in 0..=bound {
            let mut fl = Vec::new();
            let mut dl = Vec::new();
            for z in 0..base.count(n) {
                fl.push(if n == 0 {
                    Vec::new()
                } else {
                    (0..=n).map(|i| restrict(n, z, base.face(n, z, i), n - 1, i, true)).collect::<Result<Vec<_>>>()?
                });
                if n < bound {
                    dl.push((0..=n).map(|j| restrict(n, z, base.degen(n, z, j), n + 1, j, false)).collect::<Result<Vec<_>>>()?);
                }
            }
            face_maps.push(fl);
            degen_maps.push(dl);
        }
        let family = ShapeFamily {
            base: base.clone(),
            shapes: glued.iter().map(|l| l.iter().map(|g| g.object.clone()).collect()).collect(),
            face_maps,
            degen_maps,
        };
        let t = &self.target;
        let (ut, vt) = (&self.u.total, &self.v.total);
        let admissible = |n: usize, z: usize, c: usize, cand: usize, partial: &[usize]| -> bool {
            let g = &glued[n][z];
            let k = g.object.cell_dim(c);
            let off = ut.trunc.count(k);
            let in_u = |cand: usize| cand < off;
            let value_at = |cell: &CellRef| -> usize {
                let pos = g.inl.image_of(cell.cell).cell;
                t.act(g.object.cell_dim(pos), partial[pos], &cell.op)
            };
            let (xu, xv) = (self.xu.apply(n, z), self.xv.apply(n, z));
            match &g.roles[c] {
                Role::Inverse { x } => in_u(cand) && self.u.base_of(k, cand) == *x,
                Role::Homotopy { x, end, comp, t: tc } => {
                    let on_u = kind == InverseKind::Left;
                    if on_u != in_u(cand) {
                        return false;
                    }
                    let raw = if on_u { cand } else { cand - off };
                    let side = if on_u { self.u } else { self.v };
                    if side.base_of(k, raw) != *x {
                        return false;
                    }
                    let sp = if on_u { &self.u.shapes.pairs[n][xu] } else { &self.v.shapes.pairs[n][xv] };
                    let (e, _) = sp.split(comp);
                    match end {
                        Some(0) => raw == side.total.index_of(&e),
                        Some(_) => {
                            let uz = &self.u.shapes.pairs[n][xu];
                            let vz = &self.v.shapes.pairs[n][xv];
                            if on_u {
                                // g(w(u))
                                let wv = (self.w)(n, z, comp);
                                let Some(cell) = vz.pair(vt.cell_ref(k, wv), tc) else { return false };
                                value_at(&cell) == cand
                            } else {
                                // w(h(v))
                                let h = value_at(comp);
                                if h >= off {
                                    return false;
                                }
                                let Some(cell) = uz.pair(ut.cell_ref(k, h), tc) else { return false };
                                (self.w)(n, z, &cell) + off == cand
                            }
                        }
                        None => true,
                    }
                }
            }
        };
        let name = match kind {
            InverseKind::Left => "LInv",
            InverseKind::Right => "RInv",
        };
        let mapping = MappingObject::build(&family, t.clone(), &admissible, name)?;
        Ok(InverseObject { kind, mapping })
    }
}

/// `LInv(f)`, `RInv(f)` and `Inv(f) = LInv ×_Z RInv`.
#[derive(Clone, Debug)]
pub struct InvObject {
    pub left: InverseObject,
    pub right: InverseObject,
    pub inv: TPullback,
    /// `Inv(f) -> Z`.
    pub to_base: TruncMap,
}

fn assemble_inv(prob: &InverseProblem<'_>) -> Result<InvObject> {
    let left = prob.build(InverseKind::Left)?;
    let right = prob.build(InverseKind::Right)?;
    let inv = tpullback(&left.mapping.to_base, &right.mapping.to_base, "Inv");
    let to_base = left.mapping.to_base.after(&inv.left);
    Ok(InvObject { left, right, inv, to_base })
}

/// Data of `f: U -> V` over `X`: the two sides and `Inv(f)` over `X`.
#[derive(Clone, Debug)]
pub struct InvOverBase {
    pub u: Side,
    pub v: Side,
    pub inv: InvObject,
}

/// `Inv(f)` for `f: U -> V` with `q_v ∘ f = q_u`, over `X` up to `bound`.
pub fn inv_object(f: &SimplicialMap, q_u: &SimplicialMap, q_v: &SimplicialMap, bound: usize) -> Result<InvOverBase> {
    if q_v.after(f)? != *q_u {
        return Err(Error::NonCommuting("f does not lie over the base".into()));
    }
    let reach = bound + 1 + f.source.dim().max(f.target.dim());
    let u = Side::new(q_u, bound, reach)?;
    let v = Side::new(q_v, bound, reach)?;
    let (target, _, _) = tcoproduct(&u.total.trunc, &v.total.trunc);
    let xt = u.shapes.base.trunc.clone();
    let w = |n: usize, x: usize, c: &CellRef| {
        let (a, _) = u.shapes.pairs[n][x].split(c);
        v.total.index_of(&f.apply(&a))
    };
    let prob = InverseProblem {
        base: xt.clone(),
        xu: TruncMap::identity(xt.clone()),
        xv: TruncMap::identity(xt),
        u: &u,
        v: &v,
        w: &w,
        target,
    };
    let inv = assemble_inv(&prob)?;
    Ok(InvOverBase { u: u.clone(), v: v.clone(), inv })
}

/// Bi-invertibility data of `f` over a vertex `x` of the base, on the fibres
/// `U_x`, `V_x`: `g`, `h` on cells of `V_x` with values in `U`, `G` on cells
/// of `Δ[1] × U_x` in `U` and `K` on cells of `Δ[1] × V_x` in `V`. Values are
/// cell indices of the truncated total spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub x: usize,
    pub g: Vec<usize>,
    pub left_homotopy: Vec<usize>,
    pub h: Vec<usize>,
    pub right_homotopy: Vec<usize>,
}

impl InvOverBase {
    fn glued_parts(&self, kind: InverseKind, x: usize) -> (Arc<FiniteSSet>, SimplicialMap, SimplicialMap) {
        let cyl = match kind {
            InverseKind::Left => &self.u.cylinders[0][x],
            InverseKind::Right => &self.v.cylinders[0][x],
        };
        coproduct(&self.v.shapes.pairs[0][x].object, &cyl.object)
    }

    /// The witness carried by a vertex of `Inv(f)`.
    pub fn witness(&self, vertex: usize) -> EquivalenceWitness {
        let (l, r) = self.inv.inv.pairs[0][vertex];
        let x = self.inv.to_base.apply(0, vertex);
        let split = |kind: InverseKind, phi: &[usize]| -> (Vec<usize>, Vec<usize>) {
            let (_, inl, inr) = self.glued_parts(kind, x);
            let first = inl.assignment().iter().map(|c| phi[c.cell]).collect();
            let second = inr.assignment().iter().map(|c| phi[c.cell]).collect();
            (first, second)
        };
        let (g, left_homotopy) = split(InverseKind::Left, &self.inv.left.mapping.cells[0][l].1);
        let (h, mut right_homotopy) = split(InverseKind::Right, &self.inv.right.mapping.cells[0][r].1);
        let cyl = &self.v.cylinders[0][x].object;
        for (k, val) in right_homotopy.iter_mut().enumerate() {
            *val -= self.u.total.trunc.count(cyl.cell_dim(k));
        }
        EquivalenceWitness { x, g, left_homotopy, h, right_homotopy }
    }

    /// The vertex of `Inv(f)` carrying a witness, if it is one.
    pub fn locate(&self, w: &EquivalenceWitness) -> Option<usize> {
        let glue = |kind: InverseKind, inverse: &[usize], homotopy: &[usize], shift: bool| -> Vec<usize> {
            let (glued, inl, inr) = self.glued_parts(kind, w.x);
            let mut out = vec![0; glued.len()];
            for (k, c) in inl.assignment().iter().enumerate() {
                out[c.cell] = inverse[k];
            }
            for (k, c) in inr.assignment().iter().enumerate() {
                let off = if shift { self.u.total.trunc.count(glued.cell_dim(c.cell)) } else { 0 };
                out[c.cell] = homotopy[k] + off;
            }
            out
        };
        let l = self.inv.left.mapping.index_of(0, w.x, &glue(InverseKind::Left, &w.g, &w.left_homotopy, false))?;
        let r = self.inv.right.mapping.index_of(0, w.x, &glue(InverseKind::Right, &w.h, &w.right_homotopy, true))?;
        self.inv.inv.index_of(0, l, r)
    }

    /// Checks the defining equations of a witness for `f` exactly: all four
    /// pieces are simplicial maps over the base, `G` runs from `id` to
    /// `g ∘ f` and `K` from `id` to `f ∘ h`.
    pub fn check_witness(&self, f: &SimplicialMap, w: &EquivalenceWitness) -> Result<()> {
        let x = w.x;
        let (uz, vz) = (&self.u.shapes.pairs[0][x], &self.v.shapes.pairs[0][x]);
        let (ucyl, vcyl) = (&self.u.cylinders[0][x], &self.v.cylinders[0][x]);
        let (ut, vt) = (&self.u.total, &self.v.total);
        let kernel = |src: &Arc<FiniteSSet>, t: &Truncation, vals: &[usize], what: &str| -> Result<SimplicialMap> {
            if vals.len() != src.len() || (0..src.len()).any(|k| vals[k] >= t.trunc.count(src.cell_dim(k))) {
                return Err(Error::Verification(format!("{what} has the wrong shape")));
            }
            let assign = (0..src.len()).map(|k| t.cell_ref(src.cell_dim(k), vals[k]).clone()).collect();
            SimplicialMap::new(src.clone(), t.kernel.clone(), assign)
                .map_err(|e| Error::Verification(format!("{what} is not simplicial: {e}")))
        };
        let g = kernel(&vz.object, ut, &w.g, "g")?;
        let h = kernel(&vz.object, ut, &w.h, "h")?;
        let gg = kernel(&ucyl.object, ut, &w.left_homotopy, "G")?;
        let kk = kernel(&vcyl.object, vt, &w.right_homotopy, "K")?;
        let point = self.u.shapes.base.cell_ref(0, x);
        let over = |q: &SimplicialMap, m: &SimplicialMap, what: &str| -> Result<()> {
            for k in 0..m.source.len() {
                let expected = q.target.apply_operator(point, &OrdinalMap::constant(m.source.cell_dim(k), 0, 0))?;
                if q.apply(m.image_of(k)) != expected {
                    return Err(Error::Verification(format!("{what} leaves the fibre over {}", self.u.shapes.base.trunc.label(0, x))));
                }
            }
            Ok(())
        };
        over(&self.u.q, &g, "g")?;
        over(&self.u.q, &h, "h")?;
        over(&self.u.q, &gg, "G")?;
        over(&self.v.q, &kk, "K")?;
        // w on the fibre: U_x -> V_x
        let w_fib = |a: &CellRef| -> Option<CellRef> {
            let (e, t) = uz.split(a);
            vz.pair(&f.apply(&e), &t)
        };
        for k in 0..ucyl.object.len() {
            let (s, comp) = ucyl.components(k);
            let (e, _) = uz.split(comp);
            let expected = match s.cell {
                0 => e,
                1 => g.apply(&w_fib(comp).ok_or_else(|| Error::Verification("f leaves the fibre".into()))?),
                _ => continue,
            };
            if *gg.image_of(k) != expected {
                return Err(Error::Verification("G does not run from id to g ∘ f".into()));
            }
        }
        for k in 0..vcyl.object.len() {
            let (s, comp) = vcyl.components(k);
            let (e, _) = vz.split(comp);
            let expected = match s.cell {
                0 => e,
                1 => f.apply(&h.apply(comp)),
                _ => continue,
            };
            if *kk.image_of(k) != expected {
                return Err(Error::Verification("K does not run from id to f ∘ h".into()));
            }
        }
        Ok(())
    }

    /// The witness over a vertex `x` built from a deformation retraction
    /// `(r, H)` of `f`: `g = h = r`, `G` constant, `K = H`.
    pub fn witness_from_retract(&self, x: usize, cert: &DeformationRetract) -> Result<EquivalenceWitness> {
        let vz = &self.v.shapes.pairs[0][x];
        let on_skeleton = |m: &SimplicialMap, a: &CellRef| -> Result<CellRef> {
            if a.cell >= m.source.len() {
                return Err(Error::ResourceBound("retraction known only on a skeleton".into()));
            }
            Ok(m.apply(a))
        };
        let g = (0..vz.object.len())
            .map(|k| Ok(self.u.total.index_of(&on_skeleton(&cert.r, &vz.components(k).0)?)))
            .collect::<Result<Vec<_>>>()?;
        let ucyl = &self.u.cylinders[0][x];
        let left_homotopy = (0..ucyl.object.len())
            .map(|k| self.u.total.index_of(&self.u.shapes.pairs[0][x].split(&ucyl.components(k).1).0))
            .collect();
        let vcyl = &self.v.cylinders[0][x];
        let right_homotopy = (0..vcyl.object.len())
            .map(|k| {
                let (s, comp) = vcyl.components(k);
                let (e, _) = vz.split(comp);
                let at = cert.cylinder.pair(s, &e).ok_or_else(|| Error::Verification("cylinder cell missing".into()))?;
                let hv = on_skeleton(&cert.h, &skeleton_ref(&cert.h.source, &cert.cylinder, &at)?)?;
                Ok(self.v.total.index_of(&hv))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivalenceWitness { x, h: g.clone(), g, left_homotopy, right_homotopy })
    }

    /// The vertex of `Inv(f)` over `x` carrying the witness of a deformation
    /// retraction.
    pub fn from_retract(&self, x: usize, cert: &DeformationRetract) -> Result<Option<usize>> {
        Ok(self.locate(&self.witness_from_retract(x, cert)?))
    }
}

fn skeleton_ref(sk: &FiniteSSet, full: &PairObject, at: &CellRef) -> Result<CellRef> {
    let c = sk
        .index_of(full.object.id(at.cell))
        .ok_or_else(|| Error::ResourceBound("homotopy known only on a skeleton".into()))?;
    Ok(CellRef::new(at.op.clone(), c))
}

/// `Weq(p)` over `X × X` with `s, t` and the map `i: X -> Weq(p)`.
#[derive(Clone, Debug)]
pub struct WeqObject {
    pub square: TPullback,
    /// Fibrewise maps `A[x₁] -> A[x₂]` over `X × X`.
    pub maps: MappingObject,
    pub inv: InvObject,
    pub s: TruncMap,
    pub t: TruncMap,
    pub i: TruncMap,
    pub x: Arc<TruncatedSSet>,
}

impl WeqObject {
    pub fn object(&self) -> &Arc<TruncatedSSet> {
        &self.inv.inv.object
    }

    /// `(s, t) ∘ i` is the diagonal.
    pub fn i_is_diagonal(&self) -> bool {
        let id = TruncMap::identity(self.x.clone());
        self.s.after(&self.i) == id && self.t.after(&self.i) == id
    }
}

pub fn weq_object(p: &SimplicialMap, bound: usize) -> Result<WeqObject> {
    let reach = bound + 1 + p.source.dim();
    let side = Side::new(p, bound, reach)?;
    let x = side.shapes.base.trunc.clone();
    let square = tproduct(&x, &x);
    let xx = square.object.clone();
    let pr1 = square.left.clone();
    let pr2 = square.right.clone();
    // shapes of fibrewise maps: U_z = A ×_X Δ[n] along the first coordinate
    let fam = &side.shapes.family;
    let family = ShapeFamily {
        base: xx.clone(),
        shapes: (0..=bound).map(|n| (0..xx.count(n)).map(|z| fam.shapes[n][pr1.apply(n, z)].clone()).collect()).collect(),
        face_maps: (0..=bound)
            .map(|n| (0..xx.count(n)).map(|z| if n == 0 { Vec::new() } else { fam.face_maps[n][pr1.apply(n, z)].clone() }).collect())
            .collect(),
        degen_maps: (0..=bound)
            .map(|n| (0..xx.count(n)).map(|z| if n == bound { Vec::new() } else { fam.degen_maps[n][pr1.apply(n, z)].clone() }).collect())
            .collect(),
    };
    let simplices: Vec<FiniteSSet> = (0..=bound).map(simplex).collect();
    let total = &side.total;
    let over_second = |n: usize, z: usize, c: usize, cand: usize, _: &[usize]| {
        let s = &side.shapes.pairs[n][pr1.apply(n, z)];
        let (_, t) = s.components(c);
        let k = s.object.cell_dim(c);
        side.base_of(k, cand) == side.base_reach.trunc.act(n, pr2.apply(n, z), &simplex_map(&simplices[n], n, t))
    };
    let maps = MappingObject::build(&family, total.trunc.clone(), &over_second, "Map")?;
    let mbase = maps.to_base.clone();
    let (target, _, _) = tcoproduct(&total.trunc, &total.trunc);
    let w = |n: usize, z: usize, c: &CellRef| maps.kmap(n, z).eval(c);
    let prob = InverseProblem {
        base: maps.object.clone(),
        xu: pr1.after(&mbase),
        xv: pr2.after(&mbase),
        u: &side,
        v: &side,
        w: &w,
        target,
    };
    let inv = assemble_inv(&prob)?;
    let s = pr1.after(&mbase).after(&inv.to_base);
    let t = pr2.after(&mbase).after(&inv.to_base);
    // i(x) = (x, x, id, (id, const), (id, const))
    let diag = square.pairing(&TruncMap::identity(x.clone()), &TruncMap::identity(x.clone()))?;
    let identity_on = |n: usize, xc: usize| -> Vec<usize> {
        side.shapes.pairs[n][xc].proj_left.assignment().iter().map(|r| total.index_of(r)).collect()
    };
    let im = maps.map_into(&x, &|n, xc| Ok((diag.apply(n, xc), identity_on(n, xc))))?;
    let off = |k: usize| total.trunc.count(k);
    let ext: Vec<FiniteSSet> = (0..=bound + 1).map(simplex).collect();
    let inverse_data = |kind: InverseKind, n: usize, xc: usize| -> Vec<usize> {
        let g = prob.glued(kind, n, im.apply(n, xc), &ext);
        (0..g.object.len())
            .map(|c| {
                let k = g.object.cell_dim(c);
                match &g.roles[c] {
                    Role::Inverse { .. } => {
                        let (vcell, _) = side.shapes.pairs[n][xc].split(&locate(&g.inl, c));
                        total.index_of(&vcell)
                    }
                    Role::Homotopy { comp, .. } => {
                        let (e, _) = side.shapes.pairs[n][xc].split(comp);
                        let shift = if kind == InverseKind::Left { 0 } else { off(k) };
                        total.index_of(&e) + shift
                    }
                }
            })
            .collect()
    };
    let il = inv.left.mapping.map_into(&x, &|n, xc| Ok((im.apply(n, xc), inverse_data(InverseKind::Left, n, xc))))?;
    let ir = inv.right.mapping.map_into(&x, &|n, xc| Ok((im.apply(n, xc), inverse_data(InverseKind::Right, n, xc))))?;
    let i = inv.inv.pairing(&il, &ir)?;
    Ok(WeqObject { square, maps, inv, s, t, i, x })
}

/// The `V_z` cell sitting at glued position `c`.
fn locate(inl: &SimplicialMap, c: usize) -> CellRef {
    let k = inl.assignment().iter().position(|r| r.cell == c).expect("position lies in the left summand");
    inl.source.nondeg(k)
}

/// Verdict of [`is_univalent`] with the certificate for `t: Weq(p) -> X`.
#[derive(Clone, Debug)]
pub struct Univalence {
    pub univalent: bool,
    pub bound: usize,
    pub weq_counts: Vec<usize>,
    pub certificate: Certificate,
    pub t: TruncMap,
}

/// Certifies `t: Weq(p) -> X` against boundary inclusions up to `bound + 1`.
pub fn is_univalent(p: &SimplicialMap, bound: usize) -> Result<Univalence> {
    let weq = weq_object(p, bound + 1)?;
    if !weq.i_is_diagonal() {
        return Err(Error::Verification("(s, t) ∘ i is not the diagonal".into()));
    }
    let certificate = certify_rlp(&weq.t, Generators::Boundaries, bound + 1)?;
    Ok(Univalence {
        univalent: certificate.passed(),
        bound,
        weq_counts: weq.object().counts(),
        certificate,
        t: weq.t,
    })
}

impl Univalence {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": if self.univalent { "univalent" } else { "not-univalent" },
            "bound": self.bound,
            "evidence": {
                "weq_counts": self.weq_counts,
                "certificate": self.certificate.to_json(&self.t),
            }
        })
    }
}
