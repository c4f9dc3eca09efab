//! Extension results along cofibrations and the Π-type structure.

use std::sync::Arc;

use super::pi::{dependent_product, DependentProduct, PullbackShapes, Unit};
use crate::degeneracy::degeneracy_type_truncated;
use crate::equivalence::{deformation_retract, DeformationRetract};
use crate::error::{Error, Result};
use crate::lifting::{certify_rlp, solve_lift, Certificate, Generators, LiftingProblem};
use crate::replacement::{cofibrant_replace, Replacement};
use crate::sset::standard::{boundary_inclusion, simplex, simplex_map};
use crate::sset::{is_cofibration, product, subobject_inclusion, SimplicialMap};
use crate::truncated::{tpullback, KMap, TPullback, TruncMap, Truncation};

fn require_cofibration(f: &SimplicialMap) -> Result<()> {
    let w = is_cofibration(f);
    if !w.holds {
        let (a, b) = w.collision.unwrap_or_default();
        return Err(Error::NotACofibration(format!("`{a}` and `{b}` have the same image")));
    }
    Ok(())
}

/// The pushout product `f ×̂ g` as a sub-object inclusion
/// into `B × D`, for cofibrations `f: A -> B` and `g: C -> D`.
pub fn pushout_product(f: &SimplicialMap, g: &SimplicialMap) -> Result<SimplicialMap> {
    require_cofibration(f)?;
    require_cofibration(g)?;
    let mut in_f = vec![false; f.target.len()];
    for r in f.assignment() {
        in_f[r.cell] = true;
    }
    let mut in_g = vec![false; g.target.len()];
    for r in g.assignment() {
        in_g[r.cell] = true;
    }
    let p = product(f.target.clone(), g.target.clone());
    let keep: Vec<bool> = (0..p.object.len())
        .map(|c| {
            let (a, b) = p.components(c);
            in_f[a.cell] || in_g[b.cell]
        })
        .collect();
    subobject_inclusion(&p.object, &keep, format!("{}∪{}", f.source.name(), g.source.name()))
}

/// `Π_f(q)` for a cofibration `f` together with boundary certificates for `q`
/// and for the extension `p = Π_f(q) -> X`.
#[derive(Clone, Debug)]
pub struct TrivFibExtension {
    pub pi: DependentProduct,
    pub b: Truncation,
    pub q_certificate: Certificate,
    pub p_certificate: Certificate,
    pub restriction: TPullback,
    pub counit: TruncMap,
}

impl TrivFibExtension {
    /// `f^* p ≅ q` via the counit.
    pub fn counit_is_iso(&self) -> bool {
        self.counit.is_isomorphism()
    }
}

pub fn trivfib_extend(f: &SimplicialMap, q: &SimplicialMap, bound: usize) -> Result<TrivFibExtension> {
    require_cofibration(f)?;
    let shapes = Arc::new(PullbackShapes::new(f, bound)?);
    let reach = bound.max(shapes.shape_dim());
    let b = Truncation::new(q.source.clone(), reach);
    let y = Truncation::new(q.target.clone(), reach);
    let qt = q.truncate(&b, &y);
    let pi = dependent_product(&shapes, &qt, &y)?;
    let q_certificate = certify_rlp(&qt.restrict_bound(bound), Generators::Boundaries, bound)?;
    let p_certificate = certify_rlp(pi.projection(), Generators::Boundaries, bound)?;
    if q_certificate.passed() && !p_certificate.passed() {
        return Err(Error::Verification(format!(
            "extension fails the boundary lifting property: {}",
            p_certificate.failure.as_ref().map(|k| k.shape.name()).unwrap_or_default()
        )));
    }
    let (restriction, counit) = pi.counit()?;
    Ok(TrivFibExtension { pi, b, q_certificate, p_certificate, restriction, counit })
}

/// Extension of `q: B -> Y` along a cofibration `f: Y -> X` to
/// `q̄: B̄ -> X` with `v: B̄ -> A` over `X`, given `u: B -> A` over `f`.
#[derive(Clone, Debug)]
pub struct WeqExtension {
    pub unit: Unit,
    pub pi_b: DependentProduct,
    /// `A ×_{Π_f(A[f])} Π_f(B)`.
    pub bbar: TPullback,
    pub v: TruncMap,
    pub qbar: TruncMap,
    /// `B̄[f] = Y ×_X B̄`.
    pub restriction: TPullback,
    /// The comparison `B -> B̄[f]`.
    pub comparison: TruncMap,
    /// `v` as a kernel sub-object inclusion, when it is levelwise injective.
    pub v_kernel: Option<SimplicialMap>,
    /// Strong deformation retraction of `u: B -> A[f]` over `Y`.
    pub u_retract: Option<DeformationRetract>,
    /// Strong deformation retraction of `v` over `X`.
    pub v_retract: Option<DeformationRetract>,
}

impl WeqExtension {
    pub fn restriction_is_iso(&self) -> bool {
        self.comparison.is_isomorphism()
    }
}

/// `u: B -> A` must satisfy `p ∘ u = f ∘ q`. Objects are computed up to
/// `max(bound, dim A)`; deformation retractions are searched up to `bound`.
pub fn weq_extension(
    f: &SimplicialMap,
    p: &SimplicialMap,
    q: &SimplicialMap,
    u: &SimplicialMap,
    bound: usize,
) -> Result<WeqExtension> {
    require_cofibration(f)?;
    if p.after(u)? != f.after(q)? {
        return Err(Error::NonCommuting("p ∘ u differs from f ∘ q".into()));
    }
    let a_obj = &p.source;
    let w = bound.max(if a_obj.is_empty() { 0 } else { a_obj.dim() });
    let shapes = Arc::new(PullbackShapes::new(f, w)?);
    let unit = Unit::new(&shapes, p)?;
    let reach = unit.fibre_trunc.bound();
    let tb = Truncation::new(q.source.clone(), reach);
    let ty = Truncation::new(q.target.clone(), reach);
    let pi_b = dependent_product(&shapes, &q.truncate(&tb, &ty), &ty)?;
    let u_fib = unit.fibre.pairing(q, u)?;
    let pi_u = pi_b.postcompose(&unit.pi, &u_fib.truncate(&tb, &unit.fibre_trunc))?;
    let bbar = tpullback(&unit.map, &pi_u, format!("B̄({})", q.source.name()));
    let v = bbar.left.clone();
    let qbar = p.truncate(&unit.a, &shapes.base).after(&v);
    let restriction = tpullback(&pi_b.f_truncated(), &qbar, format!("B̄[{}]", f.source.name()));
    let tbw = Truncation::new(q.source.clone(), w);
    let simplices: Vec<_> = (0..=w).map(simplex).collect();
    let levels = (0..=w)
        .map(|n| {
            (0..tbw.trunc.count(n))
                .map(|c| {
                    let br = tbw.cell_ref(n, c);
                    let yr = q.apply(br);
                    let y = ty.index_of(&yr);
                    let a = unit.a.index_of(&u.apply(br));
                    let x = shapes.base.index_of(&f.apply(&yr));
                    let s = &shapes.pairs[n][x];
                    let phi = (0..s.object.len())
                        .map(|k| {
                            let (yc, tc) = s.components(k);
                            let b2 = q.source.act(br, &simplex_map(&simplices[n], n, tc));
                            if q.apply(&b2) != *yc {
                                return Err(Error::Verification("fibre of f is not a single cell".into()));
                            }
                            Ok(tb.index_of(&b2))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let miss = || Error::Verification(format!("{} has no image in B̄[f]", tbw.trunc.label(n, c)));
                    let pi = pi_b.mapping.index_of(n, x, &phi).ok_or_else(miss)?;
                    let cell = bbar.index_of(n, a, pi).ok_or_else(miss)?;
                    restriction.index_of(n, y, cell).ok_or_else(miss)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let comparison = TruncMap::new(tbw.trunc.clone(), restriction.object.clone(), levels)?;
    let v_kernel = if v.is_injective() {
        let mut hit: Vec<Vec<bool>> = (0..=w).map(|n| vec![false; unit.a.trunc.count(n)]).collect();
        for (n, layer) in v.levels.iter().enumerate() {
            for &a in layer {
                hit[n][a] = true;
            }
        }
        let keep: Vec<bool> = (0..a_obj.len())
            .map(|c| {
                let n = a_obj.cell_dim(c);
                hit[n][unit.a.index_of(&a_obj.nondeg(c))]
            })
            .collect();
        Some(subobject_inclusion(a_obj, &keep, format!("B̄({})", q.source.name()))?)
    } else {
        None
    };
    let u_retract = deformation_retract(&u_fib, &unit.fibre.proj_left, q, bound)?;
    let v_retract = match (&u_retract, &v_kernel) {
        (Some(_), Some(vk)) => deformation_retract(vk, p, &p.after(vk)?, bound)?,
        _ => None,
    };
    Ok(WeqExtension { unit, pi_b, bbar, v, qbar, restriction, comparison, v_kernel, u_retract, v_retract })
}

/// `Π_p(q)` for `p: A -> X`, `q: B -> A`, with its cofibrant carrier
/// `𝕃Π_p(q)` and application.
#[derive(Clone, Debug)]
pub struct PiType {
    pub pi: DependentProduct,
    pub carrier: Replacement,
    pub a: Truncation,
    pub b: Truncation,
    pub x: Truncation,
    /// `A ×_X Π_p(q)` and `app` on it.
    pub fibre: TPullback,
    pub app: TruncMap,
    /// `A ×_X 𝕃Π_p(q)` and `ãpp` on it.
    pub carrier_fibre: TPullback,
    pub app_tilde: TruncMap,
}

pub fn pi_type(p: &SimplicialMap, q: &SimplicialMap, bound: usize) -> Result<PiType> {
    if *q.target != *p.source {
        return Err(Error::CodomainMismatch("q must land in the source of p".into()));
    }
    let shapes = Arc::new(PullbackShapes::new(p, bound)?);
    let reach = bound.max(shapes.shape_dim());
    let a = Truncation::new(p.source.clone(), reach);
    let b = Truncation::new(q.source.clone(), reach);
    let pi = dependent_product(&shapes, &q.truncate(&b, &a), &a)?;
    let carrier = cofibrant_replace(pi.object(), bound)?;
    let (fibre, app) = pi.counit()?;
    let pa = pi.f_truncated().restrict_bound(bound);
    let over = pi.projection().after(&carrier.eps);
    let carrier_fibre = tpullback(&pa, &over, format!("A×𝕃{}", pi.object().name()));
    let levels = (0..=bound)
        .map(|n| {
            carrier_fibre.pairs[n]
                .iter()
                .map(|&(ac, l)| {
                    let c = fibre.index_of(n, ac, carrier.eps.apply(n, l)).expect("ε lies over the same base cell");
                    app.apply(n, c)
                })
                .collect()
        })
        .collect();
    let app_tilde = TruncMap::new(carrier_fibre.object.clone(), b.trunc.clone(), levels)?;
    let x = shapes.base.clone();
    Ok(PiType { pi, carrier, a, b, x, fibre, app, carrier_fibre, app_tilde })
}

impl PiType {
    pub fn bound(&self) -> usize {
        self.pi.bound()
    }

    fn require_sections(&self) -> Result<()> {
        let a = &self.a.kernel;
        if !a.is_empty() && a.dim() > self.bound() {
            return Err(Error::ResourceBound(format!("sections need bound at least {}", a.dim())));
        }
        Ok(())
    }

    /// Checks that `s: A -> B` is a section of `q`.
    pub fn check_section(&self, s: &KMap) -> Result<()> {
        s.check()?;
        for c in 0..s.source.len() {
            let n = s.source.cell_dim(c);
            if self.pi.q.apply(n, s.assign[c]) != self.a.index_of(&s.source.nondeg(c)) {
                return Err(Error::InvalidMap(format!("not a section at `{}`", s.source.id(c))));
            }
        }
        Ok(())
    }

    /// `λ(s): X -> Π_p(q)`, the transpose of a section.
    pub fn lambda(&self, s: &KMap) -> Result<TruncMap> {
        self.require_sections()?;
        self.check_section(s)?;
        let shapes = &self.pi.shapes;
        self.pi.mapping.map_into(&self.x.trunc, &|n, x| {
            let sh = &shapes.pairs[n][x];
            Ok((x, sh.proj_left.assignment().iter().map(|r| s.eval(r)).collect()))
        })
    }

    /// `λ̃(s): X -> 𝕃Π_p(q)`, `x ↦ (type(x), λ(s)(x))`.
    pub fn lambda_tilde(&self, s: &KMap) -> Result<TruncMap> {
        let l = self.lambda(s)?;
        let levels = (0..=self.bound())
            .map(|n| {
                (0..self.x.trunc.count(n))
                    .map(|x| {
                        let t = degeneracy_type_truncated(&self.x.trunc, n, x);
                        self.carrier
                            .index_of(n, &t, l.apply(n, x))
                            .ok_or_else(|| Error::Verification("type of a base cell exceeds its image".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TruncMap::new(self.x.trunc.clone(), self.carrier.object.clone(), levels)
    }

    /// `λ̃(s)` found by lifting `∅ -> X` against `ε`.
    pub fn lambda_tilde_search(&self, s: &KMap) -> Result<Option<KMap>> {
        let l = self.lambda(s)?;
        let xk = &self.x.kernel;
        let left = SimplicialMap::from_empty(xk.clone());
        let top = KMap { source: left.source.clone(), target: self.carrier.object.clone(), assign: Vec::new() };
        let bottom = KMap {
            source: xk.clone(),
            target: self.pi.object().clone(),
            assign: (0..xk.len()).map(|c| l.apply(xk.cell_dim(c), self.x.index_of(&xk.nondeg(c)))).collect(),
        };
        solve_lift(&LiftingProblem::new(left, self.carrier.eps.clone(), top, bottom)?)
    }

    /// `ãpp(f)`: the section `a ↦ ãpp(a, f(p(a)))` of a section `f` of `𝕃Π -> X`.
    pub fn apply_section(&self, f: &TruncMap) -> Result<KMap> {
        self.require_sections()?;
        let ak = &self.a.kernel;
        let assign = (0..ak.len())
            .map(|c| {
                let n = ak.cell_dim(c);
                let a = self.a.index_of(&ak.nondeg(c));
                let x = self.pi.f_truncated().apply(n, a);
                let cell = self
                    .carrier_fibre
                    .index_of(n, a, f.apply(n, x))
                    .ok_or_else(|| Error::CodomainMismatch("f is not a section over X".into()))?;
                Ok(self.app_tilde.apply(n, cell))
            })
            .collect::<Result<Vec<_>>>()?;
        KMap::new(ak.clone(), self.b.trunc.clone(), assign)
    }

    /// `ãpp ∘ (λ̃(s) × id) = s` on every cell of `A`.
    pub fn beta(&self, s: &KMap) -> Result<bool> {
        let back = self.apply_section(&self.lambda_tilde(s)?)?;
        Ok(back == *s)
    }

    /// A homotopy `Δ[1] × X -> 𝕃Π` from `λ̃(ãpp f)` to `f` over `λ(ãpp f)`.
    pub fn eta(&self, f: &TruncMap) -> Result<Option<KMap>> {
        let xk = &self.x.kernel;
        if !xk.is_empty() && xk.dim() + 1 > self.bound() {
            return Err(Error::ResourceBound(format!("the η homotopy needs bound at least {}", xk.dim() + 1)));
        }
        let s = self.apply_section(f)?;
        let start = self.lambda_tilde(&s)?;
        let left = pushout_product(&boundary_inclusion(1), &SimplicialMap::from_empty(xk.clone()))?;
        let whole = &left.target;
        let comps = product(Arc::new(simplex(1)), xk.clone());
        debug_assert!(*comps.object == **whole);
        let value = |cell: &crate::sset::CellRef| -> usize {
            let (t, xr) = comps.split(cell);
            let n = t.dim();
            let x = self.x.index_of(&xr);
            if t.cell == 0 {
                start.apply(n, x)
            } else {
                f.apply(n, x)
            }
        };
        let top_assign = left.assignment().iter().map(value).collect();
        let top = KMap { source: left.source.clone(), target: self.carrier.object.clone(), assign: top_assign };
        let bottom_assign = (0..whole.len())
            .map(|c| {
                let (_, xr) = comps.components(c);
                let n = whole.cell_dim(c);
                self.carrier.eps.apply(n, f.apply(n, self.x.index_of(xr)))
            })
            .collect();
        let bottom = KMap { source: whole.clone(), target: self.pi.object().clone(), assign: bottom_assign };
        solve_lift(&LiftingProblem::new(left, self.carrier.eps.clone(), top, bottom)?)
    }
}
