//! Exponentials `X^K`, path objects and pullback exponentials.

use std::sync::Arc;

use super::{always, operator_map, MappingObject, ShapeFamily};
use crate::delta::OrdinalMap;
use crate::error::{Error, Result};
use crate::sset::standard::{simplex, simplex_map};
use crate::sset::{product, CellRef, FiniteSSet, PairObject, SimplicialMap};
use crate::truncated::{tpullback, tproduct, TPullback, TruncMap, TruncatedSSet, Truncation};

/// `X^K` up to a bound: an `n`-cell is a map `Δ[n] × K -> X`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub mapping: MappingObject,
    pub exponent: Arc<FiniteSSet>,
    /// `Δ[n] × K` for each `n`.
    pub products: Vec<PairObject>,
}

pub fn exponential(x: &Arc<TruncatedSSet>, k: &Arc<FiniteSSet>, bound: usize) -> Result<Exponential> {
    let need = bound + if k.is_empty() { 0 } else { k.dim() };
    if x.bound() < need {
        return Err(Error::ResourceBound(format!(
            "{} must be known up to dimension {need}, found {}",
            x.name(),
            x.bound()
        )));
    }
    let products: Vec<PairObject> = (0..=bound + 1).map(|n| product(Arc::new(simplex(n)), k.clone())).collect();
    let along = |theta: &OrdinalMap, src: &PairObject, dst: &PairObject| -> Result<SimplicialMap> {
        dst.pairing(&operator_map(theta).after(&src.proj_left)?, &src.proj_right)
    };
    let mut face_maps = Vec::with_capacity(bound + 1);
    let mut degen_maps = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let faces = if n == 0 {
            Vec::new()
        } else {
            (0..=n)
                .map(|i| along(&OrdinalMap::face(n, i), &products[n - 1], &products[n]))
                .collect::<Result<Vec<_>>>()?
        };
        face_maps.push(vec![faces]);
        let degens = if n == bound {
            Vec::new()
        } else {
            (0..=n)
                .map(|j| along(&OrdinalMap::degeneracy(n, j), &products[n + 1], &products[n]))
                .collect::<Result<Vec<_>>>()?
        };
        degen_maps.push(vec![degens]);
    }
    let family = ShapeFamily {
        base: Arc::new(TruncatedSSet::terminal(bound)),
        shapes: products[..=bound].iter().map(|p| vec![p.object.clone()]).collect(),
        face_maps,
        degen_maps,
    };
    let mapping = MappingObject::build(&family, x.clone(), &always, format!("{}^{}", x.name(), k.name()))?;
    let mut products = products;
    products.truncate(bound + 1);
    Ok(Exponential { mapping, exponent: k.clone(), products })
}

/// [`exponential`] of a kernel object, truncated as far as needed.
pub fn exponential_kernel(x: &Arc<FiniteSSet>, k: &Arc<FiniteSSet>, bound: usize) -> Result<(Exponential, Truncation)> {
    let t = Truncation::new(x.clone(), bound + if k.is_empty() { 0 } else { k.dim() });
    Ok((exponential(&t.trunc, k, bound)?, t))
}

impl Exponential {
    pub fn bound(&self) -> usize {
        self.mapping.bound()
    }

    pub fn object(&self) -> &Arc<TruncatedSSet> {
        &self.mapping.object
    }

    /// The base object `X` cut down to the bound of the exponential.
    pub fn base_object(&self) -> Arc<TruncatedSSet> {
        Arc::new(self.mapping.target.restrict_bound(self.bound()))
    }

    /// Evaluation at a vertex `v` of `K`, into `X` at the same bound.
    pub fn evaluate(&self, v: usize, target: &Arc<TruncatedSSet>) -> Result<TruncMap> {
        if self.exponent.cell_dim(v) != 0 {
            return Err(Error::InvalidParameters(format!("`{}` is not a vertex", self.exponent.id(v))));
        }
        let levels = (0..=self.bound())
            .map(|n| {
                let p = &self.products[n];
                let top = CellRef::nondeg(p.left.len() - 1, n);
                let at = p.pair(&top, &CellRef::new(OrdinalMap::constant(n, 0, 0), v)).expect("vertex slices exist");
                (0..self.mapping.object.count(n)).map(|c| self.mapping.kmap(n, c).eval(&at)).collect()
            })
            .collect();
        TruncMap::new(self.mapping.object.clone(), target.clone(), levels)
    }

    /// `x ↦ x ∘ proj`: constant maps out of `Δ[n] × K`.
    pub fn constant(&self, source: &Arc<TruncatedSSet>) -> Result<TruncMap> {
        let x = &self.mapping.target;
        self.mapping.map_into(source, &|n, c| {
            let p = &self.products[n];
            let phi = p
                .proj_left
                .assignment()
                .iter()
                .map(|r| x.act(n, c, &simplex_map(&p.left, n, r)))
                .collect();
            Ok((0, phi))
        })
    }

    /// Postcomposition with `g: X -> Y` into `Y^K`.
    pub fn postcompose(&self, other: &Exponential, g: &TruncMap) -> Result<TruncMap> {
        self.mapping.postcompose(&other.mapping, g, None)
    }

    /// Precomposition with `f: K' -> K` into `X^{K'}`.
    pub fn restrict_along(&self, other: &Exponential, f: &SimplicialMap) -> Result<TruncMap> {
        let rhos = (0..=self.bound().min(other.bound()))
            .map(|n| {
                let (src, dst) = (&other.products[n], &self.products[n]);
                dst.pairing(&src.proj_left, &f.after(&src.proj_right)?)
            })
            .collect::<Result<Vec<_>>>()?;
        self.mapping.precompose_into(&other.mapping, &|n, _| rhos[n].clone())
    }
}

/// `Path(A) = A^{Δ[1]}` with constant paths `r`, endpoints and `∂ = (∂₀, ∂₁)`.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub path: Exponential,
    pub base: Arc<TruncatedSSet>,
    pub square: TPullback,
    pub r: TruncMap,
    pub ev0: TruncMap,
    pub ev1: TruncMap,
    pub boundary: TruncMap,
}

/// Path object of `A`, which must be known up to `bound + 1`.
pub fn path_object(a: &Arc<TruncatedSSet>, bound: usize) -> Result<PathObject> {
    let path = exponential(a, &Arc::new(simplex(1)), bound)?;
    let base = path.base_object();
    let r = path.constant(&base)?;
    let ev0 = path.evaluate(0, &base)?;
    let ev1 = path.evaluate(1, &base)?;
    let square = tproduct(&base, &base);
    let boundary = square.pairing(&ev0, &ev1)?;
    Ok(PathObject { path, base, square, r, ev0, ev1, boundary })
}

impl PathObject {
    pub fn diagonal(&self) -> Result<TruncMap> {
        let id = TruncMap::identity(self.base.clone());
        self.square.pairing(&id, &id)
    }

    /// `r` is levelwise injective and reflects degeneracy.
    pub fn r_is_cofibration(&self) -> bool {
        self.r.is_injective()
            && (0..=self.r.bound()).all(|n| {
                (0..self.base.count(n))
                    .all(|c| self.base.is_degenerate(n, c) == self.path.object().is_degenerate(n, self.r.apply(n, c)))
            })
    }
}

/// The path object of `p: A -> X` in the slice: paths in `A` lying over
/// constant paths of `X`.
#[derive(Clone, Debug)]
pub struct PathOfMap {
    pub path_a: PathObject,
    pub path_x: PathObject,
    /// `X ×_{Path X} Path A`.
    pub object: TPullback,
    pub r: TruncMap,
    /// `A ×_X A`.
    pub square: TPullback,
    pub boundary: TruncMap,
    pub diagonal: TruncMap,
    pub ev0: TruncMap,
    pub ev1: TruncMap,
}

pub fn path_of_map(p: &SimplicialMap, bound: usize) -> Result<PathOfMap> {
    let ta = Truncation::new(p.source.clone(), bound + 1);
    let tx = Truncation::new(p.target.clone(), bound + 1);
    let path_a = path_object(&ta.trunc, bound)?;
    let path_x = path_object(&tx.trunc, bound)?;
    let pt = p.truncate(&ta, &tx);
    let p_star = path_a.path.postcompose(&path_x.path, &pt)?;
    let object = tpullback(&path_x.r, &p_star, format!("Path({})", p_label(p)));
    let pb = TruncMap { source: path_a.base.clone(), target: path_x.base.clone(), levels: pt.levels[..=bound].to_vec() };
    let r = object.pairing(&pb, &path_a.r)?;
    let square = tpullback(&pb, &pb, format!("{}×_{}{}", p.source.name(), p.target.name(), p.source.name()));
    let ev0 = path_a.ev0.after(&object.right);
    let ev1 = path_a.ev1.after(&object.right);
    let boundary = square.pairing(&ev0, &ev1)?;
    let id = TruncMap::identity(path_a.base.clone());
    let diagonal = square.pairing(&id, &id)?;
    Ok(PathOfMap { path_a, path_x, object, r, square, boundary, diagonal, ev0, ev1 })
}

fn p_label(p: &SimplicialMap) -> String {
    format!("{}→{}", p.source.name(), p.target.name())
}

impl PathOfMap {
    /// `∂ ∘ r = δ` exactly.
    pub fn boundary_factors_diagonal(&self) -> bool {
        self.boundary.after(&self.r) == self.diagonal
    }
}

/// `⟨f, p⟩: E^L -> B^L ×_{B^K} E^K` for `f: K -> L` and `p: E -> B`.
#[derive(Clone, Debug)]
pub struct PullbackExponential {
    pub source: Exponential,
    pub target: TPullback,
    pub map: TruncMap,
}

pub fn pullback_exponential(f: &SimplicialMap, p: &SimplicialMap, bound: usize) -> Result<PullbackExponential> {
    let l = &f.target;
    let k = &f.source;
    let te = Truncation::new(p.source.clone(), bound + l.dim());
    let tb = Truncation::new(p.target.clone(), bound + l.dim());
    let pt = p.truncate(&te, &tb);
    let el = exponential(&te.trunc, l, bound)?;
    let bl = exponential(&tb.trunc, l, bound)?;
    let ek = exponential(&te.trunc, k, bound)?;
    let bk = exponential(&tb.trunc, k, bound)?;
    let bl_bk = bl.restrict_along(&bk, f)?;
    let ek_bk = ek.postcompose(&bk, &pt)?;
    let target = tpullback(&bl_bk, &ek_bk, format!("{}×{}", bl.object().name(), ek.object().name()));
    let map = target.pairing(&el.postcompose(&bl, &pt)?, &el.restrict_along(&ek, f)?)?;
    Ok(PullbackExponential { source: el, target, map })
}
