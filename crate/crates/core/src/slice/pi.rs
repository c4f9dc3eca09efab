//! Dependent products `Π_f` along a map `f: Y -> X`, with unit and counit.

use std::sync::Arc;

use super::{operator_map, MappingObject, ShapeFamily};
use crate::delta::OrdinalMap;
use crate::error::{Error, Result};
use crate::sset::standard::{simplex, simplex_map};
use crate::sset::{pullback, CellRef, PairObject, SimplicialMap};
use crate::truncated::{tpullback, TPullback, TruncMap, TruncatedSSet, Truncation};

/// The shapes `Y ×_X Δ[n]` over the cells of `X`.
#[derive(Clone, Debug)]
pub struct PullbackShapes {
    pub f: SimplicialMap,
    pub base: Truncation,
    /// `pairs[n][x]`, with components in `Y` and `Δ[n]`.
    pub pairs: Vec<Vec<PairObject>>,
    pub family: ShapeFamily,
}

impl PullbackShapes {
    pub fn new(f: &SimplicialMap, bound: usize) -> Result<Self> {
        let base = Truncation::new(f.target.clone(), bound);
        let pairs = (0..=bound)
            .map(|n| {
                (0..base.trunc.count(n))
                    .map(|x| pullback(f, &SimplicialMap::from_cell(f.target.clone(), base.cell_ref(n, x))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let along = |theta: &OrdinalMap, src: &PairObject, dst: &PairObject| -> Result<SimplicialMap> {
            dst.pairing(&src.proj_left, &operator_map(theta).after(&src.proj_right)?)
        };
        let t = &base.trunc;
        let mut face_maps = Vec::with_capacity(bound + 1);
        let mut degen_maps = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            let mut fl = Vec::with_capacity(t.count(n));
            let mut dl = Vec::with_capacity(t.count(n));
            for x in 0..t.count(n) {
                let faces = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| along(&OrdinalMap::face(n, i), &pairs[n - 1][t.face(n, x, i)], &pairs[n][x]))
                        .collect::<Result<Vec<_>>>()?
                };
                fl.push(faces);
                if n < bound {
                    dl.push(
                        (0..=n)
                            .map(|j| along(&OrdinalMap::degeneracy(n, j), &pairs[n + 1][t.degen(n, x, j)], &pairs[n][x]))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
            }
            face_maps.push(fl);
            degen_maps.push(dl);
        }
        let family = ShapeFamily {
            base: t.clone(),
            shapes: pairs.iter().map(|l| l.iter().map(|p| p.object.clone()).collect()).collect(),
            face_maps,
            degen_maps,
        };
        Ok(PullbackShapes { f: f.clone(), base, pairs, family })
    }

    pub fn bound(&self) -> usize {
        self.base.bound()
    }

    /// Largest dimension of a shape.
    pub fn shape_dim(&self) -> usize {
        self.pairs.iter().flatten().filter(|p| !p.object.is_empty()).map(|p| p.object.dim()).max().unwrap_or(0)
    }

    /// The shape cell `(y, ι_n)` over `x = f(y)`.
    pub fn diagonal_cell(&self, n: usize, x: usize, y: &CellRef) -> Option<CellRef> {
        let p = &self.pairs[n][x];
        p.pair(y, &CellRef::nondeg(p.right.len() - 1, n))
    }
}

/// `Π_f(q)` for `q: B -> Y`, as a truncated object over `X`.
#[derive(Clone, Debug)]
pub struct DependentProduct {
    pub shapes: Arc<PullbackShapes>,
    pub mapping: MappingObject,
    pub q: TruncMap,
    pub y: Truncation,
}

/// `Π_f(q)` over precomputed shapes; `q` and `y` must reach the shape dimension.
pub fn dependent_product(shapes: &Arc<PullbackShapes>, q: &TruncMap, y: &Truncation) -> Result<DependentProduct> {
    let need = shapes.shape_dim();
    if q.bound() < need || y.bound() < need {
        return Err(Error::ResourceBound(format!("fibres need dimension {need}")));
    }
    let required: Vec<Vec<Vec<usize>>> = shapes
        .pairs
        .iter()
        .map(|l| l.iter().map(|p| p.proj_left.assignment().iter().map(|r| y.index_of(r)).collect()).collect())
        .collect();
    let admissible = |n: usize, x: usize, c: usize, cand: usize, _: &[usize]| {
        let s = &shapes.pairs[n][x].object;
        q.apply(s.cell_dim(c), cand) == required[n][x][c]
    };
    let name = format!("Π({})", q.source.name());
    let mapping = MappingObject::build(&shapes.family, q.source.clone(), &admissible, name)?;
    Ok(DependentProduct { shapes: shapes.clone(), mapping, q: q.clone(), y: y.clone() })
}

/// `Π_f(q)` for kernel maps, with the truncation used for `B`.
pub fn dependent_product_kernel(f: &SimplicialMap, q: &SimplicialMap, bound: usize) -> Result<(DependentProduct, Truncation)> {
    let shapes = Arc::new(PullbackShapes::new(f, bound)?);
    let reach = bound.max(shapes.shape_dim());
    let tb = Truncation::new(q.source.clone(), reach);
    let ty = Truncation::new(q.target.clone(), reach);
    let pi = dependent_product(&shapes, &q.truncate(&tb, &ty), &ty)?;
    Ok((pi, tb))
}

impl DependentProduct {
    pub fn bound(&self) -> usize {
        self.mapping.bound()
    }

    pub fn object(&self) -> &Arc<TruncatedSSet> {
        &self.mapping.object
    }

    /// The projection `Π_f(q) -> X`.
    pub fn projection(&self) -> &TruncMap {
        &self.mapping.to_base
    }

    /// `f` at the bound of the product.
    pub fn f_truncated(&self) -> TruncMap {
        let ty = Truncation::new(self.shapes.f.source.clone(), self.bound());
        self.shapes.f.truncate(&ty, &self.shapes.base)
    }

    /// `f^* Π_f(q)` and the counit `f^* Π_f(q) -> B`, `(y, φ) ↦ φ(y, ι)`.
    pub fn counit(&self) -> Result<(TPullback, TruncMap)> {
        let ft = self.f_truncated();
        let ty = Truncation::new(self.shapes.f.source.clone(), self.bound());
        let back = tpullback(&ft, self.projection(), format!("f*{}", self.object().name()));
        let levels = (0..=self.bound())
            .map(|n| {
                back.pairs[n]
                    .iter()
                    .map(|&(y, c)| {
                        let x = self.mapping.cells[n][c].0;
                        let at = self
                            .shapes
                            .diagonal_cell(n, x, ty.cell_ref(n, y))
                            .ok_or_else(|| Error::Verification("diagonal cell missing from the fibre".into()))?;
                        Ok(self.mapping.kmap(n, c).eval(&at))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let counit = TruncMap::new(back.object.clone(), self.q.source.clone(), levels)?;
        Ok((back, counit))
    }

    /// Postcomposition `Π_f(u)` with `u: B -> B'` over `Y`.
    pub fn postcompose(&self, other: &DependentProduct, u: &TruncMap) -> Result<TruncMap> {
        self.mapping.postcompose(&other.mapping, u, None)
    }
}

/// `η_A: A -> Π_f(f^* A)` for `p: A -> X`.
#[derive(Clone, Debug)]
pub struct Unit {
    /// `A[f] = Y ×_X A`.
    pub fibre: PairObject,
    pub fibre_trunc: Truncation,
    pub a: Truncation,
    pub pi: DependentProduct,
    pub map: TruncMap,
}

impl Unit {
    pub fn new(shapes: &Arc<PullbackShapes>, p: &SimplicialMap) -> Result<Self> {
        let f = &shapes.f;
        let bound = shapes.bound();
        let fibre = pullback(f, p)?;
        let reach = bound.max(shapes.shape_dim());
        let fibre_trunc = Truncation::new(fibre.object.clone(), reach);
        let ty = Truncation::new(f.source.clone(), reach);
        let q = fibre.proj_left.truncate(&fibre_trunc, &ty);
        let pi = dependent_product(shapes, &q, &ty)?;
        let a = Truncation::new(p.source.clone(), bound);
        let simplices: Vec<_> = (0..=bound).map(simplex).collect();
        let map = pi.mapping.map_into(&a.trunc, &|n, c| {
            let ar = a.cell_ref(n, c);
            let x = shapes.base.index_of(&p.apply(ar));
            let s = &shapes.pairs[n][x];
            let phi = (0..s.object.len())
                .map(|k| {
                    let (yc, tc) = s.components(k);
                    let theta = simplex_map(&simplices[n], n, tc);
                    let cell = fibre
                        .pair(yc, &p.source.act(ar, &theta))
                        .ok_or_else(|| Error::Verification("unit leaves the fibre".into()))?;
                    Ok(fibre_trunc.index_of(&cell))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((x, phi))
        })?;
        Ok(Unit { fibre, fibre_trunc, a, pi, map })
    }
}
