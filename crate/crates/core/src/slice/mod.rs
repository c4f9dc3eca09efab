//! Slice constructions: exponentials, path objects, dependent products and
//! the extension results built on them.
//!
//! All of these are instances of one mapping-object engine. Over a base `Z`
//! each cell `z` carries a finite shape `S_z` with restriction maps along
//! faces and degeneracies, and the cells over `z` are the admissible maps
//! `S_z -> T` into a fixed target.

mod exponential;
mod extension;
mod pi;

pub use exponential::{
    exponential, exponential_kernel, path_object, path_of_map, pullback_exponential, Exponential, PathObject,
    PathOfMap, PullbackExponential,
};
pub use extension::{pi_type, pushout_product, trivfib_extend, weq_extension, PiType, TrivFibExtension, WeqExtension};
pub use pi::{dependent_product, dependent_product_kernel, DependentProduct, PullbackShapes, Unit};

use std::collections::HashMap;
use std::sync::Arc;

use crate::degeneracy::{factor_kmap_through_quotient, quotient_sections};
use crate::delta::OrdinalMap;
use crate::error::{Error, Result};
use crate::search::{all_maps, MAP_LIMIT};
use crate::sset::standard::{simplex, simplex_cell};
use crate::sset::{FiniteSSet, SimplicialMap};
use crate::truncated::{KMap, TruncMap, TruncatedSSet};

/// Shapes over the cells of a base, with restriction maps.
#[derive(Clone, Debug)]
pub struct ShapeFamily {
    pub base: Arc<TruncatedSSet>,
    /// `shapes[n][z]`.
    pub shapes: Vec<Vec<Arc<FiniteSSet>>>,
    /// `face_maps[n][z][i]: S_{d_i z} -> S_z` for `n >= 1`.
    pub face_maps: Vec<Vec<Vec<SimplicialMap>>>,
    /// `degen_maps[n][z][j]: S_{s_j z} -> S_z` for `n < bound`.
    pub degen_maps: Vec<Vec<Vec<SimplicialMap>>>,
}

/// Extra condition on a cell `(z, φ)`: `(n, z, shape cell, candidate, partial assignment)`.
pub type Admissible<'a> = &'a dyn Fn(usize, usize, usize, usize, &[usize]) -> bool;

pub fn always(_: usize, _: usize, _: usize, _: usize, _: &[usize]) -> bool {
    true
}

/// The truncated object of admissible maps out of the shapes of a family.
#[derive(Clone, Debug)]
pub struct MappingObject {
    pub object: Arc<TruncatedSSet>,
    pub to_base: TruncMap,
    pub target: Arc<TruncatedSSet>,
    pub shapes: Vec<Vec<Arc<FiniteSSet>>>,
    /// `cells[n][c] = (z, φ)` with `φ` given on non-degenerate cells of `S_z`.
    pub cells: Vec<Vec<(usize, Vec<usize>)>>,
    index: Vec<HashMap<(usize, Vec<usize>), usize>>,
}

/// `φ ∘ ρ` on non-degenerate cells of `ρ`'s source.
pub(crate) fn precompose(target: &TruncatedSSet, phi: &[usize], rho: &SimplicialMap) -> Vec<usize> {
    rho.assignment()
        .iter()
        .map(|r| target.act(rho.target.cell_dim(r.cell), phi[r.cell], &r.op))
        .collect()
}

impl MappingObject {
    pub fn build(
        family: &ShapeFamily,
        target: Arc<TruncatedSSet>,
        admissible: Admissible<'_>,
        name: impl Into<String>,
    ) -> Result<Self> {
        let base = &family.base;
        let bound = base.bound();
        let mut cells: Vec<Vec<(usize, Vec<usize>)>> = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            let mut layer = Vec::new();
            for z in 0..base.count(n) {
                let s = &family.shapes[n][z];
                let filter = |c: usize, cand: usize, partial: &[usize]| admissible(n, z, c, cand, partial);
                for phi in all_maps(s, &target, &vec![None; s.len()], &filter, MAP_LIMIT)? {
                    layer.push((z, phi));
                }
            }
            cells.push(layer);
        }
        let index: Vec<HashMap<(usize, Vec<usize>), usize>> =
            cells.iter().map(|l| l.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        let lookup = |n: usize, key: (usize, Vec<usize>)| {
            index[n].get(&key).copied().ok_or_else(|| {
                Error::InvalidObject(format!("restriction leaves the mapping object in dimension {n}"))
            })
        };
        let mut faces = Vec::with_capacity(bound + 1);
        let mut degens = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            let mut fl = Vec::with_capacity(cells[n].len());
            let mut dl = Vec::with_capacity(cells[n].len());
            for (z, phi) in &cells[n] {
                if n > 0 {
                    let mut fs = Vec::with_capacity(n + 1);
                    for i in 0..=n {
                        let rho = &family.face_maps[n][*z][i];
                        fs.push(lookup(n - 1, (base.face(n, *z, i), precompose(&target, phi, rho)))?);
                    }
                    fl.push(fs);
                } else {
                    fl.push(Vec::new());
                }
                if n < bound {
                    let mut ds = Vec::with_capacity(n + 1);
                    for j in 0..=n {
                        let rho = &family.degen_maps[n][*z][j];
                        ds.push(lookup(n + 1, (base.degen(n, *z, j), precompose(&target, phi, rho)))?);
                    }
                    dl.push(ds);
                }
            }
            faces.push(fl);
            degens.push(dl);
        }
        // a cell over z = s_j z' is degenerate iff φ factors through S_z -> S_{z'}
        let mut sections: HashMap<(usize, usize, usize), Option<Vec<usize>>> = HashMap::new();
        let mut flags = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            let mut layer = Vec::with_capacity(cells[n].len());
            for (z, phi) in &cells[n] {
                let mut degenerate = false;
                for j in 0..n {
                    let zp = base.face(n, *z, j);
                    if base.degen(n - 1, zp, j) != *z {
                        continue;
                    }
                    let rho = &family.degen_maps[n - 1][zp][j];
                    let sec = sections.entry((n - 1, zp, j)).or_insert_with(|| quotient_sections(rho));
                    let Some(sec) = sec else {
                        return Err(Error::NotAQuotient(format!("restriction along s{j} is not surjective")));
                    };
                    let f = KMap { source: family.shapes[n][*z].clone(), target: target.clone(), assign: phi.clone() };
                    if factor_kmap_through_quotient(&f, rho, sec).factors() {
                        degenerate = true;
                        break;
                    }
                }
                layer.push(degenerate);
            }
            flags.push(layer);
        }
        let show_base = (0..=bound).any(|n| base.count(n) > 1);
        let labels = cells
            .iter()
            .enumerate()
            .map(|(n, l)| {
                l.iter()
                    .map(|(z, phi)| {
                        let s = &family.shapes[n][*z];
                        let body: Vec<&str> =
                            phi.iter().enumerate().map(|(c, &t)| target.label(s.cell_dim(c), t)).collect();
                        if show_base {
                            format!("{}:[{}]", base.label(n, *z), body.join(","))
                        } else {
                            format!("[{}]", body.join(","))
                        }
                    })
                    .collect()
            })
            .collect();
        let object = Arc::new(TruncatedSSet::from_tables(name, bound, labels, faces, degens, Some(flags))?);
        let to_base = TruncMap {
            source: object.clone(),
            target: base.clone(),
            levels: cells.iter().map(|l| l.iter().map(|k| k.0).collect()).collect(),
        };
        Ok(MappingObject { object, to_base, target, shapes: family.shapes.clone(), cells, index })
    }

    pub fn bound(&self) -> usize {
        self.object.bound()
    }

    pub fn index_of(&self, n: usize, z: usize, phi: &[usize]) -> Option<usize> {
        self.index.get(n).and_then(|m| m.get(&(z, phi.to_vec())).copied())
    }

    /// The map `S_z -> T` of a cell.
    pub fn kmap(&self, n: usize, c: usize) -> KMap {
        let (z, phi) = &self.cells[n][c];
        KMap { source: self.shapes[n][*z].clone(), target: self.target.clone(), assign: phi.clone() }
    }

    /// A levelwise map out of `source` given cellwise as `(z, φ)` in this object.
    pub fn map_into(
        &self,
        source: &Arc<TruncatedSSet>,
        cell: &dyn Fn(usize, usize) -> Result<(usize, Vec<usize>)>,
    ) -> Result<TruncMap> {
        let bound = source.bound().min(self.bound());
        let levels = (0..=bound)
            .map(|n| {
                (0..source.count(n))
                    .map(|c| {
                        let (z, phi) = cell(n, c)?;
                        self.index_of(n, z, &phi).ok_or_else(|| {
                            Error::CodomainMismatch(format!("{} has no image in {}", source.label(n, c), self.object.name()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let source = if bound < source.bound() { Arc::new(source.restrict_bound(bound)) } else { source.clone() };
        TruncMap::new(source, self.object.clone(), levels)
    }

    /// Postcomposition `(z, φ) ↦ (base(z), g ∘ φ)` into a mapping object over
    /// the same shapes.
    pub fn postcompose(&self, other: &MappingObject, g: &TruncMap, base: Option<&TruncMap>) -> Result<TruncMap> {
        self.map_cells_into(other, &|n, c| {
            let (z, phi) = &self.cells[n][c];
            let s = &self.shapes[n][*z];
            let zz = base.map_or(*z, |b| b.apply(n, *z));
            Ok((zz, phi.iter().enumerate().map(|(k, &t)| g.apply(s.cell_dim(k), t)).collect()))
        })
    }

    /// Precomposition `(z, φ) ↦ (z, φ ∘ ρ_z)` with per-cell shape maps.
    pub fn precompose_into(
        &self,
        other: &MappingObject,
        rho: &dyn Fn(usize, usize) -> SimplicialMap,
    ) -> Result<TruncMap> {
        self.map_cells_into(other, &|n, c| {
            let (z, phi) = &self.cells[n][c];
            Ok((*z, precompose(&self.target, phi, &rho(n, *z))))
        })
    }

    fn map_cells_into(
        &self,
        other: &MappingObject,
        cell: &dyn Fn(usize, usize) -> Result<(usize, Vec<usize>)>,
    ) -> Result<TruncMap> {
        other.map_into(&self.object, cell)
    }
}

/// `θ̂: Δ[m] -> Δ[n]` for a monotone `θ`.
pub fn operator_map(theta: &OrdinalMap) -> SimplicialMap {
    let target = Arc::new(simplex(theta.target_dim()));
    let cell = simplex_cell(&target, theta);
    SimplicialMap::from_cell(target, &cell)
}
