//! The explicit cofibrant replacement `𝕃X`: cells are pairs of a degeneracy
//! type and a cell of `X` whose own type contains it, with the projection
//! `ε: 𝕃X -> X`.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::degeneracy::{degeneracy_type_truncated, enumerate_d, extend_boundary_to_d, DTruncation, DegeneracyType};
use crate::delta::OrdinalMap;
use crate::error::{Error, Result};
use crate::lifting::ProblemKey;
use crate::sset::standard::{boundary, simplex_face_op};
use crate::sset::FiniteSSet;
use crate::truncated::{KMap, TruncMap, TruncatedSSet, Truncation};

/// `𝕃X` up to a bound together with `ε` and the projection to `D`.
#[derive(Clone, Debug)]
pub struct Replacement {
    pub object: Arc<TruncatedSSet>,
    pub base: Arc<TruncatedSSet>,
    pub eps: TruncMap,
    pub to_d: TruncMap,
    pub d: DTruncation,
    pub cells: Vec<Vec<(DegeneracyType, usize)>>,
    index: Vec<HashMap<(DegeneracyType, usize), usize>>,
}

/// Builds `𝕃X` in dimensions `0..=bound` for `X` with exact degeneracy flags.
pub fn cofibrant_replace(x: &Arc<TruncatedSSet>, bound: usize) -> Result<Replacement> {
    if bound > x.bound() {
        return Err(Error::ResourceBound(format!("object known up to {}, replacement asked up to {bound}", x.bound())));
    }
    let d = DTruncation::new(bound)?;
    let mut cells: Vec<Vec<(DegeneracyType, usize)>> = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let types = enumerate_d(n)?;
        let mut layer = Vec::new();
        for c in 0..x.count(n) {
            let tx = degeneracy_type_truncated(x, n, c);
            for s in types.iter().filter(|s| s.is_subset(&tx)) {
                layer.push((*s, c));
            }
        }
        cells.push(layer);
    }
    let index: Vec<HashMap<(DegeneracyType, usize), usize>> =
        cells.iter().map(|l| l.iter().enumerate().map(|(i, k)| (*k, i)).collect()).collect();
    let labels = (0..=bound)
        .map(|n| cells[n].iter().map(|(s, c)| format!("({s},{})", x.label(n, *c))).collect())
        .collect();
    let faces = (0..=bound)
        .map(|n| {
            cells[n]
                .iter()
                .map(|(s, c)| {
                    if n == 0 {
                        return Vec::new();
                    }
                    (0..=n).map(|i| index[n - 1][&(s.act(&OrdinalMap::face(n, i)), x.face(n, *c, i))]).collect()
                })
                .collect()
        })
        .collect();
    let degens = (0..=bound)
        .map(|n| {
            if n == bound {
                return Vec::new();
            }
            cells[n]
                .iter()
                .map(|(s, c)| (0..=n).map(|j| index[n + 1][&(s.act(&OrdinalMap::degeneracy(n, j)), x.degen(n, *c, j))]).collect())
                .collect()
        })
        .collect();
    let flags = cells.iter().map(|l| l.iter().map(|(s, _)| s.contains_max()).collect()).collect();
    let object = Arc::new(TruncatedSSet::from_tables(
        format!("𝕃({})", x.name()),
        bound,
        labels,
        faces,
        degens,
        Some(flags),
    )?);
    let eps = TruncMap::new(object.clone(), x.clone(), cells.iter().map(|l| l.iter().map(|k| k.1).collect()).collect())?;
    let to_d = TruncMap::new(
        object.clone(),
        d.trunc.clone(),
        cells.iter().map(|l| l.iter().map(|(s, _)| d.index_of(s).unwrap()).collect()).collect(),
    )?;
    Ok(Replacement { object, base: x.clone(), eps, to_d, d, cells, index })
}

/// [`cofibrant_replace`] for a kernel object.
pub fn cofibrant_replace_kernel(x: &Arc<FiniteSSet>, bound: usize) -> Result<(Replacement, Truncation)> {
    let t = Truncation::new(x.clone(), bound);
    Ok((cofibrant_replace(&t.trunc, bound)?, t))
}

impl Replacement {
    pub fn bound(&self) -> usize {
        self.object.bound()
    }

    pub fn index_of(&self, n: usize, s: &DegeneracyType, x: usize) -> Option<usize> {
        self.index.get(n).and_then(|m| m.get(&(*s, x)).copied())
    }

    /// The filler for a boundary problem against `ε` obtained by extending the
    /// type part of the boundary and keeping the prescribed cell of `X`.
    pub fn constructive_filler(&self, key: &ProblemKey) -> Result<Vec<usize>> {
        let n = key.shape.n;
        let top = (1usize << (n + 1)) - 2;
        let x = key.bottom[top];
        let s = if n == 0 {
            DegeneracyType::empty(0)
        } else {
            let b = Arc::new(boundary(n));
            let assign = key.top.iter().enumerate().map(|(c, &l)| self.to_d.apply(b.cell_dim(c), l)).collect();
            let f = KMap { source: b, target: self.d.trunc.clone(), assign };
            extend_boundary_to_d(&f, &self.d)?
        };
        let cell = self.index_of(n, &s, x).ok_or_else(|| {
            Error::Verification(format!("type {s} is not below the type of {}", self.base.label(n, x)))
        })?;
        let simplex = crate::sset::standard::simplex(n);
        Ok((0..simplex.len()).map(|c| self.object.act(n, cell, &simplex_face_op(&simplex, c))).collect())
    }

    /// Number of cells of `𝕃X` over each cell of `X` in dimension `n`.
    pub fn fibre_sizes(&self, n: usize) -> Vec<usize> {
        let mut sizes = vec![0; self.base.count(n)];
        for (_, x) in &self.cells[n] {
            sizes[*x] += 1;
        }
        sizes
    }

    /// JSON listing of the cells and `ε`; `cell_json` renders base cells.
    pub fn to_json(&self, cell_json: &dyn Fn(usize, usize) -> Value) -> Value {
        let mut dims = Map::new();
        let mut eps = Map::new();
        for (n, layer) in self.cells.iter().enumerate() {
            dims.insert(
                n.to_string(),
                Value::Array(layer.iter().map(|(s, x)| json!({"type": s, "cell": cell_json(n, *x)})).collect()),
            );
            eps.insert(n.to_string(), Value::Array(layer.iter().map(|(_, x)| cell_json(n, *x)).collect()));
        }
        json!({"name": self.object.name(), "bound": self.bound(), "dims": dims, "eps": eps})
    }
}

/// Whether two truncated objects agree cell for cell under the given
/// levelwise bijection, including faces and degeneracies.
pub fn is_isomorphic_via(a: &TruncatedSSet, b: &TruncatedSSet, levels: &[Vec<usize>]) -> bool {
    if a.bound() != b.bound() || levels.len() != a.bound() + 1 {
        return false;
    }
    let f = TruncMap { source: Arc::new(a.clone()), target: Arc::new(b.clone()), levels: levels.to_vec() };
    f.check().is_ok() && f.is_isomorphism()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::simplex;

    #[test]
    fn interval_replacement_counts() {
        let (r, _) = cofibrant_replace_kernel(&Arc::new(simplex(1)), 2).unwrap();
        assert_eq!(r.object.count(0), 2);
        assert_eq!(r.object.count(1), 5);
        r.object.check_identities().unwrap();
        assert!(r.object.flags_agree_with_tables());
    }
}
