//! Finite simplicial sets presented by their non-degenerate cells.
//!
//! A [`FiniteSSet`] lists non-degenerate cells per dimension together with
//! their faces, each face given in Eilenberg-Zilber normal form as a
//! [`CellRef`] (a surjective operator applied to a non-degenerate cell).
//! Every cell of the simplicial set is then uniquely a `CellRef`, and
//! degeneracy is decidable by looking at the operator.

mod json;
mod limits;
pub mod standard;

pub use json::{CellJson, FaceJson, MapJson, ObjectJson};
pub use limits::{
    coproduct, is_cofibration, product, pullback, pushout, subobject, subobject_inclusion, CofibrationWitness,
    PairObject, Pushout,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::delta::{compose_unchecked, enumerate_surjections, epi_mono_factor, OrdinalMap};
use crate::error::{Error, Result};

/// An arbitrary cell `op^*(cell)`, with `op` surjective and `cell` the index of a
/// non-degenerate cell of the ambient object.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CellRef {
    pub op: OrdinalMap,
    pub cell: usize,
}

impl CellRef {
    pub fn new(op: OrdinalMap, cell: usize) -> Self {
        CellRef { op, cell }
    }

    /// The non-degenerate cell `cell` of dimension `dim` itself.
    pub fn nondeg(cell: usize, dim: usize) -> Self {
        CellRef { op: OrdinalMap::identity(dim), cell }
    }

    pub fn dim(&self) -> usize {
        self.op.source_dim()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.op.is_identity()
    }
}

/// A finite simplicial set in Eilenberg-Zilber presentation.
#[derive(Clone)]
pub struct FiniteSSet {
    name: String,
    ids: Vec<String>,
    dims: Vec<usize>,
    faces: Vec<Vec<CellRef>>,
    by_dim: Vec<Vec<usize>>,
    lookup: HashMap<String, usize>,
}

impl fmt::Debug for FiniteSSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSSet({}, counts {:?})", self.name, self.counts())
    }
}

impl PartialEq for FiniteSSet {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.dims == other.dims && self.faces == other.faces
    }
}

/// Incremental construction of a [`FiniteSSet`]; faces refer to builder indices.
#[derive(Default, Clone)]
pub struct SSetBuilder {
    cells: Vec<(String, usize, Vec<CellRef>)>,
}

impl SSetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a non-degenerate cell and returns its builder index.
    pub fn add(&mut self, id: impl Into<String>, dim: usize, faces: Vec<CellRef>) -> usize {
        self.cells.push((id.into(), dim, faces));
        self.cells.len() - 1
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Sorts cells by dimension (stably) and checks the structural invariants.
    pub fn build(self, name: impl Into<String>) -> Result<FiniteSSet> {
        let n = self.cells.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.cells[i].1);
        let mut new_index = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut ids = Vec::with_capacity(n);
        let mut dims = Vec::with_capacity(n);
        let mut faces = Vec::with_capacity(n);
        let mut lookup = HashMap::with_capacity(n);
        for &old in &order {
            let (id, dim, fs) = &self.cells[old];
            if lookup.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::InvalidObject(format!("duplicate cell id `{id}`")));
            }
            ids.push(id.clone());
            dims.push(*dim);
            let mut mapped = Vec::with_capacity(fs.len());
            for f in fs {
                if f.cell >= n {
                    return Err(Error::InvalidObject(format!("face of `{id}` refers to a missing cell")));
                }
                mapped.push(CellRef { op: f.op.clone(), cell: new_index[f.cell] });
            }
            faces.push(mapped);
        }
        let top = dims.iter().copied().max().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); top];
        for (i, &d) in dims.iter().enumerate() {
            by_dim[d].push(i);
        }
        let x = FiniteSSet { name: name.into(), ids, dims, faces, by_dim, lookup };
        x.check_structure()?;
        Ok(x)
    }
}

impl FiniteSSet {
    pub fn empty(name: impl Into<String>) -> Self {
        SSetBuilder::new().build(name).expect("empty object is valid")
    }

    fn check_structure(&self) -> Result<()> {
        for c in 0..self.ids.len() {
            let n = self.dims[c];
            let expected = if n == 0 { 0 } else { n + 1 };
            if self.faces[c].len() != expected {
                return Err(Error::InvalidObject(format!(
                    "cell `{}` of dimension {n} has {} faces",
                    self.ids[c],
                    self.faces[c].len()
                )));
            }
            for (i, f) in self.faces[c].iter().enumerate() {
                if !f.op.is_surjective() {
                    return Err(Error::InvalidObject(format!(
                        "face d{i} of `{}` has non-surjective operator {:?}",
                        self.ids[c], f.op
                    )));
                }
                if f.op.source_dim() + 1 != n || f.op.target_dim() != self.dims[f.cell] {
                    return Err(Error::InvalidObject(format!(
                        "face d{i} of `{}` has mismatched dimensions",
                        self.ids[c]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Largest dimension of a non-degenerate cell (0 for the empty object).
    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    /// Number of non-degenerate cells per dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn cells_of_dim(&self, n: usize) -> &[usize] {
        self.by_dim.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn id(&self, cell: usize) -> &str {
        &self.ids[cell]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn cell_dim(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.lookup.get(id).copied()
    }

    pub fn faces(&self, cell: usize) -> &[CellRef] {
        &self.faces[cell]
    }

    pub fn nondeg(&self, cell: usize) -> CellRef {
        CellRef::nondeg(cell, self.dims[cell])
    }

    pub fn nondeg_by_id(&self, id: &str) -> Result<CellRef> {
        let c = self.index_of(id).ok_or_else(|| Error::UnknownCell(id.to_string()))?;
        Ok(self.nondeg(c))
    }

    pub fn describe(&self, x: &CellRef) -> String {
        if x.op.is_identity() {
            self.ids[x.cell].clone()
        } else {
            format!("{}·{}", x.op, self.ids[x.cell])
        }
    }

    /// Normal form of `θ^*(x)`.
    pub fn apply_operator(&self, x: &CellRef, theta: &OrdinalMap) -> Result<CellRef> {
        if theta.target_dim() != x.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), found: theta.target_dim() });
        }
        if x.cell >= self.len() || x.op.target_dim() != self.dims[x.cell] {
            return Err(Error::InvalidObject("cell reference does not belong to this object".into()));
        }
        Ok(self.act(x, theta))
    }

    pub(crate) fn act(&self, x: &CellRef, theta: &OrdinalMap) -> CellRef {
        let total = compose_unchecked(&x.op, theta);
        let (epi, mono) = epi_mono_factor(&total);
        let inner = self.act_injective(x.cell, &mono);
        CellRef { op: compose_unchecked(&inner.op, &epi), cell: inner.cell }
    }

    /// `μ^*(y)` for an injective `μ` and non-degenerate `y`, resolved through stored faces.
    fn act_injective(&self, y: usize, mono: &OrdinalMap) -> CellRef {
        match mono.first_missed() {
            None => CellRef::nondeg(y, self.dims[y]),
            Some(i) => {
                let n = mono.target_dim();
                // mono = δ^i ∘ rest
                let rest_vals = mono.values().iter().map(|&v| if v < i { v } else { v - 1 }).collect();
                let rest = OrdinalMap::from_parts(rest_vals, n - 1);
                self.act(&self.faces[y][i], &rest)
            }
        }
    }

    /// `d_i x`.
    pub fn face(&self, x: &CellRef, i: usize) -> CellRef {
        self.act(x, &OrdinalMap::face(x.dim(), i))
    }

    /// `s_j x`.
    pub fn degeneracy(&self, x: &CellRef, j: usize) -> CellRef {
        self.act(x, &OrdinalMap::degeneracy(x.dim(), j))
    }

    /// All cells of dimension `n`: non-degenerate ones first, then by decreasing
    /// source dimension, each block in cell order and lexicographic operator order.
    pub fn all_cells(&self, n: usize) -> Vec<CellRef> {
        let mut out = Vec::new();
        for k in (0..=n.min(self.dim())).rev() {
            if self.cells_of_dim(k).is_empty() {
                continue;
            }
            let sur = enumerate_surjections(n, k);
            for &y in self.cells_of_dim(k) {
                for s in &sur {
                    out.push(CellRef { op: s.clone(), cell: y });
                }
            }
        }
        out
    }

    /// Checks the simplicial identities on every non-degenerate cell.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for c in 0..self.len() {
            let n = self.dims[c];
            if n < 2 {
                continue;
            }
            let x = self.nondeg(c);
            for j in 1..=n {
                for i in 0..j {
                    let left = self.face(&self.face(&x, j), i);
                    let right = self.face(&self.face(&x, i), j - 1);
                    if left != right {
                        return Err(Violation {
                            cell: self.ids[c].clone(),
                            message: format!(
                                "d{i} d{j} = {} but d{} d{i} = {}",
                                self.describe(&left),
                                j - 1,
                                self.describe(&right)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The sub-object of non-degenerate cells of dimension at most `bound`.
    pub fn skeleton(&self, bound: usize) -> FiniteSSet {
        let keep: Vec<bool> = self.dims.iter().map(|&d| d <= bound).collect();
        subobject(self, &keep, format!("sk{bound}({})", self.name)).expect("skeleta are closed under faces").0
    }
}

/// First failed simplicial identity found by [`FiniteSSet::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub cell: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell `{}`: {}", self.cell, self.message)
    }
}

/// A simplicial map, determined by the images of the non-degenerate source cells.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<FiniteSSet>,
    pub target: Arc<FiniteSSet>,
    assign: Vec<CellRef>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign && *self.source == *other.source && *self.target == *other.target
    }
}

impl SimplicialMap {
    /// Builds a map and checks dimensions and naturality.
    pub fn new(source: Arc<FiniteSSet>, target: Arc<FiniteSSet>, assign: Vec<CellRef>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, assign)?;
        f.check_naturality()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<FiniteSSet>,
        target: Arc<FiniteSSet>,
        assign: Vec<CellRef>,
    ) -> Result<Self> {
        if assign.len() != source.len() {
            return Err(Error::InvalidMap("assignment does not cover the source".into()));
        }
        for (c, a) in assign.iter().enumerate() {
            if a.dim() != source.cell_dim(c) || a.cell >= target.len() || a.op.target_dim() != target.cell_dim(a.cell) {
                return Err(Error::InvalidMap(format!("image of `{}` has the wrong shape", source.id(c))));
            }
        }
        Ok(SimplicialMap { source, target, assign })
    }

    /// Builds a map from an id-keyed assignment.
    pub fn from_ids(
        source: Arc<FiniteSSet>,
        target: Arc<FiniteSSet>,
        assign: &[(&str, CellRef)],
    ) -> Result<Self> {
        let mut slots: Vec<Option<CellRef>> = vec![None; source.len()];
        for (id, r) in assign {
            let c = source.index_of(id).ok_or_else(|| Error::UnknownCell(id.to_string()))?;
            slots[c] = Some(r.clone());
        }
        let assign = slots
            .into_iter()
            .enumerate()
            .map(|(c, s)| s.ok_or_else(|| Error::InvalidMap(format!("no image for `{}`", source.id(c)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, assign)
    }

    pub fn identity(x: Arc<FiniteSSet>) -> Self {
        let assign = (0..x.len()).map(|c| x.nondeg(c)).collect();
        SimplicialMap { source: x.clone(), target: x, assign }
    }

    /// The map out of the empty object.
    pub fn from_empty(target: Arc<FiniteSSet>) -> Self {
        SimplicialMap { source: Arc::new(FiniteSSet::empty("∅")), target, assign: Vec::new() }
    }

    /// The map classifying a cell `x`, out of the standard simplex.
    pub fn from_cell(target: Arc<FiniteSSet>, x: &CellRef) -> Self {
        let simplex = Arc::new(standard::simplex(x.dim()));
        let assign = (0..simplex.len())
            .map(|c| target.act(x, &standard::simplex_face_op(&simplex, c)))
            .collect();
        SimplicialMap { source: simplex, target, assign }
    }

    /// The constant map to the unique vertex of `Δ[0]`.
    pub fn to_point(source: Arc<FiniteSSet>) -> Self {
        let point = Arc::new(standard::simplex(0));
        let assign = (0..source.len())
            .map(|c| CellRef::new(OrdinalMap::constant(source.cell_dim(c), 0, 0), 0))
            .collect();
        SimplicialMap { source, target: point, assign }
    }

    pub fn assignment(&self) -> &[CellRef] {
        &self.assign
    }

    pub fn image_of(&self, cell: usize) -> &CellRef {
        &self.assign[cell]
    }

    /// Image of an arbitrary source cell.
    pub fn apply(&self, x: &CellRef) -> CellRef {
        self.target.act(&self.assign[x.cell], &x.op)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SimplicialMap) -> Result<SimplicialMap> {
        if *first.target != *self.source {
            return Err(Error::CodomainMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source.name(),
                self.target.name(),
                first.source.name(),
                first.target.name()
            )));
        }
        let assign = first.assign.iter().map(|a| self.apply(a)).collect();
        Ok(SimplicialMap { source: first.source.clone(), target: self.target.clone(), assign })
    }

    pub fn check_naturality(&self) -> Result<()> {
        for c in 0..self.source.len() {
            let n = self.source.cell_dim(c);
            if n == 0 {
                continue;
            }
            let img = &self.assign[c];
            for i in 0..=n {
                let via_source = self.apply(&self.source.faces(c)[i]);
                let via_target = self.target.face(img, i);
                if via_source != via_target {
                    return Err(Error::InvalidMap(format!(
                        "d{i} of `{}` maps to {} but d{i} of its image is {}",
                        self.source.id(c),
                        self.target.describe(&via_source),
                        self.target.describe(&via_target)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Some non-degenerate cell sent to a degenerate cell, if any.
    pub fn first_collapsed(&self) -> Option<usize> {
        (0..self.source.len()).find(|&c| self.assign[c].is_degenerate())
    }

    /// Bijective on non-degenerate cells and never collapsing: an isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        if self.source.len() != self.target.len() || self.first_collapsed().is_some() {
            return false;
        }
        let mut hit = vec![false; self.target.len()];
        for a in &self.assign {
            if hit[a.cell] {
                return false;
            }
            hit[a.cell] = true;
        }
        true
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<SimplicialMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut assign = vec![CellRef::nondeg(0, 0); self.target.len()];
        for (c, a) in self.assign.iter().enumerate() {
            assign[a.cell] = self.source.nondeg(c);
        }
        Some(SimplicialMap { source: self.target.clone(), target: self.source.clone(), assign })
    }
}
