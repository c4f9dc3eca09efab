//! Simplicial sets given explicitly up to a dimension bound.
//!
//! A [`TruncatedSSet`] lists every cell (degenerate or not) in dimensions
//! `0..=bound` together with all face and degeneracy maps. Infinite objects
//! such as exponentials, dependent products and the cofibrant replacement
//! are materialized this way; finite kernel objects are truncated through
//! [`Truncation`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::delta::OrdinalMap;
use crate::error::{Error, Result};
use crate::sset::{CellRef, FiniteSSet, SSetBuilder, SimplicialMap};

pub struct TruncatedSSet {
    name: String,
    bound: usize,
    labels: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
    degens: Vec<Vec<Vec<usize>>>,
    degenerate: Vec<Vec<bool>>,
    face_index: OnceLock<Vec<HashMap<Vec<usize>, Vec<usize>>>>,
}

impl fmt::Debug for TruncatedSSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSSet({}, bound {}, counts {:?})", self.name, self.bound, self.counts())
    }
}

impl Clone for TruncatedSSet {
    fn clone(&self) -> Self {
        TruncatedSSet {
            name: self.name.clone(),
            bound: self.bound,
            labels: self.labels.clone(),
            faces: self.faces.clone(),
            degens: self.degens.clone(),
            degenerate: self.degenerate.clone(),
            face_index: OnceLock::new(),
        }
    }
}

impl PartialEq for TruncatedSSet {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.faces == other.faces && self.degens == other.degens
    }
}

impl TruncatedSSet {
    /// Assembles an object from explicit face and degeneracy tables.
    ///
    /// `faces[n][c]` has `n + 1` entries for `n >= 1` and `degens[n][c]` has
    /// `n + 1` entries for `n < bound`. Degeneracy flags are derived from the
    /// tables unless given.
    pub fn from_tables(
        name: impl Into<String>,
        bound: usize,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
        flags: Option<Vec<Vec<bool>>>,
    ) -> Result<Self> {
        if labels.len() != bound + 1 || faces.len() != bound + 1 || degens.len() != bound + 1 {
            return Err(Error::InvalidObject("tables do not match the bound".into()));
        }
        let mut t = TruncatedSSet {
            name: name.into(),
            bound,
            labels,
            faces,
            degens,
            degenerate: Vec::new(),
            face_index: OnceLock::new(),
        };
        t.check_shapes()?;
        t.degenerate = match flags {
            Some(f) => f,
            None => (0..=bound).map(|n| (0..t.count(n)).map(|c| t.derived_degenerate(n, c)).collect()).collect(),
        };
        Ok(t)
    }

    fn check_shapes(&self) -> Result<()> {
        for n in 0..=self.bound {
            let count = self.labels[n].len();
            if self.faces[n].len() != count || (n < self.bound && self.degens[n].len() != count) {
                return Err(Error::InvalidObject(format!("dimension {n}: table sizes disagree")));
            }
            for c in 0..count {
                if n > 0 {
                    let fs = &self.faces[n][c];
                    if fs.len() != n + 1 || fs.iter().any(|&f| f >= self.labels[n - 1].len()) {
                        return Err(Error::InvalidObject(format!("bad faces for {}", self.labels[n][c])));
                    }
                }
                if n < self.bound {
                    let ds = &self.degens[n][c];
                    if ds.len() != n + 1 || ds.iter().any(|&d| d >= self.labels[n + 1].len()) {
                        return Err(Error::InvalidObject(format!("bad degeneracies for {}", self.labels[n][c])));
                    }
                }
            }
        }
        Ok(())
    }

    fn derived_degenerate(&self, n: usize, c: usize) -> bool {
        n > 0 && (0..n).any(|j| self.degens[n - 1][self.faces[n][c][j]][j] == c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn count(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.bound).map(|n| self.count(n)).collect()
    }

    /// Number of non-degenerate cells per dimension.
    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        self.degenerate.iter().map(|d| d.iter().filter(|&&b| !b).count()).collect()
    }

    pub fn label(&self, n: usize, c: usize) -> &str {
        &self.labels[n][c]
    }

    pub fn face(&self, n: usize, c: usize, i: usize) -> usize {
        self.faces[n][c][i]
    }

    pub fn faces_of(&self, n: usize, c: usize) -> &[usize] {
        &self.faces[n][c]
    }

    pub fn degen(&self, n: usize, c: usize, j: usize) -> usize {
        self.degens[n][c][j]
    }

    pub fn is_degenerate(&self, n: usize, c: usize) -> bool {
        self.degenerate[n][c]
    }

    /// Degeneracy flags recomputed from the tables (the `s_j d_j` test).
    pub fn flags_agree_with_tables(&self) -> bool {
        (0..=self.bound).all(|n| (0..self.count(n)).all(|c| self.degenerate[n][c] == self.derived_degenerate(n, c)))
    }

    /// `θ^*(c)` for `θ: [m] -> [n]`, `m <= bound`.
    pub fn act(&self, n: usize, c: usize, theta: &OrdinalMap) -> usize {
        debug_assert_eq!(theta.target_dim(), n);
        let m = theta.source_dim();
        if let Some(j) = theta.first_repeat() {
            let mut vals = theta.values().to_vec();
            vals.remove(j + 1);
            let rest = OrdinalMap::from_parts(vals, n);
            let inner = self.act(n, c, &rest);
            return self.degens[m - 1][inner][j];
        }
        if let Some(i) = theta.first_missed() {
            let vals = theta.values().iter().map(|&v| if v < i { v } else { v - 1 }).collect();
            let rest = OrdinalMap::from_parts(vals, n - 1);
            return self.act(n - 1, self.faces[n][c][i], &rest);
        }
        c
    }

    /// Cells of dimension `n >= 1` with the given face tuple.
    pub fn cells_with_faces(&self, n: usize, faces: &[usize]) -> &[usize] {
        let idx = self.face_index.get_or_init(|| {
            (0..=self.bound)
                .map(|n| {
                    let mut m: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
                    if n > 0 {
                        for (c, fs) in self.faces[n].iter().enumerate() {
                            m.entry(fs.clone()).or_default().push(c);
                        }
                    }
                    m
                })
                .collect()
        });
        idx[n].get(faces).map_or(&[], Vec::as_slice)
    }

    /// Checks all simplicial identities within the bound.
    pub fn check_identities(&self) -> Result<()> {
        let err = |n: usize, c: usize, what: &str| {
            Err(Error::InvalidObject(format!("{what} fails on {} (dim {n})", self.labels[n][c])))
        };
        for n in 0..=self.bound {
            for c in 0..self.count(n) {
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            if self.faces[n - 1][self.faces[n][c][j]][i] != self.faces[n - 1][self.faces[n][c][i]][j - 1] {
                                return err(n, c, "d_i d_j = d_{j-1} d_i");
                            }
                        }
                    }
                }
                if n < self.bound {
                    for j in 0..=n {
                        let s = self.degens[n][c][j];
                        for i in 0..=n + 1 {
                            let left = self.faces[n + 1][s][i];
                            let ok = if i == j || i == j + 1 {
                                left == c
                            } else if i < j {
                                left == self.degens[n - 1][self.faces[n][c][i]][j - 1]
                            } else {
                                left == self.degens[n - 1][self.faces[n][c][i - 1]][j]
                            };
                            if !ok {
                                return err(n, c, "d_i s_j");
                            }
                        }
                    }
                }
                if n + 1 < self.bound {
                    for j in 0..=n {
                        for i in 0..=j {
                            let a = self.degens[n + 1][self.degens[n][c][j]][i];
                            let b = self.degens[n + 1][self.degens[n][c][i]][j + 1];
                            if a != b {
                                return err(n, c, "s_i s_j = s_{j+1} s_i");
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The terminal object truncated at `bound`.
    pub fn terminal(bound: usize) -> Self {
        let labels = (0..=bound).map(|_| vec!["*".to_string()]).collect();
        let faces = (0..=bound).map(|n| vec![if n == 0 { vec![] } else { vec![0; n + 1] }]).collect();
        let degens = (0..=bound).map(|n| if n < bound { vec![vec![0; n + 1]] } else { vec![] }).collect();
        Self::from_tables("1", bound, labels, faces, degens, None).unwrap()
    }

    /// The same object cut down to a smaller bound.
    pub fn restrict_bound(&self, bound: usize) -> TruncatedSSet {
        assert!(bound <= self.bound);
        let mut degens = self.degens[..=bound].to_vec();
        degens[bound] = Vec::new();
        TruncatedSSet {
            name: self.name.clone(),
            bound,
            labels: self.labels[..=bound].to_vec(),
            faces: self.faces[..=bound].to_vec(),
            degens,
            degenerate: self.degenerate[..=bound].to_vec(),
            face_index: OnceLock::new(),
        }
    }

    /// Normal form of every cell relative to the non-degenerate ones: for each
    /// cell a surjection and a non-degenerate cell. Requires exact flags.
    pub fn normal_forms(&self) -> Vec<Vec<(OrdinalMap, usize)>> {
        let mut out: Vec<Vec<(OrdinalMap, usize)>> = Vec::with_capacity(self.bound + 1);
        for n in 0..=self.bound {
            let mut layer = Vec::with_capacity(self.count(n));
            for c in 0..self.count(n) {
                if !self.degenerate[n][c] {
                    layer.push((OrdinalMap::identity(n), c));
                    continue;
                }
                let j = (0..n)
                    .find(|&j| self.degens[n - 1][self.faces[n][c][j]][j] == c)
                    .expect("degenerate cells lie in the image of some s_j");
                let (op, y) = &out[n - 1][self.faces[n][c][j]];
                let op = crate::delta::compose_unchecked(op, &OrdinalMap::degeneracy(n - 1, j));
                layer.push((op, *y));
            }
            out.push(layer);
        }
        out
    }

    /// Quotient by the congruence generated by `relations` (pairs of cells in
    /// the same dimension), presented as a kernel object. Every cell is sent to
    /// its normal form in the quotient.
    pub fn quotient(&self, relations: &[(usize, usize, usize)], name: impl Into<String>) -> Result<TQuotient> {
        let mut uf: Vec<UnionFind> = (0..=self.bound).map(|n| UnionFind::new(self.count(n))).collect();
        for &(n, a, b) in relations {
            uf[n].union(a, b);
        }
        // close under all face and degeneracy operators
        loop {
            let mut changed = false;
            for n in 0..=self.bound {
                for c in 0..self.count(n) {
                    let r = uf[n].find(c);
                    if r == c {
                        continue;
                    }
                    if n > 0 {
                        for i in 0..=n {
                            changed |= uf[n - 1].union(self.faces[n][c][i], self.faces[n][r][i]);
                        }
                    }
                    if n < self.bound {
                        for j in 0..=n {
                            changed |= uf[n + 1].union(self.degens[n][c][j], self.degens[n][r][j]);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let roots: Vec<Vec<usize>> = (0..=self.bound).map(|n| (0..self.count(n)).map(|c| uf[n].find(c)).collect()).collect();
        // class degeneracy and normal forms, per root
        let mut nf: Vec<HashMap<usize, (OrdinalMap, usize)>> = vec![HashMap::new(); self.bound + 1];
        let mut nondeg: Vec<Vec<usize>> = vec![Vec::new(); self.bound + 1];
        for n in 0..=self.bound {
            for c in 0..self.count(n) {
                let r = roots[n][c];
                if nf[n].contains_key(&r) {
                    continue;
                }
                let j = if n == 0 {
                    None
                } else {
                    (0..n).find(|&j| roots[n][self.degens[n - 1][self.faces[n][r][j]][j]] == r)
                };
                match j {
                    None => {
                        nondeg[n].push(r);
                        nf[n].insert(r, (OrdinalMap::identity(n), r));
                    }
                    Some(j) => {
                        let fr = roots[n - 1][self.faces[n][r][j]];
                        let (op, y) = nf[n - 1][&fr].clone();
                        let op = crate::delta::compose_unchecked(&op, &OrdinalMap::degeneracy(n - 1, j));
                        nf[n].insert(r, (op, y));
                    }
                }
            }
        }
        // representatives and identifiers
        let mut b = SSetBuilder::new();
        let mut kernel_index: Vec<HashMap<usize, usize>> = vec![HashMap::new(); self.bound + 1];
        let mut used: std::collections::HashSet<String> = std::collections::HashSet::new();
        let mut rep_of: Vec<HashMap<usize, usize>> = vec![HashMap::new(); self.bound + 1];
        for n in 0..=self.bound {
            for c in 0..self.count(n) {
                let r = roots[n][c];
                if !self.degenerate[n][c] && !rep_of[n].contains_key(&r) {
                    rep_of[n].insert(r, c);
                }
            }
        }
        for n in 0..=self.bound {
            for &r in &nondeg[n] {
                let rep = rep_of[n].get(&r).copied().unwrap_or(r);
                let mut id = self.labels[n][rep].clone();
                while !used.insert(id.clone()) {
                    id.push('\'');
                }
                let faces = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| {
                            let fr = roots[n - 1][self.faces[n][r][i]];
                            let (op, y) = &nf[n - 1][&fr];
                            CellRef::new(op.clone(), kernel_index[op.target_dim()][y])
                        })
                        .collect()
                };
                let k = b.add(id, n, faces);
                kernel_index[n].insert(r, k);
            }
        }
        let object = Arc::new(b.build(name)?);
        let class_nf = (0..=self.bound)
            .map(|n| {
                (0..self.count(n))
                    .map(|c| {
                        let (op, y) = &nf[n][&roots[n][c]];
                        CellRef::new(op.clone(), kernel_index[op.target_dim()][y])
                    })
                    .collect()
            })
            .collect();
        Ok(TQuotient { object, class_nf })
    }

    /// The kernel presentation of the non-degenerate cells within the bound.
    pub fn to_kernel(&self, name: impl Into<String>) -> Result<TQuotient> {
        self.quotient(&[], name)
    }
}

/// Result of [`TruncatedSSet::quotient`].
#[derive(Clone, Debug)]
pub struct TQuotient {
    pub object: Arc<FiniteSSet>,
    /// `class_nf[n][c]`: normal form in `object` of the class of cell `c`.
    pub class_nf: Vec<Vec<CellRef>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges two classes keeping the smaller root; reports whether they differed.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// A kernel object together with its truncation and the correspondence
/// between truncated cell indices and normal forms.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub kernel: Arc<FiniteSSet>,
    pub trunc: Arc<TruncatedSSet>,
    refs: Vec<Vec<CellRef>>,
    index: Vec<HashMap<CellRef, usize>>,
}

impl Truncation {
    pub fn new(kernel: Arc<FiniteSSet>, bound: usize) -> Self {
        let refs: Vec<Vec<CellRef>> = (0..=bound).map(|n| kernel.all_cells(n)).collect();
        let index: Vec<HashMap<CellRef, usize>> = refs
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect())
            .collect();
        let labels = refs.iter().map(|layer| layer.iter().map(|r| kernel.describe(r)).collect()).collect();
        let faces = (0..=bound)
            .map(|n| {
                refs[n]
                    .iter()
                    .map(|r| if n == 0 { Vec::new() } else { (0..=n).map(|i| index[n - 1][&kernel.face(r, i)]).collect() })
                    .collect()
            })
            .collect();
        let degens = (0..=bound)
            .map(|n| {
                if n == bound {
                    return Vec::new();
                }
                refs[n]
                    .iter()
                    .map(|r| (0..=n).map(|j| index[n + 1][&kernel.degeneracy(r, j)]).collect())
                    .collect()
            })
            .collect();
        let flags = refs.iter().map(|layer| layer.iter().map(CellRef::is_degenerate).collect()).collect();
        let trunc = TruncatedSSet::from_tables(kernel.name().to_string(), bound, labels, faces, degens, Some(flags))
            .expect("kernel truncations are well formed");
        Truncation { kernel, trunc: Arc::new(trunc), refs, index }
    }

    pub fn bound(&self) -> usize {
        self.trunc.bound()
    }

    pub fn index_of(&self, x: &CellRef) -> usize {
        self.index[x.dim()][x]
    }

    pub fn try_index_of(&self, x: &CellRef) -> Option<usize> {
        self.index.get(x.dim()).and_then(|m| m.get(x).copied())
    }

    pub fn cell_ref(&self, n: usize, c: usize) -> &CellRef {
        &self.refs[n][c]
    }

    /// Index of a non-degenerate kernel cell.
    pub fn nondeg_index(&self, cell: usize) -> usize {
        self.index_of(&self.kernel.nondeg(cell))
    }
}

/// A map between truncated objects, given levelwise.
#[derive(Clone, Debug)]
pub struct TruncMap {
    pub source: Arc<TruncatedSSet>,
    pub target: Arc<TruncatedSSet>,
    pub levels: Vec<Vec<usize>>,
}

impl PartialEq for TruncMap {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

impl TruncMap {
    pub fn new(source: Arc<TruncatedSSet>, target: Arc<TruncatedSSet>, levels: Vec<Vec<usize>>) -> Result<Self> {
        let f = TruncMap { source, target, levels };
        f.check()?;
        Ok(f)
    }

    pub fn bound(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn identity(x: Arc<TruncatedSSet>) -> Self {
        let levels = (0..=x.bound()).map(|n| (0..x.count(n)).collect()).collect();
        TruncMap { source: x.clone(), target: x, levels }
    }

    /// Checks shapes and compatibility with faces and degeneracies.
    pub fn check(&self) -> Result<()> {
        let b = self.source.bound();
        if self.target.bound() < b || self.levels.len() != b + 1 {
            return Err(Error::InvalidMap("bounds do not match".into()));
        }
        for n in 0..=b {
            if self.levels[n].len() != self.source.count(n) || self.levels[n].iter().any(|&t| t >= self.target.count(n)) {
                return Err(Error::InvalidMap(format!("dimension {n}: malformed level")));
            }
            for c in 0..self.source.count(n) {
                let img = self.levels[n][c];
                if n > 0 {
                    for i in 0..=n {
                        if self.levels[n - 1][self.source.face(n, c, i)] != self.target.face(n, img, i) {
                            return Err(Error::InvalidMap(format!(
                                "d{i} not preserved at {}",
                                self.source.label(n, c)
                            )));
                        }
                    }
                }
                if n < b {
                    for j in 0..=n {
                        if self.levels[n + 1][self.source.degen(n, c, j)] != self.target.degen(n, img, j) {
                            return Err(Error::InvalidMap(format!(
                                "s{j} not preserved at {}",
                                self.source.label(n, c)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, n: usize, c: usize) -> usize {
        self.levels[n][c]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &TruncMap) -> TruncMap {
        let levels = first
            .levels
            .iter()
            .enumerate()
            .map(|(n, layer)| layer.iter().map(|&c| self.levels[n][c]).collect())
            .collect();
        TruncMap { source: first.source.clone(), target: self.target.clone(), levels }
    }

    pub fn is_injective(&self) -> bool {
        self.levels.iter().enumerate().all(|(n, layer)| {
            let mut seen = vec![false; self.target.count(n)];
            layer.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.levels.iter().enumerate().all(|(n, layer)| {
            let mut seen = vec![false; self.target.count(n)];
            for &t in layer {
                seen[t] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// First pair of distinct cells with the same image, if any.
    pub fn first_collision(&self) -> Option<(usize, usize, usize)> {
        for (n, layer) in self.levels.iter().enumerate() {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            for (c, &t) in layer.iter().enumerate() {
                if let Some(&d) = seen.get(&t) {
                    return Some((n, d, c));
                }
                seen.insert(t, c);
            }
        }
        None
    }

    pub fn restrict_bound(&self, bound: usize) -> TruncMap {
        TruncMap {
            source: Arc::new(self.source.restrict_bound(bound)),
            target: Arc::new(self.target.restrict_bound(bound.min(self.target.bound()))),
            levels: self.levels[..=bound].to_vec(),
        }
    }
}

/// A map from a kernel object into a truncated object, determined on
/// non-degenerate source cells.
#[derive(Clone, Debug)]
pub struct KMap {
    pub source: Arc<FiniteSSet>,
    pub target: Arc<TruncatedSSet>,
    pub assign: Vec<usize>,
}

impl PartialEq for KMap {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign
    }
}

impl KMap {
    pub fn new(source: Arc<FiniteSSet>, target: Arc<TruncatedSSet>, assign: Vec<usize>) -> Result<Self> {
        let f = KMap { source, target, assign };
        f.check()?;
        Ok(f)
    }

    pub fn check(&self) -> Result<()> {
        if self.assign.len() != self.source.len() {
            return Err(Error::InvalidMap("assignment does not cover the source".into()));
        }
        if !self.source.is_empty() && self.source.dim() > self.target.bound() {
            return Err(Error::ResourceBound(format!(
                "source dimension {} exceeds target bound {}",
                self.source.dim(),
                self.target.bound()
            )));
        }
        for c in 0..self.source.len() {
            let n = self.source.cell_dim(c);
            if self.assign[c] >= self.target.count(n) {
                return Err(Error::InvalidMap(format!("image of `{}` out of range", self.source.id(c))));
            }
            if n > 0 {
                for i in 0..=n {
                    if self.eval(&self.source.faces(c)[i]) != self.target.face(n, self.assign[c], i) {
                        return Err(Error::InvalidMap(format!("d{i} not preserved at `{}`", self.source.id(c))));
                    }
                }
            }
        }
        Ok(())
    }

    /// Image of an arbitrary source cell (its dimension must be within the target bound).
    pub fn eval(&self, x: &CellRef) -> usize {
        let k = self.source.cell_dim(x.cell);
        self.target.act(k, self.assign[x.cell], &x.op)
    }

    /// The levelwise map on truncations.
    pub fn levels(&self, source: &Truncation) -> TruncMap {
        let bound = source.bound().min(self.target.bound());
        let levels = (0..=bound)
            .map(|n| (0..source.trunc.count(n)).map(|c| self.eval(source.cell_ref(n, c))).collect())
            .collect();
        TruncMap {
            source: Arc::new(source.trunc.restrict_bound(bound)),
            target: self.target.clone(),
            levels,
        }
    }

    /// `g ∘ self` for a levelwise map `g`.
    pub fn then(&self, g: &TruncMap) -> KMap {
        let assign = (0..self.source.len())
            .map(|c| g.apply(self.source.cell_dim(c), self.assign[c]))
            .collect();
        KMap { source: self.source.clone(), target: g.target.clone(), assign }
    }

    /// `self ∘ f` for a kernel map `f`.
    pub fn after(&self, f: &SimplicialMap) -> KMap {
        let assign = f.assignment().iter().map(|a| self.eval(a)).collect();
        KMap { source: f.source.clone(), target: self.target.clone(), assign }
    }
}

impl SimplicialMap {
    /// The same map, landing in a truncation of its target.
    pub fn to_kmap(&self, target: &Truncation) -> KMap {
        let assign = self.assignment().iter().map(|a| target.index_of(a)).collect();
        KMap { source: self.source.clone(), target: target.trunc.clone(), assign }
    }

    /// The levelwise map between truncations.
    pub fn truncate(&self, source: &Truncation, target: &Truncation) -> TruncMap {
        let levels = (0..=source.bound())
            .map(|n| (0..source.trunc.count(n)).map(|c| target.index_of(&self.apply(source.cell_ref(n, c)))).collect())
            .collect();
        TruncMap { source: source.trunc.clone(), target: target.trunc.clone(), levels }
    }
}

/// Levelwise pairs with equal images in a common codomain, with projections.
#[derive(Clone, Debug)]
pub struct TPullback {
    pub object: Arc<TruncatedSSet>,
    pub left: TruncMap,
    pub right: TruncMap,
    pub pairs: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
}

impl TPullback {
    pub fn index_of(&self, n: usize, a: usize, b: usize) -> Option<usize> {
        self.index[n].get(&(a, b)).copied()
    }

    /// The levelwise pairing of two maps out of a common source.
    pub fn pairing(&self, u: &TruncMap, v: &TruncMap) -> Result<TruncMap> {
        let bound = u.bound().min(v.bound()).min(self.object.bound());
        let levels = (0..=bound)
            .map(|n| {
                (0..u.source.count(n))
                    .map(|c| {
                        self.index_of(n, u.apply(n, c), v.apply(n, c))
                            .ok_or_else(|| Error::CodomainMismatch("pair leaves the fibre product".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncMap { source: u.source.clone(), target: self.object.clone(), levels })
    }
}

/// Fibre product of truncated objects (product when `f`, `g` map to the terminal object).
pub fn tpullback(f: &TruncMap, g: &TruncMap, name: impl Into<String>) -> TPullback {
    let bound = f.bound().min(g.bound());
    let a = &f.source;
    let b = &g.source;
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::with_capacity(bound + 1);
    let mut index: Vec<HashMap<(usize, usize), usize>> = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
        for y in 0..b.count(n) {
            by_image.entry(g.apply(n, y)).or_default().push(y);
        }
        let mut layer = Vec::new();
        for x in 0..a.count(n) {
            if let Some(ys) = by_image.get(&f.apply(n, x)) {
                for &y in ys {
                    layer.push((x, y));
                }
            }
        }
        index.push(layer.iter().enumerate().map(|(i, &p)| (p, i)).collect());
        pairs.push(layer);
    }
    let labels = (0..=bound)
        .map(|n| pairs[n].iter().map(|&(x, y)| format!("({},{})", a.label(n, x), b.label(n, y))).collect())
        .collect();
    let faces = (0..=bound)
        .map(|n| {
            pairs[n]
                .iter()
                .map(|&(x, y)| {
                    if n == 0 {
                        Vec::new()
                    } else {
                        (0..=n).map(|i| index[n - 1][&(a.face(n, x, i), b.face(n, y, i))]).collect()
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
            pairs[n]
                .iter()
                .map(|&(x, y)| (0..=n).map(|j| index[n + 1][&(a.degen(n, x, j), b.degen(n, y, j))]).collect())
                .collect()
        })
        .collect();
    let object = Arc::new(
        TruncatedSSet::from_tables(name, bound, labels, faces, degens, None).expect("fibre products are well formed"),
    );
    let left = TruncMap {
        source: object.clone(),
        target: a.clone(),
        levels: pairs.iter().map(|l| l.iter().map(|p| p.0).collect()).collect(),
    };
    let right = TruncMap {
        source: object.clone(),
        target: b.clone(),
        levels: pairs.iter().map(|l| l.iter().map(|p| p.1).collect()).collect(),
    };
    TPullback { object, left, right, pairs, index }
}

/// The unique map to the terminal object.
pub fn to_terminal(x: &Arc<TruncatedSSet>) -> TruncMap {
    let t = Arc::new(TruncatedSSet::terminal(x.bound()));
    let levels = (0..=x.bound()).map(|n| vec![0; x.count(n)]).collect();
    TruncMap { source: x.clone(), target: t, levels }
}

/// Levelwise product.
pub fn tproduct(a: &Arc<TruncatedSSet>, b: &Arc<TruncatedSSet>) -> TPullback {
    let bound = a.bound().min(b.bound());
    let fa = to_terminal(&Arc::new(a.restrict_bound(bound)));
    let fb = to_terminal(&Arc::new(b.restrict_bound(bound)));
    let mut p = tpullback(&fa, &fb.clone(), format!("{}×{}", a.name(), b.name()));
    // keep the original objects as projection targets
    p.left.target = a.clone();
    p.right.target = b.clone();
    p
}

/// Coproduct of truncated objects with its two injections.
pub fn tcoproduct(a: &Arc<TruncatedSSet>, b: &Arc<TruncatedSSet>) -> (Arc<TruncatedSSet>, TruncMap, TruncMap) {
    let bound = a.bound().min(b.bound());
    let off: Vec<usize> = (0..=bound).map(|n| a.count(n)).collect();
    let labels = (0..=bound)
        .map(|n| {
            (0..a.count(n))
                .map(|c| a.label(n, c).to_string())
                .chain((0..b.count(n)).map(|c| b.label(n, c).to_string()))
                .collect()
        })
        .collect();
    let faces = (0..=bound)
        .map(|n| {
            (0..a.count(n))
                .map(|c| if n == 0 { vec![] } else { a.faces_of(n, c).to_vec() })
                .chain((0..b.count(n)).map(|c| {
                    if n == 0 {
                        vec![]
                    } else {
                        b.faces_of(n, c).iter().map(|&f| f + off[n - 1]).collect()
                    }
                }))
                .collect()
        })
        .collect();
    let degens = (0..=bound)
        .map(|n| {
            if n == bound {
                return Vec::new();
            }
            (0..a.count(n))
                .map(|c| (0..=n).map(|j| a.degen(n, c, j)).collect())
                .chain((0..b.count(n)).map(|c| (0..=n).map(|j| b.degen(n, c, j) + off[n + 1]).collect()))
                .collect()
        })
        .collect();
    let flags = (0..=bound)
        .map(|n| {
            (0..a.count(n))
                .map(|c| a.is_degenerate(n, c))
                .chain((0..b.count(n)).map(|c| b.is_degenerate(n, c)))
                .collect()
        })
        .collect();
    let obj = Arc::new(
        TruncatedSSet::from_tables(format!("{}⊔{}", a.name(), b.name()), bound, labels, faces, degens, Some(flags))
            .expect("coproducts are well formed"),
    );
    let inl = TruncMap {
        source: Arc::new(a.restrict_bound(bound)),
        target: obj.clone(),
        levels: (0..=bound).map(|n| (0..a.count(n)).collect()).collect(),
    };
    let inr = TruncMap {
        source: Arc::new(b.restrict_bound(bound)),
        target: obj.clone(),
        levels: (0..=bound).map(|n| (0..b.count(n)).map(|c| c + off[n]).collect()).collect(),
    };
    (obj, inl, inr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::{circle, simplex};

    #[test]
    fn truncation_of_simplex() {
        let t = Truncation::new(Arc::new(simplex(2)), 3);
        assert_eq!(t.trunc.counts(), vec![3, 6, 10, 15]);
        assert_eq!(t.trunc.nondegenerate_counts(), vec![3, 3, 1, 0]);
        t.trunc.check_identities().unwrap();
        assert!(t.trunc.flags_agree_with_tables());
    }

    #[test]
    fn kernel_round_trip() {
        let x = Arc::new(circle());
        let t = Truncation::new(x.clone(), 2);
        let q = t.trunc.to_kernel("S1").unwrap();
        assert_eq!(q.object.counts(), x.counts());
        q.object.validate().unwrap();
    }

    #[test]
    fn levelwise_product_counts() {
        let t = Truncation::new(Arc::new(simplex(1)), 3);
        let p = tproduct(&t.trunc, &t.trunc);
        p.object.check_identities().unwrap();
        assert_eq!(p.object.nondegenerate_counts(), vec![4, 5, 2, 0]);
    }
}
