//! Standard simplices, boundaries, horns, the circle and nerves of finite groups.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CellRef, FiniteSSet, SSetBuilder, SimplicialMap};
use crate::delta::{epi_mono_factor, OrdinalMap};
use crate::error::{Error, Result};

/// Named standard objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StandardKind {
    Simplex { n: usize },
    Boundary { n: usize },
    Horn { n: usize, k: usize },
    Circle,
    /// Nerve of the cyclic group of the given order, keeping non-degenerate cells up to `truncate`.
    CyclicNerve { order: usize, truncate: usize },
}

pub fn standard_space(kind: &StandardKind) -> Result<FiniteSSet> {
    match *kind {
        StandardKind::Simplex { n } => Ok(simplex(n)),
        StandardKind::Boundary { n } => Ok(boundary(n)),
        StandardKind::Horn { n, k } => {
            if n == 0 || k > n {
                return Err(Error::InvalidParameters(format!("horn ({n},{k}) needs 0 <= k <= n, n >= 1")));
            }
            Ok(horn(n, k))
        }
        StandardKind::Circle => Ok(circle()),
        StandardKind::CyclicNerve { order, truncate } => {
            if order == 0 {
                return Err(Error::InvalidParameters("group order must be positive".into()));
            }
            Ok(Nerve::new(FiniteGroup::cyclic(order), truncate).object().as_ref().clone())
        }
    }
}

/// Identifier of the face of `Δ[n]` spanned by `vertices`.
pub fn face_id(vertices: &[usize]) -> String {
    if vertices.iter().all(|&v| v < 10) {
        vertices.iter().map(|v| v.to_string()).collect()
    } else {
        vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Inverse of [`face_id`].
pub fn vertices_of_id(id: &str) -> Option<Vec<usize>> {
    if id.contains(',') {
        id.split(',').map(|s| s.parse().ok()).collect()
    } else {
        id.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
    }
}

fn simplex_like(n: usize, name: String, keep: impl Fn(&[usize]) -> bool) -> FiniteSSet {
    let mut subsets: Vec<Vec<usize>> = (1u64..(1u64 << (n + 1)))
        .map(|mask| (0..=n).filter(|v| mask >> v & 1 == 1).collect::<Vec<_>>())
        .filter(|s| keep(s))
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<Vec<usize>, usize> = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut b = SSetBuilder::new();
    for s in &subsets {
        let d = s.len() - 1;
        let faces = if d == 0 {
            Vec::new()
        } else {
            (0..=d)
                .map(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    CellRef::nondeg(index[&f], d - 1)
                })
                .collect()
        };
        b.add(face_id(s), d, faces);
    }
    b.build(name).expect("faces of a simplex form a valid object")
}

/// The standard `n`-simplex `Δ[n]`.
pub fn simplex(n: usize) -> FiniteSSet {
    simplex_like(n, format!("Δ[{n}]"), |_| true)
}

/// The boundary `∂Δ[n]` (empty for `n = 0`).
pub fn boundary(n: usize) -> FiniteSSet {
    simplex_like(n, format!("∂Δ[{n}]"), |s| s.len() <= n)
}

/// The horn `Λ^k[n]`: all faces except the top cell and the face opposite `k`.
pub fn horn(n: usize, k: usize) -> FiniteSSet {
    assert!(n >= 1 && k <= n);
    simplex_like(n, format!("Λ{k}[{n}]"), |s| s.len() <= n && !(s.len() == n && !s.contains(&k)))
}

/// One vertex `v` and one edge `e` from `v` to `v`.
pub fn circle() -> FiniteSSet {
    let mut b = SSetBuilder::new();
    let v = b.add("v", 0, vec![]);
    b.add("e", 1, vec![CellRef::nondeg(v, 0), CellRef::nondeg(v, 0)]);
    b.build("S1").unwrap()
}

/// Inclusion of a sub-complex of `Δ[n]` built with matching face identifiers.
pub fn simplex_inclusion(sub: Arc<FiniteSSet>, n: usize) -> SimplicialMap {
    let full = Arc::new(simplex(n));
    let assign = (0..sub.len())
        .map(|c| full.nondeg_by_id(sub.id(c)).expect("sub-complex ids are faces of the simplex"))
        .collect();
    SimplicialMap::new(sub, full, assign).expect("face inclusions are simplicial")
}

pub fn boundary_inclusion(n: usize) -> SimplicialMap {
    simplex_inclusion(Arc::new(boundary(n)), n)
}

pub fn horn_inclusion(n: usize, k: usize) -> SimplicialMap {
    simplex_inclusion(Arc::new(horn(n, k)), n)
}

/// The injective operator `[k] -> [n]` of a non-degenerate face of a simplex-like object.
pub fn simplex_face_op(x: &FiniteSSet, cell: usize) -> OrdinalMap {
    let n = simplex_dim_of(x);
    let vs = vertices_of_id(x.id(cell)).expect("simplex-like identifiers");
    OrdinalMap::inclusion(&vs, n).expect("face identifiers are increasing")
}

fn simplex_dim_of(x: &FiniteSSet) -> usize {
    x.cells_of_dim(0)
        .iter()
        .filter_map(|&c| vertices_of_id(x.id(c)).and_then(|v| v.first().copied()))
        .max()
        .unwrap_or(0)
}

/// The cell of `Δ[n]` given by a monotone map `θ: [m] -> [n]`.
pub fn simplex_cell(simplex: &FiniteSSet, theta: &OrdinalMap) -> CellRef {
    let (epi, mono) = epi_mono_factor(theta);
    let c = simplex.index_of(&face_id(mono.values())).expect("every face exists in a simplex");
    CellRef::new(epi, c)
}

/// The monotone map `[m] -> [n]` represented by a cell of `Δ[n]`.
pub fn simplex_map(simplex: &FiniteSSet, n: usize, x: &CellRef) -> OrdinalMap {
    let vs = vertices_of_id(simplex.id(x.cell)).expect("simplex identifiers");
    let values = x.op.values().iter().map(|&i| vs[i]).collect();
    OrdinalMap::new(values, n).expect("monotone by construction")
}

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidParameters("malformed multiplication table".into()));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::InvalidParameters("element 0 is not an identity".into()));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidParameters("multiplication is not associative".into()));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == 0)
                .ok_or_else(|| Error::InvalidParameters(format!("element {a} has no inverse")))?;
        }
        Ok(FiniteGroup { table, inverse })
    }

    pub fn cyclic(order: usize) -> Self {
        let table = (0..order).map(|a| (0..order).map(|b| (a + b) % order).collect()).collect();
        Self::from_table(table).expect("cyclic groups are groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// The nerve of a finite group, keeping non-degenerate cells up to `truncate`.
///
/// An `n`-cell is a tuple `(g1, ..., gn)`; the edge from vertex `i` to `j`
/// carries `g(i+1) ... gj`.
#[derive(Clone, Debug)]
pub struct Nerve {
    group: FiniteGroup,
    truncate: usize,
    object: Arc<FiniteSSet>,
    index: HashMap<Vec<usize>, usize>,
}

fn tuple_id(t: &[usize]) -> String {
    if t.is_empty() {
        "*".to_string()
    } else {
        format!("({})", t.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl Nerve {
    pub fn new(group: FiniteGroup, truncate: usize) -> Self {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..truncate {
            let mut next = Vec::new();
            for t in &layer {
                for g in 1..group.order() {
                    let mut u = t.clone();
                    u.push(g);
                    next.push(u);
                }
            }
            tuples.extend(next.iter().cloned());
            layer = next;
        }
        let index: HashMap<Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut nerve = Nerve { group, truncate, object: Arc::new(FiniteSSet::empty("")), index };
        let mut b = SSetBuilder::new();
        for t in &tuples {
            let faces = if t.is_empty() {
                Vec::new()
            } else {
                (0..=t.len()).map(|i| nerve.cell_of(&nerve.face_tuple(t, i))).collect()
            };
            b.add(tuple_id(t), t.len(), faces);
        }
        let name = format!("N(Z/{})≤{truncate}", nerve.group.order());
        nerve.object = Arc::new(b.build(name).expect("nerve faces are valid"));
        nerve
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn truncation(&self) -> usize {
        self.truncate
    }

    pub fn object(&self) -> &Arc<FiniteSSet> {
        &self.object
    }

    pub fn face_tuple(&self, t: &[usize], i: usize) -> Vec<usize> {
        let n = t.len();
        let mut u = t.to_vec();
        if i == 0 {
            u.remove(0);
        } else if i == n {
            u.pop();
        } else {
            let merged = self.group.mul(t[i - 1], t[i]);
            u.splice(i - 1..=i, [merged]);
        }
        u
    }

    /// Normal form of an arbitrary tuple; identity entries are degeneracies.
    pub fn cell_of(&self, t: &[usize]) -> CellRef {
        let mut values = vec![0];
        let mut reduced = Vec::new();
        for &g in t {
            if g == 0 {
                values.push(*values.last().unwrap());
            } else {
                values.push(values.last().unwrap() + 1);
                reduced.push(g);
            }
        }
        let k = reduced.len();
        let c = *self.index.get(&reduced).expect("tuple within truncation");
        CellRef::new(OrdinalMap::from_parts(values, k), c)
    }

    pub fn tuple_of(&self, x: &CellRef) -> Vec<usize> {
        let reduced = self.tuple_of_nondeg(x.cell);
        let v = x.op.values();
        (1..v.len()).map(|i| if v[i] == v[i - 1] { 0 } else { reduced[v[i] - 1] }).collect()
    }

    fn tuple_of_nondeg(&self, c: usize) -> Vec<usize> {
        let id = self.object.id(c);
        if id == "*" {
            return Vec::new();
        }
        id.trim_matches(|ch| ch == '(' || ch == ')').split(',').map(|s| s.parse().unwrap()).collect()
    }

    /// Group element on the edge from vertex `i` to vertex `j` of a tuple.
    pub fn edge_value(&self, t: &[usize], i: usize, j: usize) -> usize {
        t[i..j].iter().fold(0, |acc, &g| self.group.mul(acc, g))
    }
}

/// The nerve of the codiscrete groupoid on `objects` objects, keeping
/// non-degenerate cells up to `truncate`. Cells are vertex sequences.
pub fn codiscrete(objects: usize, truncate: usize) -> FiniteSSet {
    let mut seqs: Vec<Vec<usize>> = (0..objects).map(|v| vec![v]).collect();
    let mut layer = seqs.clone();
    for _ in 0..truncate {
        let mut next = Vec::new();
        for s in &layer {
            for v in 0..objects {
                if v != *s.last().unwrap() {
                    let mut u = s.clone();
                    u.push(v);
                    next.push(u);
                }
            }
        }
        seqs.extend(next.iter().cloned());
        layer = next;
    }
    let index: HashMap<Vec<usize>, usize> = seqs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let normal = |s: &[usize]| {
        let mut values = vec![0];
        let mut reduced = vec![s[0]];
        for w in s.windows(2) {
            if w[0] == w[1] {
                values.push(*values.last().unwrap());
            } else {
                values.push(values.last().unwrap() + 1);
                reduced.push(w[1]);
            }
        }
        let k = reduced.len() - 1;
        CellRef::new(OrdinalMap::from_parts(values, k), index[&reduced])
    };
    let mut b = SSetBuilder::new();
    for s in &seqs {
        let n = s.len() - 1;
        let faces = if n == 0 {
            Vec::new()
        } else {
            (0..=n)
                .map(|i| {
                    let mut u = s.clone();
                    u.remove(i);
                    normal(&u)
                })
                .collect()
        };
        b.add(s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(">"), n, faces);
    }
    b.build(format!("E{objects}≤{truncate}")).expect("codiscrete nerve is valid")
}
