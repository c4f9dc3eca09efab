//! Oracles computed without the library's normal forms or searches.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ssetkit::delta::{compose, enumerate_monotone, OrdinalMap};
use ssetkit::sset::standard::simplex;
use ssetkit::sset::{coproduct, CellRef, FiniteSSet, SimplicialMap};

/// Monotone maps `[m] -> [n]` as value lists.
pub fn monotone(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + 1);
    fn rec(m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            rec(m, n, v, cur, out);
            cur.pop();
        }
    }
    rec(m, n, 0, &mut cur, &mut out);
    out
}

fn codegeneracy(k: usize, j: usize) -> Vec<usize> {
    (0..=k).map(|v| if v > j { v - 1 } else { v }).collect()
}

fn after(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&v| g[v]).collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
        true
    }
}

/// Degeneracy types of the `n`-cells of every quotient of `Δ[n]` reachable by
/// repeatedly pushing out along degeneracy maps `Δ[k] -> Δ[k-1]`.
///
/// A quotient is a congruence on the operators `[m] -> [n]`, `m <= n`; a
/// pushout of `s_j` along the cell `σ: [k] -> [n]` identifies `σα` with `σβ`
/// whenever `s_j α = s_j β`. Types list the faces `[r] -> [n]`, `r >= 1`,
/// whose class contains some `γ s_j`.
pub fn saturation_types(n: usize) -> BTreeSet<BTreeSet<Vec<usize>>> {
    let cells: Vec<Vec<usize>> = (0..=n).flat_map(|m| monotone(m, n)).collect();
    let index: BTreeMap<Vec<usize>, usize> = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut generators: Vec<Vec<(usize, usize)>> = Vec::new();
    for k in 1..=n + 1 {
        for sigma in monotone(k, n) {
            for j in 0..k {
                let s = codegeneracy(k, j);
                let mut pairs = Vec::new();
                for m in 0..=n {
                    let ops = monotone(m, k);
                    for a in &ops {
                        for b in &ops {
                            if a < b && after(&s, a) == after(&s, b) {
                                pairs.push((index[&after(&sigma, a)], index[&after(&sigma, b)]));
                            }
                        }
                    }
                }
                if !pairs.is_empty() {
                    generators.push(pairs);
                }
            }
        }
    }
    let close = |parts: &[usize], extra: &[(usize, usize)]| -> Vec<usize> {
        let mut d = Dsu(parts.to_vec());
        for &(a, b) in extra {
            d.union(a, b);
        }
        loop {
            let mut changed = false;
            for x in 0..cells.len() {
                for y in x + 1..cells.len() {
                    if cells[x].len() != cells[y].len() || d.find(x) != d.find(y) {
                        continue;
                    }
                    let m = cells[x].len() - 1;
                    for l in 0..=n {
                        for theta in monotone(l, m) {
                            changed |= d.union(index[&after(&cells[x], &theta)], index[&after(&cells[y], &theta)]);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (0..cells.len()).map(|x| d.find(x)).collect()
    };
    let start: Vec<usize> = (0..cells.len()).collect();
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = vec![start];
    while let Some(q) = queue.pop() {
        for g in &generators {
            let next = close(&q, g);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let mut types = BTreeSet::new();
    for q in &seen {
        let degenerate = |c: &[usize]| -> bool {
            let r = c.len() - 1;
            r > 0
                && (0..r).any(|j| monotone(r - 1, n).iter().any(|g| q[index[&after(g, &codegeneracy(r, j))]] == q[index[c]]))
        };
        for top in monotone(n, n) {
            let mut t = BTreeSet::new();
            for r in 1..=n {
                for face in monotone(r, n).into_iter().filter(|f| f.windows(2).all(|w| w[0] < w[1])) {
                    if degenerate(&after(&top, &face)) {
                        t.insert(face);
                    }
                }
            }
            types.insert(t);
        }
    }
    types
}

/// Number of maps `g` with `g ∘ p = f`, found by plain backtracking over the
/// non-degenerate cells of `p`'s target.
pub fn count_factorizations(f: &SimplicialMap, p: &SimplicialMap) -> usize {
    let b = &p.target;
    let x = &f.target;
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); b.len()];
    for a in 0..p.source.len() {
        over[p.image_of(a).cell].push(a);
    }
    let eval = |assign: &[CellRef], r: &CellRef| x.apply_operator(&assign[r.cell], &r.op).unwrap();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        c: usize,
        b: &FiniteSSet,
        x: &FiniteSSet,
        f: &SimplicialMap,
        p: &SimplicialMap,
        over: &[Vec<usize>],
        assign: &mut Vec<CellRef>,
        eval: &dyn Fn(&[CellRef], &CellRef) -> CellRef,
    ) -> usize {
        if c == b.len() {
            return 1;
        }
        let n = b.cell_dim(c);
        let mut total = 0;
        for cand in x.all_cells(n) {
            let faces_ok = b.faces(c).iter().enumerate().all(|(i, r)| x.face(&cand, i) == eval(assign, r));
            let over_ok = over[c].iter().all(|&a| x.apply_operator(&cand, &p.image_of(a).op).unwrap() == *f.image_of(a));
            if faces_ok && over_ok {
                assign.push(cand);
                total += rec(c + 1, b, x, f, p, over, assign, eval);
                assign.pop();
            }
        }
        total
    }
    rec(0, b, x, f, p, &over, &mut Vec::new(), &eval)
}

/// Non-degenerate cells of `Δ[1] × Δ[1]` with both projections surjective,
/// counted by dimension: strictly increasing lattice paths from `(0,0)` to `(1,1)`.
pub fn shuffle_interior(max_dim: usize) -> Vec<usize> {
    (0..=max_dim)
        .map(|n| {
            let a = monotone(n, 1);
            let mut count = 0;
            for u in &a {
                for v in &a {
                    let injective = (0..n).all(|i| (u[i], v[i]) != (u[i + 1], v[i + 1]));
                    let onto = |w: &[usize]| w.contains(&0) && w.contains(&1);
                    if injective && onto(u) && onto(v) {
                        count += 1;
                    }
                }
            }
            count
        })
        .collect()
}

pub fn fold() -> SimplicialMap {
    let pt = Arc::new(simplex(0));
    let (two, _, _) = coproduct(&pt, &pt);
    SimplicialMap::to_point(two)
}

pub fn vertex(n: usize, v: usize) -> SimplicialMap {
    let d = Arc::new(simplex(n));
    SimplicialMap::from_cell(d.clone(), &d.nondeg(v))
}

fn sections(sigma: &OrdinalMap) -> Vec<OrdinalMap> {
    enumerate_monotone(sigma.target_dim(), sigma.source_dim())
        .into_iter()
        .filter(|d| d.values().iter().enumerate().all(|(i, &v)| sigma.at(v) == i))
        .collect()
}

/// Normal forms of all operator actions on `x` up to one dimension above its
/// top: a surjection on a stored cell, independent of how the operator is
/// factored on stored cells, recovered by every section of the surjection; and the face
/// identities `d_i d_j = d_{j-1} d_i` for `i < j` on every cell.
pub fn ez_check(x: &FiniteSSet) -> Result<(), String> {
    let top = if x.is_empty() { 0 } else { x.dim() + 1 };
    for n in 0..=top {
        for y in x.all_cells(n) {
            for m in 0..=top {
                for theta in enumerate_monotone(m, n) {
                    let z = x.apply_operator(&y, &theta).map_err(|e| e.to_string())?;
                    if !z.op.is_surjective() || z.op.source_dim() != m || x.cell_dim(z.cell) != z.op.target_dim() {
                        return Err(format!("{} along {theta:?} is not a normal form", x.describe(&y)));
                    }
                    for d in sections(&z.op) {
                        if x.apply_operator(&z, &d).map_err(|e| e.to_string())? != x.nondeg(z.cell) {
                            return Err(format!("section {d:?} of {} misses its cell", x.describe(&z)));
                        }
                    }
                    for l in 0..if y.is_degenerate() { 0 } else { m + 1 } {
                        for psi in enumerate_monotone(l, m) {
                            let two_step = x.apply_operator(&z, &psi).map_err(|e| e.to_string())?;
                            let one_step = x.apply_operator(&y, &compose(&theta, &psi).unwrap()).map_err(|e| e.to_string())?;
                            if two_step != one_step {
                                return Err(format!("{} along {theta:?} then {psi:?} disagrees", x.describe(&y)));
                            }
                        }
                    }
                }
            }
            for j in 1..=n {
                for i in 0..j {
                    if n >= 2 && x.face(&x.face(&y, j), i) != x.face(&x.face(&y, i), j - 1) {
                        return Err(format!("d{i} d{j} ≠ d{} d{i} on {}", j - 1, x.describe(&y)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Degeneracy quotients of `f`'s source to test factoring against: the one
/// from `f` itself, a coarser one through the components of the target, and
/// the components of the source.
pub fn candidate_quotients(f: &SimplicialMap) -> Vec<SimplicialMap> {
    let coarse = ssetkit::degeneracy::lr_factor(&SimplicialMap::to_point(f.target.clone())).unwrap().q;
    vec![
        ssetkit::degeneracy::lr_factor(f).unwrap().q,
        ssetkit::degeneracy::lr_factor(&coarse.after(f).unwrap()).unwrap().q,
        ssetkit::degeneracy::lr_factor(&SimplicialMap::to_point(f.source.clone())).unwrap().q,
    ]
}
