//! Backtracking enumeration of maps from a kernel object into a truncated object.
//!
//! Non-degenerate source cells are assigned in index order (by dimension,
//! then identifier order). A cell's candidates are the target cells whose
//! faces agree with the already assigned faces, so every complete
//! assignment is a simplicial map.

use crate::error::{Error, Result};
use crate::sset::FiniteSSet;
use crate::truncated::TruncatedSSet;

/// Extra constraint on assigning `candidate` to source cell `cell`, given the
/// assignment of all earlier cells.
pub type CellFilter<'a> = &'a dyn Fn(usize, usize, &[usize]) -> bool;

pub fn no_filter(_: usize, _: usize, _: &[usize]) -> bool {
    true
}

/// Calls `visit` on every map `source -> target` respecting `fixed` and
/// `filter`, in lexicographic order of assignments. `visit` returns `false`
/// to stop. Returns whether the enumeration was stopped early.
pub fn for_each_map(
    source: &FiniteSSet,
    target: &TruncatedSSet,
    fixed: &[Option<usize>],
    filter: CellFilter<'_>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool> {
    if !source.is_empty() && source.dim() > target.bound() {
        return Err(Error::ResourceBound(format!(
            "source has dimension {} but the target is only known up to {}",
            source.dim(),
            target.bound()
        )));
    }
    if fixed.len() != source.len() {
        return Err(Error::InvalidParameters("fixed assignment has the wrong length".into()));
    }
    let mut assign = Vec::with_capacity(source.len());
    let mut req = Vec::new();
    Ok(!descend(source, target, fixed, filter, visit, &mut assign, &mut req))
}

fn descend(
    s: &FiniteSSet,
    t: &TruncatedSSet,
    fixed: &[Option<usize>],
    filter: CellFilter<'_>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
    assign: &mut Vec<usize>,
    req: &mut Vec<usize>,
) -> bool {
    let p = assign.len();
    if p == s.len() {
        return visit(assign);
    }
    let n = s.cell_dim(p);
    req.clear();
    for f in s.faces(p) {
        req.push(t.act(s.cell_dim(f.cell), assign[f.cell], &f.op));
    }
    let owned: Vec<usize>;
    let candidates: &[usize] = if n == 0 {
        owned = (0..t.count(0)).collect();
        &owned
    } else {
        owned = t.cells_with_faces(n, req).to_vec();
        &owned
    };
    if let Some(v) = fixed[p] {
        if !candidates.contains(&v) || !filter(p, v, assign) {
            return true;
        }
        assign.push(v);
        let go = descend(s, t, fixed, filter, visit, assign, req);
        assign.pop();
        return go;
    }
    for &c in candidates {
        if !filter(p, c, assign) {
            continue;
        }
        assign.push(c);
        let go = descend(s, t, fixed, filter, visit, assign, req);
        assign.pop();
        if !go {
            return false;
        }
    }
    true
}

/// The first map in enumeration order, if any.
pub fn find_map(
    source: &FiniteSSet,
    target: &TruncatedSSet,
    fixed: &[Option<usize>],
    filter: CellFilter<'_>,
) -> Result<Option<Vec<usize>>> {
    let mut found = None;
    for_each_map(source, target, fixed, filter, &mut |a| {
        found = Some(a.to_vec());
        false
    })?;
    Ok(found)
}

/// All maps, failing once more than `limit` have been produced.
pub fn all_maps(
    source: &FiniteSSet,
    target: &TruncatedSSet,
    fixed: &[Option<usize>],
    filter: CellFilter<'_>,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let stopped = for_each_map(source, target, fixed, filter, &mut |a| {
        out.push(a.to_vec());
        out.len() <= limit
    })?;
    if stopped {
        return Err(Error::ResourceBound(format!("more than {limit} maps {} -> {}", source.name(), target.name())));
    }
    Ok(out)
}

/// Default cap on the number of maps materialized by a single enumeration.
pub const MAP_LIMIT: usize = 2_000_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard::{boundary, simplex};
    use crate::truncated::Truncation;
    use std::sync::Arc;

    #[test]
    fn maps_between_simplices() {
        // maps Δ[1] -> Δ[1] are the monotone maps [1] -> [1]
        let t = Truncation::new(Arc::new(simplex(1)), 1);
        let maps = all_maps(&simplex(1), &t.trunc, &[None; 3], &no_filter, MAP_LIMIT).unwrap();
        assert_eq!(maps.len(), 3);
        // maps ∂Δ[2] -> Δ[1]: monotone vertex triples
        let b = boundary(2);
        let maps = all_maps(&b, &t.trunc, &vec![None; b.len()], &no_filter, MAP_LIMIT).unwrap();
        assert_eq!(maps.len(), 4);
    }
}
