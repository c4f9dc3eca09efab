//! Monotone maps between finite ordinals `[m] -> [n]`.
//!
//! Every face, degeneracy and general simplicial operator is an
//! [`OrdinalMap`] stored as its full list of values, so equality of
//! operators is plain structural equality.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A weakly monotone map `[source_dim] -> [target_dim]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdinalMap {
    target: usize,
    values: Vec<usize>,
}

impl fmt::Debug for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->[{}]", self.values, self.target)
    }
}

impl fmt::Display for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl OrdinalMap {
    pub fn new(values: Vec<usize>, target: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidOperator("empty value list".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidOperator(format!("{values:?} is not monotone")));
        }
        if values.iter().any(|&v| v > target) {
            return Err(Error::InvalidOperator(format!("{values:?} exceeds [{target}]")));
        }
        Ok(OrdinalMap { target, values })
    }

    /// Builds a surjection from its value list; the target is the last value.
    pub fn surjection(values: Vec<usize>) -> Result<Self> {
        let target = *values.last().ok_or_else(|| Error::InvalidOperator("empty value list".into()))?;
        let map = Self::new(values, target)?;
        if !map.is_surjective() {
            return Err(Error::InvalidOperator(format!("{:?} is not surjective", map.values)));
        }
        Ok(map)
    }

    pub(crate) fn from_parts(values: Vec<usize>, target: usize) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(values.iter().all(|&v| v <= target));
        OrdinalMap { target, values }
    }

    pub fn identity(n: usize) -> Self {
        OrdinalMap { target: n, values: (0..=n).collect() }
    }

    /// The coface `[n-1] -> [n]` skipping `i`.
    pub fn face(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n);
        let values = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
        OrdinalMap { target: n, values }
    }

    /// The codegeneracy `[n+1] -> [n]` hitting `j` twice.
    pub fn degeneracy(n: usize, j: usize) -> Self {
        assert!(j <= n);
        let values = (0..=n + 1).map(|k| if k <= j { k } else { k - 1 }).collect();
        OrdinalMap { target: n, values }
    }

    /// The injective map `[k] -> [n]` with the given sorted image.
    pub fn inclusion(vertices: &[usize], n: usize) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidOperator(format!("{vertices:?} is not strictly increasing")));
        }
        Self::new(vertices.to_vec(), n)
    }

    /// The constant map `[m] -> [n]` at `v`.
    pub fn constant(m: usize, n: usize, v: usize) -> Self {
        assert!(v <= n);
        OrdinalMap { target: n, values: vec![v; m + 1] }
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn at(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.target + 1 == self.values.len() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// The sorted image as a vertex list.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.values.clone();
        img.dedup();
        img
    }

    /// Smallest section of a surjection: `j |-> min preimage of j`.
    pub fn min_section(&self) -> OrdinalMap {
        debug_assert!(self.is_surjective());
        let mut values = Vec::with_capacity(self.target + 1);
        for (i, &v) in self.values.iter().enumerate() {
            if values.len() == v {
                values.push(i);
            }
        }
        OrdinalMap { target: self.source_dim(), values }
    }

    /// Some `j` with `self(j) == self(j+1)`, if the map is not injective.
    pub fn first_repeat(&self) -> Option<usize> {
        self.values.windows(2).position(|w| w[0] == w[1])
    }

    /// Some vertex of the target outside the image, if any.
    pub fn first_missed(&self) -> Option<usize> {
        let img = self.image();
        (0..=self.target).find(|v| img.binary_search(v).is_err())
    }
}

/// `g ∘ f`, defined when `f.target_dim() == g.source_dim()`.
pub fn compose(g: &OrdinalMap, f: &OrdinalMap) -> Result<OrdinalMap> {
    if f.target != g.source_dim() {
        return Err(Error::DimensionMismatch {
            expected: g.source_dim(),
            found: f.target,
        });
    }
    Ok(compose_unchecked(g, f))
}

pub(crate) fn compose_unchecked(g: &OrdinalMap, f: &OrdinalMap) -> OrdinalMap {
    debug_assert_eq!(f.target, g.source_dim());
    OrdinalMap {
        target: g.target,
        values: f.values.iter().map(|&v| g.values[v]).collect(),
    }
}

/// The unique factorization `f = mono ∘ epi` with `epi` surjective and `mono` injective.
pub fn epi_mono_factor(f: &OrdinalMap) -> (OrdinalMap, OrdinalMap) {
    let image = f.image();
    let mut epi = Vec::with_capacity(f.values.len());
    let mut k = 0;
    for &v in &f.values {
        while image[k] != v {
            k += 1;
        }
        epi.push(k);
    }
    let r = image.len() - 1;
    (
        OrdinalMap { target: r, values: epi },
        OrdinalMap { target: f.target, values: image },
    )
}

/// All monotone maps `[m] -> [n]` in lexicographic order of value lists.
pub fn enumerate_monotone(m: usize, n: usize) -> Vec<OrdinalMap> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m + 1];
    loop {
        out.push(OrdinalMap { target: n, values: cur.clone() });
        // advance to the next non-decreasing sequence
        let mut i = m as isize;
        while i >= 0 && cur[i as usize] == n {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let v = cur[i as usize] + 1;
        for slot in cur.iter_mut().skip(i as usize) {
            *slot = v;
        }
    }
}

/// All surjections `[m] -> [k]`, lexicographic.
pub fn enumerate_surjections(m: usize, k: usize) -> Vec<OrdinalMap> {
    if k > m {
        return Vec::new();
    }
    enumerate_monotone(m, k).into_iter().filter(|f| f.is_surjective()).collect()
}

/// All injections `[k] -> [n]`, lexicographic.
pub fn enumerate_injections(k: usize, n: usize) -> Vec<OrdinalMap> {
    if k > n {
        return Vec::new();
    }
    enumerate_monotone(k, n).into_iter().filter(|f| f.is_injective()).collect()
}

impl Serialize for OrdinalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(s)
    }
}

/// Deserializes as a surjection (the form used inside cell references).
impl<'de> Deserialize<'de> for OrdinalMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<usize>::deserialize(d)?;
        OrdinalMap::surjection(values).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[usize], t: usize) -> OrdinalMap {
        OrdinalMap::new(v.to_vec(), t).unwrap()
    }

    #[test]
    fn identity_and_section_laws() {
        let d0 = m(&[1], 1);
        assert_eq!(compose(&d0, &OrdinalMap::identity(0)).unwrap(), d0);
        let s0 = m(&[0, 0], 0);
        assert_eq!(compose(&s0, &d0).unwrap(), OrdinalMap::identity(0));
    }

    #[test]
    fn pointwise_composition() {
        // (0,0,1):[2]->[1] after (0,1,1,2):[3]->[2]
        let g = m(&[0, 0, 1], 1);
        let f = m(&[0, 1, 1, 2], 2);
        assert_eq!(compose(&g, &f).unwrap().values(), &[0, 0, 0, 1]);
        assert!(compose(&f, &g).is_err());
    }

    #[test]
    fn factor_examples() {
        let (e, mo) = epi_mono_factor(&m(&[0, 0, 2], 3));
        assert_eq!(e, m(&[0, 0, 1], 1));
        assert_eq!(mo, m(&[0, 2], 3));
        let inj = m(&[0, 2, 3], 3);
        assert!(epi_mono_factor(&inj).0.is_identity());
        let sur = m(&[0, 1, 1, 2], 2);
        assert!(epi_mono_factor(&sur).1.is_identity());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_monotone(1, 1).len(), 3);
        assert_eq!(enumerate_monotone(2, 1).len(), 4);
        for n in 0..5 {
            assert_eq!(enumerate_monotone(0, n).len(), n + 1);
        }
        let vals: Vec<_> = enumerate_monotone(1, 1).iter().map(|f| f.values().to_vec()).collect();
        assert_eq!(vals, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn cofaces_and_codegeneracies() {
        assert_eq!(OrdinalMap::face(2, 1).values(), &[0, 2]);
        assert_eq!(OrdinalMap::degeneracy(1, 0).values(), &[0, 0, 1]);
        assert_eq!(m(&[0, 0, 1, 2, 2], 2).min_section().values(), &[0, 2, 3]);
    }
}
