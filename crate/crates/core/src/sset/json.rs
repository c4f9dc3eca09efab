use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CellRef, FiniteSSet, SSetBuilder, SimplicialMap};
use crate::delta::OrdinalMap;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub op: OrdinalMap,
    pub cell: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub id: String,
    pub dim: usize,
    pub faces: Vec<FaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectJson {
    pub name: String,
    pub cells: Vec<CellJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub source: String,
    pub target: String,
    pub assign: BTreeMap<String, FaceJson>,
}

impl FiniteSSet {
    pub fn cell_json(&self, x: &CellRef) -> FaceJson {
        FaceJson { op: x.op.clone(), cell: self.id(x.cell).to_string() }
    }

    pub fn cell_from_json(&self, f: &FaceJson) -> Result<CellRef> {
        let c = self.index_of(&f.cell).ok_or_else(|| Error::UnknownCell(f.cell.clone()))?;
        if f.op.target_dim() != self.cell_dim(c) {
            return Err(Error::DimensionMismatch { expected: self.cell_dim(c), found: f.op.target_dim() });
        }
        Ok(CellRef::new(f.op.clone(), c))
    }

    pub fn to_json(&self) -> ObjectJson {
        let cells = (0..self.len())
            .map(|c| CellJson {
                id: self.id(c).to_string(),
                dim: self.cell_dim(c),
                faces: self.faces(c).iter().map(|f| self.cell_json(f)).collect(),
            })
            .collect();
        ObjectJson { name: self.name().to_string(), cells }
    }

    pub fn from_json(j: &ObjectJson) -> Result<FiniteSSet> {
        let index: std::collections::HashMap<&str, usize> =
            j.cells.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
        let mut b = SSetBuilder::new();
        for c in &j.cells {
            let faces = c
                .faces
                .iter()
                .map(|f| {
                    let k = *index.get(f.cell.as_str()).ok_or_else(|| Error::UnknownCell(f.cell.clone()))?;
                    Ok(CellRef::new(f.op.clone(), k))
                })
                .collect::<Result<Vec<_>>>()?;
            b.add(c.id.clone(), c.dim, faces);
        }
        b.build(j.name.clone())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<FiniteSSet> {
        let j: ObjectJson = serde_json::from_str(s)?;
        Self::from_json(&j)
    }
}

impl SimplicialMap {
    pub fn to_json(&self) -> MapJson {
        let assign = (0..self.source.len())
            .map(|c| (self.source.id(c).to_string(), self.target.cell_json(self.image_of(c))))
            .collect();
        MapJson { source: self.source.name().to_string(), target: self.target.name().to_string(), assign }
    }

    pub fn from_json(j: &MapJson, source: Arc<FiniteSSet>, target: Arc<FiniteSSet>) -> Result<SimplicialMap> {
        let pairs = j
            .assign
            .iter()
            .map(|(id, f)| Ok((id.as_str(), target.cell_from_json(f)?)))
            .collect::<Result<Vec<_>>>()?;
        SimplicialMap::from_ids(source, target, &pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::super::standard::{boundary_inclusion, circle, simplex};
    use super::*;

    #[test]
    fn round_trip_is_byte_stable() {
        for x in [simplex(3), circle(), FiniteSSet::empty("none")] {
            let s = x.to_json_string();
            let y = FiniteSSet::from_json_str(&s).unwrap();
            assert_eq!(x, y);
            assert_eq!(s, y.to_json_string());
        }
    }

    #[test]
    fn map_round_trip() {
        let f = boundary_inclusion(2);
        let j = f.to_json();
        let g = SimplicialMap::from_json(&j, f.source.clone(), f.target.clone()).unwrap();
        assert_eq!(f, g);
        assert_eq!(serde_json::to_string(&j).unwrap(), serde_json::to_string(&g.to_json()).unwrap());
    }

    #[test]
    fn operator_serializes_as_plain_list() {
        let x = simplex(1);
        let j = x.cell_json(&CellRef::new(OrdinalMap::surjection(vec![0, 0, 1]).unwrap(), 2));
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"op":[0,0,1],"cell":"01"}"#);
    }
}
