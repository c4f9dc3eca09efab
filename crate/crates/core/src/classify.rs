//! The functor of fibres of a map `p: A -> X`: one fibre `A[x] -> Δ[n]` per
//! cell, comparison maps along simplicial operators, and the checks that
//! this data is a strict functor whose squares are pullbacks and whose
//! category of elements gives back `A`.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::delta::{compose, enumerate_monotone, OrdinalMap};
use crate::error::{Error, Result};
use crate::lifting::{problems, shapes, FibrationStructure, ProblemKey};
use crate::slice::{operator_map, PullbackShapes};
use crate::sset::{pullback, CellRef, PairObject, SimplicialMap};
use crate::truncated::{TruncMap, TruncatedSSet, Truncation};

/// `A[x] = A ×_X Δ[n]` with its projection to `Δ[n]`.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub cell: CellRef,
    pub pair: PairObject,
    pub structure: Option<FibrationStructure>,
}

impl Fiber {
    pub fn projection(&self) -> &SimplicialMap {
        &self.pair.proj_right
    }
}

pub fn fiber_over_cell(p: &SimplicialMap, x: &CellRef, structure: Option<&FibrationStructure>) -> Result<Fiber> {
    if x.cell >= p.target.len() {
        return Err(Error::UnknownCell(format!("#{}", x.cell)));
    }
    let pair = pullback(p, &SimplicialMap::from_cell(p.target.clone(), x))?;
    let structure = structure.map(|s| inherit(p, x, &pair, s)).transpose()?;
    Ok(Fiber { cell: x.clone(), pair, structure })
}

/// Pulls a chosen-filler structure on `p` back to the fibre over `x`: a
/// problem against the fibre is sent to `p`, solved there and paired with
/// its bottom map.
fn inherit(p: &SimplicialMap, x: &CellRef, pair: &PairObject, s: &FibrationStructure) -> Result<FibrationStructure> {
    let bound = s.bound;
    let ta = Truncation::new(p.source.clone(), bound);
    let tx = Truncation::new(p.target.clone(), bound);
    if p.truncate(&ta, &tx) != s.carrier {
        return Err(Error::InvalidParameters("structure is not carried by this map".into()));
    }
    let tf = Truncation::new(pair.object.clone(), bound);
    let td = Truncation::new(pair.right.clone(), bound);
    let q = pair.proj_right.truncate(&tf, &td);
    let xhat = SimplicialMap::from_cell(p.target.clone(), x);
    let mut fillers = std::collections::BTreeMap::new();
    for shape in shapes(s.kind, bound) {
        let i = shape.inclusion();
        let (a, b) = (&i.source, &i.target);
        for key in problems(&q, shape)? {
            let top = (0..a.len())
                .map(|c| ta.index_of(&pair.proj_left.apply(tf.cell_ref(a.cell_dim(c), key.top[c]))))
                .collect();
            let bottom = (0..b.len())
                .map(|c| tx.index_of(&xhat.apply(td.cell_ref(b.cell_dim(c), key.bottom[c]))))
                .collect();
            let moved = ProblemKey { shape, top, bottom };
            let d = s
                .filler(&moved)
                .ok_or_else(|| Error::Verification(format!("no chosen filler for a {} problem", shape.name())))?;
            let filler = (0..b.len())
                .map(|c| {
                    let k = b.cell_dim(c);
                    pair.pair(ta.cell_ref(k, d[c]), td.cell_ref(k, key.bottom[c]))
                        .map(|r| tf.index_of(&r))
                        .ok_or_else(|| Error::Verification("chosen filler leaves the fibre".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            fillers.insert(key, filler);
        }
    }
    let out = FibrationStructure { carrier: q, kind: s.kind, bound, fillers };
    out.check()?;
    Ok(out)
}

/// Outcome of the checks in [`classifying_functor`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiberReport {
    pub functorial: bool,
    pub pullbacks: bool,
    pub reassembles: bool,
    /// Degeneracy read off the base and the fibres agrees with `A`.
    pub degeneracy_from_fibers: bool,
    pub structures_inherited: bool,
    pub failure: Option<String>,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.functorial && self.pullbacks && self.reassembles && self.degeneracy_from_fibers && self.structures_inherited
    }
}

/// Fibres over every cell of `X` up to a bound, with comparison maps.
#[derive(Clone, Debug)]
pub struct FiberAssignment {
    pub map: SimplicialMap,
    pub shapes: PullbackShapes,
    pub structures: Option<Vec<Vec<FibrationStructure>>>,
    cache: HashMap<(usize, usize, Vec<usize>), SimplicialMap>,
}

impl FiberAssignment {
    pub fn new(p: &SimplicialMap, bound: usize) -> Result<Self> {
        Ok(FiberAssignment { map: p.clone(), shapes: PullbackShapes::new(p, bound)?, structures: None, cache: HashMap::new() })
    }

    pub fn bound(&self) -> usize {
        self.shapes.bound()
    }

    pub fn base(&self) -> &Truncation {
        &self.shapes.base
    }

    pub fn fiber(&self, n: usize, x: usize) -> &PairObject {
        &self.shapes.pairs[n][x]
    }

    /// `A[θ*x] -> A[x]` over `θ: Δ[m] -> Δ[n]`, `(a, t) ↦ (a, θ t)`.
    pub fn comparison(&mut self, n: usize, x: usize, theta: &OrdinalMap) -> Result<SimplicialMap> {
        let key = (n, x, theta.values().to_vec());
        if let Some(f) = self.cache.get(&key) {
            return Ok(f.clone());
        }
        let src = &self.shapes.pairs[theta.source_dim()][self.shapes.base.trunc.act(n, x, theta)];
        let f = self.shapes.pairs[n][x].pairing(&src.proj_left, &operator_map(theta).after(&src.proj_right)?)?;
        self.cache.insert(key, f.clone());
        Ok(f)
    }

    fn check_functorial(&mut self) -> Result<Option<String>> {
        let bound = self.bound();
        for n in 0..=bound {
            for x in 0..self.base().trunc.count(n) {
                let id = self.comparison(n, x, &OrdinalMap::identity(n))?;
                if !is_identity(&id) {
                    return Ok(Some(format!("identity comparison over {} is not the identity", self.base().trunc.label(n, x))));
                }
                for m in 0..=bound {
                    for theta in enumerate_monotone(m, n) {
                        let y = self.base().trunc.act(n, x, &theta);
                        let outer = self.comparison(n, x, &theta)?;
                        for l in 0..=bound {
                            for psi in enumerate_monotone(l, m) {
                                let inner = self.comparison(m, y, &psi)?;
                                let whole = self.comparison(n, x, &compose(&theta, &psi)?)?;
                                if outer.after(&inner)? != whole {
                                    return Ok(Some(format!(
                                        "comparisons over {} along {theta} and {psi} do not compose",
                                        self.base().trunc.label(n, x)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn check_pullbacks(&mut self) -> Result<Option<String>> {
        let bound = self.bound();
        for n in 0..=bound {
            for x in 0..self.base().trunc.count(n) {
                for m in 0..=bound {
                    for theta in enumerate_monotone(m, n) {
                        let f = self.comparison(n, x, &theta)?;
                        let y = self.base().trunc.act(n, x, &theta);
                        let src = &self.shapes.pairs[m][y];
                        let square = pullback(&self.shapes.pairs[n][x].proj_right, &operator_map(&theta))?;
                        if !square.pairing(&f, &src.proj_right)?.is_isomorphism() {
                            return Ok(Some(format!(
                                "square over {} along {theta} is not a pullback",
                                self.base().trunc.label(n, x)
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

fn is_identity(f: &SimplicialMap) -> bool {
    *f.source == *f.target && *f == SimplicialMap::identity(f.target.clone())
}

/// `∫F` rebuilt from the fibres: an `m`-cell is a base cell `x` with a cell
/// of `A[x]` over the top simplex of `Δ[m]`.
#[derive(Clone, Debug)]
pub struct Reassembly {
    pub object: Arc<TruncatedSSet>,
    /// `cells[m][c] = (x, fibre cell)`.
    pub cells: Vec<Vec<(usize, CellRef)>>,
    /// `(x, a) ↦ proj(a)` into `A`.
    pub to_total: TruncMap,
    pub total: Truncation,
}

pub fn reassemble(fa: &FiberAssignment) -> Result<Reassembly> {
    let bound = fa.bound();
    let base = &fa.shapes.base;
    let mut cells: Vec<Vec<(usize, CellRef)>> = Vec::with_capacity(bound + 1);
    let mut index: Vec<Vec<HashMap<CellRef, usize>>> = Vec::with_capacity(bound + 1);
    for m in 0..=bound {
        let mut layer = Vec::new();
        let mut idx = Vec::new();
        for x in 0..base.trunc.count(m) {
            let pair = fa.fiber(m, x);
            let top = CellRef::nondeg(pair.right.len() - 1, m);
            let mut local = HashMap::new();
            for a in pair.object.all_cells(m) {
                if pair.proj_right.apply(&a) == top {
                    local.insert(a.clone(), layer.len());
                    layer.push((x, a));
                }
            }
            idx.push(local);
        }
        cells.push(layer);
        index.push(idx);
    }
    // the unique cell over the top simplex of the smaller fibre hitting `target`
    let preimage = |m: usize, y: usize, rho: &SimplicialMap, target: &CellRef| -> Result<usize> {
        let hits: Vec<usize> =
            index[m][y].iter().filter(|(a, _)| rho.apply(a) == *target).map(|(_, &c)| c).collect();
        match hits.as_slice() {
            [c] => Ok(*c),
            _ => Err(Error::Verification(format!("{} cells restrict to one cell in dimension {m}", hits.len()))),
        }
    };
    let mut faces = Vec::with_capacity(bound + 1);
    let mut degens = Vec::with_capacity(bound + 1);
    let mut flags = Vec::with_capacity(bound + 1);
    for m in 0..=bound {
        let mut fl = Vec::with_capacity(cells[m].len());
        let mut dl = Vec::with_capacity(cells[m].len());
        let mut gl = Vec::with_capacity(cells[m].len());
        for (x, a) in &cells[m] {
            let obj = &fa.fiber(m, *x).object;
            if m > 0 {
                let fs = (0..=m)
                    .map(|i| {
                        let y = base.trunc.face(m, *x, i);
                        preimage(m - 1, y, &fa.shapes.family.face_maps[m][*x][i], &obj.face(a, i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                fl.push(fs);
            } else {
                fl.push(Vec::new());
            }
            if m < bound {
                let ds = (0..=m)
                    .map(|j| {
                        let y = base.trunc.degen(m, *x, j);
                        preimage(m + 1, y, &fa.shapes.family.degen_maps[m][*x][j], &obj.degeneracy(a, j))
                    })
                    .collect::<Result<Vec<_>>>()?;
                dl.push(ds);
            }
            // degenerate along s_j iff x = s_j x' and the image in A[x'] is degenerate there
            let degenerate = (0..m).any(|j| {
                let y = base.trunc.face(m, *x, j);
                base.trunc.degen(m - 1, y, j) == *x && fa.shapes.family.degen_maps[m - 1][y][j].apply(a).is_degenerate()
            });
            gl.push(degenerate);
        }
        faces.push(fl);
        degens.push(dl);
        flags.push(gl);
    }
    let labels = cells
        .iter()
        .enumerate()
        .map(|(m, l)| {
            l.iter().map(|(x, a)| format!("{}|{}", base.trunc.label(m, *x), fa.fiber(m, *x).object.describe(a))).collect()
        })
        .collect();
    let name = format!("∫{}", fa.map.source.name());
    let object = Arc::new(TruncatedSSet::from_tables(name, bound, labels, faces, degens, Some(flags))?);
    let total = Truncation::new(fa.map.source.clone(), bound);
    let levels = cells
        .iter()
        .enumerate()
        .map(|(m, l)| l.iter().map(|(x, a)| total.index_of(&fa.fiber(m, *x).proj_left.apply(a))).collect())
        .collect();
    let to_total = TruncMap::new(object.clone(), total.trunc.clone(), levels)?;
    Ok(Reassembly { object, cells, to_total, total })
}

impl Reassembly {
    pub fn is_isomorphism(&self) -> bool {
        self.to_total.is_isomorphism()
    }

    /// Flags computed from the base and fibres match the tables and `A`.
    pub fn degeneracy_matches(&self) -> bool {
        self.object.flags_agree_with_tables()
            && (0..=self.object.bound()).all(|m| {
                (0..self.object.count(m))
                    .all(|c| self.object.is_degenerate(m, c) == self.total.trunc.is_degenerate(m, self.to_total.apply(m, c)))
            })
    }
}

/// Builds the functor of fibres of `p` up to `bound` and checks it. With a
/// structure on `p`, every fibre receives the pulled back structure.
pub fn classifying_functor(
    p: &SimplicialMap,
    bound: usize,
    structure: Option<&FibrationStructure>,
) -> Result<(FiberAssignment, FiberReport)> {
    let mut fa = FiberAssignment::new(p, bound)?;
    let mut report = FiberReport { structures_inherited: true, ..FiberReport::default() };
    let fail = |report: &mut FiberReport, msg: Option<String>| {
        if report.failure.is_none() {
            report.failure = msg;
        }
    };
    let msg = fa.check_functorial()?;
    report.functorial = msg.is_none();
    fail(&mut report, msg);
    let msg = fa.check_pullbacks()?;
    report.pullbacks = msg.is_none();
    fail(&mut report, msg);
    match reassemble(&fa) {
        Ok(r) => {
            report.reassembles = r.is_isomorphism();
            report.degeneracy_from_fibers = r.degeneracy_matches();
            if !report.reassembles {
                fail(&mut report, Some("reassembled total space differs from the source".into()));
            } else if !report.degeneracy_from_fibers {
                fail(&mut report, Some("degeneracy read off the fibres disagrees with the source".into()));
            }
        }
        Err(e) => fail(&mut report, Some(e.to_string())),
    }
    if let Some(s) = structure {
        let base = fa.base().clone();
        let mut all = Vec::with_capacity(bound + 1);
        for n in 0..=bound.min(s.bound) {
            let mut layer = Vec::with_capacity(base.trunc.count(n));
            for x in 0..base.trunc.count(n) {
                match inherit(p, base.cell_ref(n, x), fa.fiber(n, x), s) {
                    Ok(f) => layer.push(f),
                    Err(e) => {
                        report.structures_inherited = false;
                        fail(&mut report, Some(e.to_string()));
                    }
                }
            }
            all.push(layer);
        }
        fa.structures = Some(all);
    }
    Ok((fa, report))
}

impl FiberAssignment {
    /// The fibre table: counts of each fibre and the comparison maps along
    /// faces, keyed by base cell labels.
    pub fn to_json(&self, report: &FiberReport) -> Value {
        let base = self.base();
        let fibers: Vec<Value> = (0..=self.bound())
            .flat_map(|n| (0..base.trunc.count(n)).map(move |x| (n, x)))
            .map(|(n, x)| {
                let pair = self.fiber(n, x);
                let faces: Vec<Value> = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| {
                            let rho = &self.shapes.family.face_maps[n][x][i];
                            let assign: serde_json::Map<String, Value> = (0..rho.source.len())
                                .map(|c| (rho.source.id(c).to_string(), json!(rho.target.describe(rho.image_of(c)))))
                                .collect();
                            json!({"face": i, "from": base.trunc.label(n - 1, base.trunc.face(n, x, i)), "map": assign})
                        })
                        .collect()
                };
                let mut entry = json!({
                    "cell": base.trunc.label(n, x),
                    "dim": n,
                    "fiber": pair.object.to_json(),
                    "counts": pair.object.counts(),
                    "faces": faces,
                });
                if let Some(s) = self.structures.as_ref().and_then(|s| s.get(n)).and_then(|l| l.get(x)) {
                    entry["fillers"] = json!(s.fillers.len());
                }
                entry
            })
            .collect();
        json!({
            "map": format!("{}→{}", self.map.source.name(), self.map.target.name()),
            "bound": self.bound(),
            "fibers": fibers,
            "report": {
                "passed": report.passed(),
                "functorial": report.functorial,
                "pullbacks": report.pullbacks,
                "reassembles": report.reassembles,
                "degeneracy_from_fibers": report.degeneracy_from_fibers,
                "structures_inherited": report.structures_inherited,
                "failure": report.failure,
            },
        })
    }
}
