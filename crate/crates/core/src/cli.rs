//! The `ssetkit` command line: a workspace of named objects and maps loaded
//! from JSON files or standard names, and one subcommand per construction.
//!
//! Object and map arguments accept a file path or a standard name:
//! `std:simplex:N`, `std:boundary:N`, `std:horn:N:K`, `std:circle`,
//! `std:nerve:ORDER:TRUNC`, `std:codiscrete:OBJECTS:TRUNC`, `std:point`,
//! `std:empty` for objects and `std:boundary-inclusion:N`,
//! `std:horn-inclusion:N:K`, `std:vertex:N:V`, `std:fold`,
//! `std:to-point:OBJ`, `std:identity:OBJ` for maps. A map file is either a
//! bundle `{"objects": [...], "map": {...}}`, a bundle with several maps
//! selected as `file.json#name`, or a plain map whose endpoints are resolved
//! among the objects given with `--load`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::classify::classifying_functor;
use crate::corpus::{corpus_json, maps, objects, CorpusConfig};
use crate::degeneracy::{is_degeneracy_detecting, is_degeneracy_quotient, lr_factor};
use crate::equivalence::is_univalent;
use crate::error::{Error, Result};
use crate::lifting::{certify_rlp, solve_lift_kernel, truncate_map, Generators};
use crate::replacement::cofibrant_replace_kernel;
use crate::slice::{dependent_product_kernel, exponential_kernel, path_of_map, trivfib_extend, weq_extension};
use crate::sset::standard::{
    boundary, boundary_inclusion, circle, codiscrete, horn, horn_inclusion, simplex, FiniteGroup, Nerve,
};
use crate::sset::{coproduct, is_cofibration, product, pullback, pushout, FiniteSSet, MapJson, ObjectJson, SimplicialMap};
use crate::truncated::{TruncMap, TruncatedSSet};

#[derive(Parser, Debug)]
#[command(name = "ssetkit", version, about = "Finite simplicial sets: normal forms, lifting certificates, replacements and slice constructions")]
pub struct Cli {
    /// Dimension bound for truncated constructions and certificates.
    #[arg(long, global = true, default_value_t = 2)]
    pub bound: usize,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exit with status 2 when a verdict fails.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Extra object files used to resolve the endpoints of plain map files.
    #[arg(long, global = true)]
    pub load: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit a standard object or map, e.g. `new horn 2 1` or `new fold`.
    New { kind: String, params: Vec<String> },
    /// Check the simplicial identities of an object or the naturality of a map.
    Validate(Target),
    /// Print an object or map.
    Show(Target),
    Product { #[arg(long)] left: String, #[arg(long)] right: String },
    /// Fibre product of two maps with a common codomain.
    Pullback { #[arg(long)] f: String, #[arg(long)] g: String },
    /// Pushout of a cofibration or degeneracy quotient `f` along `g`.
    Pushout { #[arg(long)] f: String, #[arg(long)] g: String },
    /// Degeneracy quotient followed by a degeneracy-detecting map.
    FactorLr { #[arg(long)] map: String },
    /// Diagonal filler for the square `p ∘ top = bottom ∘ left`.
    Lift {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        top: String,
        #[arg(long)]
        bottom: String,
    },
    /// Right lifting property against horns or boundaries up to the bound.
    Certify {
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "horns")]
        generators: String,
    },
    /// Cofibrant replacement with its projection.
    Replace { #[arg(long)] object: String },
    /// Exponential `X^K`.
    Exp { #[arg(long)] object: String, #[arg(long)] exponent: String },
    /// Path object of a map, or of an object over the point.
    Path { #[arg(long)] map: Option<String>, #[arg(long)] object: Option<String> },
    /// Dependent product `Π_f(q)` with the counit check.
    Pi { #[arg(long)] f: String, #[arg(long)] q: String },
    /// Extension along a cofibration: trivial fibrations, or weak
    /// equivalences when `--p` and `--u` are given.
    Extend {
        #[arg(long)]
        f: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        u: Option<String>,
    },
    /// Univalence check for a finite fibration.
    Univalent { #[arg(long)] fibration: String },
    /// Fibre table of a map with functoriality and reassembly checks.
    Classify {
        #[arg(long)]
        fibration: String,
        /// Generators whose fillers are pulled back to every fibre.
        #[arg(long)]
        structure: Option<String>,
    },
    /// Seeded random objects and maps.
    Corpus {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        maps: usize,
    },
}

#[derive(Args, Debug)]
pub struct Target {
    #[arg(long)]
    pub object: Option<String>,
    #[arg(long)]
    pub map: Option<String>,
}

/// Named objects from `--load` files.
#[derive(Debug, Default)]
pub struct Workspace {
    pub objects: BTreeMap<String, Arc<FiniteSSet>>,
}

impl Workspace {
    pub fn add(&mut self, x: Arc<FiniteSSet>) -> Result<()> {
        match self.objects.get(x.name()) {
            Some(y) if **y != *x => Err(Error::InvalidParameters(format!("two different objects named `{}`", x.name()))),
            _ => {
                self.objects.insert(x.name().to_string(), x);
                Ok(())
            }
        }
    }

    fn resolve(&self, name: &str, local: &BTreeMap<String, Arc<FiniteSSet>>) -> Result<Arc<FiniteSSet>> {
        local
            .get(name)
            .or_else(|| self.objects.get(name))
            .cloned()
            .ok_or_else(|| Error::InvalidParameters(format!("unresolved object `{name}`")))
    }

    pub fn object(&self, spec: &str) -> Result<Arc<FiniteSSet>> {
        if let Some(rest) = spec.strip_prefix("std:") {
            return standard_object(rest).map(Arc::new);
        }
        let v = read_json(spec)?;
        if v.get("cells").is_some() {
            return Ok(Arc::new(FiniteSSet::from_json(&serde_json::from_value::<ObjectJson>(v)?)?));
        }
        if let Some(o) = v.get("object") {
            return Ok(Arc::new(FiniteSSet::from_json(&serde_json::from_value::<ObjectJson>(o.clone())?)?));
        }
        Err(Error::Parse(format!("{spec} holds no object")))
    }

    pub fn map(&self, spec: &str) -> Result<SimplicialMap> {
        if let Some(rest) = spec.strip_prefix("std:") {
            return self.standard_map(rest);
        }
        let (path, pick) = match spec.split_once('#') {
            Some((p, n)) => (p, Some(n)),
            None => (spec, None),
        };
        let v = read_json(path)?;
        let mut local = BTreeMap::new();
        if let Some(objs) = v.get("objects") {
            for o in serde_json::from_value::<Vec<ObjectJson>>(objs.clone())? {
                let x = FiniteSSet::from_json(&o)?;
                local.insert(x.name().to_string(), Arc::new(x));
            }
        }
        let mj: MapJson = match (pick, v.get("maps"), v.get("map")) {
            (Some(n), Some(ms), _) => serde_json::from_value(
                ms.get(n).cloned().ok_or_else(|| Error::InvalidParameters(format!("no map `{n}` in {path}")))?,
            )?,
            (None, _, Some(m)) => serde_json::from_value(m.clone())?,
            (None, None, None) => serde_json::from_value(v.clone())?,
            _ => return Err(Error::InvalidParameters(format!("{path} holds several maps; select one with `#name`"))),
        };
        let s = self.resolve(&mj.source, &local)?;
        let t = self.resolve(&mj.target, &local)?;
        SimplicialMap::from_json(&mj, s, t)
    }

    fn standard_map(&self, spec: &str) -> Result<SimplicialMap> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let nums = || parse_nums(rest);
        match kind {
            "boundary-inclusion" => Ok(boundary_inclusion(one(&nums()?)?)),
            "horn-inclusion" => {
                let v = nums()?;
                let [n, k] = v[..] else { return Err(bad_std(spec)) };
                if n == 0 || k > n {
                    return Err(Error::InvalidParameters(format!("horn ({n},{k}) needs 0 <= k <= n, n >= 1")));
                }
                Ok(horn_inclusion(n, k))
            }
            "vertex" => {
                let v = nums()?;
                let [n, i] = v[..] else { return Err(bad_std(spec)) };
                if i > n {
                    return Err(Error::InvalidParameters(format!("Δ[{n}] has no vertex {i}")));
                }
                let d = Arc::new(simplex(n));
                Ok(SimplicialMap::from_cell(d.clone(), &d.nondeg(i)))
            }
            "fold" => {
                let pt = Arc::new(simplex(0));
                let (two, _, _) = coproduct(&pt, &pt);
                Ok(SimplicialMap::to_point(two))
            }
            "to-point" => Ok(SimplicialMap::to_point(self.object(rest)?)),
            "identity" => Ok(SimplicialMap::identity(self.object(rest)?)),
            _ => Err(bad_std(spec)),
        }
    }

    /// A map argument, or an object read as the map to the point.
    fn map_or_object(&self, map: Option<&str>, object: Option<&str>) -> Result<SimplicialMap> {
        match (map, object) {
            (Some(m), None) => self.map(m),
            (None, Some(o)) => Ok(SimplicialMap::to_point(self.object(o)?)),
            _ => Err(Error::InvalidParameters("give exactly one of --map and --object".into())),
        }
    }
}

fn bad_std(spec: &str) -> Error {
    Error::InvalidParameters(format!("unknown standard name `std:{spec}`"))
}

fn parse_nums(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(':').map(|p| p.parse().map_err(|_| Error::Parse(format!("`{p}` is not a natural number")))).collect()
}

fn one(v: &[usize]) -> Result<usize> {
    match v {
        [n] => Ok(*n),
        _ => Err(Error::InvalidParameters("expected one parameter".into())),
    }
}

pub fn standard_object(spec: &str) -> Result<FiniteSSet> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let v = parse_nums(rest)?;
    match (kind, &v[..]) {
        ("simplex", [n]) => Ok(simplex(*n)),
        ("boundary", [n]) => Ok(boundary(*n)),
        ("horn", [n, k]) if *n >= 1 && k <= n => Ok(horn(*n, *k)),
        ("circle", []) => Ok(circle()),
        ("nerve", [order, trunc]) if *order >= 1 => {
            Ok(Nerve::new(FiniteGroup::cyclic(*order), *trunc).object().as_ref().clone())
        }
        ("codiscrete", [k, trunc]) => Ok(codiscrete(*k, *trunc)),
        ("point", []) => Ok(simplex(0)),
        ("empty", []) => Ok(FiniteSSet::empty("∅")),
        _ => Err(bad_std(spec)),
    }
}

fn read_json(path: &str) -> Result<Value> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::InvalidParameters(format!("{path}: {e}")))?;
    Ok(serde_json::from_str(&s)?)
}

/// What a subcommand produced.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    /// `Some(false)` turns into exit status 2 under `--strict`.
    pub verdict: Option<bool>,
}

impl Outcome {
    fn new(json: Value, text: String) -> Self {
        Outcome { json, text, verdict: None }
    }

    fn with_verdict(mut self, v: bool) -> Self {
        self.verdict = Some(v);
        self
    }
}

pub fn truncated_json(t: &TruncatedSSet) -> Value {
    let dims: Map<String, Value> = (0..=t.bound())
        .map(|n| {
            let cells = (0..t.count(n))
                .map(|c| {
                    json!({
                        "label": t.label(n, c),
                        "faces": if n == 0 { Vec::new() } else { t.faces_of(n, c).to_vec() },
                        "degenerate": t.is_degenerate(n, c),
                    })
                })
                .collect();
            (n.to_string(), Value::Array(cells))
        })
        .collect();
    json!({"name": t.name(), "bound": t.bound(), "counts": t.counts(), "nondegenerate": t.nondegenerate_counts(), "dims": dims})
}

pub fn truncmap_json(f: &TruncMap) -> Value {
    json!({"source": f.source.name(), "target": f.target.name(), "levels": f.levels})
}

fn bundle(objects: &[&FiniteSSet], maps: &[(&str, &SimplicialMap)]) -> Value {
    let mut seen = Vec::new();
    let mut objs = Vec::new();
    for o in objects.iter().copied().chain(maps.iter().flat_map(|(_, m)| [m.source.as_ref(), m.target.as_ref()])) {
        if !seen.contains(&o.name().to_string()) {
            seen.push(o.name().to_string());
            objs.push(o.to_json());
        }
    }
    let mut out = json!({"objects": objs});
    match maps {
        [(_, m)] => out["map"] = serde_json::to_value(m.to_json()).expect("serializable"),
        [] => {}
        _ => {
            out["maps"] = maps
                .iter()
                .map(|(n, m)| (n.to_string(), serde_json::to_value(m.to_json()).expect("serializable")))
                .collect::<Map<_, _>>()
                .into()
        }
    }
    out
}

fn object_text(x: &FiniteSSet) -> String {
    let mut s = format!("{} counts {:?}\n", x.name(), x.counts());
    for c in 0..x.len() {
        let faces: Vec<String> = x.faces(c).iter().map(|f| x.describe(f)).collect();
        let _ = writeln!(s, "  {} (dim {}) faces [{}]", x.id(c), x.cell_dim(c), faces.join(", "));
    }
    s
}

fn map_text(f: &SimplicialMap) -> String {
    let mut s = format!("{} -> {}\n", f.source.name(), f.target.name());
    for c in 0..f.source.len() {
        let _ = writeln!(s, "  {} ↦ {}", f.source.id(c), f.target.describe(f.image_of(c)));
    }
    s
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let mut ws = Workspace::default();
    for l in &cli.load {
        ws.add(ws.object(l)?)?;
    }
    let bound = cli.bound;
    match &cli.command {
        Command::New { kind, params } => {
            let spec = std::iter::once(kind.clone()).chain(params.iter().cloned()).collect::<Vec<_>>().join(":");
            match standard_object(&spec) {
                Ok(x) => Ok(Outcome::new(serde_json::to_value(x.to_json())?, object_text(&x))),
                Err(_) => {
                    let f = ws.standard_map(&spec)?;
                    Ok(Outcome::new(bundle(&[], &[("map", &f)]), map_text(&f)))
                }
            }
        }
        Command::Validate(t) => match (&t.object, &t.map) {
            (Some(o), None) => {
                let x = match ws.object(o) {
                    Ok(x) => x,
                    Err(Error::InvalidObject(msg)) => {
                        return Ok(Outcome::new(json!({"ok": false, "violation": msg}), format!("violation: {msg}\n"))
                            .with_verdict(false))
                    }
                    Err(e) => return Err(e),
                };
                Ok(match x.validate() {
                    Ok(()) => Outcome::new(json!({"ok": true}), "ok\n".into()).with_verdict(true),
                    Err(v) => Outcome::new(
                        json!({"ok": false, "violation": {"cell": v.cell, "message": v.message}}),
                        format!("violation: {v}\n"),
                    )
                    .with_verdict(false),
                })
            }
            (None, Some(m)) => Ok(match ws.map(m) {
                Ok(f) => match f.check_naturality() {
                    Ok(()) => Outcome::new(json!({"ok": true}), "ok\n".into()).with_verdict(true),
                    Err(e) => Outcome::new(json!({"ok": false, "violation": e.to_string()}), format!("violation: {e}\n"))
                        .with_verdict(false),
                },
                Err(e @ (Error::InvalidMap(_) | Error::DimensionMismatch { .. } | Error::UnknownCell(_))) => {
                    Outcome::new(json!({"ok": false, "violation": e.to_string()}), format!("violation: {e}\n"))
                        .with_verdict(false)
                }
                Err(e) => return Err(e),
            }),
            _ => Err(Error::InvalidParameters("give exactly one of --object and --map".into())),
        },
        Command::Show(t) => match (&t.object, &t.map) {
            (Some(o), None) => {
                let x = ws.object(o)?;
                let cells: Vec<Value> = (0..x.len())
                    .map(|c| {
                        let faces: Vec<String> = x.faces(c).iter().map(|f| x.describe(f)).collect();
                        json!({"id": x.id(c), "dim": x.cell_dim(c), "faces": faces})
                    })
                    .collect();
                Ok(Outcome::new(json!({"name": x.name(), "counts": x.counts(), "cells": cells}), object_text(&x)))
            }
            (None, Some(m)) => {
                let f = ws.map(m)?;
                let cof = is_cofibration(&f);
                let assign: Map<String, Value> = (0..f.source.len())
                    .map(|c| (f.source.id(c).to_string(), json!(f.target.describe(f.image_of(c)))))
                    .collect();
                let json = json!({
                    "source": f.source.name(),
                    "target": f.target.name(),
                    "assign": assign,
                    "cofibration": cof.holds,
                    "degeneracy_detecting": is_degeneracy_detecting(&f).holds,
                    "degeneracy_quotient": is_degeneracy_quotient(&f).holds,
                });
                Ok(Outcome::new(json, map_text(&f)))
            }
            _ => Err(Error::InvalidParameters("give exactly one of --object and --map".into())),
        },
        Command::Product { left, right } => {
            let p = product(ws.object(left)?, ws.object(right)?);
            let text = format!("{}\n", object_text(&p.object).trim_end());
            Ok(Outcome::new(
                bundle(&[&p.object], &[("proj_left", &p.proj_left), ("proj_right", &p.proj_right)]),
                text,
            ))
        }
        Command::Pullback { f, g } => {
            let p = pullback(&ws.map(f)?, &ws.map(g)?)?;
            Ok(Outcome::new(
                bundle(&[&p.object], &[("proj_left", &p.proj_left), ("proj_right", &p.proj_right)]),
                object_text(&p.object),
            ))
        }
        Command::Pushout { f, g } => {
            let p = pushout(&ws.map(f)?, &ws.map(g)?)?;
            Ok(Outcome::new(bundle(&[&p.object], &[("inl", &p.inl), ("inr", &p.inr)]), object_text(&p.object)))
        }
        Command::FactorLr { map } => {
            let f = ws.map(map)?;
            let lr = lr_factor(&f)?;
            let recomposes = lr.m.after(&lr.q)? == f;
            let q_ok = is_degeneracy_quotient(&lr.q).holds;
            let m_ok = is_degeneracy_detecting(&lr.m).holds;
            let mut json = bundle(&[&lr.mid], &[("quotient", &lr.q), ("detecting", &lr.m)]);
            json["checks"] = json!({"recomposes": recomposes, "quotient": q_ok, "detecting": m_ok});
            let text = format!(
                "middle {} counts {:?}\nrecomposes {}, quotient {}, detecting {}\n",
                lr.mid.name(),
                lr.mid.counts(),
                yes(recomposes),
                yes(q_ok),
                yes(m_ok)
            );
            Ok(Outcome::new(json, text).with_verdict(recomposes && q_ok && m_ok))
        }
        Command::Lift { left, right, top, bottom } => {
            let (i, p) = (ws.map(left)?, ws.map(right)?);
            match solve_lift_kernel(&i, &p, &ws.map(top)?, &ws.map(bottom)?)? {
                Some(d) => Ok(Outcome::new(
                    json!({"verdict": "pass", "filler": serde_json::to_value(d.to_json())?}),
                    format!("filler\n{}", map_text(&d)),
                )
                .with_verdict(true)),
                None => Ok(Outcome::new(json!({"verdict": "fail"}), "no filler\n".into()).with_verdict(false)),
            }
        }
        Command::Certify { map, generators } => {
            let kind: Generators = generators.parse()?;
            let p = certify_target(&ws, map, bound)?;
            let cert = certify_rlp(&p, kind, bound)?;
            let json = cert.to_json(&p);
            let text = match &cert.failure {
                None => format!("pass: {} problems up to dimension {bound}\n", cert.problems.len()),
                Some(k) => format!("fail at a {} problem\n{}\n", k.shape.name(), serde_json::to_string_pretty(&json["evidence"])?),
            };
            Ok(Outcome::new(json, text).with_verdict(cert.passed()))
        }
        Command::Replace { object } => {
            let x = ws.object(object)?;
            let (rep, t) = cofibrant_replace_kernel(&x, bound)?;
            let mut json = rep.to_json(&|n, c| serde_json::to_value(x.cell_json(t.cell_ref(n, c))).expect("serializable"));
            json["base"] = serde_json::to_value(x.to_json())?;
            let text = format!("𝕃{} counts {:?}\n", x.name(), rep.object.counts());
            Ok(Outcome::new(json, text))
        }
        Command::Exp { object, exponent } => {
            let (e, _) = exponential_kernel(&ws.object(object)?, &ws.object(exponent)?, bound)?;
            let t = e.object();
            Ok(Outcome::new(truncated_json(t), format!("{} counts {:?} non-degenerate {:?}\n", t.name(), t.counts(), t.nondegenerate_counts())))
        }
        Command::Path { map, object } => {
            let p = ws.map_or_object(map.as_deref(), object.as_deref())?;
            let pm = path_of_map(&p, bound)?;
            let diag = pm.boundary_factors_diagonal();
            let r_cof = pm.r.is_injective();
            let cert = certify_rlp(&pm.ev0, Generators::Boundaries, bound)?;
            let json = json!({
                "path": truncated_json(&pm.object.object),
                "boundary_after_r_is_diagonal": diag,
                "r_injective": r_cof,
                "ev0_trivial_fibration": cert.to_json(&pm.ev0),
            });
            let text = format!(
                "{} counts {:?}\n∂∘r = δ: {}\nr injective: {}\n∂₀ trivial fibration at {bound}: {}\n",
                pm.object.object.name(),
                pm.object.object.counts(),
                yes(diag),
                yes(r_cof),
                yes(cert.passed())
            );
            Ok(Outcome::new(json, text).with_verdict(diag && r_cof && cert.passed()))
        }
        Command::Pi { f, q } => {
            let (f, q) = (ws.map(f)?, ws.map(q)?);
            let (pi, _) = dependent_product_kernel(&f, &q, bound)?;
            let (_, counit) = pi.counit()?;
            let cof = is_cofibration(&f).holds;
            let iso = counit.is_isomorphism();
            let json = json!({"pi": truncated_json(pi.object()), "projection": truncmap_json(pi.projection()), "counit_iso": iso, "f_cofibration": cof});
            let text = format!("{} counts {:?}\ncounit iso: {}\n", pi.object().name(), pi.object().counts(), yes(iso));
            let out = Outcome::new(json, text);
            Ok(if cof { out.with_verdict(iso) } else { out })
        }
        Command::Extend { f, q, p, u } => {
            let (f, q) = (ws.map(f)?, ws.map(q)?);
            match (p, u) {
                (None, None) => {
                    let e = trivfib_extend(&f, &q, bound)?;
                    let iso = e.counit_is_iso();
                    let json = json!({
                        "extension": truncated_json(e.pi.object()),
                        "counit_iso": iso,
                        "q_certificate": e.q_certificate.to_json(&truncate_map(&q, bound).2),
                        "p_certificate": e.p_certificate.to_json(e.pi.projection()),
                    });
                    let text = format!(
                        "Π_f(q) counts {:?}\npullback recovers q: {}\nq trivial fibration: {}\nextension trivial fibration: {}\n",
                        e.pi.object().counts(),
                        yes(iso),
                        yes(e.q_certificate.passed()),
                        yes(e.p_certificate.passed())
                    );
                    let ok = iso && e.p_certificate.passed();
                    Ok(Outcome::new(json, text).with_verdict(ok))
                }
                (Some(p), Some(u)) => {
                    let e = weq_extension(&f, &ws.map(p)?, &q, &ws.map(u)?, bound)?;
                    let iso = e.restriction_is_iso();
                    let json = json!({
                        "bbar": truncated_json(&e.bbar.object),
                        "restriction_iso": iso,
                        "u_retract": e.u_retract.as_ref().map(|r| r.to_json()),
                        "v_retract": e.v_retract.as_ref().map(|r| r.to_json()),
                    });
                    let text = format!(
                        "B̄ counts {:?}\nB̄[f] ≅ B: {}\nu deformation retract: {}\nv deformation retract: {}\n",
                        e.bbar.object.counts(),
                        yes(iso),
                        yes(e.u_retract.is_some()),
                        yes(e.v_retract.is_some())
                    );
                    Ok(Outcome::new(json, text).with_verdict(iso))
                }
                _ => Err(Error::InvalidParameters("--p and --u go together".into())),
            }
        }
        Command::Univalent { fibration } => {
            let u = is_univalent(&ws.map(fibration)?, bound)?;
            let text = format!(
                "{} at bound {}\n",
                if u.univalent { "univalent" } else { "not univalent" },
                u.bound
            );
            Ok(Outcome::new(u.to_json(), text).with_verdict(u.univalent))
        }
        Command::Classify { fibration, structure } => {
            let p = ws.map(fibration)?;
            let s = match structure.as_deref() {
                None | Some("none") => None,
                Some(k) => {
                    let (_, _, pt) = truncate_map(&p, bound);
                    let cert = certify_rlp(&pt, k.parse()?, bound)?;
                    Some(cert.structure(&pt).ok_or_else(|| {
                        Error::SearchFailed(format!("{} has no {k} structure up to dimension {bound}", fibration))
                    })?)
                }
            };
            let (fa, report) = classifying_functor(&p, bound, s.as_ref())?;
            let mut text = String::new();
            let base = fa.base();
            for n in 0..=bound {
                for x in 0..base.trunc.count(n) {
                    let _ = writeln!(text, "{} ↦ fibre counts {:?}", base.trunc.label(n, x), fa.fiber(n, x).object.counts());
                }
            }
            let _ = writeln!(
                text,
                "functorial {}, pullbacks {}, reassembles {}, degeneracy from fibres {}",
                yes(report.functorial),
                yes(report.pullbacks),
                yes(report.reassembles),
                yes(report.degeneracy_from_fibers)
            );
            Ok(Outcome::new(fa.to_json(&report), text).with_verdict(report.passed()))
        }
        Command::Corpus { count, maps: nmaps } => {
            let cfg = CorpusConfig::default();
            let objs = objects(cli.seed, *count, &cfg)?;
            let ms = maps(cli.seed, *nmaps, &cfg)?;
            let mut text = String::new();
            for o in &objs {
                let _ = writeln!(text, "{} {:?}", o.name(), o.counts());
            }
            for m in &ms {
                let _ = writeln!(text, "{} {:?} -> {} {:?}", m.source.name(), m.source.counts(), m.target.name(), m.target.counts());
            }
            Ok(Outcome::new(corpus_json(&objs, &ms), text))
        }
    }
}

/// The map to certify: a kernel map truncated at the bound, or the `ε` of
/// a replacement file, recomputed from its base and compared with the file.
fn certify_target(ws: &Workspace, spec: &str, bound: usize) -> Result<TruncMap> {
    if !spec.starts_with("std:") {
        let v = read_json(spec)?;
        if let (Some(base), Some(file_bound)) = (v.get("base"), v.get("bound").and_then(Value::as_u64)) {
            let x = Arc::new(FiniteSSet::from_json(&serde_json::from_value::<ObjectJson>(base.clone())?)?);
            let file_bound = file_bound as usize;
            if file_bound < bound {
                return Err(Error::ResourceBound(format!("the replacement is known up to dimension {file_bound}")));
            }
            let (rep, t) = cofibrant_replace_kernel(&x, file_bound)?;
            let again = rep.to_json(&|n, c| serde_json::to_value(x.cell_json(t.cell_ref(n, c))).expect("serializable"));
            if again["dims"] != v["dims"] || again["eps"] != v["eps"] {
                return Err(Error::Parse("replacement file does not match its base".into()));
            }
            return Ok(rep.eps.restrict_bound(bound));
        }
    }
    let f = ws.map(spec)?;
    Ok(truncate_map(&f, bound).2)
}

/// Parses `args`, runs the command and renders its output. Returns the exit
/// status and what goes to stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return if code == 0 { (0, e.to_string(), String::new()) } else { (1, String::new(), e.to_string()) };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Text => out.text,
            };
            let code = if cli.strict && out.verdict == Some(false) { 2 } else { 0 };
            (code, body, String::new())
        }
        Err(e) => {
            let code = if matches!(e, Error::ResourceBound(_)) { 3 } else { 1 };
            (code, String::new(), format!("error: {e}\n"))
        }
    }
}
