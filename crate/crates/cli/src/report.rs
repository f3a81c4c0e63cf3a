//! JSON report builders, one per subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde_json::{json, Value};

use dowker::complex::{dowker_association_complex, dowker_attribute_complex, SimplicialComplex, DEFAULT_FACE_BUDGET};
use dowker::galois::{
    attribute_seq_ids, doubly_labeled_poset, first_uninformative, galois_lattice, identifying_sequences, is_isotropic,
    longest_iars, r_slow,
};
use dowker::homology::{reduced_betti, scatter_measures, survey_individual, verify_chain_lower_bound, BettiVector, SurveyConfig};
use dowker::infer_lattice::{Interpretation, LElem};
use dowker::io::{self, Format, SCHEMA_VERSION};
use dowker::morphism::{g_morphisms, induced_simplicial_maps, lattice_generate_from_image, validate_morphism, ImageMap, RelationMorphism};
use dowker::strategy::{strategy_space, StrategyOptions};
use dowker::Relation;

use crate::{load_relation, read, CliResult, Common};

fn err(e: dowker::Error) -> String {
    e.to_string()
}

/// Numeric ids sort numerically and before the rest.
fn sorted(mut ids: Vec<String>) -> Vec<String> {
    ids.sort_by_key(|s| match s.parse::<u64>() {
        Ok(n) => (0, n, String::new()),
        Err(_) => (1, 0, s.clone()),
    });
    ids
}

fn attr_ids(r: &Relation, s: &FixedBitSet) -> Vec<String> {
    sorted(r.attribute_ids(s))
}

fn ind_ids(r: &Relation, s: &FixedBitSet) -> Vec<String> {
    sorted(r.individual_ids(s))
}

fn cx_ids(c: &SimplicialComplex, s: &FixedBitSet) -> Vec<String> {
    sorted(c.ids(s))
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::CsvMatrix => "csv-matrix",
        Format::Pairs => "pairs",
        Format::Json => "json",
    }
}

fn header(command: &str, path: &Path, r: &Relation, f: Format, c: &Common) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": {
            "path": path.display().to_string(),
            "format": format_name(f),
            "individuals": r.n_individuals(),
            "attributes": r.n_attributes(),
            "pairs": r.pair_count(),
        },
        "config": { "max_dim": c.max_dim, "chain_cap": c.chain_cap, "node_cap": c.node_cap },
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn betti_json(b: &BettiVector) -> Value {
    json!({ "betti": b.betti, "empty_complex": b.empty_complex })
}

fn betti_or_error(c: &SimplicialComplex, max_dim: Option<usize>) -> Value {
    match reduced_betti(c, max_dim) {
        Ok(b) => betti_json(&b),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn inferences(c: &SimplicialComplex, closure: impl Fn(&FixedBitSet) -> FixedBitSet) -> Value {
    match c.faces(DEFAULT_FACE_BUDGET) {
        Ok(faces) => {
            let mut out: Vec<(Vec<String>, Vec<String>)> = faces
                .iter()
                .filter(|f| !f.is_clear())
                .filter_map(|f| {
                    let cl = closure(f);
                    (cl != *f).then(|| (cx_ids(c, f), cx_ids(c, &cl)))
                })
                .collect();
            out.sort();
            Value::Array(out.into_iter().map(|(a, b)| json!({ "observed": a, "inferred": b })).collect())
        }
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn free_faces(c: &SimplicialComplex) -> Value {
    match c.free_faces() {
        Ok(v) => {
            let mut ids: Vec<Vec<String>> = v.iter().map(|f| cx_ids(c, f)).collect();
            ids.sort();
            json!(ids)
        }
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn facets(c: &SimplicialComplex) -> Value {
    let mut ids: Vec<Vec<String>> = c.facets().iter().map(|f| cx_ids(c, f)).collect();
    ids.sort();
    json!(ids)
}

pub fn analyze(path: &Path, c: &Common) -> CliResult<Value> {
    let (r, f) = load_relation(path, c)?;
    r.ensure_nonvoid().map_err(err)?;
    let phi = dowker_attribute_complex(&r);
    let psi = dowker_association_complex(&r);
    let p = doubly_labeled_poset(&r).map_err(err)?;
    let l = galois_lattice(&r).map_err(err)?;
    let identifiable: Vec<String> =
        (0..r.n_individuals()).filter(|&i| r.uniquely_identifiable_index(i)).map(|i| r.individuals()[i].clone()).collect();
    let shapes = match r.classify_privacy_shape() {
        Ok(v) => json!(v
            .iter()
            .map(|s| json!({ "individuals": sorted(s.individuals.clone()), "attributes": sorted(s.attributes.clone()), "shape": s.shape }))
            .collect::<Vec<_>>()),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let body = json!({
        "tight": r.is_tight(),
        "blank_rows": sorted(r.blank_rows().iter().map(|&i| r.individuals()[i].clone()).collect()),
        "blank_columns": sorted(r.blank_columns().iter().map(|&j| r.attributes()[j].clone()).collect()),
        "attribute_privacy": r.preserves_attribute_privacy(),
        "association_privacy": r.preserves_association_privacy(),
        "attribute_inferences": inferences(&phi, |g| r.attribute_closure(g)),
        "association_inferences": inferences(&psi, |s| r.association_closure(s)),
        "free_faces": { "attribute": free_faces(&phi), "association": free_faces(&psi) },
        "facets": { "attribute": facets(&phi), "association": facets(&psi) },
        "uniquely_identifiable": sorted(identifiable),
        "betti": { "attribute": betti_or_error(&phi, c.max_dim), "association": betti_or_error(&psi, c.max_dim) },
        "poset": {
            "elements": p.len(),
            "length": p.length(),
            "lattice_length": l.length(),
            "maximal_chains": p.count_maximal_chains(0).to_string(),
        },
        "shapes": shapes,
        "disinformation_suggestions": r.suggest_disinformation().iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
    });
    Ok(merge(header("analyze", path, &r, f, c), body))
}

pub fn lattice(path: &Path, chains: bool, c: &Common) -> CliResult<Value> {
    let (r, f) = load_relation(path, c)?;
    let l = galois_lattice(&r).map_err(err)?;
    let elements: Vec<Value> = l
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "index": i,
                "individuals": ind_ids(&r, &e.sigma),
                "attributes": attr_ids(&r, &e.gamma),
                "label": e.label(&r),
            })
        })
        .collect();
    let covers: Vec<Value> =
        (0..l.len()).flat_map(|u| l.hasse.down[u].iter().map(move |&d| json!([u, d]))).collect();
    let mut body = json!({
        "elements": elements,
        "covers": covers,
        "top": l.top,
        "bottom": l.bottom,
        "top_adjoined": l.top_adjoined,
        "bottom_adjoined": l.bottom_adjoined,
        "length": l.length(),
        "maximal_chains": l.count_maximal_chains(0).to_string(),
        "proper_maximal_chains": doubly_labeled_poset(&r).map_err(err)?.count_maximal_chains(0).to_string(),
    });
    if chains {
        let list = l.maximal_chains(0, c.chain_cap).map_err(err)?;
        body["chains"] = json!(list
            .iter()
            .map(|ch| ch.iter().map(|&e| l.elements[e].label(&r)).collect::<Vec<_>>())
            .collect::<Vec<_>>());
    }
    Ok(merge(header("lattice", path, &r, f, c), body))
}

pub fn inference_lattice(path: &Path, obs_q: &[String], obs_p: &[String]) -> CliResult<Value> {
    let l = io::parse_lattice(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let violations = l.validate();
    let lelem = |e: Option<LElem>| match e {
        None => Value::Null,
        Some(LElem::Top) => json!("top"),
        Some(LElem::Bottom) => json!("bottom"),
        Some(LElem::Proper(i)) => json!(l.label(i)),
    };
    let interp = |i: &Interpretation| match i {
        Interpretation::Inconsistent => json!({ "outcome": "inconsistent" }),
        Interpretation::Top => json!({ "outcome": "top" }),
        Interpretation::Elements(v) => json!({ "outcome": "elements", "elements": v.iter().map(|&e| l.label(e)).collect::<Vec<_>>() }),
    };
    let mut interpretations = Vec::new();
    for q in obs_q {
        let e = l.q.element(q).map_err(err)?;
        interpretations.push(json!({ "observe": "q", "element": q, "result": interp(&l.interpret_observation_q(&e)) }));
    }
    for p in obs_p {
        let e = l.p.element(p).map_err(err)?;
        interpretations.push(json!({ "observe": "p", "element": p, "result": interp(&l.interpret_observation_p(&e)) }));
    }
    let n = l.len();
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "lattice",
        "input": { "path": path.display().to_string(), "format": "inference-lattice" },
        "elements": (0..n).map(|i| l.label(i)).collect::<Vec<_>>(),
        "valid": violations.is_empty(),
        "violations": violations,
        "joins": (0..n).map(|a| (0..n).map(|b| lelem(l.join(a, b))).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "meets": (0..n).map(|a| (0..n).map(|b| lelem(l.meet(a, b))).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "interpretations": interpretations,
    }))
}

pub fn iars(path: &Path, individual: Option<&str>, check: Option<&str>, c: &Common) -> CliResult<Value> {
    let (r, f) = load_relation(path, c)?;
    r.ensure_nonvoid().map_err(err)?;
    let mut body = json!({});
    match individual {
        Some(x) => {
            let i = r.individual_index(x).map_err(err)?;
            let sigma = r.association_closure(&dowker::bits::from_indices(r.n_individuals(), [i]));
            if r.phi(&sigma).is_clear() {
                return Err(format!("individual {x} has no attributes"));
            }
            let witness = r.min_identifying_set(&sigma, c.node_cap).map_err(err)?;
            let found = identifying_sequences(&r, &sigma, c.chain_cap).map_err(err)?;
            body = json!({
                "individual": x,
                "identifiable": r.uniquely_identifiable_index(i),
                "identified_set": ind_ids(&r, &sigma),
                "r_fast": witness.count_ones(..),
                "r_fast_witness": attr_ids(&r, &witness),
                "r_slow": r_slow(&r, &sigma).map_err(err)?,
                "max_length_chains": found.chains.len(),
                "max_length_sequences": found.sequences.iter().map(|s| attribute_seq_ids(&r, s)).collect::<Vec<_>>(),
            });
        }
        None => {
            let (len, seq) = longest_iars(&r).map_err(err)?;
            body["longest"] = json!({ "length": len, "sequence": attribute_seq_ids(&r, &seq) });
        }
    }
    if let Some(list) = check {
        let ids: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let seq = ids.iter().map(|y| r.attribute_index(y)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let set = r.attribute_set(&ids).map_err(err)?;
        body["check"] = json!({
            "sequence": ids,
            "informative": first_uninformative(&r, &seq).is_none(),
            "first_uninformative": first_uninformative(&r, &seq),
            "identifies": ind_ids(&r, &r.psi(&set)),
            "isotropic": r.phi(&r.psi(&set)).count_ones(..) > 0 && is_isotropic(&r, &set),
        });
    }
    Ok(merge(header("iars", path, &r, f, c), body))
}

pub fn homology(path: &Path, c: &Common) -> CliResult<Value> {
    let (r, f) = load_relation(path, c)?;
    r.ensure_nonvoid().map_err(err)?;
    let phi = dowker_attribute_complex(&r);
    let psi = dowker_association_complex(&r);
    let phi_b = reduced_betti(&phi, c.max_dim).map_err(err)?;
    let psi_b = reduced_betti(&psi, c.max_dim).map_err(err)?;
    let bound = verify_chain_lower_bound(&r).map_err(err)?;
    let body = json!({
        "attribute": merge(betti_json(&phi_b), json!({ "dimension": phi.dimension(), "facets": phi.facets().len() })),
        "association": merge(betti_json(&psi_b), json!({ "dimension": psi.dimension(), "facets": psi.facets().len() })),
        "chain_bound": bound,
    });
    Ok(merge(header("homology", path, &r, f, c), body))
}

pub fn link(path: &Path, individual: Option<&str>, scatter: Option<&PathBuf>, c: &Common) -> CliResult<Value> {
    let (r, f) = load_relation(path, c)?;
    r.ensure_nonvoid().map_err(err)?;
    let cfg = SurveyConfig { max_dim: c.max_dim, ..Default::default() };
    let targets: Vec<usize> = match individual {
        Some(x) => vec![r.individual_index(x).map_err(err)?],
        None => (0..r.n_individuals()).collect(),
    };
    let results: Vec<_> = targets.par_iter().map(|&i| survey_individual(&r, i, &cfg)).collect();
    let mut records = Vec::new();
    for res in results {
        if let Some(rec) = res.map_err(err)? {
            records.push(rec);
        }
    }
    let skipped: Vec<String> = targets
        .iter()
        .filter(|&&i| !records.iter().any(|rec| rec.individual == r.individuals()[i]))
        .map(|&i| r.individuals()[i].clone())
        .collect();
    let points = scatter_measures(&records);
    if let Some(p) = scatter {
        std::fs::write(p, io::scatter_csv(&points)).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    let body = json!({
        "records": records,
        "not_identifiable": sorted(skipped),
        "scatter": points,
    });
    Ok(merge(header("link", path, &r, f, c), body))
}

fn relation_json(r: &Relation) -> Value {
    serde_json::from_str(&io::serialize_relation(r, Format::Json)).expect("serializer output is json")
}

pub fn strategy(
    path: &Path,
    allow_stochastic: bool,
    iars: Option<&str>,
    goal_delay: Option<&str>,
    hamiltonian: Option<&str>,
    c: &Common,
) -> CliResult<Value> {
    let g = io::parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let sp = strategy_space(&g, &StrategyOptions { allow_stochastic, ..Default::default() }).map_err(err)?;
    let delta = sp.complex();
    let strategies: Vec<Value> = sp
        .strategies
        .iter()
        .map(|s| json!({ "id": s.id, "actions": g.action_ids(&s.actions), "sources": g.state_ids(&s.sources), "goal": g.state_ids(&s.goal) }))
        .collect();
    let src = sp.source_complex();
    let mut body = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "strategy",
        "input": { "path": path.display().to_string(), "format": "graph", "states": g.n_states(), "actions": g.actions().len() },
        "config": { "allow_stochastic": allow_stochastic, "chain_cap": c.chain_cap },
        "strategies": strategies,
        "degenerate": sp.is_degenerate(),
        "fully_controllable": sp.fully_controllable(),
        "strategy_complex_betti": betti_or_error(&delta, c.max_dim),
        "source_complex": facets(&src),
        "action_relation": relation_json(&sp.action_relation()),
        "source_relation": relation_json(&sp.source_relation()),
    });
    if let Some(id) = iars {
        let s = sp.strategy(id).map_err(err)?;
        let found = sp.strategy_iars(&s.actions.clone(), c.chain_cap).map_err(err)?;
        body["iars"] = json!(found);
        if let Some(cycle) = hamiltonian {
            let cyc: Vec<String> = cycle.split(',').map(|s| s.trim().to_string()).collect();
            body["hamiltonian_release"] = json!(sp.hamiltonian_iars(&s.actions.clone(), &cyc).map_err(err)?);
        }
    }
    if let Some(v) = goal_delay {
        body["goal_delay"] = json!({ "goal": v, "sequence": sp.goal_delay_sequence(v).map_err(err)? });
    }
    Ok(body)
}

pub fn morphism(domain: &Path, codomain: &Path, map: &Path, c: &Common) -> CliResult<Value> {
    let (r, _) = load_relation(domain, c)?;
    let (q, _) = load_relation(codomain, c)?;
    let maps: BTreeMap<String, BTreeMap<String, String>> =
        serde_json::from_str(&read(map)?).map_err(|e| format!("{}: {e}", map.display()))?;
    let pairs = |k: &str| -> Vec<(String, String)> {
        maps.get(k).map(|m| m.iter().map(|(a, b)| (a.clone(), b.clone())).collect()).unwrap_or_default()
    };
    let m = RelationMorphism::from_maps(r.clone(), q.clone(), &pairs("fx"), &pairs("fy")).map_err(err)?;
    let validation = validate_morphism(&m);
    let mut body = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "morphism",
        "input": { "domain": domain.display().to_string(), "codomain": codomain.display().to_string(), "map": map.display().to_string() },
        "validation": validation,
    });
    if !validation.valid {
        return Ok(body);
    }
    body["induced"] = json!(induced_simplicial_maps(&m).map_err(err)?);
    let gm = g_morphisms(&m).map_err(err)?;
    body["g_morphisms"] = json!(gm
        .domain
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| json!({
            "element": e.label(&r),
            "fxg": gm.codomain.elements[gm.fxg[i]].label(&q),
            "fyg": gm.codomain.elements[gm.fyg[i]].label(&q),
        }))
        .collect::<Vec<_>>());
    let mut gen = serde_json::Map::new();
    for (name, which) in [("fxg", ImageMap::Fxg), ("fyg", ImageMap::Fyg)] {
        let v = match lattice_generate_from_image(&m, which) {
            Ok(lg) => json!({
                "reaches_all": lg.reaches_all(),
                "image": lg.image.iter().map(|&e| lg.lattice.elements[e].label(&q)).collect::<Vec<_>>(),
                "witnesses": lg.lattice.proper().into_iter().map(|e| json!({
                    "element": lg.lattice.elements[e].label(&q),
                    "witness": lg.witnesses[e].as_ref().map(|w| lg.render(&q, w)),
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        gen.insert(name.into(), v);
    }
    body["lattice_generation"] = Value::Object(gen);
    Ok(body)
}

pub fn encode(path: &Path, fields: Option<&str>, to: &str) -> CliResult<String> {
    let (header, records) = io::parse_records(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let chosen: Vec<String> = match fields {
        Some(f) => f.split(',').map(|s| s.trim().to_string()).collect(),
        None => header,
    };
    let refs: Vec<&str> = chosen.iter().map(String::as_str).collect();
    let enc = io::encode_multivalent(&records, &refs).map_err(err)?;
    match to {
        "json" => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "encode",
                "input": { "path": path.display().to_string(), "records": records.len(), "fields": chosen },
                "relation": relation_json(&enc.relation),
                "multiplicity": enc.relation.individuals().iter().zip(&enc.multiplicity).map(|(x, m)| (x.clone(), json!(m))).collect::<serde_json::Map<_, _>>(),
            });
            Ok(serde_json::to_string_pretty(&v).expect("json value") + "\n")
        }
        other => {
            let f: Format = other.parse().map_err(err)?;
            Ok(io::serialize_relation(&enc.relation, f))
        }
    }
}

pub fn embed(pattern: &Path, host: &Path, association: bool, bound: u64, c: &Common) -> CliResult<Value> {
    let (p, _) = load_relation(pattern, c)?;
    let (h, _) = load_relation(host, c)?;
    let cx = |r: &Relation| if association { dowker_association_complex(r) } else { dowker_attribute_complex(r) };
    let (pc, hc) = (cx(&p), cx(&h));
    let found = pc.enumerate_embeddings(&hc, bound).map_err(err)?;
    let list: Vec<Value> = found
        .iter()
        .map(|e| {
            let vmap: serde_json::Map<String, Value> =
                e.vertex_map.iter().enumerate().map(|(i, &v)| (pc.universe()[i].clone(), json!(hc.universe()[v]))).collect();
            let fmap: Vec<Value> = e
                .facet_map
                .iter()
                .enumerate()
                .map(|(k, &t)| json!([cx_ids(&pc, &pc.facets()[k]), cx_ids(&hc, &hc.facets()[t])]))
                .collect();
            json!({ "vertex_map": vmap, "facet_map": fmap })
        })
        .collect();
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "embed",
        "input": { "pattern": pattern.display().to_string(), "host": host.display().to_string() },
        "complex": if association { "association" } else { "attribute" },
        "count": list.len(),
        "embeddings": list,
    }))
}
