//! Relation, graph and lattice file formats; multivalent encoding.
//!
//! CSV-MATRIX: first row holds attribute ids (first cell ignored), first
//! column individual ids, cells 1, 0 or blank.
//! PAIRS: one `individual,attribute` per line. `x,` declares an individual
//! with no attributes and `,y` an attribute; `#` starts a comment line.
//! JSON: `{"schema_version", "individuals", "attributes", "pairs"}`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::homology::ScatterPoint;
use crate::infer_lattice::{FinitePoset, InferenceLattice};
use crate::relation::Relation;
use crate::strategy::{ActionKind, UncertainGraph};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    CsvMatrix,
    Pairs,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" | "csv-matrix" | "matrix" => Ok(Format::CsvMatrix),
            "pairs" => Ok(Format::Pairs),
            "json" => Ok(Format::Json),
            _ => Err(Error::UnknownElement(format!("format {s}"))),
        }
    }
}

impl Format {
    /// Guess from a file extension; `.csv` is CSV-MATRIX.
    pub fn from_path(path: &str) -> Option<Format> {
        let ext = path.rsplit('.').next()?.to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Some(Format::CsvMatrix),
            "pairs" | "txt" => Some(Format::Pairs),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub relation: Relation,
    pub warnings: Vec<String>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    parse_err(line, 0, e.to_string())
}

fn reader(text: &str, comments: bool) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(if comments { Some(b'#') } else { None })
        .from_reader(text.as_bytes())
}

pub fn parse_relation(text: &str, format: Format) -> Result<Parsed> {
    match format {
        Format::CsvMatrix => parse_matrix(text),
        Format::Pairs => parse_pairs(text),
        Format::Json => parse_json(text),
    }
}

fn parse_matrix(text: &str) -> Result<Parsed> {
    let mut rdr = reader(text, false);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(csv_err)?,
        None => return Err(parse_err(1, 1, "empty input")),
    };
    let attributes: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let width = header.len();
    let mut individuals = Vec::new();
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != width {
            return Err(parse_err(line, rec.len().min(width) + 1, format!("expected {width} cells, found {}", rec.len())));
        }
        let mut row = bits::empty(attributes.len());
        for (j, cell) in rec.iter().skip(1).enumerate() {
            match cell {
                "1" => row.insert(j),
                "0" | "" => {}
                other => return Err(parse_err(line, j + 2, format!("cell must be 0, 1 or blank, found {other:?}"))),
            }
        }
        individuals.push(rec[0].to_string());
        rows.push(row);
    }
    Ok(Parsed { relation: Relation::from_bits(individuals, attributes, rows)?, warnings: Vec::new() })
}

fn parse_pairs(text: &str) -> Result<Parsed> {
    let mut rdr = reader(text, true);
    let mut individuals: Vec<String> = Vec::new();
    let mut attributes: Vec<String> = Vec::new();
    let mut ind_seen: HashMap<String, usize> = HashMap::new();
    let mut attr_seen: HashMap<String, usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut pair_seen: HashSet<(usize, usize)> = HashSet::new();
    let mut warnings = Vec::new();
    let intern = |names: &mut Vec<String>, seen: &mut HashMap<String, usize>, id: &str| -> usize {
        *seen.entry(id.to_string()).or_insert_with(|| {
            names.push(id.to_string());
            names.len() - 1
        })
    };
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 2 {
            return Err(parse_err(line, rec.len().min(2) + 1, format!("expected individual,attribute; found {} fields", rec.len())));
        }
        let (x, y) = (&rec[0], &rec[1]);
        match (x.is_empty(), y.is_empty()) {
            (true, true) => return Err(parse_err(line, 1, "both fields blank")),
            (false, true) => {
                intern(&mut individuals, &mut ind_seen, x);
            }
            (true, false) => {
                intern(&mut attributes, &mut attr_seen, y);
            }
            (false, false) => {
                let i = intern(&mut individuals, &mut ind_seen, x);
                let j = intern(&mut attributes, &mut attr_seen, y);
                if pair_seen.insert((i, j)) {
                    pairs.push((i, j));
                } else {
                    warnings.push(format!("line {line}: duplicate pair ({x}, {y})"));
                }
            }
        }
    }
    let mut rows = vec![bits::empty(attributes.len()); individuals.len()];
    for (i, j) in pairs {
        rows[i].insert(j);
    }
    Ok(Parsed { relation: Relation::from_bits(individuals, attributes, rows)?, warnings })
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    schema_version: u32,
    individuals: Vec<String>,
    attributes: Vec<String>,
    pairs: Vec<(String, String)>,
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err(e.line(), e.column(), e.to_string())
}

fn parse_json(text: &str) -> Result<Parsed> {
    let doc: RelationJson = serde_json::from_str(text).map_err(json_err)?;
    let pairs: Vec<(&str, &str)> = doc.pairs.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    let inds: Vec<&str> = doc.individuals.iter().map(String::as_str).collect();
    let attrs: Vec<&str> = doc.attributes.iter().map(String::as_str).collect();
    let mut seen = HashSet::new();
    let mut warnings = Vec::new();
    for p in &pairs {
        if !seen.insert(*p) {
            warnings.push(format!("duplicate pair ({}, {})", p.0, p.1));
        }
    }
    Ok(Parsed { relation: Relation::new_allow_void(&inds, &attrs, &pairs)?, warnings })
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().flexible(true).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ids are utf-8")
}

pub fn serialize_relation(r: &Relation, format: Format) -> String {
    match format {
        Format::CsvMatrix => {
            let mut w = writer();
            let mut header = vec![String::new()];
            header.extend(r.attributes().iter().cloned());
            w.write_record(&header).expect("in-memory writer");
            for (i, x) in r.individuals().iter().enumerate() {
                let mut rec = vec![x.clone()];
                rec.extend((0..r.n_attributes()).map(|j| if r.row(i).contains(j) { "1" } else { "0" }.to_string()));
                w.write_record(&rec).expect("in-memory writer");
            }
            finish(w)
        }
        Format::Pairs => {
            let mut w = writer();
            for y in r.attributes() {
                w.write_record(["", y.as_str()]).expect("in-memory writer");
            }
            for (i, x) in r.individuals().iter().enumerate() {
                if r.row(i).is_clear() {
                    w.write_record([x.as_str(), ""]).expect("in-memory writer");
                }
                for j in r.row(i).ones() {
                    w.write_record([x.as_str(), r.attributes()[j].as_str()]).expect("in-memory writer");
                }
            }
            finish(w)
        }
        Format::Json => {
            let doc = RelationJson {
                schema_version: SCHEMA_VERSION,
                individuals: r.individuals().to_vec(),
                attributes: r.attributes().to_vec(),
                pairs: r.pairs().into_iter().map(|(i, j)| (r.individuals()[i].clone(), r.attributes()[j].clone())).collect(),
            };
            serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
        }
    }
}

pub type Record = BTreeMap<String, String>;

/// Records with a header row, as used by `encode_multivalent`.
pub fn parse_records(text: &str) -> Result<(Vec<String>, Vec<Record>)> {
    let mut rdr = reader(text, true);
    let mut recs = rdr.records();
    let header: Vec<String> = match recs.next() {
        Some(r) => r.map_err(csv_err)?.iter().map(str::to_string).collect(),
        None => return Err(parse_err(1, 1, "empty input")),
    };
    let mut out = Vec::new();
    for rec in recs {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != header.len() {
            return Err(parse_err(line, rec.len().min(header.len()) + 1, format!("expected {} cells, found {}", header.len(), rec.len())));
        }
        out.push(header.iter().cloned().zip(rec.iter().map(str::to_string)).collect());
    }
    Ok((header, out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Encoded {
    pub relation: Relation,
    /// Records merged into each individual.
    pub multiplicity: Vec<usize>,
    /// Record indices (0-based) per individual.
    pub members: Vec<Vec<usize>>,
}

/// One binary attribute `field=value` per observed value; records with
/// identical values on `fields` become one individual named after its first
/// record (1-based).
pub fn encode_multivalent(records: &[BTreeMap<String, String>], fields: &[&str]) -> Result<Encoded> {
    let mut values: Vec<Vec<String>> = vec![Vec::new(); fields.len()];
    let mut keys: Vec<Vec<usize>> = Vec::with_capacity(records.len());
    for (k, rec) in records.iter().enumerate() {
        let mut key = Vec::with_capacity(fields.len());
        for (f, field) in fields.iter().enumerate() {
            let v = rec.get(*field).ok_or_else(|| Error::MissingField(format!("{field} in record {}", k + 1)))?;
            let pos = match values[f].iter().position(|x| x == v) {
                Some(p) => p,
                None => {
                    values[f].push(v.clone());
                    values[f].len() - 1
                }
            };
            key.push(pos);
        }
        keys.push(key);
    }
    let offsets: Vec<usize> = values.iter().scan(0, |acc, v| {
        let o = *acc;
        *acc += v.len();
        Some(o)
    }).collect();
    let attributes: Vec<String> = fields
        .iter()
        .zip(&values)
        .flat_map(|(f, vs)| vs.iter().map(move |v| format!("{f}={v}")))
        .collect();
    let mut class_of: HashMap<&Vec<usize>, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut rows = Vec::new();
    for (k, key) in keys.iter().enumerate() {
        match class_of.get(key) {
            Some(&c) => members[c].push(k),
            None => {
                class_of.insert(key, members.len());
                members.push(vec![k]);
                rows.push(bits::from_indices(attributes.len(), key.iter().enumerate().map(|(f, &p)| offsets[f] + p)));
            }
        }
    }
    let individuals = members.iter().map(|m| (m[0] + 1).to_string()).collect();
    Ok(Encoded {
        relation: Relation::from_bits(individuals, attributes, rows)?,
        multiplicity: members.iter().map(Vec::len).collect(),
        members,
    })
}

#[derive(Serialize, Deserialize)]
struct ActionJson {
    id: String,
    source: String,
    targets: Vec<String>,
    kind: ActionKind,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    #[serde(default)]
    schema_version: Option<u32>,
    states: Vec<String>,
    actions: Vec<ActionJson>,
}

/// `{"states": [...], "actions": [{"id", "source", "targets", "kind"}]}`.
pub fn parse_graph(text: &str) -> Result<UncertainGraph> {
    let doc: GraphJson = serde_json::from_str(text).map_err(json_err)?;
    let actions: Vec<(String, String, Vec<String>, ActionKind)> =
        doc.actions.into_iter().map(|a| (a.id, a.source, a.targets, a.kind)).collect();
    UncertainGraph::new(&doc.states, &actions)
}

pub fn serialize_graph(g: &UncertainGraph) -> String {
    let doc = GraphJson {
        schema_version: Some(SCHEMA_VERSION),
        states: g.states().to_vec(),
        actions: g
            .actions()
            .iter()
            .map(|a| ActionJson {
                id: a.id.clone(),
                source: g.states()[a.source].clone(),
                targets: a.targets.iter().map(|&t| g.states()[t].clone()).collect(),
                kind: a.kind,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<String>,
    #[serde(default)]
    order: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct ProperJson {
    p: String,
    q: String,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    #[serde(default)]
    schema_version: Option<u32>,
    p: PosetJson,
    q: PosetJson,
    proper: Vec<ProperJson>,
    /// Index pairs (i, j) with proper[i] <= proper[j].
    #[serde(default)]
    order: Vec<(usize, usize)>,
    #[serde(default)]
    q_as_top: Vec<String>,
    #[serde(default)]
    p_as_bottom: Vec<String>,
}

/// Explicit inference lattice: posets P and Q by elements and order pairs,
/// the proper part as (p, q) names, and its order as index pairs.
pub fn parse_lattice(text: &str) -> Result<InferenceLattice<FinitePoset, FinitePoset>> {
    let doc: LatticeJson = serde_json::from_str(text).map_err(json_err)?;
    let p = FinitePoset::new(&doc.p.elements, &doc.p.order)?;
    let q = FinitePoset::new(&doc.q.elements, &doc.q.order)?;
    let proper = doc.proper.iter().map(|e| Ok((p.element(&e.p)?, q.element(&e.q)?))).collect::<Result<Vec<_>>>()?;
    let q_top = doc.q_as_top.iter().map(|s| q.element(s)).collect::<Result<Vec<_>>>()?;
    let p_bottom = doc.p_as_bottom.iter().map(|s| p.element(s)).collect::<Result<Vec<_>>>()?;
    Ok(InferenceLattice::new(p, q, proper, &doc.order)?.with_designations(q_top, p_bottom))
}

pub fn serialize_lattice(l: &InferenceLattice<FinitePoset, FinitePoset>) -> String {
    use crate::infer_lattice::Poset;
    let poset = |ps: &FinitePoset| {
        let names = ps.names();
        let mut order = Vec::new();
        for a in 0..names.len() {
            for b in 0..names.len() {
                if a != b && ps.leq(&a, &b) {
                    order.push((names[a].clone(), names[b].clone()));
                }
            }
        }
        PosetJson { elements: names.to_vec(), order }
    };
    let n = l.len();
    let order = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && l.leq(a, b)).collect();
    let doc = LatticeJson {
        schema_version: Some(SCHEMA_VERSION),
        p: poset(&l.p),
        q: poset(&l.q),
        proper: l.proper.iter().map(|(a, b)| ProperJson { p: l.p.render(a), q: l.q.render(b) }).collect(),
        order,
        q_as_top: l.q_as_top.iter().map(|e| l.q.render(e)).collect(),
        p_as_bottom: l.p_as_bottom.iter().map(|e| l.p.render(e)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
}

/// Columns individual, h, i, link_size.
pub fn scatter_csv(points: &[ScatterPoint]) -> String {
    let mut w = writer();
    w.write_record(["individual", "h", "i", "link_size"]).expect("in-memory writer");
    for p in points {
        w.write_record([p.individual.clone(), p.h.to_string(), p.i.to_string(), p.link_size.to_string()])
            .expect("in-memory writer");
    }
    finish(w)
}
