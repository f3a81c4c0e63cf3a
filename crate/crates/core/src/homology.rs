//! Reduced simplicial homology over GF(2), k-bit relations, the chain-count
//! lower bound harness and per-individual link surveys.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::bits;
use crate::complex::{conditional_association_relation, dowker_attribute_complex, SimplicialComplex, DEFAULT_FACE_BUDGET};
use crate::error::{Error, Result};
use crate::galois::{doubly_labeled_poset, isotropic_sets, longest_iars};
use crate::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    /// Reduced Betti numbers from dimension 0 up.
    pub betti: Vec<usize>,
    /// The complex is {∅}: reduced homology sits in dimension -1.
    pub empty_complex: bool,
}

impl BettiVector {
    pub fn get(&self, d: usize) -> usize {
        self.betti.get(d).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        !self.empty_complex && self.betti.iter().all(|&b| b == 0)
    }
}

/// Simplices per dimension with their GF(2) boundary matrices.
#[derive(Clone, Debug)]
pub struct ChainComplexZ2 {
    /// faces[k] holds the k-dimensional simplices as sorted vertex lists.
    pub faces: Vec<Vec<Vec<usize>>>,
}

impl ChainComplexZ2 {
    /// Faces up to dimension `top_dim`.
    pub fn build(s: &SimplicialComplex, top_dim: Option<usize>, budget: u64) -> Result<Self> {
        if s.is_void() {
            return Err(Error::PreconditionViolated("homology of the void complex".into()));
        }
        let mut sets: Vec<HashMap<Vec<usize>, ()>> = Vec::new();
        let mut total: u64 = 0;
        for f in s.facets() {
            let verts = bits::to_vec(f);
            if verts.is_empty() {
                continue;
            }
            let hi = match top_dim {
                Some(d) => verts.len().min(d + 1),
                None => verts.len(),
            };
            for k in 1..=hi {
                if sets.len() < k {
                    sets.push(HashMap::new());
                }
                let n = binomial(verts.len() as u64, k as u64);
                if n > budget {
                    return Err(Error::TooLarge { what: "face enumeration", limit: budget });
                }
                for sub in bits::k_subsets(&verts, k) {
                    if sets[k - 1].insert(sub, ()).is_none() {
                        total += 1;
                        if total > budget {
                            return Err(Error::TooLarge { what: "face enumeration", limit: budget });
                        }
                    }
                }
            }
        }
        let faces = sets
            .into_iter()
            .map(|m| {
                let mut v: Vec<Vec<usize>> = m.into_keys().collect();
                v.sort();
                v
            })
            .collect();
        Ok(ChainComplexZ2 { faces })
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Sparse columns of the reduced boundary map from dimension k to k-1.
    /// For k = 0 every vertex maps to the empty simplex (row 0).
    pub fn boundary(&self, k: usize) -> Vec<Vec<usize>> {
        if k >= self.faces.len() {
            return Vec::new();
        }
        if k == 0 {
            return self.faces[0].iter().map(|_| vec![0]).collect();
        }
        let index: HashMap<&[usize], usize> =
            self.faces[k - 1].iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        self.faces[k]
            .iter()
            .map(|f| {
                let mut col: Vec<usize> = (0..f.len())
                    .map(|drop| {
                        let sub: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                        index[sub.as_slice()]
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect()
    }

    fn rows(&self, k: usize) -> usize {
        if k == 0 {
            1
        } else {
            self.faces[k - 1].len()
        }
    }

    pub fn rank(&self, k: usize) -> usize {
        if k >= self.faces.len() {
            return 0;
        }
        gf2_rank(&self.boundary(k), self.rows(k))
    }

    /// Composite boundary vanishes in every dimension.
    pub fn boundary_squared_vanishes(&self) -> bool {
        for k in 1..self.faces.len() {
            let lower = self.boundary(k - 1);
            for col in self.boundary(k) {
                let mut acc = FixedBitSet::with_capacity(self.rows(k - 1));
                for r in col {
                    for &t in &lower[r] {
                        acc.toggle(t);
                    }
                }
                if !acc.is_clear() {
                    return false;
                }
            }
        }
        true
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Rank over GF(2) of a sparse column matrix, by column reduction on
/// bit-packed columns.
pub fn gf2_rank(columns: &[Vec<usize>], nrows: usize) -> usize {
    let mut pivots: HashMap<usize, FixedBitSet> = HashMap::new();
    let mut rank = 0;
    for col in columns {
        let mut c = FixedBitSet::with_capacity(nrows);
        for &r in col {
            c.toggle(r);
        }
        while let Some(low) = c.ones().next_back() {
            match pivots.get(&low) {
                Some(p) => c.symmetric_difference_with(p),
                None => {
                    pivots.insert(low, c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Reduced Betti numbers over GF(2), through dimension `max_dim` when given.
pub fn reduced_betti(s: &SimplicialComplex, max_dim: Option<usize>) -> Result<BettiVector> {
    reduced_betti_with_budget(s, max_dim, DEFAULT_FACE_BUDGET)
}

pub fn reduced_betti_with_budget(s: &SimplicialComplex, max_dim: Option<usize>, budget: u64) -> Result<BettiVector> {
    let cc = ChainComplexZ2::build(s, max_dim.map(|d| d + 1), budget)?;
    if cc.faces.is_empty() {
        return Ok(BettiVector { betti: Vec::new(), empty_complex: true });
    }
    debug_assert!(cc.boundary_squared_vanishes());
    let dim = cc.faces.len() - 1;
    let top = max_dim.map_or(dim, |d| d.min(dim));
    let ranks: Vec<usize> = (0..=dim + 1).map(|k| cc.rank(k)).collect();
    let betti = (0..=top).map(|k| cc.faces[k].len() - ranks[k] - ranks[k + 1]).collect();
    Ok(BettiVector { betti, empty_complex: false })
}

const BIT_LETTERS: [&str; 4] = ["a", "b", "c", "d"];

/// 2^k individuals, one per bit string, over attributes a, ¬a, b, ¬b, ...
/// Individual 1 is 00..0 and a 0 bit selects the positive attribute.
pub fn kbit_relation(k: usize) -> Result<Relation> {
    if !(1..=4).contains(&k) {
        return Err(Error::OutOfRange(format!("k = {k}, expected 1..=4")));
    }
    let mut attrs = Vec::with_capacity(2 * k);
    for l in &BIT_LETTERS[..k] {
        attrs.push(l.to_string());
        attrs.push(format!("¬{l}"));
    }
    let n = 1usize << k;
    let rows = (0..n)
        .map(|r| {
            bits::from_indices(2 * k, (0..k).map(|i| {
                let bit = (r >> (k - 1 - i)) & 1;
                2 * i + bit
            }))
        })
        .collect();
    Relation::from_bits((1..=n).map(|i| i.to_string()).collect(), attrs, rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainBound {
    pub k: usize,
    #[serde(serialize_with = "decimal")]
    pub bound: BigUint,
    #[serde(serialize_with = "decimal")]
    pub actual: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainBoundReport {
    pub entries: Vec<ChainBound>,
    pub holds: bool,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// For every k with nonzero reduced homology of Phi_R in dimension k, the
/// number of maximal chains of length at least k in P_R against (k+2)!.
pub fn verify_chain_lower_bound(r: &Relation) -> Result<ChainBoundReport> {
    r.ensure_nonvoid()?;
    let b = reduced_betti(&dowker_attribute_complex(r), None)?;
    let p = doubly_labeled_poset(r)?;
    let mut entries = Vec::new();
    for (k, &bk) in b.betti.iter().enumerate() {
        if bk != 0 {
            entries.push(ChainBound { k, bound: factorial(k + 2), actual: p.count_maximal_chains(k) });
        }
    }
    let holds = entries.iter().all(|e| e.actual >= e.bound);
    Ok(ChainBoundReport { entries, holds })
}

#[derive(Clone, Debug)]
pub struct SurveyConfig {
    pub max_dim: Option<usize>,
    pub isotropic_max_size: usize,
    pub isotropic_cap: usize,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig { max_dim: None, isotropic_max_size: 6, isotropic_cap: 1 << 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkRecord {
    pub individual: String,
    /// Individuals in the link relation.
    pub link_size: usize,
    /// Betti numbers of Phi_Q after cone apexes are stripped.
    pub betti: BettiVector,
    /// Betti numbers of Phi_Q as is.
    pub link_betti: BettiVector,
    pub longest_iars: usize,
    /// Isotropic set counts of Q keyed by size.
    pub isotropic_counts: BTreeMap<usize, usize>,
}

/// Survey of Lk(Psi_R, x) for every uniquely identifiable x (optionally
/// restricted to `individuals`). Records are independent, so callers may
/// run [`survey_individual`] in parallel.
pub fn link_survey(r: &Relation, individuals: Option<&[String]>, cfg: &SurveyConfig) -> Result<Vec<LinkRecord>> {
    r.ensure_nonvoid()?;
    let mut out = Vec::new();
    for i in 0..r.n_individuals() {
        if let Some(f) = individuals {
            if !f.contains(&r.individuals()[i]) {
                continue;
            }
        }
        if let Some(rec) = survey_individual(r, i, cfg)? {
            out.push(rec);
        }
    }
    Ok(out)
}

/// One link record, or None when the individual is not uniquely identifiable.
pub fn survey_individual(r: &Relation, i: usize, cfg: &SurveyConfig) -> Result<Option<LinkRecord>> {
    if !r.uniquely_identifiable_index(i) {
        return Ok(None);
    }
    let q = conditional_association_relation(r, &bits::from_indices(r.n_individuals(), [i]));
    let phi = q.attribute_complex();
    let betti = reduced_betti(&phi.strip_cone_apexes(), cfg.max_dim)?;
    let link_betti = reduced_betti(&phi, cfg.max_dim)?;
    let (longest, counts) = if q.is_standard() {
        let (l, _) = longest_iars(&q.relation)?;
        let sets = isotropic_sets(&q.relation, cfg.isotropic_max_size, cfg.isotropic_cap)?;
        (l, sets.into_iter().map(|(k, v)| (k, v.len())).collect())
    } else {
        (0, BTreeMap::new())
    };
    Ok(Some(LinkRecord {
        individual: r.individuals()[i].clone(),
        link_size: if q.is_standard() { q.relation.n_individuals() } else { 0 },
        betti,
        link_betti,
        longest_iars: longest,
        isotropic_counts: counts,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub individual: String,
    #[serde(serialize_with = "decimal")]
    pub h: BigUint,
    /// Fourth root of h.
    pub h_scaled: f64,
    #[serde(serialize_with = "decimal")]
    pub i: BigUint,
    /// Natural log of i; None when i = 0.
    pub i_scaled: Option<f64>,
    pub link_size: usize,
}

/// Isotropic set sizes entering the i measure.
pub const ISOTROPIC_SIZES: std::ops::RangeInclusive<usize> = 2..=6;

/// Digits d_0, d_1, ... read as a numeral whose place j has radix max_j + 1.
pub fn varying_radix(digits: &[usize], maxima: &[usize]) -> BigUint {
    let mut value = BigUint::zero();
    let mut place = BigUint::one();
    for (j, &d) in digits.iter().enumerate() {
        value += &place * BigUint::from(d);
        place *= BigUint::from(maxima.get(j).copied().unwrap_or(0) + 1);
    }
    value
}

fn column_maxima(rows: &[Vec<usize>]) -> Vec<usize> {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    (0..width).map(|j| rows.iter().map(|r| r.get(j).copied().unwrap_or(0)).max().unwrap_or(0)).collect()
}

/// The (h, i) measures with radixes taken from the records themselves.
/// Links with no reduced homology get h = 1.
pub fn scatter_measures(records: &[LinkRecord]) -> Vec<ScatterPoint> {
    let hv: Vec<Vec<usize>> = records.iter().map(|r| r.betti.betti.clone()).collect();
    let iv: Vec<Vec<usize>> = records
        .iter()
        .map(|r| {
            std::iter::once(r.longest_iars)
                .chain(ISOTROPIC_SIZES.map(|k| r.isotropic_counts.get(&k).copied().unwrap_or(0)))
                .collect()
        })
        .collect();
    let hmax = column_maxima(&hv);
    let imax = column_maxima(&iv);
    records
        .iter()
        .zip(hv.iter().zip(&iv))
        .map(|(r, (hd, id))| {
            let h = if hd.iter().all(|&b| b == 0) { BigUint::one() } else { varying_radix(hd, &hmax) };
            let i = varying_radix(id, &imax);
            let hf = h.to_f64().unwrap_or(f64::INFINITY);
            let i_scaled = if i.is_zero() { None } else { Some(i.to_f64().unwrap_or(f64::INFINITY).ln()) };
            ScatterPoint { individual: r.individual.clone(), h_scaled: hf.powf(0.25), h, i, i_scaled, link_size: r.link_size }
        })
        .collect()
}
