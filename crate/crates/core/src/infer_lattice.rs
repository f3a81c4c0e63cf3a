//! Inference lattices over arbitrary observation posets P and Q, the two
//! interpretation protocols, and the sequence-observation fixtures.

use std::collections::HashMap;
use std::fmt::Debug;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::bits;
use crate::error::{Error, Result};
use crate::galois::doubly_labeled_poset;
use crate::relation::Relation;

pub trait Poset {
    type Elem: Clone + PartialEq + Debug;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;
}

/// Explicit finite poset; elements are indices into `names`.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<FixedBitSet>,
}

impl FinitePoset {
    /// Order generated by `pairs` (a <= b) under reflexive-transitive closure.
    pub fn new<S: AsRef<str>>(names: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let index = name_index(names)?;
        let n = names.len();
        let mut leq: Vec<FixedBitSet> = (0..n).map(|i| bits::from_indices(n, [i])).collect();
        for (a, b) in pairs {
            let a = lookup(&index, a.as_ref())?;
            let b = lookup(&index, b.as_ref())?;
            leq[a].insert(b);
        }
        transitive_close(&mut leq);
        check_antisymmetric(&leq)?;
        Ok(FinitePoset { names: names.iter().map(|s| s.as_ref().to_string()).collect(), index, leq })
    }

    pub fn with_comparator<S: AsRef<str>>(names: &[S], le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let index = name_index(names)?;
        let n = names.len();
        let mut leq: Vec<FixedBitSet> = vec![bits::empty(n); n];
        for (a, row) in leq.iter_mut().enumerate() {
            for b in 0..n {
                if a == b || le(a, b) {
                    row.insert(b);
                }
            }
        }
        let closed = {
            let mut c = leq.clone();
            transitive_close(&mut c);
            c
        };
        if closed != leq {
            return Err(Error::PreconditionViolated("comparator is not transitive".into()));
        }
        check_antisymmetric(&leq)?;
        Ok(FinitePoset { names: names.iter().map(|s| s.as_ref().to_string()).collect(), index, leq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        lookup(&self.index, name)
    }
}

impl Poset for FinitePoset {
    type Elem = usize;
    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.leq[*a].contains(*b)
    }
    fn render(&self, a: &usize) -> String {
        self.names[*a].clone()
    }
}

/// All subsets of a universe under inclusion, never materialised.
#[derive(Clone, Debug)]
pub struct PowersetPoset {
    pub universe: Vec<String>,
}

impl Poset for PowersetPoset {
    type Elem = FixedBitSet;
    fn leq(&self, a: &FixedBitSet, b: &FixedBitSet) -> bool {
        a.is_subset(b)
    }
    fn render(&self, a: &FixedBitSet) -> String {
        render_set(a.ones().map(|i| self.universe[i].as_str()))
    }
}

fn render_set<'a>(items: impl Iterator<Item = &'a str>) -> String {
    format!("{{{}}}", items.collect::<Vec<_>>().join(","))
}

fn name_index<S: AsRef<str>>(names: &[S]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::new();
    for (i, s) in names.iter().enumerate() {
        if index.insert(s.as_ref().to_string(), i).is_some() {
            return Err(Error::DuplicateId { kind: "poset element", id: s.as_ref().to_string() });
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, name: &str) -> Result<usize> {
    index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
}

fn transitive_close(leq: &mut [FixedBitSet]) {
    let n = leq.len();
    for k in 0..n {
        let row_k = leq[k].clone();
        for row in leq.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
}

fn check_antisymmetric(leq: &[FixedBitSet]) -> Result<()> {
    for (a, row) in leq.iter().enumerate() {
        for b in row.ones() {
            if a != b && leq[b].contains(a) {
                return Err(Error::PreconditionViolated(format!("order has a cycle through {a} and {b}")));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LElem {
    Bottom,
    Top,
    Proper(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    /// Interpreted as the bottom of L.
    Inconsistent,
    /// Interpreted as the top of L.
    Top,
    /// Antichain of proper elements.
    Elements(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Order in L disagrees with p1 <= p2 and q1 >= q2.
    OrderMismatch { a: usize, b: usize },
    NoJoin { a: usize, b: usize },
    NoMeet { a: usize, b: usize },
    JoinBounds { a: usize, b: usize },
    MeetBounds { a: usize, b: usize },
}

#[derive(Clone, Debug)]
pub struct InferenceLattice<P: Poset, Q: Poset> {
    pub p: P,
    pub q: Q,
    pub proper: Vec<(P::Elem, Q::Elem)>,
    leq: Vec<FixedBitSet>,
    /// Observations in Q read as the top of L.
    pub q_as_top: Vec<Q::Elem>,
    /// Observations in P read as the bottom of L.
    pub p_as_bottom: Vec<P::Elem>,
}

impl<P: Poset, Q: Poset> InferenceLattice<P, Q> {
    /// L with order on the proper part generated by `order` pairs (i <= j).
    pub fn new(p: P, q: Q, proper: Vec<(P::Elem, Q::Elem)>, order: &[(usize, usize)]) -> Result<Self> {
        let n = proper.len();
        let mut leq: Vec<FixedBitSet> = (0..n).map(|i| bits::from_indices(n, [i])).collect();
        for &(a, b) in order {
            if a >= n || b >= n {
                return Err(Error::OutOfRange(format!("order pair ({a}, {b}) with {n} elements")));
            }
            leq[a].insert(b);
        }
        transitive_close(&mut leq);
        check_antisymmetric(&leq)?;
        Ok(InferenceLattice { p, q, proper, leq, q_as_top: Vec::new(), p_as_bottom: Vec::new() })
    }

    /// L ordered by condition (i) itself.
    pub fn induced(p: P, q: Q, proper: Vec<(P::Elem, Q::Elem)>) -> Result<Self> {
        let n = proper.len();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && p.leq(&proper[a].0, &proper[b].0) && q.leq(&proper[b].1, &proper[a].1) {
                    order.push((a, b));
                }
            }
        }
        Self::new(p, q, proper, &order)
    }

    pub fn with_designations(mut self, q_as_top: Vec<Q::Elem>, p_as_bottom: Vec<P::Elem>) -> Self {
        self.q_as_top = q_as_top;
        self.p_as_bottom = p_as_bottom;
        self
    }

    pub fn len(&self) -> usize {
        self.proper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proper.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a].contains(b)
    }

    pub fn label(&self, i: usize) -> String {
        format!("({}, {})", self.p.render(&self.proper[i].0), self.q.render(&self.proper[i].1))
    }

    pub fn find(&self, p: &P::Elem, q: &Q::Elem) -> Option<usize> {
        self.proper.iter().position(|(a, b)| a == p && b == q)
    }

    /// Least upper bound in L; None when upper bounds have no least one.
    pub fn join(&self, a: usize, b: usize) -> Option<LElem> {
        let ub: Vec<usize> = (0..self.len()).filter(|&c| self.leq(a, c) && self.leq(b, c)).collect();
        if ub.is_empty() {
            return Some(LElem::Top);
        }
        ub.iter().copied().find(|&c| ub.iter().all(|&d| self.leq(c, d))).map(LElem::Proper)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<LElem> {
        let lb: Vec<usize> = (0..self.len()).filter(|&c| self.leq(c, a) && self.leq(c, b)).collect();
        if lb.is_empty() {
            return Some(LElem::Bottom);
        }
        lb.iter().copied().find(|&c| lb.iter().all(|&d| self.leq(d, c))).map(LElem::Proper)
    }

    pub fn join_table(&self) -> Vec<Vec<Option<LElem>>> {
        (0..self.len()).map(|a| (0..self.len()).map(|b| self.join(a, b)).collect()).collect()
    }

    pub fn meet_table(&self) -> Vec<Vec<Option<LElem>>> {
        (0..self.len()).map(|a| (0..self.len()).map(|b| self.meet(a, b)).collect()).collect()
    }

    /// Exhaustive pairwise check of conditions (i)-(iii).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let (p, q) = (&self.p, &self.q);
        for a in 0..self.len() {
            for b in 0..self.len() {
                let (pa, qa) = &self.proper[a];
                let (pb, qb) = &self.proper[b];
                if self.leq(a, b) != (p.leq(pa, pb) && q.leq(qb, qa)) {
                    out.push(Violation::OrderMismatch { a, b });
                }
                match self.join(a, b) {
                    None => out.push(Violation::NoJoin { a, b }),
                    Some(LElem::Proper(c)) => {
                        let (pc, qc) = &self.proper[c];
                        if !(p.leq(pa, pc) && p.leq(pb, pc) && q.leq(qc, qa) && q.leq(qc, qb)) {
                            out.push(Violation::JoinBounds { a, b });
                        }
                    }
                    Some(_) => {}
                }
                match self.meet(a, b) {
                    None => out.push(Violation::NoMeet { a, b }),
                    Some(LElem::Proper(c)) => {
                        let (pc, qc) = &self.proper[c];
                        if !(p.leq(pc, pa) && p.leq(pc, pb) && q.leq(qa, qc) && q.leq(qb, qc)) {
                            out.push(Violation::MeetBounds { a, b });
                        }
                    }
                    Some(_) => {}
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Gamma: proper elements whose Q part lies above the observation.
    pub fn gamma(&self, obs: &Q::Elem) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.q.leq(obs, &self.proper[i].1)).collect()
    }

    /// Sigma: proper elements whose P part lies above the observation.
    pub fn sigma(&self, obs: &P::Elem) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.p.leq(obs, &self.proper[i].0)).collect()
    }

    /// Maximal elements of Gamma.
    pub fn interpret_observation_q(&self, obs: &Q::Elem) -> Interpretation {
        if self.q_as_top.contains(obs) {
            return Interpretation::Top;
        }
        let g = self.gamma(obs);
        if g.is_empty() {
            return Interpretation::Inconsistent;
        }
        Interpretation::Elements(g.iter().copied().filter(|&a| g.iter().all(|&b| a == b || !self.leq(a, b))).collect())
    }

    /// Minimal elements of Sigma.
    pub fn interpret_observation_p(&self, obs: &P::Elem) -> Interpretation {
        if self.p_as_bottom.contains(obs) {
            return Interpretation::Inconsistent;
        }
        let s = self.sigma(obs);
        if s.is_empty() {
            return Interpretation::Top;
        }
        Interpretation::Elements(s.iter().copied().filter(|&a| s.iter().all(|&b| a == b || !self.leq(b, a))).collect())
    }

    pub fn render(&self, i: &Interpretation) -> String {
        match i {
            Interpretation::Inconsistent => "0".into(),
            Interpretation::Top => "1".into(),
            Interpretation::Elements(v) => render_set(v.iter().map(|&e| self.label(e)).collect::<Vec<_>>().iter().map(String::as_str)),
        }
    }
}

/// P_R as an inference lattice over the powersets of X and Y. The empty
/// attribute set reads as the top when (X, {}) is adjoined, and the empty
/// individual set as the bottom when ({}, Y) is.
pub fn galois_as_inference_lattice(r: &Relation) -> Result<InferenceLattice<PowersetPoset, PowersetPoset>> {
    let d = doubly_labeled_poset(r)?;
    let proper: Vec<(FixedBitSet, FixedBitSet)> = d.elements.iter().map(|e| (e.sigma.clone(), e.gamma.clone())).collect();
    let p = PowersetPoset { universe: r.individuals().to_vec() };
    let q = PowersetPoset { universe: r.attributes().to_vec() };
    let l = InferenceLattice::induced(p, q, proper)?;
    let mut q_top = Vec::new();
    let mut p_bottom = Vec::new();
    if r.phi(&r.all_individuals()).is_clear() {
        q_top.push(r.no_attributes());
    }
    if r.psi(&r.all_attributes()).is_clear() {
        p_bottom.push(r.no_individuals());
    }
    Ok(l.with_designations(q_top, p_bottom))
}

pub const Q_BOTTOM: &str = "^0";
pub const Q_TOP: &str = "^1";

/// Subsets of `universe` under inclusion, named like "{1,2}".
pub fn subset_poset(universe: &[&str]) -> Result<FinitePoset> {
    let n = universe.len();
    let sets: Vec<Vec<usize>> = (0..1usize << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
    let names: Vec<String> = sets.iter().map(|s| render_set(s.iter().map(|&i| universe[i]))).collect();
    FinitePoset::with_comparator(&names, |a, b| a & !b == 0)
}

/// Attribute sequences under the prefix order, bracketed by ^0 and ^1.
pub fn sequence_poset(seqs: &[&str]) -> Result<FinitePoset> {
    let mut names: Vec<String> = vec![Q_BOTTOM.into()];
    names.extend(seqs.iter().map(|s| s.to_string()));
    names.push(Q_TOP.into());
    let last = names.len() - 1;
    let n2 = names.clone();
    FinitePoset::with_comparator(&names, |a, b| a == 0 || b == last || (a != last && b != 0 && n2[b].starts_with(n2[a].as_str())))
}

/// Finite prefix-free sets of sequences: q1 <= q2 when every sequence of q1
/// is a prefix of some sequence of q2. Bracketed by ^0 and ^1.
pub fn sequence_set_poset(sets: &[&[&str]]) -> Result<FinitePoset> {
    for s in sets {
        for (i, a) in s.iter().enumerate() {
            for (j, b) in s.iter().enumerate() {
                if i != j && b.starts_with(a) {
                    return Err(Error::PreconditionViolated(format!("{a} is a prefix of {b}")));
                }
            }
        }
    }
    let mut names: Vec<String> = vec![Q_BOTTOM.into()];
    names.extend(sets.iter().map(|s| render_set(s.iter().copied())));
    names.push(Q_TOP.into());
    let last = names.len() - 1;
    FinitePoset::with_comparator(&names, |a, b| {
        if a == 0 || b == last {
            return true;
        }
        if a == last || b == 0 {
            return false;
        }
        sets[a - 1].iter().all(|x| sets[b - 1].iter().any(|y| y.starts_with(x)))
    })
}

fn finite_lattice(p: FinitePoset, q: FinitePoset, proper: &[(&str, &str)], order: &[(usize, usize)]) -> Result<InferenceLattice<FinitePoset, FinitePoset>> {
    let elems = proper.iter().map(|(a, b)| Ok((p.element(a)?, q.element(b)?))).collect::<Result<Vec<_>>>()?;
    InferenceLattice::new(p, q, elems, order)
}

/// The sequence-observation lattice restricted to individuals {1,2} and
/// attributes a, b, with {} in P read as the bottom and ^0 in Q as the top.
pub fn dfa_pq_lattice() -> InferenceLattice<FinitePoset, FinitePoset> {
    let p = subset_poset(&["1", "2"]).expect("fixture");
    let q = sequence_poset(&["a", "b", "aa", "ab", "ba", "bb"]).expect("fixture");
    let l = finite_lattice(
        p,
        q,
        &[("{1,2}", "a"), ("{1,2}", "b"), ("{1}", "ab"), ("{1}", "ba"), ("{2}", "aa"), ("{2}", "bb")],
        &[(2, 0), (4, 0), (3, 1), (5, 1)],
    )
    .expect("fixture");
    let (pb, qt) = (l.p.element("{}").expect("fixture"), l.q.element(Q_BOTTOM).expect("fixture"));
    l.with_designations(vec![qt], vec![pb])
}

/// The full three-individual sequence lattice.
pub fn dfa_lattice() -> InferenceLattice<FinitePoset, FinitePoset> {
    let p = subset_poset(&["1", "2", "3"]).expect("fixture");
    let q = sequence_poset(&["a", "b", "c", "aa", "ab", "ba", "bb", "cc"]).expect("fixture");
    finite_lattice(
        p,
        q,
        &[("{1,2}", "a"), ("{1,2}", "b"), ("{1}", "ab"), ("{1}", "ba"), ("{2}", "aa"), ("{2}", "bb"), ("{3}", "c")],
        &[(2, 0), (4, 0), (3, 1), (5, 1)],
    )
    .expect("fixture")
}

/// The merged lattice: one node per individual, observations as sets of
/// sequences.
pub fn dfa_merged_lattice() -> InferenceLattice<FinitePoset, FinitePoset> {
    let p = subset_poset(&["1", "2", "3"]).expect("fixture");
    let q = sequence_set_poset(&[
        &["a"],
        &["b"],
        &["c"],
        &["a", "b"],
        &["aa"],
        &["ab"],
        &["ba"],
        &["bb"],
        &["ab", "ba"],
        &["aa", "bb"],
        &["cc"],
    ])
    .expect("fixture");
    finite_lattice(
        p,
        q,
        &[("{1,2}", "{a,b}"), ("{1}", "{ab,ba}"), ("{2}", "{aa,bb}"), ("{3}", "{c}")],
        &[(1, 0), (2, 0)],
    )
    .expect("fixture")
}
