//! Abstract simplicial complexes stored by their maximal simplices, and the
//! relation-level link constructions.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::bits;
use crate::error::{Error, Result};
use crate::relation::{AttributeSet, IndividualSet, Relation};

/// Default cap on enumerated faces.
pub const DEFAULT_FACE_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ComplexKind {
    Void,
    NonVoid,
}

/// A simplicial complex over an ordered vertex universe. The void complex
/// has no simplices at all; the empty complex has only the empty simplex
/// and is stored as the single facet {}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    universe: Vec<String>,
    kind: ComplexKind,
    facets: Vec<FixedBitSet>,
}

impl SimplicialComplex {
    /// Facets are reduced to an antichain.
    pub fn new(universe: Vec<String>, simplices: Vec<FixedBitSet>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &universe {
            if !seen.insert(v) {
                return Err(Error::DuplicateId { kind: "vertex", id: v.clone() });
            }
        }
        let n = universe.len();
        let simplices: Vec<FixedBitSet> = simplices
            .into_iter()
            .map(|mut s| {
                s.grow(n);
                s
            })
            .collect();
        if simplices.iter().any(|s| s.len() > n) {
            return Err(Error::UniverseMismatch("simplex outside universe".into()));
        }
        let facets = if simplices.is_empty() {
            vec![bits::empty(n)]
        } else {
            bits::antichain_max(simplices)
        };
        Ok(SimplicialComplex { universe, kind: ComplexKind::NonVoid, facets })
    }

    /// Builds from id lists.
    pub fn from_ids<S: AsRef<str>>(universe: &[S], simplices: &[Vec<S>]) -> Result<Self> {
        let universe: Vec<String> = universe.iter().map(|s| s.as_ref().to_string()).collect();
        let mut sets = Vec::new();
        for s in simplices {
            let mut b = bits::empty(universe.len());
            for v in s {
                let i = universe.iter().position(|u| u == v.as_ref()).ok_or_else(|| Error::UnknownId {
                    kind: "vertex",
                    id: v.as_ref().to_string(),
                })?;
                b.insert(i);
            }
            sets.push(b);
        }
        Self::new(universe, sets)
    }

    pub fn void(universe: Vec<String>) -> Self {
        SimplicialComplex { universe, kind: ComplexKind::Void, facets: Vec::new() }
    }

    /// The complex {{}}.
    pub fn empty_complex(universe: Vec<String>) -> Self {
        let n = universe.len();
        SimplicialComplex { universe, kind: ComplexKind::NonVoid, facets: vec![bits::empty(n)] }
    }

    /// All proper subsets of V. For |V| = 1 this is {{}}; for V empty, void.
    pub fn boundary_complex<S: AsRef<str>>(vertices: &[S]) -> Self {
        let universe: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let n = universe.len();
        if n == 0 {
            return Self::void(universe);
        }
        let all = bits::full(n);
        let facets = (0..n).map(|i| bits::without(&all, i)).collect();
        Self::new(universe, facets).expect("unique vertices")
    }

    /// The full simplex on V.
    pub fn simplex<S: AsRef<str>>(vertices: &[S]) -> Self {
        let universe: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let n = universe.len();
        Self::new(universe, vec![bits::full(n)]).expect("unique vertices")
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn is_void(&self) -> bool {
        self.kind == ComplexKind::Void
    }

    pub fn is_empty_complex(&self) -> bool {
        !self.is_void() && self.facets.len() == 1 && self.facets[0].is_clear()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn facets(&self) -> &[FixedBitSet] {
        &self.facets
    }

    pub fn ids(&self, s: &FixedBitSet) -> Vec<String> {
        s.ones().map(|i| self.universe[i].clone()).collect()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.universe.iter().position(|u| u == id).ok_or_else(|| Error::UnknownId {
            kind: "vertex",
            id: id.to_string(),
        })
    }

    pub fn set_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<FixedBitSet> {
        let mut b = bits::empty(self.universe.len());
        for id in ids {
            b.insert(self.vertex_index(id.as_ref())?);
        }
        Ok(b)
    }

    /// Facets as sorted lists of ids, sorted.
    pub fn facet_ids(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .facets
            .iter()
            .map(|f| {
                let mut v = self.ids(f);
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    /// Same simplices by vertex id, ignoring universes.
    pub fn same_simplices(&self, other: &SimplicialComplex) -> bool {
        self.kind == other.kind && self.facet_ids() == other.facet_ids()
    }

    pub fn contains(&self, tau: &FixedBitSet) -> bool {
        !self.is_void() && self.facets.iter().any(|f| tau.is_subset(f))
    }

    pub fn contains_ids<S: AsRef<str>>(&self, ids: &[S]) -> bool {
        match self.set_of(ids) {
            Ok(b) => self.contains(&b),
            Err(_) => false,
        }
    }

    /// Vertices appearing in some simplex.
    pub fn vertices(&self) -> FixedBitSet {
        let mut v = bits::empty(self.universe.len());
        for f in &self.facets {
            v.union_with(f);
        }
        v
    }

    /// Dimension; None for void, -1 for the empty complex.
    pub fn dimension(&self) -> Option<isize> {
        self.facets.iter().map(|f| bits::count(f) as isize - 1).max()
    }

    /// Every simplex including the empty one. Errors above `budget`.
    pub fn faces(&self, budget: u64) -> Result<Vec<FixedBitSet>> {
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        for f in &self.facets {
            let verts: Vec<usize> = f.ones().collect();
            if verts.len() >= 63 {
                return Err(Error::TooLarge { what: "facet", limit: 62 });
            }
            for mask in 0u64..(1u64 << verts.len()) {
                let s = bits::from_indices(
                    self.universe.len(),
                    verts.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v),
                );
                seen.insert(s);
                if seen.len() as u64 > budget {
                    return Err(Error::TooLarge { what: "face enumeration", limit: budget });
                }
            }
        }
        let mut out: Vec<FixedBitSet> = seen.into_iter().collect();
        out.sort_by_key(|s| (bits::count(s), bits::to_vec(s)));
        Ok(out)
    }

    /// Simplices properly contained in exactly one maximal simplex.
    pub fn free_faces(&self) -> Result<Vec<FixedBitSet>> {
        let mut out = Vec::new();
        for (fi, f) in self.facets.iter().enumerate() {
            let verts: Vec<usize> = f.ones().collect();
            if verts.len() > 25 {
                return Err(Error::TooLarge { what: "facet for free-face enumeration", limit: 25 });
            }
            // masks of f meeting each other facet, in f-local coordinates
            let others: Vec<u32> = self
                .facets
                .iter()
                .enumerate()
                .filter(|(gi, _)| *gi != fi)
                .map(|(_, g)| {
                    verts
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| g.contains(v))
                        .fold(0u32, |m, (k, _)| m | (1 << k))
                })
                .collect();
            let fullmask = (1u32 << verts.len()) - 1;
            for mask in 0..fullmask {
                if others.iter().all(|&g| mask & !g != 0) {
                    out.push(bits::from_indices(
                        self.universe.len(),
                        verts.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v),
                    ));
                }
            }
        }
        out.sort_by_key(|s| (bits::count(s), bits::to_vec(s)));
        Ok(out)
    }

    /// Fast test: some facet minus one vertex lies in no other facet.
    pub fn has_free_face(&self) -> bool {
        self.facets.iter().enumerate().any(|(fi, f)| {
            f.ones().any(|v| {
                let sub = bits::without(f, v);
                !self.facets.iter().enumerate().any(|(gi, g)| gi != fi && sub.is_subset(g))
            })
        })
    }

    /// Lk(S, tau); void when tau is not a simplex.
    pub fn link(&self, tau: &FixedBitSet) -> SimplicialComplex {
        if !self.contains(tau) {
            return Self::void(self.universe.clone());
        }
        let facets = self
            .facets
            .iter()
            .filter(|f| tau.is_subset(f))
            .map(|f| bits::minus(f, tau))
            .collect();
        Self::new(self.universe.clone(), facets).expect("same universe")
    }

    /// dl(S, sigma): simplices disjoint from sigma.
    pub fn deletion(&self, sigma: &FixedBitSet) -> SimplicialComplex {
        if self.is_void() {
            return self.clone();
        }
        let facets = self.facets.iter().map(|f| bits::minus(f, sigma)).collect();
        Self::new(self.universe.clone(), facets).expect("same universe")
    }

    /// Closed star: simplices whose union with sigma is a simplex.
    pub fn closed_star(&self, sigma: &FixedBitSet) -> SimplicialComplex {
        if !self.contains(sigma) {
            return Self::void(self.universe.clone());
        }
        let facets = self.facets.iter().filter(|f| sigma.is_subset(f)).cloned().collect();
        Self::new(self.universe.clone(), facets).expect("same universe")
    }

    /// Simplicial join over the concatenated universe.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        let mine: HashSet<&String> = self.universe.iter().collect();
        if let Some(v) = other.universe.iter().find(|v| mine.contains(v)) {
            return Err(Error::UniverseOverlap(v.clone()));
        }
        let mut universe = self.universe.clone();
        universe.extend(other.universe.iter().cloned());
        if self.is_void() || other.is_void() {
            return Ok(Self::void(universe));
        }
        let n = universe.len();
        let off = self.universe.len();
        let mut facets = Vec::new();
        for f in &self.facets {
            for g in &other.facets {
                facets.push(bits::from_indices(n, f.ones().chain(g.ones().map(|j| j + off))));
            }
        }
        Self::new(universe, facets)
    }

    /// Minimal subsets of the universe that are not simplices.
    pub fn minimal_nonfaces(&self, budget: u64) -> Result<Vec<FixedBitSet>> {
        let n = self.universe.len();
        if self.is_void() {
            return Ok(vec![bits::empty(n)]);
        }
        let faces = self.faces(budget)?;
        let face_set: HashSet<&FixedBitSet> = faces.iter().collect();
        let mut out = Vec::new();
        for f in &faces {
            let start = f.ones().next_back().map(|m| m + 1).unwrap_or(0);
            for v in start..n {
                let t = bits::with(f, v);
                if face_set.contains(&t) {
                    continue;
                }
                if t.ones().all(|u| face_set.contains(&bits::without(&t, u))) {
                    out.push(t);
                }
            }
        }
        out.sort_by_key(|s| (bits::count(s), bits::to_vec(s)));
        Ok(out)
    }

    /// Removes every vertex common to all facets, when there is more than
    /// one facet.
    pub fn strip_cone_apexes(&self) -> SimplicialComplex {
        if self.is_void() || self.facets.len() <= 1 {
            return self.clone();
        }
        let mut common = self.facets[0].clone();
        for f in &self.facets[1..] {
            common.intersect_with(f);
        }
        if common.is_clear() {
            return self.clone();
        }
        self.deletion(&common)
    }

    /// Injective vertex and facet maps sending each pattern facet P into its
    /// image facet. `bound` caps the number of search nodes.
    pub fn enumerate_embeddings(&self, host: &SimplicialComplex, bound: u64) -> Result<Vec<Embedding>> {
        let pattern = self;
        if pattern.is_void() || host.is_void() {
            return Err(Error::PreconditionViolated("embeddings need nonvoid complexes".into()));
        }
        let pv: Vec<usize> = (0..pattern.universe.len()).collect();
        if pv.len() > host.universe.len() || pattern.facets.len() > host.facets.len() {
            return Ok(Vec::new());
        }
        // facet-incidence degree of each vertex
        let pdeg: Vec<usize> = pv.iter().map(|&v| pattern.facets.iter().filter(|f| f.contains(v)).count()).collect();
        let hdeg: Vec<usize> = (0..host.universe.len())
            .map(|v| host.facets.iter().filter(|f| f.contains(v)).count())
            .collect();
        let mut order = pv.clone();
        order.sort_by_key(|&v| std::cmp::Reverse(pdeg[v]));
        struct St<'a> {
            p: &'a SimplicialComplex,
            h: &'a SimplicialComplex,
            order: Vec<usize>,
            pdeg: Vec<usize>,
            hdeg: Vec<usize>,
            vmap: Vec<Option<usize>>,
            vused: Vec<bool>,
            out: Vec<Embedding>,
            nodes: u64,
            bound: u64,
        }
        impl St<'_> {
            fn vertices(&mut self, k: usize) -> Result<()> {
                self.nodes += 1;
                if self.nodes > self.bound {
                    return Err(Error::TooLarge { what: "embedding search", limit: self.bound });
                }
                if k == self.order.len() {
                    let vmap: Vec<usize> = self.vmap.iter().map(|v| v.unwrap()).collect();
                    let mut fmap = Vec::new();
                    let mut fused = vec![false; self.h.facets.len()];
                    self.facets(0, &vmap, &mut fmap, &mut fused);
                    return Ok(());
                }
                let v = self.order[k];
                for w in 0..self.h.universe.len() {
                    if self.vused[w] || self.hdeg[w] < self.pdeg[v] {
                        continue;
                    }
                    self.vmap[v] = Some(w);
                    self.vused[w] = true;
                    // every pattern facet whose mapped part is complete so far
                    // must still fit in some host facet
                    let ok = self.p.facets.iter().all(|f| {
                        let img: Vec<usize> = f.ones().filter_map(|u| self.vmap[u]).collect();
                        self.h.facets.iter().any(|g| img.iter().all(|&x| g.contains(x)))
                    });
                    if ok {
                        self.vertices(k + 1)?;
                    }
                    self.vmap[v] = None;
                    self.vused[w] = false;
                }
                Ok(())
            }

            fn facets(&mut self, k: usize, vmap: &[usize], fmap: &mut Vec<usize>, fused: &mut Vec<bool>) {
                if k == self.p.facets.len() {
                    self.out.push(Embedding { vertex_map: vmap.to_vec(), facet_map: fmap.clone() });
                    return;
                }
                let f = &self.p.facets[k];
                for (gi, g) in self.h.facets.iter().enumerate() {
                    if fused[gi] || !f.ones().all(|u| g.contains(vmap[u])) {
                        continue;
                    }
                    fused[gi] = true;
                    fmap.push(gi);
                    self.facets(k + 1, vmap, fmap, fused);
                    fmap.pop();
                    fused[gi] = false;
                }
            }
        }
        let mut st = St {
            p: pattern,
            h: host,
            order,
            pdeg,
            hdeg,
            vmap: vec![None; pv.len()],
            vused: vec![false; host.universe.len()],
            out: Vec::new(),
            nodes: 0,
            bound,
        };
        st.vertices(0)?;
        Ok(st.out)
    }
}

/// Pattern vertex i goes to host vertex `vertex_map[i]`; pattern facet k to
/// host facet `facet_map[k]` (indices into `facets()`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertex_map: Vec<usize>,
    pub facet_map: Vec<usize>,
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_void() {
            return write!(f, "VOID");
        }
        if self.is_empty_complex() {
            return write!(f, "{{∅}}");
        }
        let parts: Vec<String> = self.facet_ids().iter().map(|s| format!("{{{}}}", s.join(","))).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Phi_R: generated by the rows.
pub fn dowker_attribute_complex(r: &Relation) -> SimplicialComplex {
    if r.is_void() {
        return SimplicialComplex::void(r.attributes().to_vec());
    }
    let rows = (0..r.n_individuals()).map(|i| r.row(i).clone()).collect();
    SimplicialComplex::new(r.attributes().to_vec(), rows).expect("relation ids unique")
}

/// Psi_R: generated by the columns.
pub fn dowker_association_complex(r: &Relation) -> SimplicialComplex {
    if r.is_void() {
        return SimplicialComplex::void(r.individuals().to_vec());
    }
    let cols = (0..r.n_attributes()).map(|j| r.col(j).clone()).collect();
    SimplicialComplex::new(r.individuals().to_vec(), cols).expect("relation ids unique")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ComplexOverride {
    Empty,
    Void,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkConstruction {
    ConditionalAttribute { gamma: Vec<String>, keep_blank_columns: bool },
    ConditionalAssociation { sigma: Vec<String> },
    RestrictedLink { sigma: Vec<String>, gamma: Vec<String> },
    Deletion { gamma: Vec<String> },
}

/// A subrelation modelling a link or deletion, with the special cases that
/// force its complexes to be empty or void.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkRelation {
    pub relation: Relation,
    pub construction: LinkConstruction,
    pub complex_override: Option<ComplexOverride>,
}

impl LinkRelation {
    fn complex(&self, universe: Vec<String>, build: fn(&Relation) -> SimplicialComplex) -> SimplicialComplex {
        match self.complex_override {
            Some(ComplexOverride::Empty) => SimplicialComplex::empty_complex(universe),
            Some(ComplexOverride::Void) => SimplicialComplex::void(universe),
            None => build(&self.relation),
        }
    }

    pub fn attribute_complex(&self) -> SimplicialComplex {
        self.complex(self.relation.attributes().to_vec(), dowker_attribute_complex)
    }

    pub fn association_complex(&self) -> SimplicialComplex {
        self.complex(self.relation.individuals().to_vec(), dowker_association_complex)
    }

    /// True when the complexes are ordinary Dowker complexes of a nonvoid relation.
    pub fn is_standard(&self) -> bool {
        self.complex_override.is_none() && !self.relation.is_void()
    }
}

/// Models Lk(Phi_R, gamma). Blank columns are discarded.
pub fn conditional_attribute_relation(r: &Relation, gamma: &AttributeSet) -> LinkRelation {
    conditional_attribute_relation_with(r, gamma, false)
}

/// As above; `keep_blank_columns` uses Y minus gamma as the attribute set.
pub fn conditional_attribute_relation_with(r: &Relation, gamma: &AttributeSet, keep_blank_columns: bool) -> LinkRelation {
    let construction = LinkConstruction::ConditionalAttribute {
        gamma: r.attribute_ids(gamma),
        keep_blank_columns,
    };
    let sigma = r.psi(gamma);
    let ytilde = if keep_blank_columns {
        bits::minus(&r.all_attributes(), gamma)
    } else {
        let mut u = r.no_attributes();
        for i in sigma.ones() {
            u.union_with(r.row(i));
        }
        bits::minus(&u, gamma)
    };
    let relation = r.restrict(&sigma, &ytilde);
    let complex_override = if sigma.is_clear() {
        Some(ComplexOverride::Void)
    } else if ytilde.is_clear() {
        Some(ComplexOverride::Empty)
    } else {
        None
    };
    LinkRelation { relation, construction, complex_override }
}

/// Models Lk(Psi_R, sigma).
pub fn conditional_association_relation(r: &Relation, sigma: &IndividualSet) -> LinkRelation {
    let construction = LinkConstruction::ConditionalAssociation { sigma: r.individual_ids(sigma) };
    let gamma = r.phi(sigma);
    let mut xt = r.no_individuals();
    for j in gamma.ones() {
        xt.union_with(r.col(j));
    }
    xt.difference_with(sigma);
    let relation = r.restrict(&xt, &gamma);
    let complex_override = if gamma.is_clear() {
        Some(ComplexOverride::Void)
    } else if xt.is_clear() {
        Some(ComplexOverride::Empty)
    } else {
        None
    };
    LinkRelation { relation, construction, complex_override }
}

/// Q(sigma, gamma): the link of sigma restricted to gamma.
pub fn restricted_link_relation(r: &Relation, sigma: &IndividualSet, gamma: &AttributeSet) -> Result<LinkRelation> {
    r.ensure_nonvoid()?;
    let phis = r.phi(sigma);
    if !sigma.is_clear() && phis.is_clear() {
        return Err(Error::PreconditionViolated("sigma is not a simplex of the association complex".into()));
    }
    if !gamma.is_subset(&phis) {
        return Err(Error::PreconditionViolated("gamma is not within phi(sigma)".into()));
    }
    let construction = LinkConstruction::RestrictedLink {
        sigma: r.individual_ids(sigma),
        gamma: r.attribute_ids(gamma),
    };
    let mut xt = r.no_individuals();
    for j in gamma.ones() {
        xt.union_with(r.col(j));
    }
    xt.difference_with(sigma);
    let relation = r.restrict(&xt, gamma);
    let complex_override = if *sigma == r.all_individuals() {
        Some(ComplexOverride::Void)
    } else if xt.is_clear() {
        Some(ComplexOverride::Empty)
    } else {
        None
    };
    Ok(LinkRelation { relation, construction, complex_override })
}

/// Drops the columns in gamma; models dl(Phi_R, gamma).
pub fn deletion_relation(r: &Relation, gamma: &AttributeSet) -> LinkRelation {
    let construction = LinkConstruction::Deletion { gamma: r.attribute_ids(gamma) };
    let keep = bits::minus(&r.all_attributes(), gamma);
    let relation = r.restrict(&r.all_individuals(), &keep);
    let complex_override = if keep.is_clear() && !r.is_void() {
        Some(ComplexOverride::Empty)
    } else {
        None
    };
    LinkRelation { relation, construction, complex_override }
}

/// Sorted, deduplicated id lists; handy for comparisons in reports.
pub fn sorted_id_sets(sets: &[Vec<String>]) -> Vec<Vec<String>> {
    let s: BTreeSet<Vec<String>> = sets
        .iter()
        .map(|v| {
            let mut v = v.clone();
            v.sort();
            v
        })
        .collect();
    s.into_iter().collect()
}
