//! Binary relations between individuals and attributes.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::bits;
use crate::error::{Error, Result};

/// A set of individuals, as a bitset over the individual universe.
pub type IndividualSet = FixedBitSet;
/// A set of attributes, as a bitset over the attribute universe.
pub type AttributeSet = FixedBitSet;

/// Default node budget for the exact cover searches.
pub const DEFAULT_NODE_CAP: u64 = 1 << 20;

/// A relation on X x Y. Rows and columns are both stored so that
/// phi and psi are plain word-ANDs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    individuals: Vec<String>,
    attributes: Vec<String>,
    ind_index: HashMap<String, usize>,
    attr_index: HashMap<String, usize>,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

fn index_map(kind: &'static str, ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut m = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if m.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateId { kind, id: id.clone() });
        }
    }
    Ok(m)
}

fn owned(ids: &[impl AsRef<str>]) -> Vec<String> {
    ids.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Builds a relation from pairs over the given universes.
pub fn build_relation<S: AsRef<str>>(
    pairs: &[(S, S)],
    individuals: &[S],
    attributes: &[S],
) -> Result<Relation> {
    Relation::new(individuals, attributes, pairs)
}

impl Relation {
    /// Rejects void universes.
    pub fn new<S: AsRef<str>>(individuals: &[S], attributes: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let r = Self::new_allow_void(individuals, attributes, pairs)?;
        if r.is_void() {
            return Err(Error::VoidRelation);
        }
        Ok(r)
    }

    pub fn new_allow_void<S: AsRef<str>>(
        individuals: &[S],
        attributes: &[S],
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let individuals = owned(individuals);
        let attributes = owned(attributes);
        let ind_index = index_map("individual", &individuals)?;
        let attr_index = index_map("attribute", &attributes)?;
        let mut rows = vec![bits::empty(attributes.len()); individuals.len()];
        for (x, y) in pairs {
            let i = *ind_index.get(x.as_ref()).ok_or_else(|| Error::UnknownId {
                kind: "individual",
                id: x.as_ref().to_string(),
            })?;
            let j = *attr_index.get(y.as_ref()).ok_or_else(|| Error::UnknownId {
                kind: "attribute",
                id: y.as_ref().to_string(),
            })?;
            rows[i].insert(j);
        }
        Ok(Self::assemble(individuals, attributes, ind_index, attr_index, rows))
    }

    /// Convenience constructor: one entry per individual listing its attributes.
    pub fn from_rows(attributes: &[&str], rows: &[(&str, &[&str])]) -> Result<Self> {
        let individuals: Vec<&str> = rows.iter().map(|(x, _)| *x).collect();
        let mut pairs = Vec::new();
        for (x, ys) in rows {
            for y in ys.iter() {
                pairs.push((*x, *y));
            }
        }
        Self::new(&individuals, attributes, &pairs)
    }

    /// Builds from a dense boolean matrix.
    pub fn from_matrix<S: AsRef<str>>(individuals: &[S], attributes: &[S], m: &[Vec<bool>]) -> Result<Self> {
        if m.len() != individuals.len() || m.iter().any(|r| r.len() != attributes.len()) {
            return Err(Error::UniverseMismatch("matrix shape does not match universes".into()));
        }
        let rows = m
            .iter()
            .map(|r| bits::from_indices(attributes.len(), r.iter().enumerate().filter(|(_, b)| **b).map(|(j, _)| j)))
            .collect();
        Self::from_bits(owned(individuals), owned(attributes), rows)
    }

    /// Rows given as bitsets over the attribute universe. Void allowed.
    pub fn from_bits(individuals: Vec<String>, attributes: Vec<String>, rows: Vec<FixedBitSet>) -> Result<Self> {
        let ind_index = index_map("individual", &individuals)?;
        let attr_index = index_map("attribute", &attributes)?;
        if rows.len() != individuals.len() {
            return Err(Error::UniverseMismatch("row count".into()));
        }
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.grow(attributes.len());
                r
            })
            .collect();
        Ok(Self::assemble(individuals, attributes, ind_index, attr_index, rows))
    }

    fn assemble(
        individuals: Vec<String>,
        attributes: Vec<String>,
        ind_index: HashMap<String, usize>,
        attr_index: HashMap<String, usize>,
        rows: Vec<FixedBitSet>,
    ) -> Self {
        let mut cols = vec![bits::empty(individuals.len()); attributes.len()];
        for (i, r) in rows.iter().enumerate() {
            for j in r.ones() {
                cols[j].insert(i);
            }
        }
        Relation {
            individuals,
            attributes,
            ind_index,
            attr_index,
            rows,
            cols,
        }
    }

    pub fn is_void(&self) -> bool {
        self.individuals.is_empty() || self.attributes.is_empty()
    }

    pub fn ensure_nonvoid(&self) -> Result<()> {
        if self.is_void() {
            Err(Error::VoidRelation)
        } else {
            Ok(())
        }
    }

    pub fn n_individuals(&self) -> usize {
        self.individuals.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn individuals(&self) -> &[String] {
        &self.individuals
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn individual_index(&self, id: &str) -> Result<usize> {
        self.ind_index.get(id).copied().ok_or_else(|| Error::UnknownId {
            kind: "individual",
            id: id.to_string(),
        })
    }

    pub fn attribute_index(&self, id: &str) -> Result<usize> {
        self.attr_index.get(id).copied().ok_or_else(|| Error::UnknownId {
            kind: "attribute",
            id: id.to_string(),
        })
    }

    /// Y_x
    pub fn row(&self, i: usize) -> &AttributeSet {
        &self.rows[i]
    }

    /// X_y
    pub fn col(&self, j: usize) -> &IndividualSet {
        &self.cols[j]
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(bits::count).sum()
    }

    /// All pairs as index tuples, row-major.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                out.push((i, j));
            }
        }
        out
    }

    pub fn pair_ids(&self) -> Vec<(String, String)> {
        self.pairs()
            .into_iter()
            .map(|(i, j)| (self.individuals[i].clone(), self.attributes[j].clone()))
            .collect()
    }

    pub fn individual_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<IndividualSet> {
        let mut b = bits::empty(self.n_individuals());
        for id in ids {
            b.insert(self.individual_index(id.as_ref())?);
        }
        Ok(b)
    }

    pub fn attribute_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<AttributeSet> {
        let mut b = bits::empty(self.n_attributes());
        for id in ids {
            b.insert(self.attribute_index(id.as_ref())?);
        }
        Ok(b)
    }

    pub fn individual_ids(&self, s: &IndividualSet) -> Vec<String> {
        s.ones().map(|i| self.individuals[i].clone()).collect()
    }

    pub fn attribute_ids(&self, s: &AttributeSet) -> Vec<String> {
        s.ones().map(|j| self.attributes[j].clone()).collect()
    }

    pub fn no_individuals(&self) -> IndividualSet {
        bits::empty(self.n_individuals())
    }

    pub fn all_individuals(&self) -> IndividualSet {
        bits::full(self.n_individuals())
    }

    pub fn no_attributes(&self) -> AttributeSet {
        bits::empty(self.n_attributes())
    }

    pub fn all_attributes(&self) -> AttributeSet {
        bits::full(self.n_attributes())
    }

    /// phi(sigma): attributes shared by every individual in sigma.
    pub fn phi(&self, sigma: &IndividualSet) -> AttributeSet {
        let mut out = self.all_attributes();
        for i in sigma.ones() {
            out.intersect_with(&self.rows[i]);
        }
        out
    }

    /// psi(gamma): individuals having every attribute in gamma.
    pub fn psi(&self, gamma: &AttributeSet) -> IndividualSet {
        let mut out = self.all_individuals();
        for j in gamma.ones() {
            out.intersect_with(&self.cols[j]);
        }
        out
    }

    /// phi o psi
    pub fn attribute_closure(&self, gamma: &AttributeSet) -> AttributeSet {
        self.phi(&self.psi(gamma))
    }

    /// psi o phi
    pub fn association_closure(&self, sigma: &IndividualSet) -> IndividualSet {
        self.psi(&self.phi(sigma))
    }

    pub fn is_attribute_face(&self, gamma: &AttributeSet) -> bool {
        !self.psi(gamma).is_clear()
    }

    pub fn is_association_face(&self, sigma: &IndividualSet) -> bool {
        !self.phi(sigma).is_clear()
    }

    pub fn preserves_attribute_privacy(&self) -> bool {
        (0..self.n_individuals()).all(|i| self.attribute_privacy_for_index(i))
    }

    pub fn preserves_association_privacy(&self) -> bool {
        (0..self.n_attributes()).all(|j| {
            let xy = &self.cols[j];
            xy.ones().all(|i| {
                let s = bits::without(xy, i);
                self.association_closure(&s) == s
            })
        })
    }

    pub fn preserves_attribute_privacy_for(&self, x: &str) -> Result<bool> {
        Ok(self.attribute_privacy_for_index(self.individual_index(x)?))
    }

    /// Checks every Y_x minus one attribute.
    pub fn attribute_privacy_for_index(&self, i: usize) -> bool {
        let yx = &self.rows[i];
        yx.ones().all(|j| {
            let g = bits::without(yx, j);
            self.attribute_closure(&g) == g
        })
    }

    pub fn uniquely_identifiable(&self, x: &str) -> Result<bool> {
        Ok(self.uniquely_identifiable_index(self.individual_index(x)?))
    }

    pub fn uniquely_identifiable_index(&self, i: usize) -> bool {
        let s = self.psi(&self.rows[i]);
        bits::count(&s) == 1 && s.contains(i)
    }

    pub fn blank_rows(&self) -> Vec<usize> {
        (0..self.n_individuals()).filter(|&i| self.rows[i].is_clear()).collect()
    }

    pub fn blank_columns(&self) -> Vec<usize> {
        (0..self.n_attributes()).filter(|&j| self.cols[j].is_clear()).collect()
    }

    pub fn is_tight(&self) -> bool {
        self.blank_rows().is_empty() && self.blank_columns().is_empty()
    }

    /// Connected components of the bipartite incidence graph, as
    /// (individual set, attribute set) pairs. Isolated blank rows and
    /// columns form their own components.
    fn component_sets(&self) -> Vec<(IndividualSet, AttributeSet)> {
        let n = self.n_individuals();
        let m = self.n_attributes();
        let mut seen_x = vec![false; n];
        let mut seen_y = vec![false; m];
        let mut out = Vec::new();
        let start = |node: (bool, usize), seen_x: &mut Vec<bool>, seen_y: &mut Vec<bool>| {
            let mut xs = bits::empty(n);
            let mut ys = bits::empty(m);
            let mut q = VecDeque::new();
            q.push_back(node);
            while let Some((is_x, k)) = q.pop_front() {
                if is_x {
                    if seen_x[k] {
                        continue;
                    }
                    seen_x[k] = true;
                    xs.insert(k);
                    for j in self.rows[k].ones() {
                        if !seen_y[j] {
                            q.push_back((false, j));
                        }
                    }
                } else {
                    if seen_y[k] {
                        continue;
                    }
                    seen_y[k] = true;
                    ys.insert(k);
                    for i in self.cols[k].ones() {
                        if !seen_x[i] {
                            q.push_back((true, i));
                        }
                    }
                }
            }
            (xs, ys)
        };
        for i in 0..n {
            if !seen_x[i] {
                out.push(start((true, i), &mut seen_x, &mut seen_y));
            }
        }
        for j in 0..m {
            if !seen_y[j] {
                out.push(start((false, j), &mut seen_x, &mut seen_y));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.component_sets().len() <= 1
    }

    /// Tight components, in order of their first individual.
    pub fn components(&self) -> Result<Vec<Relation>> {
        self.ensure_nonvoid()?;
        if !self.is_tight() {
            return Err(Error::NotTight);
        }
        Ok(self
            .component_sets()
            .into_iter()
            .map(|(xs, ys)| self.restrict(&xs, &ys))
            .collect())
    }

    /// R restricted to rows x cols, keeping the universe order. May be void.
    pub fn restrict(&self, rows: &IndividualSet, cols: &AttributeSet) -> Relation {
        let inds: Vec<String> = self.individual_ids(rows);
        let attrs: Vec<String> = self.attribute_ids(cols);
        let col_list: Vec<usize> = cols.ones().collect();
        let new_rows = rows
            .ones()
            .map(|i| bits::from_indices(attrs.len(), col_list.iter().enumerate().filter(|(_, &j)| self.rows[i].contains(j)).map(|(k, _)| k)))
            .collect();
        Relation::from_bits(inds, attrs, new_rows).expect("restriction keeps ids unique")
    }

    /// Transpose: attributes become individuals.
    pub fn transpose(&self) -> Relation {
        Relation::from_bits(self.attributes.clone(), self.individuals.clone(), self.cols.clone())
            .expect("ids unique")
    }

    pub fn add_entry(&self, x: &str, y: &str) -> Result<Relation> {
        let i = self.individual_index(x)?;
        let j = self.attribute_index(y)?;
        let mut rows = self.rows.clone();
        rows[i].insert(j);
        Relation::from_bits(self.individuals.clone(), self.attributes.clone(), rows)
    }

    pub fn remove_entry(&self, x: &str, y: &str) -> Result<Relation> {
        let i = self.individual_index(x)?;
        let j = self.attribute_index(y)?;
        let mut rows = self.rows.clone();
        rows[i].set(j, false);
        Relation::from_bits(self.individuals.clone(), self.attributes.clone(), rows)
    }

    /// Single-entry additions that destroy at least one free face of the
    /// attribute complex that is not itself some individual's row.
    pub fn suggest_disinformation(&self) -> Vec<(String, String)> {
        if self.is_void() {
            return Vec::new();
        }
        let rows: HashSet<Vec<usize>> = self.rows.iter().map(bits::to_vec).collect();
        let before: Vec<Vec<usize>> = crate::complex::dowker_attribute_complex(self)
            .free_faces()
            .unwrap_or_default()
            .iter()
            .map(bits::to_vec)
            .filter(|f| !rows.contains(f))
            .collect();
        if before.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for i in 0..self.n_individuals() {
            for j in 0..self.n_attributes() {
                if self.has(i, j) {
                    continue;
                }
                let edited = self
                    .add_entry(&self.individuals[i], &self.attributes[j])
                    .expect("valid ids");
                let after: HashSet<Vec<usize>> = crate::complex::dowker_attribute_complex(&edited)
                    .free_faces()
                    .unwrap_or_default()
                    .iter()
                    .map(bits::to_vec)
                    .collect();
                if before.iter().any(|f| !after.contains(f)) {
                    out.push((self.individuals[i].clone(), self.attributes[j].clone()));
                }
            }
        }
        out
    }

    /// Minimum-size chi within phi(sigma) with psi(chi) = sigma.
    pub fn min_identifying_set(&self, sigma: &IndividualSet, cap: u64) -> Result<AttributeSet> {
        self.ensure_nonvoid()?;
        let gamma = self.phi(sigma);
        if &self.psi(&gamma) != sigma {
            return Err(Error::NotStable);
        }
        let universe = bits::minus(&self.all_individuals(), sigma);
        let cand: Vec<usize> = gamma.ones().collect();
        let sets: Vec<FixedBitSet> = cand
            .iter()
            .map(|&z| bits::minus(&self.all_individuals(), &self.cols[z]))
            .collect();
        let cover = min_set_cover(&universe, &sets, None, cap)?
            .expect("phi(sigma) itself covers when sigma is stable");
        Ok(bits::from_indices(self.n_attributes(), cover.into_iter().map(|k| cand[k])))
    }

    /// MinInf: is there gamma within Y_x minus y, |gamma| <= k, psi(gamma) within X_y?
    pub fn mininf_decision(&self, x: &str, y: &str, k: usize) -> Result<bool> {
        self.mininf_decision_capped(x, y, k, DEFAULT_NODE_CAP)
    }

    pub fn mininf_decision_capped(&self, x: &str, y: &str, k: usize, cap: u64) -> Result<bool> {
        let i = self.individual_index(x)?;
        let j = self.attribute_index(y)?;
        if !self.has(i, j) {
            return Err(Error::PreconditionViolated(format!("{y} is not an attribute of {x}")));
        }
        let universe = bits::minus(&self.all_individuals(), &self.cols[j]);
        let cand: Vec<usize> = self.rows[i].ones().filter(|&z| z != j).collect();
        let sets: Vec<FixedBitSet> = cand
            .iter()
            .map(|&z| bits::minus(&self.all_individuals(), &self.cols[z]))
            .collect();
        Ok(min_set_cover(&universe, &sets, Some(k), cap)?.is_some())
    }

    /// Boolean product: self on X x Y, other on Y x Z.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        if self.attributes != other.individuals {
            return Err(Error::UniverseMismatch(
                "left attributes must equal right individuals in order".into(),
            ));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = bits::empty(other.n_attributes());
                for j in r.ones() {
                    acc.union_with(&other.rows[j]);
                }
                acc
            })
            .collect();
        Relation::from_bits(self.individuals.clone(), other.attributes.clone(), rows)
    }

    /// Identity relation on the given ids.
    pub fn identity<S: AsRef<str>>(ids: &[S]) -> Result<Relation> {
        let n = ids.len();
        let rows = (0..n).map(|i| bits::from_indices(n, [i])).collect();
        let r = Relation::from_bits(owned(ids), owned(ids), rows)?;
        r.ensure_nonvoid()?;
        Ok(r)
    }

    pub fn all_ones<S: AsRef<str>>(individuals: &[S], attributes: &[S]) -> Result<Relation> {
        let n = individuals.len();
        let m = attributes.len();
        Relation::from_bits(owned(individuals), owned(attributes), vec![bits::full(m); n])
            .and_then(|r| if r.is_void() { Err(Error::VoidRelation) } else { Ok(r) })
    }

    /// Theorem-level check for square relations. See [`SquareReport`].
    pub fn check_square_symmetry(&self) -> Result<SquareReport> {
        let n = self.n_individuals();
        if n != self.n_attributes() || n <= 1 {
            return Err(Error::PreconditionViolated("need |X| = |Y| > 1".into()));
        }
        if !self.blank_columns().is_empty() {
            return Err(Error::PreconditionViolated("blank columns present".into()));
        }
        let attribute_privacy = self.preserves_attribute_privacy();
        let no_blank_rows = self.blank_rows().is_empty();
        let all_identifiable = (0..n).all(|i| self.uniquely_identifiable_index(i));
        let association_privacy = self.preserves_association_privacy();
        let holds = !attribute_privacy || (no_blank_rows && all_identifiable && association_privacy);
        let counterexample = if holds {
            None
        } else {
            Some(format!(
                "attribute privacy holds but no_blank_rows={no_blank_rows}, all_identifiable={all_identifiable}, association_privacy={association_privacy}"
            ))
        };
        Ok(SquareReport {
            attribute_privacy,
            no_blank_rows,
            all_identifiable,
            association_privacy,
            holds,
            counterexample,
        })
    }

    /// Per-component shape classification for tight relations.
    pub fn classify_privacy_shape(&self) -> Result<Vec<ComponentShape>> {
        let comps = self.components()?;
        Ok(comps
            .into_iter()
            .map(|c| ComponentShape {
                shape: shape_of(&c),
                individuals: c.individuals.clone(),
                attributes: c.attributes.clone(),
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareReport {
    pub attribute_privacy: bool,
    pub no_blank_rows: bool,
    pub all_identifiable: bool,
    pub association_privacy: bool,
    /// False only when attribute privacy holds and a conclusion fails.
    pub holds: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PrivacyShape {
    Singleton,
    CyclicStaircase,
    SphericalBoundary,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentShape {
    pub individuals: Vec<String>,
    pub attributes: Vec<String>,
    pub shape: PrivacyShape,
}

fn shape_of(c: &Relation) -> PrivacyShape {
    let n = c.n_individuals();
    if n != c.n_attributes() {
        return PrivacyShape::Other;
    }
    if n == 1 {
        return if c.has(0, 0) { PrivacyShape::Singleton } else { PrivacyShape::Other };
    }
    // complement is a permutation matrix
    let missing_ok = (0..n).all(|i| bits::count(c.row(i)) == n - 1) && (0..n).all(|j| bits::count(c.col(j)) == n - 1);
    if missing_ok {
        return PrivacyShape::SphericalBoundary;
    }
    // 2-regular connected bipartite graph = one 2n-cycle
    let two_regular = (0..n).all(|i| bits::count(c.row(i)) == 2) && (0..n).all(|j| bits::count(c.col(j)) == 2);
    if n >= 3 && two_regular && c.is_connected() {
        return PrivacyShape::CyclicStaircase;
    }
    PrivacyShape::Other
}

/// n x n cyclic staircase: row i holds y_i and y_{i+1}, row n holds y_1, y_n.
pub fn cyclic_staircase(n: usize) -> Result<Relation> {
    if n < 3 {
        return Err(Error::OutOfRange("cyclic staircase needs n >= 3".into()));
    }
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let rows = (0..n).map(|i| bits::from_indices(n, [i, (i + 1) % n])).collect();
    Relation::from_bits(xs, ys, rows)
}

/// n x n with the anti-diagonal blank.
pub fn spherical_boundary(n: usize) -> Result<Relation> {
    if n < 2 {
        return Err(Error::OutOfRange("spherical boundary needs n >= 2".into()));
    }
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let rows = (0..n).map(|i| bits::without(&bits::full(n), n - 1 - i)).collect();
    Relation::from_bits(xs, ys, rows)
}

/// Isomorphism up to independent row and column permutations.
pub fn is_isomorphic(a: &Relation, b: &Relation) -> bool {
    let n = a.n_individuals();
    let m = a.n_attributes();
    if n != b.n_individuals() || m != b.n_attributes() || a.pair_count() != b.pair_count() {
        return false;
    }
    let deg = |r: &Relation| {
        let mut rd: Vec<usize> = (0..r.n_individuals()).map(|i| bits::count(r.row(i))).collect();
        let mut cd: Vec<usize> = (0..r.n_attributes()).map(|j| bits::count(r.col(j))).collect();
        rd.sort_unstable();
        cd.sort_unstable();
        (rd, cd)
    };
    if deg(a) != deg(b) {
        return false;
    }
    // Assign columns one at a time; after each step the multisets of row
    // restrictions to the assigned columns must agree.
    fn rec(a: &Relation, b: &Relation, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = map.len();
        if k == a.n_attributes() {
            return true;
        }
        for t in 0..b.n_attributes() {
            if used[t] || bits::count(a.col(k)) != bits::count(b.col(t)) {
                continue;
            }
            map.push(t);
            used[t] = true;
            let mut pa: Vec<Vec<bool>> = (0..a.n_individuals())
                .map(|i| (0..=k).map(|c| a.has(i, c)).collect())
                .collect();
            let mut pb: Vec<Vec<bool>> = (0..b.n_individuals())
                .map(|i| map.iter().map(|&c| b.has(i, c)).collect())
                .collect();
            pa.sort();
            pb.sort();
            if pa == pb && rec(a, b, map, used) {
                return true;
            }
            map.pop();
            used[t] = false;
        }
        false
    }
    rec(a, b, &mut Vec::new(), &mut vec![false; m])
}

/// Builds the MinInf instance for a set-cover instance over elements
/// 0..universe_size. Returns (relation, x, y, k).
pub fn setcover_to_mininf(universe_size: usize, sets: &[Vec<usize>], k: usize) -> Result<(Relation, String, String, usize)> {
    let mut inds = vec!["x0".to_string()];
    inds.extend((1..=universe_size).map(|u| format!("u{u}")));
    let mut attrs = vec!["y0".to_string()];
    attrs.extend((1..=sets.len()).map(|s| format!("s{s}")));
    let mut rows = vec![bits::empty(attrs.len()); inds.len()];
    rows[0].insert_range(..);
    for (s, set) in sets.iter().enumerate() {
        for u in 0..universe_size {
            if set.contains(&u) {
                continue;
            }
            rows[u + 1].insert(s + 1);
        }
        if set.iter().any(|&u| u >= universe_size) {
            return Err(Error::OutOfRange("set element outside universe".into()));
        }
    }
    let r = Relation::from_bits(inds, attrs, rows)?;
    Ok((r, "x0".into(), "y0".into(), k))
}

/// Exact minimum set cover by branch and bound. With `limit = Some(k)`
/// only covers of size <= k are sought. Returns indices into `sets`.
pub fn min_set_cover(
    universe: &FixedBitSet,
    sets: &[FixedBitSet],
    limit: Option<usize>,
    node_cap: u64,
) -> Result<Option<Vec<usize>>> {
    let mut reach = bits::empty(universe.len());
    for s in sets {
        reach.union_with(s);
    }
    if !universe.is_subset(&reach) {
        return Ok(None);
    }
    struct Search<'a> {
        sets: &'a [FixedBitSet],
        best: Option<Vec<usize>>,
        bound: usize,
        nodes: u64,
        cap: u64,
    }
    impl Search<'_> {
        fn go(&mut self, uncovered: &FixedBitSet, chosen: &mut Vec<usize>) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::CapExceeded { what: "set cover search nodes", cap: self.cap });
            }
            if uncovered.is_clear() {
                if chosen.len() < self.bound {
                    self.bound = chosen.len();
                    self.best = Some(chosen.clone());
                }
                return Ok(());
            }
            if chosen.len() + 1 >= self.bound {
                return Ok(());
            }
            let left = bits::count(uncovered);
            let widest = self
                .sets
                .iter()
                .map(|s| bits::and(s, uncovered).count_ones(..))
                .max()
                .unwrap_or(0);
            if widest == 0 || chosen.len() + left.div_ceil(widest) >= self.bound {
                return Ok(());
            }
            // branch on the hardest element
            let e = uncovered
                .ones()
                .min_by_key(|&e| self.sets.iter().filter(|s| s.contains(e)).count())
                .expect("nonempty");
            let mut opts: Vec<(usize, usize)> = self
                .sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(e))
                .map(|(k, s)| (k, bits::and(s, uncovered).count_ones(..)))
                .collect();
            opts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            for (k, _) in opts {
                let rest = bits::minus(uncovered, &self.sets[k]);
                chosen.push(k);
                self.go(&rest, chosen)?;
                chosen.pop();
            }
            Ok(())
        }
    }
    let bound = limit.map(|k| k + 1).unwrap_or(usize::MAX);
    let mut s = Search { sets, best: None, bound, nodes: 0, cap: node_cap };
    s.go(universe, &mut Vec::new())?;
    Ok(s.best.map(|mut v| {
        v.sort_unstable();
        v
    }))
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for a in &self.attributes {
            write!(f, " {a}")?;
        }
        writeln!(f)?;
        for (i, x) in self.individuals.iter().enumerate() {
            write!(f, "{x} |")?;
            for (j, a) in self.attributes.iter().enumerate() {
                let w = a.chars().count();
                let c = if self.has(i, j) { "*" } else { "." };
                write!(f, " {c:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
