//! The doubly-labeled poset P_R, the Galois lattice, chains and
//! informative attribute release sequences.

use std::collections::{BTreeMap, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;

use crate::bits;
use crate::complex::{conditional_association_relation, restricted_link_relation, ComplexOverride, SimplicialComplex};
use crate::error::{Error, Result};
use crate::relation::{AttributeSet, IndividualSet, Relation};

/// Largest |gamma| for which every ordering is checked directly.
pub const ORDERING_CHECK_MAX: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPair {
    pub sigma: IndividualSet,
    pub gamma: AttributeSet,
}

impl LabeledPair {
    pub fn leq(&self, other: &LabeledPair) -> bool {
        self.sigma.is_subset(&other.sigma)
    }

    /// e.g. "(123, B)" using the relation's ids.
    pub fn label(&self, r: &Relation) -> String {
        let s = r.individual_ids(&self.sigma);
        let g = r.attribute_ids(&self.gamma);
        let join = |v: Vec<String>| {
            if v.iter().all(|x| x.chars().count() == 1) {
                v.concat()
            } else {
                v.join(",")
            }
        };
        let s = if s.is_empty() { "∅".to_string() } else { join(s) };
        let g = if g.is_empty() { "∅".to_string() } else { join(g) };
        format!("({s}, {g})")
    }
}

/// Cover relation of a finite poset. `up[i]` lists the elements covering i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hasse {
    pub up: Vec<Vec<usize>>,
    pub down: Vec<Vec<usize>>,
    /// A linear extension, smallest first.
    pub topo: Vec<usize>,
}

impl Hasse {
    /// Transitive reduction of the order given by sigma inclusion.
    pub fn from_pairs(elements: &[LabeledPair]) -> Hasse {
        let n = elements.len();
        let mut topo: Vec<usize> = (0..n).collect();
        topo.sort_by_key(|&i| (bits::count(&elements[i].sigma), bits::to_vec(&elements[i].sigma)));
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &i in &topo {
            let mut above: Vec<usize> = (0..n)
                .filter(|&j| j != i && bits::is_proper_subset(&elements[i].sigma, &elements[j].sigma))
                .collect();
            above.sort_by_key(|&j| bits::count(&elements[j].sigma));
            let mut covers: Vec<usize> = Vec::new();
            for j in above {
                if !covers.iter().any(|&c| elements[c].sigma.is_subset(&elements[j].sigma)) {
                    covers.push(j);
                }
            }
            covers.sort_unstable();
            for &c in &covers {
                down[c].push(i);
            }
            up[i] = covers;
        }
        for d in &mut down {
            d.sort_unstable();
        }
        Hasse { up, down, topo }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    /// Longest chain length in edges; -1 for the empty poset.
    pub fn length(&self) -> isize {
        if self.is_empty() {
            return -1;
        }
        let h = self.height_up();
        h.into_iter().max().unwrap_or(0) as isize
    }

    /// Longest path from a minimal element up to each node.
    fn height_up(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for &v in &self.topo {
            for &w in &self.up[v] {
                h[w] = h[w].max(h[v] + 1);
            }
        }
        h
    }

    /// Longest path from each node down to a minimal element.
    fn depth_down(&self) -> Vec<usize> {
        self.height_up()
    }

    /// Longest path from each node up to a maximal element.
    fn height_to_top(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for &v in self.topo.iter().rev() {
            for &w in &self.down[v] {
                h[w] = h[w].max(h[v] + 1);
            }
        }
        h
    }

    /// Number of maximal chains with at least `min_length` edges, by dynamic
    /// programming over the cover graph.
    pub fn count_maximal_chains(&self, min_length: usize) -> BigUint {
        let n = self.len();
        let mut cnt: Vec<Vec<BigUint>> = vec![Vec::new(); n];
        for &v in &self.topo {
            if self.down[v].is_empty() {
                cnt[v] = vec![BigUint::from(1u32)];
            }
            let cur = std::mem::take(&mut cnt[v]);
            for &w in &self.up[v] {
                let t = &mut cnt[w];
                if t.len() < cur.len() + 1 {
                    t.resize(cur.len() + 1, BigUint::default());
                }
                for (l, c) in cur.iter().enumerate() {
                    t[l + 1] += c;
                }
            }
            cnt[v] = cur;
        }
        let mut total = BigUint::default();
        for v in self.maximal() {
            for (l, c) in cnt[v].iter().enumerate() {
                if l >= min_length {
                    total += c;
                }
            }
        }
        total
    }

    /// Maximal chains (top element first) with at least `min_length` edges.
    pub fn maximal_chains(&self, min_length: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
        let depth = self.depth_down();
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn rec(
            h: &Hasse,
            depth: &[usize],
            v: usize,
            min_length: usize,
            cap: usize,
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) -> Result<()> {
            path.push(v);
            if path.len() - 1 + depth[v] >= min_length {
                if h.down[v].is_empty() {
                    if out.len() >= cap {
                        return Err(Error::CapExceeded { what: "maximal chain enumeration", cap: cap as u64 });
                    }
                    out.push(path.clone());
                } else {
                    for &w in &h.down[v] {
                        rec(h, depth, w, min_length, cap, path, out)?;
                    }
                }
            }
            path.pop();
            Ok(())
        }
        for t in self.maximal() {
            rec(self, &depth, t, min_length, cap, &mut path, &mut out)?;
        }
        Ok(out)
    }
}

/// P_R together with its cover relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublyLabeledPoset {
    pub elements: Vec<LabeledPair>,
    pub hasse: Hasse,
}

impl DoublyLabeledPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn length(&self) -> isize {
        self.hasse.length()
    }

    pub fn position(&self, sigma: &IndividualSet) -> Option<usize> {
        self.elements.iter().position(|p| &p.sigma == sigma)
    }

    pub fn count_maximal_chains(&self, min_length: usize) -> BigUint {
        self.hasse.count_maximal_chains(min_length)
    }

    pub fn maximal_chains(&self, min_length: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
        self.hasse.maximal_chains(min_length, cap)
    }
}

fn sort_pairs(v: &mut [LabeledPair]) {
    v.sort_by_key(|p| (bits::count(&p.sigma), bits::to_vec(&p.sigma)));
}

/// The fixed points (sigma, gamma) with both sides nonempty, closed from
/// column-generated and row-generated pairs under meet.
pub fn doubly_labeled_poset(r: &Relation) -> Result<DoublyLabeledPoset> {
    r.ensure_nonvoid()?;
    let mut gens: Vec<IndividualSet> = Vec::new();
    for j in 0..r.n_attributes() {
        if !r.col(j).is_clear() {
            gens.push(r.col(j).clone());
        }
    }
    for i in 0..r.n_individuals() {
        if !r.row(i).is_clear() {
            gens.push(r.association_closure(&bits::from_indices(r.n_individuals(), [i])));
        }
    }
    let mut seen: HashSet<IndividualSet> = gens.iter().cloned().collect();
    let mut queue: Vec<IndividualSet> = seen.iter().cloned().collect();
    let cols: Vec<IndividualSet> = (0..r.n_attributes())
        .filter(|&j| !r.col(j).is_clear())
        .map(|j| r.col(j).clone())
        .collect();
    while let Some(s) = queue.pop() {
        for c in &cols {
            let m = bits::and(&s, c);
            if !m.is_clear() && seen.insert(m.clone()) {
                queue.push(m);
            }
        }
    }
    let mut elements: Vec<LabeledPair> = seen
        .into_iter()
        .map(|sigma| LabeledPair { gamma: r.phi(&sigma), sigma })
        .collect();
    sort_pairs(&mut elements);
    let hasse = Hasse::from_pairs(&elements);
    Ok(DoublyLabeledPoset { elements, hasse })
}

/// Definitional construction of P_R by closing every attribute subset;
/// exponential, used as a cross-check.
pub fn doubly_labeled_poset_by_subsets(r: &Relation) -> Result<Vec<LabeledPair>> {
    r.ensure_nonvoid()?;
    let m = r.n_attributes();
    if m > 20 {
        return Err(Error::TooLarge { what: "attribute subsets", limit: 20 });
    }
    let mut seen = HashSet::new();
    for mask in 1u32..(1u32 << m) {
        let g = bits::from_indices(m, (0..m).filter(|j| mask >> j & 1 == 1));
        let s = r.psi(&g);
        if !s.is_clear() {
            seen.insert(LabeledPair { gamma: r.phi(&s), sigma: s });
        }
    }
    let mut v: Vec<LabeledPair> = seen.into_iter().collect();
    sort_pairs(&mut v);
    Ok(v)
}

/// P_R with top and bottom (adjoined when missing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisLattice {
    pub elements: Vec<LabeledPair>,
    pub hasse: Hasse,
    pub top: usize,
    pub bottom: usize,
    pub top_adjoined: bool,
    pub bottom_adjoined: bool,
    index: HashMap<IndividualSet, usize>,
}

pub fn galois_lattice(r: &Relation) -> Result<GaloisLattice> {
    let p = doubly_labeled_poset(r)?;
    let mut elements = p.elements;
    let all_x = r.all_individuals();
    let all_y = r.all_attributes();
    let top_adjoined = r.phi(&all_x).is_clear();
    let bottom_adjoined = r.psi(&all_y).is_clear();
    if top_adjoined {
        elements.push(LabeledPair { sigma: all_x.clone(), gamma: r.no_attributes() });
    }
    if bottom_adjoined {
        elements.push(LabeledPair { sigma: r.no_individuals(), gamma: all_y });
    }
    sort_pairs(&mut elements);
    let hasse = Hasse::from_pairs(&elements);
    let index: HashMap<IndividualSet, usize> =
        elements.iter().enumerate().map(|(i, p)| (p.sigma.clone(), i)).collect();
    let top = index[&all_x];
    let bottom = *hasse.topo.first().expect("lattice nonempty");
    Ok(GaloisLattice { elements, hasse, top, bottom, top_adjoined, bottom_adjoined, index })
}

impl GaloisLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn length(&self) -> isize {
        self.hasse.length()
    }

    pub fn position(&self, sigma: &IndividualSet) -> Option<usize> {
        self.index.get(sigma).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[a].leq(&self.elements[b])
    }

    /// (psi phi(sigma1 u sigma2), gamma1 n gamma2)
    pub fn join(&self, r: &Relation, a: usize, b: usize) -> usize {
        let u = bits::or(&self.elements[a].sigma, &self.elements[b].sigma);
        self.index[&r.association_closure(&u)]
    }

    /// (sigma1 n sigma2, phi psi(gamma1 u gamma2))
    pub fn meet(&self, _r: &Relation, a: usize, b: usize) -> usize {
        let s = bits::and(&self.elements[a].sigma, &self.elements[b].sigma);
        self.index[&s]
    }

    /// Indices of proper elements (those of P_R).
    pub fn proper(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !(self.top_adjoined && i == self.top) && !(self.bottom_adjoined && i == self.bottom))
            .collect()
    }

    pub fn count_maximal_chains(&self, min_length: usize) -> BigUint {
        self.hasse.count_maximal_chains(min_length)
    }

    pub fn maximal_chains(&self, min_length: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
        self.hasse.maximal_chains(min_length, cap)
    }

    /// Longest chain from the top down to element `e`.
    pub fn longest_path_from_top(&self, e: usize) -> usize {
        self.hasse.height_to_top()[e]
    }
}

/// y_i not in the closure of y_1..y_{i-1}, for every i.
pub fn is_informative(r: &Relation, seq: &[usize]) -> bool {
    first_uninformative(r, seq).is_none()
}

/// 1-based position of the first inferable attribute.
pub fn first_uninformative(r: &Relation, seq: &[usize]) -> Option<usize> {
    let mut prefix = r.no_attributes();
    for (k, &y) in seq.iter().enumerate() {
        if r.attribute_closure(&prefix).contains(y) {
            return Some(k + 1);
        }
        prefix.insert(y);
    }
    None
}

pub fn is_informative_ids<S: AsRef<str>>(r: &Relation, seq: &[S]) -> Result<bool> {
    let idx = seq.iter().map(|s| r.attribute_index(s.as_ref())).collect::<Result<Vec<_>>>()?;
    Ok(is_informative(r, &idx))
}

/// Sequences read off a maximal chain of the lattice given top first.
/// With `all = false` only the canonical sequence (least attribute id at each
/// step) is returned.
pub fn iars_from_chain(r: &Relation, l: &GaloisLattice, chain: &[usize], all: bool, cap: usize) -> Result<Vec<Vec<usize>>> {
    if chain.len() < 2 {
        return Err(Error::NotMaximal("chain needs length at least 1".into()));
    }
    if chain[0] != l.top || *chain.last().unwrap() != l.bottom {
        return Err(Error::NotMaximal("chain must run from top to bottom".into()));
    }
    for w in chain.windows(2) {
        if !l.hasse.down[w[0]].contains(&w[1]) {
            return Err(Error::NotMaximal(format!(
                "{} does not cover {}",
                l.elements[w[0]].label(r),
                l.elements[w[1]].label(r)
            )));
        }
    }
    let choices: Vec<Vec<usize>> = chain
        .windows(2)
        .map(|w| {
            let mut c: Vec<usize> = bits::minus(&l.elements[w[1]].gamma, &l.elements[w[0]].gamma).ones().collect();
            c.sort_by(|a, b| r.attributes()[*a].cmp(&r.attributes()[*b]));
            c
        })
        .collect();
    if !all {
        return Ok(vec![choices.iter().map(|c| c[0]).collect()]);
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for c in &choices {
        let mut next = Vec::new();
        for p in &out {
            for &y in c {
                let mut q = p.clone();
                q.push(y);
                next.push(q);
                if next.len() > cap {
                    return Err(Error::CapExceeded { what: "release sequences", cap: cap as u64 });
                }
            }
        }
        out = next;
    }
    Ok(out)
}

/// The chain (top first) of closures of successive prefixes.
pub fn chain_from_iars(r: &Relation, seq: &[usize]) -> Result<Vec<LabeledPair>> {
    if let Some(k) = first_uninformative(r, seq) {
        return Err(Error::NotInformative(k));
    }
    let mut out = Vec::with_capacity(seq.len() + 1);
    let mut prefix = r.no_attributes();
    let s0 = r.psi(&prefix);
    out.push(LabeledPair { gamma: r.phi(&s0), sigma: s0 });
    for &y in seq {
        prefix.insert(y);
        let s = r.psi(&prefix);
        out.push(LabeledPair { gamma: r.phi(&s), sigma: s });
    }
    Ok(out)
}

/// psi(gamma minus y) strictly contains psi(gamma) for every y in gamma.
pub fn is_minimally_identifying(r: &Relation, gamma: &AttributeSet) -> bool {
    let s = r.psi(gamma);
    gamma.ones().all(|y| r.psi(&bits::without(gamma, y)) != s)
}

/// Every ordering of gamma is informative. Factorial; keep gamma small.
pub fn isotropic_by_orderings(r: &Relation, gamma: &AttributeSet) -> bool {
    let items: Vec<usize> = gamma.ones().collect();
    let mut perm = items.clone();
    fn rec(r: &Relation, items: &[usize], used: &mut Vec<bool>, perm: &mut Vec<usize>, k: usize) -> bool {
        if k == items.len() {
            return true;
        }
        let prefix = bits::from_indices(r.n_attributes(), perm[..k].iter().copied());
        let cl = r.attribute_closure(&prefix);
        for i in 0..items.len() {
            if used[i] {
                continue;
            }
            if cl.contains(items[i]) {
                return false;
            }
            used[i] = true;
            perm[k] = items[i];
            let ok = rec(r, items, used, perm, k + 1);
            used[i] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    rec(r, &items, &mut vec![false; items.len()], &mut perm, 0)
}

/// For gamma a simplex: Phi of Q(psi(gamma), gamma) equals the boundary of
/// gamma. For gamma not a simplex: gamma is a minimal nonface.
pub fn isotropic_by_sphere(r: &Relation, gamma: &AttributeSet) -> bool {
    let sigma = r.psi(gamma);
    if sigma.is_clear() {
        return gamma.ones().all(|y| !r.psi(&bits::without(gamma, y)).is_clear());
    }
    let q = match restricted_link_relation(r, &sigma, gamma) {
        Ok(q) => q,
        Err(_) => return false,
    };
    if q.complex_override == Some(ComplexOverride::Void) {
        return false;
    }
    let ids = r.attribute_ids(gamma);
    q.attribute_complex().same_simplices(&SimplicialComplex::boundary_complex(&ids))
}

/// Isotropy; orderings are checked directly up to [`ORDERING_CHECK_MAX`]
/// attributes, the sphere test otherwise.
pub fn is_isotropic(r: &Relation, gamma: &AttributeSet) -> bool {
    let sphere = isotropic_by_sphere(r, gamma);
    if bits::count(gamma) <= ORDERING_CHECK_MAX {
        let ord = isotropic_by_orderings(r, gamma);
        debug_assert_eq!(ord, sphere, "isotropy tests disagree");
        return ord;
    }
    sphere
}

/// Identifies (sigma, phi(sigma)) in P_R, or NotStable.
fn stable_pair(r: &Relation, sigma: &IndividualSet) -> Result<AttributeSet> {
    r.ensure_nonvoid()?;
    let gamma = r.phi(sigma);
    if sigma.is_clear() || gamma.is_clear() || &r.psi(&gamma) != sigma {
        return Err(Error::NotStable);
    }
    Ok(gamma)
}

/// Fewest informative attributes identifying sigma.
pub fn r_fast(r: &Relation, sigma: &IndividualSet, cap: u64) -> Result<usize> {
    stable_pair(r, sigma)?;
    Ok(bits::count(&r.min_identifying_set(sigma, cap)?))
}

/// Most informative attributes released before sigma is identified.
pub fn r_slow(r: &Relation, sigma: &IndividualSet) -> Result<usize> {
    stable_pair(r, sigma)?;
    let all = r.all_individuals();
    let x_in_psi = !r.phi(&all).is_clear();
    if x_in_psi && *sigma == all {
        return Ok(0);
    }
    let q = conditional_association_relation(r, sigma);
    let lq = if q.is_standard() { doubly_labeled_poset(&q.relation)?.length() } else { -1 };
    let len = if x_in_psi { lq + 1 } else { lq + 2 };
    Ok(len.max(0) as usize)
}

/// Longest identifying release sequences for a stable set of individuals:
/// top-down chains of r_slow covers ending at sigma and every selection of
/// one newly inferred attribute per cover.
#[derive(Clone, Debug)]
pub struct IdentifyingSequences {
    pub lattice: GaloisLattice,
    pub max_length: usize,
    pub chains: Vec<Vec<usize>>,
    pub sequences: Vec<Vec<usize>>,
}

pub fn identifying_sequences(r: &Relation, sigma: &IndividualSet, cap: usize) -> Result<IdentifyingSequences> {
    let max_length = r_slow(r, sigma)?;
    let l = galois_lattice(r)?;
    let target = l.position(sigma).ok_or(Error::NotStable)?;
    let mut chains = Vec::new();
    let mut path = vec![l.top];
    chains_to(&l, target, max_length, cap, &mut path, &mut chains)?;
    let mut sequences: Vec<Vec<usize>> = Vec::new();
    for c in &chains {
        let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
        for w in c.windows(2) {
            let new = bits::minus(&l.elements[w[1]].gamma, &l.elements[w[0]].gamma);
            partial = partial
                .into_iter()
                .flat_map(|p| new.ones().map(move |y| [p.as_slice(), &[y]].concat()))
                .collect();
            if sequences.len() + partial.len() > cap {
                return Err(Error::CapExceeded { what: "release sequences", cap: cap as u64 });
            }
        }
        sequences.extend(partial);
    }
    Ok(IdentifyingSequences { lattice: l, max_length, chains, sequences })
}

fn chains_to(l: &GaloisLattice, t: usize, len: usize, cap: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let v = *path.last().expect("nonempty path");
    if path.len() - 1 == len {
        if v == t {
            if out.len() >= cap {
                return Err(Error::CapExceeded { what: "release chains", cap: cap as u64 });
            }
            out.push(path.clone());
        }
        return Ok(());
    }
    for &w in &l.hasse.down[v] {
        if l.elements[t].sigma.is_subset(&l.elements[w].sigma) {
            path.push(w);
            chains_to(l, t, len, cap, path, out)?;
            path.pop();
        }
    }
    Ok(())
}

/// Isotropic sets by size, 1..=max_size. Isotropic sets are closed under
/// subsets, so sizes are grown level by level. Each candidate gets the
/// sphere test.
pub fn isotropic_sets(r: &Relation, max_size: usize, cap: usize) -> Result<BTreeMap<usize, Vec<AttributeSet>>> {
    r.ensure_nonvoid()?;
    let m = r.n_attributes();
    let mut out = BTreeMap::new();
    let mut level: Vec<AttributeSet> = (0..m)
        .map(|j| bits::from_indices(m, [j]))
        .filter(|g| isotropic_by_sphere(r, g))
        .collect();
    let mut total = 0usize;
    let mut size = 1;
    while size <= max_size && !level.is_empty() {
        total += level.len();
        if total > cap {
            return Err(Error::CapExceeded { what: "isotropic set enumeration", cap: cap as u64 });
        }
        let known: HashSet<AttributeSet> = level.iter().cloned().collect();
        let mut next = Vec::new();
        if size < max_size {
            for g in &level {
                let start = g.ones().next_back().map(|x| x + 1).unwrap_or(0);
                for y in start..m {
                    let h = bits::with(g, y);
                    if h.ones().all(|z| z == y || known.contains(&bits::without(&h, z))) && isotropic_by_sphere(r, &h) {
                        next.push(h);
                    }
                }
            }
        }
        out.insert(size, std::mem::replace(&mut level, next));
        size += 1;
    }
    Ok(out)
}

/// Longest informative release sequence length and a witness. Among longest
/// top-to-bottom chains the one inferring the fewest extra attributes is
/// used; ties go to the lowest element index.
pub fn longest_iars(r: &Relation) -> Result<(usize, Vec<usize>)> {
    let l = galois_lattice(r)?;
    let len = l.length().max(0) as usize;
    if len == 0 {
        return Ok((0, Vec::new()));
    }
    // best[v] = (length to bottom, -inferred) maximised lexicographically
    let n = l.len();
    let mut best: Vec<Option<(usize, isize)>> = vec![None; n];
    best[l.bottom] = Some((0, 0));
    let cost = |a: usize, b: usize| -> isize {
        bits::count(&bits::minus(&l.elements[b].gamma, &l.elements[a].gamma)) as isize - 1
    };
    for &v in &l.hasse.topo {
        for &w in &l.hasse.down[v] {
            if let Some((bl, bc)) = best[w] {
                let cand = (bl + 1, bc - cost(v, w));
                if best[v].is_none_or(|b| cand > b) {
                    best[v] = Some(cand);
                }
            }
        }
    }
    let mut chain = vec![l.top];
    let mut v = l.top;
    while v != l.bottom {
        let (bl, bc) = best[v].expect("top reaches bottom");
        let w = *l.hasse.down[v]
            .iter()
            .find(|&&w| best[w].is_some_and(|(wl, wc)| wl + 1 == bl && wc - cost(v, w) == bc))
            .expect("optimal successor");
        chain.push(w);
        v = w;
    }
    let seq = iars_from_chain(r, &l, &chain, false, 1)?.remove(0);
    Ok((len, seq))
}

/// Index helper for tests and reports.
pub fn attribute_seq_ids(r: &Relation, seq: &[usize]) -> Vec<String> {
    seq.iter().map(|&j| r.attributes()[j].clone()).collect()
}

/// Brute-force closure image, used by oracles: all gamma in Phi_R that are
/// closed. Exponential.
pub fn closed_faces(r: &Relation) -> Vec<FixedBitSet> {
    doubly_labeled_poset_by_subsets(r)
        .map(|v| v.into_iter().map(|p| p.gamma).collect())
        .unwrap_or_default()
}
