//! Morphisms of relations, their induced maps on Dowker complexes and
//! doubly-labeled posets, and lattice generation from G-morphism images.

use std::collections::HashSet;

use serde::Serialize;

use crate::bits;
use crate::complex::{dowker_association_complex, dowker_attribute_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::galois::{doubly_labeled_poset, galois_lattice, DoublyLabeledPoset, GaloisLattice};
use crate::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMorphism {
    pub domain: Relation,
    pub codomain: Relation,
    /// fx[i] is the codomain index of domain individual i.
    pub fx: Vec<usize>,
    pub fy: Vec<usize>,
}

impl RelationMorphism {
    /// Both maps must be total on the domain universes.
    pub fn from_maps<S: AsRef<str>>(domain: Relation, codomain: Relation, fx: &[(S, S)], fy: &[(S, S)]) -> Result<Self> {
        let fx = total_map(&domain, &codomain, fx, true)?;
        let fy = total_map(&domain, &codomain, fy, false)?;
        Ok(RelationMorphism { domain, codomain, fx, fy })
    }

    pub fn identity(r: &Relation) -> Self {
        RelationMorphism {
            domain: r.clone(),
            codomain: r.clone(),
            fx: (0..r.n_individuals()).collect(),
            fy: (0..r.n_attributes()).collect(),
        }
    }

    /// Domain pairs whose image is missing from the codomain.
    pub fn violations(&self) -> Vec<(String, String)> {
        self.domain
            .pairs()
            .into_iter()
            .filter(|&(i, j)| !self.codomain.has(self.fx[i], self.fy[j]))
            .map(|(i, j)| (self.domain.individuals()[i].clone(), self.domain.attributes()[j].clone()))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    fn ensure_valid(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidMorphism(v.len()))
        }
    }

    pub fn map_individuals(&self, s: &fixedbitset::FixedBitSet) -> fixedbitset::FixedBitSet {
        bits::from_indices(self.codomain.n_individuals(), s.ones().map(|i| self.fx[i]))
    }

    pub fn map_attributes(&self, g: &fixedbitset::FixedBitSet) -> fixedbitset::FixedBitSet {
        bits::from_indices(self.codomain.n_attributes(), g.ones().map(|j| self.fy[j]))
    }

    /// f as a map of pairs.
    pub fn pair_image(&self) -> HashSet<(usize, usize)> {
        self.domain.pairs().into_iter().map(|(i, j)| (self.fx[i], self.fy[j])).collect()
    }

    /// Morphisms agree when they agree on every pair of the domain.
    pub fn same_as(&self, other: &RelationMorphism) -> bool {
        self.domain.pairs().into_iter().all(|(i, j)| self.fx[i] == other.fx[i] && self.fy[j] == other.fy[j])
    }

    /// g after self.
    pub fn then(&self, g: &RelationMorphism) -> Result<RelationMorphism> {
        if self.codomain != g.domain {
            return Err(Error::UniverseMismatch("codomain differs from the next domain".into()));
        }
        Ok(RelationMorphism {
            domain: self.domain.clone(),
            codomain: g.codomain.clone(),
            fx: self.fx.iter().map(|&i| g.fx[i]).collect(),
            fy: self.fy.iter().map(|&j| g.fy[j]).collect(),
        })
    }
}

fn total_map<S: AsRef<str>>(dom: &Relation, cod: &Relation, pairs: &[(S, S)], individuals: bool) -> Result<Vec<usize>> {
    let n = if individuals { dom.n_individuals() } else { dom.n_attributes() };
    let mut out: Vec<Option<usize>> = vec![None; n];
    for (a, b) in pairs {
        let (s, t) = if individuals {
            (dom.individual_index(a.as_ref())?, cod.individual_index(b.as_ref())?)
        } else {
            (dom.attribute_index(a.as_ref())?, cod.attribute_index(b.as_ref())?)
        };
        out[s] = Some(t);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| {
                Error::MissingMapping(if individuals { dom.individuals()[i].clone() } else { dom.attributes()[i].clone() })
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismValidation {
    pub valid: bool,
    pub violations: Vec<(String, String)>,
}

pub fn validate_morphism(m: &RelationMorphism) -> MorphismValidation {
    let violations = m.violations();
    MorphismValidation { valid: violations.is_empty(), violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapFlags {
    pub surjective: bool,
    pub injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMaps {
    /// f_X on facets of Psi_R, as id lists.
    pub psi_map: Vec<(Vec<String>, Vec<String>)>,
    pub phi_map: Vec<(Vec<String>, Vec<String>)>,
    pub fx_set: MapFlags,
    pub fy_set: MapFlags,
    pub pairs: MapFlags,
    pub fx_simplicial: MapFlags,
    pub fy_simplicial: MapFlags,
    pub monomorphism: bool,
    /// None when the side conditions leave the answer open.
    pub epimorphism: Option<bool>,
}

fn set_flags(f: &[usize], n: usize) -> MapFlags {
    let image: HashSet<usize> = f.iter().copied().collect();
    MapFlags { surjective: image.len() == n, injective: image.len() == f.len() }
}

/// Surjectivity and injectivity of the vertex map f between complexes
/// viewed as sets of simplices.
fn simplicial_flags(src: &SimplicialComplex, dst: &SimplicialComplex, f: &[usize]) -> MapFlags {
    let verts: Vec<usize> = src.vertices().ones().collect();
    let image: HashSet<usize> = verts.iter().map(|&v| f[v]).collect();
    let injective = image.len() == verts.len();
    let n = dst.universe().len();
    let surjective = dst.facets().iter().all(|t| {
        src.facets().iter().any(|a| {
            let img = bits::from_indices(n, a.ones().map(|v| f[v]).filter(|w| t.contains(*w)));
            &img == t
        })
    });
    MapFlags { surjective, injective }
}

fn facet_images(src: &SimplicialComplex, dst: &SimplicialComplex, f: &[usize]) -> Vec<(Vec<String>, Vec<String>)> {
    let n = dst.universe().len();
    src.facets()
        .iter()
        .map(|a| (src.ids(a), dst.ids(&bits::from_indices(n, a.ones().map(|v| f[v])))))
        .collect()
}

pub fn induced_simplicial_maps(m: &RelationMorphism) -> Result<InducedMaps> {
    m.domain.ensure_nonvoid()?;
    m.codomain.ensure_nonvoid()?;
    m.ensure_valid()?;
    let (r, q) = (&m.domain, &m.codomain);
    let psi_r = dowker_association_complex(r);
    let psi_q = dowker_association_complex(q);
    let phi_r = dowker_attribute_complex(r);
    let phi_q = dowker_attribute_complex(q);
    let fx_set = set_flags(&m.fx, q.n_individuals());
    let fy_set = set_flags(&m.fy, q.n_attributes());
    let image = m.pair_image();
    let pairs = MapFlags { surjective: image.len() == q.pair_count(), injective: image.len() == r.pair_count() };
    let epimorphism = if pairs.surjective || (fx_set.surjective && fy_set.surjective && r.is_tight()) {
        Some(true)
    } else if !(fx_set.surjective && fy_set.surjective) && q.is_tight() {
        Some(false)
    } else {
        None
    };
    Ok(InducedMaps {
        psi_map: facet_images(&psi_r, &psi_q, &m.fx),
        phi_map: facet_images(&phi_r, &phi_q, &m.fy),
        fx_simplicial: simplicial_flags(&psi_r, &psi_q, &m.fx),
        fy_simplicial: simplicial_flags(&phi_r, &phi_q, &m.fy),
        monomorphism: pairs.injective,
        fx_set,
        fy_set,
        pairs,
        epimorphism,
    })
}

/// Element tables of the two induced poset maps P_R -> P_Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMorphismPair {
    pub domain: DoublyLabeledPoset,
    pub codomain: DoublyLabeledPoset,
    /// (psi_Q . f_Y . phi_R) on each element, as codomain indices.
    pub fxg: Vec<usize>,
    /// (phi_Q . f_X . psi_R) on each element.
    pub fyg: Vec<usize>,
}

pub fn g_morphisms(m: &RelationMorphism) -> Result<GMorphismPair> {
    m.ensure_valid()?;
    let (r, q) = (&m.domain, &m.codomain);
    let pr = doubly_labeled_poset(r)?;
    let pq = doubly_labeled_poset(q)?;
    let mut fxg = Vec::with_capacity(pr.len());
    let mut fyg = Vec::with_capacity(pr.len());
    for p in &pr.elements {
        let sx = q.psi(&m.map_attributes(&p.gamma));
        let gy = q.phi(&m.map_individuals(&p.sigma));
        let sy = q.psi(&gy);
        let a = pq.position(&sx).ok_or_else(|| Error::PreconditionViolated("image outside P_Q".into()))?;
        let b = pq.position(&sy).ok_or_else(|| Error::PreconditionViolated("image outside P_Q".into()))?;
        debug_assert!(pq.elements[b].leq(&pq.elements[a]), "f_Y^g(p) <= f_X^g(p) fails");
        fxg.push(a);
        fyg.push(b);
    }
    Ok(GMorphismPair { domain: pr, codomain: pq, fxg, fyg })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ImageMap {
    /// Witnesses are meets of joins.
    Fxg,
    /// Witnesses are joins of meets.
    Fyg,
}

/// `terms` combined by the outer operation, each term combining image
/// elements by the inner one. Indices refer to `LatticeGeneration::lattice`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub terms: Vec<Vec<usize>>,
}

impl Witness {
    pub fn operand_count(&self) -> usize {
        self.terms.iter().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug)]
pub struct LatticeGeneration {
    pub which: ImageMap,
    pub lattice: GaloisLattice,
    pub image: Vec<usize>,
    /// Witness per reached proper element, indexed like `lattice.elements`.
    pub witnesses: Vec<Option<Witness>>,
}

impl LatticeGeneration {
    pub fn reaches_all(&self) -> bool {
        self.lattice.proper().into_iter().all(|i| self.witnesses[i].is_some())
    }

    pub fn witness_of(&self, sigma: &fixedbitset::FixedBitSet) -> Option<&Witness> {
        self.lattice.position(sigma).and_then(|i| self.witnesses[i].as_ref())
    }

    /// e.g. "(134, a) ∧ (123, c)".
    pub fn render(&self, q: &Relation, w: &Witness) -> String {
        let (outer, inner) = match self.which {
            ImageMap::Fxg => (" ∧ ", " ∨ "),
            ImageMap::Fyg => (" ∨ ", " ∧ "),
        };
        // operands listed by attribute set
        let key = |e: &usize| self.lattice.elements[*e].gamma.ones().collect::<Vec<_>>();
        let mut terms: Vec<Vec<usize>> = w.terms.clone();
        for t in &mut terms {
            t.sort_by_key(key);
        }
        terms.sort_by_key(|t| t.iter().map(key).collect::<Vec<_>>());
        terms
            .iter()
            .map(|t| {
                let s: Vec<String> = t.iter().map(|&e| self.lattice.elements[e].label(q)).collect();
                if t.len() > 1 && w.terms.len() > 1 {
                    format!("[{}]", s.join(inner))
                } else {
                    s.join(inner)
                }
            })
            .collect::<Vec<_>>()
            .join(outer)
    }
}

type Key = (usize, std::cmp::Reverse<usize>, Vec<Vec<usize>>);

fn better(new: &Key, old: &Option<Key>) -> bool {
    match old {
        None => true,
        Some(o) => new < o,
    }
}

/// Cheapest expressions over `gens` under `op`, restricted to `allowed`
/// elements. Cost is the operand count; ties prefer more terms.
fn close_under(
    n: usize,
    allowed: &[bool],
    gens: &[(usize, Vec<Vec<usize>>)],
    op: impl Fn(usize, usize) -> usize,
) -> Vec<Option<Key>> {
    let mut best: Vec<Option<Key>> = vec![None; n];
    for (e, terms) in gens {
        let cost = terms.iter().map(Vec::len).sum();
        let key = (cost, std::cmp::Reverse(terms.len()), terms.clone());
        if better(&key, &best[*e]) {
            best[*e] = Some(key);
        }
    }
    loop {
        let mut changed = false;
        for s in 0..n {
            let Some((_, _, terms)) = best[s].clone() else { continue };
            for (g, gterms) in gens {
                let v = op(s, *g);
                if !allowed[v] {
                    continue;
                }
                let mut t = terms.clone();
                for gt in gterms {
                    if !t.contains(gt) {
                        t.push(gt.clone());
                    }
                }
                t.sort();
                let cost = t.iter().map(Vec::len).sum::<usize>();
                let key = (cost, std::cmp::Reverse(t.len()), t);
                if better(&key, &best[v]) {
                    best[v] = Some(key);
                    changed = true;
                }
            }
        }
        if !changed {
            return best;
        }
    }
}

/// Close the image of one G-morphism under the codomain's lattice
/// operations, recording the cheapest witness found for every element.
pub fn lattice_generate_from_image(m: &RelationMorphism, which: ImageMap) -> Result<LatticeGeneration> {
    m.ensure_valid()?;
    if !m.domain.is_tight() || !m.codomain.is_tight() {
        return Err(Error::NotTight);
    }
    if m.pair_image().len() != m.codomain.pair_count() {
        return Err(Error::NotSurjective);
    }
    let g = g_morphisms(m)?;
    let q = &m.codomain;
    let lattice = galois_lattice(q)?;
    let n = lattice.len();
    let table = match which {
        ImageMap::Fxg => &g.fxg,
        ImageMap::Fyg => &g.fyg,
    };
    let mut image: Vec<usize> = table
        .iter()
        .map(|&e| lattice.position(&g.codomain.elements[e].sigma).expect("P_Q element in lattice"))
        .collect();
    image.sort_unstable();
    image.dedup();
    let mut allowed = vec![false; n];
    for i in lattice.proper() {
        allowed[i] = true;
    }
    let join = |a: usize, b: usize| lattice.join(q, a, b);
    let meet = |a: usize, b: usize| lattice.meet(q, a, b);
    let singles: Vec<(usize, Vec<Vec<usize>>)> = image.iter().map(|&e| (e, vec![vec![e]])).collect();
    // inner stage: flat operand lists
    let inner = match which {
        ImageMap::Fxg => close_under(n, &allowed, &singles, join),
        ImageMap::Fyg => close_under(n, &allowed, &singles, meet),
    };
    let terms: Vec<(usize, Vec<Vec<usize>>)> = inner
        .iter()
        .enumerate()
        .filter_map(|(e, k)| {
            k.as_ref().map(|(_, _, t)| {
                let mut flat: Vec<usize> = t.iter().flatten().copied().collect();
                flat.sort_unstable();
                flat.dedup();
                (e, vec![flat])
            })
        })
        .collect();
    let outer = match which {
        ImageMap::Fxg => close_under(n, &allowed, &terms, meet),
        ImageMap::Fyg => close_under(n, &allowed, &terms, join),
    };
    let witnesses = outer.into_iter().map(|k| k.map(|(_, _, terms)| Witness { terms })).collect();
    Ok(LatticeGeneration { which, lattice, image, witnesses })
}
