//! Exhaustive oracles over u32 masks, written independently of the library
//! algorithms, plus seeded random relation generators.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dowker::Relation;
use fixedbitset::FixedBitSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn relation_from_matrix(m: &[Vec<bool>], cols: usize) -> Relation {
    let xs = names("x", m.len());
    let ys = names("y", cols);
    Relation::from_matrix(&xs, &ys, m).expect("nonvoid matrix")
}

/// Random nonvoid relation with 1..=max_n rows and 1..=max_m columns.
pub fn random_relation(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> Relation {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let p: f64 = rng.gen_range(0.2..0.8);
    let mat: Vec<Vec<bool>> = (0..n).map(|_| (0..m).map(|_| rng.gen_bool(p)).collect()).collect();
    relation_from_matrix(&mat, m)
}

pub fn random_relations(seed: u64, count: usize, max_n: usize, max_m: usize) -> Vec<Relation> {
    let mut r = rng(seed);
    (0..count).map(|_| random_relation(&mut r, max_n, max_m)).collect()
}

prop_compose! {
    pub fn arb_relation(max_n: usize, max_m: usize)
        (n in 1..=max_n, m in 1..=max_m)
        (mat in proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), n), m in Just(m))
        -> Relation {
        relation_from_matrix(&mat, m)
    }
}

/// Bit-matrix view of a relation.
#[derive(Clone, Debug)]
pub struct Masks {
    pub n: usize,
    pub m: usize,
    pub rows: Vec<u32>,
}

impl Masks {
    pub fn of(r: &Relation) -> Masks {
        let n = r.n_individuals();
        let m = r.n_attributes();
        assert!(n <= 32 && m <= 32);
        let rows = (0..n)
            .map(|i| (0..m).filter(|&j| r.has(i, j)).fold(0u32, |acc, j| acc | 1 << j))
            .collect();
        Masks { n, m, rows }
    }

    pub fn cols(&self) -> Vec<u32> {
        (0..self.m)
            .map(|j| (0..self.n).filter(|&i| self.rows[i] >> j & 1 == 1).fold(0u32, |acc, i| acc | 1 << i))
            .collect()
    }

    pub fn all_x(&self) -> u32 {
        full(self.n)
    }

    pub fn all_y(&self) -> u32 {
        full(self.m)
    }

    pub fn phi(&self, sigma: u32) -> u32 {
        let mut g = self.all_y();
        for i in 0..self.n {
            if sigma >> i & 1 == 1 {
                g &= self.rows[i];
            }
        }
        g
    }

    pub fn psi(&self, gamma: u32) -> u32 {
        let mut s = 0;
        for i in 0..self.n {
            if self.rows[i] & gamma == gamma {
                s |= 1 << i;
            }
        }
        s
    }

    /// All simplices of the attribute complex, the empty one included.
    pub fn attribute_faces(&self) -> Vec<u32> {
        (0..=self.all_y()).filter(|&g| self.rows.iter().any(|&r| r & g == g)).collect()
    }

    pub fn association_faces(&self) -> Vec<u32> {
        let cols = self.cols();
        (0..=self.all_x()).filter(|&s| cols.iter().any(|&c| c & s == s)).collect()
    }

    /// Doubly-labeled pairs (sigma, gamma), both nonempty and mutually closed.
    pub fn poset(&self) -> BTreeSet<(u32, u32)> {
        let mut out = BTreeSet::new();
        for g in 1..=self.all_y() {
            let s = self.psi(g);
            if s != 0 && self.phi(s) == g {
                out.insert((s, g));
            }
        }
        out
    }
}

pub fn full(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn mask(b: &FixedBitSet) -> u32 {
    b.ones().fold(0u32, |acc, i| acc | 1 << i)
}

pub fn bitset(mask: u32, len: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(len);
    for i in 0..len {
        if mask >> i & 1 == 1 {
            b.insert(i);
        }
    }
    b
}

pub fn subset(a: u32, b: u32) -> bool {
    a & b == a
}

/// Inclusion-maximal sets, deduplicated.
pub fn maximal(sets: &[u32]) -> BTreeSet<u32> {
    sets.iter()
        .copied()
        .filter(|&s| !sets.iter().any(|&t| t != s && subset(s, t)))
        .collect()
}

/// Faces contained in exactly one facet, properly.
pub fn free_faces(faces: &[u32], facets: &BTreeSet<u32>) -> BTreeSet<u32> {
    faces
        .iter()
        .copied()
        .filter(|&f| {
            let above: Vec<u32> = facets.iter().copied().filter(|&m| subset(f, m)).collect();
            above.len() == 1 && above[0] != f
        })
        .collect()
}

/// Maximal chains of a poset given by sigma masks ordered by inclusion, as
/// sigma lists from smallest to largest.
pub fn maximal_chains(elems: &[u32]) -> BTreeSet<Vec<u32>> {
    let lt = |a: u32, b: u32| a != b && subset(a, b);
    let covers = |a: u32, b: u32| lt(a, b) && !elems.iter().any(|&c| lt(a, c) && lt(c, b));
    let mut out = BTreeSet::new();
    fn walk(
        elems: &[u32],
        covers: &dyn Fn(u32, u32) -> bool,
        path: &mut Vec<u32>,
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        let last = *path.last().unwrap();
        let ups: Vec<u32> = elems.iter().copied().filter(|&b| covers(last, b)).collect();
        if ups.is_empty() {
            out.insert(path.clone());
        }
        for b in ups {
            path.push(b);
            walk(elems, covers, path, out);
            path.pop();
        }
    }
    for &e in elems {
        if !elems.iter().any(|&c| lt(c, e)) {
            walk(elems, &covers, &mut vec![e], &mut out);
        }
    }
    out
}

/// Reduced Z2 Betti numbers of the complex generated by `facets`, by
/// Gaussian elimination on explicitly built boundary matrices.
pub fn betti(facets: &[u32]) -> Vec<usize> {
    let mut faces: BTreeSet<u32> = BTreeSet::new();
    for &f in facets {
        let mut s = f;
        loop {
            faces.insert(s);
            if s == 0 {
                break;
            }
            s = (s - 1) & f;
        }
    }
    let top = faces.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0);
    // by_dim[k] holds faces with k vertices (k = 0 is the empty face)
    let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); top + 2];
    for &f in &faces {
        by_dim[f.count_ones() as usize].push(f);
    }
    let rank = |k: usize| -> usize {
        // boundary from faces with k vertices to faces with k - 1 vertices
        if k == 0 || k >= by_dim.len() {
            return 0;
        }
        let rows = &by_dim[k - 1];
        let mut mat: Vec<Vec<bool>> = by_dim[k]
            .iter()
            .map(|&f| rows.iter().map(|&g| subset(g, f) && (f ^ g).count_ones() == 1).collect())
            .collect();
        gf2_rank(&mut mat)
    };
    (1..=top)
        .map(|k| by_dim[k].len() - rank(k) - rank(k + 1))
        .collect()
}

pub fn gf2_rank(mat: &mut [Vec<bool>]) -> usize {
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..mat.len()).find(|&r| mat[r][c]) else { continue };
        mat.swap(rank, p);
        for r in 0..mat.len() {
            if r != rank && mat[r][c] {
                let pivot = mat[rank].clone();
                for (x, v) in mat[r].iter_mut().zip(pivot) {
                    *x ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

pub fn ids(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn sorted(mut v: Vec<Vec<String>>) -> Vec<Vec<String>> {
    for s in v.iter_mut() {
        s.sort();
    }
    v.sort();
    v
}

/// Brute-force MinInf: some gamma within Y_x \ {y}, |gamma| <= k, psi(gamma) within X_y.
pub fn mininf_oracle(m: &Masks, x: usize, y: usize, k: usize) -> bool {
    let cand = m.rows[x] & !(1 << y);
    let col = m.cols()[y];
    let mut g = cand;
    loop {
        if g.count_ones() as usize <= k && subset(m.psi(g), col) {
            return true;
        }
        if g == 0 {
            return false;
        }
        g = (g - 1) & cand;
    }
}

pub fn attribute_privacy_oracle(m: &Masks) -> bool {
    m.attribute_faces().iter().all(|&g| m.phi(m.psi(g)) == g)
}

pub fn association_privacy_oracle(m: &Masks) -> bool {
    m.association_faces().iter().all(|&s| m.psi(m.phi(s)) == s)
}
