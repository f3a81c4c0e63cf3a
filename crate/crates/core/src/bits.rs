//! Small helpers over `FixedBitSet`.

use fixedbitset::FixedBitSet;

pub fn empty(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n)
}

pub fn full(n: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    b.insert_range(..);
    b
}

pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    for i in idx {
        b.insert(i);
    }
    b
}

pub fn to_vec(b: &FixedBitSet) -> Vec<usize> {
    b.ones().collect()
}

pub fn count(b: &FixedBitSet) -> usize {
    b.count_ones(..)
}

pub fn is_empty(b: &FixedBitSet) -> bool {
    b.is_clear()
}

pub fn and(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut c = a.clone();
    c.intersect_with(b);
    c
}

pub fn or(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut c = a.clone();
    c.union_with(b);
    c
}

pub fn minus(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut c = a.clone();
    c.difference_with(b);
    c
}

pub fn without(a: &FixedBitSet, i: usize) -> FixedBitSet {
    let mut c = a.clone();
    c.set(i, false);
    c
}

pub fn with(a: &FixedBitSet, i: usize) -> FixedBitSet {
    let mut c = a.clone();
    c.insert(i);
    c
}

/// Strict inclusion.
pub fn is_proper_subset(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    a.is_subset(b) && a != b
}

/// Keep only the inclusion-maximal sets, dropping duplicates. Output is
/// sorted by index vectors so results are deterministic.
pub fn antichain_max(sets: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    let mut sets = sets;
    sets.sort_by_key(|s| std::cmp::Reverse(count(s)));
    let mut out: Vec<FixedBitSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|t| s.is_subset(t)) {
            out.push(s);
        }
    }
    out.sort_by_key(to_vec);
    out
}

/// Minimal sets, duplicates dropped, sorted.
pub fn antichain_min(sets: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    let mut sets = sets;
    sets.sort_by_key(count);
    let mut out: Vec<FixedBitSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|t| t.is_subset(&s)) {
            out.push(s);
        }
    }
    out.sort_by_key(to_vec);
    out
}

/// All subsets of `items` with exactly `k` elements, in lexicographic order.
pub fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}
