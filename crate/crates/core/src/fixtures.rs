//! Worked-example relations used by tests, the acceptance suite and the CLI.

use crate::error::Result;
use crate::relation::Relation;

fn rows(attrs: &[&str], data: &[(&str, &str)]) -> Relation {
    // single-character attribute ids packed into a string
    let owned: Vec<(String, Vec<String>)> = data
        .iter()
        .map(|(x, ys)| (x.to_string(), ys.chars().map(|c| c.to_string()).collect()))
        .collect();
    let pairs: Vec<(&str, Vec<&str>)> =
        owned.iter().map(|(x, ys)| (x.as_str(), ys.iter().map(String::as_str).collect())).collect();
    let refs: Vec<(&str, &[&str])> = pairs.iter().map(|(x, ys)| (*x, ys.as_slice())).collect();
    Relation::from_rows(attrs, &refs).expect("fixture is well formed")
}

/// The four-individual toy relation.
pub fn r4() -> Relation {
    rows(&["a", "b", "c"], &[("1", "ab"), ("2", "bc"), ("3", "c"), ("4", "c")])
}

/// r4 with (3, a) added.
pub fn r4_prime() -> Relation {
    rows(&["a", "b", "c"], &[("1", "ab"), ("2", "bc"), ("3", "ac"), ("4", "c")])
}

pub fn health() -> Relation {
    Relation::from_rows(
        &["smokes", "has_cancer", "drinks_soda"],
        &[
            ("1", &["smokes", "has_cancer"]),
            ("2", &["has_cancer", "drinks_soda"]),
            ("3", &["drinks_soda"]),
            ("4", &["drinks_soda"]),
        ],
    )
    .expect("fixture")
}

/// health with the single disinformation entry (3, smokes).
pub fn health_prime() -> Result<Relation> {
    health().add_entry("3", "smokes")
}

/// Attribute complex is the join of two boundary complexes.
pub fn ex20() -> Relation {
    rows(
        &["a", "b", "c", "d", "e"],
        &[("1", "abd"), ("2", "acd"), ("3", "bcd"), ("4", "abe"), ("5", "ace"), ("6", "bce")],
    )
}

/// The travel-guide relation (a Möbius strip).
pub fn travel() -> Relation {
    rows(
        &["A", "B", "C", "D", "E"],
        &[("1", "ABE"), ("2", "ABC"), ("3", "BCD"), ("4", "CDE"), ("5", "ADE")],
    )
}

/// The travel-guide relation with lowercase attributes.
pub fn moebius() -> Relation {
    rows(
        &["a", "b", "c", "d", "e"],
        &[("1", "abe"), ("2", "abc"), ("3", "bcd"), ("4", "cde"), ("5", "ade")],
    )
}

/// Four individuals, each missing one of four attributes.
pub fn tetra() -> Relation {
    rows(&["a", "b", "c", "d"], &[("1", "abc"), ("2", "bcd"), ("3", "acd"), ("4", "abd")])
}

/// Seventeen triangles of a Dunce Hat.
pub fn dunce() -> Relation {
    rows(
        &["a", "b", "c", "d", "e", "f", "g", "h"],
        &[
            ("1", "dfh"),
            ("2", "def"),
            ("3", "fgh"),
            ("4", "cfg"),
            ("5", "aef"),
            ("6", "ace"),
            ("7", "cdh"),
            ("8", "bde"),
            ("9", "abg"),
            ("10", "bcg"),
            ("11", "agh"),
            ("12", "abh"),
            ("13", "bch"),
            ("14", "acd"),
            ("15", "abd"),
            ("16", "bce"),
            ("17", "acf"),
        ],
    )
}

/// The Möbius relation doubled by five decoys.
pub fn double_moebius() -> Relation {
    rows(
        &["a", "b", "c", "d", "e"],
        &[
            ("1", "abe"),
            ("2", "abc"),
            ("3", "bcd"),
            ("4", "cde"),
            ("5", "ade"),
            ("6", "abd"),
            ("7", "bce"),
            ("8", "acd"),
            ("9", "bde"),
            ("10", "ace"),
        ],
    )
}

/// Flavor pairs per customer.
pub fn ice_cream_customers() -> Relation {
    Relation::from_rows(
        &["gc", "gs", "gv", "cs", "cv", "sv"],
        &[
            ("Bob", &["gc", "gs", "cs"]),
            ("Alice", &["cs", "cv", "sv"]),
            ("David", &["gs", "sv", "gv"]),
            ("Cindy", &["gc", "cv", "gv"]),
        ],
    )
    .expect("fixture")
}

/// Each flavor pair to its two scoops.
pub fn ice_cream_scoops() -> Relation {
    let pairs = ["gc", "gs", "gv", "cs", "cv", "sv"];
    let owned: Vec<(String, Vec<String>)> =
        pairs.iter().map(|p| (p.to_string(), p.chars().map(|c| c.to_string()).collect())).collect();
    let v: Vec<(&str, Vec<&str>)> = owned.iter().map(|(p, f)| (p.as_str(), f.iter().map(String::as_str).collect())).collect();
    let refs: Vec<(&str, &[&str])> = v.iter().map(|(p, f)| (*p, f.as_slice())).collect();
    Relation::from_rows(&["g", "c", "s", "v"], &refs).expect("fixture")
}

/// Flavors per customer, the product of the two relations above.
pub fn ice_cream_flavors() -> Relation {
    Relation::from_rows(
        &["g", "c", "s", "v"],
        &[
            ("Bob", &["g", "c", "s"]),
            ("Alice", &["c", "s", "v"]),
            ("David", &["g", "s", "v"]),
            ("Cindy", &["g", "c", "v"]),
        ],
    )
    .expect("fixture")
}

/// One individual at one party.
pub fn party_before() -> Relation {
    rows(&["a"], &[("1", "a")])
}

/// Two individuals at two parties.
pub fn party_after() -> Relation {
    rows(&["a", "b"], &[("1", "ab"), ("2", "a")])
}

/// Every named relation fixture, for sweeps.
pub fn all() -> Vec<(&'static str, Relation)> {
    vec![
        ("r4", r4()),
        ("r4_prime", r4_prime()),
        ("health", health()),
        ("ex20", ex20()),
        ("travel", travel()),
        ("tetra", tetra()),
        ("dunce", dunce()),
        ("double_moebius", double_moebius()),
        ("ice_cream_flavors", ice_cream_flavors()),
        ("ice_cream_customers", ice_cream_customers()),
        ("party_after", party_after()),
    ]
}

/// The surjective morphism from the Möbius relation onto the tetrahedral one.
pub fn moebius_to_tetra() -> crate::morphism::RelationMorphism {
    crate::morphism::RelationMorphism::from_maps(
        moebius(),
        tetra(),
        &[("1", "4"), ("2", "1"), ("3", "2"), ("4", "3"), ("5", "4")],
        &[("a", "a"), ("b", "b"), ("c", "c"), ("d", "d"), ("e", "a")],
    )
    .expect("fixture")
}
