mod common;

use std::collections::BTreeMap;

use common::*;
use dowker::fixtures::*;
use dowker::morphism::*;
use dowker::{Error, Relation};
use rand::Rng;

fn compact(s: &str) -> String {
    s.replace(' ', "")
}

/// Rows of the M -> T table: p, f_X^g(p), f_Y^g(p).
const MT_TABLE: [(&str, &str, &str); 15] = [
    ("(12,ab)", "(14,ab)", "(14,ab)"),
    ("(2,abc)", "(1,abc)", "(1,abc)"),
    ("(123,b)", "(124,b)", "(124,b)"),
    ("(23,bc)", "(12,bc)", "(12,bc)"),
    ("(3,bcd)", "(2,bcd)", "(2,bcd)"),
    ("(234,c)", "(123,c)", "(123,c)"),
    ("(34,cd)", "(23,cd)", "(23,cd)"),
    ("(4,cde)", "(3,acd)", "(3,acd)"),
    ("(345,d)", "(234,d)", "(234,d)"),
    ("(45,de)", "(34,ad)", "(34,ad)"),
    ("(5,ade)", "(34,ad)", "(4,abd)"),
    ("(145,e)", "(134,a)", "(34,ad)"),
    ("(15,ae)", "(134,a)", "(4,abd)"),
    ("(1,abe)", "(14,ab)", "(4,abd)"),
    ("(125,a)", "(134,a)", "(14,ab)"),
];

#[test]
fn validation_examples() {
    let m = moebius_to_tetra();
    assert!(validate_morphism(&m).valid);
    assert!(validate_morphism(&RelationMorphism::identity(&travel())).valid);
    // two bits onto one bit, with f_Y sending b to a and not-b to not-a
    let q = dowker::homology::kbit_relation(2).unwrap();
    let s = dowker::homology::kbit_relation(1).unwrap();
    let bad = RelationMorphism::from_maps(
        q,
        s,
        &[("1", "1"), ("2", "1"), ("3", "2"), ("4", "2")],
        &[("a", "a"), ("¬a", "¬a"), ("b", "a"), ("¬b", "¬a")],
    )
    .unwrap();
    let v = validate_morphism(&bad);
    assert!(!v.valid && !v.violations.is_empty());
    assert!(matches!(induced_simplicial_maps(&bad), Err(Error::InvalidMorphism(_))));
    assert!(matches!(
        RelationMorphism::from_maps(r4(), r4(), &[("1", "1")], &[("a", "a")]),
        Err(Error::MissingMapping(_))
    ));
}

#[test]
fn induced_map_examples() {
    let f = induced_simplicial_maps(&moebius_to_tetra()).unwrap();
    assert!(f.pairs.surjective && f.fx_set.surjective && f.fy_set.surjective);
    assert!(!f.fx_simplicial.surjective);
    assert_eq!(f.epimorphism, Some(true));
    let id = induced_simplicial_maps(&RelationMorphism::identity(&tetra())).unwrap();
    assert!(id.monomorphism && id.epimorphism == Some(true));
    let inc = RelationMorphism::from_maps(party_before(), party_after(), &[("1", "1")], &[("a", "a")]).unwrap();
    let f = induced_simplicial_maps(&inc).unwrap();
    assert!(f.monomorphism);
    assert_eq!(f.epimorphism, Some(false));
}

#[test]
fn g_morphism_table() {
    let m = moebius_to_tetra();
    let g = g_morphisms(&m).unwrap();
    assert_eq!(g.domain.len(), 15);
    let got: BTreeMap<String, (String, String)> = g
        .domain
        .elements
        .iter()
        .enumerate()
        .map(|(i, p)| {
            (
                compact(&p.label(&m.domain)),
                (
                    compact(&g.codomain.elements[g.fxg[i]].label(&m.codomain)),
                    compact(&g.codomain.elements[g.fyg[i]].label(&m.codomain)),
                ),
            )
        })
        .collect();
    for (p, x, y) in MT_TABLE {
        assert_eq!(got.get(p), Some(&(x.to_string(), y.to_string())), "row {p}");
    }
}

#[test]
fn ex58_inclusion() {
    let inc = RelationMorphism::from_maps(party_before(), party_after(), &[("1", "1")], &[("a", "a")]).unwrap();
    let g = g_morphisms(&inc).unwrap();
    let q = &inc.codomain;
    assert_eq!(compact(&g.codomain.elements[g.fxg[0]].label(q)), "(12,a)");
    assert_eq!(compact(&g.codomain.elements[g.fyg[0]].label(q)), "(1,ab)");
    let id = g_morphisms(&RelationMorphism::identity(&travel())).unwrap();
    assert_eq!(id.fxg, (0..id.domain.len()).collect::<Vec<_>>());
    assert_eq!(id.fyg, id.fxg);
}

#[test]
fn lattice_generation() {
    let m = moebius_to_tetra();
    let q = &m.codomain;
    for which in [ImageMap::Fxg, ImageMap::Fyg] {
        let g = lattice_generate_from_image(&m, which).unwrap();
        assert!(g.reaches_all());
        assert_eq!(g.lattice.proper().len(), 14);
        for e in g.lattice.proper() {
            assert!(g.witnesses[e].is_some());
        }
    }
    let x = lattice_generate_from_image(&m, ImageMap::Fxg).unwrap();
    let s13 = q.individual_set(&["1", "3"]).unwrap();
    let w = x.witness_of(&s13).unwrap();
    assert_eq!(compact(&x.render(q, w)), "(134,a)∧(123,c)");
    let y = lattice_generate_from_image(&m, ImageMap::Fyg).unwrap();
    let w = y.witness_of(&s13).unwrap();
    assert_eq!(compact(&y.render(q, w)), "(1,abc)∨(3,acd)");

    let id = lattice_generate_from_image(&RelationMorphism::identity(&tetra()), ImageMap::Fxg).unwrap();
    assert_eq!(id.image.len(), 14);
    let inc = RelationMorphism::from_maps(party_before(), party_after(), &[("1", "1")], &[("a", "a")]).unwrap();
    assert!(matches!(lattice_generate_from_image(&inc, ImageMap::Fxg), Err(Error::NotSurjective)));
}

fn random_morphism(g: &mut rand_chacha::ChaCha8Rng) -> Option<RelationMorphism> {
    let r = random_relation(g, 5, 5);
    let q = random_relation(g, 5, 5);
    let fx: Vec<(String, String)> = r
        .individuals()
        .iter()
        .map(|x| (x.clone(), q.individuals()[g.gen_range(0..q.n_individuals())].clone()))
        .collect();
    let fy: Vec<(String, String)> = r
        .attributes()
        .iter()
        .map(|y| (y.clone(), q.attributes()[g.gen_range(0..q.n_attributes())].clone()))
        .collect();
    let m = RelationMorphism::from_maps(r, q, &fx, &fy).unwrap();
    m.is_valid().then_some(m)
}

fn random_valid_morphisms(seed: u64, want: usize) -> Vec<RelationMorphism> {
    let mut g = rng(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < want {
        tries += 1;
        if let Some(m) = random_morphism(&mut g) {
            out.push(m);
        }
    }
    eprintln!("random morphisms: {want} valid out of {tries} draws");
    out
}

#[test]
fn containments_and_comparability() {
    for m in random_valid_morphisms(21, 300) {
        let (r, q) = (&m.domain, &m.codomain);
        let mr = Masks::of(r);
        for s in mr.association_faces() {
            let sb = bitset(s, mr.n);
            let lhs = m.map_attributes(&r.phi(&sb));
            let rhs = q.phi(&m.map_individuals(&sb));
            assert!(lhs.is_subset(&rhs));
        }
        for g in mr.attribute_faces() {
            let gb = bitset(g, mr.m);
            let lhs = m.map_individuals(&r.psi(&gb));
            let rhs = q.psi(&m.map_attributes(&gb));
            assert!(lhs.is_subset(&rhs));
        }
        let Ok(pair) = g_morphisms(&m) else { continue };
        for i in 0..pair.domain.len() {
            let (a, b) = (&pair.codomain.elements[pair.fyg[i]], &pair.codomain.elements[pair.fxg[i]]);
            assert!(a.leq(b));
            for j in 0..pair.domain.len() {
                if pair.domain.elements[i].leq(&pair.domain.elements[j]) {
                    assert!(pair.codomain.elements[pair.fxg[i]].leq(&pair.codomain.elements[pair.fxg[j]]));
                    assert!(pair.codomain.elements[pair.fyg[i]].leq(&pair.codomain.elements[pair.fyg[j]]));
                }
            }
        }
    }
}

#[test]
fn morphism_property_battery() {
    for m in random_valid_morphisms(22, 300) {
        let (r, q): (&Relation, &Relation) = (&m.domain, &m.codomain);
        let f = induced_simplicial_maps(&m).unwrap();
        // surjective on pairs: every nonblank row and column of Q is hit
        if f.pairs.surjective {
            let hit_x: std::collections::HashSet<usize> = m.fx.iter().copied().collect();
            let hit_y: std::collections::HashSet<usize> = m.fy.iter().copied().collect();
            for i in 0..q.n_individuals() {
                assert!(q.row(i).is_clear() || hit_x.contains(&i));
            }
            for j in 0..q.n_attributes() {
                assert!(q.col(j).is_clear() || hit_y.contains(&j));
            }
            assert_eq!(f.epimorphism, Some(true));
        }
        // injective on pairs iff monomorphism
        assert_eq!(f.monomorphism, f.pairs.injective);
        if f.fx_set.injective && f.fy_set.injective {
            assert!(f.monomorphism);
        }
        if !(f.fx_set.surjective && f.fy_set.surjective) && q.is_tight() {
            assert_eq!(f.epimorphism, Some(false));
        }
        // composition with identities
        let left = RelationMorphism::identity(r).then(&m).unwrap();
        let right = m.then(&RelationMorphism::identity(q)).unwrap();
        assert!(left.same_as(&m) && right.same_as(&m));
    }
}
