mod common;

use std::collections::BTreeSet;

use common::*;
use dowker::complex::*;
use dowker::fixtures::*;
use dowker::homology::reduced_betti;
use dowker::{Error, Relation};
use proptest::prelude::*;

fn facets(c: &SimplicialComplex) -> Vec<Vec<String>> {
    sorted(c.facet_ids())
}

fn v(sets: &[&[&str]]) -> Vec<Vec<String>> {
    sorted(sets.iter().map(|s| ids(s)).collect())
}

#[test]
fn dowker_complex_examples() {
    assert_eq!(facets(&dowker_attribute_complex(&r4())), v(&[&["a", "b"], &["b", "c"]]));
    assert!(dowker_attribute_complex(&r4_prime()).same_simplices(&SimplicialComplex::boundary_complex(&["a", "b", "c"])));
    let empty = Relation::new::<&str>(&["1", "2"], &["a"], &[]).unwrap();
    assert!(dowker_attribute_complex(&empty).is_empty_complex());
    assert_eq!(facets(&dowker_association_complex(&r4())), v(&[&["1", "2"], &["2", "3", "4"]]));
    assert!(dowker_association_complex(&tetra()).same_simplices(&SimplicialComplex::boundary_complex(&["1", "2", "3", "4"])));
    let blank_col = Relation::from_rows(&["a", "b"], &[("1", &["a"]), ("2", &["a"])]).unwrap();
    assert_eq!(facets(&dowker_association_complex(&blank_col)), v(&[&["1", "2"]]));
}

#[test]
fn free_face_examples() {
    let phi = dowker_attribute_complex(&r4());
    let ff: Vec<Vec<String>> = phi.free_faces().unwrap().iter().map(|f| phi.ids(f)).collect();
    assert!(ff.contains(&ids(&["a"])));
    assert!(ff.contains(&ids(&["c"])));
    assert!(!dowker_attribute_complex(&r4_prime()).has_free_face());
    assert!(!dowker_attribute_complex(&dunce()).has_free_face());
}

#[test]
fn link_deletion_star_join() {
    let s = SimplicialComplex::from_ids(&["a", "b", "c", "d"], &[vec!["a", "b", "c"], vec!["c", "d"]]).unwrap();
    let c = s.set_of(&["c"]).unwrap();
    assert_eq!(facets(&s.link(&c)), v(&[&["a", "b"], &["d"]]));
    assert_eq!(facets(&s.deletion(&c)), v(&[&["a", "b"], &["d"]]));
    assert_eq!(facets(&s.closed_star(&s.set_of(&["d"]).unwrap())), v(&[&["c", "d"]]));
    assert!(s.link(&s.set_of(&["a", "d"]).unwrap()).is_void());
    assert!(s.link(&s.set_of(&["a", "b", "c"]).unwrap()).is_empty_complex());

    let j = SimplicialComplex::boundary_complex(&["a", "b", "c"])
        .join(&SimplicialComplex::boundary_complex(&["d", "e"]))
        .unwrap();
    assert!(dowker_attribute_complex(&ex20()).same_simplices(&j));
    assert!(matches!(s.join(&s), Err(Error::UniverseOverlap(_))));

    let bd = SimplicialComplex::boundary_complex(&["p", "q", "r", "s"]);
    let nf: Vec<Vec<String>> = bd.minimal_nonfaces(1 << 20).unwrap().iter().map(|f| bd.ids(f)).collect();
    assert_eq!(nf, vec![ids(&["p", "q", "r", "s"])]);
}

#[test]
fn ex20_conditional_relations() {
    let r = ex20();
    let q = conditional_attribute_relation(&r, &r.attribute_set(&["d"]).unwrap());
    let want = Relation::from_rows(&["a", "b", "c"], &[("1", &["a", "b"]), ("2", &["a", "c"]), ("3", &["b", "c"])]).unwrap();
    assert_eq!(q.relation, want);
    let phi = dowker_attribute_complex(&r);
    assert!(q.attribute_complex().same_simplices(&phi.link(&phi.set_of(&["d"]).unwrap())));

    let qb = conditional_attribute_relation(&r, &r.attribute_set(&["b"]).unwrap());
    let want = Relation::from_rows(
        &["a", "c", "d", "e"],
        &[("1", &["a", "d"]), ("3", &["c", "d"]), ("4", &["a", "e"]), ("6", &["c", "e"])],
    )
    .unwrap();
    assert_eq!(qb.relation, want);
    // the two independent bits {a,c} and {d,e}
    let bits = SimplicialComplex::boundary_complex(&["a", "c"]).join(&SimplicialComplex::boundary_complex(&["d", "e"])).unwrap();
    assert!(qb.attribute_complex().same_simplices(&bits));

    let r = r4();
    assert_eq!(
        conditional_attribute_relation(&r, &r.attribute_set(&["a", "c"]).unwrap()).complex_override,
        Some(ComplexOverride::Void)
    );
}

#[test]
fn conditional_association_examples() {
    let r = ex20();
    let q = conditional_association_relation(&r, &r.individual_set(&["3"]).unwrap());
    assert!(q.attribute_complex().same_simplices(&SimplicialComplex::boundary_complex(&["b", "c", "d"])));

    let g = travel();
    let c = conditional_association_relation(&g, &g.individual_set(&["3"]).unwrap());
    let want = Relation::from_rows(
        &["B", "C", "D"],
        &[("1", &["B"]), ("2", &["B", "C"]), ("4", &["C", "D"]), ("5", &["D"])],
    )
    .unwrap();
    assert_eq!(c.relation, want);
    assert!(reduced_betti(&c.attribute_complex(), None).unwrap().is_zero());

    let q = conditional_association_relation(&g, &g.individual_set(&["2", "3"]).unwrap());
    assert_eq!(reduced_betti(&q.attribute_complex(), None).unwrap().betti[0], 1);
    assert_eq!(reduced_betti(&q.association_complex(), None).unwrap().betti[0], 1);
}

#[test]
fn restricted_link_examples() {
    let g = travel();
    let s3 = g.individual_set(&["3"]).unwrap();
    let q = restricted_link_relation(&g, &s3, &g.attribute_set(&["B", "D"]).unwrap()).unwrap();
    assert!(q.attribute_complex().same_simplices(&SimplicialComplex::boundary_complex(&["B", "D"])));
    assert_eq!(reduced_betti(&q.association_complex(), None).unwrap().betti[0], 1);

    // sigma = X needs X to be a simplex, so use a relation with a shared column
    let p = party_after();
    let q = restricted_link_relation(&p, &p.all_individuals(), &p.attribute_set(&["a"]).unwrap()).unwrap();
    assert!(q.attribute_complex().is_void() && q.association_complex().is_void());

    let t = tetra();
    let q = restricted_link_relation(&t, &t.individual_set(&["3"]).unwrap(), &t.attribute_set(&["a", "c", "d"]).unwrap()).unwrap();
    assert!(q.attribute_complex().same_simplices(&SimplicialComplex::boundary_complex(&["a", "c", "d"])));
    assert_eq!(q.relation.n_individuals(), 3);

    assert!(matches!(
        restricted_link_relation(&t, &s3_of(&t), &t.attribute_set(&["b"]).unwrap()),
        Err(Error::PreconditionViolated(_))
    ));
}

fn s3_of(t: &Relation) -> dowker::IndividualSet {
    t.individual_set(&["3"]).unwrap()
}

#[test]
fn deletion_examples() {
    let r = r4();
    let d = deletion_relation(&r, &r.attribute_set(&["a"]).unwrap());
    assert_eq!((d.relation.n_individuals(), d.relation.n_attributes()), (4, 2));
    assert_eq!(facets(&d.attribute_complex()), v(&[&["b", "c"]]));
    let all = deletion_relation(&r, &r.all_attributes());
    assert_eq!(all.complex_override, Some(ComplexOverride::Empty));
}

#[test]
fn cone_apexes() {
    let cone = SimplicialComplex::from_ids(&["a", "b", "v"], &[vec!["a", "v"], vec!["b", "v"]]).unwrap();
    let s = cone.strip_cone_apexes();
    assert_eq!(facets(&s), v(&[&["a"], &["b"]]));
    let t = dowker_attribute_complex(&tetra());
    assert!(t.strip_cone_apexes().same_simplices(&t));
    let one = SimplicialComplex::simplex(&["a", "b"]);
    assert!(one.strip_cone_apexes().same_simplices(&one));
}

#[test]
fn embedding_examples() {
    let host = dowker_attribute_complex(&tetra());
    let pt = SimplicialComplex::from_ids(&["p"], &[vec!["p"]]).unwrap();
    let e = pt.enumerate_embeddings(&host, 1 << 20).unwrap();
    // one vertex image each, times the facets containing it
    assert_eq!(BTreeSet::from_iter(e.iter().map(|x| x.vertex_map[0])).len(), 4);
    let big = SimplicialComplex::boundary_complex(&["1", "2", "3", "4", "5", "6"]);
    assert!(big.enumerate_embeddings(&host, 1 << 20).unwrap().is_empty());
    // a square pattern (4-cycle) into the octahedron boundary
    let square = SimplicialComplex::from_ids(
        &["w", "x", "y", "z"],
        &[vec!["w", "x"], vec!["x", "y"], vec!["y", "z"], vec!["z", "w"]],
    )
    .unwrap();
    let cycle = SimplicialComplex::from_ids(
        &["1", "2", "3", "4"],
        &[vec!["1", "2"], vec!["2", "3"], vec!["3", "4"], vec!["4", "1"]],
    )
    .unwrap();
    // automorphisms of the 4-cycle: 8
    assert_eq!(square.enumerate_embeddings(&cycle, 1 << 20).unwrap().len(), 8);
    assert!(matches!(square.enumerate_embeddings(&cycle, 2), Err(Error::TooLarge { .. })));
}

fn complex_from_masks(c: &SimplicialComplex) -> BTreeSet<u32> {
    c.faces(1 << 20).unwrap().iter().map(mask).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn free_faces_match_oracle(r in arb_relation(7, 8)) {
        let m = Masks::of(&r);
        let faces = m.attribute_faces();
        let facet_set = maximal(&m.rows);
        let want = free_faces(&faces, &facet_set);
        let got: BTreeSet<u32> = dowker_attribute_complex(&r).free_faces().unwrap().iter().map(mask).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn link_relation_models_link(r in arb_relation(6, 6)) {
        let m = Masks::of(&r);
        let phi = dowker_attribute_complex(&r);
        for g in m.attribute_faces() {
            let gb = bitset(g, m.m);
            let q = conditional_attribute_relation(&r, &gb);
            let lk = phi.link(&gb);
            let qc = q.attribute_complex();
            // compare as attribute-id sets
            let a: BTreeSet<Vec<String>> = qc.faces(1 << 20).unwrap().iter().map(|f| qc.ids(f)).collect();
            let b: BTreeSet<Vec<String>> = lk.faces(1 << 20).unwrap().iter().map(|f| lk.ids(f)).collect();
            prop_assert_eq!(a, b);
            // witness formulas
            if q.is_standard() {
                let qr = &q.relation;
                let qm = Masks::of(qr);
                for xi in 0..=qm.all_y() {
                    let xi_ids = qr.attribute_ids(&bitset(xi, qm.m));
                    let in_r = r.attribute_set(&xi_ids).unwrap();
                    let lhs = qr.individual_ids(&qr.psi(&bitset(xi, qm.m)));
                    let mut with_g = in_r.clone();
                    with_g.union_with(&gb);
                    prop_assert_eq!(lhs, r.individual_ids(&r.psi(&with_g)));
                }
                for k in 0..=qm.all_x() {
                    let k_ids = qr.individual_ids(&bitset(k, qm.n));
                    let in_r = r.individual_set(&k_ids).unwrap();
                    let mut want = r.phi(&in_r);
                    want.difference_with(&gb);
                    let got = qr.attribute_ids(&qr.phi(&bitset(k, qm.n)));
                    let want_ids: Vec<String> = r.attribute_ids(&want).into_iter().filter(|y| qr.attributes().contains(y)).collect();
                    prop_assert_eq!(got, want_ids);
                }
            }
        }
    }

    #[test]
    fn deletion_relation_models_deletion(r in arb_relation(6, 6), g in 0u32..64) {
        let m = Masks::of(&r);
        let g = g & m.all_y();
        let gb = bitset(g, m.m);
        let d = deletion_relation(&r, &gb);
        let dl = dowker_attribute_complex(&r).deletion(&gb);
        let dc = d.attribute_complex();
        let a: BTreeSet<Vec<String>> = dc.faces(1 << 20).unwrap().iter().map(|f| dc.ids(f)).collect();
        let b: BTreeSet<Vec<String>> = dl.faces(1 << 20).unwrap().iter().map(|f| dl.ids(f)).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn privacy_inherited_by_links_and_deletions(r in arb_relation(6, 6)) {
        if r.preserves_attribute_privacy() {
            let m = Masks::of(&r);
            for g in m.attribute_faces() {
                let gb = bitset(g, m.m);
                let q = conditional_attribute_relation(&r, &gb);
                if q.is_standard() {
                    prop_assert!(q.relation.preserves_attribute_privacy());
                }
                let d = deletion_relation(&r, &gb);
                if d.is_standard() {
                    prop_assert!(d.relation.preserves_attribute_privacy());
                }
            }
        }
    }

    #[test]
    fn dowker_duality_in_homology(r in arb_relation(6, 6)) {
        let a = reduced_betti(&dowker_attribute_complex(&r), None).unwrap();
        let b = reduced_betti(&dowker_association_complex(&r), None).unwrap();
        let trim = |v: &[usize]| { let mut v = v.to_vec(); while v.last() == Some(&0) { v.pop(); } v };
        prop_assert_eq!(trim(&a.betti), trim(&b.betti));
        prop_assert_eq!(a.empty_complex, b.empty_complex);
    }

    #[test]
    fn antichain_and_membership(r in arb_relation(6, 6)) {
        let m = Masks::of(&r);
        let c = dowker_attribute_complex(&r);
        let want: BTreeSet<u32> = m.attribute_faces().into_iter().collect();
        prop_assert_eq!(complex_from_masks(&c), want);
        let f: Vec<u32> = c.facets().iter().map(mask).collect();
        for (i, a) in f.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                prop_assert!(i == j || !subset(*a, *b));
            }
        }
    }
}
