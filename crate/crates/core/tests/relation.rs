mod common;

use common::*;
use dowker::complex::dowker_attribute_complex;
use dowker::fixtures::*;
use dowker::homology::kbit_relation;
use dowker::relation::*;
use dowker::{Error, Relation};
use proptest::prelude::*;

fn set(r: &Relation, a: &[&str]) -> AttributeSet {
    r.attribute_set(a).unwrap()
}

fn iset(r: &Relation, x: &[&str]) -> IndividualSet {
    r.individual_set(x).unwrap()
}

#[test]
fn build_rejects_unknown_and_void() {
    assert!(matches!(
        Relation::new(&["1"], &["a"], &[("2", "a")]),
        Err(Error::UnknownId { kind: "individual", .. })
    ));
    assert!(matches!(Relation::new(&["1"], &["a"], &[("1", "z")]), Err(Error::UnknownId { .. })));
    assert!(matches!(Relation::new::<&str>(&[], &["a"], &[]), Err(Error::VoidRelation)));
    let v = Relation::new_allow_void::<&str>(&["1"], &[], &[]).unwrap();
    assert!(v.is_void());
    assert!(v.ensure_nonvoid().is_err());
}

#[test]
fn build_examples() {
    let r = build_relation(&[("1", "a"), ("1", "b"), ("2", "b"), ("2", "c"), ("3", "c"), ("4", "c"), ("1", "a")], &["1", "2", "3", "4"], &["a", "b", "c"])
        .unwrap();
    assert_eq!(r, r4());
    let e = Relation::new::<&str>(&["1"], &["a"], &[]).unwrap();
    assert!(!e.is_void());
    assert_eq!(e.pair_count(), 0);
    assert_eq!(r4().add_entry("3", "a").unwrap(), r4_prime());
}

#[test]
fn phi_psi_examples() {
    let r = r4();
    assert_eq!(r.attribute_ids(&r.phi(&iset(&r, &["1"]))), ids(&["a", "b"]));
    assert_eq!(r.attribute_ids(&r.phi(&r.no_individuals())), ids(&["a", "b", "c"]));
    assert_eq!(r.attribute_ids(&r.phi(&iset(&r, &["2", "3"]))), ids(&["c"]));
    assert_eq!(r.individual_ids(&r.psi(&set(&r, &["c"]))), ids(&["2", "3", "4"]));
    assert!(r.psi(&set(&r, &["a", "c"])).is_clear());
    assert_eq!(r.psi(&r.no_attributes()), r.all_individuals());
}

#[test]
fn closure_examples() {
    let r = r4();
    assert_eq!(r.attribute_ids(&r.attribute_closure(&set(&r, &["a"]))), ids(&["a", "b"]));
    let rp = r4_prime();
    assert_eq!(rp.attribute_ids(&rp.attribute_closure(&set(&rp, &["a"]))), ids(&["a"]));
    let g = travel();
    assert_eq!(g.attribute_ids(&g.attribute_closure(&set(&g, &["B", "D"]))), ids(&["B", "C", "D"]));
    assert_eq!(r.individual_ids(&r.association_closure(&iset(&r, &["4"]))), ids(&["2", "3", "4"]));
    let e = ex20();
    assert_eq!(e.individual_ids(&e.association_closure(&iset(&e, &["3", "4"]))), ids(&["1", "3", "4", "6"]));
}

#[test]
fn privacy_examples() {
    assert!(!r4().preserves_attribute_privacy());
    assert!(r4_prime().preserves_attribute_privacy());
    assert!(tetra().preserves_attribute_privacy());
    assert!(!r4_prime().preserves_association_privacy());
    assert!(tetra().preserves_association_privacy());
    assert!(!ex20().preserves_association_privacy());
    assert!(health().preserves_attribute_privacy_for("2").unwrap());
    assert!(!r4().preserves_attribute_privacy_for("1").unwrap());
    assert!(ex20().preserves_attribute_privacy_for("3").unwrap());
    assert!(r4().preserves_attribute_privacy_for("9").is_err());
}

#[test]
fn identifiability_examples() {
    let r = r4();
    assert!(r.uniquely_identifiable("1").unwrap());
    assert!(!r.uniquely_identifiable("3").unwrap());
    let blank = Relation::from_rows(&["a"], &[("1", &["a"]), ("2", &[])]).unwrap();
    assert!(!blank.uniquely_identifiable("2").unwrap());
    assert!(matches!(r.uniquely_identifiable("7"), Err(Error::UnknownId { .. })));
}

fn block_union(a: &Relation, b: &Relation) -> Relation {
    let mut xs: Vec<String> = a.individuals().iter().map(|x| format!("L{x}")).collect();
    xs.extend(b.individuals().iter().map(|x| format!("R{x}")));
    let mut ys: Vec<String> = a.attributes().iter().map(|y| format!("L{y}")).collect();
    ys.extend(b.attributes().iter().map(|y| format!("R{y}")));
    let mut pairs: Vec<(String, String)> = a.pair_ids().into_iter().map(|(x, y)| (format!("L{x}"), format!("L{y}"))).collect();
    pairs.extend(b.pair_ids().into_iter().map(|(x, y)| (format!("R{x}"), format!("R{y}"))));
    Relation::new(&xs, &ys, &pairs).unwrap()
}

#[test]
fn connectivity_examples() {
    let r = r4();
    assert!(r.is_tight() && r.is_connected());
    let u = block_union(&r4_prime(), &tetra());
    let comps = u.components().unwrap();
    assert_eq!(comps.len(), 2);
    assert!(comps.iter().any(|c| is_isomorphic(c, &r4_prime()) && c.n_individuals() == 4 && c.n_attributes() == 3));
    assert!(comps.iter().any(|c| is_isomorphic(c, &tetra())));
    assert_eq!(double_moebius().components().unwrap().len(), 1);
    let loose = Relation::from_rows(&["a", "b"], &[("1", &["a"])]).unwrap();
    assert!(matches!(loose.components(), Err(Error::NotTight)));
}

#[test]
fn shape_examples() {
    let t = tetra().classify_privacy_shape().unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].shape, PrivacyShape::SphericalBoundary);
    let c = cyclic_staircase(5).unwrap().classify_privacy_shape().unwrap();
    assert_eq!(c[0].shape, PrivacyShape::CyclicStaircase);
    assert_eq!(r4().classify_privacy_shape().unwrap()[0].shape, PrivacyShape::Other);
    let single = Relation::from_rows(&["a"], &[("1", &["a"])]).unwrap();
    assert_eq!(single.classify_privacy_shape().unwrap()[0].shape, PrivacyShape::Singleton);
    let staircase_scrambled = Relation::from_rows(
        &["p", "q", "r", "s", "t"],
        &[("1", &["p", "r"]), ("2", &["r", "t"]), ("3", &["t", "q"]), ("4", &["q", "s"]), ("5", &["s", "p"])],
    )
    .unwrap();
    assert_eq!(staircase_scrambled.classify_privacy_shape().unwrap()[0].shape, PrivacyShape::CyclicStaircase);
}

#[test]
fn square_symmetry_examples() {
    assert!(tetra().check_square_symmetry().unwrap().holds);
    let diag = Relation::identity(&["1", "2"]).unwrap();
    let rep = diag.check_square_symmetry().unwrap();
    assert!(rep.attribute_privacy && rep.holds);
    assert!(matches!(r4().check_square_symmetry(), Err(Error::PreconditionViolated(_))));
}

#[test]
fn compose_examples() {
    assert_eq!(ice_cream_customers().compose(&ice_cream_scoops()).unwrap(), ice_cream_flavors());
    let r = travel();
    assert_eq!(r.compose(&Relation::identity(r.attributes()).unwrap()).unwrap(), r);
    let ones = Relation::all_ones(&["g", "c", "s", "v"], &["z1", "z2"]).unwrap();
    let sat = ice_cream_flavors().compose(&ones).unwrap();
    assert_eq!(sat.pair_count(), 4 * 2);
    assert!(matches!(r4().compose(&r4()), Err(Error::UniverseMismatch(_))));
}

#[test]
fn disinformation_examples() {
    let h2 = health_prime().unwrap();
    let s = h2.attribute_set(&["smokes"]).unwrap();
    assert_eq!(h2.attribute_closure(&s), s);
    let r = travel();
    assert_eq!(r.remove_entry("3", "C").unwrap().add_entry("3", "C").unwrap(), r);
    let sug = r4().suggest_disinformation();
    assert!(sug.contains(&("3".into(), "a".into())) || sug.contains(&("4".into(), "a".into())));
    // every suggestion destroys a free face that no row generates
    for (x, y) in &sug {
        let before = dowker_attribute_complex(&r4()).free_faces().unwrap();
        let after = dowker_attribute_complex(&r4().add_entry(x, y).unwrap()).free_faces().unwrap();
        assert!(before.iter().any(|f| !after.contains(f)));
    }
}

#[test]
fn min_identifying_examples() {
    let g = travel();
    let chi = g.min_identifying_set(&iset(&g, &["3"]), DEFAULT_NODE_CAP).unwrap();
    assert_eq!(chi.count_ones(..), 2);
    assert_eq!(g.psi(&chi), iset(&g, &["3"]));
    let t = tetra();
    assert_eq!(t.min_identifying_set(&iset(&t, &["3"]), DEFAULT_NODE_CAP).unwrap().count_ones(..), 3);
    let r = r4();
    let chi = r.min_identifying_set(&iset(&r, &["2"]), DEFAULT_NODE_CAP).unwrap();
    assert_eq!(r.attribute_ids(&chi), ids(&["b", "c"]));
    assert!(matches!(r.min_identifying_set(&iset(&r, &["3"]), DEFAULT_NODE_CAP), Err(Error::NotStable)));
    assert!(matches!(t.min_identifying_set(&iset(&t, &["3"]), 1), Err(Error::CapExceeded { .. })));
}

#[test]
fn mininf_examples() {
    let (r, x, y, k) = setcover_to_mininf(3, &[vec![0, 1], vec![1, 2]], 2).unwrap();
    assert!(r.mininf_decision(&x, &y, k).unwrap());
    assert!(!r.mininf_decision(&x, &y, 1).unwrap());
    let (r, x, y, _) = setcover_to_mininf(3, &[vec![0, 1], vec![1, 2]], 0).unwrap();
    assert!(!r.mininf_decision(&x, &y, 0).unwrap());
    // k = |Y_x \ {y}| is the unconstrained inference test
    let r = r4();
    assert!(r.mininf_decision("1", "b", 1).unwrap());
    let b = r.attribute_set(&["b"]).unwrap();
    let closure_a = r.attribute_closure(&r.attribute_set(&["a"]).unwrap());
    assert!(b.is_subset(&closure_a));
    assert!(!r.mininf_decision("2", "c", 1).unwrap());
    assert!(r.mininf_decision("1", "c", 1).is_err());
}

#[test]
fn mininf_matches_brute_force() {
    for (t, r) in random_relations(11, 200, 5, 5).iter().enumerate() {
        let m = Masks::of(r);
        for x in 0..m.n {
            for y in 0..m.m {
                if m.rows[x] >> y & 1 == 0 {
                    continue;
                }
                for k in 0..=5 {
                    let got = r.mininf_decision(&r.individuals()[x], &r.attributes()[y], k).unwrap();
                    assert_eq!(got, mininf_oracle(&m, x, y, k), "instance {t} x={x} y={y} k={k}\n{r}");
                }
            }
        }
    }
}

#[test]
fn kbit_privacy_requires_all_rows() {
    for k in 1..=4 {
        let full = kbit_relation(k).unwrap();
        assert!(full.preserves_attribute_privacy(), "k={k}");
        for drop in 0..full.n_individuals() {
            let keep = bitset(full_mask(full.n_individuals()) & !(1 << drop), full.n_individuals());
            let sub = full.restrict(&keep, &full.all_attributes());
            assert!(!sub.preserves_attribute_privacy(), "k={k} without row {drop}");
        }
    }
}

fn full_mask(n: usize) -> u32 {
    common::full(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn galois_adjunction(r in arb_relation(6, 6)) {
        let m = Masks::of(&r);
        for s in 0..=m.all_x() {
            for g in 0..=m.all_y() {
                let lhs = subset(s, mask(&r.psi(&bitset(g, m.m))));
                let rhs = subset(g, mask(&r.phi(&bitset(s, m.n))));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn closure_laws(r in arb_relation(6, 6)) {
        let m = Masks::of(&r);
        for g in 0..=m.all_y() {
            let gb = bitset(g, m.m);
            let c = r.attribute_closure(&gb);
            prop_assert!(gb.is_subset(&c));
            prop_assert_eq!(r.attribute_closure(&c), c.clone());
            for h in 0..=m.all_y() {
                if subset(g, h) {
                    let hb = bitset(h, m.m);
                    prop_assert!(c.is_subset(&r.attribute_closure(&hb)));
                    prop_assert!(r.psi(&hb).is_subset(&r.psi(&gb)));
                }
            }
        }
        for s in 0..=m.all_x() {
            let sb = bitset(s, m.n);
            let c = r.association_closure(&sb);
            prop_assert!(sb.is_subset(&c));
            prop_assert_eq!(r.association_closure(&c), c);
        }
    }

    #[test]
    fn rows_are_closed(r in arb_relation(6, 6)) {
        for i in 0..r.n_individuals() {
            prop_assert_eq!(&r.attribute_closure(r.row(i)), r.row(i));
        }
    }

    #[test]
    fn privacy_matches_oracles(r in arb_relation(6, 6)) {
        let m = Masks::of(&r);
        prop_assert_eq!(r.preserves_attribute_privacy(), attribute_privacy_oracle(&m));
        prop_assert_eq!(r.preserves_association_privacy(), association_privacy_oracle(&m));
        for i in 0..m.n {
            // privacy for x: every face below Y_x is closed
            let row = m.rows[i];
            let want = m.attribute_faces().iter().filter(|&&g| subset(g, row)).all(|&g| m.phi(m.psi(g)) == g);
            prop_assert_eq!(r.attribute_privacy_for_index(i), want);
            prop_assert_eq!(r.uniquely_identifiable_index(i), m.psi(row) == 1 << i);
        }
    }

    #[test]
    fn lemma_c9_alternate_privacy_test(r in arb_relation(6, 6)) {
        let m = Masks::of(&r);
        let cols = m.cols();
        let alt = m.attribute_faces().iter().all(|&g| {
            (0..m.m).all(|y| !subset(m.psi(g), cols[y]) || g >> y & 1 == 1)
        });
        prop_assert_eq!(r.preserves_attribute_privacy(), alt);
    }

    #[test]
    fn free_faces_and_privacy(r in arb_relation(6, 6)) {
        let m = Masks::of(&r);
        let has_free = dowker_attribute_complex(&r).has_free_face();
        if !has_free {
            prop_assert!(r.preserves_attribute_privacy());
        }
        let all_ident = (0..m.n).all(|i| m.psi(m.rows[i]) == 1 << i);
        if all_ident && r.preserves_attribute_privacy() {
            prop_assert!(!has_free);
        }
    }

    #[test]
    fn too_many_attributes(r in arb_relation(5, 6)) {
        if r.n_attributes() > r.n_individuals() && r.blank_columns().is_empty() {
            prop_assert!(!r.preserves_attribute_privacy());
        }
    }

    #[test]
    fn square_symmetry_holds(n in 2usize..=5, bits in proptest::collection::vec(any::<bool>(), 25)) {
        let mat: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| bits[i * 5 + j]).collect()).collect();
        let r = relation_from_matrix(&mat, n);
        if r.blank_columns().is_empty() {
            let rep = r.check_square_symmetry().unwrap();
            prop_assert!(rep.holds, "{:?}", rep.counterexample);
        }
    }

    #[test]
    fn min_identifying_is_minimum(r in arb_relation(5, 5)) {
        let m = Masks::of(&r);
        for (s, g) in m.poset() {
            let chi = r.min_identifying_set(&bitset(s, m.n), DEFAULT_NODE_CAP).unwrap();
            let cm = mask(&chi);
            prop_assert!(subset(cm, g));
            prop_assert_eq!(m.psi(cm), s);
            let best = (0..=g).filter(|&c| subset(c, g) && m.psi(c) == s).map(|c| c.count_ones()).min().unwrap();
            prop_assert_eq!(cm.count_ones(), best);
        }
    }

    #[test]
    fn components_partition(r in arb_relation(6, 6)) {
        if r.is_tight() {
            let comps = r.components().unwrap();
            prop_assert_eq!(comps.len() == 1, r.is_connected());
            prop_assert_eq!(comps.iter().map(|c| c.n_individuals()).sum::<usize>(), r.n_individuals());
            prop_assert_eq!(comps.iter().map(|c| c.n_attributes()).sum::<usize>(), r.n_attributes());
            prop_assert_eq!(comps.iter().map(|c| c.pair_count()).sum::<usize>(), r.pair_count());
            for c in &comps {
                prop_assert!(c.is_tight() && c.is_connected());
            }
        }
    }

    #[test]
    fn edits_are_inverse(r in arb_relation(5, 5), i in 0usize..5, j in 0usize..5) {
        let (i, j) = (i % r.n_individuals(), j % r.n_attributes());
        let (x, y) = (r.individuals()[i].clone(), r.attributes()[j].clone());
        if r.has(i, j) {
            prop_assert_eq!(r.remove_entry(&x, &y).unwrap().add_entry(&x, &y).unwrap(), r);
        } else {
            prop_assert_eq!(r.add_entry(&x, &y).unwrap().remove_entry(&x, &y).unwrap(), r);
        }
    }
}

#[test]
fn setcover_reduction_preserves_answers() {
    use rand::Rng;
    let mut g = rng(5);
    for t in 0..100 {
        let u = g.gen_range(1..=8usize);
        let nsets = g.gen_range(1..=6usize);
        let sets: Vec<Vec<usize>> = (0..nsets).map(|_| (0..u).filter(|_| g.gen_bool(0.4)).collect()).collect();
        let k = g.gen_range(0..=nsets);
        let brute = (0u32..1 << nsets).any(|pick| {
            pick.count_ones() as usize <= k
                && (0..u).all(|e| (0..nsets).any(|s| pick >> s & 1 == 1 && sets[s].contains(&e)))
        });
        let (r, x, y, k) = setcover_to_mininf(u, &sets, k).unwrap();
        assert_eq!(r.mininf_decision(&x, &y, k).unwrap(), brute, "instance {t}: {sets:?} k={k}");
    }
}
