use num_bigint::BigInt;

use super::*;

fn order(p: &PcPresentation) -> BigInt {
    p.order()
}

#[test]
fn series_orders_and_relations() {
    for i in 1..=6 {
        let g = series_g(i, 3, 1).unwrap();
        assert_eq!(order(&g), BigInt::from(729));
        g.validate().unwrap();
        assert!(!g.derived_subgroup().is_empty());
    }
    let g1 = series_g(1, 3, 1).unwrap();
    let (a1, a2, b1, b2) = (g1.generator(0), g1.generator(1), g1.generator(2), g1.generator(3));
    // [b1, a1] = b2^3 and [b2, a2] = b1^3
    assert_eq!(g1.commutator(&b1, &a1), g1.power(&b2, 3));
    assert_eq!(g1.commutator(&b2, &a2), g1.power(&b1, 3));
    assert_eq!(g1.element_order(&b1), 9);
    assert_eq!(g1.element_order(&a1), 3);
    let g3 = series_g(3, 3, 1).unwrap();
    let (a1, a2, b2) = (g3.generator(0), g3.generator(1), g3.generator(3));
    assert_eq!(g3.commutator(&a1, &a2), g3.power(&b2, 3));
    let g5 = series_g(5, 3, 1).unwrap();
    let (a1, b1, b2) = (g5.generator(0), g5.generator(2), g5.generator(3));
    assert_eq!(g5.commutator(&b1, &a1), g5.multiply(&g5.power(&b1, 3), &g5.power(&b2, 3)));
    let g6 = series_g(6, 3, 1).unwrap();
    let (a1, a2, b1) = (g6.generator(0), g6.generator(1), g6.generator(2));
    assert_eq!(g6.commutator(&a1, &a2), g6.power(&b1, 3));
    assert_eq!(series_g(2, 5, 1).unwrap().order(), BigInt::from(15625));
    assert_eq!(series_g(4, 3, 2).unwrap().order(), BigInt::from(3u64.pow(12)));
}

#[test]
fn series_errors() {
    assert_eq!(series_g(1, 2, 1), Err(FamilyError::EvenPrime(2)));
    assert_eq!(series_g(7, 3, 1), Err(FamilyError::BadIndex(7)));
    assert_eq!(series_g(0, 3, 1), Err(FamilyError::BadIndex(0)));
    assert!(matches!(series_g(1, 9, 1), Err(FamilyError::Pc(PcError::NotPrime(9)))));
}

#[test]
fn metacyclic_examples() {
    let m = metacyclic_split(3, 1, 2, 1).unwrap();
    assert_eq!(m.order(), BigInt::from(27));
    let (a, b) = (m.generator(0), m.generator(1));
    assert_eq!(m.commutator(&b, &a), m.power(&b, 3));
    assert_eq!(m.element_order(&b), 9);
    assert_eq!(metacyclic_split(3, 1, 2, 2).unwrap().order(), BigInt::from(81));
    assert!(matches!(metacyclic_split(3, 1, 3, 1), Err(FamilyError::NotClassTwo(_))));
    assert!(matches!(metacyclic_split(3, 2, 2, 1), Err(FamilyError::BadParameter(_))));
    // a of order 3 cannot act with order 9 on <b>
    assert!(matches!(metacyclic_split(3, 2, 4, 1), Err(FamilyError::BadParameter(_))));
    assert_eq!(metacyclic_split(3, 2, 4, 2).unwrap().order(), BigInt::from(3u64.pow(6)));
}

#[test]
fn extraspecial_orders_and_centers() {
    for p in [2u64, 3, 5] {
        for n in 1..=2 {
            for kind in [ExtraspecialKind::ExponentP, ExtraspecialKind::ExponentP2] {
                let g = extraspecial(p, n, kind).unwrap();
                g.validate().unwrap();
                assert_eq!(g.order(), BigInt::from(p).pow(2 * n + 1));
                assert_eq!(g.num_central(), 1);
                if g.order() <= BigInt::from(3125) {
                    assert_eq!(g.center(1 << 16).unwrap().len() as u64, p, "{}", g.name());
                }
                let exponent = g.elements(1 << 16).unwrap().iter().map(|x| g.element_order(x)).max().unwrap();
                let expected = match kind {
                    ExtraspecialKind::ExponentP if p > 2 => p,
                    _ => p * p,
                };
                assert_eq!(exponent, expected, "{}", g.name());
            }
        }
    }
    let h = heisenberg(3).unwrap();
    assert_eq!(extraspecial(3, 1, ExtraspecialKind::ExponentP).unwrap().canonical_hash(), h.with_labels(&["a1", "b1", "c"]).canonical_hash());
    let e = extraspecial(3, 2, ExtraspecialKind::ExponentP).unwrap();
    assert_eq!(e.labels(), &["a1", "b1", "a2", "b2", "c"]);
}

#[test]
fn homomorphism_checks() {
    let m1 = metacyclic_split(3, 1, 2, 1).unwrap();
    let m2 = metacyclic_split(3, 1, 2, 1).unwrap();
    let theta = GeneratorMap::from_labels(&m1, &m2, &[("a", "a"), ("b", "b"), ("z", "z")]).unwrap();
    assert!(check_homomorphism(&theta).ok);
    assert!(check_homomorphism(&GeneratorMap::identity(&m1)).ok);
    let bad = GeneratorMap::from_labels(&m1, &m2, &[("a", "a"), ("b", "a"), ("z", "z")]).unwrap();
    let r = check_homomorphism(&bad);
    assert!(!r.ok);
    assert!(r.failing_relator.is_some());
    // b -> a sends b^3 = z to a^3 = 1, not to z
    assert_eq!(r.failing_relator.as_deref(), Some("b^3"));
}

#[test]
fn central_products() {
    let h = heisenberg(3).unwrap();
    let theta = GeneratorMap::identity(&h);
    let cp = central_product(&h, &[h.generator(2)], &h, &[h.generator(2)], &theta).unwrap();
    assert_eq!(cp.group.order(), BigInt::from(243));
    assert_eq!(cp.group.center(1 << 16).unwrap().len(), 3);
    // trivial K gives the direct product
    let cp0 = central_product(&h, &[], &h, &[], &theta).unwrap();
    assert_eq!(cp0.group.canonical_hash(), h.direct_product(&h).unwrap().canonical_hash());
    // K not central
    assert!(matches!(central_product(&h, &[h.generator(0)], &h, &[h.generator(2)], &theta), Err(FamilyError::NotCentral(_))));
    // θ(K1) outside K2
    let c3 = PcBuilder::new("C3z", 3).central("z", 3).build().unwrap();
    let nine = PcBuilder::new("C9z", 3).gen("g", 3).central("z", 3).pow("g", &[("z", 1)]).build().unwrap();
    let to_nine = GeneratorMap::new(&c3, &nine, vec![nine.identity()]).unwrap();
    assert!(matches!(
        central_product(&c3, &[c3.generator(0)], &nine, &[nine.generator(1)], &to_nine),
        Err(FamilyError::NotIso(_))
    ));
    let c2 = cyclic(2, 1).unwrap();
    assert!(matches!(
        central_product(&h, &[], &c2, &[], &GeneratorMap::new(&h, &c2, vec![c2.identity(); 3]).unwrap()),
        Err(FamilyError::Pc(PcError::PrimeMismatch(3, 2)))
    ));
}

#[test]
fn corollary_c2_orders() {
    for (a1, a2) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let g = corollary_c2(3, 1, 2, a1, a2).unwrap();
        g.validate().unwrap();
        assert_eq!(g.order(), BigInt::from(3u64.pow(a1 + a2 + 3)));
    }
    let cp = corollary_c2_product(3, 1, 2, 1, 1).unwrap();
    let g = &cp.group;
    assert_eq!(g.labels(), &["a1", "b1", "a2", "b2", "z"]);
    // b1^3 = b2^3 in the product
    assert_eq!(g.power(&g.generator(1), 3), g.power(&g.generator(3), 3));
    assert!(check_homomorphism(&cp.theta).ok);
    assert!(matches!(corollary_c2(3, 1, 3, 1, 1), Err(FamilyError::NotClassTwo(_))));
}
