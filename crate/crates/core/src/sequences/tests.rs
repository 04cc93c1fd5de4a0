use super::*;
use crate::families::{corollary_c2_product, extraspecial_product, heisenberg, series_g, ExtraspecialKind};
use crate::pc::PcBuilder;

fn opts() -> SequenceOptions {
    SequenceOptions::default()
}

fn h_times_h() -> CentralProduct {
    let h = heisenberg(3).unwrap();
    let c = [h.generator(2)];
    central_product(&h, &c, &h, &c, &GeneratorMap::identity(&h)).unwrap()
}

#[test]
fn commutator_sets() {
    let ab = PcBuilder::new("C3xC3", 3).gen("a", 3).gen("b", 3).build().unwrap();
    let k = commutator_set(&ab, &opts()).unwrap();
    assert_eq!(k.len(), 1);
    assert!(k.contains(&ab.identity()));

    let h = heisenberg(3).unwrap();
    let k = commutator_set(&h, &opts()).unwrap();
    assert_eq!(k.len(), 3);
    assert!(k.iter().all(|x| h.is_central(x)));

    let g2 = series_g(2, 3, 1).unwrap();
    let k = commutator_set(&g2, &SequenceOptions { jobs: 4, ..opts() }).unwrap();
    let gamma = g2.z_element(&[0, 1]);
    assert!(k.contains(&gamma));
    assert_eq!(k, commutator_set(&g2, &opts()).unwrap());

    let big = series_g(2, 5, 1).unwrap();
    assert!(matches!(commutator_set(&big, &opts()), Err(SequenceError::CapExceeded { .. })));
}

#[test]
fn commutator_set_matches_all_pairs() {
    let g = crate::families::metacyclic_split(3, 1, 2, 1).unwrap();
    let elems = g.elements(1000).unwrap();
    let mut brute = BTreeSet::new();
    for x in &elems {
        for y in &elems {
            brute.insert(g.commutator(x, y));
        }
    }
    assert_eq!(commutator_set(&g, &opts()).unwrap(), brute);
}

#[test]
fn extension_orders() {
    let cp = h_times_h();
    let data = CentralExtensionData::from_central_product(&cp);
    assert_eq!(data.extension.order(), data.group().order() * data.kernel_order());
    assert_eq!(data.kernel_order(), BigInt::from(3));
}

#[test]
fn kernel_pair_antidiagonal() {
    let data = CentralExtensionData::from_central_product(&h_times_h());
    let kp = n1_n0(&data, &opts()).unwrap();
    // every element of N is a commutator in E
    assert_eq!(kp.n1_order, BigInt::from(3));
    assert_eq!(kp.n0_order, BigInt::from(3));
    assert!(kp.quotient.is_trivial());
    assert!(kp.n1.same_lattice(&data.kernel_lattice()));
}

#[test]
fn kernel_pair_trivial_cases() {
    let cp = h_times_h();
    let data = CentralExtensionData::new(&cp.product.group, &[]).unwrap();
    let kp = n1_n0(&data, &opts()).unwrap();
    assert_eq!((kp.n1_order.clone(), kp.n0_order.clone()), (BigInt::from(1), BigInt::from(1)));

    let ab = PcBuilder::new("Z", 3).central("u", 9).central("v", 3).build().unwrap();
    let data = CentralExtensionData::new(&ab, &[ab.generator(1)]).unwrap();
    let kp = n1_n0(&data, &opts()).unwrap();
    assert_eq!(kp.n1_order, BigInt::from(1));
    assert!(kp.quotient.is_trivial());
}

#[test]
fn n0_inside_n1() {
    for i in 1..=6 {
        let g = series_g(i, 3, 1).unwrap();
        let z = [g.z_element(&[1, 0]), g.z_element(&[1, 1])];
        for k in z {
            let data = CentralExtensionData::new(&g, &[k]).unwrap();
            let kp = n1_n0(&data, &opts()).unwrap();
            for v in &kp.n0_gens {
                assert!(kp.n1.contains(&big(v)));
            }
        }
    }
}

#[test]
fn exact_sequence_extraspecial() {
    let (_, cp) = extraspecial_product(3, 2, ExtraspecialKind::ExponentP).unwrap();
    let data = CentralExtensionData::from_central_product(&cp.unwrap());
    let r = verify_exact_sequence(&data, &opts()).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.cokernel.is_trivial() && r.n1_n0.is_trivial());
    assert!(r.xi_consistent);
}

#[test]
fn exact_sequence_metacyclic_product() {
    let cp = corollary_c2_product(3, 1, 2, 1, 1).unwrap();
    let r = verify_exact_sequence(&CentralExtensionData::from_central_product(&cp), &opts()).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.cokernel.is_trivial() && r.n1_n0.is_trivial());
}

#[test]
fn exact_sequence_trivial_kernel() {
    let cp = h_times_h();
    let data = CentralExtensionData::new(&cp.product.group, &[]).unwrap();
    let r = verify_exact_sequence(&data, &opts()).unwrap();
    assert!(r.passed && r.cokernel.is_trivial() && r.n1_n0.is_trivial());
}

#[test]
fn exact_sequence_quotients_of_series() {
    // kernels not meeting [E,E], meeting it partly, and inside it
    let g = series_g(1, 3, 1).unwrap();
    for z in [[1, 0], [0, 1], [1, 1], [1, 2]] {
        let data = CentralExtensionData::new(&g, &[g.z_element(&z)]).unwrap();
        let r = verify_exact_sequence(&data, &opts()).unwrap();
        assert!(r.passed, "{z:?}: {r:?}");
    }
}

#[test]
fn eta_respects_relations_and_kernels() {
    let data = CentralExtensionData::from_central_product(&h_times_h());
    let se = WedgeSystem::build(&data.extension).unwrap();
    let sg = WedgeSystem::build(data.group()).unwrap();
    let f = eta_matrix(&data, &se, &sg).unwrap();
    assert_eq!((f.rows(), f.cols()), (se.basis().len(), sg.basis().len()));
    for v in eta_star_image(&data, &se, &sg).unwrap() {
        let w: Vec<i64> = v.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert!(sg.in_kernel(&w));
    }
    // abelian E: every symbol of E comes from a commuting pair
    let ab = PcBuilder::new("A", 3).gen("a", 3).gen("b", 3).central("z", 3).build().unwrap();
    let data = CentralExtensionData::new(&ab, &[ab.generator(2)]).unwrap();
    let se = WedgeSystem::build(&ab).unwrap();
    let sg = WedgeSystem::build(data.group()).unwrap();
    let m0: Vec<Vec<BigInt>> =
        sg.m0_star(&WedgeOptions::default()).unwrap().essential.iter().map(|w| big(&w.expansion.0)).collect();
    let mut span = LatticeBasis::from_matrix(sg.relations());
    for v in &m0 {
        span.insert(v.clone());
    }
    for v in eta_star_image(&data, &se, &sg).unwrap() {
        assert!(span.contains(&v));
    }
}

#[test]
fn main1_heisenberg_pair() {
    let r = main1_heisenberg(3, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Confirmed);
    assert!(r.hypotheses.hold && r.hypotheses.homomorphism && r.hypotheses.restriction_bijective);
    assert_eq!(r.b0_g, Some(FinAbInvariants::trivial()));
    assert_eq!(r.n1_n0, Some(FinAbInvariants::trivial()));
    let json = serde_json::to_value(&r).unwrap();
    for key in ["hypotheses", "b0_G", "n1_n0", "verdict"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["verdict"], "confirmed");
}

#[test]
fn main1_metacyclic_pairs() {
    for (a1, a2) in [(1, 1), (1, 2), (2, 1)] {
        let r = main1_metacyclic(3, 1, 2, a1, a2, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed, "{a1} {a2}: {r:?}");
        assert!(!r.is_contradiction());
    }
}

#[test]
fn main1_not_applicable() {
    let h = heisenberg(3).unwrap();
    let c = [h.generator(2)];
    // a -> b, b -> a inverts the commutator relation
    let swap = GeneratorMap::new(&h, &h, vec![h.generator(1), h.generator(0), h.generator(2)]).unwrap();
    let r = verify_main1(&h, &c, &h, &c, &swap, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::NotApplicable);
    assert!(!r.hypotheses.homomorphism);
    assert_eq!(r.b0_g, None);
    // the trivial map is a homomorphism but kills K₁
    let trivial = GeneratorMap::new(&h, &h, vec![h.identity(); 3]).unwrap();
    let r = verify_main1(&h, &c, &h, &c, &trivial, &opts()).unwrap();
    assert!(r.hypotheses.homomorphism && !r.hypotheses.restriction_bijective);
    assert_eq!(r.verdict, Verdict::NotApplicable);
}
