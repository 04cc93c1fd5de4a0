use super::*;
use crate::families::{heisenberg, metacyclic_split};
use crate::pc::PcBuilder;

fn inv(v: &[u64]) -> FinAbInvariants {
    FinAbInvariants::from_cyclic_orders(v)
}

fn c3xc3() -> PcPresentation {
    PcBuilder::new("C3xC3", 3).gen("a", 3).gen("b", 3).build().unwrap()
}

#[test]
fn elementary_abelian() {
    let r = oracle(&c3xc3(), &OracleOptions::default()).unwrap();
    assert_eq!(r.m, inv(&[3]));
    assert_eq!(r.w, inv(&[3]));
    assert!(r.b0.is_trivial());
}

#[test]
fn cyclic_is_trivial() {
    let c9 = PcBuilder::new("C9", 3).gen("g", 9).build().unwrap();
    let r = oracle(&c9, &OracleOptions::default()).unwrap();
    assert!(r.w.is_trivial() && r.m.is_trivial() && r.b0.is_trivial());
}

#[test]
fn heisenberg_values() {
    let h = heisenberg(3).unwrap();
    let r = oracle(&h, &OracleOptions::default()).unwrap();
    assert_eq!(r.m, inv(&[3, 3]));
    assert!(r.b0.is_trivial());
    assert_eq!(m_oracle(&h).unwrap(), inv(&[3, 3]));
    assert!(b0_oracle(&h).unwrap().is_trivial());
}

#[test]
fn cap_enforced() {
    let h = heisenberg(3).unwrap();
    let e = oracle(&h, &OracleOptions { cap: 26, ..Default::default() });
    assert!(matches!(e, Err(OracleError::CapExceeded { .. })));
}

#[test]
fn full_presentation_counts() {
    let p = c3xc3();
    let f = full_wedge_presentation(&p, 3, 100).unwrap();
    assert_eq!(f.num_generators(), 81);
    assert!(f.rows.len() <= 2 * 729 + 9);
    assert!(f.rows.iter().all(|r| r.nnz() <= 6));
    for x in 0..9 {
        assert!(f.rows.iter().any(|r| r.entries() == [(f.symbol(x, x), 1)]));
    }
    let h = full_wedge_presentation(&heisenberg(3).unwrap(), 3, 100).unwrap();
    assert_eq!(h.num_generators(), 729);
}

#[test]
fn symbol_rewriting_matches_full_elimination() {
    // the full presentation needs no rewriting at all
    let groups = vec![
        c3xc3(),
        PcBuilder::new("C9", 3).gen("g", 9).build().unwrap(),
        PcBuilder::new("C2xC2", 2).gen("a", 2).gen("b", 2).build().unwrap(),
        PcBuilder::new("C4xC2", 2).gen("a", 4).gen("b", 2).build().unwrap(),
        PcBuilder::new("D8", 2).gen("a", 2).gen("b", 2).central("c", 2).comm("b", "a", &[("c", 1)]).build().unwrap(),
        PcBuilder::new("Q8", 2)
            .gen("i", 2)
            .gen("j", 2)
            .central("c", 2)
            .pow("i", &[("c", 1)])
            .pow("j", &[("c", 1)])
            .comm("j", "i", &[("c", 1)])
            .build()
            .unwrap(),
        heisenberg(3).unwrap(),
        metacyclic_split(3, 1, 2, 1).unwrap(),
    ];
    for p in groups {
        let r = oracle(&p, &OracleOptions::default()).unwrap();
        let full = full_wedge_presentation(&p, r.modulus_exponent + 1, 100).unwrap();
        assert_eq!(full.invariants(), r.w, "{}", p.name());
    }
}

#[test]
fn relabeling_invariance() {
    // same group with generators listed in another order
    let a = PcBuilder::new("x", 3).gen("a", 3).gen("b", 9).build().unwrap();
    let b = PcBuilder::new("y", 3).gen("b", 9).gen("a", 3).build().unwrap();
    let ra = oracle(&a, &OracleOptions::default()).unwrap();
    let rb = oracle(&b, &OracleOptions::default()).unwrap();
    assert_eq!((ra.w, ra.m, ra.b0), (rb.w, rb.m, rb.b0));
    let h = heisenberg(3).unwrap();
    let h2 = PcBuilder::new("H'", 3).gen("b", 3).gen("a", 3).central("c", 3).comm("a", "b", &[("c", 1)]).build().unwrap();
    let r1 = oracle(&h, &OracleOptions::default()).unwrap();
    let r2 = oracle(&h2, &OracleOptions::default()).unwrap();
    assert_eq!((r1.w, r1.m, r1.m0, r1.b0), (r2.w, r2.m, r2.m0, r2.b0));
}

#[test]
fn stability_check_fires() {
    // Z/27 needs modulus above 27
    let rows = vec![vec![27i64]];
    assert!(!stability_check(&rows, 1, 3, 2));
    assert!(!stability_check(&rows, 1, 3, 3));
    assert!(stability_check(&rows, 1, 3, 4));
    // too-small explicit modulus is caught and retried
    let c27 = PcBuilder::new("C27xC3", 3).gen("a", 27).gen("b", 3).build().unwrap();
    let r = oracle(&c27, &OracleOptions { modulus_exponent: Some(1), ..Default::default() }).unwrap();
    assert_eq!(r.modulus_exponent, 3);
    assert_eq!(r.w, inv(&[3]));
}

#[test]
fn engine_agrees_on_small_groups() {
    for p in [c3xc3(), heisenberg(3).unwrap(), metacyclic_split(3, 1, 2, 1).unwrap()] {
        let c = compare_with_engine(&p, &OracleOptions::default()).unwrap();
        assert!(c.agree, "{c:?}");
    }
}
