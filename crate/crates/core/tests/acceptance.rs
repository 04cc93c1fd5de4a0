//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use bogomolov::families::{
    corollary_c2, corollary_c2_product, cyclic, extraspecial, heisenberg, metacyclic_split, series_g, ExtraspecialKind,
};
use bogomolov::lattice::{snf, subgroup_quotient, IntMatrix};
use bogomolov::oracle::{compare_with_engine, OracleOptions};
use bogomolov::sequences::{
    main1_heisenberg, main1_metacyclic, verify_exact_sequence, CentralExtensionData, SequenceOptions, Verdict,
};
use bogomolov::wedge::Expander;
use bogomolov::{bogomolov, FinAbInvariants, PcBuilder, PcPresentation, WedgeOptions, WedgeSystem};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

fn b0(p: &PcPresentation) -> Result<FinAbInvariants, String> {
    bogomolov(p, &WedgeOptions::default()).map(|b| b.invariants).map_err(|e| format!("{}: {e}", p.name()))
}

fn require_trivial(groups: impl IntoIterator<Item = Result<PcPresentation, String>>) -> Outcome {
    let mut n = 0;
    for g in groups {
        let g = g?;
        let inv = b0(&g)?;
        if !inv.is_trivial() {
            return Err(format!("{} has B0 = {inv}", g.name()));
        }
        n += 1;
    }
    Ok(format!("{n} groups, all B0 = []"))
}

fn series() -> Outcome {
    let groups = [3u64, 5].into_iter().flat_map(|p| (1..=6).map(move |i| series_g(i, p, 1).map_err(|e| e.to_string())));
    require_trivial(groups)
}

fn extraspecials() -> Outcome {
    let mut groups = Vec::new();
    for p in [3u64, 5] {
        for n in [1, 2] {
            for kind in [ExtraspecialKind::ExponentP, ExtraspecialKind::ExponentP2] {
                groups.push(extraspecial(p, n, kind).map_err(|e| e.to_string()));
            }
        }
    }
    require_trivial(groups)
}

fn metacyclic_products() -> Outcome {
    let mut groups = Vec::new();
    for a1 in [1, 2] {
        for a2 in [1, 2] {
            groups.push(corollary_c2(3, 1, 2, a1, a2).map_err(|e| e.to_string()));
        }
    }
    require_trivial(groups)
}

fn central_product_criterion() -> Outcome {
    let opts = SequenceOptions::default();
    let reports = [
        ("heisenberg pair", main1_heisenberg(3, &opts)),
        ("metacyclic pair", main1_metacyclic(3, 1, 2, 1, 1, &opts)),
    ];
    let mut out = Vec::new();
    for (name, r) in reports {
        let r = r.map_err(|e| format!("{name}: {e}"))?;
        if r.verdict != Verdict::Confirmed {
            return Err(format!("{name}: verdict {:?}, hypotheses {:?}, B0(G) {:?}", r.verdict, r.hypotheses, r.b0_g));
        }
        out.push(format!("{name} confirmed"));
    }
    Ok(out.join(", "))
}

fn exact_sequences() -> Outcome {
    let opts = SequenceOptions::default();
    let h = heisenberg(3).map_err(|e| e.to_string())?;
    let c = [h.generator(2)];
    let hh = bogomolov::families::central_product(&h, &c, &h, &c, &bogomolov::families::GeneratorMap::identity(&h))
        .map_err(|e| e.to_string())?;
    let mc = corollary_c2_product(3, 1, 2, 1, 1).map_err(|e| e.to_string())?;
    let trivial = CentralExtensionData::new(&hh.product.group, &[]).map_err(|e| e.to_string())?;
    let cases = [
        ("heisenberg pair", CentralExtensionData::from_central_product(&hh)),
        ("metacyclic pair", CentralExtensionData::from_central_product(&mc)),
        ("trivial N", trivial),
    ];
    let mut out = Vec::new();
    for (name, data) in cases {
        let r = verify_exact_sequence(&data, &opts).map_err(|e| format!("{name}: {e}"))?;
        if !r.passed {
            return Err(format!("{name}: B0(G)/eta(B0(E)) = {}, N1/N0 = {}, xi consistent {}", r.cokernel, r.n1_n0, r.xi_consistent));
        }
        out.push(format!("{name} {} = {}", r.cokernel, r.n1_n0));
    }
    Ok(out.join(", "))
}

fn c3xc3() -> PcPresentation {
    PcBuilder::new("C3xC3", 3).gen("a", 3).gen("b", 3).build().unwrap()
}

fn direct_products() -> Outcome {
    let factors = [c3xc3(), heisenberg(3).unwrap(), metacyclic_split(3, 1, 2, 1).unwrap()];
    let mut n = 0;
    for (i, p) in factors.iter().enumerate() {
        for q in &factors[i..] {
            let pq = p.direct_product(q).map_err(|e| e.to_string())?;
            if pq.order() > BigInt::from(729) {
                continue;
            }
            let merged = b0(p)?.product(&b0(q)?);
            let got = b0(&pq)?;
            if got != merged {
                return Err(format!("{} x {}: {got} vs {merged}", p.name(), q.name()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} products match"))
}

fn q8() -> PcPresentation {
    PcBuilder::new("Q8", 2)
        .gen("i", 2)
        .gen("j", 2)
        .central("c", 2)
        .pow("i", &[("c", 1)])
        .pow("j", &[("c", 1)])
        .comm("j", "i", &[("c", 1)])
        .build()
        .unwrap()
}

fn d8() -> PcPresentation {
    PcBuilder::new("D8", 2).gen("a", 2).gen("b", 2).central("c", 2).comm("b", "a", &[("c", 1)]).build().unwrap()
}

fn oracle_suite() -> Vec<PcPresentation> {
    vec![
        cyclic(3, 2).unwrap(),
        c3xc3(),
        heisenberg(3).unwrap(),
        metacyclic_split(3, 1, 2, 1).unwrap(),
        extraspecial(3, 2, ExtraspecialKind::ExponentP).unwrap(),
        extraspecial(3, 2, ExtraspecialKind::ExponentP2).unwrap(),
        corollary_c2(3, 1, 2, 1, 1).unwrap(),
        q8(),
        d8(),
        extraspecial(2, 2, ExtraspecialKind::ExponentP).unwrap(),
    ]
}

fn oracle_equivalence() -> Outcome {
    let mut n = 0;
    for g in oracle_suite() {
        let c = compare_with_engine(&g, &OracleOptions::default()).map_err(|e| format!("{}: {e}", g.name()))?;
        if !c.agree {
            return Err(format!(
                "{}: oracle W {} M* {} M0* {} B0 {}, engine W {} M* {} M0* {} B0 {}",
                g.name(),
                c.oracle.w,
                c.oracle.m,
                c.oracle.m0,
                c.oracle.b0,
                c.engine_w,
                c.engine_m,
                c.engine_m0,
                c.engine_b0
            ));
        }
        n += 1;
    }
    Ok(format!("{n} groups agree on W, M*, M0*, B0"))
}

fn property_suite() -> Vec<PcPresentation> {
    let mut v = oracle_suite();
    v.push(series_g(1, 3, 1).unwrap());
    v.push(series_g(6, 3, 1).unwrap());
    v
}

fn run(cases: u32, f: impl Fn(&mut TestRunner) -> Result<(), String>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    f(&mut runner)
}

fn det_is_unit(m: &IntMatrix) -> bool {
    m.determinant().abs().is_one()
}

fn check_snf(rows: usize, cols: usize, entries: &[i64]) -> Result<(), TestCaseError> {
    let a = IntMatrix::from_rows(cols, &entries.chunks(cols).take(rows).map(|r| r.to_vec()).collect::<Vec<_>>());
    let s = snf(&a);
    prop_assert!(det_is_unit(&s.u) && det_is_unit(&s.v), "non-unimodular transforms");
    prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
    for i in 0..rows {
        for j in 0..cols {
            if i != j {
                prop_assert!(s.d[(i, j)].is_zero());
            }
        }
    }
    let d = s.diagonal();
    for w in d.windows(2) {
        prop_assert!(!w[0].is_negative() && !w[1].is_negative());
        if w[0].is_zero() {
            prop_assert!(w[1].is_zero());
        } else {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }
    Ok(())
}

fn properties() -> Outcome {
    let matrices = (1usize..=8, 1usize..=8, proptest::collection::vec(-30i64..30, 64));
    run(1000, |r| r.run(&matrices, |(m, n, e)| check_snf(m, n, &e)).map_err(|e| format!("snf: {e}")))?;

    let suite = property_suite();
    for p in &suite {
        let n = p.num_gens();
        let elem = || proptest::collection::vec(-50i64..50, n);
        run(1000, |r| {
            r.run(&(elem(), elem(), elem()), |(a, b, c)| {
                let (x, y, z) = (p.element(&a).unwrap(), p.element(&b).unwrap(), p.element(&c).unwrap());
                prop_assert_eq!(p.multiply(&p.multiply(&x, &y), &z), p.multiply(&x, &p.multiply(&y, &z)));
                Ok(())
            })
            .map_err(|e| format!("associativity in {}: {e}", p.name()))
        })?;

        let sys = WedgeSystem::build(p).map_err(|e| e.to_string())?;
        let lattice = sys.presentation().relation_lattice();
        let ex = Expander::new(p);
        run(500, |r| {
            r.run(&(elem(), elem()), |(a, b)| {
                let (x, y) = (p.element(&a).unwrap(), p.element(&b).unwrap());
                let xy = ex.expand(&x, &y);
                let s = xy.add(&ex.expand(&y, &x));
                let sum: Vec<BigInt> = s.0.iter().map(|&v| BigInt::from(v)).collect();
                prop_assert!(sys.basis().is_empty() || lattice.contains(&sum), "x∧y + y∧x not a relation");
                prop_assert_eq!(p.z_element(&ex.kappa(&xy)), p.commutator(&x, &y));
                Ok(())
            })
            .map_err(|e| format!("wedge expansion in {}: {e}", p.name()))
        })?;

        let symbols = sys.m0_star(&WedgeOptions::default()).map_err(|e| e.to_string())?;
        if let Some(w) = symbols.essential.iter().find(|w| !sys.in_kernel(&w.expansion.0)) {
            return Err(format!("{}: {} ∧ {} lies outside M*", p.name(), p.format_element(&w.x), p.format_element(&w.y)));
        }
    }
    Ok(format!("snf 1000 matrices; associativity, antisymmetry, kappa and M0* in M* over {} groups", suite.len()))
}

fn synthetic_quotients() -> Outcome {
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let cases: Vec<(IntMatrix, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, FinAbInvariants)> = vec![
        (IntMatrix::from_rows(2, &[vec![3i64, 0], vec![0, 9]]), vec![big(&[1, 0]), big(&[0, 1])], vec![], FinAbInvariants::from_cyclic_orders(&[3, 9])),
        (IntMatrix::from_rows(2, &[vec![9i64, 0], vec![0, 27]]), vec![big(&[1, 0]), big(&[0, 1])], vec![big(&[3, 0])], FinAbInvariants::from_cyclic_orders(&[3, 27])),
        (IntMatrix::from_rows(3, &[vec![3i64, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]), vec![big(&[1, 1, 0]), big(&[0, 1, 1])], vec![big(&[1, 2, 1])], FinAbInvariants::from_cyclic_orders(&[3])),
        (IntMatrix::from_rows(2, &[vec![4i64, 2], vec![0, 8]]), vec![big(&[1, 0]), big(&[0, 1])], vec![], FinAbInvariants::from_cyclic_orders(&[2, 16])),
    ];
    for (rels, num, den, want) in cases {
        let got = subgroup_quotient(&rels, &num, &den).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("expected {want}, got {got}"));
        }
    }
    Ok("4 lattice quotients, including Z^2/<(3,0),(0,9)> = [3, 9]".into())
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("series G1..G6 at p = 3, 5", series),
        ("extraspecial groups", extraspecials),
        ("central products of split metacyclic groups", metacyclic_products),
        ("central-product criterion", central_product_criterion),
        ("exact sequence", exact_sequences),
        ("direct products", direct_products),
        ("oracle equivalence", oracle_equivalence),
        ("property suites", properties),
        ("nonzero quotients", synthetic_quotients),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {id} PASS ({name}; {detail}; {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL ({name}; {detail}; {secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
