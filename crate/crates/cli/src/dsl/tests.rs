use super::*;
use bogomolov::families::{extraspecial, heisenberg, series_g, ExtraspecialKind};

const HEISENBERG: &str = "group H3 {
  prime 3;
  gens a b;
  central c;
  comm [b,a] = c;
}
";

fn syntax_at(text: &str) -> (usize, usize, String) {
    match parse_dsl(text) {
        Err(DslError::Syntax { pos, msg }) => (pos.line, pos.col, msg),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn parses_heisenberg() {
    let h = parse_dsl(HEISENBERG).unwrap();
    assert_eq!(h.order().to_string(), "27");
    assert_eq!(h.name(), "H3");
    assert_eq!(h.canonical_hash(), heisenberg(3).unwrap().canonical_hash());
}

#[test]
fn round_trips() {
    let groups = [
        series_g(1, 3, 1).unwrap(),
        series_g(6, 5, 1).unwrap(),
        extraspecial(3, 2, ExtraspecialKind::ExponentP2).unwrap(),
        heisenberg(2).unwrap(),
    ];
    for g in groups {
        let back = parse_dsl(&g.to_dsl()).unwrap();
        assert_eq!(back.canonical_hash(), g.canonical_hash(), "{}", g.to_dsl());
        assert_eq!(back.name(), g.name());
    }
}

#[test]
fn orders_powers_and_comments() {
    let text = "# metacyclic of order 27
group M {
  prime 3; gens a b z; central z
  ; order b 3   # relative order
  ; pow b = z ; comm [b, a] = z^1
}";
    let m = parse_dsl(text).unwrap();
    assert_eq!(m.order().to_string(), "27");
    let b = m.generator(1);
    assert_eq!(m.element_order(&b), 9);
    let trivial = parse_dsl("group T { prime 5; gens g; order g 25; pow g = 1 }").unwrap();
    assert_eq!(trivial.order().to_string(), "25");
}

#[test]
fn unknown_generator_reports_line() {
    let text = "group X {\n  prime 3;\n  gens a b;\n  central c;\n  comm [b,d] = c;\n}\n";
    let (line, col, msg) = syntax_at(text);
    assert_eq!((line, col), (5, 11));
    assert!(msg.contains("'d'"), "{msg}");
    let (line, _, _) = syntax_at("group X {\n prime 3;\n gens a;\n central c;\n pow a = q;\n}");
    assert_eq!(line, 5);
}

#[test]
fn syntax_errors() {
    assert_eq!(syntax_at("grup X { prime 3; }").0, 1);
    assert!(syntax_at("group X { prime 3; gens a }  extra").2.contains("after"));
    assert!(syntax_at("group X { gens a; }").2.contains("prime"));
    assert!(syntax_at("group X { prime 3; frobnicate a; }").2.contains("frobnicate"));
    assert!(syntax_at("group X { prime 3; gens a; comm [a b] = 1; }").2.contains("','"));
    assert_eq!(syntax_at("group X {\n prime 3;\n gens a a;\n}").0, 3);
    assert!(syntax_at("group X { prime 3; gens a; pow a = ; }").2.contains("word"));
    assert!(syntax_at("group { prime 3; }").2.contains("name"));
    assert!(syntax_at("group X { prime 3; gens a $; }").2.contains('$'));
}

#[test]
fn validation_errors_pass_through() {
    // conjugating b by a^3 = 1 gives b c^3 when c has order 9
    let text = "group Bad { prime 3; gens a b; central c; order c 9; comm [b,a] = c; }";
    assert!(matches!(parse_dsl(text), Err(DslError::Pc(PcError::InconsistentPresentation(_)))));
    let text = "group Bad { prime 3; gens a b; central c; comm [b,a] = a; }";
    assert!(matches!(parse_dsl(text), Err(DslError::Pc(PcError::NotRefined(_)))));
    assert!(matches!(parse_dsl("group Bad { prime 4; gens a; }"), Err(DslError::Pc(PcError::NotPrime(4)))));
    assert!(matches!(parse_dsl("group Bad { prime 3; gens a; order a 6; }"), Err(DslError::Pc(PcError::BadRelativeOrder { .. }))));
}
