use super::*;
use bogomolov::families::series_g;

fn build(s: &str) -> PcPresentation {
    parse_expr(s).unwrap().build().unwrap()
}

#[test]
fn parses_calls_and_paths() {
    let e = parse_expr("G1(p=3, r=1)").unwrap();
    assert_eq!(e.to_string(), "G1(p=3,r=1)");
    assert_eq!(parse_expr("groups/h.pc").unwrap(), Expr::File("groups/h.pc".into()));
    let e = parse_expr(r#"cp(heisenberg(3), heisenberg(p=3), k1="c", k2="c")"#).unwrap();
    let Expr::Call(c) = e else { panic!() };
    assert_eq!(c.args.len(), 4);
    assert!(matches!(&c.args[0].1, Value::Call(inner) if inner.name == "heisenberg"));
    assert!(matches!(parse_expr("G1(p=3,,r=1)"), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse_expr("G1(p=3) x"), Ok(Expr::File(_))));
    assert!(matches!(parse_expr(r#"cp(a, "b)"#), Err(ExprError::Syntax { .. })));
}

#[test]
fn families() {
    assert_eq!(build("G1(p=3,r=1)").canonical_hash(), series_g(1, 3, 1).unwrap().canonical_hash());
    assert_eq!(build("G4(3)").canonical_hash(), series_g(4, 3, 1).unwrap().canonical_hash());
    assert_eq!(build("series(i=2,p=3)").canonical_hash(), series_g(2, 3, 1).unwrap().canonical_hash());
    assert_eq!(build("heisenberg(p=3)").order().to_string(), "27");
    assert_eq!(build("cyclic(3,2)").order().to_string(), "9");
    assert_eq!(build("extraspecial(p=3,n=2,kind=p2)").order().to_string(), "243");
    assert_eq!(build("metacyclic(p=3,r=1,b=2,a=1)").order().to_string(), "27");
    assert_eq!(build("c2(p=3,r=1,b=2,a1=1,a2=2)").order().to_string(), "729");
    assert_eq!(build("prod(heisenberg(3), cyclic(3,1))").order().to_string(), "81");
    assert!(matches!(parse_expr("G7(p=3)").unwrap().build(), Err(ExprError::UnknownFamily(_))));
    assert!(matches!(parse_expr("G1(p=3,q=1)").unwrap().build(), Err(ExprError::BadArgument { .. })));
    assert!(matches!(parse_expr("G1(r=1)").unwrap().build(), Err(ExprError::BadArgument { .. })));
    assert!(matches!(parse_expr("G1(3,p=3)").unwrap().build(), Err(ExprError::BadArgument { .. })));
    assert!(matches!(parse_expr("G1(p=2)").unwrap().build(), Err(ExprError::Family(FamilyError::EvenPrime(2)))));
    assert!(matches!(parse_expr("extraspecial(3,1,kind=q)").unwrap().build(), Err(ExprError::BadArgument { .. })));
}

#[test]
fn central_product_expressions() {
    let g = build(r#"cp(heisenberg(3), heisenberg(3), k1="c", k2="c", theta="a: a; b: b; c: c")"#);
    assert_eq!(g.order().to_string(), "243");
    let same = build(r#"cp(heisenberg(3), heisenberg(3), k1="c", k2="c")"#);
    assert_eq!(same.canonical_hash(), g.canonical_hash());
    let e = parse_expr(r#"cp(heisenberg(3), heisenberg(3), k1="c", k2="c", theta="a: b; b: a; c: c^2")"#).unwrap();
    let parts = e.product_parts().unwrap().unwrap();
    assert_eq!(parts.theta.images[2], parts.right.power(&parts.right.generator(2), 2));
    // θ(K₁) must be K₂
    let bad = parse_expr(r#"cp(heisenberg(3), heisenberg(3), k1="c", k2="c", theta="a: a")"#).unwrap();
    assert!(matches!(bad.build(), Err(ExprError::Family(FamilyError::NotIso(_)))));
    let bad = parse_expr(r#"cp(heisenberg(3), heisenberg(3), k1="c", k2="c", theta="x: a")"#).unwrap();
    assert!(matches!(bad.product_parts(), Err(ExprError::BadArgument { .. })));
}

#[test]
fn product_parts_for_families() {
    let e = parse_expr("c2(p=3,r=1,b=2,a1=1,a2=2)").unwrap();
    let parts = e.product_parts().unwrap().unwrap();
    // larger factor first
    assert_eq!(parts.left.order().to_string(), "81");
    assert_eq!(parts.glue().unwrap().group.order().to_string(), "729");
    let e = parse_expr("extraspecial(p=3,n=2)").unwrap();
    assert!(e.product_parts().unwrap().is_some());
    assert!(parse_expr("extraspecial(p=3,n=1)").unwrap().product_parts().unwrap().is_none());
    assert!(parse_expr("heisenberg(3)").unwrap().product_parts().unwrap().is_none());
}

#[test]
fn words() {
    let h = build("heisenberg(3)");
    let x = word_element(&h, "b a").unwrap();
    assert_eq!(x, h.multiply(&h.generator(1), &h.generator(0)));
    assert_eq!(word_element(&h, "1").unwrap(), h.identity());
    assert_eq!(word_element(&h, "c^-1").unwrap(), h.power(&h.generator(2), 2));
    assert!(word_element(&h, "d").is_err());
    assert!(word_element(&h, "a^x").is_err());
}

#[test]
fn files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.pc");
    std::fs::write(&path, build("heisenberg(3)").to_dsl()).unwrap();
    let g = build(path.to_str().unwrap());
    assert_eq!(g.canonical_hash(), build("heisenberg(3)").canonical_hash());
    let quoted = format!("prod(\"{}\", cyclic(3))", path.display());
    assert_eq!(build(&quoted).order().to_string(), "81");
    assert!(matches!(parse_expr("/nonexistent/x.pc").unwrap().build(), Err(ExprError::Io { .. })));
    std::fs::write(&path, "group X { prime 3; gens a; comm [a,b] = 1; }").unwrap();
    assert!(matches!(parse_expr(path.to_str().unwrap()).unwrap().build(), Err(ExprError::Dsl { .. })));
}
