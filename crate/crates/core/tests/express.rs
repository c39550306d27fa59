mod common;

use common::tau_oracle;
use opch_core::di::{parse_di, DiExpr};
use opch_core::express::words::{
    distribute, distribute_derivations_alt, operator_form, operator_form_alt, refocus, refocus_alt,
    words_to_expr, Associator, OperatorWord, Side, WordSum,
};
use opch_core::express::{
    base_table, express, express_alt, express_assos, express_bicom, express_solver, Expresser,
    Method,
};
use opch_core::term::{enumerate_multilinear, parse_term, tree_shapes, Expr, Generator, Monomial};
use opch_core::variety::VarietyName::{self, *};
use opch_core::{Engine, Error, TermError};

fn t(s: &str) -> Expr {
    parse_term(s).unwrap()
}

fn m(s: &str) -> Monomial {
    t(s).monomials().next().unwrap().clone()
}

fn g(v: u32) -> Generator {
    Generator::new(v, 0)
}

fn equal_in(e: &Engine, v: VarietyName, a: &Expr, b: &Expr) -> bool {
    let diff = a - b;
    diff.is_zero()
        || e.component(v, diff.arity().unwrap(), diff.weight().unwrap())
            .unwrap()
            .contains(&diff)
            .unwrap()
}

fn roundtrips(e: &Engine, v: VarietyName, f: &Expr, d: &DiExpr) -> bool {
    equal_in(e, v, &tau_oracle(d), f)
}

#[test]
fn solver_examples() {
    let e = Engine::default();
    for (f, want) in [
        ("(x1'' (x2 x3))", "(x2<(x1>x3)) - (x1>(x2<x3))"),
        ("(x1 (x2 x3''))", "(x1<(x2<x3)) - (x2>(x1<x3))"),
    ] {
        let f = t(f);
        let got = express_solver(&e, BiCom, &f).unwrap();
        assert!(roundtrips(&e, BiCom, &f, &got));
        assert!(equal_in(
            &e,
            BiCom,
            &tau_oracle(&got),
            &tau_oracle(&parse_di(want).unwrap())
        ));
    }
}

#[test]
fn solver_rejects_bad_input() {
    let e = Engine::default();
    assert!(matches!(
        express_solver(&e, Alt, &t("(x1 x2)")),
        Err(Error::WeightNotMinusOne { .. })
    ));
    assert!(matches!(
        express_solver(&e, Alt, &t("(x1 x2) + x1'")),
        Err(Error::Term(TermError::MixedWeight { .. }))
    ));
    assert!(matches!(
        express_solver(&e, Alt, &t("(x1 (x2 (x3 (x4 x5''''))))")),
        Err(Error::ArityTooLarge { .. })
    ));
    assert!(express_solver(&e, Alt, &Expr::zero()).unwrap().is_zero());
}

#[test]
fn zinbiel_has_targets_outside_the_image() {
    let e = Engine::default();
    let mut missed = 0;
    for mono in enumerate_multilinear(3, -1).unwrap() {
        if let Err(err) = express_solver(&e, Zinb, &Expr::from_monomial(mono)) {
            assert!(matches!(err, Error::Linalg(_)), "{err}");
            missed += 1;
        }
    }
    assert!(missed > 0);
}

#[test]
fn bicom_examples() {
    let e = Engine::default();
    for (f, want) in [
        ("(x1' (x2' x3))", "(x2>(x1>x3))"),
        ("(x1 (x2'' x3))", "(x1<(x2>x3)) - (x2>(x1<x3))"),
    ] {
        let f = t(f);
        let got = express_bicom(&e, &f).unwrap();
        assert!(roundtrips(&e, BiCom, &f, &got));
        assert!(equal_in(
            &e,
            BiCom,
            &tau_oracle(&got),
            &tau_oracle(&parse_di(want).unwrap())
        ));
    }
}

#[test]
fn alt_examples() {
    let e = Engine::default();
    for f in ["(x1'(x2 x3'))", "(x1 (x2 x3''))", "(x1' (x2' x3))"] {
        let f = t(f);
        assert!(roundtrips(&e, Alt, &f, &express_alt(&e, &f).unwrap()));
    }
    let f = t("(x1'(x2 x3'))");
    assert_eq!(
        express_alt(&e, &f).unwrap(),
        parse_di("(x1>(x2<x3))").unwrap()
    );
    let f = t("(x1 (x2 x3''))");
    let printed = parse_di("(x1<(x2<x3)) - ((x1<x2)<x3) - ((x2>x1)<x3) + (x2>(x1<x3))").unwrap();
    assert!(roundtrips(&e, Alt, &f, &printed));
}

#[test]
fn constructive_roundtrips() {
    let e = Engine::default();
    for (v, top) in [(BiCom, 4), (Alt, 3), (Assos, 3)] {
        let mut ex = Expresser::new(&e, v).unwrap();
        for n in 1..=top {
            for mono in enumerate_multilinear(n, -1).unwrap() {
                let f = Expr::from_monomial(mono);
                let d = ex.express(&f).unwrap();
                assert!(roundtrips(&e, v, &f, &d), "{v} {f} -> {d}");
            }
        }
    }
}

#[test]
fn bicom_recursion_needs_no_solver() {
    let e = Engine::default();
    let mut ex = Expresser::new(&e, BiCom).unwrap();
    for n in 1..=4 {
        for mono in enumerate_multilinear(n, -1).unwrap() {
            ex.express(&Expr::from_monomial(mono)).unwrap();
        }
    }
    let s = ex.stats();
    assert_eq!(s.solver_fallbacks, 0);
    assert_eq!(s.table_rejects, 0);
}

#[test]
fn linear_inputs_and_determinism() {
    let e = Engine::default();
    let f = t("2*(x1' (x2 x3')) - 1/3*((x2'' x1) x3)");
    for v in [BiCom, Alt, Assos] {
        let a = express(&e, v, Method::Recursive, &f).unwrap();
        assert!(roundtrips(&e, v, &f, &a));
        assert_eq!(a, express(&e, v, Method::Recursive, &f).unwrap());
        let s = express(&e, v, Method::Solver, &f).unwrap();
        assert!(roundtrips(&e, v, &f, &s));
    }
    assert!(express_assos(&e, &t("((x1 x2) x3'')")).is_ok());
    assert!(matches!(
        Expresser::new(&e, Zinb),
        Err(Error::NoConstructiveMethod { .. })
    ));
    assert_eq!("recursive".parse::<Method>().unwrap(), Method::Recursive);
    assert!("magic".parse::<Method>().is_err());
}

#[test]
fn tables_cover_six_derivation_patterns() {
    for v in [BiCom, Alt] {
        let table = base_table(v).unwrap();
        assert_eq!(table.len(), 6);
        for (mono, _) in &table {
            assert_eq!(mono.weight(), -1);
            assert_eq!(mono.der_total(), 2);
        }
    }
    assert!(base_table(Assos).is_none());
}

#[test]
fn distribute_examples() {
    let e = Engine::default();
    let both = m("((x1' x2) (x3' x4))");
    assert_eq!(
        distribute_derivations_alt(&both).unwrap(),
        Expr::from_monomial(both)
    );
    let got = distribute_derivations_alt(&m("(x1 (x2' x3'))")).unwrap();
    assert_eq!(got, t("((x1 x2') x3') + ((x2' x1) x3') - (x2' (x1 x3'))"));
    for kind_v in [
        (Associator::Alternating, Alt),
        (Associator::Symmetric, Assos),
    ] {
        for src in [
            "((x1' x2') x3)",
            "(x1 (x2' x3'))",
            "(x1 ((x2' x3) x4'))",
            "(((x1 x2') x3) x4')",
        ] {
            let f = m(src);
            let got = distribute(kind_v.0, &f).unwrap();
            assert!(
                equal_in(&e, kind_v.1, &got, &Expr::from_monomial(f.clone())),
                "{src}"
            );
            for mono in got.monomials() {
                let (a, b) = mono.children().unwrap();
                assert!(a.der_total() > 0 && b.der_total() > 0, "{mono}");
            }
        }
    }
    assert!(matches!(
        distribute_derivations_alt(&m("(x1 (x2 x3))")),
        Err(Error::NoDerivation)
    ));
    assert!(matches!(
        distribute_derivations_alt(&m("(x1 (x2 x3'))")),
        Err(Error::SingleDerivation)
    ));
}

#[test]
fn operator_form_examples() {
    let w = operator_form_alt(&m("(x1 (x2 x3))"));
    let want = OperatorWord {
        core: g(3),
        ops: vec![(Side::L, g(1)), (Side::L, g(2))],
    };
    assert_eq!(w, WordSum::from_monomial(want));
    let w = operator_form_alt(&m("((x1 x2) x3)"));
    let want = OperatorWord {
        core: g(1),
        ops: vec![(Side::R, g(3)), (Side::R, g(2))],
    };
    assert_eq!(w, WordSum::from_monomial(want));
}

#[test]
fn operator_form_preserves_the_class() {
    let e = Engine::default();
    for (kind, v) in [
        (Associator::Alternating, Alt),
        (Associator::Symmetric, Assos),
    ] {
        for n in 3..=4 {
            for shape in tree_shapes(n) {
                let words = operator_form(kind, &shape);
                for w in words.monomials() {
                    let back = OperatorWord::from_monomial(&w.to_monomial()).unwrap();
                    assert_eq!(back.to_monomial(), w.to_monomial());
                    assert_eq!(w.arity(), n);
                }
                assert!(equal_in(
                    &e,
                    v,
                    &words_to_expr(&words),
                    &Expr::from_monomial(shape)
                ));
            }
        }
    }
    let e4 = m("(x1 ((x2 x3) x4))");
    let e = Engine::default();
    assert!(equal_in(
        &e,
        Alt,
        &words_to_expr(&operator_form_alt(&e4)),
        &Expr::from_monomial(e4)
    ));
}

#[test]
fn refocus_examples() {
    let r2x1 = OperatorWord {
        core: g(1),
        ops: vec![(Side::R, g(2))],
    };
    let want = OperatorWord {
        core: g(2),
        ops: vec![(Side::L, g(1))],
    };
    assert_eq!(refocus_alt(&r2x1, 2).unwrap(), WordSum::from_monomial(want));
    assert_eq!(
        refocus_alt(&r2x1, 1).unwrap(),
        WordSum::from_monomial(r2x1.clone())
    );
    assert!(matches!(
        refocus_alt(&r2x1, 5),
        Err(Error::MissingLeaf { var: 5 })
    ));

    let e = Engine::default();
    let w = OperatorWord {
        core: g(2),
        ops: vec![(Side::L, g(1)), (Side::R, g(3))],
    };
    let got = refocus_alt(&w, 1).unwrap();
    let want = t("((x1 x2) x3) + ((x2 x1) x3) - (x2 (x1 x3))");
    assert_eq!(words_to_expr(&got), want);
    assert!(equal_in(
        &e,
        Alt,
        &want,
        &Expr::from_monomial(w.to_monomial())
    ));
}

#[test]
fn refocus_lands_on_every_target() {
    let e = Engine::default();
    for (kind, v) in [
        (Associator::Alternating, Alt),
        (Associator::Symmetric, Assos),
    ] {
        for shape in tree_shapes(4) {
            for w in operator_form(kind, &shape).monomials() {
                for target in 1..=4 {
                    let got = refocus(kind, w, target).unwrap();
                    assert!(got.monomials().all(|x| x.core.var == target));
                    assert!(equal_in(
                        &e,
                        v,
                        &words_to_expr(&got),
                        &Expr::from_monomial(w.to_monomial())
                    ));
                }
            }
        }
    }
}

#[test]
fn mirror_is_an_involution() {
    let w = OperatorWord {
        core: g(2),
        ops: vec![(Side::L, g(1)), (Side::R, g(3))],
    };
    assert_eq!(w.mirror().mirror(), w);
    assert_eq!(w.mirror().to_monomial(), w.to_monomial().mirror());
    assert_eq!(w.to_string(), "L_x1 R_x3 x2");
}
