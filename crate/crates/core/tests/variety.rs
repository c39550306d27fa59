use std::collections::HashMap;
use std::sync::Arc;

use opch_core::linalg::{echelonize, normalize_sparse, SparseVec};
use opch_core::term::{enumerate_multilinear, parse_term, permutations, Expr, Generator, Monomial};
use opch_core::variety::*;
use opch_core::{Error, LinComb};

fn t(s: &str) -> Expr {
    parse_term(s).unwrap()
}

fn span_rank<T: Ord + Clone + std::hash::Hash>(gens: &[LinComb<T>], ambient: &[T]) -> usize {
    let index: HashMap<&T, usize> = ambient.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let vecs: Vec<SparseVec> = gens
        .iter()
        .map(|g| normalize_sparse(g.iter().map(|(m, c)| (index[m], c.clone()))))
        .collect();
    echelonize(&vecs, Arc::new(ambient.to_vec()))
        .unwrap()
        .rank()
}

#[test]
fn catalog_examples() {
    let b = catalog("BiCom").unwrap();
    assert_eq!(b.identities.len(), 2);
    assert_eq!(b.num_ops(), 1);
    let d = catalog("derbicom").unwrap();
    assert_eq!(d.identities.len(), 4);
    assert_eq!(d.num_ops(), 2);
    assert!(matches!(catalog("Foo"), Err(Error::UnknownVariety(_))));
    for v in VarietyName::ALL {
        let spec = v.spec();
        assert!(spec.identities.iter().all(|i| i.num_ops() == v.num_ops()));
        assert_eq!(v.key().parse::<VarietyName>().unwrap(), v);
    }
}

#[test]
fn instantiate_examples() {
    let lcom = &catalog("bicom").unwrap().identities[0];
    let args: Vec<Monomial> = (1..=3).map(Monomial::var).collect();
    assert_eq!(
        instantiate(lcom, &args).unwrap(),
        t("(x1 (x2 x3)) - (x2 (x1 x3))")
    );
    let rcom = &catalog("bicom").unwrap().identities[1];
    let nested = vec![
        Monomial::var(1),
        t("(x2 x3)").monomials().next().unwrap().clone(),
        Monomial::var(4),
    ];
    assert_eq!(
        instantiate(rcom, &nested).unwrap(),
        t("((x1 (x2 x3)) x4) - ((x1 x4) (x2 x3))")
    );
    let clash = vec![Monomial::var(1), Monomial::var(1), Monomial::var(2)];
    assert!(matches!(
        instantiate(lcom, &clash),
        Err(Error::VariableClash { var: 1 })
    ));
    assert!(matches!(
        instantiate(lcom, &args[..2]),
        Err(Error::ArityMismatch {
            expected: 3,
            found: 2
        })
    ));
}

#[test]
fn consequence_span_dimensions_at_arity_three() {
    let ambient = enumerate_multilinear(3, -3).unwrap();
    assert_eq!(ambient.len(), 12);
    for (name, span) in [
        ("bicom", 6),
        ("alt", 5),
        ("as", 6),
        ("assos", 5),
        ("com", 11),
    ] {
        let spec = catalog(name).unwrap();
        let gens = consequences(&spec, 3, None).unwrap();
        assert_eq!(span_rank(&gens, &ambient), span, "{name}");
    }
}

#[test]
fn below_identity_arity_is_empty() {
    let spec = catalog("alt").unwrap();
    assert!(consequences(&spec, 2, None).unwrap().is_empty());
    assert!(consequences(&spec, 2, Some(-1)).unwrap().is_empty());
}

#[test]
fn consequence_span_is_permutation_stable() {
    for name in ["alt", "bicom", "zinb"] {
        let spec = catalog(name).unwrap();
        let ambient = enumerate_multilinear(4, -4).unwrap();
        let gens = consequences(&spec, 4, None).unwrap();
        let r = span_rank(&gens, &ambient);
        let mut more = gens.clone();
        for p in permutations(4) {
            for g in gens.iter().take(40) {
                more.push(g.relabel(&|x: Generator| x.with_var(p[x.var as usize - 1])));
            }
        }
        assert_eq!(span_rank(&more, &ambient), r, "{name}");
    }
}

#[test]
fn bicom_nf_examples() {
    assert_eq!(bicom_normal_form(&t("(x2 (x1 x3))")), t("(x1 (x2 x3))"));
    assert_eq!(bicom_normal_form(&t("((x1 x3) x2)")), t("((x1 x2) x3)"));
    assert!(bicom_normal_form(&t("(x1 (x2 x3)) - (x2 (x1 x3))")).is_zero());
}

#[test]
fn bicom_nf_kills_every_consequence() {
    let spec = catalog("bicom").unwrap();
    for n in 3..=4 {
        for r in consequences(&spec, n, None).unwrap() {
            assert!(bicom_normal_form(&r).is_zero(), "{r}");
        }
    }
}

#[test]
fn bicom_nf_is_idempotent_on_the_ambient() {
    for m in enumerate_multilinear(3, -1).unwrap() {
        let once = bicom_monomial_nf(&m);
        assert_eq!(bicom_monomial_nf(&once), once);
    }
}

#[test]
fn di_consequences_at_arity_three() {
    let ambient = opch_core::di::enumerate_di_monomials(3);
    let spec = catalog("derbicom").unwrap();
    let gens = di_consequences(&spec, 3).unwrap();
    assert_eq!(gens.len(), 4 * 6);
    assert!(span_rank(&gens, &ambient) > 0);
    assert!(matches!(
        di_consequences(&catalog("alt").unwrap(), 3),
        Err(Error::OpCount { .. })
    ));
}
