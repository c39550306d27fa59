//! Randomized algebraic properties. Everything checked against a value
//! computed here by other means.

mod common;

use std::collections::HashMap;

use common::tau_oracle;
use opch_core::di::{tau, DiExpr, DiMonomial, Op};
use opch_core::linalg::{normalize_sparse, rank, SparseVec};
use opch_core::properties::{run_all, DEFAULT_SEED};
use opch_core::term::{enumerate_multilinear, Expr, Generator, Monomial};
use opch_core::variety::{bicom_normal_form, catalog, consequences, VarietyName};
use opch_core::{Engine, Rational};
use proptest::prelude::*;

/// Split points consumed left to right; each picks where a node divides its leaves.
fn build<T>(
    leaves: &[T],
    splits: &mut impl Iterator<Item = usize>,
    leaf: &impl Fn(&T) -> Monomial,
) -> Monomial {
    if leaves.len() == 1 {
        return leaf(&leaves[0]);
    }
    let k = 1 + splits.next().unwrap_or(0) % (leaves.len() - 1);
    Monomial::mul(
        build(&leaves[..k], splits, leaf),
        build(&leaves[k..], splits, leaf),
    )
}

fn build_di(
    vars: &[u32],
    splits: &mut impl Iterator<Item = usize>,
    ops: &mut impl Iterator<Item = bool>,
) -> DiMonomial {
    if vars.len() == 1 {
        return DiMonomial::var(vars[0]);
    }
    let k = 1 + splits.next().unwrap_or(0) % (vars.len() - 1);
    let l = build_di(&vars[..k], splits, ops);
    let r = build_di(&vars[k..], splits, ops);
    if ops.next().unwrap_or(true) {
        DiMonomial::succ(l, r)
    } else {
        DiMonomial::prec(l, r)
    }
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (1..=4usize).prop_flat_map(|n| {
        (
            Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(0..=3u32, n),
            prop::collection::vec(any::<usize>(), n),
        )
            .prop_map(|(vars, ders, splits)| {
                let leaves: Vec<Generator> = vars
                    .iter()
                    .map(|&v| Generator::new(v, ders[v as usize - 1]))
                    .collect();
                build(&leaves, &mut splits.into_iter(), &|g| Monomial::leaf(*g))
            })
    })
}

fn di_monomial() -> impl Strategy<Value = DiMonomial> {
    (1..=4usize).prop_flat_map(|n| {
        (
            Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<usize>(), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(vars, splits, ops)| {
                build_di(&vars, &mut splits.into_iter(), &mut ops.into_iter())
            })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// The weight of every generator is its order minus one; products add.
fn weight_by_hand(m: &Monomial) -> i64 {
    m.leaves().iter().map(|g| g.der as i64).sum::<i64>() - m.arity() as i64
}

/// `d(m)` as the sum over leaves of `m` with that leaf's order raised.
fn derive_by_hand(m: &Monomial) -> Expr {
    let leaves = m.leaves();
    let mut out = Expr::zero();
    for target in &leaves {
        out.add_term(
            m.relabel(&|g: Generator| {
                if g.var == target.var {
                    Generator::new(g.var, g.der + 1)
                } else {
                    g
                }
            }),
            q(1),
        );
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weight_is_additive(a in monomial(), b in monomial()) {
        let shift = a.arity() as u32;
        let b = b.relabel(&|g: Generator| Generator::new(g.var + shift, g.der));
        let (ea, eb) = (Expr::from_monomial(a.clone()), Expr::from_monomial(b.clone()));
        prop_assert_eq!(ea.weight().unwrap(), weight_by_hand(&a));
        prop_assert_eq!(ea.product(&eb).weight().unwrap(), weight_by_hand(&a) + weight_by_hand(&b));
    }

    #[test]
    fn derivative_obeys_leibniz(m in monomial()) {
        let e = Expr::from_monomial(m.clone());
        prop_assert_eq!(e.derive().unwrap(), derive_by_hand(&m));
        if let Some((l, r)) = m.children() {
            let (u, v) = (Expr::from_monomial(l.clone()), Expr::from_monomial(r.clone()));
            let rhs = &u.derive().unwrap().product(&v) + &u.product(&v.derive().unwrap());
            prop_assert_eq!(e.derive().unwrap(), rhs);
        }
    }

    #[test]
    fn tau_has_weight_minus_one(t in di_monomial()) {
        let d = DiExpr::from_monomial(t.clone());
        let image = tau(&d);
        prop_assert_eq!(&image, &tau_oracle(&d));
        prop_assert_eq!(image.weight().unwrap(), -1);
        let n = t.arity() as u32;
        prop_assert!(image.monomials().all(|m| m.der_total() == n - 1 && m.is_multilinear()));
    }

    #[test]
    fn tau_commutes_with_relabelling(t in di_monomial(), seed in any::<u64>()) {
        let n = t.arity();
        let mut p: Vec<u32> = (1..=n as u32).collect();
        p.rotate_left(seed as usize % n);
        if seed & 1 == 1 { p.reverse(); }
        let moved = DiExpr::from_monomial(t.relabel(&|v| p[v as usize - 1]));
        let expected = tau_oracle(&DiExpr::from_monomial(t))
            .relabel(&|g: Generator| Generator::new(p[g.var as usize - 1], g.der));
        prop_assert_eq!(tau(&moved), expected);
    }

    #[test]
    fn bicom_normal_form_is_a_projection(
        picks in prop::collection::vec((0usize..2400, -4i64..=4), 1..6),
        more in prop::collection::vec((0usize..2400, -4i64..=4), 1..6),
    ) {
        let ambient = enumerate_multilinear(4, -1).unwrap();
        let mk = |v: &[(usize, i64)]| Expr::from_terms(v.iter().map(|(i, c)| (q(*c), ambient[*i].clone())));
        let (a, b) = (mk(&picks), mk(&more));
        let nf = bicom_normal_form(&a);
        prop_assert_eq!(bicom_normal_form(&nf), nf.clone());
        prop_assert_eq!(
            bicom_normal_form(&(&a + &b)),
            bicom_normal_form(&(&nf + &bicom_normal_form(&b)))
        );
    }

    #[test]
    fn rank_ignores_generator_order(order in permutation(12), name in prop::sample::select(vec!["alt", "assos", "bicom", "zinb", "as"])) {
        let ambient = enumerate_multilinear(3, -3).unwrap();
        let index: HashMap<&Monomial, usize> = ambient.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let gens = consequences(&catalog(name).unwrap(), 3, None).unwrap();
        let vecs: Vec<SparseVec> = gens
            .iter()
            .map(|g| normalize_sparse(g.iter().map(|(m, c)| (index[m], c.clone()))))
            .collect();
        let base = rank(&vecs, ambient.len()).unwrap();
        let mut shuffled: Vec<SparseVec> = order
            .iter()
            .filter_map(|&i| vecs.get(i as usize - 1).cloned())
            .collect();
        shuffled.extend(vecs.iter().skip(12).cloned());
        prop_assert_eq!(rank(&shuffled, ambient.len()).unwrap(), base);
    }
}

#[test]
fn bicom_normal_form_agrees_with_quotient_coordinates() {
    let e = Engine::default();
    for n in 1..=4 {
        let c = e.component(VarietyName::BiCom, n, -1).unwrap();
        for m in enumerate_multilinear(n, -1).unwrap() {
            let f = Expr::from_monomial(m);
            assert_eq!(
                c.coords(&bicom_normal_form(&f)).unwrap(),
                c.coords(&f).unwrap()
            );
        }
    }
}

#[test]
fn tau_on_a_hand_expansion() {
    // (x1 ≻ x2) ≺ x3 = d(x1) x2 · d(x3).
    let t = DiMonomial::prec(
        DiMonomial::succ(DiMonomial::var(1), DiMonomial::var(2)),
        DiMonomial::var(3),
    );
    let want = Monomial::mul(
        Monomial::mul(Monomial::leaf(Generator::new(1, 1)), Monomial::var(2)),
        Monomial::leaf(Generator::new(3, 1)),
    );
    assert_eq!(tau(&DiExpr::from_monomial(t)), Expr::from_monomial(want));
    assert_eq!(Op::Succ.flip(), Op::Prec);
}

#[test]
fn library_suites_pass_and_are_seeded() {
    let a = run_all(DEFAULT_SEED);
    assert_eq!(a.len(), 6);
    for o in &a {
        assert!(o.pass(), "{o:?}");
    }
    assert_eq!(a, run_all(DEFAULT_SEED));
}
