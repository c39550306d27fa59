#![allow(dead_code)]

use opch_core::di::{DiExpr, DiMonomial, Op};
use opch_core::term::{Expr, Generator, Monomial};

pub fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn fact(n: u64) -> u64 {
    (1..=n).product()
}

/// Trees with `n` leaves: the Catalan number `C(n-1)`.
pub fn catalan(n: u64) -> u64 {
    binom(2 * n, n) / (n + 1)
}

/// Independent `τ`: `≻` differentiates the left factor, `≺` the right one.
pub fn tau_oracle(t: &DiExpr) -> Expr {
    fn go(m: &DiMonomial) -> Expr {
        match m.children() {
            None => Expr::from_monomial(Monomial::var(m.vars()[0])),
            Some((op, l, r)) => {
                let (l, r) = (go(l), go(r));
                match op {
                    Op::Succ => l.derive().unwrap().product(&r),
                    Op::Prec => l.product(&r.derive().unwrap()),
                }
            }
        }
    }
    let mut out = Expr::zero();
    for (m, c) in t.iter() {
        out.add_scaled(&go(m), c);
    }
    out
}

/// `x1^(a) (x2^(b) x3^(c))`.
pub fn right_comb(ders: [u32; 3]) -> Monomial {
    let leaf = |v, d| Monomial::leaf(Generator::new(v, d));
    Monomial::mul(
        leaf(1, ders[0]),
        Monomial::mul(leaf(2, ders[1]), leaf(3, ders[2])),
    )
}

pub const BICOM_TABLE: [([u32; 3], &str); 6] = [
    ([0, 1, 1], "(x2>(x1<x3))"),
    ([1, 0, 1], "(x1>(x2<x3))"),
    ([1, 1, 0], "(x2>(x1>x3))"),
    ([2, 0, 0], "(x2<(x1>x3)) - (x1>(x2<x3))"),
    ([0, 2, 0], "(x1<(x2>x3)) - (x2>(x1<x3))"),
    ([0, 0, 2], "(x1<(x2<x3)) - (x2>(x1<x3))"),
];

pub const ALT_TABLE: [([u32; 3], &str); 6] = [
    ([0, 1, 1], "((x1<x2)<x3) + ((x2>x1)<x3) - (x2>(x1<x3))"),
    ([1, 0, 1], "(x1>(x2<x3))"),
    ([1, 1, 0], "(x2>(x1>x3))"),
    (
        [2, 0, 0],
        "((x1>x2)>x3) - (x1>(x2>x3)) + ((x1>x3)<x2) - (x1>(x3<x2)) \
         + ((x2<x1)>x3) - (x2>(x1>x3)) + ((x2>x3)<x1) - (x2>(x3<x1)) \
         - (x2<(x1>x3)) + ((x2<x1)<x3) + ((x1>x2)<x3) - (x1>(x2<x3))",
    ),
    (
        [0, 2, 0],
        "(x1<(x2>x3)) - ((x1<x2)<x3) - ((x2>x1)<x3) + (x2>(x1<x3))",
    ),
    (
        [0, 0, 2],
        "(x1<(x2<x3)) - ((x1<x2)<x3) - ((x2>x1)<x3) + (x2>(x1<x3))",
    ),
];
