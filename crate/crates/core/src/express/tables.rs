//! Hand-derived expressions for the arity-3 monomials `a(bc)` with
//! `a = x1, b = x2, c = x3`, keyed by the derivation orders of `(a, b, c)`.
//! Other shapes and labellings are reached by relabelling and mirroring.

pub(crate) type Table = [([u32; 3], &'static str); 6];

pub(crate) const BICOM: Table = [
    ([0, 1, 1], "(x2>(x1<x3))"),
    ([1, 0, 1], "(x1>(x2<x3))"),
    ([1, 1, 0], "(x2>(x1>x3))"),
    ([2, 0, 0], "(x2<(x1>x3)) - (x1>(x2<x3))"),
    ([0, 2, 0], "(x1<(x2>x3)) - (x2>(x1<x3))"),
    ([0, 0, 2], "(x1<(x2<x3)) - (x2>(x1<x3))"),
];

pub(crate) const ALT: Table = [
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
