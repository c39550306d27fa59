//! Terms of the free nonassociative algebra over a derivation-decorated
//! alphabet `x_i^{(j)}`.
//!
//! A [`Monomial`] is an ordered binary tree whose leaves are [`Generator`]s;
//! an [`Expr`] is a finite rational combination of monomials kept in
//! canonical form (no zero coefficients, iteration in the total monomial
//! order).

mod enumerate;
mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::TermError;
use crate::lincomb::LinComb;

pub use enumerate::{
    compositions, enumerate_multilinear, multilinear_count, permutations, tree_shapes,
};
pub use parse::{parse_term, Cursor};

/// Default ceiling on derivation orders. Terms whose decorations would exceed
/// it are rejected.
pub const DEFAULT_MAX_DER_ORDER: u32 = 16;

/// The symbol `x_var^{(der)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub var: u32,
    pub der: u32,
}

impl Generator {
    pub fn new(var: u32, der: u32) -> Self {
        debug_assert!(var >= 1, "variable indices start at 1");
        Generator { var, der }
    }

    /// `wt(x^{(j)}) = j - 1`.
    pub fn weight(self) -> i64 {
        self.der as i64 - 1
    }

    pub fn derived(self) -> Self {
        Generator {
            var: self.var,
            der: self.der + 1,
        }
    }

    pub fn with_der(self, der: u32) -> Self {
        Generator { var: self.var, der }
    }

    pub fn with_var(self, var: u32) -> Self {
        Generator { var, der: self.der }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.var)?;
        match self.der {
            0 => Ok(()),
            1 => f.write_str("'"),
            2 => f.write_str("''"),
            k => write!(f, "^({k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    arity: usize,
    left: Monomial,
    right: Monomial,
}

/// A product tree over generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Monomial {
    Leaf(Generator),
    Node(Box<Node>),
}

impl Monomial {
    pub fn leaf(g: Generator) -> Self {
        Monomial::Leaf(g)
    }

    /// The underivated variable `x_i`.
    pub fn var(i: u32) -> Self {
        Monomial::Leaf(Generator::new(i, 0))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(left: Monomial, right: Monomial) -> Self {
        let arity = left.arity() + right.arity();
        Monomial::Node(Box::new(Node { arity, left, right }))
    }

    pub fn arity(&self) -> usize {
        match self {
            Monomial::Leaf(_) => 1,
            Monomial::Node(n) => n.arity,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Monomial::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<Generator> {
        match self {
            Monomial::Leaf(g) => Some(*g),
            Monomial::Node(_) => None,
        }
    }

    pub fn children(&self) -> Option<(&Monomial, &Monomial)> {
        match self {
            Monomial::Leaf(_) => None,
            Monomial::Node(n) => Some((&n.left, &n.right)),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.arity());
        self.push_leaves(&mut out);
        out
    }

    fn push_leaves(&self, out: &mut Vec<Generator>) {
        match self {
            Monomial::Leaf(g) => out.push(*g),
            Monomial::Node(n) => {
                n.left.push_leaves(out);
                n.right.push_leaves(out);
            }
        }
    }

    pub fn weight(&self) -> i64 {
        match self {
            Monomial::Leaf(g) => g.weight(),
            Monomial::Node(n) => n.left.weight() + n.right.weight(),
        }
    }

    /// Total number of derivations carried by the leaves.
    pub fn der_total(&self) -> u32 {
        self.leaves().iter().map(|g| g.der).sum()
    }

    pub fn max_der(&self) -> u32 {
        self.leaves().iter().map(|g| g.der).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: u32) -> bool {
        match self {
            Monomial::Leaf(g) => g.var == var,
            Monomial::Node(n) => n.left.contains_var(var) || n.right.contains_var(var),
        }
    }

    /// True when every variable occurs at most once.
    pub fn is_multilinear(&self) -> bool {
        let mut vars: Vec<u32> = self.leaves().iter().map(|g| g.var).collect();
        vars.sort_unstable();
        vars.windows(2).all(|w| w[0] != w[1])
    }

    /// Apply `f` to every leaf, keeping the tree shape.
    pub fn relabel(&self, f: &impl Fn(Generator) -> Generator) -> Monomial {
        match self {
            Monomial::Leaf(g) => Monomial::Leaf(f(*g)),
            Monomial::Node(n) => Monomial::mul(n.left.relabel(f), n.right.relabel(f)),
        }
    }

    /// Replace leaves by arbitrary monomials.
    pub fn substitute(&self, f: &impl Fn(Generator) -> Monomial) -> Monomial {
        match self {
            Monomial::Leaf(g) => f(*g),
            Monomial::Node(n) => Monomial::mul(n.left.substitute(f), n.right.substitute(f)),
        }
    }

    /// Leibniz expansion: one monomial per leaf, that leaf derived once.
    pub fn derive_terms(&self) -> Vec<Monomial> {
        match self {
            Monomial::Leaf(g) => vec![Monomial::Leaf(g.derived())],
            Monomial::Node(n) => {
                let mut out = Vec::with_capacity(n.arity);
                for l in n.left.derive_terms() {
                    out.push(Monomial::mul(l, n.right.clone()));
                }
                for r in n.right.derive_terms() {
                    out.push(Monomial::mul(n.left.clone(), r));
                }
                out
            }
        }
    }

    /// Mirror image: every product reversed.
    pub fn mirror(&self) -> Monomial {
        match self {
            Monomial::Leaf(_) => self.clone(),
            Monomial::Node(n) => Monomial::mul(n.right.mirror(), n.left.mirror()),
        }
    }
}

fn shape_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match (a, b) {
        (Monomial::Leaf(_), Monomial::Leaf(_)) => Ordering::Equal,
        (Monomial::Leaf(_), Monomial::Node(_)) => Ordering::Less,
        (Monomial::Node(_), Monomial::Leaf(_)) => Ordering::Greater,
        (Monomial::Node(x), Monomial::Node(y)) => x
            .left
            .arity()
            .cmp(&y.left.arity())
            .then_with(|| shape_cmp(&x.left, &y.left))
            .then_with(|| shape_cmp(&x.right, &y.right)),
    }
}

// Arity, then shape (left-subtree size first, recursively), then the variable
// sequence, then the decoration sequence with higher orders first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity()
            .cmp(&other.arity())
            .then_with(|| shape_cmp(self, other))
            .then_with(|| {
                let (a, b) = (self.leaves(), other.leaves());
                a.iter()
                    .map(|g| g.var)
                    .cmp(b.iter().map(|g| g.var))
                    .then_with(|| b.iter().map(|g| g.der).cmp(a.iter().map(|g| g.der)))
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Leaf(g) => write!(f, "{g}"),
            Monomial::Node(n) => write!(f, "({} {})", n.left, n.right),
        }
    }
}

/// A rational combination of [`Monomial`]s.
pub type Expr = LinComb<Monomial>;

impl Expr {
    /// Common weight of all monomials.
    pub fn weight(&self) -> Result<i64, TermError> {
        let mut it = self.monomials();
        let first = it.next().ok_or(TermError::ZeroExpr)?.weight();
        for m in it {
            let w = m.weight();
            if w != first {
                return Err(TermError::MixedWeight { first, other: w });
            }
        }
        Ok(first)
    }

    /// Common arity of all monomials, `None` for the zero element or mixed arities.
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.monomials();
        let first = it.next()?.arity();
        it.all(|m| m.arity() == first).then_some(first)
    }

    pub fn derive(&self) -> Result<Expr, TermError> {
        self.derive_capped(DEFAULT_MAX_DER_ORDER)
    }

    /// Linear extension of the Leibniz rule; fails when a decoration would
    /// exceed `cap`.
    pub fn derive_capped(&self, cap: u32) -> Result<Expr, TermError> {
        let mut out = Expr::zero();
        for (m, c) in self.iter() {
            for t in m.derive_terms() {
                if t.max_der() > cap {
                    return Err(TermError::DerivationCap { cap });
                }
                out.add_term(t, c.clone());
            }
        }
        Ok(out)
    }

    /// Bilinear extension of the tree product.
    pub fn product(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(Monomial::mul(a.clone(), b.clone()), ca * cb);
            }
        }
        out
    }

    pub fn relabel(&self, f: &impl Fn(Generator) -> Generator) -> Expr {
        self.map_monomials(|m| m.relabel(f))
    }

    pub fn mirror(&self) -> Expr {
        self.map_monomials(Monomial::mirror)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        self.product(rhs)
    }
}

/// Canonical text form of an expression.
pub fn format_term(e: &Expr) -> String {
    e.to_string()
}
