//! Terms in the two derived operations `a ≻ b = d(a)b` and `a ≺ b = a d(b)`,
//! and the expansion `τ` into the decorated free algebra.

use std::cmp::Ordering;
use std::fmt;

use crate::error::TermError;
use crate::lincomb::LinComb;
use crate::term::{permutations, tree_shapes, Cursor, Expr, Monomial};

/// `≻` derives its left argument, `≺` its right one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Succ,
    Prec,
}

impl Op {
    pub fn symbol(self) -> char {
        match self {
            Op::Succ => '>',
            Op::Prec => '<',
        }
    }

    pub fn flip(self) -> Op {
        match self {
            Op::Succ => Op::Prec,
            Op::Prec => Op::Succ,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiNode {
    arity: usize,
    op: Op,
    left: DiMonomial,
    right: DiMonomial,
}

/// A binary tree with `≻`/`≺` tags over undecorated variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DiMonomial {
    Leaf(u32),
    Node(Box<DiNode>),
}

impl DiMonomial {
    pub fn var(i: u32) -> Self {
        debug_assert!(i >= 1);
        DiMonomial::Leaf(i)
    }

    pub fn node(op: Op, left: DiMonomial, right: DiMonomial) -> Self {
        let arity = left.arity() + right.arity();
        DiMonomial::Node(Box::new(DiNode {
            arity,
            op,
            left,
            right,
        }))
    }

    pub fn succ(left: DiMonomial, right: DiMonomial) -> Self {
        Self::node(Op::Succ, left, right)
    }

    pub fn prec(left: DiMonomial, right: DiMonomial) -> Self {
        Self::node(Op::Prec, left, right)
    }

    pub fn arity(&self) -> usize {
        match self {
            DiMonomial::Leaf(_) => 1,
            DiMonomial::Node(n) => n.arity,
        }
    }

    pub fn children(&self) -> Option<(Op, &DiMonomial, &DiMonomial)> {
        match self {
            DiMonomial::Leaf(_) => None,
            DiMonomial::Node(n) => Some((n.op, &n.left, &n.right)),
        }
    }

    /// Leaf variables left to right.
    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.arity());
        self.walk(&mut |m| {
            if let DiMonomial::Leaf(v) = m {
                out.push(*v)
            }
        });
        out
    }

    /// Node tags in pre-order.
    pub fn ops(&self) -> Vec<Op> {
        let mut out = Vec::with_capacity(self.arity().saturating_sub(1));
        self.walk(&mut |m| {
            if let DiMonomial::Node(n) = m {
                out.push(n.op)
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&DiMonomial)) {
        f(self);
        if let DiMonomial::Node(n) = self {
            n.left.walk(f);
            n.right.walk(f);
        }
    }

    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> DiMonomial {
        match self {
            DiMonomial::Leaf(v) => DiMonomial::Leaf(f(*v)),
            DiMonomial::Node(n) => DiMonomial::node(n.op, n.left.relabel(f), n.right.relabel(f)),
        }
    }

    pub fn substitute(&self, f: &impl Fn(u32) -> DiMonomial) -> DiMonomial {
        match self {
            DiMonomial::Leaf(v) => f(*v),
            DiMonomial::Node(n) => {
                DiMonomial::node(n.op, n.left.substitute(f), n.right.substitute(f))
            }
        }
    }

    /// Reverse every product and swap `≻` with `≺`; commutes with `τ` up to
    /// mirroring the expansion.
    pub fn mirror(&self) -> DiMonomial {
        match self {
            DiMonomial::Leaf(_) => self.clone(),
            DiMonomial::Node(n) => DiMonomial::node(n.op.flip(), n.right.mirror(), n.left.mirror()),
        }
    }

    /// Read a plain undecorated monomial with every product set to `op`.
    pub fn from_plain(m: &Monomial, op: Op) -> Option<DiMonomial> {
        match m.children() {
            None => {
                let g = m.as_leaf()?;
                (g.der == 0).then_some(DiMonomial::Leaf(g.var))
            }
            Some((l, r)) => Some(DiMonomial::node(
                op,
                Self::from_plain(l, op)?,
                Self::from_plain(r, op)?,
            )),
        }
    }
}

fn shape_cmp(a: &DiMonomial, b: &DiMonomial) -> Ordering {
    match (a, b) {
        (DiMonomial::Leaf(_), DiMonomial::Leaf(_)) => Ordering::Equal,
        (DiMonomial::Leaf(_), DiMonomial::Node(_)) => Ordering::Less,
        (DiMonomial::Node(_), DiMonomial::Leaf(_)) => Ordering::Greater,
        (DiMonomial::Node(x), DiMonomial::Node(y)) => x
            .left
            .arity()
            .cmp(&y.left.arity())
            .then_with(|| shape_cmp(&x.left, &y.left))
            .then_with(|| shape_cmp(&x.right, &y.right)),
    }
}

// Arity, shape, tags in pre-order, then leaf variables.
impl Ord for DiMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity()
            .cmp(&other.arity())
            .then_with(|| shape_cmp(self, other))
            .then_with(|| self.ops().cmp(&other.ops()))
            .then_with(|| self.vars().cmp(&other.vars()))
    }
}

impl PartialOrd for DiMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiMonomial::Leaf(v) => write!(f, "x{v}"),
            DiMonomial::Node(n) => write!(f, "({}{}{})", n.left, n.op.symbol(), n.right),
        }
    }
}

/// A rational combination of [`DiMonomial`]s.
pub type DiExpr = LinComb<DiMonomial>;

impl DiExpr {
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.monomials();
        let first = it.next()?.arity();
        it.all(|m| m.arity() == first).then_some(first)
    }

    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> DiExpr {
        self.map_monomials(|m| m.relabel(f))
    }

    pub fn mirror(&self) -> DiExpr {
        self.map_monomials(DiMonomial::mirror)
    }

    /// Bilinear extension of a tagged product.
    pub fn apply(op: Op, a: &DiExpr, b: &DiExpr) -> DiExpr {
        let mut out = DiExpr::zero();
        for (x, cx) in a.iter() {
            for (y, cy) in b.iter() {
                out.add_term(DiMonomial::node(op, x.clone(), y.clone()), cx * cy);
            }
        }
        out
    }
}

fn derive_uncapped(e: &Expr) -> Expr {
    e.derive_capped(u32::MAX).expect("uncapped derivation")
}

/// `τ` on a single tree.
pub fn tau_monomial(m: &DiMonomial) -> Expr {
    match m {
        DiMonomial::Leaf(v) => Expr::from_monomial(Monomial::var(*v)),
        DiMonomial::Node(n) => {
            let l = tau_monomial(&n.left);
            let r = tau_monomial(&n.right);
            match n.op {
                Op::Succ => derive_uncapped(&l).product(&r),
                Op::Prec => l.product(&derive_uncapped(&r)),
            }
        }
    }
}

/// `τ(leaf) = leaf`, `τ(s ≻ t) = d(τs)·τt`, `τ(s ≺ t) = τs·d(τt)`, extended
/// linearly.
pub fn tau(e: &DiExpr) -> Expr {
    e.flat_map(tau_monomial)
}

/// All multilinear trees on `x1..xn`: every shape, tag pattern and leaf
/// order, sorted.
pub fn enumerate_di_monomials(n: usize) -> Vec<DiMonomial> {
    fn tag(m: &Monomial, ops: &mut impl Iterator<Item = Op>) -> DiMonomial {
        match m.children() {
            None => DiMonomial::Leaf(m.as_leaf().expect("leaf").var),
            Some((l, r)) => {
                let op = ops.next().expect("enough tags");
                let left = tag(l, ops);
                let right = tag(r, ops);
                DiMonomial::node(op, left, right)
            }
        }
    }
    assert!(n >= 1, "trees need at least one leaf");
    let shapes = tree_shapes(n);
    let perms = permutations(n);
    let mut out = Vec::with_capacity((shapes.len() * perms.len()) << (n - 1));
    for shape in &shapes {
        for mask in 0u32..(1 << (n - 1)) {
            let mut bits = (0..n - 1).map(|i| {
                if mask >> (n - 2 - i) & 1 == 0 {
                    Op::Succ
                } else {
                    Op::Prec
                }
            });
            let tagged = tag(shape, &mut bits);
            for p in &perms {
                out.push(tagged.relabel(&|v| p[v as usize - 1]));
            }
        }
    }
    out.sort();
    out
}

fn di_monomial(cur: &mut Cursor<'_>) -> Result<DiMonomial, TermError> {
    cur.skip_ws();
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let left = di_monomial(cur)?;
            cur.skip_ws();
            let op = match cur.peek() {
                Some('>') | Some('≻') => Op::Succ,
                Some('<') | Some('≺') => Op::Prec,
                _ => return Err(cur.error("expected '>' or '<'")),
            };
            cur.bump();
            let right = di_monomial(cur)?;
            cur.skip_ws();
            cur.expect(')')?;
            Ok(DiMonomial::node(op, left, right))
        }
        Some('x') => {
            let v = cur.variable_index()?;
            if matches!(cur.peek(), Some('\'') | Some('^')) {
                return Err(cur.error("variables in derived terms carry no decoration"));
            }
            Ok(DiMonomial::Leaf(v))
        }
        Some(_) => Err(cur.error("expected '(' or a variable")),
        None => Err(cur.error("unexpected end of input")),
    }
}

/// Parse `mono := var | '(' mono '>' mono ')' | '(' mono '<' mono ')'`
/// combined linearly like plain terms.
pub fn parse_di(s: &str) -> Result<DiExpr, TermError> {
    let mut cur = Cursor::new(s);
    let mut e = DiExpr::zero();
    cur.linear(di_monomial, |m, c| e.add_term(m, c))?;
    Ok(e)
}
