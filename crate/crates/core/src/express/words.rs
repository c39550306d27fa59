//! Operator words and the associator rewriting used for alternative and
//! assosymmetric algebras.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::term::{Expr, Generator, Monomial};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// `O_{g1} O_{g2} … O_{gk} core`, stored outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperatorWord {
    pub core: Generator,
    pub ops: Vec<(Side, Generator)>,
}

pub type WordSum = LinComb<OperatorWord>;

impl OperatorWord {
    pub fn leaf(core: Generator) -> Self {
        OperatorWord {
            core,
            ops: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.ops.len() + 1
    }

    /// Apply one more multiplication on the outside.
    pub fn apply(&self, side: Side, g: Generator) -> Self {
        let mut ops = Vec::with_capacity(self.ops.len() + 1);
        ops.push((side, g));
        ops.extend_from_slice(&self.ops);
        OperatorWord {
            core: self.core,
            ops,
        }
    }

    /// The word without its outermost operator.
    pub fn inner(&self) -> Option<OperatorWord> {
        (!self.ops.is_empty()).then(|| OperatorWord {
            core: self.core,
            ops: self.ops[1..].to_vec(),
        })
    }

    pub fn to_monomial(&self) -> Monomial {
        let mut m = Monomial::leaf(self.core);
        for (side, g) in self.ops.iter().rev() {
            m = match side {
                Side::L => Monomial::mul(Monomial::leaf(*g), m),
                Side::R => Monomial::mul(m, Monomial::leaf(*g)),
            };
        }
        m
    }

    pub fn mirror(&self) -> Self {
        OperatorWord {
            core: self.core,
            ops: self.ops.iter().map(|(s, g)| (s.flip(), *g)).collect(),
        }
    }

    pub fn contains_var(&self, var: u32) -> bool {
        self.core.var == var || self.ops.iter().any(|(_, g)| g.var == var)
    }

    /// Read a monomial as a word when every product has a leaf factor. A
    /// two-leaf product keeps the side of its parent, `R` at the top.
    pub fn from_monomial(m: &Monomial) -> Option<Self> {
        fn go(m: &Monomial, parent: Side, ops: &mut Vec<(Side, Generator)>) -> Option<Generator> {
            let Some((l, r)) = m.children() else {
                return m.as_leaf();
            };
            match (l.as_leaf(), r.as_leaf()) {
                (Some(a), Some(b)) => {
                    if parent == Side::L {
                        ops.push((Side::L, a));
                        Some(b)
                    } else {
                        ops.push((Side::R, b));
                        Some(a)
                    }
                }
                (Some(a), None) => {
                    ops.push((Side::L, a));
                    go(r, Side::L, ops)
                }
                (None, Some(b)) => {
                    ops.push((Side::R, b));
                    go(l, Side::R, ops)
                }
                (None, None) => None,
            }
        }
        let mut ops = Vec::new();
        let core = go(m, Side::R, &mut ops)?;
        Some(OperatorWord { core, ops })
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (side, g) in &self.ops {
            let s = match side {
                Side::L => 'L',
                Side::R => 'R',
            };
            write!(f, "{s}_{g} ")?;
        }
        write!(f, "{}", self.core)
    }
}

pub fn words_to_expr(s: &WordSum) -> Expr {
    s.map_monomials(OperatorWord::to_monomial)
}

fn mirror_sum(s: &WordSum) -> WordSum {
    s.map_monomials(OperatorWord::mirror)
}

fn apply_sum(s: &WordSum, side: Side, g: Generator) -> WordSum {
    s.map_monomials(|w| w.apply(side, g))
}

/// How the associator `(a,b,c) = (ab)c - a(bc)` behaves under swapping its
/// first two arguments: alternating (alternative algebras) or symmetric
/// (assosymmetric algebras). Both varieties make it invariant under cyclic
/// shifts and are closed under mirroring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Associator {
    Alternating,
    Symmetric,
}

impl Associator {
    fn sigma(self) -> Rational {
        match self {
            Associator::Alternating => -Rational::one(),
            Associator::Symmetric => Rational::one(),
        }
    }
}

/// `P·Z` as a sum of words whose core is the core of `P`.
///
/// `P(hZ') = (Ph)Z' - σ(hP)Z' + σh(PZ')` and
/// `P(Z'h) = (PZ')h - (hP)Z' + h(PZ')`; the right factor shrinks each step.
pub fn refocus_product(kind: Associator, p: &OperatorWord, z: &OperatorWord) -> WordSum {
    let Some((side, h)) = z.ops.first().copied() else {
        return WordSum::from_monomial(p.apply(Side::R, z.core));
    };
    // A two-leaf factor is read as a left multiplication.
    let (side, h, rest) = if z.ops.len() == 1 && side == Side::R {
        (Side::L, z.core, OperatorWord::leaf(h))
    } else {
        (side, h, z.inner().expect("nonempty"))
    };
    let sigma = kind.sigma();
    let mut out = WordSum::zero();
    match side {
        Side::L => {
            out.add_scaled(
                &refocus_product(kind, &p.apply(Side::R, h), &rest),
                &Rational::one(),
            );
            out.add_scaled(
                &refocus_product(kind, &p.apply(Side::L, h), &rest),
                &-sigma.clone(),
            );
            out.add_scaled(
                &apply_sum(&refocus_product(kind, p, &rest), Side::L, h),
                &sigma,
            );
        }
        Side::R => {
            let pz = refocus_product(kind, p, &rest);
            out.add_scaled(&apply_sum(&pz, Side::R, h), &Rational::one());
            out.add_scaled(
                &refocus_product(kind, &p.apply(Side::L, h), &rest),
                &-Rational::one(),
            );
            out.add_scaled(&apply_sum(&pz, Side::L, h), &Rational::one());
        }
    }
    out
}

/// `Z·P` with the core of `P` as the core, by mirroring.
fn refocus_product_right(kind: Associator, z: &OperatorWord, p: &OperatorWord) -> WordSum {
    mirror_sum(&refocus_product(kind, &p.mirror(), &z.mirror()))
}

/// Rewrite a monomial as a sum of operator words.
pub fn operator_form(kind: Associator, m: &Monomial) -> WordSum {
    if let Some(w) = OperatorWord::from_monomial(m) {
        return WordSum::from_monomial(w);
    }
    let (a, b) = m.children().expect("a leaf is a word");
    if let Some(g) = a.as_leaf() {
        return apply_sum(&operator_form(kind, b), Side::L, g);
    }
    if let Some(g) = b.as_leaf() {
        return apply_sum(&operator_form(kind, a), Side::R, g);
    }
    let (fa, fb) = (operator_form(kind, a), operator_form(kind, b));
    let mut out = WordSum::zero();
    for (p, cp) in fa.iter() {
        for (z, cz) in fb.iter() {
            out.add_scaled(&refocus_product(kind, p, z), &(cp * cz));
        }
    }
    out
}

/// Rewrite a word as a sum of words whose core is the leaf `target`.
pub fn refocus(kind: Associator, w: &OperatorWord, target: u32) -> Result<WordSum> {
    if !w.contains_var(target) {
        return Err(Error::MissingLeaf { var: target });
    }
    if w.core.var == target {
        return Ok(WordSum::from_monomial(w.clone()));
    }
    let (side, g) = w.ops[0];
    let inner = w.inner().expect("nonempty");
    if g.var != target {
        return Ok(apply_sum(&refocus(kind, &inner, target)?, side, g));
    }
    let leaf = OperatorWord::leaf(g);
    Ok(match side {
        Side::L => refocus_product(kind, &leaf, &inner),
        Side::R => refocus_product_right(kind, &inner, &leaf),
    })
}

/// Spread the derivations of `m` so that every top-level product has a
/// derived generator in both factors.
///
/// When the left factor `A` is underived, the right one is distributed first
/// and `A(B1B2) = (AB1)B2 - σ(B1A)B2 + σB1(AB2)` finishes the job; the case
/// of an underived right factor is the mirror image.
pub fn distribute(kind: Associator, m: &Monomial) -> Result<Expr> {
    let derived = m.leaves().iter().filter(|g| g.der > 0).count();
    match derived {
        0 => return Err(Error::NoDerivation),
        1 => return Err(Error::SingleDerivation),
        _ => {}
    }
    let (a, b) = m.children().expect("two derived leaves");
    let da = a.der_total() > 0;
    let db = b.der_total() > 0;
    if da && db {
        return Ok(Expr::from_monomial(m.clone()));
    }
    if !db {
        return Ok(distribute(kind, &m.mirror())?.mirror());
    }
    let sigma = kind.sigma();
    let mut out = Expr::zero();
    for (bm, c) in distribute(kind, b)?.iter() {
        let (b1, b2) = bm.children().expect("distributed product");
        let (a, b1, b2) = (a.clone(), b1.clone(), b2.clone());
        out.add_term(
            Monomial::mul(Monomial::mul(a.clone(), b1.clone()), b2.clone()),
            c.clone(),
        );
        out.add_term(
            Monomial::mul(Monomial::mul(b1.clone(), a.clone()), b2.clone()),
            -(c * &sigma),
        );
        out.add_term(Monomial::mul(b1, Monomial::mul(a, b2)), c * &sigma);
    }
    Ok(out)
}

pub fn distribute_derivations_alt(m: &Monomial) -> Result<Expr> {
    distribute(Associator::Alternating, m)
}

pub fn operator_form_alt(m: &Monomial) -> WordSum {
    operator_form(Associator::Alternating, m)
}

pub fn refocus_alt(w: &OperatorWord, target: u32) -> Result<WordSum> {
    refocus(Associator::Alternating, w, target)
}
