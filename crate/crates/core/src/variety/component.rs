use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::di::{enumerate_di_monomials, DiExpr, DiMonomial};
use crate::engine::Execution;
use crate::error::{Error, Result, TermError};
use crate::linalg::{normalize_sparse, EchelonBuilder, SpanBasis, SparseVec};
use crate::lincomb::LinComb;
use crate::par;
use crate::term::{compositions, enumerate_multilinear, Expr, Generator, Monomial};

use super::{
    decorate, di_identity_instances, identity_instances, lift_di_relation, lift_relation,
    VarietyName, VarietySpec,
};

/// Multilinear quotient of the free algebra at a fixed arity (and, for one
/// operation, a fixed weight) by the consequences of a variety.
#[derive(Clone, Debug)]
pub struct Quotient<T> {
    variety: VarietyName,
    arity: usize,
    weight: Option<i64>,
    basis: SpanBasis<T>,
    index: Arc<HashMap<T, usize>>,
}

/// Weight-homogeneous component of a one-operation variety.
pub type Component = Quotient<Monomial>;
/// Multilinear component of a two-operation variety.
pub type DiComponent = Quotient<DiMonomial>;

/// What a component needs to know about its monomials.
pub trait QuotientTerm: Ord + Clone + Hash + Send + Sync {
    fn term_arity(&self) -> usize;
    fn term_weight(&self) -> Option<i64>;
}

impl QuotientTerm for Monomial {
    fn term_arity(&self) -> usize {
        self.arity()
    }
    fn term_weight(&self) -> Option<i64> {
        Some(self.weight())
    }
}

impl QuotientTerm for DiMonomial {
    fn term_arity(&self) -> usize {
        self.arity()
    }
    fn term_weight(&self) -> Option<i64> {
        None
    }
}

fn index_of<T: QuotientTerm>(ambient: &[T]) -> Arc<HashMap<T, usize>> {
    Arc::new(
        ambient
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect(),
    )
}

impl<T: QuotientTerm> Quotient<T> {
    pub(crate) fn from_basis(
        variety: VarietyName,
        arity: usize,
        weight: Option<i64>,
        basis: SpanBasis<T>,
    ) -> Self {
        let index = index_of(basis.ambient());
        Quotient {
            variety,
            arity,
            weight,
            basis,
            index,
        }
    }

    pub fn variety(&self) -> VarietyName {
        self.variety
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `None` for two-operation components.
    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    pub fn basis(&self) -> &SpanBasis<T> {
        &self.basis
    }

    pub fn ambient(&self) -> &[T] {
        self.basis.ambient()
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.basis.quotient_dim()
    }

    /// Dimension of the relation span.
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn column(&self, m: &T) -> Option<usize> {
        self.index.get(m).copied()
    }

    fn check_term(&self, m: &T) -> Result<usize> {
        if m.term_arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: m.term_arity(),
            });
        }
        if let (Some(w), Some(found)) = (self.weight, m.term_weight()) {
            if w != found {
                return Err(TermError::MixedWeight {
                    first: w,
                    other: found,
                }
                .into());
            }
        }
        self.column(m)
            .ok_or(Error::NotMultilinear { arity: self.arity })
    }

    /// Ambient coordinates of `e`.
    pub fn vector_of(&self, e: &LinComb<T>) -> Result<SparseVec> {
        let mut v = Vec::with_capacity(e.len());
        for (m, c) in e.iter() {
            v.push((self.check_term(m)?, c.clone()));
        }
        Ok(normalize_sparse(v))
    }

    pub fn expr_of(&self, v: &SparseVec) -> LinComb<T> {
        let amb = self.ambient();
        LinComb::from_terms(v.iter().map(|(i, c)| (c.clone(), amb[*i].clone())))
    }

    /// Coordinates of the class of `e` on the quotient basis.
    pub fn coords(&self, e: &LinComb<T>) -> Result<SparseVec> {
        Ok(self.basis.quotient_coords(&self.vector_of(e)?)?)
    }

    /// Canonical representative of the class of `e`, supported on non-pivot
    /// monomials.
    pub fn reduce(&self, e: &LinComb<T>) -> Result<LinComb<T>> {
        Ok(self.expr_of(&self.basis.reduce(&self.vector_of(e)?)?))
    }

    /// Whether `e` vanishes in the quotient.
    pub fn contains(&self, e: &LinComb<T>) -> Result<bool> {
        Ok(self.basis.contains(&self.vector_of(e)?)?)
    }

    /// Monomials whose classes form the quotient basis.
    pub fn quotient_monomials(&self) -> Vec<T> {
        let amb = self.ambient();
        self.basis.free_columns().map(|c| amb[c].clone()).collect()
    }

    /// The echelon rows as relations.
    pub fn relations(&self) -> Vec<LinComb<T>> {
        self.basis.rows().iter().map(|r| self.expr_of(r)).collect()
    }
}

fn echelon_of<T: QuotientTerm>(
    exec: Execution,
    gens: &[LinComb<T>],
    ambient: Arc<Vec<T>>,
    index: &HashMap<T, usize>,
) -> SpanBasis<T> {
    let vecs = par::map(exec, gens, |g| {
        normalize_sparse(g.iter().map(|(m, c)| (index[m], c.clone())))
    });
    let mut b = EchelonBuilder::new(ambient.len());
    for v in &vecs {
        b.insert(v).expect("vector fits ambient");
    }
    b.finish(ambient)
}

/// Undecorated component at arity `n` (weight `-n`), grown from the component
/// one arity below.
pub(crate) fn build_plain(
    spec: &VarietySpec,
    n: usize,
    prev: Option<&Component>,
    exec: Execution,
) -> Result<Component> {
    let ambient = Arc::new(enumerate_multilinear(n, -(n as i64))?);
    let mut gens = identity_instances(spec, n);
    if let Some(prev) = prev {
        debug_assert_eq!(prev.arity + 1, n);
        let rows = prev.relations();
        for lifted in par::map(exec, &rows, |r| lift_relation(r, n)) {
            gens.extend(lifted);
        }
    }
    let index = index_of(&ambient);
    let basis = echelon_of(exec, &gens, ambient, &index);
    Ok(Quotient {
        variety: spec.name,
        arity: n,
        weight: Some(-(n as i64)),
        basis,
        index,
    })
}

/// The component at weight `w`: decorated generators are just more free
/// generators, so the relations are those of the undecorated component
/// relabelled by every decoration vector. Relabelling by one vector keeps the
/// monomial order, so each block stays in reduced echelon form and the
/// blocks have disjoint supports.
pub(crate) fn decorate_component(
    undecorated: &Component,
    w: i64,
    exec: Execution,
) -> Result<Component> {
    let n = undecorated.arity;
    let ambient = Arc::new(enumerate_multilinear(n, w)?);
    let index = index_of(&ambient);
    let decs = compositions((n as i64 + w) as u32, n);
    let und_amb = undecorated.ambient();
    let blocks = par::map(exec, &decs, |dec| {
        let cols: Vec<usize> = und_amb
            .iter()
            .map(|m| index[&m.relabel(&|g: Generator| g.with_der(dec[g.var as usize - 1]))])
            .collect();
        undecorated
            .basis
            .rows()
            .iter()
            .map(|r| {
                let mut row: SparseVec = r.iter().map(|(c, x)| (cols[*c], x.clone())).collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect::<Vec<_>>()
    });
    let mut rows: Vec<SparseVec> = blocks.into_iter().flatten().collect();
    rows.sort_by_key(|r| r[0].0);
    let basis = SpanBasis::from_rref(ambient, rows);
    Ok(Quotient {
        variety: undecorated.variety,
        arity: n,
        weight: Some(w),
        basis,
        index,
    })
}

/// Brute-force variant of [`decorate_component`]: echelonize every decorated
/// relation directly. Used to cross-check the fast path.
pub fn decorate_component_direct(undecorated: &Component, w: i64) -> Result<Component> {
    let n = undecorated.arity;
    let ambient = Arc::new(enumerate_multilinear(n, w)?);
    let index = index_of(&ambient);
    let rels = undecorated.relations();
    let gens: Vec<Expr> = compositions((n as i64 + w) as u32, n)
        .iter()
        .flat_map(|d| rels.iter().map(move |r| decorate(r, d)))
        .collect();
    let basis = echelon_of(Execution::Sequential, &gens, ambient, &index);
    Ok(Quotient {
        variety: undecorated.variety,
        arity: n,
        weight: Some(w),
        basis,
        index,
    })
}

pub(crate) fn build_di(
    spec: &VarietySpec,
    n: usize,
    prev: Option<&DiComponent>,
    exec: Execution,
) -> Result<DiComponent> {
    let ambient = Arc::new(enumerate_di_monomials(n));
    let mut gens: Vec<DiExpr> = di_identity_instances(spec, n);
    if let Some(prev) = prev {
        let rows = prev.relations();
        for lifted in par::map(exec, &rows, |r| lift_di_relation(r, n)) {
            gens.extend(lifted);
        }
    }
    let index = index_of(&ambient);
    let basis = echelon_of(exec, &gens, ambient, &index);
    Ok(Quotient {
        variety: spec.name,
        arity: n,
        weight: None,
        basis,
        index,
    })
}
