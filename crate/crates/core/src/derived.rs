//! The expansion map from `≻`/`≺` terms into a weight −1 component, derived
//! dimensions, the weight criterion and identity checks for derived varieties.

use std::sync::Arc;

use serde::Serialize;

use crate::di::{enumerate_di_monomials, tau, tau_monomial, DiExpr, DiMonomial, Op};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::linalg::{PreimageSolver, SparseVec};
use crate::par;
use crate::term::Expr;
use crate::variety::{instantiate_di, Component, VarietyName};

/// Columns are the multilinear `≻`/`≺` monomials of one arity; column `j`
/// holds the quotient coordinates of `τ` of the `j`-th monomial.
#[derive(Debug)]
pub struct Expansion {
    variety: VarietyName,
    arity: usize,
    columns: Vec<DiMonomial>,
    images: Vec<SparseVec>,
    component: Arc<Component>,
    solver: PreimageSolver,
}

impl Expansion {
    pub(crate) fn build(engine: &Engine, v: VarietyName, n: usize) -> Result<Expansion> {
        let component = engine.component(v, n, -1)?;
        let columns = enumerate_di_monomials(n);
        let images = par::try_map(engine.execution(), &columns, |t| {
            component.coords(&tau_monomial(t))
        })?;
        let solver = PreimageSolver::new(&images, component.dim())?;
        Ok(Expansion {
            variety: v,
            arity: n,
            columns,
            images,
            component,
            solver,
        })
    }

    pub fn variety(&self) -> VarietyName {
        self.variety
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn columns(&self) -> &[DiMonomial] {
        &self.columns
    }

    pub fn images(&self) -> &[SparseVec] {
        &self.images
    }

    pub fn component(&self) -> &Arc<Component> {
        &self.component
    }

    pub fn rank(&self) -> usize {
        self.solver.rank()
    }

    /// Canonical preimage of a quotient coordinate vector.
    pub fn preimage(&self, coords: &SparseVec) -> Result<DiExpr> {
        let sol = self.solver.solve_sparse(coords)?;
        Ok(DiExpr::from_terms(
            sol.into_iter().map(|(j, c)| (c, self.columns[j].clone())),
        ))
    }
}

/// Dimension of the span of `τ` images at arity `n`.
pub fn dim_dervar(engine: &Engine, v: VarietyName, n: usize) -> Result<usize> {
    Ok(engine.expansion(v, n)?.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub variety: VarietyName,
    pub arity: usize,
    /// Rank of the expansion matrix.
    pub rank: usize,
    /// Dimension of the weight −1 component.
    pub dim: usize,
    pub holds: bool,
}

/// The weight criterion at one arity: `τ` hits the whole weight −1 component.
pub fn check_weight_criterion(
    engine: &Engine,
    v: VarietyName,
    n: usize,
) -> Result<CriterionReport> {
    let e = engine.expansion(v, n)?;
    let rank = e.rank();
    let dim = e.component().dim();
    Ok(CriterionReport {
        variety: v,
        arity: n,
        rank,
        dim,
        holds: rank == dim,
    })
}

/// Whether `τ(t)` vanishes in the weight −1 component of `base`.
pub fn tau_vanishes(engine: &Engine, base: VarietyName, t: &DiExpr) -> Result<bool> {
    let n = t.arity().ok_or(Error::NotMultilinear { arity: 0 })?;
    let c = engine.component(base, n, -1)?;
    c.contains(&tau(t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    /// Nonzero quotient coordinates of `τ` of the instance at `x1, x2, x3`,
    /// as `(index, "p/q")`.
    pub residue: Vec<(usize, String)>,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiIdentityReport {
    pub derived: VarietyName,
    pub base: VarietyName,
    pub identities: Vec<IdentityCheck>,
    /// Dimension of the consequence span of the identities at arity 3.
    pub span_dim: usize,
    /// `48 - dim_dervar(base, 3)`, the dimension of the kernel of `τ`.
    pub kernel_dim: usize,
    /// Every consequence lies in the kernel.
    pub span_in_kernel: bool,
}

impl DiIdentityReport {
    pub fn pass(&self) -> bool {
        self.identities.iter().all(|i| i.vanishes)
            && self.span_in_kernel
            && self.span_dim == self.kernel_dim
    }
}

/// Check the defining identities of a derived variety against its base at
/// arity 3: each must `τ`-vanish, and together they must span the kernel.
pub fn check_di_identities(
    engine: &Engine,
    derived: VarietyName,
    base: VarietyName,
) -> Result<DiIdentityReport> {
    if derived.base() != Some(base) {
        return Err(Error::PairMismatch {
            derived: derived.to_string(),
            base: base.to_string(),
        });
    }
    let n = 3;
    let comp = engine.component(base, n, -1)?;
    let spec = derived.spec();
    let args: Vec<DiMonomial> = (1..=n as u32).map(DiMonomial::var).collect();
    let mut identities = Vec::new();
    for id in &spec.identities {
        let inst = instantiate_di(id, &args)?;
        let residue = comp.coords(&tau(&inst))?;
        identities.push(IdentityCheck {
            label: id.label.to_string(),
            vanishes: residue.is_empty(),
            residue: residue
                .iter()
                .map(|(i, x)| (*i, crate::rational_string(x)))
                .collect(),
        });
    }
    let di = engine.di_component(derived, n)?;
    let span_in_kernel = di
        .relations()
        .iter()
        .map(|r| comp.contains(&tau(r)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let kernel_dim = di.ambient().len() - dim_dervar(engine, base, n)?;
    Ok(DiIdentityReport {
        derived,
        base,
        identities,
        span_dim: di.rank(),
        kernel_dim,
        span_in_kernel,
    })
}

/// Read a one-operation relation with its product as `op`.
pub fn as_di(e: &Expr, op: Op) -> Option<DiExpr> {
    let mut out = DiExpr::zero();
    for (m, c) in e.iter() {
        out.add_term(DiMonomial::from_plain(m, op)?, c.clone());
    }
    Some(out)
}

/// Each Novikov identity with `a∘b := a≺b`, and whether it `τ`-vanishes in
/// the commutative associative component at arity 3.
pub fn nov_convention_check(engine: &Engine) -> Result<Vec<(String, bool)>> {
    let spec = VarietyName::Nov.spec();
    let mut out = Vec::new();
    for id in &spec.identities {
        let plain = id.as_plain().expect("one-operation identity");
        let t = as_di(plain, Op::Prec).expect("undecorated identity");
        out.push((
            id.label.to_string(),
            tau_vanishes(engine, VarietyName::Com, &t)?,
        ));
    }
    Ok(out)
}
