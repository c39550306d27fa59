//! Rewriting weight −1 elements into `≻`/`≺` form.
//!
//! [`express_solver`] inverts the expansion matrix. The constructive path
//! ([`express_bicom`], [`express_alt`], [`express_assos`]) peels generators
//! one at a time; every answer is checked against the quotient before it is
//! returned.

mod tables;
pub mod words;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use num_traits::One;
use serde::Serialize;

use crate::di::{parse_di, tau, DiExpr, DiMonomial, Op};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::term::{Expr, Generator, Monomial};
use crate::variety::{bicom_classes, bicom_comb, VarietyName};
use crate::Rational;

pub use words::{
    distribute, distribute_derivations_alt, operator_form, operator_form_alt, refocus, refocus_alt,
    refocus_product, words_to_expr, Associator, OperatorWord, Side, WordSum,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Solver,
    Recursive,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "solver" => Ok(Method::Solver),
            "recursive" => Ok(Method::Recursive),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Solver => "solver",
            Method::Recursive => "recursive",
        })
    }
}

/// Arity of a nonzero valid input, `None` for zero.
fn validate(engine: &Engine, v: VarietyName, f: &Expr) -> Result<Option<usize>> {
    if v.num_ops() != 1 {
        return Err(Error::OpCount {
            variety: v.to_string(),
            expected: 1,
            found: v.num_ops(),
        });
    }
    if f.is_zero() {
        return Ok(None);
    }
    engine.check_der_cap(f)?;
    let w = f.weight()?;
    if w != -1 {
        return Err(Error::WeightNotMinusOne { weight: w });
    }
    let n = f.monomials().map(Monomial::arity).max().expect("nonzero");
    for m in f.monomials() {
        let mut vars: Vec<u32> = m.leaves().iter().map(|g| g.var).collect();
        vars.sort_unstable();
        if !vars.iter().copied().eq(1..=n as u32) {
            return Err(Error::NotMultilinear { arity: n });
        }
    }
    engine.check_arity(v, n, Some(-1))?;
    Ok(Some(n))
}

/// Whether `τ(t) = f` in the weight −1 component of `v`.
pub fn roundtrip_holds(engine: &Engine, v: VarietyName, f: &Expr, t: &DiExpr) -> Result<bool> {
    let diff = &tau(t) - f;
    if diff.is_zero() {
        return Ok(true);
    }
    let n = diff.arity().ok_or(Error::NotMultilinear { arity: 0 })?;
    engine.component(v, n, -1)?.contains(&diff)
}

/// Canonical preimage under the expansion matrix: free columns set to zero.
pub fn express_solver(engine: &Engine, v: VarietyName, f: &Expr) -> Result<DiExpr> {
    let Some(n) = validate(engine, v, f)? else {
        return Ok(DiExpr::zero());
    };
    let e = engine.expansion(v, n)?;
    e.preimage(&e.component().coords(f)?)
}

/// Counters describing how the constructive recursion reached its answer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExpressStats {
    /// Arity-3 table entries used.
    pub table_hits: usize,
    /// Table entries that failed validation and were recomputed.
    pub table_rejects: usize,
    /// Peels of an outer generator of derivation order 1.
    pub exact_peels: usize,
    /// Peels of an underived outer generator, each leaving remainders.
    pub remainder_steps: usize,
    /// Monomials handed to the solver.
    pub solver_fallbacks: usize,
}

/// Constructive rewriting for BiCom, Alt and Assos with memoized monomials.
pub struct Expresser<'a> {
    engine: &'a Engine,
    variety: VarietyName,
    memo: HashMap<Monomial, DiExpr>,
    in_progress: HashSet<Monomial>,
    stats: ExpressStats,
}

fn one() -> Rational {
    Rational::one()
}

/// Relabel the variables of `m` to `1..=k` in increasing order; returns the
/// relabelled monomial and the original labels.
fn normalize(m: &Monomial) -> (Monomial, Vec<u32>) {
    let mut vars: Vec<u32> = m.leaves().iter().map(|g| g.var).collect();
    vars.sort_unstable();
    let pos = |v: u32| vars.binary_search(&v).expect("leaf var") as u32 + 1;
    let norm = m.relabel(&|g: Generator| g.with_var(pos(g.var)));
    (norm, vars)
}

fn substitute_vars(t: &DiExpr, vars: &[u32]) -> DiExpr {
    t.relabel(&|v| vars[v as usize - 1])
}

fn single(m: DiMonomial) -> DiExpr {
    DiExpr::from_monomial(m)
}

fn lower_der(m: &Monomial, var: u32) -> Monomial {
    m.relabel(&|g: Generator| {
        if g.var == var {
            g.with_der(g.der - 1)
        } else {
            g
        }
    })
}

/// The leaf to keep inside: maximal derivation order, then smallest index.
fn heaviest(m: &Monomial) -> Generator {
    let mut leaves = m.leaves();
    leaves.sort_by(|a, b| b.der.cmp(&a.der).then(a.var.cmp(&b.var)));
    leaves[0]
}

impl<'a> Expresser<'a> {
    pub fn new(engine: &'a Engine, variety: VarietyName) -> Result<Self> {
        if !matches!(
            variety,
            VarietyName::BiCom | VarietyName::Alt | VarietyName::Assos
        ) {
            return Err(Error::NoConstructiveMethod {
                variety: variety.to_string(),
            });
        }
        Ok(Expresser {
            engine,
            variety,
            memo: HashMap::new(),
            in_progress: HashSet::new(),
            stats: ExpressStats::default(),
        })
    }

    pub fn stats(&self) -> ExpressStats {
        self.stats
    }

    fn associator(&self) -> Associator {
        match self.variety {
            VarietyName::Assos => Associator::Symmetric,
            _ => Associator::Alternating,
        }
    }

    /// Express a weight −1 multilinear element; the result is verified.
    pub fn express(&mut self, f: &Expr) -> Result<DiExpr> {
        if validate(self.engine, self.variety, f)?.is_none() {
            return Ok(DiExpr::zero());
        }
        let mut out = DiExpr::zero();
        for (m, c) in f.iter() {
            out.add_scaled(&self.monomial(m)?, c);
        }
        if !roundtrip_holds(self.engine, self.variety, f, &out)? {
            warn!("constructive result for {f} failed verification; using the solver");
            self.stats.solver_fallbacks += 1;
            return express_solver(self.engine, self.variety, f);
        }
        Ok(out)
    }

    /// Express one weight −1 monomial on any set of variables.
    fn monomial(&mut self, m: &Monomial) -> Result<DiExpr> {
        let (norm, vars) = normalize(m);
        if let Some(t) = self.memo.get(&norm) {
            return Ok(substitute_vars(t, &vars));
        }
        let t = if self.in_progress.contains(&norm) {
            debug!("cycle at {norm}; using the solver");
            self.stats.solver_fallbacks += 1;
            self.solve(&norm)?
        } else {
            self.in_progress.insert(norm.clone());
            let r = self.normalized(&norm);
            self.in_progress.remove(&norm);
            r?
        };
        self.memo.insert(norm, t.clone());
        Ok(substitute_vars(&t, &vars))
    }

    fn solve(&self, m: &Monomial) -> Result<DiExpr> {
        express_solver(self.engine, self.variety, &Expr::from_monomial(m.clone()))
    }

    fn holds(&self, m: &Monomial, t: &DiExpr) -> Result<bool> {
        roundtrip_holds(
            self.engine,
            self.variety,
            &Expr::from_monomial(m.clone()),
            t,
        )
    }

    fn normalized(&mut self, m: &Monomial) -> Result<DiExpr> {
        let n = m.arity();
        if n == 1 {
            return Ok(single(DiMonomial::var(1)));
        }
        let (l, r) = m.children().expect("arity at least two");
        if n == 2 {
            let (a, b) = (l.as_leaf().unwrap(), r.as_leaf().unwrap());
            let op = if a.der == 1 { Op::Succ } else { Op::Prec };
            return Ok(single(DiMonomial::node(
                op,
                DiMonomial::var(a.var),
                DiMonomial::var(b.var),
            )));
        }
        if n == 3 {
            if let Some(t) = self.table_lookup(m)? {
                if self.holds(m, &t)? {
                    self.stats.table_hits += 1;
                    return Ok(t);
                }
                debug!(
                    "table entry for {m} does not hold in {}; recursing",
                    self.variety
                );
                self.stats.table_rejects += 1;
            }
        }
        match self.variety {
            VarietyName::BiCom => self.bicom_step(m),
            _ => self.word_steps(m),
        }
    }

    fn table_lookup(&self, m: &Monomial) -> Result<Option<DiExpr>> {
        let table = match self.variety {
            VarietyName::BiCom => &tables::BICOM,
            VarietyName::Alt => &tables::ALT,
            _ => return Ok(None),
        };
        let (l, _) = m.children().expect("arity three");
        let (mirrored, shape) = if l.is_leaf() {
            (false, m.clone())
        } else {
            (true, m.mirror())
        };
        let (a, bc) = shape.children().expect("arity three");
        let (b, c) = bc.children().expect("a(bc) shape");
        let leaves = [a, b, c].map(|x| x.as_leaf().expect("leaf"));
        let key = leaves.map(|g| g.der);
        let Some((_, text)) = table.iter().find(|(k, _)| *k == key) else {
            return Ok(None);
        };
        let t = parse_di(text)?;
        let vars = leaves.map(|g| g.var);
        let t = t.relabel(&|v| vars[v as usize - 1]);
        Ok(Some(if mirrored { t.mirror() } else { t }))
    }

    /// Peel `g` off `g·Y` (`side = L`) or `Y·g` (`side = R`).
    fn peel(&mut self, side: Side, g: Generator, y: &Monomial, u: u32) -> Result<DiExpr> {
        let x = single(DiMonomial::var(g.var));
        let whole = match side {
            Side::L => Monomial::mul(Monomial::leaf(g), y.clone()),
            Side::R => Monomial::mul(y.clone(), Monomial::leaf(g)),
        };
        match g.der {
            1 => {
                self.stats.exact_peels += 1;
                let e = self.monomial(y)?;
                Ok(match side {
                    Side::L => DiExpr::apply(Op::Succ, &x, &e),
                    Side::R => DiExpr::apply(Op::Prec, &e, &x),
                })
            }
            0 if y.leaves().iter().any(|h| h.var == u && h.der > 0) => {
                // g·d(Y⁻) = g·Y + Σ g·(Y⁻ with another leaf derived).
                self.stats.remainder_steps += 1;
                let lowered = lower_der(y, u);
                let e = self.monomial(&lowered)?;
                let mut out = match side {
                    Side::L => DiExpr::apply(Op::Prec, &x, &e),
                    Side::R => DiExpr::apply(Op::Succ, &e, &x),
                };
                for d in lowered.derive_terms() {
                    if d == *y {
                        continue;
                    }
                    let rest = match side {
                        Side::L => Monomial::mul(Monomial::leaf(g), d),
                        Side::R => Monomial::mul(d, Monomial::leaf(g)),
                    };
                    out.add_scaled(&self.monomial(&rest)?, &-one());
                }
                Ok(out)
            }
            _ => {
                debug!("no peel applies to {whole}; using the solver");
                self.stats.solver_fallbacks += 1;
                self.solve_any(&whole)
            }
        }
    }

    fn solve_any(&self, m: &Monomial) -> Result<DiExpr> {
        let (norm, vars) = normalize(m);
        Ok(substitute_vars(&self.solve(&norm)?, &vars))
    }

    /// BiCom at arity ≥ 3: any leaf can be the outer multiplier, on the left
    /// when it is a left child and on the right otherwise. A leaf of order 1
    /// peels exactly; failing that an underived leaf peels around the
    /// heaviest one, and every remainder then has a leaf of order 1.
    fn bicom_step(&mut self, m: &Monomial) -> Result<DiExpr> {
        let (left, right) = bicom_classes(m).expect("product");
        let u = heaviest(m);
        // A leaf can go outside only if its side keeps another leaf.
        let mut candidates: Vec<(Side, Generator)> = Vec::new();
        if left.len() >= 2 {
            candidates.extend(left.iter().map(|g| (Side::L, *g)));
        }
        if right.len() >= 2 {
            candidates.extend(right.iter().map(|g| (Side::R, *g)));
        }
        candidates.retain(|(_, g)| g.var != u.var && g.der <= 1);
        candidates.sort_by_key(|(_, g)| (std::cmp::Reverse(g.der), g.var));
        let Some(&(side, g)) = candidates.first() else {
            debug!("no outer leaf available in {m}; using the solver");
            self.stats.solver_fallbacks += 1;
            return self.solve(m);
        };
        let y = match side {
            Side::L => {
                let rest: Vec<Generator> = left.iter().copied().filter(|h| *h != g).collect();
                bicom_comb(&rest, &right)
            }
            Side::R => {
                let rest: Vec<Generator> = right.iter().copied().filter(|h| *h != g).collect();
                bicom_comb(&left, &rest)
            }
        };
        self.peel(side, g, &y, u.var)
    }

    /// Alt and Assos: rewrite as operator words cored at the heaviest leaf,
    /// then peel each word's outer generator.
    fn word_steps(&mut self, m: &Monomial) -> Result<DiExpr> {
        let kind = self.associator();
        let u = heaviest(m);
        let mut words = WordSum::zero();
        for (w, c) in operator_form(kind, m).iter() {
            words.add_scaled(&refocus(kind, w, u.var)?, c);
        }
        let mut out = DiExpr::zero();
        for (w, c) in words.iter() {
            let (side, g) = w.ops[0];
            let y = w.inner().expect("arity at least two").to_monomial();
            out.add_scaled(&self.peel(side, g, &y, u.var)?, c);
        }
        Ok(out)
    }
}

fn express_with(engine: &Engine, v: VarietyName, f: &Expr) -> Result<DiExpr> {
    Expresser::new(engine, v)?.express(f)
}

/// Constructive rewriting in bicommutative algebras.
pub fn express_bicom(engine: &Engine, f: &Expr) -> Result<DiExpr> {
    express_with(engine, VarietyName::BiCom, f)
}

/// Constructive rewriting in alternative algebras.
pub fn express_alt(engine: &Engine, f: &Expr) -> Result<DiExpr> {
    express_with(engine, VarietyName::Alt, f)
}

/// Constructive rewriting in assosymmetric algebras.
pub fn express_assos(engine: &Engine, f: &Expr) -> Result<DiExpr> {
    express_with(engine, VarietyName::Assos, f)
}

/// Dispatch on `method`.
pub fn express(engine: &Engine, v: VarietyName, method: Method, f: &Expr) -> Result<DiExpr> {
    match method {
        Method::Solver => express_solver(engine, v, f),
        Method::Recursive => express_with(engine, v, f),
    }
}

/// The arity-3 table used by the constructive path: each monomial
/// `x1^(i)(x2^(j) x3^(k))` with its printed expression. `None` for varieties
/// without a table.
pub fn base_table(v: VarietyName) -> Option<Vec<(Monomial, DiExpr)>> {
    let table = match v {
        VarietyName::BiCom => &tables::BICOM,
        VarietyName::Alt => &tables::ALT,
        _ => return None,
    };
    Some(
        table
            .iter()
            .map(|([a, b, c], text)| {
                let leaf = |v, d| Monomial::leaf(Generator::new(v, d));
                let m = Monomial::mul(leaf(1, *a), Monomial::mul(leaf(2, *b), leaf(3, *c)));
                (m, parse_di(text).expect("table entry parses"))
            })
            .collect(),
    )
}
