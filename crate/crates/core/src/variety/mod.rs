//! Defining identities, multilinear consequences and quotient components.

mod cache;
mod component;

use std::fmt;
use std::str::FromStr;

use crate::di::{parse_di, DiExpr, DiMonomial, Op};
use crate::error::{Error, Result};
use crate::linalg::EchelonBuilder;
use crate::term::{compositions, parse_term, permutations, Expr, Generator, Monomial};

pub use cache::{cache_file_name, CacheFile};
pub(crate) use cache::{cache_path, load as load_cache, store as store_cache};
pub(crate) use component::{build_di, build_plain, decorate_component};
pub use component::{decorate_component_direct, Component, DiComponent, Quotient, QuotientTerm};

/// Every variety the engine knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarietyName {
    Com,
    As,
    Alt,
    Assos,
    BiCom,
    Nov,
    Zinb,
    DerAlt,
    DerAssos,
    DerBiCom,
}

impl VarietyName {
    pub const ALL: [VarietyName; 10] = [
        VarietyName::Com,
        VarietyName::As,
        VarietyName::Alt,
        VarietyName::Assos,
        VarietyName::BiCom,
        VarietyName::Nov,
        VarietyName::Zinb,
        VarietyName::DerAlt,
        VarietyName::DerAssos,
        VarietyName::DerBiCom,
    ];

    /// Lower-case key used on the command line and in cache file names.
    pub fn key(self) -> &'static str {
        match self {
            VarietyName::Com => "com",
            VarietyName::As => "as",
            VarietyName::Alt => "alt",
            VarietyName::Assos => "assos",
            VarietyName::BiCom => "bicom",
            VarietyName::Nov => "nov",
            VarietyName::Zinb => "zinb",
            VarietyName::DerAlt => "deralt",
            VarietyName::DerAssos => "derassos",
            VarietyName::DerBiCom => "derbicom",
        }
    }

    pub fn num_ops(self) -> usize {
        if self.base().is_some() {
            2
        } else {
            1
        }
    }

    /// The plain variety a derived one is built from.
    pub fn base(self) -> Option<VarietyName> {
        match self {
            VarietyName::DerAlt => Some(VarietyName::Alt),
            VarietyName::DerAssos => Some(VarietyName::Assos),
            VarietyName::DerBiCom => Some(VarietyName::BiCom),
            _ => None,
        }
    }

    pub fn derived(self) -> Option<VarietyName> {
        match self {
            VarietyName::Alt => Some(VarietyName::DerAlt),
            VarietyName::Assos => Some(VarietyName::DerAssos),
            VarietyName::BiCom => Some(VarietyName::DerBiCom),
            _ => None,
        }
    }

    pub fn spec(self) -> VarietySpec {
        build_spec(self)
    }
}

impl fmt::Display for VarietyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarietyName::Com => "Com",
            VarietyName::As => "As",
            VarietyName::Alt => "Alt",
            VarietyName::Assos => "Assos",
            VarietyName::BiCom => "BiCom",
            VarietyName::Nov => "Nov",
            VarietyName::Zinb => "Zinb",
            VarietyName::DerAlt => "DerAlt",
            VarietyName::DerAssos => "DerAssos",
            VarietyName::DerBiCom => "DerBiCom",
        })
    }
}

impl serde::Serialize for VarietyName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for VarietyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = match key.as_str() {
            "zinbiel" => "zinb",
            "bicommutative" => "bicom",
            "alternative" => "alt",
            "assosymmetric" => "assos",
            "novikov" => "nov",
            "associative" | "ass" => "as",
            "commutative" => "com",
            k => k,
        };
        VarietyName::ALL
            .into_iter()
            .find(|v| v.key() == key)
            .ok_or_else(|| Error::UnknownVariety(s.to_string()))
    }
}

/// A relation `= 0` over placeholders `x1, x2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Plain(Expr),
    Di(DiExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub label: &'static str,
    pub relation: Relation,
}

impl Identity {
    fn plain(label: &'static str, text: &str) -> Self {
        Identity {
            label,
            relation: Relation::Plain(parse_term(text).expect("catalog identity parses")),
        }
    }

    fn di(label: &'static str, text: &str) -> Self {
        Identity {
            label,
            relation: Relation::Di(parse_di(text).expect("catalog identity parses")),
        }
    }

    pub fn num_ops(&self) -> usize {
        match self.relation {
            Relation::Plain(_) => 1,
            Relation::Di(_) => 2,
        }
    }

    /// Number of placeholders.
    pub fn arity(&self) -> usize {
        match &self.relation {
            Relation::Plain(e) => e.arity().expect("homogeneous identity"),
            Relation::Di(e) => e.arity().expect("homogeneous identity"),
        }
    }

    pub fn as_plain(&self) -> Option<&Expr> {
        match &self.relation {
            Relation::Plain(e) => Some(e),
            Relation::Di(_) => None,
        }
    }

    pub fn as_di(&self) -> Option<&DiExpr> {
        match &self.relation {
            Relation::Plain(_) => None,
            Relation::Di(e) => Some(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalFormStrategy {
    ClosedFormBiCom,
    GenericLinear,
}

#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub name: VarietyName,
    pub identities: Vec<Identity>,
    pub normal_form: NormalFormStrategy,
}

impl VarietySpec {
    pub fn num_ops(&self) -> usize {
        self.name.num_ops()
    }

    /// Smallest arity at which a relation appears.
    pub fn min_arity(&self) -> usize {
        self.identities
            .iter()
            .map(Identity::arity)
            .min()
            .unwrap_or(usize::MAX)
    }
}

// Associator (a,b,c) = (ab)c - a(bc) and its permutations, spelled out.
const ASSOC_ABC: &str = "((x1 x2) x3) - (x1 (x2 x3))";

fn build_spec(name: VarietyName) -> VarietySpec {
    use VarietyName::*;
    let identities = match name {
        Com => vec![
            Identity::plain("commutativity", "(x1 x2) - (x2 x1)"),
            Identity::plain("associativity", ASSOC_ABC),
        ],
        As => vec![Identity::plain("associativity", ASSOC_ABC)],
        Alt => vec![
            Identity::plain(
                "left alternative",
                "((x1 x2) x3) - (x1 (x2 x3)) + ((x2 x1) x3) - (x2 (x1 x3))",
            ),
            Identity::plain(
                "right alternative",
                "((x1 x2) x3) - (x1 (x2 x3)) + ((x1 x3) x2) - (x1 (x3 x2))",
            ),
        ],
        Assos => vec![
            Identity::plain(
                "associator symmetric in 1,2",
                "((x1 x2) x3) - (x1 (x2 x3)) - ((x2 x1) x3) + (x2 (x1 x3))",
            ),
            Identity::plain(
                "associator symmetric in 2,3",
                "((x1 x2) x3) - (x1 (x2 x3)) - ((x1 x3) x2) + (x1 (x3 x2))",
            ),
        ],
        BiCom => vec![
            Identity::plain("left commutativity", "(x1 (x2 x3)) - (x2 (x1 x3))"),
            Identity::plain("right commutativity", "((x1 x2) x3) - ((x1 x3) x2)"),
        ],
        Nov => vec![
            Identity::plain("right commutativity", "((x1 x2) x3) - ((x1 x3) x2)"),
            Identity::plain(
                "left symmetry",
                "((x1 x2) x3) - (x1 (x2 x3)) - ((x2 x1) x3) + (x2 (x1 x3))",
            ),
        ],
        Zinb => vec![Identity::plain(
            "zinbiel",
            "((x1 x2) x3) - (x1 (x2 x3)) - (x1 (x3 x2))",
        )],
        DerAlt => vec![
            Identity::di(
                "short",
                "((x1>x2)<x3) - (x1>(x2<x3)) + ((x3>x2)<x1) - (x3>(x2<x1))",
            ),
            Identity::di(
                "long",
                "((x1<x2)>x3) - (x1>(x2>x3)) + ((x1>x3)<x2) - (x1>(x3<x2)) \
                 - (x1<(x2>x3)) + ((x1<x2)<x3) + ((x2>x1)<x3) - (x2>(x1<x3)) \
                 + ((x3<x2)>x1) - (x3>(x2>x1)) + ((x3>x1)<x2) - (x3>(x1<x2)) \
                 - (x3<(x2>x1)) + ((x3<x2)<x1) + ((x2>x3)<x1) - (x2>(x3<x1))",
            ),
        ],
        DerAssos => vec![
            Identity::di(
                "short",
                "((x1>x3)<x2) - (x1>(x3<x2)) - ((x2>x3)<x1) + (x2>(x3<x1))",
            ),
            Identity::di(
                "long",
                "((x1<x3)>x2) - (x1>(x3>x2)) - ((x1>x2)<x3) + (x1>(x2<x3)) \
                 - (x1<(x3>x2)) + ((x1<x3)<x2) - ((x3>x1)<x2) + (x3>(x1<x2)) \
                 - ((x2<x3)>x1) + (x2>(x3>x1)) + ((x2>x1)<x3) - (x2>(x1<x3)) \
                 + (x2<(x3>x1)) - ((x2<x3)<x1) + ((x3>x2)<x1) - (x3>(x2<x1))",
            ),
        ],
        DerBiCom => vec![
            Identity::di("right commutativity of <", "((x1<x2)<x3) - ((x1<x3)<x2)"),
            Identity::di("left commutativity of >", "(x1>(x2>x3)) - (x2>(x1>x3))"),
            Identity::di(
                "mixed right",
                "((x1>x2)>x3) - ((x1>x3)<x2) - ((x1>x3)>x2) + ((x1>x2)<x3)",
            ),
            Identity::di(
                "mixed left",
                "(x1<(x2<x3)) - (x2>(x1<x3)) - (x2<(x1<x3)) + (x1>(x2<x3))",
            ),
        ],
    };
    let normal_form = if name == BiCom {
        NormalFormStrategy::ClosedFormBiCom
    } else {
        NormalFormStrategy::GenericLinear
    };
    VarietySpec {
        name,
        identities,
        normal_form,
    }
}

/// Look up a variety by name, case-insensitively.
pub fn catalog(name: &str) -> Result<VarietySpec> {
    Ok(name.parse::<VarietyName>()?.spec())
}

fn check_disjoint(vars: impl IntoIterator<Item = Vec<u32>>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for vs in vars {
        for v in vs {
            if !seen.insert(v) {
                return Err(Error::VariableClash { var: v });
            }
        }
    }
    Ok(())
}

/// Substitute `args[i-1]` for placeholder `x_i` of a one-operation identity.
pub fn instantiate(identity: &Identity, args: &[Monomial]) -> Result<Expr> {
    let rel = identity.as_plain().ok_or(Error::OpCount {
        variety: identity.label.to_string(),
        expected: 1,
        found: 2,
    })?;
    if args.len() != identity.arity() {
        return Err(Error::ArityMismatch {
            expected: identity.arity(),
            found: args.len(),
        });
    }
    check_disjoint(
        args.iter()
            .map(|a| a.leaves().iter().map(|g| g.var).collect()),
    )?;
    Ok(rel.map_monomials(|m| m.substitute(&|g: Generator| args[g.var as usize - 1].clone())))
}

/// Two-operation counterpart of [`instantiate`].
pub fn instantiate_di(identity: &Identity, args: &[DiMonomial]) -> Result<DiExpr> {
    let rel = identity.as_di().ok_or(Error::OpCount {
        variety: identity.label.to_string(),
        expected: 2,
        found: 1,
    })?;
    if args.len() != identity.arity() {
        return Err(Error::ArityMismatch {
            expected: identity.arity(),
            found: args.len(),
        });
    }
    check_disjoint(args.iter().map(DiMonomial::vars))?;
    Ok(rel.map_monomials(|m| m.substitute(&|v| args[v as usize - 1].clone())))
}

/// Instances of the identities of exactly arity `n` under every permutation
/// of `x1..xn`.
pub(crate) fn identity_instances(spec: &VarietySpec, n: usize) -> Vec<Expr> {
    let mut out = Vec::new();
    for id in spec.identities.iter().filter(|i| i.arity() == n) {
        for p in permutations(n) {
            let args: Vec<Monomial> = p.iter().map(|&v| Monomial::var(v)).collect();
            out.push(instantiate(id, &args).expect("permuted placeholders are disjoint"));
        }
    }
    out
}

pub(crate) fn di_identity_instances(spec: &VarietySpec, n: usize) -> Vec<DiExpr> {
    let mut out = Vec::new();
    for id in spec.identities.iter().filter(|i| i.arity() == n) {
        for p in permutations(n) {
            let args: Vec<DiMonomial> = p.iter().map(|&v| DiMonomial::var(v)).collect();
            out.push(instantiate_di(id, &args).expect("permuted placeholders are disjoint"));
        }
    }
    out
}

fn shift_from(j: u32) -> impl Fn(u32) -> u32 {
    move |v| if v >= j { v + 1 } else { v }
}

/// One layer of closure: from a relation on `x1..x_{n-1}`, make room for a
/// fresh variable `x_j` (every `j`), then graft it onto each leaf on either
/// side and multiply by it on either side.
///
/// The input span is assumed closed under permutations, so shifting labels
/// around every `j` reaches the full symmetric closure.
pub(crate) fn lift_relation(r: &Expr, n: usize) -> Vec<Expr> {
    let mut out = Vec::with_capacity(n * (2 * n));
    for j in 1..=n as u32 {
        let shifted = r.map_monomials(|m| {
            let f = shift_from(j);
            m.relabel(&|g: Generator| g.with_var(f(g.var)))
        });
        let fresh = Monomial::var(j);
        for u in (1..=n as u32).filter(|&u| u != j) {
            for fresh_right in [true, false] {
                out.push(shifted.map_monomials(|m| {
                    m.substitute(&|g: Generator| {
                        if g.var == u {
                            let leaf = Monomial::leaf(g);
                            if fresh_right {
                                Monomial::mul(leaf, fresh.clone())
                            } else {
                                Monomial::mul(fresh.clone(), leaf)
                            }
                        } else {
                            Monomial::leaf(g)
                        }
                    })
                }));
            }
        }
        out.push(shifted.map_monomials(|m| Monomial::mul(m.clone(), fresh.clone())));
        out.push(shifted.map_monomials(|m| Monomial::mul(fresh.clone(), m.clone())));
    }
    out
}

pub(crate) fn lift_di_relation(r: &DiExpr, n: usize) -> Vec<DiExpr> {
    let mut out = Vec::with_capacity(n * (4 * n + 4));
    for j in 1..=n as u32 {
        let shifted = r.relabel(&shift_from(j));
        let fresh = DiMonomial::var(j);
        for op in [Op::Succ, Op::Prec] {
            for u in (1..=n as u32).filter(|&u| u != j) {
                for fresh_right in [true, false] {
                    out.push(shifted.map_monomials(|m| {
                        m.substitute(&|v| {
                            if v == u {
                                let leaf = DiMonomial::var(v);
                                if fresh_right {
                                    DiMonomial::node(op, leaf, fresh.clone())
                                } else {
                                    DiMonomial::node(op, fresh.clone(), leaf)
                                }
                            } else {
                                DiMonomial::var(v)
                            }
                        })
                    }));
                }
            }
            out.push(shifted.map_monomials(|m| DiMonomial::node(op, m.clone(), fresh.clone())));
            out.push(shifted.map_monomials(|m| DiMonomial::node(op, fresh.clone(), m.clone())));
        }
    }
    out
}

/// Replace every leaf `x_v` by `x_v^{(dec[v-1])}`.
pub fn decorate(e: &Expr, dec: &[u32]) -> Expr {
    e.relabel(&|g: Generator| g.with_der(dec[g.var as usize - 1]))
}

// Echelon basis of the span of `gens`, returned as expressions.
fn basis_exprs<T: Ord + Clone + std::hash::Hash>(
    gens: &[crate::LinComb<T>],
    ambient: &[T],
) -> Vec<crate::LinComb<T>> {
    let index: std::collections::HashMap<&T, usize> =
        ambient.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut b = EchelonBuilder::new(ambient.len());
    for g in gens {
        let v = crate::linalg::normalize_sparse(g.iter().map(|(m, c)| (index[m], c.clone())));
        b.insert(&v).expect("vector fits ambient");
    }
    let basis = b.finish(std::sync::Arc::new(ambient.to_vec()));
    basis
        .rows()
        .iter()
        .map(|row| {
            crate::LinComb::from_terms(row.iter().map(|(c, x)| (x.clone(), ambient[*c].clone())))
        })
        .collect()
}

/// A spanning set of the arity-`n` multilinear consequences of a
/// one-operation variety, optionally with every decoration of total weight
/// `w` applied.
///
/// Relations are grown layer by layer from the identities; between layers
/// the span is replaced by an echelon basis so the set stays small. Below
/// the smallest identity arity the result is empty.
pub fn consequences(spec: &VarietySpec, n: usize, w: Option<i64>) -> Result<Vec<Expr>> {
    if spec.num_ops() != 1 {
        return Err(Error::OpCount {
            variety: spec.name.to_string(),
            expected: 1,
            found: spec.num_ops(),
        });
    }
    let undecorated = plain_consequences(spec, n);
    match w {
        None => Ok(undecorated),
        Some(w) => {
            let total = n as i64 + w;
            if total < 0 {
                return Err(crate::TermError::InvalidWeight {
                    arity: n,
                    weight: w,
                }
                .into());
            }
            let decs = compositions(total as u32, n);
            Ok(decs
                .iter()
                .flat_map(|d| undecorated.iter().map(move |e| decorate(e, d)))
                .collect())
        }
    }
}

fn plain_consequences(spec: &VarietySpec, n: usize) -> Vec<Expr> {
    let start = spec.min_arity();
    if n < start {
        return Vec::new();
    }
    let mut rows: Vec<Expr> = Vec::new();
    for k in start..=n {
        let mut gens = identity_instances(spec, k);
        for r in &rows {
            gens.extend(lift_relation(r, k));
        }
        if k == n {
            return gens;
        }
        let ambient = crate::term::enumerate_multilinear(k, -(k as i64)).expect("valid weight");
        rows = basis_exprs(&gens, &ambient);
    }
    unreachable!("loop returns at k == n")
}

/// Spanning set of the arity-`n` consequences of a two-operation variety
/// inside the span of [`crate::di::enumerate_di_monomials`].
pub fn di_consequences(spec: &VarietySpec, n: usize) -> Result<Vec<DiExpr>> {
    if spec.num_ops() != 2 {
        return Err(Error::OpCount {
            variety: spec.name.to_string(),
            expected: 2,
            found: spec.num_ops(),
        });
    }
    let start = spec.min_arity();
    if n < start {
        return Ok(Vec::new());
    }
    let mut rows: Vec<DiExpr> = Vec::new();
    for k in start..=n {
        let mut gens = di_identity_instances(spec, k);
        for r in &rows {
            gens.extend(lift_di_relation(r, k));
        }
        if k == n {
            return Ok(gens);
        }
        let ambient = crate::di::enumerate_di_monomials(k);
        rows = basis_exprs(&gens, &ambient);
    }
    unreachable!("loop returns at k == n")
}

/// Left-child and right-child leaves of a monomial with at least two leaves.
fn bicom_sides(m: &Monomial) -> (Vec<Generator>, Vec<Generator>) {
    fn walk(m: &Monomial, is_left: bool, i: &mut Vec<Generator>, j: &mut Vec<Generator>) {
        match m.children() {
            None => {
                let g = m.as_leaf().expect("leaf");
                if is_left {
                    i.push(g)
                } else {
                    j.push(g)
                }
            }
            Some((l, r)) => {
                walk(l, true, i, j);
                walk(r, false, i, j);
            }
        }
    }
    let (mut i, mut j) = (Vec::new(), Vec::new());
    let (l, r) = m.children().expect("product");
    walk(l, true, &mut i, &mut j);
    walk(r, false, &mut i, &mut j);
    i.sort();
    j.sort();
    (i, j)
}

/// The comb `x_{i1}(x_{i2}(…((x_core x_{j1}) x_{j2})…))` with `i1 < i2 < …`
/// outermost first, `core = max I`, and `j1 < j2 < …` innermost first.
pub fn bicom_comb(left: &[Generator], right: &[Generator]) -> Monomial {
    let mut left = left.to_vec();
    let mut right = right.to_vec();
    left.sort();
    right.sort();
    let core = left.pop().expect("at least one left leaf");
    let mut m = Monomial::leaf(core);
    for g in right {
        m = Monomial::mul(m, Monomial::leaf(g));
    }
    for g in left.into_iter().rev() {
        m = Monomial::mul(Monomial::leaf(g), m);
    }
    m
}

/// Canonical bicommutative form of a monomial.
///
/// In a bicommutative algebra a monomial is determined by which leaves are
/// left children and which are right children, so the comb over those two
/// sorted sets is a normal form.
pub fn bicom_monomial_nf(m: &Monomial) -> Monomial {
    if m.is_leaf() {
        return m.clone();
    }
    let (i, j) = bicom_sides(m);
    bicom_comb(&i, &j)
}

/// Left-child and right-child leaf sets, sorted.
pub fn bicom_classes(m: &Monomial) -> Option<(Vec<Generator>, Vec<Generator>)> {
    (!m.is_leaf()).then(|| bicom_sides(m))
}

pub fn bicom_normal_form(e: &Expr) -> Expr {
    e.map_monomials(bicom_monomial_nf)
}
