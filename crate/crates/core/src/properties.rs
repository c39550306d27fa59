//! Algebraic sanity properties, checked exhaustively at small arity and on
//! seeded random samples at arity 4.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::di::{enumerate_di_monomials, tau, tau_monomial, DiExpr, DiMonomial};
use crate::linalg::{echelonize, SparseVec};
use crate::term::{enumerate_multilinear, permutations, tree_shapes, Expr, Generator, Monomial};
use crate::variety::{bicom_normal_form, catalog, consequences};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub exhaustive_cases: usize,
    pub random_cases: usize,
    pub failures: usize,
}

impl PropertyOutcome {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

pub const DEFAULT_SEED: u64 = 0x6f70_6368;
pub const RANDOM_CASES: usize = 1000;

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Every multilinear monomial with arity `1..=3` and derivation orders summing
/// to at most 3.
fn small_monomials() -> Vec<Monomial> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        for total in 0..=3i64 {
            out.extend(enumerate_multilinear(n, total - n as i64).expect("valid weight"));
        }
    }
    out
}

fn random_monomial(rng: &mut ChaCha8Rng, n: usize) -> Monomial {
    let shapes = tree_shapes(n);
    let shape = shapes.choose(rng).expect("shapes").clone();
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    perm.shuffle(rng);
    let ders: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    shape.relabel(&|g: Generator| {
        let v = perm[g.var as usize - 1];
        Generator::new(v, ders[v as usize - 1])
    })
}

fn outcome(
    name: &'static str,
    exhaustive: &[bool],
    random: impl Iterator<Item = bool>,
) -> PropertyOutcome {
    let random: Vec<bool> = random.collect();
    PropertyOutcome {
        name,
        exhaustive_cases: exhaustive.len(),
        random_cases: random.len(),
        failures: exhaustive
            .iter()
            .chain(random.iter())
            .filter(|ok| !**ok)
            .count(),
    }
}

fn leaf_weight_sum(m: &Monomial) -> i64 {
    m.leaves().iter().map(|g| g.der as i64 - 1).sum()
}

fn weight_additive(m: &Monomial) -> bool {
    match m.children() {
        None => Expr::from_monomial(m.clone()).weight() == Ok(leaf_weight_sum(m)),
        Some((l, r)) => {
            let (u, v) = (
                Expr::from_monomial(l.clone()),
                Expr::from_monomial(r.clone()),
            );
            match (u.weight(), v.weight(), u.product(&v).weight()) {
                (Ok(a), Ok(b), Ok(c)) => c == a + b,
                _ => false,
            }
        }
    }
}

fn leibniz(m: &Monomial) -> bool {
    let Some((l, r)) = m.children() else {
        return true;
    };
    let (u, v) = (
        Expr::from_monomial(l.clone()),
        Expr::from_monomial(r.clone()),
    );
    let (Ok(du), Ok(dv), Ok(duv)) = (u.derive(), v.derive(), u.product(&v).derive()) else {
        return false;
    };
    duv == &du.product(&v) + &u.product(&dv)
}

fn tau_weight(t: &DiMonomial) -> bool {
    let n = t.arity() as u32;
    tau_monomial(t)
        .monomials()
        .all(|m| m.weight() == -1 && m.der_total() == n - 1)
}

fn tau_equivariant(t: &DiMonomial, p: &[u32]) -> bool {
    let relabelled = DiExpr::from_monomial(t.relabel(&|v| p[v as usize - 1]));
    let expanded = tau_monomial(t).relabel(&|g: Generator| g.with_var(p[g.var as usize - 1]));
    tau(&relabelled) == expanded
}

fn nf_idempotent(e: &Expr) -> bool {
    let once = bicom_normal_form(e);
    bicom_normal_form(&once) == once
}

fn vectors_of(gens: &[Expr], ambient: &[Monomial]) -> Vec<SparseVec> {
    let index: std::collections::HashMap<&Monomial, usize> =
        ambient.iter().enumerate().map(|(i, m)| (m, i)).collect();
    gens.iter()
        .map(|g| crate::linalg::normalize_sparse(g.iter().map(|(m, c)| (index[m], c.clone()))))
        .collect()
}

fn same_span(a: &[SparseVec], b: &[SparseVec], ambient: &std::sync::Arc<Vec<Monomial>>) -> bool {
    let (x, y) = (
        echelonize(a, ambient.clone()).expect("fits"),
        echelonize(b, ambient.clone()).expect("fits"),
    );
    x.rank() == y.rank() && x.rows() == y.rows()
}

/// Run every suite. Deterministic for a fixed seed.
pub fn run_all(seed: u64) -> Vec<PropertyOutcome> {
    let small = small_monomials();
    let mut out = Vec::new();

    let mut r = rng(seed, 1);
    let big: Vec<Monomial> = (0..RANDOM_CASES)
        .map(|_| random_monomial(&mut r, 4))
        .collect();
    let ex: Vec<bool> = small.iter().map(weight_additive).collect();
    out.push(outcome(
        "weight additivity",
        &ex,
        big.iter().map(weight_additive),
    ));
    let ex: Vec<bool> = small.iter().map(leibniz).collect();
    out.push(outcome("Leibniz rule", &ex, big.iter().map(leibniz)));

    let di_small: Vec<DiMonomial> = (1..=3).flat_map(enumerate_di_monomials).collect();
    let di4 = enumerate_di_monomials(4);
    let mut r = rng(seed, 2);
    let di_big: Vec<DiMonomial> = (0..RANDOM_CASES)
        .map(|_| di4.choose(&mut r).expect("nonempty").clone())
        .collect();
    let ex: Vec<bool> = di_small.iter().map(tau_weight).collect();
    out.push(outcome(
        "tau lands in weight -1",
        &ex,
        di_big.iter().map(tau_weight),
    ));

    let mut ex = Vec::new();
    for t in &di_small {
        for p in permutations(t.arity()) {
            ex.push(tau_equivariant(t, &p));
        }
    }
    let mut r = rng(seed, 3);
    let random: Vec<bool> = di_big
        .iter()
        .map(|t| {
            let mut p: Vec<u32> = (1..=4).collect();
            p.shuffle(&mut r);
            tau_equivariant(t, &p)
        })
        .collect();
    out.push(outcome("tau equivariance", &ex, random.into_iter()));

    let ex: Vec<bool> = (1..=3)
        .flat_map(|n| enumerate_multilinear(n, -1).expect("valid"))
        .map(|m| nf_idempotent(&Expr::from_monomial(m)))
        .collect();
    let amb4 = enumerate_multilinear(4, -1).expect("valid");
    let mut r = rng(seed, 4);
    let random: Vec<bool> = (0..RANDOM_CASES)
        .map(|_| {
            let e = Expr::from_terms((0..3).map(|_| {
                (
                    Rational::from_integer(r.gen_range(-5i64..=5).into()),
                    amb4.choose(&mut r).expect("nonempty").clone(),
                )
            }));
            nf_idempotent(&e)
        })
        .collect();
    out.push(outcome("normal form idempotence", &ex, random.into_iter()));

    let mut ex = Vec::new();
    for name in ["bicom", "alt", "assos", "as", "com", "zinb"] {
        let spec = catalog(name).expect("known");
        for n in 1..=3usize {
            let ambient = std::sync::Arc::new(enumerate_multilinear(n, -(n as i64)).unwrap());
            let vecs = vectors_of(&consequences(&spec, n, None).unwrap(), &ambient);
            let mut rev = vecs.clone();
            rev.reverse();
            ex.push(same_span(&vecs, &rev, &ambient));
            for k in 1..vecs.len() {
                let mut rot = vecs.clone();
                rot.rotate_left(k);
                ex.push(same_span(&vecs, &rot, &ambient));
            }
        }
    }
    let mut r = rng(seed, 5);
    let spec4 = catalog("alt").expect("known");
    let ambient4 = std::sync::Arc::new(enumerate_multilinear(4, -4).unwrap());
    let gens4 = vectors_of(&consequences(&spec4, 4, None).unwrap(), &ambient4);
    let random: Vec<bool> = (0..RANDOM_CASES)
        .map(|_| {
            let mut pick: Vec<SparseVec> = gens4.choose_multiple(&mut r, 24).cloned().collect();
            let before = pick.clone();
            pick.shuffle(&mut r);
            same_span(&before, &pick, &ambient4)
        })
        .collect();
    out.push(outcome("rank shuffle invariance", &ex, random.into_iter()));
    out
}
