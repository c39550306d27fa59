use super::{Generator, Monomial};
use crate::error::TermError;

/// All binary trees with `n` leaves, leaves labelled `x1..xn` left to right.
pub fn tree_shapes(n: usize) -> Vec<Monomial> {
    fn build(lo: u32, n: usize) -> Vec<Monomial> {
        if n == 1 {
            return vec![Monomial::var(lo)];
        }
        let mut out = Vec::new();
        for k in 1..n {
            let lefts = build(lo, k);
            let rights = build(lo + k as u32, n - k);
            for l in &lefts {
                for r in &rights {
                    out.push(Monomial::mul(l.clone(), r.clone()));
                }
            }
        }
        out
    }
    assert!(n >= 1, "trees need at least one leaf");
    build(1, n)
}

/// Permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Weak compositions of `total` into `parts` non-negative parts, in
/// decreasing lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn catalan(n: u64) -> u64 {
    binomial(2 * n, n) / (n + 1)
}

/// `C_{n-1} * n! * binom(2n - 1 + w, n - 1)`, the size of the ambient basis
/// produced by [`enumerate_multilinear`].
pub fn multilinear_count(n: usize, w: i64) -> Option<u64> {
    let total = n as i64 + w;
    if n == 0 || total < 0 {
        return None;
    }
    let n64 = n as u64;
    let fact: u64 = (1..=n64).product();
    Some(catalan(n64 - 1) * fact * binomial(total as u64 + n64 - 1, n64 - 1))
}

/// Every multilinear monomial on `x1..xn` of weight `w`, sorted.
pub fn enumerate_multilinear(n: usize, w: i64) -> Result<Vec<Monomial>, TermError> {
    let total = n as i64 + w;
    if n == 0 || total < 0 {
        return Err(TermError::InvalidWeight {
            arity: n,
            weight: w,
        });
    }
    let shapes = tree_shapes(n);
    let perms = permutations(n);
    let decorations = compositions(total as u32, n);
    let mut out = Vec::with_capacity(shapes.len() * perms.len() * decorations.len());
    for shape in &shapes {
        for perm in &perms {
            for dec in &decorations {
                out.push(shape.relabel(&|g: Generator| {
                    let var = perm[g.var as usize - 1];
                    Generator::new(var, dec[var as usize - 1])
                }));
            }
        }
    }
    out.sort();
    Ok(out)
}
