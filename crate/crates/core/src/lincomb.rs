use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::Rational;

/// A rational linear combination in canonical form: no zero coefficients,
/// iteration in the order of `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<T: Ord> {
    terms: BTreeMap<T, Rational>,
}

impl<T: Ord> Default for LinComb<T> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone> LinComb<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: T) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::one());
        LinComb { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, T)>) -> Self {
        let mut e = Self::zero();
        for (c, m) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: T, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &T> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &T) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn map_monomials<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> LinComb<U> {
        LinComb::from_terms(self.terms.iter().map(|(m, c)| (c.clone(), f(m))))
    }

    /// Linear extension of a monomial-to-combination map.
    pub fn flat_map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> LinComb<U>) -> LinComb<U> {
        let mut out = LinComb::zero();
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }

    pub fn into_terms(self) -> impl Iterator<Item = (T, Rational)> {
        self.terms.into_iter()
    }
}

impl<T: Ord + Clone> From<T> for LinComb<T> {
    fn from(m: T) -> Self {
        LinComb::from_monomial(m)
    }
}

impl<T: Ord + Clone> Add for &LinComb<T> {
    type Output = LinComb<T>;
    fn add(self, rhs: &LinComb<T>) -> LinComb<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<T: Ord + Clone> Sub for &LinComb<T> {
    type Output = LinComb<T>;
    fn sub(self, rhs: &LinComb<T>) -> LinComb<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl<T: Ord + Clone> Add for LinComb<T> {
    type Output = LinComb<T>;
    fn add(self, rhs: LinComb<T>) -> LinComb<T> {
        &self + &rhs
    }
}

impl<T: Ord + Clone> Sub for LinComb<T> {
    type Output = LinComb<T>;
    fn sub(self, rhs: LinComb<T>) -> LinComb<T> {
        &self - &rhs
    }
}

impl<T: Ord + Clone> Neg for &LinComb<T> {
    type Output = LinComb<T>;
    fn neg(self) -> LinComb<T> {
        self.scale(&-Rational::one())
    }
}

impl<T: Ord + Clone> FromIterator<(Rational, T)> for LinComb<T> {
    fn from_iter<I: IntoIterator<Item = (Rational, T)>>(iter: I) -> Self {
        LinComb::from_terms(iter)
    }
}

// Signed sum `t1 - 2*t2 + 1/3*t3`, `0` when empty.
impl<T: Ord + fmt::Display> fmt::Display for LinComb<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (i == 0, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
