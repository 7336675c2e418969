//! Exact polynomials over the rationals in the variables `k` and `n3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    K,
    N3,
}

/// Exponents of `k` and `n3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub k: u32,
    pub n3: u32,
}

impl Monomial {
    fn degree(&self) -> u32 {
        self.k + self.n3
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial {
            k: self.k + other.k,
            n3: self.n3 + other.n3,
        }
    }
}

/// Sparse polynomial; zero coefficients are never stored, so structural
/// equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn integer(c: impl Into<BigInt>) -> Self {
        Poly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        let m = match v {
            Var::K => Monomial { k: 1, n3: 0 },
            Var::N3 => Monomial { k: 0, n3: 1 },
        };
        let mut p = Poly::zero();
        p.add_term(m, BigRational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|m| match v {
                Var::K => m.k,
                Var::N3 => m.n3,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut p = Poly::zero();
        for (m, x) in &self.terms {
            p.add_term(*m, x * c);
        }
        p
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Substitutes a value for `k`, leaving a polynomial in `n3`.
    pub fn at_k(&self, k: &BigRational) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..m.k {
                v *= k;
            }
            p.add_term(Monomial { k: 0, n3: m.n3 }, v);
        }
        p
    }

    /// Evaluates at `k` and `n3`.
    pub fn eval(&self, k: &BigRational, n3: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..m.k {
                v *= k;
            }
            for _ in 0..m.n3 {
                v *= n3;
            }
            total += v;
        }
        total
    }

    /// `(a, b)` with `self = a + b*n3`, if the polynomial has that shape.
    pub fn affine_in_n3(&self) -> Option<(BigRational, BigRational)> {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for (m, c) in &self.terms {
            match (m.k, m.n3) {
                (0, 0) => a = c.clone(),
                (0, 1) => b = c.clone(),
                _ => return None,
            }
        }
        Some((a, b))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(*m, c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(*m, -c.clone());
        }
        p
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                p.add_term(ma.times(*mb), ca * cb);
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Terms in decreasing total degree, then decreasing power of `k`; for
/// example `1/2*k^5 - 3*k^4*n3 + 7`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(b.k.cmp(&a.k)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (name, e) in [("k", m.k), ("n3", m.n3)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Poly {
        Poly::var(Var::K)
    }

    #[test]
    fn arithmetic_cancels() {
        let a = &(&k() * &k()) - &Poly::one();
        let b = &(&k() - &Poly::one()) * &(&k() + &Poly::one());
        assert_eq!(a, b);
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn display() {
        let p = &(&k().pow(5).scale(&rational(1, 2)) - &Poly::var(Var::N3).scale(&rational(2, 1))) + &Poly::integer(7);
        assert_eq!(p.to_string(), "1/2*k^5 - 2*n3 + 7");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!((-&k()).to_string(), "-k");
    }

    #[test]
    fn affine_extraction() {
        let p = &(&k() * &k()) + &Poly::var(Var::N3).scale(&rational(-1, 3));
        let q = p.at_k(&rational(3, 1));
        assert_eq!(q.affine_in_n3(), Some((rational(9, 1), rational(-1, 3))));
        assert_eq!(p.affine_in_n3(), None);
        assert_eq!(p.eval(&rational(2, 1), &rational(3, 1)), rational(3, 1));
    }
}
