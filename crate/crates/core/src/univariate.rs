//! Dense univariate polynomials in `T`, coefficients in ascending degree.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, MultiPoly, Ring};

#[derive(Clone)]
pub struct UniPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for UniPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for UniPoly<F> {}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = Ring::new(self.field.clone(), &["T"]).map_err(|_| fmt::Error)?;
        write!(f, "{}", self.to_multi(&ring, 0))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &F) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// The polynomial `T`.
    pub fn t(field: &F) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn from_i64s(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coefficient(&self, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::new(
            &self.field,
            self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..n)
                .map(|k| f.add(&self.coefficient(k), &other.coefficient(k)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..n)
                .map(|k| f.sub(&self.coefficient(k), &other.coefficient(k)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            &self.field,
            self.coeffs.iter().map(|a| self.field.neg(a)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lc = f.inv(divisor.leading_coefficient().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(&rem[k], &inv_lc);
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, b));
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s·self ≡ g (mod m)`.
    pub fn gcd_cofactor(&self, m: &Self) -> (Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.rem(m), m.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        // invariant: r_i ≡ s_i·self (mod m)
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        match r0.leading_coefficient() {
            None => (r0, s0),
            Some(lc) => {
                let inv = f.inv(lc).unwrap();
                (r0.scale(&inv), s0.scale(&inv).rem(m))
            }
        }
    }

    /// Inverse modulo `m`, when `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (g, s) = self.gcd_cofactor(m);
        (g.degree() == Some(0)).then_some(s)
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| f.mul(c, &f.from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn evaluate(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self(inner)` reduced modulo `m`.
    pub fn compose_mod(&self, inner: &Self, m: &Self) -> Self {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Self::zero(f), |acc, c| {
            acc.mul(inner).add(&Self::constant(f, c.clone())).rem(m)
        })
    }

    /// Product of the distinct monic irreducible factors: `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// As a polynomial in variable `var` of `ring`.
    pub fn to_multi(&self, ring: &Arc<Ring<F>>, var: usize) -> MultiPoly<F> {
        let n = ring.nvars();
        MultiPoly::from_terms(
            ring,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let mut m = vec![0u16; n];
                    m[var] = k as u16;
                    (Monomial::new(m), c.clone())
                })
                .collect(),
        )
    }

    /// Reads a polynomial that only involves variable `var`.
    pub fn from_multi(p: &MultiPoly<F>, var: usize) -> Result<Self> {
        let f = p.field();
        let mut coeffs = vec![f.zero(); p.degree_in(var) as usize + 1];
        for (m, c) in p.terms() {
            let others = m
                .exponents()
                .iter()
                .enumerate()
                .any(|(i, &e)| i != var && e > 0);
            if others {
                return Err(Error::Invalid(format!("{p} is not univariate")));
            }
            coeffs[m.exponents()[var] as usize] = c.clone();
        }
        Ok(Self::new(f, coeffs))
    }
}

/// Evaluates a multivariate polynomial at univariate arguments modulo `m`.
pub fn eval_mod<F: Field>(p: &MultiPoly<F>, args: &[UniPoly<F>], m: &UniPoly<F>) -> UniPoly<F> {
    let f = p.field();
    let mut powers: Vec<Vec<UniPoly<F>>> = args
        .iter()
        .map(|a| vec![UniPoly::one(f), a.rem(m)])
        .collect();
    let mut acc = UniPoly::zero(f);
    for (mono, c) in p.terms() {
        let mut t = UniPoly::constant(f, c.clone());
        for (i, &e) in mono.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let table = &mut powers[i];
            while table.len() <= e as usize {
                let next = table.last().unwrap().mul_mod(&table[1], m);
                table.push(next);
            }
            t = t.mul_mod(&table[e as usize], m);
        }
        acc = acc.add(&t);
    }
    acc.rem(m)
}

/// `den^{deg p}·p(nums/den)` modulo `m`, i.e. evaluation at points given
/// with a common denominator, without dividing.
pub fn eval_cleared_mod<F: Field>(
    p: &MultiPoly<F>,
    nums: &[UniPoly<F>],
    den: &UniPoly<F>,
    m: &UniPoly<F>,
) -> UniPoly<F> {
    let f = p.field();
    let parts = p.homogeneous_parts();
    let top = parts.len().saturating_sub(1);
    let mut den_pows = vec![UniPoly::one(f)];
    for _ in 0..top {
        let next = den_pows.last().unwrap().mul_mod(den, m);
        den_pows.push(next);
    }
    parts
        .iter()
        .enumerate()
        .filter(|(_, h)| !h.is_zero())
        .fold(UniPoly::zero(f), |acc, (k, h)| {
            acc.add(&eval_mod(h, nums, m).mul_mod(&den_pows[top - k], m))
        })
        .rem(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn division_and_gcd() {
        let q = Rationals;
        let a = UniPoly::from_i64s(&q, &[-1, 0, 1]); // T^2 - 1
        let b = UniPoly::from_i64s(&q, &[1, 1]); // T + 1
        let (quo, rem) = a.div_rem(&b);
        assert_eq!(quo, UniPoly::from_i64s(&q, &[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(a.gcd(&b), b);
        let c = UniPoly::from_i64s(&q, &[3, 0, 1]);
        assert_eq!(a.gcd(&c).degree(), Some(0));
    }

    #[test]
    fn squarefree() {
        let q = Rationals;
        // (T-1)^2 (T+2)
        let p = UniPoly::from_i64s(&q, &[2, -3, 0, 1]);
        assert!(!p.is_squarefree());
        let s = p.squarefree_part();
        assert_eq!(s, UniPoly::from_i64s(&q, &[-2, 1, 1]));
        assert!(s.is_squarefree());
        assert!(!UniPoly::from_i64s(&q, &[0, 0, 1]).is_squarefree());
    }

    #[test]
    fn inverse_mod() {
        let f = PrimeField::new(101).unwrap();
        let m = UniPoly::from_i64s(&f, &[-1, 0, 1]);
        let t2 = UniPoly::from_i64s(&f, &[0, 2]);
        let inv = t2.inverse_mod(&m).unwrap();
        assert_eq!(inv.mul_mod(&t2, &m), UniPoly::one(&f));
        assert!(UniPoly::from_i64s(&f, &[1, 1]).inverse_mod(&m).is_none());
    }

    #[test]
    fn compose() {
        let q = Rationals;
        let m = UniPoly::from_i64s(&q, &[-1, 0, 1]);
        let cube = UniPoly::from_i64s(&q, &[0, 0, 0, 2]);
        let t = UniPoly::t(&q);
        assert_eq!(cube.compose_mod(&t, &m), UniPoly::from_i64s(&q, &[0, 2]));
    }
}
