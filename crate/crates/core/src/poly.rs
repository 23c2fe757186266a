//! Sparse multivariate polynomials over an exact field.
//!
//! A [`MultiPoly`] stores its nonzero terms sorted in decreasing graded
//! reverse lexicographic order; every constructor normalizes to that form,
//! so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;

pub type Exponents = SmallVec<[u16; 12]>;

/// A power product `X^e`, with its total degree cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exponents,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: impl Into<Exponents>) -> Self {
        let exps = exps.into();
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, deg }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            deg: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            deg: other.deg - self.deg,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect::<Exponents>(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` set when variable `i` occurs (for `i < 64`).
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |m, (i, _)| m | (1u64 << (i % 64)))
    }

    /// Same monomial in a ring with `extra` more trailing variables.
    pub fn extended(&self, extra: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.extend(std::iter::repeat(0).take(extra));
        Monomial {
            exps,
            deg: self.deg,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    GradedReverseLex,
    Lex,
}

/// A monomial order, optionally over a permutation of the variables
/// (`permutation[0]` is the most significant variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub permutation: Option<Arc<[usize]>>,
}

impl MonomialOrder {
    pub const GREVLEX: MonomialOrder = MonomialOrder {
        kind: OrderKind::GradedReverseLex,
        permutation: None,
    };
    pub const LEX: MonomialOrder = MonomialOrder {
        kind: OrderKind::Lex,
        permutation: None,
    };

    pub fn with_permutation(kind: OrderKind, permutation: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; permutation.len()];
        for &p in &permutation {
            if p >= seen.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Invalid(format!("{permutation:?} is not a permutation")));
            }
        }
        Ok(MonomialOrder {
            kind,
            permutation: Some(permutation.into()),
        })
    }

    #[inline]
    fn var_at(&self, k: usize) -> usize {
        match &self.permutation {
            Some(p) => p[k],
            None => k,
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let n = a.exps.len();
        match self.kind {
            OrderKind::GradedReverseLex => {
                match a.deg.cmp(&b.deg) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for k in (0..n).rev() {
                    let v = self.var_at(k);
                    match a.exps[v].cmp(&b.exps[v]) {
                        Ordering::Equal => {}
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
            OrderKind::Lex => {
                for k in 0..n {
                    let v = self.var_at(k);
                    match a.exps[v].cmp(&b.exps[v]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::GREVLEX
    }
}

/// Variable names plus the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring<F: Field> {
    vars: Vec<String>,
    field: F,
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(field: F, vars: &[S]) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            let valid = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Invalid(format!("invalid variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v:?}")));
            }
        }
        Ok(Arc::new(Ring { vars, field }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// A variable name not yet used in this ring, derived from `stem`.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.var_index(stem).is_none() {
            return stem.to_string();
        }
        (1..)
            .map(|k| format!("{stem}{k}"))
            .find(|c| self.var_index(c).is_none())
            .expect("unbounded search")
    }

    /// This ring with one extra trailing variable.
    pub fn extend(&self, name: &str) -> Result<Arc<Self>> {
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        Ring::new(self.field.clone(), &vars)
    }
}

pub fn same_ring<F: Field>(a: &Arc<Ring<F>>, b: &Arc<Ring<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A polynomial in `ring`, terms sorted by decreasing grevlex order.
#[derive(Clone)]
pub struct MultiPoly<F: Field> {
    ring: Arc<Ring<F>>,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for MultiPoly<F> {}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring<F>>, c: F::Elem) -> Self {
        let terms = if ring.field.is_zero(&c) {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.nvars()), c)]
        };
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn one(ring: &Arc<Ring<F>>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<Ring<F>>, i: usize) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i), ring.field.one())],
        }
    }

    pub fn monomial(ring: &Arc<Ring<F>>, m: Monomial, c: F::Elem) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Linear form `Σ coeffs[i]·X_i + constant`.
    pub fn linear(ring: &Arc<Ring<F>>, coeffs: &[F::Elem], constant: F::Elem) -> Self {
        let n = ring.nvars();
        let mut terms: Vec<_> = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(n, i), c.clone()))
            .collect();
        terms.push((Monomial::one(n), constant));
        Self::from_terms(ring, terms)
    }

    /// Builds a canonical polynomial: combines like terms, drops zeros, sorts.
    pub fn from_terms(ring: &Arc<Ring<F>>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        let field = &ring.field;
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(e) => *e = field.add(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring<F>>, acc: HashMap<Monomial, F::Elem>) -> Self {
        let field = &ring.field;
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_by(|a, b| MonomialOrder::GREVLEX.cmp(&b.0, &a.0));
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Terms already sorted decreasingly in grevlex with nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Arc<Ring<F>>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| MonomialOrder::GREVLEX.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F::Elem)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Coefficient of the constant term.
    pub fn constant_term(&self) -> F::Elem {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.field().zero(),
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .binary_search_by(|(t, _)| MonomialOrder::GREVLEX.cmp(m, t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field().zero())
    }

    /// Total degree; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exps[i] as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, F::Elem)> {
        self.terms.first()
    }

    /// Linear coefficients `(a_1..a_n, a_0)` when the polynomial has degree ≤ 1.
    pub fn as_linear(&self) -> Option<(Vec<F::Elem>, F::Elem)> {
        if self.total_degree() > 1 {
            return None;
        }
        let n = self.ring.nvars();
        let coeffs = (0..n)
            .map(|i| self.coefficient(&Monomial::var(n, i)))
            .collect();
        Some((coeffs, self.constant_term()))
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomials over different rings"
        );
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(a, c)))
                .collect(),
        }
    }

    /// Multiplies by the term `c·m`.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), field.mul(a, c)))
                .collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field().inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        self.check_ring(other);
        let field = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let b_coef = |c: &F::Elem| {
            if negate_other {
                field.neg(c)
            } else {
                c.clone()
            }
        };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match MonomialOrder::GREVLEX.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), b_coef(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        field.sub(ca, cb)
                    } else {
                        field.add(ca, cb)
                    };
                    if !field.is_zero(&c) {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), b_coef(c))));
        MultiPoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        let field = self.field();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let field = self.field();
        let mut acc: HashMap<Monomial, F::Elem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = field.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(e) => *e = field.add(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(&self.ring, acc)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.ring.nvars(), "variable index out of range");
        let field = self.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[var] > 0)
            .map(|(m, c)| {
                let e = m.exps[var];
                let mut exps = m.exps.clone();
                exps[var] -= 1;
                (
                    Monomial {
                        exps,
                        deg: m.deg - 1,
                    },
                    field.mul(c, &field.from_i64(e as i64)),
                )
            })
            .collect();
        // Decrementing one fixed exponent preserves the relative grevlex
        // order of the surviving terms; only vanishing coefficients
        // (characteristic p) need filtering.
        let terms: Vec<_> = terms_filter_zero(field, terms);
        MultiPoly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.ring.nvars())
            .map(|i| self.partial_derivative(i))
            .collect()
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.ring.nvars(), "point has wrong length");
        let field = self.field();
        let mut powers: Vec<Vec<F::Elem>> = point.iter().map(|p| vec![field.one(), p.clone()]).collect();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = field.mul(table.last().unwrap(), &point[i]);
                    table.push(next);
                }
                t = field.mul(&t, &table[e as usize]);
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Replaces every variable `X_i` by `values[i]` (all over one target ring).
    pub fn substitute(&self, values: &[MultiPoly<F>]) -> Result<MultiPoly<F>> {
        if values.len() != self.ring.nvars() {
            return Err(Error::RingMismatch(format!(
                "{} substitutions for {} variables",
                values.len(),
                self.ring.nvars()
            )));
        }
        let target = match values.first() {
            Some(v) => v.ring.clone(),
            None => {
                return Err(Error::RingMismatch(
                    "cannot substitute into a ring without variables".into(),
                ))
            }
        };
        if let Some(v) = values.iter().find(|v| !same_ring(&v.ring, &target)) {
            return Err(Error::RingMismatch(format!(
                "substituted polynomial {v} lives in a different ring"
            )));
        }
        if target.field != self.ring.field {
            return Err(Error::RingMismatch("coefficient fields differ".into()));
        }
        let mut cache: Vec<Vec<MultiPoly<F>>> = values
            .iter()
            .map(|v| vec![MultiPoly::one(&target), v.clone()])
            .collect();
        let mut acc = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut cache[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul(&values[i]);
                    table.push(next);
                }
                t = t.mul(&table[e as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitutes only the listed variables, keeping the ring.
    pub fn substitute_vars(&self, assignments: &[(usize, MultiPoly<F>)]) -> Result<MultiPoly<F>> {
        let mut values: Vec<MultiPoly<F>> = (0..self.ring.nvars())
            .map(|i| MultiPoly::var(&self.ring, i))
            .collect();
        for (i, p) in assignments {
            if *i >= values.len() {
                return Err(Error::Dimension(format!("variable index {i} out of range")));
            }
            values[*i] = p.clone();
        }
        self.substitute(&values)
    }

    /// Same polynomial viewed in `ring`, which must extend this ring with
    /// trailing variables over the same field.
    pub fn embed(&self, ring: &Arc<Ring<F>>) -> Result<MultiPoly<F>> {
        let n = self.ring.nvars();
        if ring.nvars() < n || ring.vars[..n] != self.ring.vars[..] || ring.field != self.ring.field {
            return Err(Error::RingMismatch("target ring does not extend the source".into()));
        }
        let extra = ring.nvars() - n;
        Ok(MultiPoly {
            ring: ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extended(extra), c.clone()))
                .collect(),
        })
    }

    /// Homogeneous components indexed by degree.
    pub fn homogeneous_parts(&self) -> Vec<MultiPoly<F>> {
        let d = self.total_degree() as usize;
        let mut parts: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            parts[m.degree() as usize].push((m.clone(), c.clone()));
        }
        parts
            .into_iter()
            .map(|terms| MultiPoly {
                ring: self.ring.clone(),
                terms,
            })
            .collect()
    }
}

fn terms_filter_zero<F: Field>(field: &F, terms: Vec<(Monomial, F::Elem)>) -> Vec<(Monomial, F::Elem)> {
    terms.into_iter().filter(|(_, c)| !field.is_zero(c)).collect()
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut coef = field.format(c);
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if coef != "1" || m.is_one() {
                factors.push(coef);
            }
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    e => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<F: Field> Add for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: Self) -> MultiPoly<F> {
        MultiPoly::add(self, rhs)
    }
}

impl<F: Field> Sub for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: Self) -> MultiPoly<F> {
        MultiPoly::sub(self, rhs)
    }
}

impl<F: Field> Mul for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: Self) -> MultiPoly<F> {
        MultiPoly::mul(self, rhs)
    }
}

impl<F: Field> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        MultiPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::parse::parse_poly;

    fn qring(vars: &[&str]) -> Arc<Ring<Rationals>> {
        Ring::new(Rationals, vars).unwrap()
    }

    #[test]
    fn derivatives() {
        let r = qring(&["x", "y"]);
        let p = parse_poly("x^2+y^2-1", &r).unwrap();
        assert_eq!(p.partial_derivative(0), parse_poly("2*x", &r).unwrap());
        let q = parse_poly("x^3+2*y^3", &r).unwrap();
        assert_eq!(q.partial_derivative(1), parse_poly("6*y^2", &r).unwrap());
        assert!(parse_poly("5", &r).unwrap().partial_derivative(0).is_zero());
    }

    #[test]
    fn evaluation() {
        let r = qring(&["x", "y"]);
        let f = Rationals;
        let p = parse_poly("x^2+y^2-1", &r).unwrap();
        assert_eq!(p.evaluate(&[f.from_i64(1), f.from_i64(0)]), f.zero());
        let q = parse_poly("x^3+2*y^3", &r).unwrap();
        assert_eq!(q.evaluate(&[f.from_i64(0), f.from_i64(1)]), f.from_i64(2));
        assert_eq!(q.evaluate(&[f.from_i64(1), f.from_i64(1)]), f.from_i64(3));
    }

    #[test]
    fn substitution() {
        let r = qring(&["x", "y"]);
        let t = qring(&["T"]);
        let tt = MultiPoly::var(&t, 0);
        let p = parse_poly("x^2+y^2-1", &r).unwrap();
        let out = p.substitute(&[tt.clone(), MultiPoly::zero(&t)]).unwrap();
        assert_eq!(out, parse_poly("T^2-1", &t).unwrap());
        let xy = parse_poly("x*y", &r).unwrap();
        let out = xy.substitute(&[tt.clone(), tt.mul(&tt)]).unwrap();
        assert_eq!(out, parse_poly("T^3", &t).unwrap());
        let x = parse_poly("x", &r).unwrap();
        let three = MultiPoly::constant(&t, Rationals.from_i64(3));
        assert_eq!(x.substitute(&[three.clone(), tt.clone()]).unwrap(), three);

        let other = Ring::new(Rationals, &["S"]).unwrap();
        let s = MultiPoly::var(&other, 0);
        assert!(matches!(
            p.substitute(&[tt, s]),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn grevlex_order() {
        let o = MonomialOrder::GREVLEX;
        // x*z < y^2 in grevlex on x > y > z
        let xz = Monomial::new([1u16, 0, 1].as_slice().iter().copied().collect::<Exponents>());
        let yy = Monomial::new([0u16, 2, 0].as_slice().iter().copied().collect::<Exponents>());
        assert_eq!(o.cmp(&xz, &yy), Ordering::Less);
        assert_eq!(MonomialOrder::LEX.cmp(&xz, &yy), Ordering::Greater);
        let rev = MonomialOrder::with_permutation(OrderKind::Lex, vec![2, 1, 0]).unwrap();
        assert_eq!(rev.cmp(&xz, &yy), Ordering::Greater);
        assert!(MonomialOrder::with_permutation(OrderKind::Lex, vec![0, 0]).is_err());
    }

    #[test]
    fn prime_field_display_is_symmetric() {
        let r = Ring::new(PrimeField::new(101).unwrap(), &["x"]).unwrap();
        let p = parse_poly("x - 1", &r).unwrap();
        assert_eq!(p.to_string(), "x - 1");
    }

    #[test]
    fn linear_forms() {
        let r = qring(&["x", "y"]);
        let q = Rationals;
        let l = MultiPoly::linear(&r, &[q.from_i64(1), q.from_i64(2)], q.from_i64(-3));
        assert_eq!(l, parse_poly("x+2*y-3", &r).unwrap());
        let (c, k) = l.as_linear().unwrap();
        assert_eq!(c, vec![q.from_i64(1), q.from_i64(2)]);
        assert_eq!(k, q.from_i64(-3));
    }
}
