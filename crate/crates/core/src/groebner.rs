//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller criteria, plus the zero-dimensional toolkit built on a
//! reduced basis: standard monomials, dimension counts, multiplication
//! matrices.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::FieldMatrix;
use crate::poly::{Monomial, MonomialOrder, MultiPoly, Ring};

type Terms<F> = Vec<(Monomial, <F as Field>::Elem)>;

/// Dimension of the quotient ring `K[X]/I` as a vector space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Finite(usize),
    Infinite,
}

impl QuotientDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            QuotientDim::Finite(d) => Some(d),
            QuotientDim::Infinite => None,
        }
    }
}

/// Counters collected while running Buchberger's algorithm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub pairs_pruned: usize,
}

/// A reduced Gröbner basis: monic, auto-reduced, sorted by increasing
/// leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    ring: Arc<Ring<F>>,
    order: MonomialOrder,
    // terms sorted decreasingly in `order`
    polys: Vec<Terms<F>>,
    stats: GbStats,
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger<F: Field>(gens: &[MultiPoly<F>], order: &MonomialOrder) -> Result<GroebnerBasis<F>> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Invalid("Gröbner basis of an empty generator list".into()))?;
    GroebnerBasis::compute(first.ring(), gens, order)
}

impl<F: Field> GroebnerBasis<F> {
    pub fn compute(ring: &Arc<Ring<F>>, gens: &[MultiPoly<F>], order: &MonomialOrder) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| !crate::poly::same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch(format!("generator {g} is over another ring")));
        }
        let mut engine = Engine::new(ring, order);
        let input: Vec<Terms<F>> = gens.iter().map(|g| engine.import(g)).collect();
        engine.add_generators(input);
        Ok(engine.finish())
    }

    /// Basis of `self + ⟨extra⟩`, reusing the fact that `self` is already a
    /// Gröbner basis (no pairs among its elements are formed).
    pub fn extend(&self, extra: &[MultiPoly<F>]) -> Result<Self> {
        if let Some(g) = extra.iter().find(|g| !crate::poly::same_ring(g.ring(), &self.ring)) {
            return Err(Error::RingMismatch(format!("generator {g} is over another ring")));
        }
        let mut engine = Engine::new(&self.ring, &self.order);
        engine.seed_basis(self.polys.clone());
        let input: Vec<Terms<F>> = extra
            .iter()
            .map(|g| {
                let t = engine.import(g);
                engine.reduce_full(t)
            })
            .collect();
        engine.add_generators(input);
        let mut out = engine.finish();
        out.stats.pairs_reduced += self.stats.pairs_reduced;
        Ok(out)
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn stats(&self) -> GbStats {
        self.stats
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn generators(&self) -> Vec<MultiPoly<F>> {
        self.polys
            .iter()
            .map(|t| self.export(t.clone()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|t| t[0].0.clone()).collect()
    }

    /// True for the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.polys.first().is_some_and(|t| t[0].0.is_one())
    }

    pub fn normal_form(&self, p: &MultiPoly<F>) -> MultiPoly<F> {
        let engine = Engine::from_basis(self);
        let t = engine.import(p);
        let r = engine.reduce_full(t);
        self.export(r)
    }

    fn export(&self, t: Terms<F>) -> MultiPoly<F> {
        if self.order == MonomialOrder::GREVLEX {
            MultiPoly::from_sorted_terms(&self.ring, t)
        } else {
            MultiPoly::from_terms(&self.ring, t)
        }
    }

    pub fn contains(&self, p: &MultiPoly<F>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Standard monomials in increasing order, or `None` when infinitely many.
    pub fn quotient_basis(&self) -> Option<Vec<Monomial>> {
        let n = self.ring.nvars();
        let lms = self.leading_monomials();
        if lms.iter().any(|m| m.is_one()) {
            return Some(Vec::new());
        }
        // each variable needs a pure power among the leading monomials
        let mut bound = vec![u16::MAX; n];
        for m in &lms {
            let support: Vec<usize> = (0..n).filter(|&i| m.exponents()[i] > 0).collect();
            if support.len() == 1 {
                let i = support[0];
                bound[i] = bound[i].min(m.exponents()[i]);
            }
        }
        if bound.iter().any(|&b| b == u16::MAX) {
            return None;
        }
        let mut out = Vec::new();
        let mut stack = vec![Monomial::one(n)];
        let mut seen: HashSet<Monomial> = HashSet::new();
        seen.insert(Monomial::one(n));
        while let Some(m) = stack.pop() {
            out.push(m.clone());
            for i in 0..n {
                let next = m.mul(&Monomial::var(n, i));
                if next.exponents()[i] >= bound[i] || seen.contains(&next) {
                    continue;
                }
                if lms.iter().any(|l| l.divides(&next)) {
                    continue;
                }
                seen.insert(next.clone());
                stack.push(next);
            }
        }
        out.sort_by(|a, b| self.order.cmp(a, b));
        Some(out)
    }

    pub fn quotient_dimension(&self) -> QuotientDim {
        match self.quotient_basis() {
            Some(b) => QuotientDim::Finite(b.len()),
            None => QuotientDim::Infinite,
        }
    }

    /// Krull dimension of `K[X]/I` read off the leading monomials: the size
    /// of the largest variable set containing the support of no leading
    /// monomial. `-1` for the unit ideal.
    pub fn affine_dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let n = self.ring.nvars();
        assert!(n < 64, "too many variables for subset enumeration");
        let supports: Vec<u64> = self.polys.iter().map(|t| t[0].0.support_mask()).collect();
        let mut best = 0;
        for s in 0u64..(1u64 << n) {
            let size = s.count_ones();
            if size > best && supports.iter().all(|&m| m & !s != 0) {
                best = size;
            }
        }
        best as i64
    }

    /// Matrices of multiplication by each variable in the quotient basis;
    /// column `j` holds the coordinates of `X_i · b_j`.
    pub fn variable_matrices(&self) -> Result<(Vec<Monomial>, Vec<FieldMatrix<F>>)> {
        let basis = self.quotient_basis().ok_or(Error::NotFinite)?;
        let field = self.ring.field();
        let n = self.ring.nvars();
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let engine = Engine::from_basis(self);
        let mut mats = Vec::with_capacity(n);
        for v in 0..n {
            let x = Monomial::var(n, v);
            let mut m = FieldMatrix::zeros(field, basis.len(), basis.len());
            for (j, b) in basis.iter().enumerate() {
                let prod = b.mul(&x);
                if let Some(&i) = index.get(&prod) {
                    m.set(i, j, field.one());
                    continue;
                }
                let nf = engine.reduce_full(vec![(prod, field.one())]);
                for (mono, c) in nf {
                    let i = index[&mono];
                    m.set(i, j, c);
                }
            }
            mats.push(m);
        }
        Ok((basis, mats))
    }

    /// Matrix of multiplication by an affine linear form in the quotient basis.
    pub fn multiplication_matrix(&self, form: &MultiPoly<F>) -> Result<FieldMatrix<F>> {
        let (coeffs, constant) = form
            .as_linear()
            .ok_or_else(|| Error::Invalid(format!("{form} is not linear")))?;
        let (basis, mats) = self.variable_matrices()?;
        Ok(combine_matrices(self.ring.field(), basis.len(), &mats, &coeffs, &constant))
    }

    /// Coordinates of `NF(p)` in the quotient basis.
    pub fn coordinates(&self, p: &MultiPoly<F>) -> Result<Vec<F::Elem>> {
        let basis = self.quotient_basis().ok_or(Error::NotFinite)?;
        let field = self.ring.field();
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = vec![field.zero(); basis.len()];
        for (m, c) in self.normal_form(p).terms() {
            out[index[m]] = c.clone();
        }
        Ok(out)
    }
}

/// `constant·I + Σ coeffs[i]·mats[i]`.
pub fn combine_matrices<F: Field>(
    field: &F,
    dim: usize,
    mats: &[FieldMatrix<F>],
    coeffs: &[F::Elem],
    constant: &F::Elem,
) -> FieldMatrix<F> {
    let mut acc = FieldMatrix::identity(field, dim).scale(constant);
    for (m, c) in mats.iter().zip(coeffs) {
        if !field.is_zero(c) {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine<F: Field> {
    ring: Arc<Ring<F>>,
    order: MonomialOrder,
    polys: Vec<Terms<F>>,
    masks: Vec<u64>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    stats: GbStats,
}

impl<F: Field> Engine<F> {
    fn new(ring: &Arc<Ring<F>>, order: &MonomialOrder) -> Self {
        Engine {
            ring: ring.clone(),
            order: order.clone(),
            polys: Vec::new(),
            masks: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            stats: GbStats::default(),
        }
    }

    fn from_basis(gb: &GroebnerBasis<F>) -> Self {
        let mut e = Engine::new(&gb.ring, &gb.order);
        e.seed_basis(gb.polys.clone());
        e
    }

    fn field(&self) -> &F {
        self.ring.field()
    }

    fn seed_basis(&mut self, basis: Vec<Terms<F>>) {
        for t in basis {
            self.masks.push(t[0].0.support_mask());
            self.polys.push(t);
            self.active.push(true);
        }
    }

    fn import(&self, p: &MultiPoly<F>) -> Terms<F> {
        let mut t: Terms<F> = p.terms().to_vec();
        if self.order != MonomialOrder::GREVLEX {
            t.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        }
        t
    }

    fn monic(&self, mut t: Terms<F>) -> Terms<F> {
        let f = self.field();
        if let Some((_, lc)) = t.first() {
            if !f.is_one(lc) {
                let inv = f.inv(lc).unwrap();
                for (_, c) in t.iter_mut() {
                    *c = f.mul(c, &inv);
                }
            }
        }
        t
    }

    /// `a - c·m·b` by merging.
    fn sub_mul(&self, a: &[(Monomial, F::Elem)], c: &F::Elem, m: &Monomial, b: &[(Monomial, F::Elem)]) -> Terms<F> {
        let f = self.field();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<(Monomial, F::Elem)> = b.first().map(|(bm, bc)| (bm.mul(m), f.mul(bc, c)));
        while i < a.len() {
            let Some((bm, bc)) = &bj else { break };
            match self.order.cmp(&a[i].0, bm) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bm.clone(), f.neg(bc)));
                    j += 1;
                    bj = b.get(j).map(|(bm, bcoef)| (bm.mul(m), f.mul(bcoef, c)));
                }
                Ordering::Equal => {
                    let v = f.sub(&a[i].1, bc);
                    if !f.is_zero(&v) {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|(bm, bcoef)| (bm.mul(m), f.mul(bcoef, c)));
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        if let Some((bm, bc)) = bj {
            out.push((bm, f.neg(&bc)));
            for (bm, bcoef) in &b[j + 1..] {
                out.push((bm.mul(m), f.neg(&f.mul(bcoef, c))));
            }
        }
        out
    }

    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        let mut best: Option<usize> = None;
        for (k, p) in self.polys.iter().enumerate() {
            if !self.active[k] || self.masks[k] & !mask != 0 {
                continue;
            }
            if p[0].0.divides(m) && best.is_none_or(|b| self.polys[b].len() > p.len()) {
                best = Some(k);
            }
        }
        best
    }

    /// Full normal form with respect to the active polynomials.
    fn reduce_full(&self, mut p: Terms<F>) -> Terms<F> {
        let f = self.field();
        let mut rem: Terms<F> = Vec::new();
        let mut start = 0;
        loop {
            // skip irreducible leading terms into the remainder
            let mut found = None;
            while start < p.len() {
                if let Some(k) = self.find_reducer(&p[start].0) {
                    found = Some(k);
                    break;
                }
                start += 1;
            }
            if start > 0 {
                rem.extend(p.drain(..start));
                start = 0;
            }
            let Some(k) = found else { break };
            let g = &self.polys[k];
            let (m, c) = p[0].clone();
            let q = g[0].0.quotient_of(&m).expect("reducer divides");
            let coef = f.div(&c, &g[0].1).expect("monic reducer");
            p = self.sub_mul(&p[1..], &coef, &q, &g[1..]);
        }
        rem
    }

    /// Echelonizes a batch of polynomials under the monomial order; the
    /// span (hence the ideal) is unchanged and leading monomials become
    /// distinct.
    fn linear_interreduce(&self, polys: Vec<Terms<F>>) -> Vec<Terms<F>> {
        let f = self.field();
        let mut pivots: HashMap<Monomial, usize> = HashMap::new();
        let mut rows: Vec<Terms<F>> = Vec::new();
        for mut p in polys {
            let mut done: Terms<F> = Vec::new();
            while let Some((m, c)) = p.first().cloned() {
                match pivots.get(&m) {
                    Some(&k) => {
                        let row = &rows[k];
                        p = self.sub_mul(&p[1..], &c, &Monomial::one(m.nvars()), &row[1..]);
                    }
                    None => {
                        if done.is_empty() {
                            // new leading monomial: keep the rest unreduced
                            done = std::mem::take(&mut p);
                        } else {
                            done.push((m, c));
                            p.remove(0);
                        }
                        break;
                    }
                }
            }
            if done.is_empty() {
                continue;
            }
            let done = self.monic(done);
            pivots.insert(done[0].0.clone(), rows.len());
            rows.push(done);
        }
        let _ = f;
        rows
    }

    fn add_generators(&mut self, input: Vec<Terms<F>>) {
        let nonzero: Vec<Terms<F>> = input.into_iter().filter(|t| !t.is_empty()).collect();
        let mut batch = self.linear_interreduce(nonzero);
        // insert small leading monomials first so they prune later ones
        batch.sort_by(|a, b| self.order.cmp(&a[0].0, &b[0].0));
        for t in batch {
            let r = self.reduce_full(t);
            if !r.is_empty() {
                let r = self.monic(r);
                if self.insert(r) {
                    return;
                }
            }
        }
        self.run();
    }

    /// Adds `h` with the Gebauer–Möller update. Returns true once the unit
    /// ideal is detected.
    fn insert(&mut self, h: Terms<F>) -> bool {
        let h_lm = h[0].0.clone();
        if h_lm.is_one() {
            self.polys = vec![h];
            self.masks = vec![0];
            self.active = vec![true];
            self.pairs.clear();
            return true;
        }
        let hidx = self.polys.len();
        let candidates: Vec<(usize, Monomial, bool)> = (0..hidx)
            .filter(|&k| self.active[k])
            .map(|k| {
                let lm = &self.polys[k][0].0;
                (k, h_lm.lcm(lm), h_lm.is_coprime(lm))
            })
            .collect();
        // criterion M/F: drop (h,g1) when another (h,g2) has a strictly
        // dividing lcm, or an equal lcm earlier in the list
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (a, (k1, l1, coprime1)) in candidates.iter().enumerate() {
            let dominated = candidates.iter().enumerate().any(|(b, (_, l2, _))| {
                b != a && l2.divides(l1) && (l2 != l1 || b < a)
            });
            if !dominated || (*coprime1 && !candidates.iter().enumerate().any(|(b, (_, l2, _))| b < a && l2 == l1)) {
                kept.push((*k1, l1.clone(), *coprime1));
            }
        }
        // chain criterion on old pairs
        let before = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !h_lm.divides(&p.lcm) {
                return true;
            }
            let li = h_lm.lcm(&polys[p.i][0].0);
            let lj = h_lm.lcm(&polys[p.j][0].0);
            li == p.lcm || lj == p.lcm
        });
        self.stats.pairs_pruned += before - self.pairs.len();
        for (k, lcm, coprime) in kept {
            if coprime {
                self.stats.pairs_pruned += 1;
            } else {
                self.pairs.push(Pair { i: k, j: hidx, lcm });
            }
        }
        for k in 0..hidx {
            if self.active[k] && h_lm.divides(&self.polys[k][0].0) {
                self.active[k] = false;
            }
        }
        self.masks.push(h_lm.support_mask());
        self.polys.push(h);
        self.active.push(true);
        false
    }

    fn s_poly(&self, pair: &Pair) -> Terms<F> {
        let f = self.field();
        let a = &self.polys[pair.i];
        let b = &self.polys[pair.j];
        let ma = a[0].0.quotient_of(&pair.lcm).unwrap();
        let mb = b[0].0.quotient_of(&pair.lcm).unwrap();
        let a_shift: Terms<F> = a[1..].iter().map(|(m, c)| (m.mul(&ma), c.clone())).collect();
        self.sub_mul(&a_shift, &f.one(), &mb, &b[1..])
    }

    fn run(&mut self) {
        while !self.pairs.is_empty() {
            // normal strategy: smallest lcm degree, then smallest in the order
            let (best, _) = self
                .pairs
                .iter()
                .enumerate()
                .min_by(|(_, p), (_, q)| {
                    p.lcm
                        .degree()
                        .cmp(&q.lcm.degree())
                        .then_with(|| self.order.cmp(&p.lcm, &q.lcm))
                })
                .unwrap();
            let pair = self.pairs.swap_remove(best);
            let s = self.s_poly(&pair);
            let r = self.reduce_full(s);
            self.stats.pairs_reduced += 1;
            if r.is_empty() {
                self.stats.zero_reductions += 1;
                continue;
            }
            let r = self.monic(r);
            if self.insert(r) {
                return;
            }
        }
    }

    fn finish(mut self) -> GroebnerBasis<F> {
        let idx: Vec<usize> = (0..self.polys.len()).filter(|&k| self.active[k]).collect();
        let mut basis: Vec<Terms<F>> = Vec::with_capacity(idx.len());
        for &k in &idx {
            // tail-reduce against the other active elements
            self.active[k] = false;
            let mut p = std::mem::take(&mut self.polys[k]);
            let head = p.remove(0);
            let tail = self.reduce_full(p);
            let mut full = vec![head];
            full.extend(tail);
            self.masks[k] = full[0].0.support_mask();
            self.polys[k] = full.clone();
            self.active[k] = true;
            basis.push(full);
        }
        basis.sort_by(|a, b| self.order.cmp(&a[0].0, &b[0].0));
        GroebnerBasis {
            ring: self.ring,
            order: self.order,
            polys: basis,
            stats: self.stats,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::parse::parse_poly;

    fn gb(vars: &[&str], gens: &[&str]) -> GroebnerBasis<Rationals> {
        let r = Ring::new(Rationals, vars).unwrap();
        let g: Vec<_> = gens.iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        buchberger(&g, &MonomialOrder::GREVLEX).unwrap()
    }

    fn strings(b: &GroebnerBasis<Rationals>) -> Vec<String> {
        b.generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn small_bases() {
        assert_eq!(strings(&gb(&["x"], &["x^2-1"])), vec!["x^2 - 1"]);
        assert_eq!(strings(&gb(&["x", "y"], &["x^2+y^2-1", "y"])), vec!["y", "x^2 - 1"]);
        assert_eq!(strings(&gb(&["x", "y"], &["x-3", "y+1"])), vec!["y + 1", "x - 3"]);
        assert!(gb(&["x", "y"], &["x*y-1", "x", "y"]).is_unit());
    }

    #[test]
    fn dimensions() {
        assert_eq!(gb(&["x"], &["x^2-1"]).quotient_dimension(), QuotientDim::Finite(2));
        let circle = gb(&["x", "y"], &["x^2+y^2-1", "12*x*y^2-6*x^2*y"]);
        assert_eq!(circle.quotient_dimension(), QuotientDim::Finite(6));
        assert_eq!(gb(&["x", "y"], &["y"]).quotient_dimension(), QuotientDim::Infinite);
        assert_eq!(gb(&["x", "y"], &["x^2+y^2-1"]).affine_dimension(), 1);
        assert_eq!(gb(&["x", "y"], &["1"]).affine_dimension(), -1);
        assert_eq!(gb(&["x", "y"], &["x-3", "y+1"]).affine_dimension(), 0);
        assert_eq!(gb(&["x", "y", "z"], &["x*y", "x*z"]).affine_dimension(), 2);
    }

    #[test]
    fn normal_forms() {
        let b = gb(&["x"], &["x^2-1"]);
        let r = b.ring().clone();
        assert_eq!(b.normal_form(&parse_poly("x^2", &r).unwrap()).to_string(), "1");
        assert!(b.normal_form(&parse_poly("x^3-x", &r).unwrap()).is_zero());
        let b2 = gb(&["x", "y"], &["x^2-1"]);
        let r2 = b2.ring().clone();
        assert_eq!(b2.normal_form(&parse_poly("y", &r2).unwrap()).to_string(), "y");
    }

    #[test]
    fn multiplication_matrices() {
        let b = gb(&["x"], &["x^2-1"]);
        let r = b.ring().clone();
        let m = b.multiplication_matrix(&parse_poly("x", &r).unwrap()).unwrap();
        assert_eq!(m, FieldMatrix::from_i64(&Rationals, &[&[0, 1], &[1, 0]]));
        let p = gb(&["x", "y"], &["x-3", "y+1"]);
        let rp = p.ring().clone();
        let m = p.multiplication_matrix(&parse_poly("x+2*y", &rp).unwrap()).unwrap();
        assert_eq!(m, FieldMatrix::from_i64(&Rationals, &[&[1]]));
        assert!(matches!(
            gb(&["x", "y"], &["y"]).multiplication_matrix(&parse_poly("x", &gb(&["x", "y"], &["y"]).ring().clone()).unwrap()),
            Err(Error::NotFinite)
        ));
    }

    #[test]
    fn circle_multiplication_charpoly() {
        use crate::univariate::UniPoly;
        let b = gb(&["x", "y"], &["x^2+y^2-1", "12*x*y^2-6*x^2*y"]);
        let r = b.ring().clone();
        let m = b.multiplication_matrix(&parse_poly("x+2*y", &r).unwrap()).unwrap();
        let q = Rationals;
        // (T^2-1)(T^2-4)(T^2-16/5) = T^6 - 41/5 T^4 + 20 T^2 - 64/5
        let expect = UniPoly::new(
            &q,
            ["-64/5", "0", "20", "0", "-41/5", "0", "1"]
                .iter()
                .map(|s| q.parse_elem(s).unwrap())
                .collect(),
        );
        assert_eq!(m.charpoly(), expect);
    }

    #[test]
    fn extend_matches_full_computation() {
        let f = PrimeField::new(32003).unwrap();
        let r = Ring::new(f, &["x", "y", "z"]).unwrap();
        let base: Vec<_> = ["x^2+y^2+z^2-1"].iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        let extra: Vec<_> = ["x*y-z", "x+y+z-1/2"].iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        let g0 = buchberger(&base, &MonomialOrder::GREVLEX).unwrap();
        let ext = g0.extend(&extra).unwrap();
        let all: Vec<_> = base.iter().chain(&extra).cloned().collect();
        let full = buchberger(&all, &MonomialOrder::GREVLEX).unwrap();
        assert_eq!(ext.generators(), full.generators());
    }

    #[test]
    fn lex_basis_is_triangular() {
        let r = Ring::new(Rationals, &["x", "y"]).unwrap();
        let g: Vec<_> = ["x^2+y^2-1", "x-y"].iter().map(|t| parse_poly(t, &r).unwrap()).collect();
        let b = buchberger(&g, &MonomialOrder::LEX).unwrap();
        let s: Vec<String> = b.generators().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["y^2 - 1/2", "x - y"]);
    }
}
