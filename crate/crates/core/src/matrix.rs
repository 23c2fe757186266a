//! Polynomial matrices: Jacobians, block stacking and exact minors.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::GroebnerBasis;
use crate::poly::{MultiPoly, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<F: Field> {
    ring: Arc<Ring<F>>,
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn new(ring: &Arc<Ring<F>>, rows: usize, cols: usize, entries: Vec<MultiPoly<F>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !crate::poly::same_ring(e.ring(), ring)) {
            return Err(Error::RingMismatch("matrix entries over different rings".into()));
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(ring: &Arc<Ring<F>>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![MultiPoly::zero(ring); rows * cols],
        }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly<F> {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[MultiPoly<F>] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Evaluates every entry at `point`.
    pub fn evaluate(&self, point: &[F::Elem]) -> crate::linalg::FieldMatrix<F> {
        crate::linalg::FieldMatrix::from_rows(
            self.ring.field(),
            (0..self.rows)
                .map(|r| self.row(r).iter().map(|e| e.evaluate(point)).collect())
                .collect(),
        )
    }

    /// Determinant of a square matrix (cofactor expansion).
    pub fn det(&self) -> Result<MultiPoly<F>> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(MultiPoly::one(&self.ring));
        }
        Ok(self.minors(self.rows)?.pop().expect("one maximal minor"))
    }

    /// All `r×r` minors, ordered by (row subset, column subset) in
    /// lexicographic order of the index subsets.
    pub fn minors(&self, r: usize) -> Result<Vec<MultiPoly<F>>> {
        self.minors_modulo(r, None)
    }

    /// Like [`minors`](Self::minors), but every intermediate determinant is
    /// replaced by its normal form modulo `reducer`. The results agree with
    /// the plain minors modulo the ideal of `reducer`.
    pub fn minors_modulo(&self, r: usize, reducer: Option<&GroebnerBasis<F>>) -> Result<Vec<MultiPoly<F>>> {
        if r == 0 || r > self.rows.min(self.cols) {
            return Err(Error::Dimension(format!(
                "minor order {r} out of range for a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows > 64 || self.cols > 64 {
            return Err(Error::Dimension("matrices beyond 64 rows or columns".into()));
        }
        let mut memo = MinorMemo {
            matrix: self,
            reducer,
            cache: HashMap::new(),
        };
        let row_sets = subsets(self.rows, r);
        let col_sets = subsets(self.cols, r);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rows in &row_sets {
            for cols in &col_sets {
                out.push(memo.det(mask(rows), mask(cols)));
            }
        }
        Ok(out)
    }

    /// Stacks blocks vertically.
    pub fn stack(blocks: &[&PolyMatrix<F>]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::Dimension("nothing to stack".into()))?;
        let cols = first.cols;
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::Dimension(format!(
                    "cannot stack a block of width {} under width {cols}",
                    b.cols
                )));
            }
            if !crate::poly::same_ring(&b.ring, &first.ring) {
                return Err(Error::RingMismatch("stacked blocks over different rings".into()));
            }
            rows += b.rows;
            entries.extend(b.entries.iter().cloned());
        }
        Ok(PolyMatrix {
            ring: first.ring.clone(),
            rows,
            cols,
            entries,
        })
    }

    /// A single row matrix from polynomials.
    pub fn row_of(ring: &Arc<Ring<F>>, row: Vec<MultiPoly<F>>) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows: 1,
            cols: row.len(),
            entries: row,
        }
    }

    /// Rows of constants, one per vector.
    pub fn rows_of_constants(ring: &Arc<Ring<F>>, rows: &[Vec<F::Elem>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "constant row of length {} in a matrix of width {cols}",
                    r.len()
                )));
            }
            entries.extend(r.iter().map(|c| MultiPoly::constant(ring, c.clone())));
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn row_of_constants(ring: &Arc<Ring<F>>, a: &[F::Elem]) -> Self {
        Self::rows_of_constants(ring, &[a.to_vec()], a.len()).expect("consistent width")
    }
}

/// `p × n` matrix of partial derivatives.
pub fn jacobian<F: Field>(polys: &[MultiPoly<F>]) -> Result<PolyMatrix<F>> {
    let first = polys
        .first()
        .ok_or_else(|| Error::Invalid("jacobian of an empty system".into()))?;
    let ring = first.ring().clone();
    let n = ring.nvars();
    let mut entries = Vec::with_capacity(polys.len() * n);
    for p in polys {
        if !crate::poly::same_ring(p.ring(), &ring) {
            return Err(Error::RingMismatch("jacobian of polynomials over different rings".into()));
        }
        entries.extend(p.gradient());
    }
    PolyMatrix::new(&ring, polys.len(), n, entries)
}

struct MinorMemo<'a, F: Field> {
    matrix: &'a PolyMatrix<F>,
    reducer: Option<&'a GroebnerBasis<F>>,
    cache: HashMap<(u64, u64), MultiPoly<F>>,
}

impl<F: Field> MinorMemo<'_, F> {
    /// Determinant of the submatrix on `rows × cols` (equal popcounts),
    /// expanding along the first column.
    fn det(&mut self, rows: u64, cols: u64) -> MultiPoly<F> {
        let m = self.matrix;
        if rows.count_ones() == 1 {
            let r = rows.trailing_zeros() as usize;
            let c = cols.trailing_zeros() as usize;
            return m.get(r, c).clone();
        }
        if let Some(d) = self.cache.get(&(rows, cols)) {
            return d.clone();
        }
        let c = cols.trailing_zeros() as usize;
        let rest_cols = cols & !(1u64 << c);
        let mut acc = MultiPoly::zero(&m.ring);
        let mut sign_negative = false;
        let mut bits = rows;
        while bits != 0 {
            let r = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let entry = m.get(r, c);
            if !entry.is_zero() {
                let sub = self.det(rows & !(1u64 << r), rest_cols);
                if !sub.is_zero() {
                    let term = entry.mul(&sub);
                    acc = if sign_negative { acc.sub(&term) } else { acc.add(&term) };
                }
            }
            sign_negative = !sign_negative;
        }
        if let Some(gb) = self.reducer {
            acc = gb.normal_form(&acc);
        }
        self.cache.insert((rows, cols), acc.clone());
        acc
    }
}

fn mask(idx: &[usize]) -> u64 {
    idx.iter().fold(0, |m, &i| m | (1u64 << i))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::parse::parse_poly;

    fn ring() -> Arc<Ring<Rationals>> {
        Ring::new(Rationals, &["x", "y"]).unwrap()
    }

    fn polys(r: &Arc<Ring<Rationals>>, texts: &[&str]) -> Vec<MultiPoly<Rationals>> {
        texts.iter().map(|t| parse_poly(t, r).unwrap()).collect()
    }

    #[test]
    fn jacobian_examples() {
        let r = ring();
        let j = jacobian(&polys(&r, &["x^2+y^2-1"])).unwrap();
        assert_eq!(j.row(0), polys(&r, &["2*x", "2*y"]).as_slice());
        let j = jacobian(&polys(&r, &["x^2+y^2-1", "x^3+2*y^3"])).unwrap();
        assert_eq!(j.row(1), polys(&r, &["3*x^2", "6*y^2"]).as_slice());
        let j = jacobian(&polys(&r, &["x-1", "y-2"])).unwrap();
        assert_eq!(j.entries, polys(&r, &["1", "0", "0", "1"]));
        assert!(jacobian::<Rationals>(&[]).is_err());
    }

    #[test]
    fn minor_examples() {
        let r = ring();
        let j = jacobian(&polys(&r, &["x^2+y^2-1", "x^3+2*y^3"])).unwrap();
        let m = j.minors(2).unwrap();
        assert_eq!(m, polys(&r, &["12*x*y^2 - 6*x^2*y"]));
        let row = PolyMatrix::row_of(&r, polys(&r, &["x", "y"]));
        assert_eq!(row.minors(1).unwrap(), polys(&r, &["x", "y"]));
        let sq = PolyMatrix::new(&r, 3, 3, polys(&r, &["x", "1", "0", "y", "x", "2", "0", "1", "y"])).unwrap();
        assert_eq!(sq.minors(2).unwrap().len(), 9);
        assert!(sq.minors(4).is_err());
        assert!(sq.minors(0).is_err());
    }

    #[test]
    fn stacking() {
        let r = ring();
        let jac = jacobian(&polys(&r, &["x^2+y^2-1"])).unwrap();
        let grad = jacobian(&polys(&r, &["x^3+2*y^3"])).unwrap();
        let s = PolyMatrix::stack(&[&jac, &grad]).unwrap();
        assert_eq!(s.entries, polys(&r, &["2*x", "2*y", "3*x^2", "6*y^2"]));
        let q = Rationals;
        let consts = PolyMatrix::row_of_constants(&r, &[q.from_i64(0), q.from_i64(1)]);
        let s2 = PolyMatrix::stack(&[&s, &consts]).unwrap();
        assert_eq!(s2.rows(), 3);
        assert_eq!(s2.get(2, 1), &MultiPoly::one(&r));
        let z = PolyMatrix::stack(&[&PolyMatrix::zeros(&r, 1, 2), &PolyMatrix::zeros(&r, 2, 2)]).unwrap();
        assert!(z.entries.iter().all(|e| e.is_zero()));
        let wide = PolyMatrix::zeros(&r, 1, 3);
        assert!(PolyMatrix::stack(&[&s, &wide]).is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }
}
