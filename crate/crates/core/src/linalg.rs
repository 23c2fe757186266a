//! Dense matrices over an exact field.

use std::fmt;

use crate::field::Field;
use crate::univariate::UniPoly;

#[derive(Clone)]
pub struct FieldMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for FieldMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> fmt::Debug for FieldMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|c| self.field.format(c)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> FieldMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        FieldMatrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let f = &self.field;
        FieldMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        FieldMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    /// Row echelon form in place; returns pivot columns and the sign of the
    /// row permutation.
    fn echelon(&mut self) -> (Vec<usize>, bool) {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut odd = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            if p != r {
                for k in 0..self.cols {
                    self.data.swap(p * self.cols + k, r * self.cols + k);
                }
                odd = !odd;
            }
            let inv = f.inv(self.get(r, c)).unwrap();
            for i in r + 1..self.rows {
                let factor = f.mul(self.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for k in c..self.cols {
                    let v = f.sub(self.get(i, k), &f.mul(&factor, self.get(r, k)));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, odd)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    pub fn det(&self) -> F::Elem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let f = self.field.clone();
        let mut m = self.clone();
        let (pivots, odd) = m.echelon();
        if pivots.len() < self.rows {
            return f.zero();
        }
        let d = (0..self.rows).fold(f.one(), |acc, i| f.mul(&acc, m.get(i, i)));
        if odd {
            f.neg(&d)
        } else {
            d
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = self.field.clone();
        let mut aug = Self::zeros(&f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (pivots, _) = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        for i in (0..n).rev() {
            let inv = f.inv(aug.get(i, i)).unwrap();
            for k in 0..2 * n {
                let v = f.mul(aug.get(i, k), &inv);
                aug.set(i, k, v);
            }
            for r in 0..i {
                let factor = aug.get(r, i).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for k in 0..2 * n {
                    let v = f.sub(aug.get(r, k), &f.mul(&factor, aug.get(i, k)));
                    aug.set(r, k, v);
                }
            }
        }
        let mut out = Self::zeros(&f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.inverse().map(|inv| inv.mul_vec(b))
    }

    /// Characteristic polynomial `det(T·I - self)`, monic, computed through
    /// a Hessenberg reduction.
    pub fn charpoly(&self) -> UniPoly<F> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        // similarity transform to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !f.is_zero(h.get(i, c))) else {
                continue;
            };
            if p != c + 1 {
                for k in 0..n {
                    h.data.swap(p * n + k, (c + 1) * n + k);
                }
                for k in 0..n {
                    h.data.swap(k * n + p, k * n + c + 1);
                }
            }
            let inv = f.inv(h.get(c + 1, c)).unwrap();
            for i in c + 2..n {
                let factor = f.mul(h.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for k in 0..n {
                    let v = f.sub(h.get(i, k), &f.mul(&factor, h.get(c + 1, k)));
                    h.set(i, k, v);
                }
                for k in 0..n {
                    let v = f.add(h.get(k, c + 1), &f.mul(&factor, h.get(k, i)));
                    h.set(k, c + 1, v);
                }
            }
        }
        // p_k = charpoly of the leading k×k block
        let t = UniPoly::t(&f);
        let mut polys: Vec<UniPoly<F>> = vec![UniPoly::one(&f)];
        for k in 1..=n {
            let diag = UniPoly::constant(&f, h.get(k - 1, k - 1).clone());
            let mut pk = t.sub(&diag).mul(&polys[k - 1]);
            let mut prod = f.one();
            for i in (1..k).rev() {
                prod = f.mul(&prod, h.get(i, i - 1));
                let coef = f.mul(&prod, h.get(i - 1, k - 1));
                pk = pk.sub(&polys[i - 1].scale(&coef));
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }
}
