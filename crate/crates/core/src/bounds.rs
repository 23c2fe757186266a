//! Bidegree calculus on `P^n × P^n` and the polar-degree bound on the
//! number of critical points, plus an empirical computation of the polar
//! degrees of a variety.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::QuotientDim;
use crate::polar::{derive_seed, polar_basis, random_affine_forms, random_directions, VarietySpec};

/// Coefficient range of the random affine cuts.
pub const CUT_BOUND: i64 = 997;
const CUT_ATTEMPTS: u64 = 8;

/// A class `Σ c_{a,b} T^a U^b` truncated modulo `⟨T^{n+1}, U^{n+1}⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bidegree {
    n: usize,
    // coeffs[a][b] is the coefficient of T^a U^b
    coeffs: Vec<Vec<u128>>,
}

impl Bidegree {
    pub fn zero(n: usize) -> Self {
        Bidegree {
            n,
            coeffs: vec![vec![0; n + 1]; n + 1],
        }
    }

    pub fn one(n: usize) -> Self {
        let mut b = Self::zero(n);
        b.coeffs[0][0] = 1;
        b
    }

    /// Single term `c·T^a U^b`; zero when the term is truncated away.
    pub fn term(n: usize, a: usize, b: usize, c: u128) -> Self {
        let mut out = Self::zero(n);
        if a <= n && b <= n {
            out.coeffs[a][b] = c;
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, a: usize, b: usize) -> u128 {
        if a <= self.n && b <= self.n {
            self.coeffs[a][b]
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|&c| c == 0)
    }

    /// Nonzero terms as `(a, b, c)`, by decreasing power of `T`.
    pub fn terms(&self) -> Vec<(usize, usize, u128)> {
        let mut out = Vec::new();
        for a in (0..=self.n).rev() {
            for b in 0..=self.n {
                if self.coeffs[a][b] != 0 {
                    out.push((a, b, self.coeffs[a][b]));
                }
            }
        }
        out
    }

    /// The common total degree of all terms, if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms().into_iter().map(|(a, b, _)| a + b);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for a in 0..=self.n {
            for b in 0..=self.n {
                out.coeffs[a][b] = out.coeffs[a][b]
                    .checked_add(other.coeffs[a][b])
                    .ok_or(Error::Overflow("bidegree coefficient"))?;
            }
        }
        Ok(out)
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "bidegrees over P^{} and P^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|&(a, b, c)| {
                let mut s = String::new();
                if c != 1 || (a == 0 && b == 0) {
                    s.push_str(&c.to_string());
                }
                for (var, e) in [("T", a), ("U", b)] {
                    match e {
                        0 => {}
                        1 => s.push_str(var),
                        _ => s.push_str(&format!("{var}^{e}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polar degrees `δ_1, …, δ_{d+1}` of a `d`-dimensional variety, with
/// `δ_{d+1}` its degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaVector(Vec<u128>);

impl DeltaVector {
    pub fn new(values: Vec<u128>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("a polar degree vector needs at least one entry".into()));
        }
        Ok(DeltaVector(values))
    }

    /// The dimension `d`.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `δ_k`, one-based.
    pub fn get(&self, k: usize) -> u128 {
        self.0[k - 1]
    }

    pub fn values(&self) -> &[u128] {
        &self.0
    }

    pub fn degree(&self) -> u128 {
        *self.0.last().unwrap()
    }
}

impl fmt::Display for DeltaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn checked_pow(base: u128, e: usize) -> Result<u128> {
    let e = u32::try_from(e).map_err(|_| Error::Overflow("exponent"))?;
    base.checked_pow(e).ok_or(Error::Overflow("power"))
}

/// Class of the conormal variety: `Σ_{k=0}^{d} δ_{k+1} T^{n-k} U^{k+1}`.
pub fn conormal_bidegree(delta: &DeltaVector, n: usize) -> Result<Bidegree> {
    let d = delta.dim();
    if d >= n {
        return Err(Error::Dimension(format!("dimension {d} must be below the ambient {n}")));
    }
    let mut out = Bidegree::zero(n);
    for k in 0..=d {
        out.coeffs[n - k][k + 1] = delta.get(k + 1);
    }
    Ok(out)
}

/// Class of the incidence variety of `(g, a_1, …, a_i)`:
/// `Σ_{k=0}^{n-i} (D-1)^k T^k U^{n-k-i}`.
pub fn s_variety_bidegree(n: usize, i: usize, big_d: u32) -> Result<Bidegree> {
    if i > n {
        return Err(Error::Dimension(format!("index {i} exceeds {n}")));
    }
    if big_d == 0 {
        return Err(Error::Invalid("the objective degree must be at least 1".into()));
    }
    let mut out = Bidegree::zero(n);
    for k in 0..=n - i {
        out.coeffs[k][n - k - i] = checked_pow(big_d as u128 - 1, k)?;
    }
    Ok(out)
}

/// Product modulo `⟨T^{n+1}, U^{n+1}⟩`.
pub fn bidegree_product(x: &Bidegree, y: &Bidegree) -> Result<Bidegree> {
    x.check_n(y)?;
    let n = x.n;
    let mut out = Bidegree::zero(n);
    for (a1, b1, c1) in x.terms() {
        for (a2, b2, c2) in y.terms() {
            let (a, b) = (a1 + a2, b1 + b2);
            if a > n || b > n {
                continue;
            }
            let c = c1.checked_mul(c2).ok_or(Error::Overflow("bidegree product"))?;
            out.coeffs[a][b] = out.coeffs[a][b].checked_add(c).ok_or(Error::Overflow("bidegree product"))?;
        }
    }
    Ok(out)
}

/// Degree of the projection to the first factor: the coefficient of
/// `T^{n-i} U^n`.
pub fn projection_degree(x: &Bidegree, n: usize, i: usize) -> u128 {
    if i > n {
        return 0;
    }
    x.coefficient(n - i, n)
}

/// The polar-degree bound: `δ_{i+1}` when `D = 1`, otherwise
/// `Σ_{j=i}^{d} δ_{j+1} (D-1)^{j-i}`.
pub fn theorem1_bound(delta: &DeltaVector, big_d: u32, i: usize) -> Result<u128> {
    let d = delta.dim();
    if i > d {
        return Err(Error::Dimension(format!("index {i} exceeds the dimension {d}")));
    }
    if big_d == 0 {
        return Err(Error::Invalid("the objective degree must be at least 1".into()));
    }
    if big_d == 1 {
        return Ok(delta.get(i + 1));
    }
    let mut acc: u128 = 0;
    for j in i..=d {
        let term = delta
            .get(j + 1)
            .checked_mul(checked_pow(big_d as u128 - 1, j - i)?)
            .ok_or(Error::Overflow("bound"))?;
        acc = acc.checked_add(term).ok_or(Error::Overflow("bound"))?;
    }
    Ok(acc)
}

/// The same bound obtained by intersecting classes.
pub fn bound_via_bidegrees(delta: &DeltaVector, n: usize, big_d: u32, i: usize) -> Result<u128> {
    let conormal = conormal_bidegree(delta, n)?;
    let s = s_variety_bidegree(n, i + 1, big_d)?;
    Ok(projection_degree(&bidegree_product(&conormal, &s)?, n, i))
}

/// The classical Bézout-type bound for critical points of a degree `D`
/// objective on a complete intersection of degrees `d_1, …, d_m`, `m = n - d`:
/// `Π d_j · Σ_{|α| = n-m} (D-1)^{α_0} Π (d_j - 1)^{α_j}`.
pub fn naive_bound(degrees: &[u32], big_d: u32, n: usize, d: usize) -> Result<u128> {
    if d > n {
        return Err(Error::Dimension(format!("dimension {d} exceeds {n}")));
    }
    let m = n - d;
    if degrees.len() != m {
        return Err(Error::Dimension(format!(
            "expected {m} generator degrees for a complete intersection, got {}",
            degrees.len()
        )));
    }
    if big_d == 0 || degrees.contains(&0) {
        return Err(Error::Invalid("degrees must be positive".into()));
    }
    let mut bases: Vec<u128> = vec![big_d as u128 - 1];
    bases.extend(degrees.iter().map(|&e| e as u128 - 1));
    // complete homogeneous symmetric polynomial of degree n-m in the bases
    let target = n - m;
    let mut h = vec![0u128; target + 1];
    h[0] = 1;
    for &b in &bases {
        for k in 1..=target {
            let add = h[k - 1].checked_mul(b).ok_or(Error::Overflow("naive bound"))?;
            h[k] = h[k].checked_add(add).ok_or(Error::Overflow("naive bound"))?;
        }
    }
    let prod = degrees
        .iter()
        .try_fold(1u128, |acc, &e| acc.checked_mul(e as u128))
        .ok_or(Error::Overflow("naive bound"))?;
    prod.checked_mul(h[target]).ok_or(Error::Overflow("naive bound"))
}

fn zero_dim_count<F: Field>(v: &VarietySpec<F>, seed: u64, i: usize) -> Result<u128> {
    let n = v.nvars();
    let d = v.dim();
    for attempt in 0..CUT_ATTEMPTS {
        let s = derive_seed(seed, (i as u64) << 8 | attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let basis = if i <= d {
            let a = random_directions(v.ring().field(), derive_seed(s, 1), i, n)?;
            let cuts = random_affine_forms(v.ring(), &mut rng, i - 1, CUT_BOUND);
            polar_basis(v, &a, i, &cuts)?
        } else {
            let cuts = random_affine_forms(v.ring(), &mut rng, d, CUT_BOUND);
            let mut gens = v.generators().to_vec();
            gens.extend(cuts);
            crate::groebner::GroebnerBasis::compute(v.ring(), &gens, &crate::poly::MonomialOrder::GREVLEX)?
        };
        if let QuotientDim::Finite(k) = basis.quotient_dimension() {
            return Ok(k as u128);
        }
    }
    Err(Error::NotFinite)
}

fn delta_once<F: Field>(v: &VarietySpec<F>, seed: u64) -> Result<DeltaVector> {
    let d = v.dim();
    let values = (1..=d + 1)
        .map(|i| zero_dim_count(v, seed, i))
        .collect::<Result<Vec<_>>>()?;
    DeltaVector::new(values)
}

/// Polar degrees of `v` from random polar varieties cut down to points by
/// random affine forms; two independent seeds must agree.
pub fn delta_of_variety<F: Field>(v: &VarietySpec<F>, seed: u64) -> Result<DeltaVector> {
    if v.dim() >= v.nvars() {
        return Err(Error::Dimension("the variety must be a proper subvariety".into()));
    }
    let first = delta_once(v, seed)?;
    let second = delta_once(v, derive_seed(seed, 0xD17A))?;
    if first != second {
        return Err(Error::Unstable(format!(
            "polar degrees {first} and {second} differ between seeds"
        )));
    }
    Ok(first)
}
