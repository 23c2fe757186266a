//! Polar and critical-locus ideals: rank conditions on the Jacobian of the
//! defining equations stacked with the gradient of an objective and a
//! sequence of constant directions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::GroebnerBasis;
use crate::linalg::FieldMatrix;
use crate::matrix::{jacobian, PolyMatrix};
use crate::poly::{same_ring, MonomialOrder, MultiPoly, Ring};

/// Coefficient range for random directions.
pub const DIRECTION_BOUND: i64 = 997;
const DIRECTION_ATTEMPTS: usize = 32;

/// A variety given by generators and its dimension.
#[derive(Clone, Debug)]
pub struct VarietySpec<F: Field> {
    gens: Vec<MultiPoly<F>>,
    dim: usize,
    smooth_asserted: bool,
}

impl<F: Field> VarietySpec<F> {
    pub fn new(gens: Vec<MultiPoly<F>>, dim: usize) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::Invalid("a variety needs at least one generator".into()))?;
        let ring = first.ring().clone();
        if gens.iter().any(|g| !same_ring(g.ring(), &ring)) {
            return Err(Error::RingMismatch("generators over different rings".into()));
        }
        if dim > ring.nvars() {
            return Err(Error::Dimension(format!(
                "dimension {dim} exceeds the number of variables {}",
                ring.nvars()
            )));
        }
        Ok(VarietySpec {
            gens,
            dim,
            smooth_asserted: true,
        })
    }

    /// Marks the smoothness hypothesis as not asserted by the caller.
    pub fn without_smoothness(mut self) -> Self {
        self.smooth_asserted = false;
        self
    }

    pub fn smooth_asserted(&self) -> bool {
        self.smooth_asserted
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        self.gens[0].ring()
    }

    pub fn generators(&self) -> &[MultiPoly<F>] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    pub fn codim(&self) -> usize {
        self.nvars() - self.dim
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.total_degree()).collect()
    }

    pub fn jacobian(&self) -> PolyMatrix<F> {
        jacobian(&self.gens).expect("generators are nonempty")
    }
}

/// Rows `a_1, …, a_i` of constant directions.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSequence<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<Vec<F::Elem>>,
    seed: Option<u64>,
}

impl<F: Field> DirectionSequence<F> {
    pub fn new(field: &F, ncols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension(format!("direction rows must have length {ncols}")));
        }
        Ok(DirectionSequence {
            field: field.clone(),
            ncols,
            rows,
            seed: None,
        })
    }

    pub fn empty(field: &F, ncols: usize) -> Self {
        DirectionSequence {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            seed: None,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The first `i` rows.
    pub fn prefix(&self, i: usize) -> Self {
        DirectionSequence {
            field: self.field.clone(),
            ncols: self.ncols,
            rows: self.rows[..i.min(self.rows.len())].to_vec(),
            seed: self.seed,
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows.is_empty() {
            return 0;
        }
        FieldMatrix::from_rows(&self.field, self.rows.clone()).rank()
    }

    fn as_matrix(&self, ring: &Arc<Ring<F>>) -> Result<PolyMatrix<F>> {
        PolyMatrix::rows_of_constants(ring, &self.rows, self.ncols)
    }
}

/// Mixes a seed with a tag so that independent random choices of one run
/// use independent streams.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn nonzero_in(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// `i` linearly independent rows of length `n` with entries in
/// `{-997..997} \ {0}`, drawn from a seeded stream.
pub fn random_directions<F: Field>(field: &F, seed: u64, i: usize, n: usize) -> Result<DirectionSequence<F>> {
    if i > n {
        return Err(Error::Dimension(format!("{i} independent directions in dimension {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..DIRECTION_ATTEMPTS {
        let rows: Vec<Vec<F::Elem>> = (0..i)
            .map(|_| (0..n).map(|_| field.from_i64(nonzero_in(&mut rng, DIRECTION_BOUND))).collect())
            .collect();
        let mut a = DirectionSequence::new(field, n, rows)?;
        if a.rank() == i {
            a.seed = Some(seed);
            return Ok(a);
        }
    }
    Err(Error::Degenerate(format!(
        "no independent directions after {DIRECTION_ATTEMPTS} draws"
    )))
}

/// `count` random affine linear forms with coefficients in `{-bound..bound} \ {0}`.
pub fn random_affine_forms<F: Field>(
    ring: &Arc<Ring<F>>,
    rng: &mut ChaCha8Rng,
    count: usize,
    bound: i64,
) -> Vec<MultiPoly<F>> {
    let f = ring.field();
    (0..count)
        .map(|_| {
            let coeffs: Vec<F::Elem> = (0..ring.nvars()).map(|_| f.from_i64(nonzero_in(rng, bound))).collect();
            let c = f.from_i64(nonzero_in(rng, bound));
            MultiPoly::linear(ring, &coeffs, c)
        })
        .collect()
}

/// Rank-condition generators: all `order`-minors of `m`, reduced modulo
/// `base` when given, with zeros and duplicates removed.
fn rank_conditions<F: Field>(m: &PolyMatrix<F>, order: usize, base: Option<&GroebnerBasis<F>>) -> Result<Vec<MultiPoly<F>>> {
    if order > m.cols() {
        return Err(Error::Degenerate(format!(
            "minor order {order} exceeds the {} columns; the rank condition is empty",
            m.cols()
        )));
    }
    if order > m.rows() {
        return Err(Error::Degenerate(format!(
            "minor order {order} exceeds the {} rows; the rank condition holds everywhere",
            m.rows()
        )));
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for p in m.minors_modulo(order, base)? {
        if p.is_zero() {
            continue;
        }
        let key = p.monic();
        if seen.insert(key.to_string()) {
            out.push(p);
        }
    }
    Ok(out)
}

fn check_objective<F: Field>(v: &VarietySpec<F>, g: &MultiPoly<F>) -> Result<()> {
    if !same_ring(g.ring(), v.ring()) {
        return Err(Error::RingMismatch(format!("objective {g} is over another ring")));
    }
    Ok(())
}

fn crit_matrix<F: Field>(v: &VarietySpec<F>, g: &MultiPoly<F>, a: &DirectionSequence<F>, i: usize) -> Result<PolyMatrix<F>> {
    check_objective(v, g)?;
    if i > v.dim() {
        return Err(Error::Dimension(format!("index {i} exceeds the dimension {}", v.dim())));
    }
    if a.len() != i || a.ncols() != v.nvars() {
        return Err(Error::Dimension(format!(
            "expected {i} directions of length {}, got {} of length {}",
            v.nvars(),
            a.len(),
            a.ncols()
        )));
    }
    let ring = v.ring();
    let jac = v.jacobian();
    let grad = PolyMatrix::row_of(ring, g.gradient());
    let dirs = a.as_matrix(ring)?;
    PolyMatrix::stack(&[&jac, &grad, &dirs])
}

/// Generators of the critical ideal of `(g, a_1, …, a_i)` on `v`: the
/// equations plus the `(n-d+i+1)`-minors of `[jac(f); ∇g; a]`.
pub fn crit_ideal<F: Field>(v: &VarietySpec<F>, g: &MultiPoly<F>, a: &DirectionSequence<F>, i: usize) -> Result<Vec<MultiPoly<F>>> {
    let m = crit_matrix(v, g, a, i)?;
    let mut gens = v.generators().to_vec();
    gens.extend(rank_conditions(&m, v.codim() + i + 1, None)?);
    Ok(gens)
}

/// Gröbner basis of the critical ideal, computing the minors modulo the
/// equations (and any `extra` generators, such as linear cuts) first.
pub fn crit_basis<F: Field>(
    v: &VarietySpec<F>,
    g: &MultiPoly<F>,
    a: &DirectionSequence<F>,
    i: usize,
    extra: &[MultiPoly<F>],
) -> Result<GroebnerBasis<F>> {
    let m = crit_matrix(v, g, a, i)?;
    rank_basis(v, &m, v.codim() + i + 1, extra)
}

fn rank_basis<F: Field>(v: &VarietySpec<F>, m: &PolyMatrix<F>, order: usize, extra: &[MultiPoly<F>]) -> Result<GroebnerBasis<F>> {
    let mut base_gens = v.generators().to_vec();
    base_gens.extend_from_slice(extra);
    let base = GroebnerBasis::compute(v.ring(), &base_gens, &MonomialOrder::GREVLEX)?;
    if base.is_unit() {
        return Ok(base);
    }
    let minors = rank_conditions(m, order, Some(&base))?;
    base.extend(&minors)
}

fn polar_matrix<F: Field>(v: &VarietySpec<F>, a: &DirectionSequence<F>, i: usize) -> Result<PolyMatrix<F>> {
    if i == 0 || i > v.dim() {
        return Err(Error::Dimension(format!(
            "polar index {i} outside 1..={}",
            v.dim()
        )));
    }
    if a.len() < i || a.ncols() != v.nvars() {
        return Err(Error::Dimension(format!(
            "expected at least {i} directions of length {}",
            v.nvars()
        )));
    }
    let ring = v.ring();
    let jac = v.jacobian();
    let dirs = a.prefix(i).as_matrix(ring)?;
    PolyMatrix::stack(&[&jac, &dirs])
}

/// Generators of the classical polar variety `W(a_i, V)`: the equations
/// plus the `(n-d+i)`-minors of `[jac(f); a_1; …; a_i]`.
pub fn classical_polar_ideal<F: Field>(v: &VarietySpec<F>, a: &DirectionSequence<F>, i: usize) -> Result<Vec<MultiPoly<F>>> {
    let m = polar_matrix(v, a, i)?;
    let mut gens = v.generators().to_vec();
    gens.extend(rank_conditions(&m, v.codim() + i, None)?);
    Ok(gens)
}

/// Gröbner basis of the classical polar ideal plus `extra` generators.
pub fn polar_basis<F: Field>(
    v: &VarietySpec<F>,
    a: &DirectionSequence<F>,
    i: usize,
    extra: &[MultiPoly<F>],
) -> Result<GroebnerBasis<F>> {
    let m = polar_matrix(v, a, i)?;
    rank_basis(v, &m, v.codim() + i, extra)
}

/// The graph of `g` over `v`: equations `f, g - X_{n+1}` in one more
/// variable, together with the directions `e_{n+1}, (a_1 | 0), …`.
pub fn extend_system<F: Field>(
    v: &VarietySpec<F>,
    g: &MultiPoly<F>,
    a: &DirectionSequence<F>,
) -> Result<(VarietySpec<F>, DirectionSequence<F>)> {
    check_objective(v, g)?;
    if a.ncols() != v.nvars() {
        return Err(Error::Dimension("direction length differs from the number of variables".into()));
    }
    let ring = v.ring();
    let name = ring.fresh_name(&format!("x{}", ring.nvars() + 1));
    let ext = ring.extend(&name)?;
    let mut gens = v
        .generators()
        .iter()
        .map(|f| f.embed(&ext))
        .collect::<Result<Vec<_>>>()?;
    let last = MultiPoly::var(&ext, ring.nvars());
    gens.push(g.embed(&ext)?.sub(&last));
    let field = ring.field();
    let n = ring.nvars();
    let mut rows = Vec::with_capacity(a.len() + 1);
    let mut top = vec![field.zero(); n + 1];
    top[n] = field.one();
    rows.push(top);
    for r in a.rows() {
        let mut row = r.clone();
        row.push(field.zero());
        rows.push(row);
    }
    let mut dirs = DirectionSequence::new(field, n + 1, rows)?;
    dirs.seed = a.seed;
    Ok((VarietySpec::new(gens, v.dim())?, dirs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::groebner::QuotientDim;
    use crate::parse::parse_poly;

    fn circle() -> VarietySpec<Rationals> {
        let r = Ring::new(Rationals, &["x", "y"]).unwrap();
        VarietySpec::new(vec![parse_poly("x^2+y^2-1", &r).unwrap()], 1).unwrap()
    }

    fn strings(ps: &[MultiPoly<Rationals>]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn circle_crit_ideals() {
        let v = circle();
        let r = v.ring().clone();
        let none = DirectionSequence::empty(&Rationals, 2);
        let g = parse_poly("x^3+2*y^3", &r).unwrap();
        assert_eq!(
            strings(&crit_ideal(&v, &g, &none, 0).unwrap()),
            vec!["x^2 + y^2 - 1", "-6*x^2*y + 12*x*y^2"]
        );
        let lin = parse_poly("x", &r).unwrap();
        assert_eq!(
            strings(&crit_ideal(&v, &lin, &none, 0).unwrap()),
            vec!["x^2 + y^2 - 1", "-2*y"]
        );
        let b = crit_basis(&v, &g, &none, 0, &[]).unwrap();
        assert_eq!(b.quotient_dimension(), QuotientDim::Finite(6));
    }

    #[test]
    fn full_index_is_degenerate() {
        let v = circle();
        let r = v.ring().clone();
        let g = parse_poly("x^3+2*y^3", &r).unwrap();
        let a = DirectionSequence::new(&Rationals, 2, vec![vec![Rationals.from_i64(1), Rationals.from_i64(3)]]).unwrap();
        assert!(matches!(crit_ideal(&v, &g, &a, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn circle_polar() {
        let v = circle();
        let q = Rationals;
        let a = DirectionSequence::new(&q, 2, vec![vec![q.one(), q.zero()]]).unwrap();
        assert_eq!(strings(&classical_polar_ideal(&v, &a, 1).unwrap()), vec!["x^2 + y^2 - 1", "-2*y"]);
        assert_eq!(polar_basis(&v, &a, 1, &[]).unwrap().quotient_dimension(), QuotientDim::Finite(2));
        assert!(matches!(classical_polar_ideal(&v, &a, 2), Err(Error::Dimension(_))));
    }

    #[test]
    fn sphere_polar_degree() {
        let f = PrimeField::new(32003).unwrap();
        let r = Ring::new(f, &["x", "y", "z"]).unwrap();
        let v = VarietySpec::new(vec![parse_poly("x^2+y^2+z^2-1", &r).unwrap()], 2).unwrap();
        let a = random_directions(&f, 7, 1, 3).unwrap();
        assert_eq!(polar_basis(&v, &a, 1, &[]).unwrap().quotient_dimension(), QuotientDim::Finite(2));
    }

    #[test]
    fn extension() {
        let v = circle();
        let r = v.ring().clone();
        let g = parse_poly("x^3+2*y^3", &r).unwrap();
        let (ext, dirs) = extend_system(&v, &g, &DirectionSequence::empty(&Rationals, 2)).unwrap();
        assert_eq!(strings(ext.generators()), vec!["x^2 + y^2 - 1", "x^3 + 2*y^3 - x3"]);
        assert_eq!(ext.ring().vars(), &["x", "y", "x3"]);
        assert_eq!(dirs.rows(), &[vec![Rationals.zero(), Rationals.zero(), Rationals.one()]]);
    }

    #[test]
    fn directions() {
        let f = PrimeField::new(2147483647).unwrap();
        assert!(random_directions(&f, 1, 0, 3).unwrap().is_empty());
        let a = random_directions(&f, 1, 2, 3).unwrap();
        assert_eq!(a.rank(), 2);
        assert_eq!(a, random_directions(&f, 1, 2, 3).unwrap());
        assert_ne!(a, random_directions(&f, 2, 2, 3).unwrap());
        assert!(random_directions(&f, 1, 4, 3).is_err());
    }
}
