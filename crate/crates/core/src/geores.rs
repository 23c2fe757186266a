//! Rational parametrizations of finite sets and lifting fibers.
//!
//! A parametrization `(λ, q, v_1, …, v_n)` encodes the points
//! `(v_1(τ)/q'(τ), …, v_n(τ)/q'(τ))` for the roots `τ` of `q`, with
//! `λ(v) ≡ T·q' (mod q)`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::groebner::GroebnerBasis;
use crate::linalg::FieldMatrix;
use crate::matrix::jacobian;
use crate::parse::parse_poly;
use crate::polar::{derive_seed, nonzero_in, VarietySpec};
use crate::poly::{MonomialOrder, MultiPoly, Ring};
use crate::univariate::{eval_cleared_mod, eval_mod, UniPoly};

/// Coefficient range for random separating forms.
pub const PRIMITIVE_BOUND: i64 = 50;
/// Total candidates tried before declaring the ideal non-radical.
pub const PRIMITIVE_ATTEMPTS: usize = 64;
/// Entry range for random changes of coordinates and lifting points.
pub const FIBER_BOUND: i64 = 20;
const FIBER_ATTEMPTS: u64 = 8;

/// A finite-dimensional commutative algebra presented by the matrices of
/// multiplication by each coordinate and the coordinates of `1`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra<F: Field> {
    field: F,
    dim: usize,
    coords: Vec<FieldMatrix<F>>,
    unit: Vec<F::Elem>,
}

impl<F: Field> FiniteAlgebra<F> {
    /// The quotient ring of a zero-dimensional ideal.
    pub fn from_basis(gb: &GroebnerBasis<F>) -> Result<Self> {
        let (basis, coords) = gb.variable_matrices()?;
        let field = gb.ring().field().clone();
        let mut unit = vec![field.zero(); basis.len()];
        if let Some(pos) = basis.iter().position(|m| m.is_one()) {
            unit[pos] = field.one();
        }
        Ok(FiniteAlgebra {
            field,
            dim: basis.len(),
            coords,
            unit,
        })
    }

    /// `F[T]/q` with the coordinates acting as `v_i / q'`.
    pub fn from_parametrization(p: &RationalParametrization<F>) -> Result<Self> {
        let field = p.q.field().clone();
        let dim = p.degree();
        let shapes = p.shapes()?;
        let coords = shapes.iter().map(|w| multiplication_mod(w, &p.q)).collect();
        let mut unit = vec![field.zero(); dim];
        if dim > 0 {
            unit[0] = field.one();
        }
        Ok(FiniteAlgebra {
            field,
            dim,
            coords,
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ncoords(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinate_matrices(&self) -> &[FieldMatrix<F>] {
        &self.coords
    }

    /// Keeps only the first `k` coordinates.
    pub fn truncate(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.coords.truncate(k);
        out
    }

    pub fn form_matrix(&self, lambda: &[F::Elem]) -> FieldMatrix<F> {
        crate::groebner::combine_matrices(&self.field, self.dim, &self.coords, lambda, &self.field.zero())
    }
}

/// Matrix of multiplication by `w` on `F[T]/q` in the basis `1, T, …`.
fn multiplication_mod<F: Field>(w: &UniPoly<F>, q: &UniPoly<F>) -> FieldMatrix<F> {
    let f = q.field();
    let d = q.degree().unwrap_or(0);
    let mut m = FieldMatrix::zeros(f, d, d);
    let t = UniPoly::t(f);
    let mut col = w.rem(q);
    for j in 0..d {
        for (i, c) in col.coeffs().iter().enumerate() {
            m.set(i, j, c.clone());
        }
        col = col.mul(&t).rem(q);
    }
    m
}

/// Rational parametrization of a finite set.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalParametrization<F: Field> {
    ring: Arc<Ring<F>>,
    lambda: Vec<F::Elem>,
    q: UniPoly<F>,
    v: Vec<UniPoly<F>>,
}

/// Outcome of checking the defining conditions of a parametrization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamReport {
    pub monic: bool,
    pub squarefree: bool,
    pub degrees: bool,
    pub normalization: bool,
    /// One entry per checked polynomial.
    pub membership: Vec<bool>,
}

impl ParamReport {
    pub fn passed(&self) -> bool {
        self.monic && self.squarefree && self.degrees && self.normalization && self.membership.iter().all(|&b| b)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.monic {
            out.push("q is not monic".to_string());
        }
        if !self.squarefree {
            out.push("q is not squarefree".to_string());
        }
        if !self.degrees {
            out.push("some deg v_i >= deg q".to_string());
        }
        if !self.normalization {
            out.push("λ(v) differs from T·q' mod q".to_string());
        }
        for (k, ok) in self.membership.iter().enumerate() {
            if !ok {
                out.push(format!("polynomial {} does not vanish on the encoded points", k + 1));
            }
        }
        out
    }
}

impl<F: Field> RationalParametrization<F> {
    pub fn new(ring: &Arc<Ring<F>>, lambda: Vec<F::Elem>, q: UniPoly<F>, v: Vec<UniPoly<F>>) -> Result<Self> {
        let n = ring.nvars();
        if lambda.len() != n || v.len() != n {
            return Err(Error::Dimension(format!(
                "a parametrization over {n} variables needs {n} form coefficients and {n} numerators"
            )));
        }
        Ok(RationalParametrization {
            ring: ring.clone(),
            lambda,
            q,
            v,
        })
    }

    /// The parametrization of the empty set.
    pub fn empty(ring: &Arc<Ring<F>>, lambda: Vec<F::Elem>) -> Result<Self> {
        let f = ring.field();
        let n = ring.nvars();
        Self::new(ring, lambda, UniPoly::one(f), vec![UniPoly::zero(f); n])
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn lambda(&self) -> &[F::Elem] {
        &self.lambda
    }

    pub fn lambda_poly(&self) -> MultiPoly<F> {
        MultiPoly::linear(&self.ring, &self.lambda, self.ring.field().zero())
    }

    pub fn q(&self) -> &UniPoly<F> {
        &self.q
    }

    pub fn v(&self) -> &[UniPoly<F>] {
        &self.v
    }

    /// Number of encoded points, `deg q`.
    pub fn degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    /// Coordinates in shape form: `X_i = w_i(T)` with `w_i = v_i / q' mod q`.
    pub fn shapes(&self) -> Result<Vec<UniPoly<F>>> {
        if self.degree() == 0 {
            return Ok(vec![UniPoly::zero(self.q.field()); self.v.len()]);
        }
        let inv = self
            .q
            .derivative()
            .inverse_mod(&self.q)
            .ok_or_else(|| Error::Invalid("q' is not invertible modulo q".into()))?;
        Ok(self.v.iter().map(|v| v.mul_mod(&inv, &self.q)).collect())
    }

    /// The point above a root `tau` of `q`.
    pub fn point_at(&self, tau: &F::Elem) -> Option<Vec<F::Elem>> {
        let f = self.q.field();
        if !f.is_zero(&self.q.evaluate(tau)) {
            return None;
        }
        let den = self.q.derivative().evaluate(tau);
        self.v.iter().map(|v| f.div(&v.evaluate(tau), &den)).collect()
    }

    /// Checks the defining conditions and that each of `polys` vanishes on
    /// the encoded points (through `q'^{deg p}·p(v/q') ≡ 0 mod q`).
    pub fn check(&self, polys: &[MultiPoly<F>]) -> ParamReport {
        let f = self.q.field();
        let q = &self.q;
        let dq = q.derivative();
        let deg = self.degree();
        let degrees = self.v.iter().all(|v| v.degree().is_none_or(|k| k < deg.max(1)) && (deg > 0 || v.is_zero()));
        let lam = self
            .lambda
            .iter()
            .zip(&self.v)
            .fold(UniPoly::zero(f), |acc, (c, v)| acc.add(&v.scale(c)));
        let normalization = deg == 0 || lam.sub(&UniPoly::t(f).mul(&dq)).rem(q).is_zero();
        let membership = polys
            .iter()
            .map(|p| deg == 0 || eval_cleared_mod(p, &self.v, &dq, q).is_zero())
            .collect();
        ParamReport {
            monic: q.is_monic(),
            squarefree: q.is_squarefree(),
            degrees,
            normalization,
            membership,
        }
    }

    /// Drops the trailing coordinates beyond the first `k`, into `ring`.
    pub fn project(&self, ring: &Arc<Ring<F>>) -> Result<Self> {
        let k = ring.nvars();
        if k > self.v.len() || ring.vars() != &self.ring.vars()[..k] {
            return Err(Error::RingMismatch("projection target is not a prefix of the variables".into()));
        }
        let tail_used = self.lambda[k..].iter().any(|c| !self.q.field().is_zero(c));
        if tail_used {
            return Err(Error::Invalid("the separating form involves a dropped coordinate".into()));
        }
        Self::new(ring, self.lambda[..k].to_vec(), self.q.clone(), self.v[..k].to_vec())
    }

    pub fn to_data(&self) -> ParametrizationData {
        let f = self.ring.field();
        ParametrizationData {
            field: f.spec(),
            vars: self.ring.vars().to_vec(),
            lambda: self.lambda.iter().map(|c| f.to_wire(c)).collect(),
            q: wire_coeffs(&self.q),
            v: self.v.iter().map(wire_coeffs).collect(),
        }
    }

    pub fn from_data(data: &ParametrizationData, field: &F) -> Result<Self> {
        if data.field != field.spec() {
            return Err(Error::Field(format!("parametrization over {}, expected {}", data.field, field.spec())));
        }
        let ring = Ring::new(field.clone(), &data.vars)?;
        let lambda = parse_elems(field, &data.lambda)?;
        let q = UniPoly::new(field, parse_elems(field, &data.q)?);
        let v = data
            .v
            .iter()
            .map(|c| Ok(UniPoly::new(field, parse_elems(field, c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&ring, lambda, q, v)
    }
}

/// Serialized form of a parametrization; coefficient arrays are in
/// ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametrizationData {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub lambda: Vec<String>,
    pub q: Vec<String>,
    pub v: Vec<Vec<String>>,
}

fn wire_coeffs<F: Field>(p: &UniPoly<F>) -> Vec<String> {
    p.coeffs().iter().map(|c| p.field().to_wire(c)).collect()
}

fn parse_elems<F: Field>(field: &F, items: &[String]) -> Result<Vec<F::Elem>> {
    items
        .iter()
        .map(|s| field.parse_elem(s).map_err(|e| Error::Format(format!("coefficient {s:?}: {e}"))))
        .collect()
}

/// Parametrization of the algebra's points with `λ` as separating form.
pub fn solve_algebra<F: Field>(alg: &FiniteAlgebra<F>, ring: &Arc<Ring<F>>, lambda: &[F::Elem]) -> Result<RationalParametrization<F>> {
    let f = &alg.field;
    let n = alg.ncoords();
    if lambda.len() != n || ring.nvars() != n {
        return Err(Error::Dimension(format!("form of length {} on {n} coordinates", lambda.len())));
    }
    let dim = alg.dim;
    if dim == 0 {
        return RationalParametrization::empty(ring, lambda.to_vec());
    }
    let m = alg.form_matrix(lambda);
    // Krylov basis 1, λ, …, λ^{D-1}
    let mut cols = Vec::with_capacity(dim + 1);
    cols.push(alg.unit.clone());
    for k in 0..dim {
        let next = m.mul_vec(&cols[k]);
        cols.push(next);
    }
    let mut krylov = FieldMatrix::zeros(f, dim, dim);
    for (j, c) in cols[..dim].iter().enumerate() {
        for (i, e) in c.iter().enumerate() {
            krylov.set(i, j, e.clone());
        }
    }
    let inv = krylov.inverse().ok_or(Error::NotSeparating)?;
    let c = inv.mul_vec(&cols[dim]);
    let mut qc: Vec<F::Elem> = c.iter().map(|x| f.neg(x)).collect();
    qc.push(f.one());
    let q = UniPoly::new(f, qc);
    if !q.is_squarefree() {
        return Err(Error::NotSeparating);
    }
    let dq = q.derivative();
    let v = alg
        .coords
        .iter()
        .map(|mi| {
            let w = UniPoly::new(f, inv.mul_vec(&mi.mul_vec(&alg.unit)));
            w.mul_mod(&dq, &q)
        })
        .collect();
    RationalParametrization::new(ring, lambda.to_vec(), q, v)
}

fn candidates<F: Field>(field: &F, n: usize, seed: u64) -> impl Iterator<Item = Vec<F::Elem>> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..PRIMITIVE_ATTEMPTS).map(move |k| {
        if k < n {
            (0..n).map(|i| if i == k { field.one() } else { field.zero() }).collect()
        } else {
            (0..n).map(|_| field.from_i64(nonzero_in(&mut rng, PRIMITIVE_BOUND))).collect()
        }
    })
}

/// Searches a separating form (coordinates first, then seeded random
/// forms) and returns the resulting parametrization.
pub fn solve_with_search<F: Field>(alg: &FiniteAlgebra<F>, ring: &Arc<Ring<F>>, seed: u64) -> Result<RationalParametrization<F>> {
    for lambda in candidates(&alg.field, alg.ncoords(), seed) {
        match solve_algebra(alg, ring, &lambda) {
            Ok(p) => return Ok(p),
            Err(Error::NotSeparating) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotRadical)
}

/// A linear form separating the points of a radical zero-dimensional ideal.
pub fn find_primitive_element<F: Field>(gb: &GroebnerBasis<F>, seed: u64) -> Result<MultiPoly<F>> {
    let alg = FiniteAlgebra::from_basis(gb)?;
    let p = solve_with_search(&alg, gb.ring(), seed)?;
    Ok(p.lambda_poly())
}

fn linear_coeffs<F: Field>(form: &MultiPoly<F>) -> Result<Vec<F::Elem>> {
    let (coeffs, constant) = form
        .as_linear()
        .ok_or_else(|| Error::Invalid(format!("{form} is not a linear form")))?;
    if !form.field().is_zero(&constant) {
        return Err(Error::Invalid(format!("{form} has a constant term")));
    }
    Ok(coeffs)
}

/// Parametrization of the zero set of `gb` with separating form `lambda`.
pub fn solve_zero_dim<F: Field>(gb: &GroebnerBasis<F>, lambda: &MultiPoly<F>) -> Result<RationalParametrization<F>> {
    let coeffs = linear_coeffs(lambda)?;
    let alg = FiniteAlgebra::from_basis(gb)?;
    match solve_algebra(&alg, gb.ring(), &coeffs) {
        Err(Error::NotSeparating) if !check_radical_algebra(&alg, 0) => Err(Error::NotRadical),
        other => other,
    }
}

fn check_radical_algebra<F: Field>(alg: &FiniteAlgebra<F>, seed: u64) -> bool {
    let ring_names: Vec<String> = (0..alg.ncoords()).map(|i| format!("x{i}")).collect();
    let Ok(ring) = Ring::new(alg.field.clone(), &ring_names) else {
        return false;
    };
    solve_with_search(alg, &ring, seed).is_ok()
}

/// True when the zero-dimensional ideal is radical.
pub fn check_radical<F: Field>(gb: &GroebnerBasis<F>, seed: u64) -> Result<bool> {
    let alg = FiniteAlgebra::from_basis(gb)?;
    Ok(check_radical_algebra(&alg, seed))
}

/// The same point set with `u_new` as separating form.
pub fn change_primitive_element<F: Field>(p: &RationalParametrization<F>, u_new: &[F::Elem]) -> Result<RationalParametrization<F>> {
    let alg = FiniteAlgebra::from_parametrization(p)?;
    solve_algebra(&alg, &p.ring, u_new)
}

/// A lifting fiber: coordinates `X = M·Y` in which the projection to
/// `Y_1..Y_d` is finite, the lifting point `z`, and the fiber above it as
/// `Y_{d+j} = v_j(T)` for the roots of `Q`, with `u(X) ≡ T`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftingFiber<F: Field> {
    ring: Arc<Ring<F>>,
    equations: Vec<MultiPoly<F>>,
    lifting_system: Vec<MultiPoly<F>>,
    dim: usize,
    m: FieldMatrix<F>,
    z: Vec<F::Elem>,
    u: Vec<F::Elem>,
    q: UniPoly<F>,
    v: Vec<UniPoly<F>>,
}

/// Outcome of [`validate_fiber`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub shapes: bool,
    pub m_invertible: bool,
    pub q_squarefree: bool,
    pub degrees: bool,
    pub lifting_residues: Vec<bool>,
    pub equation_residues: Vec<bool>,
    pub u_normalized: bool,
    /// The Jacobian of the lifting system in the fiber variables is
    /// invertible at every fiber point.
    pub lifting_simple: bool,
    /// `deg Q` equals the number of points of the variety in the fiber.
    pub complete: bool,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.shapes
            && self.m_invertible
            && self.q_squarefree
            && self.degrees
            && self.u_normalized
            && self.lifting_simple
            && self.complete
            && self.lifting_residues.iter().all(|&b| b)
            && self.equation_residues.iter().all(|&b| b)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let flags = [
            (self.shapes, "inconsistent sizes"),
            (self.m_invertible, "M is singular"),
            (self.q_squarefree, "Q is not squarefree"),
            (self.degrees, "some deg v_j >= deg Q"),
            (self.u_normalized, "u(M·(z, v)) differs from T mod Q"),
            (self.lifting_simple, "the lifting system is singular at some fiber point"),
            (self.complete, "Q misses points of the fiber"),
        ];
        out.extend(flags.iter().filter(|(ok, _)| !ok).map(|(_, msg)| msg.to_string()));
        for (k, ok) in self.lifting_residues.iter().enumerate() {
            if !ok {
                out.push(format!("lifting polynomial {} does not vanish on the fiber", k + 1));
            }
        }
        for (k, ok) in self.equation_residues.iter().enumerate() {
            if !ok {
                out.push(format!("equation {} does not vanish on the fiber", k + 1));
            }
        }
        out
    }
}

impl<F: Field> LiftingFiber<F> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ring: &Arc<Ring<F>>,
        equations: Vec<MultiPoly<F>>,
        lifting_system: Vec<MultiPoly<F>>,
        dim: usize,
        m: FieldMatrix<F>,
        z: Vec<F::Elem>,
        u: Vec<F::Elem>,
        q: UniPoly<F>,
        v: Vec<UniPoly<F>>,
    ) -> Self {
        LiftingFiber {
            ring: ring.clone(),
            equations,
            lifting_system,
            dim,
            m,
            z,
            u,
            q,
            v,
        }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn equations(&self) -> &[MultiPoly<F>] {
        &self.equations
    }

    pub fn lifting_system(&self) -> &[MultiPoly<F>] {
        &self.lifting_system
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> &FieldMatrix<F> {
        &self.m
    }

    pub fn z(&self) -> &[F::Elem] {
        &self.z
    }

    pub fn u(&self) -> &[F::Elem] {
        &self.u
    }

    pub fn q(&self) -> &UniPoly<F> {
        &self.q
    }

    pub fn v(&self) -> &[UniPoly<F>] {
        &self.v
    }

    pub fn variety(&self) -> Result<VarietySpec<F>> {
        VarietySpec::new(self.equations.clone(), self.dim)
    }

    /// Number of fiber points, `deg Q`.
    pub fn degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    /// The fiber points in `X` coordinates, `M·(z ‖ v(T))`.
    pub fn x_coordinates(&self) -> Vec<UniPoly<F>> {
        let f = self.ring.field();
        let n = self.ring.nvars();
        let ys: Vec<UniPoly<F>> = self
            .z
            .iter()
            .map(|c| UniPoly::constant(f, c.clone()))
            .chain(self.v.iter().cloned())
            .collect();
        (0..n)
            .map(|i| {
                ys.iter()
                    .enumerate()
                    .fold(UniPoly::zero(f), |acc, (j, y)| acc.add(&y.scale(self.m.get(i, j))))
                    .rem(&self.q)
            })
            .collect()
    }

    pub fn to_data(&self) -> FiberData {
        let f = self.ring.field();
        FiberData {
            field: f.spec(),
            vars: self.ring.vars().to_vec(),
            dim: self.dim,
            equations: self.equations.iter().map(|p| p.to_string()).collect(),
            lifting_system: self.lifting_system.iter().map(|p| p.to_string()).collect(),
            m: self.m.to_rows().iter().map(|r| r.iter().map(|c| f.to_wire(c)).collect()).collect(),
            z: self.z.iter().map(|c| f.to_wire(c)).collect(),
            u: self.u.iter().map(|c| f.to_wire(c)).collect(),
            q: wire_coeffs(&self.q),
            v: self.v.iter().map(wire_coeffs).collect(),
        }
    }

    pub fn from_data(data: &FiberData, field: &F) -> Result<Self> {
        if data.field != field.spec() {
            return Err(Error::Field(format!("fiber over {}, expected {}", data.field, field.spec())));
        }
        let ring = Ring::new(field.clone(), &data.vars)?;
        let polys = |items: &[String]| -> Result<Vec<MultiPoly<F>>> { items.iter().map(|s| parse_poly(s, &ring)).collect() };
        let rows = data
            .m
            .iter()
            .map(|r| parse_elems(field, r))
            .collect::<Result<Vec<_>>>()?;
        let n = ring.nvars();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Format(format!("M must be {n}x{n}")));
        }
        Ok(LiftingFiber {
            equations: polys(&data.equations)?,
            lifting_system: polys(&data.lifting_system)?,
            dim: data.dim,
            m: FieldMatrix::from_rows(field, rows),
            z: parse_elems(field, &data.z)?,
            u: parse_elems(field, &data.u)?,
            q: UniPoly::new(field, parse_elems(field, &data.q)?),
            v: data
                .v
                .iter()
                .map(|c| Ok(UniPoly::new(field, parse_elems(field, c)?)))
                .collect::<Result<Vec<_>>>()?,
            ring,
        })
    }
}

/// Serialized form of a lifting fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberData {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub dim: usize,
    pub equations: Vec<String>,
    pub lifting_system: Vec<String>,
    pub m: Vec<Vec<String>>,
    pub z: Vec<String>,
    pub u: Vec<String>,
    pub q: Vec<String>,
    pub v: Vec<Vec<String>>,
}

/// Checks the lifting-fiber conditions.
pub fn validate_fiber<F: Field>(l: &LiftingFiber<F>) -> FiberReport {
    let n = l.ring.nvars();
    let d = l.dim;
    let shapes = d <= n
        && l.z.len() == d
        && l.v.len() == n - d
        && l.u.len() == n
        && l.m.rows() == n
        && l.m.cols() == n
        && l.lifting_system.len() == n - d;
    if !shapes {
        return FiberReport::default();
    }
    let f = l.ring.field();
    let deg = l.degree();
    let xs = l.x_coordinates();
    let vanishes = |p: &MultiPoly<F>| deg == 0 || eval_mod(p, &xs, &l.q).is_zero();
    let u_val = l
        .u
        .iter()
        .zip(&xs)
        .fold(UniPoly::zero(f), |acc, (c, x)| acc.add(&x.scale(c)));
    FiberReport {
        shapes,
        m_invertible: l.m.inverse().is_some(),
        q_squarefree: deg > 0 && l.q.is_squarefree() && l.q.is_monic(),
        degrees: l.v.iter().all(|v| v.degree().is_none_or(|k| k < deg)),
        lifting_residues: l.lifting_system.iter().map(vanishes).collect(),
        equation_residues: l.equations.iter().map(vanishes).collect(),
        u_normalized: u_val.sub(&UniPoly::t(f)).rem(&l.q).is_zero(),
        lifting_simple: fiber_ring(f, d, n)
            .and_then(|r| simple_on_fiber(&l.lifting_system, &l.m, &l.z, &r, &l.q, &l.v))
            .unwrap_or(false),
        complete: fiber_point_count(l).is_ok_and(|k| k == Some(deg)),
    }
}

/// Number of points of the variety in the fiber, counted with multiplicity.
fn fiber_point_count<F: Field>(l: &LiftingFiber<F>) -> Result<Option<usize>> {
    let r = fiber_ring(l.ring.field(), l.dim, l.ring.nvars())?;
    let restricted = restrict(&l.equations, &l.m, &l.z, &r)?;
    let gb = GroebnerBasis::compute(&r, &restricted, &MonomialOrder::GREVLEX)?;
    Ok(gb.quotient_dimension().finite())
}

fn fiber_ring<F: Field>(field: &F, d: usize, n: usize) -> Result<Arc<Ring<F>>> {
    let names: Vec<String> = (d + 1..=n).map(|k| format!("y{k}")).collect();
    Ring::new(field.clone(), &names)
}

fn random_invertible<F: Field>(field: &F, n: usize, rng: &mut ChaCha8Rng) -> FieldMatrix<F> {
    use rand::Rng;
    loop {
        let rows: Vec<Vec<F::Elem>> = (0..n)
            .map(|_| (0..n).map(|_| field.from_i64(rng.gen_range(-FIBER_BOUND..=FIBER_BOUND))).collect())
            .collect();
        let m = FieldMatrix::from_rows(field, rows);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// `p(M·(z ‖ Y'))` as polynomials in the fiber variables `Y'`.
fn restrict<F: Field>(
    polys: &[MultiPoly<F>],
    m: &FieldMatrix<F>,
    z: &[F::Elem],
    fiber_ring: &Arc<Ring<F>>,
) -> Result<Vec<MultiPoly<F>>> {
    let f = fiber_ring.field();
    let n = m.rows();
    let d = z.len();
    let xs: Vec<MultiPoly<F>> = (0..n)
        .map(|i| {
            let constant = (0..d).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(m.get(i, j), &z[j])));
            let coeffs: Vec<F::Elem> = (d..n).map(|j| m.get(i, j).clone()).collect();
            MultiPoly::linear(fiber_ring, &coeffs, constant)
        })
        .collect();
    polys.iter().map(|p| p.substitute(&xs)).collect()
}

/// True when the Jacobian of `h∘M` in the fiber variables is invertible at
/// every fiber point.
fn simple_on_fiber<F: Field>(
    h: &[MultiPoly<F>],
    m: &FieldMatrix<F>,
    z: &[F::Elem],
    fiber_ring: &Arc<Ring<F>>,
    q: &UniPoly<F>,
    v: &[UniPoly<F>],
) -> Result<bool> {
    if h.is_empty() {
        return Ok(true);
    }
    let restricted = restrict(h, m, z, fiber_ring)?;
    let det = jacobian(&restricted)?.det()?;
    let value = eval_mod(&det, v, q);
    Ok(!value.is_zero() && value.gcd(q).degree() == Some(0))
}

/// Builds a lifting fiber of `v` from seeded random choices of `M`, `z` and,
/// when there are more equations than the codimension, of the lifting system.
pub fn build_lifting_fiber<F: Field>(v: &VarietySpec<F>, seed: u64) -> Result<LiftingFiber<F>> {
    use rand::Rng;
    let ring = v.ring();
    let f = ring.field();
    let n = v.nvars();
    let d = v.dim();
    let c = n - d;
    let fiber_ring = fiber_ring(f, d, n)?;
    let mut empty = false;
    for attempt in 0..FIBER_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xF1BE_0000 + attempt));
        let m = random_invertible(f, n, &mut rng);
        let z: Vec<F::Elem> = (0..d).map(|_| f.from_i64(rng.gen_range(-FIBER_BOUND..=FIBER_BOUND))).collect();
        let restricted = restrict(v.generators(), &m, &z, &fiber_ring)?;
        let gb = GroebnerBasis::compute(&fiber_ring, &restricted, &MonomialOrder::GREVLEX)?;
        if gb.is_unit() {
            empty = true;
            continue;
        }
        let Ok(alg) = FiniteAlgebra::from_basis(&gb) else { continue };
        let param = match solve_with_search(&alg, &fiber_ring, derive_seed(seed, attempt)) {
            Ok(p) => p,
            Err(Error::NotRadical) => continue,
            Err(e) => return Err(e),
        };
        let shapes = param.shapes()?;
        // u in Y coordinates is (0, λ); in X coordinates u_X = u_Y·M^{-1}
        let minv = m.inverse().expect("invertible by construction");
        let mut u_y = vec![f.zero(); d];
        u_y.extend(param.lambda().iter().cloned());
        let u: Vec<F::Elem> = (0..n)
            .map(|j| (0..n).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&u_y[k], minv.get(k, j)))))
            .collect();
        let mut lifting = None;
        for round in 0..FIBER_ATTEMPTS {
            let h: Vec<MultiPoly<F>> = if v.generators().len() == c && round == 0 {
                v.generators().to_vec()
            } else {
                (0..c)
                    .map(|_| {
                        v.generators().iter().fold(MultiPoly::zero(ring), |acc, g| {
                            acc.add(&g.scale(&f.from_i64(nonzero_in(&mut rng, FIBER_BOUND))))
                        })
                    })
                    .collect()
            };
            if simple_on_fiber(&h, &m, &z, &fiber_ring, param.q(), &shapes)? {
                lifting = Some(h);
                break;
            }
        }
        let Some(h) = lifting else { continue };
        return Ok(LiftingFiber {
            ring: ring.clone(),
            equations: v.generators().to_vec(),
            lifting_system: h,
            dim: d,
            m,
            z,
            u,
            q: param.q().clone(),
            v: shapes,
        });
    }
    if empty {
        Err(Error::EmptyFiber)
    } else {
        Err(Error::Fail(format!("no lifting fiber after {FIBER_ATTEMPTS} attempts")))
    }
}

/// The fiber of the graph of `g`: one more variable `X_{n+1}`, lifting
/// system `H ∪ {g - X_{n+1}}`, `M' = diag(M, 1)`, and the new coordinate
/// `g(M·(z ‖ v(T))) mod Q`.
pub fn extend_fiber<F: Field>(l: &LiftingFiber<F>, g: &MultiPoly<F>) -> Result<LiftingFiber<F>> {
    if !crate::poly::same_ring(g.ring(), &l.ring) {
        return Err(Error::RingMismatch(format!("objective {g} is over another ring")));
    }
    let f = l.ring.field();
    let n = l.ring.nvars();
    let name = l.ring.fresh_name(&format!("x{}", n + 1));
    let ext = l.ring.extend(&name)?;
    let last = MultiPoly::var(&ext, n);
    let graph = g.embed(&ext)?.sub(&last);
    let embed_all = |ps: &[MultiPoly<F>]| -> Result<Vec<MultiPoly<F>>> {
        let mut out = ps.iter().map(|p| p.embed(&ext)).collect::<Result<Vec<_>>>()?;
        out.push(graph.clone());
        Ok(out)
    };
    let mut m = FieldMatrix::zeros(f, n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, l.m.get(i, j).clone());
        }
    }
    m.set(n, n, f.one());
    let mut u = l.u.clone();
    u.push(f.zero());
    let mut v = l.v.clone();
    let extra = if l.degree() == 0 {
        UniPoly::zero(f)
    } else {
        eval_mod(g, &l.x_coordinates(), &l.q)
    };
    v.push(extra);
    Ok(LiftingFiber {
        ring: ext.clone(),
        equations: embed_all(&l.equations)?,
        lifting_system: embed_all(&l.lifting_system)?,
        dim: l.dim,
        m,
        z: l.z.clone(),
        u,
        q: l.q.clone(),
        v,
    })
}
