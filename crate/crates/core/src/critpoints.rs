//! Critical points of a polynomial on a smooth variety: the lifting-fiber
//! pipeline through the graph of the objective, a direct route solving the
//! critical ideal, hypothesis checks and the bound comparison.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{delta_of_variety, naive_bound, theorem1_bound, DeltaVector};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geores::{
    build_lifting_fiber, change_primitive_element, extend_fiber, solve_with_search, FiniteAlgebra, LiftingFiber,
    RationalParametrization,
};
use crate::groebner::{GbStats, GroebnerBasis, QuotientDim};
use crate::polar::{crit_basis, derive_seed, polar_basis, random_directions, DirectionSequence, VarietySpec};
use crate::poly::MultiPoly;
use crate::univariate::eval_cleared_mod;

/// Which computation produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Algorithm1,
    Direct,
}

/// Hypotheses under which the count is bounded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub finite: bool,
    /// Quotient dimension of the critical ideal, with multiplicities.
    pub multiplicity_count: Option<usize>,
    pub radical: Option<bool>,
    /// Jacobian rank equals the codimension at every critical point.
    pub smooth_sampled: Option<bool>,
    pub warnings: Vec<String>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.finite && self.radical == Some(true) && self.smooth_sampled != Some(false)
    }
}

/// Critical points of one instance.
#[derive(Clone, Debug)]
pub struct CritResult<F: Field> {
    pub route: Route,
    pub parametrization: Option<RationalParametrization<F>>,
    pub count: usize,
    pub bound: Option<u128>,
    pub hypotheses: HypothesisReport,
    /// The seed that produced the result (differs from the requested one
    /// after a reseed).
    pub seed: u64,
    pub reseeded: bool,
    pub gb_stats: GbStats,
    pub seconds: f64,
}

fn solve_basis<F: Field>(gb: &GroebnerBasis<F>, seed: u64) -> Result<RationalParametrization<F>> {
    let alg = FiniteAlgebra::from_basis(gb)?;
    solve_with_search(&alg, gb.ring(), seed)
}

/// Geometric resolution of the polar variety `W(a_i, V)` of the variety
/// carried by `l`, or `Fail` when it is not a finite reduced set.
pub fn polar_var<F: Field>(
    l: &LiftingFiber<F>,
    a: &DirectionSequence<F>,
    i: usize,
    seed: u64,
) -> Result<(RationalParametrization<F>, GbStats)> {
    let v = l.variety()?;
    let gb = match polar_basis(&v, a, i, &[]) {
        Ok(gb) => gb,
        Err(Error::Degenerate(msg)) => return Err(Error::Fail(msg)),
        Err(e) => return Err(e),
    };
    if gb.quotient_dimension() == QuotientDim::Infinite {
        return Err(Error::Fail("the polar variety is not zero-dimensional".into()));
    }
    match solve_basis(&gb, seed) {
        Ok(p) => Ok((p, gb.stats())),
        Err(Error::NotRadical) => Err(Error::Fail("the polar ideal is not radical".into())),
        Err(e) => Err(e),
    }
}

/// The directions `e_{n+1}, (a_1 | 0), …` on the graph of the objective.
fn graph_directions<F: Field>(a: &DirectionSequence<F>) -> Result<DirectionSequence<F>> {
    let n = a.ncols();
    let field = a.field().clone();
    let mut rows = Vec::with_capacity(a.len() + 1);
    let mut top = vec![field.zero(); n + 1];
    top[n] = field.one();
    rows.push(top);
    for r in a.rows() {
        let mut row = r.clone();
        row.push(field.zero());
        rows.push(row);
    }
    DirectionSequence::new(&field, n + 1, rows)
}

/// Critical points of `g` on the variety of the fiber `l`: extend the fiber
/// by the graph of `g`, solve the first polar variety of the graph, move to
/// the separating form `u_crit` and forget the last coordinate.
pub fn crit_points<F: Field>(
    l: &LiftingFiber<F>,
    g: &MultiPoly<F>,
    a: &DirectionSequence<F>,
    u_crit: Option<&[F::Elem]>,
    seed: u64,
) -> Result<(RationalParametrization<F>, GbStats)> {
    if g.total_degree() == 0 {
        return Err(Error::NotFinite);
    }
    if g.total_degree() < 2 {
        return Err(Error::Invalid(
            "the objective must have degree at least 2; use the polar variety directly for linear forms".into(),
        ));
    }
    let n = l.ring().nvars();
    if a.ncols() != n || a.len() > l.dim() {
        return Err(Error::Dimension(format!("expected at most {} directions of length {n}", l.dim())));
    }
    let extended = extend_fiber(l, g)?;
    let a_ext = graph_directions(a)?;
    let (p, stats) = polar_var(&extended, &a_ext, 1, seed)?;
    let field = l.ring().field();
    let u: Vec<F::Elem> = match u_crit {
        Some(u) => {
            if u.len() != n {
                return Err(Error::Dimension(format!("separating form of length {} on {n} variables", u.len())));
            }
            u.to_vec()
        }
        None => {
            let alg = FiniteAlgebra::from_parametrization(&p)?.truncate(n);
            solve_with_search(&alg, l.ring(), derive_seed(seed, 0xC0))?.lambda().to_vec()
        }
    };
    let mut u_ext = u;
    u_ext.push(field.zero());
    let moved = change_primitive_element(&p, &u_ext)?;
    Ok((moved.project(l.ring())?, stats))
}

/// Critical points by the lifting-fiber pipeline with seeded random
/// choices; a `Fail` triggers one reseed of every choice.
pub fn algorithm1<F: Field>(v: &VarietySpec<F>, g: &MultiPoly<F>, seed: u64) -> Result<CritResult<F>> {
    algorithm1_with_form(v, g, None, seed)
}

/// [`algorithm1`] with a caller-supplied separating form for the output.
pub fn algorithm1_with_form<F: Field>(
    v: &VarietySpec<F>,
    g: &MultiPoly<F>,
    u_crit: Option<&[F::Elem]>,
    seed: u64,
) -> Result<CritResult<F>> {
    let start = Instant::now();
    let attempt = |s: u64| -> Result<(RationalParametrization<F>, GbStats)> {
        let l = build_lifting_fiber(v, s)?;
        let a = random_directions(v.ring().field(), derive_seed(s, 2), v.dim(), v.nvars())?;
        crit_points(&l, g, &a, u_crit, s)
    };
    let (result, used, reseeded) = match attempt(seed) {
        Err(Error::Fail(_)) => {
            let s = derive_seed(seed, 0x5EED);
            (attempt(s), s, true)
        }
        other => (other, seed, false),
    };
    let (p, stats) = match result {
        Err(Error::Fail(msg)) => return Err(Error::Fail(format!("{msg} (after one reseed)"))),
        other => other?,
    };
    Ok(CritResult {
        route: Route::Algorithm1,
        count: p.degree(),
        parametrization: Some(p),
        bound: None,
        hypotheses: HypothesisReport::default(),
        seed: used,
        reseeded,
        gb_stats: stats,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Critical points by solving the critical ideal of `g` on `v` directly.
/// A non-radical ideal yields the count with multiplicities and no
/// parametrization.
pub fn crit_points_direct<F: Field>(v: &VarietySpec<F>, g: &MultiPoly<F>, seed: u64) -> Result<CritResult<F>> {
    let start = Instant::now();
    let gb = crit_basis(v, g, &DirectionSequence::empty(v.ring().field(), v.nvars()), 0, &[])?;
    let count = gb.quotient_dimension().finite().ok_or(Error::NotFinite)?;
    let mut hypotheses = HypothesisReport {
        finite: true,
        multiplicity_count: Some(count),
        ..Default::default()
    };
    let parametrization = match solve_basis(&gb, seed) {
        Ok(p) => {
            hypotheses.radical = Some(true);
            Some(p)
        }
        Err(Error::NotRadical) => {
            hypotheses.radical = Some(false);
            hypotheses
                .warnings
                .push("the critical ideal is not radical; the count includes multiplicities".into());
            None
        }
        Err(e) => return Err(e),
    };
    Ok(CritResult {
        route: Route::Direct,
        count: parametrization.as_ref().map_or(count, |p| p.degree()),
        parametrization,
        bound: None,
        hypotheses,
        seed,
        reseeded: false,
        gb_stats: gb.stats(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// True when `jac(f)` has rank equal to the codimension at every point of `p`.
pub fn smooth_at_points<F: Field>(v: &VarietySpec<F>, p: &RationalParametrization<F>) -> Result<bool> {
    if p.degree() == 0 {
        return Ok(true);
    }
    let q = p.q();
    let dq = q.derivative();
    let mut common = q.clone();
    for minor in v.jacobian().minors(v.codim())? {
        if minor.is_zero() {
            continue;
        }
        let value = eval_cleared_mod(&minor, p.v(), &dq, q);
        common = common.gcd(&value);
        if common.degree() == Some(0) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Finiteness and radicality of the critical ideal, and smoothness of `v`
/// at the critical points.
pub fn check_hypotheses<F: Field>(v: &VarietySpec<F>, g: &MultiPoly<F>, seed: u64) -> Result<HypothesisReport> {
    let mut report = HypothesisReport::default();
    let gb = crit_basis(v, g, &DirectionSequence::empty(v.ring().field(), v.nvars()), 0, &[])?;
    let Some(count) = gb.quotient_dimension().finite() else {
        report.warnings.push("the critical locus is not finite".into());
        return Ok(report);
    };
    report.finite = true;
    report.multiplicity_count = Some(count);
    match solve_basis(&gb, seed) {
        Ok(_) => report.radical = Some(true),
        Err(Error::NotRadical) => {
            report.radical = Some(false);
            report.warnings.push("the critical ideal is not radical".into());
        }
        Err(e) => return Err(e),
    }
    // singular critical points are the zeros of the critical ideal plus the
    // codimension-sized minors of jac(f)
    let minors = v.jacobian().minors_modulo(v.codim(), Some(&gb))?;
    let smooth = gb.extend(&minors)?.is_unit();
    if !smooth {
        report.warnings.push("the Jacobian drops rank at some critical point".into());
    }
    report.smooth_sampled = Some(smooth);
    Ok(report)
}

/// Count of critical points against the polar-degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub delta: DeltaVector,
    pub objective_degree: u32,
    pub count: usize,
    pub bound: u128,
    pub holds: bool,
    pub tight: bool,
    pub naive: Option<u128>,
    pub hypotheses: HypothesisReport,
}

pub fn verify_bound<F: Field>(v: &VarietySpec<F>, g: &MultiPoly<F>, seed: u64) -> Result<BoundReport> {
    let hypotheses = check_hypotheses(v, g, seed)?;
    if !hypotheses.finite {
        return Err(Error::NotFinite);
    }
    let delta = delta_of_variety(v, seed)?;
    let big_d = g.total_degree();
    let bound = theorem1_bound(&delta, big_d, 0)?;
    let count = crit_points_direct(v, g, seed)?.count;
    let naive = if v.generators().len() == v.codim() {
        naive_bound(&v.degrees(), big_d, v.nvars(), v.dim()).ok()
    } else {
        None
    };
    Ok(BoundReport {
        delta,
        objective_degree: big_d,
        count,
        bound,
        holds: count as u128 <= bound,
        tight: count as u128 == bound,
        naive,
        hypotheses,
    })
}

/// Whether two parametrizations encode the same point set: equal degrees,
/// and equal `q` and `v` once both use a common separating form.
pub fn same_points<F: Field>(a: &RationalParametrization<F>, b: &RationalParametrization<F>, seed: u64) -> Result<bool> {
    if a.degree() != b.degree() || a.ring().vars() != b.ring().vars() {
        return Ok(false);
    }
    let alg = FiniteAlgebra::from_parametrization(a)?;
    let common = solve_with_search(&alg, a.ring(), seed)?;
    let other = match change_primitive_element(b, common.lambda()) {
        Ok(p) => p,
        Err(Error::NotSeparating) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(other.q() == common.q() && other.v() == common.v())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::geores::validate_fiber;
    use crate::linalg::FieldMatrix;
    use crate::parse::parse_poly;
    use crate::poly::Ring;
    use crate::univariate::UniPoly;

    fn circle<F: Field>(field: F) -> VarietySpec<F> {
        let r = Ring::new(field, &["x", "y"]).unwrap();
        VarietySpec::new(vec![parse_poly("x^2+y^2-1", &r).unwrap()], 1).unwrap()
    }

    fn circle_fiber() -> LiftingFiber<Rationals> {
        let q = Rationals;
        let v = circle(q);
        let f = v.generators().to_vec();
        LiftingFiber::new(
            v.ring(),
            f.clone(),
            f,
            1,
            FieldMatrix::identity(&q, 2),
            vec![q.zero()],
            vec![q.zero(), q.one()],
            UniPoly::from_i64s(&q, &[-1, 0, 1]),
            vec![UniPoly::from_i64s(&q, &[0, 1])],
        )
    }

    #[test]
    fn circle_both_routes() {
        let v = circle(Rationals);
        let g = parse_poly("x^3+2*y^3", v.ring()).unwrap();
        let l = circle_fiber();
        assert!(validate_fiber(&l).passed());
        let (p, _) = crit_points(&l, &g, &DirectionSequence::empty(&Rationals, 2), None, 1).unwrap();
        assert_eq!(p.degree(), 6);
        let mut polys = v.generators().to_vec();
        polys.push(parse_poly("12*x*y^2-6*x^2*y", v.ring()).unwrap());
        assert!(p.check(&polys).passed());
        let direct = crit_points_direct(&v, &g, 1).unwrap();
        assert_eq!(direct.count, 6);
        assert!(same_points(&p, direct.parametrization.as_ref().unwrap(), 4).unwrap());
        let a1 = algorithm1(&v, &g, 9).unwrap();
        assert_eq!(a1.count, 6);
        assert!(!a1.reseeded);
    }

    #[test]
    fn linear_and_quadratic_objectives() {
        let v = circle(Rationals);
        let lin = parse_poly("x", v.ring()).unwrap();
        assert_eq!(crit_points_direct(&v, &lin, 0).unwrap().count, 2);
        assert!(matches!(
            crit_points(&circle_fiber(), &lin, &DirectionSequence::empty(&Rationals, 2), None, 0),
            Err(Error::Invalid(_))
        ));
        let sq = parse_poly("x^2", v.ring()).unwrap();
        assert_eq!(crit_points_direct(&v, &sq, 0).unwrap().count, 4);
        let f = PrimeField::new(2147483647).unwrap();
        let r = Ring::new(f, &["x", "y", "z"]).unwrap();
        let sphere = VarietySpec::new(vec![parse_poly("x^2+y^2+z^2-1", &r).unwrap()], 2).unwrap();
        let g = parse_poly("3*x-5*y+7*z", &r).unwrap();
        assert_eq!(crit_points_direct(&sphere, &g, 0).unwrap().count, 2);
    }

    #[test]
    fn polar_var_failures() {
        let q = Rationals;
        let l = circle_fiber();
        let g = parse_poly("x^3+2*y^3", l.ring()).unwrap();
        let e = extend_fiber(&l, &g).unwrap();
        let zero = DirectionSequence::new(&q, 3, vec![vec![q.zero(); 3]]).unwrap();
        assert!(matches!(polar_var(&e, &zero, 1, 0), Err(Error::Fail(_))));
        let lin = DirectionSequence::new(&q, 2, vec![vec![q.one(), q.zero()]]).unwrap();
        assert_eq!(polar_var(&l, &lin, 1, 0).unwrap().0.degree(), 2);
    }

    #[test]
    fn hypotheses() {
        let v = circle(Rationals);
        let g = parse_poly("x^3+2*y^3", v.ring()).unwrap();
        let h = check_hypotheses(&v, &g, 0).unwrap();
        assert!(h.passed());
        assert_eq!(h.multiplicity_count, Some(6));
        let c = parse_poly("5", v.ring()).unwrap();
        let h = check_hypotheses(&v, &c, 0).unwrap();
        assert!(!h.finite);
        assert!(matches!(crit_points_direct(&v, &c, 0), Err(Error::NotFinite)));
    }

    #[test]
    fn cusp_is_flagged() {
        let r = Ring::new(Rationals, &["x", "y"]).unwrap();
        let cusp = VarietySpec::new(vec![parse_poly("y^2-x^3", &r).unwrap()], 1)
            .unwrap()
            .without_smoothness();
        let g = parse_poly("x^2+3*x*y+2*y^2+x+y", &r).unwrap();
        let h = check_hypotheses(&cusp, &g, 0).unwrap();
        assert_eq!(h.smooth_sampled, Some(false));
        assert!(!h.passed());
    }

    #[test]
    fn bound_reports() {
        let v = circle(Rationals);
        let g = parse_poly("x^3+2*y^3", v.ring()).unwrap();
        let r = verify_bound(&v, &g, 0).unwrap();
        assert_eq!((r.count, r.bound), (6, 6));
        assert!(r.holds && r.tight);
        let lin = parse_poly("x+3*y", v.ring()).unwrap();
        let r = verify_bound(&v, &lin, 0).unwrap();
        assert_eq!((r.count, r.bound), (2, 2));
    }
}
