//! Acceptance suite: one PASS/FAIL line per criterion, with its budget.
//! Run with `cargo test -p polarcrit-cli --test acceptance`.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use polarcrit_core::bounds::{
    bidegree_product, bound_via_bidegrees, conormal_bidegree, projection_degree, s_variety_bidegree, theorem1_bound,
    DeltaVector,
};
use polarcrit_core::critpoints::{algorithm1, crit_points_direct, same_points, verify_bound};
use polarcrit_core::geores::{build_lifting_fiber, extend_fiber, validate_fiber, FiberData, LiftingFiber};
use polarcrit_core::parse::parse_poly;
use polarcrit_core::polar::{crit_ideal, DirectionSequence, VarietySpec};
use polarcrit_core::problem::ProblemFile;
use polarcrit_core::univariate::{eval_mod, UniPoly};
use polarcrit_core::{Field, MultiPoly, PrimeField, Rationals, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SUITE_SEED: u64 = 20_240_917;

struct Outcome {
    passed: bool,
    detail: String,
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn polarcrit(args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_polarcrit")).args(args).output().expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

// ---- random instances ----

fn monomials(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u32>| {
                let used: u32 = m.iter().sum();
                (0..=max_deg - used).map(move |e| {
                    let mut next = m.clone();
                    next.push(e);
                    next
                })
            })
            .collect();
    }
    out
}

/// Dense polynomial of total degree exactly `deg` with coefficients in [-9, 9].
fn dense(ring: &std::sync::Arc<Ring<PrimeField>>, deg: u32, rng: &mut ChaCha8Rng) -> MultiPoly<PrimeField> {
    let vars = ring.vars().to_vec();
    let mons = monomials(vars.len(), deg);
    let mut text = String::new();
    let mut top = false;
    for m in &mons {
        let mut c: i64 = rng.gen_range(-9..=9);
        let total: u32 = m.iter().sum();
        if total == deg && c == 0 && !top {
            c = 1;
        }
        if c == 0 {
            continue;
        }
        top |= total == deg;
        let sign = if c < 0 { " - " } else { " + " };
        let mut t = format!("{sign}{}", c.abs());
        for (v, e) in vars.iter().zip(m) {
            if *e > 0 {
                t.push_str(&format!("*{v}^{e}"));
            }
        }
        text.push_str(&t);
    }
    parse_poly(&text, ring).expect("generated polynomial parses")
}

struct Instance {
    label: String,
    v: VarietySpec<PrimeField>,
    g: MultiPoly<PrimeField>,
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let field = PrimeField::default();
    let kind = rng.gen_range(0..3);
    let (names, gen_degrees): (&[&str], Vec<u32>) = match kind {
        0 => (&["x", "y"], vec![rng.gen_range(1..=3)]),
        1 => (&["x", "y", "z"], vec![rng.gen_range(1..=3)]),
        _ => (&["x", "y", "z"], vec![rng.gen_range(1..=2), rng.gen_range(1..=2)]),
    };
    let ring = Ring::new(field, names).unwrap();
    let gens: Vec<_> = gen_degrees.iter().map(|&e| dense(&ring, e, rng)).collect();
    let g = dense(&ring, rng.gen_range(2..=3), rng);
    let dim = names.len() - gens.len();
    Instance {
        label: format!("n={} degrees {:?} D={}", names.len(), gen_degrees, g.total_degree()),
        v: VarietySpec::new(gens, dim).unwrap(),
        g,
    }
}

fn random_hypersurface(rng: &mut ChaCha8Rng) -> Instance {
    let field = PrimeField::default();
    let names: &[&str] = if rng.gen_bool(0.5) { &["x", "y"] } else { &["x", "y", "z"] };
    let ring = Ring::new(field, names).unwrap();
    let e = rng.gen_range(2..=3);
    let f = dense(&ring, e, rng);
    let g = dense(&ring, rng.gen_range(2..=3), rng);
    Instance {
        label: format!("hypersurface n={} degree {e} D={}", names.len(), g.total_degree()),
        v: VarietySpec::new(vec![f], names.len() - 1).unwrap(),
        g,
    }
}

// ---- criteria ----

fn bound_reproduction() -> Outcome {
    let (code, out) = polarcrit(&["bound", "--delta", "1,4,10,12,6", "--degree", "3", "--index", "0", "--degrees", "2,2,2,2"]);
    let printed = out.lines().any(|l| l == "0  241");
    let naive = out.lines().any(|l| l == "naive 2608");
    let delta = DeltaVector::new(vec![1, 4, 10, 12, 6]).unwrap();
    let via = bound_via_bidegrees(&delta, 8, 3, 0).unwrap();
    Outcome {
        passed: code == 0 && printed && naive && via == 241,
        detail: format!("printed 241: {printed}, bidegree pipeline {via}, naive 2608: {naive}"),
    }
}

fn delta_reproduction() -> Outcome {
    let file = data("determinantal.txt");
    let mut seen = Vec::new();
    let mut passed = true;
    for seed in ["1", "2"] {
        let (code, out) = polarcrit(&["delta", file.to_str().unwrap(), "--seed", seed]);
        let line = out.lines().next().unwrap_or("").to_string();
        passed &= code == 0 && line == "delta (1, 4, 10, 12, 6)";
        seen.push(format!("seed {seed}: {line}"));
    }
    Outcome { passed, detail: seen.join("; ") }
}

/// Hand oracle: `6xy(2y - x) = 0` on the circle gives (0, ±1), (±1, 0) and
/// ±(2, 1)/√5, so `q = (T² - u₂²)(T² - u₁²)(T² - (2u₁ + u₂)²/5)`.
fn circle_oracle(u: &[<Rationals as Field>::Elem]) -> UniPoly<Rationals> {
    let f = Rationals;
    let quad = |c: &<Rationals as Field>::Elem| UniPoly::new(&f, vec![f.neg(c), f.zero(), f.one()]);
    let s = f.add(&f.mul(&f.from_i64(2), &u[0]), &u[1]);
    let third = f.div(&f.mul(&s, &s), &f.from_i64(5)).unwrap();
    quad(&f.mul(&u[1], &u[1])).mul(&quad(&f.mul(&u[0], &u[0]))).mul(&quad(&third))
}

fn circle_end_to_end() -> Outcome {
    let ring = Ring::new(Rationals, &["x", "y"]).unwrap();
    let v = VarietySpec::new(vec![parse_poly("x^2 + y^2 - 1", &ring).unwrap()], 1).unwrap();
    let g = parse_poly("x^3 + 2*y^3", &ring).unwrap();
    let (Ok(a1), Ok(direct)) = (algorithm1(&v, &g, SUITE_SEED), crit_points_direct(&v, &g, SUITE_SEED)) else {
        return Outcome { passed: false, detail: "a route errored".into() };
    };
    let (Some(pa), Some(pd)) = (&a1.parametrization, &direct.parametrization) else {
        return Outcome { passed: false, detail: "missing parametrization".into() };
    };
    let ideal = crit_ideal(&v, &g, &DirectionSequence::empty(&Rationals, 2), 0).unwrap();
    let reports_ok = pa.check(&ideal).passed() && pd.check(&ideal).passed();
    let oracle_ok = pa.q() == &circle_oracle(pa.lambda()) && pd.q() == &circle_oracle(pd.lambda());
    let same = same_points(pa, pd, SUITE_SEED).unwrap_or(false);
    let bound = theorem1_bound(&DeltaVector::new(vec![2, 2]).unwrap(), 3, 0).unwrap();
    Outcome {
        passed: a1.count == 6 && direct.count == 6 && bound == 6 && reports_ok && oracle_ok && same,
        detail: format!(
            "counts {}/{}, bound {bound}, invariants {reports_ok}, q matches oracle {oracle_ok}, same points {same}",
            a1.count, direct.count
        ),
    }
}

fn full_count_reproduction() -> Outcome {
    let text = std::fs::read_to_string(data("determinantal.txt")).unwrap();
    let problem = ProblemFile::parse(&text).unwrap().instantiate(PrimeField::default()).unwrap();
    match crit_points_direct(&problem.variety, problem.objective().unwrap(), SUITE_SEED) {
        Ok(r) => {
            let dim = r.hypotheses.multiplicity_count.unwrap_or(0);
            Outcome {
                passed: dim == 241,
                detail: format!(
                    "quotient dimension {dim}, radical {:?}, {} distinct points parametrized",
                    r.hypotheses.radical,
                    r.parametrization.as_ref().map_or("no".to_string(), |p| p.degree().to_string())
                ),
            }
        }
        Err(e) => Outcome { passed: false, detail: e.to_string() },
    }
}

fn arithmetic_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut mismatches = 0;
    let mut linear = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(0..=6);
        let n = rng.gen_range(d + 1..=d + 4);
        let big_d = rng.gen_range(1..=6);
        let i = rng.gen_range(0..=d);
        let delta = DeltaVector::new((0..=d).map(|_| rng.gen_range(1..=60)).collect()).unwrap();
        let product = bidegree_product(
            &conormal_bidegree(&delta, n).unwrap(),
            &s_variety_bidegree(n, i + 1, big_d).unwrap(),
        )
        .unwrap();
        let closed = theorem1_bound(&delta, big_d, i).unwrap();
        if projection_degree(&product, n, i) != closed {
            mismatches += 1;
        }
        if big_d == 1 {
            linear += 1;
            if closed != delta.get(i + 1) {
                mismatches += 1;
            }
        }
    }
    Outcome {
        passed: mismatches == 0 && linear > 0,
        detail: format!("1000 cases ({linear} with D = 1), {mismatches} mismatches"),
    }
}

/// Draws instances whose critical ideal is finite and radical.
fn good_instances(count: usize, draw: fn(&mut ChaCha8Rng) -> Instance, seed: u64) -> (Vec<Instance>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut skipped = 0;
    while out.len() < count {
        let inst = draw(&mut rng);
        match crit_points_direct(&inst.v, &inst.g, SUITE_SEED) {
            Ok(r) if r.parametrization.is_some() => out.push(inst),
            _ => skipped += 1,
        }
    }
    (out, skipped)
}

fn route_equivalence(instances: &[Instance], skipped: usize) -> Outcome {
    let mut disagreements = Vec::new();
    let mut total_points = 0;
    for (k, inst) in instances.iter().enumerate() {
        let seed = SUITE_SEED + k as u64;
        let direct = crit_points_direct(&inst.v, &inst.g, seed).unwrap();
        let a1 = algorithm1(&inst.v, &inst.g, seed);
        let agree = match (&a1, &direct.parametrization) {
            (Ok(a), Some(pd)) => {
                let pa = a.parametrization.as_ref().unwrap();
                pa.degree() == pd.degree() && same_points(pa, pd, seed).unwrap_or(false)
            }
            _ => false,
        };
        total_points += direct.count;
        if !agree {
            disagreements.push(format!("#{k} {}: {:?}", inst.label, a1.as_ref().err()));
        }
    }
    Outcome {
        passed: disagreements.is_empty(),
        detail: format!(
            "{} instances ({} critical points, {skipped} non-radical draws replaced), disagreements: {}",
            instances.len(),
            total_points,
            if disagreements.is_empty() { "none".into() } else { disagreements.join(", ") }
        ),
    }
}

fn bound_soundness(groups: &[&[Instance]]) -> Outcome {
    let mut checked = 0;
    let mut tight = 0;
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    for (k, inst) in groups.iter().flat_map(|g| g.iter()).enumerate() {
        match verify_bound(&inst.v, &inst.g, SUITE_SEED + k as u64) {
            Ok(r) if r.hypotheses.passed() => {
                checked += 1;
                tight += r.tight as usize;
                if !r.holds {
                    violations.push(format!("{}: {} > {}", inst.label, r.count, r.bound));
                }
            }
            Ok(_) => {}
            Err(e) => errors.push(format!("{}: {e}", inst.label)),
        }
    }
    Outcome {
        passed: violations.is_empty() && errors.is_empty(),
        detail: format!(
            "{checked} instances with hypotheses met ({tight} tight), violations: {}, errors: {}",
            violations.len(),
            if errors.is_empty() { "none".into() } else { errors.join("; ") }
        ),
    }
}

fn bump(field: &PrimeField, wire: &str) -> String {
    let x = field.parse_elem(wire).unwrap();
    field.to_wire(&field.add(&x, &field.one()))
}

/// Every single-field alteration of the fiber data.
fn tamperings(data: &FiberData, field: &PrimeField) -> Vec<(&'static str, FiberData)> {
    let mut out = Vec::new();
    let mut t = data.clone();
    t.equations[0] = format!("{} + 1", t.equations[0]);
    out.push(("equations", t));
    let mut t = data.clone();
    t.lifting_system[0] = format!("{} + 1", t.lifting_system[0]);
    out.push(("lifting system", t));
    let mut t = data.clone();
    t.m[0][0] = bump(field, &t.m[0][0]);
    out.push(("M", t));
    let mut t = data.clone();
    t.z[0] = bump(field, &t.z[0]);
    out.push(("z", t));
    let mut t = data.clone();
    t.u[0] = bump(field, &t.u[0]);
    out.push(("u", t));
    let mut t = data.clone();
    t.q[0] = bump(field, &t.q[0]);
    out.push(("Q", t));
    let mut t = data.clone();
    match t.v[0].first_mut() {
        Some(c) => *c = bump(field, c),
        None => t.v[0].push("1".into()),
    }
    out.push(("v", t));
    out
}

/// Independent check that `l` lists exactly the points of the plane curve
/// `f = 0` above its lifting point: `f` restricted to the fiber line, made
/// squarefree, must vanish at `v` modulo `Q` and have degree `deg Q`.
fn genuine_fiber(f: &MultiPoly<PrimeField>, l: &LiftingFiber<PrimeField>) -> bool {
    let field = PrimeField::default();
    let line = Ring::new(field, &["s"]).unwrap();
    let m = l.m();
    if m.inverse().is_none() || l.z().len() != 1 || l.v().len() != 1 {
        return false;
    }
    let xs: Vec<_> = (0..2)
        .map(|i| MultiPoly::linear(&line, &[m.get(i, 1).clone()], field.mul(m.get(i, 0), &l.z()[0])))
        .collect();
    let r = UniPoly::from_multi(&f.substitute(&xs).unwrap(), 0).unwrap();
    let fiber_poly = r.squarefree_part().to_multi(&line, 0);
    let q = l.q();
    let u_value = l
        .u()
        .iter()
        .zip(l.x_coordinates())
        .fold(UniPoly::zero(&field), |acc, (c, x)| acc.add(&x.scale(c)));
    q.is_monic()
        && q.is_squarefree()
        && r.squarefree_part().degree() == q.degree()
        && eval_mod(&fiber_poly, l.v(), q).is_zero()
        && u_value.sub(&UniPoly::t(&field)).rem(q).is_zero()
}

fn fiber_validity() -> Outcome {
    let field = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 0xF1BE);
    let ring = Ring::new(field, &["x", "y"]).unwrap();
    let (mut built, mut extended, mut undetected, mut tampered, mut benign) = (0, 0, Vec::new(), 0, 0);
    let mut problems = Vec::new();
    for k in 0..50u64 {
        let e = rng.gen_range(1..=4);
        let v = VarietySpec::new(vec![dense(&ring, e, &mut rng)], 1).unwrap();
        let g = dense(&ring, rng.gen_range(2..=3), &mut rng);
        let fiber = match build_lifting_fiber(&v, SUITE_SEED + k) {
            Ok(l) => l,
            Err(err) => {
                problems.push(format!("curve {k}: {err}"));
                continue;
            }
        };
        if validate_fiber(&fiber).passed() {
            built += 1;
        } else {
            problems.push(format!("curve {k} fiber fails {:?}", validate_fiber(&fiber).failures()));
        }
        match extend_fiber(&fiber, &g) {
            Ok(x) if validate_fiber(&x).passed() => extended += 1,
            Ok(x) => problems.push(format!("curve {k} extension fails {:?}", validate_fiber(&x).failures())),
            Err(err) => problems.push(format!("curve {k} extension: {err}")),
        }
        for (name, t) in tamperings(&fiber.to_data(), &field) {
            tampered += 1;
            let caught = match LiftingFiber::from_data(&t, &field) {
                Ok(l) => !validate_fiber(&l).passed(),
                Err(_) => true,
            };
            if !caught {
                // an edit that still describes the fiber exactly is not a corruption
                match LiftingFiber::from_data(&t, &field) {
                    Ok(l) if genuine_fiber(&v.generators()[0], &l) => benign += 1,
                    _ => undetected.push(format!("curve {k} {name}")),
                }
            }
        }
    }
    Outcome {
        passed: built == 50 && extended == 50 && undetected.is_empty() && problems.is_empty(),
        detail: format!(
            "{built}/50 fibers valid, {extended}/50 extensions valid, {}/{tampered} tamperings detected, \
             {benign} accepted edits still describe the fiber exactly{}",
            tampered - undetected.len() - benign,
            if problems.is_empty() && undetected.is_empty() {
                String::new()
            } else {
                format!("; issues: {}", problems.iter().chain(&undetected).cloned().collect::<Vec<_>>().join(", "))
            }
        ),
    }
}

fn main() {
    let mut all = true;
    let mut report = |id: u32, name: &str, budget: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let spent = start.elapsed();
        let ok = o.passed && spent <= budget;
        all &= ok;
        println!(
            "criterion {id} {name}: {} ({}; {:.2} s of {} s)",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            spent.as_secs_f64(),
            budget.as_secs()
        );
    };
    report(1, "bound reproduction", Duration::from_secs(1), &mut bound_reproduction);
    report(2, "polar degrees of the determinantal variety", Duration::from_secs(300), &mut delta_reproduction);
    report(3, "circle end to end", Duration::from_secs(1), &mut circle_end_to_end);
    report(4, "determinantal critical count", Duration::from_secs(1800), &mut full_count_reproduction);
    report(5, "bidegree identity", Duration::from_secs(10), &mut arithmetic_identity);

    let start = Instant::now();
    let (instances, skipped) = good_instances(100, random_instance, SUITE_SEED);
    let drawn = start.elapsed();
    let mut equivalence = || route_equivalence(&instances, skipped);
    // drawing the instances runs the direct route once; count it in the budget
    report(6, "route equivalence", Duration::from_secs(300).saturating_sub(drawn), &mut equivalence);
    let (hypersurfaces, _) = good_instances(50, random_hypersurface, SUITE_SEED + 1);
    let mut soundness = || bound_soundness(&[&instances, &hypersurfaces]);
    report(7, "bound soundness", Duration::from_secs(600), &mut soundness);
    report(8, "fiber validity", Duration::from_secs(120), &mut fiber_validity);

    println!("acceptance: {}", if all { "all criteria pass" } else { "some criteria FAIL" });
    if !all {
        std::process::exit(1);
    }
}
