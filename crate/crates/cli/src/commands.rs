use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use polarcrit_core::bounds::{bound_via_bidegrees, delta_of_variety, naive_bound, theorem1_bound, DeltaVector};
use polarcrit_core::critpoints::{algorithm1_with_form, crit_points_direct, same_points, CritResult};
use polarcrit_core::field::{ALTERNATE_PRIME, DEFAULT_PRIME};
use polarcrit_core::geores::{build_lifting_fiber, extend_fiber, validate_fiber, ParametrizationData, RationalParametrization};
use polarcrit_core::polar::{crit_ideal, DirectionSequence};
use polarcrit_core::problem::{parse_field_spec, ProblemFile};
use polarcrit_core::{Error, Field, FieldSpec, MultiPoly, PrimeField, Rationals, Result};
use serde_json::{json, Value};

use crate::output::{Document, Run, Status, FORMAT_VERSION};
use crate::{BoundArgs, CheckArgs, Cli, Command, CritArgs, FiberArgs, RouteArg};

macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::Prime { modulus } => match PrimeField::new(modulus) {
                Ok($f) => $body,
                Err(e) => Err(e),
            },
        }
    };
}

pub fn run(cli: &Cli) -> Document {
    let start = Instant::now();
    let (command, runs) = match &cli.command {
        Command::Bound(a) => ("bound", vec![bound(cli, a)]),
        Command::Delta(a) => ("delta", par_map(cli.jobs, &a.files, |f| per_file(cli, f, |run, pf, spec| delta_file(cli, run, pf, spec)))),
        Command::Crit(a) => (
            "crit",
            par_map(cli.jobs, &a.files, |f| per_file(cli, f, |run, pf, spec| crit_file(cli, a, run, pf, spec))),
        ),
        Command::Check(a) => ("check", vec![check(cli, a)]),
        Command::Fiber(a) => (
            "fiber",
            par_map(cli.jobs, &a.files, |f| per_file(cli, f, |run, pf, spec| fiber_file(cli, a, run, pf, spec))),
        ),
    };
    Document {
        format: FORMAT_VERSION,
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: cli.seed,
        route: matches!(cli.command, Command::Crit(_)).then_some(cli.route),
        seconds: start.elapsed().as_secs_f64(),
        runs,
    }
}

/// Order-preserving map over `items` with up to `jobs` worker threads.
fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs.min(items.len()) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= items.len() {
                    break;
                }
                let r = f(&items[k]);
                *slots[k].lock().unwrap() = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every slot filled")).collect()
}

fn load(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    ProblemFile::parse(&text)
}

fn resolve_field(cli: &Cli, file: Option<&ProblemFile>) -> Result<FieldSpec> {
    if let Some(p) = cli.prime {
        return FieldSpec::prime(p);
    }
    if let Some(f) = &cli.field {
        return parse_field_spec(f);
    }
    Ok(file.and_then(|f| f.field).unwrap_or_default())
}

fn other_prime(spec: FieldSpec) -> Option<u64> {
    match spec.modulus()? {
        ALTERNATE_PRIME => Some(DEFAULT_PRIME),
        _ => Some(ALTERNATE_PRIME),
    }
}

fn per_file(
    cli: &Cli,
    path: &Path,
    body: impl FnOnce(&mut Run, &ProblemFile, FieldSpec) -> Result<()>,
) -> Run {
    let start = Instant::now();
    let mut run = Run::new(Some(path.display().to_string()));
    let outcome = load(path).and_then(|pf| {
        run.inputs = serde_json::to_value(&pf).unwrap_or(Value::Null);
        let spec = resolve_field(cli, Some(&pf))?;
        run.set_field(spec);
        body(&mut run, &pf, spec)
    });
    if let Err(e) = outcome {
        run.fail_with(&e);
    }
    run.seconds = start.elapsed().as_secs_f64();
    run
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Format(format!("bad {what} {s:?}"))))
        .collect()
}

fn to_json(value: impl serde::Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

// ---- bound ----

fn bound(cli: &Cli, args: &BoundArgs) -> Run {
    let start = Instant::now();
    let mut run = Run::new(args.file.as_ref().map(|p| p.display().to_string()));
    if let Err(e) = bound_inner(cli, args, &mut run) {
        run.fail_with(&e);
    }
    run.seconds = start.elapsed().as_secs_f64();
    run
}

fn bound_inner(cli: &Cli, args: &BoundArgs, run: &mut Run) -> Result<()> {
    let pf = args.file.as_deref().map(load).transpose()?;
    if let Some(pf) = &pf {
        run.inputs = to_json(pf);
    }
    let delta = match (&args.delta, &pf) {
        (Some(text), _) => DeltaVector::new(parse_list(text, "polar degree")?)?,
        (None, Some(pf)) => match pf.delta_vector()? {
            Some(d) => d,
            None => {
                let spec = resolve_field(cli, Some(pf))?;
                run.set_field(spec);
                with_field!(spec, f => delta_of_variety(&pf.instantiate(f)?.variety, cli.seed))?
            }
        },
        (None, None) => return Err(Error::Format("give a problem file or --delta".into())),
    };
    let d = delta.dim();
    let objective_degree = match &pf {
        Some(pf) if pf.objective.is_some() => {
            let spec = resolve_field(cli, Some(pf))?;
            Some(with_field!(spec, f => pf.instantiate(f).and_then(|p| Ok(p.objective()?.total_degree())))?)
        }
        _ => None,
    };
    let big_d = args
        .degree
        .or(objective_degree)
        .ok_or_else(|| Error::Format("give --degree or an OBJECTIVE".into()))?;
    let degrees: Option<Vec<u32>> = match (&args.degrees, &pf) {
        (Some(text), _) => Some(parse_list(text, "degree")?),
        (None, Some(pf)) if !pf.gens.is_empty() => {
            let spec = resolve_field(cli, Some(pf))?;
            let v = with_field!(spec, f => pf.instantiate(f).map(|p| (p.variety.degrees(), p.variety.codim())))?;
            (v.0.len() == v.1).then_some(v.0)
        }
        _ => None,
    };
    let n = args
        .nvars
        .or(pf.as_ref().map(|p| p.vars.len()).filter(|&k| k > 0))
        .or(degrees.as_ref().map(|g| d + g.len()))
        .unwrap_or(d + 1);
    if n <= d {
        return Err(Error::Dimension(format!("{n} variables for a variety of dimension {d}")));
    }
    let indices: Vec<usize> = match args.index {
        Some(i) if i > d => return Err(Error::Dimension(format!("index {i} exceeds the dimension {d}"))),
        Some(i) => vec![i],
        None => (0..=d).collect(),
    };
    let mut rows = Vec::new();
    let mut text = format!("delta {delta}  D = {big_d}  n = {n}\ni  bound\n");
    for &i in &indices {
        let closed = theorem1_bound(&delta, big_d, i)?;
        let via = bound_via_bidegrees(&delta, n, big_d, i)?;
        if closed != via {
            run.flag(
                Status::ValidationFailure,
                format!("index {i}: closed form {closed} differs from the bidegree pipeline {via}"),
            );
        }
        text.push_str(&format!("{i}  {closed}\n"));
        rows.push(json!({ "i": i, "bound": to_json(closed), "bidegree_bound": to_json(via) }));
    }
    let naive = match &degrees {
        Some(g) => match naive_bound(g, big_d, n, d) {
            Ok(b) => Some(b),
            Err(e) => {
                run.warnings.push(format!("naive bound unavailable: {e}"));
                None
            }
        },
        None => None,
    };
    if let Some(b) = naive {
        text.push_str(&format!("naive {b}\n"));
    }
    run.results = json!({
        "delta": delta,
        "objective_degree": big_d,
        "nvars": n,
        "bounds": rows,
        "naive": naive.map(to_json),
    });
    run.text = text;
    Ok(())
}

// ---- delta ----

fn delta_file(cli: &Cli, run: &mut Run, pf: &ProblemFile, spec: FieldSpec) -> Result<()> {
    with_field!(spec, f => delta_in(f, cli, run, pf))?;
    if cli.cross_check {
        match other_prime(spec) {
            Some(p) => {
                let delta = delta_of_variety(&pf.instantiate(PrimeField::new(p)?)?.variety, cli.seed)?;
                if run.results["delta"] != to_json(&delta) {
                    run.warnings.push(format!("GF({p}) gives polar degrees {delta}"));
                }
                run.results["cross_check"] = json!({ "prime": p, "delta": delta });
            }
            None => run.warnings.push("cross-checking applies to prime fields only".into()),
        }
    }
    Ok(())
}

fn delta_in<F: Field>(field: F, cli: &Cli, run: &mut Run, pf: &ProblemFile) -> Result<()> {
    let problem = pf.instantiate(field)?;
    let delta = delta_of_variety(&problem.variety, cli.seed)?;
    run.text = format!("delta {delta}\ndegree {}\n", delta.degree());
    let expected = pf.delta_vector()?;
    if let Some(e) = &expected {
        if e != &delta {
            run.flag(Status::ValidationFailure, format!("the DELTA section says {e}"));
        }
    }
    run.results = json!({
        "delta": delta,
        "degree": to_json(delta.degree()),
        "matches_file": expected.map(|e| e == delta),
    });
    Ok(())
}

// ---- crit ----

fn crit_file(cli: &Cli, args: &CritArgs, run: &mut Run, pf: &ProblemFile, spec: FieldSpec) -> Result<()> {
    let mut pf = pf.clone();
    if let Some(g) = &args.objective {
        pf.objective = Some(g.clone());
        run.inputs = to_json(&pf);
    }
    with_field!(spec, f => crit_in(f, cli, args, run, &pf))?;
    if cli.cross_check {
        match other_prime(spec) {
            Some(p) => {
                let problem = pf.instantiate(PrimeField::new(p)?)?;
                let other = crit_points_direct(&problem.variety, problem.objective()?, cli.seed)?.count;
                if run.results["count"] != json!(other) {
                    run.warnings.push(format!("GF({p}) gives {other} critical points"));
                }
                run.results["cross_check"] = json!({ "prime": p, "count": other });
            }
            None => run.warnings.push("cross-checking applies to prime fields only".into()),
        }
    }
    Ok(())
}

fn crit_in<F: Field>(field: F, cli: &Cli, args: &CritArgs, run: &mut Run, pf: &ProblemFile) -> Result<()> {
    let problem = pf.instantiate(field.clone())?;
    let v = &problem.variety;
    let g = problem.objective()?;
    let u = match &args.u_crit {
        Some(text) => Some(
            parse_list::<String>(text, "coefficient")?
                .iter()
                .map(|c| field.parse_elem(c))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let checks = || crit_ideal(v, g, &DirectionSequence::empty(&field, v.nvars()), 0);
    let mut text = String::new();
    let count = match cli.route {
        RouteArg::Algorithm1 => {
            let r = algorithm1_with_form(v, g, u.as_deref(), cli.seed)?;
            run.results = describe(&r, &checks()?, run, &mut text);
            r.count
        }
        RouteArg::Direct => {
            let r = crit_points_direct(v, g, cli.seed)?;
            let polys = if r.parametrization.is_some() { checks()? } else { Vec::new() };
            run.results = describe(&r, &polys, run, &mut text);
            r.count
        }
        RouteArg::Both => {
            let direct = crit_points_direct(v, g, cli.seed)?;
            let polys = if direct.parametrization.is_some() { checks()? } else { Vec::new() };
            let direct_json = describe(&direct, &polys, run, &mut text);
            match algorithm1_with_form(v, g, u.as_deref(), cli.seed) {
                Ok(a1) => {
                    let a1_json = describe(&a1, &polys, run, &mut text);
                    let agree = match (&a1.parametrization, &direct.parametrization) {
                        (Some(a), Some(b)) => same_points(a, b, cli.seed)?,
                        _ => false,
                    };
                    if agree {
                        text.push_str("routes agree\n");
                    } else {
                        run.flag(Status::ValidationFailure, "the two routes disagree");
                    }
                    run.results = json!({ "count": direct.count, "agree": agree, "algorithm1": a1_json, "direct": direct_json });
                }
                Err(e) => {
                    run.results = json!({ "count": direct.count, "agree": false, "direct": direct_json });
                    run.fail_with(&e);
                }
            }
            direct.count
        }
    };
    if cli.route != RouteArg::Both {
        run.results["count"] = json!(count);
    }
    if args.with_bound {
        let delta = delta_of_variety(v, cli.seed)?;
        let bound = theorem1_bound(&delta, g.total_degree(), 0)?;
        let holds = count as u128 <= bound;
        text.push_str(&format!("bound {bound} from delta {delta}\n"));
        if !holds {
            run.flag(Status::ValidationFailure, format!("{count} critical points exceed the bound {bound}"));
        }
        run.results["bound"] = json!({ "delta": delta, "bound": to_json(bound), "holds": holds, "tight": count as u128 == bound });
    }
    run.text = text;
    Ok(())
}

fn describe<F: Field>(r: &CritResult<F>, checks: &[MultiPoly<F>], run: &mut Run, text: &mut String) -> Value {
    let name = match r.route {
        polarcrit_core::critpoints::Route::Algorithm1 => "algorithm1",
        polarcrit_core::critpoints::Route::Direct => "direct",
    };
    let report = r.parametrization.as_ref().map(|p| p.check(checks));
    text.push_str(&format!("{name}: {} critical points", r.count));
    if r.reseeded {
        text.push_str(&format!(" (reseeded to {})", r.seed));
    }
    text.push('\n');
    if let Some(rep) = &report {
        if rep.passed() {
            text.push_str(&format!("{name}: parametrization checks passed\n"));
        } else {
            run.flag(
                Status::ValidationFailure,
                format!("{name}: parametrization fails {}", rep.failures().join(", ")),
            );
        }
    }
    if r.hypotheses.radical == Some(false) {
        run.status = run.status.max(Status::ValidationFailure);
    }
    for w in &r.hypotheses.warnings {
        run.warnings.push(format!("{name}: {w}"));
    }
    json!({
        "route": r.route,
        "count": r.count,
        "seed": r.seed,
        "reseeded": r.reseeded,
        "seconds": r.seconds,
        "gb_stats": r.gb_stats,
        "hypotheses": r.hypotheses,
        "parametrization": r.parametrization.as_ref().map(|p| p.to_data()),
        "report": report,
    })
}

// ---- check ----

fn find_parametrization(value: &Value) -> Option<ParametrizationData> {
    if let Ok(data) = serde_json::from_value::<ParametrizationData>(value.clone()) {
        return Some(data);
    }
    match value {
        Value::Object(map) => map.values().find_map(find_parametrization),
        Value::Array(items) => items.iter().find_map(find_parametrization),
        _ => None,
    }
}

fn check(cli: &Cli, args: &CheckArgs) -> Run {
    let start = Instant::now();
    let mut run = Run::new(Some(args.file.display().to_string()));
    if let Err(e) = check_inner(cli, args, &mut run) {
        run.fail_with(&e);
    }
    run.seconds = start.elapsed().as_secs_f64();
    run
}

fn check_inner(cli: &Cli, args: &CheckArgs, run: &mut Run) -> Result<()> {
    let path = &args.parametrization;
    let raw = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&raw).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let data = find_parametrization(&value)
        .ok_or_else(|| Error::Format(format!("{} holds no parametrization", path.display())))?;
    let pf = load(&args.file)?;
    run.inputs = to_json(&pf);
    if cli.prime.is_some() || cli.field.is_some() {
        let spec = resolve_field(cli, Some(&pf))?;
        if spec != data.field {
            return Err(Error::Field(format!("parametrization over {}, requested {spec}", data.field)));
        }
    }
    run.set_field(data.field);
    with_field!(data.field, f => check_in(f, &data, &pf, run))
}

fn check_in<F: Field>(field: F, data: &ParametrizationData, pf: &ProblemFile, run: &mut Run) -> Result<()> {
    if data.vars != pf.vars {
        return Err(Error::Format(format!(
            "parametrization variables {:?} do not match the problem variables {:?}",
            data.vars, pf.vars
        )));
    }
    let problem = pf.instantiate(field.clone())?;
    let p = RationalParametrization::from_data(data, &field)?;
    let polys = match &problem.objective {
        Some(g) => crit_ideal(&problem.variety, g, &DirectionSequence::empty(&field, pf.vars.len()), 0)?,
        None => problem.variety.generators().to_vec(),
    };
    let report = p.check(&polys);
    if report.passed() {
        run.text = format!("parametrization of degree {} passes\n", p.degree());
    } else {
        run.flag(Status::ValidationFailure, format!("parametrization fails {}", report.failures().join(", ")));
    }
    run.results = json!({ "degree": p.degree(), "passed": report.passed(), "report": report });
    Ok(())
}

// ---- fiber ----

fn fiber_file(cli: &Cli, args: &FiberArgs, run: &mut Run, pf: &ProblemFile, spec: FieldSpec) -> Result<()> {
    with_field!(spec, f => fiber_in(f, cli, args, run, pf))
}

fn fiber_in<F: Field>(field: F, cli: &Cli, args: &FiberArgs, run: &mut Run, pf: &ProblemFile) -> Result<()> {
    let problem = pf.instantiate(field)?;
    let fiber = build_lifting_fiber(&problem.variety, cli.seed)?;
    let report = validate_fiber(&fiber);
    let mut text = format!("lifting fiber of degree {}\n", fiber.degree());
    if !report.passed() {
        run.flag(Status::ValidationFailure, format!("fiber fails {}", report.failures().join(", ")));
    }
    run.results = json!({ "degree": fiber.degree(), "fiber": fiber.to_data(), "report": report });
    if args.extend {
        let extended = extend_fiber(&fiber, problem.objective()?)?;
        let ext_report = validate_fiber(&extended);
        text.push_str(&format!("extended fiber of degree {}\n", extended.degree()));
        if !ext_report.passed() {
            run.flag(Status::ValidationFailure, format!("extended fiber fails {}", ext_report.failures().join(", ")));
        }
        run.results["extended"] = json!({ "degree": extended.degree(), "fiber": extended.to_data(), "report": ext_report });
    }
    run.text = text;
    Ok(())
}
