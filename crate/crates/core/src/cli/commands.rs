use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::output::{Cell, Table, Writer};
use super::{
    BuscheckArgs, CliError, CnotArgs, Command, Common, CompileArgs, DephaseArgs, DeutschArgs,
    EntanglerArgs, GroverArgs, RunScheduleArgs,
};
use crate::algolab::{
    default_grover_t_max, default_oracle_time, run_cnot_analogue, run_deutsch, run_entangler,
    run_grover, OracleKind,
};
use crate::dynamics::{
    correlator_decay_rate, default_dt, evolve_unitary, lindblad_trajectory, LindbladSpec,
};
use crate::entanglement::entanglement_entropy;
use crate::qubus::{compare_effective, BusParams};
use crate::schedc::{
    compile_to_bosonic, parse_schedule, pretty_print, realize_steps, Schedule, Step,
};
use crate::spin::{
    embed, expectation, operator_product, spin_operator, Axis, DensityMatrix, QubitAmplitudes,
    RegisterState,
};
use crate::{Error, C64};

type CliResult<T> = Result<T, CliError>;

pub(super) fn dispatch(command: &Command) -> CliResult<String> {
    let config = serde_json::to_value(command).expect("config serializes");
    match command {
        Command::Entangler(a) => entangler(a, config),
        Command::Cnot(a) => cnot(a, config),
        Command::Deutsch(a) => deutsch(a, config),
        Command::Grover(a) => grover(a, config),
        Command::Dephase(a) => dephase(a, config),
        Command::Buscheck(a) => buscheck(a, config),
        Command::Compile(a) => compile(a, config),
        Command::RunSchedule(a) => run_schedule(a, config),
    }
}

fn writer(common: &Common, config: Value) -> Writer {
    Writer::new(common.out.clone(), common.format, config)
}

/// Maps `f` over `items`, on `jobs` threads when `jobs > 1`. Results keep input order.
fn sweep<T, R, F>(jobs: usize, items: &[T], f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, Error> + Sync + Send,
{
    if jobs <= 1 {
        return Ok(items.iter().map(&f).collect::<Result<_, _>>()?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect::<Result<_, _>>())?)
}

fn check_ns(ns: &[usize]) -> CliResult<()> {
    if ns.is_empty() {
        return Err(CliError::Usage("--n needs at least one value".into()));
    }
    if let Some(n) = ns.iter().find(|&&n| n < 1) {
        return Err(CliError::Usage(format!(
            "boson numbers must be at least 1, got {n}"
        )));
    }
    Ok(())
}

fn check_steps(steps: usize) -> CliResult<()> {
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    Ok(())
}

fn check_time(name: &str, t: f64) -> CliResult<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("{name} must be positive, got {t}")));
    }
    Ok(())
}

fn grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| t_max * i as f64 / steps as f64)
        .collect()
}

fn entangler(a: &EntanglerArgs, config: Value) -> CliResult<String> {
    check_ns(&a.n)?;
    check_steps(a.steps)?;
    check_time("--t-max", a.t_max)?;
    let times = grid(a.t_max, a.steps);
    let runs = sweep(a.common.jobs, &a.n, |&n| {
        let run = run_entangler(n, &times)?;
        let e = entanglement_entropy(&run.entangled, &[1])?;
        Ok((run, e))
    })?;
    let mut w = writer(&a.common, config);
    let mut summary_table = Table::new("entangling_entropy", &["N", "entropy_at_pi_over_4N"]);
    let mut at_quarter = serde_json::Map::new();
    for (&n, (run, e)) in a.n.iter().zip(&runs) {
        let mut t = Table::new(
            format!("entangler_N{n}"),
            &["t", "entropy_bits", "entropy_norm"],
        );
        let tr = &run.trajectory;
        for i in 0..tr.len() {
            t.push(vec![
                tr.times[i].into(),
                tr.columns[0][i].into(),
                tr.columns[1][i].into(),
            ]);
        }
        w.table(&t)?;
        summary_table.push(vec![n.into(), (*e).into()]);
        at_quarter.insert(n.to_string(), json!(e));
    }
    w.table(&summary_table)?;
    Ok(w.summary("entangler", json!({ "entropy_at_pi_over_4N": at_quarter }))?)
}

fn cnot(a: &CnotArgs, config: Value) -> CliResult<String> {
    check_ns(&a.n)?;
    let reports = sweep(a.common.jobs, &a.n, |&n| run_cnot_analogue(n))?;
    let mut t = Table::new(
        "cnot",
        &[
            "N",
            "fidelity_plus",
            "fidelity_minus",
            "probability_empty",
            "probability_full",
        ],
    );
    let mut results = Vec::new();
    for (&n, r) in a.n.iter().zip(&reports) {
        t.push(vec![
            n.into(),
            r.fidelity_plus.into(),
            r.fidelity_minus.into(),
            r.probability_empty.into(),
            r.probability_full.into(),
        ]);
        results.push(json!({
            "N": n,
            "fidelity_plus": r.fidelity_plus,
            "fidelity_minus": r.fidelity_minus,
        }));
    }
    let mut w = writer(&a.common, config);
    w.table(&t)?;
    Ok(w.summary("cnot", Value::Array(results))?)
}

fn deutsch(a: &DeutschArgs, config: Value) -> CliResult<String> {
    check_ns(&a.n)?;
    let oracles: Vec<OracleKind> = if a.oracle.eq_ignore_ascii_case("all") {
        OracleKind::ALL.to_vec()
    } else {
        vec![a.oracle.parse()?]
    };
    if let Some(c) = a.oracle_time {
        check_time("--oracle-time", c)?;
    }
    let cases: Vec<(OracleKind, usize)> = oracles
        .iter()
        .flat_map(|&o| a.n.iter().map(move |&n| (o, n)))
        .collect();
    let outcomes = sweep(a.common.jobs, &cases, |&(oracle, n)| {
        let t = a
            .oracle_time
            .map_or_else(|| default_oracle_time(n), |c| c / n as f64);
        match run_deutsch(oracle, n, t) {
            Ok(o) => Ok((
                t,
                o.classification.to_string(),
                o.overlap_plus,
                o.overlap_minus,
            )),
            Err(Error::AmbiguousOutcome {
                overlap_plus,
                overlap_minus,
            }) => Ok((t, "ambiguous".to_string(), overlap_plus, overlap_minus)),
            Err(e) => Err(e),
        }
    })?;
    let mut t = Table::new(
        "deutsch",
        &[
            "oracle",
            "N",
            "t_oracle",
            "classification",
            "expected",
            "overlap_plus",
            "overlap_minus",
        ],
    );
    let mut results = Vec::new();
    for (&(oracle, n), (time, class, plus, minus)) in cases.iter().zip(outcomes) {
        let expected = oracle.expected().to_string();
        if class == "ambiguous" {
            eprintln!(
                "boseq: warning: {oracle} N={n}: ambiguous outcome at t = {time} (overlaps {plus:.6}, {minus:.6})"
            );
        }
        results.push(json!({
            "oracle": oracle.to_string(),
            "N": n,
            "t_oracle": time,
            "classification": class,
            "correct": class == expected,
            "overlap_plus": plus,
            "overlap_minus": minus,
        }));
        t.push(vec![
            oracle.to_string().into(),
            n.into(),
            time.into(),
            class.into(),
            expected.into(),
            plus.into(),
            minus.into(),
        ]);
    }
    let mut w = writer(&a.common, config);
    w.table(&t)?;
    Ok(w.summary("deutsch", Value::Array(results))?)
}

fn grover(a: &GroverArgs, config: Value) -> CliResult<String> {
    check_ns(&a.n)?;
    check_steps(a.steps)?;
    if let Some(t) = a.t_max {
        check_time("--t-max", t)?;
    }
    let runs = sweep(a.common.jobs, &a.n, |&n| {
        let t_max = a.t_max.unwrap_or_else(|| default_grover_t_max(a.m, n));
        run_grover(a.m, n, t_max, a.steps)
    })?;
    let mut w = writer(&a.common, config);
    let mut peaks = Table::new(
        format!("grover_M{}_peaks", a.m),
        &[
            "N",
            "t_peak",
            "t_peak_times_N",
            "omega_est",
            "omega_commutator",
        ],
    );
    let mut results = Vec::new();
    for (&n, r) in a.n.iter().zip(&runs) {
        let tr = &r.trajectory;
        let mut cols = vec!["t"];
        cols.extend(tr.labels.iter().map(String::as_str));
        let mut t = Table::new(format!("grover_M{}_N{n}", a.m), &cols);
        for i in 0..tr.len() {
            let mut row: Vec<Cell> = vec![tr.times[i].into()];
            row.extend(tr.columns.iter().map(|c| Cell::from(c[i])));
            t.push(row);
        }
        w.table(&t)?;
        let scaled = r.t_peak * n as f64;
        peaks.push(vec![
            n.into(),
            r.t_peak.into(),
            scaled.into(),
            r.omega_est.into(),
            r.omega_commutator.into(),
        ]);
        results.push(json!({
            "N": n,
            "t_peak": r.t_peak,
            "t_peak_times_N": scaled,
            "omega_est": r.omega_est,
            "omega_commutator": r.omega_commutator,
        }));
    }
    w.table(&peaks)?;
    Ok(w.summary("grover", Value::Array(results))?)
}

fn plus_register(n_sites: usize, n: usize) -> Result<RegisterState, Error> {
    let site = QubitAmplitudes::axis_eigenstate(n, Axis::X, true)?;
    RegisterState::product(&vec![site; n_sites])
}

fn dephase(a: &DephaseArgs, config: Value) -> CliResult<String> {
    check_ns(&a.n)?;
    check_steps(a.steps)?;
    check_time("--t-max", a.t_max)?;
    if a.m < 1 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let times = grid(a.t_max, a.steps);
    let runs = sweep(a.common.jobs, &a.n, |&n| {
        let spec = LindbladSpec::dephasing(a.gamma, a.m, n)?;
        let rho = DensityMatrix::from_pure(&plus_register(a.m, n)?);
        let axes: Vec<(Axis, usize)> = (1..=a.m).map(|s| (Axis::X, s)).collect();
        let obs =
            operator_product(&axes, a.m, n)?.scaled(C64::new((n as f64).powi(-(a.m as i32)), 0.0));
        let dt = default_dt(&spec, a.t_max);
        let tr = lindblad_trajectory(&rho, &spec, &times, dt, &[("correlator".into(), obs)])?;
        let rate = correlator_decay_rate(&tr)?;
        Ok((tr, rate))
    })?;
    let mut w = writer(&a.common, config);
    let mut results = Vec::new();
    for (&n, (tr, rate)) in a.n.iter().zip(&runs) {
        let mut t = Table::new(
            format!("dephase_M{}_N{n}", a.m),
            &["t", "correlator", "fitted_rate"],
        );
        for i in 0..tr.len() {
            t.push(vec![
                tr.times[i].into(),
                tr.columns[0][i].into(),
                (*rate).into(),
            ]);
        }
        w.table(&t)?;
        results.push(json!({
            "N": n,
            "fitted_rate": rate,
            "expected_rate": 4.0 * a.gamma * a.m as f64,
        }));
    }
    Ok(w.summary("dephase", Value::Array(results))?)
}

fn buscheck(a: &BuscheckArgs, config: Value) -> CliResult<String> {
    check_ns(&a.n)?;
    if a.delta_factors.is_empty() {
        return Err(CliError::Usage(
            "--delta-factors needs at least one value".into(),
        ));
    }
    let cases: Vec<(usize, f64)> =
        a.n.iter()
            .flat_map(|&n| a.delta_factors.iter().map(move |&f| (n, f)))
            .collect();
    let outcomes = sweep(a.common.jobs, &cases, |&(n, factor)| {
        let delta = factor * a.g * (n as f64).sqrt();
        let mut p = BusParams::with_detuning(n, delta, a.g, a.pulse, 0.0);
        p.photon_cutoff = a.cutoff;
        // exchange half-period of the single-excitation sector
        let t = PI / (8.0 * n as f64 * p.effective_coupling());
        p.t_final = t;
        let warnings = p.warnings();
        let cmp = compare_effective(&p, &RegisterState::fock(n, &[1, 0])?, t)?;
        Ok((delta, t, cmp, warnings))
    })?;
    let mut w = writer(&a.common, config);
    let mut results = Vec::new();
    for &n in &a.n {
        let mut t = Table::new(
            format!("buscheck_N{n}"),
            &["delta", "infidelity", "photon_leak"],
        );
        for (&(cn, _), (delta, time, cmp, warnings)) in cases.iter().zip(&outcomes) {
            if cn != n {
                continue;
            }
            for msg in warnings {
                eprintln!("boseq: warning: N={n}: {msg}");
            }
            t.push(vec![
                (*delta).into(),
                cmp.infidelity().into(),
                cmp.max_photon_population.into(),
            ]);
            results.push(json!({
                "N": n,
                "delta": delta,
                "t": time,
                "infidelity": cmp.infidelity(),
                "leaked_population": cmp.leaked_population,
                "photon_leak": cmp.max_photon_population,
            }));
        }
        w.table(&t)?;
    }
    Ok(w.summary("buscheck", Value::Array(results))?)
}

fn read_schedule(path: &Path) -> CliResult<Schedule> {
    let text = fs::read_to_string(path)?;
    parse_schedule(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "schedule".into(), |s| s.to_string_lossy().into_owned())
}

fn compile(a: &CompileArgs, config: Value) -> CliResult<String> {
    let schedule = read_schedule(&a.input)?;
    let compiled = compile_to_bosonic(&schedule, a.n)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?;
    let text = pretty_print(&compiled);
    let body = format!("# {}\n# config: {config}\n{text}", super::TOOL_VERSION);
    let mut w = writer(&a.common, config);
    let name = format!("{}_N{}.bsched", stem(&a.input), a.n);
    w.raw(&name, body.as_bytes())?;
    Ok(w.summary("compile", json!({ "schedule": text }))?)
}

fn initial_sites(spec: &str, n_sites: usize, n: usize) -> CliResult<Vec<QubitAmplitudes>> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let parts = match parts.len() {
        1 => vec![parts[0]; n_sites],
        k if k == n_sites => parts,
        k => {
            return Err(CliError::Usage(format!(
                "--init lists {k} states for {n_sites} sites"
            )))
        }
    };
    parts
        .iter()
        .map(|p| {
            let bad =
                || CliError::Usage(format!("invalid initial state '{p}' (use x+, y-, z+, ...)"));
            let (axis, sign) = p.split_at_checked(1).ok_or_else(bad)?;
            let axis: Axis = axis.parse().map_err(|_| bad())?;
            let positive = match sign {
                "+" => true,
                "-" => false,
                _ => return Err(bad()),
            };
            Ok(QubitAmplitudes::axis_eigenstate(n, axis, positive)?)
        })
        .collect()
}

fn run_schedule(a: &RunScheduleArgs, config: Value) -> CliResult<String> {
    let mut schedule = read_schedule(&a.input)?;
    match (schedule.n_bosons, a.n) {
        (None, Some(n)) => {
            schedule = compile_to_bosonic(&schedule, n)
                .map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?;
        }
        (None, None) => {
            return Err(CliError::Usage(
                "schedule has no `bosons` line; pass --n to compile it".into(),
            ))
        }
        (Some(b), Some(n)) if b != n => {
            return Err(CliError::Usage(format!(
                "schedule binds {b} bosons but --n is {n}"
            )))
        }
        _ => {}
    }
    let n = schedule.n_bosons.expect("bound above");
    let m = schedule.n_sites;
    let mut state = RegisterState::product(&initial_sites(&a.init, m, n)?)?;
    let observe = |state: &RegisterState, axis: Axis, site: usize| -> Result<f64, Error> {
        let op = embed(&spin_operator(axis, n)?, site, m, n)?;
        Ok(expectation(state, &op)?.re / n as f64)
    };

    let mut t = Table::new(
        "run_schedule",
        &["t", "site", "axis", "value_over_N", "kind"],
    );
    let mut now = 0.0;
    let mut results = Vec::new();
    for step in realize_steps(&schedule)? {
        match step {
            Step::Evolve { hamiltonian, time } => {
                state = evolve_unitary(&state, &hamiltonian, time)?;
                now += time;
            }
            Step::Measure { site, axis } => {
                let v = observe(&state, axis, site)?;
                t.push(vec![
                    now.into(),
                    site.into(),
                    axis.to_string().into(),
                    v.into(),
                    "measure".into(),
                ]);
                results.push(
                    json!({ "t": now, "site": site, "axis": axis.to_string(), "value_over_N": v }),
                );
            }
        }
    }
    for site in 1..=m {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let v = observe(&state, axis, site)?;
            t.push(vec![
                now.into(),
                site.into(),
                axis.to_string().into(),
                v.into(),
                "final".into(),
            ]);
        }
    }
    let mut w = writer(&a.common, config);
    w.table(&t)?;
    Ok(w.summary(
        "run-schedule",
        json!({ "measurements": results, "total_time": now }),
    )?)
}
