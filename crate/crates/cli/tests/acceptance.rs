//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use semwave::gauge::{euler_lagrange_residual, gauge_check, trajectory_continuity, MatterTerms};
use semwave::propagator::{
    bright_soliton, eigenstates, evolve_linear, evolve_nlse, imaginary_time_ground_state, Trajectory,
};
use semwave::semantics::{run_rag_demo, RagConfig};
use semwave::units::{check_equation_terms, parse_expression, parse_identity, QuantityCatalog};
use semwave::{
    make_gaussian, ChunkStore, Constants, EvolutionConfig, GaugeField, GaugeTransform, Method, PotentialSpec,
    SpatialGrid, TokenSpace, WaveFunction,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn harmonic() -> PotentialSpec {
    PotentialSpec::harmonic(1.0, 1.0).unwrap()
}

fn double_well() -> PotentialSpec {
    PotentialSpec::double_well(1.0, 2.0).unwrap()
}

fn nodes(psi: &WaveFunction) -> usize {
    let re: Vec<f64> = psi.amplitudes().iter().map(|z| z.re).collect();
    let peak = re.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let significant: Vec<f64> = re.into_iter().filter(|v| v.abs() > 1e-6 * peak).collect();
    significant.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

fn quantization() -> Outcome {
    let grid = ok(SpatialGrid::reflecting(512, -10.0, 10.0))?;
    let sol = ok(eigenstates(&harmonic(), &grid, 5, Constants::default()))?;
    let mut worst = 0.0f64;
    for (n, (e, psi)) in sol.energies.iter().zip(&sol.states).enumerate() {
        let err = (e - (n as f64 + 0.5)).abs();
        worst = worst.max(err);
        ensure(err < 1e-3, || format!("E{n} = {e}"))?;
        ensure(nodes(psi) == n, || format!("state {n} has {} nodes", nodes(psi)))?;
    }
    Ok(format!("max |E_n - (n+1/2)| = {worst:.2e}, nodes 0..4"))
}

fn packet(grid: SpatialGrid) -> WaveFunction {
    make_gaussian(grid, 0.7, 0.8, 1.5).unwrap()
}

/// The unitarity trajectories, reused by the charge-conservation criterion.
fn unitarity_runs() -> Vec<(String, Trajectory, f64)> {
    let mut runs = Vec::new();
    for spec in [PotentialSpec::Free, harmonic(), double_well()] {
        for (method, bound) in [(Method::CrankNicolson, 1e-10), (Method::SplitStepSpectral, 1e-8)] {
            let grid = SpatialGrid::periodic(512, -10.0, 10.0).unwrap();
            let cfg = EvolutionConfig::new(1e-3, 1000, method).with_record_every(10);
            let traj = evolve_linear(&packet(grid), &spec, &cfg).unwrap();
            runs.push((format!("{spec:?}/{method:?}"), traj, bound));
        }
        let grid = SpatialGrid::reflecting(512, -10.0, 10.0).unwrap();
        let cfg = EvolutionConfig::new(1e-3, 1000, Method::CrankNicolson).with_record_every(10);
        let traj = evolve_linear(&packet(grid), &spec, &cfg).unwrap();
        runs.push((format!("{spec:?}/CrankNicolson/reflecting"), traj, 1e-10));
    }
    runs
}

fn unitarity() -> Outcome {
    let mut worst_cn = 0.0f64;
    let mut worst_ss = 0.0f64;
    for (name, traj, bound) in unitarity_runs() {
        let d = traj.max_norm_defect();
        ensure(d < bound, || format!("{name}: max |norm^2 - 1| = {d:e}"))?;
        if bound < 1e-9 {
            worst_cn = worst_cn.max(d);
        } else {
            worst_ss = worst_ss.max(d);
        }
    }
    Ok(format!("CN max defect {worst_cn:.2e} (< 1e-10), split-step {worst_ss:.2e} (< 1e-8)"))
}

fn soliton_grid() -> SpatialGrid {
    SpatialGrid::periodic(1024, -20.0, 20.0).unwrap()
}

fn soliton_run() -> Trajectory {
    let grid = soliton_grid();
    let psi0 = bright_soliton(grid, 1.0, -1.0, Constants::default(), 0.0).unwrap();
    let cfg = EvolutionConfig::new(1e-3, 1000, Method::SplitStepSpectral).with_record_every(10);
    evolve_nlse(&psi0, -1.0, &cfg).unwrap()
}

fn soliton() -> Outcome {
    let grid = soliton_grid();
    let traj = soliton_run();
    let t = *traj.times.last().unwrap();
    ensure((t - 1.0).abs() < 1e-12, || format!("final time {t}"))?;
    let exact = ok(bright_soliton(grid, 1.0, -1.0, Constants::default(), t))?;
    let err = traj
        .last()
        .amplitudes()
        .iter()
        .zip(exact.amplitudes())
        .map(|(a, b)| (a.norm() - b.norm()).powi(2))
        .sum::<f64>()
        .sqrt()
        * grid.dx().sqrt();
    ensure(err < 1e-3, || format!("L2 modulus error {err:e}"))?;

    // γ = 0 against the linear free propagator
    let start = ok(make_gaussian(grid, -2.0, 1.0, 1.0))?;
    let cfg = EvolutionConfig::new(1e-3, 1000, Method::SplitStepSpectral).with_record_every(1000);
    let nl = ok(evolve_nlse(&start, 0.0, &cfg))?;
    let lin = ok(evolve_linear(&start, &PotentialSpec::Free, &cfg))?;
    let diff = ok(nl.last().max_abs_diff(lin.last()))?;
    ensure(diff < 1e-10, || format!("gamma=0 control differs by {diff:e}"))?;
    Ok(format!("soliton L2 modulus error {err:.2e}; gamma=0 control max diff {diff:.2e}"))
}

fn harmonic_residual(n: usize, dt: f64) -> Result<f64, String> {
    let grid = ok(SpatialGrid::periodic(n, -10.0, 10.0))?;
    let psi0 = ok(make_gaussian(grid, 1.0, 1.0, 0.0))?;
    let steps = (0.1 / dt).round() as usize;
    let cfg = EvolutionConfig::new(dt, steps, Method::CrankNicolson);
    let traj = ok(evolve_linear(&psi0, &harmonic(), &cfg))?;
    ok(euler_lagrange_residual(&traj, &harmonic(), &cfg))
}

fn euler_lagrange() -> Outcome {
    let coarse = harmonic_residual(512, 1e-3)?;
    let fine = harmonic_residual(1024, 5e-4)?;
    let factor = coarse / fine;
    ensure(coarse < 1e-3, || format!("residual {coarse:e}"))?;
    ensure((3.0..=5.0).contains(&factor), || format!("refinement factor {factor:.3}"))?;
    Ok(format!("residual {coarse:.2e} -> {fine:.2e}, factor {factor:.2}"))
}

fn gauge() -> Outcome {
    const Q: f64 = 0.7;
    let grid = ok(SpatialGrid::periodic(512, -10.0, 10.0))?;
    let l = grid.length();
    let field =
        ok(GaugeField::from_fns(grid, Q, |x| 0.3 * (2.0 * PI * x / l).cos(), |x| 0.5 * (4.0 * PI * x / l).sin()))?;
    let psi = ok(make_gaussian(grid, 0.5, 1.0, 1.3))?;
    let (mut dens, mut cov, mut lag, mut charge) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for seed in 0..20 {
        let g = GaugeTransform::random_smooth(&grid, seed, 3);
        let r = ok(gauge_check(&psi, &field, &g, "random", &MatterTerms::none(), Constants::default(), 1e-3))?;
        dens = dens.max(r.max_abs_density_diff);
        cov = cov.max(r.max_covariance_residual);
        lag = lag.max(r.max_lagrangian_diff);
        charge = charge.max((r.charge_after - r.charge_before).abs());
    }
    ensure(dens <= 1e-14, || format!("density diff {dens:e}"))?;
    ensure(cov <= 1e-8, || format!("covariance residual {cov:e}"))?;
    ensure(lag <= 1e-8, || format!("Lagrangian diff {lag:e}"))?;
    ensure(charge <= 1e-12, || format!("charge diff {charge:e}"))?;
    Ok(format!("20 phases: density {dens:.1e}, covariance {cov:.1e}, Lagrangian {lag:.1e}, charge {charge:.1e}"))
}

fn charge_conservation() -> Outcome {
    let mut drift = 0.0f64;
    let mut runs = unitarity_runs();
    runs.push(("soliton".into(), soliton_run(), 0.0));
    for (name, traj, _) in &runs {
        let d = traj.max_charge_drift();
        drift = drift.max(d);
        ensure(d < 1e-8, || format!("{name}: charge drift {d:e}"))?;
    }

    // continuity, every step recorded
    let c = Constants::default();
    let mut cont = 0.0f64;
    let mut steps = 0;
    let mut check = |traj: &Trajectory, grid: SpatialGrid| -> Result<(), String> {
        let zero = ok(GaugeField::zero(grid, 0.7))?;
        for r in ok(trajectory_continuity(traj, &zero, c))? {
            cont = cont.max(r.integrated.abs());
            steps += 1;
        }
        Ok(())
    };
    for spec in [PotentialSpec::Free, harmonic(), double_well()] {
        for method in [Method::CrankNicolson, Method::SplitStepSpectral] {
            let grid = ok(SpatialGrid::periodic(512, -10.0, 10.0))?;
            let traj = ok(evolve_linear(&packet(grid), &spec, &EvolutionConfig::new(1e-3, 1000, method)))?;
            check(&traj, grid)?;
        }
    }
    let grid = soliton_grid();
    let psi0 = ok(bright_soliton(grid, 1.0, -1.0, c, 0.0))?;
    let traj = ok(evolve_nlse(&psi0, -1.0, &EvolutionConfig::new(1e-3, 1000, Method::SplitStepSpectral)))?;
    check(&traj, grid)?;
    ensure(cont < 1e-8, || format!("integrated continuity residual {cont:e}"))?;
    Ok(format!("max charge drift {drift:.1e} over {} runs; continuity {cont:.1e} over {steps} steps", runs.len()))
}

fn dimensions() -> Outcome {
    let cat = QuantityCatalog::standard();
    let identities =
        ["E = m*x^2/t^2", "hbar = m*x^2/t", "q = (m*x)^(1/2)/t", "A = 1/(q*x)", "A = t/(x*sqrt(m*x))", "q^2 = E/x"];
    for text in identities {
        let id = ok(parse_identity(text, &cat))?;
        ensure(id.report.holds, || format!("{text}: delta {}", id.report.delta))?;
    }
    let terms: Vec<_> = ["hbar/t", "hbar^2/(m*x^2)", "E"].iter().map(|t| parse_expression(t, &cat).unwrap()).collect();
    ensure(ok(check_equation_terms(&terms))?, || "Schrodinger terms are not homogeneous".into())?;
    // a deliberate mismatch must be caught
    let wrong = ok(parse_identity("hbar = E", &cat))?;
    ensure(!wrong.report.holds, || "hbar = E accepted".into())?;
    Ok(format!("{} identities exact, Schrodinger terms homogeneous", identities.len()))
}

fn disambiguation() -> Outcome {
    let grid = ok(SpatialGrid::periodic(256, -6.0, 6.0))?;
    let cfg = EvolutionConfig::new(5e-3, 20_000, Method::SplitStepSpectral);
    let settle = |center: f64| {
        let psi0 = make_gaussian(grid, center, 0.5, 0.0).unwrap();
        imaginary_time_ground_state(&double_well(), &grid, &psi0, &cfg, 1e-10)
    };
    let (right, left) = (ok(settle(1.5))?, ok(settle(-1.5))?);
    let (xr, xl) = (right.state.position_expectation(), left.state.position_expectation());
    ensure(xr > 1.0 && xl < -1.0, || format!("<x> = {xr}, {xl}"))?;
    let gap = (right.energy - left.energy).abs();
    ensure(gap < 1e-6, || format!("energy gap {gap:e}"))?;

    let ring = ok(SpatialGrid::periodic(256, -10.0, 10.0))?;
    let start = ok(make_gaussian(ring, 1.0, 1.5, 0.3))?;
    let gs = ok(imaginary_time_ground_state(
        &harmonic(),
        &ring,
        &start,
        &EvolutionConfig::new(1e-2, 20_000, Method::SplitStepSpectral),
        1e-12,
    ))?;
    let e0 = (gs.energy - 0.5).abs();
    ensure(e0 < 1e-3, || format!("harmonic E0 = {}", gs.energy))?;
    Ok(format!("<x> = {xr:+.3} / {xl:+.3}, energy gap {gap:.1e}; harmonic |E0 - 0.5| = {e0:.1e}"))
}

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Full sort by descending cosine, ascending id on ties.
fn oracle_top_k(query: &[f64], store: &ChunkStore, k: usize) -> Vec<(u64, f64)> {
    let qn = query.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut all: Vec<(u64, f64)> = store
        .chunks()
        .iter()
        .map(|c| {
            let dot: f64 = c.embedding.iter().zip(query).map(|(a, b)| a * b).sum();
            let cn = c.embedding.iter().map(|v| v * v).sum::<f64>().sqrt();
            (c.id, dot / (cn * qn))
        })
        .collect();
    all.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

fn rag_anchor() -> Outcome {
    let space = ok(TokenSpace::from_json(&ok(fs::read_to_string(fixture_path("space.json")))?))?;
    let store = ok(ChunkStore::from_jsonl(&ok(fs::read_to_string(fixture_path("chunks.jsonl")))?, &space))?;
    ensure(store.len() == 64, || format!("fixture has {} chunks", store.len()))?;
    let cfg = RagConfig::new("the river bank after heavy rain", "when will the water level fall", 42);
    let t = ok(run_rag_demo(&space, &store, &cfg))?;
    ensure(t.turns.len() == 10, || format!("{} turns", t.turns.len()))?;
    for turn in &t.turns {
        let oracle = oracle_top_k(&turn.query, &store, cfg.k);
        let got: Vec<u64> = turn.retrieved.iter().map(|r| r.id).collect();
        let want: Vec<u64> = oracle.iter().map(|r| r.0).collect();
        ensure(got == want, || format!("turn {}: retrieved {got:?}, oracle {want:?}", turn.turn))?;
        for (r, o) in turn.retrieved.iter().zip(&oracle) {
            ensure((r.similarity - o.1).abs() < 1e-12, || {
                format!("turn {}: similarity {} vs {}", turn.turn, r.similarity, o.1)
            })?;
        }
    }
    ensure(t.max_drift < t.max_control_drift, || {
        format!("max drift {} not below control {}", t.max_drift, t.max_control_drift)
    })?;
    Ok(format!("10 turns match the oracle; max drift {:.4} < control {:.4}", t.max_drift, t.max_control_drift))
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_semwave");
    let inputs = tempfile::tempdir().map_err(|e| e.to_string())?;
    let state = inputs.path().join("packet.json");
    ok(fs::write(
        &state,
        semwave::io::to_json(&make_gaussian(SpatialGrid::periodic(256, -10.0, 10.0).unwrap(), 0.5, 1.0, 1.3).unwrap()),
    ))?;
    let sweep = inputs.path().join("sweep.json");
    ok(fs::write(&sweep, r#"[{"evolution":{"dt":0.002}},{"potential":{"type":"harmonic","mass":1.0,"omega":2.0}}]"#))?;
    let (state, sweep) = (state.to_str().unwrap(), sweep.to_str().unwrap());

    let commands: Vec<Vec<&str>> = vec![
        vec!["eigen"],
        vec!["--format", "csv", "eigen", "--potential", "double-well", "--k", "3", "--x-min", "-6", "--x-max", "6"],
        vec!["evolve", "--steps", "300", "--snapshots", "--record-every", "100"],
        vec!["evolve", "--preset", "soliton", "--steps", "200"],
        vec!["evolve", "--steps", "200", "--sweep", sweep],
        vec!["relax", "--mirror"],
        vec!["gauge-check", "--state", state],
        vec!["units"],
        vec!["rag-demo"],
        vec!["fixture"],
    ];
    let mut files = 0;
    for args in &commands {
        let mut trees = Vec::new();
        for _ in 0..2 {
            let out = tempfile::tempdir().map_err(|e| e.to_string())?;
            let o = ok(Command::new(bin).arg("--out").arg(out.path()).args(args).env_remove("SEMWAVE_OUT").output())?;
            ensure(o.status.success(), || {
                format!("{args:?} exited {:?}: {}", o.status, String::from_utf8_lossy(&o.stderr))
            })?;
            trees.push((tree(out.path()), o.stdout));
        }
        ensure(trees[0] == trees[1], || format!("{args:?} differs between runs"))?;
        ensure(!trees[0].0.is_empty(), || format!("{args:?} wrote nothing"))?;
        files += trees[0].0.len();
    }
    Ok(format!("{} commands run twice, {files} files byte-identical", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("harmonic quantization", quantization),
        ("unitarity", unitarity),
        ("NLSE soliton", soliton),
        ("Euler-Lagrange consistency", euler_lagrange),
        ("gauge invariance", gauge),
        ("charge conservation", charge_conservation),
        ("dimensional analysis", dimensions),
        ("double-well disambiguation", disambiguation),
        ("RAG anchor", rag_anchor),
        ("CLI determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
