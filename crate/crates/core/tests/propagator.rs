use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semwave::propagator::{
    bright_soliton, eigenstates, energy, evolve, evolve_linear, evolve_nlse, imaginary_time_ground_state,
    CrankNicolson, Stepper,
};
use semwave::state::inner_product;
use semwave::{
    make_gaussian, normalize, Constants, Error, EvolutionConfig, Method, PotentialSpec, SpatialGrid, WaveFunction,
};

const CN: Method = Method::CrankNicolson;
const SS: Method = Method::SplitStepSpectral;

fn harmonic() -> PotentialSpec {
    PotentialSpec::harmonic(1.0, 1.0).unwrap()
}

fn double_well() -> PotentialSpec {
    PotentialSpec::double_well(1.0, 2.0).unwrap()
}

/// Sign changes of a real vector, skipping entries below a noise floor.
fn sturm_nodes(psi: &WaveFunction) -> usize {
    let re: Vec<f64> = psi.amplitudes().iter().map(|z| z.re).collect();
    let max = re.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let significant: Vec<f64> = re.into_iter().filter(|v| v.abs() > 1e-6 * max).collect();
    significant.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

#[test]
fn harmonic_spectrum_and_nodes() {
    let grid = SpatialGrid::reflecting(512, -10.0, 10.0).unwrap();
    let sol = eigenstates(&harmonic(), &grid, 5, Constants::default()).unwrap();
    for (n, (e, psi)) in sol.energies.iter().zip(&sol.states).enumerate() {
        assert!((e - (n as f64 + 0.5)).abs() < 1e-3, "E{n} = {e}");
        assert_eq!(sturm_nodes(psi), n);
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        for phi in &sol.states[..n] {
            assert!(inner_product(phi, psi).unwrap().norm() < 1e-8);
        }
    }
    // periodic box far larger than the packet gives the same levels
    let ring = SpatialGrid::periodic(512, -10.0, 10.0).unwrap();
    let sol_ring = eigenstates(&harmonic(), &ring, 5, Constants::default()).unwrap();
    for (a, b) in sol.energies.iter().zip(&sol_ring.energies) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn double_well_tunneling_doublet() {
    for n in [512, 1024] {
        let grid = SpatialGrid::reflecting(n, -6.0, 6.0).unwrap();
        let e = eigenstates(&double_well(), &grid, 3, Constants::default()).unwrap().energies;
        let ratio = (e[2] - e[1]) / (e[1] - e[0]);
        assert!(ratio > 5.0, "n={n}: gap ratio {ratio}");
    }
}

#[test]
fn ground_state_is_stationary() {
    let grid = SpatialGrid::periodic(512, -10.0, 10.0).unwrap();
    let sol = eigenstates(&harmonic(), &grid, 1, Constants::default()).unwrap();
    let psi0 = &sol.states[0];
    let traj = evolve_linear(psi0, &harmonic(), &EvolutionConfig::new(1e-3, 1000, CN).with_record_every(1000)).unwrap();
    let overlap = inner_product(psi0, traj.last()).unwrap();
    assert!((overlap.norm() - 1.0).abs() < 1e-6);
    // phase e^{−iE₀T/ħ}; the propagator's three-point Hamiltonian shifts E₀ by dx²/32
    assert!((overlap.arg() + sol.energies[0]).abs() < 1e-4);
}

#[test]
fn free_packet_without_momentum_stays_centered() {
    let grid = SpatialGrid::periodic(512, -20.0, 20.0).unwrap();
    let psi0 = make_gaussian(grid, 0.0, 1.0, 0.0).unwrap();
    for method in [CN, SS] {
        let traj =
            evolve_linear(&psi0, &PotentialSpec::Free, &EvolutionConfig::new(1e-3, 1000, method).with_record_every(50))
                .unwrap();
        for o in &traj.observables {
            assert!(o.position_expectation.abs() < 1e-8);
        }
    }
}

#[test]
fn unitarity_for_every_landscape() {
    let ring = SpatialGrid::periodic(512, -10.0, 10.0).unwrap();
    let box_ = SpatialGrid::reflecting(512, -10.0, 10.0).unwrap();
    for spec in [PotentialSpec::Free, harmonic(), double_well()] {
        for grid in [ring, box_] {
            let psi0 = make_gaussian(grid, 0.7, 0.8, 1.5).unwrap();
            let traj =
                evolve_linear(&psi0, &spec, &EvolutionConfig::new(1e-3, 1000, CN).with_record_every(100)).unwrap();
            assert!(traj.max_norm_defect() < 1e-10, "{spec:?} {grid}");
        }
        let psi0 = make_gaussian(ring, 0.7, 0.8, 1.5).unwrap();
        let traj = evolve_linear(&psi0, &spec, &EvolutionConfig::new(1e-3, 1000, SS).with_record_every(100)).unwrap();
        assert!(traj.max_norm_defect() < 1e-8);
        assert!(traj.max_charge_drift() < 1e-8);
    }
}

#[test]
fn bright_soliton_keeps_its_shape() {
    let grid = SpatialGrid::periodic(1024, -20.0, 20.0).unwrap();
    let c = Constants::default();
    let psi0 = bright_soliton(grid, 1.0, -1.0, c, 0.0).unwrap();
    let traj = evolve_nlse(&psi0, -1.0, &EvolutionConfig::new(1e-3, 1000, SS).with_record_every(1000)).unwrap();
    let exact = bright_soliton(grid, 1.0, -1.0, c, 1.0).unwrap();
    let modulus_err: f64 = traj
        .last()
        .amplitudes()
        .iter()
        .zip(exact.amplitudes())
        .map(|(a, b)| (a.norm() - b.norm()).powi(2))
        .sum::<f64>()
        * grid.dx();
    assert!(modulus_err.sqrt() < 1e-3, "{}", modulus_err.sqrt());
    // the phase also follows the analytic solution
    assert!(traj.last().l2_distance(&exact).unwrap() < 1e-3);
    assert!(traj.max_charge_drift() < 1e-8);
}

#[test]
fn zero_coupling_matches_linear_free_evolution() {
    let grid = SpatialGrid::periodic(256, -15.0, 15.0).unwrap();
    let psi0 = make_gaussian(grid, -1.0, 1.2, 2.0).unwrap();
    let cfg = EvolutionConfig::new(1e-3, 1000, SS).with_record_every(100);
    let a = evolve_nlse(&psi0, 0.0, &cfg).unwrap();
    let b = evolve_linear(&psi0, &PotentialSpec::Free, &cfg).unwrap();
    for (x, y) in a.states.iter().zip(&b.states) {
        assert!(x.max_abs_diff(y).unwrap() < 1e-10);
    }
}

#[test]
fn nlse_conserves_norm_for_any_sign() {
    let grid = SpatialGrid::periodic(256, -15.0, 15.0).unwrap();
    let psi0 = make_gaussian(grid, 0.0, 1.0, 0.5).unwrap();
    for gamma in [-2.0, -0.5, 0.5, 3.0] {
        let traj = evolve_nlse(&psi0, gamma, &EvolutionConfig::new(1e-3, 1000, SS).with_record_every(100)).unwrap();
        assert!(traj.max_norm_defect() < 1e-8);
    }
}

#[test]
fn focusing_and_defocusing_shape_the_peak() {
    let grid = SpatialGrid::periodic(512, -20.0, 20.0).unwrap();
    let psi0 = make_gaussian(grid, 0.0, 1.0, 0.0).unwrap();
    let cfg = EvolutionConfig::new(1e-3, 1000, SS).with_record_every(1000);
    let peak = |gamma: f64| {
        let t = evolve_nlse(&psi0, gamma, &cfg).unwrap();
        t.last().density().into_iter().fold(0.0, f64::max)
    };
    let p0 = psi0.density().into_iter().fold(0.0, f64::max);
    let (focus, free, defocus) = (peak(-3.0), peak(0.0), peak(3.0));
    assert!(focus > 0.9 * p0 && focus > free);
    assert!(defocus < free);
}

#[test]
fn linear_evolution_is_linear() {
    let grid = SpatialGrid::periodic(256, -10.0, 10.0).unwrap();
    let psi = make_gaussian(grid, -2.0, 0.7, 1.0).unwrap();
    let phi = make_gaussian(grid, 1.5, 1.1, -2.0).unwrap();
    let (alpha, beta) = (Complex64::new(0.6, -0.3), Complex64::new(-1.2, 0.8));
    let mix: Vec<Complex64> =
        psi.amplitudes().iter().zip(phi.amplitudes()).map(|(a, b)| alpha * a + beta * b).collect();
    let mix = WaveFunction::new(grid, mix).unwrap();
    for method in [CN, SS] {
        let cfg = EvolutionConfig::new(2e-3, 300, method).with_record_every(300);
        let evolved = |w: &WaveFunction| evolve_linear(w, &harmonic(), &cfg).unwrap().last().clone();
        let (a, b, m) = (evolved(&psi), evolved(&phi), evolved(&mix));
        for i in 0..grid.n_points() {
            let sum = alpha * a.amplitudes()[i] + beta * b.amplitudes()[i];
            assert!((sum - m.amplitudes()[i]).norm() < 1e-8);
        }
    }
}

#[test]
fn crank_nicolson_is_time_reversible() {
    let grid = SpatialGrid::reflecting(400, -10.0, 10.0).unwrap();
    let psi0 = make_gaussian(grid, 1.0, 0.8, 2.0).unwrap();
    let v: Vec<f64> = grid.points().iter().map(|&x| double_well().evaluate(x, 0.0).unwrap()).collect();
    let c = Constants::default();
    let mut fwd = CrankNicolson::new(&grid, &v, c, 1e-3).unwrap();
    let mut back = CrankNicolson::new(&grid, &v, c, -1e-3).unwrap();
    let mut amps = psi0.amplitudes().to_vec();
    for _ in 0..500 {
        fwd.step(&mut amps);
    }
    let moved = WaveFunction::new(grid, amps.clone()).unwrap();
    assert!(moved.max_abs_diff(&psi0).unwrap() > 1e-2);
    for _ in 0..500 {
        back.step(&mut amps);
    }
    let back = WaveFunction::new(grid, amps).unwrap();
    assert!(back.max_abs_diff(&psi0).unwrap() < 1e-6);
}

#[test]
fn second_order_in_time() {
    let grid = SpatialGrid::periodic(256, -10.0, 10.0).unwrap();
    let psi0 = make_gaussian(grid, 1.0, 0.8, 0.5).unwrap();
    let t_end = 0.5;
    for method in [CN, SS] {
        let run = |dt: f64| {
            let steps = (t_end / dt).round() as usize;
            evolve_linear(&psi0, &harmonic(), &EvolutionConfig::new(dt, steps, method).with_record_every(steps))
                .unwrap()
                .last()
                .clone()
        };
        let dt = 0.02;
        let reference = run(dt / 8.0);
        let coarse = run(dt).l2_distance(&reference).unwrap();
        let fine = run(dt / 2.0).l2_distance(&reference).unwrap();
        let factor = coarse / fine;
        assert!((3.0..=5.0).contains(&factor), "{method:?}: factor {factor}");
    }
}

#[test]
fn energy_is_conserved() {
    let grid = SpatialGrid::periodic(512, -10.0, 10.0).unwrap();
    let psi0 = make_gaussian(grid, 1.0, 0.8, 0.5).unwrap();
    for spec in [PotentialSpec::Free, harmonic(), double_well()] {
        for method in [CN, SS] {
            let traj =
                evolve_linear(&psi0, &spec, &EvolutionConfig::new(1e-3, 1000, method).with_record_every(10)).unwrap();
            let e0 = traj.observables[0].energy;
            for o in &traj.observables {
                assert!(((o.energy - e0) / e0).abs() < 1e-4, "{spec:?} {method:?}: {} vs {e0}", o.energy);
            }
        }
    }
    // NLSE conserves the functional with the ½γ|ψ|⁴ term
    let soliton =
        bright_soliton(SpatialGrid::periodic(1024, -20.0, 20.0).unwrap(), 1.0, -1.0, Constants::default(), 0.0)
            .unwrap();
    let traj = evolve_nlse(&soliton, -1.0, &EvolutionConfig::new(1e-3, 1000, SS).with_record_every(100)).unwrap();
    let e0 = traj.observables[0].energy;
    assert!((e0 + 1.0 / 3.0).abs() < 1e-6, "soliton energy {e0}");
    for o in &traj.observables {
        assert!(((o.energy - e0) / e0).abs() < 1e-4);
    }
}

fn random_packet(grid: SpatialGrid, seed: u64) -> WaveFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts: Vec<(f64, f64, Complex64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(-3.0..3.0),
                rng.random_range(0.5..1.5),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    let psi = WaveFunction::from_fn(grid, |x| {
        parts.iter().map(|(c, w, a)| a * (-(x - c).powi(2) / (2.0 * w * w)).exp()).sum()
    })
    .unwrap();
    normalize(&psi).unwrap()
}

#[test]
fn imaginary_time_finds_harmonic_ground_state() {
    let grid = SpatialGrid::periodic(256, -10.0, 10.0).unwrap();
    for (seed, method, grid) in
        [(1, SS, grid), (2, SS, grid), (3, CN, grid), (4, CN, SpatialGrid::reflecting(256, -10.0, 10.0).unwrap())]
    {
        let psi0 = random_packet(grid, seed);
        let cfg = EvolutionConfig::new(1e-2, 20_000, method);
        let gs = imaginary_time_ground_state(&harmonic(), &grid, &psi0, &cfg, 1e-12).unwrap();
        assert!((gs.energy - 0.5).abs() < 1e-3, "seed {seed}: {}", gs.energy);
        // monotone relaxation, allowing for rounding
        for w in gs.energy_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{} after {}", w[1], w[0]);
        }
    }
}

#[test]
fn imaginary_time_fixed_point() {
    let grid = SpatialGrid::periodic(256, -10.0, 10.0).unwrap();
    let cfg = EvolutionConfig::new(1e-2, 10_000, SS);
    let first = imaginary_time_ground_state(&harmonic(), &grid, &random_packet(grid, 9), &cfg, 1e-13).unwrap();
    let again = imaginary_time_ground_state(&harmonic(), &grid, &first.state, &cfg, 1e-10).unwrap();
    assert!(again.steps <= 2);
    assert!((again.energy - first.energy).abs() < 1e-10);
}

#[test]
fn double_well_relaxation_breaks_the_symmetry() {
    let grid = SpatialGrid::periodic(256, -6.0, 6.0).unwrap();
    let cfg = EvolutionConfig::new(5e-3, 20_000, SS);
    let settle = |center: f64| {
        let psi0 = make_gaussian(grid, center, 0.5, 0.0).unwrap();
        imaginary_time_ground_state(&double_well(), &grid, &psi0, &cfg, 1e-10).unwrap()
    };
    let right = settle(1.5);
    let left = settle(-1.5);
    let (xr, xl) = (right.state.position_expectation(), left.state.position_expectation());
    assert!(xr > 1.0 && xl < -1.0, "{xr} {xl}");
    assert!((right.energy - left.energy).abs() < 1e-6);
    // the settled state sits just above the symmetric ground state
    let e0 = eigenstates(&double_well(), &grid, 1, Constants::default()).unwrap().energies[0];
    assert!(right.energy >= e0 - 1e-2 && right.energy - e0 < 1e-2);
}

#[test]
fn relaxation_reports_non_convergence() {
    let grid = SpatialGrid::periodic(128, -10.0, 10.0).unwrap();
    let psi0 = random_packet(grid, 5);
    let cfg = EvolutionConfig::new(1e-3, 3, SS);
    match imaginary_time_ground_state(&harmonic(), &grid, &psi0, &cfg, 1e-12) {
        Err(Error::ConvergenceFailure { steps, last_energy }) => {
            assert_eq!(steps, 3);
            assert!(last_energy.is_finite() && last_energy < energy(&psi0, &harmonic(), Constants::default()));
        }
        other => panic!("expected convergence failure, got {other:?}"),
    }
    assert!(imaginary_time_ground_state(&harmonic(), &grid, &psi0, &cfg, 0.0).is_err());
}

#[test]
fn state_dependent_relaxation() {
    // Mexican hat on a ring: the flat state at the preferred density
    // ρ = μ²/2λ minimises the functional among constant states.
    let grid = SpatialGrid::periodic(128, 0.0, 10.0).unwrap();
    let spec = PotentialSpec::mexican_hat(1.0, 1.0).unwrap();
    let psi0 =
        normalize(&WaveFunction::from_fn(grid, |x| Complex64::new(1.0 + 0.3 * (0.6283 * x).cos(), 0.0)).unwrap())
            .unwrap();
    for method in [SS, CN] {
        let gs = imaginary_time_ground_state(&spec, &grid, &psi0, &EvolutionConfig::new(1e-2, 20_000, method), 1e-12)
            .unwrap();
        // normalized flat state: ρ = 1/L
        let rho = 0.1;
        let expected = (-rho + rho * rho) * 10.0;
        assert!((gs.energy - expected).abs() < 1e-6, "{method:?}: {}", gs.energy);
    }
    // and the real-time flow conserves the charge
    let traj = evolve(&psi0, &spec, &EvolutionConfig::new(1e-3, 1000, SS).with_record_every(100)).unwrap();
    assert!(traj.max_charge_drift() < 1e-8);
}
