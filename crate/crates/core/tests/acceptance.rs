//! The acceptance gate for the engine model. One test per criterion; each
//! prints a single PASS/FAIL line carrying the measured values and the
//! pinned bounds, so the whole target reads as a checklist under
//! `cargo test --test acceptance -- --nocapture`.

mod common;

use common::{
    evolve_by_exponential, min_eigenvalue, random_density, random_pure, seeded_rng, trace_distance,
};
use rand::Rng;
use spin_stirling::cycle::{run_cycle, sweep_theta2, CycleResult, EngineMode};
use spin_stirling::lindblad::{
    build_dissipator, calibrate_gamma0, estimate_power, propagate, run_isothermal,
    IsothermalProtocol, RELAXATION_TARGET_NS,
};
use spin_stirling::operator::Operator;
use spin_stirling::spin::{linspace, spectrum_scan, SpinPairParams, JOULE_PER_PEV};
use spin_stirling::thermo::{
    fidelity, gibbs_state, von_neumann_entropy, BathTemperature, DensityMatrix,
};
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

fn gate(name: &str, pass: bool, detail: &str) {
    println!("{name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn baths() -> (BathTemperature, BathTemperature) {
    (
        BathTemperature::new(100.0).unwrap(),
        BathTemperature::new(50.0).unwrap(),
    )
}

fn default_cycle() -> CycleResult {
    let (hot, cold) = baths();
    run_cycle(&SpinPairParams::default(), 0.0, FRAC_PI_2, hot, cold).unwrap()
}

#[test]
fn criterion_1_maximum_work() {
    let start = Instant::now();
    let result = default_cycle();
    let elapsed = start.elapsed();
    let w = result.work_pev;
    let pass = (13.1..=16.0).contains(&w) && elapsed < Duration::from_secs(1);
    gate(
        "criterion 1, maximum work",
        pass,
        &format!("W = {w:.4} peV, band [13.1, 16.0] peV, {elapsed:?}"),
    );
}

#[test]
fn criterion_2_maximum_efficiency() {
    let start = Instant::now();
    let result = default_cycle();
    let elapsed = start.elapsed();
    let eta = result.efficiency;
    let pass = (0.225..=0.275).contains(&eta) && eta < 0.5 && elapsed < Duration::from_secs(1);
    gate(
        "criterion 2, maximum efficiency",
        pass,
        &format!("eta = {eta:.4}, band [0.225, 0.275], Carnot bound 0.5, {elapsed:?}"),
    );
}

#[test]
fn criterion_3_sweep_shape() {
    let start = Instant::now();
    let (hot, cold) = baths();
    let params = SpinPairParams::default();
    let grid = linspace(0.0, FRAC_PI_2, 91);
    let mut faults: Vec<String> = Vec::new();

    for theta1 in [0.0, PI / 6.0, PI / 4.0, PI / 3.0] {
        let results = sweep_theta2(&params, theta1, &grid, hot, cold).unwrap();
        for r in &results {
            if r.theta2_rad <= theta1 && r.work_pev > 1e-9 {
                faults.push(format!(
                    "W = {} at theta2 {} <= theta1 {theta1}",
                    r.work_pev, r.theta2_rad
                ));
            }
            if r.work_pev > 0.0 && r.efficiency > 0.5 {
                faults.push(format!(
                    "eta {} beats Carnot at {}",
                    r.efficiency, r.theta2_rad
                ));
            }
        }
        for pair in results.windows(2) {
            if pair[0].theta2_rad >= theta1 - 1e-12 {
                if pair[1].work_pev < pair[0].work_pev - 1e-9 {
                    faults.push(format!(
                        "W not monotone past theta1 {theta1} at theta2 {}",
                        pair[1].theta2_rad
                    ));
                }
                if pair[1].efficiency < pair[0].efficiency - 1e-9 {
                    faults.push(format!(
                        "eta not monotone past theta1 {theta1} at theta2 {}",
                        pair[1].theta2_rad
                    ));
                }
            }
        }
        let last = results.last().unwrap();
        let w_peak = results
            .iter()
            .map(|r| r.work_pev)
            .fold(f64::NEG_INFINITY, f64::max);
        let eta_peak = results
            .iter()
            .map(|r| r.efficiency)
            .fold(f64::NEG_INFINITY, f64::max);
        if last.work_pev < w_peak - 1e-12 || last.efficiency < eta_peak - 1e-12 {
            faults.push(format!("maximum not at pi/2 for theta1 {theta1}"));
        }
    }

    let elapsed = start.elapsed();
    let pass = faults.is_empty() && elapsed < Duration::from_secs(5);
    gate(
        "criterion 3, sweep shape",
        pass,
        &format!(
            "4 theta1 values x 91 points, zero-work below theta1, monotone above, peak at pi/2, {elapsed:?}{}{}",
            if faults.is_empty() { "" } else { "; " },
            faults.join("; ")
        ),
    );
}

#[test]
fn criterion_4_secular_high_field_collapse() {
    let start = Instant::now();
    let (hot, cold) = baths();
    let params = SpinPairParams {
        b0_mt: 1000.0,
        secular: true,
        ..SpinPairParams::default()
    };
    let result = run_cycle(&params, 0.0, FRAC_PI_2, hot, cold).unwrap();
    let elapsed = start.elapsed();
    let pass = result.work_pev.abs() < 0.01
        && result.mode == EngineMode::NonEngine
        && elapsed < Duration::from_secs(1);
    gate(
        "criterion 4, secular high-field collapse",
        pass,
        &format!(
            "|W| = {:.2e} peV < 0.01, mode {:?}, {elapsed:?}",
            result.work_pev.abs(),
            result.mode
        ),
    );
}

#[test]
fn criterion_5_spectrum_symmetry() {
    let start = Instant::now();
    let thetas = linspace(0.0, PI, 181);
    let mut params = SpinPairParams::default();
    let baseline = spectrum_scan(&params, &thetas).unwrap();

    let mut worst_mirror = 0.0f64;
    for k in 0..181 {
        let mirrored = 180 - k;
        for level in 0..4 {
            worst_mirror = worst_mirror
                .max((baseline[k].energies[level] - baseline[mirrored].energies[level]).abs());
        }
    }

    let mut worst_phi = 0.0f64;
    for phi in [1.0, 2.5] {
        params.phi_rad = phi;
        let turned = spectrum_scan(&params, &thetas).unwrap();
        for (a, b) in baseline.iter().zip(turned.iter()) {
            for level in 0..4 {
                worst_phi = worst_phi.max((a.energies[level] - b.energies[level]).abs());
            }
        }
    }

    let elapsed = start.elapsed();
    let pass = worst_mirror <= 1e-9 && worst_phi <= 1e-9 && elapsed < Duration::from_secs(1);
    gate(
        "criterion 5, spectrum symmetry",
        pass,
        &format!(
            "181 points, mirror residual {worst_mirror:.2e} peV, azimuth residual {worst_phi:.2e} peV, bound 1e-9, {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_6_thermalization_fidelity() {
    let start = Instant::now();
    let protocol = IsothermalProtocol::new(
        SpinPairParams::default(),
        0.0,
        FRAC_PI_2,
        BathTemperature::new(100.0).unwrap(),
    );
    let gamma0 = calibrate_gamma0(&protocol, RELAXATION_TARGET_NS).unwrap();
    let records = run_isothermal(&protocol, gamma0).unwrap();

    let final_fidelity = records.last().unwrap().fidelity_to_final_gibbs;
    let mut monotone = true;
    for pair in records.windows(2) {
        if pair[1].fidelity_to_final_gibbs < pair[0].fidelity_to_final_gibbs - 1e-6 {
            monotone = false;
        }
    }

    let elapsed = start.elapsed();
    let pass = final_fidelity >= 0.98 && monotone && elapsed < Duration::from_secs(30);
    gate(
        "criterion 6, thermalization fidelity",
        pass,
        &format!(
            "250 iterations, gamma0 {gamma0:.3}/ns, final fidelity {final_fidelity:.4} >= 0.98, sequence monotone within 1e-6: {monotone}, {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_7_power_estimate() {
    let work = default_cycle().work_pev;
    let protocol = IsothermalProtocol::new(
        SpinPairParams::default(),
        0.0,
        FRAC_PI_2,
        BathTemperature::new(100.0).unwrap(),
    );

    let start = Instant::now();
    let estimate = estimate_power(work, &protocol).unwrap();
    let elapsed = start.elapsed();

    let t_ok = (estimate.t_cycle_ms - 50.0).abs() <= 0.1;
    let target = 4.65e-29;
    let p_ok = (estimate.power_watts - target).abs() <= 0.1 * target;
    let identity = work * JOULE_PER_PEV / (estimate.t_cycle_ns * 1e-9);
    let id_ok = ((estimate.power_watts - identity) / identity).abs() <= 1e-12;

    let pass = t_ok && p_ok && id_ok && elapsed < Duration::from_millis(1);
    gate(
        "criterion 7, power estimate",
        pass,
        &format!(
            "t_cycle = {:.6} ms (50 +- 0.1), P = {:.3e} W (4.65e-29 +- 10%), identity residual {:.1e}, {elapsed:?}",
            estimate.t_cycle_ms,
            estimate.power_watts,
            ((estimate.power_watts - identity) / identity).abs()
        ),
    );
}

#[test]
fn criterion_8_property_suites() {
    let start = Instant::now();
    let mut faults: Vec<String> = Vec::new();

    // first-law closure on 1000 random cycles
    let mut rng = seeded_rng(0xC8);
    for i in 0..1000 {
        let params = SpinPairParams {
            j_hz: rng.gen_range(0.0..400.0),
            phi_rad: rng.gen_range(0.0..2.0 * PI),
            r_angstrom: rng.gen_range(0.9..1.6),
            ..SpinPairParams::default()
        };
        let theta1 = rng.gen_range(0.0..PI);
        let theta2 = rng.gen_range(0.0..PI);
        let hot_kt = rng.gen_range(20.0..300.0);
        let cold_kt = hot_kt * rng.gen_range(0.05..1.0);
        let r = run_cycle(
            &params,
            theta1,
            theta2,
            BathTemperature::new(hot_kt).unwrap(),
            BathTemperature::new(cold_kt).unwrap(),
        )
        .unwrap();
        let u = |k: usize| r.corners[k].energy_pev;
        let strokes = (r.q_ab_pev - (u(1) - u(0))) + (r.q_cd_pev - (u(3) - u(2)));
        if (r.work_pev - strokes).abs() > 1e-9 {
            faults.push(format!("first law broke on cycle {i}"));
            break;
        }
    }

    // Gibbs stationarity at 20 random working points
    let gamma0 = 1.0;
    for _ in 0..20 {
        let params = SpinPairParams::default();
        let theta = rng.gen_range(0.0..PI);
        let kt = rng.gen_range(10.0..300.0);
        let h = params.hamiltonian(theta).unwrap().total;
        let bath = BathTemperature::new(kt).unwrap();
        let dissipator = build_dissipator(&h, bath, gamma0).unwrap();
        let gibbs = gibbs_state(&h, bath).unwrap();
        let commutator = h.mul(gibbs.operator()).sub(&gibbs.operator().mul(&h));
        let rhs =
            dissipator
                .apply(gibbs.operator())
                .add(&commutator.scale(num_complex::Complex64::new(
                    0.0,
                    -1.0 / spin_stirling::spin::HBAR_PEV_NS,
                )));
        if rhs.max_norm() > 1e-10 * gamma0 {
            faults.push(format!(
                "Gibbs state drifts at theta {theta:.3}, kT {kt:.1}: {:.2e}",
                rhs.max_norm()
            ));
        }
    }

    // trace and positivity along propagations
    {
        let params = SpinPairParams::default();
        let h = params.hamiltonian(1.1).unwrap().total;
        let bath = BathTemperature::new(60.0).unwrap();
        let dissipator = build_dissipator(&h, bath, 1.5).unwrap();
        for _ in 0..2 {
            let mut state = random_density(&mut rng, 4);
            for window in 0..25 {
                state = propagate(&state, &h, &dissipator, 0.3, 0.003).unwrap();
                let trace = state.operator().trace();
                if (trace.re - 1.0).abs() > 1e-9 {
                    faults.push(format!("trace drifted in window {window}"));
                }
                if min_eigenvalue(state.operator()) < -1e-8 {
                    faults.push(format!("negativity in window {window}"));
                }
            }
        }
    }

    // agreement with the exact generator exponential
    {
        let params = SpinPairParams::default();
        let h = params.hamiltonian(0.7).unwrap().total;
        let bath = BathTemperature::new(80.0).unwrap();
        let dissipator = build_dissipator(&h, bath, 1.0).unwrap();
        let rho0 = random_density(&mut rng, 4);
        let stepped = propagate(&rho0, &h, &dissipator, 2.0, 5e-4).unwrap();
        let exact = evolve_by_exponential(&rho0, &h, &dissipator, 2.0);
        let dist = trace_distance(stepped.operator(), &exact);
        if dist > 1e-7 {
            faults.push(format!(
                "integrator off the exponential oracle by {dist:.2e}"
            ));
        }
    }

    // fidelity and entropy identities
    for _ in 0..10 {
        let a = random_density(&mut rng, 4);
        let b = random_density(&mut rng, 4);
        let faa = fidelity(&a, &a).unwrap();
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        if (faa - 1.0).abs() > 1e-9 || (fab - fba).abs() > 1e-9 || !(0.0..=1.0).contains(&fab) {
            faults.push("fidelity identity failed".to_string());
        }
        let s = von_neumann_entropy(&a).unwrap();
        if !(0.0..=4.0f64.ln() + 1e-12).contains(&s) {
            faults.push("entropy out of range".to_string());
        }
    }
    let pure = random_pure(&mut rng, 4);
    if von_neumann_entropy(&pure).unwrap() > 1e-9 {
        faults.push("pure state entropy not zero".to_string());
    }
    let mixed = DensityMatrix::new(Operator::identity(4).scale_re(0.25)).unwrap();
    if (von_neumann_entropy(&mixed).unwrap() - 4.0f64.ln()).abs() > 1e-12 {
        faults.push("maximally mixed entropy not ln 4".to_string());
    }

    let elapsed = start.elapsed();
    let pass = faults.is_empty() && elapsed < Duration::from_secs(60);
    gate(
        "criterion 8, property suites",
        pass,
        &format!(
            "1000 first-law cycles, 20 stationarity points, 50 propagation windows, exponential oracle, state identities, {elapsed:?}{}{}",
            if faults.is_empty() { "" } else { "; " },
            faults.join("; ")
        ),
    );
}
