//! Turns a validated RunConfig into CSV tables. Pure with respect to the
//! filesystem; writing is the binary's job.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::config::{CliCommand, GridSpec, RunConfig};
use crate::cycle::{run_cycle, sweep_theta2, CycleResult, EngineMode};
use crate::error::Result;
use crate::lindblad::{
    calibrate_gamma0, estimate_power, run_isothermal, IsothermalProtocol, RELAXATION_TARGET_NS,
};
use crate::spin::{linspace, spectrum_scan};
use crate::table::CsvTable;
use crate::thermo::BathTemperature;

/// What a command produced. `main` is the per-command data table; `summary`
/// is only present for the power command.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub main: CsvTable,
    pub summary: Option<CsvTable>,
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    match config.command {
        CliCommand::Spectrum => run_spectrum(config),
        CliCommand::Cycle => run_single_cycle(config),
        CliCommand::Sweep => run_sweep(config),
        CliCommand::Power => run_power(config),
    }
}

fn grid_or(config: &RunConfig, default: GridSpec) -> Vec<f64> {
    let g = config.grid.unwrap_or(default);
    linspace(g.start_rad, g.stop_rad, g.count)
}

fn cycle_row(r: &CycleResult) -> Vec<f64> {
    vec![
        r.theta1_rad,
        r.theta2_rad,
        r.q_ab_pev,
        r.q_bc_pev,
        r.q_cd_pev,
        r.q_da_pev,
        r.work_pev,
        r.efficiency,
        match r.mode {
            EngineMode::Engine => 1.0,
            EngineMode::NonEngine => 0.0,
        },
    ]
}

const CYCLE_COLUMNS: [&str; 9] = [
    "theta1_rad",
    "theta2_rad",
    "q_ab_pev",
    "q_bc_pev",
    "q_cd_pev",
    "q_da_pev",
    "w_pev",
    "eta",
    "engine_mode",
];

fn run_spectrum(config: &RunConfig) -> Result<RunOutput> {
    let thetas = grid_or(
        config,
        GridSpec {
            start_rad: 0.0,
            stop_rad: PI,
            count: 181,
        },
    );
    let points = spectrum_scan(&config.params, &thetas)?;
    let mut table = CsvTable::new(vec!["theta_rad", "e1_pev", "e2_pev", "e3_pev", "e4_pev"]);
    for p in points {
        table.push_row(vec![
            p.theta_rad,
            p.energies[0],
            p.energies[1],
            p.energies[2],
            p.energies[3],
        ])?;
    }
    Ok(RunOutput {
        main: table,
        summary: None,
    })
}

fn baths(config: &RunConfig) -> Result<(BathTemperature, BathTemperature)> {
    Ok((
        BathTemperature::new(config.kt_hot_pev)?,
        BathTemperature::new(config.kt_cold_pev)?,
    ))
}

fn run_single_cycle(config: &RunConfig) -> Result<RunOutput> {
    let (hot, cold) = baths(config)?;
    let r = run_cycle(
        &config.params,
        config.theta1_rad,
        config.theta2_rad,
        hot,
        cold,
    )?;
    let mut table = CsvTable::new(CYCLE_COLUMNS.to_vec());
    table.push_row(cycle_row(&r))?;
    Ok(RunOutput {
        main: table,
        summary: None,
    })
}

fn run_sweep(config: &RunConfig) -> Result<RunOutput> {
    let (hot, cold) = baths(config)?;
    let thetas = grid_or(
        config,
        GridSpec {
            start_rad: 0.0,
            stop_rad: FRAC_PI_2,
            count: 91,
        },
    );
    let results = sweep_theta2(&config.params, config.theta1_rad, &thetas, hot, cold)?;
    let mut table = CsvTable::new(CYCLE_COLUMNS.to_vec());
    for r in &results {
        table.push_row(cycle_row(r))?;
    }
    Ok(RunOutput {
        main: table,
        summary: None,
    })
}

/// Protocol trace plus the cycle-level power summary. The work figure is
/// the quasistatic cycle between the same two angles and baths.
fn run_power(config: &RunConfig) -> Result<RunOutput> {
    let (hot, cold) = baths(config)?;
    let mut protocol = IsothermalProtocol::new(
        config.params.clone(),
        config.theta1_rad,
        config.theta2_rad,
        hot,
    );
    protocol.iterations = config.iterations;
    protocol.tau_adiabatic_ns = config.tau_adiabatic_ns;
    protocol.tau_isochoric_ns = config.tau_isochoric_ns;

    let gamma0 = match config.gamma0_per_ns {
        Some(g) => g,
        None => calibrate_gamma0(&protocol, RELAXATION_TARGET_NS)?,
    };

    let records = run_isothermal(&protocol, gamma0)?;
    let mut table = CsvTable::new(vec![
        "iter",
        "theta_rad",
        "fidelity_inst",
        "fidelity_final",
        "p1",
        "p2",
        "p3",
        "p4",
        "e1_pev",
        "e2_pev",
        "e3_pev",
        "e4_pev",
    ]);
    for r in &records {
        table.push_row(vec![
            r.index as f64,
            r.theta_rad,
            r.fidelity_to_instantaneous_gibbs,
            r.fidelity_to_final_gibbs,
            r.populations[0],
            r.populations[1],
            r.populations[2],
            r.populations[3],
            r.level_energies_pev[0],
            r.level_energies_pev[1],
            r.level_energies_pev[2],
            r.level_energies_pev[3],
        ])?;
    }

    let work = run_cycle(
        &config.params,
        config.theta1_rad,
        config.theta2_rad,
        hot,
        cold,
    )?
    .work_pev;
    let estimate = estimate_power(work, &protocol)?;
    let mut summary = CsvTable::new(vec![
        "t_cycle_ms",
        "w_max_pev",
        "power_j_per_s",
        "gamma0_per_ns",
    ]);
    summary.push_row(vec![
        estimate.t_cycle_ms,
        work,
        estimate.power_watts,
        gamma0,
    ])?;

    Ok(RunOutput {
        main: table,
        summary: Some(summary),
    })
}
