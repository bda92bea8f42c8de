//! Browser bindings for the two-spin engine model. Three operations return
//! JSON strings for the static demo page: the level spectrum over the
//! orientation angle, the work/efficiency sweep over the expansion angle,
//! and a single quasistatic cycle report. Failures come back as
//! `{"error": "..."}` so the page needs no exception plumbing.

use serde::Serialize;
use spin_stirling::cycle::{run_cycle, sweep_theta2, EngineMode};
use spin_stirling::spin::{linspace, spectrum_scan, SpinPairParams};
use spin_stirling::thermo::BathTemperature;
use std::f64::consts::{FRAC_PI_2, PI};
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Serialize)]
struct SpectrumPayload {
    theta_rad: Vec<f64>,
    /// One series per level, sorted ascending at each angle.
    levels_pev: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct SweepPayload {
    theta2_rad: Vec<f64>,
    work_pev: Vec<f64>,
    efficiency: Vec<f64>,
}

#[derive(Serialize)]
struct CornerPayload {
    label: String,
    theta_rad: f64,
    kt_pev: f64,
    energy_pev: f64,
    entropy_kb: f64,
}

#[derive(Serialize)]
struct CyclePayload {
    q_ab_pev: f64,
    q_bc_pev: f64,
    q_cd_pev: f64,
    q_da_pev: f64,
    q_in_pev: f64,
    work_pev: f64,
    efficiency: f64,
    carnot: f64,
    engine: bool,
    corners: Vec<CornerPayload>,
}

fn error_json(e: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": e.to_string() }).to_string()
}

fn params(b0_mt: f64, j_hz: f64, secular: bool) -> SpinPairParams {
    SpinPairParams {
        b0_mt,
        j_hz,
        secular,
        ..SpinPairParams::default()
    }
}

fn grid_points(points: u32) -> usize {
    (points as usize).clamp(2, 2001)
}

/// Sorted level energies over `points` angles on [0, pi].
#[wasm_bindgen]
pub fn spectrum_json(
    b0_mt: f64,
    j_hz: f64,
    r_angstrom: f64,
    phi_rad: f64,
    secular: bool,
    points: u32,
) -> String {
    let mut p = params(b0_mt, j_hz, secular);
    p.r_angstrom = r_angstrom;
    p.phi_rad = phi_rad;
    let thetas = linspace(0.0, PI, grid_points(points));
    match spectrum_scan(&p, &thetas) {
        Ok(scan) => {
            let levels_pev = (0..4)
                .map(|k| scan.iter().map(|pt| pt.energies[k]).collect())
                .collect();
            serde_json::to_string(&SpectrumPayload {
                theta_rad: thetas,
                levels_pev,
            })
            .unwrap_or_else(error_json)
        }
        Err(e) => error_json(e),
    }
}

/// Work and efficiency versus the expansion angle on [theta1, pi/2].
#[wasm_bindgen]
pub fn sweep_json(
    theta1_rad: f64,
    kt_hot_pev: f64,
    kt_cold_pev: f64,
    j_hz: f64,
    secular: bool,
    b0_mt: f64,
    points: u32,
) -> String {
    let p = params(b0_mt, j_hz, secular);
    let grid = linspace(0.0, FRAC_PI_2, grid_points(points));
    let baths = (|| {
        Ok::<_, spin_stirling::Error>((
            BathTemperature::new(kt_hot_pev)?,
            BathTemperature::new(kt_cold_pev)?,
        ))
    })();
    let (hot, cold) = match baths {
        Ok(b) => b,
        Err(e) => return error_json(e),
    };
    match sweep_theta2(&p, theta1_rad, &grid, hot, cold) {
        Ok(results) => serde_json::to_string(&SweepPayload {
            theta2_rad: results.iter().map(|r| r.theta2_rad).collect(),
            work_pev: results.iter().map(|r| r.work_pev).collect(),
            efficiency: results.iter().map(|r| r.efficiency).collect(),
        })
        .unwrap_or_else(error_json),
        Err(e) => error_json(e),
    }
}

/// One quasistatic cycle between the two angles and baths.
#[wasm_bindgen]
pub fn cycle_json(
    theta1_rad: f64,
    theta2_rad: f64,
    kt_hot_pev: f64,
    kt_cold_pev: f64,
    j_hz: f64,
    secular: bool,
    b0_mt: f64,
) -> String {
    let p = params(b0_mt, j_hz, secular);
    let baths = (|| {
        Ok::<_, spin_stirling::Error>((
            BathTemperature::new(kt_hot_pev)?,
            BathTemperature::new(kt_cold_pev)?,
        ))
    })();
    let (hot, cold) = match baths {
        Ok(b) => b,
        Err(e) => return error_json(e),
    };
    match run_cycle(&p, theta1_rad, theta2_rad, hot, cold) {
        Ok(r) => serde_json::to_string(&CyclePayload {
            q_ab_pev: r.q_ab_pev,
            q_bc_pev: r.q_bc_pev,
            q_cd_pev: r.q_cd_pev,
            q_da_pev: r.q_da_pev,
            q_in_pev: r.q_in_pev,
            work_pev: r.work_pev,
            efficiency: r.efficiency,
            carnot: 1.0 - kt_cold_pev / kt_hot_pev,
            engine: r.mode == EngineMode::Engine,
            corners: r
                .corners
                .iter()
                .map(|c| CornerPayload {
                    label: format!("{:?}", c.corner),
                    theta_rad: c.theta_rad,
                    kt_pev: c.kt_pev,
                    energy_pev: c.energy_pev,
                    entropy_kb: c.entropy,
                })
                .collect(),
        })
        .unwrap_or_else(error_json),
        Err(e) => error_json(e),
    }
}
