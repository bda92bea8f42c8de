//! Quasistatic Stirling cycle driven by the dipolar angle.
//!
//! The four corners are Gibbs states: A = (theta1, hot), B = (theta2, hot),
//! C = (theta2, cold), D = (theta1, cold). Isothermal branches exchange heat
//! T dS, isochoric branches dU, and the net work is the sum of the four
//! heats. Sign convention: positive work means the cycle outputs work.

use crate::error::{Error, Result};
use crate::spin::SpinPairParams;
use crate::thermo::{
    gibbs_state, internal_energy, von_neumann_entropy, BathTemperature, DensityMatrix,
};

/// Angle-domain slack for sweep grids, absorbing linspace endpoint rounding.
const ANGLE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    A,
    B,
    C,
    D,
}

/// One Gibbs corner with its cached observables.
#[derive(Debug, Clone)]
pub struct CyclePoint {
    pub corner: Corner,
    pub theta_rad: f64,
    pub kt_pev: f64,
    pub state: DensityMatrix,
    pub energy_pev: f64,
    pub entropy: f64,
}

/// Whether the cycle actually operates as an engine (positive work output
/// from positive heat intake).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineMode {
    Engine,
    NonEngine,
}

#[derive(Debug, Clone)]
pub struct CycleResult {
    pub theta1_rad: f64,
    pub theta2_rad: f64,
    pub kt_hot_pev: f64,
    pub kt_cold_pev: f64,
    pub q_ab_pev: f64,
    pub q_bc_pev: f64,
    pub q_cd_pev: f64,
    pub q_da_pev: f64,
    /// Q_AB + Q_DA, the heat taken in over the hot isotherm and the
    /// heating isochore.
    pub q_in_pev: f64,
    /// Q_BC + Q_CD.
    pub q_out_pev: f64,
    pub work_pev: f64,
    /// W / q_in when q_in > 0, otherwise 0 with the NonEngine flag.
    pub efficiency: f64,
    pub mode: EngineMode,
    pub corners: [CyclePoint; 4],
}

fn make_corner(
    params: &SpinPairParams,
    corner: Corner,
    theta: f64,
    bath: BathTemperature,
) -> Result<CyclePoint> {
    let h = params.hamiltonian(theta)?;
    let state = gibbs_state(&h.total, bath)?;
    let energy_pev = internal_energy(&state, &h.total)?;
    let entropy = von_neumann_entropy(&state)?;
    Ok(CyclePoint {
        corner,
        theta_rad: theta,
        kt_pev: bath.kt_pev(),
        state,
        energy_pev,
        entropy,
    })
}

pub fn run_cycle(
    params: &SpinPairParams,
    theta1_rad: f64,
    theta2_rad: f64,
    hot: BathTemperature,
    cold: BathTemperature,
) -> Result<CycleResult> {
    if hot.kt_pev() < cold.kt_pev() {
        return Err(Error::InvalidTemperatures {
            hot: hot.kt_pev(),
            cold: cold.kt_pev(),
        });
    }

    let a = make_corner(params, Corner::A, theta1_rad, hot)?;
    let b = make_corner(params, Corner::B, theta2_rad, hot)?;
    let c = make_corner(params, Corner::C, theta2_rad, cold)?;
    let d = make_corner(params, Corner::D, theta1_rad, cold)?;

    let q_ab_pev = hot.kt_pev() * (b.entropy - a.entropy);
    let q_bc_pev = c.energy_pev - b.energy_pev;
    let q_cd_pev = cold.kt_pev() * (d.entropy - c.entropy);
    let q_da_pev = a.energy_pev - d.energy_pev;

    let work_pev = q_ab_pev + q_bc_pev + q_cd_pev + q_da_pev;
    let q_in_pev = q_ab_pev + q_da_pev;
    let q_out_pev = q_bc_pev + q_cd_pev;

    let (efficiency, mode) = if q_in_pev > 0.0 {
        let eta = work_pev / q_in_pev;
        if work_pev > 0.0 {
            (eta, EngineMode::Engine)
        } else {
            (eta, EngineMode::NonEngine)
        }
    } else {
        (0.0, EngineMode::NonEngine)
    };

    Ok(CycleResult {
        theta1_rad,
        theta2_rad,
        kt_hot_pev: hot.kt_pev(),
        kt_cold_pev: cold.kt_pev(),
        q_ab_pev,
        q_bc_pev,
        q_cd_pev,
        q_da_pev,
        q_in_pev,
        q_out_pev,
        work_pev,
        efficiency,
        mode,
        corners: [a, b, c, d],
    })
}

/// Cycles over a grid of compression angles at fixed theta1. Sweep angles
/// live in [0, pi/2]; beyond pi/2 the spectrum retraces itself.
pub fn sweep_theta2(
    params: &SpinPairParams,
    theta1_rad: f64,
    theta2_grid: &[f64],
    hot: BathTemperature,
    cold: BathTemperature,
) -> Result<Vec<CycleResult>> {
    if theta2_grid.is_empty() {
        return Err(Error::domain("sweep grid must not be empty"));
    }
    let max = std::f64::consts::FRAC_PI_2 + ANGLE_SLACK;
    for &theta in theta2_grid.iter().chain(std::iter::once(&theta1_rad)) {
        if !theta.is_finite() || !(-ANGLE_SLACK..=max).contains(&theta) {
            return Err(Error::domain(format!(
                "sweep angles must lie in [0, pi/2], got {theta}"
            )));
        }
    }
    theta2_grid
        .iter()
        .map(|&theta2| run_cycle(params, theta1_rad, theta2, hot, cold))
        .collect()
}

/// The same cycle with the full and the secular Hamiltonian.
#[derive(Debug, Clone)]
pub struct SecularComparison {
    pub full: CycleResult,
    pub secular: CycleResult,
}

/// Runs the cycle twice, once with every dipolar term and once keeping only
/// the parts that commute with the Zeeman Hamiltonian. At high field the
/// secular cycle degenerates: the working medium is pinned to its ground
/// state and extracts nothing.
pub fn secular_comparison(
    params: &SpinPairParams,
    theta1_rad: f64,
    theta2_rad: f64,
    hot: BathTemperature,
    cold: BathTemperature,
) -> Result<SecularComparison> {
    let mut full_params = params.clone();
    full_params.secular = false;
    let mut secular_params = params.clone();
    secular_params.secular = true;
    Ok(SecularComparison {
        full: run_cycle(&full_params, theta1_rad, theta2_rad, hot, cold)?,
        secular: run_cycle(&secular_params, theta1_rad, theta2_rad, hot, cold)?,
    })
}
