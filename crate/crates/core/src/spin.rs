//! Hamiltonian of a heteronuclear two-spin pair: Zeeman terms, isotropic
//! J coupling, and the full dipole-dipole interaction parametrized by the
//! polar angle theta between the internuclear vector and the static field.
//!
//! Unit conventions used throughout the crate: energies in peV, times in ns,
//! angles in rad, magnetic field in mT, and bath temperatures given directly
//! as k_B T in peV. With these choices hbar = 658211.957 peV ns.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{hermitian_eig, pauli_operator, Operator, PauliAxis, Site};

/// 1 peV in J (CODATA elementary charge, exact).
pub const JOULE_PER_PEV: f64 = 1.602176634e-31;

/// hbar in J s (CODATA, exact).
pub const HBAR_JS: f64 = 1.054571817e-34;

/// hbar in peV ns.
pub const HBAR_PEV_NS: f64 = HBAR_JS / JOULE_PER_PEV * 1e9;

/// Planck constant in peV ns.
pub const H_PEV_NS: f64 = 6.62607015e-34 / JOULE_PER_PEV * 1e9;

/// mu_0 / 4 pi in T m / A.
const MU0_OVER_4PI: f64 = 1e-7;

/// Working-medium parameters. Defaults describe a 1H-13C pair at 1 mT with
/// a 1.09 angstrom bond, the regime where dipolar and Zeeman scales compete.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPairParams {
    /// gamma_I / 2 pi in MHz/T (spin I, left tensor factor).
    pub gamma_i_mhz_per_t: f64,
    /// gamma_S / 2 pi in MHz/T.
    pub gamma_s_mhz_per_t: f64,
    /// Static field B_0 in mT.
    pub b0_mt: f64,
    /// Scalar coupling J in Hz.
    pub j_hz: f64,
    /// Internuclear distance in angstrom.
    pub r_angstrom: f64,
    /// Azimuthal angle of the internuclear vector in rad.
    pub phi_rad: f64,
    /// Keep only terms commuting with the Zeeman part (high-field limit).
    pub secular: bool,
}

impl Default for SpinPairParams {
    fn default() -> Self {
        SpinPairParams {
            gamma_i_mhz_per_t: 42.577,
            gamma_s_mhz_per_t: 10.708,
            b0_mt: 1.0,
            j_hz: 125.0,
            r_angstrom: 1.09,
            phi_rad: 0.0,
            secular: false,
        }
    }
}

/// The three physical contributions at a given angle, kept separate so
/// callers can inspect them, plus their sum.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub theta_rad: f64,
    pub zeeman: Operator,
    pub j_coupling: Operator,
    pub dipolar: Operator,
    pub total: Operator,
}

/// Energies of the four levels at one angle, ascending.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumPoint {
    pub theta_rad: f64,
    pub energies: [f64; 4],
}

impl SpinPairParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma_i_mhz_per_t", self.gamma_i_mhz_per_t),
            ("gamma_s_mhz_per_t", self.gamma_s_mhz_per_t),
            ("b0_mt", self.b0_mt),
            ("j_hz", self.j_hz),
            ("r_angstrom", self.r_angstrom),
            ("phi_rad", self.phi_rad),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        if self.r_angstrom <= 0.0 {
            return Err(Error::domain(format!(
                "r_angstrom must be positive, got {}",
                self.r_angstrom
            )));
        }
        Ok(())
    }

    /// Zeeman energy hbar gamma B_0 of one site, in peV.
    pub fn zeeman_energy_pev(&self, site: Site) -> f64 {
        let gamma = match site {
            Site::I => self.gamma_i_mhz_per_t,
            Site::S => self.gamma_s_mhz_per_t,
        };
        // h * (gamma/2pi)[MHz/T] * B0[mT] with the unit prefixes folded in
        H_PEV_NS * gamma * self.b0_mt * 1e-6
    }

    /// Dipolar coupling energy hbar b in peV (signed; negative when both
    /// gyromagnetic ratios are positive).
    pub fn dipolar_energy_pev(&self) -> Result<f64> {
        self.validate()?;
        let two_pi = 2.0 * std::f64::consts::PI;
        let gamma_i = two_pi * self.gamma_i_mhz_per_t * 1e6; // rad/s/T
        let gamma_s = two_pi * self.gamma_s_mhz_per_t * 1e6;
        let r_m = self.r_angstrom * 1e-10;
        let b_rad_per_s = -MU0_OVER_4PI * gamma_i * gamma_s * HBAR_JS / (r_m * r_m * r_m);
        Ok(HBAR_JS * b_rad_per_s / JOULE_PER_PEV)
    }

    /// H(theta) = H_Z + H_J + H_D(theta), in peV.
    pub fn hamiltonian(&self, theta_rad: f64) -> Result<Hamiltonian> {
        self.validate()?;
        if !theta_rad.is_finite() {
            return Err(Error::domain(format!(
                "theta must be finite, got {theta_rad}"
            )));
        }

        let zi = pauli_operator(PauliAxis::Z, Site::I);
        let zs = pauli_operator(PauliAxis::Z, Site::S);

        let zeeman = zi
            .scale_re(self.zeeman_energy_pev(Site::I))
            .add(&zs.scale_re(self.zeeman_energy_pev(Site::S)))
            .scale_re(-0.5);

        let j_scale = std::f64::consts::PI * HBAR_PEV_NS * self.j_hz * 1e-9 / 2.0;
        let zz = zi.mul(&zs);
        let j_coupling = if self.secular {
            zz.scale_re(j_scale)
        } else {
            let xx =
                pauli_operator(PauliAxis::X, Site::I).mul(&pauli_operator(PauliAxis::X, Site::S));
            let yy =
                pauli_operator(PauliAxis::Y, Site::I).mul(&pauli_operator(PauliAxis::Y, Site::S));
            xx.add(&yy).add(&zz).scale_re(j_scale)
        };

        let dipolar = self.dipolar_operator(theta_rad)?;

        let total = zeeman.add(&j_coupling).add(&dipolar);
        Ok(Hamiltonian {
            theta_rad,
            zeeman,
            j_coupling,
            dipolar,
            total,
        })
    }

    /// The dipolar alphabet. Terms A1..A6 are grouped by how many quanta
    /// they exchange; the secular flag keeps only A1.
    fn dipolar_operator(&self, theta: f64) -> Result<Operator> {
        let hb = self.dipolar_energy_pev()?;
        let phi = self.phi_rad;

        let zi = pauli_operator(PauliAxis::Z, Site::I);
        let zs = pauli_operator(PauliAxis::Z, Site::S);
        let pi = pauli_operator(PauliAxis::Plus, Site::I);
        let ps = pauli_operator(PauliAxis::Plus, Site::S);
        let mi = pauli_operator(PauliAxis::Minus, Site::I);
        let ms = pauli_operator(PauliAxis::Minus, Site::S);

        let c = theta.cos();
        let legendre = 1.0 - 3.0 * c * c;

        // A1: flip-none, A2: flip-flop
        let a1 = zi.mul(&zs).scale_re(legendre * 0.25);
        let mut alphabet = a1;
        if !self.secular {
            let a2 = pi.mul(&ms).add(&mi.mul(&ps)).scale_re(-0.25 * legendre);

            // A3/A4: single-quantum, weight -(3/4) sin(2 theta) e^{-+ i phi}
            let single = zi.mul(&ps).add(&pi.mul(&zs)).scale_re(0.5);
            let w3 = Complex64::from_polar(-0.75 * (2.0 * theta).sin(), -phi);
            let a3 = single.scale(w3);
            let single_dag = zi.mul(&ms).add(&mi.mul(&zs)).scale_re(0.5);
            let w4 = Complex64::from_polar(-0.75 * (2.0 * theta).sin(), phi);
            let a4 = single_dag.scale(w4);

            // A5/A6: double-quantum, weight -(3/4) sin^2 theta e^{-+ 2 i phi}
            let s2 = theta.sin() * theta.sin();
            let a5 = pi
                .mul(&ps)
                .scale(Complex64::from_polar(-0.75 * s2, -2.0 * phi));
            let a6 = mi
                .mul(&ms)
                .scale(Complex64::from_polar(-0.75 * s2, 2.0 * phi));

            alphabet = alphabet.add(&a2).add(&a3).add(&a4).add(&a5).add(&a6);
        }
        Ok(alphabet.scale_re(-hb))
    }
}

/// Level energies over a list of angles.
pub fn spectrum_scan(params: &SpinPairParams, thetas: &[f64]) -> Result<Vec<SpectrumPoint>> {
    let mut out = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let h = params.hamiltonian(theta)?;
        let spec = hermitian_eig(&h.total)?;
        let energies: [f64; 4] = spec
            .eigenvalues
            .as_slice()
            .try_into()
            .expect("two-spin space has four levels");
        out.push(SpectrumPoint {
            theta_rad: theta,
            energies,
        });
    }
    Ok(out)
}

/// Evenly spaced grid including both endpoints (single point when count = 1).
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    if count == 1 {
        return vec![start];
    }
    let step = (stop - start) / (count as f64 - 1.0);
    (0..count).map(|i| start + step * i as f64).collect()
}
