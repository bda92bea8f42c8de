//! Equilibrium states and the information-theoretic quantities the cycle
//! analysis is built on: Gibbs states, internal energy, von Neumann entropy,
//! and Uhlmann fidelity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{hermitian_eig, Operator, Spectrum, SUPPORT_CUTOFF};

/// Trace and positivity slack accepted when validating a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;

/// Bath temperature expressed as k_B T in peV. Always positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathTemperature {
    kt_pev: f64,
}

impl BathTemperature {
    pub fn new(kt_pev: f64) -> Result<Self> {
        if !(kt_pev.is_finite() && kt_pev > 0.0) {
            return Err(Error::domain(format!(
                "bath temperature k_B T must be positive and finite, got {kt_pev}"
            )));
        }
        Ok(BathTemperature { kt_pev })
    }

    #[inline]
    pub fn kt_pev(&self) -> f64 {
        self.kt_pev
    }
}

/// Unit-trace positive semidefinite Hermitian operator.
///
/// The validating constructor is the only public way in; internal physics
/// paths that produce valid states by construction use `from_valid`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: op.hermiticity_deviation(),
                tolerance: DENSITY_TOL,
            });
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::domain(format!(
                "density matrix trace must be 1, got {} + {}i",
                tr.re, tr.im
            )));
        }
        let spec = hermitian_eig(&op)?;
        if let Some(&min) = spec
            .eigenvalues
            .iter()
            .min_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"))
        {
            if min < -DENSITY_TOL {
                return Err(Error::domain(format!(
                    "density matrix must be positive semidefinite, smallest eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(DensityMatrix { op })
    }

    /// For states that are valid by construction (Gibbs weights, projected
    /// populations). Debug builds still verify.
    pub(crate) fn from_valid(op: Operator) -> Self {
        debug_assert!(op.is_hermitian());
        debug_assert!((op.trace().re - 1.0).abs() < 1e-8);
        DensityMatrix { op }
    }

    #[inline]
    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix::from_valid(Operator::identity(dim).scale_re(1.0 / dim as f64))
    }

    /// Diagonal of V^dagger rho V: occupation of each eigenvector column.
    pub fn populations(&self, basis: &Spectrum) -> Vec<f64> {
        let n = self.op.dim();
        let v = &basis.eigenvectors;
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        acc += v.get(i, k).conj() * self.op.get(i, j) * v.get(j, k);
                    }
                }
                acc.re
            })
            .collect()
    }
}

/// Thermal state exp(-H / kT) / Z.
///
/// Computed in the eigenbasis with the spectrum shifted so the largest
/// Boltzmann weight is exactly 1; deep low-temperature states underflow to
/// the ground projector instead of overflowing.
pub fn gibbs_state(h: &Operator, bath: BathTemperature) -> Result<DensityMatrix> {
    let spec = hermitian_eig(h)?;
    let e_min = spec
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|&e| (-(e - e_min) / bath.kt_pev()).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let n = spec.eigenvalues.len();
    let v = &spec.eigenvectors;
    let op = Operator::from_fn(n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += v.get(i, k) * (weights[k] / z) * v.get(j, k).conj();
        }
        acc
    });
    Ok(DensityMatrix::from_valid(op))
}

/// Tr[rho H] in peV. The imaginary residue of the trace is pure rounding
/// for Hermitian arguments and is discarded.
pub fn internal_energy(rho: &DensityMatrix, h: &Operator) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: h.dim(),
        });
    }
    let n = h.dim();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            tr += rho.operator().get(i, k) * h.get(k, i);
        }
    }
    debug_assert!(
        tr.im.abs() <= 1e-10 * h.max_norm().max(1.0),
        "imaginary residue {} too large",
        tr.im
    );
    Ok(tr.re)
}

/// -Tr[rho ln rho] in nats, evaluated on the spectrum with the 0 ln 0 = 0
/// convention. Result clamped to be nonnegative.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spec = hermitian_eig(rho.operator())?;
    let s: f64 = spec
        .eigenvalues
        .iter()
        .filter(|&&p| p > SUPPORT_CUTOFF)
        .map(|&p| -p * p.ln())
        .sum();
    Ok(s.max(0.0))
}

/// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
/// clamped into [0, 1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let sqrt_rho = psd_sqrt(rho.operator())?;
    let inner = sqrt_rho.mul(sigma.operator()).mul(&sqrt_rho);
    // analytically Hermitian and PSD; symmetrize the rounding away
    let spec = hermitian_eig(&inner.hermitian_part())?;
    let tr: f64 = spec
        .eigenvalues
        .iter()
        .map(|&x| if x > 0.0 { x.sqrt() } else { 0.0 })
        .sum();
    let f = tr * tr;
    debug_assert!(f <= 1.0 + 1e-9, "fidelity overshoot {f}");
    Ok(f.clamp(0.0, 1.0))
}

/// Square root of a density-like operator, clamping the [-DENSITY_TOL, 0)
/// eigenvalue band that positivity validation tolerates.
fn psd_sqrt(op: &Operator) -> Result<Operator> {
    let spec = hermitian_eig(op)?;
    let min = spec
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min < -DENSITY_TOL {
        return Err(Error::domain(format!(
            "cannot take sqrt: smallest eigenvalue {min:.3e}"
        )));
    }
    Ok(spec.reconstruct_with(|x| if x > 0.0 { x.sqrt() } else { 0.0 }))
}
