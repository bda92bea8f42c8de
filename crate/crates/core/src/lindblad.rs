//! Finite-time dynamics: a Davies-type Lindblad dissipator built from the
//! instantaneous eigenbasis, fixed-step RK4 propagation of the master
//! equation, and the stepwise isothermal protocol used to realize the
//! Stirling branches in finite time.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{hermitian_eig, Operator, Spectrum};
use crate::spin::{SpinPairParams, HBAR_PEV_NS, JOULE_PER_PEV};
use crate::thermo::{fidelity, gibbs_state, BathTemperature, DensityMatrix};

/// Level pairs closer than this (peV) count as degenerate and mix at a flat
/// rate instead of a thermally weighted one.
pub const DEGENERATE_GAP_PEV: f64 = 1e-9;

/// Propagation aborts when an eigenvalue of the state drops below this.
pub const POSITIVITY_TOL: f64 = 1e-6;

/// Calibration target: the slowest relaxation mode anywhere along the
/// protocol gets this 1/e time.
pub const RELAXATION_TARGET_NS: f64 = 0.2;

/// One Lindblad jump channel.
#[derive(Debug, Clone)]
pub struct JumpTerm {
    pub op: Operator,
    pub adjoint: Operator,
    pub rate_per_ns: f64,
}

/// A fixed set of jump channels with the anticommutator part precomputed.
#[derive(Debug, Clone)]
pub struct Dissipator {
    jumps: Vec<JumpTerm>,
    /// (1/2) sum_k rate_k L_k^dagger L_k
    half_escape: Operator,
}

impl Dissipator {
    pub fn new(jumps: Vec<(Operator, f64)>) -> Result<Self> {
        let dim = jumps.first().map(|(op, _)| op.dim()).unwrap_or(0);
        let mut half_escape = Operator::zeros(dim.max(1));
        if dim > 0 {
            half_escape = Operator::zeros(dim);
        }
        let mut terms = Vec::with_capacity(jumps.len());
        for (op, rate) in jumps {
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(Error::domain(format!(
                    "jump rates must be finite and nonnegative, got {rate}"
                )));
            }
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: op.dim(),
                });
            }
            let adjoint = op.adjoint();
            half_escape = half_escape.add(&adjoint.mul(&op).scale_re(0.5 * rate));
            terms.push(JumpTerm {
                op,
                adjoint,
                rate_per_ns: rate,
            });
        }
        Ok(Dissipator {
            jumps: terms,
            half_escape,
        })
    }

    pub fn jump_terms(&self) -> &[JumpTerm] {
        &self.jumps
    }

    /// D(rho) = sum_k rate_k (L rho L^dagger) - {A, rho} with
    /// A = (1/2) sum_k rate_k L^dagger L.
    pub fn apply(&self, rho: &Operator) -> Operator {
        let mut out = self
            .half_escape
            .mul(rho)
            .add(&rho.mul(&self.half_escape))
            .scale_re(-1.0);
        for j in &self.jumps {
            if j.rate_per_ns == 0.0 {
                continue;
            }
            out = out.add(&j.op.mul(rho).mul(&j.adjoint).scale_re(j.rate_per_ns));
        }
        out
    }
}

/// Thermal jump channels between all eigenpairs of `h`.
///
/// For a pair with level splitting dE > 0 the downward channel |m><n| gets
/// rate gamma0 * nbar and the upward one gamma0 * nbar * exp(-dE/kT), with
/// nbar = 1 / (1 - exp(-dE/kT)). The ratio is the Boltzmann factor, so the
/// Gibbs state of `h` is stationary by detailed balance. Degenerate pairs
/// mix symmetrically at gamma0 / 2.
pub fn build_dissipator(
    h: &Operator,
    bath: BathTemperature,
    gamma0_per_ns: f64,
) -> Result<Dissipator> {
    if !(gamma0_per_ns.is_finite() && gamma0_per_ns > 0.0) {
        return Err(Error::domain(format!(
            "gamma0 must be positive and finite, got {gamma0_per_ns}"
        )));
    }
    let spec = hermitian_eig(h)?;
    let n = h.dim();
    let v = &spec.eigenvectors;
    let mut jumps = Vec::with_capacity(n * (n - 1));
    for m in 0..n {
        for nn in 0..n {
            if m == nn {
                continue;
            }
            let de = spec.eigenvalues[nn] - spec.eigenvalues[m];
            let rate = pair_rate(de, bath.kt_pev(), gamma0_per_ns);
            // |m><n| in the computational basis
            let op = Operator::from_fn(n, |i, j| v.get(i, m) * v.get(j, nn).conj());
            jumps.push((op, rate));
        }
    }
    Dissipator::new(jumps)
}

/// Rate of the channel moving population from the level `de` above the
/// target (de < 0 means the channel climbs uphill).
fn pair_rate(de_pev: f64, kt_pev: f64, gamma0: f64) -> f64 {
    if de_pev.abs() <= DEGENERATE_GAP_PEV {
        return gamma0 / 2.0;
    }
    let gap = de_pev.abs();
    let boltzmann = (-gap / kt_pev).exp();
    let nbar = 1.0 / (1.0 - boltzmann);
    if de_pev > 0.0 {
        gamma0 * nbar
    } else {
        gamma0 * nbar * boltzmann
    }
}

/// Fixed-step RK4 integration of
/// d rho / dt = -(i/hbar) [H, rho] + D(rho) for a time span `t_ns`.
///
/// The state is re-Hermitized and trace-renormalized after every step; a
/// step that drives an eigenvalue below -POSITIVITY_TOL aborts with
/// StepError. Steps are t/ceil(t/dt) so the span is covered exactly.
pub fn propagate(
    rho0: &DensityMatrix,
    h: &Operator,
    dissipator: &Dissipator,
    t_ns: f64,
    dt_ns: f64,
) -> Result<DensityMatrix> {
    if !(t_ns.is_finite() && t_ns >= 0.0) {
        return Err(Error::domain(format!(
            "propagation time must be nonnegative, got {t_ns}"
        )));
    }
    if t_ns == 0.0 {
        return Ok(rho0.clone());
    }
    if !(dt_ns.is_finite() && dt_ns > 0.0 && dt_ns <= t_ns) {
        return Err(Error::domain(format!(
            "step size must satisfy 0 < dt <= t, got dt = {dt_ns}, t = {t_ns}"
        )));
    }

    let steps = (t_ns / dt_ns).ceil() as usize;
    let dt = t_ns / steps as f64;
    let mut rho = rho0.operator().clone();

    let rhs = |r: &Operator| -> Operator {
        let comm = h.mul(r).sub(&r.mul(h));
        comm.scale(Complex64::new(0.0, -1.0 / HBAR_PEV_NS))
            .add(&dissipator.apply(r))
    };

    for step in 0..steps {
        let k1 = rhs(&rho);
        let k2 = rhs(&rho.add(&k1.scale_re(dt / 2.0)));
        let k3 = rhs(&rho.add(&k2.scale_re(dt / 2.0)));
        let k4 = rhs(&rho.add(&k3.scale_re(dt)));
        let incr = k1
            .add(&k2.scale_re(2.0))
            .add(&k3.scale_re(2.0))
            .add(&k4)
            .scale_re(dt / 6.0);
        rho = rho.add(&incr).hermitian_part();
        let tr = rho.trace().re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::StepError {
                time: dt * (step + 1) as f64,
                reason: format!("state trace became {tr}"),
            });
        }
        rho = rho.scale_re(1.0 / tr);
        check_positivity(&rho, dt * (step + 1) as f64)?;
    }
    Ok(DensityMatrix::from_valid(rho))
}

/// Cheap Gershgorin bound first; the exact spectrum only when the bound
/// cannot rule a violation out.
fn check_positivity(rho: &Operator, time: f64) -> Result<()> {
    let n = rho.dim();
    let mut bound = f64::INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        for j in 0..n {
            if i != j {
                radius += rho.get(i, j).norm();
            }
        }
        bound = bound.min(rho.get(i, i).re - radius);
    }
    if bound >= -POSITIVITY_TOL {
        return Ok(());
    }
    let spec = hermitian_eig(rho)?;
    let min = spec
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min < -POSITIVITY_TOL {
        return Err(Error::StepError {
            time,
            reason: format!("state lost positivity (eigenvalue {min:.3e})"),
        });
    }
    Ok(())
}

/// Sudden quench limit of an ideal adiabatic stroke: keep the level
/// populations, discard coherences, and carry the populations over to the
/// eigenbasis of the new Hamiltonian.
///
/// Levels are matched greedily by eigenvector overlap (largest first, ties
/// broken by eigenvalue order), which follows each level through avoided
/// crossings instead of blindly trusting the energy ordering.
pub fn adiabatic_map(
    rho: &DensityMatrix,
    h_old: &Operator,
    h_new: &Operator,
) -> Result<DensityMatrix> {
    if rho.dim() != h_old.dim() || h_old.dim() != h_new.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: h_old.dim().max(h_new.dim()),
        });
    }
    let old = hermitian_eig(h_old)?;
    let new = hermitian_eig(h_new)?;
    let n = rho.dim();

    let mut populations = rho.populations(&old);
    for p in &mut populations {
        *p = p.max(0.0);
    }
    let total: f64 = populations.iter().sum();
    if total <= 0.0 {
        return Err(Error::domain("state populations vanished"));
    }
    for p in &mut populations {
        *p /= total;
    }

    let assignment = match_levels(&old, &new);

    let v = &new.eigenvectors;
    let op = Operator::from_fn(n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &p) in populations.iter().enumerate() {
            let target = assignment[k];
            acc += v.get(i, target) * p * v.get(j, target).conj();
        }
        acc
    });
    Ok(DensityMatrix::from_valid(op))
}

/// assignment[old_level] = new_level, greedy on |<new|old>|.
fn match_levels(old: &Spectrum, new: &Spectrum) -> Vec<usize> {
    let n = old.eigenvalues.len();
    let mut pairs = Vec::with_capacity(n * n);
    for k_new in 0..n {
        for k_old in 0..n {
            let mut overlap = Complex64::new(0.0, 0.0);
            for i in 0..n {
                overlap += new.eigenvectors.get(i, k_new).conj() * old.eigenvectors.get(i, k_old);
            }
            pairs.push((overlap.norm(), k_new, k_old));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut assignment = vec![usize::MAX; n];
    let mut new_taken = vec![false; n];
    let mut assigned = 0;
    for (_, k_new, k_old) in pairs {
        if assigned == n {
            break;
        }
        if assignment[k_old] == usize::MAX && !new_taken[k_new] {
            assignment[k_old] = k_new;
            new_taken[k_new] = true;
            assigned += 1;
        }
    }
    assignment
}

/// Stepwise realization of one isothermal branch: N small angle quenches,
/// each followed by a thermalization window of tau_isochoric at fixed angle.
/// tau_adiabatic is the laboratory duration of each quench; it enters the
/// cycle time but not the state evolution, which treats quenches as ideal.
#[derive(Debug, Clone)]
pub struct IsothermalProtocol {
    pub params: SpinPairParams,
    pub theta_start_rad: f64,
    pub theta_end_rad: f64,
    pub iterations: usize,
    pub tau_adiabatic_ns: f64,
    pub tau_isochoric_ns: f64,
    pub bath: BathTemperature,
}

impl IsothermalProtocol {
    /// Protocol with the reference schedule: 250 steps, 100 us quenches,
    /// 1 ns thermalization windows.
    pub fn new(
        params: SpinPairParams,
        theta_start_rad: f64,
        theta_end_rad: f64,
        bath: BathTemperature,
    ) -> Self {
        IsothermalProtocol {
            params,
            theta_start_rad,
            theta_end_rad,
            iterations: 250,
            tau_adiabatic_ns: 1e5,
            tau_isochoric_ns: 1.0,
            bath,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.iterations == 0 {
            return Err(Error::domain("protocol needs at least one iteration"));
        }
        for (name, v) in [
            ("theta_start", self.theta_start_rad),
            ("theta_end", self.theta_end_rad),
        ] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [
            ("tau_adiabatic_ns", self.tau_adiabatic_ns),
            ("tau_isochoric_ns", self.tau_isochoric_ns),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Angle after iteration n (1-based); n = iterations lands on theta_end.
    fn theta_at(&self, n: usize) -> f64 {
        let frac = n as f64 / self.iterations as f64;
        self.theta_start_rad + (self.theta_end_rad - self.theta_start_rad) * frac
    }
}

/// State of the working medium after one protocol iteration.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub index: usize,
    pub theta_rad: f64,
    pub state: DensityMatrix,
    /// Fidelity to the Gibbs state of the current Hamiltonian.
    pub fidelity_to_instantaneous_gibbs: f64,
    /// Fidelity to the Gibbs state at theta_end, the protocol's target.
    pub fidelity_to_final_gibbs: f64,
    pub populations: [f64; 4],
    pub level_energies_pev: [f64; 4],
}

/// Runs the stepwise protocol from the Gibbs state at theta_start.
pub fn run_isothermal(
    protocol: &IsothermalProtocol,
    gamma0_per_ns: f64,
) -> Result<Vec<IterationRecord>> {
    protocol.validate()?;
    if !(gamma0_per_ns.is_finite() && gamma0_per_ns > 0.0) {
        return Err(Error::domain(format!(
            "gamma0 must be positive and finite, got {gamma0_per_ns}"
        )));
    }

    let h_final = protocol.params.hamiltonian(protocol.theta_end_rad)?;
    let final_gibbs = gibbs_state(&h_final.total, protocol.bath)?;

    let h_start = protocol.params.hamiltonian(protocol.theta_start_rad)?;
    let mut rho = gibbs_state(&h_start.total, protocol.bath)?;
    let mut h_prev = h_start.total;

    // resolve the thermalization window and the fastest rates alike
    let dt = (protocol.tau_isochoric_ns / 200.0).min(0.05 / gamma0_per_ns);

    let mut records = Vec::with_capacity(protocol.iterations);
    for n in 1..=protocol.iterations {
        let theta = protocol.theta_at(n);
        let h = protocol.params.hamiltonian(theta)?;
        rho = adiabatic_map(&rho, &h_prev, &h.total)?;
        if protocol.tau_isochoric_ns > 0.0 {
            let dissipator = build_dissipator(&h.total, protocol.bath, gamma0_per_ns)?;
            rho = propagate(&rho, &h.total, &dissipator, protocol.tau_isochoric_ns, dt)?;
        }

        let spec = hermitian_eig(&h.total)?;
        let instantaneous_gibbs = gibbs_state(&h.total, protocol.bath)?;
        let populations: [f64; 4] = rho
            .populations(&spec)
            .as_slice()
            .try_into()
            .expect("two-spin space has four levels");
        let level_energies_pev: [f64; 4] = spec
            .eigenvalues
            .as_slice()
            .try_into()
            .expect("two-spin space has four levels");

        records.push(IterationRecord {
            index: n,
            theta_rad: theta,
            state: rho.clone(),
            fidelity_to_instantaneous_gibbs: fidelity(&rho, &instantaneous_gibbs)?,
            fidelity_to_final_gibbs: fidelity(&rho, &final_gibbs)?,
            populations,
            level_energies_pev,
        });
        h_prev = h.total;
    }
    Ok(records)
}

/// Slowest relaxation 1/e rate of the dissipator at unit gamma0, minimized
/// over the protocol's angle grid.
///
/// The Davies generator splits in the eigenbasis: populations follow the
/// classical rate matrix (symmetrized by detailed balance into a real
/// symmetric form), coherences decay at half the summed escape rates. The
/// slowest nonzero mode over both families bounds the approach to Gibbs.
fn slowest_unit_rate(protocol: &IsothermalProtocol) -> Result<f64> {
    let mut slowest = f64::INFINITY;
    for n in 1..=protocol.iterations {
        let theta = protocol.theta_at(n);
        let h = protocol.params.hamiltonian(theta)?;
        let spec = hermitian_eig(&h.total)?;
        let dim = spec.eigenvalues.len();

        let mut rates = vec![vec![0.0; dim]; dim]; // rates[from][to]
        for from in 0..dim {
            for to in 0..dim {
                if from != to {
                    let de = spec.eigenvalues[from] - spec.eigenvalues[to];
                    rates[from][to] = pair_rate(de, protocol.bath.kt_pev(), 1.0);
                }
            }
        }
        let escape: Vec<f64> = (0..dim)
            .map(|i| (0..dim).map(|j| rates[i][j]).sum())
            .collect();

        // detailed balance makes D^{1/2} M D^{-1/2} symmetric with entries
        // sqrt(k_ij k_ji); same spectrum as the population generator
        let sym = Operator::from_fn(dim, |i, j| {
            if i == j {
                Complex64::new(-escape[i], 0.0)
            } else {
                Complex64::new((rates[i][j] * rates[j][i]).sqrt(), 0.0)
            }
        });
        let modes = hermitian_eig(&sym)?;
        let scale = modes
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, &x| m.max(x.abs()));
        for &lambda in &modes.eigenvalues {
            let rate = lambda.abs();
            if rate > 1e-12 * scale.max(1.0) {
                slowest = slowest.min(rate);
            }
        }
        for m in 0..dim {
            for nn in m + 1..dim {
                slowest = slowest.min(0.5 * (escape[m] + escape[nn]));
            }
        }
    }
    if !slowest.is_finite() || slowest <= 0.0 {
        return Err(Error::domain(
            "protocol has no relaxing mode to calibrate against",
        ));
    }
    Ok(slowest)
}

/// Coupling strength that gives the slowest relaxation mode along the
/// protocol a 1/e time of `target_ns`.
pub fn calibrate_gamma0(protocol: &IsothermalProtocol, target_ns: f64) -> Result<f64> {
    protocol.validate()?;
    if !(target_ns.is_finite() && target_ns > 0.0) {
        return Err(Error::domain(format!(
            "relaxation target must be positive, got {target_ns}"
        )));
    }
    Ok(1.0 / (target_ns * slowest_unit_rate(protocol)?))
}

/// Laboratory timing of the full Stirling cycle built from two stepwise
/// isothermal branches plus the two isochoric equilibration windows.
#[derive(Debug, Clone, Copy)]
pub struct PowerEstimate {
    pub t_cycle_ns: f64,
    pub t_cycle_ms: f64,
    pub power_watts: f64,
}

/// Power W / t_cycle with
/// t_cycle = 2 N (tau_adiabatic + tau_isochoric) + 2 tau_isochoric.
pub fn estimate_power(work_pev: f64, protocol: &IsothermalProtocol) -> Result<PowerEstimate> {
    protocol.validate()?;
    if !work_pev.is_finite() {
        return Err(Error::domain(format!(
            "work must be finite, got {work_pev}"
        )));
    }
    let t_cycle_ns =
        2.0 * protocol.iterations as f64 * (protocol.tau_adiabatic_ns + protocol.tau_isochoric_ns)
            + 2.0 * protocol.tau_isochoric_ns;
    if t_cycle_ns <= 0.0 {
        return Err(Error::domain(
            "cycle time is zero; set a positive tau_adiabatic or tau_isochoric",
        ));
    }
    let power_watts = work_pev * JOULE_PER_PEV / (t_cycle_ns * 1e-9);
    Ok(PowerEstimate {
        t_cycle_ns,
        t_cycle_ms: t_cycle_ns * 1e-6,
        power_watts,
    })
}
