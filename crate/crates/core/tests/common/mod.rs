//! Helpers shared by the integration suites: a self-contained dense complex
//! matrix with an exact exponential, the vectorized master-equation
//! generator, and seeded random-state factories. The matrix arithmetic here
//! deliberately does not go through the library so that oracle comparisons
//! exercise an independent code path.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spin_stirling::lindblad::Dissipator;
use spin_stirling::operator::{hermitian_eig, Operator};
use spin_stirling::spin::HBAR_PEV_NS;
use spin_stirling::thermo::DensityMatrix;

/// Row-major n x n complex matrix.
pub struct CMat {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> CMat {
        CMat {
            n,
            a: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_operator(op: &Operator) -> CMat {
        let n = op.dim();
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = op.get(i, j);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }

    pub fn adjoint(&self) -> CMat {
        let mut m = CMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[j * self.n + i] = self.a[i * self.n + j].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        let n = self.n;
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m.a[i * n + j] += aik * other.a[k * n + j];
                }
            }
        }
        m
    }

    pub fn scaled(&self, c: Complex64) -> CMat {
        CMat {
            n: self.n,
            a: self.a.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &CMat) {
        for (v, w) in self.a.iter_mut().zip(other.a.iter()) {
            *v += w;
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        CMat {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(other.a.iter())
                .map(|(v, w)| v - w)
                .collect(),
        }
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self.a[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// exp(M) by scaling and squaring with a plain Taylor series; exact to
/// machine precision at the 16 x 16 sizes used here.
pub fn expm(m: &CMat) -> CMat {
    let norm = m.one_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scaled(Complex64::new(2f64.powi(-squarings), 0.0));
    let mut term = CMat::identity(m.n);
    let mut sum = CMat::identity(m.n);
    for k in 1..60 {
        term = term
            .mul(&scaled)
            .scaled(Complex64::new(1.0 / k as f64, 0.0));
        sum.add_assign(&term);
        if term.one_norm() < 1e-20 {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = out.mul(&out);
    }
    out
}

/// Right-hand side of the master equation, written out from scratch:
/// -(i/hbar)[h, x] + sum_j gamma_j (L x L+ - 1/2 {L+L, x}).
fn master_rhs(h: &CMat, jumps: &[(CMat, f64)], x: &CMat) -> CMat {
    let i_over_hbar = Complex64::new(0.0, -1.0 / HBAR_PEV_NS);
    let mut out = h.mul(x).sub(&x.mul(h)).scaled(i_over_hbar);
    for (l, rate) in jumps {
        let ladj = l.adjoint();
        let ll = ladj.mul(l);
        let sandwich = l.mul(x).mul(&ladj);
        let mut anti = ll.mul(x);
        anti.add_assign(&x.mul(&ll));
        let term = sandwich.sub(&anti.scaled(Complex64::new(0.5, 0.0)));
        out.add_assign(&term.scaled(Complex64::new(*rate, 0.0)));
    }
    out
}

/// The generator as a dense matrix on row-stacked density matrices:
/// column (k, l) holds vec(rhs(E_kl)).
pub fn liouvillian(h: &Operator, dissipator: &Dissipator) -> CMat {
    let d = h.dim();
    let hc = CMat::from_operator(h);
    let jumps: Vec<(CMat, f64)> = dissipator
        .jump_terms()
        .iter()
        .map(|t| (CMat::from_operator(&t.op), t.rate_per_ns))
        .collect();
    let mut sup = CMat::zeros(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut basis = CMat::zeros(d);
            basis.set(k, l, Complex64::new(1.0, 0.0));
            let image = master_rhs(&hc, &jumps, &basis);
            for i in 0..d {
                for j in 0..d {
                    sup.set(i * d + j, k * d + l, image.get(i, j));
                }
            }
        }
    }
    sup
}

/// Evolves rho0 for t_ns by exponentiating the full generator exactly.
pub fn evolve_by_exponential(
    rho0: &DensityMatrix,
    h: &Operator,
    dissipator: &Dissipator,
    t_ns: f64,
) -> Operator {
    let d = h.dim();
    let propagator = expm(&liouvillian(h, dissipator).scaled(Complex64::new(t_ns, 0.0)));
    let mut vec0 = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            vec0[i * d + j] = rho0.operator().get(i, j);
        }
    }
    let mut out = Operator::zeros(d);
    for row in 0..d * d {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..d * d {
            acc += propagator.get(row, col) * vec0[col];
        }
        out.set(row / d, row % d, acc);
    }
    out
}

/// 1/2 sum |lambda_i(a - b)| for Hermitian a, b.
pub fn trace_distance(a: &Operator, b: &Operator) -> f64 {
    let diff = a.sub(b).hermitian_part();
    let spec = hermitian_eig(&diff).expect("difference of Hermitian operators");
    0.5 * spec.eigenvalues.iter().map(|e| e.abs()).sum::<f64>()
}

pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Full-rank random state G G+ / tr(G G+).
pub fn random_density(rng: &mut StdRng, dim: usize) -> DensityMatrix {
    let g = Operator::from_fn(dim, |_, _| random_complex(rng));
    let mut gram = g.mul(&g.adjoint());
    // a sliver of the identity keeps the trace well away from zero
    let lift = Operator::identity(dim).scale_re(1e-3);
    gram = gram.add(&lift);
    let trace = gram.trace().re;
    DensityMatrix::new(gram.scale_re(1.0 / trace)).expect("Gram matrix is a valid state")
}

/// Random pure state as a rank-one projector.
pub fn random_pure(rng: &mut StdRng, dim: usize) -> DensityMatrix {
    let amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let op = Operator::from_fn(dim, |i, j| amps[i] * amps[j].conj() / (norm * norm));
    DensityMatrix::new(op).expect("projector is a valid state")
}

pub fn min_eigenvalue(op: &Operator) -> f64 {
    hermitian_eig(&op.hermitian_part())
        .expect("state eigendecomposition")
        .eigenvalues[0]
}
