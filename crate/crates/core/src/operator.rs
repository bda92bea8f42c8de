//! Dense complex operators on small Hilbert spaces, plus a self-contained
//! Hermitian eigensolver.
//!
//! Everything here is sized for the 4-dimensional two-spin space (with 2x2
//! single-spin blocks as building material), so dense row-major storage and
//! a cyclic Jacobi diagonalizer are both simpler and faster than pulling in
//! a LAPACK binding. All routines are deterministic: identical inputs give
//! bit-identical outputs, including eigenvector phases.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity gate, relative to the matrix max-norm.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues closer than this (relative to the spectral scale) are treated
/// as one degenerate group and get a canonical basis.
const DEGENERACY_TOL: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this,
/// relative to the full Frobenius norm.
const JACOBI_TARGET: f64 = 1e-14;

const JACOBI_MAX_SWEEPS: usize = 60;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Operator::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from nested rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Operator { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Operator::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Operator) -> Operator {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Operator {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Operator {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        Operator {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Operator {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &Operator) -> Operator {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Operator {
        Operator::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max_ij |a_ij - conj(a_ji)|
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITICITY_TOL * self.max_norm().max(1.0)
    }

    /// (A + A^dagger) / 2
    pub fn hermitian_part(&self) -> Operator {
        Operator::from_fn(self.dim, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    /// Kronecker product, self as the left factor.
    pub fn tensor(&self, other: &Operator) -> Operator {
        let (n, m) = (self.dim, other.dim);
        let mut out = Operator::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Column j as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }
}

/// sigma_x, sigma_y, sigma_z and the ladder combinations (sigma_x +- i sigma_y)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

/// Which spin of the pair an operator acts on. `I` is the left tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    I,
    S,
}

/// 2x2 Pauli matrix in the {up, down} basis.
pub fn single_spin(axis: PauliAxis) -> Operator {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    let rows = match axis {
        PauliAxis::X => vec![
            vec![z(0.0, 0.0), z(1.0, 0.0)],
            vec![z(1.0, 0.0), z(0.0, 0.0)],
        ],
        PauliAxis::Y => vec![
            vec![z(0.0, 0.0), z(0.0, -1.0)],
            vec![z(0.0, 1.0), z(0.0, 0.0)],
        ],
        PauliAxis::Z => vec![
            vec![z(1.0, 0.0), z(0.0, 0.0)],
            vec![z(0.0, 0.0), z(-1.0, 0.0)],
        ],
        PauliAxis::Plus => vec![
            vec![z(0.0, 0.0), z(1.0, 0.0)],
            vec![z(0.0, 0.0), z(0.0, 0.0)],
        ],
        PauliAxis::Minus => vec![
            vec![z(0.0, 0.0), z(0.0, 0.0)],
            vec![z(1.0, 0.0), z(0.0, 0.0)],
        ],
    };
    Operator::from_rows(&rows).expect("static 2x2 data")
}

/// Single-site Pauli embedded in the two-spin space, ordering
/// |uu>, |ud>, |du>, |dd> with spin I as the left factor.
pub fn pauli_operator(axis: PauliAxis, site: Site) -> Operator {
    let op = single_spin(axis);
    let id = Operator::identity(2);
    match site {
        Site::I => op.tensor(&id),
        Site::S => id.tensor(&op),
    }
}

/// Eigendecomposition of a Hermitian operator.
///
/// Eigenvalues ascend; `eigenvectors` holds the matching unit eigenvectors as
/// columns. Degenerate groups carry a canonical basis (projected standard
/// basis, Gram-Schmidt in index order) and every column has its first
/// largest-modulus entry rotated to the positive real axis, so the
/// decomposition is a pure function of the input.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Operator,
}

impl Spectrum {
    /// V diag(f(lambda)) V^dagger
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Operator {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        Operator::from_fn(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += v.get(i, k) * f(self.eigenvalues[k]) * v.get(j, k).conj();
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> Operator {
        self.reconstruct_with(|x| x)
    }
}

/// Cyclic Jacobi diagonalization.
pub fn hermitian_eig(h: &Operator) -> Result<Spectrum> {
    if !h.max_norm().is_finite() {
        return Err(Error::domain("operator entries must be finite"));
    }
    let tol = HERMITICITY_TOL * h.max_norm().max(1.0);
    let dev = h.hermiticity_deviation();
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tol,
        });
    }

    let n = h.dim();
    // Symmetrize away the sub-tolerance asymmetry so the iteration sees an
    // exactly Hermitian matrix.
    let mut a = h.hermitian_part();
    let mut v = Operator::identity(n);

    let scale = a.frobenius_norm().max(1.0);
    let target = JACOBI_TARGET * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::ConvergenceError {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    // Stable ascending sort of (eigenvalue, original index).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = Operator::from_fn(n, |i, j| v.get(i, order[j]));

    canonicalize_degenerate_groups(&eigenvalues, &mut vectors);
    for j in 0..n {
        canonicalize_phase(&mut vectors, j);
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors: vectors,
    })
}

fn off_diagonal_norm(a: &Operator) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating a[p][q].
///
/// Factoring the pivot as r*u with |u| = 1 reduces the 2x2 block to a real
/// symmetric one; the classic small-angle root keeps rotations bounded.
fn jacobi_rotate(a: &mut Operator, v: &mut Operator, p: usize, q: usize) {
    let g = a.get(p, q);
    let r = g.norm();
    if r == 0.0 {
        return;
    }
    let u = g / r;
    let alpha = a.get(p, p).re;
    let beta = a.get(q, q).re;
    let tau = (beta - alpha) / (2.0 * r);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column transform J differs from the identity only at
    // J[p][p] = u c, J[p][q] = -u s, J[q][p] = s, J[q][q] = c.
    let n = a.dim();
    let jpp = u * c;
    let jpq = u * (-s);
    let jqp = Complex64::new(s, 0.0);
    let jqq = Complex64::new(c, 0.0);

    // A <- A J
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * jpp + aiq * jqp);
        a.set(i, q, aip * jpq + aiq * jqq);
    }
    // A <- J^dagger A
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, jpp.conj() * apj + jqp.conj() * aqj);
        a.set(q, j, jpq.conj() * apj + jqq.conj() * aqj);
    }
    // The rotation annihilates the pivot analytically; pin it to keep the
    // matrix exactly Hermitian.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    a.set(p, p, Complex64::new(app.re, 0.0));
    a.set(q, q, Complex64::new(aqq.re, 0.0));

    // V <- V J
    for i in 0..n {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * jpp + viq * jqp);
        v.set(i, q, vip * jpq + viq * jqq);
    }
}

/// Replaces each degenerate eigenvector group by the projected standard
/// basis, orthonormalized in index order. The projector is basis independent,
/// so the result does not depend on what Jacobi happened to produce.
fn canonicalize_degenerate_groups(eigenvalues: &[f64], vectors: &mut Operator) {
    let n = eigenvalues.len();
    let scale = eigenvalues.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    let tol = DEGENERACY_TOL * scale;

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[end - 1]).abs() <= tol {
            end += 1;
        }
        if end - start > 1 {
            rebuild_group_basis(vectors, start, end);
        }
        start = end;
    }
}

fn rebuild_group_basis(vectors: &mut Operator, start: usize, end: usize) {
    let n = vectors.dim();
    let g = end - start;

    // P = sum_k v_k v_k^dagger over the group
    let proj = Operator::from_fn(n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in start..end {
            acc += vectors.get(i, k) * vectors.get(j, k).conj();
        }
        acc
    });

    let mut accepted: Vec<Vec<Complex64>> = Vec::with_capacity(g);
    for seed in 0..n {
        if accepted.len() == g {
            break;
        }
        let mut w: Vec<Complex64> = (0..n).map(|i| proj.get(i, seed)).collect();
        for a in &accepted {
            let overlap: Complex64 = a.iter().zip(&w).map(|(ai, wi)| ai.conj() * wi).sum();
            for (wi, ai) in w.iter_mut().zip(a) {
                *wi -= overlap * ai;
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for wi in &mut w {
                *wi /= norm;
            }
            accepted.push(w);
        }
    }
    debug_assert_eq!(
        accepted.len(),
        g,
        "projected standard basis spans the group"
    );

    for (k, vec) in accepted.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, start + k, vec[i]);
        }
    }
}

/// Rotates column j so its first largest-modulus entry is real positive.
fn canonicalize_phase(vectors: &mut Operator, j: usize) {
    let n = vectors.dim();
    let mut best = 0;
    let mut best_norm = 0.0;
    for i in 0..n {
        let m = vectors.get(i, j).norm();
        if m > best_norm {
            best_norm = m;
            best = i;
        }
    }
    if best_norm == 0.0 {
        return;
    }
    let phase = vectors.get(best, j).conj() / best_norm;
    for i in 0..n {
        let v = vectors.get(i, j) * phase;
        vectors.set(i, j, v);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFunction {
    Exp,
    Log,
    Sqrt,
}

/// Negative eigenvalues no larger than this (in magnitude) are clamped to
/// zero before log and sqrt; anything more negative is a domain error.
pub const SPECTRAL_CLAMP: f64 = 1e-12;

/// Support cutoff: log and entropy treat eigenvalues at or below this as
/// exact zeros (0 log 0 = 0 convention).
pub const SUPPORT_CUTOFF: f64 = 1e-15;

/// Spectral calculus f(H) = V f(Lambda) V^dagger for Hermitian H.
pub fn matrix_function(h: &Operator, f: MatrixFunction) -> Result<Operator> {
    let spec = hermitian_eig(h)?;
    if matches!(f, MatrixFunction::Log | MatrixFunction::Sqrt) {
        let min = spec
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < -SPECTRAL_CLAMP {
            return Err(Error::domain(format!(
                "matrix {f:?} needs a positive semidefinite input; smallest eigenvalue {min:.3e}"
            )));
        }
    }
    let out = match f {
        MatrixFunction::Exp => spec.reconstruct_with(f64::exp),
        MatrixFunction::Log => {
            spec.reconstruct_with(|x| if x > SUPPORT_CUTOFF { x.ln() } else { 0.0 })
        }
        MatrixFunction::Sqrt => spec.reconstruct_with(|x| if x > 0.0 { x.sqrt() } else { 0.0 }),
    };
    Ok(out)
}
