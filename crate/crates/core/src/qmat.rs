//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Everything here works on 2×2 and 4×4 matrices only. The two-qubit basis is
//! ordered `|00⟩, |01⟩, |10⟩, |11⟩` with the left symbol belonging to qubit A
//! (Alice), so basis index `2a + b` labels `|a b⟩`.
//!
//! Entropies are measured in bits.

use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for Hermiticity and unit trace of a [`DensityMatrix`].
pub const MATRIX_TOL: f64 = 1e-12;
/// Smallest eigenvalue a [`DensityMatrix`] may have.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Hermiticity tolerance accepted by the eigenvalue solver.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for col in 0..self.dim {
                let z = self[(r, col)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.entries[r * self.dim + col]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.entries[r * self.dim + col]
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        _ => Err(Error::UnsupportedDimension(dim, "2 or 4")),
    }
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![C64::default(); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn diag(values: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        Ok(m)
    }

    /// `|ket⟩⟨ket|` for a column vector of length 2 or 4.
    pub fn outer(ket: &[C64]) -> Result<Self> {
        let dim = ket.len();
        let mut m = Self::zeros(dim)?;
        for r in 0..dim {
            for col in 0..dim {
                m[(r, col)] = ket[r] * ket[col].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![C64::default(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == C64::default() {
                    continue;
                }
                for col in 0..n {
                    out[r * n + col] += a * other.entries[k * n + col];
                }
            }
        }
        Ok(Self {
            dim: n,
            entries: out,
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = vec![C64::default(); n * n];
        for r in 0..n {
            for col in 0..n {
                out[col * n + r] = self.entries[r * n + col].conj();
            }
        }
        Self {
            dim: n,
            entries: out,
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other` of two 2×2 matrices; `self` acts on qubit A.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim, "2"));
        }
        if other.dim != 2 {
            return Err(Error::UnsupportedDimension(other.dim, "2"));
        }
        let mut m = Self::zeros(4)?;
        for a in 0..2 {
            for a2 in 0..2 {
                for b in 0..2 {
                    for b2 in 0..2 {
                        m[(2 * a + b, 2 * a2 + b2)] = self[(a, a2)] * other[(b, b2)];
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A†|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for col in r..n {
                worst = worst.max((self[(r, col)] - self[(col, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| (0..self.dim).map(|k| self[(r, k)] * v[k]).sum())
            .collect())
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.dagger())
    }
}

/// Free-function form of [`ComplexMatrix::matmul`].
pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.trace()
}

/// A validated one- or two-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herm = mat.hermiticity_error();
        if herm > MATRIX_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = mat.trace();
        if (tr - c(1.0, 0.0)).norm() > MATRIX_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let spectrum = hermitian_eigenvalues(&mat)?;
        let smallest = spectrum.last().copied().unwrap_or(0.0);
        if smallest < EIGEN_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {smallest:e}"
            )));
        }
        Ok(Self { mat })
    }

    /// `|ket⟩⟨ket|` for a normalized ket.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(ket)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let id = ComplexMatrix::identity(dim)?;
        Self::new(id.scale(c(1.0 / dim as f64, 0.0)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `ρ_A ⊗ ρ_B` of two single-qubit states.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(self.mat.kron(&other.mat)?)
    }

    /// `U ρ U†`, revalidated.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.mat.conjugate_by(u)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of the `keep` qubit of a two-qubit state.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension(rho.dim(), "4"));
    }
    DensityMatrix::new(partial_trace_raw(rho.matrix(), keep)?)
}

/// Partial trace without density-matrix validation, for unnormalized operators.
pub(crate) fn partial_trace_raw(m: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::UnsupportedDimension(m.dim(), "4"));
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = (0..2)
                .map(|k| match keep {
                    Subsystem::A => m[(2 * i + k, 2 * j + k)],
                    Subsystem::B => m[(2 * k + i, 2 * k + j)],
                })
                .sum();
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// the columns of a unitary matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let herm = h.hermiticity_error();
    if herm > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let n = h.dim();
    // Symmetrize away the sub-tolerance anti-Hermitian part.
    let mut a = h.add(&h.dagger())?.scale(c(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n)?;
    let scale = a
        .entries()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1.0);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for col in 0..n {
                if r != col {
                    s += a[(r, col)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= JACOBI_OFF_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let abs_b = b.norm();
                if abs_b == 0.0 {
                    continue;
                }
                let phase = b / abs_b;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * abs_b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // W = D·J where D rotates the (p,q) phase away and J is a real
                // plane rotation annihilating the now-real pivot.
                let mut w = ComplexMatrix::identity(n)?;
                let dq = phase.conj();
                w[(p, p)] = c(cs, 0.0);
                w[(p, q)] = c(sn, 0.0);
                w[(q, p)] = dq * -sn;
                w[(q, q)] = dq * cs;
                a = w.dagger().matmul(&a)?.matmul(&w)?;
                a[(p, q)] = C64::default();
                a[(q, p)] = C64::default();
                v = v.matmul(&w)?;
            }
        }
    }
    if !converged && off_norm(&a) > JACOBI_OFF_TOL * scale {
        return Err(Error::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(h).map(|(values, _)| values)
}

/// A discrete probability distribution. Tiny negative entries are clamped to 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub const SUM_TOL: f64 = 1e-10;
    pub const NEGATIVE_TOL: f64 = -1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty".into()));
        }
        if let Some(bad) = probs
            .iter()
            .find(|p| !p.is_finite() || **p < Self::NEGATIVE_TOL)
        {
            return Err(Error::InvalidProbabilities(format!(
                "entry {bad} out of range"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidProbabilities(format!(
                "sum is {sum}, expected 1"
            )));
        }
        Ok(Self {
            probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    entropy_bits(p.as_slice())
}

pub(crate) fn entropy_bits(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `H₂(x) = -x log₂ x - (1-x) log₂(1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    entropy_bits(&[x, 1.0 - x])
}

/// Spectrum clamped into [0, 1].
pub(crate) fn clamp_spectrum(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&x| x.clamp(0.0, 1.0)).collect()
}

/// `S(ρ) = -Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = clamp_spectrum(&hermitian_eigenvalues(rho.matrix())?);
    Ok(shannon_entropy(&ProbabilityVector::new(spectrum)?))
}

/// Single-qubit Pauli matrices and basis kets.
pub mod pauli {
    use super::{c, ComplexMatrix, C64};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .expect("2x2")
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
    }

    /// Computational basis ket `|index⟩` of the given dimension.
    pub fn ket(dim: usize, index: usize) -> Vec<C64> {
        let mut v = vec![C64::default(); dim];
        v[index] = c(1.0, 0.0);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
        let entries = (0..dim * dim)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(dim, entries).unwrap()
    }

    fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
        let m = random_matrix(rng, dim);
        m.add(&m.dagger()).unwrap().scale(c(0.5, 0.0))
    }

    fn bell_phi_plus() -> Vec<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![c(s, 0.0), C64::default(), C64::default(), c(s, 0.0)]
    }

    fn werner(p: f64) -> DensityMatrix {
        let pure = ComplexMatrix::outer(&bell_phi_plus())
            .unwrap()
            .scale(c(p, 0.0));
        let mixed = ComplexMatrix::identity(4)
            .unwrap()
            .scale(c((1.0 - p) / 4.0, 0.0));
        DensityMatrix::new(pure.add(&mixed).unwrap()).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ComplexMatrix::zeros(3).is_err());
        assert!(ComplexMatrix::new(2, vec![C64::default(); 3]).is_err());
        assert_eq!(
            ComplexMatrix::new(2, vec![c(f64::NAN, 0.0); 4]),
            Err(Error::NonFinite)
        );
        let a = ComplexMatrix::identity(2).unwrap();
        let b = ComplexMatrix::identity(4).unwrap();
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(b.kron(&a).is_err());
    }

    #[test]
    fn identity_and_involution_products() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(i2.matmul(&i2).unwrap(), i2);
        assert_eq!(pauli::x().matmul(&pauli::x()).unwrap(), i2);
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        let prod = a.matmul(&b).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C64::default();
                for k in 0..4 {
                    acc += a.entries()[i * 4 + k] * b.entries()[k * 4 + j];
                }
                assert!((prod[(i, j)] - acc).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn dagger_cases() {
        let i4 = ComplexMatrix::identity(4).unwrap();
        assert_eq!(i4.dagger(), i4);
        let mut m = ComplexMatrix::zeros(2).unwrap();
        m[(0, 1)] = c(0.0, 1.0);
        let d = m.dagger();
        assert_eq!(d[(1, 0)], c(0.0, -1.0));
        assert_eq!(d[(0, 1)], C64::default());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = random_matrix(&mut rng, 4);
        assert_eq!(r.dagger().dagger(), r);
    }

    #[test]
    fn kron_cases() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(i2.kron(&i2).unwrap(), ComplexMatrix::identity(4).unwrap());

        let (a, b) = (c(2.0, 1.0), c(-3.0, 0.5));
        let d = ComplexMatrix::diag(&[a, b]).unwrap().kron(&i2).unwrap();
        assert_eq!(d, ComplexMatrix::diag(&[a, a, b, b]).unwrap());

        // |00> is index 0 and |11> index 3.
        let xx = pauli::x().kron(&pauli::x()).unwrap();
        let out = xx.apply(&pauli::ket(4, 0)).unwrap();
        assert_eq!(out, pauli::ket(4, 3));
    }

    #[test]
    fn trace_cases() {
        assert_eq!(ComplexMatrix::identity(4).unwrap().trace(), c(4.0, 0.0));
        for p in [0.0, 0.3, 1.0] {
            assert!((werner(p).matrix().trace() - c(1.0, 0.0)).norm() < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        let ab = a.matmul(&b).unwrap().trace();
        let ba = b.matmul(&a).unwrap().trace();
        assert!((ab - ba).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_cases() {
        let zero_zero = DensityMatrix::pure(&pauli::ket(4, 0)).unwrap();
        let reduced = partial_trace(&zero_zero, Subsystem::A).unwrap();
        assert_eq!(
            reduced.matrix(),
            &ComplexMatrix::outer(&pauli::ket(2, 0)).unwrap()
        );

        let half = DensityMatrix::maximally_mixed(2).unwrap();
        for p in [0.0, 0.25, 0.5, 1.0] {
            for keep in [Subsystem::A, Subsystem::B] {
                let r = partial_trace(&werner(p), keep).unwrap();
                assert!(r.matrix().max_abs_diff(half.matrix()) < 1e-15);
            }
        }
        let bell = DensityMatrix::pure(&bell_phi_plus()).unwrap();
        let r = partial_trace(&bell, Subsystem::B).unwrap();
        assert!(r.matrix().max_abs_diff(half.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_keeps_the_right_factor() {
        // |0><0| (x) |+><+|: tracing B gives |0><0|, tracing A gives |+><+|.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = DensityMatrix::pure(&pauli::ket(2, 0)).unwrap();
        let plus = DensityMatrix::pure(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        let joint = zero.tensor(&plus).unwrap();
        let a = partial_trace(&joint, Subsystem::A).unwrap();
        let b = partial_trace(&joint, Subsystem::B).unwrap();
        assert!(a.matrix().max_abs_diff(zero.matrix()) < 1e-15);
        assert!(b.matrix().max_abs_diff(plus.matrix()) < 1e-15);
    }

    #[test]
    fn eigenvalue_cases() {
        let d = ComplexMatrix::from_real(
            4,
            &[
                3., 0., 0., 0., 0., 1., 0., 0., 0., 0., 2., 0., 0., 0., 0., 0.,
            ],
        )
        .unwrap();
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![3.0, 2.0, 1.0, 0.0]);

        for p in [0.0, 0.2, 1.0 / 3.0, 0.75, 1.0] {
            let ev = hermitian_eigenvalues(werner(p).matrix()).unwrap();
            let hi = (1.0 + 3.0 * p) / 4.0;
            let lo = (1.0 - p) / 4.0;
            let expected = [hi, lo, lo, lo];
            for (got, want) in ev.iter().zip(expected) {
                assert!((got - want).abs() < 1e-12, "p={p}: {ev:?}");
            }
        }

        let ev =
            hermitian_eigenvalues(DensityMatrix::pure(&bell_phi_plus()).unwrap().matrix()).unwrap();
        for (got, want) in ev.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2).unwrap();
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn eigen_residuals_on_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 4] {
            for _ in 0..200 {
                let h = random_hermitian(&mut rng, dim).scale(c(5.0, 0.0));
                let (values, vectors) = hermitian_eigen(&h).unwrap();
                assert!(values.windows(2).all(|w| w[0] >= w[1]));
                let sum: f64 = values.iter().sum();
                assert!((sum - h.trace().re).abs() < 1e-10);
                for (k, &lambda) in values.iter().enumerate() {
                    let col: Vec<C64> = (0..dim).map(|r| vectors[(r, k)]).collect();
                    let hv = h.apply(&col).unwrap();
                    let resid: f64 = hv
                        .iter()
                        .zip(&col)
                        .map(|(a, b)| (a - b * lambda).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(resid <= 1e-8, "residual {resid}");
                }
                let vv = vectors.dagger().matmul(&vectors).unwrap();
                assert!(vv.max_abs_diff(&ComplexMatrix::identity(dim).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn shannon_cases() {
        let h = |v: Vec<f64>| shannon_entropy(&ProbabilityVector::new(v).unwrap());
        assert_eq!(h(vec![1.0, 0.0]), 0.0);
        assert!((h(vec![0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert!((h(vec![0.25; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(h(vec![1.0, -1e-13]), 0.0);
        assert!(ProbabilityVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityVector::new(vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn von_neumann_cases() {
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-12);
        let bell = DensityMatrix::pure(&bell_phi_plus()).unwrap();
        assert!(von_neumann_entropy(&bell).unwrap().abs() < 1e-12);
        let expected = 0.5 + 0.5 * 6f64.log2();
        let s = von_neumann_entropy(&werner(1.0 / 3.0)).unwrap();
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 1.79248).abs() < 1e-5);
    }

    #[test]
    fn density_matrix_validation() {
        let not_unit = ComplexMatrix::identity(2).unwrap();
        assert!(DensityMatrix::new(not_unit).is_err());
        let negative = ComplexMatrix::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
        let mut skew = ComplexMatrix::from_real(2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(skew.clone()).is_err());
        skew[(1, 0)] = c(0.1, 0.0);
        assert!(DensityMatrix::new(skew).is_ok());
    }
}
