//! Cyclic Jacobi eigensolver for complex Hermitian matrices and the matrix
//! functions built on top of it.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{ComplexMatrix, HermitianOperator, C64};
use crate::{Error, Result, SUPPORT_EPS};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Spectral decomposition `M = V diag(λ) V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V diag(f(λ)) V†`.
    pub fn compose(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        self.compose_values(&mapped)
    }

    pub fn compose_values(&self, values: &[f64]) -> HermitianOperator {
        let n = self.dim();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in values.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        HermitianOperator::from_hermitian_part(&out)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.compose_values(&self.values)
    }

    /// Expresses `x` in the eigenbasis: `V† x V`.
    pub fn to_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.vectors.adjoint().matmul(x).matmul(&self.vectors)
    }

    /// Maps a matrix from the eigenbasis back: `V y V†`.
    pub fn from_eigenbasis(&self, y: &ComplexMatrix) -> ComplexMatrix {
        self.vectors.sandwich(y)
    }

    /// Orthogonal projector onto eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> HermitianOperator {
        self.compose(|l| if keep(l) { 1.0 } else { 0.0 })
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues are returned in ascending order.
pub fn herm_eig(m: &HermitianOperator) -> EigenDecomposition {
    let n = m.dim();
    let mut a = m.as_matrix().hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let tol = OFF_DIAGONAL_TOL * a.frobenius_norm();
    // Entries this small cannot keep the off-diagonal mass above `tol`.
    let skip = tol / n.max(1) as f64;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a.as_mut_slice(), v.as_mut_slice(), n, p, q, skip);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    EigenDecomposition { values, vectors }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let d = a.as_slice();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += d[i * n + j].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

// Zeroes a[p][q] with U = D R, D = diag(1, e^{-iφ}) removing the phase of
// a[p][q] and R the real symmetric Jacobi rotation. Only columns p, q are
// computed; rows follow from hermiticity.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize, skip: f64) {
    let z = a[p * n + q];
    let abs = z.norm();
    if abs <= skip || abs <= f64::MIN_POSITIVE {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let ph_c = z.conj() / abs;
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta < 0.0 { -1.0 } else { 1.0 };
        sign / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let qs = ph_c * s;
    let qc = ph_c * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let nkp = akp * c - akq * qs;
        let nkq = akp * s + akq * qc;
        a[k * n + p] = nkp;
        a[k * n + q] = nkq;
        a[p * n + k] = nkp.conj();
        a[q * n + k] = nkq.conj();
    }
    a[p * n + p] = C64::new(app - t * abs, 0.0);
    a[q * n + q] = C64::new(aqq + t * abs, 0.0);
    a[p * n + q] = C64::zero();
    a[q * n + p] = C64::zero();

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * qs;
        v[k * n + q] = vkp * s + vkq * qc;
    }
}

/// Applies a scalar function through the spectral decomposition.
///
/// With `support_only`, `f` is evaluated only on eigenvalues above
/// [`SUPPORT_EPS`]; the rest map to zero (so `0 log 0 = 0`).
pub fn mat_func(
    m: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    support_only: bool,
) -> Result<HermitianOperator> {
    let eig = herm_eig(m);
    mat_func_eig(&eig, f, support_only)
}

pub fn mat_func_eig(
    eig: &EigenDecomposition,
    f: impl Fn(f64) -> f64,
    support_only: bool,
) -> Result<HermitianOperator> {
    let mut mapped = Vec::with_capacity(eig.dim());
    for &l in &eig.values {
        let y = if support_only && l <= SUPPORT_EPS {
            0.0
        } else {
            f(l)
        };
        if !y.is_finite() {
            return Err(Error::Domain { eigenvalue: l });
        }
        mapped.push(y);
    }
    Ok(eig.compose_values(&mapped))
}

/// Real matrix of first divided differences of `f` over the spectrum,
/// `Γ_ij = (f(λ_i) - f(λ_j)) / (λ_i - λ_j)` and `Γ_ii = f'(λ_i)`. The
/// Fréchet derivative of `X ↦ f(X)` in direction `E` is
/// `V (Γ ∘ V†EV) V†`.
pub fn divided_differences(
    values: &[f64],
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let n = values.len();
    let fv: Vec<f64> = values.iter().map(|&l| f(l)).collect();
    let mut g = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (li, lj) = (values[i], values[j]);
            let gap = li - lj;
            g[i * n + j] = if gap.abs() <= 1e-12 * li.abs().max(lj.abs()).max(1e-300) {
                df(0.5 * (li + lj))
            } else {
                (fv[i] - fv[j]) / gap
            };
        }
    }
    g
}

/// `V (Γ ∘ (V† x V)) V†` for a divided-difference matrix `Γ` from
/// [`divided_differences`].
pub fn frechet_apply(eig: &EigenDecomposition, gamma: &[f64], x: &ComplexMatrix) -> ComplexMatrix {
    let n = eig.dim();
    let mut y = eig.to_eigenbasis(x);
    for i in 0..n {
        for j in 0..n {
            y[(i, j)] *= gamma[i * n + j];
        }
    }
    eig.from_eigenbasis(&y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_valid(m: &HermitianOperator, eig: &EigenDecomposition) {
        let recon = eig.reconstruct();
        let err = (recon.as_matrix() - m.as_matrix()).frobenius_norm();
        assert!(
            err <= 1e-9 * m.frobenius_norm().max(1.0),
            "reconstruction error {err}"
        );
        let gram = eig.vectors.adjoint().matmul(&eig.vectors);
        let orth = (&gram - &ComplexMatrix::identity(m.dim())).frobenius_norm();
        assert!(orth <= 1e-9, "orthonormality error {orth}");
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_spectrum() {
        let m = HermitianOperator::from_real_diag(&[3.0, 1.0]);
        let eig = herm_eig(&m);
        assert_eq!(eig.values, vec![1.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let mut x = ComplexMatrix::zeros(2, 2);
        x[(0, 1)] = C64::new(1.0, 0.0);
        x[(1, 0)] = C64::new(1.0, 0.0);
        let eig = herm_eig(&HermitianOperator::new(x.clone()).unwrap());
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert_valid(&HermitianOperator::new(x).unwrap(), &eig);
    }

    #[test]
    fn complex_phases() {
        let mut y = ComplexMatrix::zeros(2, 2);
        y[(0, 1)] = C64::new(0.0, -1.0);
        y[(1, 0)] = C64::new(0.0, 1.0);
        let y = HermitianOperator::new(y).unwrap();
        let eig = herm_eig(&y);
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert_valid(&y, &eig);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let n = 1 + trial % 16;
            let m = random::hermitian(n, &mut rng);
            assert_valid(&m, &herm_eig(&m));
        }
        let m = random::hermitian(8, &mut rng);
        assert_valid(&m, &herm_eig(&m));
    }

    #[test]
    fn degenerate_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random::unitary(6, &mut rng);
        let d = HermitianOperator::from_real_diag(&[1.0, 1.0, 1.0, 0.0, 0.0, 2.0]);
        let m = d.conjugate_by(&u);
        let eig = herm_eig(&m);
        assert_valid(&m, &eig);
        for (got, want) in eig.values.iter().zip([0.0, 0.0, 1.0, 1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn sqrt_of_diagonal() {
        let m = HermitianOperator::from_real_diag(&[4.0, 9.0]);
        let r = mat_func(&m, f64::sqrt, false).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn log_uses_support_convention() {
        let m = HermitianOperator::from_real_diag(&[1.0, 0.0]);
        let r = mat_func(&m, f64::ln, true).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::zeros(2, 2)) < 1e-15);
        assert!(matches!(
            mat_func(&m, f64::ln, false),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn sqrt_twice_recovers_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random::psd(5, &mut rng);
            let half = mat_func(&m, f64::sqrt, false).unwrap();
            let back = half.as_matrix().matmul(half.as_matrix());
            assert!(back.max_abs_diff(&m) < 1e-8);
            let quarter = mat_func(&half, f64::sqrt, false).unwrap();
            let again = mat_func(&quarter, |x| x * x, false).unwrap();
            assert!(again.max_abs_diff(&half) < 1e-8);
        }
    }

    #[test]
    fn identity_function_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..10 {
            let m = random::hermitian(n, &mut rng);
            let r = mat_func(&m, |x| x, false).unwrap();
            assert!(r.max_abs_diff(&m) < 1e-10);
        }
    }

    #[test]
    fn frechet_derivative_of_log_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random::psd(4, &mut rng).add(&HermitianOperator::identity(4).scale(0.1));
        let e = random::hermitian(4, &mut rng);
        let eig = herm_eig(&x);
        let gamma = divided_differences(&eig.values, f64::ln, |l| 1.0 / l);
        let analytic = frechet_apply(&eig, &gamma, &e);
        let h = 1e-6;
        let plus = mat_func(&x.add(&e.scale(h)), f64::ln, false).unwrap();
        let minus = mat_func(&x.sub(&e.scale(h)), f64::ln, false).unwrap();
        let fd = (plus.as_matrix() - minus.as_matrix()).scale(0.5 / h);
        assert!(analytic.max_abs_diff(&fd) < 1e-6);
    }
}
