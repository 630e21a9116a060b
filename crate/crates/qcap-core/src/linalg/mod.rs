//! Dense complex linear algebra.
//!
//! Subsystem convention: index 0 is the left tensor factor, and composite
//! indices are row-major, `|a⟩⊗|b⟩ ↦ a·d_B + b`.

mod eig;
mod matrix;

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::vec::Vec;

use num_traits::Zero;

pub use eig::{
    divided_differences, frechet_apply, herm_eig, mat_func, mat_func_eig, EigenDecomposition,
};
pub use matrix::{ComplexMatrix, HermitianOperator, C64};

use crate::{Error, Result};

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut it = factors.into_iter();
    let first = it
        .next()
        .cloned()
        .unwrap_or_else(|| ComplexMatrix::identity(1));
    it.fold(first, |acc, m| kron(&acc, m))
}

/// Tensor product of vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

fn check_bipartite(m: &ComplexMatrix, dims: [usize; 2]) -> Result<()> {
    let expected = dims[0] * dims[1];
    if !m.is_square() || m.rows() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: m.rows(),
        });
    }
    Ok(())
}

/// Traces out one factor of a bipartite operator, keeping subsystem `keep`
/// (0 = left, 1 = right).
pub fn partial_trace(m: &ComplexMatrix, dims: [usize; 2], keep: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let [da, db] = dims;
    match keep {
        0 => Ok(ComplexMatrix::from_fn(da, da, |a1, a2| {
            (0..db).map(|b| m[(a1 * db + b, a2 * db + b)]).sum()
        })),
        1 => Ok(ComplexMatrix::from_fn(db, db, |b1, b2| {
            (0..da).map(|a| m[(a * db + b1, a * db + b2)]).sum()
        })),
        _ => Err(Error::param("subsystem index must be 0 or 1")),
    }
}

/// Hermitian version of [`partial_trace`].
pub fn partial_trace_h(
    m: &HermitianOperator,
    dims: [usize; 2],
    keep: usize,
) -> Result<HermitianOperator> {
    partial_trace(m, dims, keep).map(|r| HermitianOperator::from_hermitian_part(&r))
}

/// Partial transpose on the right factor.
pub fn partial_transpose(m: &ComplexMatrix, dims: [usize; 2]) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let db = dims[1];
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        let (a1, b1) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        m[(a1 * db + b2, a2 * db + b1)]
    }))
}

pub fn partial_transpose_h(m: &HermitianOperator, dims: [usize; 2]) -> Result<HermitianOperator> {
    // Partial transposition maps Hermitian matrices to Hermitian matrices
    // exactly, so no symmetrization is needed.
    partial_transpose(m, dims).map(|r| HermitianOperator::new(r).expect("hermiticity preserved"))
}

/// Trace norm `Σ|λ_i|` of a Hermitian operator.
pub fn trace_norm(m: &HermitianOperator) -> f64 {
    herm_eig(m).values.iter().map(|l| l.abs()).sum()
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.rows(),
        });
    }
    let index_map = permutation_index_map(dims, perm)?;
    Ok(ComplexMatrix::from_fn(total, total, |i, j| {
        m[(index_map[i], index_map[j])]
    }))
}

/// Same reordering applied to a state vector.
pub fn permute_vector(v: &[C64], dims: &[usize], perm: &[usize]) -> Result<Vec<C64>> {
    let index_map = permutation_index_map(dims, perm)?;
    if v.len() != index_map.len() {
        return Err(Error::DimensionMismatch {
            expected: index_map.len(),
            found: v.len(),
        });
    }
    Ok(index_map.iter().map(|&i| v[i]).collect())
}

// For every output composite index, the input composite index it reads from.
fn permutation_index_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let k = dims.len();
    let mut seen = alloc::vec![false; k];
    if perm.len() != k {
        return Err(Error::param("permutation length differs from subsystem count"));
    }
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::param("not a permutation"));
        }
        seen[p] = true;
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let total: usize = dims.iter().product();
    let mut in_strides = alloc::vec![1usize; k];
    for s in (0..k.saturating_sub(1)).rev() {
        in_strides[s] = in_strides[s + 1] * dims[s + 1];
    }
    let mut map = Vec::with_capacity(total);
    let mut digits = alloc::vec![0usize; k];
    for _ in 0..total {
        let src: usize = (0..k).map(|o| digits[o] * in_strides[perm[o]]).sum();
        map.push(src);
        for o in (0..k).rev() {
            digits[o] += 1;
            if digits[o] < out_dims[o] {
                break;
            }
            digits[o] = 0;
        }
    }
    Ok(map)
}

/// Embeds `op` acting on subsystem `index` of a multipartite space as
/// `I ⊗ op ⊗ I`. `op` may be rectangular; the factor dimension then changes
/// from `op.cols()` to `op.rows()`.
pub fn embed_operator(op: &ComplexMatrix, dims: &[usize], index: usize) -> Result<ComplexMatrix> {
    if index >= dims.len() {
        return Err(Error::param("subsystem index out of range"));
    }
    if dims[index] != op.cols() {
        return Err(Error::DimensionMismatch {
            expected: dims[index],
            found: op.cols(),
        });
    }
    let left: usize = dims[..index].iter().product();
    let right: usize = dims[index + 1..].iter().product();
    Ok(kron(
        &kron(&ComplexMatrix::identity(left), op),
        &ComplexMatrix::identity(right),
    ))
}

/// Euclidean projection of a real vector onto the ℓ1 ball of `radius`.
pub fn project_l1_ball(v: &[f64], radius: f64) -> Vec<f64> {
    let norm: f64 = v.iter().map(|x| x.abs()).sum();
    if norm <= radius {
        return v.to_vec();
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in mags.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - radius) / (k + 1) as f64;
        if u > t {
            theta = t;
        } else {
            break;
        }
    }
    v.iter()
        .map(|&x| x.signum() * (x.abs() - theta).max(0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell() -> HermitianOperator {
        let s = 0.5f64.sqrt();
        let v = vec![
            C64::new(s, 0.0),
            C64::zero(),
            C64::zero(),
            C64::new(s, 0.0),
        ];
        HermitianOperator::new(ComplexMatrix::outer(&v)).unwrap()
    }

    #[test]
    fn kron_identities_and_diagonals() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert_eq!(
            kron(&a, &b),
            ComplexMatrix::from_real_diag(&[3.0, 4.0, 6.0, 8.0])
        );
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let [a, b, c, d] = core::array::from_fn(|_| random::ginibre(2, 2, &mut rng));
            let lhs = kron(&a, &b).matmul(&kron(&c, &d));
            let rhs = kron(&a.matmul(&c), &b.matmul(&d));
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn partial_trace_of_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ra = random::density(2, 2, &mut rng);
        let rb = random::psd(3, &mut rng);
        let prod = kron(&ra, &rb);
        let got = partial_trace(&prod, [2, 3], 0).unwrap();
        assert!(got.max_abs_diff(&ra.scale(rb.trace_re())) < 1e-12);
        let got_b = partial_trace(&prod, [2, 3], 1).unwrap();
        assert!(got_b.max_abs_diff(&rb) < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let r = partial_trace(&bell(), [2, 2], 1).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn sequential_partial_traces_give_full_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let m = random::hermitian(4, &mut rng);
            let a = partial_trace(&m, [2, 2], 0).unwrap();
            assert!((a.trace() - m.trace()).norm() < 1e-10);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(5);
        assert!(partial_trace(&m, [2, 2], 0).is_err());
        assert!(partial_transpose(&m, [2, 3]).is_err());
    }

    #[test]
    fn partial_transpose_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random::density(2, 2, &mut rng);
        let b = random::density(3, 3, &mut rng);
        let pt = partial_transpose(&kron(&a, &b), [2, 3]).unwrap();
        assert!(pt.max_abs_diff(&kron(&a, &b.transpose())) < 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell_spectrum() {
        let pt = partial_transpose_h(&bell(), [2, 2]).unwrap();
        let eig = herm_eig(&pt);
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (g, w) in eig.values.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
        assert!((trace_norm(&pt) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_involution_and_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random::hermitian(6, &mut rng);
            let pt = partial_transpose(&m, [2, 3]).unwrap();
            assert_eq!(partial_transpose(&pt, [2, 3]).unwrap(), *m.as_matrix());
            assert!((pt.trace() - m.trace()).norm() < 1e-12);
            assert!((pt.frobenius_norm() - m.frobenius_norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&HermitianOperator::from_real_diag(&[1.0, -1.0])) - 2.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = random::density(4, 2, &mut rng);
        assert!((trace_norm(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permutation_swaps_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random::ginibre(2, 2, &mut rng);
        let b = random::ginibre(3, 3, &mut rng);
        let swapped = permute_subsystems(&kron(&a, &b), &[2, 3], &[1, 0]).unwrap();
        assert!(swapped.max_abs_diff(&kron(&b, &a)) < 1e-15);
        let c = random::ginibre(2, 2, &mut rng);
        let abc = kron_all([&a, &b, &c]);
        let cab = permute_subsystems(&abc, &[2, 3, 2], &[2, 0, 1]).unwrap();
        assert!(cab.max_abs_diff(&kron_all([&c, &a, &b])) < 1e-14);
        assert!(permute_subsystems(&abc, &[2, 3, 2], &[0, 0, 1]).is_err());
    }

    #[test]
    fn embedded_operator_matches_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = random::ginibre(3, 2, &mut rng);
        let e = embed_operator(&k, &[2, 2, 2], 1).unwrap();
        let want = kron_all([
            &ComplexMatrix::identity(2),
            &k,
            &ComplexMatrix::identity(2),
        ]);
        assert_eq!(e, want);
    }

    #[test]
    fn l1_projection() {
        let p = project_l1_ball(&[3.0, -1.0, 0.5], 1.0);
        let s: f64 = p.iter().map(|x| x.abs()).sum();
        assert!((s - 1.0).abs() < 1e-14);
        assert!((p[0] - 1.0).abs() < 1e-14);
        let inside = project_l1_ball(&[0.2, -0.3], 1.0);
        assert_eq!(inside, vec![0.2, -0.3]);
        let p = project_l1_ball(&[0.5, -0.5, 0.5, 0.5], 1.0);
        for x in &p {
            assert!((x.abs() - 0.25).abs() < 1e-14);
        }
    }
}
