//! Random matrices and states for restarts and property sweeps.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, HermitianOperator, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::from_hermitian_part(&ginibre(n, n, rng))
}

/// Random PSD operator `G G†` (unnormalized).
pub fn psd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    let g = ginibre(n, n, rng);
    HermitianOperator::from_hermitian_part(&g.matmul(&g.adjoint()))
}

/// Random density operator of the given rank (induced measure).
pub fn density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let g = ginibre(n, rank.max(1), rng);
    let m = g.matmul(&g.adjoint());
    let t = m.trace().re;
    HermitianOperator::from_hermitian_part(&m.scale(1.0 / t))
}

/// Haar-random unit vector.
pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian_c64(rng)).collect();
    normalize(v)
}

pub fn normalize(mut v: Vec<C64>) -> Vec<C64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column_vec(j);
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        cols.push(normalize(v));
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
