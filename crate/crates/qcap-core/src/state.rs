//! Density operators and pure states with subsystem bookkeeping.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, herm_eig, kron, ComplexMatrix, HermitianOperator, C64};
use crate::{Error, Result, SUPPORT_EPS};

pub const STATE_TOL: f64 = 1e-9;
pub const PURE_NORM_TOL: f64 = 1e-10;
const FIDELITY_CLIP: f64 = 1e-13;

/// Positive semidefinite, unit-trace operator on a product of subsystems.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityOperator {
    op: HermitianOperator,
    dims: Vec<usize>,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != op.dim() || dims.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: op.dim(),
                found: total,
            });
        }
        let trace = op.trace_re();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { trace });
        }
        let min_eig = herm_eig(&op).min_value();
        if min_eig < -STATE_TOL {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(Self { op, dims })
    }

    /// Single-system state.
    pub fn from_operator(op: HermitianOperator) -> Result<Self> {
        let d = op.dim();
        Self::new(op, vec![d])
    }

    /// Skips validation; for operators that are states by construction.
    pub(crate) fn new_unchecked(op: HermitianOperator, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), op.dim());
        Self { op, dims }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::new_unchecked(HermitianOperator::identity(d).scale(1.0 / d as f64), vec![d])
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self::new_unchecked(
            HermitianOperator::from_hermitian_part(&ComplexMatrix::outer(&psi.vec)),
            psi.dims.clone(),
        )
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_op(self) -> HermitianOperator {
        self.op
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Groups the subsystems into `[first, rest]`.
    pub fn bipartite_dims(&self) -> Result<[usize; 2]> {
        match self.dims.as_slice() {
            [a, b] => Ok([*a, *b]),
            _ => Err(Error::param("state must have exactly two subsystems")),
        }
    }

    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dims.iter().product(),
            });
        }
        Ok(Self { op: self.op, dims })
    }

    /// `ρ ⊗ σ` with concatenated subsystem lists.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new_unchecked(
            HermitianOperator::from_hermitian_part(&kron(&self.op, &other.op)),
            dims,
        )
    }

    /// Reduced state on subsystem `keep` of a bipartite state.
    pub fn reduce(&self, keep: usize) -> Result<Self> {
        let dims = self.bipartite_dims()?;
        let r = linalg::partial_trace_h(&self.op, dims, keep)?;
        Ok(Self::new_unchecked(r, vec![dims[keep]]))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::new_unchecked(self.op.conjugate_by(u), self.dims.clone())
    }

    /// Reorders subsystems: output factor `k` is input factor `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let m = linalg::permute_subsystems(&self.op, &self.dims, perm)?;
        let dims = perm.iter().map(|&p| self.dims[p]).collect();
        Ok(Self::new_unchecked(
            HermitianOperator::from_hermitian_part(&m),
            dims,
        ))
    }

    /// Convex combination `λ self + (1-λ) other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::param("cannot mix states with different subsystem dims"));
        }
        Ok(Self::new_unchecked(
            self.op.scale(lambda).add(&other.op.scale(1.0 - lambda)),
            self.dims.clone(),
        ))
    }
}

/// Unit vector on a product of subsystems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    #[serde(with = "complex_vec")]
    vec: Vec<C64>,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(vec: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != vec.len() {
            return Err(Error::DimensionMismatch {
                expected: vec.len(),
                found: total,
            });
        }
        let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::param("pure state vector must have unit norm"));
        }
        Ok(Self { vec, dims })
    }

    /// Normalizes `vec` first.
    pub fn normalized(vec: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::param("zero vector cannot be normalized"));
        }
        Self::new(vec.into_iter().map(|z| z / norm).collect(), dims)
    }

    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[k] = C64::new(1.0, 0.0);
        Self { vec: v, dims: vec![d] }
    }

    pub fn vec(&self) -> &[C64] {
        &self.vec
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn norm(&self) -> f64 {
        self.vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            vec: linalg::kron_vec(&self.vec, &other.vec),
            dims,
        }
    }

    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let vec = linalg::permute_vector(&self.vec, &self.dims, perm)?;
        let dims = perm.iter().map(|&p| self.dims[p]).collect();
        Ok(Self { vec, dims })
    }

    /// `⟨self|ρ|self⟩`.
    pub fn expectation(&self, rho: &ComplexMatrix) -> f64 {
        let rv = rho.mul_vec(&self.vec);
        self.vec
            .iter()
            .zip(&rv)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    }
}

/// `Σ_x |x⟩|x⟩ / √d` on dims `[d, d]`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    for x in 0..d {
        v[x * d + x] = C64::new(amp, 0.0);
    }
    Ok(PureState {
        vec: v,
        dims: vec![d, d],
    })
}

/// Purification `Σ_i √λ_i |i⟩_R |v_i⟩` with the reference first. The
/// reference dimension equals the numerical rank of `rho`.
pub fn purify(rho: &DensityOperator) -> PureState {
    let eig = herm_eig(rho.op());
    let d = rho.dim();
    let support: Vec<usize> = (0..d).filter(|&k| eig.values[k] > SUPPORT_EPS).collect();
    let support = if support.is_empty() {
        vec![d - 1]
    } else {
        support
    };
    let r = support.len();
    let mut v = vec![C64::new(0.0, 0.0); r * d];
    for (i, &k) in support.iter().enumerate() {
        let amp = eig.values[k].max(0.0).sqrt();
        for a in 0..d {
            v[i * d + a] = eig.vectors[(a, k)] * amp;
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    PureState {
        vec: v,
        dims: vec![r, d],
    }
}

/// Uhlmann fidelity `F(ρ,σ) = ‖√ρ√σ‖₁²`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    // Square roots amplify rounding noise in (numerically) zero eigenvalues,
    // so those are clipped before taking roots.
    let clip = |x: f64| if x > FIDELITY_CLIP { x.sqrt() } else { 0.0 };
    let sqrt_sigma = linalg::mat_func(sigma.op(), clip, false)?;
    let inner = HermitianOperator::from_hermitian_part(&sqrt_sigma.sandwich(rho.op()));
    let root_sum: f64 = herm_eig(&inner).values.iter().map(|&l| clip(l)).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

pub(crate) mod complex_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> core::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<Vec<C64>, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn max_entangled_small_cases() {
        let one = max_entangled(1).unwrap();
        assert_eq!(one.vec(), &[C64::new(1.0, 0.0)]);
        let phi = max_entangled(2).unwrap().density();
        let red = phi.reduce(1).unwrap();
        assert!(red.op().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        assert!(max_entangled(0).is_err());
    }

    #[test]
    fn max_entangled_overlap_with_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for d in 2..4 {
            let phi = max_entangled(d).unwrap();
            let a = random::density(d, d, &mut rng);
            let b = random::density(d, d, &mut rng);
            let lhs = phi.expectation(&kron(&a, &b));
            let rhs = a.matmul(&b.transpose()).trace().re / d as f64;
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn density_validation() {
        let bad = HermitianOperator::from_real_diag(&[1.2, -0.2]);
        assert!(matches!(
            DensityOperator::from_operator(bad),
            Err(Error::NotPositive { .. })
        ));
        let bad = HermitianOperator::from_real_diag(&[0.5, 0.4]);
        assert!(matches!(
            DensityOperator::from_operator(bad),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn purify_pure_state_has_trivial_reference() {
        let psi = PureState::normalized(
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            vec![2],
        )
        .unwrap();
        let p = purify(&psi.density());
        assert_eq!(p.dims(), &[1, 2]);
        assert!((p.density().op().as_matrix() - psi.density().op().as_matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn purify_maximally_mixed() {
        let p = purify(&DensityOperator::maximally_mixed(2));
        assert_eq!(p.dims(), &[2, 2]);
        let red = p.density().reduce(1).unwrap();
        assert!(red.op().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-12);
    }

    #[test]
    fn purify_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let rho = DensityOperator::from_operator(random::density(4, 3, &mut rng)).unwrap();
        let p = purify(&rho);
        assert_eq!(p.dims()[0], 3);
        let back = p.density().reduce(1).unwrap();
        assert!(back.op().max_abs_diff(rho.op()) < 1e-8);
    }

    #[test]
    fn fidelity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rho = DensityOperator::from_operator(random::density(3, 3, &mut rng)).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
        let z0 = PureState::basis(2, 0).density();
        let z1 = PureState::basis(2, 1).density();
        assert!(fidelity(&z0, &z1).unwrap() < 1e-12);
        let phi = PureState::normalized(random::unit_vector(3, &mut rng), vec![3]).unwrap();
        let f = fidelity(&phi.density(), &rho).unwrap();
        assert!((f - phi.expectation(rho.op())).abs() < 1e-9);
        let sym = fidelity(&rho, &phi.density()).unwrap();
        assert!((f - sym).abs() < 1e-9);
    }

    #[test]
    fn fidelity_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..10 {
            let rho = DensityOperator::from_operator(random::density(3, 2, &mut rng)).unwrap();
            let sigma = DensityOperator::from_operator(random::density(3, 3, &mut rng)).unwrap();
            let u = random::unitary(3, &mut rng);
            let f1 = fidelity(&rho, &sigma).unwrap();
            let f2 = fidelity(&rho.conjugate_by(&u), &sigma.conjugate_by(&u)).unwrap();
            assert!((f1 - f2).abs() < 1e-9);
        }
    }
}
