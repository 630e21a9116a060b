//! Quantum channels in Kraus form.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, embed_operator, herm_eig, kron, ComplexMatrix, HermitianOperator, C64};
use crate::state::{max_entangled, DensityOperator};
use crate::{Error, Result};

/// Completeness tolerance `‖Σ K†K − I‖_F` accepted on construction.
pub const CPTP_TOL: f64 = 1e-8;
/// Largest input or output dimension a tensor power may reach.
pub const MAX_DIM: usize = 64;

/// Symmetry a channel is declared to have; consumed by the covariant
/// reductions in [`crate::bounds`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Covariance {
    /// Commutes with diagonal phase operators on input and output.
    DephasingDiagonal,
    /// `N(UρU†) = Ũ N(ρ) Ũ†` for every input unitary `U`.
    FullUnitaryGroup,
}

#[derive(Clone, Debug)]
pub struct QuantumChannel {
    name: String,
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
    covariance: Vec<Covariance>,
    choi: OnceCell<DensityOperator>,
}

/// Outcome of [`validate_kraus`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelValidation {
    pub completeness_residual: f64,
    pub choi_min_eig: f64,
    pub choi_marginal_residual: f64,
    pub valid: bool,
}

fn kraus_dims(kraus: &[ComplexMatrix]) -> Result<(usize, usize)> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::param("channel needs at least one Kraus operator"))?;
    let (d_out, d_in) = (first.rows(), first.cols());
    if d_in == 0 || d_out == 0 {
        return Err(Error::param("Kraus operators must be non-empty"));
    }
    for k in kraus {
        if k.rows() != d_out || k.cols() != d_in {
            return Err(Error::DimensionMismatch {
                expected: d_out * d_in,
                found: k.rows() * k.cols(),
            });
        }
    }
    Ok((d_in, d_out))
}

fn completeness_residual(kraus: &[ComplexMatrix], d_in: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(d_in, d_in);
    for k in kraus {
        sum += &k.adjoint().matmul(k);
    }
    (&sum - &ComplexMatrix::identity(d_in)).frobenius_norm()
}

fn choi_operator(kraus: &[ComplexMatrix], d_in: usize, d_out: usize) -> HermitianOperator {
    let n = d_in * d_out;
    let amp = 1.0 / (d_in as f64).sqrt();
    let mut j = ComplexMatrix::zeros(n, n);
    for k in kraus {
        // (I ⊗ K)|Φ⟩ has entry K[b][i]/√d at index i·d_out + b.
        let w: Vec<C64> = (0..n).map(|idx| k[(idx % d_out, idx / d_out)] * amp).collect();
        for r in 0..n {
            if w[r].re == 0.0 && w[r].im == 0.0 {
                continue;
            }
            for c in 0..n {
                j[(r, c)] += w[r] * w[c].conj();
            }
        }
    }
    HermitianOperator::from_hermitian_part(&j)
}

/// Checks trace preservation and complete positivity of a Kraus list
/// without constructing a channel.
pub fn validate_kraus(kraus: &[ComplexMatrix]) -> Result<ChannelValidation> {
    let (d_in, d_out) = kraus_dims(kraus)?;
    let completeness_residual = completeness_residual(kraus, d_in);
    let choi = choi_operator(kraus, d_in, d_out);
    let choi_min_eig = herm_eig(&choi).min_value();
    let marginal = linalg::partial_trace(&choi, [d_in, d_out], 0)?;
    let choi_marginal_residual =
        (&marginal - &ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64)).frobenius_norm();
    Ok(ChannelValidation {
        completeness_residual,
        choi_min_eig,
        choi_marginal_residual,
        valid: completeness_residual <= CPTP_TOL
            && choi_min_eig >= -CPTP_TOL
            && choi_marginal_residual <= CPTP_TOL,
    })
}

impl QuantumChannel {
    /// Builds a channel from Kraus operators (`d_out × d_in` each). Zero
    /// operators are dropped.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let (d_in, d_out) = kraus_dims(&kraus)?;
        let residual = completeness_residual(&kraus, d_in);
        if residual > CPTP_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        let mut kraus: Vec<ComplexMatrix> = kraus
            .into_iter()
            .filter(|k| k.frobenius_norm() > 1e-15)
            .collect();
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(d_out, d_in));
        }
        Ok(Self {
            name: String::from("custom"),
            kraus,
            d_in,
            d_out,
            covariance: Vec::new(),
            choi: OnceCell::new(),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(d)])
            .expect("identity is CPTP")
            .with_name("identity")
            .with_covariance(&[Covariance::DephasingDiagonal, Covariance::FullUnitaryGroup])
    }

    /// Random channel with `n_kraus` Kraus operators, cut from a
    /// Haar-like random isometry `C^{d_in} → C^{n_kraus · d_out}`. The
    /// count is raised to `⌈d_in / d_out⌉` when that is larger, since no
    /// isometry fits otherwise.
    pub fn random<R: rand::Rng + ?Sized>(
        d_in: usize,
        d_out: usize,
        n_kraus: usize,
        rng: &mut R,
    ) -> Self {
        let n_kraus = n_kraus.max(d_in.div_ceil(d_out.max(1)));
        let g = crate::random::ginibre(n_kraus * d_out, d_in, rng);
        let gram = HermitianOperator::from_hermitian_part(&g.adjoint().matmul(&g));
        let inv_sqrt = herm_eig(&gram).compose(|l| 1.0 / l.sqrt());
        let v = g.matmul(&inv_sqrt);
        let kraus = (0..n_kraus)
            .map(|i| ComplexMatrix::from_fn(d_out, d_in, |r, c| v[(i * d_out + r, c)]))
            .collect();
        Self::new(kraus)
            .expect("isometry blocks are complete")
            .with_name("random")
    }

    /// Unitary conjugation channel.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_covariance(mut self, cov: &[Covariance]) -> Self {
        self.covariance = cov.to_vec();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn covariance(&self) -> &[Covariance] {
        &self.covariance
    }

    pub fn has_covariance(&self, kind: Covariance) -> bool {
        self.covariance.contains(&kind)
    }

    /// Normalized Choi state `(id ⊗ N)(Φ)` on `[d_in, d_out]`.
    pub fn choi(&self) -> &DensityOperator {
        self.choi.get_or_init(|| {
            DensityOperator::new_unchecked(
                choi_operator(&self.kraus, self.d_in, self.d_out),
                vec![self.d_in, self.d_out],
            )
        })
    }

    pub fn validate(&self) -> ChannelValidation {
        validate_kraus(&self.kraus).expect("channel Kraus operators are well formed")
    }

    /// `N(X)` for an operator on the input space alone.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.d_in || x.cols() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: x.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += &k.sandwich(x);
        }
        Ok(out)
    }

    /// `N†(Y) = Σ K† Y K` for an operator on the output space.
    pub fn adjoint_operator(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.rows() != self.d_out || y.cols() != self.d_out {
            return Err(Error::DimensionMismatch {
                expected: self.d_out,
                found: y.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            out += &k.adjoint().matmul(y).matmul(k);
        }
        Ok(out)
    }

    /// `(id ⊗ N ⊗ id)(X)` with the channel acting on factor `index`.
    pub fn apply_on_subsystem(
        &self,
        x: &ComplexMatrix,
        dims: &[usize],
        index: usize,
    ) -> Result<ComplexMatrix> {
        let total: usize = dims.iter().product();
        if x.rows() != total || !x.is_square() {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: x.rows(),
            });
        }
        if dims.get(index) != Some(&self.d_in) {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: dims.get(index).copied().unwrap_or(0),
            });
        }
        if dims.len() == 1 {
            return self.apply_operator(x);
        }
        let mut out_dims = dims.to_vec();
        out_dims[index] = self.d_out;
        let n_out: usize = out_dims.iter().product();
        let mut out = ComplexMatrix::zeros(n_out, n_out);
        for k in &self.kraus {
            let big = embed_operator(k, dims, index)?;
            out += &big.sandwich(x);
        }
        Ok(out)
    }

    /// Adjoint map acting on factor `index` of an output-side operator.
    pub fn adjoint_on_subsystem(
        &self,
        y: &ComplexMatrix,
        out_dims: &[usize],
        index: usize,
    ) -> Result<ComplexMatrix> {
        if out_dims.get(index) != Some(&self.d_out) {
            return Err(Error::DimensionMismatch {
                expected: self.d_out,
                found: out_dims.get(index).copied().unwrap_or(0),
            });
        }
        let mut in_dims = out_dims.to_vec();
        in_dims[index] = self.d_in;
        let n_in: usize = in_dims.iter().product();
        let mut out = ComplexMatrix::zeros(n_in, n_in);
        for k in &self.kraus {
            let big = embed_operator(k, &in_dims, index)?;
            out += &big.adjoint().matmul(y).matmul(&big);
        }
        Ok(out)
    }

    /// Applies the channel to subsystem `acting_on` of a state.
    pub fn apply(&self, rho: &DensityOperator, acting_on: usize) -> Result<DensityOperator> {
        let out = self.apply_on_subsystem(rho.op(), rho.dims(), acting_on)?;
        let mut dims = rho.dims().to_vec();
        dims[acting_on] = self.d_out;
        Ok(DensityOperator::new_unchecked(
            HermitianOperator::from_hermitian_part(&out),
            dims,
        ))
    }

    /// `N(ρ) = d_in · tr_R[(ρᵀ ⊗ I) J]`, the Choi-contraction route.
    pub fn apply_via_choi(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: rho.rows(),
            });
        }
        let j = self.choi().op();
        let lhs = kron(&rho.transpose(), &ComplexMatrix::identity(self.d_out));
        let prod = lhs.matmul(j);
        Ok(linalg::partial_trace(&prod, [self.d_in, self.d_out], 1)?.scale(self.d_in as f64))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let (di, d_o) = (self.d_in * other.d_in, self.d_out * other.d_out);
        if di > MAX_DIM || d_o > MAX_DIM {
            return Err(Error::DimensionOverflow {
                dim: di.max(d_o),
                max: MAX_DIM,
            });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        let covariance = self
            .covariance
            .iter()
            .copied()
            .filter(|c| *c == Covariance::DephasingDiagonal && other.has_covariance(*c))
            .collect();
        Ok(Self {
            name: alloc::format!("{}⊗{}", self.name, other.name),
            kraus,
            d_in: di,
            d_out: d_o,
            covariance,
            choi: OnceCell::new(),
        })
    }

    /// `N^{⊗k}`; its Kraus set is every k-fold tensor product.
    pub fn tensor_power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("tensor power must be at least 1"));
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = out.tensor(self)?;
        }
        if k > 1 {
            out.name = alloc::format!("{}^{}", self.name, k);
        }
        Ok(out)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Self) -> Result<Self> {
        if after.d_in != self.d_out {
            return Err(Error::DimensionMismatch {
                expected: self.d_out,
                found: after.d_in,
            });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * after.kraus.len());
        for b in &after.kraus {
            for a in &self.kraus {
                kraus.push(b.matmul(a));
            }
        }
        Self::new(kraus).map(|c| c.with_name(alloc::format!("{}∘{}", after.name, self.name)))
    }
}

/// Permutation taking `k` interleaved pairs `R₁B₁R₂B₂…` to the grouped order
/// `R₁R₂…B₁B₂…` (see [`crate::linalg::permute_subsystems`]).
pub fn grouped_pair_order(k: usize) -> Vec<usize> {
    (0..2 * k)
        .map(|o| if o < k { 2 * o } else { 2 * (o - k) + 1 })
        .collect()
}

/// Output state `(id_R ⊗ N)(φ_RA)` of a pure input, as a density operator
/// on `[d_R, d_out]`.
pub fn output_state(n: &QuantumChannel, input: &crate::state::PureState) -> Result<DensityOperator> {
    n.apply(&input.density(), input.dims().len() - 1)
}

/// Choi state via the isometric route, for cross-checking [`QuantumChannel::choi`].
pub fn choi_by_application(n: &QuantumChannel) -> Result<DensityOperator> {
    output_state(n, &max_entangled(n.d_in())?)
}
