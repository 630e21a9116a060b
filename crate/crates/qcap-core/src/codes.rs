//! Unassisted entanglement-generation codes.
//!
//! A code is Alice's pure preparation on `Ã ⊗ A^k`, the `k` channel uses on
//! `A^k`, and a decoder `Ã ⊗ B^k → Â ⊗ B̂` with `|Â| = |B̂| = M`. Its
//! fidelity is the overlap of the decoded state with the fixed `Φ_M` of
//! [`max_entangled`].
//!
//! Codes over many channel uses are kept as products of small blocks. With
//! the computational-basis `Φ`, `Φ_{M₁M₂}` on `(Â₁Â₂)(B̂₁B̂₂)` is
//! `Φ_{M₁} ⊗ Φ_{M₂}` after regrouping, so the fidelity of a product code is
//! the product of the block fidelities and nothing of size `M` is ever built.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{fidelity_upper_bound, rains_info, weak_subadd_bound, SolverConfig};
use crate::channel::QuantumChannel;
use crate::divergence::Order;
use crate::linalg::{herm_eig, ComplexMatrix, HermitianOperator, C64};
use crate::state::{max_entangled, DensityOperator, PureState};
use crate::{Error, Result, SUPPORT_EPS};

/// Slack allowed when comparing a fidelity with its bound.
pub const BOUND_SLACK: f64 = 1e-7;

/// Largest `d_in^n` accepted by [`sc_decay_sweep`].
pub const MAX_SWEEP_DIM: usize = 64;

/// One block of a code: a preparation, `uses` channel uses and a decoder.
#[derive(Clone, Debug)]
pub struct CodeBlock {
    m: usize,
    encoder: PureState,
    decoder: Decoder,
    uses: usize,
}

#[derive(Clone, Debug)]
enum Decoder {
    Joint(QuantumChannel),
    // Kept factored so `m²`-dimensional Kraus operators are never formed.
    Local {
        alice: QuantumChannel,
        bob: QuantumChannel,
    },
}

impl Decoder {
    fn d_in(&self) -> usize {
        match self {
            Decoder::Joint(c) => c.d_in(),
            Decoder::Local { alice, bob } => alice.d_in() * bob.d_in(),
        }
    }
}

impl CodeBlock {
    /// `encoder` lives on `[d_Ã, d_A]`, where `d_A` must be `d_in^uses` for
    /// the channel the block is run on. The decoder maps `Ã ⊗ B^uses` to
    /// `Â ⊗ B̂` with output dimension `m²`.
    pub fn new(m: usize, encoder: PureState, decoder: QuantumChannel, uses: usize) -> Result<Self> {
        if m == 0 || uses == 0 {
            return Err(Error::param("code size and channel uses must be positive"));
        }
        if encoder.dims().len() != 2 {
            return Err(Error::param("the encoder must be bipartite Ã ⊗ A"));
        }
        if decoder.d_out() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                found: decoder.d_out(),
            });
        }
        let d_tilde = encoder.dims()[0];
        if !decoder.d_in().is_multiple_of(d_tilde) {
            return Err(Error::param(format!(
                "decoder input {} is not a multiple of |Ã| = {d_tilde}",
                decoder.d_in()
            )));
        }
        Ok(Self {
            m,
            encoder,
            decoder: Decoder::Joint(decoder),
            uses,
        })
    }

    /// Block whose decoder is a product of Alice's `Ã → Â` and Bob's
    /// `B^uses → B̂`.
    pub fn local(
        m: usize,
        encoder: PureState,
        alice: &QuantumChannel,
        bob: &QuantumChannel,
        uses: usize,
    ) -> Result<Self> {
        if alice.d_out() != m || bob.d_out() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: if alice.d_out() != m { alice.d_out() } else { bob.d_out() },
            });
        }
        if alice.d_in() != encoder.dims()[0] {
            return Err(Error::DimensionMismatch {
                expected: encoder.dims()[0],
                found: alice.d_in(),
            });
        }
        if m == 0 || uses == 0 {
            return Err(Error::param("code size and channel uses must be positive"));
        }
        Ok(Self {
            m,
            encoder,
            decoder: Decoder::Local {
                alice: alice.clone(),
                bob: bob.clone(),
            },
            uses,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn encoder(&self) -> &PureState {
        &self.encoder
    }

    /// The decoder as one channel `Ã ⊗ B^uses → Â ⊗ B̂`.
    pub fn decoder(&self) -> Result<QuantumChannel> {
        match &self.decoder {
            Decoder::Joint(c) => Ok(c.clone()),
            Decoder::Local { alice, bob } => alice.tensor(bob),
        }
    }

    pub fn uses(&self) -> usize {
        self.uses
    }

    fn check_channel(&self, n: &QuantumChannel) -> Result<usize> {
        let d_a = checked_pow(n.d_in(), self.uses)?;
        if self.encoder.dims()[1] != d_a {
            return Err(Error::DimensionMismatch {
                expected: d_a,
                found: self.encoder.dims()[1],
            });
        }
        let d_b = checked_pow(n.d_out(), self.uses)?;
        let expected = self.encoder.dims()[0] * d_b;
        if self.decoder.d_in() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.decoder.d_in(),
            });
        }
        Ok(d_b)
    }

    /// Decoded state `ω_ÂB̂` on `[m, m]`.
    pub fn output(&self, n: &QuantumChannel) -> Result<DensityOperator> {
        self.check_channel(n)?;
        let uses = n.tensor_power(self.uses)?;
        let sent = uses.apply(&self.encoder.density(), 1)?;
        let omega = match &self.decoder {
            Decoder::Joint(c) => c.apply_operator(sent.op().as_matrix())?,
            Decoder::Local { alice, bob } => {
                let half = alice.apply(&sent, 0)?;
                bob.apply(&half, 1)?.into_op().into_matrix()
            }
        };
        DensityOperator::new(HermitianOperator::from_hermitian_part(&omega), vec![self.m, self.m])
    }

    pub fn fidelity(&self, n: &QuantumChannel) -> Result<f64> {
        let omega = self.output(n)?;
        Ok(phi_overlap(&omega, self.m)?.clamp(0.0, 1.0))
    }

    /// The same block with `extra` (a channel on `B̂`) applied after decoding.
    pub fn post_process(&self, extra: &QuantumChannel) -> Result<Self> {
        if extra.d_in() != self.m || extra.d_out() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: extra.d_in(),
            });
        }
        let decoder = match &self.decoder {
            Decoder::Joint(c) => {
                Decoder::Joint(c.then(&QuantumChannel::identity(self.m).tensor(extra)?)?)
            }
            Decoder::Local { alice, bob } => Decoder::Local {
                alice: alice.clone(),
                bob: bob.then(extra)?,
            },
        };
        Ok(Self {
            decoder,
            ..self.clone()
        })
    }
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or_else(|| Error::param("dimension overflow"))
}

/// `⟨Φ_m|ω|Φ_m⟩`.
fn phi_overlap(omega: &DensityOperator, m: usize) -> Result<f64> {
    if omega.dim() != m * m {
        return Err(Error::DimensionMismatch {
            expected: m * m,
            found: omega.dim(),
        });
    }
    Ok(max_entangled(m)?.expectation(omega.op().as_matrix()))
}

/// A code made of independent blocks.
#[derive(Clone, Debug)]
pub struct EgCode {
    name: String,
    blocks: Vec<CodeBlock>,
}

impl EgCode {
    pub fn new(name: impl Into<String>, blocks: Vec<CodeBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::param("a code needs at least one block"));
        }
        Ok(Self {
            name: name.into(),
            blocks,
        })
    }

    pub fn single(name: impl Into<String>, block: CodeBlock) -> Self {
        Self {
            name: name.into(),
            blocks: vec![block],
        }
    }

    /// `k` copies of `block` side by side.
    pub fn repeat(name: impl Into<String>, block: CodeBlock, k: usize) -> Result<Self> {
        Self::new(name, vec![block; k])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn blocks(&self) -> &[CodeBlock] {
        &self.blocks
    }

    /// `log₂ M`.
    pub fn log_m(&self) -> f64 {
        self.blocks.iter().map(|b| (b.m as f64).log2()).sum()
    }

    /// `M`, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        self.blocks
            .iter()
            .try_fold(1u64, |acc, b| acc.checked_mul(b.m as u64))
    }

    /// Total number of channel uses.
    pub fn uses(&self) -> usize {
        self.blocks.iter().map(|b| b.uses).sum()
    }

    /// Every block post-processed by its own channel from `make(m)`.
    pub fn post_process(&self, mut make: impl FnMut(usize) -> QuantumChannel) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.post_process(&make(b.m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(format!("{}+post", self.name), blocks)
    }
}

/// `F(C, N)`, the product of the block fidelities.
pub fn code_fidelity(code: &EgCode, n: &QuantumChannel) -> Result<f64> {
    code.blocks
        .iter()
        .try_fold(1.0, |acc, b| Ok(acc * b.fidelity(n)?))
}

/// Binary test for `Φ`: `diag(1 - f, f)` with `f = tr(Φ ω)`.
pub fn entanglement_test(omega: &DensityOperator) -> Result<DensityOperator> {
    let n = omega.dim();
    let m = (n as f64).sqrt().round() as usize;
    if m * m != n {
        return Err(Error::param(format!("dimension {n} is not a square M × M")));
    }
    if omega.dims().len() == 2 && omega.dims() != [m, m] {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: omega.dims()[0],
        });
    }
    let f = phi_overlap(omega, m)?.clamp(0.0, 1.0);
    DensityOperator::new(HermitianOperator::from_real_diag(&[1.0 - f, f]), vec![2])
}

/// Both sides of the one-shot fidelity bound for a code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodePerformance {
    pub fidelity: f64,
    pub bound: f64,
    pub alpha_used: f64,
    pub satisfied: bool,
    pub log_m: f64,
    pub uses: usize,
    /// The `R̃_α` of the used channel block fed into the bound.
    pub renyi_rains: f64,
}

/// Upper bound on `R̃_α(N^{⊗k})` from the single-copy value.
pub fn renyi_rains_uses(single_copy: f64, uses: usize, alpha: f64, d_in: usize) -> Result<f64> {
    if uses == 1 {
        Ok(single_copy)
    } else {
        weak_subadd_bound(single_copy, uses, alpha, d_in)
    }
}

/// Checks the bound given a precomputed single-copy `R̃_α(N)`.
pub fn oneshot_check(
    code: &EgCode,
    n: &QuantumChannel,
    alpha: f64,
    single_copy_renyi: f64,
) -> Result<CodePerformance> {
    let fidelity = code_fidelity(code, n)?;
    let uses = code.uses();
    let renyi_rains = renyi_rains_uses(single_copy_renyi, uses, alpha, n.d_in())?;
    let log_m = code.log_m();
    let bound = fidelity_upper_bound(log_m, renyi_rains, alpha)?;
    Ok(CodePerformance {
        fidelity,
        bound,
        alpha_used: alpha,
        satisfied: fidelity <= bound + BOUND_SLACK,
        log_m,
        uses,
        renyi_rains,
    })
}

/// Solves for `R̃_α(N)` and checks the bound.
pub fn verify_oneshot_bound<R: Rng + ?Sized>(
    code: &EgCode,
    n: &QuantumChannel,
    alpha: f64,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<CodePerformance> {
    let r = rains_info(n, Order::renyi(alpha)?, cfg, rng)?;
    oneshot_check(code, n, alpha, r.value)
}

fn embedding(rows: usize, cols: usize, f: impl Fn(usize) -> Option<usize>) -> ComplexMatrix {
    let mut k = ComplexMatrix::zeros(rows, cols);
    for c in 0..cols {
        if let Some(r) = f(c) {
            k[(r, c)] = C64::new(1.0, 0.0);
        }
    }
    k
}

/// Bob's map `B → B̂`: `b ↦ target(b)`, with inputs that have no target
/// replaced by `π_m`.
fn relabel(d_out: usize, m: usize, target: impl Fn(usize) -> Option<usize>) -> Result<QuantumChannel> {
    let mut kraus = vec![embedding(m, d_out, &target)];
    let amp = 1.0 / (m as f64).sqrt();
    for b in (0..d_out).filter(|&b| target(b).is_none()) {
        for k in 0..m {
            let mut op = ComplexMatrix::zeros(m, d_out);
            op[(k, b)] = C64::new(amp, 0.0);
            kraus.push(op);
        }
    }
    Ok(QuantumChannel::new(kraus)?.with_name("relabel"))
}

/// One use: `Φ_{d_in}` across `Ã:A`, Bob keeps the first `d_in` output
/// levels and replaces the rest (an erasure flag, say) by `π`.
pub fn trivial_block(d_in: usize, d_out: usize) -> Result<CodeBlock> {
    let bob = relabel(d_out, d_in, |b| (b < d_in).then_some(b))?;
    CodeBlock::local(d_in, max_entangled(d_in)?, &QuantumChannel::identity(d_in), &bob, 1)
}

/// One use at rate `2 log d_in`: `M = d²`, Alice keeps `Φ_d ⊗ |0⟩` and Bob
/// pads his half with `|0⟩`. On a noiseless channel `F = 1/d`.
pub fn rate_two_block(d_in: usize, d_out: usize) -> Result<CodeBlock> {
    let d = d_in;
    let m = d * d;
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![C64::new(0.0, 0.0); m * d];
    for i in 0..d {
        v[(i * d) * d + i] = amp;
    }
    let encoder = PureState::new(v, vec![m, d])?;
    let bob = relabel(d_out, m, |b| (b < d).then_some(b * d))?;
    CodeBlock::local(m, encoder, &QuantumChannel::identity(m), &bob, 1)
}

/// Transpose-channel decoder `R_i = K_i† N(π)^{-1/2} / √d_in` on the support
/// of `N(π)`, completed by sending its kernel to `|0⟩`.
pub fn petz_decoder(n: &QuantumChannel) -> Result<QuantumChannel> {
    let d = n.d_in();
    let mut avg = ComplexMatrix::zeros(n.d_out(), n.d_out());
    for k in n.kraus() {
        avg += &k.matmul(&k.adjoint());
    }
    let eig = herm_eig(&HermitianOperator::from_hermitian_part(&avg.scale(1.0 / d as f64)));
    let inv_sqrt = eig.compose(|l| if l > SUPPORT_EPS { 1.0 / l.sqrt() } else { 0.0 });
    let scale = 1.0 / (d as f64).sqrt();
    let mut kraus: Vec<ComplexMatrix> = n
        .kraus()
        .iter()
        .map(|k| k.adjoint().matmul(inv_sqrt.as_matrix()).scale(scale))
        .collect();
    for (j, &l) in eig.values.iter().enumerate() {
        if l <= SUPPORT_EPS {
            let q = eig.vectors.column_vec(j);
            kraus.push(ComplexMatrix::from_fn(d, n.d_out(), |r, c| {
                if r == 0 {
                    q[c].conj()
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
    }
    Ok(QuantumChannel::new(kraus)?.with_name("petz"))
}

/// One use: `Φ_{d_in}` across `Ã:A` with the [`petz_decoder`] on Bob's side.
pub fn petz_block(n: &QuantumChannel) -> Result<CodeBlock> {
    let d = n.d_in();
    CodeBlock::local(d, max_entangled(d)?, &QuantumChannel::identity(d), &petz_decoder(n)?, 1)
}

/// Code families indexed by the number of channel uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeFamily {
    Trivial,
    RateTwo,
    Petz,
}

impl CodeFamily {
    pub const ALL: [CodeFamily; 3] = [CodeFamily::Trivial, CodeFamily::RateTwo, CodeFamily::Petz];

    pub fn as_str(&self) -> &'static str {
        match self {
            CodeFamily::Trivial => "trivial",
            CodeFamily::RateTwo => "rate_two",
            CodeFamily::Petz => "petz",
        }
    }

    pub fn block(&self, n: &QuantumChannel) -> Result<CodeBlock> {
        match self {
            CodeFamily::Trivial => trivial_block(n.d_in(), n.d_out()),
            CodeFamily::RateTwo => rate_two_block(n.d_in(), n.d_out()),
            CodeFamily::Petz => petz_block(n),
        }
    }

    /// The family member for `uses` channel uses.
    pub fn build(&self, n: &QuantumChannel, uses: usize) -> Result<EgCode> {
        EgCode::repeat(format!("{}^{uses}", self.as_str()), self.block(n)?, uses)
    }
}

/// Every family at one use, plus the trivial code post-processed on Bob's
/// side by a random channel.
pub fn code_corpus<R: Rng + ?Sized>(n: &QuantumChannel, rng: &mut R) -> Result<Vec<EgCode>> {
    let mut codes = CodeFamily::ALL
        .iter()
        .map(|f| f.build(n, 1))
        .collect::<Result<Vec<_>>>()?;
    for f in [CodeFamily::Trivial, CodeFamily::Petz] {
        let base = f.build(n, 1)?;
        codes.push(base.post_process(|m| QuantumChannel::random(m, m, 2, rng))?);
    }
    Ok(codes)
}

/// One row of a decay sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub log_m: f64,
    pub fidelity: f64,
    pub bound: f64,
    /// `-(1/n) log F`.
    pub empirical_exponent: f64,
}

/// Fidelity and bound of `family(k)` on `k` uses for `k = 1..=n_max`.
pub fn sc_decay_sweep(
    family: impl Fn(usize) -> Result<EgCode>,
    n: &QuantumChannel,
    n_max: usize,
    alpha: f64,
    single_copy_renyi: f64,
) -> Result<Vec<SweepRow>> {
    if n_max == 0 {
        return Err(Error::param("n_max must be at least 1"));
    }
    let big = checked_pow(n.d_in(), n_max)?;
    if big > MAX_SWEEP_DIM {
        return Err(Error::DimensionOverflow {
            dim: big,
            max: MAX_SWEEP_DIM,
        });
    }
    (1..=n_max)
        .map(|k| {
            let code = family(k)?;
            if code.uses() != k {
                return Err(Error::param(format!(
                    "family member for n = {k} uses the channel {} times",
                    code.uses()
                )));
            }
            let perf = oneshot_check(&code, n, alpha, single_copy_renyi)?;
            Ok(SweepRow {
                n: k,
                log_m: perf.log_m,
                fidelity: perf.fidelity,
                bound: perf.bound,
                empirical_exponent: -perf.fidelity.log2() / k as f64,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one(code: CodeBlock) -> EgCode {
        EgCode::single("t", code)
    }

    #[test]
    fn trivial_code_on_identity_is_perfect() {
        let n = QuantumChannel::identity(2);
        let f = code_fidelity(&one(trivial_block(2, 2).unwrap()), &n).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_code_through_erasure() {
        for p in [0.0, 0.4, 1.0] {
            let n = zoo::erasure(2, p).unwrap();
            let f = code_fidelity(&one(trivial_block(2, 3).unwrap()), &n).unwrap();
            assert!((f - (1.0 - 0.75 * p)).abs() < 1e-12, "p={p}: {f}");
        }
    }

    // Direct 12-dimensional check of the erased branch: ω = (1-p)Φ + p π⊗π.
    #[test]
    fn erasure_output_matches_hand_computation() {
        let p = 0.4;
        let n = zoo::erasure(2, p).unwrap();
        let omega = trivial_block(2, 3).unwrap().output(&n).unwrap();
        let phi = max_entangled(2).unwrap().density();
        let expect = phi.op().scale(1.0 - p).add(&HermitianOperator::identity(4).scale(p / 4.0));
        assert!(omega.op().as_matrix().max_abs_diff(expect.as_matrix()) < 1e-12);
    }

    #[test]
    fn trivial_code_through_dephasing() {
        for p in [0.1, 0.5] {
            let n = zoo::qubit_dephasing(p).unwrap();
            let f = code_fidelity(&one(trivial_block(2, 2).unwrap()), &n).unwrap();
            assert!((f - (1.0 - p)).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_two_block_on_identity() {
        for d in [2, 3] {
            let n = QuantumChannel::identity(d);
            let f = rate_two_block(d, d).unwrap().fidelity(&n).unwrap();
            assert!((f - 1.0 / d as f64).abs() < 1e-12);
        }
        let n = QuantumChannel::identity(2);
        for k in 1..=5 {
            let code = CodeFamily::RateTwo.build(&n, k).unwrap();
            assert_eq!(code.size(), Some(4u64.pow(k as u32)));
            let f = code_fidelity(&code, &n).unwrap();
            assert!((f - 0.5f64.powi(k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn product_fidelity_matches_joint_computation() {
        // two trivial dephasing blocks as one block on two uses
        let p = 0.2;
        let n = zoo::qubit_dephasing(p).unwrap();
        let two = n.tensor(&n).unwrap();
        let joint = trivial_block(4, 4).unwrap().fidelity(&two).unwrap();
        let prod = code_fidelity(&CodeFamily::Trivial.build(&n, 2).unwrap(), &n).unwrap();
        assert!((joint - prod).abs() < 1e-12);
    }

    #[test]
    fn petz_decoders_are_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chans = [
            zoo::erasure(2, 0.3).unwrap(),
            zoo::erasure(2, 1.0).unwrap(),
            zoo::qubit_dephasing(0.2).unwrap(),
            zoo::depolarizing(2, 0.4).unwrap(),
            QuantumChannel::random(2, 3, 2, &mut rng),
        ];
        for n in &chans {
            let r = petz_decoder(n).unwrap();
            assert!(r.validate().completeness_residual < 1e-9);
            let f = petz_block(n).unwrap().fidelity(n).unwrap();
            assert!((0.0..=1.0).contains(&f));
        }
        // dephasing Petz decoder is the channel itself
        let p = 0.2;
        let n = zoo::qubit_dephasing(p).unwrap();
        let f = petz_block(&n).unwrap().fidelity(&n).unwrap();
        assert!((f - (1.0 - 2.0 * p * (1.0 - p))).abs() < 1e-12);
    }

    #[test]
    fn entanglement_test_flags() {
        let phi = max_entangled(2).unwrap().density();
        let t = entanglement_test(&phi).unwrap();
        assert!((t.op().as_matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
        let singlet = PureState::normalized(
            vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
            vec![2, 2],
        )
        .unwrap();
        let t = entanglement_test(&singlet.density()).unwrap();
        assert!((t.op().as_matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        // ω = 0.3 Φ + 0.7 |01⟩⟨01| has overlap 0.3
        let w = phi
            .op()
            .scale(0.3)
            .add(&PureState::basis(4, 1).density().op().scale(0.7));
        let t = entanglement_test(&DensityOperator::new(w, vec![2, 2]).unwrap()).unwrap();
        assert!((t.op().as_matrix()[(0, 0)].re - 0.7).abs() < 1e-12);
        assert!((t.op().as_matrix()[(1, 1)].re - 0.3).abs() < 1e-12);
    }

    #[test]
    fn entanglement_test_is_a_state_with_the_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in [2, 3] {
            for _ in 0..10 {
                let rho = crate::random::density(m * m, m * m, &mut rng);
                let omega = DensityOperator::new(rho, vec![m, m]).unwrap();
                let t = entanglement_test(&omega).unwrap();
                assert!((t.op().trace_re() - 1.0).abs() < 1e-12);
                let f = max_entangled(m).unwrap().expectation(omega.op().as_matrix());
                assert!((t.op().as_matrix()[(1, 1)].re - f).abs() < 1e-12);
            }
        }
        assert!(entanglement_test(&DensityOperator::maximally_mixed(3)).is_err());
    }

    #[test]
    fn oneshot_check_arithmetic() {
        let n = QuantumChannel::identity(2);
        let perf = oneshot_check(&CodeFamily::RateTwo.build(&n, 1).unwrap(), &n, 2.0, 1.0).unwrap();
        assert!((perf.bound - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((perf.fidelity - 0.5).abs() < 1e-12);
        assert!(perf.satisfied);
        // multi-use codes go through weak subadditivity
        let perf = oneshot_check(&CodeFamily::RateTwo.build(&n, 2).unwrap(), &n, 2.0, 1.0).unwrap();
        assert!((perf.renyi_rains - weak_subadd_bound(1.0, 2, 2.0, 2).unwrap()).abs() < 1e-12);
        // a fidelity above the bound is flagged
        let perf = oneshot_check(&CodeFamily::Trivial.build(&n, 1).unwrap(), &n, 2.0, 0.0).unwrap();
        assert!(!perf.satisfied);
    }

    #[test]
    fn sweeps() {
        let id = QuantumChannel::identity(2);
        let rows =
            sc_decay_sweep(|k| CodeFamily::RateTwo.build(&id, k), &id, 5, 2.0, 1.0).unwrap();
        assert_eq!(rows.len(), 5);
        for w in rows.windows(2) {
            assert!(w[1].fidelity < w[0].fidelity);
        }
        for r in &rows {
            assert!(r.empirical_exponent >= 0.0);
            assert!((r.empirical_exponent - 1.0).abs() < 1e-9);
            assert!(r.fidelity <= r.bound + BOUND_SLACK);
        }
        let rows =
            sc_decay_sweep(|k| CodeFamily::Trivial.build(&id, k), &id, 5, 2.0, 1.0).unwrap();
        assert!(rows.iter().all(|r| (r.fidelity - 1.0).abs() < 1e-12));
        let er = zoo::erasure(2, 0.5).unwrap();
        let rows =
            sc_decay_sweep(|k| CodeFamily::Trivial.build(&er, k), &er, 5, 2.0, 0.5).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].fidelity < w[0].fidelity);
        }
        assert!(sc_decay_sweep(|k| CodeFamily::Trivial.build(&id, k), &id, 7, 2.0, 1.0).is_err());
    }

    #[test]
    fn post_processing_never_beats_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = zoo::qubit_dephasing(0.3).unwrap();
        let base = CodeFamily::Trivial.build(&n, 1).unwrap();
        // R̃₂ ≥ R = 1 - h(0.3); use R as a valid lower stand-in
        let r = 1.0 - crate::divergence::binary_entropy(0.3).unwrap();
        for _ in 0..20 {
            let code = base.post_process(|m| QuantumChannel::random(m, m, 2, &mut rng)).unwrap();
            let perf = oneshot_check(&code, &n, 2.0, r).unwrap();
            assert!(perf.satisfied);
        }
    }

    #[test]
    fn factored_and_joint_decoders_agree() {
        let n = zoo::erasure(2, 0.3).unwrap();
        for f in CodeFamily::ALL {
            let b = f.block(&n).unwrap();
            let joint = CodeBlock::new(b.m(), b.encoder().clone(), b.decoder().unwrap(), 1).unwrap();
            let (x, y) = (b.fidelity(&n).unwrap(), joint.fidelity(&n).unwrap());
            assert!((x - y).abs() < 1e-12, "{f:?}: {x} vs {y}");
        }
    }

    #[test]
    fn dimension_errors() {
        let n = QuantumChannel::identity(3);
        assert!(trivial_block(2, 2).unwrap().fidelity(&n).is_err());
        let enc = max_entangled(2).unwrap();
        assert!(CodeBlock::new(2, enc, QuantumChannel::identity(3), 1).is_err());
    }
}
