//! Randomized property suites: the invariants every module promises,
//! checked on sampled instances and reported with counterexamples.
//!
//! Each suite draws from its own generator, seeded from the run seed and the
//! suite's position in [`Suite::ALL`], so a suite reports the same numbers
//! whether it runs alone or inside `all`.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    coherent_info_channel, fidelity_upper_bound, rains_at_input, rains_info, sc_exponent_from_values,
    SolverConfig, ORDER_TOL,
};
use crate::channel::QuantumChannel;
use crate::codes::{code_corpus, entanglement_test, oneshot_check, sc_decay_sweep, CodeFamily, BOUND_SLACK};
use crate::divergence::{sandwiched_renyi, Order};
use crate::linalg::{
    herm_eig, kron, mat_func, partial_transpose, permute_subsystems, trace_norm, ComplexMatrix,
    HermitianOperator,
};
use crate::ppt::{
    is_ppt_prime, max_entangled_overlap, project_ppt_prime_with, rains_rel_entropy,
    rains_rel_entropy_from, InnerConfig, PptPrimeElement, ProjectionConfig,
};
use crate::random;
use crate::state::{fidelity, max_entangled, DensityOperator, PureState};
use crate::zoo::{self, ChannelFamily};
use crate::{Error, Result};

/// Counterexamples kept per property.
const MAX_COUNTEREXAMPLES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Linalg,
    Channels,
    Dpi,
    Divergence,
    Ppt,
    Zoo,
    Hierarchy,
    Codes,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Linalg,
        Suite::Channels,
        Suite::Dpi,
        Suite::Divergence,
        Suite::Ppt,
        Suite::Zoo,
        Suite::Hierarchy,
        Suite::Codes,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Linalg => "linalg",
            Suite::Channels => "channels",
            Suite::Dpi => "dpi",
            Suite::Divergence => "divergence",
            Suite::Ppt => "ppt",
            Suite::Zoo => "zoo",
            Suite::Hierarchy => "hierarchy",
            Suite::Codes => "codes",
        }
    }

    fn index(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown suite '{s}'")))
    }
}

/// Deliberate bugs for checking that the suites notice them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Negates the entries of `T_B(X)` with `b < b'`.
    PtSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pt-sign" => Ok(Fault::PtSign),
            _ => Err(Error::param(format!("unknown fault '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Random instances per sampled property.
    pub samples: usize,
    /// Projected PPT′ points for the overlap bound.
    pub overlap_samples: usize,
    /// Instances for properties that run the inner solver.
    pub solver_samples: usize,
    pub faults: Vec<Fault>,
    pub solver: SolverConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: 50,
            overlap_samples: 200,
            solver_samples: 3,
            faults: Vec::new(),
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ComplexMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub checked: usize,
    pub failed: usize,
    /// Largest amount by which the property was broken; `≤ 0` when it held
    /// everywhere.
    pub worst_violation: f64,
    pub passed: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl PropertyReport {
    fn new(property: &str) -> Self {
        Self {
            property: String::from(property),
            checked: 0,
            failed: 0,
            worst_violation: f64::NEG_INFINITY,
            passed: true,
            counterexamples: Vec::new(),
        }
    }

    /// Records one instance that holds iff `violation ≤ 0`.
    fn check(
        &mut self,
        violation: f64,
        detail: impl FnOnce() -> String,
        matrix: impl FnOnce() -> Option<ComplexMatrix>,
    ) {
        self.checked += 1;
        let v = if violation.is_nan() { f64::INFINITY } else { violation };
        self.worst_violation = self.worst_violation.max(v);
        if v > 0.0 {
            self.failed += 1;
            self.passed = false;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(Counterexample {
                    detail: detail(),
                    matrix: matrix(),
                });
            }
        }
    }

    fn holds(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.check(if ok { 0.0 } else { 1.0 }, detail, || None);
    }

    fn error(&mut self, e: Error) {
        self.check(f64::INFINITY, || format!("error: {e}"), || None);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    fn new(suite: Suite, properties: Vec<PropertyReport>) -> Self {
        Self {
            suite,
            passed: properties.iter().all(|p| p.passed),
            properties,
        }
    }
}

/// Hierarchy values reused by the code suite.
#[derive(Clone, Debug, Default)]
struct Context {
    renyi: Vec<(ChannelFamily, Vec<(f64, f64)>)>,
}

const HIERARCHY_ALPHAS: [f64; 3] = [1.5, 2.0, 4.0];

fn rng_for(seed: u64, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (suite.index() + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig, seed: u64) -> Result<SuiteReport> {
    run_with(suite, cfg, seed, &mut Context::default())
}

/// Every suite in [`Suite::ALL`] order.
pub fn run_all(cfg: &VerifyConfig, seed: u64) -> Result<Vec<SuiteReport>> {
    let mut ctx = Context::default();
    Suite::ALL
        .iter()
        .map(|&s| run_with(s, cfg, seed, &mut ctx))
        .collect()
}

fn run_with(suite: Suite, cfg: &VerifyConfig, seed: u64, ctx: &mut Context) -> Result<SuiteReport> {
    let mut rng = rng_for(seed, suite);
    let props = match suite {
        Suite::Linalg => linalg_suite(cfg, &mut rng)?,
        Suite::Channels => channel_suite(cfg, &mut rng)?,
        Suite::Dpi => vec![dpi_property(cfg, &mut rng)?],
        Suite::Divergence => divergence_suite(cfg, &mut rng)?,
        Suite::Ppt => ppt_suite(cfg, &mut rng)?,
        Suite::Zoo => zoo_suite(cfg, &mut rng)?,
        Suite::Hierarchy => hierarchy_suite(cfg, &mut rng, ctx)?,
        Suite::Codes => code_suite(cfg, &mut rng, ctx)?,
    };
    Ok(SuiteReport::new(suite, props))
}

fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    let rank = rng.random_range(1..=d);
    DensityOperator::new(random::density(d, rank, rng), vec![d]).expect("random density")
}

fn full_rank_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::new(random::density(d, d, rng), vec![d]).expect("random density")
}

fn faulty_partial_transpose(m: &ComplexMatrix, dims: [usize; 2]) -> ComplexMatrix {
    let [da, db] = dims;
    ComplexMatrix::from_fn(da * db, da * db, |r, c| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        let x = m[(a * db + b2, a2 * db + b)];
        if b < b2 {
            -x
        } else {
            x
        }
    })
}

fn linalg_suite<R: Rng + ?Sized>(cfg: &VerifyConfig, rng: &mut R) -> Result<Vec<PropertyReport>> {
    let pt = |m: &ComplexMatrix, dims: [usize; 2]| -> Result<ComplexMatrix> {
        if cfg.faults.contains(&Fault::PtSign) {
            Ok(faulty_partial_transpose(m, dims))
        } else {
            partial_transpose(m, dims)
        }
    };

    let mut recon = PropertyReport::new("eig_reconstruction");
    let mut ortho = PropertyReport::new("eig_orthonormality");
    for i in 0..cfg.samples.max(100) {
        let n = 1 + i % 16;
        let m = random::hermitian(n, rng).scale(rng.random_range(0.1..10.0));
        let eig = herm_eig(&m);
        let scale = m.as_matrix().frobenius_norm().max(1.0);
        let err = eig.reconstruct().as_matrix().max_abs_diff(m.as_matrix());
        let err_f = eig.reconstruct().sub(&m).as_matrix().frobenius_norm();
        recon.check(err_f - 1e-9 * scale, || format!("dim {n}: error {err:e}"), || {
            Some(m.as_matrix().clone())
        });
        let v = &eig.vectors;
        let gram = v.adjoint().matmul(v);
        let dev = gram.max_abs_diff(&ComplexMatrix::identity(n));
        let dev_f = (&gram - &ComplexMatrix::identity(n)).frobenius_norm();
        ortho.check(dev_f - 1e-9, || format!("dim {n}: ‖V†V − I‖ entry {dev:e}"), || {
            Some(m.as_matrix().clone())
        });
    }

    let mut tn = PropertyReport::new("trace_norm_dominates_trace");
    let mut tn_psd = PropertyReport::new("trace_norm_equals_trace_on_psd");
    for i in 0..cfg.samples {
        let n = 2 + i % 6;
        let h = random::hermitian(n, rng);
        let gap = h.trace_re().abs() - trace_norm(&h);
        tn.check(gap - 1e-12, || format!("|tr| exceeds ‖·‖₁ by {gap:e}"), || {
            Some(h.as_matrix().clone())
        });
        let p = random::psd(n, rng);
        let diff = (trace_norm(&p) - p.trace_re()).abs();
        tn_psd.check(diff - 1e-9 * p.trace_re().max(1.0), || format!("gap {diff:e}"), || {
            Some(p.as_matrix().clone())
        });
    }

    let mut pt_norms = PropertyReport::new("partial_transpose_preserves_trace_and_norm");
    let mut pt_inv = PropertyReport::new("partial_transpose_involution");
    for i in 0..cfg.samples {
        let dims = [2 + i % 2, 2 + (i / 2) % 3];
        let n = dims[0] * dims[1];
        let m = random::ginibre(n, n, rng);
        let t = pt(&m, dims)?;
        let dtr = (t.trace() - m.trace()).norm();
        let dfro = (t.frobenius_norm() - m.frobenius_norm()).abs();
        pt_norms.check(dtr.max(dfro) - 1e-10, || format!("dims {dims:?}: Δtr {dtr:e}, Δ‖·‖_F {dfro:e}"), || {
            Some(m.clone())
        });
        let back = pt(&t, dims)?;
        let err = back.max_abs_diff(&m);
        pt_inv.check(err - 1e-12, || format!("dims {dims:?}: ‖T_B T_B X − X‖_max = {err:e}"), || {
            Some(m.clone())
        });
    }

    let mut mf = PropertyReport::new("mat_func_identity");
    for i in 0..cfg.samples {
        let h = random::hermitian(1 + i % 8, rng);
        match mat_func(&h, |x| x, false) {
            Ok(out) => {
                let err = out.as_matrix().max_abs_diff(h.as_matrix());
                mf.check(err - 1e-10, || format!("error {err:e}"), || Some(h.as_matrix().clone()));
            }
            Err(e) => mf.error(e),
        }
    }
    Ok(vec![recon, ortho, tn, tn_psd, pt_norms, pt_inv, mf])
}

fn channel_suite<R: Rng + ?Sized>(cfg: &VerifyConfig, rng: &mut R) -> Result<Vec<PropertyReport>> {
    let channels = zoo_channels()?;
    let mut tp = PropertyReport::new("output_trace_and_positivity");
    let mut choi = PropertyReport::new("kraus_and_choi_routes_agree");
    for i in 0..cfg.samples {
        let (fam, n) = &channels[i % channels.len()];
        let rho = random_state(n.d_in(), rng);
        let out = n.apply(&rho, 0)?;
        let dtr = (out.op().trace_re() - 1.0).abs();
        let min = herm_eig(out.op()).min_value();
        tp.check((dtr - 1e-9).max(-1e-9 - min), || format!("{}: Δtr {dtr:e}, min eig {min:e}", fam.name()), || {
            Some(rho.op().as_matrix().clone())
        });
        let via = n.apply_via_choi(rho.op().as_matrix())?;
        let err = via.max_abs_diff(out.op().as_matrix());
        choi.check(err - 1e-9, || format!("{}: routes differ by {err:e}", fam.name()), || {
            Some(rho.op().as_matrix().clone())
        });
    }
    let mut fid = PropertyReport::new("fidelity_unitary_invariance");
    for i in 0..cfg.samples {
        let d = 2 + i % 3;
        let (rho, sigma) = (random_state(d, rng), random_state(d, rng));
        let u = random::unitary(d, rng);
        let f0 = fidelity(&rho, &sigma)?;
        let f1 = fidelity(&rho.conjugate_by(&u), &sigma.conjugate_by(&u))?;
        let err = (f0 - f1).abs();
        fid.check(err - 1e-9, || format!("d {d}: {f0} vs {f1}"), || None);
    }
    Ok(vec![tp, choi, fid])
}

fn zoo_channels() -> Result<Vec<(ChannelFamily, QuantumChannel)>> {
    ChannelFamily::sample_points()
        .into_iter()
        .map(|f| f.build().map(|c| (f, c)))
        .collect()
}

const DPI_ORDERS: [Order; 3] = [Order::LimitOne, Order::Renyi(1.5), Order::Renyi(2.0)];

fn dpi_property<R: Rng + ?Sized>(cfg: &VerifyConfig, rng: &mut R) -> Result<PropertyReport> {
    let channels = zoo_channels()?;
    let mut p = PropertyReport::new("data_processing");
    for i in 0..cfg.samples {
        let (fam, n) = &channels[rng.random_range(0..channels.len())];
        let order = DPI_ORDERS[i % DPI_ORDERS.len()];
        let rho = random_state(n.d_in(), rng);
        let sigma = full_rank_state(n.d_in(), rng);
        let before = sandwiched_renyi(&rho, sigma.op(), order)?.value;
        let out_rho = n.apply(&rho, 0)?;
        let out_sigma = n.apply(&sigma, 0)?;
        let after = sandwiched_renyi(&out_rho, out_sigma.op(), order)?.value;
        p.check(after - before - 1e-7, || {
            format!("{} at {order}: {after} after vs {before} before", fam.name())
        }, || Some(rho.op().as_matrix().clone()));
    }
    Ok(p)
}

const ALPHA_LADDER: [Order; 5] = [
    Order::LimitOne,
    Order::Renyi(1.1),
    Order::Renyi(1.5),
    Order::Renyi(2.0),
    Order::Renyi(3.0),
];

fn divergence_suite<R: Rng + ?Sized>(cfg: &VerifyConfig, rng: &mut R) -> Result<Vec<PropertyReport>> {
    let mut mono = PropertyReport::new("alpha_monotonicity");
    let mut unitary = PropertyReport::new("unitary_invariance");
    let mut tensor = PropertyReport::new("tensor_with_state_invariance");
    let mut qc = PropertyReport::new("quasi_convexity");
    for i in 0..cfg.samples {
        let d = 2 + i % 3;
        let rho = random_state(d, rng);
        let sigma = full_rank_state(d, rng);
        let values = ALPHA_LADDER
            .iter()
            .map(|&o| sandwiched_renyi(&rho, sigma.op(), o).map(|v| v.value))
            .collect::<Result<Vec<_>>>()?;
        for k in 1..values.len() {
            let (lo, hi) = (values[k - 1], values[k]);
            mono.check(lo - hi - 1e-7, || {
                format!("{} = {lo} exceeds {} = {hi}", ALPHA_LADDER[k - 1], ALPHA_LADDER[k])
            }, || Some(rho.op().as_matrix().clone()));
        }

        let order = DPI_ORDERS[i % DPI_ORDERS.len()];
        let base = sandwiched_renyi(&rho, sigma.op(), order)?.value;
        let u = random::unitary(d, rng);
        let rotated =
            sandwiched_renyi(&rho.conjugate_by(&u), sigma.conjugate_by(&u).op(), order)?.value;
        let err = (rotated - base).abs();
        unitary.check(err - 1e-8 * base.abs().max(1.0), || format!("{order}: {base} vs {rotated}"), || None);

        let tau = full_rank_state(2, rng);
        let joint = sandwiched_renyi(&rho.tensor(&tau), sigma.tensor(&tau).op(), order)?.value;
        let err = (joint - base).abs();
        tensor.check(err - 1e-8 * base.abs().max(1.0), || format!("{order}: {base} vs {joint}"), || None);

        let rho2 = random_state(d, rng);
        let lambda = rng.random_range(0.0..1.0);
        let mix = rho.mix(&rho2, lambda)?;
        let lhs = sandwiched_renyi(&mix, sigma.op(), order)?.value;
        let rhs = base.max(sandwiched_renyi(&rho2, sigma.op(), order)?.value);
        qc.check(lhs - rhs - 1e-7, || format!("{order}, λ = {lambda}: {lhs} > {rhs}"), || None);
    }
    Ok(vec![mono, unitary, tensor, qc])
}

fn ppt_suite<R: Rng + ?Sized>(cfg: &VerifyConfig, rng: &mut R) -> Result<Vec<PropertyReport>> {
    let proj = ProjectionConfig::default();
    let mut member = PropertyReport::new("projection_is_member");
    let mut fixed = PropertyReport::new("projection_fixes_members");
    for i in 0..cfg.samples {
        let dims = [[2, 2], [2, 3], [3, 2]][i % 3];
        let x = random::hermitian(dims[0] * dims[1], rng).scale(rng.random_range(0.1..2.0));
        let p = project_ppt_prime_with(&x, dims, &proj)?;
        let m = is_ppt_prime(p.element.op(), dims)?;
        member.holds(m.member, || {
            format!("min eig {:e}, ‖T_B τ‖₁ = {}", m.min_eig, m.pt_trace_norm)
        });
        let again = project_ppt_prime_with(p.element.op(), dims, &proj)?;
        let moved = again.element.op().sub(p.element.op()).as_matrix().frobenius_norm();
        fixed.check(moved - 1e-7, || format!("member moved by {moved:e}"), || {
            Some(p.element.op().as_matrix().clone())
        });
    }

    let mut overlap = PropertyReport::new("max_entangled_overlap_bound");
    let quick_proj = ProjectionConfig {
        max_iter: 200,
        ..ProjectionConfig::default()
    };
    for _ in 0..cfg.overlap_samples {
        let x = random::hermitian(4, rng).scale(rng.random_range(0.1..2.0));
        let tau = project_ppt_prime_with(&x, [2, 2], &quick_proj)?.element;
        let o = max_entangled_overlap(&tau, 2)?;
        overlap.check(o - 0.5 - 1e-8, || format!("tr(Φτ) = {o}"), || Some(tau.op().as_matrix().clone()));
    }

    let inner = InnerConfig {
        restarts: 1,
        ..cfg.solver.inner.clone()
    };
    let mut lu = PropertyReport::new("local_unitary_invariance");
    let mut sub = PropertyReport::new("subadditivity");
    let mut mono = PropertyReport::new("rains_alpha_monotonicity");
    for _ in 0..cfg.solver_samples {
        let rho = two_qubit_state(rng);
        let base = rains_rel_entropy(&rho, Order::LimitOne, &inner, rng)?;
        let u = kron(&random::unitary(2, rng), &random::unitary(2, rng));
        let rotated = rains_rel_entropy(&rho.conjugate_by(&u), Order::LimitOne, &inner, rng)?;
        let err = (rotated.value - base.value).abs();
        lu.check(err - ORDER_TOL, || format!("{} vs {}", base.value, rotated.value), || {
            Some(rho.op().as_matrix().clone())
        });

        let sigma = two_qubit_state(rng);
        let other = rains_rel_entropy(&sigma, Order::LimitOne, &inner, rng)?;
        match joint_rains(&rho, &sigma, &base.tau_star, &other.tau_star, &inner) {
            Ok(joint) => {
                let sum = base.value + other.value;
                sub.check(joint - sum - ORDER_TOL, || format!("{joint} > {} + {}", base.value, other.value), || None);
            }
            Err(e) => sub.error(e),
        }

        let mut prev = (Order::LimitOne, base.value);
        for order in [Order::Renyi(1.5), Order::Renyi(2.0)] {
            let v = rains_rel_entropy(&rho, order, &inner, rng)?.value;
            mono.check(prev.1 - v - ORDER_TOL, || format!("{} = {} exceeds {order} = {v}", prev.0, prev.1), || {
                Some(rho.op().as_matrix().clone())
            });
            prev = (order, v);
        }
    }
    Ok(vec![member, fixed, overlap, lu, sub, mono])
}

fn two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> DensityOperator {
    let rank = rng.random_range(1..=4);
    DensityOperator::new(random::density(4, rank, rng), vec![2, 2]).expect("random density")
}

// R(ρ⊗σ) over the cut A₁A₂ : B₁B₂, started from the product of the two
// single-pair minimizers.
fn joint_rains(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    tau_rho: &PptPrimeElement,
    tau_sigma: &PptPrimeElement,
    inner: &InnerConfig,
) -> Result<f64> {
    let perm = [0, 2, 1, 3];
    let dims = [2, 2, 2, 2];
    let joint = permute_subsystems(rho.tensor(sigma).op().as_matrix(), &dims, &perm)?;
    let joint = DensityOperator::new(HermitianOperator::from_hermitian_part(&joint), vec![4, 4])?;
    let start = permute_subsystems(&kron(tau_rho.op().as_matrix(), tau_sigma.op().as_matrix()), &dims, &perm)?;
    let start = HermitianOperator::from_hermitian_part(&start);
    let cfg = InnerConfig {
        restarts: 0,
        ..inner.clone()
    };
    Ok(rains_rel_entropy_from(&joint, Order::LimitOne, &cfg, &[start], [4, 4])?.value)
}

fn zoo_suite<R: Rng + ?Sized>(cfg: &VerifyConfig, rng: &mut R) -> Result<Vec<PropertyReport>> {
    let mut deph = PropertyReport::new("dephasing_covariance");
    let mut twirl = PropertyReport::new("phase_twirl_is_complete_dephasing");
    let mut erase = PropertyReport::new("erasure_unitary_covariance");
    let mut depol = PropertyReport::new("depolarizing_unitary_covariance");
    for i in 0..cfg.samples {
        let (n, d) = if i % 2 == 0 {
            (zoo::qubit_dephasing(rng.random_range(0.0..1.0))?, 2)
        } else {
            let overlap = rng.random_range(0.0..1.0);
            (zoo::generalized_dephasing(&zoo::symmetric_env_states(3, overlap)?)?, 3)
        };
        let rho = random_state(d, rng);
        let z = rng.random_range(0..d);
        let ph = zoo::phase_operator(d, z);
        let lhs = n.apply(&rho.conjugate_by(&ph), 0)?;
        let rhs = n.apply(&rho, 0)?.conjugate_by(&ph);
        let err = lhs.op().as_matrix().max_abs_diff(rhs.op().as_matrix());
        deph.check(err - 1e-10, || format!("{}, z = {z}: {err:e}", n.name()), || {
            Some(rho.op().as_matrix().clone())
        });

        let mut avg = ComplexMatrix::zeros(d, d);
        for z in 0..d {
            avg += &zoo::phase_operator(d, z).sandwich(rho.op().as_matrix());
        }
        let avg = avg.scale(1.0 / d as f64);
        let diag = ComplexMatrix::from_fn(d, d, |r, c| {
            if r == c {
                rho.op().as_matrix()[(r, c)]
            } else {
                crate::C64::new(0.0, 0.0)
            }
        });
        let err = avg.max_abs_diff(&diag);
        twirl.check(err - 1e-10, || format!("d {d}: {err:e}"), || Some(rho.op().as_matrix().clone()));

        let d = 2 + i % 2;
        let p = rng.random_range(0.0..1.0);
        let n = zoo::erasure(d, p)?;
        let u = random::unitary(d, rng);
        let mut u_ext = ComplexMatrix::identity(d + 1);
        for r in 0..d {
            for c in 0..d {
                u_ext[(r, c)] = u[(r, c)];
            }
        }
        let rho = random_state(d, rng);
        let lhs = n.apply(&rho.conjugate_by(&u), 0)?;
        let rhs = n.apply(&rho, 0)?.conjugate_by(&u_ext);
        let err = lhs.op().as_matrix().max_abs_diff(rhs.op().as_matrix());
        erase.check(err - 1e-10, || format!("d {d}, p {p}: {err:e}"), || Some(u.clone()));

        let n = zoo::depolarizing(d, p)?;
        let lhs = n.apply(&rho.conjugate_by(&u), 0)?;
        let rhs = n.apply(&rho, 0)?.conjugate_by(&u);
        let err = lhs.op().as_matrix().max_abs_diff(rhs.op().as_matrix());
        depol.check(err - 1e-10, || format!("d {d}, q {p}: {err:e}"), || Some(u.clone()));
    }
    Ok(vec![deph, twirl, erase, depol])
}

fn hierarchy_suite<R: Rng + ?Sized>(
    cfg: &VerifyConfig,
    rng: &mut R,
    ctx: &mut Context,
) -> Result<Vec<PropertyReport>> {
    let mut order = PropertyReport::new("capacity_hierarchy");
    let mut reference = PropertyReport::new("analytic_references");
    let mut certs = PropertyReport::new("certificates_revalidate");
    let mut conv = PropertyReport::new("solvers_converged");
    ctx.renyi.clear();
    for fam in ChannelFamily::sample_points() {
        let n = fam.build()?;
        let name = n.name();
        let ic = coherent_info_channel(&n, &cfg.solver, rng)?;
        let mut reports = vec![rains_info(&n, Order::LimitOne, &cfg.solver, rng)?];
        for &a in &HIERARCHY_ALPHAS {
            reports.push(rains_info(&n, Order::Renyi(a), &cfg.solver, rng)?);
        }
        let mut prev = (String::from("I_c"), ic.value);
        for r in &reports {
            let label = format!("{}", r.alpha.unwrap_or(Order::LimitOne));
            order.check(prev.1 - r.value - ORDER_TOL, || {
                format!("{name}: {} = {} exceeds {label} = {}", prev.0, prev.1, r.value)
            }, || None);
            prev = (label, r.value);
        }
        let refs = fam.analytic_reference()?;
        if let Some(v) = refs.coherent_info {
            let err = (ic.value - v).abs();
            reference.check(err - ORDER_TOL, || format!("{name}: I_c {} vs {v}", ic.value), || None);
        }
        if let Some(v) = refs.rains {
            let err = (reports[0].value - v).abs();
            reference.check(err - ORDER_TOL, || format!("{name}: R {} vs {v}", reports[0].value), || None);
        }
        for r in core::iter::once(&ic).chain(&reports) {
            let norm = r.input_state_certificate.norm();
            certs.check((norm - 1.0).abs() - 1e-9, || format!("{name}: input norm {norm}"), || None);
            if let Some(tau) = &r.tau_certificate {
                let m = is_ppt_prime(tau.op(), tau.dims())?;
                certs.holds(m.member, || {
                    format!("{name}: τ has min eig {:e}, ‖T_B τ‖₁ = {}", m.min_eig, m.pt_trace_norm)
                });
            }
            conv.holds(r.converged, || format!("{name}: {} did not converge", r.quantity));
        }
        let renyi = HIERARCHY_ALPHAS
            .iter()
            .zip(&reports[1..])
            .map(|(&a, r)| (a, r.value))
            .collect();
        ctx.renyi.push((fam, renyi));
    }

    // Covariance as an argmax restriction: random inputs never beat the
    // aligned optimum.
    let mut cov = PropertyReport::new("dephasing_random_inputs_below_aligned_optimum");
    let n = zoo::qubit_dephasing(0.3)?;
    let best = rains_info(&n, Order::LimitOne, &cfg.solver, rng)?.value;
    let inner = InnerConfig {
        restarts: 0,
        ..cfg.solver.inner.clone()
    };
    for _ in 0..cfg.samples {
        let psi = PureState::new(random::unit_vector(4, rng), vec![2, 2])?;
        let v = rains_at_input(&n, &psi, Order::LimitOne, &inner, rng)?.value;
        cov.check(v - best - ORDER_TOL, || format!("random input reaches {v} > {best}"), || None);
    }
    Ok(vec![order, reference, certs, conv, cov])
}

fn renyi_for(ctx: &Context, fam: &ChannelFamily, alpha: f64) -> Option<f64> {
    ctx.renyi
        .iter()
        .find(|(f, _)| f == fam)
        .and_then(|(_, v)| v.iter().find(|(a, _)| *a == alpha).map(|(_, r)| *r))
}

fn code_suite<R: Rng + ?Sized>(
    cfg: &VerifyConfig,
    rng: &mut R,
    ctx: &mut Context,
) -> Result<Vec<PropertyReport>> {
    let mut bound = PropertyReport::new("oneshot_bound_holds");
    for fam in ChannelFamily::sample_points() {
        let n = fam.build()?;
        let codes = code_corpus(&n, rng)?;
        for alpha in [1.5, 2.0] {
            let r = match renyi_for(ctx, &fam, alpha) {
                Some(r) => r,
                None => rains_info(&n, Order::Renyi(alpha), &cfg.solver, rng)?.value,
            };
            for code in &codes {
                let perf = oneshot_check(code, &n, alpha, r)?;
                bound.check(perf.fidelity - perf.bound - BOUND_SLACK, || {
                    format!("{} / {} at α = {alpha}: F = {} > {}", n.name(), code.name(), perf.fidelity, perf.bound)
                }, || None);
            }
        }
    }

    let mut decay = PropertyReport::new("rate_two_decay_on_identity");
    let id_fam = ChannelFamily::Identity { d: 2 };
    let id = id_fam.build()?;
    let grid = HIERARCHY_ALPHAS
        .iter()
        .map(|&a| match renyi_for(ctx, &id_fam, a) {
            Some(r) => Ok((a, r)),
            None => rains_info(&id, Order::Renyi(a), &cfg.solver, rng).map(|r| (a, r.value)),
        })
        .collect::<Result<Vec<_>>>()?;
    let r2 = grid.iter().find(|(a, _)| *a == 2.0).map(|g| g.1).unwrap_or(1.0);
    let rows = sc_decay_sweep(|k| CodeFamily::RateTwo.build(&id, k), &id, 5, 2.0, r2)?;
    for w in rows.windows(2) {
        decay.holds(w[1].fidelity < w[0].fidelity, || {
            format!("F({}) = {} is not below F({}) = {}", w[1].n, w[1].fidelity, w[0].n, w[0].fidelity)
        });
    }
    let exponent = sc_exponent_from_values(2.0, &grid)?.value;
    for row in &rows {
        let e = row.empirical_exponent;
        let ok = exponent > 0.0 && e >= exponent / 3.0 && e <= exponent * 3.0;
        decay.holds(ok, || format!("n = {}: empirical exponent {e} vs grid value {exponent}", row.n));
        decay.check(row.fidelity - row.bound - BOUND_SLACK, || {
            format!("n = {}: F = {} > {}", row.n, row.fidelity, row.bound)
        }, || None);
    }

    let mut test = PropertyReport::new("entanglement_test_flag");
    for i in 0..cfg.samples {
        let m = 2 + i % 2;
        let omega = DensityOperator::new(random::density(m * m, 1 + i % (m * m), rng), vec![m, m])?;
        let flag = entanglement_test(&omega)?;
        let f = max_entangled(m)?.expectation(omega.op().as_matrix());
        let err = (flag.op().trace_re() - 1.0)
            .abs()
            .max((flag.op().as_matrix()[(1, 1)].re - f).abs());
        test.check(err - 1e-12, || format!("flag off by {err:e}"), || Some(omega.op().as_matrix().clone()));
    }

    let mut formula = PropertyReport::new("bound_formula_monotonicity");
    for _ in 0..cfg.samples {
        let alpha = rng.random_range(1.01..5.0);
        let (m1, m2) = sorted(rng.random_range(0.0..4.0), rng.random_range(0.0..4.0));
        let (r1, r2) = sorted(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
        let in_m = fidelity_upper_bound(m2, r1, alpha)? - fidelity_upper_bound(m1, r1, alpha)?;
        let in_r = fidelity_upper_bound(m1, r1, alpha)? - fidelity_upper_bound(m1, r2, alpha)?;
        formula.check(in_m.max(in_r), || format!("α = {alpha}, log M {m1}..{m2}, R̃ {r1}..{r2}"), || None);
        let grid: Vec<(f64, f64)> = [1.5, 2.0, 4.0]
            .iter()
            .map(|&a| (a, rng.random_range(0.0..2.0)))
            .collect();
        let (lo, hi) = sorted(rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
        let drop = sc_exponent_from_values(lo, &grid)?.value - sc_exponent_from_values(hi, &grid)?.value;
        formula.check(drop, || format!("exponent decreases from rate {lo} to {hi}"), || None);
    }
    Ok(vec![bound, decay, test, formula])
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            samples: 10,
            overlap_samples: 20,
            solver_samples: 1,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn cheap_suites_pass() {
        for s in [Suite::Linalg, Suite::Channels, Suite::Dpi, Suite::Divergence, Suite::Zoo] {
            let r = run_suite(s, &small(), 1).unwrap();
            assert!(r.passed, "{s}: {:?}", r.properties.iter().filter(|p| !p.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn pt_fault_breaks_only_the_involution() {
        let cfg = VerifyConfig {
            faults: vec![Fault::PtSign],
            ..small()
        };
        let r = run_suite(Suite::Linalg, &cfg, 1).unwrap();
        assert!(!r.passed);
        for p in &r.properties {
            let broken = p.property == "partial_transpose_involution";
            assert_eq!(!p.passed, broken, "{}", p.property);
            if broken {
                assert!(!p.counterexamples.is_empty());
                assert!(p.counterexamples[0].matrix.is_some());
            }
        }
    }

    #[test]
    fn suites_are_reproducible() {
        let a = run_suite(Suite::Divergence, &small(), 7).unwrap();
        let b = run_suite(Suite::Divergence, &small(), 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("pt-sign".parse::<Fault>().unwrap(), Fault::PtSign);
    }
}
