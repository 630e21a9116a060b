//! Channel-level quantities: coherent information and (Rényi) Rains
//! information by multi-start ascent over pure inputs, plus the closed-form
//! strong-converse bounds built from them.
//!
//! The outer problem `max_φ f(N(φ_RA))` is solved by Riemannian gradient
//! ascent on the unit sphere. For Rains quantities `f` is itself a
//! minimum over PPT′; its gradient in the output state is taken at the inner
//! minimizer, and consecutive inner solves are warm-started from the previous
//! minimizer.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{Covariance, QuantumChannel};
use crate::divergence::{coherent_info_gradient, divergence_gradient_in_state, Order};
use crate::linalg::{ComplexMatrix, HermitianOperator, C64};
use crate::ppt::{rains_rel_entropy_from, InnerConfig, PptPrimeElement, RainsStateResult};
use crate::random;
use crate::report::{BoundReport, Quantity};
use crate::state::{max_entangled, DensityOperator, PureState};
use crate::{Error, Result};

/// Ordering slack used by hierarchy and monotonicity checks.
pub const ORDER_TOL: f64 = 2e-3;

/// Largest input dimension for coherent information.
pub const MAX_CI_INPUT: usize = 8;
/// Largest `d_in · d_out` for the general Rains path.
pub const MAX_RAINS_DIM: usize = 16;

/// Outer-ascent settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Random starts on top of the maximally entangled and product inputs.
    pub random_starts: usize,
    pub max_iter: usize,
    /// Relative objective change that ends an ascent.
    pub tol: f64,
    pub initial_step: f64,
    /// Let [`rains_info`] use a covariance the channel declares.
    pub use_covariance: bool,
    pub inner: InnerConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            random_starts: 6,
            max_iter: 500,
            tol: 1e-6,
            initial_step: 0.5,
            use_covariance: true,
            inner: InnerConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Inputs `Σ_x √p_x |x⟩|x⟩`.
    AlignedSchmidt,
    /// Input fixed to the maximally entangled state.
    FixedMaxEntangled,
}

impl Reduction {
    fn of(kind: Covariance) -> Self {
        match kind {
            Covariance::DephasingDiagonal => Reduction::AlignedSchmidt,
            Covariance::FullUnitaryGroup => Reduction::FixedMaxEntangled,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Objective {
    CoherentInfo,
    Rains(Order),
}

impl Objective {
    fn quantity(self) -> Quantity {
        match self {
            Objective::CoherentInfo => Quantity::CoherentInfo,
            Objective::Rains(order) => Quantity::rains(order),
        }
    }

    fn order(self) -> Option<Order> {
        match self {
            Objective::CoherentInfo => None,
            Objective::Rains(order) => Some(order),
        }
    }
}

// (I ⊗ K) v for v on R ⊗ A, R first.
fn apply_kraus_vec(k: &ComplexMatrix, v: &[C64], d_r: usize) -> Vec<C64> {
    let (d_out, d_in) = (k.rows(), k.cols());
    let mut w = vec![C64::new(0.0, 0.0); d_r * d_out];
    for r in 0..d_r {
        for b in 0..d_out {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..d_in {
                acc += k[(b, a)] * v[r * d_in + a];
            }
            w[r * d_out + b] = acc;
        }
    }
    w
}

// (I ⊗ K)† u.
fn apply_kraus_adjoint_vec(k: &ComplexMatrix, u: &[C64], d_r: usize) -> Vec<C64> {
    let (d_out, d_in) = (k.rows(), k.cols());
    let mut w = vec![C64::new(0.0, 0.0); d_r * d_in];
    for r in 0..d_r {
        for a in 0..d_in {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..d_out {
                acc += k[(b, a)].conj() * u[r * d_out + b];
            }
            w[r * d_in + a] = acc;
        }
    }
    w
}

fn output_of(n: &QuantumChannel, v: &[C64]) -> DensityOperator {
    let d_r = n.d_in();
    let dim = d_r * n.d_out();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for k in n.kraus() {
        let w = apply_kraus_vec(k, v, d_r);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] += w[i] * w[j].conj();
            }
        }
    }
    DensityOperator::new_unchecked(
        HermitianOperator::from_hermitian_part(&out),
        vec![d_r, n.d_out()],
    )
}

// (id ⊗ N†)(G) applied to v.
fn pullback(n: &QuantumChannel, g: &HermitianOperator, v: &[C64]) -> Vec<C64> {
    let d_r = n.d_in();
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for k in n.kraus() {
        let w = apply_kraus_vec(k, v, d_r);
        let gw = g.mul_vec(&w);
        for (o, x) in out.iter_mut().zip(apply_kraus_adjoint_vec(k, &gw, d_r)) {
            *o += x;
        }
    }
    out
}

fn re_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

struct Evaluation {
    value: f64,
    gradient: HermitianOperator,
    inner: Option<RainsStateResult>,
}

struct Problem<'a> {
    channel: &'a QuantumChannel,
    objective: Objective,
    inner: &'a InnerConfig,
}

impl Problem<'_> {
    fn dims(&self) -> [usize; 2] {
        [self.channel.d_in(), self.channel.d_out()]
    }

    fn evaluate(&self, v: &[C64], starts: &[HermitianOperator]) -> Result<Evaluation> {
        let rho = output_of(self.channel, v);
        match self.objective {
            Objective::CoherentInfo => {
                let (value, gradient) = coherent_info_gradient(&rho)?;
                Ok(Evaluation {
                    value,
                    gradient,
                    inner: None,
                })
            }
            Objective::Rains(order) => {
                let mut all: Vec<HermitianOperator> = starts.to_vec();
                if all.is_empty() {
                    all.push(rho.op().clone());
                }
                let res = rains_rel_entropy_from(&rho, order, self.inner, &all, self.dims())?;
                let gradient = divergence_gradient_in_state(&rho, res.tau_star.op(), order);
                Ok(Evaluation {
                    value: res.value,
                    gradient,
                    inner: Some(res),
                })
            }
        }
    }

    fn warm(eval: &Evaluation) -> Vec<HermitianOperator> {
        eval.inner
            .as_ref()
            .map(|r| vec![r.tau_star.op().clone()])
            .unwrap_or_default()
    }
}

// Zeroes every coordinate outside `Σ_x a_x |x⟩|x⟩` and drops imaginary parts.
fn restrict_aligned(g: &mut [C64], d: usize) {
    for (i, x) in g.iter_mut().enumerate() {
        let (r, a) = (i / d, i % d);
        if r == a {
            x.im = 0.0;
        } else {
            *x = C64::new(0.0, 0.0);
        }
    }
}

fn normalize(v: &mut [C64]) {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

struct Ascent {
    v: Vec<C64>,
    eval: Evaluation,
    iterations: usize,
    converged: bool,
    residual: f64,
}

fn ascend(
    problem: &Problem<'_>,
    start: Vec<C64>,
    aligned: bool,
    cfg: &SolverConfig,
) -> Result<Ascent> {
    let d = problem.channel.d_in();
    let mut v = start;
    if aligned {
        restrict_aligned(&mut v, d);
    }
    normalize(&mut v);
    let mut eval = problem.evaluate(&v, &[])?;
    let mut step = cfg.initial_step;
    let mut converged = false;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        let mut wv = pullback(problem.channel, &eval.gradient, &v);
        if aligned {
            restrict_aligned(&mut wv, d);
        }
        let radial = re_dot(&v, &wv);
        let g: Vec<C64> = wv.iter().zip(&v).map(|(w, x)| (w - x * radial) * 2.0).collect();
        let gnorm2: f64 = g.iter().map(|x| x.norm_sqr()).sum();
        if gnorm2.sqrt() < 1e-10 {
            converged = true;
            residual = 0.0;
            break;
        }
        let warm = Problem::warm(&eval);
        let mut accepted = None;
        while step > 1e-10 {
            let mut cand: Vec<C64> = v.iter().zip(&g).map(|(x, y)| x + y * step).collect();
            normalize(&mut cand);
            let ce = problem.evaluate(&cand, &warm)?;
            if ce.value >= eval.value + 1e-4 * step * gnorm2 {
                accepted = Some((cand, ce));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, ce)) = accepted else {
            converged = true;
            residual = 0.0;
            break;
        };
        residual = (ce.value - eval.value).abs() / eval.value.abs().max(1.0);
        v = cand;
        eval = ce;
        if residual < cfg.tol {
            converged = true;
            break;
        }
        step = (step * 2.0).min(1e2);
    }
    Ok(Ascent {
        v,
        eval,
        iterations,
        converged,
        residual,
    })
}

fn starts<R: Rng + ?Sized>(d: usize, aligned: bool, cfg: &SolverConfig, rng: &mut R) -> Vec<Vec<C64>> {
    let mut out = Vec::with_capacity(cfg.random_starts + 2);
    out.push(max_entangled(d).expect("d ≥ 1").vec().to_vec());
    out.push(PureState::basis(d * d, 0).vec().to_vec());
    for _ in 0..cfg.random_starts {
        let mut v = random::unit_vector(d * d, rng);
        if aligned {
            for x in v.iter_mut() {
                *x = C64::new(x.norm(), 0.0);
            }
        }
        out.push(v);
    }
    out
}

fn check_dims(n: &QuantumChannel, objective: Objective) -> Result<()> {
    match objective {
        Objective::CoherentInfo if n.d_in() > MAX_CI_INPUT => Err(Error::DimensionOverflow {
            dim: n.d_in(),
            max: MAX_CI_INPUT,
        }),
        Objective::Rains(_) if n.d_in() * n.d_out() > MAX_RAINS_DIM => {
            Err(Error::DimensionOverflow {
                dim: n.d_in() * n.d_out(),
                max: MAX_RAINS_DIM,
            })
        }
        _ => Ok(()),
    }
}

fn solve<R: Rng + ?Sized>(
    n: &QuantumChannel,
    objective: Objective,
    reduction: Option<Reduction>,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<BoundReport> {
    let problem = Problem {
        channel: n,
        objective,
        inner: &cfg.inner,
    };
    let d = n.d_in();
    let mut notes = Vec::new();
    let (best, total_iters) = match reduction {
        Some(Reduction::FixedMaxEntangled) => {
            notes.push(String::from("input fixed to the maximally entangled state"));
            let v = max_entangled(d)?.vec().to_vec();
            let eval = problem.evaluate(&v, &[])?;
            (
                Ascent {
                    v,
                    eval,
                    iterations: 0,
                    converged: true,
                    residual: 0.0,
                },
                0,
            )
        }
        _ => {
            let aligned = reduction == Some(Reduction::AlignedSchmidt);
            if aligned {
                notes.push(String::from("aligned Schmidt inputs"));
            }
            let mut best: Option<Ascent> = None;
            let mut total = 0;
            for s in starts(d, aligned, cfg, rng) {
                let a = ascend(&problem, s, aligned, cfg)?;
                total += a.iterations;
                if best.as_ref().is_none_or(|b| a.eval.value > b.eval.value) {
                    best = Some(a);
                }
            }
            let best = best.expect("at least two starts");
            if !best.converged {
                notes.push(String::from("outer ascent hit the iteration cap"));
            }
            (best, total)
        }
    };
    let input = PureState::new(best.v.clone(), vec![d, d])?;
    let (value, tau, inner_converged) = match objective {
        Objective::CoherentInfo => (best.eval.value, None, true),
        Objective::Rains(order) => {
            // Final inner solve at the winning input with the full start set.
            let rho = output_of(n, &best.v);
            let mut all = Problem::warm(&best.eval);
            all.push(rho.op().clone());
            for _ in 0..cfg.inner.restarts {
                all.push(random::density(rho.dim(), rho.dim(), rng));
            }
            let res = rains_rel_entropy_from(&rho, order, &cfg.inner, &all, problem.dims())?;
            if !res.converged {
                notes.push(String::from("inner solver hit the iteration cap"));
            }
            (res.value, Some(res.tau_star), res.converged)
        }
    };
    Ok(BoundReport {
        quantity: objective.quantity(),
        value,
        alpha: objective.order(),
        input_state_certificate: input,
        tau_certificate: tau,
        iterations: total_iters,
        converged: best.converged && inner_converged,
        residual: best.residual,
        notes,
    })
}

/// `I_c(N) = max_φ I(R⟩B)_{N(φ)}` over pure inputs with `|R| = d_in`.
pub fn coherent_info_channel<R: Rng + ?Sized>(
    n: &QuantumChannel,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<BoundReport> {
    check_dims(n, Objective::CoherentInfo)?;
    solve(n, Objective::CoherentInfo, None, cfg, rng)
}

/// `R̃_α(N) = max_φ min_{τ∈PPT′(R:B)} D_α(N(φ)‖τ)`; `Order::LimitOne` gives
/// the Rains information `R(N)`.
pub fn rains_info_channel<R: Rng + ?Sized>(
    n: &QuantumChannel,
    order: Order,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<BoundReport> {
    check_dims(n, Objective::Rains(order))?;
    solve(n, Objective::Rains(order), None, cfg, rng)
}

/// Rains information using a declared covariance of the channel to shrink
/// the input search: aligned Schmidt inputs for dephasing-diagonal
/// covariance, the maximally entangled input for full unitary covariance.
pub fn covariant_rains_reduction<R: Rng + ?Sized>(
    n: &QuantumChannel,
    kind: Covariance,
    order: Order,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<BoundReport> {
    if !n.has_covariance(kind) {
        return Err(Error::Unsupported(format!(
            "channel '{}' does not declare {:?} covariance",
            n.name(),
            kind
        )));
    }
    check_dims(n, Objective::Rains(order))?;
    solve(n, Objective::Rains(order), Some(Reduction::of(kind)), cfg, rng)
}

/// [`covariant_rains_reduction`] under the strongest covariance the channel
/// declares, else [`rains_info_channel`]. `cfg.use_covariance = false`
/// forces the general path.
pub fn rains_info<R: Rng + ?Sized>(
    n: &QuantumChannel,
    order: Order,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<BoundReport> {
    if cfg.use_covariance {
        for kind in [Covariance::FullUnitaryGroup, Covariance::DephasingDiagonal] {
            if n.has_covariance(kind) {
                return covariant_rains_reduction(n, kind, order, cfg, rng);
            }
        }
    }
    rains_info_channel(n, order, cfg, rng)
}

/// Largest number of copies tried by [`regularized_rains`].
pub const MAX_COPIES: usize = 2;

/// `min_l R(N^{⊗l}) / l` over the `l ≤ MAX_COPIES` whose tensor power fits
/// the solver. The minimum over all `l` is out of reach, so this is an upper
/// bound on the regularized quantity at a declared truncation.
#[derive(Clone, Debug, Serialize)]
pub struct RegularizedRains {
    pub value: f64,
    /// `(l, R(N^{⊗l}) / l)` for each evaluated `l`.
    pub per_use: Vec<(usize, f64)>,
    /// Copy counts skipped for size.
    pub skipped: Vec<usize>,
    pub max_copies: usize,
    pub converged: bool,
}

pub fn regularized_rains<R: Rng + ?Sized>(
    n: &QuantumChannel,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<RegularizedRains> {
    let mut per_use = Vec::new();
    let mut skipped = Vec::new();
    let mut converged = true;
    for l in 1..=MAX_COPIES {
        let power = if l == 1 { Ok(n.clone()) } else { n.tensor_power(l) };
        let report = power.and_then(|p| rains_info(&p, Order::LimitOne, cfg, rng));
        match report {
            Ok(r) => {
                converged &= r.converged;
                per_use.push((l, r.value / l as f64));
            }
            Err(Error::DimensionOverflow { .. }) if l > 1 => skipped.push(l),
            Err(e) => return Err(e),
        }
    }
    let value = per_use.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(RegularizedRains {
        value,
        per_use,
        skipped,
        max_copies: MAX_COPIES,
        converged,
    })
}

/// Rains value of the output for one given input, with the inner certificate.
pub fn rains_at_input<R: Rng + ?Sized>(
    n: &QuantumChannel,
    input: &PureState,
    order: Order,
    cfg: &InnerConfig,
    rng: &mut R,
) -> Result<RainsStateResult> {
    if input.dims() != [n.d_in(), n.d_in()] {
        return Err(Error::DimensionMismatch {
            expected: n.d_in() * n.d_in(),
            found: input.vec().len(),
        });
    }
    let rho = output_of(n, input.vec());
    crate::ppt::rains_rel_entropy(&rho, order, cfg, rng)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("α must exceed 1, got {alpha}")))
    }
}

/// `2^{-((α-1)/α)(log M - R̃_α)}` clamped to `[0, 1]`; an upper bound on the
/// fidelity of any code of size `M` over a channel with Rényi Rains
/// information `R̃_α`.
pub fn fidelity_upper_bound(log_m: f64, renyi_rains: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let exponent = (alpha - 1.0) / alpha * (log_m - renyi_rains);
    Ok(2f64.powf(-exponent).clamp(0.0, 1.0))
}

/// Strong-converse exponent over an `α` grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exponent {
    pub value: f64,
    pub alpha: f64,
    /// `(α, R̃_α(N))` pairs used.
    pub grid: Vec<(f64, f64)>,
}

/// `max_α ((α-1)/α)(rate - R̃_α)` over precomputed `(α, R̃_α)` pairs.
pub fn sc_exponent_from_values(rate: f64, grid: &[(f64, f64)]) -> Result<Exponent> {
    if grid.is_empty() {
        return Err(Error::param("empty α grid"));
    }
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for &(alpha, r) in grid {
        check_alpha(alpha)?;
        let term = (alpha - 1.0) / alpha * (rate - r);
        if term > best.0 {
            best = (term, alpha);
        }
    }
    Ok(Exponent {
        value: best.0,
        alpha: best.1,
        grid: grid.to_vec(),
    })
}

/// Same as [`sc_exponent_from_values`], solving for each `R̃_α(N)`.
pub fn sc_exponent<R: Rng + ?Sized>(
    rate: f64,
    n: &QuantumChannel,
    alpha_grid: &[f64],
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<Exponent> {
    let mut grid = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let r = rains_info(n, Order::renyi(alpha)?, cfg, rng)?;
        grid.push((alpha, r.value));
    }
    sc_exponent_from_values(rate, &grid)
}

/// `n R̃_α + (α |A|² / (α-1)) log n`, an upper bound on `R̃_α(N^{⊗n})`.
pub fn weak_subadd_bound(single_copy: f64, n: usize, alpha: f64, d_in: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let a2 = (d_in * d_in) as f64;
    Ok(n as f64 * single_copy + alpha * a2 / (alpha - 1.0) * (n as f64).log2())
}

/// `log(1/(1-δ)) + 4δ (log(2 + √(d_in d_out / δ)))²`, the uniform gap between
/// `R̃_{1+δ}` and `R`.
pub fn continuity_gap(delta: f64, d_in: usize, d_out: usize) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("δ must lie in (0, 1), got {delta}")));
    }
    let dd = (d_in * d_out) as f64;
    let inner = (2.0 + (dd / delta).sqrt()).log2();
    Ok((1.0 / (1.0 - delta)).log2() + 4.0 * delta * inner * inner)
}

/// Upper bound on `(1/n) R(N^{⊗n})` from weak subadditivity at `α = 1 + δ`
/// and the continuity gap, with `δ = 1/√n`.
pub fn corollary1_bound(single_copy: f64, n: usize, d_in: usize, d_out: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::param("n must be at least 2"));
    }
    let nf = n as f64;
    let delta = 1.0 / nf.sqrt();
    let a2 = (d_in * d_in) as f64;
    Ok(single_copy
        + (1.0 + delta) / delta * a2 * nf.log2() / nf
        + continuity_gap(delta, d_in, d_out)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyFlags {
    /// `I_c ≤ R` within [`ORDER_TOL`].
    pub ic_below_rains: bool,
    /// `R ≤ R̃_{α₁} ≤ R̃_{α₂} ≤ …` within [`ORDER_TOL`].
    pub renyi_monotone: bool,
    pub all_converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyReport {
    pub channel: String,
    pub coherent_info: f64,
    pub rains: f64,
    /// `(α, R̃_α)` in increasing `α`.
    pub renyi: Vec<(f64, f64)>,
    pub flags: HierarchyFlags,
    pub violations: Vec<String>,
}

impl HierarchyReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Computes `I_c`, `R` and `R̃_α` over a grid and flags any break of
/// `I_c ≤ R ≤ R̃_α` (non-decreasing in `α`) beyond [`ORDER_TOL`]. The Rains
/// quantities go through [`rains_info`].
pub fn hierarchy_report<R: Rng + ?Sized>(
    n: &QuantumChannel,
    alpha_grid: &[f64],
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<HierarchyReport> {
    let mut grid: Vec<f64> = alpha_grid.to_vec();
    for &a in &grid {
        check_alpha(a)?;
    }
    grid.sort_by(f64::total_cmp);
    let ic = coherent_info_channel(n, cfg, rng)?;
    let r = rains_info(n, Order::LimitOne, cfg, rng)?;
    let mut converged = ic.converged && r.converged;
    let mut renyi = Vec::with_capacity(grid.len());
    for &a in &grid {
        let ra = rains_info(n, Order::Renyi(a), cfg, rng)?;
        converged &= ra.converged;
        renyi.push((a, ra.value));
    }
    Ok(hierarchy_from_values(n.name(), ic.value, r.value, renyi, converged))
}

/// Builds the report from values computed elsewhere.
pub fn hierarchy_from_values(
    channel: &str,
    coherent_info: f64,
    rains: f64,
    renyi: Vec<(f64, f64)>,
    all_converged: bool,
) -> HierarchyReport {
    let mut violations = Vec::new();
    let ic_below_rains = coherent_info <= rains + ORDER_TOL;
    if !ic_below_rains {
        violations.push(format!("I_c = {coherent_info} exceeds R = {rains}"));
    }
    let mut renyi_monotone = true;
    let mut prev = (1.0, rains);
    for &(a, v) in &renyi {
        if v < prev.1 - ORDER_TOL {
            renyi_monotone = false;
            violations.push(format!("value {v} at α = {a} is below {} at α = {}", prev.1, prev.0));
        }
        prev = (a, v);
    }
    HierarchyReport {
        channel: String::from(channel),
        coherent_info,
        rains,
        renyi,
        flags: HierarchyFlags {
            ic_below_rains,
            renyi_monotone,
            all_converged,
        },
        violations,
    }
}

/// A PPT′ element certifying `R(N) ≤ D(N(φ)‖τ)` can be re-checked by anyone
/// holding the report; this recomputes the divergence at the certificate.
pub fn recheck_certificate(
    n: &QuantumChannel,
    report: &BoundReport,
) -> Result<Option<f64>> {
    let (Some(tau), Some(order)) = (&report.tau_certificate, report.alpha) else {
        return Ok(None);
    };
    let rho = output_of(n, report.input_state_certificate.vec());
    let member = PptPrimeElement::certify(tau.op().clone(), tau.dims())?;
    Ok(Some(crate::ppt::divergence_at(&rho, member.op(), order)?))
}
