//! The PPT′ set `{τ ≥ 0 : ‖T_B(τ)‖₁ ≤ 1}`, its Euclidean projection, and
//! the inner minimization `min_{τ∈PPT′} D_α(ρ‖τ)`.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::divergence::{sandwiched_renyi, Order, StateDivergence};
use crate::linalg::{
    herm_eig, partial_transpose_h, project_l1_ball, HermitianOperator,
};
use crate::random;
use crate::state::DensityOperator;
use crate::{Error, Result};

/// Membership tolerance for both PPT′ constraints.
pub const PPT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptMembership {
    pub min_eig: f64,
    pub pt_trace_norm: f64,
    pub trace: f64,
    pub member: bool,
}

pub fn is_ppt_prime(tau: &HermitianOperator, dims: [usize; 2]) -> Result<PptMembership> {
    let min_eig = herm_eig(tau).min_value();
    let pt = partial_transpose_h(tau, dims)?;
    let pt_trace_norm: f64 = herm_eig(&pt).values.iter().map(|l| l.abs()).sum();
    Ok(PptMembership {
        min_eig,
        pt_trace_norm,
        trace: tau.trace_re(),
        member: min_eig >= -PPT_TOL && pt_trace_norm <= 1.0 + PPT_TOL,
    })
}

/// A certified member of PPT′.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PptPrimeElement {
    op: HermitianOperator,
    dims: [usize; 2],
    min_eig: f64,
    pt_trace_norm: f64,
}

impl PptPrimeElement {
    /// Checks membership and attaches the certificate.
    pub fn certify(op: HermitianOperator, dims: [usize; 2]) -> Result<Self> {
        let m = is_ppt_prime(&op, dims)?;
        if !m.member {
            return Err(Error::param(alloc::format!(
                "operator is not in PPT' (min eigenvalue {:e}, ‖T_B τ‖₁ = {})",
                m.min_eig, m.pt_trace_norm
            )));
        }
        Ok(Self {
            op,
            dims,
            min_eig: m.min_eig,
            pt_trace_norm: m.pt_trace_norm,
        })
    }

    /// `π_A ⊗ π_B`, an interior point.
    pub fn maximally_mixed(dims: [usize; 2]) -> Self {
        let n = dims[0] * dims[1];
        Self {
            op: HermitianOperator::identity(n).scale(1.0 / n as f64),
            dims,
            min_eig: 1.0 / n as f64,
            pt_trace_norm: 1.0,
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn min_eig(&self) -> f64 {
        self.min_eig
    }

    pub fn pt_trace_norm(&self) -> f64 {
        self.pt_trace_norm
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionConfig {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            tol: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Projection {
    pub element: PptPrimeElement,
    pub iterations: usize,
    pub converged: bool,
}

fn project_psd(x: &HermitianOperator) -> HermitianOperator {
    let eig = herm_eig(x);
    if eig.min_value() >= 0.0 {
        return x.clone();
    }
    eig.compose(|l| l.max(0.0))
}

fn project_pt_ball(y: &HermitianOperator, dims: [usize; 2]) -> HermitianOperator {
    // T_B permutes matrix entries, so it is a Frobenius isometry and the
    // projection can be done on T_B(y).
    let z = partial_transpose_h(y, dims).expect("dims checked by caller");
    let eig = herm_eig(&z);
    let norm: f64 = eig.values.iter().map(|l| l.abs()).sum();
    if norm <= 1.0 {
        return y.clone();
    }
    let shrunk = project_l1_ball(&eig.values, 1.0);
    partial_transpose_h(&eig.compose_values(&shrunk), dims).expect("dims checked by caller")
}

// PSD projection followed by rescaling into the trace-norm ball; always
// lands in PPT′ exactly.
fn repair(x: &HermitianOperator, dims: [usize; 2]) -> HermitianOperator {
    let psd = project_psd(x);
    let pt = partial_transpose_h(&psd, dims).expect("dims checked by caller");
    let norm: f64 = herm_eig(&pt).values.iter().map(|l| l.abs()).sum();
    if norm > 1.0 {
        psd.scale(1.0 / norm)
    } else {
        psd
    }
}

/// Frobenius-nearest point of PPT′ by Dykstra's alternating projections
/// between the PSD cone and the set `{‖T_B τ‖₁ ≤ 1}`.
pub fn project_ppt_prime(x: &HermitianOperator, dims: [usize; 2]) -> Result<Projection> {
    project_ppt_prime_with(x, dims, &ProjectionConfig::default())
}

pub fn project_ppt_prime_with(
    x: &HermitianOperator,
    dims: [usize; 2],
    cfg: &ProjectionConfig,
) -> Result<Projection> {
    project_warm(x, dims, cfg, &mut None)
}

// Dykstra correction terms carried between nearby projections. Any starting
// correction pair converges; a good one saves most of the iterations.
type Corrections = Option<(HermitianOperator, HermitianOperator)>;

fn project_warm(
    x: &HermitianOperator,
    dims: [usize; 2],
    cfg: &ProjectionConfig,
    warm: &mut Corrections,
) -> Result<Projection> {
    if x.dim() != dims[0] * dims[1] {
        return Err(Error::DimensionMismatch {
            expected: dims[0] * dims[1],
            found: x.dim(),
        });
    }
    let n = x.dim();
    let (mut p, mut q) = warm
        .take()
        .unwrap_or_else(|| (HermitianOperator::zeros(n), HermitianOperator::zeros(n)));
    let mut cur = x.sub(&p).sub(&q);
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=cfg.max_iter {
        iterations = it;
        let y_in = cur.add(&p);
        let y = project_psd(&y_in);
        p = y_in.sub(&y);
        let z_in = y.add(&q);
        let next = project_pt_ball(&z_in, dims);
        q = z_in.sub(&next);
        let change = next.sub(&cur).frobenius_norm();
        let gap = next.sub(&y).frobenius_norm();
        cur = next;
        if change <= cfg.tol && gap <= cfg.tol {
            converged = true;
            break;
        }
    }
    *warm = Some((p, q));
    let op = repair(&cur, dims);
    let element = PptPrimeElement::certify(op, dims)?;
    Ok(Projection {
        element,
        iterations,
        converged,
    })
}

/// `tr{Φ_M τ}` for the maximally entangled state of Schmidt rank `m`
/// embedded in the first `m` levels of each factor. Members of PPT′ satisfy
/// `tr{Φ_M τ} ≤ 1/M`.
pub fn max_entangled_overlap(tau: &PptPrimeElement, m: usize) -> Result<f64> {
    let [da, db] = tau.dims();
    if m == 0 || m > da || m > db {
        return Err(Error::param("Schmidt rank exceeds a local dimension"));
    }
    let op = tau.op();
    let mut acc = 0.0;
    for x in 0..m {
        for y in 0..m {
            acc += op[(x * db + x, y * db + y)].re;
        }
    }
    let overlap = acc / m as f64;
    debug_assert!(overlap <= 1.0 / m as f64 + PPT_TOL);
    Ok(overlap)
}

/// Inner-solver settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerConfig {
    /// Stop when the relative objective change falls below this.
    pub tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
    /// `ε` in `τ + εI` during optimization.
    pub floor: f64,
    /// First floor of the continuation; shrinks by 100x per stage down to
    /// `floor`.
    pub floor_start: f64,
    /// Random PSD restarts in addition to the projected input.
    pub restarts: usize,
    /// Projection budget per descent step. Candidates are repaired into
    /// PPT′ whatever the budget, so a small cap only costs step quality.
    pub projection: ProjectionConfig,
    /// Weight of `π_A ⊗ π_B` mixed into the returned certificate.
    pub certificate_mix: f64,
}

impl Default for InnerConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 5000,
            initial_step: 0.1,
            floor: 1e-9,
            floor_start: 1e-2,
            restarts: 4,
            projection: ProjectionConfig {
                max_iter: 50,
                ..ProjectionConfig::default()
            },
            certificate_mix: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RainsStateResult {
    pub value: f64,
    pub tau_star: PptPrimeElement,
    pub iterations: usize,
    pub converged: bool,
    pub order: Order,
}

struct Descent {
    tau: HermitianOperator,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn floored(tau: &HermitianOperator, eps: f64) -> HermitianOperator {
    tau.add(&HermitianOperator::identity(tau.dim()).scale(eps))
}

// Projected gradient descent with backtracking on the sufficient-decrease
// condition of the projected step.
fn descend(
    f: &StateDivergence,
    dims: [usize; 2],
    start: HermitianOperator,
    cfg: &InnerConfig,
) -> Result<Descent> {
    let mut tau = start;
    let mut warm: Corrections = None;
    // The floor starts large and shrinks; this keeps early iterates away
    // from singular points where plain projected steps stall.
    let mut eps = cfg.floor_start.max(cfg.floor);
    let (mut value, mut grad) = f.value_and_gradient(&floored(&tau, eps));
    let mut step = cfg.initial_step;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        let mut accepted = None;
        while step > 1e-14 {
            let trial = tau.sub(&grad.scale(step));
            let cand = project_warm(&trial, dims, &cfg.projection, &mut warm)?
                .element
                .op
                .clone();
            let diff = cand.sub(&tau);
            let dist2 = diff.dot(&diff);
            if dist2 == 0.0 {
                break;
            }
            let cand_value = f.value(&floored(&cand, eps));
            let model = value + grad.dot(&diff) + dist2 / (2.0 * step);
            // With an exact projection the model already sits below `value`;
            // a truncated one can miss that, so ask for descent as well.
            let slack = 1e-15 * value.abs().max(1.0);
            if cand_value.is_finite() && cand_value <= model.min(value) + slack {
                accepted = Some((cand, cand_value));
                break;
            }
            step *= 0.5;
        }
        let mut moved = None;
        let rel = match accepted {
            Some((cand, cand_value)) => {
                let rel = (value - cand_value).abs() / value.abs().max(1.0);
                moved = Some(cand.sub(&tau));
                tau = cand;
                rel
            }
            None => 0.0,
        };
        let stage_done = rel < cfg.tol;
        if stage_done {
            if eps <= cfg.floor {
                converged = true;
                let (v, _) = f.value_and_gradient(&floored(&tau, eps));
                value = v;
                break;
            }
            eps = (eps * 1e-2).max(cfg.floor);
        }
        let (v, g) = f.value_and_gradient(&floored(&tau, eps));
        // Barzilai-Borwein trial step, falling back to doubling.
        step = match moved {
            Some(s) if !stage_done => {
                let y = g.sub(&grad);
                let sy = s.dot(&y);
                if sy > 0.0 {
                    (s.dot(&s) / sy).clamp(1e-10, 1e3)
                } else {
                    (step * 2.0).min(1e3)
                }
            }
            _ => cfg.initial_step,
        };
        value = v;
        grad = g;
    }
    Ok(Descent {
        tau,
        value,
        iterations,
        converged,
    })
}

/// Divergence of `ρ` against `τ` with no smoothing.
pub fn divergence_at(rho: &DensityOperator, tau: &HermitianOperator, order: Order) -> Result<f64> {
    Ok(sandwiched_renyi(rho, tau, order)?.value)
}

/// `min_{τ∈PPT′} D_α(ρ‖τ)` starting from the projection of `ρ` plus
/// `cfg.restarts` random points.
pub fn rains_rel_entropy<R: Rng + ?Sized>(
    rho: &DensityOperator,
    order: Order,
    cfg: &InnerConfig,
    rng: &mut R,
) -> Result<RainsStateResult> {
    let dims = rho.bipartite_dims()?;
    let n = rho.dim();
    let mut starts = vec![rho.op().clone()];
    for _ in 0..cfg.restarts {
        starts.push(random::density(n, n, rng));
    }
    rains_rel_entropy_from(rho, order, cfg, &starts, dims)
}

/// Same as [`rains_rel_entropy`] with caller-chosen starting points (each is
/// projected onto PPT′ first). The best end point wins.
pub fn rains_rel_entropy_from(
    rho: &DensityOperator,
    order: Order,
    cfg: &InnerConfig,
    starts: &[HermitianOperator],
    dims: [usize; 2],
) -> Result<RainsStateResult> {
    if starts.is_empty() {
        return Err(Error::param("at least one starting point is required"));
    }
    let f = StateDivergence::new(rho, order);
    let mut best: Option<Descent> = None;
    let mut total_iters = 0;
    for s in starts {
        let start = project_ppt_prime_with(s, dims, &cfg.projection)?
            .element
            .op
            .clone();
        let d = descend(&f, dims, start, cfg)?;
        total_iters += d.iterations;
        if best.as_ref().is_none_or(|b| d.value < b.value) {
            best = Some(d);
        }
    }
    let best = best.expect("non-empty starts");
    let interior = PptPrimeElement::maximally_mixed(dims);
    let mixed = best
        .tau
        .scale(1.0 - cfg.certificate_mix)
        .add(&interior.op.scale(cfg.certificate_mix));
    let tau_star = PptPrimeElement::certify(mixed, dims)?;
    let value = divergence_at(rho, tau_star.op(), order)?;
    Ok(RainsStateResult {
        value,
        tau_star,
        iterations: total_iters,
        converged: best.converged,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, ComplexMatrix};
    use crate::state::{max_entangled, PureState};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn phi(d: usize) -> DensityOperator {
        max_entangled(d).unwrap().density()
    }

    fn quick() -> InnerConfig {
        InnerConfig {
            restarts: 1,
            ..InnerConfig::default()
        }
    }

    #[test]
    fn membership_examples() {
        let prod = PureState::basis(2, 0).tensor(&PureState::basis(2, 1)).density();
        let m = is_ppt_prime(prod.op(), [2, 2]).unwrap();
        assert!(m.member);
        assert!((m.pt_trace_norm - 1.0).abs() < 1e-12);

        let m = is_ppt_prime(phi(2).op(), [2, 2]).unwrap();
        assert!(!m.member);
        assert!((m.pt_trace_norm - 2.0).abs() < 1e-12);

        let half = phi(2).op().scale(0.5);
        assert!(is_ppt_prime(&half, [2, 2]).unwrap().member);
        assert!(PptPrimeElement::certify(phi(2).into_op(), [2, 2]).is_err());
    }

    #[test]
    fn projection_lands_inside_and_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x = random::hermitian(6, &mut rng);
            let p = project_ppt_prime(&x, [2, 3]).unwrap();
            let m = is_ppt_prime(p.element.op(), [2, 3]).unwrap();
            assert!(m.member);
            let again = project_ppt_prime(p.element.op(), [2, 3]).unwrap();
            assert!(again.element.op().max_abs_diff(p.element.op()) < 1e-7);
        }
    }

    #[test]
    fn projection_special_points() {
        let p = project_ppt_prime(phi(2).op(), [2, 2]).unwrap();
        assert!(max_entangled_overlap(&p.element, 2).unwrap() <= 0.5 + 1e-6);
        let neg = HermitianOperator::identity(4).scale(-1.0);
        let p = project_ppt_prime(&neg, [2, 2]).unwrap();
        assert!(p.element.op().frobenius_norm() < 1e-12);
        let inside = HermitianOperator::identity(4).scale(0.25);
        let p = project_ppt_prime(&inside, [2, 2]).unwrap();
        assert!(p.element.op().max_abs_diff(&inside) < 1e-12);
    }

    #[test]
    fn overlap_examples() {
        let half = PptPrimeElement::certify(phi(2).op().scale(0.5), [2, 2]).unwrap();
        assert!((max_entangled_overlap(&half, 2).unwrap() - 0.5).abs() < 1e-12);
        let mixed = PptPrimeElement::maximally_mixed([2, 2]);
        assert!((max_entangled_overlap(&mixed, 2).unwrap() - 0.25).abs() < 1e-12);
        assert!(max_entangled_overlap(&mixed, 3).is_err());
    }

    #[test]
    fn random_members_respect_overlap_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..200 {
            let (da, db) = if i % 2 == 0 { (2, 2) } else { (3, 3) };
            let x = random::hermitian(da * db, &mut rng);
            let cfg = ProjectionConfig {
                max_iter: 30,
                ..ProjectionConfig::default()
            };
            let el = project_ppt_prime_with(&x, [da, db], &cfg).unwrap().element;
            for m in 1..=da.min(db) {
                let o = max_entangled_overlap(&el, m).unwrap();
                assert!(o <= 1.0 / m as f64 + 1e-8, "overlap {o} at m={m}");
            }
        }
    }

    #[test]
    fn solver_on_separable_state_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random::density(2, 2, &mut rng);
        let b = random::density(3, 3, &mut rng);
        let rho = DensityOperator::new(
            HermitianOperator::from_hermitian_part(&kron(&a, &b)),
            vec![2, 3],
        )
        .unwrap();
        for order in [Order::LimitOne, Order::Renyi(2.0)] {
            let r = rains_rel_entropy(&rho, order, &quick(), &mut rng).unwrap();
            assert!(r.value.abs() < 1e-6, "{order}: {}", r.value);
            assert!(r.converged);
        }
    }

    #[test]
    fn solver_on_maximally_entangled_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2usize, 3] {
            for order in [Order::LimitOne, Order::Renyi(1.5)] {
                let r = rains_rel_entropy(&phi(d), order, &quick(), &mut rng).unwrap();
                let want = (d as f64).log2();
                assert!((r.value - want).abs() < 1e-6, "d={d} {order}: {}", r.value);
                let m = is_ppt_prime(r.tau_star.op(), [d, d]).unwrap();
                assert!(m.member);
            }
        }
    }

    #[test]
    fn solver_on_dephased_bell_state_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut op = phi(2).into_op().into_matrix();
        op[(0, 3)] = 0.0.into();
        op[(3, 0)] = 0.0.into();
        let rho = DensityOperator::new(HermitianOperator::new(op).unwrap(), vec![2, 2]).unwrap();
        let r = rains_rel_entropy(&rho, Order::LimitOne, &quick(), &mut rng).unwrap();
        assert!(r.value.abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn solver_value_matches_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = DensityOperator::new(random::density(4, 2, &mut rng), vec![2, 2]).unwrap();
        let r = rains_rel_entropy(&rho, Order::Renyi(2.0), &quick(), &mut rng).unwrap();
        let direct = divergence_at(&rho, r.tau_star.op(), Order::Renyi(2.0)).unwrap();
        assert!((direct - r.value).abs() < 1e-12);
        assert!(r.value >= -1e-9);
    }

    #[test]
    fn solver_is_local_unitary_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = DensityOperator::new(random::density(4, 2, &mut rng), vec![2, 2]).unwrap();
        let u: ComplexMatrix = kron(&random::unitary(2, &mut rng), &random::unitary(2, &mut rng));
        let rotated = rho.conjugate_by(&u);
        let a = rains_rel_entropy(&rho, Order::LimitOne, &quick(), &mut rng).unwrap();
        let b = rains_rel_entropy(&rotated, Order::LimitOne, &quick(), &mut rng).unwrap();
        assert!((a.value - b.value).abs() < 1e-5, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn solver_is_monotone_in_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = DensityOperator::new(random::density(4, 2, &mut rng), vec![2, 2]).unwrap();
        let mut last = f64::NEG_INFINITY;
        for order in [Order::LimitOne, Order::Renyi(1.5), Order::Renyi(2.0), Order::Renyi(3.0)] {
            let v = rains_rel_entropy(&rho, order, &quick(), &mut rng).unwrap().value;
            assert!(v >= last - 1e-6, "{order}: {v} < {last}");
            last = v;
        }
    }
}
