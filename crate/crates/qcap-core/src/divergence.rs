//! Entropies and divergences. All values are in bits.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::LN_2;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{
    divided_differences, frechet_apply, herm_eig, partial_trace_h, ComplexMatrix,
    EigenDecomposition, HermitianOperator,
};
use crate::state::{DensityOperator, STATE_TOL};
use crate::{Error, Result, SUPPORT_EPS};

/// Support-condition threshold on `tr(P_ρ K_σ)`.
pub const SUPPORT_OVERLAP_TOL: f64 = 1e-8;

/// Order of a divergence: the relative-entropy limit `α → 1` or a sandwiched
/// Rényi order `α > 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Order {
    LimitOne,
    Renyi(f64),
}

impl Order {
    pub fn renyi(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::param("Rényi order must be a finite number > 1"));
        }
        Ok(Order::Renyi(alpha))
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Order::LimitOne => None,
            Order::Renyi(a) => Some(*a),
        }
    }

    /// Numeric value used for ordering, with the limit mapped to 1.
    pub fn as_f64(&self) -> f64 {
        self.alpha().unwrap_or(1.0)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::LimitOne => f.write_str("limit-1"),
            Order::Renyi(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "limit-1" {
            return Ok(Order::LimitOne);
        }
        let a: f64 = s
            .parse()
            .map_err(|_| Error::param("order must be `limit-1` or a number > 1"))?;
        Order::renyi(a)
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Order::LimitOne => s.serialize_str("limit-1"),
            Order::Renyi(a) => s.serialize_f64(*a),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(alloc::string::String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(a) => Order::renyi(a),
            Raw::Str(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Divergence value; `+∞` when the support condition fails.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivergenceValue {
    #[serde(serialize_with = "serialize_extended")]
    pub value: f64,
    pub order: Order,
}

impl DivergenceValue {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> core::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

/// Shannon entropy of a spectrum, `0 log 0 = 0`.
pub fn spectrum_entropy(values: &[f64]) -> f64 {
    -values
        .iter()
        .filter(|&&l| l > SUPPORT_EPS)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

pub fn vn_entropy(rho: &DensityOperator) -> f64 {
    spectrum_entropy(&herm_eig(rho.op()).values).max(0.0)
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("probability must lie in [0, 1]"));
    }
    Ok(spectrum_entropy(&[p, 1.0 - p]))
}

fn check_psd(sigma: &HermitianOperator, eig: &EigenDecomposition) -> Result<()> {
    let scale = sigma.frobenius_norm().max(1.0);
    if eig.min_value() < -STATE_TOL * scale {
        return Err(Error::NotPositive {
            min_eig: eig.min_value(),
        });
    }
    Ok(())
}

// tr(P_ρ K_σ): mass of ρ's support inside σ's kernel.
fn support_violation(rho_eig: &EigenDecomposition, sigma_eig: &EigenDecomposition) -> f64 {
    let p_rho = rho_eig.projector(|l| l > SUPPORT_EPS);
    let k_sigma = sigma_eig.projector(|l| l <= SUPPORT_EPS);
    p_rho.dot(&k_sigma)
}

fn check_dims(rho: &DensityOperator, sigma: &HermitianOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

/// Umegaki relative entropy `D(ρ‖σ) = tr ρ(log ρ − log σ)`.
pub fn rel_entropy(rho: &DensityOperator, sigma: &HermitianOperator) -> Result<DivergenceValue> {
    check_dims(rho, sigma)?;
    let rho_eig = herm_eig(rho.op());
    let sigma_eig = herm_eig(sigma);
    check_psd(sigma, &sigma_eig)?;
    let value = if support_violation(&rho_eig, &sigma_eig) > SUPPORT_OVERLAP_TOL {
        f64::INFINITY
    } else {
        let log_sigma =
            sigma_eig.compose(|l| if l > SUPPORT_EPS { l.log2() } else { 0.0 });
        -spectrum_entropy(&rho_eig.values) - rho.op().dot(&log_sigma)
    };
    Ok(DivergenceValue {
        value,
        order: Order::LimitOne,
    })
}

/// Sandwiched Rényi relative entropy
/// `(1/(α−1)) log tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α]`; dispatches to
/// [`rel_entropy`] for [`Order::LimitOne`].
pub fn sandwiched_renyi(
    rho: &DensityOperator,
    sigma: &HermitianOperator,
    order: Order,
) -> Result<DivergenceValue> {
    let alpha = match order {
        Order::LimitOne => return rel_entropy(rho, sigma),
        Order::Renyi(a) if a > 1.0 => a,
        Order::Renyi(_) => return Err(Error::param("Rényi order must be > 1")),
    };
    check_dims(rho, sigma)?;
    let rho_eig = herm_eig(rho.op());
    let sigma_eig = herm_eig(sigma);
    check_psd(sigma, &sigma_eig)?;
    if support_violation(&rho_eig, &sigma_eig) > SUPPORT_OVERLAP_TOL {
        return Ok(DivergenceValue {
            value: f64::INFINITY,
            order,
        });
    }
    let gamma = (1.0 - alpha) / (2.0 * alpha);
    let s = sigma_eig.compose(|l| if l > SUPPORT_EPS { l.powf(gamma) } else { 0.0 });
    let x = HermitianOperator::from_hermitian_part(&s.sandwich(rho.op()));
    let q: f64 = herm_eig(&x)
        .values
        .iter()
        .map(|&m| m.max(0.0).powf(alpha))
        .sum();
    Ok(DivergenceValue {
        value: q.log2() / (alpha - 1.0),
        order,
    })
}

/// Coherent information `I(R⟩B) = H(B) − H(RB)` of a bipartite state.
pub fn coherent_info_state(rho_rb: &DensityOperator) -> Result<f64> {
    let b = rho_rb.reduce(1)?;
    Ok(vn_entropy(&b) - vn_entropy(rho_rb))
}

/// Gradient of `I(R⟩B)` with respect to the bipartite state, up to a
/// multiple of the identity.
pub fn coherent_info_gradient(rho_rb: &DensityOperator) -> Result<(f64, HermitianOperator)> {
    let dims = rho_rb.bipartite_dims()?;
    let eig_rb = herm_eig(rho_rb.op());
    let b = partial_trace_h(rho_rb.op(), dims, 1)?;
    let eig_b = herm_eig(&b);
    let value = spectrum_entropy(&eig_b.values) - spectrum_entropy(&eig_rb.values);
    let log_rb = eig_rb.compose(clamped_log2);
    let log_b = eig_b.compose(clamped_log2);
    let lifted = crate::linalg::kron(&ComplexMatrix::identity(dims[0]), &log_b);
    let grad = HermitianOperator::from_hermitian_part(&(log_rb.as_matrix() - &lifted));
    Ok((value, grad))
}

fn clamped_log2(l: f64) -> f64 {
    l.max(GRADIENT_LOG_FLOOR).log2()
}

const GRADIENT_LOG_FLOOR: f64 = 1e-12;

/// Evaluates `σ ↦ D_α(ρ‖σ)` and its gradient for a fixed first argument.
/// `σ` must be positive definite; callers floor it.
#[derive(Clone, Debug)]
pub struct StateDivergence {
    rho: HermitianOperator,
    neg_entropy: f64,
    order: Order,
}

impl StateDivergence {
    pub fn new(rho: &DensityOperator, order: Order) -> Self {
        let neg_entropy = -spectrum_entropy(&herm_eig(rho.op()).values);
        Self {
            rho: rho.op().clone(),
            neg_entropy,
            order,
        }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn value(&self, sigma: &HermitianOperator) -> f64 {
        let eig = herm_eig(sigma);
        match self.order {
            Order::LimitOne => {
                let log_sigma = eig.compose(f64::log2);
                self.neg_entropy - self.rho.dot(&log_sigma)
            }
            Order::Renyi(alpha) => {
                let (q, _, _) = self.renyi_parts(&eig, alpha);
                q.log2() / (alpha - 1.0)
            }
        }
    }

    // Returns (Q, S = σ^γ, X = SρS eigendecomposition).
    fn renyi_parts(
        &self,
        eig: &EigenDecomposition,
        alpha: f64,
    ) -> (f64, HermitianOperator, EigenDecomposition) {
        let gamma = (1.0 - alpha) / (2.0 * alpha);
        let s = eig.compose(|l| l.powf(gamma));
        let x = HermitianOperator::from_hermitian_part(&s.sandwich(&self.rho));
        let x_eig = herm_eig(&x);
        let q = x_eig.values.iter().map(|&m| m.max(0.0).powf(alpha)).sum();
        (q, s, x_eig)
    }

    /// Value and gradient with respect to `σ` (real inner product
    /// `tr(G E)`).
    pub fn value_and_gradient(&self, sigma: &HermitianOperator) -> (f64, HermitianOperator) {
        let eig = herm_eig(sigma);
        match self.order {
            Order::LimitOne => {
                let log_sigma = eig.compose(f64::log2);
                let value = self.neg_entropy - self.rho.dot(&log_sigma);
                let gamma = divided_differences(&eig.values, f64::ln, |l| 1.0 / l);
                let g = frechet_apply(&eig, &gamma, &self.rho).scale(-1.0 / LN_2);
                (value, HermitianOperator::from_hermitian_part(&g))
            }
            Order::Renyi(alpha) => {
                let (q, s, x_eig) = self.renyi_parts(&eig, alpha);
                let value = q.log2() / (alpha - 1.0);
                let x_pow = x_eig.compose(|m| m.max(0.0).powf(alpha - 1.0));
                let half = self.rho.matmul(&s).matmul(&x_pow);
                let g_inner = &half + &half.adjoint();
                let gamma_exp = (1.0 - alpha) / (2.0 * alpha);
                let dd = divided_differences(
                    &eig.values,
                    |l| l.powf(gamma_exp),
                    |l| gamma_exp * l.powf(gamma_exp - 1.0),
                );
                let dq = frechet_apply(&eig, &dd, &g_inner).scale(alpha);
                let g = dq.scale(1.0 / ((alpha - 1.0) * q * LN_2));
                (value, HermitianOperator::from_hermitian_part(&g))
            }
        }
    }
}

/// Gradient of `ρ ↦ D_α(ρ‖σ)` at fixed positive definite `σ`, up to a
/// multiple of the identity.
pub fn divergence_gradient_in_state(
    rho: &DensityOperator,
    sigma: &HermitianOperator,
    order: Order,
) -> HermitianOperator {
    let sigma_eig = herm_eig(sigma);
    match order {
        Order::LimitOne => {
            let log_rho = herm_eig(rho.op()).compose(clamped_log2);
            let log_sigma = sigma_eig.compose(f64::log2);
            log_rho.sub(&log_sigma)
        }
        Order::Renyi(alpha) => {
            let gamma = (1.0 - alpha) / (2.0 * alpha);
            let s = sigma_eig.compose(|l| l.powf(gamma));
            let x = HermitianOperator::from_hermitian_part(&s.sandwich(rho.op()));
            let x_eig = herm_eig(&x);
            let q: f64 = x_eig.values.iter().map(|&m| m.max(0.0).powf(alpha)).sum();
            let x_pow = x_eig.compose(|m| m.max(0.0).powf(alpha - 1.0));
            let g = s.matmul(&x_pow).matmul(&s);
            HermitianOperator::from_hermitian_part(&g.scale(alpha / ((alpha - 1.0) * q * LN_2)))
        }
    }
}

/// Values of the binary entropy over a list of probabilities.
pub fn binary_entropies(ps: &[f64]) -> Result<Vec<f64>> {
    ps.iter().map(|&p| binary_entropy(p)).collect()
}
