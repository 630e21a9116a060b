//! Channel families with known structure: identity, qubit and generalized
//! dephasing, erasure and depolarizing channels.

#[allow(unused_imports)] // float math without std
use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::channel::{Covariance, QuantumChannel};
use crate::divergence::binary_entropy;
use crate::linalg::{herm_eig, ComplexMatrix, HermitianOperator, C64};
use crate::{Error, Result};

/// Norm tolerance for environment states.
pub const UNIT_TOL: f64 = 1e-10;

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// `(1-p) ρ + p Z ρ Z`.
pub fn qubit_dephasing(p: f64) -> Result<QuantumChannel> {
    check_prob("p", p)?;
    let k0 = ComplexMatrix::identity(2).scale((1.0 - p).sqrt());
    let k1 = ComplexMatrix::from_real_diag(&[1.0, -1.0]).scale(p.sqrt());
    Ok(QuantumChannel::new(vec![k0, k1])?
        .with_name(format!("qubit_dephasing(p={p})"))
        .with_covariance(&[Covariance::DephasingDiagonal]))
}

/// Channel with isometry `Σ_x |x⟩_B⟨x|_A ⊗ |ψ_x⟩_E`, so that
/// `N(ρ)_{xy} = ρ_{xy} ⟨ψ_y|ψ_x⟩`. One Kraus operator per environment
/// basis vector: `K_e = diag(⟨e|ψ_x⟩)`.
pub fn generalized_dephasing(env_states: &[Vec<C64>]) -> Result<QuantumChannel> {
    let d = env_states.len();
    if d == 0 {
        return Err(Error::param("at least one environment state is required"));
    }
    let d_env = env_states[0].len();
    for (x, psi) in env_states.iter().enumerate() {
        if psi.len() != d_env {
            return Err(Error::DimensionMismatch {
                expected: d_env,
                found: psi.len(),
            });
        }
        let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::param(format!(
                "environment state {x} has norm {norm}, expected 1"
            )));
        }
    }
    let kraus = (0..d_env)
        .map(|e| {
            let mut k = ComplexMatrix::zeros(d, d);
            for (x, psi) in env_states.iter().enumerate() {
                k[(x, x)] = psi[e];
            }
            k
        })
        .collect();
    Ok(QuantumChannel::new(kraus)?
        .with_name(format!("generalized_dephasing(d={d})"))
        .with_covariance(&[Covariance::DephasingDiagonal]))
}

/// `d` real unit vectors with pairwise overlap `λ` (Gram matrix
/// `(1-λ)I + λJ`), valid for `-1/(d-1) ≤ λ ≤ 1`.
pub fn symmetric_env_states(d: usize, overlap: f64) -> Result<Vec<Vec<C64>>> {
    if d == 0 {
        return Err(Error::param("d must be at least 1"));
    }
    let lower = if d > 1 { -1.0 / (d as f64 - 1.0) } else { -1.0 };
    if !(overlap >= lower - 1e-12 && overlap <= 1.0 + 1e-12) {
        return Err(Error::param(format!(
            "overlap {overlap} outside [{lower}, 1] for d = {d}"
        )));
    }
    let gram = ComplexMatrix::from_fn(d, d, |i, j| {
        C64::new(if i == j { 1.0 } else { overlap }, 0.0)
    });
    let root = herm_eig(&HermitianOperator::new(gram)?).compose(|l| l.max(0.0).sqrt());
    let states = (0..d)
        .map(|x| {
            let mut col: Vec<C64> = (0..d).map(|e| root[(e, x)]).collect();
            let norm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for c in col.iter_mut() {
                *c /= norm;
            }
            col
        })
        .collect();
    Ok(states)
}

/// `(1-p) ρ ⊕ p |e⟩⟨e|` with the input on the first `d` levels of a
/// `(d+1)`-level output and the flag `|e⟩` on the last.
pub fn erasure(d: usize, p: f64) -> Result<QuantumChannel> {
    if d < 2 {
        return Err(Error::param("erasure needs d ≥ 2"));
    }
    check_prob("p", p)?;
    let mut embed = ComplexMatrix::zeros(d + 1, d);
    for x in 0..d {
        embed[(x, x)] = C64::new((1.0 - p).sqrt(), 0.0);
    }
    let mut kraus = vec![embed];
    for x in 0..d {
        let mut k = ComplexMatrix::zeros(d + 1, d);
        k[(d, x)] = C64::new(p.sqrt(), 0.0);
        kraus.push(k);
    }
    Ok(QuantumChannel::new(kraus)?
        .with_name(format!("erasure(d={d},p={p})"))
        .with_covariance(&[Covariance::FullUnitaryGroup]))
}

/// Weyl operator `X^a Z^b` on `C^d`.
pub fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let omega = 2.0 * core::f64::consts::PI / d as f64;
    let mut w = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let phase = omega * ((b * j) % d) as f64;
        w[((j + a) % d, j)] = C64::new(phase.cos(), phase.sin());
    }
    w
}

/// `(1-q) ρ + q π_d`, from the Weyl twirl.
pub fn depolarizing(d: usize, q: f64) -> Result<QuantumChannel> {
    if d < 1 {
        return Err(Error::param("d must be at least 1"));
    }
    check_prob("q", q)?;
    let d2 = (d * d) as f64;
    let mut kraus = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let w = if a == 0 && b == 0 {
                (1.0 - q + q / d2).sqrt()
            } else {
                (q / d2).sqrt()
            };
            kraus.push(weyl(d, a, b).scale(w));
        }
    }
    Ok(QuantumChannel::new(kraus)?
        .with_name(format!("depolarizing(d={d},q={q})"))
        .with_covariance(&[Covariance::DephasingDiagonal, Covariance::FullUnitaryGroup]))
}

/// A channel family with its parameters, as read from configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ChannelFamily {
    Identity { d: usize },
    QubitDephasing { p: f64 },
    /// Environment states given directly, or as `d` states with a common
    /// real pairwise overlap.
    GeneralizedDephasing {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        env_states: Option<Vec<Vec<[f64; 2]>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        overlap: Option<f64>,
    },
    Erasure { d: usize, p: f64 },
    Depolarizing { d: usize, q: f64 },
}

/// Closed-form targets in bits; `None` marks an unknown value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticReference {
    pub coherent_info: Option<f64>,
    pub rains: Option<f64>,
    pub quantum_capacity: Option<f64>,
    pub q_pp: Option<f64>,
}

impl AnalyticReference {
    const UNKNOWN: Self = Self {
        coherent_info: None,
        rains: None,
        quantum_capacity: None,
        q_pp: None,
    };
}

impl ChannelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Identity { .. } => "identity",
            ChannelFamily::QubitDephasing { .. } => "qubit_dephasing",
            ChannelFamily::GeneralizedDephasing { .. } => "generalized_dephasing",
            ChannelFamily::Erasure { .. } => "erasure",
            ChannelFamily::Depolarizing { .. } => "depolarizing",
        }
    }

    pub fn build(&self) -> Result<QuantumChannel> {
        match self {
            ChannelFamily::Identity { d } => {
                if *d == 0 {
                    return Err(Error::param("d must be at least 1"));
                }
                Ok(QuantumChannel::identity(*d).with_name(format!("identity(d={d})")))
            }
            ChannelFamily::QubitDephasing { p } => qubit_dephasing(*p),
            ChannelFamily::GeneralizedDephasing {
                env_states,
                d,
                overlap,
            } => match (env_states, d, overlap) {
                (Some(states), None, None) => {
                    let states: Vec<Vec<C64>> = states
                        .iter()
                        .map(|s| s.iter().map(|&[re, im]| C64::new(re, im)).collect())
                        .collect();
                    generalized_dephasing(&states)
                }
                (None, Some(d), Some(l)) => Ok(generalized_dephasing(&symmetric_env_states(*d, *l)?)?
                    .with_name(format!("generalized_dephasing(d={d},overlap={l})"))),
                _ => Err(Error::param(
                    "generalized dephasing takes either env_states or both d and overlap",
                )),
            },
            ChannelFamily::Erasure { d, p } => erasure(*d, *p),
            ChannelFamily::Depolarizing { d, q } => depolarizing(*d, *q),
        }
    }

    /// Known values of `I_c`, `R`, `Q` and `Q_pp`.
    pub fn analytic_reference(&self) -> Result<AnalyticReference> {
        Ok(match self {
            ChannelFamily::Identity { d } => {
                let v = (*d as f64).log2();
                AnalyticReference {
                    coherent_info: Some(v),
                    rains: Some(v),
                    quantum_capacity: Some(v),
                    q_pp: Some(v),
                }
            }
            ChannelFamily::QubitDephasing { p } => {
                check_prob("p", *p)?;
                let v = 1.0 - binary_entropy(*p)?;
                AnalyticReference {
                    coherent_info: Some(v),
                    rains: Some(v),
                    quantum_capacity: Some(v),
                    q_pp: Some(v),
                }
            }
            ChannelFamily::Erasure { d, p } => {
                check_prob("p", *p)?;
                let log_d = (*d as f64).log2();
                let q = ((1.0 - 2.0 * p) * log_d).max(0.0);
                AnalyticReference {
                    coherent_info: Some(q),
                    rains: Some((1.0 - p) * log_d),
                    quantum_capacity: Some(q),
                    q_pp: Some((1.0 - p) * log_d),
                }
            }
            ChannelFamily::GeneralizedDephasing { .. } | ChannelFamily::Depolarizing { .. } => {
                AnalyticReference::UNKNOWN
            }
        })
    }

    /// Three parameter points per family, small enough for the general
    /// solver paths.
    pub fn sample_points() -> Vec<ChannelFamily> {
        let mut out = Vec::new();
        for d in [2, 3, 4] {
            out.push(ChannelFamily::Identity { d });
        }
        for p in [0.1, 0.25, 0.5] {
            out.push(ChannelFamily::QubitDephasing { p });
        }
        for overlap in [0.2, 0.5, 0.9] {
            out.push(ChannelFamily::GeneralizedDephasing {
                env_states: None,
                d: Some(3),
                overlap: Some(overlap),
            });
        }
        for p in [0.1, 0.25, 0.6] {
            out.push(ChannelFamily::Erasure { d: 2, p });
        }
        for q in [0.1, 0.3, 0.6] {
            out.push(ChannelFamily::Depolarizing { d: 2, q });
        }
        out
    }
}

/// Diagonal phase operator `Z(z) = Σ_x e^{2πi xz/d} |x⟩⟨x|`.
pub fn phase_operator(d: usize, z: usize) -> ComplexMatrix {
    weyl(d, 0, z)
}
