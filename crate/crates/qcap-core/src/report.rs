//! Result records shared by the channel-level solvers.

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::divergence::Order;
use crate::ppt::PptPrimeElement;
use crate::state::PureState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    CoherentInfo,
    RainsInfo,
    RenyiRainsInfo,
}

impl Quantity {
    /// The Rains quantity matching `order`.
    pub fn rains(order: Order) -> Self {
        match order {
            Order::LimitOne => Quantity::RainsInfo,
            Order::Renyi(_) => Quantity::RenyiRainsInfo,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::CoherentInfo => "coherent_info",
            Quantity::RainsInfo => "rains_info",
            Quantity::RenyiRainsInfo => "renyi_rains_info",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed channel quantity with the certificates behind it.
///
/// `input_state_certificate` is the best input `φ_RA` found; evaluating the
/// quantity at it reproduces `value`. For Rains quantities
/// `tau_certificate` is a certified PPT′ point at which the divergence of
/// the output equals `value`, so `value` is an upper bound on the inner
/// minimum at that input.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub quantity: Quantity,
    pub value: f64,
    /// `None` for coherent information.
    pub alpha: Option<Order>,
    pub input_state_certificate: PureState,
    pub tau_certificate: Option<PptPrimeElement>,
    pub iterations: usize,
    pub converged: bool,
    /// Last relative objective change of the outer ascent.
    pub residual: f64,
    /// Short notes such as the reduction used.
    pub notes: alloc::vec::Vec<alloc::string::String>,
}
