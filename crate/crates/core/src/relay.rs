//! Hop-by-hop GMA as a relayed reservation message. Each node sees only its
//! own matrix, the interfaces the message uses and the message itself.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_wiring, AllocationGraph, AllocationMatrix, InterfaceId, Path};
use crate::resource::Resource;

/// State carried from node to node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReservationMessage<R> {
    /// `Π M_i / Π conv_i`, the products running over the traversed hops and
    /// the egresses before the last one.
    pub running_product: R,
    /// Current scaling factor `f`.
    pub scale: R,
    /// `f · conv` at the egress of the last traversed hop.
    pub carried_conv: R,
    /// Hops traversed so far.
    pub hop_index: usize,
    pub threshold: R,
}

impl<R: Resource> ReservationMessage<R> {
    /// Message before the first hop.
    pub fn new(threshold: R) -> Self {
        Self {
            running_product: R::one(),
            scale: R::one(),
            carried_conv: R::zero(),
            hop_index: 0,
            threshold,
        }
    }

    /// Allocation of the traversed prefix.
    pub fn preliminary(&self) -> R {
        self.scale.clone() * self.running_product.clone()
    }
}

/// What a node does with a message.
#[derive(Clone, Debug, PartialEq)]
pub enum Forward<R> {
    Pass(ReservationMessage<R>),
    Drop(ReservationMessage<R>),
}

/// Per-node handler. It receives no graph handle, so it can use nothing
/// beyond its own matrix and the message.
pub fn handle_hop<R: Resource>(
    matrix: &AllocationMatrix<R>,
    ingress: InterfaceId,
    egress: InterfaceId,
    msg: ReservationMessage<R>,
) -> Forward<R> {
    let pair = matrix.get(ingress, egress).clone();
    let conv = matrix.convergent(egress).clone();
    let (scale, product) = if msg.hop_index == 0 {
        (R::one(), pair)
    } else if !msg.running_product.is_positive() || !pair.is_positive() {
        (msg.scale.clone(), R::zero())
    } else {
        // the previous egress convergent is carried_conv / scale
        let ratio = msg.carried_conv.clone() / matrix.divergent(ingress).clone();
        let scale = if ratio > R::one() { R::one() } else { ratio };
        let product = msg.running_product.clone() * pair * msg.scale.clone() / msg.carried_conv.clone();
        (scale, product)
    };
    let next = ReservationMessage {
        carried_conv: scale.clone() * conv,
        running_product: product,
        scale,
        hop_index: msg.hop_index + 1,
        threshold: msg.threshold,
    };
    if next.preliminary() < next.threshold {
        Forward::Drop(next)
    } else {
        Forward::Pass(next)
    }
}

/// One line per visited hop.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceLine<R> {
    pub node: String,
    pub prefix: R,
    pub scale: R,
}

impl<R: Resource> fmt::Display for TraceLine<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} prefix={} scale={}", self.node, self.prefix.to_text(), self.scale.to_text())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Reservation<R> {
    Granted {
        value: R,
        trace: Vec<TraceLine<R>>,
    },
    /// Dropped at 1-based `hop_index`, the first hop whose prefix allocation
    /// is below the threshold.
    Dropped {
        hop_index: usize,
        preliminary_value: R,
        trace: Vec<TraceLine<R>>,
    },
}

impl<R> Reservation<R> {
    pub fn trace(&self) -> &[TraceLine<R>] {
        match self {
            Reservation::Granted { trace, .. } | Reservation::Dropped { trace, .. } => trace,
        }
    }
}

/// Relays a reservation along a terminated path.
pub fn run_reservation<R: Resource>(graph: &AllocationGraph<R>, path: &Path, threshold: R) -> Result<Reservation<R>> {
    if threshold.is_invalid() || threshold < R::zero() {
        return Err(Error::InvalidAmount(format!("threshold {}", threshold.to_text())));
    }
    check_wiring(graph, path)?;
    if !path.is_terminated() {
        return Err(Error::MalformedPath {
            hop: path.len(),
            reason: "reservations need a terminated path".into(),
        });
    }
    let mut msg = ReservationMessage::new(threshold);
    let mut trace = Vec::with_capacity(path.len());
    for hop in &path.hops {
        let node = graph.node(hop.node);
        let forward = handle_hop(node.matrix(), hop.ingress, hop.egress, msg);
        let (Forward::Pass(next) | Forward::Drop(next)) = &forward;
        trace.push(TraceLine {
            node: node.name().to_string(),
            prefix: next.preliminary(),
            scale: next.scale.clone(),
        });
        match forward {
            Forward::Pass(next) => msg = next,
            Forward::Drop(next) => {
                return Ok(Reservation::Dropped {
                    hop_index: next.hop_index,
                    preliminary_value: next.preliminary(),
                    trace,
                })
            }
        }
    }
    Ok(Reservation::Granted {
        value: msg.preliminary(),
        trace,
    })
}
