//! Exact checks of the allocation bound, monotonicity and the telescoping
//! identity behind saturation.

use crate::allocators::{gma_direct, GmaAccumulator, HopRecord, PathView};
use crate::error::{Error, Result};
use crate::graph::{path_view, AllocationGraph, Hop, InterfaceId, NodeId, Path};
use crate::resource::Resource;

use super::hop_record;

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Violation<R> {
    pub node: NodeId,
    pub egress: InterfaceId,
    pub bound: usize,
    pub total: R,
    pub limit: R,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Report<R> {
    pub anchors: usize,
    /// Number of `(anchor, bound)` comparisons made.
    pub checks: usize,
    pub violations: Vec<Lemma1Violation<R>>,
}

impl<R> Lemma1Report<R> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every anchor `(n, local, j)` and every `X` in `1..=max_bound`, checks
/// that GMA allocations of the preliminary paths of length exactly `X` plus
/// those of the terminated paths of length at most `X`, all starting with the
/// anchor hop, sum to at most `M_{local,j}`.
pub fn check_lemma1_strict<R: Resource>(graph: &AllocationGraph<R>, max_bound: usize) -> Lemma1Report<R> {
    let mut report = Lemma1Report {
        anchors: 0,
        checks: 0,
        violations: Vec::new(),
    };
    for node in graph.node_ids() {
        let m = graph.node(node).matrix();
        for egress in m.interfaces() {
            report.anchors += 1;
            let limit = m.get(InterfaceId::Local, egress).clone();
            let mut terminated = vec![R::zero(); max_bound + 1];
            let mut preliminary = vec![R::zero(); max_bound + 1];
            if limit.is_positive() && max_bound > 0 {
                let first = Hop::new(node, InterfaceId::Local, egress);
                let acc = GmaAccumulator::start(&hop_record(graph, first));
                walk(graph, first, &acc, 1, max_bound, &mut terminated, &mut preliminary);
            }
            let mut cumulative = R::zero();
            for x in 1..=max_bound {
                cumulative = cumulative + terminated[x].clone();
                let total = cumulative.clone() + preliminary[x].clone();
                report.checks += 1;
                if total > limit {
                    report.violations.push(Lemma1Violation {
                        node,
                        egress,
                        bound: x,
                        total,
                        limit: limit.clone(),
                    });
                }
            }
        }
    }
    report
}

fn walk<R: Resource>(
    graph: &AllocationGraph<R>,
    hop: Hop,
    acc: &GmaAccumulator<R>,
    len: usize,
    max_len: usize,
    terminated: &mut [R],
    preliminary: &mut [R],
) {
    let value = acc.value();
    let InterfaceId::External(e) = hop.egress else {
        terminated[len] = terminated[len].clone() + value;
        return;
    };
    preliminary[len] = preliminary[len].clone() + value;
    if len == max_len {
        return;
    }
    let peer = graph.peer(hop.node, e);
    let ingress = InterfaceId::External(peer.interface);
    let m = graph.node(peer.node).matrix();
    for egress in m.interfaces() {
        if !m.get(ingress, egress).is_positive() {
            continue;
        }
        let next = Hop::new(peer.node, ingress, egress);
        let acc = acc.extended(&hop_record(graph, next));
        walk(graph, next, &acc, len + 1, max_len, terminated, preliminary);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityCheck<R> {
    pub before: R,
    pub after: R,
    pub ok: bool,
}

/// Raises the pair allocation of hop `hop` (0-based) of a simple path by
/// `delta` and compares GMA before and after. The raised graph may break
/// capacity constraints; only the allocation formula is under test.
pub fn check_monotonicity<R: Resource>(
    graph: &AllocationGraph<R>,
    path: &Path,
    hop: usize,
    delta: R,
) -> Result<MonotonicityCheck<R>> {
    if !path.is_simple() {
        return Err(Error::Precondition("monotonicity is checked on simple paths only".into()));
    }
    if delta.is_invalid() {
        return Err(Error::Precondition("delta must be non-negative".into()));
    }
    let h = *path
        .hops
        .get(hop)
        .ok_or_else(|| Error::Precondition(format!("path has no hop {hop}")))?;
    let before = gma_direct(&path_view(graph, path)?).value;
    let mut raised = graph.clone();
    let old = raised.pair_allocation(h.node, h.ingress, h.egress)?.clone();
    raised.set_pair_allocation(h.node, h.ingress, h.egress, old + delta)?;
    let after = gma_direct(&path_view(&raised, path)?).value;
    Ok(MonotonicityCheck {
        ok: after >= before,
        before,
        after,
    })
}

/// `prod a_i + sum_k (1 - a_k) * prod_{i>k} a_i`, which telescopes to one.
pub fn lemma3_identity<R: Resource>(a: &[R]) -> Result<R> {
    if a.is_empty() {
        return Err(Error::Precondition("need at least one factor".into()));
    }
    if a.iter().any(|v| !v.is_positive()) {
        return Err(Error::Precondition("factors must be strictly positive".into()));
    }
    let mut total = R::zero();
    // suffix = prod_{i>k} a_i while walking k downwards
    let mut suffix = R::one();
    for v in a.iter().rev() {
        total = total + (R::one() - v.clone()) * suffix.clone();
        suffix = suffix * v.clone();
    }
    Ok(total + suffix)
}

/// Copy of `view` with the triple `(div, M, conv)` of hop `hop` (0-based)
/// multiplied by `s`.
pub fn scale_hop<R: Resource>(view: &PathView<R>, hop: usize, s: R) -> Result<PathView<R>> {
    let mut hops = view.hops().to_vec();
    let h = hops
        .get_mut(hop)
        .ok_or_else(|| Error::Precondition(format!("view has no hop {hop}")))?;
    *h = HopRecord::new(
        h.pair_alloc.clone() * s.clone(),
        h.conv_out.clone() * s.clone(),
        h.div_in.clone() * s,
    );
    PathView::new(hops)
}
