//! Saturating-graph construction: a graph around a path in which GMA
//! allocations through the minimizing hop use up its pair allocation exactly.

use crate::allocators::gma_direct;
use crate::error::{Error, Result};
use crate::graph::{
    classify_path, path_view, AllocationGraph, Endpoint, GraphBuilder, Hop, InterfaceId, NodeId, Path, Termination,
    Validity,
};
use crate::resource::Resource;

use super::enumerate::{enumerate_paths, EnumerationMode, PathFilter};

/// Name of the external interface of every leaf node.
pub const LEAF_INTERFACE: &str = "x";

#[derive(Clone, Debug, PartialEq)]
pub struct SaturatingGraph<R> {
    pub graph: AllocationGraph<R>,
    /// Image of the original path: hop `k` runs through copy `k`.
    pub path: Path,
    /// 1-based hop index minimizing GMA on the path.
    pub minimizer: usize,
}

/// Builds the saturating graph of a valid terminated path.
///
/// Copy `k` of the `k`-th on-path node is named `{node}#{k}` and keeps the
/// original interfaces, matrix and capacities; only the links to the previous
/// and next copy survive. Every other external interface `e` of copy `k` gets
/// a leaf `{node}#{k}~{e}` whose single pair allocation is `div_e` (local to
/// external) before the minimizer and `conv_e` (external to local) after it.
/// Leaves at the minimizer stay zero.
///
/// Paths with u-turn hops, or on-path nodes with a positive external u-turn
/// entry, are rejected: the copies would admit loops through the minimizer.
pub fn build_saturating_graph<R: Resource>(graph: &AllocationGraph<R>, path: &Path) -> Result<SaturatingGraph<R>> {
    let class = classify_path(graph, path)?;
    if class.termination != Termination::Terminated || class.validity != Validity::Valid {
        return Err(Error::Precondition("saturation needs a valid terminated path".into()));
    }
    for (k, h) in path.hops.iter().enumerate() {
        let m = graph.node(h.node).matrix();
        for i in m.interfaces().filter(|i| !i.is_local()) {
            if m.get(i, i).is_positive() {
                return Err(Error::Precondition(format!(
                    "hop {} node `{}` has a positive u-turn entry",
                    k + 1,
                    graph.node(h.node).name()
                )));
            }
        }
    }
    let minimizer = gma_direct(&path_view(graph, path)?).argmin_index;

    let mut b = GraphBuilder::<R>::new();
    let mut copies = Vec::with_capacity(path.len());
    for (k, h) in path.hops.iter().enumerate() {
        let orig = graph.node(h.node);
        let id = b.add_node(&format!("{}#{}", orig.name(), k + 1))?;
        if let Some(label) = orig.local_label() {
            b.set_local_label(id, label)?;
        }
        for iface in orig.interfaces() {
            b.add_interface(id, &iface.name)?;
        }
        copies.push(id);
    }
    for (k, w) in path.hops.windows(2).enumerate() {
        let (InterfaceId::External(out), InterfaceId::External(inp)) = (w[0].egress, w[1].ingress) else {
            unreachable!("wiring checked by classify_path");
        };
        b.link(
            Endpoint { node: copies[k], interface: out },
            Endpoint { node: copies[k + 1], interface: inp },
            graph.capacity_out(w[0].node, out).clone(),
            graph.capacity_in(w[0].node, out).clone(),
        )?;
    }
    // (leaf id, copy index, interface of the copy)
    let mut leaves: Vec<(NodeId, usize, usize)> = Vec::new();
    for (k, h) in path.hops.iter().enumerate() {
        let orig = graph.node(h.node);
        for (e, iface) in orig.interfaces().iter().enumerate() {
            let on_path = [h.ingress, h.egress].contains(&InterfaceId::External(e));
            if on_path {
                continue;
            }
            let leaf = b.add_node(&format!("{}#{}~{}", orig.name(), k + 1, iface.name))?;
            let leaf_iface = b.add_interface(leaf, LEAF_INTERFACE)?;
            b.link(
                Endpoint { node: copies[k], interface: e },
                Endpoint { node: leaf, interface: leaf_iface },
                graph.capacity_out(h.node, e).clone(),
                graph.capacity_in(h.node, e).clone(),
            )?;
            leaves.push((leaf, k, e));
        }
    }

    let mut out = b.build()?;
    for (k, h) in path.hops.iter().enumerate() {
        out.set_matrix(copies[k], graph.node(h.node).matrix().clone())?;
    }
    let ext = InterfaceId::External(0);
    for (leaf, k, e) in leaves {
        let m = graph.node(path.hops[k].node).matrix();
        let iface = InterfaceId::External(e);
        match (k + 1).cmp(&minimizer) {
            std::cmp::Ordering::Less => {
                out.set_pair_allocation(leaf, InterfaceId::Local, ext, m.divergent(iface).clone())?;
            }
            std::cmp::Ordering::Greater => {
                out.set_pair_allocation(leaf, ext, InterfaceId::Local, m.convergent(iface).clone())?;
            }
            std::cmp::Ordering::Equal => {}
        }
    }
    let image = Path::new(
        path.hops
            .iter()
            .zip(&copies)
            .map(|(h, &c)| Hop::new(c, h.ingress, h.egress))
            .collect(),
    );
    Ok(SaturatingGraph {
        graph: out,
        path: image,
        minimizer,
    })
}

/// Sum of GMA allocations over all terminated paths through the minimizing
/// hop, divided by its pair allocation. `bound` defaults to the node count.
///
/// Fails with [`Error::IncompleteEnumeration`] when a valid path longer than
/// the bound exists, since the sum would then be partial.
pub fn check_saturation<R: Resource>(sat: &SaturatingGraph<R>, bound: Option<usize>) -> Result<R> {
    let g = &sat.graph;
    let bound = bound.unwrap_or(g.node_count());
    let mut all = enumerate_paths(g, EnumerationMode::Terminated { max_len: bound }, PathFilter::valid());
    all.by_ref().for_each(drop);
    if all.truncated() {
        return Err(Error::IncompleteEnumeration { bound });
    }
    let hop = sat.path.hops[sat.minimizer - 1];
    let limit = g.pair_allocation(hop.node, hop.ingress, hop.egress)?.clone();
    let mut sum = R::zero();
    let filter = PathFilter::valid().through(hop);
    for p in enumerate_paths(g, EnumerationMode::Terminated { max_len: bound }, filter) {
        let value = gma_direct(&path_view(g, &p)?).value;
        let uses = p.hops.iter().filter(|h| **h == hop).count();
        for _ in 0..uses {
            sum = sum + value.clone();
        }
    }
    Ok(sum / limit)
}
