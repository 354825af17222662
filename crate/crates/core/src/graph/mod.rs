//! Allocation graphs: nodes with interfaces and allocation matrices, joined by
//! links with fixed directed capacities.

mod json;
mod matrix;
mod path;

use std::collections::HashMap;
use std::fmt;

pub use json::{read_graph_json, write_graph_json, GraphDocument};
pub use matrix::AllocationMatrix;
pub(crate) use path::check_wiring;
pub use path::{classify_path, parse_path, path_view, Hop, Path, PathClass, Shape, Termination, Validity};

use crate::error::{Error, Result};
use crate::resource::Resource;

/// Index of a node inside its graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

/// Node-scoped interface identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InterfaceId {
    /// The local interface: internal sources and sinks, attached to no link.
    Local,
    /// Index into the node's external interface list.
    External(usize),
}

impl InterfaceId {
    pub(crate) fn slot(self) -> usize {
        match self {
            InterfaceId::Local => 0,
            InterfaceId::External(e) => e + 1,
        }
    }

    pub(crate) fn from_slot(slot: usize) -> Self {
        if slot == 0 {
            InterfaceId::Local
        } else {
            InterfaceId::External(slot - 1)
        }
    }

    pub fn is_local(self) -> bool {
        matches!(self, InterfaceId::Local)
    }
}

impl fmt::Display for InterfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterfaceId::Local => f.write_str("⊥"),
            InterfaceId::External(e) => write!(f, "#{e}"),
        }
    }
}

/// Names that always resolve to the local interface.
pub const LOCAL_ALIASES: [&str; 3] = ["_", "⊥", "local"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkId(pub usize);

/// One end of a link.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub node: NodeId,
    /// External interface index at `node`.
    pub interface: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Link<R> {
    pub a: Endpoint,
    pub b: Endpoint,
    pub cap_a_to_b: R,
    pub cap_b_to_a: R,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExternalInterface {
    pub name: String,
    pub link: LinkId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node<R> {
    name: String,
    local_label: Option<String>,
    interfaces: Vec<ExternalInterface>,
    matrix: AllocationMatrix<R>,
}

impl<R: Resource> Node<R> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn local_label(&self) -> Option<&str> {
        self.local_label.as_deref()
    }

    pub fn interfaces(&self) -> &[ExternalInterface] {
        &self.interfaces
    }

    pub fn matrix(&self) -> &AllocationMatrix<R> {
        &self.matrix
    }

    pub fn degree(&self) -> usize {
        self.interfaces.len()
    }

    pub fn interface_name(&self, iface: InterfaceId) -> &str {
        match iface {
            InterfaceId::Local => self.local_label.as_deref().unwrap_or("local"),
            InterfaceId::External(e) => &self.interfaces[e].name,
        }
    }

    /// Resolves an interface name, accepting the local aliases and the node's local label.
    pub fn resolve_interface(&self, name: &str) -> Option<InterfaceId> {
        if LOCAL_ALIASES.contains(&name) || self.local_label.as_deref() == Some(name) {
            return Some(InterfaceId::Local);
        }
        self.interfaces
            .iter()
            .position(|i| i.name == name)
            .map(InterfaceId::External)
    }
}

/// What a capacity violation is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// Row sum compared against the capacity of the incoming edge.
    Divergent,
    /// Column sum compared against the capacity of the outgoing edge.
    Convergent,
    /// Link capacity that is not strictly positive.
    Capacity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation<R> {
    pub node: NodeId,
    pub interface: InterfaceId,
    pub quantity: Quantity,
    pub value: R,
    pub limit: R,
}

impl<R: Resource> fmt::Display for Violation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node {} interface {}: {:?} {} exceeds {}",
            self.node.0, self.interface, self.quantity, self.value, self.limit
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AllocationGraph<R> {
    nodes: Vec<Node<R>>,
    links: Vec<Link<R>>,
    by_name: HashMap<String, NodeId>,
    /// Per node: `(peer, external interface index)`, sorted by peer.
    neighbors: Vec<Vec<(NodeId, usize)>>,
}

impl<R: Resource> AllocationGraph<R> {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn node(&self, id: NodeId) -> &Node<R> {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[Node<R>] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link<R>] {
        &self.links
    }

    pub fn find_node(&self, name: &str) -> Result<NodeId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn interface(&self, node: NodeId, name: &str) -> Result<InterfaceId> {
        self.node(node)
            .resolve_interface(name)
            .ok_or_else(|| Error::UnknownInterface {
                node: self.node(node).name.clone(),
                interface: name.to_string(),
            })
    }

    fn checked_node(&self, node: NodeId) -> Result<&Node<R>> {
        self.nodes
            .get(node.0)
            .ok_or_else(|| Error::UnknownNode(format!("#{}", node.0)))
    }

    fn checked_iface(&self, node: NodeId, iface: InterfaceId) -> Result<&Node<R>> {
        let n = self.checked_node(node)?;
        if n.matrix.contains(iface) {
            Ok(n)
        } else {
            Err(Error::UnknownInterface {
                node: n.name.clone(),
                interface: iface.to_string(),
            })
        }
    }

    pub fn pair_allocation(&self, node: NodeId, ingress: InterfaceId, egress: InterfaceId) -> Result<&R> {
        self.checked_iface(node, ingress)?;
        Ok(self.checked_iface(node, egress)?.matrix.get(ingress, egress))
    }

    /// Sum of the matrix row of `iface` at `node`, local column included.
    pub fn divergent(&self, node: NodeId, iface: InterfaceId) -> Result<&R> {
        Ok(self.checked_iface(node, iface)?.matrix.divergent(iface))
    }

    /// Sum of the matrix column of `iface` at `node`, local row included.
    pub fn convergent(&self, node: NodeId, iface: InterfaceId) -> Result<&R> {
        Ok(self.checked_iface(node, iface)?.matrix.convergent(iface))
    }

    /// Node and external interface on the other side of `(node, iface)`.
    pub fn peer(&self, node: NodeId, iface: usize) -> Endpoint {
        let link = &self.links[self.nodes[node.0].interfaces[iface].link.0];
        if link.a.node == node && link.a.interface == iface {
            link.b
        } else {
            link.a
        }
    }

    /// Capacity of the edge entering `node` through external interface `iface`.
    pub fn capacity_in(&self, node: NodeId, iface: usize) -> &R {
        let link = &self.links[self.nodes[node.0].interfaces[iface].link.0];
        if link.a.node == node && link.a.interface == iface {
            &link.cap_b_to_a
        } else {
            &link.cap_a_to_b
        }
    }

    /// Capacity of the edge leaving `node` through external interface `iface`.
    pub fn capacity_out(&self, node: NodeId, iface: usize) -> &R {
        let link = &self.links[self.nodes[node.0].interfaces[iface].link.0];
        if link.a.node == node && link.a.interface == iface {
            &link.cap_a_to_b
        } else {
            &link.cap_b_to_a
        }
    }

    /// External interface of `from` that leads to `to`, if they are adjacent.
    pub fn interface_towards(&self, from: NodeId, to: NodeId) -> Option<usize> {
        let adj = &self.neighbors[from.0];
        adj.binary_search_by_key(&to, |&(n, _)| n)
            .ok()
            .map(|pos| adj[pos].1)
    }

    /// Neighbors of `node` in ascending id order.
    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors[node.0].iter().map(|&(n, _)| n)
    }

    /// Plain adjacency lists, ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.neighbors
            .iter()
            .map(|adj| adj.iter().map(|&(n, _)| n.0).collect())
            .collect()
    }

    /// Overwrites one pair allocation and reports capacity violations of the
    /// resulting state. The write happens even when violations are reported.
    pub fn set_pair_allocation(
        &mut self,
        node: NodeId,
        ingress: InterfaceId,
        egress: InterfaceId,
        value: R,
    ) -> Result<Vec<Violation<R>>> {
        self.checked_iface(node, ingress)?;
        self.checked_iface(node, egress)?;
        self.nodes[node.0].matrix.set(ingress, egress, value)?;
        Ok(self.node_violations(node))
    }

    /// Replaces a node's whole matrix.
    pub fn set_matrix(&mut self, node: NodeId, matrix: AllocationMatrix<R>) -> Result<()> {
        let n = self.checked_node(node)?;
        if matrix.interface_count() != n.interfaces.len() + 1 {
            return Err(Error::InvalidGraph(format!(
                "matrix for `{}` must cover {} interfaces",
                n.name,
                n.interfaces.len() + 1
            )));
        }
        self.nodes[node.0].matrix = matrix;
        Ok(())
    }

    fn node_violations(&self, node: NodeId) -> Vec<Violation<R>> {
        let n = &self.nodes[node.0];
        let mut out = Vec::new();
        for e in 0..n.interfaces.len() {
            let iface = InterfaceId::External(e);
            let div = n.matrix.divergent(iface);
            let cap_in = self.capacity_in(node, e);
            if div > cap_in {
                out.push(Violation {
                    node,
                    interface: iface,
                    quantity: Quantity::Divergent,
                    value: div.clone(),
                    limit: cap_in.clone(),
                });
            }
            let conv = n.matrix.convergent(iface);
            let cap_out = self.capacity_out(node, e);
            if conv > cap_out {
                out.push(Violation {
                    node,
                    interface: iface,
                    quantity: Quantity::Convergent,
                    value: conv.clone(),
                    limit: cap_out.clone(),
                });
            }
        }
        out
    }

    /// Same topology with every amount converted.
    pub fn map_amounts<S: Resource>(&self, f: impl Fn(&R) -> S) -> AllocationGraph<S> {
        AllocationGraph {
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    name: n.name.clone(),
                    local_label: n.local_label.clone(),
                    interfaces: n.interfaces.clone(),
                    matrix: n.matrix.map(&f),
                })
                .collect(),
            links: self
                .links
                .iter()
                .map(|l| Link {
                    a: l.a,
                    b: l.b,
                    cap_a_to_b: f(&l.cap_a_to_b),
                    cap_b_to_a: f(&l.cap_b_to_a),
                })
                .collect(),
            by_name: self.by_name.clone(),
            neighbors: self.neighbors.clone(),
        }
    }
}

/// Checks the capacity constraints of every node and the positivity of every
/// link capacity. Wiring invariants are enforced by [`GraphBuilder`].
pub fn validate_graph<R: Resource>(graph: &AllocationGraph<R>) -> Vec<Violation<R>> {
    let mut out = Vec::new();
    for link in &graph.links {
        for (end, cap) in [(link.b, &link.cap_a_to_b), (link.a, &link.cap_b_to_a)] {
            if !cap.is_positive() {
                out.push(Violation {
                    node: end.node,
                    interface: InterfaceId::External(end.interface),
                    quantity: Quantity::Capacity,
                    value: cap.clone(),
                    limit: R::zero(),
                });
            }
        }
    }
    for node in graph.node_ids() {
        out.extend(graph.node_violations(node));
    }
    out
}

/// Divergent of `iface` at `node`.
pub fn divergent<R: Resource>(graph: &AllocationGraph<R>, node: NodeId, iface: InterfaceId) -> Result<R> {
    graph.divergent(node, iface).cloned()
}

/// Convergent of `iface` at `node`.
pub fn convergent<R: Resource>(graph: &AllocationGraph<R>, node: NodeId, iface: InterfaceId) -> Result<R> {
    graph.convergent(node, iface).cloned()
}

struct PendingNode {
    name: String,
    local_label: Option<String>,
    interfaces: Vec<(String, Option<LinkId>)>,
}

/// Incremental construction of an [`AllocationGraph`] with zero matrices.
///
/// Rejects self-links, multi-edges, non-positive capacities, duplicate names
/// and dangling external interfaces.
pub struct GraphBuilder<R> {
    nodes: Vec<PendingNode>,
    links: Vec<Link<R>>,
    by_name: HashMap<String, NodeId>,
}

impl<R: Resource> Default for GraphBuilder<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Resource> GraphBuilder<R> {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            links: Vec::new(),
            by_name: HashMap::new(),
        }
    }

    pub fn add_node(&mut self, name: &str) -> Result<NodeId> {
        if name.is_empty() || name.contains([':', ',']) {
            return Err(Error::InvalidGraph(format!("invalid node name `{name}`")));
        }
        if self.by_name.contains_key(name) {
            return Err(Error::InvalidGraph(format!("duplicate node `{name}`")));
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(PendingNode {
            name: name.to_string(),
            local_label: None,
            interfaces: Vec::new(),
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    fn pending(&mut self, node: NodeId) -> Result<&mut PendingNode> {
        self.nodes
            .get_mut(node.0)
            .ok_or_else(|| Error::UnknownNode(format!("#{}", node.0)))
    }

    fn name_taken(n: &PendingNode, name: &str) -> bool {
        LOCAL_ALIASES.contains(&name)
            || n.local_label.as_deref() == Some(name)
            || n.interfaces.iter().any(|(i, _)| i == name)
    }

    fn check_iface_name(name: &str) -> Result<()> {
        if name.is_empty() || name.contains([':', ',', '-']) {
            return Err(Error::InvalidGraph(format!("invalid interface name `{name}`")));
        }
        Ok(())
    }

    /// Gives the local interface a display name (it still also answers to `_`, `⊥`, `local`).
    pub fn set_local_label(&mut self, node: NodeId, label: &str) -> Result<()> {
        Self::check_iface_name(label)?;
        let n = self.pending(node)?;
        if Self::name_taken(n, label) {
            return Err(Error::InvalidGraph(format!("interface name `{label}` already used at `{}`", n.name)));
        }
        n.local_label = Some(label.to_string());
        Ok(())
    }

    /// Declares an unattached external interface and returns its index.
    pub fn add_interface(&mut self, node: NodeId, name: &str) -> Result<usize> {
        Self::check_iface_name(name)?;
        let n = self.pending(node)?;
        if Self::name_taken(n, name) {
            return Err(Error::InvalidGraph(format!("interface name `{name}` already used at `{}`", n.name)));
        }
        n.interfaces.push((name.to_string(), None));
        Ok(n.interfaces.len() - 1)
    }

    /// Attaches two declared external interfaces with a link.
    pub fn link(&mut self, a: Endpoint, b: Endpoint, cap_a_to_b: R, cap_b_to_a: R) -> Result<LinkId> {
        if a.node == b.node {
            return Err(Error::InvalidGraph(format!("self-link at node #{}", a.node.0)));
        }
        if !cap_a_to_b.is_positive() || !cap_b_to_a.is_positive() {
            return Err(Error::InvalidGraph("link capacities must be strictly positive".into()));
        }
        let duplicate = self.links.iter().any(|l| {
            (l.a.node == a.node && l.b.node == b.node) || (l.a.node == b.node && l.b.node == a.node)
        });
        if duplicate {
            return Err(Error::InvalidGraph(format!(
                "multi-edge between `{}` and `{}`",
                self.nodes[a.node.0].name, self.nodes[b.node.0].name
            )));
        }
        let id = LinkId(self.links.len());
        for end in [a, b] {
            let n = self.pending(end.node)?;
            let slot = n.interfaces.get_mut(end.interface).ok_or_else(|| Error::UnknownInterface {
                node: n.name.clone(),
                interface: format!("#{}", end.interface),
            })?;
            if slot.1.is_some() {
                return Err(Error::InvalidGraph(format!("interface `{}` is already linked", slot.0)));
            }
            slot.1 = Some(id);
        }
        self.links.push(Link {
            a,
            b,
            cap_a_to_b,
            cap_b_to_a,
        });
        Ok(id)
    }

    /// Declares one interface on each node and links them.
    pub fn connect(
        &mut self,
        a: NodeId,
        a_iface: &str,
        b: NodeId,
        b_iface: &str,
        cap_a_to_b: R,
        cap_b_to_a: R,
    ) -> Result<(usize, usize)> {
        let ia = self.add_interface(a, a_iface)?;
        let ib = self.add_interface(b, b_iface)?;
        self.link(
            Endpoint { node: a, interface: ia },
            Endpoint { node: b, interface: ib },
            cap_a_to_b,
            cap_b_to_a,
        )?;
        Ok((ia, ib))
    }

    pub fn build(self) -> Result<AllocationGraph<R>> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in self.nodes {
            let mut interfaces = Vec::with_capacity(n.interfaces.len());
            for (name, link) in n.interfaces {
                let link = link.ok_or_else(|| {
                    Error::InvalidGraph(format!("interface `{name}` of `{}` is not linked", n.name))
                })?;
                interfaces.push(ExternalInterface { name, link });
            }
            let matrix = AllocationMatrix::zeros(interfaces.len());
            nodes.push(Node {
                name: n.name,
                local_label: n.local_label,
                interfaces,
                matrix,
            });
        }
        let mut neighbors: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); nodes.len()];
        for l in &self.links {
            neighbors[l.a.node.0].push((l.b.node, l.a.interface));
            neighbors[l.b.node.0].push((l.a.node, l.b.interface));
        }
        for adj in &mut neighbors {
            adj.sort_unstable();
        }
        Ok(AllocationGraph {
            nodes,
            links: self.links,
            by_name: self.by_name,
            neighbors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::Rational;

    fn q(n: u64) -> Rational {
        Rational::from_u64(n)
    }

    fn two_nodes() -> AllocationGraph<Rational> {
        let mut b = GraphBuilder::new();
        let x = b.add_node("X").unwrap();
        let y = b.add_node("Y").unwrap();
        b.connect(x, "xy", y, "yx", q(5), q(3)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn builder_rejects_self_and_multi_links() {
        let mut b = GraphBuilder::<Rational>::new();
        let x = b.add_node("X").unwrap();
        let y = b.add_node("Y").unwrap();
        assert!(b.connect(x, "a", x, "b", q(1), q(1)).is_err());
        b.connect(x, "c", y, "d", q(1), q(1)).unwrap();
        assert!(b.connect(y, "e", x, "f", q(1), q(1)).is_err());
    }

    #[test]
    fn builder_rejects_dangling_and_zero_capacity() {
        let mut b = GraphBuilder::<Rational>::new();
        let x = b.add_node("X").unwrap();
        let y = b.add_node("Y").unwrap();
        assert!(b.connect(x, "a", y, "b", q(0), q(1)).is_err());
        let mut b = GraphBuilder::<Rational>::new();
        let x = b.add_node("X").unwrap();
        b.add_interface(x, "dangling").unwrap();
        assert!(b.build().is_err());
    }

    #[test]
    fn builder_rejects_reserved_names() {
        let mut b = GraphBuilder::<Rational>::new();
        let x = b.add_node("X").unwrap();
        assert!(b.add_interface(x, "local").is_err());
        assert!(b.add_interface(x, "a-b").is_err());
        b.set_local_label(x, "home").unwrap();
        assert!(b.add_interface(x, "home").is_err());
        assert!(b.add_node("X").is_err());
    }

    #[test]
    fn directed_capacities() {
        let g = two_nodes();
        let x = g.find_node("X").unwrap();
        let y = g.find_node("Y").unwrap();
        assert_eq!(*g.capacity_out(x, 0), q(5));
        assert_eq!(*g.capacity_in(y, 0), q(5));
        assert_eq!(*g.capacity_in(x, 0), q(3));
        assert_eq!(g.peer(x, 0), Endpoint { node: y, interface: 0 });
        assert_eq!(g.interface_towards(y, x), Some(0));
    }

    #[test]
    fn validation_reports_single_breach() {
        let mut g = two_nodes();
        let x = g.find_node("X").unwrap();
        // divergent at xy is bounded by the capacity Y -> X = 3
        let v = g
            .set_pair_allocation(x, InterfaceId::External(0), InterfaceId::Local, q(3))
            .unwrap();
        assert!(v.is_empty());
        assert!(validate_graph(&g).is_empty());
        let v = g
            .set_pair_allocation(x, InterfaceId::External(0), InterfaceId::Local, q(4))
            .unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].quantity, Quantity::Divergent);
        assert_eq!(v[0].limit, q(3));
        assert_eq!(validate_graph(&g).len(), 1);
    }

    #[test]
    fn zero_row_has_zero_divergent() {
        let g = two_nodes();
        let y = g.find_node("Y").unwrap();
        assert_eq!(divergent(&g, y, InterfaceId::External(0)).unwrap(), q(0));
        assert_eq!(convergent(&g, y, InterfaceId::Local).unwrap(), q(0));
        assert!(divergent(&g, y, InterfaceId::External(4)).is_err());
        assert!(divergent(&g, NodeId(9), InterfaceId::Local).is_err());
    }

    #[test]
    fn set_to_current_value_is_identity() {
        let mut g = two_nodes();
        let x = g.find_node("X").unwrap();
        g.set_pair_allocation(x, InterfaceId::Local, InterfaceId::External(0), q(2))
            .unwrap();
        let before = g.clone();
        g.set_pair_allocation(x, InterfaceId::Local, InterfaceId::External(0), q(2))
            .unwrap();
        assert_eq!(before, g);
    }
}
