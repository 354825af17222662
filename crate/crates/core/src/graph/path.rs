use std::collections::HashSet;
use std::fmt;

use crate::allocators::{HopRecord, PathView};
use crate::error::{Error, Result};
use crate::resource::Resource;

use super::{AllocationGraph, InterfaceId, NodeId};

/// One traversal of a node: enter at `ingress`, leave at `egress`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hop {
    pub node: NodeId,
    pub ingress: InterfaceId,
    pub egress: InterfaceId,
}

impl Hop {
    pub fn new(node: NodeId, ingress: InterfaceId, egress: InterfaceId) -> Self {
        Self { node, ingress, egress }
    }
}

/// Ordered list of hops. Its length is the hop count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Path {
    pub hops: Vec<Hop>,
}

impl Path {
    pub fn new(hops: Vec<Hop>) -> Self {
        Self { hops }
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// First ingress and last egress are both local.
    pub fn is_terminated(&self) -> bool {
        matches!(
            (self.hops.first(), self.hops.last()),
            (Some(f), Some(l)) if f.ingress.is_local() && l.egress.is_local()
        )
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.hops.len());
        self.hops.iter().all(|h| seen.insert(h.node))
    }

    /// The first `k` hops.
    pub fn prefix(&self, k: usize) -> Path {
        Path::new(self.hops[..k.min(self.hops.len())].to_vec())
    }

    /// Renders the path in the `node:in-out,...` grammar.
    pub fn display<'a, R: Resource>(&'a self, graph: &'a AllocationGraph<R>) -> PathDisplay<'a, R> {
        PathDisplay { path: self, graph }
    }
}

pub struct PathDisplay<'a, R> {
    path: &'a Path,
    graph: &'a AllocationGraph<R>,
}

impl<R: Resource> fmt::Display for PathDisplay<'_, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, h) in self.path.hops.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            let n = self.graph.node(h.node);
            write!(
                f,
                "{}:{}-{}",
                n.name(),
                n.interface_name(h.ingress),
                n.interface_name(h.egress)
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Terminated,
    Preliminary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Simple,
    Looping,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathClass {
    pub termination: Termination,
    pub validity: Validity,
    pub shape: Shape,
}

/// Parses `node:in-out,node:in-out,...` against `graph`. Columns in errors
/// are 1-based character positions. Wiring is not checked here.
pub fn parse_path<R: Resource>(graph: &AllocationGraph<R>, text: &str) -> Result<Path> {
    let err = |offset: usize, reason: String| Error::PathSyntax {
        column: text[..offset].chars().count() + 1,
        reason,
    };
    let mut hops = Vec::new();
    let mut start = 0;
    for part in text.split(',') {
        let token = part.trim();
        let lead = part.len() - part.trim_start().len();
        let at = start + lead;
        start += part.len() + 1;
        if token.is_empty() {
            return Err(err(at, "empty hop".into()));
        }
        let Some((name, ifaces)) = token.split_once(':') else {
            return Err(err(at, format!("hop `{token}` lacks `:`")));
        };
        let node = graph
            .find_node(name)
            .map_err(|_| err(at, format!("unknown node `{name}`")))?;
        let ifaces_at = at + name.len() + 1;
        let n = graph.node(node);
        // interface names may contain `-`; take the first split whose ingress resolves
        let split = ifaces
            .match_indices('-')
            .map(|(pos, _)| pos)
            .find(|&pos| n.resolve_interface(&ifaces[..pos]).is_some());
        let Some(pos) = split else {
            return Err(match ifaces.find('-') {
                None => err(ifaces_at, format!("`{ifaces}` lacks `-` between ingress and egress")),
                Some(pos) => err(ifaces_at, format!("node `{name}` has no interface `{}`", &ifaces[..pos])),
            });
        };
        let ingress = n.resolve_interface(&ifaces[..pos]).expect("resolved above");
        let egress_name = &ifaces[pos + 1..];
        let egress = n
            .resolve_interface(egress_name)
            .ok_or_else(|| err(ifaces_at + pos + 1, format!("node `{name}` has no interface `{egress_name}`")))?;
        hops.push(Hop::new(node, ingress, egress));
    }
    Ok(Path::new(hops))
}

/// Checks that every hop exists and consecutive hops are joined by a link.
pub(crate) fn check_wiring<R: Resource>(graph: &AllocationGraph<R>, path: &Path) -> Result<()> {
    if path.hops.is_empty() {
        return Err(Error::MalformedPath {
            hop: 0,
            reason: "path has no hops".into(),
        });
    }
    for (k, hop) in path.hops.iter().enumerate() {
        let malformed = |reason: String| Error::MalformedPath { hop: k + 1, reason };
        if hop.node.0 >= graph.node_count() {
            return Err(malformed(format!("unknown node #{}", hop.node.0)));
        }
        let m = graph.node(hop.node).matrix();
        if !m.contains(hop.ingress) || !m.contains(hop.egress) {
            return Err(malformed(format!(
                "node `{}` has no such interface",
                graph.node(hop.node).name()
            )));
        }
        if k == 0 {
            continue;
        }
        let prev = path.hops[k - 1];
        let InterfaceId::External(out) = prev.egress else {
            return Err(malformed("previous hop leaves through the local interface".into()));
        };
        let InterfaceId::External(inp) = hop.ingress else {
            return Err(malformed("hop enters through the local interface".into()));
        };
        let peer = graph.peer(prev.node, out);
        if peer.node != hop.node || peer.interface != inp {
            return Err(malformed(format!(
                "interface `{}` of `{}` is not linked to `{}` of `{}`",
                graph.node(prev.node).interface_name(prev.egress),
                graph.node(prev.node).name(),
                graph.node(hop.node).interface_name(hop.ingress),
                graph.node(hop.node).name()
            )));
        }
    }
    Ok(())
}

/// Classifies a well-formed path; adjacency violations are errors.
pub fn classify_path<R: Resource>(graph: &AllocationGraph<R>, path: &Path) -> Result<PathClass> {
    check_wiring(graph, path)?;
    let termination = if path.is_terminated() {
        Termination::Terminated
    } else {
        Termination::Preliminary
    };
    let valid = path.hops.iter().all(|h| {
        graph
            .node(h.node)
            .matrix()
            .get(h.ingress, h.egress)
            .is_positive()
    });
    Ok(PathClass {
        termination,
        validity: if valid { Validity::Valid } else { Validity::Invalid },
        shape: if path.is_simple() { Shape::Simple } else { Shape::Looping },
    })
}

/// Extracts the on-path data an allocator may read.
pub fn path_view<R: Resource>(graph: &AllocationGraph<R>, path: &Path) -> Result<PathView<R>> {
    check_wiring(graph, path)?;
    let hops = path
        .hops
        .iter()
        .map(|h| {
            let m = graph.node(h.node).matrix();
            HopRecord {
                pair_alloc: m.get(h.ingress, h.egress).clone(),
                conv_out: m.convergent(h.egress).clone(),
                div_in: m.divergent(h.ingress).clone(),
            }
        })
        .collect();
    PathView::new(hops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn parse_round_trips_display() {
        let g = fixture::example_graph();
        let p = fixture::pi2(&g);
        let text = p.display(&g).to_string();
        assert_eq!(text, "B:r-e,A:d-c,A1:b-a");
        assert_eq!(parse_path(&g, &text).unwrap(), p);
        assert_eq!(parse_path(&g, "B:_-e, A:d-c ,A1:b-local").unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_columns() {
        let g = fixture::example_graph();
        let column = |text: &str| match parse_path(&g, text) {
            Err(Error::PathSyntax { column, .. }) => column,
            other => panic!("expected a syntax error, got {other:?}"),
        };
        assert_eq!(column("B:r-e,Z:d-c"), 7);
        assert_eq!(column("B:r-e,A:x-c"), 9);
        assert_eq!(column("B:r-e,A:d-x"), 11);
        assert_eq!(column("B:r-e,,A:d-c"), 7);
        assert_eq!(column("B:re"), 3);
        assert_eq!(column("B"), 1);
    }
}
