//! Over-allocation audits: sum path allocations per interface pair and per
//! directed edge and compare them against pair allocations and capacities.

use std::fmt::Write as _;

use crate::allocators::Allocator;
use crate::error::Result;
use crate::graph::{path_view, AllocationGraph, InterfaceId, NodeId, Path};
use crate::resource::Resource;

use super::enumerate::{enumerate_paths, EnumerationMode, PathFilter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    /// Terminated paths up to the bound.
    Terminated,
    /// Terminated paths up to the bound plus locally started preliminary paths
    /// of exactly the bound.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditSubject {
    Pair {
        node: NodeId,
        ingress: InterfaceId,
        egress: InterfaceId,
    },
    /// Directed edge leaving `node` through external interface `interface`.
    Edge { node: NodeId, interface: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditRow<R> {
    pub subject: AuditSubject,
    pub limit: R,
    pub allocated: R,
}

impl<R: Resource> AuditRow<R> {
    /// `allocated / limit`; zero for an unused zero limit, `None` for a used one.
    pub fn utilization(&self) -> Option<R> {
        if self.limit.is_positive() {
            Some(self.allocated.clone() / self.limit.clone())
        } else if self.allocated.is_positive() {
            None
        } else {
            Some(R::zero())
        }
    }

    pub fn over_allocated(&self) -> bool {
        self.allocated > self.limit
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport<R> {
    pub allocator: Allocator,
    /// Every pair of every node, then every directed edge.
    pub rows: Vec<AuditRow<R>>,
    /// Number of paths whose allocations were summed.
    pub paths: usize,
}

impl<R: Resource> AuditReport<R> {
    pub fn over_allocated(&self) -> impl Iterator<Item = &AuditRow<R>> {
        self.rows.iter().filter(|r| r.over_allocated())
    }

    pub fn is_clean(&self) -> bool {
        self.over_allocated().next().is_none()
    }

    pub fn row(&self, subject: AuditSubject) -> Option<&AuditRow<R>> {
        self.rows.iter().find(|r| r.subject == subject)
    }

    /// One line per row: `kind,node,in,out,limit,sum,utilization,over`.
    /// Edge rows name the sending interface in `in` and the receiving
    /// `node:interface` in `out`. An unbounded utilization is written `inf`.
    pub fn to_delimited(&self, graph: &AllocationGraph<R>, sep: char) -> String {
        let mut out = String::new();
        let header = ["kind", "node", "in", "out", "limit", "sum", "utilization", "over"];
        out.push_str(&header.join(&sep.to_string()));
        out.push('\n');
        for r in &self.rows {
            let (kind, node, i, j) = match r.subject {
                AuditSubject::Pair { node, ingress, egress } => {
                    let n = graph.node(node);
                    ("pair", n.name(), n.interface_name(ingress).to_string(), n.interface_name(egress).to_string())
                }
                AuditSubject::Edge { node, interface } => {
                    let n = graph.node(node);
                    let peer = graph.peer(node, interface);
                    let pn = graph.node(peer.node);
                    (
                        "edge",
                        n.name(),
                        n.interfaces()[interface].name.clone(),
                        format!("{}:{}", pn.name(), pn.interfaces()[peer.interface].name),
                    )
                }
            };
            let util = r.utilization().map_or_else(|| "inf".to_string(), |u| u.to_text());
            let _ = writeln!(
                out,
                "{kind}{sep}{node}{sep}{i}{sep}{j}{sep}{}{sep}{}{sep}{util}{sep}{}",
                r.limit.to_text(),
                r.allocated.to_text(),
                r.over_allocated()
            );
        }
        out
    }
}

struct Sums<R> {
    /// Per node, dense `size x size` pair sums.
    pairs: Vec<Vec<R>>,
    /// Per node, per external interface, sum over the leaving edge.
    edges: Vec<Vec<R>>,
    paths: usize,
}

impl<R: Resource> Sums<R> {
    fn new(graph: &AllocationGraph<R>) -> Self {
        Self {
            pairs: graph
                .nodes()
                .iter()
                .map(|n| vec![R::zero(); n.matrix().interface_count().pow(2)])
                .collect(),
            edges: graph.nodes().iter().map(|n| vec![R::zero(); n.degree()]).collect(),
            paths: 0,
        }
    }

    /// Adds `value` once per traversal, so a loop that reuses a pair counts twice.
    fn add(&mut self, graph: &AllocationGraph<R>, path: &Path, value: &R) {
        self.paths += 1;
        if !value.is_positive() {
            return;
        }
        for h in &path.hops {
            let size = graph.node(h.node).matrix().interface_count();
            let cell = &mut self.pairs[h.node.0][slot(h.ingress) * size + slot(h.egress)];
            *cell = cell.clone() + value.clone();
            if let InterfaceId::External(e) = h.egress {
                let cell = &mut self.edges[h.node.0][e];
                *cell = cell.clone() + value.clone();
            }
        }
    }

    fn into_report(self, graph: &AllocationGraph<R>, allocator: Allocator) -> AuditReport<R> {
        let mut rows = Vec::new();
        for (k, n) in graph.nodes().iter().enumerate() {
            let m = n.matrix();
            let size = m.interface_count();
            for i in m.interfaces() {
                for j in m.interfaces() {
                    rows.push(AuditRow {
                        subject: AuditSubject::Pair {
                            node: NodeId(k),
                            ingress: i,
                            egress: j,
                        },
                        limit: m.get(i, j).clone(),
                        allocated: self.pairs[k][slot(i) * size + slot(j)].clone(),
                    });
                }
            }
        }
        for (k, n) in graph.nodes().iter().enumerate() {
            for e in 0..n.degree() {
                rows.push(AuditRow {
                    subject: AuditSubject::Edge {
                        node: NodeId(k),
                        interface: e,
                    },
                    limit: graph.capacity_out(NodeId(k), e).clone(),
                    allocated: self.edges[k][e].clone(),
                });
            }
        }
        AuditReport {
            allocator,
            rows,
            paths: self.paths,
        }
    }
}

fn slot(i: InterfaceId) -> usize {
    match i {
        InterfaceId::Local => 0,
        InterfaceId::External(e) => e + 1,
    }
}

/// Audits an explicit set of paths, each carrying its own allocation.
pub fn audit_paths<R: Resource>(
    graph: &AllocationGraph<R>,
    allocator: Allocator,
    paths: &[Path],
) -> Result<AuditReport<R>> {
    let mut sums = Sums::new(graph);
    for p in paths {
        let value = allocator.allocate(&path_view(graph, p)?);
        sums.add(graph, p, &value);
    }
    Ok(sums.into_report(graph, allocator))
}

/// Audits every valid terminated path of length at most `bound`, plus in
/// strict mode every valid preliminary path of length exactly `bound` that
/// starts at a local interface.
pub fn audit_over_allocation<R: Resource>(
    graph: &AllocationGraph<R>,
    allocator: Allocator,
    bound: usize,
    mode: AuditMode,
) -> AuditReport<R> {
    let mut sums = Sums::new(graph);
    let mut run = |m: EnumerationMode| {
        for p in enumerate_paths(graph, m, PathFilter::valid()) {
            let view = path_view(graph, &p).expect("enumerated paths are well-formed");
            let value = allocator.allocate(&view);
            sums.add(graph, &p, &value);
        }
    };
    run(EnumerationMode::Terminated { max_len: bound });
    if mode == AuditMode::Strict {
        run(EnumerationMode::Preliminary { len: bound });
    }
    sums.into_report(graph, allocator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::resource::Rational;

    #[test]
    fn empty_path_set_has_zero_utilization() {
        let g = fixture::example_graph();
        let r = audit_paths(&g, Allocator::Gma, &[]).unwrap();
        assert!(r.rows.iter().all(|row| row.utilization() == Some(Rational::from_u64(0))));
        assert!(r.is_clean());
    }

    #[test]
    fn delimited_export_has_one_line_per_row() {
        let g = fixture::example_graph();
        let r = audit_paths(&g, Allocator::A1, &[fixture::pi2(&g), fixture::pi3(&g)]).unwrap();
        let text = r.to_delimited(&g, ',');
        assert_eq!(text.lines().count(), r.rows.len() + 1);
        assert!(text.contains("pair,A,d,c,1/1,5/4,5/4,true"));
        assert!(text.contains("edge,A1,b,A:c,10/1,"));
    }
}
