//! JSON document format for allocation graphs.
//!
//! ```json
//! {
//!   "mode": "exact",
//!   "nodes": [{"id": "A", "local": "q", "interfaces": ["c", "d"],
//!              "matrix": [{"in": "c", "out": "d", "alloc": "1/1"}]}],
//!   "links": [{"a": {"node": "A1", "interface": "b"},
//!              "b": {"node": "A", "interface": "c"},
//!              "cap_ab": "10/1", "cap_ba": "10/1"}],
//!   "metadata": {}
//! }
//! ```
//!
//! Amounts are `"p/q"` strings in exact mode and JSON numbers in float mode.
//! Only non-zero matrix entries are written.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::resource::Resource;

use super::{AllocationGraph, Endpoint, GraphBuilder, InterfaceId};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphDocument {
    pub mode: String,
    pub nodes: Vec<NodeDoc>,
    pub links: Vec<LinkDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NodeDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local: Option<String>,
    pub interfaces: Vec<String>,
    pub matrix: Vec<EntryDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EntryDoc {
    #[serde(rename = "in")]
    pub ingress: String,
    #[serde(rename = "out")]
    pub egress: String,
    pub alloc: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EndpointDoc {
    pub node: String,
    pub interface: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LinkDoc {
    pub a: EndpointDoc,
    pub b: EndpointDoc,
    pub cap_ab: Value,
    pub cap_ba: Value,
}

impl GraphDocument {
    pub fn from_graph<R: Resource>(graph: &AllocationGraph<R>, metadata: Option<Value>) -> Self {
        let nodes = graph
            .nodes()
            .iter()
            .map(|n| NodeDoc {
                id: n.name().to_string(),
                local: n.local_label().map(str::to_string),
                interfaces: n.interfaces().iter().map(|i| i.name.clone()).collect(),
                matrix: n
                    .matrix()
                    .entries()
                    .filter(|(_, _, v)| !v.is_zero())
                    .map(|(i, j, v)| EntryDoc {
                        ingress: n.interface_name(i).to_string(),
                        egress: n.interface_name(j).to_string(),
                        alloc: v.to_json(),
                    })
                    .collect(),
            })
            .collect();
        let endpoint = |e: Endpoint| {
            let n = graph.node(e.node);
            EndpointDoc {
                node: n.name().to_string(),
                interface: n.interfaces()[e.interface].name.clone(),
            }
        };
        let links = graph
            .links()
            .iter()
            .map(|l| LinkDoc {
                a: endpoint(l.a),
                b: endpoint(l.b),
                cap_ab: l.cap_a_to_b.to_json(),
                cap_ba: l.cap_b_to_a.to_json(),
            })
            .collect();
        GraphDocument {
            mode: R::MODE.to_string(),
            nodes,
            links,
            metadata,
        }
    }

    pub fn to_graph<R: Resource>(&self) -> Result<AllocationGraph<R>> {
        let mut b = GraphBuilder::<R>::new();
        for n in &self.nodes {
            let id = b.add_node(&n.id)?;
            if let Some(label) = &n.local {
                b.set_local_label(id, label)?;
            }
            for iface in &n.interfaces {
                b.add_interface(id, iface)?;
            }
        }
        let resolve = |e: &EndpointDoc| -> Result<Endpoint> {
            let node_pos = self
                .nodes
                .iter()
                .position(|n| n.id == e.node)
                .ok_or_else(|| Error::UnknownNode(e.node.clone()))?;
            let iface = self.nodes[node_pos]
                .interfaces
                .iter()
                .position(|i| *i == e.interface)
                .ok_or_else(|| Error::UnknownInterface {
                    node: e.node.clone(),
                    interface: e.interface.clone(),
                })?;
            Ok(Endpoint {
                node: super::NodeId(node_pos),
                interface: iface,
            })
        };
        for l in &self.links {
            b.link(resolve(&l.a)?, resolve(&l.b)?, R::from_json(&l.cap_ab)?, R::from_json(&l.cap_ba)?)?;
        }
        let mut graph = b.build()?;
        for (k, n) in self.nodes.iter().enumerate() {
            let node = super::NodeId(k);
            for e in &n.matrix {
                let i: InterfaceId = graph.interface(node, &e.ingress)?;
                let j: InterfaceId = graph.interface(node, &e.egress)?;
                graph.set_pair_allocation(node, i, j, R::from_json(&e.alloc)?)?;
            }
        }
        Ok(graph)
    }
}

pub fn write_graph_json<R: Resource>(graph: &AllocationGraph<R>, metadata: Option<Value>) -> String {
    let doc = GraphDocument::from_graph(graph, metadata);
    let mut s = serde_json::to_string_pretty(&doc).expect("graph documents always serialize");
    s.push('\n');
    s
}

pub fn read_graph_json<R: Resource>(text: &str) -> Result<(AllocationGraph<R>, Option<Value>)> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    let graph = doc.to_graph()?;
    Ok((graph, doc.metadata))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::resource::Rational;

    #[test]
    fn fixture_round_trip_is_lossless() {
        let g = fixture::example_graph();
        let text = write_graph_json(&g, Some(serde_json::json!({"source": "fixture"})));
        let (back, meta) = read_graph_json::<Rational>(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(meta.as_ref().unwrap()["source"], "fixture");
        assert_eq!(write_graph_json(&back, meta), text);
    }

    #[test]
    fn exact_amounts_are_fraction_strings() {
        let g = fixture::example_graph();
        let doc = GraphDocument::from_graph(&g, None);
        assert_eq!(doc.mode, "exact");
        assert!(doc.links.iter().all(|l| l.cap_ab.as_str().is_some_and(|s| s.contains('/'))));
    }

    #[test]
    fn float_documents_use_numbers() {
        let g = fixture::example_graph().map_amounts(|r| r.to_f64());
        let doc = GraphDocument::from_graph(&g, None);
        assert_eq!(doc.mode, "float");
        assert!(doc.nodes[0].matrix[0].alloc.is_number());
        let (back, _) = read_graph_json::<f64>(&write_graph_json(&g, None)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn unknown_interface_in_link_is_rejected() {
        let g = fixture::example_graph();
        let mut doc = GraphDocument::from_graph(&g, None);
        doc.links[0].a.interface = "nope".into();
        assert!(doc.to_graph::<Rational>().is_err());
    }
}
