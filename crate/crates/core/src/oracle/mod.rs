//! Brute-force oracles for small graphs: exhaustive path enumeration,
//! over-allocation audits, the strict allocation bound, saturating graphs and
//! random instance generators. All arithmetic here is meant to be exact.

mod audit;
mod enumerate;
mod properties;
pub mod random;
mod saturate;

pub use audit::{audit_over_allocation, audit_paths, AuditMode, AuditReport, AuditRow, AuditSubject};
pub use enumerate::{enumerate_paths, EnumerationMode, PathEnumeration, PathFilter};
pub use properties::{
    check_lemma1_strict, check_monotonicity, lemma3_identity, scale_hop, Lemma1Report, Lemma1Violation,
    MonotonicityCheck,
};
pub use saturate::{build_saturating_graph, check_saturation, SaturatingGraph, LEAF_INTERFACE};

use crate::allocators::HopRecord;
use crate::graph::{AllocationGraph, Hop};
use crate::resource::Resource;

/// On-path data of one hop, read straight from the graph.
pub(crate) fn hop_record<R: Resource>(graph: &AllocationGraph<R>, hop: Hop) -> HopRecord<R> {
    let m = graph.node(hop.node).matrix();
    HopRecord::new(
        m.get(hop.ingress, hop.egress).clone(),
        m.convergent(hop.egress).clone(),
        m.divergent(hop.ingress).clone(),
    )
}
