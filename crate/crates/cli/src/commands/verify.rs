use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use gma_core::graph::{path_view, validate_graph};
use gma_core::oracle::random::{random_graph, RandomGraphConfig};
use gma_core::oracle::{
    audit_over_allocation, build_saturating_graph, check_lemma1_strict, check_saturation, enumerate_paths, AuditMode,
    EnumerationMode, PathFilter,
};
use gma_core::topology::derive_seed;
use gma_core::{alloc_a2, gma_direct, gma_recursive, AllocationGraph, Allocator, Error, Rational, Resource};

use crate::config::VerifyBudget;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct CheckCount {
    pub checks: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct A1Audit {
    pub over_allocated: usize,
    /// A1 is known to over-allocate; this records whether the audit showed it.
    pub expected_failure: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Audits {
    pub paths: usize,
    pub gma: usize,
    pub a2: usize,
    pub a1: A1Audit,
}

#[derive(Clone, Debug, Serialize)]
pub struct Properties {
    pub paths: usize,
    /// Valid paths with a zero allocation.
    pub usability: usize,
    /// Paths whose prefix allocations increase somewhere.
    pub prefix_monotone: usize,
    pub recursive_direct: usize,
    /// Paths where A2 exceeds GMA.
    pub dominance: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Saturation {
    pub instances: usize,
    pub exact_one: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphVerdict {
    pub graph: String,
    pub nodes: usize,
    pub validator: Vec<String>,
    pub strict_bound: CheckCount,
    pub audits: Audits,
    pub properties: Properties,
    pub saturation: Saturation,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub budget: VerifyBudget,
    pub graphs: Vec<GraphVerdict>,
    pub failures: usize,
    pub ok: bool,
}

/// Number of wired interface walks of length at most `max_len` that start at
/// a local interface, valid or not. Bounds the work of every enumeration.
pub fn walk_count<R: Resource>(graph: &AllocationGraph<R>, max_len: usize) -> u128 {
    // state: (node, ingress slot); slot 0 is local
    let slots: Vec<usize> = graph.nodes().iter().map(|n| n.degree() + 1).collect();
    let offset: Vec<usize> = slots
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total_states: usize = slots.iter().sum();
    let mut current = vec![0u128; total_states];
    for &o in &offset {
        current[o] = 1;
    }
    let mut walks: u128 = 0;
    for _ in 0..max_len {
        walks = walks.saturating_add(current.iter().fold(0u128, |a, &c| a.saturating_add(c)));
        let mut next = vec![0u128; total_states];
        for v in graph.node_ids() {
            let arriving: u128 = (0..slots[v.0]).fold(0u128, |a, s| a.saturating_add(current[offset[v.0] + s]));
            if arriving == 0 {
                continue;
            }
            for e in 0..graph.node(v).degree() {
                let peer = graph.peer(v, e);
                let slot = offset[peer.node.0] + peer.interface + 1;
                next[slot] = next[slot].saturating_add(arriving);
            }
        }
        current = next;
    }
    walks
}

/// Refuses graphs beyond the budget before any oracle runs.
pub fn check_budget<R: Resource>(name: &str, graph: &AllocationGraph<R>, budget: &VerifyBudget) -> CliResult<()> {
    if graph.node_count() > budget.max_nodes {
        return Err(CliError::Usage(format!(
            "{name}: {} nodes exceed the budget of {}; refusing to run exhaustive checks",
            graph.node_count(),
            budget.max_nodes
        )));
    }
    let walks = walk_count(graph, budget.max_len);
    if walks > budget.max_walks as u128 {
        return Err(CliError::Usage(format!(
            "{name}: {walks} walks up to length {} exceed the budget of {}; refusing to run exhaustive checks",
            budget.max_len, budget.max_walks
        )));
    }
    Ok(())
}

/// Saturating-graph instances checked per graph.
const SATURATION_INSTANCES: usize = 3;

/// Runs every check on one graph that passed [`check_budget`].
pub fn verify_graph(name: &str, graph: &AllocationGraph<Rational>, budget: &VerifyBudget) -> CliResult<GraphVerdict> {
    let x = budget.max_len;
    let validator: Vec<String> = validate_graph(graph).iter().map(ToString::to_string).collect();

    let bound = check_lemma1_strict(graph, x);

    let audit = |a| audit_over_allocation(graph, a, x, AuditMode::Terminated);
    let gma = audit(Allocator::Gma);
    let a2 = audit(Allocator::A2);
    let a1 = audit(Allocator::A1);
    let a1_over = a1.over_allocated().count();
    let audits = Audits {
        paths: gma.paths,
        gma: gma.over_allocated().count(),
        a2: a2.over_allocated().count(),
        a1: A1Audit {
            over_allocated: a1_over,
            expected_failure: a1_over > 0,
        },
    };

    let mut props = Properties {
        paths: 0,
        usability: 0,
        prefix_monotone: 0,
        recursive_direct: 0,
        dominance: 0,
    };
    let mut saturation = Saturation {
        instances: 0,
        exact_one: 0,
    };
    for path in enumerate_paths(graph, EnumerationMode::Terminated { max_len: x }, PathFilter::default()) {
        let view = path_view(graph, &path)?;
        let direct = gma_direct(&view);
        props.paths += 1;
        if view.is_valid() && !direct.value.is_positive() {
            props.usability += 1;
        }
        if direct.prefix_allocs.windows(2).any(|w| w[1] > w[0]) {
            props.prefix_monotone += 1;
        }
        if gma_recursive(&view).value != direct.value {
            props.recursive_direct += 1;
        }
        if alloc_a2(&view) > direct.value {
            props.dominance += 1;
        }
        if saturation.instances < SATURATION_INSTANCES && view.is_valid() && path.is_simple() {
            match build_saturating_graph(graph, &path) {
                Ok(sat) => {
                    saturation.instances += 1;
                    if check_saturation(&sat, None)? == Rational::from_u64(1) {
                        saturation.exact_one += 1;
                    }
                }
                Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }

    let ok = validator.is_empty()
        && bound.holds()
        && audits.gma == 0
        && audits.a2 == 0
        && props.usability == 0
        && props.prefix_monotone == 0
        && props.recursive_direct == 0
        && props.dominance == 0
        && saturation.exact_one == saturation.instances;
    Ok(GraphVerdict {
        graph: name.to_string(),
        nodes: graph.node_count(),
        validator,
        strict_bound: CheckCount {
            checks: bound.checks,
            violations: bound.violations.len(),
        },
        audits,
        properties: props,
        saturation,
        ok,
    })
}

/// Budget check for all graphs, then the checks themselves.
pub fn verify_all(graphs: &[(String, AllocationGraph<Rational>)], budget: &VerifyBudget) -> CliResult<VerifySummary> {
    for (name, g) in graphs {
        check_budget(name, g, budget)?;
    }
    let verdicts = graphs
        .iter()
        .map(|(name, g)| verify_graph(name, g, budget))
        .collect::<CliResult<Vec<_>>>()?;
    let failures = verdicts.iter().filter(|v| !v.ok).count();
    Ok(VerifySummary {
        budget: *budget,
        graphs: verdicts,
        failures,
        ok: failures == 0,
    })
}

/// The random small-graph suite: `count` graphs within the node budget.
pub fn random_suite(count: usize, seed: u64, budget: &VerifyBudget) -> Vec<(String, AllocationGraph<Rational>)> {
    let cfg = RandomGraphConfig {
        max_nodes: budget.max_nodes.clamp(2, RandomGraphConfig::default().max_nodes),
        ..RandomGraphConfig::default()
    };
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[i as u64]));
            (format!("random-{seed}-{i}"), random_graph(&mut rng, &cfg))
        })
        .collect()
}
