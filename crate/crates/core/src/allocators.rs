//! Path allocators.
//!
//! Every allocator here is a pure function of a [`PathView`], the on-path
//! pair allocations with their divergents and convergents. None of them can
//! see the rest of the graph.
//!
//! Notation used below, for hop `k` of a path of length `l`:
//! `M_k` pair allocation, `div_k` divergent at the ingress, `conv_k`
//! convergent at the egress.

use std::fmt;

use crate::error::{Error, Result};
use crate::resource::{max_of, Resource};

/// On-path data of one hop.
#[derive(Clone, Debug, PartialEq)]
pub struct HopRecord<R> {
    pub pair_alloc: R,
    pub conv_out: R,
    pub div_in: R,
}

impl<R: Resource> HopRecord<R> {
    pub fn new(pair_alloc: R, conv_out: R, div_in: R) -> Self {
        Self {
            pair_alloc,
            conv_out,
            div_in,
        }
    }
}

/// The only input an allocator receives.
#[derive(Clone, Debug, PartialEq)]
pub struct PathView<R> {
    hops: Vec<HopRecord<R>>,
}

impl<R: Resource> PathView<R> {
    /// Checks non-emptiness, non-negativity and that each pair allocation is
    /// bounded by both sums it contributes to.
    pub fn new(hops: Vec<HopRecord<R>>) -> Result<Self> {
        if hops.is_empty() {
            return Err(Error::MalformedView {
                hop: 0,
                reason: "empty view".into(),
            });
        }
        for (k, h) in hops.iter().enumerate() {
            let bad = |reason: &str| Error::MalformedView {
                hop: k + 1,
                reason: reason.into(),
            };
            if h.pair_alloc.is_invalid() || h.conv_out.is_invalid() || h.div_in.is_invalid() {
                return Err(bad("negative amount"));
            }
            if h.pair_alloc > h.div_in {
                return Err(bad("pair allocation exceeds the ingress divergent"));
            }
            if h.pair_alloc > h.conv_out {
                return Err(bad("pair allocation exceeds the egress convergent"));
            }
        }
        Ok(Self { hops })
    }

    pub fn hops(&self) -> &[HopRecord<R>] {
        &self.hops
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// All pair allocations strictly positive.
    pub fn is_valid(&self) -> bool {
        self.hops.iter().all(|h| h.pair_alloc.is_positive())
    }

    /// Index of the first hop with a zero pair allocation, if any.
    fn first_zero(&self) -> Option<usize> {
        self.hops.iter().position(|h| !h.pair_alloc.is_positive())
    }

    /// View of the first `k` hops.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.hops.len() {
            return Err(Error::Precondition(format!(
                "prefix length {k} outside 1..={}",
                self.hops.len()
            )));
        }
        Ok(Self {
            hops: self.hops[..k].to_vec(),
        })
    }

    /// Same view with one hop's pair allocation, divergent and convergent all
    /// raised by `delta`.
    pub fn with_increase(&self, hop: usize, delta: R) -> Result<Self> {
        let mut hops = self.hops.clone();
        let h = hops.get_mut(hop).ok_or_else(|| Error::Precondition(format!("no hop {hop}")))?;
        h.pair_alloc = h.pair_alloc.clone() + delta.clone();
        h.div_in = h.div_in.clone() + delta.clone();
        h.conv_out = h.conv_out.clone() + delta;
        Self::new(hops)
    }
}

/// GMA result with the intermediate quantities of the computation.
#[derive(Clone, Debug, PartialEq)]
pub struct AllocationTrace<R> {
    pub value: R,
    /// Smallest 1-based hop index minimizing the direct formula.
    pub argmin_index: usize,
    /// `f_1 ..= f_l`. Shorter than the path when the view is invalid: the
    /// factors stop at the last hop before the first zero pair allocation.
    pub scaling_factors: Vec<R>,
    /// GMA of every prefix `1..=l`; zero from the first zero pair allocation on.
    pub prefix_allocs: Vec<R>,
}

/// Fair split: `M_1 * prod_{k>=2} M_k / div_k`.
pub fn alloc_a1<R: Resource>(view: &PathView<R>) -> R {
    if !view.is_valid() {
        return R::zero();
    }
    let hops = view.hops();
    hops[1..].iter().fold(hops[0].pair_alloc.clone(), |acc, h| {
        acc * h.pair_alloc.clone() / h.div_in.clone()
    })
}

/// Split compensated for convergent/divergent disparity:
/// `M_1 * prod_{k>=2} M_k / max(conv_{k-1}, div_k)`.
pub fn alloc_a2<R: Resource>(view: &PathView<R>) -> R {
    if !view.is_valid() {
        return R::zero();
    }
    let hops = view.hops();
    let mut acc = hops[0].pair_alloc.clone();
    for w in hops.windows(2) {
        let denom = max_of(w[0].conv_out.clone(), w[1].div_in.clone());
        acc = acc * w[1].pair_alloc.clone() / denom;
    }
    acc
}

/// Hop-by-hop GMA state: the scaled recursion on scaling factors.
///
/// After `k` hops, `product = prod_{i<=k} M_i / prod_{i<k} conv_i`, `scale = f_k`
/// and the prefix allocation is `scale * product`.
#[derive(Clone, Debug)]
pub struct GmaAccumulator<R> {
    product: R,
    scale: R,
    conv_out: R,
    argmin: usize,
    len: usize,
    dead: bool,
}

impl<R: Resource> GmaAccumulator<R> {
    pub fn start(first: &HopRecord<R>) -> Self {
        Self {
            product: first.pair_alloc.clone(),
            scale: R::one(),
            conv_out: first.conv_out.clone(),
            argmin: 1,
            len: 1,
            dead: !first.pair_alloc.is_positive(),
        }
    }

    /// Appends one hop: `f_k = min(1, conv_{k-1} * f_{k-1} / div_k)`.
    pub fn push(&mut self, hop: &HopRecord<R>) {
        self.len += 1;
        if self.dead || !hop.pair_alloc.is_positive() {
            self.dead = true;
            return;
        }
        let carried = self.conv_out.clone() * self.scale.clone();
        let ratio = carried / hop.div_in.clone();
        if ratio > R::one() {
            self.scale = R::one();
            self.argmin = self.len;
        } else {
            self.scale = ratio;
        }
        self.product = self.product.clone() * hop.pair_alloc.clone() / self.conv_out.clone();
        self.conv_out = hop.conv_out.clone();
    }

    pub fn extended(&self, hop: &HopRecord<R>) -> Self {
        let mut next = self.clone();
        next.push(hop);
        next
    }

    /// Allocation of the hops seen so far.
    pub fn value(&self) -> R {
        if self.dead {
            R::zero()
        } else {
            self.scale.clone() * self.product.clone()
        }
    }

    pub fn scale(&self) -> &R {
        &self.scale
    }

    pub fn argmin(&self) -> usize {
        if self.dead {
            1
        } else {
            self.argmin
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_valid(&self) -> bool {
        !self.dead
    }
}

/// GMA through the recursive scaling factors, `value = f_l * prod M_k / prod_{k<l} conv_k`.
pub fn gma_recursive<R: Resource>(view: &PathView<R>) -> AllocationTrace<R> {
    let hops = view.hops();
    let mut acc = GmaAccumulator::start(&hops[0]);
    let mut scaling_factors = Vec::with_capacity(hops.len());
    let mut prefix_allocs = Vec::with_capacity(hops.len());
    if acc.is_valid() {
        scaling_factors.push(acc.scale().clone());
    }
    prefix_allocs.push(acc.value());
    for h in &hops[1..] {
        acc.push(h);
        if acc.is_valid() {
            scaling_factors.push(acc.scale().clone());
        }
        prefix_allocs.push(acc.value());
    }
    AllocationTrace {
        value: acc.value(),
        argmin_index: acc.argmin(),
        scaling_factors,
        prefix_allocs,
    }
}

/// GMA through its closed form
/// `min_x (prod_{k<x} M_k/conv_k) * M_x * (prod_{k>x} M_k/div_k)`,
/// evaluated with prefix and suffix products in linear time.
///
/// Prefix allocations come from `G_k = min(G_{k-1} * M_k/div_k, prod_{i<k}(M_i/conv_i) * M_k)`
/// and the scaling factors are recovered as `G_k / (prod_{i<k}(M_i/conv_i) * M_k)`.
pub fn gma_direct<R: Resource>(view: &PathView<R>) -> AllocationTrace<R> {
    let hops = view.hops();
    let l = hops.len();
    let valid_len = view.first_zero().unwrap_or(l);

    let mut prefix_allocs = Vec::with_capacity(l);
    let mut scaling_factors = Vec::with_capacity(valid_len);
    // towards[k] = prod_{i<k} M_i / conv_i
    let mut towards = R::one();
    let mut g = R::zero();
    for (k, h) in hops[..valid_len].iter().enumerate() {
        let own = towards.clone() * h.pair_alloc.clone();
        g = if k == 0 {
            own.clone()
        } else {
            let carried = g * h.pair_alloc.clone() / h.div_in.clone();
            if carried < own {
                carried
            } else {
                own.clone()
            }
        };
        scaling_factors.push(g.clone() / own);
        prefix_allocs.push(g.clone());
        towards = towards * h.pair_alloc.clone() / h.conv_out.clone();
    }
    prefix_allocs.resize(l, R::zero());

    if valid_len < l {
        return AllocationTrace {
            value: R::zero(),
            argmin_index: 1,
            scaling_factors,
            prefix_allocs,
        };
    }

    // suffix[x] = prod_{k>x} M_k / div_k
    let mut suffix = vec![R::one(); l];
    for x in (0..l - 1).rev() {
        let h = &hops[x + 1];
        suffix[x] = suffix[x + 1].clone() * h.pair_alloc.clone() / h.div_in.clone();
    }
    let mut towards = R::one();
    let mut best: Option<(R, usize)> = None;
    for (x, h) in hops.iter().enumerate() {
        let term = towards.clone() * h.pair_alloc.clone() * suffix[x].clone();
        if best.as_ref().is_none_or(|(b, _)| term < *b) {
            best = Some((term, x + 1));
        }
        towards = towards * h.pair_alloc.clone() / h.conv_out.clone();
    }
    let (value, argmin_index) = best.expect("non-empty view");
    AllocationTrace {
        value,
        argmin_index,
        scaling_factors,
        prefix_allocs,
    }
}

/// GMA value of the first `k` hops.
pub fn gma_prefix<R: Resource>(view: &PathView<R>, k: usize) -> Result<R> {
    let prefix = view.prefix(k)?;
    let hops = prefix.hops();
    let mut acc = GmaAccumulator::start(&hops[0]);
    for h in &hops[1..] {
        acc.push(h);
    }
    Ok(acc.value())
}

/// Allocator selector for audits and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Allocator {
    A1,
    A2,
    Gma,
}

impl Allocator {
    pub const ALL: [Allocator; 3] = [Allocator::A1, Allocator::A2, Allocator::Gma];

    pub fn allocate<R: Resource>(self, view: &PathView<R>) -> R {
        match self {
            Allocator::A1 => alloc_a1(view),
            Allocator::A2 => alloc_a2(view),
            Allocator::Gma => gma_direct(view).value,
        }
    }
}

impl fmt::Display for Allocator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Allocator::A1 => "A1",
            Allocator::A2 => "A2",
            Allocator::Gma => "GMA",
        })
    }
}
