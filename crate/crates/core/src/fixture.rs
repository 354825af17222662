//! The five-node example graph used by the worked examples.
//!
//! Interfaces carry globally unique names. Locals: `a` (A1), `q` (A), `r` (B),
//! `h` (C), `k` (D). Links, all with capacity 10 in both directions:
//! `A1.b - A.c`, `A.d - B.e`, `B.f - C.g`, `C.i - D.j`.
//!
//! Every pair allocation is bidirectional:
//!
//! | node | pairs                              |
//! |------|------------------------------------|
//! | A1   | a-b 1                              |
//! | A    | c-d 1, c-q 1, d-q 1                |
//! | B    | r-e 2, e-f 2, f-r 2                |
//! | C    | g-h 1, g-i 3                       |
//! | D    | j-k 3                              |
//!
//! Only the quantities read by the worked examples are pinned down by them
//! (`div(A1,b)=1`, `div(A,c)=div(A,d)=conv(A,c)=2`, `div(B,e)=div(B,f)=conv(B,e)=4`,
//! `div(C,g)=4`); node D and the entries `c-q`, `d-q`, `f-r`, `g-i` exist only
//! to make those sums come out and are otherwise arbitrary.

use crate::graph::{AllocationGraph, GraphBuilder, Hop, NodeId, Path};
use crate::resource::{Rational, Resource};

fn q(n: u64) -> Rational {
    Rational::from_u64(n)
}

pub fn example_graph() -> AllocationGraph<Rational> {
    let mut b = GraphBuilder::new();
    let a1 = b.add_node("A1").unwrap();
    let a = b.add_node("A").unwrap();
    let bn = b.add_node("B").unwrap();
    let c = b.add_node("C").unwrap();
    let d = b.add_node("D").unwrap();
    for (node, label) in [(a1, "a"), (a, "q"), (bn, "r"), (c, "h"), (d, "k")] {
        b.set_local_label(node, label).unwrap();
    }
    b.connect(a1, "b", a, "c", q(10), q(10)).unwrap();
    b.connect(a, "d", bn, "e", q(10), q(10)).unwrap();
    b.connect(bn, "f", c, "g", q(10), q(10)).unwrap();
    b.connect(c, "i", d, "j", q(10), q(10)).unwrap();
    let mut g = b.build().unwrap();

    let pairs: [(&str, &str, &str, u64); 10] = [
        ("A1", "a", "b", 1),
        ("A", "c", "d", 1),
        ("A", "c", "q", 1),
        ("A", "d", "q", 1),
        ("B", "r", "e", 2),
        ("B", "e", "f", 2),
        ("B", "f", "r", 2),
        ("C", "g", "h", 1),
        ("C", "g", "i", 3),
        ("D", "j", "k", 3),
    ];
    for (node, i, j, v) in pairs {
        set_bidirectional(&mut g, node, i, j, q(v));
    }
    g
}

fn set_bidirectional(g: &mut AllocationGraph<Rational>, node: &str, i: &str, j: &str, v: Rational) {
    let n = g.find_node(node).unwrap();
    let (ii, jj) = (g.interface(n, i).unwrap(), g.interface(n, j).unwrap());
    g.set_pair_allocation(n, ii, jj, v.clone()).unwrap();
    g.set_pair_allocation(n, jj, ii, v).unwrap();
}

/// The example graph after node A raises its `c-d` pair allocation to 9 (both
/// directions), so that `div(A,d) = conv(A,c) = 10`.
pub fn modified_graph() -> AllocationGraph<Rational> {
    let mut g = example_graph();
    set_bidirectional(&mut g, "A", "c", "d", q(9));
    g
}

fn hops<R: Resource>(g: &AllocationGraph<R>, spec: &[(&str, &str, &str)]) -> Path {
    Path::new(
        spec.iter()
            .map(|&(n, i, j)| {
                let node: NodeId = g.find_node(n).unwrap();
                Hop::new(node, g.interface(node, i).unwrap(), g.interface(node, j).unwrap())
            })
            .collect(),
    )
}

/// `[(A1,a,b), (A,c,d), (B,e,f), (C,g,h)]`
pub fn pi1<R: Resource>(g: &AllocationGraph<R>) -> Path {
    hops(g, &[("A1", "a", "b"), ("A", "c", "d"), ("B", "e", "f"), ("C", "g", "h")])
}

/// `[(B,r,e), (A,d,c), (A1,b,a)]`
pub fn pi2<R: Resource>(g: &AllocationGraph<R>) -> Path {
    hops(g, &[("B", "r", "e"), ("A", "d", "c"), ("A1", "b", "a")])
}

/// `[(C,h,g), (B,f,e), (A,d,c), (A1,b,a)]`, the reverse of `pi1`.
pub fn pi3<R: Resource>(g: &AllocationGraph<R>) -> Path {
    hops(g, &[("C", "h", "g"), ("B", "f", "e"), ("A", "d", "c"), ("A1", "b", "a")])
}
