//! Built-in example covers and curve data used by tests, the CLI and the
//! shipped JSON fixtures.

use std::collections::BTreeMap;

use crate::cover::GaloisCover;
use crate::curvecomb::{Component, CurveCombinatorics, CyclicSplittingData, SingularPoint};
use crate::fingroup::{FiniteGroup, GroupRef, Subset};
use crate::multigraph::{GraphMap, Multigraph};

/// The 𝔖₃-cover of the triangle `a → b → c → a`.
///
/// Upstairs, `aᵢ` are the left cosets of `⟨(1 2)⟩` with representatives
/// `id, (1 3), (2 3)`, `bᵢ` the left cosets of `⟨(1 3)⟩` with
/// representatives `id, (1 2), (2 3)`, and `cᵢ` the six elements in the order
/// `id, (1 3), (1 2), (1 2 3), (1 3 2), (2 3)`. The edge orbits are
/// `g·(a₁ → b₁)`, `g·(b₁ → c₁)`, `g·(c₁ → a₁)`; `G` acts by left
/// multiplication.
pub fn s3_cover() -> GaloisCover {
    let g = FiniteGroup::symmetric(3).expect("S3").into_ref();
    let el = |l: &str| g.index_of(l).expect("S3 label");
    let c_order: Vec<usize> = ["id", "(1 3)", "(1 2)", "(1 2 3)", "(1 3 2)", "(2 3)"].iter().map(|l| el(l)).collect();
    let a_reps: Vec<usize> = ["id", "(1 3)", "(2 3)"].iter().map(|l| el(l)).collect();
    let b_reps: Vec<usize> = ["id", "(1 2)", "(2 3)"].iter().map(|l| el(l)).collect();
    let h1 = g.generated_subgroup(&[el("(1 2)")]);
    let h2 = g.generated_subgroup(&[el("(1 3)")]);

    let mut base = Multigraph::new();
    for v in ["a", "b", "c"] {
        base.add_vertex(v).expect("fresh id");
    }
    base.add_edge_by_ids("e_ab", "a", "b").expect("valid edge");
    base.add_edge_by_ids("e_bc", "b", "c").expect("valid edge");
    base.add_edge_by_ids("e_ca", "c", "a").expect("valid edge");

    let mut total = Multigraph::new();
    let mut phi_v = Vec::new();
    for (prefix, count, over) in [("a", 3, 0), ("b", 3, 1), ("c", 6, 2)] {
        for i in 1..=count {
            total.add_vertex(format!("{prefix}{i}")).expect("fresh id");
            phi_v.push(over);
        }
    }
    let a_vertex = |x: usize| coset_index(&g, &a_reps, &h1, x);
    let b_vertex = |x: usize| 3 + coset_index(&g, &b_reps, &h2, x);
    let c_vertex = |x: usize| 6 + c_order.iter().position(|&c| c == x).expect("element");

    let mut phi_e = Vec::new();
    // edge k of each orbit is the translate by c_order[k]
    for (name, over) in [("e_ab", 0), ("e_bc", 1), ("e_ca", 2)] {
        for (k, &x) in c_order.iter().enumerate() {
            let (i, t) = match over {
                0 => (a_vertex(x), b_vertex(x)),
                1 => (b_vertex(x), c_vertex(x)),
                _ => (c_vertex(x), a_vertex(x)),
            };
            total.add_edge(format!("{name}{}", k + 1), i, t).expect("valid edge");
            phi_e.push(over);
        }
    }
    let phi = GraphMap { vertices: phi_v, edges: phi_e };

    let action = g
        .elements()
        .map(|h| {
            let mut vertices = Vec::with_capacity(12);
            for &r in &a_reps {
                vertices.push(a_vertex(g.mul(h, r)));
            }
            for &r in &b_reps {
                vertices.push(b_vertex(g.mul(h, r)));
            }
            for &x in &c_order {
                vertices.push(c_vertex(g.mul(h, x)));
            }
            let mut edges = Vec::with_capacity(18);
            for orbit in 0..3 {
                for &x in &c_order {
                    let k = c_order.iter().position(|&c| c == g.mul(h, x)).expect("element");
                    edges.push(orbit * 6 + k);
                }
            }
            GraphMap { vertices, edges }
        })
        .collect();
    GaloisCover::new(g, total, base, phi, action).expect("S3 fixture shapes")
}

fn coset_index(g: &GroupRef, reps: &[usize], h: &Subset, x: usize) -> usize {
    reps.iter()
        .position(|&r| h.contains(g.mul(g.inv(r), x)))
        .expect("representatives cover every coset")
}

/// A six-nodal sextic `C1` whose pull-back under a double cover splits into
/// two components meeting at the twelve preimages of the nodes.
pub fn split_sextic() -> (CurveCombinatorics, CyclicSplittingData) {
    nodal_sextic("C1", "v1", 2, [0, 1])
}

/// A six-nodal sextic `C2` with irreducible pull-back under a double cover.
pub fn irreducible_sextic() -> (CurveCombinatorics, CyclicSplittingData) {
    nodal_sextic("C2", "v2", 1, [0, 0])
}

fn nodal_sextic(component: &str, prefix: &str, s: usize, offsets: [i64; 2]) -> (CurveCombinatorics, CyclicSplittingData) {
    let points: Vec<SingularPoint> =
        (1..=6).map(|j| SingularPoint::new(format!("{prefix}{j}"), &[component, component])).collect();
    let data = CyclicSplittingData {
        m: 2,
        s: BTreeMap::from([(component.to_string(), s)]),
        offsets: points.iter().map(|p| (p.id.clone(), offsets.to_vec())).collect(),
    };
    let curve = CurveCombinatorics { components: vec![Component { id: component.into(), degree: 6 }], points };
    (curve, data)
}
