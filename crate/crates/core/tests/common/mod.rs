//! Random instances shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use splitgraph::cover::GaloisCover;
use splitgraph::curvecomb::{build_splitting_cover, Component, CurveCombinatorics, CyclicSplittingData, SingularPoint};
use splitgraph::multigraph::{DirectedEdge, Multigraph, Sign, Walk};

pub struct Instance {
    pub curve: CurveCombinatorics,
    pub data: CyclicSplittingData,
    pub cover: GaloisCover,
}

pub fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// A curve with 1 to 3 components and 1 to `max_points` points of 2 or 3
/// branches each.
pub fn random_curve<R: Rng>(rng: &mut R, max_points: usize) -> CurveCombinatorics {
    let nc = rng.gen_range(1..=3);
    let components: Vec<Component> =
        (0..nc).map(|i| Component { id: format!("C{}", i + 1), degree: rng.gen_range(1..=6) }).collect();
    let np = rng.gen_range(1..=max_points);
    let points = (0..np)
        .map(|i| {
            let k = rng.gen_range(2..=3);
            let comps: Vec<&str> = (0..k).map(|_| components.choose(rng).unwrap().id.as_str()).collect();
            SingularPoint::new(format!("P{}", i + 1), &comps)
        })
        .collect();
    CurveCombinatorics { components, points }
}

/// Random splitting data with `m ≤ max_m`; offsets are drawn from a range
/// wider than `s` to exercise reduction.
pub fn random_data<R: Rng>(rng: &mut R, curve: &CurveCombinatorics, max_m: usize) -> CyclicSplittingData {
    let m = rng.gen_range(1..=max_m);
    let divs = divisors(m);
    let s: BTreeMap<String, usize> = curve.components.iter().map(|c| (c.id.clone(), *divs.choose(rng).unwrap())).collect();
    let offsets = curve
        .points
        .iter()
        .map(|p| {
            let offs = p.branches.iter().map(|b| rng.gen_range(-(s[&b.component] as i64)..2 * s[&b.component] as i64)).collect();
            (p.id.clone(), offs)
        })
        .collect();
    CyclicSplittingData { m, s, offsets }
}

pub fn random_instance<R: Rng>(rng: &mut R, max_points: usize, max_m: usize) -> Instance {
    let curve = random_curve(rng, max_points);
    let data = random_data(rng, &curve, max_m);
    let cover = build_splitting_cover(&curve, &data).expect("random data is valid");
    Instance { curve, data, cover }
}

/// A closed walk from `start`: a random walk of up to `max_out` steps
/// followed by a shortest path back.
pub fn random_closed_walk<R: Rng>(g: &Multigraph, start: usize, max_out: usize, rng: &mut R) -> Walk {
    let len = rng.gen_range(0..=max_out);
    let mut steps = Vec::new();
    let mut at = start;
    for _ in 0..len {
        let inc = g.incident_edges(at);
        if inc.is_empty() {
            break;
        }
        let e = *inc.choose(rng).unwrap();
        let edge = g.edge(e);
        let step = if edge.init == at && (edge.term != at || rng.gen_bool(0.5)) {
            DirectedEdge { edge: e, sign: Sign::Plus }
        } else {
            DirectedEdge { edge: e, sign: Sign::Minus }
        };
        at = g.endpoints(step).1;
        steps.push(step);
    }
    steps.extend(shortest_path(g, at, start));
    Walk::new(g, start, steps).expect("walk is connected")
}

fn shortest_path(g: &Multigraph, from: usize, to: usize) -> Vec<DirectedEdge> {
    let mut prev: Vec<Option<(usize, DirectedEdge)>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &e in g.incident_edges(v) {
            for sign in [Sign::Plus, Sign::Minus] {
                let step = DirectedEdge { edge: e, sign };
                let (a, b) = g.endpoints(step);
                if a == v && !seen[b] {
                    seen[b] = true;
                    prev[b] = Some((v, step));
                    queue.push_back(b);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut at = to;
    while at != from {
        let (p, step) = prev[at].expect("target reachable");
        path.push(step);
        at = p;
    }
    path.reverse();
    path
}

/// Splitting numbers and offsets met by a closed walk starting at a point
/// vertex, read directly off the splitting data: each visit to a component
/// contributes `o_out − o_in mod s`.
pub fn walk_offsets(inst: &Instance, walk: &Walk) -> (Vec<usize>, Vec<usize>) {
    let base = inst.cover.base();
    let offset_of = |e: usize| -> (usize, usize) {
        let id = &base.edge(e).id;
        let (point, b) = id.split_once('#').unwrap();
        let b: usize = b.parse::<usize>().unwrap() - 1;
        let p = inst.curve.points.iter().find(|p| p.id == point).unwrap();
        let s = inst.data.s[&p.branches[b].component];
        (s, inst.data.offsets[point][b].rem_euclid(s as i64) as usize)
    };
    let mut s_list = Vec::new();
    let mut alphas = Vec::new();
    for pair in walk.steps.chunks(2) {
        let (s, o_in) = offset_of(pair[0].edge);
        let (_, o_out) = offset_of(pair[1].edge);
        s_list.push(s);
        alphas.push((o_out + s - o_in) % s);
    }
    (s_list, alphas)
}
