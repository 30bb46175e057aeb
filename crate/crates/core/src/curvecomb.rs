//! Combinatorics of plane-curve arrangements: incidence graphs and the
//! splitting covers built from cyclic splitting data.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::cover::GaloisCover;
use crate::error::{invalid, Result};
use crate::fingroup::FiniteGroup;
use crate::multigraph::{GraphMap, Multigraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    pub degree: u32,
}

/// A local branch at a singular point, lying on one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub component: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub id: String,
    pub branches: Vec<Branch>,
    /// Admits a point with fewer than two branches.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub marked: bool,
}

impl SingularPoint {
    pub fn new(id: impl Into<String>, components: &[&str]) -> Self {
        Self {
            id: id.into(),
            branches: components.iter().map(|c| Branch { component: c.to_string() }).collect(),
            marked: false,
        }
    }
}

/// Irreducible components and the singular points off the branch locus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCombinatorics {
    pub components: Vec<Component>,
    pub points: Vec<SingularPoint>,
}

/// Partition label of point vertices in an incidence graph.
pub const POINT_CLASS: usize = 0;
/// Partition label of component vertices in an incidence graph.
pub const COMPONENT_CLASS: usize = 1;

/// Bipartite incidence graph; `partition[v]` is [`POINT_CLASS`] or
/// [`COMPONENT_CLASS`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub graph: Multigraph,
    pub partition: Vec<usize>,
}

impl CurveCombinatorics {
    pub fn validate(&self) -> Result<()> {
        let mut ids = HashSet::new();
        for c in &self.components {
            if !ids.insert(c.id.as_str()) {
                return invalid(format!("duplicate id {:?}", c.id));
            }
        }
        let components: HashSet<&str> = ids.clone();
        for p in &self.points {
            if !ids.insert(p.id.as_str()) {
                return invalid(format!("duplicate id {:?}", p.id));
            }
            if p.branches.len() < 2 && !p.marked {
                return invalid(format!("point {:?} has fewer than two branches and is not marked", p.id));
            }
            if let Some(b) = p.branches.iter().find(|b| !components.contains(b.component.as_str())) {
                return invalid(format!("point {:?} has a branch on unknown component {:?}", p.id, b.component));
            }
        }
        Ok(())
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Point vertices first (in input order), then component vertices; one
    /// edge `P#b` per branch `b` (1-based), directed from point to component.
    pub fn incidence_graph(&self) -> Result<IncidenceGraph> {
        self.validate()?;
        let mut graph = Multigraph::new();
        let mut partition = Vec::new();
        for p in &self.points {
            graph.add_vertex(p.id.clone())?;
            partition.push(POINT_CLASS);
        }
        for c in &self.components {
            graph.add_vertex(c.id.clone())?;
            partition.push(COMPONENT_CLASS);
        }
        for p in &self.points {
            for (b, branch) in p.branches.iter().enumerate() {
                graph.add_edge_by_ids(branch_edge_id(&p.id, b), &p.id, &branch.component)?;
            }
        }
        Ok(IncidenceGraph { graph, partition })
    }
}

fn branch_edge_id(point: &str, b: usize) -> String {
    format!("{point}#{}", b + 1)
}

/// Data of a ℤ_m splitting cover: per-component splitting numbers and
/// per-branch offsets.
///
/// Over a point `P` the fiber is `P@0, …, P@(m-1)`; over a component `C` it is
/// `C@0, …, C@(s_C-1)`. The branch `b` at `P` on `C` with offset `o` lifts to
/// `m` edges joining `P@j` to `C@((j - o) mod s_C)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicSplittingData {
    pub m: usize,
    pub s: BTreeMap<String, usize>,
    pub offsets: BTreeMap<String, Vec<i64>>,
}

impl CyclicSplittingData {
    /// All splitting numbers 1 and all offsets 0.
    pub fn trivial(curve: &CurveCombinatorics, m: usize) -> Self {
        Self {
            m,
            s: curve.components.iter().map(|c| (c.id.clone(), 1)).collect(),
            offsets: curve.points.iter().map(|p| (p.id.clone(), vec![0; p.branches.len()])).collect(),
        }
    }

    /// Checks the data against `curve` and returns offsets reduced modulo the
    /// splitting number of each branch's component.
    pub fn reduced_offsets(&self, curve: &CurveCombinatorics) -> Result<BTreeMap<String, Vec<usize>>> {
        if self.m == 0 {
            return invalid("cover order m must be positive");
        }
        for c in &curve.components {
            match self.s.get(&c.id) {
                None => return invalid(format!("missing splitting number for component {:?}", c.id)),
                Some(&s) if s == 0 || !self.m.is_multiple_of(s) => {
                    return invalid(format!("splitting number {s} of {:?} does not divide m = {}", c.id, self.m))
                }
                Some(_) => {}
            }
        }
        if let Some(extra) = self.s.keys().find(|k| curve.component_index(k).is_none()) {
            return invalid(format!("splitting number given for unknown component {extra:?}"));
        }
        let mut out = BTreeMap::new();
        for p in &curve.points {
            let Some(offs) = self.offsets.get(&p.id) else {
                return invalid(format!("missing offsets for point {:?}", p.id));
            };
            if offs.len() != p.branches.len() {
                return invalid(format!(
                    "point {:?} has {} branches but {} offsets",
                    p.id,
                    p.branches.len(),
                    offs.len()
                ));
            }
            let reduced = offs
                .iter()
                .zip(&p.branches)
                .map(|(&o, b)| o.rem_euclid(self.s[&b.component] as i64) as usize)
                .collect();
            out.insert(p.id.clone(), reduced);
        }
        if let Some(extra) = self.offsets.keys().find(|k| !curve.points.iter().any(|p| &p.id == *k)) {
            return invalid(format!("offsets given for unknown point {extra:?}"));
        }
        Ok(out)
    }
}

/// The ℤ_m splitting cover over the incidence graph of `curve`, with
/// `[1]` shifting every fiber index by one.
pub fn build_splitting_cover(curve: &CurveCombinatorics, data: &CyclicSplittingData) -> Result<GaloisCover> {
    let offsets = data.reduced_offsets(curve)?;
    let base = curve.incidence_graph()?.graph;
    let m = data.m;
    let group = FiniteGroup::cyclic(m)?.into_ref();

    let mut total = Multigraph::new();
    let mut phi_v = Vec::new();
    // first lift index and fiber size per base vertex
    let mut fiber_start = Vec::with_capacity(base.vertex_count());
    let mut fiber_size = Vec::with_capacity(base.vertex_count());
    for v in 0..base.vertex_count() {
        let id = base.vertex_id(v);
        let size = data.s.get(id).copied().unwrap_or(m);
        fiber_start.push(total.vertex_count());
        fiber_size.push(size);
        for j in 0..size {
            total.add_vertex(format!("{id}@{j}"))?;
            phi_v.push(v);
        }
    }
    let mut phi_e = Vec::new();
    for p in &curve.points {
        let pv = base.vertex(&p.id)?;
        for (b, branch) in p.branches.iter().enumerate() {
            let e = base.edge_by_id(&branch_edge_id(&p.id, b))?;
            let cv = base.vertex(&branch.component)?;
            let (s, o) = (fiber_size[cv], offsets[&p.id][b]);
            for j in 0..m {
                let k = (j + s - o) % s;
                total.add_edge(
                    format!("{}@{j}", base.edge(e).id),
                    fiber_start[pv] + j,
                    fiber_start[cv] + k,
                )?;
                phi_e.push(e);
            }
        }
    }
    let action = (0..m)
        .map(|g| {
            let vertices = (0..total.vertex_count())
                .map(|v| {
                    let b = phi_v[v];
                    let j = v - fiber_start[b];
                    fiber_start[b] + (j + g) % fiber_size[b]
                })
                .collect();
            // lifts of each base edge are consecutive blocks of m
            let edges = (0..total.edge_count()).map(|e| e - e % m + (e % m + g) % m).collect();
            GraphMap { vertices, edges }
        })
        .collect();
    let phi = GraphMap { vertices: phi_v, edges: phi_e };
    GaloisCover::new(group, total, base, phi, action)
}

/// Partition labels pulled back to the total graph of a splitting cover.
pub fn total_partition(cover: &GaloisCover, incidence: &IncidenceGraph) -> Vec<usize> {
    cover.phi().vertices.iter().map(|&b| incidence.partition[b]).collect()
}

/// Size of the fiber over the component vertex `component`.
pub fn splitting_number(cover: &GaloisCover, component: &str) -> Result<usize> {
    let v = cover.base().vertex(component)?;
    Ok(cover.fiber_vertices(v)?.len())
}

/// Number of connected components of the total graph.
pub fn connected_number(cover: &GaloisCover) -> usize {
    cover.total().component_count()
}
