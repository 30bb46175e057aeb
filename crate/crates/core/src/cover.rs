//! Branched Galois covers of graphs: validation, fibers, frontier
//! propagation and net voltage sets.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{invalid, Result};
use crate::fingroup::{ConjugacyClass, GroupAutomorphism, GroupRef, Subset, same_group};
use crate::multigraph::{DirectedEdge, GraphMap, Multigraph, Sign, Walk};

/// A graph map `φ: total → base` together with a `G`-action on `total`.
///
/// The action is stored for every group element (expanded from generators
/// when built with [`GaloisCover::from_generators`]). Construction only checks
/// shapes; the covering axioms are checked by [`GaloisCover::validate`].
#[derive(Clone, Debug)]
pub struct GaloisCover {
    group: GroupRef,
    total: Multigraph,
    base: Multigraph,
    phi: GraphMap,
    action: Vec<GraphMap>,
    generators: Vec<usize>,
    vertex_fibers: Vec<Vec<usize>>,
    edge_fibers: Vec<Vec<usize>>,
}

/// Equal data: same group, graphs, projection and action of every element.
impl PartialEq for GaloisCover {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group)
            && self.total == other.total
            && self.base == other.base
            && self.phi == other.phi
            && self.action == other.action
    }
}

impl GaloisCover {
    /// Builds a cover from the action of every group element.
    pub fn new(group: GroupRef, total: Multigraph, base: Multigraph, phi: GraphMap, action: Vec<GraphMap>) -> Result<Self> {
        if action.len() != group.order() {
            return invalid(format!("action lists {} maps for a group of order {}", action.len(), group.order()));
        }
        let generators = group.generators();
        Self::assemble(group, total, base, phi, action, generators)
    }

    /// Builds a cover from the action of generators, closing under products.
    ///
    /// Each element's map is the first product of generators reaching it in
    /// breadth-first order; inconsistent generator data is left for
    /// [`GaloisCover::validate`] to report as a homomorphism failure.
    pub fn from_generators(
        group: GroupRef,
        total: Multigraph,
        base: Multigraph,
        phi: GraphMap,
        generators: Vec<(usize, GraphMap)>,
    ) -> Result<Self> {
        let n = group.order();
        for (g, map) in &generators {
            if *g >= n {
                return invalid(format!("generator index {g} out of range"));
            }
            check_shape(map, &total, &total, &format!("action of {}", group.label(*g)))?;
        }
        let mut action: Vec<Option<GraphMap>> = vec![None; n];
        action[group.identity()] = Some(GraphMap::identity(&total));
        for (g, map) in &generators {
            action[*g] = Some(map.clone());
        }
        let mut queue: VecDeque<usize> = VecDeque::from([group.identity()]);
        let mut visited = vec![false; n];
        visited[group.identity()] = true;
        while let Some(h) = queue.pop_front() {
            for (g, gmap) in &generators {
                let gh = group.mul(*g, h);
                if !visited[gh] {
                    visited[gh] = true;
                    if action[gh].is_none() {
                        let hmap = action[h].as_ref().expect("visited elements have maps");
                        action[gh] = Some(gmap.compose(hmap));
                    }
                    queue.push_back(gh);
                }
            }
        }
        if let Some(missing) = visited.iter().position(|&v| !v) {
            return invalid(format!("action generators do not generate the group (missing {})", group.label(missing)));
        }
        let gens = generators.iter().map(|(g, _)| *g).collect();
        let action = action.into_iter().map(|m| m.expect("closure covers the group")).collect();
        Self::assemble(group, total, base, phi, action, gens)
    }

    /// The trivial-group cover `id: g → g`.
    pub fn identity(base: Multigraph) -> Result<Self> {
        let group = crate::fingroup::FiniteGroup::cyclic(1)?.into_ref();
        let phi = GraphMap::identity(&base);
        let action = vec![GraphMap::identity(&base)];
        Self::new(group, base.clone(), base, phi, action)
    }

    fn assemble(
        group: GroupRef,
        total: Multigraph,
        base: Multigraph,
        phi: GraphMap,
        action: Vec<GraphMap>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        check_shape(&phi, &total, &base, "phi")?;
        for (g, map) in action.iter().enumerate() {
            check_shape(map, &total, &total, &format!("action of {}", group.label(g)))?;
        }
        let mut vertex_fibers = vec![Vec::new(); base.vertex_count()];
        for (v, &b) in phi.vertices.iter().enumerate() {
            vertex_fibers[b].push(v);
        }
        let mut edge_fibers = vec![Vec::new(); base.edge_count()];
        for (e, &b) in phi.edges.iter().enumerate() {
            edge_fibers[b].push(e);
        }
        Ok(Self { group, total, base, phi, action, generators, vertex_fibers, edge_fibers })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn total(&self) -> &Multigraph {
        &self.total
    }

    pub fn base(&self) -> &Multigraph {
        &self.base
    }

    pub fn phi(&self) -> &GraphMap {
        &self.phi
    }

    /// Elements whose maps were supplied (or a generating set for full tables).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn action(&self, g: usize) -> &GraphMap {
        &self.action[g]
    }

    #[inline]
    pub fn act_vertex(&self, g: usize, v: usize) -> usize {
        self.action[g].vertices[v]
    }

    #[inline]
    pub fn act_edge(&self, g: usize, e: usize) -> usize {
        self.action[g].edges[e]
    }

    /// `φ_V⁻¹(v)` in ascending index order.
    pub fn fiber_vertices(&self, v: usize) -> Result<&[usize]> {
        match self.vertex_fibers.get(v) {
            Some(f) => Ok(f),
            None => invalid(format!("base vertex {v} does not exist")),
        }
    }

    /// `φ_E⁻¹(e)` in ascending index order.
    pub fn fiber_edges(&self, e: usize) -> Result<&[usize]> {
        match self.edge_fibers.get(e) {
            Some(f) => Ok(f),
            None => invalid(format!("base edge {e} does not exist")),
        }
    }

    pub fn stabilizer(&self, v: usize) -> Subset {
        Subset::new(self.group.elements().filter(|&g| self.act_vertex(g, v) == v))
    }

    /// Every vertex fiber has `|G|` elements.
    pub fn is_unramified(&self) -> bool {
        self.vertex_fibers.iter().all(|f| f.len() == self.group.order())
    }

    /// Checks every covering axiom and reports a witness for each failure.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.push("maps", self.check_maps());
        report.push("homomorphism", self.check_homomorphism());
        report.push("fiber_preservation", self.check_fiber_preservation());
        report.push("direction_preservation", self.check_directions());
        report.push("quotient", self.check_quotient());
        report.push("free_edge_action", self.check_free_edges());
        report.push("fiber_transitivity", self.check_transitivity());
        report
    }

    fn check_maps(&self) -> Option<String> {
        if let Err(e) = self.phi.check_map(&self.total, &self.base) {
            return Some(format!("phi: {e}"));
        }
        for g in self.group.elements() {
            let map = &self.action[g];
            if let Err(e) = map.check_map(&self.total, &self.total) {
                return Some(format!("action of {}: {e}", self.group.label(g)));
            }
            if !map.is_bijective(&self.total) {
                return Some(format!("action of {} is not bijective", self.group.label(g)));
            }
        }
        None
    }

    fn check_homomorphism(&self) -> Option<String> {
        let id = self.group.identity();
        if self.action[id] != GraphMap::identity(&self.total) {
            return Some("identity element does not act trivially".into());
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                if self.action[gh] != self.action[g].compose(&self.action[h]) {
                    return Some(format!(
                        "action({}) differs from action({})∘action({})",
                        self.group.label(gh),
                        self.group.label(g),
                        self.group.label(h)
                    ));
                }
            }
        }
        None
    }

    fn check_fiber_preservation(&self) -> Option<String> {
        for g in self.group.elements() {
            for v in 0..self.total.vertex_count() {
                if self.phi.vertices[self.act_vertex(g, v)] != self.phi.vertices[v] {
                    return Some(format!(
                        "{} moves vertex {} out of its fiber",
                        self.group.label(g),
                        self.total.vertex_id(v)
                    ));
                }
            }
            for e in 0..self.total.edge_count() {
                if self.phi.edges[self.act_edge(g, e)] != self.phi.edges[e] {
                    return Some(format!(
                        "{} moves edge {} out of its fiber",
                        self.group.label(g),
                        self.total.edge(e).id
                    ));
                }
            }
        }
        None
    }

    fn check_directions(&self) -> Option<String> {
        for (e, edge) in self.total.edges().iter().enumerate() {
            let image = self.base.edge(self.phi.edges[e]);
            if self.phi.vertices[edge.init] != image.init || self.phi.vertices[edge.term] != image.term {
                return Some(format!("phi reverses the direction of edge {}", edge.id));
            }
            for g in self.group.elements() {
                let target = self.total.edge(self.act_edge(g, e));
                if self.act_vertex(g, edge.init) != target.init || self.act_vertex(g, edge.term) != target.term {
                    return Some(format!("{} reverses the direction of edge {}", self.group.label(g), edge.id));
                }
            }
        }
        None
    }

    fn check_quotient(&self) -> Option<String> {
        if let Some(v) = self.vertex_fibers.iter().position(|f| f.is_empty()) {
            return Some(format!("base vertex {} has an empty fiber", self.base.vertex_id(v)));
        }
        if let Some(e) = self.edge_fibers.iter().position(|f| f.is_empty()) {
            return Some(format!("base edge {} has an empty fiber", self.base.edge(e).id));
        }
        // orbits must map injectively into the base
        for fiber in &self.vertex_fibers {
            let orbit = self.vertex_orbit(fiber[0]);
            if orbit.len() != fiber.len() {
                let stray = fiber.iter().find(|v| !orbit.contains(v)).expect("fiber larger than orbit");
                return Some(format!(
                    "vertices {} and {} lie over the same base vertex but in different orbits",
                    self.total.vertex_id(fiber[0]),
                    self.total.vertex_id(*stray)
                ));
            }
        }
        for fiber in &self.edge_fibers {
            let orbit: Vec<usize> = self.group.elements().map(|g| self.act_edge(g, fiber[0])).collect();
            if let Some(stray) = fiber.iter().find(|e| !orbit.contains(e)) {
                return Some(format!(
                    "edges {} and {} lie over the same base edge but in different orbits",
                    self.total.edge(fiber[0]).id,
                    self.total.edge(*stray).id
                ));
            }
        }
        None
    }

    fn check_free_edges(&self) -> Option<String> {
        if self.base.edge_count() == 0 {
            return None;
        }
        let id = self.group.identity();
        for g in self.group.elements().filter(|&g| g != id) {
            if let Some(e) = (0..self.total.edge_count()).find(|&e| self.act_edge(g, e) == e) {
                return Some(format!("{} fixes edge {}", self.group.label(g), self.total.edge(e).id));
            }
        }
        None
    }

    fn check_transitivity(&self) -> Option<String> {
        for fiber in self.vertex_fibers.iter().filter(|f| !f.is_empty()) {
            let orbit = self.vertex_orbit(fiber[0]);
            if let Some(v) = fiber.iter().find(|v| !orbit.contains(v)) {
                return Some(format!(
                    "no element maps vertex {} to {}",
                    self.total.vertex_id(fiber[0]),
                    self.total.vertex_id(*v)
                ));
            }
        }
        for fiber in self.edge_fibers.iter().filter(|f| !f.is_empty()) {
            if let Some(e) = fiber.iter().find(|&&e| self.group.elements().all(|g| self.act_edge(g, fiber[0]) != e)) {
                return Some(format!(
                    "no element maps edge {} to {}",
                    self.total.edge(fiber[0]).id,
                    self.total.edge(*e).id
                ));
            }
        }
        None
    }

    fn vertex_orbit(&self, v: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.group.elements().map(|g| self.act_vertex(g, v)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    /// Frontier sets `Ṽ_0, …, Ṽ_n` of a base walk from the lift `start`.
    ///
    /// `Ṽ_0 = {start}`; `Ṽ_i` collects the terminal vertices of lifts of the
    /// i-th directed edge whose initial vertex lies in `Ṽ_{i-1}`.
    pub fn frontier_sets(&self, walk: &Walk, start: usize) -> Result<Vec<Vec<usize>>> {
        let walk = Walk::new(&self.base, walk.start, walk.steps.clone())?;
        if start >= self.total.vertex_count() {
            return invalid(format!("total vertex {start} does not exist"));
        }
        if self.phi.vertices[start] != walk.start {
            return invalid(format!(
                "{} does not lie over the walk's start {}",
                self.total.vertex_id(start),
                self.base.vertex_id(walk.start)
            ));
        }
        let mut frontiers = vec![vec![start]];
        let mut current = vec![false; self.total.vertex_count()];
        current[start] = true;
        for &step in &walk.steps {
            let mut next = vec![false; self.total.vertex_count()];
            for &lift in &self.edge_fibers[step.edge] {
                let (from, to) = self.total.endpoints(self.lift_step(step, lift));
                if current[from] {
                    next[to] = true;
                }
            }
            frontiers.push((0..next.len()).filter(|&v| next[v]).collect());
            current = next;
        }
        Ok(frontiers)
    }

    /// The directed lift of `step` along `lift`, oriented over the step.
    fn lift_step(&self, step: DirectedEdge, lift: usize) -> DirectedEdge {
        let edge = self.total.edge(lift);
        let base_edge = self.base.edge(step.edge);
        let aligned = self.phi.vertices[edge.init] == base_edge.init && self.phi.vertices[edge.term] == base_edge.term;
        DirectedEdge { edge: lift, sign: if aligned { step.sign } else { step.sign.flip() } }
    }

    /// `NV(γ, ṽ₀) = { g : g·ṽ₀ ∈ Ṽ_n }`. For a walk of length zero this is
    /// the stabilizer of `ṽ₀`.
    pub fn net_voltage_set(&self, walk: &Walk, start: usize) -> Result<Subset> {
        if !walk.is_closed(&self.base) {
            return invalid("net voltage needs a closed walk");
        }
        let frontiers = self.frontier_sets(walk, start)?;
        let last = frontiers.last().expect("at least the initial frontier");
        Ok(Subset::new(self.group.elements().filter(|&g| last.binary_search(&self.act_vertex(g, start)).is_ok())))
    }

    /// Net voltage class, computed at the first lift of the walk's start.
    pub fn net_voltage_class(&self, walk: &Walk) -> Result<ConjugacyClass> {
        let start = *self
            .fiber_vertices(walk.start)?
            .first()
            .ok_or_else(|| crate::Error::InvalidArgument("walk starts over an empty fiber".into()))?;
        Ok(ConjugacyClass::of_subset(&self.group, &self.net_voltage_set(walk, start)?))
    }

    /// Parses a base walk from vertex and edge ids.
    pub fn walk_from_ids(&self, start: &str, steps: &[(&str, Sign)]) -> Result<Walk> {
        Walk::from_ids(&self.base, start, steps)
    }
}

/// Equivalence test for covers of edgeless graphs: `θ_V` must match base
/// vertices so that `τ` carries each stabilizer to a conjugate of the
/// corresponding stabilizer.
pub fn edgeless_equivalent(c1: &GaloisCover, c2: &GaloisCover, theta_v: &[usize], tau: &GroupAutomorphism) -> Result<bool> {
    if c1.base.edge_count() > 0 || c2.base.edge_count() > 0 {
        return invalid("edgeless criterion needs edgeless base graphs");
    }
    if !same_group(c1.group(), c2.group()) || !same_group(c1.group(), tau.group()) {
        return invalid("covers and automorphism must share one group");
    }
    if !crate::multigraph::is_permutation(theta_v, c2.base.vertex_count()) || theta_v.len() != c1.base.vertex_count() {
        return invalid("vertex map is not a bijection between the base graphs");
    }
    for (v, &w) in theta_v.iter().enumerate() {
        let (Some(&x), Some(&y)) = (c1.vertex_fibers[v].first(), c2.vertex_fibers[w].first()) else {
            return invalid("empty fiber in an edgeless cover");
        };
        let lhs = ConjugacyClass::of_subset(c1.group(), &tau.apply_subset(&c1.stabilizer(x)));
        let rhs = ConjugacyClass::of_subset(c2.group(), &c2.stabilizer(y));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_shape(map: &GraphMap, from: &Multigraph, to: &Multigraph, what: &str) -> Result<()> {
    if map.vertices.len() != from.vertex_count() || map.edges.len() != from.edge_count() {
        return invalid(format!("{what}: map must assign every vertex and edge"));
    }
    if map.vertices.iter().any(|&v| v >= to.vertex_count()) || map.edges.iter().any(|&e| e >= to.edge_count()) {
        return invalid(format!("{what}: image out of range"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, failure: Option<String>) {
        self.checks.push(CheckResult { name, passed: failure.is_none(), witness: failure });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "{}: ok", c.name)?,
                Some(w) => writeln!(f, "{}: FAILED ({w})", c.name)?,
            }
        }
        Ok(())
    }
}
