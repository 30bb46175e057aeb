//! Finite multigraphs whose edges carry a chosen plus direction, walks on
//! them, and isomorphism search.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// Initial vertex of the plus direction.
    pub init: usize,
    /// Terminal vertex of the plus direction.
    pub term: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.init == self.term
    }
}

#[derive(Clone, Debug, Default)]
pub struct Multigraph {
    vertex_ids: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    /// Edge indices incident to each vertex (a loop appears once).
    incident: Vec<Vec<usize>>,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_ids == other.vertex_ids && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize> {
        let id = id.into();
        if self.vertex_index.contains_key(&id) {
            return invalid(format!("duplicate vertex id {id:?}"));
        }
        let v = self.vertex_ids.len();
        self.vertex_index.insert(id.clone(), v);
        self.vertex_ids.push(id);
        self.incident.push(Vec::new());
        Ok(v)
    }

    pub fn add_edge(&mut self, id: impl Into<String>, init: usize, term: usize) -> Result<usize> {
        let id = id.into();
        if self.edge_index.contains_key(&id) {
            return invalid(format!("duplicate edge id {id:?}"));
        }
        if init >= self.vertex_count() || term >= self.vertex_count() {
            return invalid(format!("edge {id:?} references an undeclared vertex"));
        }
        let e = self.edges.len();
        self.edge_index.insert(id.clone(), e);
        self.edges.push(Edge { id, init, term });
        self.incident[init].push(e);
        if term != init {
            self.incident[term].push(e);
        }
        Ok(e)
    }

    pub fn add_edge_by_ids(&mut self, id: impl Into<String>, init: &str, term: &str) -> Result<usize> {
        let (i, t) = (self.vertex(init)?, self.vertex(term)?);
        self.add_edge(id, i, t)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        match self.vertex_index.get(id) {
            Some(&v) => Ok(v),
            None => invalid(format!("unknown vertex {id:?}")),
        }
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_by_id(&self, id: &str) -> Result<usize> {
        match self.edge_index.get(id) {
            Some(&e) => Ok(e),
            None => invalid(format!("unknown edge {id:?}")),
        }
    }

    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Endpoint degree; a loop contributes two.
    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].iter().map(|&e| if self.edges[e].is_loop() { 2 } else { 1 }).sum()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.incident[v].iter().filter(|&&e| self.edges[e].is_loop()).count()
    }

    /// Number of edges with endpoint set `{u, v}`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.incident[u]
            .iter()
            .filter(|&&e| {
                let ed = &self.edges[e];
                (ed.init == u && ed.term == v) || (ed.init == v && ed.term == u)
            })
            .count()
    }

    /// Initial and terminal vertex of a directed edge.
    pub fn endpoints(&self, step: DirectedEdge) -> (usize, usize) {
        let e = &self.edges[step.edge];
        match step.sign {
            Sign::Plus => (e.init, e.term),
            Sign::Minus => (e.term, e.init),
        }
    }

    /// Connected components, counted with union-find.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.init), find(&mut parent, e.term));
            if a != b {
                parent[a] = b;
            }
        }
        (0..self.vertex_count()).filter(|&v| find(&mut parent, v) == v).count()
    }

    /// Every simple closed walk: each base point and each direction is listed
    /// separately, in deterministic DFS order.
    ///
    /// A closed walk `(v₀, …, vₙ)` is simple when `v₀, …, vₙ₋₁` are pairwise
    /// distinct. Walks that traverse one edge twice (back and forth along the
    /// same edge) are not cycles and are excluded.
    pub fn simple_closed_walks(&self) -> Vec<Walk> {
        let mut out = Vec::new();
        let mut on_path = vec![false; self.vertex_count()];
        let mut used = vec![false; self.edge_count()];
        let mut steps = Vec::new();
        for start in 0..self.vertex_count() {
            on_path[start] = true;
            self.extend_cycles(start, start, &mut on_path, &mut used, &mut steps, &mut out);
            on_path[start] = false;
        }
        out
    }

    fn extend_cycles(
        &self,
        start: usize,
        at: usize,
        on_path: &mut [bool],
        used: &mut [bool],
        steps: &mut Vec<DirectedEdge>,
        out: &mut Vec<Walk>,
    ) {
        for &e in &self.incident[at] {
            if used[e] {
                continue;
            }
            let edge = &self.edges[e];
            let mut dirs = Vec::with_capacity(2);
            if edge.init == at {
                dirs.push(Sign::Plus);
            }
            if edge.term == at {
                dirs.push(Sign::Minus);
            }
            for sign in dirs {
                let step = DirectedEdge { edge: e, sign };
                let (_, next) = self.endpoints(step);
                if next == start {
                    steps.push(step);
                    out.push(Walk { start, steps: steps.clone() });
                    steps.pop();
                } else if !on_path[next] {
                    on_path[next] = true;
                    used[e] = true;
                    steps.push(step);
                    self.extend_cycles(start, next, on_path, used, steps, out);
                    steps.pop();
                    used[e] = false;
                    on_path[next] = false;
                }
            }
        }
    }

    /// Lazily enumerates graph isomorphisms `self → other`. When
    /// `classes` is given, vertex `v` may only map to vertices `w` with
    /// `classes.0[v] == classes.1[w]` (e.g. partition labels).
    pub fn isomorphisms<'a>(
        &'a self,
        other: &'a Multigraph,
        classes: Option<(&'a [usize], &'a [usize])>,
    ) -> Isomorphisms<'a> {
        Isomorphisms::new(self, other, classes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub edge: usize,
    pub sign: Sign,
}

impl DirectedEdge {
    pub fn plus(edge: usize) -> Self {
        Self { edge, sign: Sign::Plus }
    }

    pub fn minus(edge: usize) -> Self {
        Self { edge, sign: Sign::Minus }
    }

    pub fn reversed(self) -> Self {
        Self { edge: self.edge, sign: self.sign.flip() }
    }
}

/// A walk stored as its start vertex and directed edges; intermediate
/// vertices are derived from the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    pub start: usize,
    pub steps: Vec<DirectedEdge>,
}

impl Walk {
    /// Checks consecutive compatibility against `g`.
    pub fn new(g: &Multigraph, start: usize, steps: Vec<DirectedEdge>) -> Result<Self> {
        if start >= g.vertex_count() {
            return invalid("walk starts at an unknown vertex");
        }
        let mut at = start;
        for (i, step) in steps.iter().enumerate() {
            if step.edge >= g.edge_count() {
                return invalid(format!("step {} uses an unknown edge", i + 1));
            }
            let (from, to) = g.endpoints(*step);
            if from != at {
                return invalid(format!(
                    "step {} ({}{}) does not start at {}",
                    i + 1,
                    g.edge(step.edge).id,
                    step.sign.symbol(),
                    g.vertex_id(at)
                ));
            }
            at = to;
        }
        Ok(Self { start, steps })
    }

    /// Builds a walk from vertex and edge ids, e.g. `("a", [("e1", Plus)])`.
    pub fn from_ids(g: &Multigraph, start: &str, steps: &[(&str, Sign)]) -> Result<Self> {
        let s = g.vertex(start)?;
        let steps = steps
            .iter()
            .map(|(e, sign)| Ok(DirectedEdge { edge: g.edge_by_id(e)?, sign: *sign }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, s, steps)
    }

    pub fn trivial(start: usize) -> Self {
        Self { start, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `v₀, v₁, …, vₙ`
    pub fn vertices(&self, g: &Multigraph) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.start);
        out.extend(self.steps.iter().map(|&s| g.endpoints(s).1));
        out
    }

    pub fn terminal(&self, g: &Multigraph) -> usize {
        self.steps.last().map_or(self.start, |&s| g.endpoints(s).1)
    }

    pub fn is_closed(&self, g: &Multigraph) -> bool {
        self.terminal(g) == self.start
    }

    pub fn is_simple(&self, g: &Multigraph) -> bool {
        if !self.is_closed(g) {
            return false;
        }
        let vs = self.vertices(g);
        let n = self.steps.len();
        let mut seen = vec![false; g.vertex_count()];
        for &v in &vs[..n.max(1).min(vs.len())] {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    fn require_closed(&self, g: &Multigraph, what: &str) -> Result<()> {
        if self.is_closed(g) {
            Ok(())
        } else {
            invalid(format!("{what} needs a closed walk"))
        }
    }

    /// `γ⁻¹ = (vₙ, eₙ^{-σₙ}, …, e₁^{-σ₁}, v₀)`
    pub fn inverse(&self, g: &Multigraph) -> Result<Self> {
        self.require_closed(g, "inverse walk")?;
        Ok(Self { start: self.start, steps: self.steps.iter().rev().map(|s| s.reversed()).collect() })
    }

    /// `γ₁γ₂`, requiring the terminal vertex of `self` to be the start of `other`.
    pub fn concat(&self, other: &Walk, g: &Multigraph) -> Result<Self> {
        if self.terminal(g) != other.start {
            return invalid(format!(
                "cannot concatenate: walk ends at {} but next starts at {}",
                g.vertex_id(self.terminal(g)),
                g.vertex_id(other.start)
            ));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(Self { start: self.start, steps })
    }

    /// `γ^{(j)}`: the same closed walk read from vertex `v_{j mod n}`.
    pub fn shift(&self, j: usize, g: &Multigraph) -> Result<Self> {
        self.require_closed(g, "shift")?;
        let n = self.steps.len();
        if n == 0 || j.is_multiple_of(n) {
            return Ok(self.clone());
        }
        let jb = j % n;
        let start = self.vertices(g)[jb];
        let mut steps = self.steps[jb..].to_vec();
        steps.extend_from_slice(&self.steps[..jb]);
        Ok(Self { start, steps })
    }

    pub fn display<'a>(&'a self, g: &'a Multigraph) -> WalkDisplay<'a> {
        WalkDisplay { walk: self, graph: g }
    }
}

pub struct WalkDisplay<'a> {
    walk: &'a Walk,
    graph: &'a Multigraph,
}

impl fmt::Display for WalkDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.graph;
        write!(f, "({}", g.vertex_id(self.walk.start))?;
        for &s in &self.walk.steps {
            write!(f, ", {}{}, {}", g.edge(s.edge).id, s.sign.symbol(), g.vertex_id(g.endpoints(s).1))?;
        }
        write!(f, ")")
    }
}

/// A pair of maps `(θ_V, θ_E)` between two graphs, by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphMap {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl GraphMap {
    pub fn identity(g: &Multigraph) -> Self {
        Self { vertices: (0..g.vertex_count()).collect(), edges: (0..g.edge_count()).collect() }
    }

    /// Checks `V(θ_E(e)) = θ_V(V(e))` for every edge.
    pub fn check_map(&self, from: &Multigraph, to: &Multigraph) -> std::result::Result<(), String> {
        if self.vertices.len() != from.vertex_count() || self.edges.len() != from.edge_count() {
            return Err("map does not cover every vertex and edge of its source".into());
        }
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= to.vertex_count()) {
            return Err(format!("vertex image {v} out of range"));
        }
        if let Some(&e) = self.edges.iter().find(|&&e| e >= to.edge_count()) {
            return Err(format!("edge image {e} out of range"));
        }
        for (e, edge) in from.edges().iter().enumerate() {
            let img = to.edge(self.edges[e]);
            let (a, b) = (self.vertices[edge.init], self.vertices[edge.term]);
            let ok = (img.init == a && img.term == b) || (img.init == b && img.term == a);
            if !ok {
                return Err(format!(
                    "edge {} maps to {} whose endpoints differ from the images of its endpoints",
                    edge.id, img.id
                ));
            }
        }
        Ok(())
    }

    pub fn is_bijective(&self, to: &Multigraph) -> bool {
        is_permutation(&self.vertices, to.vertex_count()) && is_permutation(&self.edges, to.edge_count())
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        GraphMap {
            vertices: other.vertices.iter().map(|&v| self.vertices[v]).collect(),
            edges: other.edges.iter().map(|&e| self.edges[e]).collect(),
        }
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> GraphMap {
        let mut vertices = vec![0; self.vertices.len()];
        for (v, &w) in self.vertices.iter().enumerate() {
            vertices[w] = v;
        }
        let mut edges = vec![0; self.edges.len()];
        for (e, &f) in self.edges.iter().enumerate() {
            edges[f] = e;
        }
        GraphMap { vertices, edges }
    }

    /// Image of a walk under an edge-endpoint-compatible map.
    pub fn map_walk(&self, walk: &Walk, from: &Multigraph, to: &Multigraph) -> Walk {
        let mut steps = Vec::with_capacity(walk.steps.len());
        for &s in &walk.steps {
            let e = self.edges[s.edge];
            let src = from.edge(s.edge);
            let img = to.edge(e);
            // loops keep their sign; other edges follow the image orientation
            let preserved = img.init == self.vertices[src.init] && img.term == self.vertices[src.term];
            let sign = if preserved { s.sign } else { s.sign.flip() };
            steps.push(DirectedEdge { edge: e, sign });
        }
        Walk { start: self.vertices[walk.start], steps }
    }
}

pub(crate) fn is_permutation(v: &[usize], n: usize) -> bool {
    if v.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in v {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Lazy isomorphism enumeration: vertex bijections by backtracking (highest
/// degree first), then every matching of parallel edge classes.
pub struct Isomorphisms<'a> {
    g1: &'a Multigraph,
    g2: &'a Multigraph,
    classes: Option<(&'a [usize], &'a [usize])>,
    order: Vec<usize>,
    assign: Vec<usize>,
    used: Vec<bool>,
    cursor: Vec<usize>,
    depth: usize,
    started: bool,
    exhausted: bool,
    edge_state: Option<EdgeMatching>,
}

/// Odometer over permutations of each parallel class.
struct EdgeMatching {
    /// (edges of g1 in the class, candidate edges of g2, current permutation)
    groups: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)>,
    vertices: Vec<usize>,
    fresh: bool,
}

const UNASSIGNED: usize = usize::MAX;

impl<'a> Isomorphisms<'a> {
    fn new(g1: &'a Multigraph, g2: &'a Multigraph, classes: Option<(&'a [usize], &'a [usize])>) -> Self {
        let n = g1.vertex_count();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g1.degree(v)), v));
        let exhausted = n != g2.vertex_count()
            || g1.edge_count() != g2.edge_count()
            || !Self::degree_profiles_match(g1, g2);
        Self {
            g1,
            g2,
            classes,
            order,
            assign: vec![UNASSIGNED; n],
            used: vec![false; g2.vertex_count()],
            cursor: vec![0; n + 1],
            depth: 0,
            started: false,
            exhausted,
            edge_state: None,
        }
    }

    fn degree_profiles_match(g1: &Multigraph, g2: &Multigraph) -> bool {
        let profile = |g: &Multigraph| {
            let mut d: Vec<(usize, usize)> =
                (0..g.vertex_count()).map(|v| (g.degree(v), g.loop_count(v))).collect();
            d.sort_unstable();
            d
        };
        profile(g1) == profile(g2)
    }

    fn feasible(&self, v: usize, w: usize) -> bool {
        if let Some((c1, c2)) = self.classes {
            if c1[v] != c2[w] {
                return false;
            }
        }
        if self.g1.degree(v) != self.g2.degree(w) || self.g1.loop_count(v) != self.g2.loop_count(w) {
            return false;
        }
        self.order[..self.depth].iter().all(|&u| {
            let x = self.assign[u];
            self.g1.multiplicity(v, u) == self.g2.multiplicity(w, x)
        })
    }

    /// Advances the vertex backtracking to the next complete bijection.
    fn next_vertex_map(&mut self) -> Option<Vec<usize>> {
        if self.exhausted {
            return None;
        }
        let n = self.order.len();
        if !self.started {
            self.started = true;
            if n == 0 {
                self.exhausted = true;
                return Some(Vec::new());
            }
        } else {
            // resume after the last complete assignment
            self.depth = n;
            self.backtrack();
        }
        loop {
            if self.exhausted {
                return None;
            }
            if self.depth == n {
                return Some(self.assign.clone());
            }
            let v = self.order[self.depth];
            let m = self.g2.vertex_count();
            let mut advanced = false;
            while self.cursor[self.depth] < m {
                let w = self.cursor[self.depth];
                self.cursor[self.depth] += 1;
                if !self.used[w] && self.feasible(v, w) {
                    self.assign[v] = w;
                    self.used[w] = true;
                    self.depth += 1;
                    self.cursor[self.depth] = 0;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                self.cursor[self.depth] = 0;
                if self.depth == 0 {
                    self.exhausted = true;
                    return None;
                }
                self.backtrack();
            }
        }
    }

    /// Undoes the assignment at `depth - 1`.
    fn backtrack(&mut self) {
        self.depth -= 1;
        let v = self.order[self.depth];
        let w = self.assign[v];
        self.used[w] = false;
        self.assign[v] = UNASSIGNED;
    }

    fn edge_matching(&self, vmap: Vec<usize>) -> EdgeMatching {
        let key = |a: usize, b: usize| if a <= b { (a, b) } else { (b, a) };
        let mut targets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (f, edge) in self.g2.edges().iter().enumerate() {
            targets.entry(key(edge.init, edge.term)).or_default().push(f);
        }
        let mut sources: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (e, edge) in self.g1.edges().iter().enumerate() {
            sources.entry(key(vmap[edge.init], vmap[edge.term])).or_default().push(e);
        }
        let groups = sources
            .into_iter()
            .map(|(k, src)| {
                let dst = targets.get(&k).cloned().unwrap_or_default();
                let perm = (0..src.len()).collect();
                (src, dst, perm)
            })
            .collect();
        EdgeMatching { groups, vertices: vmap, fresh: true }
    }
}

impl EdgeMatching {
    fn advance(&mut self) -> bool {
        if self.fresh {
            self.fresh = false;
            return true;
        }
        for (_, _, perm) in self.groups.iter_mut().rev() {
            if next_permutation(perm) {
                return true;
            }
            perm.sort_unstable();
        }
        false
    }

    fn current(&self, edge_count: usize) -> GraphMap {
        let mut edges = vec![0; edge_count];
        for (src, dst, perm) in &self.groups {
            for (i, &e) in src.iter().enumerate() {
                edges[e] = dst[perm[i]];
            }
        }
        GraphMap { vertices: self.vertices.clone(), edges }
    }
}

impl Iterator for Isomorphisms<'_> {
    type Item = GraphMap;

    fn next(&mut self) -> Option<GraphMap> {
        loop {
            if let Some(state) = self.edge_state.as_mut() {
                if state.advance() {
                    return Some(state.current(self.g1.edge_count()));
                }
                self.edge_state = None;
            }
            let vmap = self.next_vertex_map()?;
            self.edge_state = Some(self.edge_matching(vmap));
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
