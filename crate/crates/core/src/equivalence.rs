//! Deciding whether two covers are equivalent up to a base isomorphism `θ`
//! and a group automorphism `τ`.
//!
//! [`distinguish`] compares net voltage signatures and can only refute
//! equivalence. [`exhaustive_equivalence`] searches all lifts `θ̃` of all base
//! isomorphisms and is exact on small inputs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cover::GaloisCover;
use crate::error::{invalid, Error, Result};
use crate::fingroup::{same_group, ConjugacyClass, GroupAutomorphism, Subset};
use crate::multigraph::{GraphMap, Multigraph};

/// Net voltage classes of every simple closed walk of the base, counted per
/// walk length. Classes are keyed by their canonical subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NVSignature {
    pub per_length: BTreeMap<usize, BTreeMap<Subset, usize>>,
    pub walk_count: usize,
}

pub fn nv_signature(cover: &GaloisCover) -> Result<NVSignature> {
    let mut per_length: BTreeMap<usize, BTreeMap<Subset, usize>> = BTreeMap::new();
    let walks = cover.base().simple_closed_walks();
    for w in &walks {
        let class = cover.net_voltage_class(w)?;
        *per_length.entry(w.len()).or_default().entry(class.canonical().clone()).or_default() += 1;
    }
    Ok(NVSignature { per_length, walk_count: walks.len() })
}

impl NVSignature {
    /// The signature with every class replaced by its image under `τ`.
    pub fn apply(&self, tau: &GroupAutomorphism) -> NVSignature {
        let per_length = self
            .per_length
            .iter()
            .map(|(&len, classes)| {
                let mut mapped: BTreeMap<Subset, usize> = BTreeMap::new();
                for (s, &n) in classes {
                    let image = ConjugacyClass::of_subset(tau.group(), &tau.apply_subset(s));
                    *mapped.entry(image.canonical().clone()).or_default() += n;
                }
                (len, mapped)
            })
            .collect();
        NVSignature { per_length, walk_count: self.walk_count }
    }

    /// First walk length at which the two class multisets differ.
    pub fn first_mismatch(&self, other: &NVSignature) -> Option<usize> {
        let lengths: std::collections::BTreeSet<usize> =
            self.per_length.keys().chain(other.per_length.keys()).copied().collect();
        lengths.into_iter().find(|l| self.per_length.get(l) != other.per_length.get(l))
    }
}

/// The class counts at one walk length where two signatures disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureMismatch {
    pub length: usize,
    /// Counts for the first cover after applying `τ`.
    pub left: BTreeMap<Subset, usize>,
    pub right: BTreeMap<Subset, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinction {
    Signature(SignatureMismatch),
    /// No lift of any base isomorphism satisfies the equivariance conditions.
    Exhausted { base_isomorphisms: usize },
}

/// A verified pair `(θ, θ̃)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub theta: GraphMap,
    pub theta_tilde: GraphMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Distinguished(Distinction),
    Inconclusive,
    Equivalent(EquivalenceWitness),
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished(_))
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Distinguished(_) => "distinguished",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Equivalent(_) => "equivalent",
        }
    }
}

fn check_groups(c1: &GaloisCover, c2: &GaloisCover, tau: &GroupAutomorphism) -> Result<()> {
    if !same_group(c1.group(), c2.group()) || !same_group(c1.group(), tau.group()) {
        return invalid("both covers and the automorphism must share one group");
    }
    Ok(())
}

/// Refutes `(θ, τ)`-equivalence for every `θ` when the `τ`-image of the first
/// signature differs from the second. Equal walk lengths are compared
/// separately because an isomorphism preserves walk length.
pub fn distinguish(c1: &GaloisCover, c2: &GaloisCover, tau: &GroupAutomorphism) -> Result<Verdict> {
    check_groups(c1, c2, tau)?;
    let left = nv_signature(c1)?.apply(tau);
    let right = nv_signature(c2)?;
    Ok(match left.first_mismatch(&right) {
        None => Verdict::Inconclusive,
        Some(length) => Verdict::Distinguished(Distinction::Signature(SignatureMismatch {
            length,
            left: left.per_length.get(&length).cloned().unwrap_or_default(),
            right: right.per_length.get(&length).cloned().unwrap_or_default(),
        })),
    })
}

/// Distinguished only when every automorphism in `taus` distinguishes; the
/// witness is the one found for the first automorphism.
pub fn distinguish_all(c1: &GaloisCover, c2: &GaloisCover, taus: &[GroupAutomorphism]) -> Result<Verdict> {
    let mut first = None;
    for tau in taus {
        match distinguish(c1, c2, tau)? {
            v @ Verdict::Distinguished(_) => {
                first.get_or_insert(v);
            }
            _ => return Ok(Verdict::Inconclusive),
        }
    }
    Ok(first.unwrap_or(Verdict::Inconclusive))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_base_vertices: usize,
    pub max_total_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_base_vertices: 12, max_total_vertices: 72 }
    }
}

/// Exact search for `(θ, θ̃)`: returns `Equivalent` with a verified witness
/// (the first in enumeration order) or `Distinguished` after exhausting
/// every base isomorphism.
pub fn exhaustive_equivalence(
    c1: &GaloisCover,
    c2: &GaloisCover,
    tau: &GroupAutomorphism,
    limits: &Limits,
) -> Result<Verdict> {
    exhaustive_equivalence_with(c1, c2, tau, limits, None)
}

/// As [`exhaustive_equivalence`], restricting `θ` to maps that preserve the
/// given base vertex classes.
pub fn exhaustive_equivalence_with(
    c1: &GaloisCover,
    c2: &GaloisCover,
    tau: &GroupAutomorphism,
    limits: &Limits,
    classes: Option<(&[usize], &[usize])>,
) -> Result<Verdict> {
    check_groups(c1, c2, tau)?;
    for c in [c1, c2] {
        if c.base().vertex_count() > limits.max_base_vertices {
            return Err(Error::ResourceLimit(format!(
                "base graph has {} vertices (limit {})",
                c.base().vertex_count(),
                limits.max_base_vertices
            )));
        }
        if c.total().vertex_count() > limits.max_total_vertices {
            return Err(Error::ResourceLimit(format!(
                "total graph has {} vertices (limit {})",
                c.total().vertex_count(),
                limits.max_total_vertices
            )));
        }
    }
    let mut tried = 0;
    if c1.total().vertex_count() == c2.total().vertex_count() && c1.total().edge_count() == c2.total().edge_count() {
        for theta in c1.base().isomorphisms(c2.base(), classes) {
            tried += 1;
            if let Some(theta_tilde) = LiftSearch::new(c1, c2, tau, &theta).run() {
                let witness = EquivalenceWitness { theta, theta_tilde };
                verify_witness(c1, c2, tau, &witness).map_err(|e| {
                    Error::InvalidArgument(format!("internal: search produced an invalid witness: {e}"))
                })?;
                return Ok(Verdict::Equivalent(witness));
            }
        }
    }
    Ok(Verdict::Distinguished(Distinction::Exhausted { base_isomorphisms: tried }))
}

/// Checks that `θ` and `θ̃` are isomorphisms, `φ₂∘θ̃ = θ∘φ₁`, and
/// `θ̃(g·x) = τ(g)·θ̃(x)` on vertices and edges.
pub fn verify_witness(
    c1: &GaloisCover,
    c2: &GaloisCover,
    tau: &GroupAutomorphism,
    w: &EquivalenceWitness,
) -> std::result::Result<(), String> {
    let (theta, tt) = (&w.theta, &w.theta_tilde);
    theta.check_map(c1.base(), c2.base())?;
    if !theta.is_bijective(c2.base()) {
        return Err("θ is not bijective".into());
    }
    tt.check_map(c1.total(), c2.total())?;
    if !tt.is_bijective(c2.total()) {
        return Err("θ̃ is not bijective".into());
    }
    if c2.phi().compose(tt) != theta.compose(c1.phi()) {
        return Err("φ₂∘θ̃ differs from θ∘φ₁".into());
    }
    for g in c1.group().elements() {
        if tt.compose(c1.action(g)) != c2.action(tau.apply(g)).compose(tt) {
            return Err(format!("θ̃ is not τ-equivariant at {}", c1.group().label(g)));
        }
    }
    Ok(())
}

/// Backtracking over one seed image per vertex fiber, in an order where each
/// base vertex after the first of its component is adjacent to an earlier
/// one. Edge seeds are chosen per base edge once both endpoints are fixed.
struct LiftSearch<'a> {
    c1: &'a GaloisCover,
    c2: &'a GaloisCover,
    tau: &'a GroupAutomorphism,
    theta: &'a GraphMap,
    order: Vec<usize>,
    /// θ̃ on total vertices of c1, filled fiber by fiber.
    image: Vec<Option<usize>>,
}

impl<'a> LiftSearch<'a> {
    fn new(c1: &'a GaloisCover, c2: &'a GaloisCover, tau: &'a GroupAutomorphism, theta: &'a GraphMap) -> Self {
        let base = c1.base();
        let n = base.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &e in base.incident_edges(v) {
                    let edge = base.edge(e);
                    let u = if edge.init == v { edge.term } else { edge.init };
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        Self { c1, c2, tau, theta, order, image: vec![None; c1.total().vertex_count()] }
    }

    fn run(mut self) -> Option<GraphMap> {
        if self.assign(0) {
            let vertices: Vec<usize> = self.image.iter().map(|x| x.expect("all fibers assigned")).collect();
            let edges = self.edge_images(&vertices)?;
            Some(GraphMap { vertices, edges })
        } else {
            None
        }
    }

    fn assign(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        let fiber1 = self.c1.fiber_vertices(v).expect("base vertex");
        let fiber2 = self.c2.fiber_vertices(self.theta.vertices[v]).expect("base vertex");
        if fiber1.len() != fiber2.len() {
            return false;
        }
        let seed = fiber1[0];
        let stab = self.tau.apply_subset(&self.c1.stabilizer(seed));
        for &y in fiber2 {
            if self.c2.stabilizer(y) != stab {
                continue;
            }
            for g in self.c1.group().elements() {
                self.image[self.c1.act_vertex(g, seed)] = Some(self.c2.act_vertex(self.tau.apply(g), y));
            }
            if self.edges_feasible(v) && self.assign(depth + 1) {
                return true;
            }
        }
        for &x in fiber1 {
            self.image[x] = None;
        }
        false
    }

    /// Every base edge at `v` whose other endpoint is assigned has a lift
    /// compatible with the current vertex images.
    fn edges_feasible(&self, v: usize) -> bool {
        let base = self.c1.base();
        base.incident_edges(v).iter().all(|&e| {
            let edge = base.edge(e);
            let other = if edge.init == v { edge.term } else { edge.init };
            let assigned = self.c1.fiber_vertices(other).expect("base vertex").first().is_some_and(|&x| self.image[x].is_some());
            !assigned || self.edge_seed_image(e, |x| self.image[x]).is_some()
        })
    }

    /// A lift `f` of `θ(e)` whose endpoints are the images of the endpoints
    /// of the first lift of `e`.
    fn edge_seed_image(&self, e: usize, image: impl Fn(usize) -> Option<usize>) -> Option<usize> {
        let seed = *self.c1.fiber_edges(e).ok()?.first()?;
        let s = self.c1.total().edge(seed);
        let (a, b) = (image(s.init)?, image(s.term)?);
        self.c2.fiber_edges(self.theta.edges[e]).ok()?.iter().copied().find(|&f| {
            let t = self.c2.total().edge(f);
            (t.init == a && t.term == b) || (t.init == b && t.term == a)
        })
    }

    fn edge_images(&self, vertices: &[usize]) -> Option<Vec<usize>> {
        let mut edges = vec![usize::MAX; self.c1.total().edge_count()];
        for e in 0..self.c1.base().edge_count() {
            let seed = self.c1.fiber_edges(e).ok()?[0];
            let f = self.edge_seed_image(e, |x| Some(vertices[x]))?;
            for g in self.c1.group().elements() {
                edges[self.c1.act_edge(g, seed)] = self.c2.act_edge(self.tau.apply(g), f);
            }
        }
        (!edges.contains(&usize::MAX)).then_some(edges)
    }
}

/// A copy of `cover` transported along a random relabelling `θ̃` of the total
/// graph (and `θ` of the base, with random edge reversals), with the action
/// twisted so that `θ̃(g·x) = τ(g)·θ̃(x)`. Returns the copy and `(θ, θ̃)`.
pub fn twisted_copy<R: Rng>(
    cover: &GaloisCover,
    tau: &GroupAutomorphism,
    rng: &mut R,
) -> Result<(GaloisCover, EquivalenceWitness)> {
    if !same_group(cover.group(), tau.group()) {
        return invalid("automorphism acts on a different group");
    }
    let (base, total) = (cover.base(), cover.total());
    let base_vperm = random_permutation(base.vertex_count(), rng);
    let base_eperm = random_permutation(base.edge_count(), rng);
    let flips: Vec<bool> = (0..base.edge_count()).map(|_| rng.gen_bool(0.5)).collect();
    let total_vperm = random_permutation(total.vertex_count(), rng);
    let total_eperm = random_permutation(total.edge_count(), rng);

    let theta = GraphMap { vertices: base_vperm, edges: base_eperm };
    let theta_tilde = GraphMap { vertices: total_vperm, edges: total_eperm };

    let new_base = transport(base, &theta, |e| flips[e], "b")?;
    let new_total = transport(total, &theta_tilde, |e| flips[cover.phi().edges[e]], "t")?;
    let inv_tt = theta_tilde.inverse();
    let phi = theta.compose(cover.phi()).compose(&inv_tt);
    let tau_inv = tau.inverse();
    let action = cover
        .group()
        .elements()
        .map(|h| theta_tilde.compose(cover.action(tau_inv.apply(h))).compose(&inv_tt))
        .collect();
    let copy = GaloisCover::new(cover.group().clone(), new_total, new_base, phi, action)?;
    Ok((copy, EquivalenceWitness { theta, theta_tilde }))
}

fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// The graph with vertex `v` renamed to position `map.vertices[v]` and edge
/// `e` to `map.edges[e]`, reversing edges where `flip` holds.
fn transport(g: &Multigraph, map: &GraphMap, flip: impl Fn(usize) -> bool, prefix: &str) -> Result<Multigraph> {
    let inv = map.inverse();
    let mut out = Multigraph::new();
    for new_v in 0..g.vertex_count() {
        out.add_vertex(format!("{prefix}{new_v}:{}", g.vertex_id(inv.vertices[new_v])))?;
    }
    for new_e in 0..g.edge_count() {
        let old = inv.edges[new_e];
        let edge = g.edge(old);
        let (i, t) = (map.vertices[edge.init], map.vertices[edge.term]);
        let (i, t) = if flip(old) { (t, i) } else { (i, t) };
        out.add_edge(format!("{prefix}{new_e}:{}", edge.id), i, t)?;
    }
    Ok(out)
}
