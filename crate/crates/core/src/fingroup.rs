//! Finite groups as explicit Cayley tables.
//!
//! Elements are addressed by index. Products follow the table, so for the
//! symmetric groups built by [`FiniteGroup::symmetric`] the product `a·b` is
//! the composition "apply `b` first, then `a`": `(a·b)(x) = a(b(x))`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

pub type GroupRef = Arc<FiniteGroup>;

/// Full associativity is checked up to this order; larger tables are sampled.
const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
const ASSOCIATIVITY_SAMPLES: usize = 50_000;
const MAX_SYMMETRIC_DEGREE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Symmetric(usize),
    Table,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    kind: GroupKind,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    label_index: HashMap<String, usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.identity == other.identity && self.labels == other.labels && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// ℤ_m with elements labelled `[0]`, …, `[m-1]`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return invalid("cyclic group order must be positive");
        }
        let labels = (0..m).map(|k| format!("[{k}]")).collect();
        let table = (0..m).map(|i| (0..m).map(|j| (i + j) % m).collect()).collect();
        Self::assemble(GroupKind::Cyclic(m), labels, table, 0)
    }

    /// The symmetric group on `{1, …, n}`, elements listed in lexicographic
    /// order of their one-line notation and labelled in cycle notation.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_SYMMETRIC_DEGREE {
            return invalid(format!(
                "symmetric degree must lie in 1..={MAX_SYMMETRIC_DEGREE}, got {n}"
            ));
        }
        let perms = permutations(n);
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let prod: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                        index[prod.as_slice()]
                    })
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::assemble(GroupKind::Symmetric(n), labels, table, 0)
    }

    /// A group from an explicit Cayley table, validated as a group.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return invalid("a group needs at least one element");
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return invalid(format!("Cayley table must be {n}x{n}"));
        }
        if identity >= n {
            return invalid(format!("identity index {identity} out of range"));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return invalid("element labels must be unique");
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = table[i][j];
                let c = table[j][i];
                if r >= n || c >= n || row_seen[r] || col_seen[c] {
                    return invalid(format!("Cayley table is not a Latin square (row/column {i})"));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        for i in 0..n {
            if table[identity][i] != i || table[i][identity] != i {
                return invalid(format!(
                    "element {} is not a two-sided identity",
                    labels[identity]
                ));
            }
        }
        let assoc_fails = |a: usize, b: usize, c: usize| table[table[a][b]][c] != table[a][table[b][c]];
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if assoc_fails(a, b, c) {
                            return invalid(format!(
                                "table is not associative at ({}, {}, {})",
                                labels[a], labels[b], labels[c]
                            ));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ab1e);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if assoc_fails(a, b, c) {
                    return invalid(format!(
                        "table is not associative at ({}, {}, {})",
                        labels[a], labels[b], labels[c]
                    ));
                }
            }
        }
        Self::assemble(GroupKind::Table, labels, table, identity)
    }

    fn assemble(kind: GroupKind, labels: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = labels.len();
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == identity)
                .ok_or_else(|| Error::InvalidArgument(format!("{} has no inverse", labels[a])))?;
        }
        let label_index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(Self { kind, labels, table, identity, inverses, label_index })
    }

    pub fn into_ref(self) -> GroupRef {
        Arc::new(self)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        if let Some(&i) = self.label_index.get(label) {
            return Ok(i);
        }
        // Cyclic elements may also be written as bare integers.
        if let GroupKind::Cyclic(m) = self.kind {
            if let Ok(k) = label.trim().trim_start_matches('[').trim_end_matches(']').parse::<i64>() {
                return Ok(k.rem_euclid(m as i64) as usize);
            }
        }
        invalid(format!("unknown group element {label:?}"))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g·x·g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Modulus `m` when this is the ℤ_m built by [`FiniteGroup::cyclic`].
    pub fn cyclic_modulus(&self) -> Option<usize> {
        match self.kind {
            GroupKind::Cyclic(m) => Some(m),
            _ => None,
        }
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as a sorted subset.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Subset {
        let mut seen = vec![false; self.order()];
        let mut queue = VecDeque::from([self.identity]);
        seen[self.identity] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subset::from_sorted_mask(&seen)
    }

    /// A small generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated_subgroup(&gens);
        // prefer elements of large order first so cyclic groups get one generator
        let mut candidates: Vec<usize> = self.elements().collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        for a in candidates {
            if span.len() == self.order() {
                break;
            }
            if !span.contains(a) {
                gens.push(a);
                span = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<Subset> {
        let s = Subset::new(items);
        if let Some(&bad) = s.members().iter().find(|&&x| x >= self.order()) {
            return invalid(format!("element index {bad} out of range for group of order {}", self.order()));
        }
        Ok(s)
    }

    pub fn full_subset(&self) -> Subset {
        Subset::new(self.elements())
    }

    /// `g·S·g⁻¹`
    pub fn conjugate_subset(&self, g: usize, s: &Subset) -> Subset {
        Subset::new(s.iter().map(|x| self.conj(g, x)))
    }

    /// Elementwise product set `S₁S₂ = { ab : a ∈ S₁, b ∈ S₂ }`.
    pub fn product_set(&self, s1: &Subset, s2: &Subset) -> Subset {
        let mut mask = vec![false; self.order()];
        for a in s1.iter() {
            for b in s2.iter() {
                mask[self.mul(a, b)] = true;
            }
        }
        Subset::from_sorted_mask(&mask)
    }

    pub fn inverse_set(&self, s: &Subset) -> Subset {
        Subset::new(s.iter().map(|x| self.inv(x)))
    }

    pub fn format_subset(&self, s: &Subset) -> String {
        let parts: Vec<&str> = s.iter().map(|x| self.label(x)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Every automorphism of the group, found by extending images of a
    /// generating set. Intended for the small groups used here.
    pub fn automorphisms(self: &GroupRef) -> Vec<GroupAutomorphism> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut images = vec![0usize; gens.len()];
        self.extend_automorphisms(&gens, 0, &mut images, &mut out);
        out.sort_by(|a, b| a.images.cmp(&b.images));
        out
    }

    fn extend_automorphisms(
        self: &GroupRef,
        gens: &[usize],
        depth: usize,
        images: &mut Vec<usize>,
        out: &mut Vec<GroupAutomorphism>,
    ) {
        if depth == gens.len() {
            if let Some(map) = self.homomorphism_from_generators(gens, images) {
                if let Ok(aut) = GroupAutomorphism::new(self.clone(), map) {
                    out.push(aut);
                }
            }
            return;
        }
        let ord = self.element_order(gens[depth]);
        for cand in self.elements() {
            if self.element_order(cand) == ord {
                images[depth] = cand;
                self.extend_automorphisms(gens, depth + 1, images, out);
            }
        }
    }

    /// Extends `gens[i] ↦ images[i]` along right multiplication; `None` when
    /// the assignment is inconsistent or not bijective.
    fn homomorphism_from_generators(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[self.identity] = self.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = self.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        if map.contains(&usize::MAX) {
            return None;
        }
        Some(map)
    }
}

/// Sorted, duplicate-free list of element indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn new<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn from_sorted_mask(mask: &[bool]) -> Self {
        Subset(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }
}

/// The family `{ gSg⁻¹ : g ∈ G }`, keyed by its lexicographically least member.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    group: GroupRef,
    canonical: Subset,
    conjugates: BTreeSet<Subset>,
}

impl ConjugacyClass {
    pub fn of_subset(group: &GroupRef, s: &Subset) -> Self {
        let conjugates: BTreeSet<Subset> =
            group.elements().map(|g| group.conjugate_subset(g, s)).collect();
        let canonical = conjugates.iter().next().cloned().unwrap_or_default();
        ConjugacyClass { group: group.clone(), canonical, conjugates }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn canonical(&self) -> &Subset {
        &self.canonical
    }

    pub fn conjugates(&self) -> &BTreeSet<Subset> {
        &self.conjugates
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.conjugates.contains(s)
    }

    pub fn len(&self) -> usize {
        self.conjugates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjugates.is_empty()
    }
}

impl PartialEq for ConjugacyClass {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for ConjugacyClass {}

impl PartialOrd for ConjugacyClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConjugacyClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical.cmp(&other.canonical)
    }
}

impl fmt::Display for ConjugacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.group.format_subset(&self.canonical))
    }
}

pub fn same_group(a: &GroupRef, b: &GroupRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct GroupAutomorphism {
    group: GroupRef,
    images: Vec<usize>,
}

impl PartialEq for GroupAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.images == other.images
    }
}

impl Eq for GroupAutomorphism {}

impl GroupAutomorphism {
    pub fn new(group: GroupRef, images: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if images.len() != n {
            return invalid(format!("automorphism needs {n} images, got {}", images.len()));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return invalid("automorphism images are not a permutation");
            }
            seen[x] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if images[group.mul(a, b)] != group.mul(images[a], images[b]) {
                    return invalid(format!(
                        "map is not multiplicative at ({}, {})",
                        group.label(a),
                        group.label(b)
                    ));
                }
            }
        }
        Ok(Self { group, images })
    }

    pub fn identity(group: &GroupRef) -> Self {
        Self { group: group.clone(), images: group.elements().collect() }
    }

    /// `x ↦ g x g⁻¹`
    pub fn inner(group: &GroupRef, g: usize) -> Self {
        Self { group: group.clone(), images: group.elements().map(|x| group.conj(g, x)).collect() }
    }

    /// `[1] ↦ [u]` on ℤ_m for a unit `u`.
    pub fn cyclic_multiplier(group: &GroupRef, u: i64) -> Result<Self> {
        let Some(m) = group.cyclic_modulus() else {
            return invalid("multiplier automorphisms need a cyclic group");
        };
        let u = u.rem_euclid(m as i64) as usize;
        if gcd(u, m) != 1 && m > 1 {
            return invalid(format!("{u} is not a unit modulo {m}"));
        }
        let images = (0..m).map(|k| (k * u) % m.max(1)).collect();
        Self::new(group.clone(), images)
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Self { group: self.group.clone(), images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn apply_subset(&self, s: &Subset) -> Subset {
        Subset::new(s.iter().map(|x| self.apply(x)))
    }

    /// Image of a conjugacy class; well defined because conjugation commutes
    /// with automorphisms up to relabelling the conjugating element.
    pub fn apply_class(&self, class: &ConjugacyClass) -> Result<ConjugacyClass> {
        if !same_group(&self.group, &class.group) {
            return invalid("automorphism and conjugacy class live in different groups");
        }
        Ok(ConjugacyClass::of_subset(&self.group, &self.apply_subset(&class.canonical)))
    }

    pub fn describe(&self) -> String {
        let gens = self.group.generators();
        let parts: Vec<String> = gens
            .iter()
            .map(|&g| format!("{}->{}", self.group.label(g), self.group.label(self.apply(g))))
            .collect();
        parts.join(", ")
    }
}

/// `[offset] + step·ℤ_m`, normalised so that `offset < step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloCoset {
    m: usize,
    offset: usize,
    step: usize,
}

impl CycloCoset {
    pub fn new(m: usize, offset: i64, step: usize) -> Result<Self> {
        if m == 0 {
            return invalid("modulus must be positive");
        }
        if step == 0 || !m.is_multiple_of(step) {
            return invalid(format!("step {step} does not divide {m}"));
        }
        Ok(Self { m, offset: offset.rem_euclid(step as i64) as usize, step })
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn elements(&self) -> Subset {
        Subset::new((0..self.m / self.step).map(|k| self.offset + k * self.step))
    }

    /// `-([a] + sℤ_m) = [-a] + sℤ_m`
    pub fn negated(&self) -> Self {
        Self { m: self.m, offset: (self.step - self.offset) % self.step, step: self.step }
    }
}

impl fmt::Display for CycloCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]+{}Z_{}", self.offset, self.step, self.m)
    }
}

/// Recognises `values` as a coset `[a] + sℤ_m` of a subgroup of ℤ_m.
pub fn coset_of(group: &FiniteGroup, values: &Subset) -> Result<Option<CycloCoset>> {
    let Some(m) = group.cyclic_modulus() else {
        return invalid("coset_of needs a cyclic group built as Z_m");
    };
    let n = values.len();
    if n == 0 || m % n != 0 {
        return Ok(None);
    }
    let step = m / n;
    let first = values.members()[0];
    let candidate = CycloCoset::new(m, first as i64, step)?;
    Ok((candidate.elements() == *values).then_some(candidate))
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    // lexicographic successor
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
    out
}

/// Cycle notation on 1-based points, each cycle led by its least point.
fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = perm[x];
        }
        cycles.push(format!("({})", cycle.join(" ")));
    }
    if cycles.is_empty() {
        "id".to_string()
    } else {
        cycles.concat()
    }
}
