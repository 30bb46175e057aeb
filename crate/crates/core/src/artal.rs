//! Arrangements of a smooth degree-`d` curve with three tangent lines:
//! combinatorial types, the class index `α`, and their splitting covers.
//!
//! An arrangement is identified with its type and the offset `β ∈ [0, s)`
//! of its normal form; two arrangements of one type are topologically
//! equivalent exactly when their `α = min(β, s − β)` agree.

use std::cmp::Ordering;
use std::fmt;

use crate::cover::GaloisCover;
use crate::curvecomb::{build_splitting_cover, Component, CurveCombinatorics, CyclicSplittingData, SingularPoint};
use crate::error::{invalid, Result};
use crate::fingroup::{gcd, GroupAutomorphism, GroupRef};
use crate::multigraph::{Sign, Walk};

/// A partition `e₁ ≤ e₂ ≤ …` of its sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Rejects empty, zero or non-ascending parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return invalid("partition parts must be positive and nonempty");
        }
        if parts.windows(2).any(|w| w[0] > w[1]) {
            return invalid(format!("partition parts {parts:?} are not in ascending order"));
        }
        Ok(Self { parts })
    }

    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self> {
        parts.sort_unstable();
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().map(|&e| e as usize).sum()
    }

    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0, |g, &e| gcd(g, e as usize))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Compares two partitions of the same number at their first differing part.
pub fn partition_compare(p: &Partition, q: &Partition) -> Result<Ordering> {
    if p.sum() != q.sum() {
        return invalid(format!("cannot compare partitions of {} and {}", p.sum(), q.sum()));
    }
    Ok(p.parts
        .iter()
        .zip(&q.parts)
        .map(|(a, b)| a.cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| p.parts.len().cmp(&q.parts.len())))
}

/// Tangency types `(𝔭₁, 𝔭₂, 𝔭₃)` of the three lines, with `𝔭₁ ⪯ 𝔭₂ ⪯ 𝔭₃`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArtalType {
    d: usize,
    partitions: [Partition; 3],
}

impl ArtalType {
    pub fn new(d: usize, partitions: [Partition; 3]) -> Result<Self> {
        if d < 3 {
            return invalid(format!("degree must be at least 3, got {d}"));
        }
        if let Some(p) = partitions.iter().find(|p| p.sum() != d) {
            return invalid(format!("partition {p} does not sum to {d}"));
        }
        for i in 0..2 {
            if partition_compare(&partitions[i], &partitions[i + 1])? == Ordering::Greater {
                return invalid(format!(
                    "partitions must be ordered: {} comes after {}",
                    partitions[i],
                    partitions[i + 1]
                ));
            }
        }
        Ok(Self { d, partitions })
    }

    /// Parses `"2,4:2,2,2:6"`: colon-separated partitions with comma-separated
    /// parts. A bare triple such as `"3,3,3"` is read as three one-part
    /// partitions. Parts are sorted within each partition and the partitions
    /// are put in ascending order, which fixes the labelling of the lines.
    pub fn parse(spec: &str) -> Result<Self> {
        let groups: Vec<&str> = if spec.contains(':') { spec.split(':').collect() } else { spec.split(',').collect() };
        if groups.len() != 3 {
            return invalid(format!("type {spec:?} must list three partitions"));
        }
        let mut partitions = Vec::with_capacity(3);
        for g in groups {
            let parts = g
                .split(',')
                .map(|x| {
                    x.trim().parse::<u32>().map_err(|_| crate::Error::Parse(format!("bad partition part {x:?} in {spec:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            partitions.push(Partition::from_unsorted(parts)?);
        }
        let d = partitions[0].sum();
        if let Some(p) = partitions.iter().find(|p| p.sum() != d) {
            return invalid(format!("partition {p} does not sum to {d}"));
        }
        partitions.sort_by(|a, b| partition_compare(a, b).expect("equal sums"));
        let partitions: [Partition; 3] = partitions.try_into().expect("three partitions");
        Self::new(d, partitions)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.partitions[i]
    }

    pub fn partitions(&self) -> &[Partition; 3] {
        &self.partitions
    }

    /// `sᵢ = gcd(e_{i,j})`
    pub fn s_i(&self, i: usize) -> usize {
        self.partitions[i].gcd()
    }

    /// `s = gcd(s₁, s₂, s₃)`
    pub fn s(&self) -> usize {
        (0..3).fold(0, |g, i| gcd(g, self.s_i(i)))
    }

    /// `μᵢ = d / sᵢ`
    pub fn mu(&self, i: usize) -> usize {
        self.d / self.s_i(i)
    }

    /// `μ_{i,j} = e_{i,j} / sᵢ`
    pub fn mu_parts(&self, i: usize) -> Vec<u32> {
        let s = self.s_i(i) as u32;
        self.partitions[i].parts.iter().map(|e| e / s).collect()
    }

    pub fn partitions_distinct(&self) -> bool {
        let p = &self.partitions;
        p[0] != p[1] && p[1] != p[2] && p[0] != p[2]
    }
}

impl fmt::Display for ArtalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.partitions;
        write!(f, "({}, {}, {})", p[0], p[1], p[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// No orientation applies to this class.
    Neutral,
    Plus,
    Minus,
}

impl Chirality {
    pub fn name(self) -> &'static str {
        match self {
            Chirality::Neutral => "none",
            Chirality::Plus => "plus",
            Chirality::Minus => "minus",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Chirality::Neutral => Chirality::Neutral,
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArtalClass {
    pub ty: ArtalType,
    pub alpha: usize,
    pub chirality: Chirality,
}

/// `α = β` when `β ≤ ⌊s/2⌋`, else `s − β`. Chirality is oriented only for
/// pairwise distinct partitions with `0 < α < s/2`.
pub fn classify(ty: &ArtalType, beta: usize) -> Result<ArtalClass> {
    let s = ty.s();
    if beta >= s {
        return invalid(format!("β = {beta} must lie in [0, {s})"));
    }
    let alpha = if beta <= s / 2 { beta } else { s - beta };
    let oriented = ty.partitions_distinct() && alpha > 0 && 2 * alpha < s;
    let chirality = match (oriented, beta == alpha) {
        (false, _) => Chirality::Neutral,
        (true, true) => Chirality::Plus,
        (true, false) => Chirality::Minus,
    };
    Ok(ArtalClass { ty: ty.clone(), alpha, chirality })
}

/// One class per `α ∈ {0, …, ⌊s/2⌋}`.
pub fn family_table(ty: &ArtalType) -> Vec<ArtalClass> {
    (0..=ty.s() / 2).map(|alpha| ArtalClass { ty: ty.clone(), alpha, chirality: Chirality::Neutral }).collect()
}

/// Same embedded topology: equal `α` for one type.
pub fn same_embedded_topology(a: (&ArtalType, usize), b: (&ArtalType, usize)) -> Result<bool> {
    if a.0 != b.0 {
        return invalid(format!("types {} and {} have different combinatorics", a.0, b.0));
    }
    Ok(classify(a.0, a.1)?.alpha == classify(b.0, b.1)?.alpha)
}

/// Lines `L1, L2, L3` with `P1 = L3∩L1`, `P2 = L1∩L2`, `P3 = L2∩L3`.
pub fn triangle_curve() -> CurveCombinatorics {
    CurveCombinatorics {
        components: ["L1", "L2", "L3"].iter().map(|id| Component { id: id.to_string(), degree: 1 }).collect(),
        points: vec![
            SingularPoint::new("P1", &["L3", "L1"]),
            SingularPoint::new("P2", &["L1", "L2"]),
            SingularPoint::new("P3", &["L2", "L3"]),
        ],
    }
}

/// ℤ_d splitting data of the line triangle: `s_{Lᵢ} = sᵢ`, offset `β` on the
/// branch of `L3` at `P1` and zero elsewhere.
pub fn splitting_data(ty: &ArtalType, beta: usize) -> Result<CyclicSplittingData> {
    if beta >= ty.s() {
        return invalid(format!("β = {beta} must lie in [0, {})", ty.s()));
    }
    let curve = triangle_curve();
    let mut data = CyclicSplittingData::trivial(&curve, ty.d());
    for (i, l) in ["L1", "L2", "L3"].iter().enumerate() {
        data.s.insert(l.to_string(), ty.s_i(i));
    }
    data.offsets.insert("P1".into(), vec![beta as i64, 0]);
    Ok(data)
}

pub fn splitting_graph_of(ty: &ArtalType, beta: usize) -> Result<GaloisCover> {
    build_splitting_cover(&triangle_curve(), &splitting_data(ty, beta)?)
}

/// `(P1, L1, P2, L2, P3, L3, P1)` on the base of a triangle splitting cover.
pub fn gamma_plus(cover: &GaloisCover) -> Result<Walk> {
    cover.walk_from_ids(
        "P1",
        &[
            ("P1#2", Sign::Plus),
            ("P2#1", Sign::Minus),
            ("P2#2", Sign::Plus),
            ("P3#1", Sign::Minus),
            ("P3#2", Sign::Plus),
            ("P1#1", Sign::Minus),
        ],
    )
}

pub fn gamma_minus(cover: &GaloisCover) -> Result<Walk> {
    gamma_plus(cover)?.inverse(cover.base())
}

/// `[1] ↦ [1]` and `[1] ↦ [−1]` on ℤ_d, deduplicated.
pub fn allowed_automorphisms(group: &GroupRef) -> Result<Vec<GroupAutomorphism>> {
    let plus = GroupAutomorphism::cyclic_multiplier(group, 1)?;
    let minus = GroupAutomorphism::cyclic_multiplier(group, -1)?;
    Ok(if plus == minus { vec![plus] } else { vec![plus, minus] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::{coset_of, CycloCoset, FiniteGroup};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_order() {
        assert_eq!(partition_compare(&p(&[1, 2, 3]), &p(&[1, 2, 3])).unwrap(), Ordering::Equal);
        assert_eq!(partition_compare(&p(&[1, 5]), &p(&[2, 4])).unwrap(), Ordering::Less);
        assert!(partition_compare(&p(&[1, 5]), &p(&[2, 2])).is_err());
        let mut list = vec![p(&[6]), p(&[1, 5]), p(&[2, 4]), p(&[3, 3])];
        list.sort_by(|a, b| partition_compare(a, b).unwrap());
        assert_eq!(list, vec![p(&[1, 5]), p(&[2, 4]), p(&[3, 3]), p(&[6])]);
        assert!(Partition::new(vec![3, 1]).is_err());
    }

    #[test]
    fn type_parsing_and_invariants() {
        let ty = ArtalType::parse("2,4:2,2,2:6").unwrap();
        assert_eq!((ty.d(), ty.s_i(0), ty.s_i(1), ty.s_i(2), ty.s()), (6, 2, 2, 6, 2));
        assert_eq!(ty.mu(1), 3);
        assert_eq!(ty.mu_parts(1), vec![1, 2]);
        assert_eq!(ArtalType::parse("3,3,3").unwrap(), ArtalType::parse("3:3:3").unwrap());
        assert_eq!(ArtalType::parse("6:2,4:2,2,2").unwrap(), ty);
        assert_eq!(ty.partition(0), &p(&[2, 2, 2]));
        assert!(ArtalType::new(6, [p(&[2, 4]), p(&[2, 2, 2]), p(&[6])]).is_err());
        assert!(ArtalType::parse("3:2,2:4").is_err());
        assert!(ArtalType::parse("2:2:2").is_err());
        assert!(ArtalType::parse("3:3").is_err());
        assert!(ArtalType::parse("3:x:3").is_err());
    }

    #[test]
    fn classification() {
        let ty = ArtalType::parse("3:3:3").unwrap();
        assert_eq!(classify(&ty, 0).unwrap().alpha, 0);
        assert_eq!(classify(&ty, 0).unwrap().chirality, Chirality::Neutral);
        assert_eq!(classify(&ty, 2).unwrap().alpha, 1);
        assert!(classify(&ty, 3).is_err());

        let ty = ArtalType::parse("1,5:2,4:6").unwrap();
        assert_eq!(ty.s(), 1);
        assert_eq!(classify(&ty, 0).unwrap().alpha, 0);
        assert_eq!(family_table(&ty).len(), 1);

        assert_eq!(family_table(&ArtalType::parse("3:3:3").unwrap()).len(), 2);
        assert_eq!(family_table(&ArtalType::parse("6:6:6").unwrap()).len(), 4);
        assert_eq!(family_table(&ArtalType::parse("2,4:2,2,2:6").unwrap()).len(), 2);
    }

    #[test]
    fn chirality_needs_distinct_partitions() {
        // s = 5 with distinct partitions
        let ty = ArtalType::parse("5,5,5:5,10:15").unwrap();
        assert_eq!(ty.s(), 5);
        assert_eq!(classify(&ty, 1).unwrap().chirality, Chirality::Plus);
        assert_eq!(classify(&ty, 4).unwrap().chirality, Chirality::Minus);
        assert_eq!(classify(&ty, 4).unwrap().alpha, 1);
        let same = ArtalType::parse("5:5:5").unwrap();
        assert_eq!(classify(&same, 1).unwrap().chirality, Chirality::Neutral);
    }

    #[test]
    fn topology_comparison() {
        let ty = ArtalType::parse("3:3:3").unwrap();
        assert!(same_embedded_topology((&ty, 1), (&ty, 1)).unwrap());
        assert!(!same_embedded_topology((&ty, 0), (&ty, 1)).unwrap());
        let six = ArtalType::parse("6:6:6").unwrap();
        assert!(same_embedded_topology((&six, 1), (&six, 5)).unwrap());
        assert!(same_embedded_topology((&ty, 0), (&six, 0)).is_err());
    }

    #[test]
    fn splitting_graph_net_voltage() {
        let ty = ArtalType::parse("3:3:3").unwrap();
        for beta in 0..3 {
            let c = splitting_graph_of(&ty, beta).unwrap();
            assert!(c.validate().passed());
            let nv = c.net_voltage_class(&gamma_plus(&c).unwrap()).unwrap();
            let coset = coset_of(c.group(), nv.canonical()).unwrap().unwrap();
            assert_eq!(coset, CycloCoset::new(3, beta as i64, 3).unwrap());
            let nv_minus = c.net_voltage_class(&gamma_minus(&c).unwrap()).unwrap();
            assert_eq!(coset_of(c.group(), nv_minus.canonical()).unwrap().unwrap(), coset.negated());
        }
        let c = splitting_graph_of(&ty, 0).unwrap();
        assert_eq!((c.total().vertex_count(), c.total().edge_count()), (18, 18));
    }

    #[test]
    fn automorphism_choices() {
        let z2 = FiniteGroup::cyclic(2).unwrap().into_ref();
        assert_eq!(allowed_automorphisms(&z2).unwrap().len(), 1);
        let z3 = FiniteGroup::cyclic(3).unwrap().into_ref();
        let taus = allowed_automorphisms(&z3).unwrap();
        assert_eq!(taus.len(), 2);
        for t in taus {
            assert!(GroupAutomorphism::new(z3.clone(), t.images().to_vec()).is_ok());
        }
    }
}
