//! JSON encodings of groups, graphs, walks, covers, curve data, coefficient
//! sets and results. Everything refers to vertices, edges and group elements
//! by their ids and labels.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artal::{ArtalType, Partition};
use crate::cover::{GaloisCover, ValidationReport};
use crate::curvecomb::{CurveCombinatorics, CyclicSplittingData};
use crate::cyclicnum::{ArtalCoefficients, CPolynomial};
use crate::equivalence::{Distinction, EquivalenceWitness, Verdict};
use crate::error::{Error, Result};
use crate::fingroup::{ConjugacyClass, FiniteGroup, GroupKind, GroupRef, Subset};
use crate::multigraph::{DirectedEdge, GraphMap, Multigraph, Sign, Walk};

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    if text.trim().is_empty() {
        return parse_err(format!("{} is empty", path.display()));
    }
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_pretty(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    std::fs::write(path, to_pretty(value)?)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupJson {
    Cyclic { m: usize },
    Symmetric { n: usize },
    Table { elements: Vec<String>, table: Vec<Vec<usize>>, identity: usize },
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        match g.kind() {
            GroupKind::Cyclic(m) => GroupJson::Cyclic { m: *m },
            GroupKind::Symmetric(n) => GroupJson::Symmetric { n: *n },
            GroupKind::Table => GroupJson::Table {
                elements: g.labels().to_vec(),
                table: g.table().to_vec(),
                identity: g.identity(),
            },
        }
    }

    pub fn build(&self) -> Result<GroupRef> {
        Ok(match self {
            GroupJson::Cyclic { m } => FiniteGroup::cyclic(*m)?,
            GroupJson::Symmetric { n } => FiniteGroup::symmetric(*n)?,
            GroupJson::Table { elements, table, identity } => {
                FiniteGroup::from_table(elements.clone(), table.clone(), *identity)?
            }
        }
        .into_ref())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub init: String,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

impl GraphJson {
    pub fn from_graph(g: &Multigraph) -> Self {
        Self {
            vertices: g.vertex_ids().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    init: g.vertex_id(e.init).to_string(),
                    term: g.vertex_id(e.term).to_string(),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Multigraph> {
        let mut g = Multigraph::new();
        for v in &self.vertices {
            g.add_vertex(v.clone())?;
        }
        for e in &self.edges {
            g.add_edge_by_ids(e.id.clone(), &e.init, &e.term)?;
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub edge: String,
    pub dir: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkJson {
    pub start: String,
    pub steps: Vec<StepJson>,
}

impl WalkJson {
    pub fn from_walk(w: &Walk, g: &Multigraph) -> Self {
        Self {
            start: g.vertex_id(w.start).to_string(),
            steps: w
                .steps
                .iter()
                .map(|s| StepJson { edge: g.edge(s.edge).id.clone(), dir: s.sign.symbol().to_string() })
                .collect(),
        }
    }

    pub fn build(&self, g: &Multigraph) -> Result<Walk> {
        let start = g.vertex(&self.start)?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let sign = match s.dir.as_str() {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => return parse_err(format!("step direction must be \"+\" or \"-\", got {other:?}")),
                };
                Ok(DirectedEdge { edge: g.edge_by_id(&s.edge)?, sign })
            })
            .collect::<Result<Vec<_>>>()?;
        Walk::new(g, start, steps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub vertices: BTreeMap<String, String>,
    pub edges: BTreeMap<String, String>,
}

impl MapJson {
    pub fn from_map(m: &GraphMap, from: &Multigraph, to: &Multigraph) -> Self {
        Self {
            vertices: (0..from.vertex_count())
                .map(|v| (from.vertex_id(v).to_string(), to.vertex_id(m.vertices[v]).to_string()))
                .collect(),
            edges: (0..from.edge_count())
                .map(|e| (from.edge(e).id.clone(), to.edge(m.edges[e]).id.clone()))
                .collect(),
        }
    }

    pub fn build(&self, from: &Multigraph, to: &Multigraph) -> Result<GraphMap> {
        let vertices = from
            .vertex_ids()
            .iter()
            .map(|v| match self.vertices.get(v) {
                Some(w) => to.vertex(w),
                None => parse_err(format!("map does not assign vertex {v:?}")),
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = from
            .edges()
            .iter()
            .map(|e| match self.edges.get(&e.id) {
                Some(f) => to.edge_by_id(f),
                None => parse_err(format!("map does not assign edge {:?}", e.id)),
            })
            .collect::<Result<Vec<_>>>()?;
        if self.vertices.len() != vertices.len() || self.edges.len() != edges.len() {
            return parse_err("map assigns ids that do not exist in its source graph");
        }
        Ok(GraphMap { vertices, edges })
    }
}

/// Covers are written with the action of a generating set only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub group: GroupJson,
    pub base: GraphJson,
    pub total: GraphJson,
    pub phi: MapJson,
    pub action: BTreeMap<String, MapJson>,
}

impl CoverJson {
    pub fn from_cover(c: &GaloisCover) -> Self {
        let t = c.total();
        Self {
            group: GroupJson::from_group(c.group()),
            base: GraphJson::from_graph(c.base()),
            total: GraphJson::from_graph(t),
            phi: MapJson::from_map(c.phi(), t, c.base()),
            action: c
                .generators()
                .iter()
                .map(|&g| (c.group().label(g).to_string(), MapJson::from_map(c.action(g), t, t)))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<GaloisCover> {
        let group = self.group.build()?;
        let base = self.base.build()?;
        let total = self.total.build()?;
        let phi = self.phi.build(&total, &base)?;
        let generators = self
            .action
            .iter()
            .map(|(label, m)| Ok((group.index_of(label)?, m.build(&total, &total)?)))
            .collect::<Result<Vec<_>>>()?;
        GaloisCover::from_generators(group, total, base, phi, generators)
    }
}

pub fn load_cover(path: &Path) -> Result<GaloisCover> {
    read_json::<CoverJson>(path)?.build()
}

pub fn save_cover(path: &Path, c: &GaloisCover) -> Result<()> {
    write_json(path, &CoverJson::from_cover(c))
}

/// Curve combinatorics with its cyclic splitting data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFixture {
    pub curve: CurveCombinatorics,
    pub splitting: CyclicSplittingData,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// A polynomial in `x, y, z`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &CPolynomial) -> Self {
        Self {
            terms: p.terms().iter().map(|(e, c)| TermJson { exp: e.clone(), re: c.re, im: c.im }).collect(),
        }
    }

    pub fn build(&self) -> Result<CPolynomial> {
        CPolynomial::from_terms(
            vec!["x".into(), "y".into(), "z".into()],
            self.terms.iter().map(|t| (t.exp.clone(), Complex64::new(t.re, t.im))),
        )
    }
}

/// Coefficients of the normal form of an arrangement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffsJson {
    pub d: usize,
    pub partitions: Vec<Vec<u32>>,
    pub beta: usize,
    pub c: Vec<Vec<ComplexJson>>,
    #[serde(default)]
    pub g0: PolyJson,
}

impl CoeffsJson {
    pub fn new(ty: &ArtalType, beta: usize, c: &ArtalCoefficients, g0: &CPolynomial) -> Self {
        Self {
            d: ty.d(),
            partitions: ty.partitions().iter().map(|p| p.parts().to_vec()).collect(),
            beta,
            c: c.iter().map(|line| line.iter().map(|&z| z.into()).collect()).collect(),
            g0: PolyJson::from_poly(g0),
        }
    }

    /// The type must be listed in ascending partition order, since the
    /// coefficient lists follow the line labelling.
    pub fn build(&self) -> Result<(ArtalType, usize, ArtalCoefficients, CPolynomial)> {
        if self.partitions.len() != 3 || self.c.len() != 3 {
            return parse_err("coefficient file needs three partitions and three coefficient lists");
        }
        let parts = self.partitions.iter().map(|p| Partition::new(p.clone())).collect::<Result<Vec<_>>>()?;
        let ty = ArtalType::new(self.d, parts.try_into().expect("three partitions"))?;
        let lines: Vec<Vec<Complex64>> = self.c.iter().map(|l| l.iter().map(|&z| z.into()).collect()).collect();
        let c: ArtalCoefficients = [lines[0].clone(), lines[1].clone(), lines[2].clone()];
        Ok((ty, self.beta, c, self.g0.build()?))
    }
}

pub fn labels(group: &FiniteGroup, s: &Subset) -> Vec<String> {
    s.iter().map(|x| group.label(x).to_string()).collect()
}

pub fn class_json(class: &ConjugacyClass) -> Value {
    let g = class.group();
    json!({
        "canonical": labels(g, class.canonical()),
        "conjugates": class.conjugates().iter().map(|s| labels(g, s)).collect::<Vec<_>>(),
    })
}

pub fn report_json(r: &ValidationReport) -> Value {
    json!({
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "witness": c.witness,
        })).collect::<Vec<_>>(),
    })
}

fn counts_json(group: &FiniteGroup, counts: &BTreeMap<Subset, usize>) -> Value {
    Value::Array(counts.iter().map(|(s, n)| json!({ "class": labels(group, s), "count": n })).collect())
}

pub fn witness_json(w: &EquivalenceWitness, c1: &GaloisCover, c2: &GaloisCover) -> Value {
    json!({
        "theta": MapJson::from_map(&w.theta, c1.base(), c2.base()),
        "theta_tilde": MapJson::from_map(&w.theta_tilde, c1.total(), c2.total()),
    })
}

pub fn verdict_json(v: &Verdict, c1: &GaloisCover, c2: &GaloisCover) -> Value {
    let g = c1.group();
    let witness = match v {
        Verdict::Inconclusive => Value::Null,
        Verdict::Equivalent(w) => witness_json(w, c1, c2),
        Verdict::Distinguished(Distinction::Signature(m)) => json!({
            "kind": "signature",
            "length": m.length,
            "left": counts_json(g, &m.left),
            "right": counts_json(g, &m.right),
        }),
        Verdict::Distinguished(Distinction::Exhausted { base_isomorphisms }) => json!({
            "kind": "exhausted",
            "base_isomorphisms": base_isomorphisms,
        }),
    };
    json!({ "verdict": v.name(), "witness": witness })
}
