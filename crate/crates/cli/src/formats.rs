//! JSON instance and graph files.

use kclust::{
    ClusteringInstance, CnfFormula, CostValue, DataPoint, Dataset, DistanceOrder, Error, Graph, HioctInstance, Result,
    SelectionInstance, Source,
};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::budget::{format_budget, parse_budget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Clustering,
    Selection,
}

/// Where a generated file came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub reduction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub figure_mode: bool,
    pub source_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub kind: InstanceKind,
    pub p: String,
    pub dimension: usize,
    pub vectors: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub budget: String,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInstance(msg.into())
}

fn to_i64_row(point: &DataPoint) -> Result<Vec<i64>> {
    point
        .coords()
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| invalid(format!("coordinate {c} does not fit in 64 bits"))))
        .collect()
}

fn to_u64(n: &BigUint) -> Result<u64> {
    n.to_u64().ok_or_else(|| invalid(format!("weight {n} does not fit in 64 bits")))
}

fn all_ones(ws: &[u64]) -> bool {
    ws.iter().all(|&w| w == 1)
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| invalid(format!("malformed instance file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn order(&self) -> Result<DistanceOrder> {
        self.p.parse()
    }

    pub fn validate(&self) -> Result<()> {
        let order = self.order()?;
        if let Some(row) = self.vectors.iter().position(|r| r.len() != self.dimension) {
            return Err(invalid(format!(
                "vector {} has {} coordinates, expected {}",
                row + 1,
                self.vectors[row].len(),
                self.dimension
            )));
        }
        let n = self.vectors.len();
        let check_len = |name: &str, len: Option<usize>| match len {
            Some(l) if l != n => Err(invalid(format!("{name} has {l} entries for {n} vectors"))),
            _ => Ok(()),
        };
        check_len("multiplicities", self.multiplicities.as_ref().map(Vec::len))?;
        check_len("groups", self.groups.as_ref().map(Vec::len))?;
        check_len("weights", self.weights.as_ref().map(Vec::len))?;
        match self.kind {
            InstanceKind::Clustering => {
                if self.k.is_none() {
                    return Err(invalid("a clustering instance needs k"));
                }
                if self.groups.is_some() || self.weights.is_some() {
                    return Err(invalid("groups and weights belong to selection instances"));
                }
            }
            InstanceKind::Selection => {
                if self.k.is_some() || self.multiplicities.is_some() {
                    return Err(invalid("k and multiplicities belong to clustering instances"));
                }
                let groups = self.groups.as_ref().ok_or_else(|| invalid("a selection instance needs groups"))?;
                let t = groups.iter().copied().max().unwrap_or(0);
                for g in 1..=t {
                    if !groups.contains(&g) {
                        return Err(invalid(format!("group {g} is empty")));
                    }
                }
                if groups.contains(&0) {
                    return Err(invalid("group indices start at 1"));
                }
                if t == 0 {
                    return Err(invalid("at least one group is required"));
                }
            }
        }
        parse_budget(&self.budget, &order)?;
        Ok(())
    }

    pub fn budget(&self) -> Result<CostValue> {
        parse_budget(&self.budget, &self.order()?)
    }

    fn points(&self) -> Vec<DataPoint> {
        self.vectors.iter().map(|r| DataPoint::from_i64(r)).collect()
    }

    pub fn to_clustering(&self) -> Result<ClusteringInstance> {
        if self.kind != InstanceKind::Clustering {
            return Err(invalid("expected a clustering instance"));
        }
        self.validate()?;
        let mult = match &self.multiplicities {
            Some(m) => m.iter().map(|&x| BigUint::from(x)).collect(),
            None => vec![BigUint::one(); self.vectors.len()],
        };
        let dataset = Dataset::with_multiplicities(self.dimension, self.points(), mult)?;
        ClusteringInstance::new(dataset, self.k.unwrap_or(0), self.budget()?, self.order()?)
    }

    pub fn to_selection(&self) -> Result<SelectionInstance> {
        if self.kind != InstanceKind::Selection {
            return Err(invalid("expected a selection instance"));
        }
        self.validate()?;
        let labels = self.groups.as_ref().ok_or_else(|| invalid("a selection instance needs groups"))?;
        let t = labels.iter().copied().max().unwrap_or(0);
        let mut groups = vec![Vec::new(); t];
        let mut weights = vec![Vec::new(); t];
        for (i, (point, &g)) in self.points().into_iter().zip(labels).enumerate() {
            groups[g - 1].push(point);
            weights[g - 1].push(BigUint::from(self.weights.as_ref().map_or(1, |w| w[i])));
        }
        SelectionInstance::new(self.order()?, self.dimension, groups, weights, self.budget()?)
    }

    pub fn from_clustering(inst: &ClusteringInstance, provenance: Option<Provenance>) -> Result<Self> {
        let data = inst.dataset();
        let vectors = data.points().iter().map(to_i64_row).collect::<Result<Vec<_>>>()?;
        let mult = data.multiplicities().iter().map(to_u64).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            provenance,
            kind: InstanceKind::Clustering,
            p: inst.order().to_string(),
            dimension: data.dimension(),
            vectors,
            multiplicities: (!all_ones(&mult)).then_some(mult),
            groups: None,
            weights: None,
            k: Some(inst.k()),
            budget: format_budget(inst.budget(), inst.order()),
        })
    }

    pub fn from_selection(inst: &SelectionInstance, provenance: Option<Provenance>) -> Result<Self> {
        let (mut vectors, mut groups, mut weights) = (Vec::new(), Vec::new(), Vec::new());
        for (g, (points, ws)) in inst.groups().iter().zip(inst.weights()).enumerate() {
            for (point, w) in points.iter().zip(ws) {
                vectors.push(to_i64_row(point)?);
                groups.push(g + 1);
                weights.push(to_u64(w)?);
            }
        }
        Ok(Self {
            provenance,
            kind: InstanceKind::Selection,
            p: inst.order().to_string(),
            dimension: inst.dimension(),
            vectors,
            multiplicities: None,
            groups: Some(groups),
            weights: (!all_ones(&weights)).then_some(weights),
            k: None,
            budget: format_budget(inst.budget(), inst.order()),
        })
    }

    /// Deterministic text: one key per line, one vector per line.
    pub fn render(&self) -> String {
        render_object(&serde_json::to_value(self).expect("instance files serialize"))
    }
}

fn render_object(value: &Value) -> String {
    let Value::Object(map) = value else {
        return format!("{value}\n");
    };
    let mut out = String::from("{\n");
    let last = map.len().saturating_sub(1);
    for (i, (key, v)) in map.iter().enumerate() {
        out.push_str(&format!("  {}: ", Value::String(key.clone())));
        match v {
            Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_array) => {
                out.push_str("[\n");
                for (j, row) in rows.iter().enumerate() {
                    out.push_str(&format!("    {row}{}\n", if j + 1 < rows.len() { "," } else { "" }));
                }
                out.push_str("  ]");
            }
            other => out.push_str(&other.to_string()),
        }
        out.push_str(if i < last { ",\n" } else { "\n" });
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    #[default]
    Graph,
    #[serde(rename = "3sat")]
    Sat,
    Hioct,
}

/// A graph, a colored graph, an HIOCT instance (`t`) or a 3-CNF formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "is_plain_graph")]
    pub kind: GraphKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clauses: Option<Vec<[i64; 3]>>,
}

fn is_plain_graph(kind: &GraphKind) -> bool {
    *kind == GraphKind::Graph
}

/// A parsed graph file.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphInput {
    Graph(Graph),
    Hioct(HioctInstance),
    Formula(CnfFormula),
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| invalid(format!("malformed graph file: {e}")))?;
        file.to_input()?;
        Ok(file)
    }

    pub fn from_graph(g: &Graph) -> Self {
        Self {
            kind: GraphKind::Graph,
            n: g.n(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
            colors: g.colors().map(<[usize]>::to_vec),
            t: None,
            clauses: None,
        }
    }

    pub fn from_formula(f: &CnfFormula) -> Self {
        Self {
            kind: GraphKind::Sat,
            n: f.num_vars(),
            edges: Vec::new(),
            colors: None,
            t: None,
            clauses: Some(f.clauses().to_vec()),
        }
    }

    fn graph(&self) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        let g = Graph::new(self.n, &edges)?;
        match &self.colors {
            Some(c) => g.with_colors(c.clone()),
            None => Ok(g),
        }
    }

    pub fn to_input(&self) -> Result<GraphInput> {
        match self.kind {
            GraphKind::Graph => {
                if self.clauses.is_some() || self.t.is_some() {
                    return Err(invalid("clauses need kind \"3sat\" and t needs kind \"hioct\""));
                }
                Ok(GraphInput::Graph(self.graph()?))
            }
            GraphKind::Hioct => {
                let t = self.t.ok_or_else(|| invalid("an hioct file needs t"))?;
                if self.clauses.is_some() {
                    return Err(invalid("clauses need kind \"3sat\""));
                }
                Ok(GraphInput::Hioct(HioctInstance { graph: self.graph()?, t }))
            }
            GraphKind::Sat => {
                if !self.edges.is_empty() || self.colors.is_some() || self.t.is_some() {
                    return Err(invalid("a 3sat file holds only n and clauses"));
                }
                let clauses = self.clauses.clone().ok_or_else(|| invalid("a 3sat file needs clauses"))?;
                Ok(GraphInput::Formula(CnfFormula::new(self.n, clauses)?))
            }
        }
    }

    pub fn to_source(&self) -> Result<Source> {
        match self.to_input()? {
            GraphInput::Graph(g) => Ok(Source::Graph(g)),
            GraphInput::Formula(f) => Ok(Source::Formula(f)),
            GraphInput::Hioct(_) => Err(invalid("reduction checks start from a graph or a formula")),
        }
    }

    /// Compact JSON with fields in declaration order.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("graph files serialize")
    }

    /// Hex SHA-256 of the canonical form.
    pub fn sha256(&self) -> String {
        Sha256::digest(self.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn render(&self) -> String {
        render_object(&serde_json::to_value(self).expect("graph files serialize"))
    }
}
