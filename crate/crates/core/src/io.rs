//! JSON file formats.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::apps::LinearFiltration;
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::filtration::{Bifiltration, Graph, GridRestriction, QFiltration};
use crate::quiver::{Poset, Quiver, RootedTree};
use crate::tree::TreeOverQ;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl QuiverFile {
    pub fn from_quiver(q: &Quiver) -> Self {
        Self {
            vertices: q.vertices().to_vec(),
            edges: q.edges().to_vec(),
        }
    }

    pub fn from_rooted(t: &RootedTree) -> Self {
        Self::from_quiver(&t.to_quiver())
    }

    pub fn to_quiver(&self) -> Result<Quiver> {
        Quiver::new(self.vertices.clone(), self.edges.clone())
    }

    pub fn to_rooted(&self) -> Result<RootedTree> {
        RootedTree::from_quiver(&self.to_quiver()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeOverFile {
    pub base: QuiverFile,
    pub tree: QuiverFile,
    pub labeling: BTreeMap<String, String>,
}

impl TreeOverFile {
    pub fn from_tree(t: &TreeOverQ) -> Self {
        Self {
            base: QuiverFile::from_rooted(t.base()),
            tree: QuiverFile::from_rooted(t.tree()),
            labeling: t.labeling_map().into_iter().collect(),
        }
    }

    pub fn to_tree(&self) -> Result<TreeOverQ> {
        let base = Arc::new(self.base.to_rooted()?);
        self.to_tree_over(base)
    }

    /// Parses the tree over an already built base, which must equal the file's.
    pub fn to_tree_over(&self, base: Arc<RootedTree>) -> Result<TreeOverQ> {
        if self.base.to_rooted()? != *base {
            return Err(Error::AmbientMismatch);
        }
        let labeling: HashMap<String, String> = self.labeling.clone().into_iter().collect();
        TreeOverQ::new(base, self.tree.to_rooted()?, &labeling)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            vertices: g.names().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(self.vertices.clone(), self.edges.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationFile {
    pub quiver: QuiverFile,
    pub graph: GraphFile,
    pub vertex_values: BTreeMap<String, String>,
    pub edge_values: Vec<(String, String, String)>,
}

impl FiltrationFile {
    pub fn from_filtration(f: &QFiltration) -> Self {
        let q = f.quiver();
        let g = f.graph();
        Self {
            quiver: QuiverFile::from_rooted(q),
            graph: GraphFile::from_graph(g),
            vertex_values: (0..g.vertex_count())
                .map(|v| (g.name(v).to_string(), q.name(f.vertex_value(v)).to_string()))
                .collect(),
            edge_values: g
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(a, b))| {
                    (
                        g.name(a).to_string(),
                        g.name(b).to_string(),
                        q.name(f.edge_value(e)).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_filtration(&self) -> Result<QFiltration> {
        let q = Arc::new(self.quiver.to_rooted()?);
        let values: HashMap<String, String> = self.vertex_values.clone().into_iter().collect();
        QFiltration::new(self.graph.to_graph()?, q, &values, &self.edge_values)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
}

impl PosetFile {
    pub fn to_poset(&self) -> Result<Poset> {
        Poset::new(self.elements.clone(), &self.relations)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionFile {
    pub poset: PosetFile,
    pub embedding: BTreeMap<String, (u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BifiltrationFile {
    pub graph: GraphFile,
    pub grid: (u32, u32),
    pub vertex_values: BTreeMap<String, (u32, u32)>,
    pub edge_values: Vec<(String, String, (u32, u32))>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<RestrictionFile>,
}

impl BifiltrationFile {
    pub fn to_bifiltration(&self) -> Result<Bifiltration> {
        let values: HashMap<String, (u32, u32)> = self.vertex_values.clone().into_iter().collect();
        Bifiltration::new(self.graph.to_graph()?, self.grid, &values, &self.edge_values)
    }

    pub fn to_restriction(&self) -> Result<Option<GridRestriction>> {
        self.restriction
            .as_ref()
            .map(|r| {
                let embedding: HashMap<String, (u32, u32)> = r.embedding.clone().into_iter().collect();
                GridRestriction::new(r.poset.to_poset()?, &embedding)
            })
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergeInvariantFile {
    pub graph: GraphFile,
    pub n: u32,
    pub f_vertices: BTreeMap<String, u32>,
    pub f_edges: Vec<(String, String, u32)>,
    pub g_vertices: BTreeMap<String, u32>,
    pub g_edges: Vec<(String, String, u32)>,
}

impl MergeInvariantFile {
    pub fn to_filtrations(&self) -> Result<(LinearFiltration, LinearFiltration)> {
        let graph = self.graph.to_graph()?;
        let fv: HashMap<String, u32> = self.f_vertices.clone().into_iter().collect();
        let gv: HashMap<String, u32> = self.g_vertices.clone().into_iter().collect();
        Ok((
            LinearFiltration::new(graph.clone(), self.n, &fv, &self.f_edges)?,
            LinearFiltration::new(graph, self.n, &gv, &self.g_edges)?,
        ))
    }
}

/// Every file kind, tagged by the keys present at the top level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputFile {
    Quiver(QuiverFile),
    TreeOver(TreeOverFile),
    Filtration(FiltrationFile),
    Bifiltration(BifiltrationFile),
    MergeInvariant(MergeInvariantFile),
    Poset(PosetFile),
}

impl InputFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("top level must be a JSON object".into()))?;
        let has = |k: &str| obj.contains_key(k);
        Ok(if has("labeling") {
            Self::TreeOver(serde_json::from_value(value)?)
        } else if has("grid") {
            Self::Bifiltration(serde_json::from_value(value)?)
        } else if has("f_vertices") {
            Self::MergeInvariant(serde_json::from_value(value)?)
        } else if has("quiver") {
            Self::Filtration(serde_json::from_value(value)?)
        } else if has("elements") {
            Self::Poset(serde_json::from_value(value)?)
        } else if has("vertices") {
            Self::Quiver(serde_json::from_value(value)?)
        } else {
            return Err(Error::Parse("unrecognized file kind".into()));
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Quiver(_) => "quiver",
            Self::TreeOver(_) => "tree",
            Self::Filtration(_) => "filtration",
            Self::Bifiltration(_) => "bifiltration",
            Self::MergeInvariant(_) => "merge-invariant",
            Self::Poset(_) => "poset",
        }
    }

    /// Runs the full semantic validation of the file's kind.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Quiver(q) => q.to_rooted().map(drop),
            Self::TreeOver(t) => t.to_tree().map(drop),
            Self::Filtration(f) => f.to_filtration().map(drop),
            Self::Bifiltration(b) => {
                b.to_bifiltration()?;
                b.to_restriction().map(drop)
            }
            Self::MergeInvariant(m) => {
                let (f, g) = m.to_filtrations()?;
                crate::apps::morphism_invariant_by_component(&f, &g).map(drop)
            }
            Self::Poset(p) => p.to_poset().map(drop),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandFile {
    pub apex: String,
    pub key: String,
    pub multiplicity: usize,
    pub tree: TreeOverFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub summands: Vec<SummandFile>,
    pub dims: BTreeMap<String, usize>,
}

impl DecompositionFile {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        Self {
            summands: d
                .summands()
                .iter()
                .map(|s| SummandFile {
                    apex: s.apex.clone(),
                    key: s.key.as_str().to_string(),
                    multiplicity: s.multiplicity,
                    tree: TreeOverFile::from_tree(&s.witness),
                })
                .collect(),
            dims: d.dim_map(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T2: &str = r#"{"base":{"vertices":["a","b"],"edges":[["a","b"]]},
        "tree":{"vertices":["x","y","r"],"edges":[["x","r"],["y","r"]]},
        "labeling":{"x":"a","y":"a","r":"b"}}"#;

    #[test]
    fn kinds_are_detected() {
        let q = InputFile::parse(r#"{"vertices":["a","b"],"edges":[["a","b"]]}"#).unwrap();
        assert_eq!(q.kind(), "quiver");
        q.validate().unwrap();
        assert_eq!(InputFile::parse(T2).unwrap().kind(), "tree");
        let p = InputFile::parse(r#"{"elements":["p","q"],"relations":[["p","q"]]}"#).unwrap();
        assert_eq!(p.kind(), "poset");
        assert!(InputFile::parse("[]").is_err());
        assert!(InputFile::parse(r#"{"vertices":[],"edges":[],"extra":1}"#).is_err());
    }

    #[test]
    fn cyclic_quiver_is_invalid() {
        let q = InputFile::parse(r#"{"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}"#).unwrap();
        assert!(matches!(q.validate(), Err(Error::Cycle(_))));
    }

    #[test]
    fn round_trips() {
        let InputFile::TreeOver(file) = InputFile::parse(T2).unwrap() else {
            panic!()
        };
        let t = file.to_tree().unwrap();
        let again = TreeOverFile::from_tree(&t);
        assert_eq!(again.to_tree().unwrap().canonical_key(), t.canonical_key());
        let text = serde_json::to_string(&again).unwrap();
        assert_eq!(InputFile::parse(&text).unwrap(), InputFile::TreeOver(again));

        let f = r#"{"quiver":{"vertices":["a","b"],"edges":[["a","b"]]},
            "graph":{"vertices":["u","w"],"edges":[["u","w"]]},
            "vertex_values":{"u":"a","w":"a"},"edge_values":[["u","w","b"]]}"#;
        let InputFile::Filtration(file) = InputFile::parse(f).unwrap() else {
            panic!()
        };
        let back = FiltrationFile::from_filtration(&file.to_filtration().unwrap());
        assert_eq!(back, file);
    }

    #[test]
    fn decomposition_schema() {
        let InputFile::TreeOver(file) = InputFile::parse(T2).unwrap() else {
            panic!()
        };
        let d = crate::decomp::decompose_tree(&file.to_tree().unwrap()).decomposition;
        let out = serde_json::to_value(DecompositionFile::from_decomposition(&d)).unwrap();
        assert_eq!(out["summands"][0]["apex"], "a");
        assert_eq!(out["summands"][1]["key"], "(b(a))");
        assert_eq!(out["summands"][1]["multiplicity"], 1);
        assert_eq!(out["dims"], serde_json::json!({"a": 2, "b": 1}));
        assert!(out["summands"][0]["tree"]["labeling"].is_object());
    }
}
