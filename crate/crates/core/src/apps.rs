//! Merge trees of linear filtrations and the decomposition of a morphism of
//! merge trees.

use std::collections::HashMap;
use std::sync::Arc;

use crate::decomp::{decompose_tree, Decomposition};
use crate::error::{Error, Result};
use crate::filtration::{filtration_to_forest_with_membership, Graph, QFiltration};
use crate::quiver::RootedTree;
use crate::tree::TreeOverQ;

/// The path quiver `1 -> 2 -> ... -> n`, rooted at `n`. Vertex `i` has index `i - 1`.
pub fn path_quiver(n: u32) -> Arc<RootedTree> {
    assert!(n >= 1, "path quiver needs at least one vertex");
    let names = (1..=n).map(|i| i.to_string()).collect();
    let parent = (0..n as usize).map(|i| (i + 1 < n as usize).then_some(i + 1)).collect();
    Arc::new(RootedTree::from_parents(names, parent).expect("a path is a rooted tree"))
}

/// A graph with values in `1..=n`, edges no lower than their endpoints.
#[derive(Clone, Debug)]
pub struct LinearFiltration {
    inner: QFiltration,
    n: u32,
}

impl LinearFiltration {
    pub fn new(
        graph: Graph,
        n: u32,
        vertex_values: &HashMap<String, u32>,
        edge_values: &[(String, String, u32)],
    ) -> Result<Self> {
        let vv = graph
            .names()
            .iter()
            .map(|v| {
                vertex_values
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::MissingValue(format!("vertex {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ev = vec![None; graph.edge_count()];
        for (a, b, value) in edge_values {
            let e = graph.edge_between(a, b)?;
            if ev[e].replace(*value).is_some() {
                return Err(Error::Parse(format!("two values for edge {{{a}, {b}}}")));
            }
        }
        let ev = ev
            .into_iter()
            .enumerate()
            .map(|(e, v)| {
                let (a, b) = graph.edges()[e];
                v.ok_or_else(|| Error::MissingValue(format!("edge {{{}, {}}}", graph.name(a), graph.name(b))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(graph, n, vv, ev)
    }

    /// Values indexed like the graph's vertices and edges.
    pub fn from_values(graph: Graph, n: u32, vertex_values: Vec<u32>, edge_values: Vec<u32>) -> Result<Self> {
        let index = |cell: &dyn Fn() -> String, value: u32| -> Result<usize> {
            if value == 0 || value > n {
                return Err(Error::ValueOutOfRange { cell: cell(), value, n });
            }
            Ok(value as usize - 1)
        };
        let vv = vertex_values
            .iter()
            .enumerate()
            .map(|(v, &x)| index(&|| format!("vertex {}", graph.name(v)), x))
            .collect::<Result<Vec<_>>>()?;
        let ev = edge_values
            .iter()
            .enumerate()
            .map(|(e, &x)| {
                let (a, b) = graph.edges()[e];
                index(&|| format!("edge {{{}, {}}}", graph.name(a), graph.name(b)), x)
            })
            .collect::<Result<Vec<_>>>()?;
        let inner = QFiltration::from_indices(graph, path_quiver(n), vv, ev)?;
        Ok(Self { inner, n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn graph(&self) -> &Graph {
        self.inner.graph()
    }

    pub fn as_q_filtration(&self) -> &QFiltration {
        &self.inner
    }

    pub fn vertex_value(&self, v: usize) -> u32 {
        self.inner.vertex_value(v) as u32 + 1
    }

    pub fn edge_value(&self, e: usize) -> u32 {
        self.inner.edge_value(e) as u32 + 1
    }

    /// The same values on the subgraph induced by `members`.
    pub fn restrict(&self, members: &[usize]) -> Result<Self> {
        let graph = self.graph().induced(members);
        let vv = members.iter().map(|&v| self.vertex_value(v)).collect();
        let ev = graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                let e = self
                    .graph()
                    .edge_between(graph.name(a), graph.name(b))
                    .expect("induced edges exist in the ambient graph");
                self.edge_value(e)
            })
            .collect();
        Self::from_values(graph, self.n, vv, ev)
    }
}

/// A rooted tree over the path quiver.
#[derive(Clone, Debug)]
pub struct MergeTree {
    tree: TreeOverQ,
}

impl MergeTree {
    pub fn tree(&self) -> &TreeOverQ {
        &self.tree
    }

    pub fn into_tree(self) -> TreeOverQ {
        self.tree
    }
}

type Located = Vec<HashMap<usize, (usize, usize)>>;

fn connected_forest(f: &LinearFiltration) -> Result<(TreeOverQ, Located)> {
    let (forest, located) = filtration_to_forest_with_membership(f.as_q_filtration())?;
    if forest.len() != 1 {
        return Err(Error::NotConnected(forest.len()));
    }
    Ok((forest.into_components().pop().expect("one component"), located))
}

/// One node per connected component of every sublevel graph. The whole graph
/// must be connected.
pub fn merge_tree(f: &LinearFiltration) -> Result<MergeTree> {
    Ok(MergeTree {
        tree: connected_forest(f)?.0,
    })
}

fn check_dominated(f: &LinearFiltration, g: &LinearFiltration) -> Result<()> {
    if f.graph() != g.graph() || f.n() != g.n() {
        return Err(Error::Parse("f and g must share the graph and n".into()));
    }
    let graph = f.graph();
    for v in 0..graph.vertex_count() {
        if f.vertex_value(v) > g.vertex_value(v) {
            return Err(Error::NotDominated(format!("vertex {}", graph.name(v))));
        }
    }
    for (e, &(a, b)) in graph.edges().iter().enumerate() {
        if f.edge_value(e) > g.edge_value(e) {
            return Err(Error::NotDominated(format!(
                "edge {{{}, {}}}",
                graph.name(a),
                graph.name(b)
            )));
        }
    }
    Ok(())
}

/// For `f <= g`, the merge tree `T` of `f` and the merge tree of `g` as a tree
/// `S` over `T`: a `g`-component sits over the `f`-component containing it.
pub fn merge_tree_morphism(f: &LinearFiltration, g: &LinearFiltration) -> Result<(TreeOverQ, MergeTree)> {
    check_dominated(f, g)?;
    let (t, f_located) = connected_forest(f)?;
    let (s, g_located) = connected_forest(g)?;
    let mut labels = vec![usize::MAX; s.len()];
    for (level, members) in g_located.iter().enumerate() {
        for (&v, &(_, node)) in members {
            let (_, over) = *f_located[level]
                .get(&v)
                .ok_or_else(|| Error::Internal(format!("vertex {} present in g but not f", f.graph().name(v))))?;
            match labels[node] {
                usize::MAX => labels[node] = over,
                seen if seen != over => {
                    return Err(Error::Internal(format!(
                        "containment: component {} of g at level {level} meets two components of f",
                        s.tree().name(node)
                    )))
                }
                _ => {}
            }
        }
    }
    let base = Arc::new(t.tree().clone());
    let s_over_t = TreeOverQ::from_parts(base, s.tree().clone(), labels)?;
    Ok((s_over_t, MergeTree { tree: t }))
}

/// The decomposition of `k_S` as a representation of the merge tree of `f`.
pub fn morphism_invariant(f: &LinearFiltration, g: &LinearFiltration) -> Result<Decomposition> {
    let (s, _) = merge_tree_morphism(f, g)?;
    Ok(decompose_tree(&s).decomposition)
}

/// The invariant of one connected component of the graph.
#[derive(Clone, Debug)]
pub struct ComponentInvariant {
    pub vertices: Vec<String>,
    pub merge_tree: MergeTree,
    pub decomposition: Decomposition,
}

/// Splits the graph into connected components and computes the invariant of
/// each, ordered by smallest vertex index.
pub fn morphism_invariant_by_component(f: &LinearFiltration, g: &LinearFiltration) -> Result<Vec<ComponentInvariant>> {
    check_dominated(f, g)?;
    f.graph()
        .components()
        .into_iter()
        .map(|members| {
            let (fc, gc) = (f.restrict(&members)?, g.restrict(&members)?);
            let (s, t) = merge_tree_morphism(&fc, &gc)?;
            Ok(ComponentInvariant {
                vertices: fc.graph().names().to_vec(),
                merge_tree: t,
                decomposition: decompose_tree(&s).decomposition,
            })
        })
        .collect()
}
