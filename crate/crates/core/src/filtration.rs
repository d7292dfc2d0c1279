//! Graphs filtered by a rooted tree quiver and their zero-dimensional homology.
//!
//! A [`QFiltration`] assigns a vertex of `Q` to every vertex and edge of a
//! graph, edges above their endpoints. The subgraph at `x` consists of the
//! cells whose value is `<= x`. [`filtration_to_forest`] sweeps the levels of
//! `Q` from the deepest occupied one up to the root with a union-find, emitting
//! one forest node per class and level; the result linearizes to `H0` of the
//! filtration.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::decomp::{decompose_forest, Decomposition};
use crate::error::{Error, Result};
use crate::quiver::{check_id, Poset, RootedTree};
use crate::tree::{ForestOverQ, TreeOverQ};
use crate::union_find::UnionFind;

/// A finite simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            check_id(v)?;
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut graph = Self {
            names: vertices,
            index,
            edges: Vec::with_capacity(edges.len()),
            edge_index: HashMap::with_capacity(edges.len()),
        };
        for (a, b) in edges {
            let (ia, ib) = (graph.endpoint(&a, &b, &a)?, graph.endpoint(&a, &b, &b)?);
            if ia == ib {
                return Err(Error::NotSimple(format!("loop at {a}")));
            }
            let key = (ia.min(ib), ia.max(ib));
            if graph.edge_index.insert(key, graph.edges.len()).is_some() {
                return Err(Error::NotSimple(format!("duplicate edge {{{a}, {b}}}")));
            }
            graph.edges.push(key);
        }
        Ok(graph)
    }

    fn endpoint(&self, a: &str, b: &str, v: &str) -> Result<usize> {
        self.index.get(v).copied().ok_or_else(|| Error::UndeclaredEndpoint {
            source_id: a.to_string(),
            target_id: b.to_string(),
            vertex: v.to_string(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges as index pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_between(&self, a: &str, b: &str) -> Result<usize> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        self.edge_index
            .get(&(ia.min(ib), ia.max(ib)))
            .copied()
            .ok_or_else(|| Error::Parse(format!("{{{a}, {b}}} is not an edge")))
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertex_count());
        for v in 0..self.vertex_count() {
            uf.add(v);
        }
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..self.vertex_count() {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// The induced subgraph on `members`, keeping vertex names.
    pub fn induced(&self, members: &[usize]) -> Graph {
        let keep: BTreeSet<usize> = members.iter().copied().collect();
        let vertices = members.iter().map(|&v| self.names[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        Graph::new(vertices, edges).expect("induced subgraph of a simple graph")
    }
}

/// A graph with monotone values in a rooted tree quiver.
#[derive(Clone, Debug)]
pub struct QFiltration {
    graph: Graph,
    q: Arc<RootedTree>,
    vertex_value: Vec<usize>,
    edge_value: Vec<usize>,
}

impl QFiltration {
    /// Values by name; `edge_values` holds `(u, w, value)` triples.
    pub fn new(
        graph: Graph,
        q: Arc<RootedTree>,
        vertex_values: &HashMap<String, String>,
        edge_values: &[(String, String, String)],
    ) -> Result<Self> {
        let vertex_value = graph
            .names()
            .iter()
            .map(|v| {
                let value = vertex_values
                    .get(v)
                    .ok_or_else(|| Error::MissingValue(format!("vertex {v}")))?;
                q.index_of(value)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edge_value = vec![None; graph.edge_count()];
        for (a, b, value) in edge_values {
            let e = graph.edge_between(a, b)?;
            if edge_value[e].replace(q.index_of(value)?).is_some() {
                return Err(Error::Parse(format!("two values for edge {{{a}, {b}}}")));
            }
        }
        let edge_value = edge_value
            .into_iter()
            .enumerate()
            .map(|(e, v)| {
                let (a, b) = graph.edges()[e];
                v.ok_or_else(|| Error::MissingValue(format!("edge {{{}, {}}}", graph.name(a), graph.name(b))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(graph, q, vertex_value, edge_value)
    }

    pub fn from_indices(
        graph: Graph,
        q: Arc<RootedTree>,
        vertex_value: Vec<usize>,
        edge_value: Vec<usize>,
    ) -> Result<Self> {
        assert_eq!(vertex_value.len(), graph.vertex_count());
        assert_eq!(edge_value.len(), graph.edge_count());
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            for v in [a, b] {
                if !q.leq_idx(vertex_value[v], edge_value[e]) {
                    return Err(Error::NonMonotone(
                        graph.name(a).to_string(),
                        graph.name(b).to_string(),
                        format!(
                            "endpoint {} has value {}, which is not below the edge value {}",
                            graph.name(v),
                            q.name(vertex_value[v]),
                            q.name(edge_value[e])
                        ),
                    ));
                }
            }
        }
        Ok(Self {
            graph,
            q,
            vertex_value,
            edge_value,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn quiver(&self) -> &Arc<RootedTree> {
        &self.q
    }

    pub fn vertex_value(&self, v: usize) -> usize {
        self.vertex_value[v]
    }

    pub fn edge_value(&self, e: usize) -> usize {
        self.edge_value[e]
    }

    pub fn vertex_values(&self) -> &[usize] {
        &self.vertex_value
    }

    pub fn edge_values(&self) -> &[usize] {
        &self.edge_value
    }

    /// The graph-valued functor `x ↦ {cells with value <= x}`.
    pub fn to_functor(&self) -> GraphFunctor {
        let q = &self.q;
        let vertices = (0..q.len())
            .map(|x| self.vertex_value.iter().map(|&h| q.leq_idx(h, x)).collect())
            .collect();
        let edges = (0..q.len())
            .map(|x| self.edge_value.iter().map(|&h| q.leq_idx(h, x)).collect())
            .collect();
        GraphFunctor {
            graph: self.graph.clone(),
            q: self.q.clone(),
            vertices,
            edges,
        }
    }
}

/// One node emitted by the level sweep.
struct SweepNode {
    name: String,
    label: usize,
    parent: Option<usize>,
}

/// Per level, the node of every vertex present at that level.
pub(crate) type Membership = Vec<HashMap<usize, usize>>;

fn sweep(f: &QFiltration, record: bool) -> Result<(Vec<SweepNode>, Membership)> {
    let q = &f.q;
    let graph = &f.graph;
    let n = graph.vertex_count();
    let Some(max_level) = f.vertex_value.iter().map(|&x| q.level(x)).max() else {
        return Ok((Vec::new(), Vec::new()));
    };
    let mut vertices_at = vec![Vec::new(); max_level + 1];
    for v in 0..n {
        vertices_at[q.level(f.vertex_value[v])].push(v);
    }
    let mut edges_at = vec![Vec::new(); max_level + 1];
    for (e, &value) in f.edge_value.iter().enumerate() {
        edges_at[q.level(value)].push(e);
    }

    let mut uf = UnionFind::new(n);
    let mut label = vec![0usize; n];
    let mut node_of_root = vec![usize::MAX; n];
    let mut nodes: Vec<SweepNode> = Vec::new();
    let mut previous: Vec<(usize, usize)> = Vec::new();
    let mut membership = if record {
        vec![HashMap::new(); max_level + 1]
    } else {
        Vec::new()
    };

    for level in (0..=max_level).rev() {
        let roots: Vec<usize> = uf.representatives().collect();
        for r in roots {
            label[r] = q
                .parent(label[r])
                .expect("classes above the root level have a parent label");
        }
        for &v in &vertices_at[level] {
            uf.add(v);
            label[v] = f.vertex_value[v];
        }
        for &e in &edges_at[level] {
            let (a, b) = graph.edges()[e];
            let (ra, rb) = (uf.find(a), uf.find(b));
            if label[ra] != label[rb] || label[ra] != f.edge_value[e] {
                return Err(Error::Internal(format!(
                    "classes merged by edge {{{}, {}}} carry labels {} and {} at level {level}",
                    graph.name(a),
                    graph.name(b),
                    q.name(label[ra]),
                    q.name(label[rb])
                )));
            }
            if let Some((survivor, _)) = uf.union(a, b) {
                label[survivor] = f.edge_value[e];
            }
        }
        let mut current = Vec::with_capacity(uf.class_count());
        let roots: Vec<usize> = uf.representatives().collect();
        for r in roots {
            let id = nodes.len();
            nodes.push(SweepNode {
                name: format!("{}@{level}", graph.name(r)),
                label: label[r],
                parent: None,
            });
            node_of_root[r] = id;
            current.push((r, id));
        }
        for (v, node) in previous {
            let w = uf.find(v);
            nodes[node].parent = Some(node_of_root[w]);
        }
        if record {
            for v in 0..n {
                if uf.contains(v) {
                    let w = uf.find(v);
                    membership[level].insert(v, node_of_root[w]);
                }
            }
        }
        previous = current;
    }
    Ok((nodes, membership))
}

fn nodes_to_forest(q: &Arc<RootedTree>, nodes: &[SweepNode]) -> Result<(ForestOverQ, Vec<(usize, usize)>)> {
    let mut children = vec![Vec::new(); nodes.len()];
    let mut tops = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        match node.parent {
            Some(p) => children[p].push(i),
            None => tops.push(i),
        }
    }
    // (component, local index) of every node
    let mut position = vec![(0, 0); nodes.len()];
    let mut components = Vec::with_capacity(tops.len());
    for (c, &top) in tops.iter().enumerate() {
        let mut members = Vec::new();
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            position[v] = (c, members.len());
            members.push(v);
            stack.extend(children[v].iter().rev().copied());
        }
        let names = members.iter().map(|&v| nodes[v].name.clone()).collect();
        let parent = members
            .iter()
            .map(|&v| nodes[v].parent.map(|p| position[p].1))
            .collect();
        let tree = RootedTree::from_parents(names, parent)?;
        let labels = members.iter().map(|&v| nodes[v].label).collect();
        components.push(TreeOverQ::from_parts(q.clone(), tree, labels)?);
    }
    Ok((ForestOverQ::new(q.clone(), components)?, position))
}

/// The forest over `Q` whose linearization is `H0` of the filtration. Every
/// component is rooted at level 0, over the root of `Q`.
pub fn filtration_to_forest(f: &QFiltration) -> Result<ForestOverQ> {
    let (nodes, _) = sweep(f, false)?;
    Ok(nodes_to_forest(&f.q, &nodes)?.0)
}

/// Graph vertex to `(component, local index)` at one level.
pub(crate) type Located = HashMap<usize, (usize, usize)>;

/// Vertices and edges present at one `Q`-vertex, by name.
pub type GraphPart = (Vec<String>, Vec<(String, String)>);

/// Like [`filtration_to_forest`], also reporting for every level the forest
/// vertex `(component, local index)` holding each present graph vertex.
pub(crate) fn filtration_to_forest_with_membership(f: &QFiltration) -> Result<(ForestOverQ, Vec<Located>)> {
    let (nodes, membership) = sweep(f, true)?;
    let (forest, position) = nodes_to_forest(&f.q, &nodes)?;
    let located = membership
        .into_iter()
        .map(|level| level.into_iter().map(|(v, node)| (v, position[node])).collect())
        .collect();
    Ok((forest, located))
}

/// Decomposes `H0` of the filtration into reduced trees over downsets of `Q`.
pub fn decompose_h0(f: &QFiltration) -> Result<Decomposition> {
    Ok(decompose_forest(&filtration_to_forest(f)?))
}

/// A monotone assignment of subgraphs of one ambient graph to the vertices of `Q`.
#[derive(Clone, Debug)]
pub struct GraphFunctor {
    graph: Graph,
    q: Arc<RootedTree>,
    vertices: Vec<Vec<bool>>,
    edges: Vec<Vec<bool>>,
}

impl GraphFunctor {
    /// `assignment[x]` lists the vertices and edges present at `Q`-vertex `x`
    /// (by name); vertices of `Q` that are not mentioned get the empty graph.
    pub fn new(graph: Graph, q: Arc<RootedTree>, assignment: &HashMap<String, GraphPart>) -> Result<Self> {
        let mut vertices = vec![vec![false; graph.vertex_count()]; q.len()];
        let mut edges = vec![vec![false; graph.edge_count()]; q.len()];
        for (x, (vs, es)) in assignment {
            let xi = q.index_of(x)?;
            for v in vs {
                vertices[xi][graph.index_of(v)?] = true;
            }
            for (a, b) in es {
                edges[xi][graph.edge_between(a, b)?] = true;
            }
        }
        Self::from_masks(graph, q, vertices, edges)
    }

    pub fn from_masks(
        graph: Graph,
        q: Arc<RootedTree>,
        vertices: Vec<Vec<bool>>,
        edges: Vec<Vec<bool>>,
    ) -> Result<Self> {
        for x in 0..q.len() {
            for (e, &(a, b)) in graph.edges().iter().enumerate() {
                if edges[x][e] && !(vertices[x][a] && vertices[x][b]) {
                    return Err(Error::FunctorNotMonotone {
                        lower: q.name(x).to_string(),
                        upper: q.name(x).to_string(),
                        detail: format!(
                            "edge {{{}, {}}} is present without both endpoints",
                            graph.name(a),
                            graph.name(b)
                        ),
                    });
                }
            }
            let Some(p) = q.parent(x) else { continue };
            let vertex_escape = (0..graph.vertex_count()).find(|&v| vertices[x][v] && !vertices[p][v]);
            let edge_escape = (0..graph.edge_count()).find(|&e| edges[x][e] && !edges[p][e]);
            let detail = match (vertex_escape, edge_escape) {
                (Some(v), _) => format!("vertex {} disappears", graph.name(v)),
                (None, Some(e)) => {
                    let (a, b) = graph.edges()[e];
                    format!("edge {{{}, {}}} disappears", graph.name(a), graph.name(b))
                }
                (None, None) => continue,
            };
            return Err(Error::FunctorNotMonotone {
                lower: q.name(x).to_string(),
                upper: q.name(p).to_string(),
                detail,
            });
        }
        Ok(Self {
            graph,
            q,
            vertices,
            edges,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn quiver(&self) -> &Arc<RootedTree> {
        &self.q
    }

    pub fn vertex_present(&self, x: usize, v: usize) -> bool {
        self.vertices[x][v]
    }

    pub fn edge_present(&self, x: usize, e: usize) -> bool {
        self.edges[x][e]
    }

    /// Connected components of the subgraph at `x`: a union-find over the
    /// present vertices.
    fn components_at(&self, x: usize) -> UnionFind {
        let mut uf = UnionFind::new(self.graph.vertex_count());
        for v in 0..self.graph.vertex_count() {
            if self.vertices[x][v] {
                uf.add(v);
            }
        }
        for (e, &(a, b)) in self.graph.edges().iter().enumerate() {
            if self.edges[x][e] {
                uf.union(a, b);
            }
        }
        uf
    }
}

/// One forest node per connected component of each subgraph, with an edge to
/// the component containing it one step up in `Q`.
pub fn sigma_of_functor(functor: &GraphFunctor) -> Result<ForestOverQ> {
    let q = &functor.q;
    let graph = &functor.graph;
    let mut finders: Vec<UnionFind> = (0..q.len()).map(|x| functor.components_at(x)).collect();
    let mut nodes: Vec<SweepNode> = Vec::new();
    // node id of (x, root vertex)
    let mut node_at: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..q.len() {
        let roots: Vec<usize> = finders[x].representatives().collect();
        for r in roots {
            node_at.insert((x, r), nodes.len());
            nodes.push(SweepNode {
                name: format!("{}@{x}", graph.name(r)),
                label: x,
                parent: None,
            });
        }
    }
    for x in 0..q.len() {
        let Some(p) = q.parent(x) else { continue };
        let roots: Vec<usize> = finders[x].representatives().collect();
        for r in roots {
            let up = finders[p].find(r);
            let child = node_at[&(x, r)];
            nodes[child].parent = Some(node_at[&(p, up)]);
        }
    }
    Ok(nodes_to_forest(q, &nodes)?.0)
}

/// A graph whose vertices and edges carry values in an `m × n` grid, edges
/// componentwise above their endpoints. Values are 0-based.
#[derive(Clone, Debug)]
pub struct Bifiltration {
    graph: Graph,
    grid: (u32, u32),
    vertex_values: Vec<(u32, u32)>,
    edge_values: Vec<(u32, u32)>,
}

fn grid_leq(a: (u32, u32), b: (u32, u32)) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

impl Bifiltration {
    pub fn new(
        graph: Graph,
        grid: (u32, u32),
        vertex_values: &HashMap<String, (u32, u32)>,
        edge_values: &[(String, String, (u32, u32))],
    ) -> Result<Self> {
        let in_grid = |cell: String, v: (u32, u32)| -> Result<(u32, u32)> {
            if v.0 >= grid.0 || v.1 >= grid.1 {
                return Err(Error::Parse(format!(
                    "grid value {v:?} of {cell} lies outside the {}x{} grid",
                    grid.0, grid.1
                )));
            }
            Ok(v)
        };
        let vv = graph
            .names()
            .iter()
            .map(|v| {
                let value = *vertex_values
                    .get(v)
                    .ok_or_else(|| Error::MissingValue(format!("vertex {v}")))?;
                in_grid(format!("vertex {v}"), value)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ev = vec![None; graph.edge_count()];
        for (a, b, value) in edge_values {
            let e = graph.edge_between(a, b)?;
            ev[e] = Some(in_grid(format!("edge {{{a}, {b}}}"), *value)?);
        }
        let mut edge_values_out = Vec::with_capacity(ev.len());
        for (e, v) in ev.into_iter().enumerate() {
            let (a, b) = graph.edges()[e];
            let value =
                v.ok_or_else(|| Error::MissingValue(format!("edge {{{}, {}}}", graph.name(a), graph.name(b))))?;
            for end in [a, b] {
                if !grid_leq(vv[end], value) {
                    return Err(Error::NonMonotone(
                        graph.name(a).to_string(),
                        graph.name(b).to_string(),
                        format!(
                            "endpoint {} has grid value {:?}, not below the edge value {:?}",
                            graph.name(end),
                            vv[end],
                            value
                        ),
                    ));
                }
            }
            edge_values_out.push(value);
        }
        Ok(Self {
            graph,
            grid,
            vertex_values: vv,
            edge_values: edge_values_out,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn grid(&self) -> (u32, u32) {
        self.grid
    }
}

/// A rooted tree poset together with an order-preserving map into the grid.
#[derive(Clone, Debug)]
pub struct GridRestriction {
    poset: Poset,
    embedding: Vec<(u32, u32)>,
}

impl GridRestriction {
    pub fn new(poset: Poset, embedding: &HashMap<String, (u32, u32)>) -> Result<Self> {
        let embedding = poset
            .elements()
            .iter()
            .map(|p| {
                embedding
                    .get(p)
                    .copied()
                    .ok_or_else(|| Error::MissingValue(format!("embedding of {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        for (a, b) in poset.covers() {
            if !grid_leq(embedding[a], embedding[b]) {
                return Err(Error::NotOrderPreserving {
                    lower: poset.elements()[a].clone(),
                    upper: poset.elements()[b].clone(),
                    lower_value: embedding[a],
                    upper_value: embedding[b],
                });
            }
        }
        Ok(Self { poset, embedding })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }
}

/// Pulls a grid bifiltration back along the embedding: the subgraph at `p`
/// holds the cells whose value is componentwise below the image of `p`.
pub fn restrict_bifiltration(b: &Bifiltration, r: &GridRestriction) -> Result<GraphFunctor> {
    let q = Arc::new(RootedTree::from_quiver(&r.poset.hasse_quiver())?);
    let mut vertices = Vec::with_capacity(q.len());
    let mut edges = Vec::with_capacity(q.len());
    for x in 0..q.len() {
        let p = r
            .poset
            .elements()
            .iter()
            .position(|e| e == q.name(x))
            .expect("hasse quiver keeps the poset's elements");
        let top = r.embedding[p];
        vertices.push(b.vertex_values.iter().map(|&v| grid_leq(v, top)).collect());
        edges.push(b.edge_values.iter().map(|&v| grid_leq(v, top)).collect());
    }
    GraphFunctor::from_masks(b.graph.clone(), q, vertices, edges)
}
