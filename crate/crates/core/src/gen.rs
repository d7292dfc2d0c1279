//! Seeded random instances and deterministic scaling families.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::apps::{path_quiver, LinearFiltration};
use crate::filtration::{Graph, QFiltration};
use crate::quiver::RootedTree;
use crate::tree::TreeOverQ;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random recursive tree on `n >= 1` vertices named `{prefix}{i}`, rooted at
/// `{prefix}0`: each new vertex attaches to a uniformly random earlier one.
pub fn random_rooted_tree<R: Rng>(rng: &mut R, n: usize, prefix: &str) -> RootedTree {
    assert!(n >= 1);
    let names = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let parent = (0..n).map(|i| (i > 0).then(|| rng.gen_range(0..i))).collect();
    RootedTree::from_parents(names, parent).expect("recursive attachment gives a rooted tree")
}

/// A random rooted tree quiver with vertices `q0..`.
pub fn random_quiver<R: Rng>(rng: &mut R, n: usize) -> Arc<RootedTree> {
    Arc::new(random_rooted_tree(rng, n, "q"))
}

/// Parent and label of every vertex, root first.
struct Builder {
    parent: Vec<Option<usize>>,
    label: Vec<usize>,
}

impl Builder {
    fn new(root_label: usize) -> Self {
        Self {
            parent: vec![None],
            label: vec![root_label],
        }
    }

    fn push(&mut self, parent: usize, label: usize) -> usize {
        self.parent.push(Some(parent));
        self.label.push(label);
        self.parent.len() - 1
    }

    /// Grows `extra` vertices below the vertices in `scope`, each attached to
    /// a random vertex of the scope whose label has children in `q`.
    fn grow<R: Rng>(&mut self, rng: &mut R, q: &RootedTree, scope: &mut Vec<usize>, extra: usize) {
        for _ in 0..extra {
            let open: Vec<usize> = scope
                .iter()
                .copied()
                .filter(|&v| !q.children(self.label[v]).is_empty())
                .collect();
            let Some(&v) = open.choose(rng) else { return };
            let label = *q.children(self.label[v]).choose(rng).expect("open vertex");
            let id = self.push(v, label);
            scope.push(id);
        }
    }

    fn build(self, base: Arc<RootedTree>) -> TreeOverQ {
        let names = (0..self.parent.len()).map(|i| format!("n{i}")).collect();
        let tree = RootedTree::from_parents(names, self.parent).expect("builder keeps a rooted tree");
        TreeOverQ::from_parts(base, tree, self.label).expect("builder follows the edges of the base")
    }
}

/// A random tree over `q` with at most `size` vertices: vertices are added one
/// at a time below a random vertex, over a random child of its label. Growth
/// stops early once every vertex lies over a leaf of `q`.
pub fn random_tree_over<R: Rng>(rng: &mut R, q: &Arc<RootedTree>, size: usize) -> TreeOverQ {
    assert!(size >= 1);
    let mut b = Builder::new(q.root());
    let mut scope = vec![0];
    b.grow(rng, q, &mut scope, size - 1);
    b.build(q.clone())
}

/// A tree over `q` with two extra children of one vertex over the same base
/// vertex, the first a pruned copy of the second and hence below it.
#[derive(Clone, Debug)]
pub struct SiblingInstance {
    pub tree: TreeOverQ,
    pub parent: String,
    pub lower: String,
    pub upper: String,
}

/// `None` when `q` has a single vertex.
pub fn comparable_sibling_instance<R: Rng>(
    rng: &mut R,
    q: &Arc<RootedTree>,
    size: usize,
    sibling_size: usize,
) -> Option<SiblingInstance> {
    let mut b = Builder::new(q.root());
    let mut scope = vec![0];
    b.grow(rng, q, &mut scope, size.saturating_sub(1));
    let open: Vec<usize> = (0..b.label.len())
        .filter(|&v| !q.children(b.label[v]).is_empty())
        .collect();
    let &v = open.choose(rng)?;
    let x = *q.children(b.label[v]).choose(rng).expect("open vertex");

    let upper = b.push(v, x);
    let mut upper_scope = vec![upper];
    b.grow(rng, q, &mut upper_scope, sibling_size.saturating_sub(1));

    // copy a random connected part of the upper subtree containing its root
    let mut copy_of = std::collections::HashMap::new();
    let lower = b.push(v, x);
    copy_of.insert(upper, lower);
    for &u in &upper_scope[1..] {
        let p = b.parent[u].expect("below the upper root");
        if let Some(&cp) = copy_of.get(&p) {
            if rng.gen_bool(0.6) {
                let id = b.push(cp, b.label[u]);
                copy_of.insert(u, id);
            }
        }
    }
    let parent = format!("n{v}");
    Some(SiblingInstance {
        tree: b.build(q.clone()),
        parent,
        lower: format!("n{lower}"),
        upper: format!("n{upper}"),
    })
}

/// A random graph on `vertices` vertices `v0..` with each pair joined with
/// probability `edge_prob`.
pub fn random_graph<R: Rng>(rng: &mut R, vertices: usize, edge_prob: f64) -> Graph {
    let names: Vec<String> = (0..vertices).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            if rng.gen_bool(edge_prob) {
                edges.push((names[a].clone(), names[b].clone()));
            }
        }
    }
    Graph::new(names, edges).expect("distinct pairs give a simple graph")
}

/// Random values on a random graph: vertices uniform over `q`, edges uniform
/// and then raised to the join of their endpoints' values.
pub fn random_filtration<R: Rng>(rng: &mut R, q: &Arc<RootedTree>, vertices: usize, edge_prob: f64) -> QFiltration {
    let graph = random_graph(rng, vertices, edge_prob);
    let vv: Vec<usize> = (0..vertices).map(|_| rng.gen_range(0..q.len())).collect();
    let ev = graph
        .edges()
        .iter()
        .map(|&(a, b)| {
            let sampled = rng.gen_range(0..q.len());
            q.join_idx(sampled, q.join_idx(vv[a], vv[b]))
        })
        .collect();
    QFiltration::from_indices(graph, q.clone(), vv, ev).expect("repaired values are monotone")
}

/// A connected random graph: a random recursive spanning tree plus extra
/// edges with probability `extra_prob`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, vertices: usize, extra_prob: f64) -> Graph {
    let names: Vec<String> = (0..vertices).map(|i| format!("v{i}")).collect();
    let mut pairs = BTreeSet::new();
    for i in 1..vertices {
        pairs.insert((rng.gen_range(0..i), i));
    }
    for a in 0..vertices {
        for b in a + 1..vertices {
            if rng.gen_bool(extra_prob) {
                pairs.insert((a, b));
            }
        }
    }
    let edges = pairs
        .into_iter()
        .map(|(a, b)| (names[a].clone(), names[b].clone()))
        .collect();
    Graph::new(names, edges).expect("distinct pairs give a simple graph")
}

/// Random values in `1..=n` on `graph`, edges raised to their endpoints.
pub fn random_linear_filtration<R: Rng>(rng: &mut R, graph: Graph, n: u32) -> LinearFiltration {
    let vv: Vec<u32> = (0..graph.vertex_count()).map(|_| rng.gen_range(1..=n)).collect();
    let ev = graph
        .edges()
        .iter()
        .map(|&(a, b)| rng.gen_range(1..=n).max(vv[a]).max(vv[b]))
        .collect();
    LinearFiltration::from_values(graph, n, vv, ev).expect("repaired values are monotone")
}

/// A random `g >= f`: every value of `f` raised by a random amount, edges then
/// raised to their endpoints.
pub fn random_dominating<R: Rng>(rng: &mut R, f: &LinearFiltration) -> LinearFiltration {
    let n = f.n();
    let graph = f.graph().clone();
    let vv: Vec<u32> = (0..graph.vertex_count())
        .map(|v| rng.gen_range(f.vertex_value(v)..=n))
        .collect();
    let ev = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| rng.gen_range(f.edge_value(e)..=n).max(vv[a]).max(vv[b]))
        .collect();
    LinearFiltration::from_values(graph, n, vv, ev).expect("repaired values are monotone")
}

/// The path `t0 -> ... -> t{n-1}` over the path quiver `1 -> ... -> n`, with
/// `t{i}` over `i + 1`.
pub fn path_tree(n: u32) -> TreeOverQ {
    let q = path_quiver(n);
    let names = (0..n).map(|i| format!("t{i}")).collect();
    let parent = (0..n as usize).map(|i| (i + 1 < n as usize).then_some(i + 1)).collect();
    let tree = RootedTree::from_parents(names, parent).expect("a path is a rooted tree");
    TreeOverQ::from_parts(q, tree, (0..n as usize).collect()).expect("the identity labeling")
}

/// The path graph `v1 - ... - vn` over the path quiver, with `vi` and the edge
/// `{v(i-1), vi}` entering at `i`.
pub fn path_filtration(n: u32) -> QFiltration {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let edges = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let graph = Graph::new(names, edges).expect("a path is simple");
    let vv = (0..n as usize).collect();
    let ev = (1..n as usize).collect();
    QFiltration::from_indices(graph, path_quiver(n), vv, ev).expect("values increase along the path")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::tree_leq;

    #[test]
    fn seeded_generation_is_reproducible() {
        let q1 = random_quiver(&mut rng(7), 6);
        let q2 = random_quiver(&mut rng(7), 6);
        assert_eq!(*q1, *q2);
        let a = random_tree_over(&mut rng(3), &q1, 10);
        let b = random_tree_over(&mut rng(3), &q1, 10);
        assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn size_one_is_the_star() {
        let q = random_quiver(&mut rng(1), 4);
        assert!(random_tree_over(&mut rng(1), &q, 1).is_star());
        let point = random_quiver(&mut rng(1), 1);
        assert!(random_tree_over(&mut rng(1), &point, 9).is_star());
    }

    #[test]
    fn sibling_instances_are_comparable() {
        let mut r = rng(11);
        for _ in 0..20 {
            let q = random_quiver(&mut r, 5);
            let Some(inst) = comparable_sibling_instance(&mut r, &q, 6, 5) else {
                continue;
            };
            let t = inst.tree.tree();
            let (lo, up) = (t.index_of(&inst.lower).unwrap(), t.index_of(&inst.upper).unwrap());
            let base = Arc::new(q.downset_idx(inst.tree.label(lo)));
            let lower = inst.tree.subtree_over(lo, base.clone());
            let upper = inst.tree.subtree_over(up, base);
            assert!(tree_leq(&lower, &upper).unwrap());
        }
    }

    #[test]
    fn families() {
        assert_eq!(path_tree(5).len(), 5);
        let f = path_filtration(4);
        assert_eq!(f.graph().edge_count(), 3);
        let mut r = rng(5);
        let g = random_connected_graph(&mut r, 12, 0.1);
        assert_eq!(g.components().len(), 1);
        let f = random_linear_filtration(&mut r, g, 5);
        let h = random_dominating(&mut r, &f);
        assert!((0..12).all(|v| f.vertex_value(v) <= h.vertex_value(v)));
    }
}
