//! Quivers, rooted tree quivers and the order they induce on their vertices.
//!
//! A [`RootedTree`] is a quiver whose underlying graph is a tree and which has a
//! unique sink, the root. Every other vertex has exactly one outgoing edge, to
//! its parent. Vertex `x` is below `y` (`x <= y`) when a directed path runs from
//! `x` to `y`, so the root is the maximum and the order is a join-semilattice.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

pub(crate) fn check_id(id: &str) -> Result<()> {
    if id.is_empty() || id.chars().any(char::is_whitespace) {
        return Err(Error::InvalidId(id.to_string()));
    }
    Ok(())
}

/// A finite directed multigraph with string vertex identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            check_id(v)?;
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        for (s, t) in &edges {
            for endpoint in [s, t] {
                if !seen.contains(endpoint.as_str()) {
                    return Err(Error::UndeclaredEndpoint {
                        source_id: s.clone(),
                        target_id: t.clone(),
                        vertex: endpoint.clone(),
                    });
                }
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A validated rooted tree quiver with parent pointers and levels.
///
/// Vertices are stored by index in the order they were declared. Child lists
/// are sorted by identifier so that every traversal is deterministic.
#[derive(Clone, Debug)]
pub struct RootedTree {
    names: Vec<String>,
    index: HashMap<String, usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    level: Vec<usize>,
    root: usize,
    height: usize,
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.names.len() == other.names.len()
            && self.names.iter().enumerate().all(|(i, name)| {
                let Some(&j) = other.index.get(name) else {
                    return false;
                };
                match (self.parent[i], other.parent[j]) {
                    (None, None) => true,
                    (Some(p), Some(q)) => self.names[p] == other.names[q],
                    _ => false,
                }
            })
    }
}

impl Eq for RootedTree {}

impl RootedTree {
    /// Checks that `q` is a rooted tree quiver and computes its parent map and levels.
    pub fn from_quiver(q: &Quiver) -> Result<Self> {
        let names = q.vertices().to_vec();
        let index: HashMap<String, usize> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
        let mut seen_edges = BTreeSet::new();
        for (s, t) in q.edges() {
            if s == t {
                return Err(Error::Loop(s.clone()));
            }
            if !seen_edges.insert((s.as_str(), t.as_str())) {
                return Err(Error::ParallelEdge(s.clone(), t.clone()));
            }
            out[index[s]].push(index[t]);
        }
        if let Some((v, targets)) = out.iter().enumerate().find(|(_, t)| t.len() > 1) {
            return Err(Error::OutDegree {
                vertex: names[v].clone(),
                degree: targets.len(),
            });
        }
        let parent = out.into_iter().map(|t| t.first().copied()).collect();
        Self::from_parents(names, parent)
    }

    /// Builds a rooted tree from a parent array. Rejects cycles, multiple sinks
    /// and the empty tree.
    pub fn from_parents(names: Vec<String>, parent: Vec<Option<usize>>) -> Result<Self> {
        assert_eq!(names.len(), parent.len());
        if names.is_empty() {
            return Err(Error::EmptyTree);
        }
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            check_id(name)?;
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }

        // 0 = unvisited, 1 = on the current walk, 2 = known to reach a sink
        let mut state = vec![0u8; n];
        for start in 0..n {
            let mut walk: Vec<usize> = Vec::new();
            let mut v = start;
            loop {
                match state[v] {
                    2 => break,
                    1 => {
                        let pos = walk.iter().position(|&w| w == v).unwrap_or(0);
                        let mut witness: Vec<String> = walk[pos..].iter().map(|&w| names[w].clone()).collect();
                        witness.push(names[v].clone());
                        return Err(Error::Cycle(witness));
                    }
                    _ => {
                        state[v] = 1;
                        walk.push(v);
                        match parent[v] {
                            Some(p) => v = p,
                            None => break,
                        }
                    }
                }
            }
            for w in walk {
                state[w] = 2;
            }
        }

        let sinks: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if sinks.len() != 1 {
            return Err(Error::SinkCount(sinks.iter().map(|&v| names[v].clone()).collect()));
        }
        let root = sinks[0];

        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        for list in &mut children {
            list.sort_by(|&a, &b| names[a].cmp(&names[b]));
        }

        let mut level = vec![0usize; n];
        let mut stack = vec![root];
        let mut height = 0;
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                level[c] = level[v] + 1;
                height = height.max(level[c]);
                stack.push(c);
            }
        }

        Ok(Self {
            names,
            index,
            parent,
            children,
            level,
            root,
            height,
        })
    }

    /// The single-vertex tree.
    pub fn point(name: &str) -> Result<Self> {
        Self::from_parents(vec![name.to_string()], vec![None])
    }

    pub fn to_quiver(&self) -> Quiver {
        let edges = (0..self.len())
            .filter_map(|v| self.parent[v].map(|p| (self.names[v].clone(), self.names[p].clone())))
            .collect();
        Quiver {
            vertices: self.names.clone(),
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
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

    pub fn get_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_name(&self) -> &str {
        &self.names[self.root]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Vertices grouped by level, each group in index order.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.height + 1];
        for v in 0..self.len() {
            out[self.level[v]].push(v);
        }
        out
    }

    /// Vertices of the subtree hanging from `v`, `v` first, in preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.children[x].iter().rev());
        }
        out
    }

    /// `x <= y`: `y` is reached from `x` by following parent pointers.
    pub fn leq_idx(&self, mut x: usize, y: usize) -> bool {
        let target = self.level[y];
        if self.level[x] < target {
            return false;
        }
        while self.level[x] > target {
            x = self.parent[x].expect("non-root vertex has a parent");
        }
        x == y
    }

    pub fn leq(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.leq_idx(self.index_of(x)?, self.index_of(y)?))
    }

    pub fn ancestor_at_level_idx(&self, mut x: usize, level: usize) -> Option<usize> {
        if level > self.level[x] {
            return None;
        }
        while self.level[x] > level {
            x = self.parent[x].expect("non-root vertex has a parent");
        }
        Some(x)
    }

    /// The unique `y >= x` with the requested level.
    pub fn ancestor_at_level(&self, x: &str, level: usize) -> Result<&str> {
        let xi = self.index_of(x)?;
        self.ancestor_at_level_idx(xi, level)
            .map(|y| self.name(y))
            .ok_or_else(|| Error::LevelOutOfRange {
                vertex: x.to_string(),
                level: self.level[xi],
                requested: level,
            })
    }

    /// Least common upper bound of `x` and `y`.
    pub fn join_idx(&self, x: usize, y: usize) -> usize {
        let common = self.level[x].min(self.level[y]);
        let mut a = self.ancestor_at_level_idx(x, common).unwrap();
        let mut b = self.ancestor_at_level_idx(y, common).unwrap();
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    pub fn join(&self, x: &str, y: &str) -> Result<&str> {
        let j = self.join_idx(self.index_of(x)?, self.index_of(y)?);
        Ok(self.name(j))
    }

    /// The induced subtree on `{y : y <= x}`, rooted at `x`.
    pub fn downset_idx(&self, x: usize) -> RootedTree {
        let mut members = self.subtree(x);
        members.sort_unstable();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names = members.iter().map(|&v| self.names[v].clone()).collect();
        let parent = members
            .iter()
            .map(|&v| {
                if v == x {
                    None
                } else {
                    self.parent[v].map(|p| local[&p])
                }
            })
            .collect();
        RootedTree::from_parents(names, parent).expect("a downset of a rooted tree is a rooted tree")
    }

    pub fn downset(&self, x: &str) -> Result<RootedTree> {
        Ok(self.downset_idx(self.index_of(x)?))
    }

    /// Whether `self` equals the downset of `ambient` at its own root.
    pub fn is_downset_of(&self, ambient: &RootedTree) -> bool {
        match ambient.get_index(self.root_name()) {
            Some(x) => ambient.subtree(x).len() == self.len() && *self == ambient.downset_idx(x),
            None => false,
        }
    }
}

/// A finite partially ordered set given by its elements and order relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    // below[i][j] iff elements[i] <= elements[j]
    below: Vec<Vec<bool>>,
}

impl Poset {
    /// Pairs `(a, b)` mean `a <= b`. Reflexive pairs are implied; the given
    /// relation must be antisymmetric and transitively closed.
    pub fn new(elements: Vec<String>, relations: &[(String, String)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            check_id(e)?;
            if index.insert(e.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(e.clone()));
            }
        }
        let n = elements.len();
        let mut below = vec![vec![false; n]; n];
        for (i, row) in below.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let i = *index.get(a.as_str()).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let j = *index.get(b.as_str()).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            below[i][j] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && below[i][j] && below[j][i] {
                    return Err(Error::NotPartialOrder(format!(
                        "not antisymmetric: {} <= {} and {} <= {}",
                        elements[i], elements[j], elements[j], elements[i]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !below[i][j] {
                    continue;
                }
                for k in 0..n {
                    if below[j][k] && !below[i][k] {
                        return Err(Error::NotPartialOrder(format!(
                            "not transitive: {} <= {} <= {} but {} <= {} is missing",
                            elements[i], elements[j], elements[k], elements[i], elements[k]
                        )));
                    }
                }
            }
        }
        Ok(Self { elements, below })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[a][b]
    }

    /// Pairs `(x, y)` where `y` covers `x`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.elements.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y || !self.below[x][y] {
                    continue;
                }
                let covered = !(0..n).any(|z| z != x && z != y && self.below[x][z] && self.below[z][y]);
                if covered {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The quiver with one edge `x -> y` for every covering pair.
    pub fn hasse_quiver(&self) -> Quiver {
        let edges = self
            .covers()
            .into_iter()
            .map(|(x, y)| (self.elements[x].clone(), self.elements[y].clone()))
            .collect();
        Quiver {
            vertices: self.elements.clone(),
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(vs: &[&str], es: &[(&str, &str)]) -> Result<Quiver> {
        Quiver::new(
            vs.iter().map(|s| s.to_string()).collect(),
            es.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        )
    }

    fn t(vs: &[&str], es: &[(&str, &str)]) -> RootedTree {
        RootedTree::from_quiver(&q(vs, es).unwrap()).unwrap()
    }

    #[test]
    fn build_quiver_cases() {
        let a = q(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(a.vertices().len(), 2);
        assert_eq!(a.edges().len(), 1);
        assert!(matches!(
            q(&["a"], &[("a", "x")]),
            Err(Error::UndeclaredEndpoint { .. })
        ));
        assert!(q(&[], &[]).unwrap().is_empty());
        assert!(matches!(q(&["a", "a"], &[]), Err(Error::DuplicateVertex(_))));
        assert!(matches!(q(&["a b"], &[]), Err(Error::InvalidId(_))));
    }

    #[test]
    fn validate_rooted_tree_cases() {
        let path = t(&["a", "b"], &[("a", "b")]);
        assert_eq!(path.root_name(), "b");
        assert_eq!(path.level(path.index_of("a").unwrap()), 1);
        assert_eq!(path.height(), 1);

        let v = t(&["a", "b", "c"], &[("a", "b"), ("c", "b")]);
        assert_eq!(v.root_name(), "b");
        assert_eq!(v.level(v.index_of("c").unwrap()), 1);

        let cyc = RootedTree::from_quiver(&q(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap());
        assert!(matches!(cyc, Err(Error::Cycle(_))));
    }

    #[test]
    fn invalid_trees() {
        let err = |vs: &[&str], es: &[(&str, &str)]| RootedTree::from_quiver(&q(vs, es).unwrap()).unwrap_err();
        assert!(matches!(err(&[], &[]), Error::EmptyTree));
        assert!(matches!(err(&["a"], &[("a", "a")]), Error::Loop(_)));
        assert!(matches!(
            err(&["a", "b"], &[("a", "b"), ("a", "b")]),
            Error::ParallelEdge(..)
        ));
        assert!(matches!(
            err(&["a", "b", "c"], &[("a", "b"), ("a", "c")]),
            Error::OutDegree { degree: 2, .. }
        ));
        assert!(matches!(err(&["a", "b"], &[]), Error::SinkCount(s) if s.len() == 2));
    }

    #[test]
    fn order_and_join() {
        let path = t(&["a", "b"], &[("a", "b")]);
        assert!(path.leq("a", "b").unwrap());
        assert!(!path.leq("b", "a").unwrap());
        let v = t(&["a", "b", "c"], &[("a", "b"), ("c", "b")]);
        assert!(!v.leq("a", "c").unwrap());
        assert_eq!(v.join("a", "c").unwrap(), "b");
        assert_eq!(path.join("a", "b").unwrap(), "b");
        assert_eq!(v.join("a", "a").unwrap(), "a");
        assert!(matches!(v.leq("a", "zz"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn downsets() {
        let v = t(&["a", "b", "c"], &[("a", "b"), ("c", "b")]);
        assert_eq!(v.downset("b").unwrap(), v);
        let leaf = v.downset("a").unwrap();
        assert_eq!(leaf.len(), 1);
        assert_eq!(leaf.root_name(), "a");
        let chain = t(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let mid = chain.downset("b").unwrap();
        assert_eq!(mid, t(&["a", "b"], &[("a", "b")]));
        assert!(mid.is_downset_of(&chain));
        assert!(!t(&["c", "b"], &[("c", "b")]).is_downset_of(&chain));
    }

    #[test]
    fn ancestors() {
        let chain = t(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(chain.ancestor_at_level("a", 0).unwrap(), "c");
        assert_eq!(chain.ancestor_at_level("a", 1).unwrap(), "b");
        assert_eq!(chain.ancestor_at_level("a", 2).unwrap(), "a");
        assert!(matches!(
            chain.ancestor_at_level("b", 2),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    fn poset(es: &[&str], rel: &[(&str, &str)]) -> Result<Poset> {
        Poset::new(
            es.iter().map(|s| s.to_string()).collect(),
            &rel.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn hasse_quivers() {
        let chain = poset(&["1", "2", "3"], &[("1", "2"), ("2", "3"), ("1", "3")]).unwrap();
        let hq = chain.hasse_quiver();
        assert_eq!(
            hq.edges(),
            &[("1".to_string(), "2".to_string()), ("2".to_string(), "3".to_string())]
        );
        assert!(poset(&["1", "2"], &[]).unwrap().hasse_quiver().edges().is_empty());
        let v = poset(&["1", "2", "3"], &[("1", "3"), ("2", "3")]).unwrap();
        let tree = RootedTree::from_quiver(&v.hasse_quiver()).unwrap();
        assert_eq!(tree.root_name(), "3");
        assert!(matches!(
            poset(&["1", "2", "3"], &[("1", "2"), ("2", "3")]),
            Err(Error::NotPartialOrder(_))
        ));
        assert!(matches!(
            poset(&["1", "2"], &[("1", "2"), ("2", "1")]),
            Err(Error::NotPartialOrder(_))
        ));
    }
}
