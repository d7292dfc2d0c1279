//! Rooted trees over a rooted tree quiver, forests of them, and canonical keys.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::RootedTree;

/// A rooted tree `T` with a root-preserving, edge-compatible labeling into a base `Q`.
#[derive(Clone, Debug)]
pub struct TreeOverQ {
    base: Arc<RootedTree>,
    tree: RootedTree,
    labeling: Vec<usize>,
}

/// Canonical form of a tree over `Q`: `"(" label children... ")"` with the
/// children's keys sorted as strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn push_escaped(out: &mut String, label: &str) {
    for ch in label.chars() {
        if matches!(ch, '(' | ')' | '\\') {
            out.push('\\');
        }
        out.push(ch);
    }
}

/// Checks that two bases are the same quiver with the same vertex indexing;
/// equal quivers listed in another order must be [`TreeOverQ::rebase`]d first.
pub(crate) fn same_ambient(a: &Arc<RootedTree>, b: &Arc<RootedTree>) -> Result<()> {
    if Arc::ptr_eq(a, b) || (a.names() == b.names() && **a == **b) {
        Ok(())
    } else {
        Err(Error::AmbientMismatch)
    }
}

impl TreeOverQ {
    /// Validates a labeling given by vertex names.
    pub fn new(base: Arc<RootedTree>, tree: RootedTree, labeling: &HashMap<String, String>) -> Result<Self> {
        let labels = tree
            .names()
            .iter()
            .map(|v| {
                let image = labeling.get(v).ok_or_else(|| Error::MissingLabel(v.clone()))?;
                base.index_of(image)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(base, tree, labels)
    }

    /// Validates a labeling given by base indices.
    pub fn from_parts(base: Arc<RootedTree>, tree: RootedTree, labeling: Vec<usize>) -> Result<Self> {
        assert_eq!(tree.len(), labeling.len());
        let root = tree.root();
        if labeling[root] != base.root() {
            return Err(Error::NotRootPreserving {
                tree_root: tree.name(root).to_string(),
                image: base.name(labeling[root]).to_string(),
                base_root: base.root_name().to_string(),
            });
        }
        for v in 0..tree.len() {
            if let Some(p) = tree.parent(v) {
                if base.parent(labeling[v]) != Some(labeling[p]) {
                    return Err(Error::EdgeNotInBase {
                        child: tree.name(v).to_string(),
                        parent: tree.name(p).to_string(),
                        image_child: base.name(labeling[v]).to_string(),
                        image_parent: base.name(labeling[p]).to_string(),
                    });
                }
            }
        }
        for v in 0..tree.len() {
            if tree.level(v) != base.level(labeling[v]) {
                return Err(Error::Internal(format!(
                    "labeling is not level-preserving at {}",
                    tree.name(v)
                )));
            }
        }
        Ok(Self { base, tree, labeling })
    }

    /// The same tree over an equal base, matching labels by name.
    pub fn rebase(&self, base: Arc<RootedTree>) -> Result<TreeOverQ> {
        if *base != *self.base {
            return Err(Error::AmbientMismatch);
        }
        let labeling = self
            .labeling
            .iter()
            .map(|&x| base.index_of(self.base.name(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            base,
            tree: self.tree.clone(),
            labeling,
        })
    }

    /// The one-vertex tree over `base`.
    pub fn star(base: Arc<RootedTree>) -> Self {
        let root = base.root();
        Self {
            tree: RootedTree::point("n0").unwrap(),
            base,
            labeling: vec![root],
        }
    }

    pub fn base(&self) -> &Arc<RootedTree> {
        &self.base
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_star(&self) -> bool {
        self.tree.len() == 1
    }

    pub fn label(&self, v: usize) -> usize {
        self.labeling[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labeling
    }

    pub fn label_name(&self, v: usize) -> &str {
        self.base.name(self.labeling[v])
    }

    /// The labeling as a name map.
    pub fn labeling_map(&self) -> HashMap<String, String> {
        (0..self.len())
            .map(|v| (self.tree.name(v).to_string(), self.label_name(v).to_string()))
            .collect()
    }

    /// The apex: the base vertex the root maps to.
    pub fn apex(&self) -> &str {
        self.base.root_name()
    }

    /// Number of tree vertices over each base vertex, by base index.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.base.len()];
        for &l in &self.labeling {
            out[l] += 1;
        }
        out
    }

    /// Builds the tree over `base` spanned by `members` (any order; the first
    /// member with no parent among them becomes the root). Vertices keep their
    /// names, labels are transported to `base` by name.
    pub(crate) fn restrict(
        &self,
        members: &[usize],
        parent_of: impl Fn(usize) -> Option<usize>,
        base: Arc<RootedTree>,
    ) -> Result<TreeOverQ> {
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names = members.iter().map(|&v| self.tree.name(v).to_string()).collect();
        let parent = members
            .iter()
            .map(|&v| parent_of(v).and_then(|p| local.get(&p).copied()))
            .collect();
        let tree = RootedTree::from_parents(names, parent)?;
        let labels = members
            .iter()
            .map(|&v| base.index_of(self.label_name(v)))
            .collect::<Result<Vec<_>>>()?;
        TreeOverQ::from_parts(base, tree, labels)
    }

    /// The subtree hanging from `v`, as a tree over the downset at its label.
    pub fn subtree_over_downset(&self, v: usize) -> TreeOverQ {
        let base = Arc::new(self.base.downset_idx(self.labeling[v]));
        self.subtree_over(v, base)
    }

    pub(crate) fn subtree_over(&self, v: usize, base: Arc<RootedTree>) -> TreeOverQ {
        let members = self.tree.subtree(v);
        self.restrict(&members, |x| if x == v { None } else { self.tree.parent(x) }, base)
            .expect("a subtree of a tree over Q is a tree over the downset at its label")
    }

    /// Splits the tree at its root: for each child of the base root (in order),
    /// the trees hanging from root children mapped there.
    pub fn root_components(&self) -> Vec<Vec<TreeOverQ>> {
        let base_root = self.base.root();
        let q_children = self.base.children(base_root);
        let mut out: Vec<Vec<TreeOverQ>> = vec![Vec::new(); q_children.len()];
        let downsets: Vec<Arc<RootedTree>> = q_children.iter().map(|&c| Arc::new(self.base.downset_idx(c))).collect();
        for &c in self.tree.children(self.tree.root()) {
            let slot = q_children.iter().position(|&qc| qc == self.labeling[c]).unwrap();
            out[slot].push(self.subtree_over(c, downsets[slot].clone()));
        }
        out
    }

    /// Glues trees under a fresh root: `lists[i]` holds trees over the downset
    /// at the `i`-th child of the base root (children in identifier order).
    /// Vertices are renamed `n0, n1, ...` in preorder.
    pub fn glue(base: Arc<RootedTree>, lists: &[Vec<TreeOverQ>]) -> Result<TreeOverQ> {
        let q_children = base.children(base.root());
        if lists.len() != q_children.len() {
            return Err(Error::Gluing(format!(
                "base root has {} children but {} lists were given",
                q_children.len(),
                lists.len()
            )));
        }
        let mut parent = vec![None];
        let mut labels = vec![base.root()];
        for (&qc, list) in q_children.iter().zip(lists) {
            let expected = base.downset_idx(qc);
            for t in list {
                if *t.base != expected {
                    return Err(Error::Gluing(format!(
                        "a tree assigned to {} is not over the downset at {}",
                        base.name(qc),
                        base.name(qc)
                    )));
                }
                let offset = parent.len();
                // preorder of t; map t-index -> new index
                let order = t.tree.subtree(t.tree.root());
                let mut new_index = vec![0; t.len()];
                for (i, &v) in order.iter().enumerate() {
                    new_index[v] = offset + i;
                }
                for &v in &order {
                    parent.push(Some(t.tree.parent(v).map_or(0, |p| new_index[p])));
                    labels.push(base.index_of(t.label_name(v))?);
                }
            }
        }
        let names = (0..parent.len()).map(|i| format!("n{i}")).collect();
        let tree = RootedTree::from_parents(names, parent)?;
        TreeOverQ::from_parts(base, tree, labels)
    }

    /// Canonical key of the subtree at every vertex is never materialized at
    /// once: child keys are consumed by their parent, so a deep path costs
    /// quadratic time but linear memory.
    pub fn canonical_key(&self) -> CanonicalKey {
        let tree = &self.tree;
        let mut keys: Vec<Option<String>> = vec![None; tree.len()];
        for level in tree.levels().into_iter().rev() {
            for v in level {
                let mut child_keys: Vec<String> = tree
                    .children(v)
                    .iter()
                    .map(|&c| keys[c].take().expect("children are keyed before parents"))
                    .collect();
                child_keys.sort_unstable();
                let mut key = String::with_capacity(
                    2 + self.label_name(v).len() + child_keys.iter().map(String::len).sum::<usize>(),
                );
                key.push('(');
                push_escaped(&mut key, self.label_name(v));
                for k in child_keys {
                    key.push_str(&k);
                }
                key.push(')');
                keys[v] = Some(key);
            }
        }
        CanonicalKey(keys[tree.root()].take().unwrap())
    }

    /// Whether `self` and `other` are isomorphic as trees over their common base.
    pub fn iso_over_q(&self, other: &TreeOverQ) -> Result<bool> {
        same_ambient(&self.base, &other.base)?;
        Ok(self.len() == other.len() && self.canonical_key() == other.canonical_key())
    }
}

/// A disjoint union of trees over downsets of one ambient rooted tree quiver.
#[derive(Clone, Debug)]
pub struct ForestOverQ {
    ambient: Arc<RootedTree>,
    components: Vec<TreeOverQ>,
}

impl ForestOverQ {
    pub fn new(ambient: Arc<RootedTree>, components: Vec<TreeOverQ>) -> Result<Self> {
        for c in &components {
            if !c.base.is_downset_of(&ambient) {
                return Err(Error::NotADownset(c.apex().to_string()));
            }
        }
        Ok(Self { ambient, components })
    }

    pub fn empty(ambient: Arc<RootedTree>) -> Self {
        Self {
            ambient,
            components: Vec::new(),
        }
    }

    pub fn ambient(&self) -> &Arc<RootedTree> {
        &self.ambient
    }

    pub fn components(&self) -> &[TreeOverQ] {
        &self.components
    }

    pub fn into_components(self) -> Vec<TreeOverQ> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Total vertex count over each ambient vertex.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.ambient.len()];
        for c in &self.components {
            for v in 0..c.len() {
                out[self.ambient.get_index(c.label_name(v)).unwrap()] += 1;
            }
        }
        out
    }

    /// Multiset of `(apex, key)` pairs, sorted.
    pub fn keys(&self) -> Vec<(String, CanonicalKey)> {
        let mut out: Vec<_> = self
            .components
            .iter()
            .map(|c| (c.apex().to_string(), c.canonical_key()))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn rt(vs: &[&str], es: &[(&str, &str)]) -> RootedTree {
        let q = Quiver::new(
            vs.iter().map(|s| s.to_string()).collect(),
            es.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        )
        .unwrap();
        RootedTree::from_quiver(&q).unwrap()
    }

    fn labels(pairs: &[(&str, &str)]) -> HashMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn a2() -> Arc<RootedTree> {
        Arc::new(rt(&["a", "b"], &[("a", "b")]))
    }

    #[test]
    fn build_tree_over_cases() {
        let q = a2();
        let t1 = TreeOverQ::new(
            q.clone(),
            rt(&["u", "v"], &[("u", "v")]),
            &labels(&[("u", "a"), ("v", "b")]),
        );
        assert!(t1.is_ok());
        let star = TreeOverQ::new(q.clone(), rt(&["w"], &[]), &labels(&[("w", "b")])).unwrap();
        assert!(star.is_star());
        let bad = TreeOverQ::new(
            q.clone(),
            rt(&["u", "v"], &[("u", "v")]),
            &labels(&[("u", "b"), ("v", "a")]),
        );
        assert!(matches!(bad, Err(Error::NotRootPreserving { .. })));
        let missing = TreeOverQ::new(q, rt(&["u", "v"], &[("u", "v")]), &labels(&[("v", "b")]));
        assert!(matches!(missing, Err(Error::MissingLabel(_))));
    }

    #[test]
    fn edge_incompatible_labeling() {
        let q = Arc::new(rt(&["a", "b", "c"], &[("a", "b"), ("b", "c")]));
        let t = TreeOverQ::new(q, rt(&["u", "v"], &[("u", "v")]), &labels(&[("u", "a"), ("v", "c")]));
        assert!(matches!(t, Err(Error::EdgeNotInBase { .. })));
    }

    #[test]
    fn gluing() {
        let q = a2();
        let down_a = Arc::new(q.downset("a").unwrap());
        let star_a = TreeOverQ::star(down_a.clone());
        let t1 = TreeOverQ::glue(q.clone(), &[vec![star_a.clone()]]).unwrap();
        assert_eq!(t1.len(), 2);
        assert_eq!(t1.canonical_key().as_str(), "(b(a))");
        let t2 = TreeOverQ::glue(q.clone(), &[vec![star_a.clone(), star_a.clone()]]).unwrap();
        assert_eq!(t2.canonical_key().as_str(), "(b(a)(a))");
        let star = TreeOverQ::glue(q.clone(), &[vec![]]).unwrap();
        assert!(star.is_star());
        assert!(star.iso_over_q(&TreeOverQ::star(q.clone())).unwrap());
        // wrong base
        let wrong = TreeOverQ::glue(q.clone(), &[vec![TreeOverQ::star(q.clone())]]);
        assert!(matches!(wrong, Err(Error::Gluing(_))));
        assert!(matches!(TreeOverQ::glue(q, &[]), Err(Error::Gluing(_))));
    }

    #[test]
    fn keys_ignore_child_order_and_names() {
        let q = a2();
        let t2 = TreeOverQ::new(
            q.clone(),
            rt(&["r", "x", "y"], &[("x", "r"), ("y", "r")]),
            &labels(&[("r", "b"), ("x", "a"), ("y", "a")]),
        )
        .unwrap();
        let t2b = TreeOverQ::new(
            q.clone(),
            rt(&["y", "x", "r"], &[("y", "r"), ("x", "r")]),
            &labels(&[("r", "b"), ("x", "a"), ("y", "a")]),
        )
        .unwrap();
        assert!(t2.iso_over_q(&t2b).unwrap());
        assert!(!TreeOverQ::star(q.clone()).iso_over_q(&t2).unwrap());
        assert!(t2.iso_over_q(&t2).unwrap());
        let other = Arc::new(rt(&["a", "c"], &[("a", "c")]));
        assert!(matches!(
            TreeOverQ::star(other).iso_over_q(&t2),
            Err(Error::AmbientMismatch)
        ));
    }

    #[test]
    fn keys_escape_parentheses() {
        let q = Arc::new(rt(&["a)(a", "b"], &[("a)(a", "b")]));
        let t = TreeOverQ::glue(
            q.clone(),
            &[vec![TreeOverQ::star(Arc::new(q.downset("a)(a").unwrap()))]],
        )
        .unwrap();
        assert_eq!(t.canonical_key().as_str(), "(b(a\\)\\(a))");
    }

    #[test]
    fn root_components_invert_gluing() {
        let q = Arc::new(rt(&["a", "c", "r"], &[("a", "r"), ("c", "r")]));
        let sa = TreeOverQ::star(Arc::new(q.downset("a").unwrap()));
        let sc = TreeOverQ::star(Arc::new(q.downset("c").unwrap()));
        let t = TreeOverQ::glue(q.clone(), &[vec![sa.clone(), sa], vec![sc]]).unwrap();
        let comps = t.root_components();
        assert_eq!(comps[0].len(), 2);
        assert_eq!(comps[1].len(), 1);
        assert_eq!(comps[1][0].apex(), "c");
    }

    #[test]
    fn forest_rejects_foreign_base() {
        let q = a2();
        let foreign = Arc::new(rt(&["z"], &[]));
        assert!(ForestOverQ::new(q.clone(), vec![TreeOverQ::star(foreign)]).is_err());
        let f = ForestOverQ::new(
            q.clone(),
            vec![
                TreeOverQ::star(q.clone()),
                TreeOverQ::star(Arc::new(q.downset("a").unwrap())),
            ],
        )
        .unwrap();
        assert_eq!(f.fiber_sizes(), vec![1, 1]);
    }

    #[test]
    fn reordered_bases_need_rebasing() {
        let q = a2();
        let flipped = Arc::new(rt(&["b", "a"], &[("a", "b")]));
        let t1 = TreeOverQ::new(
            q.clone(),
            rt(&["u", "v"], &[("u", "v")]),
            &labels(&[("u", "a"), ("v", "b")]),
        )
        .unwrap();
        let t1_flipped = TreeOverQ::new(
            flipped,
            rt(&["u", "v"], &[("u", "v")]),
            &labels(&[("u", "a"), ("v", "b")]),
        )
        .unwrap();
        assert!(matches!(
            same_ambient(t1.base(), t1_flipped.base()),
            Err(Error::AmbientMismatch)
        ));
        let back = t1_flipped.rebase(q.clone()).unwrap();
        assert_eq!(back.canonical_key(), t1.canonical_key());
        assert_eq!(back.labels(), t1.labels());
        assert!(t1.rebase(Arc::new(rt(&["z"], &[]))).is_err());
    }
}
