//! Elder-rule decomposition of linearized trees over `Q`.
//!
//! [`decompose_tree`] sweeps the tree from its deepest level up to the root.
//! At each vertex, among the children over the same base vertex it keeps one
//! representative of every maximal class of the comparison relation `R` and
//! cuts the edges of all other children. `R` relates two same-level,
//! same-label vertices `x`, `y` exactly when the kept subtree at `x` is below
//! the kept subtree at `y`, and is recomputed one level at a time from the
//! level beneath it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::tree_leq;
use crate::quiver::RootedTree;
use crate::tree::{CanonicalKey, ForestOverQ, TreeOverQ};

/// One isomorphism type of summand and how often it occurs.
#[derive(Clone, Debug)]
pub struct Summand {
    pub apex: String,
    pub key: CanonicalKey,
    pub witness: TreeOverQ,
    pub multiplicity: usize,
}

/// A Krull–Schmidt decomposition into reduced trees over downsets.
#[derive(Clone, Debug)]
pub struct Decomposition {
    ambient: Arc<RootedTree>,
    summands: Vec<Summand>,
    dims: Vec<usize>,
}

/// Multiset of summand types keyed by `(apex, key)`.
pub type SummandMultiset = BTreeMap<(String, CanonicalKey), usize>;

#[derive(Serialize)]
struct SummandRecord<'a> {
    apex: &'a str,
    key: &'a str,
    multiplicity: usize,
}

impl Decomposition {
    pub fn empty(ambient: Arc<RootedTree>) -> Self {
        let dims = vec![0; ambient.len()];
        Self {
            ambient,
            summands: Vec::new(),
            dims,
        }
    }

    /// Aggregates components by `(apex, canonical key)`. The source dimension
    /// vector is the sum of the components' fiber sizes.
    pub fn from_components(ambient: Arc<RootedTree>, components: impl IntoIterator<Item = TreeOverQ>) -> Self {
        let mut out = Self::empty(ambient);
        for c in components {
            out.add_component(c, 1);
        }
        out
    }

    fn add_component(&mut self, component: TreeOverQ, multiplicity: usize) {
        for v in 0..component.len() {
            let x = self
                .ambient
                .get_index(component.label_name(v))
                .expect("component lives over a downset of the ambient");
            self.dims[x] += multiplicity;
        }
        let apex = component.apex().to_string();
        let key = component.canonical_key();
        match self
            .summands
            .binary_search_by(|s| (s.apex.as_str(), &s.key).cmp(&(apex.as_str(), &key)))
        {
            Ok(i) => self.summands[i].multiplicity += multiplicity,
            Err(i) => self.summands.insert(
                i,
                Summand {
                    apex,
                    key,
                    witness: component,
                    multiplicity,
                },
            ),
        }
    }

    /// Multiset union.
    pub fn absorb(&mut self, other: Decomposition) -> Result<()> {
        for x in 0..other.ambient.len() {
            if other.dims[x] > 0 && self.ambient.get_index(other.ambient.name(x)).is_none() {
                return Err(Error::AmbientMismatch);
            }
        }
        for s in other.summands {
            self.add_component(s.witness, s.multiplicity);
        }
        Ok(())
    }

    pub fn ambient(&self) -> &Arc<RootedTree> {
        &self.ambient
    }

    /// Summands sorted by `(apex, key)`.
    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn total_summands(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    /// Source dimension vector, by ambient index.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_map(&self) -> BTreeMap<String, usize> {
        (0..self.ambient.len())
            .map(|x| (self.ambient.name(x).to_string(), self.dims[x]))
            .collect()
    }

    pub fn multiset(&self) -> SummandMultiset {
        self.summands
            .iter()
            .map(|s| ((s.apex.clone(), s.key.clone()), s.multiplicity))
            .collect()
    }

    /// Checks that every witness is reduced and that the summands' dimension
    /// vectors add up to the source dimension vector.
    pub fn check(&self) -> Result<()> {
        let mut total = vec![0usize; self.ambient.len()];
        for s in &self.summands {
            if !crate::order::is_reduced(&s.witness) {
                return Err(Error::Internal(format!("summand {} is not reduced", s.key)));
            }
            for (x, n) in s.witness.fiber_sizes().into_iter().enumerate() {
                let name = s.witness.base().name(x);
                total[self.ambient.index_of(name)?] += n * s.multiplicity;
            }
        }
        if total != self.dims {
            return Err(Error::Internal(format!(
                "dimension vectors do not add up: {:?} vs {:?}",
                total, self.dims
            )));
        }
        Ok(())
    }

    /// JSON payload `{"summands":[...],"dims":{...}}` without witness trees.
    pub fn summary_json(&self) -> serde_json::Value {
        let summands: Vec<_> = self
            .summands
            .iter()
            .map(|s| SummandRecord {
                apex: &s.apex,
                key: s.key.as_str(),
                multiplicity: s.multiplicity,
            })
            .collect();
        serde_json::json!({ "summands": summands, "dims": self.dim_map() })
    }
}

/// Output of [`decompose_tree`]: the kept subforest of the input and its summands.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    /// Input vertices whose edge to their parent was deleted.
    pub cut: BTreeSet<usize>,
    pub forest: ForestOverQ,
    pub decomposition: Decomposition,
}

/// Comparison relation restricted to one level, stored per label class.
#[derive(Default)]
struct LevelRelation {
    // vertex -> (class id, position in class)
    slot: HashMap<usize, (usize, usize)>,
    classes: Vec<ClassRelation>,
}

struct ClassRelation {
    size: usize,
    related: Vec<bool>,
}

impl LevelRelation {
    fn related(&self, x: usize, y: usize) -> bool {
        match (self.slot.get(&x), self.slot.get(&y)) {
            (Some(&(cx, px)), Some(&(cy, py))) if cx == cy => {
                let class = &self.classes[cx];
                class.related[px * class.size + py]
            }
            _ => false,
        }
    }
}

/// Cuts the edge from `drop_child` to `parent`, given a same-labeled sibling
/// `keep_child` whose subtree dominates it. Returns the part containing the
/// root and the detached subtree over the downset at its label.
pub fn elder_split(t: &TreeOverQ, parent: &str, drop_child: &str, keep_child: &str) -> Result<(TreeOverQ, TreeOverQ)> {
    let tree = t.tree();
    let p = tree.index_of(parent)?;
    let d = tree.index_of(drop_child)?;
    let k = tree.index_of(keep_child)?;
    if d == k {
        return Err(Error::ElderPrecondition("the two children coincide".into()));
    }
    if tree.parent(d) != Some(p) || tree.parent(k) != Some(p) {
        return Err(Error::ElderPrecondition(format!(
            "{drop_child} and {keep_child} must both be children of {parent}"
        )));
    }
    if t.label(d) != t.label(k) {
        return Err(Error::ElderPrecondition(format!(
            "{drop_child} and {keep_child} lie over different vertices"
        )));
    }
    let base = Arc::new(t.base().downset_idx(t.label(d)));
    let dropped = t.subtree_over(d, base.clone());
    let kept = t.subtree_over(k, base);
    if !tree_leq(&dropped, &kept)? {
        return Err(Error::ElderPrecondition(format!(
            "the subtree at {drop_child} is not below the subtree at {keep_child}"
        )));
    }
    let detached: BTreeSet<usize> = tree.subtree(d).into_iter().collect();
    let members: Vec<usize> = (0..tree.len()).filter(|v| !detached.contains(v)).collect();
    let remaining = t.restrict(&members, |v| tree.parent(v), t.base().clone())?;
    Ok((remaining, dropped))
}

/// Splits `t` into a subforest whose components are reduced trees over the
/// downsets at their apexes, with the same linearization up to isomorphism.
/// Runs in time quadratic in the size of `t`.
pub fn decompose_tree(t: &TreeOverQ) -> TreeDecomposition {
    let tree = t.tree();
    let levels = tree.levels();
    let mut kept: Vec<Vec<usize>> = (0..tree.len()).map(|v| tree.children(v).to_vec()).collect();
    let mut cut = BTreeSet::new();
    let mut below = LevelRelation::default();

    for level in levels.iter().rev() {
        for &x in level {
            let children = &kept[x];
            if children.len() < 2 {
                continue;
            }
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &c in children {
                groups.entry(t.label(c)).or_default().push(c);
            }
            let mut keep = Vec::with_capacity(children.len());
            for group in groups.into_values() {
                for &c in &group {
                    let dominated = group.iter().any(|&d| below.related(c, d) && !below.related(d, c));
                    // one representative per equivalence class of maximal
                    // elements: the smallest identifier wins
                    let shadowed = group
                        .iter()
                        .any(|&d| d != c && below.related(c, d) && below.related(d, c) && tree.name(d) < tree.name(c));
                    if dominated || shadowed {
                        cut.insert(c);
                    } else {
                        keep.push(c);
                    }
                }
            }
            keep.sort_by(|&a, &b| tree.name(a).cmp(tree.name(b)));
            kept[x] = keep;
        }

        let mut current = LevelRelation::default();
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &x in level {
            by_label.entry(t.label(x)).or_default().push(x);
        }
        for members in by_label.into_values() {
            let id = current.classes.len();
            let size = members.len();
            let mut related = vec![false; size * size];
            for (i, &x) in members.iter().enumerate() {
                current.slot.insert(x, (id, i));
                for (j, &y) in members.iter().enumerate() {
                    related[i * size + j] =
                        i == j || kept[x].iter().all(|&p| kept[y].iter().any(|&q| below.related(p, q)));
                }
            }
            current.classes.push(ClassRelation { size, related });
        }
        below = current;
    }

    let mut bases: HashMap<usize, Arc<RootedTree>> = HashMap::new();
    bases.insert(t.base().root(), t.base().clone());
    let mut components = Vec::with_capacity(cut.len() + 1);
    for top in std::iter::once(tree.root()).chain(cut.iter().copied()) {
        let base = bases
            .entry(t.label(top))
            .or_insert_with(|| Arc::new(t.base().downset_idx(t.label(top))))
            .clone();
        let mut members = Vec::new();
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            members.push(v);
            stack.extend(kept[v].iter().copied());
        }
        let component = t
            .restrict(&members, |v| if v == top { None } else { tree.parent(v) }, base)
            .expect("components of the kept subforest are trees over downsets");
        components.push(component);
    }
    let decomposition = Decomposition::from_components(t.base().clone(), components.iter().cloned());
    let forest = ForestOverQ::new(t.base().clone(), components).expect("components live over downsets");
    TreeDecomposition {
        cut,
        forest,
        decomposition,
    }
}

/// Decomposes every component of a forest over its own downset and collects
/// the summands over the forest's ambient quiver.
pub fn decompose_forest(f: &ForestOverQ) -> Decomposition {
    let mut out = Decomposition::empty(f.ambient().clone());
    for component in f.components() {
        let part = decompose_tree(component).decomposition;
        for s in part.summands {
            out.add_component(s.witness, s.multiplicity);
        }
    }
    out
}
