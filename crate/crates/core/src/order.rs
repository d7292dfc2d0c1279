//! The preorder on trees over `Q`, morphism counts, reducedness and the finite
//! catalog of reduced trees.
//!
//! Comparisons run bottom-up over pairs `(u, v)` of same-level vertices with
//! equal labels. A pair is only ever combined with pairs one level deeper, so
//! tables are kept for two levels at a time.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::quiver::RootedTree;
use crate::tree::{same_ambient, CanonicalKey, TreeOverQ};

/// Exact number of morphisms between two trees over `Q`.
pub type HomCount = BigUint;

/// Evaluates `step(u, v, previous_level_table)` for every same-label pair,
/// deepest level first, and returns the value at the two roots.
fn pair_recursion<V>(
    s: &TreeOverQ,
    t: &TreeOverQ,
    mut step: impl FnMut(usize, usize, &HashMap<(usize, usize), V>) -> V,
) -> V {
    let s_levels = s.tree().levels();
    let t_levels = t.tree().levels();
    let mut previous: HashMap<(usize, usize), V> = HashMap::new();
    for level in (0..s_levels.len()).rev() {
        let mut by_label: HashMap<usize, Vec<usize>> = HashMap::new();
        if let Some(vs) = t_levels.get(level) {
            for &v in vs {
                by_label.entry(t.label(v)).or_default().push(v);
            }
        }
        let mut current = HashMap::new();
        for &u in &s_levels[level] {
            if let Some(vs) = by_label.get(&s.label(u)) {
                for &v in vs {
                    let value = step(u, v, &previous);
                    current.insert((u, v), value);
                }
            }
        }
        previous = current;
    }
    previous
        .remove(&(s.tree().root(), t.tree().root()))
        .expect("roots share the base root label")
}

/// `s ⪯ t`: every child subtree of `s` is below some same-labeled child subtree of `t`.
pub fn tree_leq(s: &TreeOverQ, t: &TreeOverQ) -> Result<bool> {
    same_ambient(s.base(), t.base())?;
    Ok(leq_unchecked(s, t))
}

fn leq_unchecked(s: &TreeOverQ, t: &TreeOverQ) -> bool {
    let (st, tt) = (s.tree(), t.tree());
    pair_recursion(s, t, |u, v, below| {
        st.children(u).iter().all(|&c| {
            tt.children(v)
                .iter()
                .any(|&d| s.label(c) == t.label(d) && below[&(c, d)])
        })
    })
}

/// Number of root-preserving, label-preserving quiver maps `s -> t`.
pub fn hom_count(s: &TreeOverQ, t: &TreeOverQ) -> Result<HomCount> {
    same_ambient(s.base(), t.base())?;
    let (st, tt) = (s.tree(), t.tree());
    Ok(pair_recursion(
        s,
        t,
        |u, v, below: &HashMap<(usize, usize), BigUint>| {
            let mut product = BigUint::one();
            for &c in st.children(u) {
                let mut sum = BigUint::zero();
                for &d in tt.children(v) {
                    if s.label(c) == t.label(d) {
                        sum += &below[&(c, d)];
                    }
                }
                if sum.is_zero() {
                    return sum;
                }
                product *= sum;
            }
            product
        },
    ))
}

pub fn exists_morphism(s: &TreeOverQ, t: &TreeOverQ) -> Result<bool> {
    Ok(!hom_count(s, t)?.is_zero())
}

/// Self-comparison table of `t` over all same-level same-label pairs.
fn self_comparisons(t: &TreeOverQ) -> HashMap<(usize, usize), bool> {
    let tree = t.tree();
    let mut table: HashMap<(usize, usize), bool> = HashMap::new();
    for level in tree.levels().into_iter().rev() {
        for &u in &level {
            for &v in &level {
                if t.label(u) != t.label(v) {
                    continue;
                }
                let value = tree.children(u).iter().all(|&c| {
                    tree.children(v)
                        .iter()
                        .any(|&d| t.label(c) == t.label(d) && table[&(c, d)])
                });
                table.insert((u, v), value);
            }
        }
    }
    table
}

/// Reducedness by the recursive definition: at every vertex, distinct children
/// over the same base vertex are pairwise incomparable.
pub fn is_reduced(t: &TreeOverQ) -> bool {
    let tree = t.tree();
    let table = self_comparisons(t);
    (0..tree.len()).all(|x| {
        let children = tree.children(x);
        children.iter().enumerate().all(|(i, &a)| {
            children[i + 1..]
                .iter()
                .all(|&b| t.label(a) != t.label(b) || (!table[&(a, b)] && !table[&(b, a)]))
        })
    })
}

/// Reducedness as "the identity is the only endomorphism".
pub fn is_reduced_by_endomorphisms(t: &TreeOverQ) -> bool {
    hom_count(t, t).expect("same base").is_one()
}

/// One representative per isomorphism class of reduced trees over a fixed `Q`.
#[derive(Clone, Debug)]
pub struct ReducedCatalog {
    ambient: Arc<RootedTree>,
    entries: Vec<TreeOverQ>,
    index: HashMap<CanonicalKey, usize>,
}

impl ReducedCatalog {
    fn from_entries(ambient: Arc<RootedTree>, mut entries: Vec<TreeOverQ>) -> Self {
        let mut keyed: Vec<(CanonicalKey, TreeOverQ)> = entries.drain(..).map(|e| (e.canonical_key(), e)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let index = keyed.iter().enumerate().map(|(i, (k, _))| (k.clone(), i)).collect();
        Self {
            ambient,
            entries: keyed.into_iter().map(|(_, e)| e).collect(),
            index,
        }
    }

    pub fn ambient(&self) -> &Arc<RootedTree> {
        &self.ambient
    }

    pub fn entries(&self) -> &[TreeOverQ] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&TreeOverQ> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, t: &TreeOverQ) -> bool {
        self.index.contains_key(&t.canonical_key())
    }
}

/// All sets of pairwise incomparable entries, as index lists.
fn antichains(entries: &[TreeOverQ]) -> Vec<Vec<usize>> {
    let n = entries.len();
    let mut comparable = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            comparable[i][j] = i == j || leq_unchecked(&entries[i], &entries[j]);
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(next: usize, n: usize, comparable: &[Vec<bool>], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if next == n {
            out.push(current.clone());
            return;
        }
        extend(next + 1, n, comparable, current, out);
        if current.iter().all(|&c| !comparable[c][next] && !comparable[next][c]) {
            current.push(next);
            extend(next + 1, n, comparable, current, out);
            current.pop();
        }
    }
    extend(0, n, &comparable, &mut current, &mut out);
    out
}

/// Reduced catalogs over the downset at every vertex of `q`, by vertex index.
/// The number of reduced trees grows exponentially with the branching of `q`.
pub fn catalogs_by_vertex(q: &Arc<RootedTree>) -> Vec<ReducedCatalog> {
    let mut done: Vec<Option<ReducedCatalog>> = vec![None; q.len()];
    for level in q.levels().into_iter().rev() {
        for x in level {
            let base = if x == q.root() {
                q.clone()
            } else {
                Arc::new(q.downset_idx(x))
            };
            let child_choices: Vec<(Vec<TreeOverQ>, Vec<Vec<usize>>)> = q
                .children(x)
                .iter()
                .map(|&c| {
                    let entries = done[c].as_ref().unwrap().entries.clone();
                    let chains = antichains(&entries);
                    (entries, chains)
                })
                .collect();
            let mut trees = Vec::new();
            let mut pick = vec![0usize; child_choices.len()];
            'product: loop {
                let lists: Vec<Vec<TreeOverQ>> = child_choices
                    .iter()
                    .zip(&pick)
                    .map(|((entries, chains), &k)| chains[k].iter().map(|&i| entries[i].clone()).collect())
                    .collect();
                trees.push(TreeOverQ::glue(base.clone(), &lists).expect("catalog gluing"));
                for slot in (0..pick.len()).rev() {
                    pick[slot] += 1;
                    if pick[slot] < child_choices[slot].1.len() {
                        continue 'product;
                    }
                    pick[slot] = 0;
                }
                break;
            }
            done[x] = Some(ReducedCatalog::from_entries(base, trees));
        }
    }
    done.into_iter().map(Option::unwrap).collect()
}

/// Every reduced tree over `q`, one per isomorphism class.
pub fn enumerate_reduced(q: &Arc<RootedTree>) -> ReducedCatalog {
    catalogs_by_vertex(q).swap_remove(q.root())
}

/// An indecomposable summand type: a reduced tree over the downset at `apex`.
#[derive(Clone, Debug)]
pub struct Indecomposable {
    pub apex: String,
    pub tree: TreeOverQ,
}

/// The reduced trees over every downset of `q`, tagged by apex.
pub fn enumerate_indecomposables(q: &Arc<RootedTree>) -> Vec<Indecomposable> {
    let mut out = Vec::new();
    for (x, catalog) in catalogs_by_vertex(q).into_iter().enumerate() {
        for tree in catalog.entries {
            out.push(Indecomposable {
                apex: q.name(x).to_string(),
                tree,
            });
        }
    }
    out
}
