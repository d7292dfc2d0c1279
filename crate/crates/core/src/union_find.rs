//! Union-find over elements added one at a time.

use std::collections::BTreeSet;

/// Disjoint sets over `0..capacity`, with path compression and union by rank.
/// Elements take part only once [`add`](UnionFind::add)ed.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    present: Vec<bool>,
    roots: BTreeSet<usize>,
}

impl UnionFind {
    pub fn new(capacity: usize) -> Self {
        Self {
            parent: (0..capacity).collect(),
            rank: vec![0; capacity],
            present: vec![false; capacity],
            roots: BTreeSet::new(),
        }
    }

    pub fn add(&mut self, x: usize) {
        if !self.present[x] {
            self.present[x] = true;
            self.roots.insert(x);
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.present[x]
    }

    pub fn find(&mut self, x: usize) -> usize {
        debug_assert!(self.present[x], "find on an element that was never added");
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut node = x;
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns the surviving root and the
    /// absorbed one, or `None` if they were already together.
    pub fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return None;
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        if self.rank[ra] == self.rank[rb] {
            self.rank[ra] = self.rank[ra].saturating_add(1);
        }
        self.roots.remove(&rb);
        Some((ra, rb))
    }

    /// Current class roots in increasing order.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.roots.iter().copied()
    }

    pub fn class_count(&self) -> usize {
        self.roots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_merge() {
        let mut uf = UnionFind::new(5);
        for x in 0..4 {
            uf.add(x);
        }
        assert_eq!(uf.class_count(), 4);
        uf.union(0, 1);
        uf.union(2, 3);
        assert_eq!(uf.class_count(), 2);
        assert_eq!(uf.find(1), uf.find(0));
        assert_ne!(uf.find(1), uf.find(2));
        assert!(uf.union(1, 0).is_none());
        uf.union(3, 0);
        assert_eq!(uf.representatives().count(), 1);
        assert!(!uf.contains(4));
    }
}
