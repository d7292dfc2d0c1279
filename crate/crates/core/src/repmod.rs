//! Representations of a rooted tree quiver as explicit matrices.
//!
//! Every Q-vertex `x` other than the root carries the map along its edge
//! `x -> parent(x)`, a `dims[parent] × dims[x]` matrix. Linearizing a tree over
//! `Q` gives 0/1 matrices in the basis of fiber elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::decomp::SummandMultiset;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::QFiltration;
use crate::linalg::{Matrix, SparseSystem};
use crate::order::{enumerate_indecomposables, Indecomposable};
use crate::quiver::{Quiver, RootedTree};
use crate::tree::{same_ambient, ForestOverQ, TreeOverQ};

/// Dimensions by Q-vertex name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DimVector(pub BTreeMap<String, usize>);

impl DimVector {
    pub fn from_slice(q: &RootedTree, dims: &[usize]) -> Self {
        Self(q.names().iter().cloned().zip(dims.iter().copied()).collect())
    }

    pub fn get(&self, x: &str) -> usize {
        self.0.get(x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation<F> {
    base: Arc<RootedTree>,
    dims: Vec<usize>,
    maps: Vec<Option<Matrix<F>>>,
}

impl<F: Field> Representation<F> {
    /// `maps[x]` is the map along `x -> parent(x)`, `None` exactly at the root.
    pub fn new(base: Arc<RootedTree>, dims: Vec<usize>, maps: Vec<Option<Matrix<F>>>) -> Result<Self> {
        if dims.len() != base.len() || maps.len() != base.len() {
            return Err(Error::Shape(format!(
                "{} dims and {} maps for {} vertices",
                dims.len(),
                maps.len(),
                base.len()
            )));
        }
        for x in 0..base.len() {
            match (base.parent(x), &maps[x]) {
                (None, None) => {}
                (Some(p), Some(m)) if m.rows() == dims[p] && m.cols() == dims[x] => {}
                (Some(p), Some(m)) => {
                    return Err(Error::Shape(format!(
                        "map {} -> {} is {}x{}, expected {}x{}",
                        base.name(x),
                        base.name(p),
                        m.rows(),
                        m.cols(),
                        dims[p],
                        dims[x]
                    )))
                }
                _ => return Err(Error::Shape(format!("map presence at {}", base.name(x)))),
            }
        }
        Ok(Self { base, dims, maps })
    }

    pub fn zero(base: Arc<RootedTree>) -> Self {
        let dims = vec![0; base.len()];
        let maps = (0..base.len())
            .map(|x| base.parent(x).map(|_| Matrix::zeros(0, 0)))
            .collect();
        Self { base, dims, maps }
    }

    pub fn base(&self) -> &Arc<RootedTree> {
        &self.base
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector::from_slice(&self.base, &self.dims)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn map(&self, x: usize) -> Option<&Matrix<F>> {
        self.maps[x].as_ref()
    }

    /// Replaces the map along `x -> parent(x)`; used to build corrupted inputs.
    pub fn with_map(mut self, x: usize, m: Matrix<F>) -> Result<Self> {
        let maps = std::mem::take(&mut self.maps);
        let mut maps = maps;
        maps[x] = Some(m);
        Self::new(self.base, self.dims, maps)
    }
}

/// `k_t`: one basis vector per tree vertex, ordered by vertex index within
/// each fiber, with 1 at `(parent, child)`.
pub fn linearize_tree<F: Field>(t: &TreeOverQ) -> Representation<F> {
    let base = t.base().clone();
    let tree = t.tree();
    let mut dims = vec![0; base.len()];
    let mut position = vec![0; tree.len()];
    for v in 0..tree.len() {
        position[v] = dims[t.label(v)];
        dims[t.label(v)] += 1;
    }
    let mut maps: Vec<Option<Matrix<F>>> = (0..base.len())
        .map(|x| base.parent(x).map(|p| Matrix::zeros(dims[p], dims[x])))
        .collect();
    for v in 0..tree.len() {
        if let Some(p) = tree.parent(v) {
            let m = maps[t.label(v)].as_mut().expect("non-root label has a parent edge");
            m.set(position[p], position[v], F::one());
        }
    }
    Representation { base, dims, maps }
}

/// The direct sum of the components, each pushed forward into the ambient.
pub fn linearize_forest<F: Field>(f: &ForestOverQ) -> Representation<F> {
    let parts: Vec<_> = f
        .components()
        .iter()
        .map(|c| {
            push_forward_inclusion(&linearize_tree::<F>(c), f.ambient())
                .expect("forest components live over downsets of the ambient")
        })
        .collect();
    direct_sum(f.ambient(), &parts).expect("all parts share the ambient")
}

/// Extends a representation of a downset of `q` by zero.
pub fn push_forward_inclusion<F: Field>(r: &Representation<F>, q: &Arc<RootedTree>) -> Result<Representation<F>> {
    if !r.base.is_downset_of(q) {
        return Err(Error::NotADownset(r.base.root_name().to_string()));
    }
    let local: Vec<Option<usize>> = (0..q.len()).map(|x| r.base.get_index(q.name(x))).collect();
    let dims: Vec<usize> = local.iter().map(|l| l.map_or(0, |i| r.dims[i])).collect();
    let maps = (0..q.len())
        .map(|x| {
            let p = q.parent(x)?;
            Some(match (local[x], local[p]) {
                (Some(i), Some(_)) => r.maps[i].clone().expect("non-root of the downset"),
                _ => Matrix::zeros(dims[p], dims[x]),
            })
        })
        .collect();
    Ok(Representation {
        base: q.clone(),
        dims,
        maps,
    })
}

/// Block-diagonal sum; the empty sum is the zero representation.
pub fn direct_sum<F: Field>(q: &Arc<RootedTree>, rs: &[Representation<F>]) -> Result<Representation<F>> {
    for r in rs {
        same_ambient(q, &r.base)?;
    }
    let mut dims = vec![0; q.len()];
    for r in rs {
        for (d, e) in dims.iter_mut().zip(&r.dims) {
            *d += e;
        }
    }
    let mut maps: Vec<Option<Matrix<F>>> = (0..q.len())
        .map(|x| q.parent(x).map(|p| Matrix::zeros(dims[p], dims[x])))
        .collect();
    let mut offset = vec![0; q.len()];
    for r in rs {
        for x in 0..q.len() {
            let Some(p) = q.parent(x) else { continue };
            let src = r.maps[x].as_ref().expect("non-root map");
            let dst = maps[x].as_mut().expect("non-root map");
            for (i, j) in src.support() {
                dst.set(offset[p] + i, offset[x] + j, src.get(i, j).clone());
            }
        }
        for (o, d) in offset.iter_mut().zip(&r.dims) {
            *o += d;
        }
    }
    Ok(Representation {
        base: q.clone(),
        dims,
        maps,
    })
}

/// Dimension of the space of morphisms `m -> n`, optionally restricted to
/// those vanishing at the root.
pub fn hom_dim<F: Field>(m: &Representation<F>, n: &Representation<F>, zero_at_root: bool) -> Result<usize> {
    same_ambient(&m.base, &n.base)?;
    let q = &m.base;
    let (dm, dn) = (&m.dims, &n.dims);
    // offset of the block of unknowns for phi_x, a dn[x] × dm[x] matrix
    let mut offset = vec![None; q.len()];
    let mut unknowns = 0;
    for x in 0..q.len() {
        if zero_at_root && x == q.root() {
            continue;
        }
        offset[x] = Some(unknowns);
        unknowns += dn[x] * dm[x];
    }
    let var = |x: usize, i: usize, k: usize| offset[x].map(|o| o + i * dm[x] + k);
    let mut system = SparseSystem::<F>::new(unknowns);
    for x in 0..q.len() {
        let Some(p) = q.parent(x) else { continue };
        let mx = m.maps[x].as_ref().expect("non-root map");
        let nx = n.maps[x].as_ref().expect("non-root map");
        let mut m_col: Vec<Vec<(usize, F)>> = vec![Vec::new(); dm[x]];
        for (k, j) in mx.support() {
            m_col[j].push((k, mx.get(k, j).clone()));
        }
        let mut n_row: Vec<Vec<(usize, F)>> = vec![Vec::new(); dn[p]];
        for (i, k) in nx.support() {
            n_row[i].push((k, nx.get(i, k).clone()));
        }
        // (phi_p M - N phi_x)[i, j] = 0
        for i in 0..dn[p] {
            for j in 0..dm[x] {
                let mut row = Vec::new();
                for (k, c) in &m_col[j] {
                    if let Some(u) = var(p, i, *k) {
                        row.push((u, c.clone()));
                    }
                }
                for (k, c) in &n_row[i] {
                    if let Some(u) = var(x, *k, j) {
                        row.push((u, -c.clone()));
                    }
                }
                system.push_row(row);
            }
        }
    }
    Ok(system.nullity())
}

/// One vertex `x#i` per basis vector and one arrow per nonzero matrix entry.
pub fn coefficient_quiver<F: Field>(r: &Representation<F>) -> Quiver {
    let q = &r.base;
    let mut vertices = Vec::with_capacity(r.total_dim());
    for x in 0..q.len() {
        for i in 0..r.dims[x] {
            vertices.push(format!("{}#{i}", q.name(x)));
        }
    }
    let mut edges = Vec::new();
    for x in 0..q.len() {
        let (Some(p), Some(m)) = (q.parent(x), r.maps[x].as_ref()) else {
            continue;
        };
        for (i, j) in m.support() {
            edges.push((format!("{}#{j}", q.name(x)), format!("{}#{i}", q.name(p))));
        }
    }
    Quiver::new(vertices, edges).expect("basis names are distinct")
}

/// `dim H0` of every sublevel graph, as vertex count minus the rank of the
/// signed incidence matrix.
pub fn h0_dims_via_rank<F: Field>(f: &QFiltration) -> DimVector {
    let q = f.quiver();
    let graph = f.graph();
    let dims: Vec<usize> = (0..q.len())
        .map(|x| {
            let vertices: Vec<usize> = (0..graph.vertex_count())
                .filter(|&v| q.leq_idx(f.vertex_value(v), x))
                .collect();
            let mut column = vec![usize::MAX; graph.vertex_count()];
            for (c, &v) in vertices.iter().enumerate() {
                column[v] = c;
            }
            let rows: Vec<Vec<F>> = graph
                .edges()
                .iter()
                .enumerate()
                .filter(|&(e, _)| q.leq_idx(f.edge_value(e), x))
                .map(|(_, &(a, b))| {
                    let mut row = vec![F::zero(); vertices.len()];
                    row[column[a]] = F::one();
                    row[column[b]] = -F::one();
                    row
                })
                .collect();
            if rows.is_empty() {
                vertices.len()
            } else {
                vertices.len() - Matrix::from_rows(rows).rank()
            }
        })
        .collect();
    DimVector::from_slice(q, &dims)
}

/// Outcome of the brute-force multiplicity search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// Exactly one multiplicity vector satisfies every probe.
    Unique(SummandMultiset),
    /// Several candidates survive; `candidates` holds the first two found.
    Inconclusive { candidates: Vec<SummandMultiset> },
    /// No candidate survives, so the input is not a sum of catalog entries.
    NoSurvivor,
}

/// The indecomposables of `Q` as representations of `Q`, with their pairwise
/// hom dimensions.
pub struct OracleCatalog<F> {
    base: Arc<RootedTree>,
    entries: Vec<Indecomposable>,
    reps: Vec<Representation<F>>,
    /// `hom[i][j] = hom_dim(X_i, X_j)`
    hom: Vec<Vec<usize>>,
}

impl<F: Field> OracleCatalog<F> {
    pub fn new(q: &Arc<RootedTree>) -> Self {
        let entries = enumerate_indecomposables(q);
        let reps: Vec<_> = entries
            .iter()
            .map(|e| {
                push_forward_inclusion(&linearize_tree::<F>(&e.tree), q).expect("catalog trees live over downsets")
            })
            .collect();
        let hom = reps
            .iter()
            .map(|a| reps.iter().map(|b| hom_dim(a, b, false).expect("same base")).collect())
            .collect();
        Self {
            base: q.clone(),
            entries,
            reps,
            hom,
        }
    }

    pub fn entries(&self) -> &[Indecomposable] {
        &self.entries
    }

    pub fn representations(&self) -> &[Representation<F>] {
        &self.reps
    }

    pub fn hom_table(&self) -> &[Vec<usize>] {
        &self.hom
    }
}

struct Search<'a> {
    order: Vec<usize>,
    dims: Vec<&'a [usize]>,
    hom: &'a [Vec<usize>],
    into_m: Vec<usize>,
    out_of_m: Vec<usize>,
    end_m: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, mu: &mut Vec<usize>, rest: &mut [usize], into: &mut [usize], out: &mut [usize]) {
        if self.found.len() >= 2 {
            return;
        }
        if depth == self.order.len() {
            if rest.iter().any(|&d| d != 0) || into != self.into_m || out != self.out_of_m {
                return;
            }
            let k = mu.len();
            let end: usize = (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| mu[i] * mu[j] * self.hom[i][j])
                .sum();
            if end == self.end_m {
                self.found.push(mu.clone());
            }
            return;
        }
        let j = self.order[depth];
        let dj = self.dims[j];
        let bound = dj
            .iter()
            .zip(rest.iter())
            .filter(|(&d, _)| d > 0)
            .map(|(&d, &r)| r / d)
            .min()
            .unwrap_or(0);
        for count in (0..=bound).rev() {
            let feasible = (0..into.len()).all(|i| {
                into[i] + count * self.hom[i][j] <= self.into_m[i]
                    && out[i] + count * self.hom[j][i] <= self.out_of_m[i]
            });
            if !feasible {
                continue;
            }
            for (r, d) in rest.iter_mut().zip(dj) {
                *r -= count * d;
            }
            for i in 0..into.len() {
                into[i] += count * self.hom[i][j];
                out[i] += count * self.hom[j][i];
            }
            mu[j] = count;
            self.run(depth + 1, mu, rest, into, out);
            mu[j] = 0;
            for i in 0..into.len() {
                into[i] -= count * self.hom[i][j];
                out[i] -= count * self.hom[j][i];
            }
            for (r, d) in rest.iter_mut().zip(dj) {
                *r += count * d;
            }
        }
    }
}

/// Searches multiplicity vectors over the catalog that match the dimension
/// vector of `m` and every hom-dimension probe against catalog entries.
pub fn oracle_decompose<F: Field>(m: &Representation<F>, catalog: &OracleCatalog<F>) -> Result<OracleOutcome> {
    same_ambient(&m.base, &catalog.base)?;
    let reps = &catalog.reps;
    let into_m = reps.iter().map(|x| hom_dim(x, m, false)).collect::<Result<Vec<_>>>()?;
    let out_of_m = reps.iter().map(|x| hom_dim(m, x, false)).collect::<Result<Vec<_>>>()?;
    let end_m = hom_dim(m, m, false)?;
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(reps[j].total_dim()));
    let mut search = Search {
        order,
        dims: reps.iter().map(|r| r.dims()).collect(),
        hom: &catalog.hom,
        into_m,
        out_of_m,
        end_m,
        found: Vec::new(),
    };
    let k = reps.len();
    let mut rest = m.dims.clone();
    search.run(0, &mut vec![0; k], &mut rest, &mut vec![0; k], &mut vec![0; k]);
    let to_multiset = |mu: &Vec<usize>| -> SummandMultiset {
        mu.iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| {
                let e = &catalog.entries[j];
                ((e.apex.clone(), e.tree.canonical_key()), c)
            })
            .collect()
    };
    Ok(match search.found.len() {
        0 => OracleOutcome::NoSurvivor,
        1 => OracleOutcome::Unique(to_multiset(&search.found[0])),
        _ => OracleOutcome::Inconclusive {
            candidates: search.found.iter().map(to_multiset).collect(),
        },
    })
}
