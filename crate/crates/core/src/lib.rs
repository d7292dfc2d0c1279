//! Exact decomposition of linearized rooted trees over a rooted tree quiver
//! and of zero-dimensional persistent homology indexed by rooted tree posets.
//!
//! Trees over a rooted tree quiver `Q` ([`TreeOverQ`]) are compared with the
//! preorder [`tree_leq`] and split into reduced summands by
//! [`decompose_tree`]. A graph filtered by `Q` ([`QFiltration`]) is turned into
//! a forest over `Q` whose linearization is its `H0`, then decomposed with
//! [`decompose_h0`]. The [`repmod`] module gives the matching linear algebra
//! over any exact [`Field`] and an independent brute-force oracle.
//!
//! ```
//! use treequiver::io::TreeOverFile;
//!
//! let t: TreeOverFile = serde_json::from_str(r#"{
//!     "base": {"vertices": ["a", "b"], "edges": [["a", "b"]]},
//!     "tree": {"vertices": ["x", "y", "r"], "edges": [["x", "r"], ["y", "r"]]},
//!     "labeling": {"x": "a", "y": "a", "r": "b"}
//! }"#).unwrap();
//! let d = treequiver::decompose_tree(&t.to_tree().unwrap()).decomposition;
//! let keys: Vec<_> = d.summands().iter().map(|s| s.key.as_str()).collect();
//! assert_eq!(keys, ["(a)", "(b(a))"]);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod apps;
pub mod decomp;
pub mod error;
pub mod field;
pub mod filtration;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod order;
pub mod quiver;
pub mod repmod;
pub mod tree;
pub mod union_find;

pub use apps::{merge_tree, merge_tree_morphism, morphism_invariant, path_quiver, LinearFiltration, MergeTree};
pub use decomp::{decompose_forest, decompose_tree, elder_split, Decomposition, Summand, TreeDecomposition};
pub use error::{Error, Result};
pub use field::{Field, Gf};
pub use filtration::{decompose_h0, filtration_to_forest, sigma_of_functor, Graph, QFiltration};
pub use order::{enumerate_indecomposables, enumerate_reduced, hom_count, is_reduced, tree_leq};
pub use quiver::{Poset, Quiver, RootedTree};
pub use repmod::{
    hom_dim, linearize_forest, linearize_tree, oracle_decompose, DimVector, OracleOutcome, Representation,
};
pub use tree::{CanonicalKey, ForestOverQ, TreeOverQ};

pub type Gf2 = Gf<2>;
pub type Gf3 = Gf<3>;
pub type Rational = num_rational::BigRational;
pub type Representation2 = Representation<Gf2>;
pub type RationalRepresentation = Representation<Rational>;
