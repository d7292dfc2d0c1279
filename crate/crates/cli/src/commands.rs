use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use treequiver::apps::morphism_invariant_by_component;
use treequiver::decomp::SummandMultiset;
use treequiver::filtration::restrict_bifiltration;
use treequiver::io::{DecompositionFile, FiltrationFile, InputFile, QuiverFile, TreeOverFile};
use treequiver::repmod::OracleCatalog;
use treequiver::{
    decompose_forest, decompose_h0, decompose_tree, enumerate_indecomposables, enumerate_reduced, filtration_to_forest,
    gen, hom_count, linearize_forest, oracle_decompose, sigma_of_functor, tree_leq, Decomposition, Error, Field,
    ForestOverQ, Gf, OracleOutcome, RootedTree, TreeOverQ,
};

use crate::report::{Failure, Report};
use crate::{DecomposeKind, GenKind};

/// The oracle warns above this many quiver vertices.
const ORACLE_QUIVER_LIMIT: usize = 8;

fn load(path: &Path, report: &mut Report) -> Result<InputFile, Failure> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| Failure::invalid("io", format!("cannot read {shown}: {e}")))?;
    report.add_input(&shown, &bytes);
    let text = String::from_utf8(bytes).map_err(|_| Failure::invalid("parse", format!("{shown} is not UTF-8")))?;
    Ok(InputFile::parse(&text)?)
}

fn expect_tree(file: InputFile) -> Result<TreeOverQ, Failure> {
    match file {
        InputFile::TreeOver(t) => Ok(t.to_tree()?),
        other => Err(wrong_kind("tree", &other)),
    }
}

fn wrong_kind(expected: &str, found: &InputFile) -> Failure {
    Failure::invalid(
        "wrong_kind",
        format!("expected a {expected} file, found a {} file", found.kind()),
    )
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("file types serialize")
}

fn multiset_json(m: &SummandMultiset) -> Value {
    m.iter()
        .map(|((apex, key), n)| json!({ "apex": apex, "key": key.as_str(), "multiplicity": n }))
        .collect()
}

pub fn validate(path: &Path, report: &mut Report) -> Result<Value, Failure> {
    let file = load(path, report)?;
    file.validate()?;
    Ok(json!({ "kind": file.kind(), "valid": true }))
}

fn decomposition_of(file: InputFile, kind: Option<DecomposeKind>) -> Result<(ForestOverQ, Decomposition), Failure> {
    let detected = match &file {
        InputFile::TreeOver(_) => DecomposeKind::Tree,
        InputFile::Filtration(_) => DecomposeKind::Filtration,
        InputFile::Bifiltration(_) => DecomposeKind::Bifiltration,
        other => return Err(wrong_kind("tree, filtration or bifiltration", other)),
    };
    if let Some(k) = kind {
        if k != detected {
            let name = match k {
                DecomposeKind::Tree => "tree",
                DecomposeKind::Filtration => "filtration",
                DecomposeKind::Bifiltration => "bifiltration",
            };
            return Err(wrong_kind(name, &file));
        }
    }
    match file {
        InputFile::TreeOver(t) => {
            let t = t.to_tree()?;
            let d = decompose_tree(&t);
            let forest = ForestOverQ::new(t.base().clone(), vec![t])?;
            Ok((forest, d.decomposition))
        }
        InputFile::Filtration(f) => {
            let f = f.to_filtration()?;
            Ok((filtration_to_forest(&f)?, decompose_h0(&f)?))
        }
        InputFile::Bifiltration(b) => {
            let bifiltration = b.to_bifiltration()?;
            let restriction = b.to_restriction()?.ok_or_else(|| {
                Failure::invalid(
                    "missing_restriction",
                    "a bifiltration needs a restriction to a rooted tree poset",
                )
            })?;
            let forest = sigma_of_functor(&restrict_bifiltration(&bifiltration, &restriction)?)?;
            let d = decompose_forest(&forest);
            Ok((forest, d))
        }
        _ => unreachable!("kind checked above"),
    }
}

pub fn decompose(path: &Path, kind: Option<DecomposeKind>, report: &mut Report) -> Result<Value, Failure> {
    let file = load(path, report)?;
    let (_, d) = decomposition_of(file, kind)?;
    d.check()?;
    Ok(to_value(&DecompositionFile::from_decomposition(&d)))
}

pub fn reduced(path: &Path, with_downsets: bool, report: &mut Report) -> Result<Value, Failure> {
    let q = match load(path, report)? {
        InputFile::Quiver(q) => Arc::new(q.to_rooted()?),
        other => return Err(wrong_kind("quiver", &other)),
    };
    let entry = |apex: &str, t: &TreeOverQ| json!({ "apex": apex, "key": t.canonical_key().as_str(), "tree": to_value(&TreeOverFile::from_tree(t)) });
    if with_downsets {
        let all = enumerate_indecomposables(&q);
        let mut by_apex: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &all {
            *by_apex.entry(&e.apex).or_default() += 1;
        }
        Ok(json!({
            "with_downsets": true,
            "count": all.len(),
            "by_apex": by_apex,
            "entries": all.iter().map(|e| entry(&e.apex, &e.tree)).collect::<Vec<_>>(),
        }))
    } else {
        let catalog = enumerate_reduced(&q);
        Ok(json!({
            "with_downsets": false,
            "count": catalog.len(),
            "entries": catalog.entries().iter().map(|t| entry(q.root_name(), t)).collect::<Vec<_>>(),
        }))
    }
}

pub fn compare(s: &Path, t: &Path, report: &mut Report) -> Result<Value, Failure> {
    let s = expect_tree(load(s, report)?)?;
    let t = expect_tree(load(t, report)?)?.rebase(s.base().clone())?;
    Ok(json!({
        "s_leq_t": tree_leq(&s, &t)?,
        "t_leq_s": tree_leq(&t, &s)?,
        "hom_count_s_t": hom_count(&s, &t)?.to_string(),
        "hom_count_t_s": hom_count(&t, &s)?.to_string(),
        "iso": s.iso_over_q(&t)?,
        "s_key": s.canonical_key().as_str(),
        "t_key": t.canonical_key().as_str(),
    }))
}

fn run_oracle<F: Field>(forest: &ForestOverQ) -> treequiver::Result<OracleOutcome> {
    let m = linearize_forest::<F>(forest);
    oracle_decompose(&m, &OracleCatalog::<F>::new(forest.ambient()))
}

macro_rules! prime_dispatch {
    ($p:expr, $forest:expr; $($prime:literal),*) => {
        match $p {
            $($prime => run_oracle::<Gf<$prime>>($forest),)*
            other => Err(Error::UnsupportedPrime(other)),
        }
    };
}

fn oracle_with_prime(p: u64, forest: &ForestOverQ) -> treequiver::Result<OracleOutcome> {
    prime_dispatch!(p, forest;
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
        65521, 2147483647)
}

pub fn oracle(path: &Path, prime: u64, corrupt: bool, report: &mut Report) -> Result<Value, Failure> {
    let file = load(path, report)?;
    let (forest, d) = decomposition_of(file, None)?;
    let q = forest.ambient().clone();
    if q.len() > ORACLE_QUIVER_LIMIT {
        report.warn(format!(
            "quiver has {} vertices; the oracle catalog may be large",
            q.len()
        ));
    }
    let mut claimed = d.multiset();
    if corrupt {
        match claimed.values_mut().next() {
            Some(n) => *n += 1,
            None => {
                claimed.insert(
                    (q.root_name().to_string(), TreeOverQ::star(q.clone()).canonical_key()),
                    1,
                );
            }
        }
    }
    let outcome = oracle_with_prime(prime, &forest)?;
    let (verdict, found) = match &outcome {
        OracleOutcome::Unique(m) if *m == claimed => ("MATCH", json!([multiset_json(m)])),
        OracleOutcome::Unique(m) => ("MISMATCH", json!([multiset_json(m)])),
        OracleOutcome::Inconclusive { candidates } => ("INCONCLUSIVE", candidates.iter().map(multiset_json).collect()),
        OracleOutcome::NoSurvivor => ("MISMATCH", json!([])),
    };
    let result = json!({
        "verdict": verdict,
        "prime": prime,
        "decomposition": multiset_json(&claimed),
        "oracle": found,
    });
    match verdict {
        "MISMATCH" => Err(Failure {
            result: Some(result),
            ..Failure::internal("oracle_mismatch", "decomposition disagrees with the oracle")
        }),
        "INCONCLUSIVE" => {
            report.warn("several multiplicity vectors satisfy every hom probe");
            Ok(result)
        }
        _ => Ok(result),
    }
}

pub fn merge_invariant(path: &Path, report: &mut Report) -> Result<Value, Failure> {
    let (f, g) = match load(path, report)? {
        InputFile::MergeInvariant(m) => m.to_filtrations()?,
        other => return Err(wrong_kind("merge-invariant", &other)),
    };
    let parts = morphism_invariant_by_component(&f, &g)?;
    if parts.len() > 1 {
        report.warn(format!(
            "graph has {} connected components; each is reported separately",
            parts.len()
        ));
    }
    let mut total = 0;
    let mut components = Vec::new();
    for c in &parts {
        c.decomposition.check()?;
        total += c.decomposition.total_summands();
        components.push(json!({
            "vertices": c.vertices,
            "merge_tree": to_value(&TreeOverFile::from_tree(c.merge_tree.tree())),
            "decomposition": to_value(&DecompositionFile::from_decomposition(&c.decomposition)),
        }));
    }
    Ok(json!({ "components": components, "total_summands": total }))
}

pub fn gen(
    kind: GenKind,
    size: usize,
    seed: u64,
    quiver_size: usize,
    out: Option<&Path>,
    report: &mut Report,
) -> Result<Value, Failure> {
    let mut rng = gen::rng(seed);
    let file = match kind {
        GenKind::Quiver => to_value(&QuiverFile::from_rooted(&gen::random_quiver(&mut rng, size))),
        GenKind::Tree => {
            let q: Arc<RootedTree> = gen::random_quiver(&mut rng, quiver_size);
            let t = gen::random_tree_over(&mut rng, &q, size);
            if t.len() < size {
                report.warn(format!(
                    "growth stopped at {} vertices: every vertex lies over a leaf",
                    t.len()
                ));
            }
            to_value(&TreeOverFile::from_tree(&t))
        }
        GenKind::Filtration => {
            let q = gen::random_quiver(&mut rng, quiver_size);
            let edge_prob = (2.0 / size as f64).min(1.0);
            let f = gen::random_filtration(&mut rng, &q, size, edge_prob);
            to_value(&FiltrationFile::from_filtration(&f))
        }
    };
    if let Some(out) = out {
        let text = serde_json::to_string_pretty(&file).expect("values serialize") + "\n";
        std::fs::write(out, text)
            .map_err(|e| Failure::invalid("io", format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(file)
}
