//! Catalogs against a naive scan: every structure on `B` plus new points
//! whose restriction is `B`, kept if it validates and is generated by `B`
//! and the first new point, then grouped up to isomorphism over `B`.

use std::collections::HashMap;
use std::sync::Arc;

use forge_core::json::to_json;
use forge_core::limits::{enumerate_extensions, CatalogParams};
use forge_core::morphism::isomorphisms;
use forge_core::presets::{all_structures, all_structures_up_to};
use forge_core::structure::default_names;
use forge_core::{FiniteStructure, Matrix, Rational, StructureClass, Table};

fn grid() -> Vec<Rational> {
    vec![Rational::integer(1), Rational::integer(2)]
}

/// Restriction of `t` to its first `m` points equals `b` (ignoring names).
fn restricts_to(t: &FiniteStructure, b: &FiniteStructure) -> bool {
    let m = b.len();
    (0..m).all(|i| {
        (0..m).all(|j| match b.class() {
            StructureClass::Graph => t.adjacent(i, j) == b.adjacent(i, j),
            StructureClass::Poset => t.le(i, j) == b.le(i, j),
            StructureClass::Metric => t.distance(i, j) == b.distance(i, j),
            StructureClass::Semilattice => t.meet(i, j) == b.meet(i, j),
        })
    })
}

fn relational_candidates(b: &FiniteStructure) -> Vec<FiniteStructure> {
    all_structures(b.class(), b.len() + 1, &grid())
        .into_iter()
        .filter(|t| restricts_to(t, b))
        .collect()
}

/// Every meet table on `n ≥ m + 1` points extending `b`, for `n` up to
/// `2m + 1`, generated by the base and point `m`.
fn semilattice_candidates(b: &FiniteStructure) -> Vec<FiniteStructure> {
    let m = b.len();
    let mut out = Vec::new();
    for n in m + 1..=2 * m + 1 {
        let free: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1).max(m)..n).map(move |j| (i, j))).collect();
        let total = (n as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut table = Matrix::from_fn(n, |i, j| match () {
                _ if i < m && j < m => b.meet(i, j),
                _ if i == j => i,
                _ => 0,
            });
            let mut c = code;
            for &(i, j) in &free {
                let v = (c % n as u64) as usize;
                table.set(i, j, v);
                table.set(j, i, v);
                c /= n as u64;
            }
            let Ok(t) = FiniteStructure::new(default_names(n, "t"), Table::Semilattice(table)) else {
                continue;
            };
            if !t.is_valid() {
                continue;
            }
            let generated = t.meet_closure(&(0..=m).collect::<Vec<_>>()).unwrap();
            if generated.len() == n {
                out.push(t);
            }
        }
    }
    out
}

fn classes_over_base(candidates: Vec<FiniteStructure>, m: usize) -> usize {
    let mut reps: Vec<FiniteStructure> = Vec::new();
    for t in candidates {
        let fixed: Vec<Option<usize>> = (0..t.len()).map(|i| (i < m).then_some(i)).collect();
        if !reps.iter().any(|r| !isomorphisms(&t, r, &fixed).is_empty()) {
            reps.push(t);
        }
    }
    reps.len()
}

fn naive_bases(s: &FiniteStructure, max: usize) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|b: &Vec<usize>| b.len() <= max)
        .filter(|b| match s.class() {
            StructureClass::Graph | StructureClass::Poset => true,
            StructureClass::Metric => !b.is_empty(),
            StructureClass::Semilattice => {
                !b.is_empty() && b.iter().all(|&x| b.iter().all(|&y| b.contains(&s.meet(x, y))))
            }
        })
        .collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

fn check_class(class: StructureClass, max_root: usize, max_base: usize) {
    let mut cache: HashMap<String, usize> = HashMap::new();
    let params = CatalogParams::with_grid(max_base, if class == StructureClass::Metric { grid() } else { vec![] });
    for root in all_structures_up_to(class, max_root, &grid()) {
        let root = Arc::new(root);
        let catalog = enumerate_extensions(root.clone(), &params).unwrap();
        assert_eq!(catalog.bases(), naive_bases(&root, max_base), "bases of {}", to_json(&root));
        for base in catalog.bases() {
            let b = root.induced_substructure(&base).unwrap();
            let b = b.with_names(default_names(b.len(), "t")).unwrap();
            let key = to_json(&b);
            let expected = *cache.entry(key).or_insert_with(|| {
                let candidates = match class {
                    StructureClass::Semilattice => semilattice_candidates(&b),
                    _ => relational_candidates(&b),
                };
                classes_over_base(candidates, b.len())
            });
            let found = catalog.entries().iter().filter(|e| e.base == base).count();
            assert_eq!(found, expected, "{class} base {base:?} of {}", to_json(&root));
            for i in (0..catalog.len()).filter(|&i| catalog.entries()[i].base == base) {
                assert!(catalog.extension(i).is_valid());
            }
        }
    }
}

#[test]
fn graph_catalogs_are_complete() {
    check_class(StructureClass::Graph, 3, 3);
}

#[test]
fn poset_catalogs_are_complete() {
    check_class(StructureClass::Poset, 3, 3);
}

#[test]
fn metric_catalogs_are_complete_on_the_grid() {
    check_class(StructureClass::Metric, 3, 3);
}

#[test]
fn semilattice_catalogs_are_complete() {
    check_class(StructureClass::Semilattice, 3, 2);
}

#[test]
fn empty_base_extension_is_a_single_point() {
    let root = Arc::new(forge_core::presets::edgeless(1).unwrap());
    let catalog = enumerate_extensions(root, &CatalogParams::new(0)).unwrap();
    assert_eq!(catalog.len(), 1);
    assert_eq!(catalog.extension(0).len(), 1);
}
