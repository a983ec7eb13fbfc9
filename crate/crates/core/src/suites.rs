//! Exhaustive verification runs over small structures. Each run returns a
//! [`SuiteReport`]; brute-force bound overruns are counted as skips.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::amalgam::{free_sum, permutation_isomorphism, representation_isomorphism, semilattice_subset_representation, AmalgamPair, RootedMultiAmalgam};
use crate::congruence::{all_congruences, congruence_generated, Congruence};
use crate::error::{Error, Result};
use crate::extension::{enumerate_codes, realize};
use crate::lifting::{all_endomorphisms, cayley_demo, check_all_pairs, CayleyRoot, Semigroup, Star};
use crate::limits::{
    build_stages_within, check_graph_extension_property, check_weak_homogeneity, enumerate_extensions, CatalogParams,
    HomogeneityBounds, StageChain,
};
use crate::morphism::{enumerate_hom_maps, HomSearchLimit, Morphism};
use crate::oracle::verify_universal_property;
use crate::presets::{all_structures, all_structures_up_to};
use crate::pushout::{amalgamated_sum, pushout_1phep, PushoutSquare, Span};
use crate::rational::Rational;
use crate::structure::{FiniteStructure, StructureClass, ValidationReport};

/// Failures kept verbatim in a report; the rest are only counted.
const KEPT_FAILURES: usize = 10;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checked: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.checked
    }

    pub fn has_skips(&self) -> bool {
        self.skipped > 0
    }

    /// Folds per-item outcomes in their canonical order.
    fn record(&mut self, outcomes: impl IntoIterator<Item = Outcome>) {
        for o in outcomes {
            match o {
                Outcome::Pass => {
                    self.checked += 1;
                    self.passed += 1;
                }
                Outcome::Skip => self.skipped += 1,
                Outcome::Fail(msg) => {
                    self.checked += 1;
                    if self.failures.len() < KEPT_FAILURES {
                        self.failures.push(msg);
                    }
                }
            }
        }
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.skipped += other.skipped;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(f);
            }
        }
        self.notes.extend(other.notes);
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn outcome(result: Result<Option<String>>) -> Outcome {
    match result {
        Ok(None) => Outcome::Pass,
        Ok(Some(msg)) => Outcome::Fail(msg),
        Err(Error::BoundExceeded { .. }) => Outcome::Skip,
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn structures_with_empty(class: StructureClass, max: usize, grid: &[Rational]) -> Vec<FiniteStructure> {
    let mut out = if class.allows_empty() { all_structures(class, 0, grid) } else { Vec::new() };
    out.extend(all_structures_up_to(class, max, grid));
    out
}

/// Every 1PHEP span `C ↩ B ↠ B′` with `|B|, |B′| ≤ max_size` and `C` a
/// one-point extension of `B`; metric distances from `grid`.
pub fn one_point_spans(class: StructureClass, max_size: usize, grid: &[Rational]) -> Result<Vec<Span>> {
    let structures: Vec<Arc<FiniteStructure>> =
        structures_with_empty(class, max_size, grid).into_iter().map(Arc::new).collect();
    let mut spans = Vec::new();
    for b in &structures {
        let codes = enumerate_codes(b, grid)?;
        let targets: Vec<(Arc<FiniteStructure>, Vec<Vec<usize>>)> = structures
            .iter()
            .filter(|bp| bp.len() <= b.len())
            .map(|bp| {
                let surj = enumerate_hom_maps(b, bp, HomSearchLimit::default())?
                    .into_iter()
                    .filter(|m| (0..bp.len()).all(|y| m.contains(&y)))
                    .collect();
                Ok((bp.clone(), surj))
            })
            .collect::<Result<_>>()?;
        for code in codes {
            let c = Arc::new(realize(b, &code, "x")?);
            let left = Morphism::new(b.clone(), c, (0..b.len()).collect())?;
            for (bp, surj) in &targets {
                for f in surj {
                    spans.push(Span::new(left.clone(), Morphism::new(b.clone(), bp.clone(), f.clone())?)?);
                }
            }
        }
    }
    Ok(spans)
}

fn legs_message(sq: &PushoutSquare, strict_ap: bool) -> Option<String> {
    let (l, r) = (sq.left_leg().kind(), sq.right_leg().kind());
    let ok = if strict_ap {
        l.is_embedding() && r.is_embedding()
    } else {
        l.is_surjection() && r.is_embedding()
    };
    (!ok).then(|| format!("square legs are {l} (left) and {r} (right)"))
}

/// The pushout oracle over every 1PHEP span of `class` with `|B|, |B′| ≤
/// max_size`, against every structure with at most `object_size` points.
pub fn pushout_oracle_suite(class: StructureClass, max_size: usize, object_size: usize, grid: &[Rational]) -> Result<SuiteReport> {
    let spans = one_point_spans(class, max_size, grid)?;
    let objects = all_structures_up_to(class, object_size, grid);
    let outcomes: Vec<Outcome> = spans
        .into_par_iter()
        .map(|span| {
            outcome((|| {
                let sq = pushout_1phep(span)?;
                if let Some(msg) = legs_message(&sq, false) {
                    return Ok(Some(msg));
                }
                let report = verify_universal_property(&sq, &objects, HomSearchLimit::default())?;
                Ok(report.failure.map(|f| {
                    format!(
                        "P = {:?}: cocone j1 = {:?}, j2 = {:?} into test object {} has {} mediators",
                        sq.object().carrier(),
                        f.j1,
                        f.j2,
                        f.object,
                        f.mediators
                    )
                }))
            })())
        })
        .collect();
    let mut report = SuiteReport::new(&format!("pushout-oracle/{class}"));
    report.record(outcomes);
    report.notes.push(format!("{} test objects with at most {object_size} points", objects.len()));
    if class == StructureClass::Metric {
        report.notes.push(format!(
            "metric spans and test objects use the distance grid {}",
            grid.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")
        ));
    }
    Ok(report)
}

/// Leg contract of every amalgamated sum of two one-point extensions of a
/// base with at most `max_size` points.
pub fn amalgam_legs_suite(class: StructureClass, max_size: usize, grid: &[Rational]) -> Result<SuiteReport> {
    let mut items = Vec::new();
    for b in structures_with_empty(class, max_size, grid) {
        let b = Arc::new(b);
        let codes = enumerate_codes(&b, grid)?;
        let exts: Vec<Arc<FiniteStructure>> =
            codes.iter().map(|c| realize(&b, c, "x").map(Arc::new)).collect::<Result<_>>()?;
        let zs: Vec<Arc<FiniteStructure>> =
            codes.iter().map(|c| realize(&b, c, "z").map(Arc::new)).collect::<Result<_>>()?;
        for c in &exts {
            for z in &zs {
                items.push((b.clone(), c.clone(), z.clone()));
            }
        }
    }
    let outcomes: Vec<Outcome> = items
        .into_par_iter()
        .map(|(b, c, z)| {
            outcome((|| {
                let id: Vec<usize> = (0..b.len()).collect();
                let span = Span::new(Morphism::new(b.clone(), c, id.clone())?, Morphism::new(b, z, id)?)?;
                let sq = amalgamated_sum(span)?;
                Ok(legs_message(&sq, true))
            })())
        })
        .collect();
    let mut report = SuiteReport::new(&format!("amalgam-legs/{class}"));
    report.record(outcomes);
    Ok(report)
}

/// For every semilattice `B` with at most `max_size` elements, every
/// surjection `f` out of `B` (one per kernel) and every one-point extension
/// `C ⊇ B`: the congruence of `C` generated by `ker f` meets `B × B` in
/// exactly `ker f`.
pub fn congruence_extension_suite(max_size: usize) -> Result<SuiteReport> {
    let mut items = Vec::new();
    for b in all_structures_up_to(StructureClass::Semilattice, max_size, &[]) {
        let kernels = all_congruences(&b);
        let codes = enumerate_codes(&b, &[])?;
        let b = Arc::new(b);
        for code in codes {
            let c = Arc::new(realize(&b, &code, "x")?);
            for k in &kernels {
                items.push((b.clone(), c.clone(), k.clone()));
            }
        }
    }
    let outcomes: Vec<Outcome> = items
        .into_par_iter()
        .map(|(b, c, kernel)| {
            outcome((|| {
                let m = b.len();
                let pairs: Vec<(usize, usize)> = kernel
                    .blocks()
                    .iter()
                    .flat_map(|block| block.windows(2).map(|w| (w[0], w[1])))
                    .collect();
                let theta = congruence_generated(&c, &pairs)?;
                let restricted = Congruence::from_labels(&(0..m).map(|x| theta.block_of(x)).collect::<Vec<_>>());
                let expected = Congruence::from_labels(&(0..m).map(|x| kernel.block_of(x)).collect::<Vec<_>>());
                Ok((restricted != expected).then(|| {
                    format!(
                        "B = {:?}, C = {:?}: θ ∩ B×B = {:?}, ker f = {:?}",
                        b.carrier(),
                        c.carrier(),
                        restricted.blocks(),
                        expected.blocks()
                    )
                }))
            })())
        })
        .collect();
    let mut report = SuiteReport::new("congruence-extension");
    report.record(outcomes);
    Ok(report)
}

/// Sorted selections of `1..=max_pairs` catalog entries, repetition allowed.
fn multisets(n: usize, max_pairs: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_pairs {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().copied().unwrap_or(0);
            for i in start..n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// For every root with at most `max_root` points and every selection of at
/// most `max_pairs` one-point extensions of its substructures: every
/// reordering of the pairs gives a sum isomorphic over the root and legs,
/// and semilattice sums match their subset representation.
pub fn free_sum_coherence_suite(class: StructureClass, max_root: usize, max_pairs: usize, grid: &[Rational]) -> Result<SuiteReport> {
    let mut items = Vec::new();
    for root in structures_with_empty(class, max_root, grid) {
        let params = CatalogParams::with_grid(root.len(), grid.to_vec());
        let catalog = enumerate_extensions(Arc::new(root), &params)?;
        for sel in multisets(catalog.len(), max_pairs) {
            let pairs: Vec<AmalgamPair> = sel.iter().map(|&i| catalog.entries()[i].clone()).collect();
            items.push((catalog.root().clone(), pairs));
        }
    }
    let outcomes: Vec<Outcome> = items
        .into_par_iter()
        .map(|(root, pairs)| {
            outcome((|| {
                let ma = RootedMultiAmalgam::new(root, pairs)?;
                let sum = free_sum(&ma)?;
                if !sum.object().validate()?.is_pass() {
                    return Ok(Some(format!("free sum over {:?} fails validation", ma.pairs())));
                }
                for order in permutations(ma.len()).into_iter().skip(1) {
                    let other = free_sum(&ma.permuted(&order)?)?;
                    if permutation_isomorphism(&sum, &other, &order).is_none() {
                        return Ok(Some(format!("pairs {:?} reordered by {order:?} give a different sum", ma.pairs())));
                    }
                }
                if class == StructureClass::Semilattice {
                    let rep = semilattice_subset_representation(&ma)?;
                    if representation_isomorphism(&sum, &rep).is_none() {
                        return Ok(Some(format!("pairs {:?}: subset representation differs", ma.pairs())));
                    }
                }
                Ok(None)
            })())
        })
        .collect();
    let mut report = SuiteReport::new(&format!("free-sum-coherence/{class}"));
    report.record(outcomes);
    Ok(report)
}

/// Composition law over every ordered pair of endomorphisms of `root`,
/// followed by a second report on the identity law, restriction to the
/// base and injectivity of `φ ↦ φ̂`.
pub fn functoriality_suite(root: Arc<FiniteStructure>, params: &CatalogParams, ceiling: usize) -> Result<Vec<SuiteReport>> {
    let catalog = enumerate_extensions(root.clone(), params)?;
    let entries = catalog.len();
    let star = Star::new(catalog, ceiling)?;
    let endos = all_endomorphisms(&root, HomSearchLimit::default())?;
    let summary = check_all_pairs(&endos, &star)?;
    let mut pairs = SuiteReport::new(&format!("functoriality/{}", root.class()));
    pairs.checked = summary.pairs;
    pairs.passed = summary.pairs_passed;
    if let Some(f) = &summary.first_failure {
        pairs.failures.push(format!(
            "φ = {:?}, φ′ = {:?}: at {} lift(φ′φ) gives {}, lift(φ′)∘lift(φ) gives {}",
            f.first, f.second, f.difference.point, f.difference.lift_of_composite, f.difference.composite_of_lifts
        ));
    }
    pairs.notes.push(format!(
        "{} endomorphisms, {} catalog entries, A★ {}",
        summary.endomorphisms,
        entries,
        match star.sum() {
            Some(s) => format!("materialized with {} elements", s.object().len()),
            None => "checked on its generating set (too large to materialize)".to_string(),
        }
    ));
    let mut laws = SuiteReport::new(&format!("lifting-laws/{}", root.class()));
    laws.record([
        (summary.identity_lifts_to_identity, "lift(1) ≠ 1"),
        (summary.restricts_to_base, "some lift does not restrict to its base map"),
        (summary.injective, "φ ↦ φ̂ is not injective"),
    ]
    .into_iter()
    .map(|(ok, law)| if ok { Outcome::Pass } else { Outcome::Fail(law.to_string()) }));
    Ok(vec![pairs, laws])
}

/// `T₂` through the Cayley representation on a root of size 4.
pub fn cayley_suite(root: CayleyRoot, params: &CatalogParams, ceiling: usize) -> Result<SuiteReport> {
    let t2 = Semigroup::full_transformation_monoid(2)?;
    let demo = cayley_demo(&t2, root, t2.len(), params, ceiling)?;
    let mut report = SuiteReport::new(&format!("cayley/{}", root.class()));
    report.record(demo.products.iter().map(|p| {
        if p.holds {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("λ̂({})∘λ̂({}) ≠ λ̂({})", p.left, p.right, p.product))
        }
    }));
    report.checked += 1;
    if demo.injective {
        report.passed += 1;
    } else {
        report.failures.push("semigroup → End(A★) is not injective".into());
    }
    Ok(report)
}

/// Weak homogeneity of a chain within its catalog parameters.
pub fn homogeneity_suite(chain: &StageChain) -> Result<SuiteReport> {
    let r = check_weak_homogeneity(chain, HomogeneityBounds::for_chain(chain))?;
    let mut report = SuiteReport::new(&format!("homogeneity/{}", chain.stage(0).class()));
    for s in &r.stages {
        report.checked += s.extensions;
        report.passed += s.realized;
    }
    if let Some(c) = &r.counterexample {
        report
            .failures
            .push(format!("stage {}: extension {:?} of {:?} is not realized", c.stage, c.code, c.base));
    }
    report.notes.extend(r.note);
    Ok(report)
}

/// Extension property for every disjoint `U, V ⊆ F₀` with `|U ∪ V| ≤ 2`.
pub fn extension_property_suite(chain: &StageChain) -> Result<SuiteReport> {
    let n = chain.stage(0).len();
    let mut cases: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    // each vertex goes to U, V, or neither
    for code in 0..3usize.pow(n as u32) {
        let (mut u, mut v) = (Vec::new(), Vec::new());
        let mut c = code;
        for a in 0..n {
            match c % 3 {
                1 => u.push(a),
                2 => v.push(a),
                _ => {}
            }
            c /= 3;
        }
        if u.len() + v.len() <= 2 {
            cases.push((u, v));
        }
    }
    let mut report = SuiteReport::new("extension-property");
    let outcomes: Vec<Outcome> = cases
        .iter()
        .map(|(u, v)| {
            outcome(check_graph_extension_property(chain, 0, u, v).map(|w| {
                w.witness
                    .is_none()
                    .then(|| format!("no vertex adjacent to {:?} and not to {:?}", w.adjacent_to, w.not_adjacent_to))
            }))
        })
        .collect();
    report.record(outcomes);
    Ok(report)
}

/// Axioms of every stage of a chain, and that each inclusion is an embedding.
pub fn axioms_suite(chain: &StageChain) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("axioms");
    let mut outcomes = Vec::new();
    for (n, s) in chain.stages().iter().enumerate() {
        outcomes.push(match s.validate()? {
            ValidationReport::Pass => Outcome::Pass,
            ValidationReport::Fail { violation } => Outcome::Fail(format!("stage {n}: {violation}")),
        });
    }
    for (n, inc) in chain.inclusions().iter().enumerate() {
        outcomes.push(if inc.kind().is_embedding() {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("F{n} → F{} is {}", n + 1, inc.kind()))
        });
    }
    report.record(outcomes);
    Ok(report)
}

/// Builds a chain, refusing rather than truncating at the ceiling.
pub fn chain_for(root: Arc<FiniteStructure>, k: usize, params: &CatalogParams, ceiling: usize) -> Result<StageChain> {
    build_stages_within(root, k, params, ceiling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::edgeless;

    #[test]
    fn permutations_and_multisets() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[0], vec![0, 1, 2]);
        // 3 items, up to 2 picks with repetition: 3 + 6
        assert_eq!(multisets(3, 2).len(), 9);
    }

    #[test]
    fn small_oracle_runs_pass() {
        let r = pushout_oracle_suite(StructureClass::Graph, 2, 2, &[]).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.checked > 0);
    }

    #[test]
    fn congruence_extension_up_to_three() {
        let r = congruence_extension_suite(3).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn extension_property_on_edgeless_pair() {
        let chain = chain_for(Arc::new(edgeless(2).unwrap()), 1, &CatalogParams::new(2), 5000).unwrap();
        let r = extension_property_suite(&chain).unwrap();
        // U, V ⊆ {a, b} disjoint: 1 + 4 + 4 cases
        assert_eq!(r.checked, 9);
        assert!(r.passed());
        assert!(axioms_suite(&chain).unwrap().passed());
    }
}
