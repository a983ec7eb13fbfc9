//! One-point extension catalogs, the star construction and bounded chains
//! of Fraïssé stages `F₀ ⊆ F₁ ⊆ … ⊆ F_k`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amalgam::{free_sum_within, AmalgamPair, FreeSum, RootedMultiAmalgam};
use crate::error::{Error, Result};
use crate::extension::{enumerate_codes, find_generator, realize, ExtensionCode};
use crate::morphism::{classify_map, extend_by_meets, Morphism};
use crate::rational::Rational;
use crate::structure::{FiniteStructure, StructureClass};

/// Default stage ceiling in carrier elements.
pub const DEFAULT_CEILING: usize = 5000;

/// Environment variable overriding [`DEFAULT_CEILING`].
pub const CEILING_ENV: &str = "FORGE_MAX_CARRIER";

/// The ceiling from `FORGE_MAX_CARRIER`, or the default.
pub fn stage_ceiling() -> Result<usize> {
    match std::env::var(CEILING_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{CEILING_ENV} must be a carrier size, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CEILING),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogParams {
    pub max_base_size: usize,
    /// Candidate distances for metric extensions; ignored by other classes.
    #[serde(default)]
    pub metric_distance_grid: Vec<Rational>,
}

impl CatalogParams {
    pub fn new(max_base_size: usize) -> Self {
        CatalogParams {
            max_base_size,
            metric_distance_grid: Vec::new(),
        }
    }

    pub fn with_grid(max_base_size: usize, grid: Vec<Rational>) -> Self {
        CatalogParams {
            max_base_size,
            metric_distance_grid: grid,
        }
    }

    fn check(&self, class: StructureClass) -> Result<()> {
        if class == StructureClass::Metric {
            if self.metric_distance_grid.is_empty() {
                return Err(Error::EmptyGrid);
            }
            if let Some(g) = self.metric_distance_grid.iter().find(|g| !g.is_positive()) {
                return Err(Error::Precondition(format!("grid distance {g} is not positive")));
            }
        }
        Ok(())
    }
}

/// One extension type per base: every admissible `(B, code)` with `B ⊆ A`
/// within the parameters, in canonical order (bases by size, then
/// lexicographically; codes in [`enumerate_codes`] order).
#[derive(Clone, Debug)]
pub struct Catalog {
    amalgam: RootedMultiAmalgam,
    params: CatalogParams,
    index: HashMap<(Vec<usize>, ExtensionCode), usize>,
}

impl Catalog {
    pub fn root(&self) -> &Arc<FiniteStructure> {
        self.amalgam.root()
    }

    pub fn entries(&self) -> &[AmalgamPair] {
        self.amalgam.pairs()
    }

    pub fn len(&self) -> usize {
        self.amalgam.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amalgam.is_empty()
    }

    pub fn params(&self) -> &CatalogParams {
        &self.params
    }

    /// `Cᵢ` with its base at positions `0..|Bᵢ|`.
    pub fn extension(&self, i: usize) -> &Arc<FiniteStructure> {
        self.amalgam.component(i)
    }

    /// The rooted multi-amalgam `(A, (Bᵢ, Cᵢ))` over the whole catalog.
    pub fn amalgam(&self) -> &RootedMultiAmalgam {
        &self.amalgam
    }

    pub fn lookup(&self, base: &[usize], code: &ExtensionCode) -> Option<usize> {
        self.index.get(&(base.to_vec(), code.clone())).copied()
    }

    pub fn bases(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for e in self.entries() {
            if out.last() != Some(&e.base) {
                out.push(e.base.clone());
            }
        }
        out
    }
}

impl Serialize for Catalog {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Catalog", 3)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("size", &self.len())?;
        st.serialize_field("entries", self.entries())?;
        st.end()
    }
}

/// Substructure carriers of `s` of size at most `max`, by size then
/// lexicographically. The empty set is included where the class allows
/// it, except for metric spaces: an extension over `∅` has no distance to
/// anything and cannot be amalgamated.
pub fn substructure_bases(s: &FiniteStructure, max: usize) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut out = Vec::new();
    let with_empty = s.class().allows_empty();
    for k in 0..=max.min(n) {
        if k == 0 && !with_empty {
            continue;
        }
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            if s.is_meet_closed(&comb) {
                out.push(comb.clone());
            }
            // next k-combination of 0..n
            let Some(i) = (0..k).rev().find(|&i| comb[i] < n - k + i) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    out
}

pub fn enumerate_extensions(root: Arc<FiniteStructure>, params: &CatalogParams) -> Result<Catalog> {
    enumerate_extensions_named(root, params, "x")
}

/// As [`enumerate_extensions`], naming the new point of entry `i`
/// `{prefix}{i}`.
pub fn enumerate_extensions_named(root: Arc<FiniteStructure>, params: &CatalogParams, prefix: &str) -> Result<Catalog> {
    params.check(root.class())?;
    if let crate::structure::ValidationReport::Fail { violation } = root.validate()? {
        return Err(Error::Invalid(violation));
    }
    let bases = substructure_bases(&root, params.max_base_size);
    let per_base: Vec<Vec<AmalgamPair>> = bases
        .par_iter()
        .map(|base| {
            let b = root.induced_substructure(base)?;
            Ok(enumerate_codes(&b, &params.metric_distance_grid)?
                .into_iter()
                .map(|code| AmalgamPair {
                    base: base.clone(),
                    code,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<AmalgamPair> = per_base.into_iter().flatten().collect();
    let mut index = HashMap::with_capacity(pairs.len());
    for (i, p) in pairs.iter().enumerate() {
        if index.insert((p.base.clone(), p.code.clone()), i).is_some() {
            return Err(Error::Internal(format!("duplicate catalog entry {p:?}")));
        }
    }
    let amalgam = RootedMultiAmalgam::with_prefix(root, pairs, prefix)?;
    Ok(Catalog {
        amalgam,
        params: params.clone(),
        index,
    })
}

/// `A★`, the free sum over the whole catalog.
pub fn build_star(catalog: &Catalog) -> Result<FreeSum> {
    build_star_within(catalog, stage_ceiling()?)
}

pub fn build_star_within(catalog: &Catalog, ceiling: usize) -> Result<FreeSum> {
    free_sum_within(catalog.amalgam(), ceiling)
}

#[derive(Clone, Debug)]
pub struct StageChain {
    stages: Vec<Arc<FiniteStructure>>,
    /// `Fₙ ↪ Fₙ₊₁`.
    inclusions: Vec<Morphism>,
    catalogs: Vec<Catalog>,
    sums: Vec<FreeSum>,
    params: CatalogParams,
    ceiling: usize,
}

impl StageChain {
    pub fn stages(&self) -> &[Arc<FiniteStructure>] {
        &self.stages
    }

    pub fn stage(&self, n: usize) -> &Arc<FiniteStructure> {
        &self.stages[n]
    }

    /// Number of steps `k`; the chain has `k + 1` stages.
    pub fn steps(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn inclusions(&self) -> &[Morphism] {
        &self.inclusions
    }

    /// Catalog over `Fₙ` used to build `Fₙ₊₁`; empty for chains read from
    /// disk.
    pub fn catalogs(&self) -> &[Catalog] {
        &self.catalogs
    }

    /// `Fₙ₊₁` as the free sum over the catalog of `Fₙ`.
    pub fn sums(&self) -> &[FreeSum] {
        &self.sums
    }

    pub fn params(&self) -> &CatalogParams {
        &self.params
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    /// The composite inclusion `Fₘ ↪ Fₙ` for `m ≤ n`.
    pub fn inclusion_between(&self, m: usize, n: usize) -> Result<Morphism> {
        if m > n || n > self.steps() {
            return Err(Error::Precondition(format!("no inclusion F{m} → F{n} in a chain of {} steps", self.steps())));
        }
        let mut inc = Morphism::identity(self.stages[m].clone());
        for step in &self.inclusions[m..n] {
            inc = inc.then(step)?;
        }
        Ok(inc)
    }

    /// The same chain with element `element` removed from its last stage.
    /// Used to exercise the homogeneity checker on a broken chain.
    pub fn without_element(&self, element: usize) -> Result<StageChain> {
        let k = self.steps();
        if k == 0 {
            return Err(Error::Precondition("the root of a chain cannot be altered".into()));
        }
        let last = &self.stages[k];
        let inc = &self.inclusions[k - 1];
        if element >= last.len() || inc.map().contains(&element) {
            return Err(Error::Precondition(format!(
                "element {element} is not a new element of stage {k}"
            )));
        }
        let keep: Vec<usize> = (0..last.len()).filter(|&i| i != element).collect();
        let smaller = Arc::new(last.induced_substructure(&keep)?);
        let map = inc.map().iter().map(|&v| if v > element { v - 1 } else { v }).collect();
        let mut chain = self.clone();
        chain.inclusions[k - 1] = Morphism::new(self.stages[k - 1].clone(), smaller.clone(), map)?;
        chain.stages[k] = smaller;
        Ok(chain)
    }
}

impl StageChain {
    /// A chain read back from stage documents. Each stage must contain the
    /// previous one under the same element names, as an induced
    /// substructure. Catalogs and sums are not recovered.
    pub fn from_stages(stages: Vec<Arc<FiniteStructure>>, params: CatalogParams) -> Result<StageChain> {
        let Some(first) = stages.first() else {
            return Err(Error::Precondition("a chain needs at least one stage".into()));
        };
        let class = first.class();
        let mut inclusions = Vec::with_capacity(stages.len() - 1);
        for (n, w) in stages.windows(2).enumerate() {
            if w[1].class() != class {
                return Err(Error::ClassMismatch { expected: class, found: w[1].class() });
            }
            let map = w[0]
                .carrier()
                .iter()
                .map(|name| {
                    w[1].index_of(name).ok_or_else(|| {
                        Error::Precondition(format!("element {name} of stage {n} is missing from stage {}", n + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let inc = Morphism::new(w[0].clone(), w[1].clone(), map)?;
            if !inc.kind().is_embedding() {
                return Err(Error::Precondition(format!("stage {n} is not a substructure of stage {}", n + 1)));
            }
            inclusions.push(inc);
        }
        let ceiling = stages.iter().map(|s| s.len()).max().unwrap_or(0);
        Ok(StageChain {
            stages,
            inclusions,
            catalogs: Vec::new(),
            sums: Vec::new(),
            params,
            ceiling,
        })
    }
}

pub fn build_stages(root: Arc<FiniteStructure>, k: usize, params: &CatalogParams) -> Result<StageChain> {
    build_stages_within(root, k, params, stage_ceiling()?)
}

/// Builds `F₀ = root` and `Fₙ₊₁ = Fₙ★`. New elements of stage `n` are
/// named `s{n}x{i}`. Refuses with the stage reached once a stage would
/// exceed `ceiling` elements.
pub fn build_stages_within(root: Arc<FiniteStructure>, k: usize, params: &CatalogParams, ceiling: usize) -> Result<StageChain> {
    params.check(root.class())?;
    if root.len() > ceiling {
        return Err(Error::CeilingExceeded {
            stage: 0,
            size: root.len(),
            ceiling,
        });
    }
    let mut chain = StageChain {
        stages: vec![root],
        inclusions: Vec::new(),
        catalogs: Vec::new(),
        sums: Vec::new(),
        params: params.clone(),
        ceiling,
    };
    for n in 1..=k {
        let prev = chain.stages[n - 1].clone();
        let catalog = enumerate_extensions_named(prev, params, &format!("s{n}x"))?;
        let sum = free_sum_within(catalog.amalgam(), ceiling).map_err(|e| match e {
            Error::CeilingExceeded { size, ceiling, .. } => Error::CeilingExceeded { stage: n, size, ceiling },
            other => other,
        })?;
        chain.stages.push(sum.object().clone());
        chain.inclusions.push(sum.root_embedding().clone());
        chain.catalogs.push(catalog);
        chain.sums.push(sum);
    }
    Ok(chain)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneityBounds {
    pub max_base_size: usize,
    /// Largest number of `(B, C)` pairs examined per stage.
    pub max_checks: usize,
}

impl HomogeneityBounds {
    pub fn for_chain(chain: &StageChain) -> Self {
        HomogeneityBounds {
            max_base_size: chain.params().max_base_size,
            max_checks: 1 << 20,
        }
    }
}

/// A `(B, C)` with no embedding `C → Fₙ₊₁` over `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub stage: usize,
    pub base: Vec<String>,
    pub code: ExtensionCode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCoverage {
    pub stage: usize,
    pub bases: usize,
    pub extensions: usize,
    pub realized: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub stages: Vec<StageCoverage>,
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl HomogeneityReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// For every stage `n < k`, every substructure `B ⊆ Fₙ` within bounds and
/// every admissible one-point extension `C` of `B`, searches `Fₙ₊₁` for an
/// embedding `C → Fₙ₊₁` that is the identity on `B`. The search looks at
/// `Fₙ₊₁` directly and does not consult the catalog's free-sum legs.
pub fn check_weak_homogeneity(chain: &StageChain, bounds: HomogeneityBounds) -> Result<HomogeneityReport> {
    let grid = &chain.params().metric_distance_grid;
    let mut stages = Vec::new();
    let mut counterexample = None;
    for n in 0..chain.steps() {
        let small = chain.stage(n);
        let big = chain.stage(n + 1);
        let inc = &chain.inclusions()[n];
        let bases = substructure_bases(small, bounds.max_base_size);
        let mut jobs: Vec<(Vec<usize>, ExtensionCode, Arc<FiniteStructure>)> = Vec::new();
        for base in &bases {
            let b = small.induced_substructure(base)?;
            for code in enumerate_codes(&b, grid)? {
                if jobs.len() == bounds.max_checks {
                    return Err(Error::BoundExceeded {
                        candidates: jobs.len() as u128 + 1,
                        limit: bounds.max_checks as u128,
                    });
                }
                let c = Arc::new(realize(&b, &code, "x")?);
                jobs.push((base.clone(), code, c));
            }
        }
        let found: Vec<bool> = jobs
            .par_iter()
            .map(|(base, _, c)| {
                let images: Vec<usize> = base.iter().map(|&b| inc.apply(b)).collect();
                embeds_over(c, big, &images).map(|w| w.is_some())
            })
            .collect::<Result<_>>()?;
        let realized = found.iter().filter(|&&f| f).count();
        if counterexample.is_none() {
            if let Some(miss) = found.iter().position(|&f| !f) {
                let (base, code, _) = &jobs[miss];
                counterexample = Some(Counterexample {
                    stage: n,
                    base: base.iter().map(|&b| small.name(b).to_string()).collect(),
                    code: code.clone(),
                });
            }
        }
        stages.push(StageCoverage {
            stage: n,
            bases: bases.len(),
            extensions: jobs.len(),
            realized,
        });
    }
    let note = (chain.stage(0).class() == StructureClass::Metric).then(|| {
        "metric extensions are drawn from the distance grid; homogeneity is checked relative to that grid".to_string()
    });
    Ok(HomogeneityReport {
        stages,
        counterexample,
        note,
    })
}

/// An embedding `c → target` sending base position `w` to `images[w]`,
/// found by trying every target element as the image of the generator.
pub fn embeds_over(c: &FiniteStructure, target: &FiniteStructure, images: &[usize]) -> Result<Option<Vec<usize>>> {
    let m = images.len();
    let base_pos: Vec<usize> = (0..m).collect();
    let x = find_generator(c, &base_pos)?;
    for y in 0..target.len() {
        if images.contains(&y) {
            continue;
        }
        let mut partial = vec![None; c.len()];
        for (w, &v) in images.iter().enumerate() {
            partial[w] = Some(v);
        }
        partial[x] = Some(y);
        let Some(map) = extend_by_meets(c, target, &partial) else {
            continue;
        };
        if classify_map(c, target, &map)?.is_embedding() {
            return Ok(Some(map));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub stage: usize,
    pub adjacent_to: Vec<String>,
    pub not_adjacent_to: Vec<String>,
    /// A vertex of `Fₙ₊₁` outside `U ∪ V` adjacent to all of `U` and none
    /// of `V`.
    pub witness: Option<String>,
}

/// The random-graph extension property for disjoint `U, V ⊆ Fₙ`, searched
/// in `Fₙ₊₁`.
pub fn check_graph_extension_property(chain: &StageChain, n: usize, u: &[usize], v: &[usize]) -> Result<ExtensionWitness> {
    let small = chain.stage(0);
    if small.class() != StructureClass::Graph {
        return Err(Error::ClassMismatch {
            expected: StructureClass::Graph,
            found: small.class(),
        });
    }
    if n >= chain.steps() {
        return Err(Error::Precondition(format!("stage {n} has no successor in a chain of {} steps", chain.steps())));
    }
    let fn_ = chain.stage(n);
    if let Some(&bad) = u.iter().chain(v).find(|&&a| a >= fn_.len()) {
        return Err(Error::Precondition(format!("vertex {bad} is outside stage {n}")));
    }
    if let Some(&both) = u.iter().find(|a| v.contains(a)) {
        return Err(Error::Precondition(format!("U and V must be disjoint; both contain {}", fn_.name(both))));
    }
    let inc = &chain.inclusions()[n];
    let big = chain.stage(n + 1);
    let iu: Vec<usize> = u.iter().map(|&a| inc.apply(a)).collect();
    let iv: Vec<usize> = v.iter().map(|&a| inc.apply(a)).collect();
    let witness = (0..big.len())
        .find(|&w| {
            !iu.contains(&w)
                && !iv.contains(&w)
                && iu.iter().all(|&a| big.adjacent(w, a))
                && iv.iter().all(|&b| !big.adjacent(w, b))
        })
        .map(|w| big.name(w).to_string());
    let names = |s: &[usize]| s.iter().map(|&a| fn_.name(a).to_string()).collect();
    Ok(ExtensionWitness {
        stage: n,
        adjacent_to: names(u),
        not_adjacent_to: names(v),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{antichain, edgeless, free_semilattice, simplex};

    fn arc(s: FiniteStructure) -> Arc<FiniteStructure> {
        Arc::new(s)
    }

    #[test]
    fn edgeless_pair_catalog() {
        let cat = enumerate_extensions(arc(edgeless(2).unwrap()), &CatalogParams::new(2)).unwrap();
        assert_eq!(cat.bases(), vec![vec![], vec![0], vec![1], vec![0, 1]]);
        let over_pair = cat.entries().iter().filter(|e| e.base == [0, 1]).count();
        assert_eq!(over_pair, 4);
        assert_eq!(cat.len(), 1 + 2 + 2 + 4);
    }

    #[test]
    fn antichain_pair_has_seven_codes_over_the_whole_root() {
        let cat = enumerate_extensions(arc(antichain(2).unwrap()), &CatalogParams::new(2)).unwrap();
        let over_pair: Vec<_> = cat.entries().iter().filter(|e| e.base == [0, 1]).collect();
        assert_eq!(over_pair.len(), 7);
        for e in over_pair {
            let ExtensionCode::Poset { below, above } = &e.code else { unreachable!() };
            assert!(below.is_empty() || above.is_empty());
        }
    }

    #[test]
    fn metric_singleton_over_two_distances() {
        let root = arc(simplex(1, Rational::ONE).unwrap());
        let params = CatalogParams::with_grid(1, vec![Rational::integer(1), Rational::integer(2)]);
        assert_eq!(enumerate_extensions(root.clone(), &params).unwrap().len(), 2);
        assert!(matches!(
            enumerate_extensions(root, &CatalogParams::new(1)),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn semilattice_bases_are_meet_closed_and_non_empty() {
        let s = free_semilattice(2).unwrap();
        let bases = substructure_bases(&s, 2);
        assert!(bases.iter().all(|b| !b.is_empty() && s.is_meet_closed(b)));
        // {g0, g1} is not closed
        assert!(!bases.contains(&vec![0, 1]));
    }

    #[test]
    fn star_over_one_vertex() {
        let root = arc(FiniteStructure::graph(vec!["v".into()], &[]).unwrap());
        let params = CatalogParams::new(1);
        let cat = enumerate_extensions(root.clone(), &params).unwrap();
        // over ∅, and over {v} with N = ∅ or N = {v}
        assert_eq!(cat.len(), 3);
        let star = build_star(&cat).unwrap();
        let g = star.object();
        assert_eq!(g.len(), 4);
        let edges: usize = (0..4).map(|i| (i + 1..4).filter(|&j| g.adjacent(i, j)).count()).sum();
        assert_eq!(edges, 1);
        let empty = enumerate_extensions(root, &CatalogParams::new(0)).unwrap();
        assert_eq!(build_star(&empty).unwrap().object().len(), 2);
    }

    #[test]
    fn chain_of_length_zero_is_the_root() {
        let root = arc(edgeless(2).unwrap());
        let chain = build_stages(root.clone(), 0, &CatalogParams::new(2)).unwrap();
        assert_eq!(chain.stages().len(), 1);
        assert_eq!(chain.stage(0), &root);
    }

    #[test]
    fn first_stage_adds_one_vertex_per_entry() {
        let chain = build_stages(arc(edgeless(2).unwrap()), 1, &CatalogParams::new(2)).unwrap();
        assert_eq!(chain.stage(1).len(), 2 + chain.catalogs()[0].len());
        assert!(chain.inclusions()[0].kind().is_embedding());
    }

    #[test]
    fn ceiling_refusal_names_the_stage() {
        let err = build_stages_within(arc(edgeless(2).unwrap()), 2, &CatalogParams::new(2), 50).unwrap_err();
        assert!(matches!(err, Error::CeilingExceeded { stage: 2, .. }), "{err}");
    }

    #[test]
    fn graph_stages_are_weakly_homogeneous() {
        let chain = build_stages(arc(edgeless(2).unwrap()), 2, &CatalogParams::new(2)).unwrap();
        let report = check_weak_homogeneity(&chain, HomogeneityBounds::for_chain(&chain)).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.stages.len(), 2);
        assert!(chain.inclusion_between(0, 2).unwrap().kind().is_embedding());
    }

    #[test]
    fn semilattice_stage_is_weakly_homogeneous() {
        let root = arc(crate::presets::chain_semilattice(2).unwrap());
        let chain = build_stages(root, 1, &CatalogParams::new(1)).unwrap();
        let report = check_weak_homogeneity(&chain, HomogeneityBounds::for_chain(&chain)).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn deleting_a_stage_vertex_is_reported() {
        let chain = build_stages(arc(edgeless(2).unwrap()), 1, &CatalogParams::new(2)).unwrap();
        let broken = chain.without_element(chain.stage(1).len() - 1).unwrap();
        let report = check_weak_homogeneity(&broken, HomogeneityBounds::for_chain(&broken)).unwrap();
        let miss = report.counterexample.expect("the deleted vertex realized a unique extension");
        assert_eq!(miss.base, vec!["v0", "v1"]);
        assert_eq!(miss.code, ExtensionCode::Graph { neighbors: vec![0, 1] });
        assert!(chain.without_element(0).is_err());
    }

    #[test]
    fn extension_property_examples() {
        let chain = build_stages(arc(edgeless(2).unwrap()), 1, &CatalogParams::new(2)).unwrap();
        let w = check_graph_extension_property(&chain, 0, &[], &[]).unwrap();
        assert!(w.witness.is_some());
        let w = check_graph_extension_property(&chain, 0, &[0], &[1]).unwrap();
        let name = w.witness.unwrap();
        let big = chain.stage(1);
        let x = big.index_of(&name).unwrap();
        assert!(big.adjacent(x, 0) && !big.adjacent(x, 1));
        assert!(matches!(
            check_graph_extension_property(&chain, 0, &[0], &[0]),
            Err(Error::Precondition(_))
        ));
    }
}
