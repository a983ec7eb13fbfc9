//! Lifting endomorphisms of a root `A` to its star `A★`, and Cayley
//! representations of finite semigroups through the lift.
//!
//! `A★` is generated by `A` together with the new elements of every catalog
//! extension, and these generators are pairwise distinct in `A★`. A lifted
//! endomorphism is therefore recorded on the generators as a table of
//! [`ElementRef`]s. When the free sum is small enough to build, the lift is
//! also materialized as a [`Morphism`] of `A★` and checked directly.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::amalgam::{free_sum_within, FreeSum};
use crate::error::{Error, Result};
use crate::extension::{code_of, find_generator};
use crate::limits::{enumerate_extensions, Catalog, CatalogParams, StageChain};
use crate::morphism::{extend_by_meets, is_homomorphism, isomorphisms, HomSearchLimit, Morphism};
use crate::presets::{antichain, edgeless, free_semilattice, simplex};
use crate::pushout::{pushout_1phep, Span};
use crate::rational::Rational;
use crate::structure::{FiniteStructure, StructureClass};

/// A generator of `A★`: a root element, or a new element of catalog
/// extension `entry` at `position` in `C_entry` (never a base position).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementRef {
    Root(usize),
    New { entry: usize, position: usize },
}

/// The catalog of `A` together with `A★` when it fits under the ceiling.
#[derive(Clone, Debug)]
pub struct Star {
    catalog: Catalog,
    sum: Option<FreeSum>,
    generators: Vec<ElementRef>,
}

impl Star {
    /// Builds `A★` if its size bound is at most `ceiling`.
    pub fn new(catalog: Catalog, ceiling: usize) -> Result<Self> {
        let sum = if size_bound(&catalog) <= ceiling as u128 {
            Some(free_sum_within(catalog.amalgam(), ceiling)?)
        } else {
            None
        };
        Ok(Self::assemble(catalog, sum))
    }

    /// A star whose free sum is already built, e.g. one step of a chain.
    pub fn with_sum(catalog: Catalog, sum: FreeSum) -> Self {
        Self::assemble(catalog, Some(sum))
    }

    fn assemble(catalog: Catalog, sum: Option<FreeSum>) -> Self {
        let mut generators: Vec<ElementRef> = (0..catalog.root().len()).map(ElementRef::Root).collect();
        for (i, e) in catalog.entries().iter().enumerate() {
            let c = catalog.extension(i);
            generators.extend((e.base.len()..c.len()).map(|p| ElementRef::New { entry: i, position: p }));
        }
        Star { catalog, sum, generators }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn root(&self) -> &Arc<FiniteStructure> {
        self.catalog.root()
    }

    pub fn sum(&self) -> Option<&FreeSum> {
        self.sum.as_ref()
    }

    /// Root elements followed by the new elements of each extension.
    pub fn generators(&self) -> &[ElementRef] {
        &self.generators
    }

    pub fn name(&self, r: ElementRef) -> &str {
        match r {
            ElementRef::Root(a) => self.root().name(a),
            ElementRef::New { entry, position } => self.catalog.extension(entry).name(position),
        }
    }

    /// Position of a generator in the materialized `A★`.
    pub fn position(&self, r: ElementRef) -> Option<usize> {
        let sum = self.sum.as_ref()?;
        Some(match r {
            ElementRef::Root(a) => sum.root_embedding().apply(a),
            ElementRef::New { entry, position } => sum.leg_embeddings()[entry].apply(position),
        })
    }
}

/// Upper bound on `|A★|`: relational sums add one point per entry; a
/// semilattice sum element is a meet of at most one element from `A` and
/// from each `Cᵢ ∖ Bᵢ`.
pub fn size_bound(catalog: &Catalog) -> u128 {
    let a = catalog.root().len() as u128;
    if catalog.root().class() != StructureClass::Semilattice {
        return a + catalog.len() as u128;
    }
    let mut bound = a + 1;
    for (i, e) in catalog.entries().iter().enumerate() {
        let new = (catalog.extension(i).len() - e.base.len()) as u128;
        bound = bound.saturating_mul(new + 1);
    }
    bound - 1
}

/// The data attached to catalog entry `i` by a lift of `φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftComponent {
    pub entry: usize,
    /// `Bⱼ = φ(Bᵢ)` as sorted root positions.
    pub image_base: Vec<usize>,
    /// Catalog index of `C′ᵢ ≅ Cⱼ`; `None` when `C′ᵢ = Bⱼ`.
    pub target: Option<usize>,
    /// `ξᵢ: Cᵢ ↠ C′ᵢ` with `C′ᵢ` laid out as `Bⱼ` followed by new points.
    pub xi: Vec<usize>,
    /// `ιᵢ: C′ᵢ → Cⱼ`, the unique isomorphism over `Bⱼ`.
    pub iota: Option<Vec<usize>>,
    /// `ψᵢ = ιᵢ ξᵢ` on every position of `Cᵢ`, as generators of `A★`.
    pub psi: Vec<ElementRef>,
}

#[derive(Clone, Debug)]
pub struct LiftedEndomorphism {
    base_endo: Morphism,
    components: Vec<LiftComponent>,
    lifted: Option<Morphism>,
}

impl LiftedEndomorphism {
    pub fn base_endo(&self) -> &Morphism {
        &self.base_endo
    }

    pub fn components(&self) -> &[LiftComponent] {
        &self.components
    }

    /// `φ̂` on the materialized `A★`, if it was built.
    pub fn lifted(&self) -> Option<&Morphism> {
        self.lifted.as_ref()
    }

    /// `φ̂` on a generator of `A★`.
    pub fn apply(&self, r: ElementRef) -> ElementRef {
        match r {
            ElementRef::Root(a) => ElementRef::Root(self.base_endo.apply(a)),
            ElementRef::New { entry, position } => self.components[entry].psi[position],
        }
    }

    /// `φ̂` as a table over [`Star::generators`].
    pub fn generator_table(&self, star: &Star) -> Vec<ElementRef> {
        star.generators().iter().map(|&g| self.apply(g)).collect()
    }

    pub fn is_identity(&self, star: &Star) -> bool {
        star.generators().iter().all(|&g| self.apply(g) == g)
    }
}

impl Serialize for LiftedEndomorphism {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("LiftedEndomorphism", 3)?;
        st.serialize_field("base_map", self.base_endo.map())?;
        st.serialize_field("components", &self.components)?;
        st.serialize_field("lifted_map", &self.lifted.as_ref().map(|m| m.map()))?;
        st.end()
    }
}

fn require_endo(phi: &Morphism, root: &Arc<FiniteStructure>) -> Result<()> {
    let same = |s: &Arc<FiniteStructure>| Arc::ptr_eq(s, root) || s.as_ref() == root.as_ref();
    if !same(phi.source()) || !same(phi.target()) {
        return Err(Error::Precondition("map is not an endomorphism of the catalog root".into()));
    }
    if !phi.kind().is_hom() {
        return Err(Error::Precondition(format!("map is {}, not a homomorphism", phi.kind())));
    }
    Ok(())
}

/// `φ ↦ φ̂`. For each entry `(Bᵢ, Cᵢ)`: push `Cᵢ` out along
/// `φ|Bᵢ: Bᵢ ↠ Bⱼ`, identify the result with the catalog representative
/// over `Bⱼ` by its code, and take the unique isomorphism over `Bⱼ`.
pub fn lift(phi: &Morphism, star: &Star) -> Result<LiftedEndomorphism> {
    let catalog = star.catalog();
    let root = catalog.root();
    require_endo(phi, root)?;
    let components: Vec<LiftComponent> = (0..catalog.len())
        .into_par_iter()
        .map(|i| lift_component(phi, catalog, i))
        .collect::<Result<_>>()?;
    let mut lifted = LiftedEndomorphism {
        base_endo: phi.clone(),
        components,
        lifted: None,
    };
    if let Some(sum) = star.sum() {
        let object = sum.object();
        let mut partial = vec![None; object.len()];
        for &g in star.generators() {
            let (from, to) = (star.position(g), star.position(lifted.apply(g)));
            partial[from.expect("materialized")] = to;
        }
        let map = extend_by_meets(object, object, &partial)
            .ok_or_else(|| Error::Internal("lift does not extend along meets in A★".into()))?;
        let m = Morphism::new(object.clone(), object.clone(), map)?;
        if !m.kind().is_hom() {
            return Err(Error::Internal("lifted map fails the homomorphism check on A★".into()));
        }
        lifted.lifted = Some(m);
    }
    Ok(lifted)
}

fn lift_component(phi: &Morphism, catalog: &Catalog, i: usize) -> Result<LiftComponent> {
    let root = catalog.root();
    let entry = &catalog.entries()[i];
    let c = catalog.extension(i).clone();
    let m = entry.base.len();
    let mut image: Vec<usize> = entry.base.iter().map(|&b| phi.apply(b)).collect();
    image.sort_unstable();
    image.dedup();
    let b = Arc::new(root.induced_substructure(&entry.base)?);
    let bj = Arc::new(root.induced_substructure(&image)?);
    let restricted = entry
        .base
        .iter()
        .map(|&x| image.binary_search(&phi.apply(x)).expect("image is sorted"))
        .collect();
    let span = Span::new(Morphism::new(b.clone(), c.clone(), (0..m).collect())?, Morphism::new(b, bj, restricted)?)?;
    let sq = pushout_1phep(span)?;
    let p = sq.object();
    let k = image.len();
    if sq.right_leg().map() != (0..k).collect::<Vec<_>>().as_slice() {
        return Err(Error::Internal(format!("pushout of entry {i} does not keep Bⱼ in front")));
    }
    let xi = sq.left_leg().map().to_vec();
    let to_root = |q: usize| ElementRef::Root(image[q]);

    if p.len() == k {
        // C′ᵢ collapses into Bⱼ: the new point lands in the root
        let psi: Vec<ElementRef> = xi.iter().map(|&q| to_root(q)).collect();
        let into_root: Vec<usize> = xi.iter().map(|&q| image[q]).collect();
        if !is_homomorphism(&c, root, &into_root) {
            return Err(Error::Internal(format!("degenerate ψ of entry {i} is not a homomorphism")));
        }
        return Ok(LiftComponent {
            entry: i,
            image_base: image,
            target: None,
            xi,
            iota: None,
            psi,
        });
    }

    let base_pos: Vec<usize> = (0..k).collect();
    let x = find_generator(p, &base_pos)?;
    let code = code_of(p, &base_pos, x)?;
    let j = catalog.lookup(&image, &code).ok_or_else(|| {
        Error::CatalogMiss(format!(
            "image of entry {i} over base {:?} has code {code:?}, which the catalog does not contain",
            image
        ))
    })?;
    let cj = catalog.extension(j);
    let fixed: Vec<Option<usize>> = (0..p.len()).map(|q| (q < k).then_some(q)).collect();
    let isos = isomorphisms(p, cj, &fixed);
    let iota = match isos.as_slice() {
        [only] => only.clone(),
        [] => return Err(Error::Internal(format!("entry {i}: equal codes but no isomorphism over Bⱼ"))),
        [first, second, ..] => {
            return Err(Error::NonUniqueIsomorphism {
                component: i,
                first: first.clone(),
                second: second.clone(),
            })
        }
    };
    let psi_map: Vec<usize> = xi.iter().map(|&q| iota[q]).collect();
    if !is_homomorphism(&c, cj, &psi_map) {
        return Err(Error::Internal(format!("ψ of entry {i} is not a homomorphism")));
    }
    let psi = psi_map
        .iter()
        .map(|&q| if q < k { to_root(q) } else { ElementRef::New { entry: j, position: q } })
        .collect();
    Ok(LiftComponent {
        entry: i,
        image_base: image,
        target: Some(j),
        xi,
        iota: Some(iota),
        psi,
    })
}

/// Lifts `φ: F₀ → F₀` through every step of a chain: the lift at step `n`
/// is an endomorphism of `Fₙ₊₁` and is lifted again at step `n + 1`.
pub fn lift_through_chain(phi: &Morphism, chain: &StageChain) -> Result<Vec<LiftedEndomorphism>> {
    let mut out = Vec::with_capacity(chain.steps());
    let mut current = phi.clone();
    for n in 0..chain.steps() {
        let star = Star::with_sum(chain.catalogs()[n].clone(), chain.sums()[n].clone());
        let l = lift(&current, &star)?;
        current = l
            .lifted()
            .cloned()
            .ok_or_else(|| Error::Internal(format!("stage {} lift was not materialized", n + 1)))?;
        out.push(l);
    }
    Ok(out)
}

/// First generator on which two maps of `A★` differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Difference {
    pub point: String,
    pub lift_of_composite: String,
    pub composite_of_lifts: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorialityReport {
    pub points: usize,
    pub difference: Option<Difference>,
}

impl FunctorialityReport {
    pub fn passed(&self) -> bool {
        self.difference.is_none()
    }
}

/// Compares `lift(φ′φ)` with `lift(φ′) ∘ lift(φ)` on every generator of
/// `A★`, and on every element when `A★` is materialized. Two homomorphisms
/// out of `A★` that agree on its generators are equal.
pub fn compare_composite(
    star: &Star,
    first: &LiftedEndomorphism,
    second: &LiftedEndomorphism,
    composite: &LiftedEndomorphism,
) -> FunctorialityReport {
    for &g in star.generators() {
        let (lhs, rhs) = (composite.apply(g), second.apply(first.apply(g)));
        if lhs != rhs {
            return FunctorialityReport {
                points: star.generators().len(),
                difference: Some(Difference {
                    point: star.name(g).to_string(),
                    lift_of_composite: star.name(lhs).to_string(),
                    composite_of_lifts: star.name(rhs).to_string(),
                }),
            };
        }
    }
    if let (Some(sum), Some(a), Some(b), Some(c)) = (star.sum(), first.lifted(), second.lifted(), composite.lifted()) {
        let object = sum.object();
        for x in 0..object.len() {
            if c.apply(x) != b.apply(a.apply(x)) {
                return FunctorialityReport {
                    points: object.len(),
                    difference: Some(Difference {
                        point: object.name(x).to_string(),
                        lift_of_composite: object.name(c.apply(x)).to_string(),
                        composite_of_lifts: object.name(b.apply(a.apply(x))).to_string(),
                    }),
                };
            }
        }
    }
    FunctorialityReport {
        points: star.sum().map_or(star.generators().len(), |s| s.object().len()),
        difference: None,
    }
}

/// `lift(φ′ ∘ φ) = lift(φ′) ∘ lift(φ)`, where `φ` is applied first.
pub fn verify_functoriality(phi: &Morphism, phi_prime: &Morphism, star: &Star) -> Result<FunctorialityReport> {
    let composite = phi.then(phi_prime)?;
    let (a, b, c) = (lift(phi, star)?, lift(phi_prime, star)?, lift(&composite, star)?);
    Ok(compare_composite(star, &a, &b, &c))
}

/// All endomorphisms of `a`, in lexicographic order of their tables.
pub fn all_endomorphisms(a: &Arc<FiniteStructure>, limit: HomSearchLimit) -> Result<Vec<Morphism>> {
    crate::morphism::enumerate_homs(a, a, limit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairFailure {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub difference: Difference,
}

/// Outcome of checking the three laws over a family of endomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorialitySummary {
    pub endomorphisms: usize,
    pub pairs: usize,
    pub pairs_passed: usize,
    pub identity_lifts_to_identity: bool,
    pub restricts_to_base: bool,
    pub injective: bool,
    pub materialized: bool,
    pub first_failure: Option<PairFailure>,
}

impl FunctorialitySummary {
    pub fn passed(&self) -> bool {
        self.pairs_passed == self.pairs && self.identity_lifts_to_identity && self.restricts_to_base && self.injective
    }
}

/// Lifts every endomorphism once and checks, for every ordered pair, the
/// composition law; also the identity law and injectivity of `φ ↦ φ̂`.
pub fn check_all_pairs(endos: &[Morphism], star: &Star) -> Result<FunctorialitySummary> {
    let root = star.root();
    let lifts: Vec<LiftedEndomorphism> = endos.par_iter().map(|phi| lift(phi, star)).collect::<Result<_>>()?;
    let index: HashMap<&[usize], usize> = endos.iter().enumerate().map(|(i, e)| (e.map(), i)).collect();
    let pairs: Vec<(usize, usize)> = (0..endos.len()).flat_map(|i| (0..endos.len()).map(move |j| (i, j))).collect();
    let outcomes: Vec<Option<PairFailure>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let composite = endos[i].then(&endos[j])?;
            let fresh;
            let c = match index.get(composite.map()) {
                Some(&k) => &lifts[k],
                None => {
                    fresh = lift(&composite, star)?;
                    &fresh
                }
            };
            let report = compare_composite(star, &lifts[i], &lifts[j], c);
            Ok(report.difference.map(|difference| PairFailure {
                first: endos[i].map().to_vec(),
                second: endos[j].map().to_vec(),
                difference,
            }))
        })
        .collect::<Result<_>>()?;
    let pairs_passed = outcomes.iter().filter(|o| o.is_none()).count();
    let first_failure = outcomes.into_iter().flatten().next();
    let identity = lift(&Morphism::identity(root.clone()), star)?;
    let identity_ok = identity.is_identity(star) && identity.lifted().is_none_or(|m| m.map().iter().enumerate().all(|(x, &y)| x == y));
    let restricts = lifts.iter().zip(endos).all(|(l, e)| {
        (0..root.len()).all(|a| l.apply(ElementRef::Root(a)) == ElementRef::Root(e.apply(a)))
    });
    let mut tables: Vec<Vec<ElementRef>> = lifts.iter().map(|l| l.generator_table(star)).collect();
    tables.sort();
    tables.dedup();
    Ok(FunctorialitySummary {
        endomorphisms: endos.len(),
        pairs: pairs.len(),
        pairs_passed,
        identity_lifts_to_identity: identity_ok,
        restricts_to_base: restricts,
        injective: tables.len() == endos.len(),
        materialized: star.sum().is_some(),
        first_failure,
    })
}

/// A finite semigroup given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Semigroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl Semigroup {
    /// Checks shape and associativity.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::Malformed(format!("a semigroup on {n} elements needs an {n}×{n} table with entries below {n}")));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::NotAssociative { x, y, z });
                    }
                }
            }
        }
        Ok(Semigroup { names, table })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn identity(&self) -> Option<usize> {
        (0..self.len()).find(|&e| (0..self.len()).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// `S¹`: the semigroup itself if it has an identity, otherwise with a
    /// new identity `1` appended.
    pub fn with_identity(&self) -> (Semigroup, bool) {
        if self.identity().is_some() {
            return (self.clone(), false);
        }
        let n = self.len();
        let mut names = self.names.clone();
        names.push("1".into());
        let table = (0..=n)
            .map(|x| (0..=n).map(|y| if x == n { y } else if y == n { x } else { self.table[x][y] }).collect())
            .collect();
        (Semigroup { names, table }, true)
    }

    /// All self-maps of `{0, …, n−1}`, named by their image lists, with
    /// `s·t` meaning "apply `t`, then `s`".
    pub fn full_transformation_monoid(n: usize) -> Result<Semigroup> {
        if n == 0 || n > 4 {
            return Err(Error::Precondition(format!("transformation monoids are built for 1 ≤ n ≤ 4, got {n}")));
        }
        let mut maps: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            maps = maps.into_iter().flat_map(|m| (0..n).map(move |v| [m.clone(), vec![v]].concat())).collect();
        }
        let index: HashMap<Vec<usize>, usize> = maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let table = maps
            .iter()
            .map(|s| maps.iter().map(|t| index[&t.iter().map(|&k| s[k]).collect::<Vec<_>>()]).collect())
            .collect();
        let names = maps.iter().map(|m| m.iter().map(|v| v.to_string()).collect()).collect();
        Semigroup::new(names, table)
    }

    /// `{s₀, …}` with `x·y = y`.
    pub fn right_zero(n: usize) -> Result<Semigroup> {
        let names = (0..n).map(|i| format!("s{i}")).collect();
        Semigroup::new(names, (0..n).map(|_| (0..n).collect()).collect())
    }
}

/// Discrete roots for the Cayley demonstration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CayleyRoot {
    Edgeless,
    Antichain,
    Simplex,
    FreeSemilattice,
}

impl CayleyRoot {
    pub const ALL: [CayleyRoot; 4] = [CayleyRoot::Edgeless, CayleyRoot::Antichain, CayleyRoot::Simplex, CayleyRoot::FreeSemilattice];

    pub fn class(self) -> StructureClass {
        match self {
            CayleyRoot::Edgeless => StructureClass::Graph,
            CayleyRoot::Antichain => StructureClass::Poset,
            CayleyRoot::Simplex => StructureClass::Metric,
            CayleyRoot::FreeSemilattice => StructureClass::Semilattice,
        }
    }

    pub fn for_class(class: StructureClass) -> Self {
        match class {
            StructureClass::Graph => CayleyRoot::Edgeless,
            StructureClass::Poset => CayleyRoot::Antichain,
            StructureClass::Metric => CayleyRoot::Simplex,
            StructureClass::Semilattice => CayleyRoot::FreeSemilattice,
        }
    }

    /// Size `n` root; free semilattices are generated by `n` elements.
    pub fn build(self, n: usize) -> Result<FiniteStructure> {
        match self {
            CayleyRoot::Edgeless => edgeless(n),
            CayleyRoot::Antichain => antichain(n),
            CayleyRoot::Simplex => simplex(n, Rational::ONE),
            CayleyRoot::FreeSemilattice => free_semilattice(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub left: String,
    pub right: String,
    pub product: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CayleyEmbedding {
    pub semigroup: Semigroup,
    pub identity_adjoined: bool,
    #[serde(serialize_with = "serialize_arc")]
    pub root: Arc<FiniteStructure>,
    /// `λₛ` on the root, for each element of `S¹`.
    pub element_endos: Vec<Vec<usize>>,
    pub lifted: Vec<LiftedEndomorphism>,
    pub products: Vec<ProductCheck>,
    pub injective: bool,
}

impl CayleyEmbedding {
    pub fn passed(&self) -> bool {
        self.injective && self.products.iter().all(|p| p.holds)
    }
}

/// Represents `S¹` by left multiplication `λₛ(x) = s·x` on `n` designated
/// root points (the generators, for a free semilattice; remaining points
/// are fixed), lifts every `λₛ` to `A★` and checks that `s ↦ λ̂ₛ` is
/// injective and satisfies `λ̂ₛ ∘ λ̂ₜ = λ̂ₛₜ`.
pub fn cayley_demo(semigroup: &Semigroup, root_kind: CayleyRoot, n: usize, params: &CatalogParams, ceiling: usize) -> Result<CayleyEmbedding> {
    let (s1, adjoined) = semigroup.with_identity();
    let k = s1.len();
    if n < k {
        return Err(Error::Precondition(format!("root size {n} is smaller than |S¹| = {k}")));
    }
    let root = Arc::new(root_kind.build(n)?);
    let element_endos: Vec<Vec<usize>> = (0..k)
        .map(|s| {
            let mut partial: Vec<Option<usize>> = vec![None; root.len()];
            for (x, slot) in partial.iter_mut().enumerate().take(n) {
                *slot = Some(if x < k { s1.mul(s, x) } else { x });
            }
            extend_by_meets(&root, &root, &partial)
                .ok_or_else(|| Error::Internal("Cayley action does not extend along meets".into()))
        })
        .collect::<Result<_>>()?;
    let endos: Vec<Morphism> = element_endos
        .iter()
        .map(|m| Morphism::new(root.clone(), root.clone(), m.clone()))
        .collect::<Result<_>>()?;
    let catalog = enumerate_extensions(root.clone(), params)?;
    let star = Star::new(catalog, ceiling)?;
    let lifted: Vec<LiftedEndomorphism> = endos.par_iter().map(|e| lift(e, &star)).collect::<Result<_>>()?;
    let mut products = Vec::with_capacity(k * k);
    for s in 0..k {
        for t in 0..k {
            let st = s1.mul(s, t);
            // λ̂ₛ ∘ λ̂ₜ applies λ̂ₜ first
            let report = compare_composite(&star, &lifted[t], &lifted[s], &lifted[st]);
            products.push(ProductCheck {
                left: s1.names()[s].clone(),
                right: s1.names()[t].clone(),
                product: s1.names()[st].clone(),
                holds: report.passed(),
            });
        }
    }
    let mut tables: Vec<Vec<ElementRef>> = lifted.iter().map(|l| l.generator_table(&star)).collect();
    tables.sort();
    tables.dedup();
    Ok(CayleyEmbedding {
        semigroup: s1,
        identity_adjoined: adjoined,
        root,
        element_endos,
        lifted,
        products,
        injective: tables.len() == k,
    })
}

fn serialize_arc<S: serde::Serializer>(s: &Arc<FiniteStructure>, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    s.as_ref().serialize(serializer)
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRef::Root(a) => write!(f, "root {a}"),
            ElementRef::New { entry, position } => write!(f, "entry {entry} position {position}"),
        }
    }
}
