//! Rooted multi-amalgams and their free sums.
//!
//! A free sum is built by iterated amalgamated sums `P₀ = A`,
//! `Pₙ₊₁ = Pₙ ⊔_{Bₙ} Cₙ`. The root keeps positions `0..|A|` throughout, so
//! every base `Bᵢ ⊆ A` is found at the same positions in every `Pₙ`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extension::{realize, ExtensionCode};
use crate::morphism::{classify_map, extend_by_meets, Morphism, MorphismKind};
use crate::pushout::{fresh_name, glue};
use crate::rational::Rational;
use crate::structure::{FiniteStructure, Matrix, StructureClass, Table, ValidationReport};

/// Largest structure validated eagerly after a free sum; beyond this the
/// construction is trusted and validation is left to explicit audits.
pub const EAGER_VALIDATION_LIMIT: usize = 1000;

/// Largest raw subset count for which the semilattice subset representation
/// is built alongside a free sum.
pub const SUBSET_CHECK_LIMIT: usize = 4096;

/// One extension in a rooted multi-amalgam: the base `Bᵢ` as sorted root
/// positions and the code of `Cᵢ` over it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AmalgamPair {
    pub base: Vec<usize>,
    pub code: ExtensionCode,
}

#[derive(Clone, Debug)]
pub struct RootedMultiAmalgam {
    root: Arc<FiniteStructure>,
    pairs: Vec<AmalgamPair>,
    components: Vec<Arc<FiniteStructure>>,
}

impl RootedMultiAmalgam {
    /// New points of pair `i` are named `x{i}` (and `x{i}^…` for further
    /// semilattice meets).
    pub fn new(root: Arc<FiniteStructure>, pairs: Vec<AmalgamPair>) -> Result<Self> {
        Self::with_prefix(root, pairs, "x")
    }

    pub fn with_prefix(root: Arc<FiniteStructure>, pairs: Vec<AmalgamPair>, prefix: &str) -> Result<Self> {
        let root_names: HashSet<&str> = root.carrier().iter().map(String::as_str).collect();
        let mut components = Vec::with_capacity(pairs.len());
        for (i, pair) in pairs.iter().enumerate() {
            if pair.base.windows(2).any(|w| w[0] >= w[1]) || pair.base.iter().any(|&b| b >= root.len()) {
                return Err(Error::Precondition(format!(
                    "base {:?} of pair {i} is not a sorted set of root positions",
                    pair.base
                )));
            }
            if pair.base.is_empty() && matches!(root.class(), StructureClass::Metric | StructureClass::Semilattice) {
                return Err(Error::Precondition(format!("{} extensions need a non-empty base", root.class())));
            }
            let base = root.induced_substructure(&pair.base)?;
            let c = realize(&base, &pair.code, &format!("{prefix}{i}"))?;
            if let Some(clash) = c.carrier()[base.len()..].iter().find(|n| root_names.contains(n.as_str())) {
                return Err(Error::Precondition(format!("fresh name {clash} is already used by the root")));
            }
            components.push(Arc::new(c));
        }
        Ok(RootedMultiAmalgam { root, pairs, components })
    }

    pub fn root(&self) -> &Arc<FiniteStructure> {
        &self.root
    }

    pub fn pairs(&self) -> &[AmalgamPair] {
        &self.pairs
    }

    /// `Cᵢ`, with `Bᵢ` at positions `0..|Bᵢ|` in base order.
    pub fn component(&self, i: usize) -> &Arc<FiniteStructure> {
        &self.components[i]
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same amalgam with its pairs reordered: pair `k` of the result is
    /// pair `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let pairs = order.iter().map(|&i| self.pairs[i].clone()).collect();
        Self::new(self.root.clone(), pairs)
    }
}

/// One amalgamated sum in the chain: `glued` are the positions of `Bᵢ` in
/// `Pₙ`, `added` the positions of `Cᵢ ∖ Bᵢ` in `Pₙ₊₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumStep {
    pub pair: usize,
    pub glued: Vec<usize>,
    pub added: Vec<usize>,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct FreeSum {
    object: Arc<FiniteStructure>,
    root_embedding: Morphism,
    leg_embeddings: Vec<Morphism>,
    construction_log: Vec<SumStep>,
    representation_checked: bool,
}

impl FreeSum {
    pub fn object(&self) -> &Arc<FiniteStructure> {
        &self.object
    }

    pub fn root_embedding(&self) -> &Morphism {
        &self.root_embedding
    }

    /// `gᵢ: Cᵢ → sum`.
    pub fn leg_embeddings(&self) -> &[Morphism] {
        &self.leg_embeddings
    }

    pub fn construction_log(&self) -> &[SumStep] {
        &self.construction_log
    }

    /// Whether the semilattice subset representation was built and matched.
    pub fn representation_checked(&self) -> bool {
        self.representation_checked
    }
}

impl Serialize for FreeSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let legs: Vec<&[usize]> = self.leg_embeddings.iter().map(|m| m.map()).collect();
        let mut st = serializer.serialize_struct("FreeSum", 4)?;
        st.serialize_field("object", self.object.as_ref())?;
        st.serialize_field("root_embedding", self.root_embedding.map())?;
        st.serialize_field("leg_embeddings", &legs)?;
        st.serialize_field("construction_log", &self.construction_log)?;
        st.end()
    }
}

pub fn free_sum(ma: &RootedMultiAmalgam) -> Result<FreeSum> {
    free_sum_within(ma, usize::MAX)
}

/// Free sum, refusing with [`Error::CeilingExceeded`] (stage 0) once the
/// partial sum grows beyond `ceiling` elements.
pub fn free_sum_within(ma: &RootedMultiAmalgam, ceiling: usize) -> Result<FreeSum> {
    let root = ma.root();
    let refuse = |size: usize| Error::CeilingExceeded { stage: 0, size, ceiling };
    if root.len() > ceiling {
        return Err(refuse(root.len()));
    }
    let (object, legs, log) = match root.class() {
        StructureClass::Semilattice => {
            let mut p = (**root).clone();
            let mut legs = Vec::with_capacity(ma.len());
            let mut log = Vec::with_capacity(ma.len());
            for (i, pair) in ma.pairs().iter().enumerate() {
                let c = ma.component(i);
                let c_base: Vec<usize> = (0..pair.base.len()).collect();
                let (next, cpos) = glue(&p, &pair.base, c, &c_base)?;
                if next.len() > ceiling {
                    return Err(refuse(next.len()));
                }
                log.push(SumStep {
                    pair: i,
                    glued: pair.base.clone(),
                    added: cpos[pair.base.len()..].to_vec(),
                    size: next.len(),
                });
                legs.push(cpos);
                p = next;
            }
            // earlier legs keep their positions: each step only appends
            (p, legs, log)
        }
        _ => {
            let total = root.len() + ma.len();
            if total > ceiling {
                return Err(refuse(total));
            }
            relational_sum(ma)?
        }
    };
    if object.len() <= EAGER_VALIDATION_LIMIT {
        if let ValidationReport::Fail { violation } = object.validate()? {
            return Err(Error::Internal(format!("free sum fails validation: {violation}")));
        }
    }
    let object = Arc::new(object);
    let root_embedding = Morphism::new(root.clone(), object.clone(), (0..root.len()).collect())?;
    let mut leg_embeddings = Vec::with_capacity(legs.len());
    for (i, map) in legs.into_iter().enumerate() {
        let leg = Morphism::new(ma.component(i).clone(), object.clone(), map)?;
        if !leg.kind().is_embedding() {
            return Err(Error::Internal(format!("leg {i} of the free sum is {}, not an embedding", leg.kind())));
        }
        leg_embeddings.push(leg);
    }
    if !root_embedding.kind().is_embedding() {
        return Err(Error::Internal("root does not embed into its free sum".into()));
    }
    let mut sum = FreeSum {
        object,
        root_embedding,
        leg_embeddings,
        construction_log: log,
        representation_checked: false,
    };
    if root.class() == StructureClass::Semilattice && raw_subset_count(ma) <= SUBSET_CHECK_LIMIT {
        let rep = semilattice_subset_representation(ma)?;
        if representation_isomorphism(&sum, &rep).is_none() {
            return Err(Error::Internal(
                "iterated pushout and subset representation are not isomorphic over the root".into(),
            ));
        }
        sum.representation_checked = true;
    }
    Ok(sum)
}

/// Iterated amalgamation for one-point relational extensions, growing the
/// table one row at a time.
fn relational_sum(ma: &RootedMultiAmalgam) -> Result<(FiniteStructure, Vec<Vec<usize>>, Vec<SumStep>)> {
    let root = ma.root();
    let n0 = root.len();
    let mut names: Vec<String> = root.carrier().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let mut legs = Vec::with_capacity(ma.len());
    let mut log = Vec::with_capacity(ma.len());
    enum Rows {
        Bool(Vec<Vec<bool>>),
        Dist(Vec<Vec<Rational>>),
    }
    let mut rows = match root.table() {
        Table::Graph(_) => Rows::Bool((0..n0).map(|i| (0..n0).map(|j| root.adjacent(i, j)).collect()).collect()),
        Table::Poset(_) => Rows::Bool((0..n0).map(|i| (0..n0).map(|j| root.le(i, j)).collect()).collect()),
        Table::Metric(_) => Rows::Dist((0..n0).map(|i| (0..n0).map(|j| root.distance(i, j)).collect()).collect()),
        Table::Semilattice(_) => unreachable!(),
    };
    for (i, pair) in ma.pairs().iter().enumerate() {
        let c = ma.component(i);
        let m = pair.base.len();
        let glued = &pair.base;
        let n = names.len();
        match (&mut rows, root.class()) {
            (Rows::Bool(r), StructureClass::Graph) => {
                let col: Vec<bool> = (0..n).map(|p| (0..m).any(|w| glued[w] == p && c.adjacent(w, m))).collect();
                for (row, &v) in r.iter_mut().zip(&col) {
                    row.push(v);
                }
                let mut own = col;
                own.push(false);
                r.push(own);
            }
            (Rows::Bool(r), StructureClass::Poset) => {
                let below: Vec<bool> = (0..n).map(|p| (0..m).any(|w| c.le(w, m) && r[p][glued[w]])).collect();
                let above: Vec<bool> = (0..n).map(|p| (0..m).any(|w| c.le(m, w) && r[glued[w]][p])).collect();
                for (row, &v) in r.iter_mut().zip(&below) {
                    row.push(v);
                }
                let mut own = above;
                own.push(true);
                r.push(own);
            }
            (Rows::Dist(r), StructureClass::Metric) => {
                let col: Vec<Rational> = (0..n)
                    .map(|p| {
                        (0..m)
                            .map(|w| c.distance(m, w) + r[glued[w]][p])
                            .min()
                            .ok_or_else(|| Error::Precondition("metric extensions need a non-empty base".into()))
                    })
                    .collect::<Result<_>>()?;
                for (row, &v) in r.iter_mut().zip(&col) {
                    row.push(v);
                }
                let mut own = col;
                own.push(Rational::ZERO);
                r.push(own);
            }
            _ => unreachable!(),
        }
        let name = fresh_name(&taken, c.name(m));
        taken.insert(name.clone());
        names.push(name);
        let mut leg = glued.clone();
        leg.push(n);
        legs.push(leg);
        log.push(SumStep {
            pair: i,
            glued: glued.clone(),
            added: vec![n],
            size: n + 1,
        });
    }
    let n = names.len();
    let table = match rows {
        Rows::Bool(r) if root.class() == StructureClass::Graph => Table::Graph(Matrix::from_fn(n, |i, j| r[i][j])),
        Rows::Bool(r) => Table::Poset(Matrix::from_fn(n, |i, j| r[i][j])),
        Rows::Dist(r) => Table::Metric(Matrix::from_fn(n, |i, j| r[i][j])),
    };
    Ok((FiniteStructure::new(names, table)?, legs, log))
}

/// A homomorphism `src → dst` pinned on `pins` and extended along meets,
/// if it exists and is an isomorphism.
pub fn isomorphism_from_generators(
    src: &FiniteStructure,
    dst: &FiniteStructure,
    pins: impl IntoIterator<Item = (usize, usize)>,
) -> Option<Vec<usize>> {
    let mut partial = vec![None; src.len()];
    for (a, b) in pins {
        match partial[a] {
            Some(old) if old != b => return None,
            _ => partial[a] = Some(b),
        }
    }
    let map = extend_by_meets(src, dst, &partial)?;
    (classify_map(src, dst, &map).ok()? == MorphismKind::Isomorphism).then_some(map)
}

/// Isomorphism `a → b` with `iso ∘ fₐ = f_b` on the root and
/// `iso ∘ gᵢ = g′_{order[i]}` on every leg, where `b` was built from the
/// pairs of `a` permuted so that `b`'s pair `k` is `a`'s pair `order[k]`.
pub fn permutation_isomorphism(a: &FreeSum, b: &FreeSum, order: &[usize]) -> Option<Vec<usize>> {
    let mut pins: Vec<(usize, usize)> = (0..a.root_embedding.source().len())
        .map(|r| (a.root_embedding.apply(r), b.root_embedding.apply(r)))
        .collect();
    for (k, &i) in order.iter().enumerate() {
        let (ga, gb) = (&a.leg_embeddings[i], &b.leg_embeddings[k]);
        pins.extend((0..ga.source().len()).map(|c| (ga.apply(c), gb.apply(c))));
    }
    isomorphism_from_generators(a.object(), b.object(), pins)
}

/// The semilattice free sum described by subsets: each element is a
/// non-empty choice of at most one point of the root and at most one new
/// point of each extension, read as the meet of its members.
#[derive(Clone, Debug)]
pub struct SubsetRepresentation {
    pub object: FiniteStructure,
    /// Position of `{a}` for each root element `a`.
    pub root_positions: Vec<usize>,
    /// Per pair, the position of each element of `Cᵢ`.
    pub component_positions: Vec<Vec<usize>>,
}

/// Choice of root element and one new point per extension; `None` is "absent".
type Choice = (Option<usize>, Vec<Option<usize>>);

fn raw_subset_count(ma: &RootedMultiAmalgam) -> usize {
    let mut count = ma.root().len() + 1;
    for (i, pair) in ma.pairs().iter().enumerate() {
        count = count.saturating_mul(ma.component(i).len() - pair.base.len() + 1);
    }
    count.saturating_sub(1)
}

/// Up-closed, meet-closed subsets of `s` (the empty set and `s` included),
/// as membership vectors. Brute force over all subsets.
fn filters(s: &FiniteStructure) -> Result<Vec<Vec<bool>>> {
    let n = s.len();
    if n > 20 {
        return Err(Error::BoundExceeded {
            candidates: 1u128 << n,
            limit: 1 << 20,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let has = |i: usize| mask & (1 << i) != 0;
        let up = (0..n).all(|i| !has(i) || (0..n).all(|j| !s.le(i, j) || has(j)));
        let closed = (0..n).all(|i| (0..n).all(|j| !(has(i) && has(j)) || has(s.meet(i, j))));
        if up && closed {
            out.push((0..n).map(has).collect());
        }
    }
    Ok(out)
}

/// Builds the subset representation. Subsets denoting the same element of
/// the sum are identified by their values under every character (homomorphism
/// to the two-element semilattice); the meet is computed member-wise and
/// checked against the characters.
pub fn semilattice_subset_representation(ma: &RootedMultiAmalgam) -> Result<SubsetRepresentation> {
    let root = ma.root();
    if root.class() != StructureClass::Semilattice {
        return Err(Error::ClassMismatch {
            expected: StructureClass::Semilattice,
            found: root.class(),
        });
    }
    let k = ma.len();
    let raw = raw_subset_count(ma);
    if raw > 1 << 20 {
        return Err(Error::BoundExceeded {
            candidates: raw as u128,
            limit: 1 << 20,
        });
    }

    // compatible character families: a filter of A, and for each pair a
    // filter of Cᵢ agreeing with it on Bᵢ
    let root_filters = filters(root)?;
    let comp_filters: Vec<Vec<Vec<bool>>> = (0..k).map(|i| filters(ma.component(i))).collect::<Result<_>>()?;
    let mut families: Vec<(usize, Vec<usize>)> = Vec::new();
    for (fi, f) in root_filters.iter().enumerate() {
        let mut partial: Vec<Vec<usize>> = vec![vec![]];
        for (i, pair) in ma.pairs().iter().enumerate() {
            let ok: Vec<usize> = comp_filters[i]
                .iter()
                .enumerate()
                .filter(|(_, g)| pair.base.iter().enumerate().all(|(w, &b)| g[w] == f[b]))
                .map(|(gi, _)| gi)
                .collect();
            partial = partial
                .into_iter()
                .flat_map(|p| ok.iter().map(move |&g| [p.clone(), vec![g]].concat()))
                .collect();
            if partial.len() > 1 << 16 {
                return Err(Error::BoundExceeded {
                    candidates: partial.len() as u128,
                    limit: 1 << 16,
                });
            }
        }
        families.extend(partial.into_iter().map(|p| (fi, p)));
    }
    let signature = |x: &Choice| -> Vec<bool> {
        families
            .iter()
            .map(|(fi, gs)| {
                x.0.is_none_or(|a| root_filters[*fi][a])
                    && x.1.iter().enumerate().all(|(i, c)| c.is_none_or(|c| comp_filters[i][gs[i]][c]))
            })
            .collect()
    };

    // raw choices, ordered by member count, root singletons first
    let mut choices: Vec<Choice> = vec![(None, vec![None; k])];
    let a_opts: Vec<Option<usize>> = std::iter::once(None).chain((0..root.len()).map(Some)).collect();
    choices = a_opts.iter().flat_map(|&a| choices.iter().map(move |c| (a, c.1.clone()))).collect();
    for (i, pair) in ma.pairs().iter().enumerate() {
        let m = pair.base.len();
        let opts: Vec<Option<usize>> =
            std::iter::once(None).chain((m..ma.component(i).len()).map(Some)).collect();
        choices = choices
            .into_iter()
            .flat_map(|(a, cs)| {
                opts.iter().map(move |&o| {
                    let mut cs = cs.clone();
                    cs[i] = o;
                    (a, cs)
                })
            })
            .collect();
    }
    choices.retain(|(a, cs)| a.is_some() || cs.iter().any(Option::is_some));
    let key = |x: &Choice| {
        let count = x.0.is_some() as usize + x.1.iter().filter(|c| c.is_some()).count();
        let pos: Vec<usize> = std::iter::once(x.0)
            .chain(x.1.iter().copied())
            .map(|o| o.unwrap_or(usize::MAX))
            .collect();
        (count, pos)
    };
    choices.sort_by_key(key);

    let mut by_sig: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut reps: Vec<Choice> = Vec::new();
    let mut sigs: Vec<Vec<bool>> = Vec::new();
    for x in choices {
        let s = signature(&x);
        if let std::collections::hash_map::Entry::Vacant(e) = by_sig.entry(s.clone()) {
            e.insert(reps.len());
            reps.push(x);
            sigs.push(s);
        }
    }

    let formal_meet = |x: &Choice, y: &Choice| -> Choice {
        let mut a = match (x.0, y.0) {
            (None, o) | (o, None) => o,
            (Some(p), Some(q)) => Some(root.meet(p, q)),
        };
        let mut cs = vec![None; k];
        for i in 0..k {
            let c = ma.component(i);
            let v = match (x.1[i], y.1[i]) {
                (None, o) | (o, None) => o,
                (Some(p), Some(q)) => Some(c.meet(p, q)),
            };
            match v {
                // landed in Bᵢ: move it to the root coordinate
                Some(w) if w < ma.pairs()[i].base.len() => {
                    let b = ma.pairs()[i].base[w];
                    a = Some(a.map_or(b, |a| root.meet(a, b)));
                }
                other => cs[i] = other,
            }
        }
        (a, cs)
    };
    let n = reps.len();
    let mut table = Matrix::filled(n, 0usize);
    for i in 0..n {
        for j in 0..n {
            let z = formal_meet(&reps[i], &reps[j]);
            let expected: Vec<bool> = sigs[i].iter().zip(&sigs[j]).map(|(p, q)| *p && *q).collect();
            let s = signature(&z);
            if s != expected {
                return Err(Error::Internal(format!("member-wise meet of subsets {i} and {j} disagrees with characters")));
            }
            table.set(i, j, by_sig[&s]);
        }
    }

    let describe = |x: &Choice| {
        let mut parts: Vec<&str> = x.0.iter().map(|&a| root.name(a)).collect();
        for (i, c) in x.1.iter().enumerate() {
            if let Some(c) = c {
                parts.push(ma.component(i).name(*c));
            }
        }
        format!("{{{}}}", parts.join(","))
    };
    let names: Vec<String> = reps.iter().map(describe).collect();
    let object = FiniteStructure::checked(names, Table::Semilattice(table))?;

    let single = |x: Choice| by_sig[&signature(&x)];
    let root_positions: Vec<usize> = (0..root.len()).map(|a| single((Some(a), vec![None; k]))).collect();
    let component_positions = ma
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            (0..ma.component(i).len())
                .map(|c| {
                    if c < pair.base.len() {
                        root_positions[pair.base[c]]
                    } else {
                        let mut cs = vec![None; k];
                        cs[i] = Some(c);
                        single((None, cs))
                    }
                })
                .collect()
        })
        .collect();
    Ok(SubsetRepresentation {
        object,
        root_positions,
        component_positions,
    })
}

/// Isomorphism from the iterated-pushout sum onto the subset representation
/// that fixes the root and matches every leg.
pub fn representation_isomorphism(sum: &FreeSum, rep: &SubsetRepresentation) -> Option<Vec<usize>> {
    let mut pins: Vec<(usize, usize)> = rep
        .root_positions
        .iter()
        .enumerate()
        .map(|(a, &p)| (sum.root_embedding.apply(a), p))
        .collect();
    for (leg, positions) in sum.leg_embeddings.iter().zip(&rep.component_positions) {
        pins.extend(positions.iter().enumerate().map(|(c, &p)| (leg.apply(c), p)));
    }
    isomorphism_from_generators(sum.object(), &rep.object, pins)
}
