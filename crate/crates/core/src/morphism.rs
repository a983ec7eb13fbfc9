//! Maps between structures of one class, their classification, and the
//! brute-force homomorphism enumerator used as an oracle backend.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, StructureClass, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorphismKind {
    NotHom,
    Hom,
    Surjection,
    Embedding,
    Isomorphism,
}

impl MorphismKind {
    pub fn is_hom(self) -> bool {
        self != MorphismKind::NotHom
    }

    pub fn is_embedding(self) -> bool {
        matches!(self, MorphismKind::Embedding | MorphismKind::Isomorphism)
    }

    pub fn is_surjection(self) -> bool {
        matches!(self, MorphismKind::Surjection | MorphismKind::Isomorphism)
    }
}

impl fmt::Display for MorphismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MorphismKind::NotHom => "not-hom",
            MorphismKind::Hom => "hom",
            MorphismKind::Surjection => "surjection",
            MorphismKind::Embedding => "embedding",
            MorphismKind::Isomorphism => "isomorphism",
        };
        f.write_str(s)
    }
}

/// Whether `map` preserves the structure of `source` into `target`.
pub fn is_homomorphism(source: &FiniteStructure, target: &FiniteStructure, map: &[usize]) -> bool {
    let n = source.len();
    match (source.table(), target.table()) {
        (Table::Graph(_), Table::Graph(_)) => (0..n)
            .all(|i| (i + 1..n).all(|j| !source.adjacent(i, j) || target.adjacent(map[i], map[j]))),
        (Table::Poset(_), Table::Poset(_)) => {
            (0..n).all(|i| (0..n).all(|j| !source.le(i, j) || target.le(map[i], map[j])))
        }
        (Table::Metric(_), Table::Metric(_)) => (0..n)
            .all(|i| (i + 1..n).all(|j| target.distance(map[i], map[j]) <= source.distance(i, j))),
        (Table::Semilattice(_), Table::Semilattice(_)) => (0..n)
            .all(|i| (i..n).all(|j| map[source.meet(i, j)] == target.meet(map[i], map[j]))),
        _ => false,
    }
}

fn is_injective(map: &[usize], target_len: usize) -> bool {
    let mut seen = vec![false; target_len];
    map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
}

fn is_surjective(map: &[usize], target_len: usize) -> bool {
    let mut seen = vec![false; target_len];
    for &v in map {
        seen[v] = true;
    }
    seen.into_iter().all(|b| b)
}

/// Injective and relation-reflecting (isometric for metric spaces).
fn reflects(source: &FiniteStructure, target: &FiniteStructure, map: &[usize]) -> bool {
    let n = source.len();
    match source.class() {
        StructureClass::Graph => (0..n)
            .all(|i| (i + 1..n).all(|j| source.adjacent(i, j) == target.adjacent(map[i], map[j]))),
        StructureClass::Poset => {
            (0..n).all(|i| (0..n).all(|j| source.le(i, j) == target.le(map[i], map[j])))
        }
        StructureClass::Metric => (0..n)
            .all(|i| (i + 1..n).all(|j| target.distance(map[i], map[j]) == source.distance(i, j))),
        StructureClass::Semilattice => true,
    }
}

fn check_map(source: &FiniteStructure, target: &FiniteStructure, map: &[usize]) -> Result<()> {
    if source.class() != target.class() {
        return Err(Error::ClassMismatch {
            expected: source.class(),
            found: target.class(),
        });
    }
    if map.len() != source.len() {
        return Err(Error::NotTotal {
            expected: source.len(),
            got: map.len(),
        });
    }
    if let Some((position, &value)) = map.iter().enumerate().find(|(_, &v)| v >= target.len()) {
        return Err(Error::OutOfRange {
            position,
            value,
            size: target.len(),
        });
    }
    Ok(())
}

/// Classifies a map given as a carrier-index table.
pub fn classify_map(source: &FiniteStructure, target: &FiniteStructure, map: &[usize]) -> Result<MorphismKind> {
    check_map(source, target, map)?;
    if !is_homomorphism(source, target, map) {
        return Ok(MorphismKind::NotHom);
    }
    let embedding = is_injective(map, target.len()) && reflects(source, target, map);
    let surjective = is_surjective(map, target.len());
    Ok(match (embedding, surjective) {
        (true, true) => MorphismKind::Isomorphism,
        (true, false) => MorphismKind::Embedding,
        (false, true) => MorphismKind::Surjection,
        (false, false) => MorphismKind::Hom,
    })
}

/// A total map between two structures of one class, with its computed kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Arc<FiniteStructure>,
    target: Arc<FiniteStructure>,
    map: Vec<usize>,
    kind: MorphismKind,
}

impl Morphism {
    pub fn new(source: Arc<FiniteStructure>, target: Arc<FiniteStructure>, map: Vec<usize>) -> Result<Self> {
        let kind = classify_map(&source, &target, &map)?;
        Ok(Morphism { source, target, map, kind })
    }

    pub fn identity(s: Arc<FiniteStructure>) -> Self {
        let map = (0..s.len()).collect();
        Morphism {
            source: s.clone(),
            target: s,
            map,
            kind: MorphismKind::Isomorphism,
        }
    }

    pub fn source(&self) -> &Arc<FiniteStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteStructure> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if self.target.as_ref() != other.source.as_ref() {
            return Err(Error::Precondition("composed morphisms do not meet".into()));
        }
        let map = self.map.iter().map(|&x| other.map[x]).collect();
        Morphism::new(self.source.clone(), other.target.clone(), map)
    }

    /// The same map with its target cut down to the image.
    pub fn corestrict_to_image(&self) -> Result<Morphism> {
        let mut image: Vec<usize> = self.map.clone();
        image.sort_unstable();
        image.dedup();
        let sub = if self.target.class() == StructureClass::Semilattice {
            // image of a homomorphism is meet-closed; of a mere map it may not be
            self.target.generate(&image)?
        } else {
            self.target.induced_substructure(&image)?
        };
        let closed = self.target.meet_closure(&image)?;
        let map = self
            .map
            .iter()
            .map(|x| closed.binary_search(x).expect("image inside closure"))
            .collect();
        Morphism::new(self.source.clone(), Arc::new(sub), map)
    }
}

/// Convenience wrapper returning only the kind.
pub fn classify(m: &Morphism) -> MorphismKind {
    m.kind()
}

/// Upper bound on the raw search space `|y|^|x|` admitted by
/// [`enumerate_homs`]. The default corresponds to `|x|·log₂|y| ≤ 24`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSearchLimit {
    pub max_candidates: u128,
}

impl Default for HomSearchLimit {
    fn default() -> Self {
        HomSearchLimit { max_candidates: 1 << 24 }
    }
}

impl HomSearchLimit {
    pub fn check(&self, source_len: usize, target_len: usize) -> Result<()> {
        let candidates = (target_len as u128)
            .checked_pow(source_len as u32)
            .unwrap_or(u128::MAX);
        if candidates > self.max_candidates {
            Err(Error::BoundExceeded {
                candidates,
                limit: self.max_candidates,
            })
        } else {
            Ok(())
        }
    }
}

/// Constraint checks that become decidable once position `k` is assigned.
struct Schedule {
    /// For relational classes: pairs `(i, k)` with `i < k`, plus `(k, k)`.
    /// For semilattices: triples `(i, j, m)` with `m = i ∧ j` and
    /// `max(i, j, m) = k`.
    steps: Vec<Vec<(usize, usize, usize)>>,
}

impl Schedule {
    fn new(source: &FiniteStructure) -> Self {
        let n = source.len();
        let mut steps = vec![Vec::new(); n];
        match source.class() {
            StructureClass::Semilattice => {
                for i in 0..n {
                    for j in i..n {
                        let m = source.meet(i, j);
                        steps[i.max(j).max(m)].push((i, j, m));
                    }
                }
            }
            _ => {
                for k in 0..n {
                    for i in 0..=k {
                        steps[k].push((i, k, 0));
                    }
                }
            }
        }
        Schedule { steps }
    }

    fn ok(&self, source: &FiniteStructure, target: &FiniteStructure, map: &[usize], k: usize) -> bool {
        self.steps[k].iter().all(|&(i, j, m)| match source.class() {
            StructureClass::Graph => !source.adjacent(i, j) || target.adjacent(map[i], map[j]),
            StructureClass::Poset => {
                (!source.le(i, j) || target.le(map[i], map[j])) && (!source.le(j, i) || target.le(map[j], map[i]))
            }
            StructureClass::Metric => target.distance(map[i], map[j]) <= source.distance(i, j),
            StructureClass::Semilattice => map[m] == target.meet(map[i], map[j]),
        })
    }
}

/// All homomorphisms `x → y` as map tables, in lexicographic order.
pub fn enumerate_hom_maps(x: &FiniteStructure, y: &FiniteStructure, limit: HomSearchLimit) -> Result<Vec<Vec<usize>>> {
    if x.class() != y.class() {
        return Err(Error::ClassMismatch {
            expected: x.class(),
            found: y.class(),
        });
    }
    limit.check(x.len(), y.len())?;
    let mut out = Vec::new();
    search_maps(x, y, &vec![None; x.len()], &mut |m| {
        out.push(m.to_vec());
        true
    });
    Ok(out)
}

/// Depth-first search over homomorphisms `x → y` extending `fixed`
/// (positions with `Some(v)` are pinned). `visit` returns `false` to stop.
pub(crate) fn search_maps(
    x: &FiniteStructure,
    y: &FiniteStructure,
    fixed: &[Option<usize>],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = x.len();
    if n == 0 {
        visit(&[]);
        return;
    }
    if y.is_empty() {
        return;
    }
    let schedule = Schedule::new(x);
    let mut map = vec![0usize; n];
    fn go(
        k: usize,
        x: &FiniteStructure,
        y: &FiniteStructure,
        fixed: &[Option<usize>],
        schedule: &Schedule,
        map: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == x.len() {
            return visit(map);
        }
        let range = match fixed[k] {
            Some(v) => v..v + 1,
            None => 0..y.len(),
        };
        for v in range {
            map[k] = v;
            if schedule.ok(x, y, map, k) && !go(k + 1, x, y, fixed, schedule, map, visit) {
                return false;
            }
        }
        true
    }
    go(0, x, y, fixed, &schedule, &mut map, visit);
}

/// All homomorphisms `x → y`, deterministic and in lexicographic order of
/// the map tables.
pub fn enumerate_homs(x: &Arc<FiniteStructure>, y: &Arc<FiniteStructure>, limit: HomSearchLimit) -> Result<Vec<Morphism>> {
    enumerate_hom_maps(x, y, limit)?
        .into_iter()
        .map(|m| Morphism::new(x.clone(), y.clone(), m))
        .collect()
}

/// Completes a partial map by forcing `u(a ∧ b) = u(a) ∧ u(b)` (semilattices
/// only; other classes need `partial` to be total already). Returns `None`
/// on a conflict or if some element stays unassigned. The result is not
/// checked to be a homomorphism.
pub fn extend_by_meets(source: &FiniteStructure, target: &FiniteStructure, partial: &[Option<usize>]) -> Option<Vec<usize>> {
    let mut u = partial.to_vec();
    if source.class() == StructureClass::Semilattice {
        let mut known: Vec<usize> = (0..u.len()).filter(|&i| u[i].is_some()).collect();
        let mut next = 0;
        while next < known.len() {
            let a = known[next];
            next += 1;
            let mut k = 0;
            while k < known.len() {
                let b = known[k];
                k += 1;
                let m = source.meet(a, b);
                let v = target.meet(u[a]?, u[b]?);
                match u[m] {
                    None => {
                        u[m] = Some(v);
                        known.push(m);
                    }
                    Some(w) if w != v => return None,
                    Some(_) => {}
                }
            }
        }
    }
    u.into_iter().collect()
}

/// All isomorphisms `a → b` that agree with `fixed` where it is pinned.
pub fn isomorphisms(a: &FiniteStructure, b: &FiniteStructure, fixed: &[Option<usize>]) -> Vec<Vec<usize>> {
    if a.len() != b.len() || a.class() != b.class() {
        return Vec::new();
    }
    let mut out = Vec::new();
    search_maps(a, b, fixed, &mut |m| {
        if classify_map(a, b, m).map(|k| k == MorphismKind::Isomorphism).unwrap_or(false) {
            out.push(m.to_vec());
        }
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{all_structures, antichain, edgeless};
    use crate::rational::Rational;
    use crate::structure::{default_names, Matrix};

    fn arc(s: FiniteStructure) -> Arc<FiniteStructure> {
        Arc::new(s)
    }

    fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| (0..m).map(move |v| [p.clone(), vec![v]].concat()))
                .collect();
        }
        out
    }

    #[test]
    fn identity_is_isomorphism() {
        let g = arc(FiniteStructure::graph(default_names(3, "v"), &[(0, 1)]).unwrap());
        let id = Morphism::new(g.clone(), g.clone(), vec![0, 1, 2]).unwrap();
        assert_eq!(id.kind(), MorphismKind::Isomorphism);
        assert_eq!(Morphism::identity(g).kind(), MorphismKind::Isomorphism);
    }

    #[test]
    fn constant_into_singleton_is_surjection() {
        let a2 = arc(antichain(2).unwrap());
        let one = arc(antichain(1).unwrap());
        assert_eq!(Morphism::new(a2, one, vec![0, 0]).unwrap().kind(), MorphismKind::Surjection);
    }

    #[test]
    fn collapsing_metric_pair_is_surjective_hom() {
        let d = Matrix::from_fn(2, |i, j| if i == j { Rational::ZERO } else { Rational::integer(2) });
        let x = arc(FiniteStructure::metric(default_names(2, "m"), d).unwrap());
        let one = arc(crate::presets::simplex(1, Rational::ONE).unwrap());
        // non-expanding: d(f0, f1) = 0 ≤ 2
        assert!(Rational::ZERO <= Rational::integer(2));
        assert_eq!(Morphism::new(x, one, vec![0, 0]).unwrap().kind(), MorphismKind::Surjection);
    }

    #[test]
    fn partial_map_is_rejected() {
        let g = arc(edgeless(2).unwrap());
        assert!(matches!(Morphism::new(g.clone(), g.clone(), vec![0]), Err(Error::NotTotal { .. })));
        assert!(matches!(Morphism::new(g.clone(), g, vec![0, 5]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn hom_counts() {
        let one = arc(edgeless(1).unwrap());
        let y = arc(FiniteStructure::graph(default_names(4, "w"), &[(0, 1), (2, 3)]).unwrap());
        assert_eq!(enumerate_homs(&one, &y, HomSearchLimit::default()).unwrap().len(), 4);

        let k2 = arc(FiniteStructure::graph(default_names(2, "k"), &[(0, 1)]).unwrap());
        let homs = enumerate_homs(&k2, &k2, HomSearchLimit::default()).unwrap();
        assert_eq!(homs.iter().map(|h| h.map().to_vec()).collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0]]);

        let chain = arc(FiniteStructure::poset(default_names(2, "c"), &[(0, 1)]).unwrap());
        let anti = arc(antichain(2).unwrap());
        let homs = enumerate_hom_maps(&chain, &anti, HomSearchLimit::default()).unwrap();
        // brute force over the 4 maps
        let brute: Vec<Vec<usize>> = all_maps(2, 2).into_iter().filter(|m| is_homomorphism(&chain, &anti, m)).collect();
        assert_eq!(homs, brute);
        assert_eq!(homs, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn bound_is_refused_not_truncated() {
        let x = arc(edgeless(9).unwrap());
        let y = arc(edgeless(7).unwrap());
        assert!(matches!(
            enumerate_homs(&x, &y, HomSearchLimit::default()),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_exact_on_small_carriers() {
        // two-sided check: returned maps are homs, and every other map is not
        let grid = [Rational::integer(1), Rational::integer(2)];
        for class in StructureClass::ALL {
            let zoo: Vec<FiniteStructure> = (1..=3).flat_map(|n| all_structures(class, n, &grid)).collect();
            for x in &zoo {
                for y in &zoo {
                    let homs = enumerate_hom_maps(x, y, HomSearchLimit::default()).unwrap();
                    let brute: Vec<Vec<usize>> =
                        all_maps(x.len(), y.len()).into_iter().filter(|m| is_homomorphism(x, y, m)).collect();
                    assert_eq!(homs, brute, "{class}");
                }
            }
        }
    }

    #[test]
    fn embedding_corestricts_to_isomorphism() {
        let grid = [Rational::integer(1), Rational::integer(2)];
        for class in StructureClass::ALL {
            let zoo: Vec<Arc<FiniteStructure>> =
                (1..=3).flat_map(|n| all_structures(class, n, &grid)).map(Arc::new).collect();
            for x in &zoo {
                for y in &zoo {
                    for m in enumerate_homs(x, y, HomSearchLimit::default()).unwrap() {
                        if m.kind().is_embedding() {
                            assert_eq!(m.corestrict_to_image().unwrap().kind(), MorphismKind::Isomorphism);
                        }
                    }
                }
            }
        }
    }
}
