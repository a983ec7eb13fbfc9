//! Brute-force check of the pushout universal property against a family of
//! test objects.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::morphism::{enumerate_hom_maps, extend_by_meets, is_homomorphism, HomSearchLimit};
use crate::pushout::PushoutSquare;
use crate::structure::{FiniteStructure, StructureClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleFailure {
    /// Index into the test objects.
    pub object: usize,
    /// Cocone leg `C → Q`.
    pub j1: Vec<usize>,
    /// Cocone leg `B′ → Q`.
    pub j2: Vec<usize>,
    /// Number of homomorphisms `u: P → Q` with `u ∘ left_leg = j1` and
    /// `u ∘ right_leg = j2`.
    pub mediators: usize,
    /// The map forced on the generators of `P`, if it is a homomorphism.
    pub constructed: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub objects: usize,
    pub cocones: usize,
    pub failure: Option<OracleFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// For every `Q` and every cocone `(j1: C → Q, j2: B′ → Q)` over the span,
/// checks that exactly one `u: P → Q` mediates, and that it is the map
/// forced by the legs. Stops at the first failure.
pub fn verify_universal_property(
    sq: &PushoutSquare,
    test_objects: &[FiniteStructure],
    limit: HomSearchLimit,
) -> Result<OracleReport> {
    let span = sq.span();
    let c = span.left().target();
    let bp = span.right().target();
    let p = sq.object();
    let (left, right) = (span.left().map(), span.right().map());
    let (ll, rl) = (sq.left_leg().map(), sq.right_leg().map());
    let mut cocones = 0;

    for (qi, q) in test_objects.iter().enumerate() {
        let homs_c = enumerate_hom_maps(c, q, limit)?;
        let homs_b = enumerate_hom_maps(bp, q, limit)?;
        let homs_p = enumerate_hom_maps(p, q, limit)?;
        let mut mediators: HashMap<(Vec<usize>, Vec<usize>), (usize, Vec<usize>)> = HashMap::new();
        for u in homs_p {
            let key = (ll.iter().map(|&i| u[i]).collect(), rl.iter().map(|&i| u[i]).collect());
            mediators.entry(key).or_insert((0, u)).0 += 1;
        }
        for j2 in &homs_b {
            for j1 in &homs_c {
                if (0..left.len()).any(|w| j1[left[w]] != j2[right[w]]) {
                    continue;
                }
                cocones += 1;
                let constructed = forced_mediator(sq, q, j1, j2);
                let (count, unique) = match mediators.get(&(j1.clone(), j2.clone())) {
                    Some((n, u)) => (*n, Some(u)),
                    None => (0, None),
                };
                if count != 1 || constructed.as_ref() != unique {
                    return Ok(OracleReport {
                        objects: qi + 1,
                        cocones,
                        failure: Some(OracleFailure {
                            object: qi,
                            j1: j1.clone(),
                            j2: j2.clone(),
                            mediators: count,
                            constructed,
                        }),
                        note: None,
                    });
                }
            }
        }
    }
    let note = (p.class() == StructureClass::Metric).then(|| {
        "metric test objects are drawn from a finite distance grid; the property is checked relative to that grid".to_string()
    });
    Ok(OracleReport {
        objects: test_objects.len(),
        cocones,
        failure: None,
        note,
    })
}

/// The only candidate mediator: `u` is pinned on the images of both legs
/// and, for semilattices, extended along meets.
fn forced_mediator(sq: &PushoutSquare, q: &FiniteStructure, j1: &[usize], j2: &[usize]) -> Option<Vec<usize>> {
    let p = sq.object();
    let mut u: Vec<Option<usize>> = vec![None; p.len()];
    let pairs = sq
        .left_leg()
        .map()
        .iter()
        .zip(j1)
        .chain(sq.right_leg().map().iter().zip(j2));
    for (&pi, &v) in pairs {
        match u[pi] {
            Some(w) if w != v => return None,
            _ => u[pi] = Some(v),
        }
    }
    let u = extend_by_meets(p, q, &u)?;
    is_homomorphism(p, q, &u).then_some(u)
}
