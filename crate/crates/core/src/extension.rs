//! Canonical codes for one-point extensions over a fixed base.
//!
//! Two one-point extensions of the same base are isomorphic over the base
//! exactly when their codes are equal. A code is realized as a structure
//! whose first `|B|` positions are the base in its own order, followed by the
//! new elements.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::structure::{FiniteStructure, Matrix, StructureClass, Table, ValidationReport};

/// Value of `x ∧ b` in a semilattice extension: a base position, or a new
/// element. `New(0)` is the generator `x` itself; `New(r)` for `r ≥ 1` are
/// the further new meets, numbered by first occurrence along the base order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeetValue {
    Base(usize),
    New(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum ExtensionCode {
    /// Base positions adjacent to the new vertex.
    Graph { neighbors: Vec<usize> },
    /// Base positions strictly below and strictly above the new element.
    Poset { below: Vec<usize>, above: Vec<usize> },
    /// Distance from the new point to each base point.
    Metric { distances: Vec<Rational> },
    /// `x ∧ b` for each base position `b`.
    Semilattice { meets: Vec<MeetValue> },
}

impl ExtensionCode {
    pub fn class(&self) -> StructureClass {
        match self {
            ExtensionCode::Graph { .. } => StructureClass::Graph,
            ExtensionCode::Poset { .. } => StructureClass::Poset,
            ExtensionCode::Metric { .. } => StructureClass::Metric,
            ExtensionCode::Semilattice { .. } => StructureClass::Semilattice,
        }
    }

    /// Number of elements the extension adds to its base.
    pub fn new_elements(&self) -> usize {
        match self {
            ExtensionCode::Semilattice { meets } => {
                1 + meets
                    .iter()
                    .filter_map(|v| match v {
                        MeetValue::New(r) => Some(*r),
                        MeetValue::Base(_) => None,
                    })
                    .max()
                    .unwrap_or(0)
            }
            _ => 1,
        }
    }
}

/// Katětov condition on a distance vector: `f(a) > 0` and
/// `|f(a) − f(b)| ≤ d(a,b) ≤ f(a) + f(b)`.
pub fn katetov_admissible(base: &FiniteStructure, distances: &[Rational]) -> bool {
    let m = base.len();
    distances.len() == m
        && distances.iter().all(|f| f.is_positive())
        && (0..m).all(|a| {
            (0..m).all(|b| {
                let d = base.distance(a, b);
                distances[a].abs_diff(distances[b]) <= d && d <= distances[a] + distances[b]
            })
        })
}

fn base_positions_valid(code_len: usize, base: &FiniteStructure) -> Result<()> {
    if code_len != base.len() {
        return Err(Error::Precondition(format!(
            "extension code covers {code_len} base points but the base has {}",
            base.len()
        )));
    }
    Ok(())
}

fn sorted_subset(list: &[usize], m: usize) -> Result<BTreeSet<usize>> {
    let set: BTreeSet<usize> = list.iter().copied().collect();
    if set.len() != list.len() || set.iter().any(|&i| i >= m) {
        return Err(Error::Precondition(format!("{list:?} is not a set of base positions")));
    }
    Ok(set)
}

/// Builds the extension described by `code`, naming new elements after
/// `fresh`. Fails with [`Error::Invalid`] when the code is not admissible.
pub fn realize(base: &FiniteStructure, code: &ExtensionCode, fresh: &str) -> Result<FiniteStructure> {
    if code.class() != base.class() {
        return Err(Error::ClassMismatch {
            expected: base.class(),
            found: code.class(),
        });
    }
    let m = base.len();
    let mut carrier: Vec<String> = base.carrier().to_vec();
    let table = match code {
        ExtensionCode::Graph { neighbors } => {
            let nb = sorted_subset(neighbors, m)?;
            carrier.push(fresh.to_string());
            Table::Graph(Matrix::from_fn(m + 1, |i, j| match (i == m, j == m) {
                (false, false) => base.adjacent(i, j),
                (true, false) => nb.contains(&j),
                (false, true) => nb.contains(&i),
                (true, true) => false,
            }))
        }
        ExtensionCode::Poset { below, above } => {
            let lo = sorted_subset(below, m)?;
            let hi = sorted_subset(above, m)?;
            carrier.push(fresh.to_string());
            Table::Poset(Matrix::from_fn(m + 1, |i, j| match (i == m, j == m) {
                (false, false) => base.le(i, j),
                (true, false) => hi.contains(&j),
                (false, true) => lo.contains(&i),
                (true, true) => true,
            }))
        }
        ExtensionCode::Metric { distances } => {
            base_positions_valid(distances.len(), base)?;
            carrier.push(fresh.to_string());
            Table::Metric(Matrix::from_fn(m + 1, |i, j| match (i == m, j == m) {
                (false, false) => base.distance(i, j),
                (true, false) => distances[j],
                (false, true) => distances[i],
                (true, true) => Rational::ZERO,
            }))
        }
        ExtensionCode::Semilattice { meets } => {
            base_positions_valid(meets.len(), base)?;
            let (table, names) = semilattice_extension_table(base, meets, fresh)?;
            carrier.extend(names);
            table
        }
    };
    let ext = FiniteStructure::new(carrier, table)?;
    if let ValidationReport::Fail { violation } = ext.validate()? {
        return Err(Error::Invalid(violation));
    }
    Ok(ext)
}

fn semilattice_extension_table(
    base: &FiniteStructure,
    meets: &[MeetValue],
    fresh: &str,
) -> Result<(Table, Vec<String>)> {
    let m = base.len();
    // canonical numbering: labels 1.. appear in order of first occurrence
    let mut reps: Vec<Option<usize>> = vec![None];
    for (b, v) in meets.iter().enumerate() {
        match *v {
            MeetValue::Base(j) if j >= m => {
                return Err(Error::Precondition(format!("meet value {j} is not a base position")));
            }
            MeetValue::New(r) if r == reps.len() => reps.push(Some(b)),
            MeetValue::New(r) if r > reps.len() => {
                return Err(Error::Precondition(format!(
                    "new label {r} used before label {}; codes must be canonically numbered",
                    reps.len()
                )));
            }
            _ => {}
        }
    }
    let k = reps.len();
    let elem = |v: MeetValue| match v {
        MeetValue::Base(j) => j,
        MeetValue::New(r) => m + r,
    };
    // x ∧ t for t a base position, or x itself when t is None
    let x_meet = |t: Option<usize>| t.map_or(m, |b| elem(meets[b]));
    let join_reps = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (None, t) | (t, None) => t,
        (Some(a), Some(b)) => Some(base.meet(a, b)),
    };
    let table = Matrix::from_fn(m + k, |i, j| match (i < m, j < m) {
        (true, true) => base.meet(i, j),
        (false, true) => x_meet(join_reps(reps[i - m], Some(j))),
        (true, false) => x_meet(join_reps(Some(i), reps[j - m])),
        (false, false) => x_meet(join_reps(reps[i - m], reps[j - m])),
    });
    let names = (0..k)
        .map(|r| match reps[r] {
            None => fresh.to_string(),
            Some(b) => format!("{fresh}^{}", base.name(b)),
        })
        .collect();
    Ok((Table::Semilattice(table), names))
}

/// Elements of `ext` generated by `seed` (all of them for relational classes).
fn closure_len(ext: &FiniteStructure, seed: &[usize]) -> Result<usize> {
    Ok(ext.meet_closure(seed)?.len())
}

/// The generator of a one-point extension: the unique element outside the
/// base that generates everything together with the base.
pub fn find_generator(ext: &FiniteStructure, base_positions: &[usize]) -> Result<usize> {
    let in_base: BTreeSet<usize> = base_positions.iter().copied().collect();
    let mut found = None;
    for x in (0..ext.len()).filter(|x| !in_base.contains(x)) {
        let mut seed = base_positions.to_vec();
        seed.push(x);
        if closure_len(ext, &seed)? == ext.len() {
            if let Some(prev) = found {
                return Err(Error::Internal(format!(
                    "extension has two generators {prev} and {x} over its base"
                )));
            }
            found = Some(x);
        }
    }
    found.ok_or_else(|| Error::Precondition("structure is not a one-point extension of the base".into()))
}

/// Code of the one-point extension `ext` of the base sitting at
/// `base_positions` (in base order), generated by `generator`.
pub fn code_of(ext: &FiniteStructure, base_positions: &[usize], generator: usize) -> Result<ExtensionCode> {
    let in_base: BTreeSet<usize> = base_positions.iter().copied().collect();
    if in_base.contains(&generator) || generator >= ext.len() {
        return Err(Error::Precondition("generator must be a new element".into()));
    }
    let pos_of = |e: usize| base_positions.iter().position(|&p| p == e);
    let x = generator;
    let code = match ext.class() {
        StructureClass::Graph | StructureClass::Poset | StructureClass::Metric => {
            if ext.len() != base_positions.len() + 1 {
                return Err(Error::Precondition(
                    "relational one-point extensions add exactly one element".into(),
                ));
            }
            match ext.class() {
                StructureClass::Graph => ExtensionCode::Graph {
                    neighbors: (0..base_positions.len())
                        .filter(|&k| ext.adjacent(base_positions[k], x))
                        .collect(),
                },
                StructureClass::Poset => ExtensionCode::Poset {
                    below: (0..base_positions.len()).filter(|&k| ext.le(base_positions[k], x)).collect(),
                    above: (0..base_positions.len()).filter(|&k| ext.le(x, base_positions[k])).collect(),
                },
                _ => ExtensionCode::Metric {
                    distances: base_positions.iter().map(|&p| ext.distance(x, p)).collect(),
                },
            }
        }
        StructureClass::Semilattice => {
            let mut labels: Vec<usize> = vec![x];
            let mut meets = Vec::with_capacity(base_positions.len());
            for &p in base_positions {
                let v = ext.meet(x, p);
                let value = if let Some(k) = pos_of(v) {
                    MeetValue::Base(k)
                } else if let Some(r) = labels.iter().position(|&l| l == v) {
                    MeetValue::New(r)
                } else {
                    labels.push(v);
                    MeetValue::New(labels.len() - 1)
                };
                meets.push(value);
            }
            if base_positions.len() + labels.len() != ext.len() {
                return Err(Error::Precondition(
                    "structure is not generated by the base and the generator".into(),
                ));
            }
            ExtensionCode::Semilattice { meets }
        }
    };
    Ok(code)
}

/// New-element positions of `ext` listed in code order: the generator
/// first, then `New(1)`, `New(2)`, … For relational classes just `[x]`.
pub fn new_element_order(ext: &FiniteStructure, base_positions: &[usize], generator: usize) -> Vec<usize> {
    let mut order = vec![generator];
    if ext.class() == StructureClass::Semilattice {
        for &p in base_positions {
            let v = ext.meet(generator, p);
            if !base_positions.contains(&v) && !order.contains(&v) {
                order.push(v);
            }
        }
    }
    order
}

/// Every admissible extension code over `base`, in canonical order.
/// `grid` supplies the candidate distances for metric bases.
pub fn enumerate_codes(base: &FiniteStructure, grid: &[Rational]) -> Result<Vec<ExtensionCode>> {
    let m = base.len();
    let candidates: Vec<ExtensionCode> = match base.class() {
        StructureClass::Graph => (0u64..1 << m)
            .map(|mask| ExtensionCode::Graph {
                neighbors: (0..m).filter(|k| mask & (1 << k) != 0).collect(),
            })
            .collect(),
        StructureClass::Poset => (0..3u64.pow(m as u32))
            .map(|mut c| {
                let (mut below, mut above) = (Vec::new(), Vec::new());
                for k in 0..m {
                    match c % 3 {
                        1 => below.push(k),
                        2 => above.push(k),
                        _ => {}
                    }
                    c /= 3;
                }
                ExtensionCode::Poset { below, above }
            })
            .collect(),
        StructureClass::Metric => {
            if grid.is_empty() {
                return Err(Error::EmptyGrid);
            }
            let mut grid: Vec<Rational> = grid.to_vec();
            grid.sort();
            grid.dedup();
            let mut out: Vec<Vec<Rational>> = vec![vec![]];
            for _ in 0..m {
                out = out
                    .into_iter()
                    .flat_map(|p| grid.iter().map(move |&g| [p.clone(), vec![g]].concat()))
                    .collect();
            }
            out.into_iter()
                .filter(|d| katetov_admissible(base, d))
                .map(|distances| ExtensionCode::Metric { distances })
                .collect()
        }
        StructureClass::Semilattice => {
            let mut out = Vec::new();
            let mut current = Vec::with_capacity(m);
            semilattice_candidates(base, 0, 0, &mut current, &mut out);
            out
        }
    };
    Ok(candidates.into_iter().filter(|c| realize(base, c, "x").is_ok()).collect())
}

fn semilattice_candidates(
    base: &FiniteStructure,
    b: usize,
    max_label: usize,
    current: &mut Vec<MeetValue>,
    out: &mut Vec<ExtensionCode>,
) {
    let m = base.len();
    if b == m {
        out.push(ExtensionCode::Semilattice { meets: current.clone() });
        return;
    }
    // x ∧ b lies below b, so base values must be ≤ b
    let choices = (0..m)
        .filter(|&j| base.le(j, b))
        .map(MeetValue::Base)
        .chain((0..=max_label + 1).map(MeetValue::New));
    for v in choices {
        let next_max = match v {
            MeetValue::New(r) => max_label.max(r),
            MeetValue::Base(_) => max_label,
        };
        current.push(v);
        semilattice_candidates(base, b + 1, next_max, current, out);
        current.pop();
    }
}
