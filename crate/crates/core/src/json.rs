//! JSON structure documents.
//!
//! ```json
//! {"class": "metric", "carrier": ["a", "b"], "table": [[0, 1, "1/2"]]}
//! ```
//!
//! Graph tables list edges `[i, j]` with `i < j`; poset tables list every
//! pair `[i, j]` with `i ≤ j` in the order, reflexive pairs included; metric
//! tables list `[i, j, "p/q"]` for `i < j`; semilattice tables list
//! `[i, j, i ∧ j]` for `i ≤ j`. Canonical documents are sorted this way and
//! pretty-printed, so parsing and re-serializing one is byte-identical.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::structure::{FiniteStructure, Matrix, StructureClass, Table};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableEntry {
    Pair([usize; 2]),
    Meet([usize; 3]),
    Distance(usize, usize, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub class: StructureClass,
    pub carrier: Vec<String>,
    pub table: Vec<TableEntry>,
}

impl StructureDoc {
    pub fn from_structure(s: &FiniteStructure) -> Self {
        let n = s.len();
        let mut table = Vec::new();
        match s.class() {
            StructureClass::Graph => {
                for i in 0..n {
                    for j in i + 1..n {
                        if s.adjacent(i, j) {
                            table.push(TableEntry::Pair([i, j]));
                        }
                    }
                }
            }
            StructureClass::Poset => {
                for i in 0..n {
                    for j in 0..n {
                        if s.le(i, j) {
                            table.push(TableEntry::Pair([i, j]));
                        }
                    }
                }
            }
            StructureClass::Metric => {
                for i in 0..n {
                    for j in i + 1..n {
                        table.push(TableEntry::Distance(i, j, s.distance(i, j)));
                    }
                }
            }
            StructureClass::Semilattice => {
                for i in 0..n {
                    for j in i..n {
                        table.push(TableEntry::Meet([i, j, s.meet(i, j)]));
                    }
                }
            }
        }
        StructureDoc {
            class: s.class(),
            carrier: s.carrier().to_vec(),
            table,
        }
    }

    /// Builds the structure without checking its axioms.
    pub fn to_structure_unchecked(&self) -> Result<FiniteStructure> {
        let n = self.carrier.len();
        let idx = |i: usize| -> Result<usize> {
            if i < n {
                Ok(i)
            } else {
                Err(Error::Malformed(format!("table index {i} out of range for carrier of size {n}")))
            }
        };
        let wrong = |e: &TableEntry| Error::Malformed(format!("{e:?} is not a {} table entry", self.class));
        let table = match self.class {
            StructureClass::Graph | StructureClass::Poset => {
                let mut m = Matrix::filled(n, false);
                for e in &self.table {
                    let TableEntry::Pair([i, j]) = *e else { return Err(wrong(e)) };
                    m.set(idx(i)?, idx(j)?, true);
                    if self.class == StructureClass::Graph {
                        m.set(j, i, true);
                    }
                }
                if self.class == StructureClass::Graph {
                    Table::Graph(m)
                } else {
                    Table::Poset(m)
                }
            }
            StructureClass::Metric => {
                let mut m: Matrix<Option<Rational>> = Matrix::from_fn(n, |i, j| (i == j).then_some(Rational::ZERO));
                for e in &self.table {
                    let TableEntry::Distance(i, j, d) = *e else { return Err(wrong(e)) };
                    let (i, j) = (idx(i)?, idx(j)?);
                    if i == j {
                        return Err(Error::Malformed(format!("diagonal entry [{i}, {j}] in distance table")));
                    }
                    set_once(&mut m, i, j, d)?;
                    set_once(&mut m, j, i, d)?;
                }
                Table::Metric(complete(m)?)
            }
            StructureClass::Semilattice => {
                let mut m: Matrix<Option<usize>> = Matrix::filled(n, None);
                for e in &self.table {
                    let TableEntry::Meet([i, j, k]) = *e else { return Err(wrong(e)) };
                    let (i, j, k) = (idx(i)?, idx(j)?, idx(k)?);
                    set_once(&mut m, i, j, k)?;
                    if i != j {
                        set_once(&mut m, j, i, k)?;
                    }
                }
                Table::Semilattice(complete(m)?)
            }
        };
        FiniteStructure::new(self.carrier.clone(), table)
    }

    /// Builds the structure and checks its axioms.
    pub fn to_structure(&self) -> Result<FiniteStructure> {
        let s = self.to_structure_unchecked()?;
        if let crate::structure::ValidationReport::Fail { violation } = s.validate()? {
            return Err(Error::Invalid(violation));
        }
        Ok(s)
    }
}

fn set_once<T: Clone + PartialEq + std::fmt::Debug>(m: &mut Matrix<Option<T>>, i: usize, j: usize, v: T) -> Result<()> {
    match m.get(i, j) {
        Some(old) if *old != v => Err(Error::Malformed(format!("conflicting entries for ({i}, {j}): {old:?} and {v:?}"))),
        _ => {
            m.set(i, j, Some(v));
            Ok(())
        }
    }
}

fn complete<T: Clone>(m: Matrix<Option<T>>) -> Result<Matrix<T>> {
    let n = m.size();
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j).is_none() {
                return Err(Error::Malformed(format!("missing table entry for ({i}, {j})")));
            }
        }
    }
    Ok(Matrix::from_fn(n, |i, j| m.get(i, j).clone().expect("checked above")))
}

/// Canonical pretty-printed document with a trailing newline.
pub fn to_json(s: &FiniteStructure) -> String {
    let mut out = serde_json::to_string_pretty(&StructureDoc::from_structure(s)).expect("documents always serialize");
    out.push('\n');
    out
}

/// Parses and validates a structure document.
pub fn from_json(text: &str) -> Result<FiniteStructure> {
    let doc: StructureDoc = serde_json::from_str(text)?;
    doc.to_structure()
}

impl Serialize for FiniteStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StructureDoc::from_structure(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteStructure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        StructureDoc::deserialize(deserializer)?
            .to_structure()
            .map_err(serde::de::Error::custom)
    }
}
