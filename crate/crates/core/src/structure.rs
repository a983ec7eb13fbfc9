//! The four structure classes and their exact tables.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureClass {
    Graph,
    Poset,
    Metric,
    Semilattice,
}

impl StructureClass {
    pub const ALL: [StructureClass; 4] = [
        StructureClass::Graph,
        StructureClass::Poset,
        StructureClass::Metric,
        StructureClass::Semilattice,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructureClass::Graph => "graph",
            StructureClass::Poset => "poset",
            StructureClass::Metric => "metric",
            StructureClass::Semilattice => "semilattice",
        }
    }

    /// Relational classes admit the empty structure; metric spaces and
    /// semilattices are non-empty.
    pub fn allows_empty(self) -> bool {
        matches!(self, StructureClass::Graph | StructureClass::Poset)
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StructureClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(StructureClass::Graph),
            "poset" => Ok(StructureClass::Poset),
            "metric" => Ok(StructureClass::Metric),
            "semilattice" => Ok(StructureClass::Semilattice),
            other => Err(Error::Parse(format!("unknown structure class {other:?}"))),
        }
    }
}

/// Dense square table indexed by carrier positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(n: usize, value: T) -> Self {
        Matrix {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Malformed(format!(
                "row {bad} has length {} but the table has {n} rows",
                rows[bad].len()
            )));
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    /// Symmetric irreflexive adjacency.
    Graph(Matrix<bool>),
    /// Full reflexive `≤` relation.
    Poset(Matrix<bool>),
    Metric(Matrix<Rational>),
    /// `meet[i][j]` is the carrier index of `i ∧ j`.
    Semilattice(Matrix<usize>),
}

impl Table {
    pub fn class(&self) -> StructureClass {
        match self {
            Table::Graph(_) => StructureClass::Graph,
            Table::Poset(_) => StructureClass::Poset,
            Table::Metric(_) => StructureClass::Metric,
            Table::Semilattice(_) => StructureClass::Semilattice,
        }
    }

    fn size(&self) -> usize {
        match self {
            Table::Graph(m) | Table::Poset(m) => m.size(),
            Table::Metric(m) => m.size(),
            Table::Semilattice(m) => m.size(),
        }
    }
}

/// A first axiom instance that fails, with the witnessing tuple of carrier
/// indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    SelfLoop { x: usize },
    Asymmetric { x: usize, y: usize },
    NotReflexive { x: usize },
    NotAntisymmetric { x: usize, y: usize },
    NotTransitive { x: usize, y: usize, z: usize },
    NonzeroDiagonal { x: usize },
    NonPositiveDistance { x: usize, y: usize },
    Triangle { x: usize, y: usize, z: usize },
    NotIdempotent { x: usize },
    NotCommutative { x: usize, y: usize },
    NotAssociative { x: usize, y: usize, z: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::SelfLoop { x } => write!(f, "self-loop at {x}"),
            Violation::Asymmetric { x, y } => write!(f, "asymmetric pair ({x}, {y})"),
            Violation::NotReflexive { x } => write!(f, "{x} ≰ {x}"),
            Violation::NotAntisymmetric { x, y } => {
                write!(f, "{x} ≤ {y} and {y} ≤ {x} with {x} ≠ {y}")
            }
            Violation::NotTransitive { x, y, z } => {
                write!(f, "{x} ≤ {y} ≤ {z} but {x} ≰ {z}")
            }
            Violation::NonzeroDiagonal { x } => write!(f, "d({x}, {x}) ≠ 0"),
            Violation::NonPositiveDistance { x, y } => {
                write!(f, "d({x}, {y}) ≤ 0 for distinct points")
            }
            Violation::Triangle { x, y, z } => {
                write!(f, "triangle ({x}, {y}, {z}): d({x},{z}) > d({x},{y}) + d({y},{z})")
            }
            Violation::NotIdempotent { x } => write!(f, "{x} ∧ {x} ≠ {x}"),
            Violation::NotCommutative { x, y } => write!(f, "{x} ∧ {y} ≠ {y} ∧ {x}"),
            Violation::NotAssociative { x, y, z } => {
                write!(f, "({x} ∧ {y}) ∧ {z} ≠ {x} ∧ ({y} ∧ {z})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ValidationReport {
    Pass,
    Fail { violation: Violation },
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, ValidationReport::Pass)
    }
}

/// A finite structure of one of the four classes. Carrier positions are the
/// canonical element order; names are only labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    carrier: Vec<String>,
    table: Table,
}

impl FiniteStructure {
    /// Builds a structure after checking table dimensions and index ranges.
    /// Axioms are not checked; see [`FiniteStructure::validate`].
    pub fn new(carrier: Vec<String>, table: Table) -> Result<Self> {
        let n = carrier.len();
        if table.size() != n {
            return Err(Error::Malformed(format!(
                "table is {0}x{0} but the carrier has {n} elements",
                table.size()
            )));
        }
        if n == 0 && !table.class().allows_empty() {
            return Err(Error::Malformed(format!(
                "{} carriers must be non-empty",
                table.class()
            )));
        }
        let distinct: BTreeSet<&String> = carrier.iter().collect();
        if distinct.len() != n {
            return Err(Error::Malformed("carrier names are not distinct".into()));
        }
        if let Table::Semilattice(m) = &table {
            for i in 0..n {
                for j in 0..n {
                    if *m.get(i, j) >= n {
                        return Err(Error::Malformed(format!(
                            "meet of {i} and {j} is {} which is not a carrier index",
                            m.get(i, j)
                        )));
                    }
                }
            }
        }
        Ok(FiniteStructure { carrier, table })
    }

    /// Like [`FiniteStructure::new`] but also requires every axiom to hold.
    pub fn checked(carrier: Vec<String>, table: Table) -> Result<Self> {
        let s = Self::new(carrier, table)?;
        match s.validate()? {
            ValidationReport::Pass => Ok(s),
            ValidationReport::Fail { violation } => Err(Error::Invalid(violation)),
        }
    }

    pub fn graph(carrier: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = carrier.len();
        let mut adj = Matrix::filled(n, false);
        for &(u, v) in edges {
            check_index(u, n)?;
            check_index(v, n)?;
            adj.set(u, v, true);
            adj.set(v, u, true);
        }
        Self::checked(carrier, Table::Graph(adj))
    }

    /// Poset from strict relations; the reflexive-transitive closure is taken.
    pub fn poset(carrier: Vec<String>, less: &[(usize, usize)]) -> Result<Self> {
        let n = carrier.len();
        let mut le = Matrix::from_fn(n, |i, j| i == j);
        for &(u, v) in less {
            check_index(u, n)?;
            check_index(v, n)?;
            le.set(u, v, true);
        }
        transitive_closure(&mut le);
        Self::checked(carrier, Table::Poset(le))
    }

    pub fn metric(carrier: Vec<String>, distances: Matrix<Rational>) -> Result<Self> {
        Self::checked(carrier, Table::Metric(distances))
    }

    pub fn semilattice(carrier: Vec<String>, meet: Matrix<usize>) -> Result<Self> {
        Self::checked(carrier, Table::Semilattice(meet))
    }

    pub fn class(&self) -> StructureClass {
        self.table.class()
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn name(&self, i: usize) -> &str {
        &self.carrier[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.carrier.iter().position(|c| c == name)
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn with_names(&self, carrier: Vec<String>) -> Result<Self> {
        Self::new(carrier, self.table.clone())
    }

    /// Adjacency for graphs; panics on other classes.
    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        match &self.table {
            Table::Graph(m) => *m.get(i, j),
            _ => panic!("adjacency queried on a {}", self.class()),
        }
    }

    /// Order relation: the poset order, or `i ∧ j = i` for semilattices.
    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        match &self.table {
            Table::Poset(m) => *m.get(i, j),
            Table::Semilattice(m) => *m.get(i, j) == i,
            _ => panic!("order queried on a {}", self.class()),
        }
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> Rational {
        match &self.table {
            Table::Metric(m) => *m.get(i, j),
            _ => panic!("distance queried on a {}", self.class()),
        }
    }

    #[inline]
    pub fn meet(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Table::Semilattice(m) => *m.get(i, j),
            _ => panic!("meet queried on a {}", self.class()),
        }
    }

    /// Checks every axiom instance of the class; the first failure is
    /// reported with its witness.
    pub fn validate(&self) -> Result<ValidationReport> {
        let n = self.len();
        if self.table.size() != n {
            return Err(Error::Malformed("table does not match carrier".into()));
        }
        let fail = |violation| Ok(ValidationReport::Fail { violation });
        match &self.table {
            Table::Graph(adj) => {
                for x in 0..n {
                    if *adj.get(x, x) {
                        return fail(Violation::SelfLoop { x });
                    }
                    for y in x + 1..n {
                        if adj.get(x, y) != adj.get(y, x) {
                            return fail(Violation::Asymmetric { x, y });
                        }
                    }
                }
            }
            Table::Poset(le) => {
                for x in 0..n {
                    if !*le.get(x, x) {
                        return fail(Violation::NotReflexive { x });
                    }
                }
                for x in 0..n {
                    for y in x + 1..n {
                        if *le.get(x, y) && *le.get(y, x) {
                            return fail(Violation::NotAntisymmetric { x, y });
                        }
                    }
                }
                for x in 0..n {
                    for y in 0..n {
                        if !*le.get(x, y) {
                            continue;
                        }
                        for z in 0..n {
                            if *le.get(y, z) && !*le.get(x, z) {
                                return fail(Violation::NotTransitive { x, y, z });
                            }
                        }
                    }
                }
            }
            Table::Metric(d) => {
                for x in 0..n {
                    if !d.get(x, x).is_zero() {
                        return fail(Violation::NonzeroDiagonal { x });
                    }
                    for y in x + 1..n {
                        if d.get(x, y) != d.get(y, x) {
                            return fail(Violation::Asymmetric { x, y });
                        }
                        if !d.get(x, y).is_positive() {
                            return fail(Violation::NonPositiveDistance { x, y });
                        }
                    }
                }
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            if *d.get(x, z) > *d.get(x, y) + *d.get(y, z) {
                                return fail(Violation::Triangle { x, y, z });
                            }
                        }
                    }
                }
            }
            Table::Semilattice(m) => {
                for x in 0..n {
                    if *m.get(x, x) != x {
                        return fail(Violation::NotIdempotent { x });
                    }
                    for y in x + 1..n {
                        if m.get(x, y) != m.get(y, x) {
                            return fail(Violation::NotCommutative { x, y });
                        }
                    }
                }
                for x in 0..n {
                    for y in 0..n {
                        let xy = *m.get(x, y);
                        for z in 0..n {
                            if *m.get(xy, z) != *m.get(x, *m.get(y, z)) {
                                return fail(Violation::NotAssociative { x, y, z });
                            }
                        }
                    }
                }
            }
        }
        Ok(ValidationReport::Pass)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.validate(), Ok(ValidationReport::Pass))
    }

    /// Whether a set of carrier indices is closed under meet. Always true
    /// for relational classes.
    pub fn is_meet_closed(&self, subset: &[usize]) -> bool {
        self.first_missing_meet(subset).is_none()
    }

    fn first_missing_meet(&self, subset: &[usize]) -> Option<(usize, usize)> {
        if self.class() != StructureClass::Semilattice {
            return None;
        }
        let members: BTreeSet<usize> = subset.iter().copied().collect();
        for &a in &members {
            for &b in &members {
                if !members.contains(&self.meet(a, b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Restriction to `subset`, re-indexed in ascending carrier order.
    pub fn induced_substructure(&self, subset: &[usize]) -> Result<FiniteStructure> {
        let members = normalize_subset(subset, self.len())?;
        if members.is_empty() && !self.class().allows_empty() {
            return Err(Error::Precondition(format!(
                "{} substructures must be non-empty",
                self.class()
            )));
        }
        if let Some((left, right)) = self.first_missing_meet(&members) {
            return Err(Error::NotMeetClosed { left, right });
        }
        Ok(self.restrict(&members))
    }

    /// Restriction without closure checks; `members` must be sorted, in
    /// range, and meet-closed for semilattices.
    pub(crate) fn restrict(&self, members: &[usize]) -> FiniteStructure {
        let k = members.len();
        let carrier = members.iter().map(|&i| self.carrier[i].clone()).collect();
        let table = match &self.table {
            Table::Graph(m) => Table::Graph(Matrix::from_fn(k, |a, b| *m.get(members[a], members[b]))),
            Table::Poset(m) => Table::Poset(Matrix::from_fn(k, |a, b| *m.get(members[a], members[b]))),
            Table::Metric(m) => Table::Metric(Matrix::from_fn(k, |a, b| *m.get(members[a], members[b]))),
            Table::Semilattice(m) => {
                let pos = |x: usize| members.binary_search(&x).expect("meet-closed subset");
                Table::Semilattice(Matrix::from_fn(k, |a, b| pos(*m.get(members[a], members[b]))))
            }
        };
        FiniteStructure { carrier, table }
    }

    /// Smallest meet-closed superset of `subset`, sorted.
    pub fn meet_closure(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut members: BTreeSet<usize> = normalize_subset(subset, self.len())?.into_iter().collect();
        if self.class() != StructureClass::Semilattice {
            return Ok(members.into_iter().collect());
        }
        loop {
            let current: Vec<usize> = members.iter().copied().collect();
            let before = members.len();
            for &a in &current {
                for &b in &current {
                    members.insert(self.meet(a, b));
                }
            }
            if members.len() == before {
                return Ok(current);
            }
        }
    }

    /// Substructure generated by `subset`.
    pub fn generate(&self, subset: &[usize]) -> Result<FiniteStructure> {
        if subset.is_empty() && !self.class().allows_empty() {
            return Err(Error::Precondition("generating set must be non-empty".into()));
        }
        let closed = self.meet_closure(subset)?;
        self.induced_substructure(&closed)
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        Err(Error::Malformed(format!("index {i} out of range for carrier of size {n}")))
    } else {
        Ok(())
    }
}

fn normalize_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut members: Vec<usize> = subset.to_vec();
    for &i in &members {
        check_index(i, n)?;
    }
    members.sort_unstable();
    members.dedup();
    Ok(members)
}

/// Warshall saturation of a boolean relation.
pub fn transitive_closure(rel: &mut Matrix<bool>) {
    let n = rel.size();
    for k in 0..n {
        for i in 0..n {
            if !*rel.get(i, k) {
                continue;
            }
            for j in 0..n {
                if *rel.get(k, j) {
                    rel.set(i, j, true);
                }
            }
        }
    }
}

/// Default element names `e0, e1, …`.
pub fn default_names(n: usize, prefix: &str) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}
