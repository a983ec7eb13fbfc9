//! Named roots and exhaustive enumeration of small structures.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::structure::{default_names, FiniteStructure, Matrix, StructureClass, Table};

/// Largest generator count accepted for free semilattice roots (2ⁿ − 1 elements).
pub const MAX_FREE_GENERATORS: usize = 10;

pub fn edgeless(n: usize) -> Result<FiniteStructure> {
    FiniteStructure::graph(default_names(n, "v"), &[])
}

pub fn antichain(n: usize) -> Result<FiniteStructure> {
    FiniteStructure::poset(default_names(n, "p"), &[])
}

/// `n` points at pairwise distance `d`.
pub fn simplex(n: usize, d: Rational) -> Result<FiniteStructure> {
    if !d.is_positive() {
        return Err(Error::Precondition(format!("simplex distance must be positive, got {d}")));
    }
    let m = Matrix::from_fn(n, |i, j| if i == j { Rational::ZERO } else { d });
    FiniteStructure::metric(default_names(n, "u"), m)
}

/// Free semilattice on `n` generators: non-empty subsets of the generators
/// under union, ordered by size then lexicographically, so the generators
/// occupy positions `0..n`.
pub fn free_semilattice(n: usize) -> Result<FiniteStructure> {
    if n == 0 || n > MAX_FREE_GENERATORS {
        return Err(Error::Precondition(format!(
            "free semilattice needs 1..={MAX_FREE_GENERATORS} generators, got {n}"
        )));
    }
    let subsets = free_semilattice_subsets(n);
    let index: std::collections::HashMap<u32, usize> =
        subsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let names = subsets
        .iter()
        .map(|&m| {
            (0..n)
                .filter(|g| m & (1 << g) != 0)
                .map(|g| format!("g{g}"))
                .collect::<Vec<_>>()
                .join("^")
        })
        .collect();
    let k = subsets.len();
    let meet = Matrix::from_fn(k, |a, b| index[&(subsets[a] | subsets[b])]);
    FiniteStructure::semilattice(names, meet)
}

/// Generator bitmasks of the free semilattice elements in carrier order.
pub fn free_semilattice_subsets(n: usize) -> Vec<u32> {
    let mut subsets: Vec<u32> = (1u32..(1 << n)).collect();
    subsets.sort_by_key(|&m| {
        let bits: Vec<u32> = (0..n as u32).filter(|g| m & (1 << g) != 0).collect();
        (m.count_ones(), bits)
    });
    subsets
}

/// Chain `0 < 1 < … < n−1` as a semilattice.
pub fn chain_semilattice(n: usize) -> Result<FiniteStructure> {
    FiniteStructure::semilattice(default_names(n, "c"), Matrix::from_fn(n, |i, j| i.min(j)))
}

/// A root given on the command line: `edgeless:n`, `antichain:n`,
/// `simplex:n:d` or `freesemilattice:n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootPreset {
    Edgeless(usize),
    Antichain(usize),
    Simplex(usize, Rational),
    FreeSemilattice(usize),
}

impl RootPreset {
    pub fn class(&self) -> StructureClass {
        match self {
            RootPreset::Edgeless(_) => StructureClass::Graph,
            RootPreset::Antichain(_) => StructureClass::Poset,
            RootPreset::Simplex(..) => StructureClass::Metric,
            RootPreset::FreeSemilattice(_) => StructureClass::Semilattice,
        }
    }

    pub fn build(&self) -> Result<FiniteStructure> {
        match *self {
            RootPreset::Edgeless(n) => edgeless(n),
            RootPreset::Antichain(n) => antichain(n),
            RootPreset::Simplex(n, d) => simplex(n, d),
            RootPreset::FreeSemilattice(n) => free_semilattice(n),
        }
    }
}

impl FromStr for RootPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let count = |p: &str| -> Result<usize> {
            p.parse()
                .map_err(|_| Error::Parse(format!("expected a carrier size in {s:?}, got {p:?}")))
        };
        match parts.as_slice() {
            ["edgeless", n] => Ok(RootPreset::Edgeless(count(n)?)),
            ["antichain", n] => Ok(RootPreset::Antichain(count(n)?)),
            ["simplex", n, d] => Ok(RootPreset::Simplex(count(n)?, d.parse()?)),
            ["freesemilattice", n] => Ok(RootPreset::FreeSemilattice(count(n)?)),
            _ => Err(Error::Parse(format!(
                "unknown root preset {s:?}; expected edgeless:n, antichain:n, simplex:n:d or freesemilattice:n"
            ))),
        }
    }
}

/// Every labelled structure of `class` on exactly `n` points (names `t0…`),
/// in a deterministic order. Metric distances range over `grid`.
pub fn all_structures(class: StructureClass, n: usize, grid: &[Rational]) -> Vec<FiniteStructure> {
    let names = default_names(n, "t");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    match class {
        StructureClass::Graph => {
            for mask in 0u64..(1 << pairs.len()) {
                let edges: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &p)| p).collect();
                out.push(FiniteStructure::graph(names.clone(), &edges).expect("simple graph"));
            }
        }
        StructureClass::Poset => {
            // each unordered pair: incomparable, i<j, or j<i
            for code in 0..3u64.pow(pairs.len() as u32) {
                let mut le = Matrix::from_fn(n, |i, j| i == j);
                let mut c = code;
                for &(i, j) in &pairs {
                    match c % 3 {
                        1 => le.set(i, j, true),
                        2 => le.set(j, i, true),
                        _ => {}
                    }
                    c /= 3;
                }
                let s = FiniteStructure::new(names.clone(), Table::Poset(le)).expect("shape");
                if s.is_valid() {
                    out.push(s);
                }
            }
        }
        StructureClass::Metric => {
            if n == 0 {
                return out;
            }
            let g = grid.len() as u64;
            for code in 0..g.pow(pairs.len() as u32) {
                let mut d = Matrix::filled(n, Rational::ZERO);
                let mut c = code;
                for &(i, j) in &pairs {
                    let v = grid[(c % g) as usize];
                    d.set(i, j, v);
                    d.set(j, i, v);
                    c /= g;
                }
                let s = FiniteStructure::new(names.clone(), Table::Metric(d)).expect("shape");
                if s.is_valid() {
                    out.push(s);
                }
            }
        }
        StructureClass::Semilattice => {
            if n == 0 {
                return out;
            }
            let nn = n as u64;
            for code in 0..nn.pow(pairs.len() as u32) {
                let mut m = Matrix::from_fn(n, |i, j| if i == j { i } else { 0 });
                let mut c = code;
                for &(i, j) in &pairs {
                    let v = (c % nn) as usize;
                    m.set(i, j, v);
                    m.set(j, i, v);
                    c /= nn;
                }
                let s = FiniteStructure::new(names.clone(), Table::Semilattice(m)).expect("shape");
                if s.is_valid() {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// All labelled structures with `1..=max_size` points.
pub fn all_structures_up_to(class: StructureClass, max_size: usize, grid: &[Rational]) -> Vec<FiniteStructure> {
    (1..=max_size).flat_map(|n| all_structures(class, n, grid)).collect()
}
