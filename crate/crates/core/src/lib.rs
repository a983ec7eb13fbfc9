//! Finite structures, strict pushouts and amalgamated sums, one-point
//! extension catalogs, Fraïssé stage chains and lifted endomorphisms.

pub mod amalgam;
pub mod congruence;
pub mod dot;
pub mod error;
pub mod extension;
pub mod json;
pub mod lifting;
pub mod limits;
pub mod morphism;
pub mod oracle;
pub mod presets;
pub mod pushout;
pub mod rational;
pub mod structure;
pub mod suites;

pub use error::{Error, Result};
pub use morphism::{Morphism, MorphismKind};
pub use rational::Rational;
pub use structure::{FiniteStructure, Matrix, StructureClass, Table, ValidationReport, Violation};
