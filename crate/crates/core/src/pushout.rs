//! Strict pushouts: one-point homomorphism extension squares and
//! amalgamated sums over embeddings.

use std::collections::HashSet;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::congruence::{close_under_meet, quotient_table, Congruence};
use crate::error::{Error, Result};
use crate::extension::{find_generator, realize, ExtensionCode};
use crate::morphism::Morphism;
use crate::rational::Rational;
use crate::structure::{transitive_closure, FiniteStructure, Matrix, StructureClass, Table};

/// Two morphisms out of a common apex `B`: `left: B → C` and `right: B → B′`.
#[derive(Clone, Debug)]
pub struct Span {
    left: Morphism,
    right: Morphism,
}

impl Span {
    pub fn new(left: Morphism, right: Morphism) -> Result<Self> {
        if left.source() != right.source() {
            return Err(Error::SpanInvariant("both legs must start at the same apex".into()));
        }
        for t in [left.target(), right.target()] {
            if t.class() != left.source().class() {
                return Err(Error::ClassMismatch {
                    expected: left.source().class(),
                    found: t.class(),
                });
            }
        }
        Ok(Span { left, right })
    }

    pub fn apex(&self) -> &Arc<FiniteStructure> {
        self.left.source()
    }

    pub fn left(&self) -> &Morphism {
        &self.left
    }

    pub fn right(&self) -> &Morphism {
        &self.right
    }
}

/// How the pushout object was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum Witness {
    /// New vertex adjacent exactly to the listed positions of `B′`.
    GraphAdjoin { new_point: usize, neighbors: Vec<usize> },
    /// New element inserted above `below` and under `above`, then closed.
    PosetInsert { new_point: usize, below: Vec<usize>, above: Vec<usize> },
    /// `f(L) ∩ f(U) = {image}`: the new element is identified with `image`.
    PosetCollapse { image: usize },
    /// New point at the listed distances from the points of `B′`.
    MetricAdjoin { new_point: usize, distances: Vec<Rational> },
    /// `P = C/θ` with `θ` generated by the kernel of `f`; blocks list
    /// positions of `C`.
    SemilatticeQuotient { blocks: Vec<Vec<usize>> },
    /// Glued sum; `added` are the positions of `C ∖ B` in `P`.
    Amalgam { added: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct PushoutSquare {
    span: Span,
    object: Arc<FiniteStructure>,
    left_leg: Morphism,
    right_leg: Morphism,
    witness: Witness,
}

impl PushoutSquare {
    pub fn span(&self) -> &Span {
        &self.span
    }

    pub fn object(&self) -> &Arc<FiniteStructure> {
        &self.object
    }

    /// `C → P`.
    pub fn left_leg(&self) -> &Morphism {
        &self.left_leg
    }

    /// `B′ → P`.
    pub fn right_leg(&self) -> &Morphism {
        &self.right_leg
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    /// Whether `left_leg ∘ left = right_leg ∘ right`.
    pub fn commutes(&self) -> bool {
        let b = self.span.apex().len();
        (0..b).all(|w| {
            self.left_leg.apply(self.span.left.apply(w)) == self.right_leg.apply(self.span.right.apply(w))
        })
    }

    /// Copy of the square with `object` swapped for `other` (same carrier
    /// size, legs kept). Only useful for testing oracles against corrupted
    /// objects.
    pub fn with_object(&self, other: FiniteStructure) -> Result<Self> {
        let object = Arc::new(other);
        Ok(PushoutSquare {
            span: self.span.clone(),
            left_leg: Morphism::new(self.left_leg.source().clone(), object.clone(), self.left_leg.map().to_vec())?,
            right_leg: Morphism::new(self.right_leg.source().clone(), object.clone(), self.right_leg.map().to_vec())?,
            object,
            witness: self.witness.clone(),
        })
    }
}

impl Serialize for PushoutSquare {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PushoutSquare", 9)?;
        st.serialize_field("apex", self.span.apex().as_ref())?;
        st.serialize_field("extension", self.span.left.target().as_ref())?;
        st.serialize_field("image", self.span.right.target().as_ref())?;
        st.serialize_field("left", self.span.left.map())?;
        st.serialize_field("right", self.span.right.map())?;
        st.serialize_field("object", self.object.as_ref())?;
        st.serialize_field("left_leg", self.left_leg.map())?;
        st.serialize_field("right_leg", self.right_leg.map())?;
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}

/// `wanted`, primed until it is not in `taken`.
pub(crate) fn fresh_name(taken: &HashSet<String>, wanted: &str) -> String {
    let mut name = wanted.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

fn names_of(s: &FiniteStructure) -> HashSet<String> {
    s.carrier().iter().cloned().collect()
}

fn internal(what: &str) -> Error {
    Error::Internal(what.to_string())
}

/// Asserts the strict contract on a freshly built square.
fn seal(span: Span, object: FiniteStructure, left_map: Vec<usize>, right_map: Vec<usize>, witness: Witness, strict_ap: bool) -> Result<PushoutSquare> {
    if let crate::structure::ValidationReport::Fail { violation } = object.validate()? {
        return Err(Error::Internal(format!("pushout object fails validation: {violation}")));
    }
    let object = Arc::new(object);
    let left_leg = Morphism::new(span.left.target().clone(), object.clone(), left_map)?;
    let right_leg = Morphism::new(span.right.target().clone(), object.clone(), right_map)?;
    let sq = PushoutSquare {
        span,
        object,
        left_leg,
        right_leg,
        witness,
    };
    if !sq.commutes() {
        return Err(internal("pushout square does not commute"));
    }
    if !sq.right_leg.kind().is_embedding() {
        return Err(Error::Internal(format!("right leg is {}, expected an embedding", sq.right_leg.kind())));
    }
    if strict_ap {
        if !sq.left_leg.kind().is_embedding() {
            return Err(Error::Internal(format!("left leg is {}, expected an embedding", sq.left_leg.kind())));
        }
    } else if !sq.left_leg.kind().is_surjection() {
        return Err(Error::Internal(format!("left leg is {}, expected a surjection", sq.left_leg.kind())));
    }
    Ok(sq)
}

/// Pushout of an embedding `B ↪ C` (with `C` generated by `B` and one new
/// element) along a surjection `f: B ↠ B′`.
pub fn pushout_1phep(span: Span) -> Result<PushoutSquare> {
    let (left, right) = (&span.left, &span.right);
    if !left.kind().is_embedding() {
        return Err(Error::SpanInvariant(format!("left leg is {}, expected an embedding", left.kind())));
    }
    if !right.kind().is_surjection() {
        return Err(Error::SpanInvariant(format!("right leg is {}, expected a surjection", right.kind())));
    }
    let c = left.target().clone();
    let bp = right.target().clone();
    let base_pos = left.map();
    let f = right.map();
    let x = find_generator(&c, base_pos).map_err(|e| Error::SpanInvariant(e.to_string()))?;
    let m = bp.len();
    let image_of = |ci: usize| base_pos.iter().position(|&p| p == ci);

    match c.class() {
        StructureClass::Graph => {
            let mut neighbors: Vec<usize> =
                (0..base_pos.len()).filter(|&w| c.adjacent(base_pos[w], x)).map(|w| f[w]).collect();
            neighbors.sort_unstable();
            neighbors.dedup();
            let name = fresh_name(&names_of(&bp), c.name(x));
            let p = realize(&bp, &ExtensionCode::Graph { neighbors: neighbors.clone() }, &name)
                .map_err(|e| Error::Internal(format!("graph pushout: {e}")))?;
            let lmap = (0..c.len()).map(|ci| image_of(ci).map_or(m, |w| f[w])).collect();
            seal(span, p, lmap, (0..m).collect(), Witness::GraphAdjoin { new_point: m, neighbors }, false)
        }
        StructureClass::Poset => {
            let set = |pred: &dyn Fn(usize) -> bool| {
                let mut v: Vec<usize> = (0..base_pos.len()).filter(|&w| pred(base_pos[w])).map(|w| f[w]).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let below = set(&|b| c.le(b, x));
            let above = set(&|b| c.le(x, b));
            let common: Vec<usize> = below.iter().copied().filter(|y| above.contains(y)).collect();
            match common.as_slice() {
                [] => {
                    let mut le = Matrix::from_fn(m + 1, |i, j| match (i == m, j == m) {
                        (false, false) => bp.le(i, j),
                        (true, true) => true,
                        (false, true) => below.contains(&i),
                        (true, false) => above.contains(&j),
                    });
                    transitive_closure(&mut le);
                    let mut carrier = bp.carrier().to_vec();
                    carrier.push(fresh_name(&names_of(&bp), c.name(x)));
                    let p = FiniteStructure::new(carrier, Table::Poset(le))?;
                    let lmap = (0..c.len()).map(|ci| image_of(ci).map_or(m, |w| f[w])).collect();
                    let witness = Witness::PosetInsert { new_point: m, below, above };
                    seal(span, p, lmap, (0..m).collect(), witness, false)
                }
                [y0] => {
                    let y0 = *y0;
                    let p = (*bp).clone();
                    let lmap = (0..c.len()).map(|ci| image_of(ci).map_or(y0, |w| f[w])).collect();
                    seal(span, p, lmap, (0..m).collect(), Witness::PosetCollapse { image: y0 }, false)
                }
                many => Err(Error::Internal(format!(
                    "f(L) ∩ f(U) has {} elements {:?}; antisymmetry allows at most one",
                    many.len(),
                    many
                ))),
            }
        }
        StructureClass::Metric => {
            if base_pos.is_empty() {
                return Err(Error::Precondition("metric pushouts need a non-empty base".into()));
            }
            let distances: Vec<Rational> = (0..m)
                .map(|y| {
                    (0..base_pos.len())
                        .map(|w| c.distance(x, base_pos[w]) + bp.distance(f[w], y))
                        .min()
                        .expect("non-empty base")
                })
                .collect();
            let name = fresh_name(&names_of(&bp), c.name(x));
            let p = realize(&bp, &ExtensionCode::Metric { distances: distances.clone() }, &name)
                .map_err(|e| Error::Internal(format!("metric pushout: {e}")))?;
            let lmap = (0..c.len()).map(|ci| image_of(ci).map_or(m, |w| f[w])).collect();
            seal(span, p, lmap, (0..m).collect(), Witness::MetricAdjoin { new_point: m, distances }, false)
        }
        StructureClass::Semilattice => {
            let mut pairs = Vec::new();
            for w in 0..base_pos.len() {
                for v in w + 1..base_pos.len() {
                    if f[w] == f[v] {
                        pairs.push((base_pos[w], base_pos[v]));
                    }
                }
            }
            let theta = close_under_meet(c.len(), |a, b| c.meet(a, b), pairs);
            // block of f(b), for each point of B′
            let mut block_of_y: Vec<Option<usize>> = vec![None; m];
            for w in 0..base_pos.len() {
                let blk = theta.block_of(base_pos[w]);
                match block_of_y[f[w]] {
                    Some(prev) if prev != blk => return Err(internal("a fibre of f splits across blocks")),
                    _ => block_of_y[f[w]] = Some(blk),
                }
            }
            let block_of_y: Vec<usize> = block_of_y.into_iter().map(|b| b.expect("f is surjective")).collect();
            for y in 0..m {
                for z in y + 1..m {
                    if block_of_y[y] == block_of_y[z] {
                        return Err(Error::Internal(format!(
                            "ι is not injective: {} and {} fall into one block of θ",
                            bp.name(y),
                            bp.name(z)
                        )));
                    }
                }
            }
            let (p, order) = reorder_quotient(&c, &theta, &block_of_y, &bp)?;
            let lmap = (0..c.len()).map(|ci| order[theta.block_of(ci)]).collect();
            let witness = Witness::SemilatticeQuotient {
                blocks: theta.blocks().to_vec(),
            };
            seal(span, p, lmap, (0..m).collect(), witness, false)
        }
    }
}

/// `C/θ` with the blocks of `first` placed first (named after `B′`), then
/// the remaining blocks by least member. Returns the object and the new
/// position of every block.
fn reorder_quotient(
    c: &FiniteStructure,
    theta: &Congruence,
    first: &[usize],
    bp: &FiniteStructure,
) -> Result<(FiniteStructure, Vec<usize>)> {
    let table = quotient_table(c.len(), |a, b| c.meet(a, b), theta)?;
    let k = theta.blocks().len();
    let mut seq: Vec<usize> = first.to_vec();
    seq.extend((0..k).filter(|b| !first.contains(b)));
    let mut order = vec![0; k];
    for (pos, &b) in seq.iter().enumerate() {
        order[b] = pos;
    }
    let mut taken = names_of(bp);
    let mut carrier = bp.carrier().to_vec();
    for &b in &seq[first.len()..] {
        let name = fresh_name(&taken, c.name(theta.blocks()[b][0]));
        taken.insert(name.clone());
        carrier.push(name);
    }
    let meet = Matrix::from_fn(k, |i, j| order[*table.get(seq[i], seq[j])]);
    Ok((FiniteStructure::new(carrier, Table::Semilattice(meet))?, order))
}

/// Amalgamated sum of `Z ⊇ B ⊆ C`, where `z_base[w]` and `c_base[w]` are the
/// positions of the `w`-th base element. `Z` keeps its positions; the
/// elements of `C ∖ B` follow in `C` order, then any new meets. Returns the
/// sum and the position of every element of `C` in it.
pub(crate) fn glue(
    z: &FiniteStructure,
    z_base: &[usize],
    c: &FiniteStructure,
    c_base: &[usize],
) -> Result<(FiniteStructure, Vec<usize>)> {
    if z.class() != c.class() {
        return Err(Error::ClassMismatch {
            expected: z.class(),
            found: c.class(),
        });
    }
    if c.class() == StructureClass::Semilattice {
        return glue_semilattice(z, z_base, c, c_base);
    }
    if c.class() == StructureClass::Metric && c_base.is_empty() {
        return Err(Error::Precondition("metric amalgamated sums need a non-empty base".into()));
    }
    let nz = z.len();
    let added: Vec<usize> = (0..c.len()).filter(|ci| !c_base.contains(ci)).collect();
    let mut cpos = vec![0; c.len()];
    for (w, &ci) in c_base.iter().enumerate() {
        cpos[ci] = z_base[w];
    }
    for (k, &ci) in added.iter().enumerate() {
        cpos[ci] = nz + k;
    }
    let n = nz + added.len();
    // where a sum position lives: Z, or C ∖ B
    let side = |p: usize| if p < nz { Ok(p) } else { Err(added[p - nz]) };
    let mut taken = names_of(z);
    let mut carrier = z.carrier().to_vec();
    for &ci in &added {
        let name = fresh_name(&taken, c.name(ci));
        taken.insert(name.clone());
        carrier.push(name);
    }
    let table = match c.class() {
        StructureClass::Graph => Table::Graph(Matrix::from_fn(n, |p, q| match (side(p), side(q)) {
            (Ok(a), Ok(b)) => z.adjacent(a, b),
            (Err(a), Err(b)) => c.adjacent(a, b),
            (Ok(a), Err(cb)) | (Err(cb), Ok(a)) => {
                c_base.iter().zip(z_base).any(|(&cw, &zw)| zw == a && c.adjacent(cw, cb))
            }
        })),
        StructureClass::Poset => {
            let mut le = Matrix::from_fn(n, |p, q| match (side(p), side(q)) {
                (Ok(a), Ok(b)) => z.le(a, b),
                (Err(a), Err(b)) => c.le(a, b),
                (Ok(a), Err(cb)) => c_base.iter().zip(z_base).any(|(&cw, &zw)| zw == a && c.le(cw, cb)),
                (Err(cb), Ok(a)) => c_base.iter().zip(z_base).any(|(&cw, &zw)| zw == a && c.le(cb, cw)),
            });
            transitive_closure(&mut le);
            Table::Poset(le)
        }
        StructureClass::Metric => Table::Metric(Matrix::from_fn(n, |p, q| match (side(p), side(q)) {
            (Ok(a), Ok(b)) => z.distance(a, b),
            (Err(a), Err(b)) => c.distance(a, b),
            (Ok(a), Err(cb)) | (Err(cb), Ok(a)) => c_base
                .iter()
                .zip(z_base)
                .map(|(&cw, &zw)| z.distance(a, zw) + c.distance(cw, cb))
                .min()
                .expect("non-empty base"),
        })),
        StructureClass::Semilattice => unreachable!(),
    };
    Ok((FiniteStructure::new(carrier, table)?, cpos))
}

/// Coproduct `(Z ∪ {⊤}) × (C ∪ {⊤}) ∖ {(⊤, ⊤)}` under componentwise meet,
/// modulo the congruence generated by identifying the two copies of `B`.
fn glue_semilattice(
    z: &FiniteStructure,
    z_base: &[usize],
    c: &FiniteStructure,
    c_base: &[usize],
) -> Result<(FiniteStructure, Vec<usize>)> {
    let (nz, nc) = (z.len(), c.len());
    let width = nc + 1;
    // element (a, b) with a ∈ 0..=nz, b ∈ 0..=nc; nz and nc stand for ⊤
    let id = |a: usize, b: usize| a * width + b;
    let len = (nz + 1) * width - 1;
    let meet = |p: usize, q: usize| {
        let (a1, b1) = (p / width, p % width);
        let (a2, b2) = (q / width, q % width);
        let a = match (a1 == nz, a2 == nz) {
            (true, _) => a2,
            (_, true) => a1,
            _ => z.meet(a1, a2),
        };
        let b = match (b1 == nc, b2 == nc) {
            (true, _) => b2,
            (_, true) => b1,
            _ => c.meet(b1, b2),
        };
        id(a, b)
    };
    let pairs = c_base.iter().zip(z_base).map(|(&cw, &zw)| (id(zw, nc), id(nz, cw)));
    let theta = close_under_meet(len, meet, pairs);
    let table = quotient_table(len, meet, &theta)?;

    let mut seq: Vec<usize> = Vec::new();
    let mut seen: HashSet<usize> = HashSet::new();
    for a in 0..nz {
        let b = theta.block_of(id(a, nc));
        if !seen.insert(b) {
            return Err(Error::Internal(format!("{} collapses in the amalgamated sum", z.name(a))));
        }
        seq.push(b);
    }
    let mut cpos = vec![0; nc];
    let mut taken = names_of(z);
    let mut carrier = z.carrier().to_vec();
    for ci in 0..nc {
        let b = theta.block_of(id(nz, ci));
        if let Some(w) = c_base.iter().position(|&p| p == ci) {
            if b != theta.block_of(id(z_base[w], nc)) {
                return Err(internal("base copies were not identified"));
            }
            cpos[ci] = z_base[w];
            continue;
        }
        if !seen.insert(b) {
            return Err(Error::Internal(format!("{} collapses in the amalgamated sum", c.name(ci))));
        }
        cpos[ci] = seq.len();
        seq.push(b);
        let name = fresh_name(&taken, c.name(ci));
        taken.insert(name.clone());
        carrier.push(name);
    }
    for b in 0..theta.blocks().len() {
        if seen.insert(b) {
            let least = theta.blocks()[b][0];
            let (a, ci) = (least / width, least % width);
            let name = fresh_name(&taken, &format!("{}^{}", z.name(a), c.name(ci)));
            taken.insert(name.clone());
            carrier.push(name);
            seq.push(b);
        }
    }
    let mut order = vec![0; seq.len()];
    for (pos, &b) in seq.iter().enumerate() {
        order[b] = pos;
    }
    let meet_table = Matrix::from_fn(seq.len(), |i, j| order[*table.get(seq[i], seq[j])]);
    Ok((FiniteStructure::new(carrier, Table::Semilattice(meet_table))?, cpos))
}

/// Amalgamated sum of two embeddings `B ↪ C` (left) and `B ↪ Z` (right).
/// `Z` keeps its positions in the sum.
pub fn amalgamated_sum(span: Span) -> Result<PushoutSquare> {
    for (leg, side) in [(&span.left, "left"), (&span.right, "right")] {
        if !leg.kind().is_embedding() {
            return Err(Error::SpanInvariant(format!("{side} leg is {}, expected an embedding", leg.kind())));
        }
    }
    let (sum, cpos) = glue(span.right.target(), span.right.map(), span.left.target(), span.left.map())?;
    let nz = span.right.target().len();
    let added: Vec<usize> = cpos.iter().copied().filter(|&p| p >= nz).collect();
    let rmap = (0..nz).collect();
    seal(span, sum, cpos, rmap, Witness::Amalgam { added }, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::MeetValue;
    use crate::morphism::MorphismKind;

    fn arc(s: FiniteStructure) -> Arc<FiniteStructure> {
        Arc::new(s)
    }

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn hom(src: &Arc<FiniteStructure>, dst: &Arc<FiniteStructure>, map: &[usize]) -> Morphism {
        Morphism::new(src.clone(), dst.clone(), map.to_vec()).unwrap()
    }

    #[test]
    fn graph_identity_pushout_renames_the_extension() {
        let b = arc(FiniteStructure::graph(names(&["b"]), &[]).unwrap());
        let c = arc(FiniteStructure::graph(names(&["b", "x"]), &[(0, 1)]).unwrap());
        let sq = pushout_1phep(Span::new(hom(&b, &c, &[0]), hom(&b, &b, &[0])).unwrap()).unwrap();
        assert_eq!(sq.object().len(), 2);
        assert!(sq.object().adjacent(0, 1));
        assert_eq!(sq.left_leg().map(), &[0, 1]);
        assert_eq!(sq.left_leg().kind(), MorphismKind::Isomorphism);
    }

    #[test]
    fn poset_collapse_case() {
        // l < x < u over l < u, with f collapsing B to a point
        let b = arc(FiniteStructure::poset(names(&["l", "u"]), &[(0, 1)]).unwrap());
        let c = arc(FiniteStructure::poset(names(&["l", "u", "x"]), &[(0, 2), (2, 1), (0, 1)]).unwrap());
        let p = arc(FiniteStructure::poset(names(&["p"]), &[]).unwrap());
        let sq = pushout_1phep(Span::new(hom(&b, &c, &[0, 1]), hom(&b, &p, &[0, 0])).unwrap()).unwrap();
        assert_eq!(sq.object().len(), 1);
        assert_eq!(sq.left_leg().map(), &[0, 0, 0]);
        assert_eq!(sq.witness(), &Witness::PosetCollapse { image: 0 });
    }

    #[test]
    fn metric_collapse_uses_min_formula() {
        let two = Rational::integer(2);
        let b = arc(crate::presets::simplex(2, two).unwrap());
        let code = ExtensionCode::Metric {
            distances: vec![Rational::ONE, Rational::ONE],
        };
        let c = arc(realize(&b, &code, "x").unwrap());
        let p = arc(crate::presets::simplex(1, Rational::ONE).unwrap());
        let sq = pushout_1phep(Span::new(hom(&b, &c, &[0, 1]), hom(&b, &p, &[0, 0])).unwrap()).unwrap();
        assert_eq!(sq.object().distance(0, 1), Rational::ONE);
    }

    #[test]
    fn semilattice_quotient_example() {
        // a < b, x below a; collapsing a ~ b leaves the 2-chain x < [a]
        let b = arc(crate::presets::chain_semilattice(2).unwrap());
        let code = ExtensionCode::Semilattice {
            meets: vec![MeetValue::New(0), MeetValue::New(0)],
        };
        let c = arc(realize(&b, &code, "x").unwrap());
        let one = arc(crate::presets::chain_semilattice(1).unwrap());
        let sq = pushout_1phep(Span::new(hom(&b, &c, &[0, 1]), hom(&b, &one, &[0, 0])).unwrap()).unwrap();
        assert_eq!(sq.object().len(), 2);
        assert_eq!(sq.witness(), &Witness::SemilatticeQuotient { blocks: vec![vec![0, 1], vec![2]] });
        assert!(sq.object().le(1, 0));
    }

    #[test]
    fn semilattice_degenerate_case_collapses_generator() {
        // a < x < b; collapsing a ~ b forces x into the same block
        let b = arc(crate::presets::chain_semilattice(2).unwrap());
        let code = ExtensionCode::Semilattice {
            meets: vec![MeetValue::Base(0), MeetValue::New(0)],
        };
        let c = arc(realize(&b, &code, "x").unwrap());
        let one = arc(crate::presets::chain_semilattice(1).unwrap());
        let sq = pushout_1phep(Span::new(hom(&b, &c, &[0, 1]), hom(&b, &one, &[0, 0])).unwrap()).unwrap();
        assert_eq!(sq.object().len(), 1);
    }

    #[test]
    fn rejects_non_surjective_right_leg() {
        let b = arc(crate::presets::edgeless(1).unwrap());
        let c = arc(crate::presets::edgeless(2).unwrap());
        let b2 = arc(crate::presets::edgeless(2).unwrap());
        let err = pushout_1phep(Span::new(hom(&b, &c, &[0]), hom(&b, &b2, &[0])).unwrap());
        assert!(matches!(err, Err(Error::SpanInvariant(_))));
    }

    #[test]
    fn graph_sum_is_a_path() {
        let b = arc(FiniteStructure::graph(names(&["b"]), &[]).unwrap());
        let a = arc(FiniteStructure::graph(names(&["b", "a"]), &[(0, 1)]).unwrap());
        let z = arc(FiniteStructure::graph(names(&["b", "c"]), &[(0, 1)]).unwrap());
        let sq = amalgamated_sum(Span::new(hom(&b, &a, &[0]), hom(&b, &z, &[0])).unwrap()).unwrap();
        let s = sq.object();
        assert_eq!(s.carrier(), &["b", "c", "a"]);
        assert!(s.adjacent(0, 1) && s.adjacent(0, 2) && !s.adjacent(1, 2));
    }

    #[test]
    fn metric_sum_routes_through_glue_point() {
        let y = arc(crate::presets::simplex(1, Rational::ONE).unwrap());
        let x = arc(FiniteStructure::metric(names(&["u0", "a"]), Matrix::from_fn(2, |i, j| if i == j { Rational::ZERO } else { Rational::ONE })).unwrap());
        let z = arc(FiniteStructure::metric(names(&["u0", "c"]), Matrix::from_fn(2, |i, j| if i == j { Rational::ZERO } else { Rational::ONE })).unwrap());
        let sq = amalgamated_sum(Span::new(hom(&y, &x, &[0]), hom(&y, &z, &[0])).unwrap()).unwrap();
        assert_eq!(sq.object().distance(1, 2), Rational::integer(2));
    }

    #[test]
    fn poset_sum_keeps_incomparable_tops() {
        // a > b and b < c over {b}
        let b = arc(FiniteStructure::poset(names(&["b"]), &[]).unwrap());
        let left = arc(FiniteStructure::poset(names(&["b", "a"]), &[(0, 1)]).unwrap());
        let right = arc(FiniteStructure::poset(names(&["b", "c"]), &[(0, 1)]).unwrap());
        let sq = amalgamated_sum(Span::new(hom(&b, &left, &[0]), hom(&b, &right, &[0])).unwrap()).unwrap();
        let s = sq.object();
        assert!(!s.le(1, 2) && !s.le(2, 1));
        assert!(s.le(0, 1) && s.le(0, 2));
    }

    #[test]
    fn absorbing_sum_when_base_equals_extension() {
        for class in StructureClass::ALL {
            let grid = [Rational::ONE, Rational::integer(2)];
            for z in crate::presets::all_structures(class, 2, &grid) {
                let z = arc(z);
                let b = arc(z.induced_substructure(&[0]).unwrap());
                let sq = amalgamated_sum(Span::new(hom(&b, &b, &[0]), hom(&b, &z, &[0])).unwrap()).unwrap();
                assert_eq!(**sq.object(), *z);
            }
        }
    }

    #[test]
    fn semilattice_sum_of_two_lower_points() {
        // root {a}, x < a and y < a: sum {a, x, y, x∧y}
        let a = arc(crate::presets::chain_semilattice(1).unwrap());
        let code = ExtensionCode::Semilattice { meets: vec![MeetValue::New(0)] };
        let cx = arc(realize(&a, &code, "x").unwrap());
        let cy = arc(realize(&a, &code, "y").unwrap());
        let sq = amalgamated_sum(Span::new(hom(&a, &cx, &[0]), hom(&a, &cy, &[0])).unwrap()).unwrap();
        assert_eq!(sq.object().len(), 4);
        assert_eq!(sq.object().carrier()[3], "y^x");
    }
}
