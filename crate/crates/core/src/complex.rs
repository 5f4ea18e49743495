//! Finite combinatorial 2-complexes, integer cellular chains and homology.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::SparseMatrix;

/// A directed 1-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// One step of an attaching cycle: an edge index traversed forwards
/// (`forward == true`) or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl SignedEdge {
    pub fn sign(self) -> i64 {
        if self.forward {
            1
        } else {
            -1
        }
    }

    pub fn reversed(self) -> Self {
        SignedEdge { edge: self.edge, forward: !self.forward }
    }
}

/// A 2-cell with its ordered attaching cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    pub cycle: Vec<SignedEdge>,
}

/// Finite combinatorial 2-complex. Immutable once built; construct with
/// [`TwoComplexBuilder`] or [`TwoComplex::from_json`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoComplex {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    face_index: HashMap<String, usize>,
}

/// Incremental constructor that checks every invariant on [`build`](Self::build).
#[derive(Clone, Debug, Default)]
pub struct TwoComplexBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
    faces: Vec<(String, Vec<(String, bool)>)>,
}

impl TwoComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: impl Into<String>) -> &mut Self {
        self.vertices.push(id.into());
        self
    }

    pub fn edge(&mut self, id: impl Into<String>, src: impl Into<String>, dst: impl Into<String>) -> &mut Self {
        self.edges.push((id.into(), src.into(), dst.into()));
        self
    }

    /// Adds a face; the cycle lists `(edge id, forward)` pairs.
    pub fn face(&mut self, id: impl Into<String>, cycle: Vec<(String, bool)>) -> &mut Self {
        self.faces.push((id.into(), cycle));
        self
    }

    pub fn build(&self) -> Result<TwoComplex> {
        let mut vertex_index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate vertex id {v:?}")));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_index = HashMap::new();
        for (i, (id, s, t)) in self.edges.iter().enumerate() {
            let src = *vertex_index
                .get(s)
                .ok_or_else(|| Error::input(format!("edge {id:?} has undeclared source {s:?}")))?;
            let dst = *vertex_index
                .get(t)
                .ok_or_else(|| Error::input(format!("edge {id:?} has undeclared target {t:?}")))?;
            if edge_index.insert(id.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate edge id {id:?}")));
            }
            edges.push(Edge { id: id.clone(), src, dst });
        }
        let mut faces = Vec::with_capacity(self.faces.len());
        let mut face_index = HashMap::new();
        for (i, (id, cyc)) in self.faces.iter().enumerate() {
            let mut cycle = Vec::with_capacity(cyc.len());
            for (e, fwd) in cyc {
                let edge = *edge_index
                    .get(e)
                    .ok_or_else(|| Error::input(format!("face {id:?} uses undeclared edge {e:?}")))?;
                cycle.push(SignedEdge { edge, forward: *fwd });
            }
            check_closed(&edges, id, &cycle)?;
            if face_index.insert(id.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate face id {id:?}")));
            }
            faces.push(Face { id: id.clone(), cycle });
        }
        Ok(TwoComplex {
            vertices: self.vertices.clone(),
            edges,
            faces,
            vertex_index,
            edge_index,
            face_index,
        })
    }
}

fn check_closed(edges: &[Edge], id: &str, cycle: &[SignedEdge]) -> Result<()> {
    if cycle.is_empty() {
        return Err(Error::input(format!("face {id:?} has an empty attaching cycle")));
    }
    let ends = |s: SignedEdge| {
        let e = &edges[s.edge];
        if s.forward {
            (e.src, e.dst)
        } else {
            (e.dst, e.src)
        }
    };
    for k in 0..cycle.len() {
        let (_, end) = ends(cycle[k]);
        let (start, _) = ends(cycle[(k + 1) % cycle.len()]);
        if end != start {
            return Err(Error::input(format!("attaching cycle of face {id:?} is not closed at step {k}")));
        }
    }
    Ok(())
}

impl TwoComplex {
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_idx(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_idx(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn face_idx(&self, id: &str) -> Option<usize> {
        self.face_index.get(id).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Signed incidence of each edge in the boundary of face `f`.
    pub fn face_boundary(&self, f: usize) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for s in &self.faces[f].cycle {
            *out.entry(s.edge).or_insert(0) += s.sign();
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Cellular boundary of a 1- or 2-chain.
    pub fn boundary(&self, c: &ChainVec) -> Result<ChainVec> {
        match c.dim {
            1 => {
                let mut out = ChainVec::zero(0);
                for (id, &k) in &c.coeffs {
                    let e = &self.edges[self.edge_idx(id).ok_or_else(|| Error::input(format!("unknown edge {id:?}")))?];
                    out.add_term(&self.vertices[e.dst], k);
                    out.add_term(&self.vertices[e.src], -k);
                }
                Ok(out)
            }
            2 => {
                let mut out = ChainVec::zero(1);
                for (id, &k) in &c.coeffs {
                    let f = self.face_idx(id).ok_or_else(|| Error::input(format!("unknown face {id:?}")))?;
                    for s in &self.faces[f].cycle {
                        out.add_term(&self.edges[s.edge].id, k * s.sign());
                    }
                }
                Ok(out)
            }
            d => Err(Error::input(format!("boundary needs a chain of dimension 1 or 2, got {d}"))),
        }
    }

    /// The 1-chain traced by a closed or open edge walk.
    pub fn walk_chain(&self, walk: &[SignedEdge]) -> ChainVec {
        let mut out = ChainVec::zero(1);
        for s in walk {
            out.add_term(&self.edges[s.edge].id, s.sign());
        }
        out
    }

    fn boundary_matrices(&self) -> (SparseMatrix, SparseMatrix) {
        let mut d1 = SparseMatrix::new(self.vertices.len(), self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            d1.add(e.dst, j, &BigInt::from(1));
            d1.add(e.src, j, &BigInt::from(-1));
        }
        let mut d2 = SparseMatrix::new(self.edges.len(), self.faces.len());
        for (j, f) in self.faces.iter().enumerate() {
            for s in &f.cycle {
                d2.add(s.edge, j, &BigInt::from(s.sign()));
            }
        }
        (d1, d2)
    }

    /// Integral homology from Smith normal forms of the boundary maps.
    pub fn homology(&self) -> HomologySummary {
        let (d1, d2) = self.boundary_matrices();
        let r1 = d1.diagonalize();
        let r2 = d2.diagonalize();
        let (v, e, f) = (self.vertices.len(), self.edges.len(), self.faces.len());
        let b0 = v - r1.rank();
        let b1 = e - r1.rank() - r2.rank();
        let b2 = f - r2.rank();
        HomologySummary {
            betti: [b0, b1, b2],
            torsion: [r1.torsion(), r2.torsion(), Vec::new()],
        }
    }

    /// Whether the 1-chain `gamma` is the boundary of some integral 2-chain.
    pub fn is_boundary(&self, gamma: &ChainVec) -> Result<bool> {
        if gamma.dim != 1 {
            return Err(Error::input("is_boundary expects a 1-chain"));
        }
        let mut rhs = vec![BigInt::from(0); self.edges.len()];
        for (id, &k) in &gamma.coeffs {
            let i = self.edge_idx(id).ok_or_else(|| Error::input(format!("unknown edge {id:?}")))?;
            rhs[i] = BigInt::from(k);
        }
        let (_, d2) = self.boundary_matrices();
        Ok(d2.diagonalize_with_rhs(rhs).rhs_in_span == Some(true))
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { id: e.id.clone(), src: self.vertices[e.src].clone(), dst: self.vertices[e.dst].clone() })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceJson {
                    id: f.id.clone(),
                    cycle: f.cycle.iter().map(|s| signed_token(&self.edges[s.edge].id, s.forward)).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        let mut b = TwoComplexBuilder::new();
        for v in &j.vertices {
            b.vertex(v.clone());
        }
        for e in &j.edges {
            b.edge(e.id.clone(), e.src.clone(), e.dst.clone());
        }
        for f in &j.faces {
            b.face(f.id.clone(), f.cycle.iter().map(|t| parse_signed_token(t)).collect());
        }
        b.build()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ComplexJson = serde_json::from_str(s).map_err(|e| Error::input(format!("complex JSON: {e}")))?;
        Self::from_json(&j)
    }
}

/// `"-e"` for reversed traversal, `"e"` otherwise.
pub fn signed_token(id: &str, forward: bool) -> String {
    if forward {
        id.to_string()
    } else {
        format!("-{id}")
    }
}

pub fn parse_signed_token(t: &str) -> (String, bool) {
    match t.strip_prefix('-') {
        Some(rest) => (rest.to_string(), false),
        None => (t.to_string(), true),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FaceJson {
    pub id: String,
    pub cycle: Vec<String>,
}

/// Wire form of a [`TwoComplex`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub faces: Vec<FaceJson>,
}

/// Sparse integer chain of a fixed dimension. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainVec {
    pub dim: u8,
    coeffs: BTreeMap<String, i64>,
}

impl ChainVec {
    pub fn zero(dim: u8) -> Self {
        ChainVec { dim, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<I, S>(dim: u8, terms: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut c = ChainVec::zero(dim);
        for (id, k) in terms {
            c.add_term(&id.into(), k);
        }
        c
    }

    pub fn add_term(&mut self, id: &str, k: i64) {
        if k == 0 {
            return;
        }
        let entry = self.coeffs.entry(id.to_string()).or_insert(0);
        *entry = entry.checked_add(k).expect("chain coefficient overflow");
        if *entry == 0 {
            self.coeffs.remove(id);
        }
    }

    pub fn coeff(&self, id: &str) -> i64 {
        self.coeffs.get(id).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// ℓ¹ norm.
    pub fn l1(&self) -> u64 {
        self.coeffs.values().map(|v| v.unsigned_abs()).sum()
    }

    pub fn plus(&self, other: &ChainVec) -> ChainVec {
        assert_eq!(self.dim, other.dim, "adding chains of different dimension");
        let mut out = self.clone();
        for (id, k) in other.terms() {
            out.add_term(id, k);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> ChainVec {
        let mut out = ChainVec::zero(self.dim);
        for (id, v) in self.terms() {
            out.add_term(id, v * k);
        }
        out
    }

    pub fn as_map(&self) -> &BTreeMap<String, i64> {
        &self.coeffs
    }
}

impl fmt::Display for ChainVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (id, k) in &self.coeffs {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{k:+}*{id}")?;
        }
        Ok(())
    }
}

/// Betti numbers and torsion coefficients in degrees 0, 1, 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub betti: [usize; 3],
    #[serde(serialize_with = "ser_torsion")]
    pub torsion: [Vec<BigInt>; 3],
}

fn ser_torsion<S: serde::Serializer>(t: &[Vec<BigInt>; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for dim in t {
        let v: Vec<String> = dim.iter().map(|d| d.to_string()).collect();
        seq.serialize_element(&v)?;
    }
    seq.end()
}

impl HomologySummary {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti[0] as i64 - self.betti[1] as i64 + self.betti[2] as i64
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti == [1, 0, 0] && self.torsion.iter().all(|t| t.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> TwoComplex {
        let mut b = TwoComplexBuilder::new();
        for v in ["p", "q", "r", "s"] {
            b.vertex(v);
        }
        b.edge("e1", "p", "q").edge("e2", "q", "r").edge("e3", "r", "s").edge("e4", "s", "p");
        b.face("sq", ["e1", "e2", "e3", "e4"].iter().map(|e| (e.to_string(), true)).collect());
        b.build().unwrap()
    }

    fn presentation_complex_a3() -> TwoComplex {
        let mut b = TwoComplexBuilder::new();
        b.vertex("o").edge("a", "o", "o");
        b.face("r", vec![("a".into(), true); 3]);
        b.build().unwrap()
    }

    #[test]
    fn square_boundary() {
        let x = square();
        let s = ChainVec::from_terms(2, [("sq", 1)]);
        let d = x.boundary(&s).unwrap();
        assert_eq!(d, ChainVec::from_terms(1, [("e1", 1), ("e2", 1), ("e3", 1), ("e4", 1)]));
        assert!(x.boundary(&d).unwrap().is_empty());
    }

    #[test]
    fn empty_and_cancelling_chains() {
        let x = square();
        assert!(x.boundary(&ChainVec::zero(2)).unwrap().is_empty());
        let c = ChainVec::from_terms(2, [("sq", 1), ("sq", -1)]);
        assert!(c.is_empty());
        assert!(x.boundary(&c).unwrap().is_empty());
    }

    #[test]
    fn unknown_cell_is_rejected() {
        let x = square();
        let c = ChainVec::from_terms(2, [("nope", 1)]);
        assert!(matches!(x.boundary(&c), Err(Error::Input(_))));
        assert!(x.boundary(&ChainVec::from_terms(0, [("p", 1)])).is_err());
    }

    #[test]
    fn torsion_of_cyclic_group() {
        let h = presentation_complex_a3().homology();
        assert_eq!(h.betti, [1, 0, 0]);
        assert_eq!(h.torsion[1], vec![BigInt::from(3)]);
    }

    #[test]
    fn single_vertex() {
        let mut b = TwoComplexBuilder::new();
        b.vertex("x");
        let x = b.build().unwrap();
        assert_eq!(x.homology().betti, [1, 0, 0]);
        assert_eq!(x.euler_characteristic(), 1);
    }

    #[test]
    fn vertices_only_euler() {
        let mut b = TwoComplexBuilder::new();
        for v in ["a", "b", "c", "d", "e"] {
            b.vertex(v);
        }
        assert_eq!(b.build().unwrap().euler_characteristic(), 5);
    }

    #[test]
    fn open_cycle_rejected() {
        let mut b = TwoComplexBuilder::new();
        b.vertex("p").vertex("q").edge("e", "p", "q");
        b.face("f", vec![("e".into(), true)]);
        assert!(b.build().is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut b = TwoComplexBuilder::new();
        b.vertex("p").vertex("p");
        assert!(b.build().is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = square();
        let s = serde_json::to_string(&x.to_json()).unwrap();
        assert_eq!(TwoComplex::from_json_str(&s).unwrap(), x);
        let j = r#"{"vertices":["o"],"edges":[{"id":"a","src":"o","dst":"o"}],"faces":[{"id":"f","cycle":["a","-a","a"]}]}"#;
        let y = TwoComplex::from_json_str(j).unwrap();
        assert_eq!(y.face_boundary(0).get(&0), Some(&1));
    }

    #[test]
    fn boundary_membership() {
        let x = square();
        let g = ChainVec::from_terms(1, [("e1", 1), ("e2", 1), ("e3", 1), ("e4", 1)]);
        assert!(x.is_boundary(&g).unwrap());
        let y = presentation_complex_a3();
        assert!(!y.is_boundary(&ChainVec::from_terms(1, [("a", 1)])).unwrap());
        assert!(y.is_boundary(&ChainVec::from_terms(1, [("a", 6)])).unwrap());
    }
}
