//! Barycentric subdivision of combinatorial 2-complexes.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{TwoComplex, TwoComplexBuilder};
use crate::error::{Error, Result};
use crate::flag::FlagComplex;

/// One subdivision step. New vertices are the old vertices, `e:<edge>` and
/// `f:<face>`. Each edge splits into two halves; a face with k sides becomes
/// 2k triangles coned from its barycentre.
pub fn subdivide_once(x: &TwoComplex) -> Result<TwoComplex> {
    let mut b = TwoComplexBuilder::new();
    for v in x.vertices() {
        b.vertex(v.clone());
    }
    for e in x.edges() {
        let m = format!("e:{}", e.id);
        b.vertex(m.clone());
        b.edge(format!("{}.0", e.id), x.vertices()[e.src].clone(), m.clone());
        b.edge(format!("{}.1", e.id), m, x.vertices()[e.dst].clone());
    }
    for f in x.faces() {
        let c = format!("f:{}", f.id);
        b.vertex(c.clone());
        let k = f.cycle.len();
        let corner = |i: usize| {
            let s = &f.cycle[i % k];
            let e = &x.edges()[s.edge];
            x.vertices()[if s.forward { e.src } else { e.dst }].clone()
        };
        for i in 0..k {
            b.edge(format!("{}.c{i}", f.id), c.clone(), corner(i));
            b.edge(format!("{}.m{i}", f.id), c.clone(), format!("e:{}", x.edges()[f.cycle[i].edge].id));
        }
        for i in 0..k {
            let s = &f.cycle[i];
            let eid = &x.edges()[s.edge].id;
            // The half touching corner i, then the half touching corner i+1.
            let (first, second) = if s.forward {
                ((format!("{eid}.0"), true), (format!("{eid}.1"), true))
            } else {
                ((format!("{eid}.1"), false), (format!("{eid}.0"), false))
            };
            let radial_c = |j: usize| format!("{}.c{}", f.id, j % k);
            let radial_m = format!("{}.m{i}", f.id);
            b.face(format!("{}.t{i}a", f.id), vec![first, (radial_m.clone(), false), (radial_c(i), true)]);
            b.face(format!("{}.t{i}b", f.id), vec![second, (radial_c(i + 1), false), (radial_m, true)]);
        }
    }
    b.build()
}

pub fn barycentric_subdivision(x: &TwoComplex, iterations: usize) -> Result<TwoComplex> {
    if iterations == 0 {
        return Err(Error::input("iterations must be at least 1"));
    }
    let mut cur = subdivide_once(x)?;
    for _ in 1..iterations {
        cur = subdivide_once(&cur)?;
    }
    Ok(cur)
}

/// Reads a 2-complex as a simplicial complex, failing unless every edge has
/// distinct endpoints, edges are determined by their endpoints, and every face
/// is a triangle on three distinct vertices determined by its vertex set.
pub fn to_simplicial(x: &TwoComplex) -> Result<FlagComplex> {
    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut by_ends: BTreeMap<(usize, usize), &str> = BTreeMap::new();
    for e in x.edges() {
        if e.src == e.dst {
            return Err(Error::input(format!("edge {} is a loop", e.id)));
        }
        let key = (e.src.min(e.dst), e.src.max(e.dst));
        if let Some(other) = by_ends.insert(key, &e.id) {
            return Err(Error::input(format!("edges {other} and {} are parallel", e.id)));
        }
        simplices.insert(vec![key.0, key.1]);
    }
    for f in x.faces() {
        if f.cycle.len() != 3 {
            return Err(Error::input(format!("face {} is not a triangle", f.id)));
        }
        let mut vs: Vec<usize> = f
            .cycle
            .iter()
            .map(|s| {
                let e = &x.edges()[s.edge];
                if s.forward {
                    e.src
                } else {
                    e.dst
                }
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != 3 || !simplices.insert(vs) {
            return Err(Error::input(format!("face {} is degenerate or repeated", f.id)));
        }
    }
    FlagComplex::from_indices(x.vertices().to_vec(), simplices.into_iter().collect(), false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(k: usize) -> TwoComplex {
        let mut b = TwoComplexBuilder::new();
        for i in 0..k {
            b.vertex(format!("v{i}"));
        }
        for i in 0..k {
            b.edge(format!("e{i}"), format!("v{i}"), format!("v{}", (i + 1) % k));
        }
        b.face("f", (0..k).map(|i| (format!("e{i}"), true)).collect());
        b.build().unwrap()
    }

    fn counts(x: &TwoComplex) -> (usize, usize, usize) {
        (x.vertices().len(), x.edges().len(), x.faces().len())
    }

    #[test]
    fn triangle_counts() {
        let s = barycentric_subdivision(&polygon(3), 1).unwrap();
        assert_eq!(counts(&s), (7, 12, 6));
        assert!(to_simplicial(&s).unwrap().is_flag());
    }

    #[test]
    fn square_counts() {
        let s = barycentric_subdivision(&polygon(4), 1).unwrap();
        assert_eq!(s.faces().len(), 8);
        assert_eq!(s.euler_characteristic(), 1);
    }

    #[test]
    fn loops_need_two_rounds() {
        // ⟨a | a²⟩: one vertex, one loop, one digon.
        let mut b = TwoComplexBuilder::new();
        b.vertex("*");
        b.edge("a", "*", "*");
        b.face("r", vec![("a".into(), true), ("a".into(), true)]);
        let x = b.build().unwrap();
        let once = barycentric_subdivision(&x, 1).unwrap();
        assert!(to_simplicial(&once).is_err());
        let twice = barycentric_subdivision(&x, 2).unwrap();
        let k = to_simplicial(&twice).unwrap();
        assert_eq!(k.euler_characteristic(), x.euler_characteristic());
        assert_eq!(twice.homology(), x.homology());
    }
}
