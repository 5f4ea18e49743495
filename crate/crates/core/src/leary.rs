//! Right-angled Artin groups and Leary presentations built from flag complexes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::complex::TwoComplex;
use crate::error::{Error, Result};
use crate::flag::FlagComplex;
use crate::presentation::Presentation;
use crate::word::{commutator, free_reduce, Letter, Word};

/// One generator per vertex, one commutator per edge.
pub fn raag_presentation(l: &FlagComplex) -> Result<Presentation> {
    let rels = l
        .edges()
        .into_iter()
        .map(|(u, v)| commutator(&Word::new(vec![u as Letter + 1]), &Word::new(vec![v as Letter + 1])))
        .collect();
    Presentation::new(l.vertices().to_vec(), rels)
}

/// 2-skeleton of the Salvetti complex with its height data.
#[derive(Clone, Debug)]
pub struct Salvetti {
    pub complex: TwoComplex,
    /// Height increment of each edge under the map sending every generator to 1.
    pub edge_heights: BTreeMap<String, i64>,
}

pub fn salvetti_two_skeleton(l: &FlagComplex) -> Result<Salvetti> {
    let complex = raag_presentation(l)?.presentation_complex();
    let edge_heights = complex.edges().iter().map(|e| (e.id.clone(), 1)).collect();
    Ok(Salvetti { complex, edge_heights })
}

/// A Leary presentation with its relator families kept apart.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LearyPresentation {
    #[serde(skip)]
    pub presentation: Presentation,
    pub generators: usize,
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
    /// Fundamental loops used for the third family, as directed-edge generator indices.
    pub loops: Vec<Vec<usize>>,
    pub pi1_certified_trivial: bool,
    pub warnings: Vec<String>,
}

fn directed_name(l: &FlagComplex, u: usize, v: usize) -> String {
    format!("{}>{}", l.vertices()[u], l.vertices()[v])
}

/// Generators are directed edges. `R₁` holds one `e·ē` per undirected edge;
/// `R₂` holds `abc` and `a⁻¹b⁻¹c⁻¹` for each triangle `u<v<w` with
/// `a = u→v, b = v→w, c = w→u`; `R₃` holds `a₁ⁿ…a_lⁿ` for each fundamental
/// loop of a breadth-first spanning tree that survives Tietze elimination,
/// and each nonzero `n ∈ S`.
pub fn leary_presentation(l: &FlagComplex, s: &[i64]) -> Result<LearyPresentation> {
    if !l.is_flag() {
        return Err(Error::input("Leary presentation needs a flag complex"));
    }
    if !l.is_connected() {
        return Err(Error::input("Leary presentation needs a connected complex"));
    }
    let mut warnings = Vec::new();
    if !l.no_local_cut_points() {
        warnings.push(format!("local cut points at {:?}", l.local_cut_points()));
    }
    let edges = l.edges();
    let mut names = Vec::with_capacity(2 * edges.len());
    let mut gen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(u, v) in &edges {
        gen.insert((u, v), names.len());
        names.push(directed_name(l, u, v));
        gen.insert((v, u), names.len());
        names.push(directed_name(l, v, u));
    }
    let g = |u: usize, v: usize| gen[&(u, v)] as Letter + 1;
    let mut rels = Vec::new();
    for &(u, v) in &edges {
        rels.push(Word::new(vec![g(u, v), g(v, u)]));
    }
    let r1 = rels.len();
    let triangles: Vec<[usize; 3]> = l.simplices_of_dim(2).into_iter().map(|t| [t[0], t[1], t[2]]).collect();
    for &[u, v, w] in &triangles {
        let (a, b, c) = (g(u, v), g(v, w), g(w, u));
        rels.push(Word::new(vec![a, b, c]));
        rels.push(Word::new(vec![-a, -b, -c]));
    }
    let r2 = rels.len() - r1;

    let (parent, order) = bfs_tree(l);
    let tree: BTreeSet<(usize, usize)> = order.iter().filter_map(|&v| parent[v].map(|p| (p.min(v), p.max(v)))).collect();
    let cotree: Vec<(usize, usize)> = edges.iter().copied().filter(|e| !tree.contains(e)).collect();
    let survivors = tietze_survivors(&cotree, &triangles);
    let pi1_trivial = survivors.is_empty();
    let path_to_root = |mut v: usize| {
        let mut p = Vec::new();
        while let Some(q) = parent[v] {
            p.push((v, q));
            v = q;
        }
        p
    };
    let mut loops = Vec::new();
    for &k in &survivors {
        let (u, v) = cotree[k];
        let mut walk: Vec<(usize, usize)> = path_to_root(u).into_iter().rev().map(|(a, b)| (b, a)).collect();
        walk.push((u, v));
        walk.extend(path_to_root(v));
        loops.push(walk.iter().map(|&(a, b)| gen[&(a, b)]).collect::<Vec<_>>());
    }
    let exps: BTreeSet<i64> = s.iter().copied().filter(|&n| n != 0).collect();
    for lp in &loops {
        for &n in &exps {
            let mut w = Vec::new();
            for &x in lp {
                let letter = if n > 0 { x as Letter + 1 } else { -(x as Letter + 1) };
                w.extend(std::iter::repeat_n(letter, n.unsigned_abs() as usize));
            }
            rels.push(Word::new(w));
        }
    }
    let r3 = rels.len() - r1 - r2;
    if s.contains(&0) && !loops.is_empty() {
        warnings.push("n = 0 gives empty loop words, which are omitted".into());
    }
    let presentation = Presentation::new(names, rels)?;
    Ok(LearyPresentation {
        generators: presentation.ngens(),
        presentation,
        r1,
        r2,
        r3,
        loops,
        pi1_certified_trivial: pi1_trivial,
        warnings,
    })
}

/// Breadth-first spanning tree from vertex 0 with neighbours in index order.
fn bfs_tree(l: &FlagComplex) -> (Vec<Option<usize>>, Vec<usize>) {
    let n = l.nvertices();
    let mut nbrs = vec![Vec::new(); n];
    for (u, v) in l.edges() {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    for x in &mut nbrs {
        x.sort_unstable();
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    if n == 0 {
        return (parent, order);
    }
    let mut q = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = q.pop_front() {
        order.push(v);
        for &u in &nbrs[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                q.push_back(u);
            }
        }
    }
    (parent, order)
}

/// π₁ of the 2-skeleton is generated by the cotree edges subject to one
/// relator per triangle. Generators occurring exactly once in some relator
/// are eliminated greedily, shortest relator first; the indices of the
/// remaining cotree edges are returned.
fn tietze_survivors(cotree: &[(usize, usize)], triangles: &[[usize; 3]]) -> Vec<usize> {
    let idx: BTreeMap<(usize, usize), usize> = cotree.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let letter = |a: usize, b: usize| -> Option<Letter> {
        if a < b {
            idx.get(&(a, b)).map(|&i| i as Letter + 1)
        } else {
            idx.get(&(b, a)).map(|&i| -(i as Letter + 1))
        }
    };
    let mut rels: Vec<Option<Vec<Letter>>> = triangles
        .iter()
        .map(|&[u, v, w]| {
            let r: Vec<Letter> = [letter(u, v), letter(v, w), letter(w, u)].into_iter().flatten().collect();
            Some(cyclic(free_reduce(&r)))
        })
        .collect();
    let mut occurs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cotree.len()];
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, r) in rels.iter().enumerate() {
        let r = r.as_ref().unwrap();
        for &x in r {
            occurs[x.unsigned_abs() as usize - 1].insert(i);
        }
        if !r.is_empty() {
            queue.insert((r.len(), i));
        }
    }
    let mut alive = vec![true; cotree.len()];
    while let Some((len, i)) = queue.pop_first() {
        let Some(r) = rels[i].clone() else { continue };
        if r.len() != len {
            continue;
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in &r {
            *counts.entry(x.unsigned_abs() as usize - 1).or_default() += 1;
        }
        let Some((&gx, _)) = counts.iter().find(|&(_, &c)| c == 1) else { continue };
        // r = p·x^ε·q  ⇒  x^ε = p⁻¹q⁻¹, rotated so that x^ε leads.
        let pos = r.iter().position(|&y| y.unsigned_abs() as usize - 1 == gx).unwrap();
        let rot: Vec<Letter> = r[pos..].iter().chain(&r[..pos]).copied().collect();
        let eps = rot[0].signum();
        let rest_inv: Vec<Letter> = rot[1..].iter().rev().map(|&y| -y).collect();
        let image: Vec<Letter> = if eps > 0 { rest_inv } else { rot[1..].to_vec() };
        alive[gx] = false;
        rels[i] = None;
        let users: Vec<usize> = occurs[gx].iter().copied().filter(|&j| j != i).collect();
        occurs[gx].clear();
        for j in users {
            let Some(old) = rels[j].take() else { continue };
            let mut out = Vec::new();
            for &y in &old {
                if y.unsigned_abs() as usize - 1 == gx {
                    if y > 0 {
                        out.extend_from_slice(&image);
                    } else {
                        out.extend(image.iter().rev().map(|&z| -z));
                    }
                } else {
                    out.push(y);
                }
            }
            let new = cyclic(free_reduce(&out));
            for &y in &new {
                occurs[y.unsigned_abs() as usize - 1].insert(j);
            }
            if !new.is_empty() {
                queue.insert((new.len(), j));
            }
            rels[j] = Some(new);
        }
    }
    (0..cotree.len()).filter(|&k| alive[k]).collect()
}

fn cyclic(mut w: Vec<Letter>) -> Vec<Letter> {
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::numbered;

    #[test]
    fn raag_counts() {
        let two = numbered(2, &[], false).unwrap();
        assert!(raag_presentation(&two).unwrap().relators().is_empty());
        let c4 = numbered(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]], false).unwrap();
        let p = raag_presentation(&c4).unwrap();
        assert_eq!((p.ngens(), p.relators().len()), (4, 4));
        let tri = numbered(3, &[&[0, 1, 2]], true).unwrap();
        let s = salvetti_two_skeleton(&tri).unwrap();
        assert_eq!((s.complex.vertices().len(), s.complex.edges().len(), s.complex.faces().len()), (1, 3, 3));
        assert!(s.edge_heights.values().all(|&h| h == 1));
    }

    #[test]
    fn leary_counts() {
        let tri = numbered(3, &[&[0, 1, 2]], true).unwrap();
        let lp = leary_presentation(&tri, &[0, 1]).unwrap();
        assert_eq!((lp.generators, lp.r1, lp.r2, lp.r3), (6, 3, 2, 0));
        assert!(lp.pi1_certified_trivial);
        let sq = numbered(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]], false).unwrap();
        let lp = leary_presentation(&sq, &[1, 2]).unwrap();
        assert_eq!((lp.generators, lp.r1, lp.r2, lp.r3), (8, 4, 0, 2));
        assert_eq!(lp.loops, vec![vec![0, 4, 6, 3]]);
        assert!(!lp.warnings.is_empty());
        assert!(leary_presentation(&sq, &[]).unwrap().r3 == 0);
    }

    #[test]
    fn leary_rejects_non_flag() {
        let hollow = numbered(3, &[&[0, 1], &[1, 2], &[0, 2]], false).unwrap();
        assert!(leary_presentation(&hollow, &[1]).is_err());
    }

    #[test]
    fn octahedron_is_simply_connected() {
        let t = numbered(3, &[&[0, 1, 2]], true).unwrap();
        let o = crate::flag::spherical_double(&t);
        assert!(leary_presentation(&o, &[1]).unwrap().pi1_certified_trivial);
    }
}
