//! Finite simplicial complexes with flag and local-cut-point validation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{TwoComplex, TwoComplexBuilder};
use crate::error::{Error, Result};

/// A face-closed simplicial complex. Simplices are sorted vertex-index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagComplex {
    vertices: Vec<String>,
    simplices: BTreeSet<Vec<usize>>,
    is_flag: bool,
    is_connected: bool,
    cut_points: Vec<usize>,
}

/// Wire form: simplices by vertex name.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagComplexJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub simplices: Vec<Vec<String>>,
    #[serde(default)]
    pub flag_closure: bool,
}

/// Validation summary.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct FlagReport {
    pub is_flag: bool,
    pub is_connected: bool,
    pub no_local_cut_points: bool,
    pub local_cut_points: Vec<String>,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
}

impl FlagComplex {
    /// Builds from names. Without `flag_closure` the input must be face-closed;
    /// with it, faces and all cliques of the 1-skeleton are added.
    pub fn new(vertices: Vec<String>, simplices: Vec<Vec<String>>, flag_closure: bool) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if index.len() != vertices.len() {
            return Err(Error::input("duplicate vertex ids"));
        }
        let mut idx = Vec::new();
        for s in &simplices {
            let mut t = Vec::new();
            for v in s {
                t.push(*index.get(v.as_str()).ok_or_else(|| Error::input(format!("unknown vertex {v:?}")))?);
            }
            idx.push(t);
        }
        Self::from_indices(vertices, idx, flag_closure)
    }

    pub fn from_indices(vertices: Vec<String>, simplices: Vec<Vec<usize>>, flag_closure: bool) -> Result<Self> {
        let n = vertices.len();
        let mut set = BTreeSet::new();
        for v in 0..n {
            set.insert(vec![v]);
        }
        for mut s in simplices {
            s.sort_unstable();
            let len = s.len();
            s.dedup();
            if s.len() != len {
                return Err(Error::input("simplex repeats a vertex"));
            }
            if s.is_empty() {
                continue;
            }
            if s.iter().any(|&v| v >= n) {
                return Err(Error::input("simplex uses an undeclared vertex"));
            }
            set.insert(s);
        }
        if flag_closure {
            let listed: Vec<Vec<usize>> = set.iter().cloned().collect();
            for s in listed {
                for f in faces(&s) {
                    set.insert(f);
                }
            }
            let adj = adjacency(n, &set);
            set.extend(all_cliques(&adj));
        } else {
            for s in &set {
                for f in faces(s) {
                    if !set.contains(&f) {
                        return Err(Error::input(format!(
                            "input is not face-closed: face {:?} of {:?} is missing",
                            names(&vertices, &f),
                            names(&vertices, s)
                        )));
                    }
                }
            }
        }
        let mut c = FlagComplex { vertices, simplices: set, is_flag: false, is_connected: false, cut_points: vec![] };
        c.revalidate();
        Ok(c)
    }

    fn revalidate(&mut self) {
        let adj = adjacency(self.vertices.len(), &self.simplices);
        self.is_flag = all_cliques(&adj).iter().all(|q| self.simplices.contains(q));
        self.is_connected = components(self.vertices.len(), &adj).len() <= 1;
        self.cut_points = (0..self.vertices.len())
            .filter(|&v| {
                let lk = self.link(v);
                !(lk.vertices.len() > 1 && lk.is_connected)
            })
            .collect();
    }

    pub fn from_json(j: &FlagComplexJson) -> Result<Self> {
        Self::new(j.vertices.clone(), j.simplices.clone(), j.flag_closure)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: FlagComplexJson = serde_json::from_str(s).map_err(|e| Error::input(format!("flag complex JSON: {e}")))?;
        Self::from_json(&j)
    }

    /// Every simplex of dimension at least one, by name.
    pub fn to_json(&self) -> FlagComplexJson {
        let simplices = self.simplices.iter().filter(|s| s.len() > 1).map(|s| names(&self.vertices, s)).collect();
        FlagComplexJson { vertices: self.vertices.clone(), simplices, flag_closure: false }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn nvertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        let mut t = s.to_vec();
        t.sort_unstable();
        t.dedup();
        t.is_empty() || self.simplices.contains(&t)
    }

    pub fn simplices_of_dim(&self, k: usize) -> Vec<&Vec<usize>> {
        self.simplices.iter().filter(|s| s.len() == k + 1).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices_of_dim(1).into_iter().map(|s| (s[0], s[1])).collect()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    pub fn is_flag(&self) -> bool {
        self.is_flag
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected
    }

    pub fn no_local_cut_points(&self) -> bool {
        self.cut_points.is_empty()
    }

    pub fn local_cut_points(&self) -> Vec<&str> {
        self.cut_points.iter().map(|&v| self.vertices[v].as_str()).collect()
    }

    pub fn report(&self) -> FlagReport {
        FlagReport {
            is_flag: self.is_flag,
            is_connected: self.is_connected,
            no_local_cut_points: self.no_local_cut_points(),
            local_cut_points: self.local_cut_points().into_iter().map(String::from).collect(),
            f_vector: self.f_vector(),
            euler_characteristic: self.euler_characteristic(),
        }
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges()
            .into_iter()
            .filter_map(|(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    /// Link of a vertex, with vertex names inherited.
    pub fn link(&self, v: usize) -> FlagComplex {
        let nbrs: Vec<usize> = self.neighbors(v);
        let pos: BTreeMap<usize, usize> = nbrs.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let simplices: BTreeSet<Vec<usize>> = self
            .simplices
            .iter()
            .filter(|s| s.len() >= 2 && s.contains(&v))
            .map(|s| s.iter().filter(|&&u| u != v).map(|u| pos[u]).collect())
            .collect();
        let verts: Vec<String> = nbrs.iter().map(|&u| self.vertices[u].clone()).collect();
        let adj = adjacency(verts.len(), &simplices);
        let is_connected = components(verts.len(), &adj).len() <= 1;
        let is_flag = all_cliques(&adj).iter().all(|q| simplices.contains(q));
        FlagComplex { vertices: verts, simplices, is_flag, is_connected, cut_points: vec![] }
    }

    /// The 2-skeleton as a combinatorial 2-complex: edges oriented from the
    /// smaller to the larger index, triangles attached along `ab + bc − ac`.
    pub fn two_skeleton(&self) -> TwoComplex {
        let mut b = TwoComplexBuilder::new();
        for v in &self.vertices {
            b.vertex(v.clone());
        }
        let eid = |s: &[usize]| format!("{}-{}", self.vertices[s[0]], self.vertices[s[1]]);
        for s in self.simplices_of_dim(1) {
            b.edge(eid(s), self.vertices[s[0]].clone(), self.vertices[s[1]].clone());
        }
        for s in self.simplices_of_dim(2) {
            let (x, y, z) = (s[0], s[1], s[2]);
            b.face(
                format!("{}-{}-{}", self.vertices[x], self.vertices[y], self.vertices[z]),
                vec![(eid(&[x, y]), true), (eid(&[y, z]), true), (eid(&[x, z]), false)],
            );
        }
        b.build().expect("2-skeleton of a simplicial complex is well formed")
    }

    /// Relabels vertices; simplices are unchanged.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> FlagComplex {
        let mut c = self.clone();
        c.vertices = self.vertices.iter().map(|v| f(v)).collect();
        c
    }
}

/// Vertex set `{v+, v-}`; every sign choice on every simplex.
pub fn spherical_double(l: &FlagComplex) -> FlagComplex {
    let mut vertices = Vec::with_capacity(2 * l.nvertices());
    for v in &l.vertices {
        vertices.push(format!("{v}+"));
        vertices.push(format!("{v}-"));
    }
    let mut simplices = Vec::new();
    for s in &l.simplices {
        for mask in 0u32..(1 << s.len()) {
            simplices.push(s.iter().enumerate().map(|(i, &v)| 2 * v + ((mask >> i) & 1) as usize).collect());
        }
    }
    FlagComplex::from_indices(vertices, simplices, false).expect("spherical double is face-closed")
}

/// Pushout identifying edge `ek = (a, b)` of `k` with `ef = (c, d)` of `f`,
/// `a ~ c` and `b ~ d`. Other vertices of `f` keep their names, primed on
/// collision.
pub fn glue_edge(k: &FlagComplex, f: &FlagComplex, ek: (&str, &str), ef: (&str, &str)) -> Result<FlagComplex> {
    let find = |c: &FlagComplex, v: &str| c.vertex_index(v).ok_or_else(|| Error::input(format!("unknown vertex {v:?}")));
    let (a, b) = (find(k, ek.0)?, find(k, ek.1)?);
    let (c, d) = (find(f, ef.0)?, find(f, ef.1)?);
    if !k.contains(&[a, b]) || a == b {
        return Err(Error::input(format!("{}–{} is not an edge of the first complex", ek.0, ek.1)));
    }
    if !f.contains(&[c, d]) || c == d {
        return Err(Error::input(format!("{}–{} is not an edge of the second complex", ef.0, ef.1)));
    }
    let mut vertices = k.vertices.clone();
    let mut taken: BTreeSet<String> = vertices.iter().cloned().collect();
    let mut map = vec![usize::MAX; f.nvertices()];
    map[c] = a;
    map[d] = b;
    for (i, name) in f.vertices.iter().enumerate() {
        if i == c || i == d {
            continue;
        }
        let mut n = name.clone();
        while taken.contains(&n) {
            n.push('\'');
        }
        taken.insert(n.clone());
        map[i] = vertices.len();
        vertices.push(n);
    }
    let mut simplices: Vec<Vec<usize>> = k.simplices.iter().cloned().collect();
    simplices.extend(f.simplices.iter().map(|s| s.iter().map(|&v| map[v]).collect()));
    let glued = FlagComplex::from_indices(vertices, simplices, false)?;
    if !glued.is_flag {
        let adj = adjacency(glued.nvertices(), &glued.simplices);
        let bad = all_cliques(&adj).into_iter().find(|q| !glued.simplices.contains(q)).expect("non-flag has a missing clique");
        return Err(Error::Construction(format!("gluing creates the unfilled clique {:?}", names(&glued.vertices, &bad))));
    }
    Ok(glued)
}

/// Brute-force isomorphism test of abstract simplicial complexes.
pub fn isomorphic(x: &FlagComplex, y: &FlagComplex) -> bool {
    if x.nvertices() != y.nvertices() || x.f_vector() != y.f_vector() {
        return false;
    }
    let n = x.nvertices();
    let deg = |c: &FlagComplex| -> Vec<Vec<usize>> {
        (0..n)
            .map(|v| {
                let mut d = vec![0; c.f_vector().len()];
                for s in &c.simplices {
                    if s.contains(&v) {
                        d[s.len() - 1] += 1;
                    }
                }
                d
            })
            .collect()
    };
    let (dx, dy) = (deg(x), deg(y));
    let ax = adjacency(n, &x.simplices);
    let ay = adjacency(n, &y.simplices);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        i: usize,
        x: &FlagComplex,
        y: &FlagComplex,
        dx: &[Vec<usize>],
        dy: &[Vec<usize>],
        ax: &[Vec<bool>],
        ay: &[Vec<bool>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = map.len();
        if i == n {
            return x.simplices.iter().all(|s| {
                let mut t: Vec<usize> = s.iter().map(|&v| map[v]).collect();
                t.sort_unstable();
                y.simplices.contains(&t)
            });
        }
        for j in 0..n {
            if used[j] || dx[i] != dy[j] || (0..i).any(|k| ax[i][k] != ay[j][map[k]]) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if extend(i + 1, x, y, dx, dy, ax, ay, map, used) {
                return true;
            }
            used[j] = false;
        }
        map[i] = usize::MAX;
        false
    }
    extend(0, x, y, &dx, &dy, &ax, &ay, &mut map, &mut used)
}

fn names(vertices: &[String], s: &[usize]) -> Vec<String> {
    s.iter().map(|&v| vertices[v].clone()).collect()
}

/// Codimension-one faces of a simplex.
fn faces(s: &[usize]) -> Vec<Vec<usize>> {
    if s.len() <= 1 {
        return vec![];
    }
    (0..s.len()).map(|i| s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()).collect()
}

fn adjacency(n: usize, simplices: &BTreeSet<Vec<usize>>) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for s in simplices.iter().filter(|s| s.len() == 2) {
        adj[s[0]][s[1]] = true;
        adj[s[1]][s[0]] = true;
    }
    adj
}

/// Every clique of the graph, as sorted vertex lists.
pub(crate) fn all_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    while let Some(q) = stack.pop() {
        let last = *q.last().unwrap();
        for u in last + 1..n {
            if q.iter().all(|&v| adj[v][u]) {
                let mut r = q.clone();
                r.push(u);
                stack.push(r);
            }
        }
        out.push(q);
    }
    out.sort();
    out
}

fn components(n: usize, adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for u in 0..n {
                if adj[v][u] && !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
            i += 1;
        }
        comps.push(comp);
    }
    comps
}

/// Convenience constructor: vertices `v0..v{n-1}` and the given simplices.
pub fn numbered(n: usize, simplices: &[&[usize]], flag_closure: bool) -> Result<FlagComplex> {
    FlagComplex::from_indices((0..n).map(|i| format!("v{i}")).collect(), simplices.iter().map(|s| s.to_vec()).collect(), flag_closure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hollow_triangle() -> FlagComplex {
        numbered(3, &[&[0, 1], &[1, 2], &[0, 2]], false).unwrap()
    }

    #[test]
    fn hollow_triangle_not_flag() {
        assert!(!hollow_triangle().is_flag());
        let closed = numbered(3, &[&[0, 1], &[1, 2], &[0, 2]], true).unwrap();
        assert!(closed.is_flag());
        assert_eq!(closed.f_vector(), vec![3, 3, 1]);
    }

    #[test]
    fn full_simplex_has_no_cut_points() {
        let t = numbered(3, &[&[0, 1, 2]], true).unwrap();
        assert!(t.is_flag() && t.is_connected() && t.no_local_cut_points());
    }

    #[test]
    fn wedge_has_cut_point() {
        let w = numbered(5, &[&[0, 1, 2], &[0, 3, 4]], true).unwrap();
        assert_eq!(w.local_cut_points(), vec!["v0"]);
    }

    #[test]
    fn face_closure_required() {
        assert!(numbered(3, &[&[0, 1, 2]], false).is_err());
    }

    #[test]
    fn double_counts() {
        let v = numbered(1, &[], false).unwrap();
        assert_eq!(spherical_double(&v).f_vector(), vec![2]);
        let e = numbered(2, &[&[0, 1]], false).unwrap();
        let d = spherical_double(&e);
        assert_eq!(d.f_vector(), vec![4, 4]);
        assert!(isomorphic(&d, &numbered(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]], false).unwrap()));
        let t = numbered(3, &[&[0, 1, 2]], true).unwrap();
        let o = spherical_double(&t);
        assert_eq!(o.f_vector(), vec![6, 12, 8]);
        assert!(o.is_flag());
    }

    #[test]
    fn glue_two_triangles() {
        let t = numbered(3, &[&[0, 1, 2]], true).unwrap();
        let g = glue_edge(&t, &t, ("v0", "v1"), ("v0", "v1")).unwrap();
        assert_eq!(g.f_vector(), vec![4, 5, 2]);
        assert!(g.is_flag() && g.no_local_cut_points());
        assert_eq!(g.euler_characteristic(), 2 * t.euler_characteristic() - 1);
    }

    #[test]
    fn glue_reports_unfilled_clique() {
        let hollow = numbered(3, &[&[0, 1], &[0, 2], &[1, 2]], false).unwrap();
        let e = numbered(2, &[&[0, 1]], false).unwrap();
        let err = glue_edge(&hollow, &e, ("v0", "v1"), ("v0", "v1")).unwrap_err();
        assert_eq!(err.code(), "construction");
        assert!(err.to_string().contains("[\"v0\", \"v1\", \"v2\"]"));
    }

    #[test]
    fn json_round_trip() {
        let t = numbered(4, &[&[0, 1, 2], &[2, 3]], true).unwrap();
        let back = FlagComplex::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn two_skeleton_of_simplex_is_contractible() {
        let t = numbered(3, &[&[0, 1, 2]], true).unwrap();
        assert_eq!(t.two_skeleton().homology().betti, [1, 0, 0]);
        let h = numbered(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]], false).unwrap();
        assert_eq!(h.two_skeleton().homology().betti, [1, 1, 0]);
    }

    proptest! {
        #[test]
        fn double_scales_f_vector(edges in proptest::collection::vec(any::<bool>(), 15)) {
            let pairs: Vec<Vec<usize>> = (0..6).flat_map(|a| (a + 1..6).map(move |b| vec![a, b])).collect();
            let chosen: Vec<Vec<usize>> = pairs.into_iter().zip(&edges).filter(|(_, &k)| k).map(|(p, _)| p).collect();
            let l = FlagComplex::from_indices((0..6).map(|i| format!("v{i}")).collect(), chosen, true).unwrap();
            let d = spherical_double(&l);
            for (k, (&a, &b)) in l.f_vector().iter().zip(&d.f_vector()).enumerate() {
                prop_assert_eq!(b, a << (k + 1));
            }
            prop_assert!(d.is_flag());
        }
    }
}
