//! Ladder diagrams between carried geodesics and the inductive loop filling.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};

use super::path::normal_cube_path;
use super::CubeBall;
use crate::complex::{ChainVec, TwoComplex, TwoComplexBuilder};
use crate::error::{Error, Result};
use crate::word::{alphabet, Letter, Word};

/// A planar diagram with a combinatorial map into the cube ball.
#[derive(Clone, Debug)]
pub struct DiskDiagram {
    pub complex: TwoComplex,
    /// Diagram cell id to target cell id, for vertices, edges and faces.
    pub cell_map: BTreeMap<String, String>,
    /// Target vertex of each diagram vertex, by index.
    pub vertex_targets: Vec<usize>,
    /// Image of the diagram's 2-cells as a target 2-chain.
    pub chain: ChainVec,
    /// Number of 2-cell corners at each diagram vertex.
    pub link_sizes: Vec<usize>,
    /// Boundary circle as diagram edges with traversal direction.
    pub boundary: Vec<(String, bool)>,
}

impl DiskDiagram {
    pub fn vertex_count(&self) -> usize {
        self.complex.vertices().len()
    }

    pub fn face_count(&self) -> usize {
        self.complex.faces().len()
    }

    pub fn max_link_size(&self) -> usize {
        self.link_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "complex": self.complex.to_json(),
            "cellMap": self.cell_map,
            "chain": self.chain.terms().collect::<BTreeMap<_, _>>(),
            "boundary": self.boundary.iter().map(|(e, f)| crate::complex::signed_token(e, *f)).collect::<Vec<_>>(),
            "linkSizes": self.complex.vertices().iter().cloned().zip(self.link_sizes.iter().copied()).collect::<BTreeMap<_, _>>(),
        })
    }
}

/// Vertex `(path, position)` labels glued by union-find.
struct Builder<'a> {
    b: &'a CubeBall,
    vparent: Vec<usize>,
    vtarget: Vec<usize>,
    vlabel: HashMap<(usize, usize), usize>,
    /// Edge records: tail label, head label, target edge.
    edges: Vec<(usize, usize, usize)>,
    eparent: Vec<usize>,
    elabel: HashMap<(usize, usize), usize>,
    /// Squares as corner labels in cyclic order, with a chain multiplier.
    squares: Vec<([usize; 4], i64)>,
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn union(p: &mut [usize], x: usize, y: usize) {
    let (a, b) = (find(p, x), find(p, y));
    if a != b {
        p[a.max(b)] = a.min(b);
    }
}

impl<'a> Builder<'a> {
    fn new(b: &'a CubeBall) -> Self {
        Builder {
            b,
            vparent: vec![],
            vtarget: vec![],
            vlabel: HashMap::new(),
            edges: vec![],
            eparent: vec![],
            elabel: HashMap::new(),
            squares: vec![],
        }
    }

    fn add_path(&mut self, i: usize, start: usize, w: &Word) -> Result<()> {
        let verts = self.b.walk(start, w).ok_or_else(|| Error::Radius { required: self.b.norm(start) + w.len(), actual: self.b.radius() })?;
        for (k, &v) in verts.iter().enumerate() {
            let id = self.vparent.len();
            self.vparent.push(id);
            self.vtarget.push(v);
            self.vlabel.insert((i, k), id);
        }
        for k in 0..w.len() {
            let (x, y) = (self.vlabel[&(i, k)], self.vlabel[&(i, k + 1)]);
            let e = self.new_edge(x, y)?;
            self.elabel.insert((i, k), e);
        }
        Ok(())
    }

    fn v(&self, i: usize, k: usize) -> usize {
        self.vlabel[&(i, k)]
    }

    fn e(&self, i: usize, k: usize) -> usize {
        self.elabel[&(i, k)]
    }

    /// An edge between two labels whose targets are adjacent.
    fn new_edge(&mut self, x: usize, y: usize) -> Result<usize> {
        let (tx, ty) = (self.vtarget[x], self.vtarget[y]);
        let letter = alphabet(self.b.presentation().ngens())
            .into_iter()
            .find(|&l| self.b.step(tx, l) == Some(ty))
            .ok_or_else(|| Error::Construction("diagram edge between non-adjacent vertices".into()))?;
        let (e, fwd) = self.b.edge_of_step(tx, letter).expect("step exists");
        let id = self.edges.len();
        self.edges.push(if fwd { (x, y, e) } else { (y, x, e) });
        self.eparent.push(id);
        Ok(id)
    }

    fn glue_vertex(&mut self, x: usize, y: usize) {
        union(&mut self.vparent, x, y);
    }

    fn glue_edge(&mut self, x: usize, y: usize) {
        union(&mut self.eparent, x, y);
    }

    fn square(&mut self, corners: [usize; 4], sign: i64) {
        self.squares.push((corners, sign));
    }

    /// Quotients the labels into a 2-complex; `boundary` lists edge labels
    /// with the vertex label each is traversed from.
    fn finish(mut self, boundary: &[(usize, usize)]) -> Result<DiskDiagram> {
        let b = self.b;
        let nl = self.vparent.len();
        let mut vclass: HashMap<usize, usize> = HashMap::new();
        let mut vertex_targets = Vec::new();
        for x in 0..nl {
            let r = find(&mut self.vparent, x);
            match vclass.get(&r) {
                Some(&c) => {
                    if vertex_targets[c] != self.vtarget[x] {
                        return Err(Error::Construction("glued diagram vertices have different images".into()));
                    }
                }
                None => {
                    vclass.insert(r, vertex_targets.len());
                    vertex_targets.push(self.vtarget[x]);
                }
            }
        }
        let vc = |s: &mut Self, x: usize| vclass[&find(&mut s.vparent, x)];
        let mut builder = TwoComplexBuilder::new();
        let mut cell_map = BTreeMap::new();
        for (c, &t) in vertex_targets.iter().enumerate() {
            builder.vertex(format!("d{c}"));
            cell_map.insert(format!("d{c}"), b.id(t).to_string());
        }
        // Edge classes, plus an index from (tail, head, target) to class for squares.
        let mut eclass: HashMap<usize, usize> = HashMap::new();
        let mut by_ends: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut ecount = 0;
        for x in 0..self.edges.len() {
            let r = find(&mut self.eparent, x);
            let (t, h, e) = self.edges[x];
            let ends = (vc(&mut self, t), vc(&mut self, h), e);
            match eclass.get(&r) {
                Some(&c) => {
                    if by_ends.get(&ends) != Some(&c) {
                        return Err(Error::Construction("glued diagram edges have different ends".into()));
                    }
                }
                None => {
                    eclass.insert(r, ecount);
                    by_ends.entry(ends).or_insert(ecount);
                    builder.edge(format!("e{ecount}"), format!("d{}", ends.0), format!("d{}", ends.1));
                    cell_map.insert(format!("e{ecount}"), b.edge_id(e));
                    ecount += 1;
                }
            }
        }
        let target = b.two_skeleton();
        let mut chain = ChainVec::zero(2);
        let mut link_sizes = vec![0; vertex_targets.len()];
        let squares = std::mem::take(&mut self.squares);
        for (f, (corners, sign)) in squares.iter().enumerate() {
            let cs: Vec<usize> = corners.iter().map(|&x| vc(&mut self, x)).collect();
            let mut cycle = Vec::new();
            let mut image = ChainVec::zero(1);
            for k in 0..4 {
                let (x, y) = (cs[k], cs[(k + 1) % 4]);
                let (tx, ty) = (vertex_targets[x], vertex_targets[y]);
                let l = alphabet(b.presentation().ngens()).into_iter().find(|&l| b.step(tx, l) == Some(ty));
                let (e, fwd) = l.and_then(|l| b.edge_of_step(tx, l)).ok_or_else(|| Error::Construction("square side is not an edge".into()))?;
                let ends = if fwd { (x, y, e) } else { (y, x, e) };
                let c = *by_ends.get(&ends).ok_or_else(|| Error::Construction("square side missing from diagram".into()))?;
                cycle.push((format!("e{c}"), fwd));
                image.add_term(&b.edge_id(e), if fwd { 1 } else { -1 });
            }
            for &c in &cs {
                link_sizes[c] += 1;
            }
            let mut lo: Vec<usize> = cs.iter().map(|&c| vertex_targets[c]).collect();
            lo.sort_unstable();
            let cube = b
                .cubes_at(lo[0])
                .iter()
                .map(|&k| &b.cubes()[k])
                .find(|k| k.dim() == 2 && { let mut v = k.vertices.clone(); v.sort_unstable(); v == lo })
                .ok_or_else(|| Error::Construction("diagram square has no target square".into()))?;
            let fid = b.square_id(cube);
            let face_bd = target.boundary(&ChainVec::from_terms(2, [(fid.clone(), 1)]))?;
            let eps = if face_bd == image {
                1
            } else if face_bd == image.scaled(-1) {
                -1
            } else {
                return Err(Error::Construction("diagram square does not map onto a square".into()));
            };
            chain.add_term(&fid, eps * sign);
            builder.face(format!("s{f}"), cycle);
            cell_map.insert(format!("s{f}"), fid);
        }
        let mut circle = Vec::with_capacity(boundary.len());
        for &(e, from) in boundary {
            let c = eclass[&find(&mut self.eparent, e)];
            let tail = self.edges[e].0;
            circle.push((format!("e{c}"), vc(&mut self, tail) == vc(&mut self, from)));
        }
        Ok(DiskDiagram { complex: builder.build()?, cell_map, vertex_targets, chain, link_sizes, boundary: circle })
    }
}

/// How `ρ_w` arises from `ρ_{w′}`: one letter inserted (forward) or deleted
/// (backward) at `at`, with a square strip behind it of length `strip`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Ladder {
    forward: bool,
    at: usize,
    strip: usize,
}

impl Ladder {
    fn kind(self) -> u8 {
        match (self.strip, self.at, self.forward) {
            (0, _, true) => 3,
            (0, _, false) => 2,
            (_, 0, _) => 4,
            _ => 1,
        }
    }
}

/// Adds the ladder between path `i` (`ρ_{w′}`) and path `i + 1` (`ρ_w`);
/// returns the label of the edge `[w′, w]` and the label of `w′`.
fn add_ladder(bd: &mut Builder, i: usize, d_old: usize, lad: Ladder) -> Result<(usize, usize)> {
    let j = i + 1;
    let at = lad.at;
    for k in 0..=at {
        let (x, y) = (bd.v(i, k), bd.v(j, k));
        bd.glue_vertex(x, y);
    }
    for k in 0..at {
        let (x, y) = (bd.e(i, k), bd.e(j, k));
        bd.glue_edge(x, y);
    }
    if lad.forward {
        let mut rung = vec![bd.e(j, at)];
        for k in at + 1..=d_old {
            let (x, y) = (bd.v(i, k), bd.v(j, k + 1));
            rung.push(bd.new_edge(x, y)?);
        }
        for k in at..d_old {
            let c = [bd.v(i, k), bd.v(i, k + 1), bd.v(j, k + 2), bd.v(j, k + 1)];
            bd.square(c, 1);
        }
        if lad.strip == 0 {
            Ok((bd.e(j, d_old), bd.v(i, d_old)))
        } else {
            Ok((rung[d_old - at], bd.v(i, d_old)))
        }
    } else {
        let d_new = d_old - 1;
        let mut rung = vec![bd.e(i, at)];
        for k in at + 1..=d_new {
            let (x, y) = (bd.v(j, k), bd.v(i, k + 1));
            rung.push(bd.new_edge(x, y)?);
        }
        for k in at..d_new {
            let c = [bd.v(j, k), bd.v(j, k + 1), bd.v(i, k + 2), bd.v(i, k + 1)];
            bd.square(c, -1);
        }
        if lad.strip == 0 {
            Ok((bd.e(i, d_new), bd.v(i, d_old)))
        } else {
            Ok((rung[d_new - at], bd.v(i, d_old)))
        }
    }
}

/// Finds `ρ_w` from `ρ_{w′}` as in the fellow-travelling construction.
fn next_geodesic(b: &CubeBall, v: usize, w_prime: usize, w: usize, rho: &Word) -> Result<(Word, Ladder)> {
    let old = normal_cube_path(b, v, w_prime)?;
    if !old.carries(rho) {
        return Err(Error::input("geodesic is not carried by the normal cube path to its endpoint"));
    }
    let new = normal_cube_path(b, v, w)?;
    let (ob, nb) = (old.blocks(), new.blocks());
    let forward = new.dim_sum() == old.dim_sum() + 1;
    let (long, short) = if forward { (&nb, &ob) } else { (&ob, &nb) };
    let j = (0..long.len()).find(|&i| i >= short.len() || long[i] != short[i]).ok_or_else(|| {
        Error::Construction("normal cube paths to adjacent vertices coincide".into())
    })?;
    let empty = Vec::new();
    let (lj, sj) = (&long[j], short.get(j).unwrap_or(&empty));
    let extra: Vec<Letter> = lj.iter().copied().filter(|x| !sj.contains(x)).collect();
    let short_tail: &[Vec<Letter>] = short.get(j + 1..).unwrap_or(&[]);
    if extra.len() != 1 || lj.len() != sj.len() + 1 || long[j + 1..] != *short_tail {
        return Err(Error::Construction("unclassified fellow-travel diagram".into()));
    }
    let s = extra[0];
    let before: usize = long[..j].iter().map(Vec::len).sum();
    let letters = rho.letters();
    let (out, lad) = if forward {
        let at = before + sj.len();
        let mut out = letters[..at].to_vec();
        out.push(s);
        out.extend_from_slice(&letters[at..]);
        (out, Ladder { forward, at, strip: letters.len() - at })
    } else {
        let q = (before..before + lj.len()).find(|&q| letters[q] == s).ok_or_else(|| {
            Error::Construction("crossing letter missing from the carried geodesic".into())
        })?;
        let mut out = letters.to_vec();
        out.remove(q);
        (out, Ladder { forward, at: q, strip: letters.len() - q - 1 })
    };
    let out = Word::new(out);
    let end = b.walk(v, &out).and_then(|p| p.last().copied());
    if end != Some(w) || !new.carries(&out) {
        return Err(Error::Construction("unclassified fellow-travel diagram".into()));
    }
    Ok((out, lad))
}

fn letter_between(b: &CubeBall, x: usize, y: usize) -> Option<Letter> {
    alphabet(b.presentation().ngens()).into_iter().find(|&l| b.step(x, l) == Some(y))
}

#[derive(Clone, Debug)]
pub struct FellowTravel {
    pub rho_w: Word,
    pub diagram: DiskDiagram,
    /// Pattern 1 to 4: strip after a shared prefix, concatenation by a
    /// terminal deletion, concatenation by a terminal insertion, strip from
    /// the start.
    pub kind: u8,
    pub forward: bool,
    pub prefix: usize,
    pub strip: usize,
    /// Hausdorff distance between the two paths in the diagram.
    pub hausdorff: usize,
}

impl FellowTravel {
    pub fn to_json(&self, b: &CubeBall) -> Value {
        json!({
            "rhoW": self.rho_w.render(b.presentation().generators()),
            "type": self.kind,
            "prefix": self.prefix,
            "strip": self.strip,
            "hausdorff": self.hausdorff,
            "diagram": self.diagram.to_json(),
        })
    }
}

fn hausdorff(d: &DiskDiagram, p: &[usize], q: &[usize]) -> usize {
    let n = d.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in d.complex.edges() {
        adj[e.src].push(e.dst);
        adj[e.dst].push(e.src);
    }
    let from = |src: &[usize]| {
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &s in src {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    };
    let (dp, dq) = (from(p), from(q));
    q.iter().map(|&v| dp[v]).chain(p.iter().map(|&v| dq[v])).max().unwrap_or(0)
}

pub fn fellow_travel(b: &CubeBall, v: usize, w_prime: usize, w: usize, rho: &Word) -> Result<FellowTravel> {
    letter_between(b, w_prime, w).ok_or_else(|| Error::input("w is not adjacent to w′"))?;
    let (rho_w, lad) = next_geodesic(b, v, w_prime, w, rho)?;
    let mut bd = Builder::new(b);
    bd.add_path(0, v, rho)?;
    bd.add_path(1, v, &rho_w)?;
    let edge = add_ladder(&mut bd, 0, rho.len(), lad)?;
    let labels: Vec<(usize, usize)> = (0..=rho.len()).map(|k| (0, k)).chain((0..=rho_w.len()).map(|k| (1, k))).collect();
    let ids: Vec<usize> = labels.iter().map(|l| bd.vlabel[l]).collect();
    let roots: Vec<usize> = ids.iter().map(|&x| find(&mut bd.vparent, x)).collect();
    let diagram = bd.finish(&[edge])?;
    // Map label roots to diagram vertex indices through their targets' order.
    let class_index = classes_in_order(&roots);
    let p: Vec<usize> = class_index[..=rho.len()].to_vec();
    let q: Vec<usize> = class_index[rho.len() + 1..].to_vec();
    let h = hausdorff(&diagram, &p, &q);
    let expected_faces = lad.strip;
    let expected_vertices = rho.len().max(rho_w.len()) + 1 + lad.strip;
    if diagram.face_count() != expected_faces || diagram.vertex_count() != expected_vertices || h > 1 {
        return Err(Error::Construction("unclassified fellow-travel diagram".into()));
    }
    Ok(FellowTravel { rho_w, diagram, kind: lad.kind(), forward: lad.forward, prefix: lad.at, strip: lad.strip, hausdorff: h })
}

/// Diagram vertex index of each label root, given that `finish` numbers
/// classes by first appearance among all labels in creation order.
fn classes_in_order(roots: &[usize]) -> Vec<usize> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut sorted: Vec<usize> = roots.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    // Roots are the least label in their class, and classes are numbered by
    // least label, so rank among roots is the class index.
    for (i, r) in sorted.iter().enumerate() {
        seen.insert(*r, i);
    }
    roots.iter().map(|r| seen[r]).collect()
}

#[derive(Clone, Debug)]
pub struct LoopFilling {
    pub diagram: DiskDiagram,
    /// Fellow-travel pattern of each step.
    pub kinds: Vec<u8>,
    pub length: usize,
    pub heights: (i64, i64),
    pub diagram_heights: (i64, i64),
    pub boundary_ok: bool,
}

impl LoopFilling {
    /// At most `n²/2` vertices and 2-cells.
    pub fn size_bounds_hold(&self) -> bool {
        let n2 = self.length * self.length;
        2 * self.diagram.vertex_count() <= n2 && 2 * self.diagram.face_count() <= n2
    }

    pub fn link_bound_holds(&self) -> bool {
        self.diagram.max_link_size() <= 2 * self.length
    }

    /// Image heights within `[a − n/4, b + n/4]`.
    pub fn height_bound_holds(&self) -> bool {
        let n = self.length as i64;
        let (a, b) = self.heights;
        let (lo, hi) = self.diagram_heights;
        4 * lo >= 4 * a - n && 4 * hi <= 4 * b + n
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.size_bounds_hold() && self.link_bound_holds() && self.height_bound_holds() && self.boundary_ok
    }

    pub fn to_json(&self) -> Value {
        json!({
            "length": self.length,
            "vertices": self.diagram.vertex_count(),
            "twoCells": self.diagram.face_count(),
            "maxLinkSize": self.diagram.max_link_size(),
            "loopHeights": [self.heights.0, self.heights.1],
            "diagramHeights": [self.diagram_heights.0, self.diagram_heights.1],
            "fellowTypes": self.kinds,
            "boundaryOk": self.boundary_ok,
            "boundsHold": self.all_bounds_hold(),
            "diagram": self.diagram.to_json(),
        })
    }
}

/// Fills the loop reading `alpha` from `base` by iterated fellow-travelling.
pub fn fill_loop_cubical(b: &CubeBall, base: usize, alpha: &Word) -> Result<LoopFilling> {
    let n = alpha.len();
    b.require_margin(base, n.div_ceil(2))?;
    let pts = b.walk(base, alpha).ok_or_else(|| Error::input("loop leaves the ball"))?;
    if pts[n] != base {
        return Err(Error::input("word does not describe a closed loop"));
    }
    let mut rhos = vec![Word::empty()];
    let mut ladders = Vec::with_capacity(n);
    for i in 0..n {
        let (next, lad) = next_geodesic(b, base, pts[i], pts[i + 1], &rhos[i])?;
        rhos.push(next);
        ladders.push(lad);
    }
    let mut bd = Builder::new(b);
    for (i, r) in rhos.iter().enumerate() {
        bd.add_path(i, base, r)?;
    }
    let mut alpha_edges = Vec::with_capacity(n);
    for (i, lad) in ladders.iter().enumerate() {
        alpha_edges.push(add_ladder(&mut bd, i, rhos[i].len(), *lad)?);
    }
    let diagram = bd.finish(&alpha_edges)?;
    let target = b.two_skeleton();
    let gamma = b.cayley().walk_chain(base, alpha).expect("loop lies in the ball");
    let boundary_ok = target.boundary(&diagram.chain)? == gamma;
    let hs: Vec<i64> = pts.iter().map(|&v| b.height(v)).collect();
    let ds: Vec<i64> = diagram.vertex_targets.iter().map(|&v| b.height(v)).collect();
    let range = |h: &[i64]| (h.iter().copied().min().unwrap_or(0), h.iter().copied().max().unwrap_or(0));
    Ok(LoopFilling {
        kinds: ladders.iter().map(|l| l.kind()).collect(),
        length: n,
        heights: range(&hs),
        diagram_heights: range(&ds),
        diagram,
        boundary_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::tests::{free2, z2};

    #[test]
    fn z2_strip() {
        let b = CubeBall::build(&z2(), 6).unwrap();
        let wp = b.vertex("a a").unwrap();
        let w = b.vertex("a a b").unwrap();
        let f = fellow_travel(&b, 0, wp, w, &Word::new(vec![1, 1])).unwrap();
        assert_eq!(f.rho_w.letters(), &[1, 2, 1]);
        assert_eq!(f.kind, 1);
        assert_eq!(f.diagram.face_count(), 1);
        assert_eq!(f.hausdorff, 1);
    }

    #[test]
    fn tree_concatenation() {
        let b = CubeBall::build(&free2(), 5).unwrap();
        let wp = b.vertex("a b").unwrap();
        let w = b.vertex("a b a").unwrap();
        let f = fellow_travel(&b, 0, wp, w, &Word::new(vec![1, 2])).unwrap();
        assert_eq!(f.kind, 3);
        assert_eq!(f.rho_w.letters(), &[1, 2, 1]);
        let g = fellow_travel(&b, 0, 0, b.vertex("B").unwrap(), &Word::empty()).unwrap();
        assert_eq!(g.rho_w.letters(), &[-2]);
    }

    #[test]
    fn unit_square_and_backtrack() {
        let b = CubeBall::build(&z2(), 6).unwrap();
        let f = fill_loop_cubical(&b, 0, &Word::new(vec![1, 2, -1, -2])).unwrap();
        assert_eq!(f.diagram.face_count(), 1);
        assert!(f.all_bounds_hold());
        let g = fill_loop_cubical(&b, 0, &Word::new(vec![1, -1])).unwrap();
        assert_eq!(g.diagram.face_count(), 0);
        assert!(g.boundary_ok);
    }

    #[test]
    fn commutator_of_squares() {
        let b = CubeBall::build(&z2(), 6).unwrap();
        let alpha = Word::new(vec![-1, -1, -2, -2, 1, 1, 2, 2]);
        let f = fill_loop_cubical(&b, 0, &alpha).unwrap();
        assert_eq!(f.diagram.face_count(), 4);
        assert!(f.diagram.max_link_size() <= 16);
        assert!(f.all_bounds_hold());
        assert_eq!(f.diagram.complex.euler_characteristic(), 1);
    }
}
