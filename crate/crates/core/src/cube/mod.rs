//! Balls in the universal cover of a Salvetti complex.

pub mod diagram;
pub mod hyperplane;
pub mod path;

use std::sync::OnceLock;
use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::cayley::{CayleyBall, DEFAULT_VERTEX_BUDGET};
use crate::complex::{TwoComplex, TwoComplexBuilder};
use crate::error::{Error, Result};
use crate::flag::FlagComplex;
use crate::leary::raag_presentation;
use crate::oracle::{raag_normal_form, EqualityOracle};
use crate::presentation::Presentation;
use crate::word::{alphabet, gen_of, letter, letter_key, Letter, Word};

pub use diagram::{fellow_travel, fill_loop_cubical, DiskDiagram, FellowTravel, LoopFilling};
pub use hyperplane::{hyperplanes, Hyperplane, Hyperplanes};
pub use path::{geodesic_cube_paths, is_normal, normal_cube_path, CubePath, CubeStep};

/// A cube: `base · Π_{g ∈ S} g` over subsets `S` of `gens`; `vertices[mask]`
/// is the corner for the subset encoded by `mask` (bit `i` ↔ `gens[i]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cube {
    pub base: usize,
    pub gens: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// Letters of the edges of this cube at its corner `v`.
    pub fn letters_at(&self, v: usize) -> Option<Vec<Letter>> {
        let mask = self.vertices.iter().position(|&u| u == v)?;
        Some(self.gens.iter().enumerate().map(|(i, &g)| letter(g, (mask >> i) & 1 == 1)).collect())
    }
}

#[derive(Clone, Debug)]
pub struct CubeBall {
    l: FlagComplex,
    presentation: Presentation,
    commute: Vec<Vec<bool>>,
    ball: CayleyBall,
    heights: Vec<i64>,
    cubes: Vec<Cube>,
    cube_index: HashMap<(usize, Vec<usize>), usize>,
    cubes_at: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    skeleton: OnceLock<TwoComplex>,
}

/// Simplicial link of a vertex plus its ascending and descending parts.
#[derive(Clone, Debug)]
pub struct MorseLinks {
    pub full: FlagComplex,
    pub ascending: FlagComplex,
    pub descending: FlagComplex,
}

impl CubeBall {
    pub fn build(l: &FlagComplex, radius: usize) -> Result<Self> {
        Self::build_with_budget(l, radius, DEFAULT_VERTEX_BUDGET)
    }

    pub fn build_with_budget(l: &FlagComplex, radius: usize, budget: usize) -> Result<Self> {
        if !l.is_flag() {
            return Err(Error::input("defining complex is not flag"));
        }
        let n = l.nvertices();
        let mut commute = vec![vec![false; n]; n];
        for (u, v) in l.edges() {
            commute[u][v] = true;
            commute[v][u] = true;
        }
        let presentation = raag_presentation(l)?;
        let oracle = EqualityOracle::raag(n, &l.edges())?;
        let ball = CayleyBall::build_with_budget(&presentation, &oracle, radius, budget)?;
        let heights = ball.reps().iter().map(|w| w.letters().iter().map(|&x| x.signum() as i64).sum()).collect();
        let edges = ball.edges();
        let edge_index = edges.iter().enumerate().map(|(i, &(u, g, _))| ((u, g), i)).collect();
        let mut cubes = Vec::new();
        let mut cube_index = HashMap::new();
        let mut cubes_at = vec![Vec::new(); ball.len()];
        for base in 0..ball.len() {
            'simplex: for s in l.simplices() {
                let mut vertices = vec![base];
                for mask in 1usize..(1 << s.len()) {
                    let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
                    match ball.step(vertices[mask & !(1 << top)], letter(s[top], false)) {
                        Some(v) => vertices.push(v),
                        None => continue 'simplex,
                    }
                }
                let k = cubes.len();
                for &v in &vertices {
                    cubes_at[v].push(k);
                }
                cube_index.insert((base, s.clone()), k);
                cubes.push(Cube { base, gens: s.clone(), vertices });
            }
        }
        Ok(CubeBall { l: l.clone(), presentation, commute, ball, heights, cubes, cube_index, cubes_at, edges, edge_index, skeleton: OnceLock::new() })
    }

    pub fn defining_complex(&self) -> &FlagComplex {
        &self.l
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    pub fn len(&self) -> usize {
        self.ball.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ball.is_empty()
    }

    pub fn cayley(&self) -> &CayleyBall {
        &self.ball
    }

    pub fn id(&self, v: usize) -> &str {
        self.ball.id(v)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ball.index_of(id)
    }

    /// Parses a vertex given as a word; the word need not be in normal form.
    pub fn vertex(&self, s: &str) -> Result<usize> {
        if let Some(v) = self.index_of(s) {
            return Ok(v);
        }
        let w = self.presentation.parse_word(&s.replace('.', " "))?;
        self.ball.trace(0, &w).map(|p| *p.last().expect("trace is nonempty")).ok_or_else(|| {
            Error::Radius { required: self.norm_of(&w), actual: self.radius() }
        })
    }

    pub fn word(&self, v: usize) -> &Word {
        &self.ball.reps()[v]
    }

    /// Distance from the identity.
    pub fn norm(&self, v: usize) -> usize {
        self.ball.dist(v)
    }

    pub fn height(&self, v: usize) -> i64 {
        self.heights[v]
    }

    pub fn commutes(&self, x: Letter, y: Letter) -> bool {
        let (a, b) = (gen_of(x), gen_of(y));
        a != b && self.commute[a][b]
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        raag_normal_form(&self.commute, w)
    }

    fn norm_of(&self, w: &Word) -> usize {
        self.normal_form(w).len()
    }

    /// Word-metric distance in the group, independent of the truncation.
    pub fn distance(&self, v: usize, w: usize) -> usize {
        self.norm_of(&self.word(v).inverse().concat(self.word(w)))
    }

    pub fn step(&self, v: usize, x: Letter) -> Option<usize> {
        self.ball.step(v, x)
    }

    pub fn walk(&self, v: usize, w: &Word) -> Option<Vec<usize>> {
        self.ball.trace(v, w)
    }

    /// Top dimension of a cube: `dim L + 1`.
    pub fn max_cube_dim(&self) -> usize {
        self.l.dimension().map_or(0, |d| d + 1)
    }

    /// Errors unless every cube within `extra` of `v` lies in the ball.
    pub fn require_margin(&self, v: usize, extra: usize) -> Result<()> {
        let required = self.norm(v) + extra + self.max_cube_dim();
        if required > self.radius() {
            return Err(Error::Radius { required, actual: self.radius() });
        }
        Ok(())
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn cube(&self, base: usize, gens: &[usize]) -> Option<usize> {
        self.cube_index.get(&(base, gens.to_vec())).copied()
    }

    pub fn cubes_at(&self, v: usize) -> &[usize] {
        &self.cubes_at[v]
    }

    /// The cube at `v` spanned by edges with the given letters.
    pub fn cube_at(&self, v: usize, letters: &[Letter]) -> Option<usize> {
        let mut base = v;
        for &x in letters {
            if x < 0 {
                base = self.step(base, x)?;
            }
        }
        let mut gens: Vec<usize> = letters.iter().map(|&x| gen_of(x)).collect();
        gens.sort_unstable();
        self.cube(base, &gens)
    }

    /// Cube counts by dimension, starting at vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![self.len()];
        for c in &self.cubes {
            if f.len() <= c.dim() {
                f.resize(c.dim() + 1, 0);
            }
            f[c.dim()] += 1;
        }
        f
    }

    /// Directed edges `(u, g, u·g)`.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, g: usize) -> Option<usize> {
        self.edge_index.get(&(u, g)).copied()
    }

    /// Edge traversed by stepping from `v` along `x`, with its orientation.
    pub fn edge_of_step(&self, v: usize, x: Letter) -> Option<(usize, bool)> {
        if x > 0 {
            self.edge_index(v, gen_of(x)).map(|e| (e, true))
        } else {
            let u = self.step(v, x)?;
            self.edge_index(u, gen_of(x)).map(|e| (e, false))
        }
    }

    pub fn edge_id(&self, e: usize) -> String {
        let (u, g, _) = self.edges[e];
        self.ball.edge_id(u, g)
    }

    pub fn square_id(&self, c: &Cube) -> String {
        let names = self.presentation.generators();
        format!("{}|{}.{}", self.id(c.base), names[c.gens[0]], names[c.gens[1]])
    }

    /// Vertices, edges and squares as a combinatorial 2-complex. A square on
    /// `g < h` at `b` is attached along `g, h, g⁻¹, h⁻¹` from `b`.
    pub fn two_skeleton(&self) -> &TwoComplex {
        self.skeleton.get_or_init(|| self.build_two_skeleton())
    }

    fn build_two_skeleton(&self) -> TwoComplex {
        let mut b = TwoComplexBuilder::new();
        for v in 0..self.len() {
            b.vertex(self.id(v));
        }
        for (e, &(u, _, v)) in self.edges.iter().enumerate() {
            b.edge(self.edge_id(e), self.id(u), self.id(v));
        }
        for c in self.cubes.iter().filter(|c| c.dim() == 2) {
            let e = |v: usize, g: usize| self.edge_id(self.edge_index(v, g).expect("cube edges lie in the ball"));
            let (g, h) = (c.gens[0], c.gens[1]);
            b.face(
                self.square_id(c),
                vec![(e(c.vertices[0], g), true), (e(c.vertices[1], h), true), (e(c.vertices[2], g), false), (e(c.vertices[0], h), false)],
            );
        }
        b.build().expect("cube ball 2-skeleton is well formed")
    }

    fn link_vertex_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for g in self.presentation.generators() {
            names.push(format!("{g}+"));
            names.push(format!("{g}-"));
        }
        names
    }

    /// Simplicial link at `v`: one vertex per edge, one simplex per cube corner.
    /// Link vertex `2g` is `x_g+`, `2g+1` is `x_g-`; unused ones are dropped.
    pub fn vertex_link(&self, v: usize) -> FlagComplex {
        self.link_from(v, |_| true)
    }

    fn link_from(&self, v: usize, keep: impl Fn(&[Letter]) -> bool) -> FlagComplex {
        let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &c in &self.cubes_at[v] {
            let letters = self.cubes[c].letters_at(v).expect("cube contains v");
            if keep(&letters) {
                simplices.insert(letters.iter().map(|&x| 2 * gen_of(x) + usize::from(x < 0)).collect());
            }
        }
        let used: BTreeSet<usize> = simplices.iter().flatten().copied().collect();
        let pos: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let names = self.link_vertex_names();
        FlagComplex::from_indices(
            used.iter().map(|&u| names[u].clone()).collect(),
            simplices.into_iter().map(|s| s.iter().map(|u| pos[u]).collect()).collect(),
            false,
        )
        .expect("faces of cubes are cubes")
    }

    /// Full, ascending and descending links. Ascending simplices come from
    /// cubes whose lowest corner is `v`.
    pub fn morse_links(&self, v: usize) -> Result<MorseLinks> {
        self.require_margin(v, 0)?;
        Ok(MorseLinks {
            full: self.vertex_link(v),
            ascending: self.link_from(v, |t| t.iter().all(|&x| x > 0)),
            descending: self.link_from(v, |t| t.iter().all(|&x| x < 0)),
        })
    }

    /// Letters at `v` whose edge moves one step closer to `w`.
    pub fn descent_letters(&self, v: usize, w: usize) -> Vec<Letter> {
        let u = self.word(v).inverse().concat(self.word(w));
        let d = self.norm_of(&u);
        let mut out: Vec<Letter> = alphabet(self.presentation.ngens())
            .into_iter()
            .filter(|&x| self.norm_of(&Word::new(vec![-x]).concat(&u)) + 1 == d)
            .collect();
        out.sort_by_key(|&x| letter_key(x));
        out
    }

    pub fn to_json(&self) -> Value {
        let names = self.presentation.generators();
        json!({
            "definingComplex": self.l.to_json(),
            "radius": self.radius(),
            "fVector": self.f_vector(),
            "vertices": (0..self.len()).map(|v| json!({"id": self.id(v), "height": self.height(v)})).collect::<Vec<_>>(),
            "cubes": self.cubes.iter().map(|c| json!({
                "base": self.id(c.base),
                "generators": c.gens.iter().map(|&g| names[g].clone()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{isomorphic, numbered, spherical_double};

    pub(crate) fn z2() -> FlagComplex {
        FlagComplex::new(vec!["a".into(), "b".into()], vec![vec!["a".into(), "b".into()]], false).unwrap()
    }

    pub(crate) fn free2() -> FlagComplex {
        FlagComplex::new(vec!["a".into(), "b".into()], vec![], false).unwrap()
    }

    #[test]
    fn z2_radius_two() {
        let b = CubeBall::build(&z2(), 2).unwrap();
        assert_eq!(b.f_vector(), vec![13, 16, 4]);
        assert_eq!(b.two_skeleton().homology().betti, [1, 0, 0]);
    }

    #[test]
    fn free_tree() {
        let b = CubeBall::build(&free2(), 2).unwrap();
        assert_eq!(b.f_vector(), vec![17, 16]);
    }

    #[test]
    fn radius_zero() {
        let b = CubeBall::build(&z2(), 0).unwrap();
        assert_eq!(b.f_vector(), vec![1]);
    }

    #[test]
    fn z3_cubes_have_all_corners() {
        let l = numbered(3, &[&[0, 1, 2]], true).unwrap();
        let b = CubeBall::build(&l, 3).unwrap();
        for c in b.cubes() {
            assert_eq!(c.vertices.len(), 1 << c.dim());
            assert!(l.contains(&c.gens));
        }
        assert_eq!(b.f_vector()[3], 8);
    }

    #[test]
    fn links_at_origin() {
        let b = CubeBall::build(&z2(), 3).unwrap();
        let m = b.morse_links(0).unwrap();
        assert!(isomorphic(&m.ascending, &z2()));
        assert!(isomorphic(&m.descending, &z2()));
        assert!(isomorphic(&m.full, &spherical_double(&z2())));
        assert_eq!(m.full.f_vector(), vec![4, 4]);
        assert!(m.full.is_flag());
        let t = CubeBall::build(&free2(), 2).unwrap();
        assert_eq!(t.morse_links(0).unwrap().ascending.f_vector(), vec![2]);
        assert_eq!(b.morse_links(b.vertex("a.a.b").unwrap()).unwrap_err().code(), "radius");
    }

    #[test]
    fn heights_and_distance() {
        let b = CubeBall::build(&z2(), 3).unwrap();
        let v = b.vertex("a A b b").unwrap();
        assert_eq!(b.id(v), "b.b");
        assert_eq!(b.height(v), 2);
        let w = b.vertex("A").unwrap();
        assert_eq!(b.distance(v, w), 3);
        assert_eq!(b.descent_letters(0, b.vertex("a.b").unwrap()), vec![1, 2]);
    }
}
