//! Normal cube-paths.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::CubeBall;
use crate::error::{Error, Result};
use crate::word::{letter_key, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeStep {
    pub cube: usize,
    pub from: usize,
    pub to: usize,
    /// Letters of the cube's edges at `from`, in generator order.
    pub letters: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubePath {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<CubeStep>,
    pub normal: bool,
}

impl CubePath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.letters.len()).collect()
    }

    pub fn dim_sum(&self) -> usize {
        self.dims().iter().sum()
    }

    /// `v_0, …, v_m`.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v = vec![self.start];
        v.extend(self.steps.iter().map(|s| s.to));
        v
    }

    /// Each block's letters in shortlex letter order.
    pub fn blocks(&self) -> Vec<Vec<Letter>> {
        self.steps
            .iter()
            .map(|s| {
                let mut t = s.letters.clone();
                t.sort_by_key(|&x| letter_key(x));
                t
            })
            .collect()
    }

    /// The carried geodesic taking the least shuffle inside each cube.
    pub fn carried_geodesic(&self) -> Word {
        Word::new(self.blocks().concat())
    }

    /// True if `w` runs through the blocks in order, each as some shuffle.
    pub fn carries(&self, w: &Word) -> bool {
        let mut rest = w.letters();
        for block in self.blocks() {
            if rest.len() < block.len() {
                return false;
            }
            let mut head = rest[..block.len()].to_vec();
            head.sort_by_key(|&x| letter_key(x));
            if head != block {
                return false;
            }
            rest = &rest[block.len()..];
        }
        rest.is_empty()
    }

    pub fn to_json(&self, b: &CubeBall) -> Value {
        let names = b.presentation().generators();
        json!({
            "from": b.id(self.start),
            "to": b.id(self.end),
            "normal": self.normal,
            "length": self.len(),
            "dimSum": self.dim_sum(),
            "cubes": self.steps.iter().map(|s| json!({
                "from": b.id(s.from),
                "to": b.id(s.to),
                "dim": s.letters.len(),
                "letters": s.letters.iter().map(|&x| crate::word::render_letter(x, names)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "geodesic": self.carried_geodesic().render(names),
        })
    }
}

/// Vertices of all cubes containing the cube `c`.
pub fn star_vertices(b: &CubeBall, c: usize) -> BTreeSet<usize> {
    let cube = &b.cubes()[c];
    b.cubes_at(cube.base)
        .iter()
        .map(|&k| &b.cubes()[k])
        .filter(|k| cube.vertices.iter().all(|v| k.contains_vertex(*v)))
        .flat_map(|k| k.vertices.iter().copied())
        .collect()
}

/// `St(C_i) ∩ C_{i+1} = {v_i}` for every consecutive pair.
pub fn is_normal(b: &CubeBall, steps: &[CubeStep]) -> bool {
    steps.windows(2).all(|p| {
        let st = star_vertices(b, p[0].cube);
        let next = &b.cubes()[p[1].cube];
        next.vertices.iter().filter(|v| st.contains(v)).copied().collect::<Vec<_>>() == vec![p[0].to]
    })
}

fn step(b: &CubeBall, from: usize, mut letters: Vec<Letter>) -> Result<CubeStep> {
    letters.sort_by_key(|&x| crate::word::gen_of(x));
    let radius_err = || Error::Radius { required: b.norm(from) + letters.len(), actual: b.radius() };
    let cube = b.cube_at(from, &letters).ok_or_else(radius_err)?;
    let to = *b.walk(from, &Word::new(letters.clone())).ok_or_else(radius_err)?.last().expect("nonempty");
    Ok(CubeStep { cube, from, to, letters })
}

/// The recursion: at each vertex span the cube on all edges whose hyperplane
/// still separates it from `w`, then move to the opposite corner.
pub fn normal_cube_path(b: &CubeBall, v: usize, w: usize) -> Result<CubePath> {
    let d = b.distance(v, w);
    b.require_margin(v, d)?;
    let mut steps = Vec::new();
    let mut cur = v;
    while cur != w {
        let letters = b.descent_letters(cur, w);
        if letters.iter().enumerate().any(|(i, &x)| letters[..i].iter().any(|&y| !b.commutes(x, y))) {
            return Err(Error::Construction("separating edges at a vertex do not span a cube".into()));
        }
        let s = step(b, cur, letters)?;
        cur = s.to;
        steps.push(s);
    }
    let normal = is_normal(b, &steps);
    let path = CubePath { start: v, end: w, steps, normal };
    if !normal || path.dim_sum() != d {
        return Err(Error::Construction("recursion produced a non-normal cube path".into()));
    }
    Ok(path)
}

/// Every cube-path from `v` to `w` whose cubes each make `dim` units of
/// progress, i.e. every cube-path with `Σ dim = d(v, w)`.
pub fn geodesic_cube_paths(b: &CubeBall, v: usize, w: usize, limit: usize) -> Result<Vec<CubePath>> {
    b.require_margin(v, b.distance(v, w))?;
    let mut out = Vec::new();
    let mut steps = Vec::new();
    extend(b, v, w, &mut steps, &mut out, limit)?;
    Ok(out)
}

fn extend(b: &CubeBall, cur: usize, w: usize, steps: &mut Vec<CubeStep>, out: &mut Vec<CubePath>, limit: usize) -> Result<()> {
    if cur == w {
        if out.len() >= limit {
            return Err(Error::Resource { budget: format!("cube paths {limit}"), depth: steps.len() });
        }
        let start = steps.first().map_or(cur, |s| s.from);
        out.push(CubePath { start, end: w, steps: steps.clone(), normal: is_normal(b, steps) });
        return Ok(());
    }
    let d = b.distance(cur, w);
    for &c in b.cubes_at(cur) {
        let letters = b.cubes()[c].letters_at(cur).expect("cube contains cur");
        let s = step(b, cur, letters)?;
        if b.distance(s.to, w) + s.letters.len() != d {
            continue;
        }
        steps.push(s);
        let to = steps.last().expect("pushed").to;
        extend(b, to, w, steps, out, limit)?;
        steps.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::tests::{free2, z2};

    #[test]
    fn z2_example() {
        let b = CubeBall::build(&z2(), 6).unwrap();
        let w = b.vertex("a a b").unwrap();
        let p = normal_cube_path(&b, 0, w).unwrap();
        assert_eq!(p.dims(), vec![2, 1]);
        assert_eq!(b.id(p.steps[0].to), "a.b");
        assert_eq!(p.carried_geodesic().letters(), &[1, 2, 1]);
        assert!(p.carries(&Word::new(vec![2, 1, 1])));
        assert!(!p.carries(&Word::new(vec![1, 1, 2])));
        let all = geodesic_cube_paths(&b, 0, w, 100).unwrap();
        assert_eq!(all.iter().filter(|q| q.normal).count(), 1);
        assert!(all.len() > 1);
    }

    #[test]
    fn trivial_and_tree() {
        let b = CubeBall::build(&z2(), 3).unwrap();
        assert!(normal_cube_path(&b, 0, 0).unwrap().is_empty());
        let t = CubeBall::build(&free2(), 5).unwrap();
        let w = t.vertex("a B a").unwrap();
        let p = normal_cube_path(&t, 0, w).unwrap();
        assert_eq!(p.dims(), vec![1, 1, 1]);
        assert_eq!(p.carried_geodesic().letters(), &[1, -2, 1]);
    }

    #[test]
    fn margin_enforced() {
        let b = CubeBall::build(&z2(), 3).unwrap();
        let w = b.vertex("a a").unwrap();
        assert_eq!(normal_cube_path(&b, 0, w).unwrap_err().code(), "radius");
    }
}
