//! Balls in Cayley graphs and relative Cayley complexes.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::complex::{ChainVec, TwoComplex, TwoComplexBuilder};
use crate::error::{Error, Result};
use crate::oracle::{CanonKey, EqualityOracle};
use crate::presentation::Presentation;
use crate::word::{alphabet, gen_of, render_letter, Letter, Word};

pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

/// The ball of radius `radius` about the identity.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    radius: usize,
    generators: Vec<String>,
    reps: Vec<Word>,
    dist: Vec<usize>,
    /// `out[v][g]` is the vertex `v·g`, when inside the ball.
    out: Vec<Vec<Option<usize>>>,
    /// `inc[v][g]` is the vertex `u` with `u·g = v`, when inside the ball.
    inc: Vec<Vec<Option<usize>>>,
    ids: Vec<String>,
    by_id: HashMap<String, usize>,
    complete: bool,
}

struct Identifier<'a> {
    oracle: &'a EqualityOracle,
    keys: HashMap<CanonKey, usize>,
}

impl Identifier<'_> {
    fn find(&self, w: &Word, reps: &[Word]) -> Result<(Option<usize>, Option<CanonKey>)> {
        if let Some(k) = self.oracle.canonical(w)? {
            return Ok((self.keys.get(&k).copied(), Some(k)));
        }
        for (i, r) in reps.iter().enumerate() {
            if self.oracle.equal(w, r)? {
                return Ok((Some(i), None));
            }
        }
        Ok((None, None))
    }
}

impl CayleyBall {
    pub fn build(p: &Presentation, o: &EqualityOracle, radius: usize) -> Result<Self> {
        Self::build_with_budget(p, o, radius, DEFAULT_VERTEX_BUDGET)
    }

    /// Breadth-first closure of the identity. Vertices are processed level by
    /// level in shortlex order of their representatives, so each
    /// representative is the shortlex-least word for its element.
    pub fn build_with_budget(p: &Presentation, o: &EqualityOracle, radius: usize, budget: usize) -> Result<Self> {
        if o.ngens() != p.ngens() {
            return Err(Error::input("oracle and presentation have different generator counts"));
        }
        let k = p.ngens();
        let mut ident = Identifier { oracle: o, keys: HashMap::new() };
        let mut reps = vec![Word::empty()];
        let mut dist = vec![0];
        if let Some(key) = o.canonical(&Word::empty())? {
            ident.keys.insert(key, 0);
        }
        let mut out: Vec<Vec<Option<usize>>> = vec![vec![None; k]];
        let mut inc: Vec<Vec<Option<usize>>> = vec![vec![None; k]];
        let letters = alphabet(k);
        let mut head = 0;
        let mut complete = true;
        while head < reps.len() {
            let u = head;
            head += 1;
            for &x in &letters {
                let g = gen_of(x);
                if (x > 0 && out[u][g].is_some()) || (x < 0 && inc[u][g].is_some()) {
                    continue;
                }
                let w = reps[u].concat(&Word::new(vec![x])).free_reduce();
                let (found, key) = ident.find(&w, &reps)?;
                let v = match found {
                    Some(v) => v,
                    None if dist[u] < radius => {
                        if reps.len() >= budget {
                            return Err(Error::Resource { budget: format!("ball vertices {budget}"), depth: dist[u] });
                        }
                        let v = reps.len();
                        reps.push(w);
                        dist.push(dist[u] + 1);
                        out.push(vec![None; k]);
                        inc.push(vec![None; k]);
                        if let Some(key) = key {
                            ident.keys.insert(key, v);
                        }
                        v
                    }
                    None => {
                        complete = false;
                        continue;
                    }
                };
                if x > 0 {
                    out[u][g] = Some(v);
                    inc[v][g] = Some(u);
                } else {
                    inc[u][g] = Some(v);
                    out[v][g] = Some(u);
                }
            }
        }
        let names = p.generators().to_vec();
        let ids: Vec<String> = reps.iter().map(|w| vertex_id(w, &names)).collect();
        let by_id = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(CayleyBall { radius, generators: names, reps, dist, out, inc, ids, by_id, complete })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    pub fn dist(&self, v: usize) -> usize {
        self.dist[v]
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    /// True when every generator edge at every vertex stays inside the ball,
    /// i.e. the ball is the whole (finite) group.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `v·x` for a letter, if inside the ball.
    pub fn step(&self, v: usize, x: Letter) -> Option<usize> {
        let g = gen_of(x);
        if x > 0 {
            self.out[v][g]
        } else {
            self.inc[v][g]
        }
    }

    /// Directed generator edges `(u, g, v)` with `u·g = v`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::new();
        for (u, row) in self.out.iter().enumerate() {
            for (g, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    e.push((u, g, *v));
                }
            }
        }
        e
    }

    pub fn edge_id(&self, u: usize, g: usize) -> String {
        format!("{}|{}", self.ids[u], self.generators[g])
    }

    /// Follows `w` from `v`; `None` if the walk leaves the ball.
    pub fn trace(&self, v: usize, w: &Word) -> Option<Vec<usize>> {
        let mut path = vec![v];
        let mut cur = v;
        for &x in w.letters() {
            cur = self.step(cur, x)?;
            path.push(cur);
        }
        Some(path)
    }

    /// The 1-chain of the walk reading `w` from `v`.
    pub fn walk_chain(&self, v: usize, w: &Word) -> Option<ChainVec> {
        let path = self.trace(v, w)?;
        let mut c = ChainVec::zero(1);
        for (i, &x) in w.letters().iter().enumerate() {
            let g = gen_of(x);
            if x > 0 {
                c.add_term(&self.edge_id(path[i], g), 1);
            } else {
                c.add_term(&self.edge_id(path[i + 1], g), -1);
            }
        }
        Some(c)
    }
}

/// Canonical word with letters joined by `.`; the identity is `1`.
pub fn vertex_id(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.letters().iter().map(|&x| render_letter(x, names)).collect::<Vec<_>>().join(".")
}

/// Relative Cayley complex plus the count of relator loops that left the ball.
#[derive(Clone, Debug)]
pub struct RelativeComplex {
    pub complex: TwoComplex,
    pub skipped: usize,
}

/// One disk per (vertex, relator) whose loop closes inside the ball. Face
/// ids are `vertex|r<k>`.
pub fn relative_cayley_complex(ball: &CayleyBall, relators: &[Word]) -> Result<RelativeComplex> {
    let mut b = TwoComplexBuilder::new();
    for v in 0..ball.len() {
        b.vertex(ball.id(v));
    }
    for (u, g, v) in ball.edges() {
        b.edge(ball.edge_id(u, g), ball.id(u), ball.id(v));
    }
    let mut skipped = 0;
    for v in 0..ball.len() {
        for (k, r) in relators.iter().enumerate() {
            match ball.trace(v, r) {
                Some(path) if path.last() == Some(&v) => {
                    let cycle = r
                        .letters()
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| {
                            if x > 0 {
                                (ball.edge_id(path[i], gen_of(x)), true)
                            } else {
                                (ball.edge_id(path[i + 1], gen_of(x)), false)
                            }
                        })
                        .collect();
                    b.face(format!("{}|r{k}", ball.id(v)), cycle);
                }
                Some(_) => {
                    return Err(Error::Construction(format!("relator {k} does not close at {}", ball.id(v))));
                }
                None => skipped += 1,
            }
        }
    }
    Ok(RelativeComplex { complex: b.build()?, skipped })
}

/// Result of an H₁ check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct H1Evidence {
    /// `Some(true)` when H₁ of the full complex was computed and is zero.
    pub exact_verdict: Option<bool>,
    pub conclusive: bool,
    pub loops_checked: usize,
    /// Based loops (as words) with no filling supported in the ball.
    pub unfillable: Vec<String>,
    pub note: String,
}

pub fn h1_evidence(p: &Presentation, o: &EqualityOracle, radius: usize, max_len: usize) -> Result<H1Evidence> {
    // A based loop of length L never leaves the ball of radius ⌈L/2⌉.
    let need = max_len.div_ceil(2);
    if radius < need {
        return Err(Error::Radius { required: need, actual: radius });
    }
    if let Some(order) = o.finite_order() {
        let ball = CayleyBall::build(p, o, order)?;
        if ball.is_complete() {
            let h = relative_cayley_complex(&ball, p.relators())?.complex.homology();
            let zero = h.betti[1] == 0 && h.torsion[1].is_empty();
            return Ok(H1Evidence {
                exact_verdict: Some(zero),
                conclusive: true,
                loops_checked: 0,
                unfillable: vec![],
                note: "exact: homology of the full finite complex".into(),
            });
        }
    }
    let ball = CayleyBall::build(p, o, radius)?;
    let x = relative_cayley_complex(&ball, p.relators())?.complex;
    let loops = based_loops(&ball, max_len);
    let mut unfillable = Vec::new();
    for w in &loops {
        let c = ball.walk_chain(0, w).expect("loop lies in the ball");
        if !c.is_empty() && !x.is_boundary(&c)? {
            unfillable.push(w.render(p.generators()));
        }
    }
    Ok(H1Evidence {
        exact_verdict: None,
        conclusive: false,
        loops_checked: loops.len(),
        unfillable,
        note: format!("evidence only: based loops of length <= {max_len} filled within radius {radius}"),
    })
}

/// Cyclically reduced words of length 1..=max_len that are loops at the
/// identity, one per class under rotation and inversion, shortlex ordered.
pub fn based_loops(ball: &CayleyBall, max_len: usize) -> Vec<Word> {
    let letters = alphabet(ball.generators().len());
    let mut found: BTreeSet<Word> = BTreeSet::new();
    let mut stack: Vec<Letter> = Vec::new();
    fn rec(
        ball: &CayleyBall,
        letters: &[Letter],
        v: usize,
        max_len: usize,
        stack: &mut Vec<Letter>,
        found: &mut BTreeSet<Word>,
    ) {
        if !stack.is_empty() && v == 0 {
            let w = Word::new(stack.clone());
            if w.is_cyclically_reduced() {
                found.insert(w.cyclic_canonical());
            }
        }
        if stack.len() == max_len {
            return;
        }
        for &x in letters {
            if stack.last() == Some(&-x) {
                continue;
            }
            let Some(u) = ball.step(v, x) else { continue };
            if ball.dist(u) > max_len - stack.len() - 1 {
                continue;
            }
            stack.push(x);
            rec(ball, letters, u, max_len, stack, found);
            stack.pop();
        }
    }
    rec(ball, &letters, 0, max_len, &mut stack, &mut found);
    found.into_iter().collect()
}
