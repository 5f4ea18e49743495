//! Hyperplanes as edge classes under the opposite-sides-of-a-square relation.

use std::collections::{BTreeSet, VecDeque};

use serde_json::{json, Value};

use super::CubeBall;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub id: usize,
    pub generator: usize,
    /// Dual edges, as indices into [`CubeBall::edges`].
    pub edges: Vec<usize>,
    /// `Some(side)` when removing the class leaves exactly two components;
    /// `side[v]` is true on the component holding the heads of the dual edges.
    pub side: Option<Vec<bool>>,
}

impl Hyperplane {
    pub fn is_separating(&self) -> bool {
        self.side.is_some()
    }

    pub fn separates(&self, v: usize, w: usize) -> Option<bool> {
        self.side.as_ref().map(|s| s[v] != s[w])
    }
}

#[derive(Clone, Debug)]
pub struct Hyperplanes {
    pub planes: Vec<Hyperplane>,
    /// Hyperplane of each edge.
    pub class_of: Vec<usize>,
}

impl Hyperplanes {
    /// Separating hyperplanes with `v` and `w` on different sides.
    pub fn separating(&self, v: usize, w: usize) -> BTreeSet<usize> {
        self.planes.iter().filter(|h| h.separates(v, w) == Some(true)).map(|h| h.id).collect()
    }

    pub fn to_json(&self, b: &CubeBall) -> Value {
        let names = b.presentation().generators();
        Value::Array(
            self.planes
                .iter()
                .map(|h| {
                    json!({
                        "id": h.id,
                        "generator": names[h.generator],
                        "edges": h.edges.iter().map(|&e| b.edge_id(e)).collect::<Vec<_>>(),
                        "separating": h.is_separating(),
                    })
                })
                .collect(),
        )
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn hyperplanes(b: &CubeBall) -> Hyperplanes {
    let edges = b.edges();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    let union = |parent: &mut Vec<usize>, x: usize, y: usize| {
        let (rx, ry) = (find(parent, x), find(parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    };
    for c in b.cubes().iter().filter(|c| c.dim() == 2) {
        let e = |v: usize, g: usize| b.edge_index(v, g).expect("cube edges lie in the ball");
        let (g, h) = (c.gens[0], c.gens[1]);
        union(&mut parent, e(c.vertices[0], g), e(c.vertices[2], g));
        union(&mut parent, e(c.vertices[0], h), e(c.vertices[1], h));
    }
    let mut rep_to_id = std::collections::HashMap::new();
    let mut class_of = vec![0; edges.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for e in 0..edges.len() {
        let r = find(&mut parent, e);
        let id = *rep_to_id.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        class_of[e] = id;
        members[id].push(e);
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); b.len()];
    for (e, &(u, _, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let planes = members
        .into_iter()
        .enumerate()
        .map(|(id, es)| {
            let side = halfspaces(b.len(), &adj, &class_of, id, edges[es[0]].2);
            let side = side.filter(|s| es.iter().all(|&e| s[edges[e].0] != s[edges[e].2]));
            Hyperplane { id, generator: edges[es[0]].1, edges: es, side }
        })
        .collect();
    Hyperplanes { planes, class_of }
}

fn halfspaces(n: usize, adj: &[Vec<(usize, usize)>], class_of: &[usize], h: usize, seed: usize) -> Option<Vec<bool>> {
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &(v, e) in &adj[u] {
                if class_of[e] != h && comp[v] == usize::MAX {
                    comp[v] = count;
                    q.push_back(v);
                }
            }
        }
        count += 1;
    }
    (count == 2).then(|| comp.iter().map(|&c| c == comp[seed]).collect())
}
