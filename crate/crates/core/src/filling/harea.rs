//! Exact minimal ℓ¹ fillings of 1-cycles.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{ChainVec, TwoComplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillStatus {
    OptimalOnSupport,
    OptimalGlobal,
    InfeasibleOnSupport,
}

impl FillStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FillStatus::OptimalOnSupport => "optimal-on-support",
            FillStatus::OptimalGlobal => "optimal-global",
            FillStatus::InfeasibleOnSupport => "infeasible-on-support",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingCertificate {
    pub cycle: ChainVec,
    pub chain: ChainVec,
    pub cost: u64,
    pub status: FillStatus,
    pub support_radius: Option<usize>,
    pub explanation: Option<String>,
}

impl FillingCertificate {
    pub fn to_json(&self) -> Value {
        let chain: BTreeMap<&str, i64> = self.chain.terms().collect();
        let mut v = json!({
            "cost": self.cost,
            "chain": chain,
            "status": self.status.as_str(),
        });
        if let Some(r) = self.support_radius {
            v["supportRadius"] = json!(r);
        }
        if let Some(e) = &self.explanation {
            v["explanation"] = json!(e);
        }
        v
    }
}

/// Search options.
#[derive(Clone, Debug)]
pub struct HareaOptions {
    /// Mark optimal results as global: the complex is the whole finite space.
    pub complete: bool,
    pub support_radius: Option<usize>,
    /// Node budget for the search.
    pub max_nodes: u64,
}

impl Default for HareaOptions {
    fn default() -> Self {
        HareaOptions { complete: false, support_radius: None, max_nodes: 50_000_000 }
    }
}

/// Reusable solver over one complex. Caches face boundaries and whether H₁ vanishes.
pub struct HareaSolver<'a> {
    x: &'a TwoComplex,
    /// Sparse boundary of each face as (edge, coefficient).
    bd: Vec<Vec<(usize, i64)>>,
    /// Faces incident to each edge, with the incidence coefficient.
    star: Vec<Vec<(usize, i64)>>,
    /// Face ranks in sorted-id order, for lexicographic tie-breaking.
    rank: Vec<usize>,
    max_bd: i64,
    h1_zero: Option<bool>,
}

impl<'a> HareaSolver<'a> {
    pub fn new(x: &'a TwoComplex) -> Self {
        let nf = x.faces().len();
        let mut bd = Vec::with_capacity(nf);
        let mut star = vec![Vec::new(); x.edges().len()];
        for f in 0..nf {
            let b: Vec<(usize, i64)> = x.face_boundary(f).into_iter().collect();
            for &(e, k) in &b {
                star[e].push((f, k));
            }
            bd.push(b);
        }
        let max_bd = bd.iter().map(|b| b.iter().map(|(_, k)| k.abs()).sum::<i64>()).max().unwrap_or(0);
        let mut order: Vec<usize> = (0..nf).collect();
        order.sort_by(|&a, &b| x.faces()[a].id.cmp(&x.faces()[b].id));
        let mut rank = vec![0; nf];
        for (r, &f) in order.iter().enumerate() {
            rank[f] = r;
        }
        HareaSolver { x, bd, star, rank, max_bd, h1_zero: None }
    }

    /// Supplies a known answer to "does H₁ vanish", skipping that computation.
    pub fn set_h1_zero(&mut self, zero: bool) {
        self.h1_zero = Some(zero);
    }

    fn feasible(&mut self, gamma: &ChainVec) -> Result<bool> {
        if self.h1_zero.is_none() {
            let h = self.x.homology();
            self.h1_zero = Some(h.betti[1] == 0 && h.torsion[1].is_empty());
        }
        if self.h1_zero == Some(true) {
            return Ok(true);
        }
        self.x.is_boundary(gamma)
    }

    pub fn solve(&mut self, gamma: &ChainVec, opts: &HareaOptions) -> Result<FillingCertificate> {
        if gamma.dim != 1 {
            return Err(Error::input("harea needs a 1-chain"));
        }
        if !self.x.boundary(gamma)?.is_empty() {
            return Err(Error::input("chain is not a cycle"));
        }
        let status = if opts.complete { FillStatus::OptimalGlobal } else { FillStatus::OptimalOnSupport };
        let cert = |chain: ChainVec, status, explanation| FillingCertificate {
            cycle: gamma.clone(),
            cost: chain.l1(),
            chain,
            status,
            support_radius: opts.support_radius,
            explanation,
        };
        if gamma.is_empty() {
            return Ok(cert(ChainVec::zero(2), status, None));
        }
        if !self.feasible(gamma)? {
            return Ok(cert(
                ChainVec::zero(2),
                FillStatus::InfeasibleOnSupport,
                Some("cycle is not a boundary in this complex (nonzero class in H1)".into()),
            ));
        }
        let mut residual = vec![0i64; self.x.edges().len()];
        for (id, k) in gamma.terms() {
            residual[self.x.edge_idx(id).expect("checked by boundary")] = k;
        }
        let coeffs = self.search(residual, opts.max_nodes)?;
        let mut chain = ChainVec::zero(2);
        for (f, &k) in coeffs.iter().enumerate() {
            chain.add_term(&self.x.faces()[f].id, k);
        }
        if self.x.boundary(&chain)? != *gamma {
            return Err(Error::Construction("filling search returned a chain with the wrong boundary".into()));
        }
        Ok(cert(chain, status, None))
    }

    fn lower_bound(&self, l1: i64) -> i64 {
        (l1 + self.max_bd - 1) / self.max_bd
    }

    /// Iterative deepening on the cost bound; at the first feasible bound all
    /// optimal chains are enumerated and the lexicographically least is kept.
    fn search(&self, residual: Vec<i64>, max_nodes: u64) -> Result<Vec<i64>> {
        let l1: i64 = residual.iter().map(|r| r.abs()).sum();
        let mut st = State {
            residual,
            l1,
            coeffs: vec![0; self.bd.len()],
            nodes: 0,
            max_nodes,
            seen: HashSet::new(),
            best: None,
        };
        let mut bound = self.lower_bound(l1);
        loop {
            st.seen.clear();
            self.dfs(&mut st, 0, bound)?;
            if let Some(b) = st.best.take() {
                return Ok(b);
            }
            bound += 1;
        }
    }

    fn dfs(&self, st: &mut State, g: i64, bound: i64) -> Result<()> {
        st.nodes += 1;
        if st.nodes > st.max_nodes {
            return Err(Error::Resource { budget: format!("harea search nodes {}", st.max_nodes), depth: g as usize });
        }
        if st.l1 == 0 {
            let better = match &st.best {
                None => true,
                Some(b) => self.lex_less(&st.coeffs, b),
            };
            if better {
                st.best = Some(st.coeffs.clone());
            }
            return Ok(());
        }
        if g + self.lower_bound(st.l1) > bound {
            return Ok(());
        }
        if !st.seen.insert(st.coeffs.clone()) {
            return Ok(());
        }
        // Branch on the nonzero edge with the fewest admissible faces.
        let mut pick: Option<(usize, Vec<(usize, i64)>)> = None;
        for (e, &r) in st.residual.iter().enumerate() {
            if r == 0 {
                continue;
            }
            let moves: Vec<(usize, i64)> = self.star[e]
                .iter()
                .map(|&(f, inc)| (f, r.signum() * inc.signum()))
                .filter(|&(f, s)| st.coeffs[f] * s >= 0)
                .collect();
            if moves.is_empty() {
                return Ok(());
            }
            if pick.as_ref().is_none_or(|(_, m)| moves.len() < m.len()) {
                pick = Some((e, moves));
            }
        }
        let (_, mut moves) = pick.expect("nonzero residual has an edge");
        moves.sort_by_key(|&(f, s)| (self.rank[f], s));
        moves.dedup();
        for (f, s) in moves {
            self.apply(st, f, s);
            let r = self.dfs(st, g + 1, bound);
            self.apply(st, f, -s);
            r?;
        }
        Ok(())
    }

    fn apply(&self, st: &mut State, f: usize, s: i64) {
        st.coeffs[f] += s;
        for &(e, k) in &self.bd[f] {
            let old = st.residual[e];
            let new = old - s * k;
            st.l1 += new.abs() - old.abs();
            st.residual[e] = new;
        }
    }

    fn lex_less(&self, a: &[i64], b: &[i64]) -> bool {
        let mut order: Vec<usize> = (0..a.len()).collect();
        order.sort_by_key(|&f| self.rank[f]);
        for f in order {
            if a[f] != b[f] {
                return a[f] < b[f];
            }
        }
        false
    }
}

struct State {
    residual: Vec<i64>,
    l1: i64,
    coeffs: Vec<i64>,
    nodes: u64,
    max_nodes: u64,
    seen: HashSet<Vec<i64>>,
    best: Option<Vec<i64>>,
}

/// One-shot convenience wrapper.
pub fn harea(x: &TwoComplex, gamma: &ChainVec, opts: &HareaOptions) -> Result<FillingCertificate> {
    HareaSolver::new(x).solve(gamma, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::TwoComplexBuilder;

    fn square() -> TwoComplex {
        let mut b = TwoComplexBuilder::new();
        for v in ["p", "q", "r", "s"] {
            b.vertex(v);
        }
        b.edge("e1", "p", "q").edge("e2", "q", "r").edge("e3", "r", "s").edge("e4", "s", "p");
        b.face("sigma", ["e1", "e2", "e3", "e4"].iter().map(|e| (e.to_string(), true)).collect());
        b.build().unwrap()
    }

    #[test]
    fn isolated_square() {
        let x = square();
        let gamma = ChainVec::from_terms(1, [("e1", 1), ("e2", 1), ("e3", 1), ("e4", 1)]);
        let c = harea(&x, &gamma, &HareaOptions::default()).unwrap();
        assert_eq!(c.cost, 1);
        assert_eq!(c.chain, ChainVec::from_terms(2, [("sigma", 1)]));
        let twice = harea(&x, &gamma.scaled(-2), &HareaOptions::default()).unwrap();
        assert_eq!(twice.chain, ChainVec::from_terms(2, [("sigma", -2)]));
    }

    #[test]
    fn empty_cycle() {
        let c = harea(&square(), &ChainVec::zero(1), &HareaOptions::default()).unwrap();
        assert_eq!(c.cost, 0);
        assert!(c.chain.is_empty());
    }

    #[test]
    fn non_cycle_rejected() {
        let gamma = ChainVec::from_terms(1, [("e1", 1)]);
        assert_eq!(harea(&square(), &gamma, &HareaOptions::default()).unwrap_err().code(), "invalid-input");
    }

    #[test]
    fn infeasible_cycle() {
        let mut b = TwoComplexBuilder::new();
        b.vertex("v").edge("a", "v", "v");
        let x = b.build().unwrap();
        let c = harea(&x, &ChainVec::from_terms(1, [("a", 1)]), &HareaOptions::default()).unwrap();
        assert_eq!(c.status, FillStatus::InfeasibleOnSupport);
        assert!(c.explanation.is_some());
    }

    #[test]
    fn sphere_tie_break() {
        // Two disks on one circle: both fill with cost 1; "d1" wins.
        let mut b = TwoComplexBuilder::new();
        b.vertex("v").edge("a", "v", "v");
        b.face("d2", vec![("a".into(), true)]).face("d1", vec![("a".into(), true)]);
        let x = b.build().unwrap();
        let c = harea(&x, &ChainVec::from_terms(1, [("a", 1)]), &HareaOptions::default()).unwrap();
        assert_eq!(c.cost, 1);
        // Lex-least coefficient vector over (d1, d2): (0, 1) < (1, 0).
        assert_eq!(c.chain, ChainVec::from_terms(2, [("d2", 1)]));
    }
}
