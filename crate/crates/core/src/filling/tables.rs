//! Filling-function tables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cayley::{based_loops, relative_cayley_complex, CayleyBall};
use crate::complex::{ChainVec, TwoComplex};
use crate::error::{Error, Result};
use crate::filling::harea::{FillStatus, FillingCertificate, HareaOptions, HareaSolver};
use crate::oracle::EqualityOracle;
use crate::presentation::Presentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    DeltaAb,
    Fa,
    ClosureOfDeltaAb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub n: usize,
    pub value: u64,
    pub status: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillingTable {
    pub kind: TableKind,
    pub entries: Vec<TableEntry>,
    pub note: String,
}

impl FillingTable {
    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,value,status,witness\n");
        for e in &self.entries {
            s.push_str(&format!("{},{},{},\"{}\"\n", e.n, e.value, e.status, e.witness.replace('"', "\"\"")));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub jobs: usize,
    pub max_nodes: u64,
    pub vertex_budget: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { jobs: 1, max_nodes: 50_000_000, vertex_budget: crate::cayley::DEFAULT_VERTEX_BUDGET }
    }
}

/// Maps `f` over `items` on up to `jobs` threads; output order matches input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..jobs)
            .map(|t| {
                scope.spawn(move || {
                    (t..items.len()).step_by(jobs).map(|i| (i, f(&items[i]))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker thread panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}

/// Solves many cycles on one complex, in parallel, sharing the H₁ check.
pub fn harea_many(x: &TwoComplex, cycles: &[ChainVec], opts: &HareaOptions, jobs: usize) -> Result<Vec<FillingCertificate>> {
    let h = x.homology();
    let h1_zero = h.betti[1] == 0 && h.torsion[1].is_empty();
    par_map(cycles, jobs, |c| {
        let mut s = HareaSolver::new(x);
        s.set_h1_zero(h1_zero);
        s.solve(c, opts)
    })
    .into_iter()
    .collect()
}

struct Support {
    ball: CayleyBall,
    complex: TwoComplex,
    complete: bool,
}

fn support(p: &Presentation, o: &EqualityOracle, radius: usize, opts: &TableOptions) -> Result<Support> {
    let ball = CayleyBall::build_with_budget(p, o, radius, opts.vertex_budget)?;
    let rel = relative_cayley_complex(&ball, p.relators())?;
    let complete = ball.is_complete() && rel.skipped == 0;
    Ok(Support { ball, complex: rel.complex, complete })
}

fn status_of(certs: &[&FillingCertificate]) -> String {
    if certs.iter().any(|c| c.status == FillStatus::InfeasibleOnSupport) {
        FillStatus::InfeasibleOnSupport.as_str().into()
    } else if certs.iter().all(|c| c.status == FillStatus::OptimalGlobal) {
        FillStatus::OptimalGlobal.as_str().into()
    } else {
        FillStatus::OptimalOnSupport.as_str().into()
    }
}

/// δ^ab(n): the largest harea of a based loop of length ≤ n, over loops at
/// the identity up to rotation and inversion.
pub fn delta_ab_table(
    p: &Presentation,
    o: &EqualityOracle,
    n_max: usize,
    radius: usize,
    opts: &TableOptions,
) -> Result<FillingTable> {
    if n_max == 0 {
        return Ok(FillingTable { kind: TableKind::DeltaAb, entries: vec![], note: String::new() });
    }
    if radius < n_max {
        return Err(Error::Radius { required: n_max, actual: radius });
    }
    let sup = support(p, o, radius, opts)?;
    let loops = based_loops(&sup.ball, n_max);
    let cycles: Vec<ChainVec> = loops.iter().map(|w| sup.ball.walk_chain(0, w).expect("loop lies in the ball")).collect();
    let hopts = HareaOptions { complete: sup.complete, support_radius: Some(radius), max_nodes: opts.max_nodes };
    let certs = harea_many(&sup.complex, &cycles, &hopts, opts.jobs)?;
    let mut entries = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let within: Vec<usize> = (0..loops.len()).filter(|&i| loops[i].len() <= n).collect();
        let mut value = 0;
        let mut witness = "1".to_string();
        for &i in &within {
            if certs[i].status != FillStatus::InfeasibleOnSupport && certs[i].cost > value {
                value = certs[i].cost;
                witness = loops[i].render(p.generators());
            }
        }
        let refs: Vec<&FillingCertificate> = within.iter().map(|&i| &certs[i]).collect();
        let status = if refs.is_empty() {
            if sup.complete { FillStatus::OptimalGlobal.as_str().into() } else { FillStatus::OptimalOnSupport.as_str().into() }
        } else {
            status_of(&refs)
        };
        entries.push(TableEntry { n, value, status, witness });
    }
    Ok(FillingTable {
        kind: TableKind::DeltaAb,
        entries,
        note: format!("based loops at the identity, fillings supported in the radius-{radius} ball"),
    })
}

/// `f̄(n) = max(f(n), max_{1≤j<n} f̄(j) + f̄(n−j))`; `values[i]` is `f(i+1)`.
pub fn superadditive_closure(values: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(values.len());
    for n in 1..=values.len() {
        let mut best = values[n - 1];
        for j in 1..n {
            best = best.max(out[j - 1] + out[n - j - 1]);
        }
        out.push(best);
    }
    out
}

pub fn closure_table(t: &FillingTable) -> FillingTable {
    let closed = superadditive_closure(&t.values());
    let entries = t
        .entries
        .iter()
        .zip(&closed)
        .map(|(e, &v)| TableEntry {
            n: e.n,
            value: v,
            status: e.status.clone(),
            witness: if v == e.value { e.witness.clone() } else { "partition sum".into() },
        })
        .collect();
    FillingTable { kind: TableKind::ClosureOfDeltaAb, entries, note: "superadditive closure".into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaMode {
    ViaClosure,
    DirectCycles,
}

pub fn fa_table(
    p: &Presentation,
    o: &EqualityOracle,
    n_max: usize,
    radius: usize,
    mode: FaMode,
    opts: &TableOptions,
) -> Result<FillingTable> {
    if n_max == 0 {
        return Ok(FillingTable { kind: TableKind::Fa, entries: vec![], note: String::new() });
    }
    match mode {
        FaMode::ViaClosure => {
            let mut t = closure_table(&delta_ab_table(p, o, n_max, radius, opts)?);
            t.kind = TableKind::Fa;
            t.note = "FA surrogate: superadditive closure of the abelianised filling table".into();
            Ok(t)
        }
        FaMode::DirectCycles => {
            if radius < n_max {
                return Err(Error::Radius { required: n_max, actual: radius });
            }
            let sup = support(p, o, radius, opts)?;
            let cycles = conformal_cycles(&sup.complex, n_max);
            let hopts = HareaOptions { complete: sup.complete, support_radius: Some(radius), max_nodes: opts.max_nodes };
            let certs = harea_many(&sup.complex, &cycles, &hopts, opts.jobs)?;
            let mut entries = Vec::new();
            for n in 1..=n_max {
                let within: Vec<usize> = (0..cycles.len()).filter(|&i| cycles[i].l1() as usize <= n).collect();
                let mut value = 0;
                let mut witness = "0".to_string();
                for &i in &within {
                    if certs[i].status != FillStatus::InfeasibleOnSupport && certs[i].cost > value {
                        value = certs[i].cost;
                        witness = cycles[i].to_string();
                    }
                }
                let refs: Vec<&FillingCertificate> = within.iter().map(|&i| &certs[i]).collect();
                let status = if refs.is_empty() { FillStatus::OptimalGlobal.as_str().into() } else { status_of(&refs) };
                entries.push(TableEntry { n, value, status, witness });
            }
            Ok(FillingTable {
                kind: TableKind::Fa,
                entries,
                note: format!("all 1-cycles of size <= {n_max} in the radius-{radius} ball"),
            })
        }
    }
}

/// Simple cycles of length ≤ `max_len` in both orientations.
pub fn simple_cycles(x: &TwoComplex, max_len: usize) -> Vec<ChainVec> {
    let nv = x.vertices().len();
    let mut inc: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); nv];
    for (i, e) in x.edges().iter().enumerate() {
        inc[e.src].push((i, e.dst, 1));
        if e.src != e.dst {
            inc[e.dst].push((i, e.src, -1));
        }
    }
    let mut found: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
    for s in 0..nv {
        let mut visited = vec![false; nv];
        let mut path: Vec<(usize, i64)> = Vec::new();
        visited[s] = true;
        walk(s, s, max_len, &inc, &mut visited, &mut path, &mut found);
    }
    found
        .into_iter()
        .map(|c| ChainVec::from_terms(1, c.into_iter().map(|(e, k)| (x.edges()[e].id.clone(), k))))
        .collect()
}

fn walk(
    s: usize,
    v: usize,
    max_len: usize,
    inc: &[Vec<(usize, usize, i64)>],
    visited: &mut [bool],
    path: &mut Vec<(usize, i64)>,
    found: &mut BTreeSet<Vec<(usize, i64)>>,
) {
    if path.len() == max_len {
        return;
    }
    for &(e, u, k) in &inc[v] {
        if path.iter().any(|&(pe, _)| pe == e) {
            continue;
        }
        if u == s {
            let mut c = path.clone();
            c.push((e, k));
            c.sort_unstable();
            found.insert(c);
        } else if u > s && !visited[u] {
            visited[u] = true;
            path.push((e, k));
            walk(s, u, max_len, inc, visited, path, found);
            path.pop();
            visited[u] = false;
        }
    }
}

/// Every nonzero 1-cycle of ℓ¹ size ≤ `max_len` that is a conformal sum of
/// simple cycles, deduplicated. Every integer 1-cycle has such a decomposition.
pub fn conformal_cycles(x: &TwoComplex, max_len: usize) -> Vec<ChainVec> {
    let simple = simple_cycles(x, max_len);
    let mut out: BTreeSet<Vec<(String, i64)>> = BTreeSet::new();
    fn rec(
        simple: &[ChainVec],
        from: usize,
        cur: &ChainVec,
        size: u64,
        max_len: u64,
        out: &mut BTreeSet<Vec<(String, i64)>>,
    ) {
        for i in from..simple.len() {
            let total = size + simple[i].l1();
            if total > max_len {
                continue;
            }
            let next = cur.plus(&simple[i]);
            if next.l1() != total {
                continue;
            }
            out.insert(next.terms().map(|(k, v)| (k.to_string(), v)).collect());
            rec(simple, i, &next, total, max_len, out);
        }
    }
    rec(&simple, 0, &ChainVec::zero(1), 0, max_len as u64, &mut out);
    out.into_iter().map(|t| ChainVec::from_terms(1, t)).collect()
}

/// Smallest constants with `f(n) ≤ A·g(min(Bn+C, N)) + Dn + E` on `1..=N`,
/// searching `A, B ∈ 1..=max` and `C, D, E ∈ 0..=max`, minimising the sum and
/// then lexicographically. `g(0)` is taken as 0.
pub fn affine_dominance(f: &[u64], g: &[u64], max: u64) -> Option<[u64; 5]> {
    let n_max = f.len().min(g.len());
    let gv = |m: u64| if m == 0 { 0 } else { g[(m as usize).min(n_max) - 1] };
    let mut best: Option<[u64; 5]> = None;
    for a in 1..=max {
        for b in 1..=max {
            for c in 0..=max {
                for d in 0..=max {
                    for e in 0..=max {
                        let k = [a, b, c, d, e];
                        if let Some(bk) = best {
                            if (bk.iter().sum::<u64>(), bk) <= (k.iter().sum::<u64>(), k) {
                                continue;
                            }
                        }
                        let ok = (1..=n_max as u64).all(|n| f[n as usize - 1] <= a * gv(b * n + c) + d * n + e);
                        if ok {
                            best = Some(k);
                        }
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_closure(values: &[u64]) -> Vec<u64> {
        fn best(n: usize, max_part: usize, values: &[u64]) -> u64 {
            if n == 0 {
                return 0;
            }
            (1..=max_part.min(n)).map(|k| values[k - 1] + best(n - k, k, values)).max().unwrap()
        }
        (1..=values.len()).map(|n| best(n, n, values)).collect()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(superadditive_closure(&[5, 1, 1]), vec![5, 10, 15]);
        let sq: Vec<u64> = (1..=8).map(|n| n * n).collect();
        assert_eq!(superadditive_closure(&sq), sq);
        assert_eq!(superadditive_closure(&[0; 6]), vec![0; 6]);
        assert!(superadditive_closure(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn closure_matches_partitions(v in proptest::collection::vec(0u64..50, 0..12)) {
            let c = superadditive_closure(&v);
            prop_assert_eq!(&c, &brute_closure(&v));
            prop_assert_eq!(superadditive_closure(&c), c.clone());
            for (i, (&x, &y)) in v.iter().zip(&c).enumerate() {
                prop_assert!(y >= x, "pointwise at {}", i + 1);
            }
            for a in 1..=c.len() {
                for b in 1..=c.len() - a {
                    prop_assert!(c[a + b - 1] >= c[a - 1] + c[b - 1]);
                }
            }
        }
    }

    #[test]
    fn dominance_identity() {
        let f = vec![0, 0, 0, 1, 1, 2, 2, 4];
        assert_eq!(affine_dominance(&f, &f, 4), Some([1, 1, 0, 0, 0]));
        assert_eq!(affine_dominance(&[100], &[0], 4), None);
    }

    #[test]
    fn par_map_is_ordered() {
        let items: Vec<u32> = (0..37).collect();
        assert_eq!(par_map(&items, 4, |x| x * 2), items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn csv_shape() {
        let t = FillingTable {
            kind: TableKind::DeltaAb,
            entries: vec![TableEntry { n: 1, value: 0, status: "optimal-global".into(), witness: "1".into() }],
            note: String::new(),
        };
        assert_eq!(t.to_csv(), "n,value,status,witness\n1,0,optimal-global,\"1\"\n");
    }
}
