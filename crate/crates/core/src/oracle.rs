//! Word-equality oracles.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::small_cancellation::{DehnReducer, TraceStep};
use crate::word::{gen_of, letter_key, Letter, Word};

/// Decision procedure for `w = 1` in a fixed group.
#[derive(Clone, Debug)]
pub struct EqualityOracle {
    ngens: usize,
    kind: OracleKind,
}

#[derive(Clone, Debug)]
pub enum OracleKind {
    Free,
    /// Generator `g` maps to `images[g]` in ℤ^d; `None` means the standard basis.
    FreeAbelian { images: Option<Vec<Vec<i64>>> },
    FiniteTable(FiniteTable),
    /// `commute[g][h]` for distinct generators.
    Raag { commute: Vec<Vec<bool>> },
    DehnC16(Box<DehnReducer>),
    /// One oracle per factor over that factor's generators, in order.
    FreeProduct { factor_of: Vec<usize>, local: Vec<usize>, factors: Vec<EqualityOracle> },
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteTable {
    /// Validates identity, closure, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>, identity: usize, generators: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 || identity >= n {
            return Err(Error::input("multiplication table needs an identity element"));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::input("multiplication table is not closed"));
        }
        for x in 0..n {
            if table[identity][x] != x || table[x][identity] != x {
                return Err(Error::input(format!("element {identity} is not an identity")));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverse[x] = y,
                None => return Err(Error::input(format!("element {x} has no inverse"))),
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::input("multiplication table is not associative"));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(Error::input("generator image outside the table"));
        }
        Ok(FiniteTable { table, identity, inverse, generators })
    }

    /// ℤ/n with one generator mapped to 1.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("cyclic group order must be positive"));
        }
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FiniteTable::new(table, 0, vec![1 % n])
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn eval(&self, w: &Word) -> usize {
        w.letters().iter().fold(self.identity, |acc, &x| {
            let g = self.generators[gen_of(x)];
            self.table[acc][if x > 0 { g } else { self.inverse[g] }]
        })
    }
}

/// Canonical key of a group element under an oracle that has normal forms.
pub type CanonKey = Vec<i64>;

impl EqualityOracle {
    pub fn free(ngens: usize) -> Self {
        EqualityOracle { ngens, kind: OracleKind::Free }
    }

    pub fn free_abelian(ngens: usize) -> Self {
        EqualityOracle { ngens, kind: OracleKind::FreeAbelian { images: None } }
    }

    pub fn free_abelian_images(images: Vec<Vec<i64>>) -> Result<Self> {
        let d = images.first().map_or(0, Vec::len);
        if images.iter().any(|v| v.len() != d) {
            return Err(Error::input("free-abelian images must share one dimension"));
        }
        Ok(EqualityOracle { ngens: images.len(), kind: OracleKind::FreeAbelian { images: Some(images) } })
    }

    pub fn finite_table(t: FiniteTable) -> Self {
        EqualityOracle { ngens: t.ngens(), kind: OracleKind::FiniteTable(t) }
    }

    /// RAAG on `ngens` generators with the listed commuting pairs.
    pub fn raag(ngens: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut commute = vec![vec![false; ngens]; ngens];
        for &(a, b) in edges {
            if a >= ngens || b >= ngens || a == b {
                return Err(Error::input(format!("bad commuting pair ({a}, {b})")));
            }
            commute[a][b] = true;
            commute[b][a] = true;
        }
        Ok(EqualityOracle { ngens, kind: OracleKind::Raag { commute } })
    }

    pub fn dehn_c16(p: &Presentation) -> Result<Self> {
        Ok(EqualityOracle { ngens: p.ngens(), kind: OracleKind::DehnC16(Box::new(DehnReducer::new(p)?)) })
    }

    /// Oracle for a free product, given the factor of each generator and one
    /// oracle per factor.
    pub fn free_product(factor_of: Vec<usize>, factors: Vec<EqualityOracle>) -> Result<Self> {
        let mut counts = vec![0usize; factors.len()];
        let mut local = Vec::with_capacity(factor_of.len());
        for &f in &factor_of {
            if f >= factors.len() {
                return Err(Error::input(format!("generator assigned to missing factor {f}")));
            }
            local.push(counts[f]);
            counts[f] += 1;
        }
        for (k, o) in factors.iter().enumerate() {
            if o.ngens != counts[k] {
                return Err(Error::input(format!(
                    "factor {k} oracle has {} generators, presentation has {}",
                    o.ngens, counts[k]
                )));
            }
        }
        Ok(EqualityOracle { ngens: factor_of.len(), kind: OracleKind::FreeProduct { factor_of, local, factors } })
    }

    /// Builds an oracle from its JSON spec against a presentation.
    pub fn from_spec(spec: &Value, p: &Presentation) -> Result<Self> {
        let kind = spec.get("kind").and_then(Value::as_str).ok_or_else(|| Error::input("oracle spec needs a \"kind\""))?;
        let o = match kind {
            "free" => EqualityOracle::free(p.ngens()),
            "free-abelian" => match spec.get("images") {
                None => EqualityOracle::free_abelian(p.ngens()),
                Some(v) => {
                    let images: Vec<Vec<i64>> =
                        serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("images: {e}")))?;
                    EqualityOracle::free_abelian_images(images)?
                }
            },
            "cyclic" => {
                let n = spec.get("order").and_then(Value::as_u64).ok_or_else(|| Error::input("cyclic oracle needs \"order\""))?;
                EqualityOracle::finite_table(FiniteTable::cyclic(n as usize)?)
            }
            "finite-table" => {
                let table: Vec<Vec<usize>> = serde_json::from_value(spec.get("table").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::input(format!("table: {e}")))?;
                let identity = spec.get("identity").and_then(Value::as_u64).unwrap_or(0) as usize;
                let gens: Vec<usize> = serde_json::from_value(spec.get("generators").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::input(format!("generators: {e}")))?;
                EqualityOracle::finite_table(FiniteTable::new(table, identity, gens)?)
            }
            "raag" => {
                let raw: Vec<(Value, Value)> = serde_json::from_value(spec.get("edges").cloned().unwrap_or(Value::Array(vec![])))
                    .map_err(|e| Error::input(format!("edges: {e}")))?;
                let idx = |v: &Value| -> Result<usize> {
                    match v {
                        Value::Number(n) => n.as_u64().map(|x| x as usize).ok_or_else(|| Error::input("bad generator index")),
                        Value::String(s) => p.gen_index(s).ok_or_else(|| Error::input(format!("unknown generator {s:?}"))),
                        _ => Err(Error::input("raag edge endpoints must be names or indices")),
                    }
                };
                let edges = raw.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
                EqualityOracle::raag(p.ngens(), &edges)?
            }
            "dehn-c16" => EqualityOracle::dehn_c16(p)?,
            "free-product" => {
                let specs = spec.get("factors").and_then(Value::as_array).ok_or_else(|| Error::input("free-product oracle needs \"factors\""))?;
                let factor_of: Vec<usize> = p
                    .factors()
                    .ok_or_else(|| Error::input("free-product oracle needs a free-product presentation"))?
                    .to_vec();
                let mut factors = Vec::new();
                for (k, s) in specs.iter().enumerate() {
                    factors.push(EqualityOracle::from_spec(s, &factor_presentation(p, k))?);
                }
                EqualityOracle::free_product(factor_of, factors)?
            }
            other => return Err(Error::input(format!("unknown oracle kind {other:?}"))),
        };
        if o.ngens != p.ngens() {
            return Err(Error::input(format!("oracle has {} generators, presentation has {}", o.ngens, p.ngens())));
        }
        Ok(o)
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            OracleKind::Free => "free",
            OracleKind::FreeAbelian { .. } => "free-abelian",
            OracleKind::FiniteTable(_) => "finite-table",
            OracleKind::Raag { .. } => "raag",
            OracleKind::DehnC16(_) => "dehn-c16",
            OracleKind::FreeProduct { .. } => "free-product",
        }
    }

    /// True when the oracle certifies the whole group is finite and listed.
    pub fn finite_order(&self) -> Option<usize> {
        match &self.kind {
            OracleKind::FiniteTable(t) => Some(t.order()),
            _ => None,
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.ngens => Err(Error::input(format!("word uses generator {g} beyond the oracle's {}", self.ngens))),
            _ => Ok(()),
        }
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        self.check_word(w)?;
        Ok(self.trivial_unchecked(w))
    }

    fn trivial_unchecked(&self, w: &Word) -> bool {
        match &self.kind {
            OracleKind::DehnC16(d) => d.is_trivial(w),
            OracleKind::FreeProduct { .. } => self.free_product_reduce(w).is_empty(),
            _ => self.canonical_unchecked(w).expect("kind has normal forms") == self.canonical_unchecked(&Word::empty()).unwrap(),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Canonical key when the oracle kind has normal forms.
    pub fn canonical(&self, w: &Word) -> Result<Option<CanonKey>> {
        self.check_word(w)?;
        Ok(self.canonical_unchecked(w))
    }

    fn canonical_unchecked(&self, w: &Word) -> Option<CanonKey> {
        match &self.kind {
            OracleKind::Free => Some(w.free_reduce().letters().iter().map(|&x| x as i64).collect()),
            OracleKind::FreeAbelian { images: None } => Some(w.exponent_sums(self.ngens)),
            OracleKind::FreeAbelian { images: Some(img) } => {
                let d = img.first().map_or(0, Vec::len);
                let mut v = vec![0i64; d];
                for &x in w.letters() {
                    for (k, c) in img[gen_of(x)].iter().enumerate() {
                        v[k] += x.signum() as i64 * c;
                    }
                }
                Some(v)
            }
            OracleKind::FiniteTable(t) => Some(vec![t.eval(w) as i64]),
            OracleKind::Raag { commute } => Some(raag_normal_form(commute, w).letters().iter().map(|&x| x as i64).collect()),
            OracleKind::DehnC16(_) => None,
            OracleKind::FreeProduct { factors, .. } => {
                let syl = self.free_product_reduce(w);
                let mut key = Vec::new();
                for (k, sw) in syl {
                    let c = factors[k].canonical_unchecked(&sw)?;
                    key.push(k as i64);
                    key.push(c.len() as i64);
                    key.extend(c);
                }
                Some(key)
            }
        }
    }

    /// Splits into maximal single-factor syllables, deleting trivial ones and
    /// merging neighbours until every syllable is nontrivial.
    fn free_product_reduce(&self, w: &Word) -> Vec<(usize, Word)> {
        let OracleKind::FreeProduct { factor_of, local, factors } = &self.kind else {
            unreachable!("free-product reduction on another kind")
        };
        let mut out: Vec<(usize, Vec<Letter>)> = Vec::new();
        for &x in w.letters() {
            let f = factor_of[gen_of(x)];
            let lx = x.signum() * (local[gen_of(x)] as i32 + 1);
            match out.last_mut() {
                Some((k, s)) if *k == f => s.push(lx),
                _ => out.push((f, vec![lx])),
            }
        }
        // Stack pass: a syllable that becomes trivial lets its neighbours merge.
        let mut stack: Vec<(usize, Vec<Letter>)> = Vec::new();
        for (f, mut s) in out {
            if stack.last().is_some_and(|(k, _)| *k == f) {
                let (_, mut top) = stack.pop().unwrap();
                top.append(&mut s);
                s = top;
            }
            if !factors[f].trivial_unchecked(&Word::new(s.clone())) {
                stack.push((f, s));
            }
        }
        stack.into_iter().map(|(k, s)| (k, Word::new(s))).collect()
    }

    /// Dehn reduction with its trace, for `dehn-c16` oracles.
    pub fn dehn_reduce(&self, w: &Word) -> Option<(Word, Vec<TraceStep>)> {
        match &self.kind {
            OracleKind::DehnC16(d) => Some(d.reduce(w)),
            _ => None,
        }
    }

    pub fn dehn_reducer(&self) -> Option<&DehnReducer> {
        match &self.kind {
            OracleKind::DehnC16(d) => Some(d),
            _ => None,
        }
    }
}

/// The sub-presentation of factor `k` of a free-product presentation:
/// its generators and the relators written only in them.
pub fn factor_presentation(p: &Presentation, k: usize) -> Presentation {
    let gens = p.factor_generators(k);
    let mut local = BTreeMap::new();
    for (i, &g) in gens.iter().enumerate() {
        local.insert(g, i);
    }
    let rels = p
        .relators()
        .iter()
        .filter(|r| r.letters().iter().all(|&x| local.contains_key(&gen_of(x))))
        .map(|r| Word::new(r.letters().iter().map(|&x| x.signum() * (local[&gen_of(x)] as i32 + 1)).collect()))
        .collect();
    Presentation::new(gens.iter().map(|&g| p.generators()[g].clone()).collect(), rels).expect("factor of a valid presentation")
}

/// Shortlex-least reduced representative in a right-angled Artin group.
pub fn raag_normal_form(commute: &[Vec<bool>], w: &Word) -> Word {
    let comm = |x: Letter, y: Letter| {
        let (a, b) = (gen_of(x), gen_of(y));
        a != b && commute[a][b]
    };
    // Reduce: a new letter cancels the nearest inverse reachable through
    // letters it commutes with.
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &x in w.letters() {
        let mut hit = None;
        for i in (0..stack.len()).rev() {
            let y = stack[i];
            if y == -x {
                hit = Some(i);
                break;
            }
            if !comm(x, y) {
                break;
            }
        }
        match hit {
            Some(i) => {
                stack.remove(i);
            }
            None => stack.push(x),
        }
    }
    // Lex-least linearisation of the trace.
    let n = stack.len();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if used[i] {
                continue;
            }
            let available = (0..i).all(|j| used[j] || comm(stack[j], stack[i]));
            if available && best.is_none_or(|b| letter_key(stack[i]) < letter_key(stack[b])) {
                best = Some(i);
            }
        }
        let b = best.expect("some letter is always available");
        used[b] = true;
        out.push(stack[b]);
    }
    Word::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{BTreeSet, VecDeque};

    fn z2() -> EqualityOracle {
        EqualityOracle::free_abelian(2)
    }

    #[test]
    fn commutator_trivial_in_free_abelian() {
        assert!(z2().is_trivial(&Word::new(vec![1, 2, -1, -2])).unwrap());
        assert!(!z2().is_trivial(&Word::new(vec![1, 2])).unwrap());
        assert!(!EqualityOracle::free(2).is_trivial(&Word::new(vec![1, 2, -1, -2])).unwrap());
    }

    #[test]
    fn rejects_foreign_generators() {
        assert!(z2().is_trivial(&Word::new(vec![3])).is_err());
    }

    #[test]
    fn finite_table_validation() {
        assert!(FiniteTable::new(vec![vec![0, 1], vec![1, 1]], 0, vec![1]).is_err());
        assert!(FiniteTable::new(vec![vec![0, 1], vec![1, 0]], 0, vec![1]).is_ok());
        let z3 = EqualityOracle::finite_table(FiniteTable::cyclic(3).unwrap());
        assert!(z3.is_trivial(&Word::new(vec![1, 1, 1])).unwrap());
        assert!(!z3.is_trivial(&Word::new(vec![1, 1])).unwrap());
        assert!(z3.is_trivial(&Word::new(vec![-1, -1, -1, 1, 1, 1])).unwrap());
    }

    #[test]
    fn images_oracle() {
        // ⟨a,b,c | [a,b], c a⁻¹ b⁻¹⟩ ≅ ℤ² with c ↦ a + b.
        let o = EqualityOracle::free_abelian_images(vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(o.is_trivial(&Word::new(vec![3, -1, -2])).unwrap());
        assert!(!o.is_trivial(&Word::new(vec![3, -1])).unwrap());
    }

    #[test]
    fn free_product_syllables() {
        let o = EqualityOracle::free_product(
            vec![0, 0, 1],
            vec![EqualityOracle::free_abelian(2), EqualityOracle::finite_table(FiniteTable::cyclic(3).unwrap())],
        )
        .unwrap();
        // a c³ b a⁻¹ b⁻¹ is trivial; a c a⁻¹ c⁻¹ is not.
        assert!(o.is_trivial(&Word::new(vec![1, 3, 3, 3, 2, -1, -2])).unwrap());
        assert!(!o.is_trivial(&Word::new(vec![1, 3, -1, -3])).unwrap());
        assert_eq!(
            o.canonical(&Word::new(vec![1, 3, 3, 3, 2])).unwrap(),
            o.canonical(&Word::new(vec![2, 1])).unwrap()
        );
    }

    #[test]
    fn raag_normal_form_examples() {
        // Generators a, b commute; c is free.
        let commute = vec![vec![false, true, false], vec![true, false, false], vec![false, false, false]];
        let nf = |v: Vec<i32>| raag_normal_form(&commute, &Word::new(v)).into_letters();
        assert_eq!(nf(vec![2, 1]), vec![1, 2]);
        assert_eq!(nf(vec![1, 2, -1]), vec![2]);
        assert_eq!(nf(vec![1, 3, -1]), vec![1, 3, -1]);
        assert_eq!(nf(vec![2, 3, 1]), vec![2, 3, 1]);
    }

    /// Exhaustive closure under commuting swaps and free cancellation.
    fn closure_nf(commute: &[Vec<bool>], w: &[i32]) -> Vec<i32> {
        let mut seen: BTreeSet<Vec<i32>> = BTreeSet::new();
        let mut q = VecDeque::new();
        seen.insert(w.to_vec());
        q.push_back(w.to_vec());
        while let Some(u) = q.pop_front() {
            for i in 0..u.len().saturating_sub(1) {
                let (x, y) = (u[i], u[i + 1]);
                let mut next = Vec::new();
                if x == -y {
                    let mut v = u.clone();
                    v.drain(i..i + 2);
                    next.push(v);
                } else if gen_of(x) != gen_of(y) && commute[gen_of(x)][gen_of(y)] {
                    let mut v = u.clone();
                    v.swap(i, i + 1);
                    next.push(v);
                }
                for v in next {
                    if seen.insert(v.clone()) {
                        q.push_back(v);
                    }
                }
            }
        }
        seen.into_iter().min_by(|a, b| crate::word::shortlex_cmp(a, b)).unwrap()
    }

    proptest! {
        #[test]
        fn raag_nf_matches_closure(
            edges in proptest::collection::vec(any::<bool>(), 3),
            v in proptest::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 0..8),
        ) {
            let mut commute = vec![vec![false; 3]; 3];
            for (k, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                commute[a][b] = edges[k];
                commute[b][a] = edges[k];
            }
            let ours = raag_normal_form(&commute, &Word::new(v.clone())).into_letters();
            prop_assert_eq!(ours, closure_nf(&commute, &v));
        }
    }
}
