//! Metric small cancellation: pieces, the C'(λ) test and Dehn's algorithm.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{cmp_letters, Letter, Word};

/// Exact positive rational `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("ratio with zero denominator"));
        }
        Ok(Ratio { num, den })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::input(format!("cannot parse ratio {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => Ratio::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Ratio::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }

    /// `len < self * total`.
    pub fn strictly_exceeds(&self, len: usize, total: usize) -> bool {
        (len as u128) * (self.den as u128) < (self.num as u128) * (total as u128)
    }
}

/// The symmetrised closure R*: every cyclic conjugate of every relator and of
/// its inverse, as distinct words, each tagged with the relator it came from.
#[derive(Clone, Debug)]
pub struct Symmetrized {
    pub words: Vec<Vec<Letter>>,
    pub source: Vec<usize>,
}

impl Symmetrized {
    pub fn new(relators: &[Word]) -> Self {
        let mut seen = HashSet::new();
        let mut words = Vec::new();
        let mut source = Vec::new();
        for (i, r) in relators.iter().enumerate() {
            for base in [r.clone(), r.inverse()] {
                for k in 0..base.len() {
                    let w = base.rotate(k).into_letters();
                    if seen.insert(w.clone()) {
                        words.push(w);
                        source.push(i);
                    }
                }
            }
        }
        Symmetrized { words, source }
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.words.iter().any(|x| x == w)
    }
}

fn lcp(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Outcome of a C'(λ) check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct SmallCancellationReport {
    pub max_piece: usize,
    pub longest_piece: Vec<Letter>,
    pub relator_lengths: Vec<usize>,
    pub verdict: bool,
}

/// Computes all pieces of the presentation and tests `|p| < λ|r|` for every
/// piece `p` of every relator `r`.
pub fn c_prime_check(p: &Presentation, lambda: Ratio) -> SmallCancellationReport {
    let sym = Symmetrized::new(p.relators());
    let n = sym.words.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_letters(&sym.words[a], &sym.words[b]));
    // The longest common prefix of a word with any other word of a sorted
    // list is attained at one of its two neighbours.
    let mut best = vec![0usize; n];
    for w in order.windows(2) {
        let l = lcp(&sym.words[w[0]], &sym.words[w[1]]);
        best[w[0]] = best[w[0]].max(l);
        best[w[1]] = best[w[1]].max(l);
    }
    let mut max_piece = 0;
    let mut longest = Vec::new();
    let mut verdict = true;
    for i in 0..n {
        let len = sym.words[i].len();
        if best[i] > max_piece {
            max_piece = best[i];
            longest = sym.words[i][..best[i]].to_vec();
        }
        if !lambda.strictly_exceeds(best[i], len) {
            verdict = false;
        }
    }
    SmallCancellationReport {
        max_piece,
        longest_piece: longest,
        relator_lengths: p.relators().iter().map(Word::len).collect(),
        verdict,
    }
}

/// One rewriting step of Dehn's algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    /// Position of the rewritten subword in the current word.
    pub pos: usize,
    pub removed: Vec<Letter>,
    pub inserted: Vec<Letter>,
    /// Relator used, or `None` for a free cancellation.
    pub relator: Option<usize>,
}

/// Dehn's algorithm for a presentation verified to satisfy C'(1/6).
#[derive(Clone, Debug)]
pub struct DehnReducer {
    presentation: Presentation,
    sym: Symmetrized,
    by_first: Vec<Vec<usize>>,
}

impl DehnReducer {
    /// Fails unless `c_prime_check(p, 1/6)` passes.
    pub fn new(p: &Presentation) -> Result<Self> {
        let report = c_prime_check(p, Ratio { num: 1, den: 6 });
        if !report.verdict {
            return Err(Error::Construction(format!(
                "presentation fails C'(1/6): longest piece has length {}",
                report.max_piece
            )));
        }
        let sym = Symmetrized::new(p.relators());
        let alph = 2 * p.ngens();
        let mut by_first = vec![Vec::new(); alph];
        for (i, w) in sym.words.iter().enumerate() {
            by_first[letter_slot(w[0])].push(i);
        }
        Ok(DehnReducer { presentation: p.clone(), sym, by_first })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    fn free_reduce_traced(w: &mut Vec<Letter>, trace: &mut Vec<TraceStep>, from: usize) {
        let mut i = from.saturating_sub(1);
        while i + 1 < w.len() {
            if w[i] == -w[i + 1] {
                trace.push(TraceStep { pos: i, removed: vec![w[i], w[i + 1]], inserted: vec![], relator: None });
                w.drain(i..i + 2);
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
    }

    /// Leftmost position holding more than half of some element of R*;
    /// among those, the longest match, then the smallest R* index.
    fn find_long_subword(&self, w: &[Letter]) -> Option<(usize, usize, usize)> {
        for pos in 0..w.len() {
            let mut best: Option<(usize, usize)> = None;
            for &ri in &self.by_first[letter_slot(w[pos])] {
                let r = &self.sym.words[ri];
                let l = lcp(&w[pos..], r);
                if 2 * l > r.len() && best.is_none_or(|(bl, _)| l > bl) {
                    best = Some((l, ri));
                }
            }
            if let Some((l, ri)) = best {
                return Some((pos, l, ri));
            }
        }
        None
    }

    /// Dehn-reduces `w`, returning the reduced word and the full rewrite trace.
    pub fn reduce(&self, w: &Word) -> (Word, Vec<TraceStep>) {
        let mut cur = w.letters().to_vec();
        let mut trace = Vec::new();
        Self::free_reduce_traced(&mut cur, &mut trace, 0);
        while let Some((pos, l, ri)) = self.find_long_subword(&cur) {
            let r = &self.sym.words[ri];
            let removed = cur[pos..pos + l].to_vec();
            let inserted: Vec<Letter> = r[l..].iter().rev().map(|&x| -x).collect();
            cur.splice(pos..pos + l, inserted.iter().copied());
            trace.push(TraceStep { pos, removed, inserted: inserted.clone(), relator: Some(self.sym.source[ri]) });
            Self::free_reduce_traced(&mut cur, &mut trace, pos);
        }
        (Word::new(cur), trace)
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.reduce(w).0.is_empty()
    }

    /// Replays a trace from `start`, checking each step is either a free
    /// cancellation or the replacement of `u` by `v⁻¹` with `uv ∈ R*`.
    /// Returns the final word.
    pub fn replay(&self, start: &Word, trace: &[TraceStep]) -> Result<Word> {
        let mut cur = start.letters().to_vec();
        for (k, s) in trace.iter().enumerate() {
            let end = s.pos + s.removed.len();
            if end > cur.len() || cur[s.pos..end] != s.removed[..] {
                return Err(Error::input(format!("trace step {k} does not match the current word")));
            }
            match s.relator {
                None => {
                    if !(s.removed.len() == 2 && s.removed[0] == -s.removed[1] && s.inserted.is_empty()) {
                        return Err(Error::input(format!("trace step {k} is not a free cancellation")));
                    }
                }
                Some(_) => {
                    let mut cyc = s.removed.clone();
                    cyc.extend(s.inserted.iter().rev().map(|&x| -x));
                    if !self.sym.contains(&cyc) {
                        return Err(Error::input(format!("trace step {k} does not use a relator")));
                    }
                }
            }
            cur.splice(s.pos..end, s.inserted.iter().copied());
        }
        Ok(Word::new(cur))
    }
}

fn letter_slot(x: Letter) -> usize {
    let g = x.unsigned_abs() as usize - 1;
    2 * g + usize::from(x < 0)
}

/// Distinct lengths among relators, for reports.
pub fn relator_length_set(p: &Presentation) -> BTreeSet<usize> {
    p.relators().iter().map(Word::len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Presentation {
        Presentation::from_json_str(r#"{"generators":["a","b"],"relators":["a b A B"]}"#).unwrap()
    }

    #[test]
    fn commutator_fails_c16() {
        let r = c_prime_check(&z2(), Ratio::new(1, 6).unwrap());
        assert_eq!(r.max_piece, 1);
        assert!(!r.verdict);
        assert!(DehnReducer::new(&z2()).is_err());
    }

    #[test]
    fn no_relators_vacuous() {
        let r = c_prime_check(&Presentation::free(&["a", "b"]), Ratio::new(1, 6).unwrap());
        assert!(r.verdict);
        assert_eq!(r.max_piece, 0);
    }

    #[test]
    fn cyclic_group_dehn() {
        let p = Presentation::from_json_str(r#"{"generators":["a"],"relators":["a^3"]}"#).unwrap();
        let d = DehnReducer::new(&p).unwrap();
        for n in 0..12 {
            let w = Word::new(vec![1; n]);
            let (red, trace) = d.reduce(&w);
            assert_eq!(red.is_empty(), n % 3 == 0, "a^{n}");
            assert_eq!(d.replay(&w, &trace).unwrap(), red);
        }
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!(Ratio::parse("1/6").unwrap(), Ratio { num: 1, den: 6 });
        assert!(Ratio::parse("1/0").is_err());
        assert!(Ratio::parse("x").is_err());
        let sixth = Ratio::parse("1/6").unwrap();
        assert!(sixth.strictly_exceeds(20, 121));
        assert!(!sixth.strictly_exceeds(21, 121));
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let p = Presentation::from_json_str(r#"{"generators":["a"],"relators":["a^3"]}"#).unwrap();
        let d = DehnReducer::new(&p).unwrap();
        let w = Word::new(vec![1, 1, 1]);
        let (_, mut trace) = d.reduce(&w);
        trace[0].inserted = vec![1];
        assert!(d.replay(&w, &trace).is_err());
    }
}
