//! Finite group presentations.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{TwoComplex, TwoComplexBuilder};
use crate::error::{Error, Result};
use crate::word::{gen_of, render_letter, Letter, Word};

/// `⟨generators | relators⟩`. Relators are stored cyclically reduced and nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    /// For free products: which factor each generator came from.
    factors: Option<Vec<usize>>,
}

/// Rejects names that clash with word syntax or vertex ids.
pub fn check_generator_name(g: &str) -> Result<()> {
    if g.is_empty() || g == "1" || g.chars().any(|c| c.is_whitespace() || matches!(c, '.' | '|' | '^' | ',' | '*')) {
        return Err(Error::input(format!("invalid generator name {g:?}")));
    }
    Ok(())
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if g.is_empty() {
                return Err(Error::input("generator names must be nonempty"));
            }
            check_generator_name(g)?;
            if !seen.insert(g.as_str()) {
                return Err(Error::input(format!("duplicate generator {g:?}")));
            }
        }
        let mut rels = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(Error::input(format!("relator {i} uses undeclared generator index {g}")));
                }
            }
            let r = r.cyclic_reduce();
            if r.is_empty() {
                return Err(Error::input(format!("relator {i} is empty after cyclic reduction")));
            }
            rels.push(r);
        }
        Ok(Presentation { generators, relators: rels, factors: None })
    }

    pub fn free(names: &[&str]) -> Self {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), Vec::new()).expect("valid names")
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn factors(&self) -> Option<&[usize]> {
        self.factors.as_deref()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parses a relator written as whitespace-separated tokens. A token is a
    /// generator name, an upper-cased single-letter name for the inverse, or
    /// `name^k`. Without whitespace and with all names single characters, each
    /// character is a token.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_word(&self.generators, s)
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.generators)
    }

    /// Disjoint union of generators and relators; colliding names in the second
    /// factor get a `'` suffix until unique.
    pub fn free_product(&self, other: &Presentation) -> Presentation {
        let mut names = self.generators.clone();
        let mut taken: HashSet<String> = names.iter().cloned().collect();
        for g in &other.generators {
            let mut n = g.clone();
            while taken.contains(&n) {
                n.push('\'');
            }
            taken.insert(n.clone());
            names.push(n);
        }
        let shift = self.ngens() as i32;
        let mut rels = self.relators.clone();
        for r in &other.relators {
            rels.push(Word::new(r.letters().iter().map(|&x| x.signum() * (x.abs() + shift)).collect()));
        }
        let mut factors = vec![0; self.ngens()];
        factors.extend(std::iter::repeat_n(1, other.ngens()));
        Presentation { generators: names, relators: rels, factors: Some(factors) }
    }

    /// Word map of the retraction onto factor `k`: generators of other factors
    /// are deleted.
    pub fn retract_to_factor(&self, w: &Word, k: usize) -> Result<Word> {
        let factors = self
            .factors
            .as_ref()
            .ok_or_else(|| Error::input("presentation has no free-product factor data"))?;
        Ok(Word::new(w.letters().iter().copied().filter(|&x| factors[gen_of(x)] == k).collect()))
    }

    /// Generators of factor `k`, as indices into this presentation.
    pub fn factor_generators(&self, k: usize) -> Vec<usize> {
        match &self.factors {
            Some(f) => (0..self.ngens()).filter(|&g| f[g] == k).collect(),
            None => (0..self.ngens()).collect(),
        }
    }

    /// Standard presentation 2-complex: one vertex, a loop per generator, a disk per relator.
    pub fn presentation_complex(&self) -> TwoComplex {
        let mut b = TwoComplexBuilder::new();
        b.vertex("*");
        for g in &self.generators {
            b.edge(g.clone(), "*", "*");
        }
        for (i, r) in self.relators.iter().enumerate() {
            let cycle = r.letters().iter().map(|&x| (self.generators[gen_of(x)].clone(), x > 0)).collect();
            b.face(format!("r{i}"), cycle);
        }
        b.build().expect("presentation complex is well formed")
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|r| Value::String(self.render(r))).collect(),
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<Self> {
        let mut rels = Vec::new();
        for (i, r) in j.relators.iter().enumerate() {
            let w = match r {
                Value::String(s) => parse_word(&j.generators, s)?,
                Value::Array(items) => {
                    let mut letters = Vec::new();
                    for it in items {
                        let x = it
                            .as_i64()
                            .filter(|&x| x != 0 && x.unsigned_abs() as usize <= j.generators.len())
                            .ok_or_else(|| Error::input(format!("relator {i}: bad letter {it}")))?;
                        letters.push(x as Letter);
                    }
                    Word::new(letters)
                }
                other => return Err(Error::input(format!("relator {i}: expected string or array, got {other}"))),
            };
            rels.push(w);
        }
        Presentation::new(j.generators.clone(), rels)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PresentationJson = serde_json::from_str(s).map_err(|e| Error::input(format!("presentation JSON: {e}")))?;
        Self::from_json(&j)
    }
}

/// Wire form of a presentation. Relators are strings or arrays of signed
/// 1-based generator indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<Value>,
}

pub fn parse_word(generators: &[String], s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(Word::empty());
    }
    let tokens: Vec<String> = if s.contains(char::is_whitespace) {
        s.split_whitespace().map(str::to_string).collect()
    } else if generators.iter().all(|g| g.chars().count() == 1) && !s.contains('^') {
        s.chars().map(|c| c.to_string()).collect()
    } else {
        vec![s.to_string()]
    };
    let mut letters = Vec::new();
    for t in tokens {
        let (name, exp) = match t.split_once('^') {
            Some((n, e)) => (n.to_string(), e.parse::<i64>().map_err(|_| Error::input(format!("bad exponent in {t:?}")))?),
            None => (t.clone(), 1),
        };
        let (g, sign) = if let Some(g) = generators.iter().position(|x| *x == name) {
            (g, 1)
        } else if name.chars().count() == 1 && name.chars().all(|c| c.is_uppercase()) {
            let lower = name.to_lowercase();
            match generators.iter().position(|x| *x == lower) {
                Some(g) => (g, -1),
                None => return Err(Error::input(format!("unknown generator token {t:?}"))),
            }
        } else {
            return Err(Error::input(format!("unknown generator token {t:?}")));
        };
        let e = exp * sign;
        let x = crate::word::letter(g, e < 0);
        for _ in 0..e.unsigned_abs() {
            letters.push(x);
        }
    }
    Ok(Word::new(letters))
}

/// Renders a single letter against a presentation's names.
pub fn letter_name(p: &Presentation, x: Letter) -> String {
    render_letter(x, &p.generators)
}
