//! Words over a finite alphabet of generators and their inverses.
//!
//! A letter is a nonzero `i32`: `+k` is generator `k-1`, `-k` its inverse.
//! Letters are ordered `a < a⁻¹ < b < b⁻¹ < …` and words shortlex.

use std::cmp::Ordering;

pub type Letter = i32;

/// Sort key of a letter: generator first, positive before inverse.
#[inline]
pub fn letter_key(x: Letter) -> (u32, bool) {
    (x.unsigned_abs(), x < 0)
}

#[inline]
pub fn gen_of(x: Letter) -> usize {
    x.unsigned_abs() as usize - 1
}

#[inline]
pub fn letter(gen: usize, inverse: bool) -> Letter {
    let k = gen as i32 + 1;
    if inverse {
        -k
    } else {
        k
    }
}

pub fn cmp_letters(a: &[Letter], b: &[Letter]) -> Ordering {
    a.iter().map(|&x| letter_key(x)).cmp(b.iter().map(|&x| letter_key(x)))
}

pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| cmp_letters(a, b))
}

/// All letters over `n` generators in alphabet order.
pub fn alphabet(n: usize) -> Vec<Letter> {
    (0..n).flat_map(|g| [letter(g, false), letter(g, true)]).collect()
}

/// A word in the free group on some generating set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex_cmp(&self.letters, &other.letters)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        assert!(letters.iter().all(|&x| x != 0), "letter 0 is not a generator");
        Word { letters }
    }
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        letters.into()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&x| gen_of(x)).max()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&x| -x).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    pub fn free_reduce(&self) -> Word {
        Word { letters: free_reduce(&self.letters) }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&a), Some(&b)) => self.letters.len() == 1 || a != -b,
                _ => true,
            }
    }

    /// Free reduction followed by removal of cancelling first/last pairs.
    pub fn cyclic_reduce(&self) -> Word {
        let mut w = free_reduce(&self.letters);
        while w.len() >= 2 && w[0] == -w[w.len() - 1] {
            w.pop();
            w.remove(0);
        }
        Word { letters: w }
    }

    pub fn rotate(&self, k: usize) -> Word {
        let n = self.letters.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Lexicographically least word among all rotations of `self` and of its inverse.
    pub fn cyclic_canonical(&self) -> Word {
        let inv = self.inverse();
        let mut best = self.clone();
        for k in 0..self.len().max(1) {
            for cand in [self.rotate(k), inv.rotate(k)] {
                if cmp_letters(&cand.letters, &best.letters) == Ordering::Less {
                    best = cand;
                }
            }
        }
        best
    }

    /// Sum of exponents of each generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &x in &self.letters {
            v[gen_of(x)] += x.signum() as i64;
        }
        v
    }

    /// Replaces each generator by a word (given per generator index).
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut letters = Vec::new();
        for &x in &self.letters {
            let img = &images[gen_of(x)];
            if x > 0 {
                letters.extend_from_slice(&img.letters);
            } else {
                letters.extend(img.letters.iter().rev().map(|&y| -y));
            }
        }
        Word { letters }
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|&x| render_letter(x, names))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Renders a letter; inverses of single-character lowercase names are upper-cased.
pub fn render_letter(x: Letter, names: &[String]) -> String {
    let name = &names[gen_of(x)];
    if x > 0 {
        name.clone()
    } else if name.chars().count() == 1 && name.chars().all(|c| c.is_lowercase()) {
        name.to_uppercase()
    } else {
        format!("{name}^-1")
    }
}

pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &x in letters {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Commutator `[x, y] = x⁻¹ y⁻¹ x y`.
pub fn commutator(x: &Word, y: &Word) -> Word {
    x.inverse().concat(&y.inverse()).concat(x).concat(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn letter_order() {
        let mut l = vec![-2, 1, 2, -1];
        l.sort_by_key(|&x| letter_key(x));
        assert_eq!(l, vec![1, -1, 2, -2]);
    }

    #[test]
    fn reductions() {
        let w = Word::new(vec![1, 2, -2, -1, 1]);
        assert_eq!(w.free_reduce().letters(), &[1]);
        let c = Word::new(vec![-1, 2, 1]);
        assert_eq!(c.cyclic_reduce().letters(), &[2]);
        assert!(!c.is_cyclically_reduced());
    }

    #[test]
    fn canonical_rotation() {
        let w = Word::new(vec![2, 1, -2, -1]);
        assert_eq!(w.cyclic_canonical().letters(), &[1, 2, -1, -2]);
        assert_eq!(Word::empty().cyclic_canonical(), Word::empty());
    }

    #[test]
    fn commutator_shape() {
        let a = Word::new(vec![1]);
        let b = Word::new(vec![2]);
        assert_eq!(commutator(&a, &b).letters(), &[-1, -2, 1, 2]);
    }

    proptest! {
        #[test]
        fn inverse_cancels(v in proptest::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 0..20)) {
            let w = Word::new(v);
            prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        }
    }
}
