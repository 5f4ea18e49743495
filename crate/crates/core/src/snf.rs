//! Sparse exact integer elimination.
//!
//! Boundary matrices of cell complexes are very sparse with mostly unit
//! entries, so the elimination works on hash-map rows and picks unit pivots
//! in the sparsest row whenever it can. All arithmetic is `BigInt`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer matrix stored by rows, with a column occupancy index.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<HashMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

/// Result of diagonalising a matrix by unimodular row and column operations.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Absolute values of the pivots, one per unit of rank. Not yet in
    /// divisibility order; see [`invariant_factors`].
    pub pivots: Vec<BigInt>,
    /// `Some(true)` when the right-hand side supplied to
    /// [`SparseMatrix::diagonalize_with_rhs`] lies in the integer column span.
    pub rhs_in_span: Option<bool>,
}

impl Diagonalization {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Invariant factors strictly greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        invariant_factors(&self.pivots)
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![HashMap::new(); nrows],
            cols: vec![BTreeSet::new(); ncols],
        }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let nrows = dense.len();
        let ncols = dense.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(nrows, ncols);
        for (i, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.add(i, j, &BigInt::from(v));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let entry = self.rows[i].entry(j).or_insert_with(BigInt::zero);
        *entry += v;
        if entry.is_zero() {
            self.rows[i].remove(&j);
            self.cols[j].remove(&i);
        } else {
            self.cols[j].insert(i);
        }
    }

    fn get(&self, i: usize, j: usize) -> BigInt {
        self.rows[i].get(&j).cloned().unwrap_or_else(BigInt::zero)
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[i].remove(&j);
            self.cols[j].remove(&i);
        } else {
            self.rows[i].insert(j, v);
            self.cols[j].insert(i);
        }
    }

    /// row_k -= q * row_i, mirrored on `rhs`.
    fn row_axpy(&mut self, k: usize, i: usize, q: &BigInt, rhs: &mut Option<Vec<BigInt>>) {
        let src: Vec<(usize, BigInt)> = self.rows[i].iter().map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in src {
            let delta = -(q * v);
            self.add(k, c, &delta);
        }
        if let Some(r) = rhs {
            let delta = q * &r[i];
            r[k] -= delta;
        }
    }

    pub fn diagonalize(self) -> Diagonalization {
        self.run(None)
    }

    /// Diagonalises while tracking whether `rhs` is an integer combination of
    /// the columns.
    pub fn diagonalize_with_rhs(self, rhs: Vec<BigInt>) -> Diagonalization {
        assert_eq!(rhs.len(), self.nrows, "rhs length must match row count");
        self.run(Some(rhs))
    }

    fn choose_pivot(&self, start_col: &mut usize) -> Option<(usize, usize)> {
        // Unit pivot in the sparsest row of the first column that has one.
        while *start_col < self.ncols && self.cols[*start_col].is_empty() {
            *start_col += 1;
        }
        for j in *start_col..self.ncols {
            let mut best: Option<(usize, usize)> = None;
            for &i in &self.cols[j] {
                if self.rows[i][&j].magnitude().is_one() {
                    let len = self.rows[i].len();
                    if best.is_none_or(|(bl, bi)| (len, i) < (bl, bi)) {
                        best = Some((len, i));
                    }
                }
            }
            if let Some((_, i)) = best {
                return Some((i, j));
            }
        }
        // No unit anywhere: smallest magnitude overall.
        let mut best: Option<(BigInt, usize, usize)> = None;
        for j in *start_col..self.ncols {
            for &i in &self.cols[j] {
                let a = self.rows[i][&j].abs();
                let better = match &best {
                    None => true,
                    Some((b, bi, bj)) => (&a, j, i) < (b, *bj, *bi),
                };
                if better {
                    best = Some((a, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn run(mut self, mut rhs: Option<Vec<BigInt>>) -> Diagonalization {
        let mut pivots = Vec::new();
        let mut pivot_row = vec![false; self.nrows];
        let mut consistent = true;
        let mut start_col = 0usize;
        while let Some((mut pi, mut pj)) = self.choose_pivot(&mut start_col) {
            loop {
                // Clear the pivot column with row operations.
                let p = self.get(pi, pj);
                let others: Vec<usize> = self.cols[pj].iter().copied().filter(|&k| k != pi).collect();
                let mut remainder = false;
                for k in others {
                    let a = self.get(k, pj);
                    let q = &a / &p;
                    if !q.is_zero() {
                        self.row_axpy(k, pi, &q, &mut rhs);
                    }
                    if !self.get(k, pj).is_zero() {
                        remainder = true;
                    }
                }
                if remainder {
                    let (k, _) = self.cols[pj]
                        .iter()
                        .map(|&k| (k, self.get(k, pj).abs()))
                        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
                        .expect("column has entries");
                    pi = k;
                    continue;
                }
                // Column is clean; clear the pivot row with column operations,
                // which only touch row `pi` since column `pj` is a unit vector.
                let row_cols: Vec<usize> = self.rows[pi].keys().copied().filter(|&c| c != pj).collect();
                let mut smallest: Option<(BigInt, usize)> = None;
                for l in row_cols {
                    let a = self.get(pi, l);
                    let r = a.mod_floor(&p.abs());
                    self.set(pi, l, r.clone());
                    if !r.is_zero() && smallest.as_ref().is_none_or(|(s, sl)| (&r, l) < (s, *sl)) {
                        smallest = Some((r, l));
                    }
                }
                match smallest {
                    Some((_, l)) => {
                        pj = l;
                        continue;
                    }
                    None => break,
                }
            }
            let p = self.get(pi, pj);
            if let Some(r) = &rhs {
                if !r[pi].is_multiple_of(&p) {
                    consistent = false;
                }
            }
            self.set(pi, pj, BigInt::zero());
            pivot_row[pi] = true;
            pivots.push(p.abs());
        }
        let rhs_in_span = rhs.map(|r| {
            // Rows never used as pivots must carry a zero right-hand side.
            consistent && r.iter().zip(&pivot_row).all(|(v, &used)| used || v.is_zero())
        });
        Diagonalization { pivots, rhs_in_span }
    }
}

/// Converts a multiset of nonzero diagonal entries into the invariant
/// factor chain d₁ | d₂ | … (units included).
pub fn invariant_factors(diag: &[BigInt]) -> Vec<BigInt> {
    let mut units = 0usize;
    let mut rest: Vec<BigInt> = Vec::new();
    for d in diag {
        let d = d.abs();
        if d.is_one() {
            units += 1;
        } else if !d.is_zero() {
            rest.push(d);
        }
    }
    let n = rest.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = rest[i].gcd(&rest[j]);
            let l = rest[i].lcm(&rest[j]);
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(rest);
    out.sort();
    out
}
