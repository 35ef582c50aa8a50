//! Exact linear algebra over the rationals.
//!
//! The matrices produced by the derivations in this crate are sparse and
//! nearly block diagonal, so null spaces are computed per connected block
//! of the row/column incidence graph. The blocks are independent and are
//! reduced in parallel; the assembled basis is the reduced-echelon null
//! space basis of the whole matrix.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exec::Exec;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![vec![BigRational::zero(); cols]; rows] }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols));
        RationalMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r]
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c][r] = self.data[r][c].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[r][k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other.data[k][c];
                    if !b.is_zero() {
                        out.data[r][c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled_identity(&self, lambda: &BigRational) -> RationalMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            out.data[i][i] += lambda;
        }
        out
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut parent: Vec<usize> = (0..self.cols).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for row in &self.data {
            let mut first = None;
            for (c, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                match first {
                    None => first = Some(c),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, c));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for c in 0..self.cols {
            let root = find(&mut parent, c);
            groups.entry(root).or_default().push(c);
        }
        let mut col_block = vec![0usize; self.cols];
        let blocks: Vec<Vec<usize>> = groups.into_values().collect();
        for (b, cols) in blocks.iter().enumerate() {
            for &c in cols {
                col_block[c] = b;
            }
        }
        let mut rows_of: Vec<Vec<usize>> = vec![Vec::new(); blocks.len()];
        for (r, row) in self.data.iter().enumerate() {
            if let Some(c) = row.iter().position(|v| !v.is_zero()) {
                rows_of[col_block[c]].push(r);
            }
        }
        blocks.into_iter().zip(rows_of).collect()
    }

    fn block_null_space(&self, cols: &[usize], rows: &[usize]) -> (usize, Vec<Vec<(usize, BigRational)>>) {
        let mut sub: Vec<Vec<BigRational>> =
            rows.iter().map(|&r| cols.iter().map(|&c| self.data[r][c].clone()).collect()).collect();
        let pivots = rref_in_place(&mut sub);
        let rank = pivots.len();
        let mut is_pivot = vec![None; cols.len()];
        for (i, &pc) in pivots.iter().enumerate() {
            is_pivot[pc] = Some(i);
        }
        let mut out = Vec::new();
        for free in 0..cols.len() {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![(cols[free], BigRational::one())];
            for (i, &pc) in pivots.iter().enumerate() {
                let e = &sub[i][free];
                if !e.is_zero() {
                    v.push((cols[pc], -e.clone()));
                }
            }
            out.push(v);
        }
        (rank, out)
    }

    /// Exact null space basis in reduced echelon form, ordered by free column.
    pub fn null_space(&self, exec: Exec) -> Vec<Vec<BigRational>> {
        let blocks = self.blocks();
        let per_block = exec.map(&blocks, |(cols, rows)| self.block_null_space(cols, rows).1);
        let mut vecs: Vec<(usize, Vec<BigRational>)> = per_block
            .into_iter()
            .flatten()
            .map(|sparse| {
                let lead = sparse[0].0;
                let mut dense = vec![BigRational::zero(); self.cols];
                for (c, v) in sparse {
                    dense[c] = v;
                }
                (lead, dense)
            })
            .collect();
        vecs.sort_by_key(|(lead, _)| *lead);
        vecs.into_iter().map(|(_, v)| v).collect()
    }

    pub fn rank(&self, exec: Exec) -> usize {
        let blocks = self.blocks();
        exec.map(&blocks, |(cols, rows)| self.block_null_space(cols, rows).0).into_iter().sum()
    }
}

/// Reduces `m` to reduced row echelon form in place, returning pivot columns.
pub fn rref_in_place(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank of a list of vectors.
pub fn rank_of(vectors: &[Vec<BigRational>]) -> usize {
    let mut m = vectors.to_vec();
    rref_in_place(&mut m).len()
}
