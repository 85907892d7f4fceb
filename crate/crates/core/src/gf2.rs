//! Dense bit-packed linear algebra over GF(2).

use std::fmt;

use crate::circuit::{BipartiteInteractionGraph, OutcomeString};
use crate::error::{Error, Result};

const WORD: usize = 64;

/// A `rows × cols` matrix over GF(2), rows packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(WORD).max(1);
        GF2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GF2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = GF2Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    /// The incidence matrix `R`: `R[v][u] = 1` iff `v ∈ N(u)`.
    pub fn incidence(graph: &BipartiteInteractionGraph) -> Self {
        let mut m = GF2Matrix::zeros(graph.num_va(), graph.num_ub());
        for (u, v) in graph.edges() {
            m.set(v, u, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / WORD];
        let bit = 1u64 << (c % WORD);
        if v {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// `row[dst] ^= row[src]`.
    fn add_row(&mut self, src: usize, dst: usize) {
        for k in 0..self.words {
            let s = self.data[src * self.words + k];
            self.data[dst * self.words + k] ^= s;
        }
    }

    /// Appends columns (same row count).
    pub fn hstack(&self, other: &GF2Matrix) -> Result<GF2Matrix> {
        if other.rows != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                got: other.rows,
            });
        }
        let mut m = GF2Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let packed = pack(x, self.words);
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(&packed)
                    .fold(0u32, |acc, (a, b)| acc + (a & b).count_ones())
                    % 2
                    == 1
            })
            .collect())
    }

    pub fn column(&self, c: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

fn pack(x: &[bool], words: usize) -> Vec<u64> {
    let mut p = vec![0u64; words];
    for (i, &b) in x.iter().enumerate() {
        if b {
            p[i / WORD] |= 1 << (i % WORD);
        }
    }
    p
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One elementary row operation. On the Ising side a swap relabels two
/// spins and a row addition is a CNOT conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    /// `row[dst] ^= row[src]`.
    RowAdd { src: usize, dst: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationTrace {
    pub ops: Vec<RowOp>,
}

impl EliminationTrace {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn replay(&self, m: &GF2Matrix) -> GF2Matrix {
        let mut out = m.clone();
        for op in &self.ops {
            match *op {
                RowOp::Swap(a, b) => out.swap_rows(a, b),
                RowOp::RowAdd { src, dst } => out.add_row(src, dst),
            }
        }
        out
    }

    pub fn replay_vec(&self, v: &[bool]) -> Vec<bool> {
        let mut out = v.to_vec();
        for op in &self.ops {
            match *op {
                RowOp::Swap(a, b) => out.swap(a, b),
                RowOp::RowAdd { src, dst } => out[dst] ^= out[src],
            }
        }
        out
    }
}

/// Reduced row echelon form plus the row operations that produce it.
/// Pivots are taken on the first row with a set bit in each column.
pub fn gauss_jordan(m: &GF2Matrix) -> (GF2Matrix, EliminationTrace) {
    let (red, trace, _) = eliminate(m);
    (red, trace)
}

fn eliminate(m: &GF2Matrix) -> (GF2Matrix, EliminationTrace, Vec<usize>) {
    let mut a = m.clone();
    let mut trace = EliminationTrace::default();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| a.get(i, c)) else {
            continue;
        };
        if p != r {
            a.swap_rows(p, r);
            trace.ops.push(RowOp::Swap(p, r));
        }
        for i in 0..a.rows {
            if i != r && a.get(i, c) {
                a.add_row(r, i);
                trace.ops.push(RowOp::RowAdd { src: r, dst: i });
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, trace, pivots)
}

pub fn rank(m: &GF2Matrix) -> usize {
    eliminate(m).2.len()
}

pub fn is_independent_columns(m: &GF2Matrix) -> bool {
    rank(m) == m.cols
}

/// Rank equals the number of rows.
pub fn is_full_rank(m: &GF2Matrix) -> bool {
    rank(m) == m.rows
}

/// Square, independent and full rank.
pub fn is_ifrb(m: &GF2Matrix) -> bool {
    m.rows == m.cols && rank(m) == m.rows
}

/// Some `c` with `R c = rhs`; free variables are set to 0.
pub fn solve(m: &GF2Matrix, rhs: &[bool]) -> Result<Vec<bool>> {
    if rhs.len() != m.rows {
        return Err(Error::LengthMismatch {
            expected: m.rows,
            got: rhs.len(),
        });
    }
    let (_, trace, pivots) = eliminate(m);
    let y = trace.replay_vec(rhs);
    if y[pivots.len()..].iter().any(|&b| b) {
        return Err(Error::NoSolution);
    }
    let mut c = vec![false; m.cols];
    for (r, &col) in pivots.iter().enumerate() {
        c[col] = y[r];
    }
    Ok(c)
}

/// Convenience wrapper taking an outcome string as the right-hand side.
pub fn solve_outcome(m: &GF2Matrix, s: &OutcomeString) -> Result<Vec<bool>> {
    solve(m, s.bits())
}
