//! Pfaffians of large sparse skew-symmetric matrices.
//!
//! Eliminates one pair `(i, j)` at a time: `Pf(K) = ±K_ij · Pf(S)` with the
//! Schur complement `S_ab = K_ab + (K_ja K_ib - K_ia K_jb) / K_ij`. The node
//! `i` is chosen by minimum degree, the partner `j` among entries within a
//! factor 10 of the largest in row `i`, preferring short rows. The sign of
//! moving `i, j` to the front is tracked with a Fenwick tree of ranks.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap as HashMap;

use num_complex::Complex64;

use crate::ising::PartitionValue;

const PARTNER_RATIO: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct SparseSkew {
    rows: Vec<HashMap<usize, Complex64>>,
}

impl SparseSkew {
    pub fn new(n: usize) -> Self {
        SparseSkew {
            rows: vec![HashMap::default(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `K[i][j] += v`, `K[j][i] -= v`.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert_ne!(i, j, "skew matrices have a zero diagonal");
        *self.rows[i].entry(j).or_default() += v;
        *self.rows[j].entry(i).or_default() -= v;
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i].get(&j).copied().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(HashMap::len).sum()
    }
}

struct Fenwick(Vec<i64>);

impl Fenwick {
    fn ones(n: usize) -> Self {
        let mut t = vec![0i64; n + 1];
        for i in 1..=n {
            t[i] += 1;
            let j = i + (i & i.wrapping_neg());
            if j <= n {
                t[j] += t[i];
            }
        }
        Fenwick(t)
    }

    fn remove(&mut self, i: usize) {
        let mut k = i + 1;
        while k < self.0.len() {
            self.0[k] -= 1;
            k += k & k.wrapping_neg();
        }
    }

    /// Number of remaining indices `< i`.
    fn rank(&self, i: usize) -> i64 {
        let mut k = i;
        let mut s = 0;
        while k > 0 {
            s += self.0[k];
            k -= k & k.wrapping_neg();
        }
        s
    }
}

pub fn sparse_pfaffian(mut m: SparseSkew) -> PartitionValue {
    let n = m.dim();
    if n % 2 == 1 {
        return PartitionValue::zero();
    }
    for row in m.rows.iter_mut() {
        row.retain(|_, v| *v != Complex64::default());
    }
    let mut fen = Fenwick::ones(n);
    let mut alive = vec![true; n];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).map(|i| Reverse((m.rows[i].len(), i))).collect();
    let mut result = PartitionValue::new(Complex64::new(1.0, 0.0));
    let mut negative = false;
    let mut nbrs: Vec<usize> = Vec::new();
    for _ in 0..n / 2 {
        let i = loop {
            let Reverse((deg, i)) = heap.pop().expect("an unpaired node remains");
            if alive[i] && deg == m.rows[i].len() {
                break i;
            }
        };
        let row_i = std::mem::take(&mut m.rows[i]);
        if row_i.is_empty() {
            return PartitionValue::zero();
        }
        let max = row_i.values().map(|v| v.norm()).fold(0.0, f64::max);
        let j = row_i
            .iter()
            .filter(|(_, v)| v.norm() >= PARTNER_RATIO * max)
            .map(|(&j, _)| (m.rows[j].len(), j))
            .min()
            .expect("row has a maximal entry")
            .1;
        let k = row_i[&j];
        let row_j = std::mem::take(&mut m.rows[j]);

        let ri = fen.rank(i);
        let rj = fen.rank(j);
        let pj = if rj < ri { rj + 1 } else { rj };
        if (ri + pj - 1) % 2 != 0 {
            negative = !negative;
        }
        result = result.scale(k);
        fen.remove(i);
        fen.remove(j);
        alive[i] = false;
        alive[j] = false;

        nbrs.clear();
        nbrs.extend(row_i.keys().chain(row_j.keys()).filter(|&&a| a != i && a != j));
        nbrs.sort_unstable();
        nbrs.dedup();
        for &a in &nbrs {
            m.rows[a].remove(&i);
            m.rows[a].remove(&j);
        }
        let zero = Complex64::default();
        let kinv = 1.0 / k;
        let ki: Vec<Complex64> = nbrs.iter().map(|a| row_i.get(a).copied().unwrap_or(zero)).collect();
        let kj: Vec<Complex64> = nbrs.iter().map(|a| row_j.get(a).copied().unwrap_or(zero)).collect();
        for x in 0..nbrs.len() {
            let wa = kj[x] * kinv;
            let ua = ki[x] * kinv;
            if wa == zero && ua == zero {
                continue;
            }
            let a = nbrs[x];
            for y in x + 1..nbrs.len() {
                let delta = wa * ki[y] - ua * kj[y];
                if delta == zero {
                    continue;
                }
                let b = nbrs[y];
                let e = m.rows[a].entry(b).or_default();
                *e += delta;
                let v = *e;
                if v == zero {
                    m.rows[a].remove(&b);
                    m.rows[b].remove(&a);
                } else {
                    m.rows[b].insert(a, -v);
                }
            }
        }
        for &a in &nbrs {
            heap.push(Reverse((m.rows[a].len(), a)));
        }
    }
    if negative {
        result.scale(Complex64::new(-1.0, 0.0))
    } else {
        result
    }
}
