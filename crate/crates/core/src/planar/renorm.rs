//! Parity and path renormalization of `iπ/2` fields on two-body graphs.
//!
//! The field factor is `σ_v^{s_v}`. For a path from `a` to `b`,
//! `σ_a σ_b = ∏_{e ∈ path} σ_e σ'_e`, and
//! `σσ' e^{iθσσ'} = -i e^{i(θ + π/2)σσ'}`. Pairing up the `s = 1` vertices and
//! shifting every edge crossed an odd number of times by `π/2` therefore
//! gives `Z(s, θ) = (-i)^F Z(0, θ̃)` with `F` the number of shifted edges.

use std::collections::VecDeque;

use crate::angle::Angle;
use crate::circuit::{IqpCircuit, OutcomeString};
use crate::error::{Error, Result};
use crate::planar::embedding::two_body_edges;

#[derive(Clone, Debug, PartialEq)]
pub struct Renormalized {
    pub angles: Vec<Angle>,
    /// Which edges were shifted by `π/2`.
    pub flipped: Vec<bool>,
}

impl Renormalized {
    pub fn flip_count(&self) -> usize {
        self.flipped.iter().filter(|&&f| f).count()
    }
}

pub(crate) struct Adjacency {
    pub nbrs: Vec<Vec<(usize, usize)>>,
}

impl Adjacency {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut nbrs = vec![Vec::new(); n];
        for (e, &(a, b)) in edges.iter().enumerate() {
            nbrs[a].push((b, e));
            nbrs[b].push((a, e));
        }
        Adjacency { nbrs }
    }

    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.nbrs.len();
        let mut comp = vec![usize::MAX; n];
        let mut k = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = k;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.nbrs[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = k;
                        stack.push(w);
                    }
                }
            }
            k += 1;
        }
        (comp, k)
    }
}

fn component_parities(adj: &Adjacency, s: &[bool]) -> Vec<bool> {
    let (comp, k) = adj.components();
    let mut odd = vec![false; k];
    for (v, &b) in s.iter().enumerate() {
        odd[comp[v]] ^= b;
    }
    odd
}

/// False iff some connected component has odd `⊕ s_i` (then `P(s) = 0`).
pub fn parity_admissible(circuit: &IqpCircuit, s: &OutcomeString) -> Result<bool> {
    s.check_len(circuit.num_qubits())?;
    let edges = two_body_edges(circuit)?;
    let adj = Adjacency::new(circuit.num_qubits(), &edges);
    Ok(!component_parities(&adj, s.bits()).contains(&true))
}

pub fn path_renormalize(circuit: &IqpCircuit, s: &OutcomeString) -> Result<Renormalized> {
    s.check_len(circuit.num_qubits())?;
    let edges = two_body_edges(circuit)?;
    let angles: Vec<Angle> = circuit.gates().iter().map(|g| g.theta()).collect();
    renormalize_edges(circuit.num_qubits(), &edges, &angles, s.bits())
}

/// Greedy nearest pairing of the `s = 1` vertices along BFS shortest paths.
pub(crate) fn renormalize_edges(
    n: usize,
    edges: &[(usize, usize)],
    angles: &[Angle],
    s: &[bool],
) -> Result<Renormalized> {
    let adj = Adjacency::new(n, edges);
    if component_parities(&adj, s).contains(&true) {
        return Err(Error::OddParity);
    }
    let mut open: Vec<bool> = s.to_vec();
    let mut flipped = vec![false; edges.len()];
    let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
    let mut stamp = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !open[start] {
            continue;
        }
        open[start] = false;
        stamp[start] = start;
        queue.clear();
        queue.push_back(start);
        let mut found = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj.nbrs[v] {
                if stamp[w] == start {
                    continue;
                }
                stamp[w] = start;
                parent[w] = (v, e);
                if open[w] {
                    found = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        let Some(end) = found else {
            return Err(Error::InternalConsistency(
                "unpaired field in an even component".into(),
            ));
        };
        open[end] = false;
        let mut v = end;
        while v != start {
            let (p, e) = parent[v];
            flipped[e] = !flipped[e];
            v = p;
        }
    }
    let angles = angles
        .iter()
        .zip(&flipped)
        .map(|(a, &f)| if f { a.plus_half_pi() } else { *a })
        .collect();
    Ok(Renormalized { angles, flipped })
}
