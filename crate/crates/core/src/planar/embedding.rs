//! Combinatorial embeddings (rotation systems) and face tracing.
//!
//! Edge `e = (a, b)` has two darts: `2e` leaves `a`, `2e + 1` leaves `b`.
//! A face is traced by arriving at `v` along a dart and leaving along the
//! edge that follows the reverse dart in the rotation at `v`.

use crate::circuit::IqpCircuit;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarEmbedding {
    n: usize,
    edges: Vec<(usize, usize)>,
    rotations: Vec<Vec<usize>>,
    /// Position of each dart in the rotation at its tail.
    pos: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Faces {
    pub darts: Vec<Vec<usize>>,
    pub face_of: Vec<usize>,
}

impl PlanarEmbedding {
    /// `rotations[v]` lists the edges at `v` in cyclic order.
    pub fn new(n: usize, edges: Vec<(usize, usize)>, rotations: Vec<Vec<usize>>) -> Result<Self> {
        if rotations.len() != n {
            return Err(Error::InvalidEmbedding(format!(
                "{} rotations for {n} vertices",
                rotations.len()
            )));
        }
        let mut pos = vec![usize::MAX; 2 * edges.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidEmbedding(format!("edge {e} leaves the vertex range")));
            }
            if a == b {
                return Err(Error::InvalidEmbedding(format!("edge {e} is a loop")));
            }
        }
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &e) in rot.iter().enumerate() {
                let Some(&(a, b)) = edges.get(e) else {
                    return Err(Error::InvalidEmbedding(format!(
                        "rotation at vertex {v} names unknown edge {e}"
                    )));
                };
                let d = if a == v {
                    2 * e
                } else if b == v {
                    2 * e + 1
                } else {
                    return Err(Error::InvalidEmbedding(format!(
                        "edge {e} is not incident to vertex {v}"
                    )));
                };
                if pos[d] != usize::MAX {
                    return Err(Error::InvalidEmbedding(format!(
                        "edge {e} appears twice at vertex {v}"
                    )));
                }
                pos[d] = i;
            }
        }
        if let Some(d) = pos.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidEmbedding(format!(
                "edge {} is missing from the rotation at vertex {}",
                d / 2,
                if d % 2 == 0 { edges[d / 2].0 } else { edges[d / 2].1 }
            )));
        }
        Ok(PlanarEmbedding {
            n,
            edges,
            rotations,
            pos,
        })
    }

    /// Embedding of a two-body circuit: edge `j` is gate `j`.
    pub fn for_circuit(circuit: &IqpCircuit, rotations: Vec<Vec<usize>>) -> Result<Self> {
        let edges = two_body_edges(circuit)?;
        let emb = PlanarEmbedding::new(circuit.num_qubits(), edges, rotations)?;
        if !emb.is_planar() {
            return Err(Error::InvalidEmbedding(
                "rotation system has positive genus".into(),
            ));
        }
        Ok(emb)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn tail(&self, d: usize) -> usize {
        let (a, b) = self.edges[d / 2];
        if d % 2 == 0 {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: usize) -> usize {
        self.tail(d ^ 1)
    }

    /// The dart of edge `e` leaving `v`.
    pub fn dart_from(&self, e: usize, v: usize) -> usize {
        if self.edges[e].0 == v {
            2 * e
        } else {
            2 * e + 1
        }
    }

    pub fn next_in_face(&self, d: usize) -> usize {
        let r = d ^ 1;
        let v = self.tail(r);
        let rot = &self.rotations[v];
        let e = rot[(self.pos[r] + 1) % rot.len()];
        self.dart_from(e, v)
    }

    pub fn faces(&self) -> Faces {
        let mut face_of = vec![usize::MAX; 2 * self.edges.len()];
        let mut darts = Vec::new();
        for start in 0..face_of.len() {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = darts.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = f;
                walk.push(d);
                d = self.next_in_face(d);
                if d == start {
                    break;
                }
            }
            darts.push(walk);
        }
        Faces { darts, face_of }
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &e in &self.rotations[v] {
                    let (a, b) = self.edges[e];
                    let w = if a == v { b } else { a };
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Euler check `V - E + F = 2` on every connected component.
    pub fn is_planar(&self) -> bool {
        let (comp, k) = self.components();
        let mut v = vec![0i64; k];
        let mut e = vec![0i64; k];
        let mut f = vec![0i64; k];
        for &c in &comp {
            v[c] += 1;
        }
        for &(a, _) in &self.edges {
            e[comp[a]] += 1;
        }
        for walk in self.faces().darts {
            f[comp[self.tail(walk[0])]] += 1;
        }
        (0..k).all(|c| {
            let faces = if e[c] == 0 { 1 } else { f[c] };
            v[c] - e[c] + faces == 2
        })
    }

    /// The embedding restricted to a subset of edges (rotations keep their
    /// cyclic order). Edge ids are renumbered in the order of `keep`.
    pub fn restrict_edges(&self, keep: &[usize]) -> PlanarEmbedding {
        let mut new_id = vec![usize::MAX; self.edges.len()];
        for (i, &e) in keep.iter().enumerate() {
            new_id[e] = i;
        }
        let edges = keep.iter().map(|&e| self.edges[e]).collect();
        let rotations = self
            .rotations
            .iter()
            .map(|rot| {
                rot.iter()
                    .filter(|&&e| new_id[e] != usize::MAX)
                    .map(|&e| new_id[e])
                    .collect()
            })
            .collect();
        PlanarEmbedding::new(self.n, edges, rotations).expect("restriction of a valid embedding")
    }
}

pub(crate) fn two_body_edges(circuit: &IqpCircuit) -> Result<Vec<(usize, usize)>> {
    circuit
        .gates()
        .iter()
        .enumerate()
        .map(|(j, g)| match g.qubits() {
            &[a, b] => Ok((a, b)),
            q => Err(Error::NotTwoBody {
                gate: j,
                size: q.len(),
            }),
        })
        .collect()
}
