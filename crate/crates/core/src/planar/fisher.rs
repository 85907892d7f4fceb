//! Field-free planar Ising partition functions via Fisher decoration.
//!
//! `e^{iθσσ'} = cos θ + iσσ' sin θ`, so
//! `Z = 2^V Σ_{A even} ∏_{e∈A} i sin θ_e ∏_{e∉A} cos θ_e`. Vertices of degree
//! above three are split into chains joined by weight-1 links, and every
//! node of the split graph becomes a gadget of terminals whose perfect
//! matchings are in bijection with even subgraphs: an external edge carries a
//! dimer exactly when it is not in `A`.
//!
//! An edge is decorated one of two ways. When `|sin θ| >= |cos θ|/4` it is a
//! single dimer edge of weight `cos θ / (i sin θ)` with `i sin θ` pulled out
//! as a prefactor. Otherwise it becomes a path `T - p - q - T'` with weights
//! `cos θ`, `i sin θ`, `1`, which stays finite at `sin θ = 0`.

use num_complex::Complex64;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::ising::PartitionValue;
use crate::planar::embedding::PlanarEmbedding;
use crate::planar::kasteleyn::kasteleyn_orient;
use crate::planar::sparse_pfaffian::{sparse_pfaffian, SparseSkew};

const DIRECT_RATIO: f64 = 0.25;
const PLACEHOLDER: usize = usize::MAX;

/// The decorated matching problem: `Σ_matchings ∏ w = sign · Pf(K)`.
pub struct Decorated {
    pub embedding: PlanarEmbedding,
    pub weights: Vec<Complex64>,
    /// `i sin θ` over directly decorated edges.
    pub prefactor: PartitionValue,
    /// Edges of the reference matching (every terminal matched externally).
    pub reference: Vec<usize>,
}

struct Builder {
    edges: Vec<(usize, usize)>,
    weights: Vec<Complex64>,
    rot: Vec<Vec<usize>>,
    reference: Vec<usize>,
}

impl Builder {
    fn node(&mut self, rot: Vec<usize>) -> usize {
        self.rot.push(rot);
        self.rot.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize, w: Complex64) -> usize {
        self.edges.push((a, b));
        self.weights.push(w);
        self.edges.len() - 1
    }

    /// Gadget for a split-graph node with `deg` ports; returns its terminals.
    fn gadget(&mut self, deg: usize) -> Vec<usize> {
        let one = Complex64::new(1.0, 0.0);
        match deg {
            1 => vec![self.node(vec![PLACEHOLDER])],
            2 => {
                let t0 = self.node(vec![PLACEHOLDER]);
                let t1 = self.node(vec![PLACEHOLDER]);
                let e = self.edge(t0, t1, one);
                self.rot[t0].push(e);
                self.rot[t1].push(e);
                vec![t0, t1]
            }
            3 => {
                let t: Vec<usize> = (0..3).map(|_| self.node(vec![PLACEHOLDER])).collect();
                let tri: Vec<usize> = (0..3).map(|k| self.edge(t[k], t[(k + 1) % 3], one)).collect();
                for k in 0..3 {
                    // External edge, then the triangle edge to the next
                    // terminal, then the one to the previous terminal.
                    self.rot[t[k]].push(tri[k]);
                    self.rot[t[k]].push(tri[(k + 2) % 3]);
                }
                t
            }
            _ => unreachable!("split nodes have degree 1 to 3"),
        }
    }

    fn attach(&mut self, t: usize, e: usize) {
        debug_assert_eq!(self.rot[t][0], PLACEHOLDER);
        self.rot[t][0] = e;
    }
}

enum SplitEdge {
    Original(usize),
    Link,
}

/// Builds the decorated graph for the embedded graph `emb` with couplings
/// `angles[e]`.
pub fn decorate(emb: &PlanarEmbedding, angles: &[Angle]) -> Result<Decorated> {
    if angles.len() != emb.num_edges() {
        return Err(Error::LengthMismatch {
            expected: emb.num_edges(),
            got: angles.len(),
        });
    }
    // Split graph: ports of every node (cyclic) and the ends of every edge.
    let mut split_edges: Vec<SplitEdge> = (0..emb.num_edges()).map(SplitEdge::Original).collect();
    let mut node_ports: Vec<Vec<usize>> = Vec::new();
    for v in 0..emb.num_vertices() {
        let rot = emb.rotation(v);
        let d = rot.len();
        if d <= 3 {
            if d > 0 {
                node_ports.push(rot.to_vec());
            }
            continue;
        }
        let links: Vec<usize> = (0..d - 3)
            .map(|_| {
                split_edges.push(SplitEdge::Link);
                split_edges.len() - 1
            })
            .collect();
        node_ports.push(vec![rot[0], rot[1], links[0]]);
        for m in 1..d - 3 {
            node_ports.push(vec![links[m - 1], rot[m + 1], links[m]]);
        }
        node_ports.push(vec![links[d - 4], rot[d - 2], rot[d - 1]]);
    }

    let mut b = Builder {
        edges: Vec::new(),
        weights: Vec::new(),
        rot: Vec::new(),
        reference: Vec::new(),
    };
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); split_edges.len()];
    for ports in &node_ports {
        let terms = b.gadget(ports.len());
        for (&p, &t) in ports.iter().zip(&terms) {
            ends[p].push(t);
        }
    }

    let one = Complex64::new(1.0, 0.0);
    let mut prefactor = PartitionValue::new(one);
    for (se, kind) in split_edges.iter().enumerate() {
        let (ta, tb) = (ends[se][0], ends[se][1]);
        match *kind {
            SplitEdge::Link => {
                let e = b.edge(ta, tb, one);
                b.attach(ta, e);
                b.attach(tb, e);
                b.reference.push(e);
            }
            SplitEdge::Original(orig) => {
                let (c, s) = (angles[orig].cos(), angles[orig].sin());
                if s.abs() >= DIRECT_RATIO * c.abs() {
                    let is = Complex64::new(0.0, s);
                    let e = b.edge(ta, tb, c / is);
                    b.attach(ta, e);
                    b.attach(tb, e);
                    b.reference.push(e);
                    prefactor = prefactor.scale(is);
                } else {
                    let p = b.node(vec![]);
                    let q = b.node(vec![]);
                    let e1 = b.edge(ta, p, Complex64::new(c, 0.0));
                    let e2 = b.edge(p, q, Complex64::new(0.0, s));
                    let e3 = b.edge(q, tb, one);
                    b.attach(ta, e1);
                    b.attach(tb, e3);
                    b.rot[p] = vec![e1, e2];
                    b.rot[q] = vec![e2, e3];
                    b.reference.push(e1);
                    b.reference.push(e3);
                }
            }
        }
    }
    let n = b.rot.len();
    let embedding = PlanarEmbedding::new(n, b.edges, b.rot)?;
    Ok(Decorated {
        embedding,
        weights: b.weights,
        prefactor,
        reference: b.reference,
    })
}

/// Parity of the permutation `(a_1 b_1 a_2 b_2 …)` (true when odd).
fn pairing_parity(pairs: &[(usize, usize)], n: usize) -> bool {
    let mut perm = vec![0usize; n];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        perm[2 * k] = a;
        perm[2 * k + 1] = b;
    }
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
        }
    }
    (n - cycles) % 2 == 1
}

/// Weighted sum over perfect matchings of the decorated graph.
pub fn matching_sum(dec: &Decorated) -> Result<PartitionValue> {
    let emb = &dec.embedding;
    let n = emb.num_vertices();
    let orient = kasteleyn_orient(emb)?;
    let mut k = SparseSkew::new(n);
    for (e, &(a, b)) in emb.edges().iter().enumerate() {
        if orient[e] {
            k.add(a, b, dec.weights[e]);
        } else {
            k.add(b, a, dec.weights[e]);
        }
    }
    let pairs: Vec<(usize, usize)> = dec.reference.iter().map(|&e| emb.edges()[e]).collect();
    if 2 * pairs.len() != n {
        return Err(Error::InternalConsistency(
            "reference matching is not perfect".into(),
        ));
    }
    let mut negative = pairing_parity(&pairs, n);
    for &e in &dec.reference {
        if !orient[e] {
            negative = !negative;
        }
    }
    let pf = sparse_pfaffian(k);
    Ok(if negative {
        pf.scale(Complex64::new(-1.0, 0.0))
    } else {
        pf
    })
}

/// `Σ_σ ∏_e e^{iθ_e σ_a σ_b}` for an embedded planar graph.
pub fn partition_no_fields(emb: &PlanarEmbedding, angles: &[Angle]) -> Result<PartitionValue> {
    let dec = decorate(emb, angles)?;
    let sum = matching_sum(&dec)?;
    Ok(sum.mul(&dec.prefactor).mul_pow2(emb.num_vertices() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::OutcomeString;
    use crate::ising::{partition_function_bruteforce, IsingInstance, IsingTerm};
    use crate::planar::lattice::{grid_with, triangulated_grid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(emb: &PlanarEmbedding, angles: &[Angle]) -> Complex64 {
        let terms = emb
            .edges()
            .iter()
            .zip(angles)
            .map(|(&(a, b), &t)| IsingTerm {
                spins: vec![a, b],
                coupling: t,
            })
            .collect();
        let inst = IsingInstance::new(emb.num_vertices(), terms, OutcomeString::zeros(emb.num_vertices())).unwrap();
        partition_function_bruteforce(&inst).unwrap().value()
    }

    fn check(emb: &PlanarEmbedding, angles: &[Angle]) {
        let z = partition_no_fields(emb, angles).unwrap().value();
        let want = brute(emb, angles);
        assert!(
            (z - want).norm() <= 1e-9 * want.norm().max(1.0),
            "{z} vs {want}"
        );
    }

    #[test]
    fn single_edge() {
        let emb = PlanarEmbedding::new(2, vec![(0, 1)], vec![vec![0], vec![0]]).unwrap();
        for t in [0.0, 0.1, 0.7, std::f64::consts::FRAC_PI_2] {
            let z = partition_no_fields(&emb, &[Angle::from_radians(t)]).unwrap().value();
            assert!((z - Complex64::new(4.0 * t.cos(), 0.0)).norm() < 1e-12);
        }
        let z = partition_no_fields(&emb, &[Angle::half_pi()]).unwrap().value();
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn random_lattices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (r, c) in [(1, 3), (2, 2), (2, 3), (3, 3), (3, 4)] {
            for _ in 0..4 {
                let (_, emb) = grid_with(r, c, |_| Angle::from_radians(rng.gen_range(0.0..6.3))).unwrap();
                let angles: Vec<Angle> = (0..emb.num_edges())
                    .map(|_| match rng.gen_range(0..4) {
                        0 => Angle::pi_fraction(rng.gen_range(0..8), 4).unwrap(),
                        1 => Angle::from_radians(rng.gen_range(-0.1..0.1)),
                        _ => Angle::from_radians(rng.gen_range(0.0..6.3)),
                    })
                    .collect();
                check(&emb, &angles);
                let (_, tri) = triangulated_grid(r, c, |_| Angle::ZERO).unwrap();
                let angles: Vec<Angle> = (0..tri.num_edges())
                    .map(|_| Angle::from_radians(rng.gen_range(0.0..6.3)))
                    .collect();
                check(&tri, &angles);
            }
        }
    }
}
