//! Random instance generators shared by the self-test and the test suites.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::angle::Angle;
use crate::circuit::{GateTerm, IqpCircuit};
use crate::error::Result;
use crate::planar::embedding::PlanarEmbedding;
use crate::planar::lattice::grid_with;
use crate::planar::pfaffian::SkewMatrix;
use crate::sparse::{classify, SparseKind};

/// Mostly uniform angles, with exact multiples of `π/8` mixed in so that
/// the special-angle branches get exercised.
pub fn random_angle<R: Rng>(rng: &mut R) -> Angle {
    if rng.gen_bool(0.25) {
        Angle::pi_fraction(rng.gen_range(0..16), 8).expect("valid fraction")
    } else {
        Angle::from_radians(rng.gen_range(0.0..std::f64::consts::TAU))
    }
}

/// `n` qubits, `gates` gates on uniformly random non-empty qubit subsets.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, gates: usize) -> IqpCircuit {
    let terms = (0..gates)
        .map(|_| {
            let mask = rng.gen_range(1u64..1 << n);
            let qubits = (0..n).filter(|q| mask >> q & 1 == 1).collect();
            GateTerm::new(qubits, random_angle(rng))
        })
        .collect();
    IqpCircuit::new(n, terms).expect("generated circuit is valid")
}

/// A connected two-body circuit: a random spanning tree plus `extra` edges.
pub fn random_connected_two_body<R: Rng>(rng: &mut R, n: usize, extra: usize) -> IqpCircuit {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut gates: Vec<GateTerm> = (1..n)
        .map(|i| {
            let parent = order[rng.gen_range(0..i)];
            GateTerm::new(vec![parent, order[i]], random_angle(rng))
        })
        .collect();
    if n >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            gates.push(GateTerm::new(vec![a, b], random_angle(rng)));
        }
    }
    IqpCircuit::new(n, gates).expect("generated circuit is valid")
}

/// A circuit whose incidence matrix has independent columns (IFRB when
/// `gates == n`, IB when fewer).
pub fn random_sparse_circuit<R: Rng>(rng: &mut R, n: usize, gates: usize) -> IqpCircuit {
    assert!(gates <= n, "at most n independent columns");
    loop {
        let c = random_circuit(rng, n, gates);
        let kind = classify(&c).kind;
        if kind == SparseKind::Ifrb || (kind == SparseKind::Ib && gates < n) {
            return c;
        }
    }
}

/// A random subgraph of a `rows × cols` grid (each edge kept with
/// probability `keep`) with its induced embedding.
pub fn random_planar<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    keep: f64,
) -> Result<(IqpCircuit, PlanarEmbedding)> {
    let (full, emb) = grid_with(rows, cols, |_| Angle::ZERO)?;
    let kept: Vec<usize> = (0..full.gates().len()).filter(|_| rng.gen_bool(keep)).collect();
    let sub = emb.restrict_edges(&kept);
    let gates = sub
        .edges()
        .iter()
        .map(|&(a, b)| GateTerm::new(vec![a, b], random_angle(rng)))
        .collect();
    Ok((IqpCircuit::new(rows * cols, gates)?, sub))
}

/// Dense random skew-symmetric matrix with entries in the unit square.
pub fn random_skew<R: Rng>(rng: &mut R, n: usize) -> SkewMatrix {
    let mut a = SkewMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            a.set(i, j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    a
}

/// A connected set of `size` vertices grown from `start` along `edges`
/// (fewer if the component is smaller).
pub fn random_connected_set<R: Rng>(
    rng: &mut R,
    n: usize,
    edges: &[(usize, usize)],
    start: usize,
    size: usize,
) -> Vec<usize> {
    let mut nbrs = vec![Vec::new(); n];
    for &(a, b) in edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let mut inside = vec![false; n];
    inside[start] = true;
    let mut set = vec![start];
    while set.len() < size {
        let frontier: Vec<usize> = set
            .iter()
            .flat_map(|&v| nbrs[v].iter().copied())
            .filter(|&w| !inside[w])
            .collect();
        let Some(&w) = frontier.choose(rng) else {
            break;
        };
        inside[w] = true;
        set.push(w);
    }
    set
}
