//! The merged graph whose partition function gives a marginal.
//!
//! Summing `|Z(s)|²` over the unmeasured outcomes forces the two replicas to
//! agree on every unmeasured spin. Gates with both ends unmeasured cancel,
//! unmeasured spins away from `M` contribute a factor 2 each, and what is
//! left is one Ising model on
//!
//! * a copy of `M` carrying `+θ` on every gate touching `M`,
//! * a mirror copy carrying `-θ`,
//! * the boundary `∂` (unmeasured neighbours of `M`) shared by both,
//!
//! with fields `s_M` on both copies. Then
//! `P(s_M) = 2^{-2|M| - |∂|} Z̃`, and `Z̃ = Σ_∂ |Z_M(∂)|²` is real and
//! non-negative.
//!
//! Merged vertices are numbered copy 1 of `M` (in the order given), then `∂`
//! (ascending), then copy 2 of `M`. Merged edges are the gates touching `M`
//! in copy 1 (ascending gate index), then the same gates in copy 2.

use crate::angle::Angle;
use crate::circuit::{GateTerm, IqpCircuit};
use crate::error::{Error, Result};
use crate::planar::embedding::{two_body_edges, PlanarEmbedding};
use crate::planar::renorm::Adjacency;

#[derive(Clone, Debug)]
pub struct MergedGraph {
    pub measured: Vec<usize>,
    pub boundary: Vec<usize>,
    /// Original gate indices touching `M`.
    pub gates: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub angles: Vec<Angle>,
    pub fields: Vec<bool>,
    pub embedding: Option<PlanarEmbedding>,
}

impl MergedGraph {
    pub fn num_vertices(&self) -> usize {
        2 * self.measured.len() + self.boundary.len()
    }

    /// `log2` of the prefactor `2^{-2|M| - |∂|}`.
    pub fn prefactor_log2(&self) -> i64 {
        -(2 * self.measured.len() as i64 + self.boundary.len() as i64)
    }

    /// The merged Ising model as a circuit (for brute-force checks).
    pub fn to_circuit(&self) -> Result<IqpCircuit> {
        let gates = self
            .edges
            .iter()
            .zip(&self.angles)
            .map(|(&(a, b), &t)| GateTerm::new(vec![a, b], t))
            .collect();
        IqpCircuit::new(self.num_vertices(), gates)
    }
}

fn check_measured(n: usize, measured: &[usize], s_m: &[bool]) -> Result<()> {
    if measured.len() != s_m.len() {
        return Err(Error::LengthMismatch {
            expected: measured.len(),
            got: s_m.len(),
        });
    }
    let mut seen = vec![false; n];
    for &q in measured {
        if q >= n {
            return Err(Error::QubitOutOfRange { gate: 0, qubit: q, n });
        }
        if seen[q] {
            return Err(Error::DuplicateQubit { gate: 0, qubit: q });
        }
        seen[q] = true;
    }
    Ok(())
}

/// Builds the merged graph for the two-body `circuit`, measured qubits
/// `measured` with outcomes `s_m`. With an embedding, also glues the mirror
/// copy into a planar rotation system.
pub fn merge_for_marginal(
    circuit: &IqpCircuit,
    measured: &[usize],
    s_m: &[bool],
    embedding: Option<&PlanarEmbedding>,
) -> Result<MergedGraph> {
    let n = circuit.num_qubits();
    check_measured(n, measured, s_m)?;
    let all_edges = two_body_edges(circuit)?;
    let mut slot = vec![usize::MAX; n];
    for (i, &q) in measured.iter().enumerate() {
        slot[q] = i;
    }
    let in_m = |q: usize| slot[q] != usize::MAX;
    let gates: Vec<usize> = (0..all_edges.len())
        .filter(|&j| in_m(all_edges[j].0) || in_m(all_edges[j].1))
        .collect();
    let mut boundary: Vec<usize> = gates
        .iter()
        .flat_map(|&j| [all_edges[j].0, all_edges[j].1])
        .filter(|&q| !in_m(q))
        .collect();
    boundary.sort_unstable();
    boundary.dedup();
    let m = measured.len();
    let mut bslot = vec![usize::MAX; n];
    for (i, &b) in boundary.iter().enumerate() {
        bslot[b] = m + i;
    }
    let copy2 = m + boundary.len();
    let map = |q: usize, second: bool| {
        if in_m(q) {
            slot[q] + if second { copy2 } else { 0 }
        } else {
            bslot[q]
        }
    };
    let mut edges = Vec::with_capacity(2 * gates.len());
    let mut angles = Vec::with_capacity(2 * gates.len());
    for second in [false, true] {
        for &j in &gates {
            let (a, b) = all_edges[j];
            edges.push((map(a, second), map(b, second)));
            let t = circuit.gates()[j].theta();
            angles.push(if second { t.neg() } else { t });
        }
    }
    let mut fields = vec![false; 2 * m + boundary.len()];
    for (i, &b) in s_m.iter().enumerate() {
        fields[i] = b;
        fields[copy2 + i] = b;
    }
    let mut merged = MergedGraph {
        measured: measured.to_vec(),
        boundary,
        gates,
        edges,
        angles,
        fields,
        embedding: None,
    };
    if let Some(emb) = embedding {
        merged.embedding = Some(glue(emb, &merged, &slot, &bslot, &all_edges)?);
    }
    Ok(merged)
}

fn glue(
    emb: &PlanarEmbedding,
    merged: &MergedGraph,
    slot: &[usize],
    bslot: &[usize],
    all_edges: &[(usize, usize)],
) -> Result<PlanarEmbedding> {
    if emb.edges() != all_edges {
        return Err(Error::InvalidEmbedding(
            "embedding edges do not match the circuit gates".into(),
        ));
    }
    let m = merged.measured.len();
    let k = merged.gates.len();
    let copy2 = m + merged.boundary.len();
    let h = emb.restrict_edges(&merged.gates);
    let (comp, _) = h.components();
    let faces = h.faces();

    // For each component of H holding boundary vertices, one face whose
    // corners reach all of them.
    let mut corner: Vec<Option<(usize, usize)>> = vec![None; emb.num_vertices()];
    let mut comps: Vec<usize> = merged.boundary.iter().map(|&b| comp[b]).collect();
    comps.sort_unstable();
    comps.dedup();
    for c in comps {
        let need: Vec<usize> = merged.boundary.iter().copied().filter(|&b| comp[b] == c).collect();
        let mut chosen = None;
        for walk in &faces.darts {
            if comp[h.tail(walk[0])] != c {
                continue;
            }
            let mut corners: Vec<Option<(usize, usize)>> = vec![None; need.len()];
            for &d in walk {
                let v = h.head(d);
                if let Ok(i) = need.binary_search(&v) {
                    if corners[i].is_none() {
                        corners[i] = Some((d / 2, h.next_in_face(d) / 2));
                    }
                }
            }
            if corners.iter().all(Option::is_some) {
                chosen = Some(corners);
                break;
            }
        }
        let Some(corners) = chosen else {
            return Err(if region_connected(all_edges, slot, &merged.measured) {
                Error::MergeNotPlanar
            } else {
                Error::DisconnectedRegion
            });
        };
        for (&b, c) in need.iter().zip(corners) {
            corner[b] = c;
        }
    }

    let mut rotations = vec![Vec::new(); merged.num_vertices()];
    for (i, &q) in merged.measured.iter().enumerate() {
        let rot = h.rotation(q);
        rotations[i] = rot.to_vec();
        rotations[copy2 + i] = rot.iter().rev().map(|&e| k + e).collect();
    }
    for &b in &merged.boundary {
        let rot = h.rotation(b);
        let (_, y) = corner[b].expect("every boundary vertex has a corner");
        let start = rot.iter().position(|&e| e == y).expect("corner edge is at the vertex");
        let first: Vec<usize> = (0..rot.len()).map(|i| rot[(start + i) % rot.len()]).collect();
        let mut r = first.clone();
        r.extend(first.iter().rev().map(|&e| k + e));
        rotations[bslot[b]] = r;
    }
    let glued = PlanarEmbedding::new(merged.num_vertices(), merged.edges.clone(), rotations)?;
    if !glued.is_planar() {
        return Err(Error::MergeNotPlanar);
    }
    Ok(glued)
}

/// Whether `M` is connected within each component of the interaction graph.
fn region_connected(all_edges: &[(usize, usize)], slot: &[usize], measured: &[usize]) -> bool {
    let n = slot.len();
    let inside: Vec<(usize, usize)> = all_edges
        .iter()
        .copied()
        .filter(|&(a, b)| slot[a] != usize::MAX && slot[b] != usize::MAX)
        .collect();
    let (full, _) = Adjacency::new(n, all_edges).components();
    let (local, _) = Adjacency::new(n, &inside).components();
    let mut rep: Vec<Option<usize>> = vec![None; n];
    measured.iter().all(|&q| match rep[full[q]] {
        None => {
            rep[full[q]] = Some(local[q]);
            true
        }
        Some(l) => l == local[q],
    })
}
