//! Planar IQP: two-qubit gates on a planar interaction graph.
//!
//! Probabilities come from planar Ising partition functions, evaluated as
//! Pfaffians of Kasteleyn-oriented Fisher decorations. Marginals use the
//! merged graph of [`merge`], and sampling multiplies conditionals along a
//! breadth-first measurement order.

pub mod embedding;
pub mod fisher;
pub mod kasteleyn;
pub mod lattice;
pub mod merge;
pub mod pfaffian;
pub mod renorm;
pub mod sampler;
pub mod sparse_pfaffian;

use rayon::prelude::*;

use crate::circuit::{IqpCircuit, OutcomeString};
use crate::error::{Error, Result};
use crate::ising::PartitionValue;
use crate::sample_rng;

pub use embedding::PlanarEmbedding;
pub use kasteleyn::{kasteleyn_orient, verify_kasteleyn};
pub use merge::{merge_for_marginal, MergedGraph};
pub use pfaffian::{pfaffian, SkewMatrix};
pub use renorm::{parity_admissible, path_renormalize, Renormalized};
pub use sampler::ScaledProb;

/// A two-body circuit together with a planar embedding of its interaction
/// graph (edge `j` is gate `j`).
#[derive(Clone, Debug)]
pub struct PlanarIqp {
    circuit: IqpCircuit,
    embedding: PlanarEmbedding,
}

impl PlanarIqp {
    pub fn new(circuit: IqpCircuit, embedding: PlanarEmbedding) -> Result<Self> {
        let edges = embedding::two_body_edges(&circuit)?;
        if embedding.num_vertices() != circuit.num_qubits() || embedding.edges() != edges.as_slice() {
            return Err(Error::InvalidEmbedding(
                "embedding does not match the circuit".into(),
            ));
        }
        if !embedding.is_planar() {
            return Err(Error::InvalidEmbedding("rotation system is not planar".into()));
        }
        Ok(PlanarIqp { circuit, embedding })
    }

    /// `rotations[v]` lists the gates at qubit `v` in cyclic order.
    pub fn from_rotations(circuit: IqpCircuit, rotations: Vec<Vec<usize>>) -> Result<Self> {
        let emb = PlanarEmbedding::for_circuit(&circuit, rotations)?;
        PlanarIqp::new(circuit, emb)
    }

    pub fn circuit(&self) -> &IqpCircuit {
        &self.circuit
    }

    pub fn embedding(&self) -> &PlanarEmbedding {
        &self.embedding
    }

    pub fn partition_function(&self, fields: &OutcomeString) -> Result<PartitionValue> {
        planar_partition_function(&self.circuit, fields, &self.embedding)
    }

    /// `2^{-2n} |Z(s)|²`.
    pub fn probability(&self, s: &OutcomeString) -> Result<f64> {
        Ok(self.probability_scaled(s)?.to_f64())
    }

    pub fn probability_scaled(&self, s: &OutcomeString) -> Result<ScaledProb> {
        let z = self.partition_function(s)?;
        if z.is_zero() {
            return Ok(ScaledProb {
                mantissa: 0.0,
                exp2: 0,
            });
        }
        Ok(ScaledProb {
            mantissa: z.mantissa().norm_sqr(),
            exp2: 2 * z.exp2() - 2 * self.circuit.num_qubits() as i64,
        })
    }

    pub fn marginal(&self, measured: &[usize], s_m: &[bool]) -> Result<f64> {
        marginal_probability(&self.circuit, &self.embedding, measured, s_m)
    }

    /// Breadth-first measurement order, one list per connected component.
    pub fn measurement_order(&self) -> Vec<Vec<usize>> {
        sampler::measurement_order(self.circuit.num_qubits(), self.embedding.edges())
    }

    /// Product of the sampler's conditionals for a full outcome.
    pub fn chain_probability(&self, s: &OutcomeString) -> Result<f64> {
        sampler::chain_probability(&self.circuit, &self.embedding, s)
    }

    pub fn sample(&self, seed: u64) -> Result<OutcomeString> {
        sampler::sample_with(&self.circuit, &self.embedding, None, &mut sample_rng(seed, 0))
    }

    /// Sample `k` uses stream `k` of `seed`. Small instances reuse marginals
    /// across samples.
    pub fn samples(&self, count: usize, seed: u64) -> Result<Vec<OutcomeString>> {
        let cache = sampler::MarginalCache::default();
        (0..count as u64)
            .into_par_iter()
            .map(|k| {
                sampler::sample_with(&self.circuit, &self.embedding, Some(&cache), &mut sample_rng(seed, k))
            })
            .collect()
    }
}

/// `Z(s, θ)` for a two-body circuit on an embedded planar graph.
pub fn planar_partition_function(
    circuit: &IqpCircuit,
    fields: &OutcomeString,
    embedding: &PlanarEmbedding,
) -> Result<PartitionValue> {
    fields.check_len(circuit.num_qubits())?;
    let edges = embedding::two_body_edges(circuit)?;
    if embedding.edges() != edges.as_slice() {
        return Err(Error::InvalidEmbedding(
            "embedding does not match the circuit".into(),
        ));
    }
    let angles: Vec<_> = circuit.gates().iter().map(|g| g.theta()).collect();
    sampler::partition_with_fields(embedding, &angles, fields.bits())
}

/// `Σ_{s_{M̄}} P(s_M, s_{M̄}) = 2^{-2|M| - |∂|} |Z̃|` on the merged graph.
pub fn marginal_probability(
    circuit: &IqpCircuit,
    embedding: &PlanarEmbedding,
    measured: &[usize],
    s_m: &[bool],
) -> Result<f64> {
    Ok(sampler::marginal_scaled(circuit, embedding, measured, s_m)?.to_f64())
}

pub fn planar_sample(circuit: &IqpCircuit, embedding: &PlanarEmbedding, seed: u64) -> Result<OutcomeString> {
    PlanarIqp::new(circuit.clone(), embedding.clone())?.sample(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::ising::probability_table;
    use crate::planar::lattice::grid;

    #[test]
    fn single_edge() {
        let t = Angle::pi_fraction(1, 8).unwrap();
        let (c, e) = grid(1, 2, t).unwrap();
        let p = PlanarIqp::new(c, e).unwrap();
        let s8 = (std::f64::consts::PI / 8.0).sin().powi(2);
        assert!((p.probability(&"11".parse().unwrap()).unwrap() - s8).abs() < 1e-14);
        assert_eq!(p.probability(&"10".parse().unwrap()).unwrap(), 0.0);
        let c8 = 1.0 - s8;
        assert!((p.marginal(&[0], &[false]).unwrap() - c8).abs() < 1e-14);
        let (c, e) = grid(1, 2, Angle::pi_fraction(1, 4).unwrap()).unwrap();
        let q = PlanarIqp::new(c, e).unwrap();
        assert!((q.marginal(&[0], &[false]).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(p.marginal(&[], &[]).unwrap(), 1.0);
        let z = p.partition_function(&OutcomeString::zeros(2)).unwrap().value();
        assert!((z.re - 4.0 * t.cos()).abs() < 1e-14 && z.im.abs() < 1e-14);
    }

    #[test]
    fn grid_table_and_marginals() {
        let (c, e) = grid(2, 3, Angle::pi_fraction(1, 8).unwrap()).unwrap();
        let p = PlanarIqp::new(c.clone(), e).unwrap();
        let table = probability_table(&c).unwrap();
        for (s, want) in table.iter() {
            assert!((p.probability(&s).unwrap() - want).abs() < 1e-12, "{s}");
            assert!((p.chain_probability(&s).unwrap() - want).abs() < 1e-12, "{s}");
        }
        let m = p.marginal(&[0, 1], &[true, false]).unwrap();
        let want: f64 = table
            .iter()
            .filter(|(s, _)| s.get(0) && !s.get(1))
            .map(|(_, p)| p)
            .sum();
        assert!((m - want).abs() < 1e-12);
    }
}
