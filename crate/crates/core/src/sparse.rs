//! Circuits whose incidence matrix has independent columns.
//!
//! With `R` square and invertible, `s = R c` is a bijection and the output
//! distribution factorises over `c`: `P(s) = ∏_j cos²(θ_j + c_j π/2)`. When
//! the columns are independent but too few, weight-1 columns carrying `θ = 0`
//! complete `R` to a basis without changing any probability.

use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::angle::Angle;
use crate::circuit::{GateTerm, IqpCircuit, OutcomeString};
use crate::error::{Error, Result};
use crate::gf2::{is_independent_columns, rank, solve, GF2Matrix};
use crate::sample_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SparseKind {
    /// Independent and full rank (square `R`).
    Ifrb,
    /// Independent columns, fewer gates than qubits.
    Ib,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseClassification {
    pub kind: SparseKind,
    /// Qubits that receive a `θ = 0` single-qubit gate in the IB case.
    pub padding: Vec<usize>,
}

impl SparseClassification {
    pub fn padded_gate_count(&self) -> usize {
        self.padding.len()
    }

    pub fn is_sparse(&self) -> bool {
        self.kind != SparseKind::General
    }
}

pub fn classify(circuit: &IqpCircuit) -> SparseClassification {
    let r = GF2Matrix::incidence(&circuit.to_graph());
    if !is_independent_columns(&r) {
        return SparseClassification {
            kind: SparseKind::General,
            padding: vec![],
        };
    }
    if r.cols() == r.rows() {
        return SparseClassification {
            kind: SparseKind::Ifrb,
            padding: vec![],
        };
    }
    // Greedy completion with unit columns.
    let mut current = r;
    let mut have = current.cols();
    let mut padding = Vec::new();
    for q in 0..current.rows() {
        if have == current.rows() {
            break;
        }
        let mut e = GF2Matrix::zeros(current.rows(), 1);
        e.set(q, 0, true);
        let trial = current.hstack(&e).expect("row counts agree");
        if rank(&trial) > have {
            current = trial;
            have += 1;
            padding.push(q);
        }
    }
    SparseClassification {
        kind: SparseKind::Ib,
        padding,
    }
}

/// The circuit with its `θ = 0` padding gates appended (unchanged for IFRB).
pub fn padded_circuit(circuit: &IqpCircuit, class: &SparseClassification) -> Result<IqpCircuit> {
    if !class.is_sparse() {
        return Err(Error::NotSparse);
    }
    let mut gates = circuit.gates().to_vec();
    gates.extend(class.padding.iter().map(|&q| GateTerm::new(vec![q], Angle::ZERO)));
    IqpCircuit::new(circuit.num_qubits(), gates)
}

/// `θ̃_j = θ_j + c_j π/2` with `R c = s`, for the gates of the padded
/// circuit (original gates first, padding after).
pub fn renormalized_angles(circuit: &IqpCircuit, s: &OutcomeString) -> Result<Vec<Angle>> {
    s.check_len(circuit.num_qubits())?;
    let class = classify(circuit);
    let padded = padded_circuit(circuit, &class)?;
    let r = GF2Matrix::incidence(&padded.to_graph());
    let c = solve(&r, s.bits())?;
    Ok(padded
        .gates()
        .iter()
        .zip(&c)
        .map(|(g, &cj)| if cj { g.theta().plus_half_pi() } else { g.theta() })
        .collect())
}

/// `P(s) = ∏_j cos²(θ̃_j)`.
pub fn sparse_probability(circuit: &IqpCircuit, s: &OutcomeString) -> Result<f64> {
    let angles = renormalized_angles(circuit, s)?;
    Ok(angles.iter().map(Angle::cos_sq).product())
}

/// Precomputed sampler: `c_j ~ Bernoulli(sin²θ_j)` independently and
/// `s = R c`.
#[derive(Clone, Debug)]
pub struct SparseSampler {
    r: GF2Matrix,
    flip: Vec<f64>,
}

impl SparseSampler {
    pub fn new(circuit: &IqpCircuit) -> Result<Self> {
        if !classify(circuit).is_sparse() {
            return Err(Error::NotSparse);
        }
        Ok(SparseSampler {
            r: GF2Matrix::incidence(&circuit.to_graph()),
            flip: circuit.gates().iter().map(|g| g.theta().sin_sq()).collect(),
        })
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> OutcomeString {
        let c: Vec<bool> = self.flip.iter().map(|&p| rng.gen::<f64>() < p).collect();
        OutcomeString::from_bits(self.r.mul_vec(&c).expect("dimensions agree"))
    }
}

pub fn sparse_sample(circuit: &IqpCircuit, seed: u64) -> Result<OutcomeString> {
    let sampler = SparseSampler::new(circuit)?;
    let mut rng: ChaCha20Rng = sample_rng(seed, 0);
    Ok(sampler.draw(&mut rng))
}

/// `count` samples; sample `k` uses stream `k` of `seed`, so the output does
/// not depend on the thread count.
pub fn sparse_samples(circuit: &IqpCircuit, count: usize, seed: u64) -> Result<Vec<OutcomeString>> {
    let sampler = SparseSampler::new(circuit)?;
    Ok((0..count as u64)
        .into_par_iter()
        .map(|k| sampler.draw(&mut sample_rng(seed, k)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gate(q: &[usize], t: Angle) -> GateTerm {
        GateTerm::new(q.to_vec(), t)
    }

    #[test]
    fn single_qubit() {
        let t = Angle::from_radians(0.3);
        let c = IqpCircuit::new(1, vec![gate(&[0], t)]).unwrap();
        assert_eq!(classify(&c).kind, SparseKind::Ifrb);
        let p = sparse_probability(&c, &"1".parse().unwrap()).unwrap();
        assert!((p - 0.3f64.sin().powi(2)).abs() < 1e-15);

        let h = IqpCircuit::new(1, vec![gate(&[0], Angle::half_pi())]).unwrap();
        assert_eq!(sparse_probability(&h, &OutcomeString::zeros(1)).unwrap(), 0.0);
        for k in 0..5 {
            assert_eq!(sparse_sample(&h, k).unwrap().to_string(), "1");
        }
    }

    #[test]
    fn zero_angles() {
        let c = IqpCircuit::new(3, vec![gate(&[0, 1], Angle::ZERO), gate(&[1, 2], Angle::ZERO)]).unwrap();
        let class = classify(&c);
        assert_eq!(class.kind, SparseKind::Ib);
        assert_eq!(class.padded_gate_count(), 1);
        assert_eq!(sparse_probability(&c, &OutcomeString::zeros(3)).unwrap(), 1.0);
        assert!(sparse_samples(&c, 20, 7).unwrap().iter().all(|s| s.to_index() == 0));
    }

    #[test]
    fn dependent_columns_are_general() {
        let t = Angle::from_radians(0.2);
        let c = IqpCircuit::new(3, vec![gate(&[0, 1], t), gate(&[1, 2], t), gate(&[0, 2], t)]).unwrap();
        assert_eq!(classify(&c).kind, SparseKind::General);
        assert_eq!(sparse_probability(&c, &OutcomeString::zeros(3)), Err(Error::NotSparse));
        assert!(sparse_sample(&c, 0).is_err());
    }
}
