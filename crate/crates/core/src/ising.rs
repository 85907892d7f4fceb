//! Multibody Ising models with imaginary couplings and `iπ/2` fields.
//!
//! For a bipartite graph `G` and outcome bits `s` the Hamiltonian is
//!
//! ```text
//! -H(σ) = Σ_i iπ s_i (1 - σ_i)/2 + Σ_j iθ_j ∏_{i ∈ N(u_j)} σ_i
//! ```
//!
//! so every Boltzmann factor has unit modulus and `|Z| <= 2^sites`. The IQP
//! output distribution is `P(s) = 2^{-2n} |Z(s)|²`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angle::Angle;
use crate::circuit::{BipartiteInteractionGraph, IqpCircuit, OutcomeString};
use crate::error::{Error, Result};
use crate::wht::fwht;

/// Default site cap for brute-force partition functions.
pub const DEFAULT_PARTITION_CAP: usize = 24;
/// Default qubit cap for exhaustive probability tables.
pub const DEFAULT_TABLE_CAP: usize = 20;

/// Configurations per enumeration chunk. Chunk boundaries are fixed, so the
/// reduction tree does not depend on the number of worker threads.
const CHUNK_BITS: usize = 12;

/// Probabilities above 1 by less than this are clamped, larger excess is an error.
const CLAMP_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct IsingTerm {
    pub spins: Vec<usize>,
    pub coupling: Angle,
}

/// Interaction terms (spin subset, coupling angle) plus the field bits.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingInstance {
    sites: usize,
    terms: Vec<IsingTerm>,
    fields: OutcomeString,
}

impl IsingInstance {
    pub fn new(sites: usize, terms: Vec<IsingTerm>, fields: OutcomeString) -> Result<Self> {
        fields.check_len(sites)?;
        for (gi, t) in terms.iter().enumerate() {
            if let Some(&q) = t.spins.iter().find(|&&q| q >= sites) {
                return Err(Error::QubitOutOfRange {
                    gate: gi,
                    qubit: q,
                    n: sites,
                });
            }
        }
        Ok(IsingInstance {
            sites,
            terms,
            fields,
        })
    }

    pub fn from_graph(graph: &BipartiteInteractionGraph, fields: &OutcomeString) -> Result<Self> {
        let terms = (0..graph.num_ub())
            .map(|u| IsingTerm {
                spins: graph.ub_neighbors(u).to_vec(),
                coupling: graph.weight(u),
            })
            .collect();
        IsingInstance::new(graph.num_va(), terms, fields.clone())
    }

    pub fn from_circuit(circuit: &IqpCircuit, fields: &OutcomeString) -> Result<Self> {
        IsingInstance::from_graph(&circuit.to_graph(), fields)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn terms(&self) -> &[IsingTerm] {
        &self.terms
    }

    pub fn fields(&self) -> &OutcomeString {
        &self.fields
    }
}

/// A complex partition function stored as `mantissa · 2^exp2`, so that large
/// lattices neither overflow nor underflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionValue {
    mantissa: Complex64,
    exp2: i64,
}

impl PartitionValue {
    pub fn new(value: Complex64) -> Self {
        PartitionValue {
            mantissa: value,
            exp2: 0,
        }
        .normalized()
    }

    pub fn from_parts(mantissa: Complex64, exp2: i64) -> Self {
        PartitionValue { mantissa, exp2 }.normalized()
    }

    pub fn zero() -> Self {
        PartitionValue {
            mantissa: Complex64::new(0.0, 0.0),
            exp2: 0,
        }
    }

    fn normalized(self) -> Self {
        let m = self.mantissa.norm();
        if m == 0.0 || !m.is_finite() {
            return PartitionValue {
                mantissa: self.mantissa,
                exp2: if m == 0.0 { 0 } else { self.exp2 },
            };
        }
        let e = m.log2().floor() as i64;
        PartitionValue {
            mantissa: self.mantissa * 2f64.powi(-e as i32),
            exp2: self.exp2 + e,
        }
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    /// The plain complex value (may overflow for very large lattices).
    pub fn value(&self) -> Complex64 {
        self.mantissa * 2f64.powi(self.exp2.clamp(-2000, 2000) as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.norm() == 0.0
    }

    /// `log2 |Z|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        self.mantissa.norm().log2() + self.exp2 as f64
    }

    pub fn mul(&self, other: &PartitionValue) -> PartitionValue {
        PartitionValue::from_parts(self.mantissa * other.mantissa, self.exp2 + other.exp2)
    }

    pub fn scale(&self, factor: Complex64) -> PartitionValue {
        PartitionValue::from_parts(self.mantissa * factor, self.exp2)
    }

    pub fn mul_pow2(&self, k: i64) -> PartitionValue {
        PartitionValue {
            mantissa: self.mantissa,
            exp2: if self.is_zero() { 0 } else { self.exp2 + k },
        }
    }
}

struct Prepared {
    masks: Vec<u64>,
    thetas: Vec<f64>,
    by_site: Vec<Vec<usize>>,
    field_mask: u64,
}

fn prepare(inst: &IsingInstance) -> Prepared {
    let mut terms: Vec<(u64, Angle)> = inst
        .terms
        .iter()
        .map(|t| (t.spins.iter().fold(0u64, |m, &q| m | 1 << q), t.coupling))
        .collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.total_cmp(&b.1)));
    let mut by_site = vec![Vec::new(); inst.sites];
    for (j, (m, _)) in terms.iter().enumerate() {
        for (q, list) in by_site.iter_mut().enumerate() {
            if m >> q & 1 == 1 {
                list.push(j);
            }
        }
    }
    Prepared {
        masks: terms.iter().map(|t| t.0).collect(),
        thetas: terms.iter().map(|t| t.1.radians()).collect(),
        by_site,
        field_mask: inst.fields.to_index(),
    }
}

/// Sum of `e^{-H}` over one chunk of the Gray-code enumeration. Bit `q` of a
/// configuration is `σ̄_q = (1 - σ_q)/2`.
fn chunk_sum(p: &Prepared, start: u64, len: u64) -> Complex64 {
    let gray = |g: u64| g ^ (g >> 1);
    let x = gray(start);
    let mut signs: Vec<bool> = p
        .masks
        .iter()
        .map(|m| (x & m).count_ones() % 2 == 1)
        .collect();
    let mut phase: f64 = p
        .thetas
        .iter()
        .zip(&signs)
        .map(|(t, &neg)| if neg { -t } else { *t })
        .sum();
    let mut field_neg = (x & p.field_mask).count_ones() % 2 == 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for g in start..start + len {
        let w = Complex64::from_polar(1.0, phase);
        acc += if field_neg { -w } else { w };
        if g + 1 == start + len {
            break;
        }
        let k = (g + 1).trailing_zeros() as usize;
        if p.field_mask >> k & 1 == 1 {
            field_neg = !field_neg;
        }
        for &j in &p.by_site[k] {
            let t = p.thetas[j];
            phase += if signs[j] { 2.0 * t } else { -2.0 * t };
            signs[j] = !signs[j];
        }
    }
    acc
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

pub fn partition_function_bruteforce(inst: &IsingInstance) -> Result<PartitionValue> {
    partition_function_bruteforce_with_cap(inst, DEFAULT_PARTITION_CAP)
}

/// `Z = Σ_σ e^{-H(σ)}` by Gray-code enumeration of all `2^sites`
/// configurations. The result is bit-identical for any thread count.
pub fn partition_function_bruteforce_with_cap(
    inst: &IsingInstance,
    cap: usize,
) -> Result<PartitionValue> {
    if inst.sites > cap.min(62) {
        return Err(Error::CapExceeded {
            n: inst.sites,
            cap: cap.min(62),
        });
    }
    let p = prepare(inst);
    let total = 1u64 << inst.sites;
    let chunk = 1u64 << CHUNK_BITS.min(inst.sites);
    let chunks: Vec<Complex64> = (0..total / chunk)
        .into_par_iter()
        .map(|c| chunk_sum(&p, c * chunk, chunk))
        .collect();
    Ok(PartitionValue::new(pairwise_sum(&chunks)))
}

fn probability_from_z(z: Complex64, n: usize) -> Result<f64> {
    let p = z.norm_sqr() * 0.25f64.powi(n as i32);
    if p > 1.0 + CLAMP_SLACK || !p.is_finite() {
        return Err(Error::InternalConsistency(format!(
            "probability {p} exceeds 1"
        )));
    }
    Ok(p.min(1.0))
}

pub fn joint_probability(circuit: &IqpCircuit, s: &OutcomeString) -> Result<f64> {
    joint_probability_with_cap(circuit, s, DEFAULT_PARTITION_CAP)
}

/// `P(s) = 2^{-2n} |Z(s)|²`.
pub fn joint_probability_with_cap(circuit: &IqpCircuit, s: &OutcomeString, cap: usize) -> Result<f64> {
    let inst = IsingInstance::from_circuit(circuit, s)?;
    let z = partition_function_bruteforce_with_cap(&inst, cap)?;
    probability_from_z(z.value(), circuit.num_qubits())
}

/// All `2^n` joint probabilities, indexed by [`OutcomeString::to_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityTable {
    n: usize,
    probs: Vec<f64>,
}

impl ProbabilityTable {
    pub fn from_vec(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                got: probs.len(),
            });
        }
        Ok(ProbabilityTable { n, probs })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: &OutcomeString) -> f64 {
        self.probs[s.to_index() as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (OutcomeString, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (OutcomeString::from_index(i as u64, self.n), p))
    }
}

pub fn probability_table(circuit: &IqpCircuit) -> Result<ProbabilityTable> {
    probability_table_with_cap(circuit, DEFAULT_TABLE_CAP)
}

/// Every joint probability at once. The field term `(-1)^{s·σ̄}` is a
/// character of `σ̄`, so `Z(s)` for all `s` is the Walsh–Hadamard transform of
/// the field-free Boltzmann weights.
pub fn probability_table_with_cap(circuit: &IqpCircuit, cap: usize) -> Result<ProbabilityTable> {
    let n = circuit.num_qubits();
    if n > cap.min(30) {
        return Err(Error::CapExceeded { n, cap: cap.min(30) });
    }
    let inst = IsingInstance::from_circuit(circuit, &OutcomeString::zeros(n))?;
    let p = prepare(&inst);
    let mut weights: Vec<Complex64> = (0..1u64 << n)
        .into_par_iter()
        .map(|x| {
            let phase: f64 = p
                .masks
                .iter()
                .zip(&p.thetas)
                .map(|(m, t)| if (x & m).count_ones() % 2 == 1 { -t } else { *t })
                .sum();
            Complex64::from_polar(1.0, phase)
        })
        .collect();
    fwht(&mut weights);
    let probs = weights
        .iter()
        .map(|z| probability_from_z(*z, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbabilityTable { n, probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateTerm;
    use std::f64::consts::PI;

    fn single_site(terms: Vec<IsingTerm>, s: bool) -> IsingInstance {
        IsingInstance::new(1, terms, OutcomeString::from_bits(vec![s])).unwrap()
    }

    #[test]
    fn one_site_values() {
        let z = partition_function_bruteforce(&single_site(vec![], false)).unwrap();
        assert!((z.value() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let z = partition_function_bruteforce(&single_site(vec![], true)).unwrap();
        assert!(z.value().norm() < 1e-15);
        let theta = 0.37;
        let term = IsingTerm {
            spins: vec![0],
            coupling: Angle::from_radians(theta),
        };
        let z = partition_function_bruteforce(&single_site(vec![term], false)).unwrap();
        assert!((z.value() - Complex64::new(2.0 * theta.cos(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = IsingInstance::new(5, vec![], OutcomeString::zeros(5)).unwrap();
        assert_eq!(
            partition_function_bruteforce_with_cap(&inst, 4),
            Err(Error::CapExceeded { n: 5, cap: 4 })
        );
    }

    #[test]
    fn joint_probability_examples() {
        let c = IqpCircuit::new(1, vec![GateTerm::new(vec![0], Angle::pi_fraction(1, 4).unwrap())]).unwrap();
        let p = joint_probability(&c, &OutcomeString::zeros(1)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let c = IqpCircuit::new(2, vec![GateTerm::new(vec![0, 1], Angle::from_radians(0.7))]).unwrap();
        let p = joint_probability(&c, &"01".parse().unwrap()).unwrap();
        assert!(p.abs() < 1e-30);
    }

    #[test]
    fn tables() {
        let c = IqpCircuit::new(3, vec![]).unwrap();
        let t = probability_table(&c).unwrap();
        assert_eq!(t.probs()[0], 1.0);
        assert!(t.probs()[1..].iter().all(|&p| p == 0.0));

        let c = IqpCircuit::new(1, vec![GateTerm::new(vec![0], Angle::pi_fraction(1, 4).unwrap())]).unwrap();
        let t = probability_table(&c).unwrap();
        assert!((t.probs()[0] - 0.5).abs() < 1e-15 && (t.probs()[1] - 0.5).abs() < 1e-15);

        let theta = 0.3 * PI;
        let c = IqpCircuit::new(2, vec![GateTerm::new(vec![0, 1], Angle::from_radians(theta))]).unwrap();
        let t = probability_table(&c).unwrap();
        let expect = [theta.cos().powi(2), 0.0, 0.0, theta.sin().powi(2)];
        for (a, b) in t.probs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn chunked_sum_matches_naive_sum() {
        // 14 sites forces several chunks and resynchronisation.
        let n = 14;
        let terms: Vec<IsingTerm> = (0..n)
            .map(|i| IsingTerm {
                spins: vec![i, (i + 1) % n, (i + 5) % n],
                coupling: Angle::from_radians(0.1 + 0.37 * i as f64),
            })
            .collect();
        let fields = OutcomeString::from_index(0b10110011100101, n);
        let inst = IsingInstance::new(n, terms.clone(), fields.clone()).unwrap();
        let fast = partition_function_bruteforce(&inst).unwrap().value();
        let mut naive = Complex64::new(0.0, 0.0);
        for x in 0u64..1 << n {
            let sigma = |q: usize| if x >> q & 1 == 1 { -1.0 } else { 1.0 };
            let mut phase = 0.0;
            for q in 0..n {
                if fields.get(q) && x >> q & 1 == 1 {
                    phase += PI;
                }
            }
            for t in &terms {
                let prod: f64 = t.spins.iter().map(|&q| sigma(q)).product();
                phase += t.coupling.radians() * prod;
            }
            naive += Complex64::from_polar(1.0, phase);
        }
        assert!((fast - naive).norm() < 1e-9);
    }
}
