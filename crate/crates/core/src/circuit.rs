//! IQP circuits, their bipartite interaction graphs and measurement outcomes.
//!
//! Qubits are indexed from 0 everywhere in the library. The circuit file format
//! used by the command-line tool numbers qubits from 1; the shift happens once,
//! at parse time.

use std::fmt;
use std::str::FromStr;

use crate::angle::Angle;
use crate::error::{Error, Result};

/// One commuting gate `D(θ, S) = exp(iθ ∏_{k∈S} Z_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateTerm {
    qubits: Vec<usize>,
    theta: Angle,
}

impl GateTerm {
    /// Qubit indices are stored sorted; duplicates are rejected by
    /// [`IqpCircuit::new`].
    pub fn new(mut qubits: Vec<usize>, theta: Angle) -> Self {
        qubits.sort_unstable();
        GateTerm { qubits, theta }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn theta(&self) -> Angle {
        self.theta
    }

    /// Bitmask of the support; only valid for circuits with at most 64 qubits.
    pub fn mask(&self) -> u64 {
        self.qubits.iter().fold(0u64, |m, &q| m | (1u64 << q))
    }
}

/// `n` qubits prepared in `|+⟩^n`, a list of commuting diagonal gates and an
/// X-basis readout.
#[derive(Clone, Debug, PartialEq)]
pub struct IqpCircuit {
    n: usize,
    gates: Vec<GateTerm>,
}

impl IqpCircuit {
    pub fn new(n: usize, gates: Vec<GateTerm>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        for (gi, g) in gates.iter().enumerate() {
            if g.qubits.is_empty() {
                return Err(Error::EmptyGate { gate: gi });
            }
            for w in g.qubits.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateQubit {
                        gate: gi,
                        qubit: w[0],
                    });
                }
            }
            if let Some(&q) = g.qubits.last() {
                if q >= n {
                    return Err(Error::QubitOutOfRange {
                        gate: gi,
                        qubit: q,
                        n,
                    });
                }
            }
        }
        Ok(IqpCircuit { n, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateTerm] {
        &self.gates
    }

    /// Same gates with replaced angles (one per gate, in order).
    pub fn with_angles(&self, angles: &[Angle]) -> Result<Self> {
        if angles.len() != self.gates.len() {
            return Err(Error::LengthMismatch {
                expected: self.gates.len(),
                got: angles.len(),
            });
        }
        let gates = self
            .gates
            .iter()
            .zip(angles)
            .map(|(g, &a)| GateTerm::new(g.qubits.clone(), a))
            .collect();
        Ok(IqpCircuit { n: self.n, gates })
    }

    /// Gates sorted by (support, angle). All engines sum in this order so that
    /// permuting the input gate list leaves every result bit-identical.
    pub fn canonical_gates(&self) -> Vec<GateTerm> {
        let mut g = self.gates.clone();
        g.sort_by(|a, b| {
            a.qubits
                .cmp(&b.qubits)
                .then_with(|| a.theta.total_cmp(&b.theta))
        });
        g
    }

    pub fn is_two_body(&self) -> bool {
        self.gates.iter().all(|g| g.qubits.len() == 2)
    }

    pub fn to_graph(&self) -> BipartiteInteractionGraph {
        BipartiteInteractionGraph {
            va: self.n,
            ub: self.gates.iter().map(|g| g.theta).collect(),
            neighbors: self.gates.iter().map(|g| g.qubits.clone()).collect(),
        }
    }
}

/// `G(V_A ∪ U_B, E)`: one `V_A` vertex per qubit, one weighted `U_B` vertex per
/// gate, and `N(u_j) = S_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteInteractionGraph {
    va: usize,
    ub: Vec<Angle>,
    neighbors: Vec<Vec<usize>>,
}

impl BipartiteInteractionGraph {
    pub fn num_va(&self) -> usize {
        self.va
    }

    pub fn num_ub(&self) -> usize {
        self.ub.len()
    }

    pub fn weight(&self, u: usize) -> Angle {
        self.ub[u]
    }

    /// `N(u_j) ⊆ V_A`.
    pub fn ub_neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    /// `N(v_i) ⊆ U_B`, in increasing order.
    pub fn va_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.va];
        for (u, nb) in self.neighbors.iter().enumerate() {
            for &v in nb {
                out[v].push(u);
            }
        }
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().map(move |&v| (u, v)))
    }

    pub fn to_circuit(&self) -> Result<IqpCircuit> {
        let gates = self
            .neighbors
            .iter()
            .zip(&self.ub)
            .map(|(nb, &t)| GateTerm::new(nb.clone(), t))
            .collect();
        IqpCircuit::new(self.va, gates)
    }
}

/// A string of measurement bits; bit `i` belongs to qubit (or vertex) `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeString(Vec<bool>);

impl OutcomeString {
    pub fn zeros(n: usize) -> Self {
        OutcomeString(vec![false; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        OutcomeString(bits)
    }

    /// Bit `i` of `index` becomes entry `i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        OutcomeString((0..n).map(|i| (index >> i) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn parity(&self) -> bool {
        self.0.iter().fold(false, |p, &b| p ^ b)
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Entry 1 is printed leftmost.
impl fmt::Display for OutcomeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for OutcomeString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidOutcome(format!(
                    "expected only 0/1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OutcomeString)
    }
}

fn xor_over_neighbors(
    base: &OutcomeString,
    mu: &OutcomeString,
    graph: &BipartiteInteractionGraph,
) -> Result<OutcomeString> {
    base.check_len(graph.num_va())?;
    mu.check_len(graph.num_ub())?;
    let mut bits = base.0.clone();
    for (u, v) in graph.edges() {
        bits[v] ^= mu.0[u];
    }
    Ok(OutcomeString(bits))
}

/// MBIQP outcome `(m_v, m_u)` to the IQP outcome it simulates:
/// `s_i = m_{v_i} ⊕ (⊕_{u_j ∈ N(v_i)} m_{u_j})`.
pub fn mbiqp_to_iqp_outcome(
    mv: &OutcomeString,
    mu: &OutcomeString,
    graph: &BipartiteInteractionGraph,
) -> Result<OutcomeString> {
    xor_over_neighbors(mv, mu, graph)
}

/// Inverse of [`mbiqp_to_iqp_outcome`] for a fixed (uniformly random) `mu`.
pub fn iqp_to_mbiqp_outcome(
    s: &OutcomeString,
    mu: &OutcomeString,
    graph: &BipartiteInteractionGraph,
) -> Result<(OutcomeString, OutcomeString)> {
    Ok((xor_over_neighbors(s, mu, graph)?, mu.clone()))
}
