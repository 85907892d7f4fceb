//! Exact classical simulation of IQP (commuting-gate) circuits.
//!
//! An IQP circuit on `n` qubits is mapped onto an Ising model with imaginary
//! couplings and `iπ/2` fields; its output probabilities are squared partition
//! functions. Three engines evaluate them:
//!
//! * a brute-force partition function ([`ising`]) and an independent
//!   statevector oracle ([`oracle`]) for small instances,
//! * a GF(2) fast path for circuits whose incidence matrix has independent
//!   columns ([`sparse`]),
//! * a Pfaffian engine for two-qubit gates on planar graphs ([`planar`]).
//!
//! Qubits are numbered from 0 in this library. The command-line tool numbers
//! them from 1 and shifts once when reading a circuit file.

pub mod angle;
pub mod approx;
pub mod circuit;
pub mod error;
pub mod gf2;
pub mod ising;
pub mod oracle;
pub mod planar;
pub mod random;
pub mod selftest;
pub mod sparse;
pub mod wht;

pub use angle::{Angle, PiFraction};
pub use circuit::{
    iqp_to_mbiqp_outcome, mbiqp_to_iqp_outcome, BipartiteInteractionGraph, GateTerm, IqpCircuit,
    OutcomeString,
};
pub use error::{Error, Result};
pub use ising::{
    joint_probability, partition_function_bruteforce, probability_table, IsingInstance,
    IsingTerm, PartitionValue, ProbabilityTable,
};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Generator for sample number `index` of a run seeded with `seed`. Each
/// sample owns a ChaCha stream, so results do not depend on how samples are
/// spread over threads.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
