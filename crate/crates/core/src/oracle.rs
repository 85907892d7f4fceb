//! Dense statevector simulation straight from the circuit definition.
//!
//! This path does not use the Ising map at all, so agreement with
//! [`crate::ising`] is independent evidence for both.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{BipartiteInteractionGraph, IqpCircuit, OutcomeString};
use crate::error::{Error, Result};
use crate::wht::fwht_axes;

pub const DEFAULT_ORACLE_CAP: usize = 20;

/// `2^n` amplitudes; bit `q` of the index is the Z-basis value of qubit `q`.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

pub fn simulate_statevector(circuit: &IqpCircuit) -> Result<StateVector> {
    simulate_statevector_with_cap(circuit, DEFAULT_ORACLE_CAP)
}

/// `∏_j D(θ_j, S_j) |+⟩^n`, one diagonal gate at a time.
pub fn simulate_statevector_with_cap(circuit: &IqpCircuit, cap: usize) -> Result<StateVector> {
    let n = circuit.num_qubits();
    if n > cap.min(30) {
        return Err(Error::CapExceeded { n, cap: cap.min(30) });
    }
    let amp0 = Complex64::new(0.5f64.powf(n as f64 / 2.0), 0.0);
    let mut amps = vec![amp0; 1 << n];
    for g in circuit.canonical_gates() {
        let mask = g.mask();
        let t = g.theta();
        let plus = Complex64::new(t.cos(), t.sin());
        let minus = plus.conj();
        amps.par_iter_mut().enumerate().for_each(|(z, a)| {
            *a *= if (z as u64 & mask).count_ones() % 2 == 0 {
                plus
            } else {
                minus
            };
        });
    }
    Ok(StateVector { n, amps })
}

/// `|⟨+_s|ψ⟩|²`, with `⟨+_s| = 2^{-n/2} Σ_z (-1)^{s·z} ⟨z|`.
pub fn xbasis_probability(state: &StateVector, s: &OutcomeString) -> Result<f64> {
    s.check_len(state.n)?;
    let smask = s.to_index();
    let overlap: Complex64 = state
        .amps
        .par_iter()
        .enumerate()
        .map(|(z, &a)| {
            if (z as u64 & smask).count_ones() % 2 == 0 {
                a
            } else {
                -a
            }
        })
        .sum();
    Ok(overlap.norm_sqr() * 0.5f64.powi(state.n as i32))
}

/// All X-basis probabilities, indexed by [`OutcomeString::to_index`].
pub fn xbasis_table(state: &StateVector) -> Vec<f64> {
    let mut v = state.amps.clone();
    fwht_axes(&mut v, u64::MAX);
    let scale = 0.5f64.powi(state.n as i32);
    v.iter().map(|a| a.norm_sqr() * scale).collect()
}

/// `Σ_{s_{M̄}} P(s_M, s_{M̄})`. `measured` lists the qubits of `M` and
/// `s_m[k]` is the outcome of `measured[k]`.
///
/// Transforming only the `M` axes gives, for each computational-basis
/// value `z_{M̄}`, the amplitude of `⟨+_{s_M}| ⊗ ⟨z_{M̄}|`; completeness of
/// the Z basis on `M̄` then sums the marginal.
pub fn xbasis_marginal(state: &StateVector, measured: &[usize], s_m: &[bool]) -> Result<f64> {
    if measured.len() != s_m.len() {
        return Err(Error::LengthMismatch {
            expected: measured.len(),
            got: s_m.len(),
        });
    }
    let mut mmask = 0u64;
    let mut smask = 0u64;
    for (&q, &b) in measured.iter().zip(s_m) {
        if q >= state.n {
            return Err(Error::QubitOutOfRange {
                gate: 0,
                qubit: q,
                n: state.n,
            });
        }
        mmask |= 1 << q;
        if b {
            smask |= 1 << q;
        }
    }
    let mut v = state.amps.clone();
    fwht_axes(&mut v, mmask);
    let total: f64 = v
        .iter()
        .enumerate()
        .filter(|(z, _)| *z as u64 & mmask == smask)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(total * 0.5f64.powi(mmask.count_ones() as i32))
}

/// The full MBIQP distribution on the bipartite graph state `|G⟩`: `V_A`
/// measured in the X basis, `u_j` projected onto `⟨θ_{j,m}|`. Entry
/// `mv | mu << |V_A|` holds `P(mv, mu)`.
pub fn mbiqp_distribution(graph: &BipartiteInteractionGraph, cap: usize) -> Result<Vec<f64>> {
    let (nv, nu) = (graph.num_va(), graph.num_ub());
    let n = nv + nu;
    if n > cap.min(30) {
        return Err(Error::CapExceeded { n, cap: cap.min(30) });
    }
    // CZ on every edge applied to |+⟩^{n}.
    let amp0 = 0.5f64.powf(n as f64 / 2.0);
    let masks: Vec<(u64, u64)> = (0..nu)
        .map(|u| {
            let nb = graph.ub_neighbors(u).iter().fold(0u64, |m, &v| m | 1 << v);
            (1u64 << (nv + u), nb)
        })
        .collect();
    let mut amps: Vec<Complex64> = (0..1u64 << n)
        .into_par_iter()
        .map(|z| {
            let odd = masks
                .iter()
                .filter(|&&(ub, nb)| z & ub != 0 && (z & nb).count_ones() % 2 == 1)
                .count()
                % 2
                == 1;
            Complex64::new(if odd { -amp0 } else { amp0 }, 0.0)
        })
        .collect();
    // Rows are the measurement bras: ⟨+_m| on V_A,
    // ⟨θ_{j,0}| = (cos θ, i sin θ) and ⟨θ_{j,1}| = (i sin θ, cos θ) on U_B.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for q in 0..n {
        let m = if q < nv {
            [[h, h], [h, -h]].map(|r| r.map(|x| Complex64::new(x, 0.0)))
        } else {
            let t = graph.weight(q - nv);
            let (c, s) = (Complex64::new(t.cos(), 0.0), Complex64::new(0.0, t.sin()));
            [[c, s], [s, c]]
        };
        let bit = 1usize << q;
        for z in 0..amps.len() {
            if z & bit == 0 {
                let (a0, a1) = (amps[z], amps[z | bit]);
                amps[z] = m[0][0] * a0 + m[0][1] * a1;
                amps[z | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
    Ok(amps.iter().map(|a| a.norm_sqr()).collect())
}
