//! Marginals on merged graphs and sequential sampling.

use std::sync::Mutex;

use num_complex::Complex64;
use rand::Rng;
use rustc_hash::FxHashMap;

use crate::angle::Angle;
use crate::circuit::{IqpCircuit, OutcomeString};
use crate::error::{Error, Result};
use crate::ising::PartitionValue;
use crate::planar::embedding::PlanarEmbedding;
use crate::planar::fisher::partition_no_fields;
use crate::planar::merge::merge_for_marginal;
use crate::planar::renorm::{renormalize_edges, Adjacency};

/// `Z(s, θ)` on an embedded two-body graph: `(-i)^F Z(0, θ̃)`, or exactly
/// zero when a component has odd field parity.
pub(crate) fn partition_with_fields(
    emb: &PlanarEmbedding,
    angles: &[Angle],
    fields: &[bool],
) -> Result<PartitionValue> {
    let r = match renormalize_edges(emb.num_vertices(), emb.edges(), angles, fields) {
        Ok(r) => r,
        Err(Error::OddParity) => return Ok(PartitionValue::zero()),
        Err(e) => return Err(e),
    };
    let z = partition_no_fields(emb, &r.angles)?;
    let phase = match r.flip_count() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    Ok(z.scale(phase))
}

/// A non-negative real number `mantissa · 2^exp2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledProb {
    pub mantissa: f64,
    pub exp2: i64,
}

impl ScaledProb {
    pub const ONE: ScaledProb = ScaledProb {
        mantissa: 1.0,
        exp2: 0,
    };

    pub fn to_f64(self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        let e = self.exp2.clamp(-1100, 1100) as i32;
        // Two steps keep subnormal results accurate.
        self.mantissa * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    /// `self / other`, for `other` non-zero.
    pub fn ratio(self, other: ScaledProb) -> f64 {
        ScaledProb {
            mantissa: self.mantissa / other.mantissa,
            exp2: self.exp2 - other.exp2,
        }
        .to_f64()
    }

    pub fn scale(self, f: f64) -> ScaledProb {
        ScaledProb {
            mantissa: self.mantissa * f,
            exp2: self.exp2,
        }
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }
}

/// `P(s_M)` as a scaled number, through the merged graph.
pub(crate) fn marginal_scaled(
    circuit: &IqpCircuit,
    emb: &PlanarEmbedding,
    measured: &[usize],
    s_m: &[bool],
) -> Result<ScaledProb> {
    if measured.is_empty() {
        return Ok(ScaledProb::ONE);
    }
    let merged = merge_for_marginal(circuit, measured, s_m, Some(emb))?;
    let glued = merged.embedding.as_ref().expect("embedding was supplied");
    let z = partition_with_fields(glued, &merged.angles, &merged.fields)?;
    let mag = z.mantissa().norm();
    if mag == 0.0 {
        return Ok(ScaledProb {
            mantissa: 0.0,
            exp2: 0,
        });
    }
    Ok(ScaledProb {
        mantissa: mag,
        exp2: z.exp2() + merged.prefactor_log2(),
    })
}

/// Breadth-first order from the smallest vertex of each component; every
/// prefix within a component is connected.
pub fn measurement_order(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = Adjacency::new(n, edges);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut order = vec![s];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(w, _) in &adj.nbrs[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        out.push(order);
    }
    out
}

/// Marginals already computed, keyed by step and the outcome bits measured
/// so far. Only used for small instances, where samples share prefixes.
pub(crate) type MarginalCache = Mutex<FxHashMap<(usize, u64), ScaledProb>>;

/// Largest qubit count for which [`MarginalCache`] is used.
pub(crate) const CACHE_MAX_QUBITS: usize = 20;

/// `p(s_v = 0 | history)` for each vertex in turn. `choose(p0)` returns the
/// bit to condition on next; the return value is the product of the chosen
/// conditionals.
pub(crate) fn sequential<F: FnMut(f64) -> bool>(
    circuit: &IqpCircuit,
    emb: &PlanarEmbedding,
    cache: Option<&MarginalCache>,
    mut choose: F,
) -> Result<(OutcomeString, f64)> {
    let n = circuit.num_qubits();
    let cache = cache.filter(|_| n <= CACHE_MAX_QUBITS);
    let mut bits = vec![false; n];
    let mut chain = 1.0;
    let mut step = 0;
    for order in measurement_order(n, emb.edges()) {
        let mut prev = ScaledProb::ONE;
        let mut measured = Vec::with_capacity(order.len());
        let mut s_m = Vec::with_capacity(order.len());
        let mut key = 0u64;
        for v in order {
            measured.push(v);
            s_m.push(false);
            let marg0 = match cache {
                Some(c) => {
                    let hit = c.lock().expect("cache lock").get(&(step, key)).copied();
                    match hit {
                        Some(m) => m,
                        None => {
                            let m = marginal_scaled(circuit, emb, &measured, &s_m)?;
                            c.lock().expect("cache lock").insert((step, key), m);
                            m
                        }
                    }
                }
                None => marginal_scaled(circuit, emb, &measured, &s_m)?,
            };
            let p0 = if prev.is_zero() {
                1.0
            } else {
                marg0.ratio(prev).clamp(0.0, 1.0)
            };
            let bit = choose(p0);
            *s_m.last_mut().expect("just pushed") = bit;
            bits[v] = bit;
            if bit {
                if cache.is_some() {
                    key |= 1 << (s_m.len() - 1);
                }
                chain *= 1.0 - p0;
                prev = prev.scale(1.0 - p0);
            } else {
                chain *= p0;
                prev = marg0;
            }
            step += 1;
        }
    }
    Ok((OutcomeString::from_bits(bits), chain))
}

pub(crate) fn sample_with<R: Rng>(
    circuit: &IqpCircuit,
    emb: &PlanarEmbedding,
    cache: Option<&MarginalCache>,
    rng: &mut R,
) -> Result<OutcomeString> {
    sequential(circuit, emb, cache, |p0| rng.gen::<f64>() >= p0).map(|(s, _)| s)
}

/// `∏_k p(s_k | s_1 … s_{k-1})` along the measurement order.
pub(crate) fn chain_probability(
    circuit: &IqpCircuit,
    emb: &PlanarEmbedding,
    s: &OutcomeString,
) -> Result<f64> {
    s.check_len(circuit.num_qubits())?;
    let bits = s.bits().to_vec();
    let mut orders = measurement_order(circuit.num_qubits(), emb.edges()).into_iter().flatten();
    sequential(circuit, emb, None, |_| bits[orders.next().expect("one bit per vertex")]).map(|(_, p)| p)
}
