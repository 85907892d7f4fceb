//! The JSON circuit file. Qubits and gates are numbered from 1 here and
//! from 0 in the library; this module is the only place that shifts.

use iqpsim::planar::PlanarEmbedding;
use iqpsim::{Angle, GateTerm, IqpCircuit};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub gates: Vec<GateSpec>,
    /// `embedding[i]` lists the gates at qubit `i + 1` in cyclic order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpec {
    pub qubits: Vec<usize>,
    pub theta: AngleSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Radians(f64),
    Text(String),
}

impl AngleSpec {
    pub fn from_angle(a: Angle) -> Self {
        match a.exact() {
            Some(_) => AngleSpec::Text(a.to_string()),
            None => AngleSpec::Radians(a.radians()),
        }
    }

    pub fn to_angle(&self) -> Result<Angle, String> {
        match self {
            AngleSpec::Radians(x) if x.is_finite() => Ok(Angle::from_radians(*x)),
            AngleSpec::Radians(x) => Err(format!("angle {x} is not finite")),
            AngleSpec::Text(s) => parse_angle(s),
        }
    }
}

/// `k*pi/m`, also `pi/m`, `k*pi`, `-pi/4` or a plain number of radians.
pub fn parse_angle(text: &str) -> Result<Angle, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse angle {text:?}; expected radians or k*pi/m");
    let Some((head, tail)) = s.split_once("pi") else {
        return s.parse::<f64>().ok().filter(|x| x.is_finite()).map(Angle::from_radians).ok_or_else(bad);
    };
    let k: i64 = match head {
        "" => 1,
        "-" => -1,
        h => h.strip_suffix('*').and_then(|x| x.parse().ok()).ok_or_else(bad)?,
    };
    let m: i64 = match tail {
        "" => 1,
        t => t.strip_prefix('/').and_then(|x| x.parse().ok()).ok_or_else(bad)?,
    };
    Angle::pi_fraction(k, m).map_err(|e| e.to_string())
}

impl CircuitFile {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("circuit file: {e}"))
    }

    /// One gate and one rotation per line.
    pub fn to_json(&self) -> String {
        let line = |v: String| format!("    {v}");
        let gates: Vec<String> = self
            .gates
            .iter()
            .map(|g| line(serde_json::to_string(g).expect("gates serialise")))
            .collect();
        let mut out = format!("{{\n  \"n\": {},\n  \"gates\": [\n{}\n  ]", self.n, gates.join(",\n"));
        if let Some(emb) = &self.embedding {
            let rows: Vec<String> = emb
                .iter()
                .map(|r| line(serde_json::to_string(r).expect("lists serialise")))
                .collect();
            out += &format!(",\n  \"embedding\": [\n{}\n  ]", rows.join(",\n"));
        }
        out + "\n}"
    }

    pub fn from_circuit(c: &IqpCircuit, embedding: Option<&PlanarEmbedding>) -> Self {
        CircuitFile {
            n: c.num_qubits(),
            gates: c
                .gates()
                .iter()
                .map(|g| GateSpec {
                    qubits: g.qubits().iter().map(|q| q + 1).collect(),
                    theta: AngleSpec::from_angle(g.theta()),
                })
                .collect(),
            embedding: embedding.map(|e| {
                e.rotations()
                    .iter()
                    .map(|rot| rot.iter().map(|g| g + 1).collect())
                    .collect()
            }),
        }
    }

    pub fn circuit(&self) -> Result<IqpCircuit, String> {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let qubits = g
                    .qubits
                    .iter()
                    .map(|&q| {
                        q.checked_sub(1)
                            .ok_or_else(|| format!("gate {}: qubits are numbered from 1", j + 1))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let theta = g.theta.to_angle().map_err(|e| format!("gate {}: {e}", j + 1))?;
                Ok(GateTerm::new(qubits, theta))
            })
            .collect::<Result<Vec<_>, String>>()?;
        IqpCircuit::new(self.n, gates).map_err(|e| e.to_string())
    }

    /// The rotation system, if the file has one.
    pub fn embedding(&self, circuit: &IqpCircuit) -> Result<Option<PlanarEmbedding>, String> {
        let Some(rot) = &self.embedding else {
            return Ok(None);
        };
        let rotations = rot
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&g| g.checked_sub(1).ok_or("embedding: gates are numbered from 1".to_string()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PlanarEmbedding::for_circuit(circuit, rotations)
            .map(Some)
            .map_err(|e| format!("embedding: {e}"))
    }
}
