//! Planar lattices with their rotation systems.

use crate::angle::Angle;
use crate::circuit::{GateTerm, IqpCircuit};
use crate::error::{Error, Result};
use crate::planar::embedding::PlanarEmbedding;

/// `rows × cols` square grid. Vertex `(r, c)` is `r·cols + c`; horizontal
/// edges come first (row by row), then vertical ones. Rotations list the
/// right, up, left and down neighbours in that order.
pub fn grid(rows: usize, cols: usize, theta: Angle) -> Result<(IqpCircuit, PlanarEmbedding)> {
    grid_with(rows, cols, |_| theta)
}

/// Grid with per-edge angles (`angle(edge_index)`).
pub fn grid_with(
    rows: usize,
    cols: usize,
    mut angle: impl FnMut(usize) -> Angle,
) -> Result<(IqpCircuit, PlanarEmbedding)> {
    if rows == 0 || cols == 0 {
        return Err(Error::NoQubits);
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    let mut right = vec![None; rows * cols];
    let mut down = vec![None; rows * cols];
    for r in 0..rows {
        for c in 0..cols - 1 {
            right[id(r, c)] = Some(edges.len());
            edges.push((id(r, c), id(r, c + 1)));
        }
    }
    for r in 0..rows - 1 {
        for c in 0..cols {
            down[id(r, c)] = Some(edges.len());
            edges.push((id(r, c), id(r + 1, c)));
        }
    }
    let mut rotations = vec![Vec::new(); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let v = id(r, c);
            let up = (r > 0).then(|| down[id(r - 1, c)]).flatten();
            let left = (c > 0).then(|| right[id(r, c - 1)]).flatten();
            rotations[v] = [right[v], up, left, down[v]].into_iter().flatten().collect();
        }
    }
    let gates = edges
        .iter()
        .enumerate()
        .map(|(j, &(a, b))| GateTerm::new(vec![a, b], angle(j)))
        .collect();
    let circuit = IqpCircuit::new(rows * cols, gates)?;
    let emb = PlanarEmbedding::new(rows * cols, edges, rotations)?;
    Ok((circuit, emb))
}

/// Grid with one extra diagonal per cell, from `(r, c)` to `(r + 1, c + 1)`.
/// Diagonal edges follow the grid edges. Every inner face is a triangle.
pub fn triangulated_grid(
    rows: usize,
    cols: usize,
    mut angle: impl FnMut(usize) -> Angle,
) -> Result<(IqpCircuit, PlanarEmbedding)> {
    let (base, emb) = grid_with(rows, cols, &mut angle)?;
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = emb.edges().to_vec();
    let mut rotations = emb.rotations().to_vec();
    let mut gates = base.gates().to_vec();
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            let (a, b) = (id(r, c), id(r + 1, c + 1));
            let e = edges.len();
            edges.push((a, b));
            gates.push(GateTerm::new(vec![a, b], angle(e)));
            // At `a` the diagonal points down-right: after "down".
            rotations[a].push(e);
            // At `b` it points up-left: between "up" and "left".
            let up = rotations[b]
                .iter()
                .position(|&x| edges[x] == (id(r, c + 1), b))
                .expect("cell has an up edge");
            rotations[b].insert(up + 1, e);
        }
    }
    let circuit = IqpCircuit::new(rows * cols, gates)?;
    let emb = PlanarEmbedding::new(rows * cols, edges, rotations)?;
    Ok((circuit, emb))
}
