//! Kasteleyn orientations of embedded planar graphs.
//!
//! `orient[e] == true` orients edge `e = (a, b)` from `a` to `b`. A face is
//! satisfied when an odd number of its darts agree with the orientation;
//! faces are traced with a consistent handedness, so this is the usual
//! "odd number of clockwise edges" rule. One face per component (the
//! longest) plays the outer face and is left unconstrained.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::planar::embedding::{Faces, PlanarEmbedding};

fn along(orient: &[bool], d: usize) -> bool {
    (d % 2 == 0) == orient[d / 2]
}

/// `outer[f]` marks the face left unconstrained in its component.
pub fn outer_faces(emb: &PlanarEmbedding, faces: &Faces) -> Vec<bool> {
    let (comp, k) = emb.components();
    let mut best: Vec<Option<usize>> = vec![None; k];
    for (f, walk) in faces.darts.iter().enumerate() {
        let c = comp[emb.tail(walk[0])];
        if best[c].map_or(true, |b| walk.len() > faces.darts[b].len()) {
            best[c] = Some(f);
        }
    }
    let mut outer = vec![false; faces.darts.len()];
    for f in best.into_iter().flatten() {
        outer[f] = true;
    }
    outer
}

pub fn kasteleyn_orient(emb: &PlanarEmbedding) -> Result<Vec<bool>> {
    if !emb.is_planar() {
        return Err(Error::InvalidEmbedding("rotation system is not planar".into()));
    }
    let n = emb.num_vertices();
    let m = emb.num_edges();
    let mut orient = vec![true; m];

    let mut in_tree = vec![false; m];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in emb.rotation(v) {
                let w = emb.head(emb.dart_from(e, v));
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let faces = emb.faces();
    let outer = outer_faces(emb, &faces);
    let nf = faces.darts.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for e in (0..m).filter(|&e| !in_tree[e]) {
        adj[faces.face_of[2 * e]].push(e);
        adj[faces.face_of[2 * e + 1]].push(e);
    }
    let mut parent_edge = vec![usize::MAX; nf];
    let mut visited = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    for root in (0..nf).filter(|&f| outer[f]) {
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for &e in &adj[f] {
                let g = faces.face_of[2 * e] ^ faces.face_of[2 * e + 1] ^ f;
                if !visited[g] {
                    visited[g] = true;
                    parent_edge[g] = e;
                    queue.push_back(g);
                }
            }
        }
    }
    if order.len() != nf {
        return Err(Error::InternalConsistency(
            "co-tree edges do not span the dual graph".into(),
        ));
    }
    for &f in order.iter().rev() {
        let pe = parent_edge[f];
        if pe == usize::MAX {
            continue;
        }
        let mut count = 0usize;
        let mut pd = usize::MAX;
        for &d in &faces.darts[f] {
            if d / 2 == pe {
                pd = d;
            } else if along(&orient, d) {
                count += 1;
            }
        }
        let need = count % 2 == 0;
        orient[pe] = if pd % 2 == 0 { need } else { !need };
    }
    Ok(orient)
}

/// Every face except the designated outer ones has an odd number of darts
/// agreeing with `orient`.
pub fn verify_kasteleyn(emb: &PlanarEmbedding, orient: &[bool]) -> bool {
    if orient.len() != emb.num_edges() {
        return false;
    }
    let faces = emb.faces();
    let outer = outer_faces(emb, &faces);
    faces.darts.iter().enumerate().all(|(f, walk)| {
        outer[f] || walk.iter().filter(|&&d| along(orient, d)).count() % 2 == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::planar::lattice::{grid, triangulated_grid};

    #[test]
    fn single_edge_and_triangle() {
        let e = PlanarEmbedding::new(2, vec![(0, 1)], vec![vec![0], vec![0]]).unwrap();
        let o = kasteleyn_orient(&e).unwrap();
        assert!(verify_kasteleyn(&e, &o));
        let t = PlanarEmbedding::new(
            3,
            vec![(0, 1), (1, 2), (2, 0)],
            vec![vec![0, 2], vec![1, 0], vec![2, 1]],
        )
        .unwrap();
        let o = kasteleyn_orient(&t).unwrap();
        assert!(verify_kasteleyn(&t, &o));
        let mut flipped = o.clone();
        flipped[0] = !flipped[0];
        assert!(!verify_kasteleyn(&t, &flipped));
    }

    #[test]
    fn lattices() {
        let (_, e) = grid(5, 5, Angle::ZERO).unwrap();
        let o = kasteleyn_orient(&e).unwrap();
        assert!(verify_kasteleyn(&e, &o));
        assert_eq!(e.faces().darts.len(), 17);
        let (_, e) = triangulated_grid(4, 3, |_| Angle::ZERO).unwrap();
        assert!(verify_kasteleyn(&e, &kasteleyn_orient(&e).unwrap()));
    }
}
