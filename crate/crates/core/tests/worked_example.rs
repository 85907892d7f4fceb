//! The three-qubit IFRB example: gates `Z1Z2`, `Z2`, `Z1Z2Z3`.

use iqpsim::gf2::{gauss_jordan, is_ifrb, solve, EliminationTrace, GF2Matrix, RowOp};
use iqpsim::oracle::{simulate_statevector, xbasis_table};
use iqpsim::sparse::{classify, renormalized_angles, sparse_probability, SparseKind};
use iqpsim::{Angle, GateTerm, IqpCircuit, OutcomeString};

fn circuit(angles: [Angle; 3]) -> IqpCircuit {
    IqpCircuit::new(
        3,
        vec![
            GateTerm::new(vec![0, 1], angles[0]),
            GateTerm::new(vec![1], angles[1]),
            GateTerm::new(vec![0, 1, 2], angles[2]),
        ],
    )
    .unwrap()
}

fn matrix(rows: [[u8; 3]; 3]) -> GF2Matrix {
    GF2Matrix::from_rows(&rows.map(|r| r.map(|b| b == 1).to_vec())).unwrap()
}

#[test]
fn incidence_matrix() {
    let c = circuit([Angle::ZERO; 3]);
    let r = GF2Matrix::incidence(&c.to_graph());
    assert_eq!(r, matrix([[1, 0, 1], [1, 1, 1], [0, 0, 1]]));
    assert!(is_ifrb(&r));
    assert_eq!(classify(&c).kind, SparseKind::Ifrb);
    assert_eq!(solve(&r, &[false, false, true]).unwrap(), vec![true, false, true]);
}

/// `Swap(v2, v3) Λ(X)_{v1,v3} Λ(X)_{v2,v1}`, rightmost first, with
/// `Λ(X)_{c,t}` adding row `t` into row `c`.
#[test]
fn cnot_sequence_diagonalises_up_to_relabelling() {
    let r = matrix([[1, 0, 1], [1, 1, 1], [0, 0, 1]]);
    let w = EliminationTrace {
        ops: vec![
            RowOp::RowAdd { src: 0, dst: 1 },
            RowOp::RowAdd { src: 2, dst: 0 },
            RowOp::Swap(1, 2),
        ],
    };
    assert_eq!(w.replay(&r), matrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]]));
    let (reduced, ours) = gauss_jordan(&r);
    assert_eq!(reduced, GF2Matrix::identity(3));
    assert_eq!(ours.replay(&r), reduced);
}

#[test]
fn renormalised_angles_for_001() {
    let angles = [Angle::pi_fraction(1, 8).unwrap(), Angle::from_radians(0.4), Angle::pi_fraction(1, 3).unwrap()];
    let c = circuit(angles);
    let s: OutcomeString = "001".parse().unwrap();
    let shifted = renormalized_angles(&c, &s).unwrap();
    assert_eq!(shifted, vec![angles[0].plus_half_pi(), angles[1], angles[2].plus_half_pi()]);
    assert_eq!(shifted[0], Angle::pi_fraction(5, 8).unwrap());
    assert_eq!(shifted[2], Angle::pi_fraction(5, 6).unwrap());

    let want: f64 = [5.0 / 8.0, 0.4 / std::f64::consts::PI, 5.0 / 6.0]
        .iter()
        .map(|x| (x * std::f64::consts::PI).cos().powi(2))
        .product();
    let p = sparse_probability(&c, &s).unwrap();
    assert!((p - want).abs() < 1e-14);
    let table = xbasis_table(&simulate_statevector(&c).unwrap());
    assert!((table[s.to_index() as usize] - p).abs() < 1e-14);
}
