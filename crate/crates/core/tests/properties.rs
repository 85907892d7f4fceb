use std::f64::consts::SQRT_2;

use iqpsim::approx::{epsilon_budget, multiplicative_error, per_step_error_compose};
use iqpsim::circuit::{iqp_to_mbiqp_outcome, mbiqp_to_iqp_outcome};
use iqpsim::gf2::{gauss_jordan, rank, solve, GF2Matrix};
use iqpsim::ising::{partition_function_bruteforce, probability_table};
use iqpsim::oracle::{simulate_statevector, xbasis_marginal, xbasis_probability, xbasis_table};
use iqpsim::planar::lattice::{grid_with, triangulated_grid};
use iqpsim::planar::pfaffian::pfaffian;
use iqpsim::planar::{merge_for_marginal, PlanarIqp};
use iqpsim::random::{random_angle, random_circuit, random_connected_two_body, random_planar, random_skew, random_sparse_circuit};
use iqpsim::sparse::{classify, padded_circuit, sparse_probability, SparseKind};
use iqpsim::{joint_probability, Angle, GateTerm, IqpCircuit, IsingInstance, OutcomeString};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm())).unwrap();
        if m[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            m.swap(p, k);
            d = -d;
        }
        d *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gate_order_is_irrelevant(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let gates = r.gen_range(0..=2 * n);
        let c = random_circuit(&mut r, n, gates);
        let mut shuffled = c.gates().to_vec();
        shuffled.shuffle(&mut r);
        let d = IqpCircuit::new(n, shuffled).unwrap();
        let s = OutcomeString::from_index(r.gen_range(0..1u64 << n), n);
        prop_assert_eq!(joint_probability(&c, &s).unwrap(), joint_probability(&d, &s).unwrap());
        prop_assert_eq!(
            xbasis_probability(&simulate_statevector(&c).unwrap(), &s).unwrap(),
            xbasis_probability(&simulate_statevector(&d).unwrap(), &s).unwrap()
        );
    }

    #[test]
    fn graph_round_trip(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let gates = r.gen_range(0..=3 * n);
        let c = random_circuit(&mut r, n, gates);
        prop_assert_eq!(c.to_graph().to_circuit().unwrap(), c);
    }

    #[test]
    fn outcome_transforms_invert(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let gates = r.gen_range(0..=3 * n);
        let c = random_circuit(&mut r, n, gates);
        let g = c.to_graph();
        let s = OutcomeString::from_index(r.gen_range(0..1u64 << n), n);
        let mu = OutcomeString::from_bits((0..gates).map(|_| r.gen()).collect());
        let (mv, mu2) = iqp_to_mbiqp_outcome(&s, &mu, &g).unwrap();
        prop_assert_eq!(&mu2, &mu);
        prop_assert_eq!(mbiqp_to_iqp_outcome(&mv, &mu, &g).unwrap(), s);
    }

    #[test]
    fn normalised_and_bounded(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let gates = r.gen_range(0..=3 * n);
        let c = random_circuit(&mut r, n, gates);
        let table = probability_table(&c).unwrap();
        prop_assert!((table.total() - 1.0).abs() < 1e-9);
        let s = OutcomeString::from_index(r.gen_range(0..1u64 << n), n);
        let z = partition_function_bruteforce(&IsingInstance::from_circuit(&c, &s).unwrap()).unwrap();
        prop_assert!(z.value().norm() <= (1u64 << n) as f64 * (1.0 + 1e-12));
        prop_assert!((table.get(&s) - joint_probability(&c, &s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn no_gates_kills_any_field(n in 1usize..=10, idx in any::<u64>()) {
        let s = OutcomeString::from_index(idx & ((1 << n) - 1), n);
        let c = IqpCircuit::new(n, vec![]).unwrap();
        let z = partition_function_bruteforce(&IsingInstance::from_circuit(&c, &s).unwrap()).unwrap();
        if s.to_index() == 0 {
            prop_assert_eq!(z.value(), Complex64::new((1u64 << n) as f64, 0.0));
        } else {
            prop_assert_eq!(z.value().norm(), 0.0);
        }
    }

    #[test]
    fn oracle_norm_and_marginal_consistency(seed in any::<u64>(), n in 1usize..=7) {
        let mut r = rng(seed);
        let gates = r.gen_range(0..=3 * n);
        let c = random_circuit(&mut r, n, gates);
        let st = simulate_statevector(&c).unwrap();
        prop_assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
        let mut qubits: Vec<usize> = (0..n).collect();
        qubits.shuffle(&mut r);
        let k = r.gen_range(0..n);
        let m = &qubits[..k];
        let s_m: Vec<bool> = m.iter().map(|_| r.gen()).collect();
        let extra = qubits[k];
        let whole = xbasis_marginal(&st, m, &s_m).unwrap();
        let split: f64 = [false, true]
            .iter()
            .map(|&b| {
                let mut m2 = m.to_vec();
                m2.push(extra);
                let mut s2 = s_m.clone();
                s2.push(b);
                xbasis_marginal(&st, &m2, &s2).unwrap()
            })
            .sum();
        prop_assert!((whole - split).abs() < 1e-12);
    }

    #[test]
    fn gf2_rank_solve_and_replay(seed in any::<u64>(), rows in 1usize..=9, cols in 1usize..=9) {
        let mut r = rng(seed);
        let m = GF2Matrix::from_rows(
            &(0..rows).map(|_| (0..cols).map(|_| r.gen()).collect()).collect::<Vec<Vec<bool>>>(),
        )
        .unwrap();
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert!(rank(&m) <= rows.min(cols));
        let (reduced, trace) = gauss_jordan(&m);
        prop_assert_eq!(trace.replay(&m), reduced);
        let c0: Vec<bool> = (0..cols).map(|_| r.gen()).collect();
        let rhs = m.mul_vec(&c0).unwrap();
        let c = solve(&m, &rhs).unwrap();
        prop_assert_eq!(m.mul_vec(&c).unwrap(), rhs);
    }

    #[test]
    fn sparse_matches_oracle(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let gates = r.gen_range(1..=n);
        let c = random_sparse_circuit(&mut r, n, gates);
        let table = xbasis_table(&simulate_statevector(&c).unwrap());
        let class = classify(&c);
        let padded = padded_circuit(&c, &class).unwrap();
        let padded_table = xbasis_table(&simulate_statevector(&padded).unwrap());
        for (i, &p) in table.iter().enumerate() {
            let s = OutcomeString::from_index(i as u64, n);
            prop_assert!((sparse_probability(&c, &s).unwrap() - p).abs() < 1e-10);
            prop_assert!((padded_table[i] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn forests_are_sparse(seed in any::<u64>(), n in 1usize..=10) {
        let mut r = rng(seed);
        let tree = random_connected_two_body(&mut r, n, 0);
        // Dropping edges of a tree leaves a forest.
        let kept: Vec<GateTerm> = tree.gates().iter().filter(|_| r.gen_bool(0.7)).cloned().collect();
        let forest = IqpCircuit::new(n, kept).unwrap();
        prop_assert!(matches!(classify(&tree).kind, SparseKind::Ib | SparseKind::Ifrb));
        prop_assert!(matches!(classify(&forest).kind, SparseKind::Ib | SparseKind::Ifrb));
    }

    #[test]
    fn parity_law(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let extra = r.gen_range(0..=n);
        let c = random_connected_two_body(&mut r, n, extra);
        let table = xbasis_table(&simulate_statevector(&c).unwrap());
        for (i, &p) in table.iter().enumerate() {
            if i.count_ones() % 2 == 1 {
                prop_assert!(p <= 1e-12);
            }
        }
    }

    /// Any edge set `F` with odd-degree vertices `s` renormalises the
    /// fields: `P(s | θ) = P(0 | θ + π/2 on F)`.
    #[test]
    fn renormalisation_is_path_independent(seed in any::<u64>(), n in 2usize..=7) {
        let mut r = rng(seed);
        let extra = r.gen_range(0..=n);
        let c = random_connected_two_body(&mut r, n, extra);
        let flip: Vec<bool> = c.gates().iter().map(|_| r.gen()).collect();
        let mut s = vec![false; n];
        for (g, &f) in c.gates().iter().zip(&flip) {
            if f {
                for &q in g.qubits() {
                    s[q] = !s[q];
                }
            }
        }
        let shifted: Vec<Angle> = c
            .gates()
            .iter()
            .zip(&flip)
            .map(|(g, &f)| if f { g.theta().plus_half_pi() } else { g.theta() })
            .collect();
        let d = c.with_angles(&shifted).unwrap();
        let lhs = xbasis_probability(&simulate_statevector(&c).unwrap(), &OutcomeString::from_bits(s)).unwrap();
        let rhs = xbasis_probability(&simulate_statevector(&d).unwrap(), &OutcomeString::zeros(n)).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn pfaffian_identities(seed in any::<u64>(), half in 0usize..=8) {
        let mut r = rng(seed);
        let n = 2 * half;
        let a = random_skew(&mut r, n);
        let pf = pfaffian(&a);
        let d = det(a.to_dense());
        prop_assert!((pf * pf - d).norm() <= 1e-8 * d.norm().max(1e-300));
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        // Sign of the permutation from its cycle count.
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for i in 0..n {
            if !seen[i] {
                cycles += 1;
                let mut x = i;
                while !seen[x] {
                    seen[x] = true;
                    x = perm[x];
                }
            }
        }
        let sign = if (n - cycles) % 2 == 0 { 1.0 } else { -1.0 };
        let pp = pfaffian(&a.permuted(&perm));
        prop_assert!((pp - pf * sign).norm() <= 1e-9 * pf.norm().max(1e-300));
        let odd = random_skew(&mut r, n + 1);
        prop_assert_eq!(pfaffian(&odd), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn chain_rule_matches_joint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (rows, cols) = [(2, 2), (2, 3), (3, 3), (1, 5)][r.gen_range(0..4)];
        let (c, e) = random_planar(&mut r, rows, cols, 0.85).unwrap();
        let p = PlanarIqp::new(c.clone(), e).unwrap();
        let n = c.num_qubits();
        let s = OutcomeString::from_index(r.gen_range(0..1u64 << n), n);
        let want = joint_probability(&c, &s).unwrap();
        prop_assert!((p.chain_probability(&s).unwrap() - want).abs() < 1e-8);
        prop_assert!((p.probability(&s).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn merged_graphs_of_bfs_prefixes_are_planar(seed in any::<u64>(), rows in 1usize..=5, cols in 1usize..=5) {
        let mut r = rng(seed);
        let (c, e) = if r.gen_bool(0.5) {
            grid_with(rows, cols, |_| random_angle(&mut r)).unwrap()
        } else {
            triangulated_grid(rows, cols, |_| Angle::pi_fraction(1, 8).unwrap()).unwrap()
        };
        let p = PlanarIqp::new(c.clone(), e.clone()).unwrap();
        for order in p.measurement_order() {
            for k in 1..=order.len() {
                let s_m: Vec<bool> = (0..k).map(|_| r.gen()).collect();
                let merged = merge_for_marginal(&c, &order[..k], &s_m, Some(&e)).unwrap();
                prop_assert!(merged.embedding.unwrap().is_planar());
            }
        }
    }

    #[test]
    fn multiplicative_error_laws(seed in any::<u64>(), len in 1usize..=16) {
        let mut r = rng(seed);
        let p: Vec<f64> = (0..len).map(|_| if r.gen_bool(0.2) { 0.0 } else { r.gen() }).collect();
        let q: Vec<f64> = p.iter().map(|&x| if r.gen_bool(0.5) { x } else { x * r.gen_range(0.5..2.0) }).collect();
        let a = multiplicative_error(&p, &q).unwrap();
        let b = multiplicative_error(&q, &p).unwrap();
        prop_assert_eq!(a.c, b.c);
        prop_assert_eq!(multiplicative_error(&p, &p).unwrap().c, 1.0);
        let same = p.iter().zip(&q).all(|(x, y)| x == y);
        prop_assert_eq!(a.c == 1.0, same);
    }

    #[test]
    fn budget_composition(n in 1usize..=100) {
        let f = per_step_error_compose(&vec![epsilon_budget(n); n]).unwrap();
        prop_assert!(f <= SQRT_2 + 1e-12);
        prop_assert!(epsilon_budget(n + 1) < epsilon_budget(n));
    }
}
