//! Reduced-scale run of the acceptance checks, for `iqpsim selftest`.
//!
//! Each check compares an engine against an independent reference (the
//! statevector oracle, brute-force sums, the defining expansion of the
//! Pfaffian). [`Kernels`] lets a caller swap in a faulty Pfaffian to see
//! that the suite notices.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::angle::Angle;
use crate::approx::{epsilon_budget, gate_norm_error, per_step_error_compose};
use crate::circuit::{mbiqp_to_iqp_outcome, GateTerm, IqpCircuit, OutcomeString};
use crate::error::Result;
use crate::gf2::{solve, GF2Matrix};
use crate::ising::{joint_probability, partition_function_bruteforce, probability_table, IsingInstance};
use crate::oracle::{mbiqp_distribution, simulate_statevector, xbasis_marginal, xbasis_table};
use crate::planar::lattice::{grid, grid_with};
use crate::planar::pfaffian::{pfaffian, SkewMatrix};
use crate::planar::sparse_pfaffian::{sparse_pfaffian, SparseSkew};
use crate::planar::{marginal_probability, planar_partition_function, PlanarIqp};
use crate::random;
use crate::sparse::{classify, renormalized_angles, sparse_probability, sparse_samples, SparseKind};

/// The Pfaffian kernels under test.
#[derive(Clone, Copy)]
pub struct Kernels {
    pub dense: fn(&SkewMatrix) -> Complex64,
    pub sparse: fn(SparseSkew) -> Complex64,
}

fn sparse_value(m: SparseSkew) -> Complex64 {
    sparse_pfaffian(m).value()
}

impl Default for Kernels {
    fn default() -> Self {
        Kernels {
            dense: pfaffian,
            sparse: sparse_value,
        }
    }
}

impl Kernels {
    /// Both kernels with their sign flipped.
    pub fn flipped_pfaffian_sign() -> Self {
        Kernels {
            dense: |a| -pfaffian(a),
            sparse: |m| -sparse_pfaffian(m).value(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} ({})", self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run() -> Report {
    run_with(&Kernels::default())
}

pub fn run_with(kernels: &Kernels) -> Report {
    type Check = fn(&Kernels) -> Result<(bool, String)>;
    let checks: [(&'static str, Check); 10] = [
        ("ising-mapping", |_| ising_mapping()),
        ("mbiqp", |_| mbiqp()),
        ("sparse", |_| sparse()),
        ("ifrb-example", |_| ifrb3()),
        ("parity", |_| parity()),
        ("pfaffian", pfaffian_check),
        ("planar-partition", |_| planar_partition()),
        ("marginals", |_| marginals()),
        ("sampler", |_| sampler()),
        ("error-budget", |_| error_budget()),
    ];
    let checks = checks
        .into_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let (passed, detail) = match f(kernels) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                name,
                passed,
                detail: format!("{detail}; {:.2}s", t.elapsed().as_secs_f64()),
            }
        })
        .collect();
    Report { checks }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5e1f_7e57 ^ tag)
}

fn ising_mapping() -> Result<(bool, String)> {
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let n = rng.gen_range(1..=8);
        let gates = rng.gen_range(0..=3 * n);
        let c = random::random_circuit(&mut rng, n, gates);
        let table = xbasis_table(&simulate_statevector(&c)?);
        for (i, &p) in table.iter().enumerate() {
            let z = joint_probability(&c, &OutcomeString::from_index(i as u64, n))?;
            worst = worst.max((z - p).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max diff {worst:.1e}")))
}

fn mbiqp() -> Result<(bool, String)> {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let gates = rng.gen_range(0..=4);
        let c = random::random_circuit(&mut rng, n, gates);
        let g = c.to_graph();
        let nu = g.num_ub();
        let dist = mbiqp_distribution(&g, 20)?;
        for (idx, &p) in dist.iter().enumerate() {
            let mv = OutcomeString::from_index(idx as u64 & ((1 << n) - 1), n);
            let mu = OutcomeString::from_index((idx >> n) as u64, nu);
            let s = mbiqp_to_iqp_outcome(&mv, &mu, &g)?;
            let want = joint_probability(&c, &s)? * 0.5f64.powi(nu as i32);
            worst = worst.max((p - want).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max diff {worst:.1e}")))
}

fn chi_square_p(counts: &[u64], probs: &[f64], total: u64) -> f64 {
    let mut stat = 0.0;
    let mut bins = 0usize;
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (&o, &p) in counts.iter().zip(probs) {
        let e = p * total as f64;
        if p <= 1e-15 {
            if o > 0 {
                return 0.0;
            }
            continue;
        }
        if e < 5.0 {
            pool_obs += o as f64;
            pool_exp += e;
            continue;
        }
        stat += (o as f64 - e).powi(2) / e;
        bins += 1;
    }
    if pool_exp > 0.0 {
        stat += (pool_obs - pool_exp).powi(2) / pool_exp;
        bins += 1;
    }
    if bins < 2 {
        return 1.0;
    }
    let dist = ChiSquared::new((bins - 1) as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

fn sparse() -> Result<(bool, String)> {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let n = rng.gen_range(1..=7);
        let gates = rng.gen_range(1..=n);
        let c = random::random_sparse_circuit(&mut rng, n, gates);
        let table = xbasis_table(&simulate_statevector(&c)?);
        for (i, &p) in table.iter().enumerate() {
            let q = sparse_probability(&c, &OutcomeString::from_index(i as u64, n))?;
            worst = worst.max((q - p).abs());
        }
    }
    let c = random::random_sparse_circuit(&mut rng, 5, 5);
    let probs = probability_table(&c)?;
    let draws = 20_000u64;
    let mut counts = vec![0u64; 1 << 5];
    for s in sparse_samples(&c, draws as usize, 11)? {
        counts[s.to_index() as usize] += 1;
    }
    let p = chi_square_p(&counts, probs.probs(), draws);
    Ok((
        worst <= 1e-10 && p >= 1e-3,
        format!("max diff {worst:.1e}, chi-square p {p:.3}"),
    ))
}

/// Gates `Z1Z2`, `Z2`, `Z1Z2Z3`.
fn ifrb3_circuit(angles: [Angle; 3]) -> Result<IqpCircuit> {
    IqpCircuit::new(
        3,
        vec![
            GateTerm::new(vec![0, 1], angles[0]),
            GateTerm::new(vec![1], angles[1]),
            GateTerm::new(vec![0, 1, 2], angles[2]),
        ],
    )
}

fn ifrb3() -> Result<(bool, String)> {
    let angles = [0.3, 0.7, 1.9].map(Angle::from_radians);
    let c = ifrb3_circuit(angles)?;
    let kind = classify(&c).kind;
    let r = GF2Matrix::incidence(&c.to_graph());
    let sol = solve(&r, &[false, false, true])?;
    let s: OutcomeString = "001".parse()?;
    let shifted = renormalized_angles(&c, &s)?;
    let want = [angles[0].plus_half_pi(), angles[1], angles[2].plus_half_pi()];
    let ok = kind == SparseKind::Ifrb && sol == [true, false, true] && shifted == want;
    Ok((ok, format!("{kind:?}, c = {sol:?}")))
}

fn parity() -> Result<(bool, String)> {
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..15 {
        let n = rng.gen_range(2..=8);
        let extra = rng.gen_range(0..=n);
        let c = random::random_connected_two_body(&mut rng, n, extra);
        let table = xbasis_table(&simulate_statevector(&c)?);
        for (i, &p) in table.iter().enumerate() {
            if i.count_ones() % 2 == 1 {
                worst = worst.max(p);
            }
        }
    }
    Ok((worst <= 1e-12, format!("max odd-parity probability {worst:.1e}")))
}

/// `Pf(A) = Σ_{j>0} (-1)^{j+1} a_{0j} Pf(A with rows/cols 0, j removed)`.
pub(crate) fn pfaffian_by_expansion(a: &SkewMatrix) -> Complex64 {
    fn rec(a: &SkewMatrix, idx: &[usize]) -> Complex64 {
        if idx.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for k in 1..idx.len() {
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[k]).collect();
            let term = a.get(idx[0], idx[k]) * rec(a, &rest);
            if k % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    if a.dim() % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    rec(a, &(0..a.dim()).collect::<Vec<_>>())
}

/// Determinant by LU with partial pivoting.
pub(crate) fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .expect("non-empty range");
        if m[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    det
}

fn to_sparse(a: &SkewMatrix) -> SparseSkew {
    let mut m = SparseSkew::new(a.dim());
    for i in 0..a.dim() {
        for j in i + 1..a.dim() {
            let v = a.get(i, j);
            if v != Complex64::new(0.0, 0.0) {
                m.add(i, j, v);
            }
        }
    }
    m
}

fn pfaffian_check(k: &Kernels) -> Result<(bool, String)> {
    let mut rng = rng(6);
    let mut sign_err = 0.0f64;
    for _ in 0..40 {
        let n = 2 * rng.gen_range(1..=4);
        let a = random::random_skew(&mut rng, n);
        let want = pfaffian_by_expansion(&a);
        for got in [(k.dense)(&a), (k.sparse)(to_sparse(&a))] {
            sign_err = sign_err.max((got - want).norm() / want.norm().max(1e-300));
        }
    }
    let mut det_err = 0.0f64;
    for _ in 0..40 {
        let n = 2 * rng.gen_range(1..=10);
        let a = random::random_skew(&mut rng, n);
        let pf = (k.dense)(&a);
        let det = determinant(a.to_dense());
        det_err = det_err.max((pf * pf - det).norm() / det.norm().max(1e-300));
    }
    let odd = random::random_skew(&mut rng, 5);
    let odd_zero = (k.dense)(&odd) == Complex64::new(0.0, 0.0);
    Ok((
        sign_err <= 1e-10 && det_err <= 1e-8 && odd_zero,
        format!("expansion {sign_err:.1e}, Pf^2 vs det {det_err:.1e}"),
    ))
}

fn planar_partition() -> Result<(bool, String)> {
    let mut rng = rng(7);
    let mut worst = 0.0f64;
    for rows in 1..=3 {
        for cols in 1..=3 {
            for _ in 0..4 {
                let (c, emb) = grid_with(rows, cols, |_| {
                    if rng.gen_bool(0.2) {
                        Angle::half_pi()
                    } else {
                        random::random_angle(&mut rng)
                    }
                })?;
                let n = rows * cols;
                let s = OutcomeString::from_index(rng.gen_range(0..1u64 << n), n);
                let z = planar_partition_function(&c, &s, &emb)?.value();
                let want = partition_function_bruteforce(&IsingInstance::from_circuit(&c, &s)?)?.value();
                worst = worst.max((z - want).norm() / want.norm().max(1.0));
            }
        }
    }
    Ok((worst <= 1e-8, format!("max relative diff {worst:.1e}")))
}

fn marginals() -> Result<(bool, String)> {
    let mut rng = rng(8);
    let shapes = [(1, 2), (1, 3), (2, 2), (1, 5), (2, 3)];
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let (rows, cols) = shapes[rng.gen_range(0..shapes.len())];
        let (c, emb) = random::random_planar(&mut rng, rows, cols, 0.8)?;
        let n = c.num_qubits();
        let state = simulate_statevector(&c)?;
        let size = rng.gen_range(1..=n);
        let start = rng.gen_range(0..n);
        let m = random::random_connected_set(&mut rng, n, emb.edges(), start, size);
        let s_m: Vec<bool> = m.iter().map(|_| rng.gen()).collect();
        let got = marginal_probability(&c, &emb, &m, &s_m)?;
        let want = xbasis_marginal(&state, &m, &s_m)?;
        worst = worst.max((got - want).abs());
    }
    Ok((worst <= 1e-8, format!("max diff {worst:.1e}")))
}

fn sampler() -> Result<(bool, String)> {
    let (c, emb) = grid(2, 3, Angle::pi_fraction(1, 8)?)?;
    let table = probability_table(&c)?;
    let p = PlanarIqp::new(c, emb)?;
    let draws = 20_000;
    let mut counts = vec![0u64; 1 << 6];
    for s in p.samples(draws, 3)? {
        counts[s.to_index() as usize] += 1;
    }
    let tv = 0.5
        * counts
            .iter()
            .zip(table.probs())
            .map(|(&k, &q)| (k as f64 / draws as f64 - q).abs())
            .sum::<f64>();
    let (big, emb) = grid(8, 8, Angle::pi_fraction(1, 8)?)?;
    let t = Instant::now();
    PlanarIqp::new(big, emb)?.sample(1)?;
    let secs = t.elapsed().as_secs_f64();
    Ok((
        tv < 0.03 && secs < 10.0,
        format!("TV {tv:.4}, 8x8 sample {secs:.2}s"),
    ))
}

fn error_budget() -> Result<(bool, String)> {
    let e1 = epsilon_budget(1);
    let want = (SQRT_2 - 1.0) / (SQRT_2 + 1.0);
    let mut ok = (e1 - want).abs() <= 1e-12;
    for n in 1..=50 {
        ok &= per_step_error_compose(&vec![epsilon_budget(n); n])? <= SQRT_2 + 1e-12;
    }
    ok &= gate_norm_error(std::f64::consts::PI) == 4.0;
    Ok((ok, format!("eps(1) = {e1:.12}")))
}
