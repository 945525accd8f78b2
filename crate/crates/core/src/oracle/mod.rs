//! Actual dimensions of linear systems by rank computations at random points
//! over large prime fields.
//!
//! Random points are general with overwhelming probability and special
//! positions can only raise the dimension, so the minimum over trials is
//! reported.

pub mod field;
pub mod linalg;
pub mod monomials;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimensions::linear_virtual_dimension;
use crate::error::{Error, Result};
use crate::system::{LinearSystem, MultiIndex};
use field::{random_prime, Field};
use linalg::Matrix;
use monomials::{exponents, exponents_up_to, MonomialBasis};

pub const DEFAULT_SEED: u64 = 0x6c69_6e64_696d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OracleConfig {
    pub prime_bits: u32,
    pub trials: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            prime_bits: 62,
            trials: 3,
            seed: DEFAULT_SEED,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        OracleConfig {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self, d: u32) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Precondition("at least one trial is needed".into()));
        }
        if !(3..=62).contains(&self.prime_bits) {
            return Err(Error::Precondition(format!(
                "prime size must be 3..=62 bits, got {}",
                self.prime_bits
            )));
        }
        // every prime drawn is at least 2^{bits-1}
        if 1u64 << (self.prime_bits - 1) <= d as u64 {
            return Err(Error::PrimeTooSmall {
                degree: d,
                bits: self.prime_bits,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Minimum over all trials of `cols - rank - 1`.
    pub dim: i64,
    pub rank: usize,
    pub per_trial: Vec<i64>,
    pub primes: Vec<u64>,
    /// All trials of the final batch gave the same dimension.
    pub agreed: bool,
    /// The first batch disagreed and a second one was run.
    #[serde(default)]
    pub retried: bool,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Interpolation = 0,
    Apolarity = 1,
    Probe = 2,
}

fn trial_rng(seed: u64, route: Route, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((route as u64) << 32) | trial as u64);
    rng
}

/// `s` distinct points of the affine chart `x_0 = 1`, Montgomery form.
fn random_points(f: &Field, n: usize, s: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let mut pts: Vec<Vec<u64>> = Vec::with_capacity(s);
    while pts.len() < s {
        let p: Vec<u64> = (0..n).map(|_| f.random(rng)).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// `binom(a, b) mod p` for `a, b <= top`, Montgomery form.
fn binomial_table(f: &Field, top: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; top + 1]; top + 1];
    for a in 0..=top {
        t[a][0] = f.one();
        for b in 1..=a {
            t[a][b] = f.add(t[a - 1][b - 1], if b < a { t[a - 1][b] } else { 0 });
        }
    }
    t
}

fn power_table(f: &Field, x: u64, top: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(top + 1);
    let mut acc = f.one();
    for _ in 0..=top {
        out.push(acc);
        acc = f.mul(acc, x);
    }
    out
}

/// One row per Hasse derivative `D^beta`, `|beta| < m_i`, at each point; one
/// column per degree-`d` monomial.
fn interpolation_matrix(
    sys: &LinearSystem,
    f: &Field,
    basis: &MonomialBasis,
    points: &[Vec<u64>],
) -> Matrix {
    let n = sys.n() as usize;
    let d = sys.d() as usize;
    let binom = binomial_table(f, d);
    let mut row_specs = Vec::new();
    for (i, &m) in sys.mults().iter().enumerate() {
        // derivatives of order above d vanish identically
        let top = (m as usize - 1).min(d) as u32;
        for beta in exponents_up_to(n, top) {
            row_specs.push((i, beta));
        }
    }
    let powers: Vec<Vec<Vec<u64>>> = points
        .iter()
        .map(|p| p.iter().map(|&x| power_table(f, x, d)).collect())
        .collect();
    let mut mat = Matrix::zeros(row_specs.len(), basis.len());
    for (r, (i, beta)) in row_specs.iter().enumerate() {
        let row = mat.row_mut(r);
        for (c, gamma) in basis.monomials.iter().enumerate() {
            let mut v = f.one();
            for j in 0..n {
                let (g, b) = (gamma[j + 1] as usize, beta[j] as usize);
                if b > g {
                    v = 0;
                    break;
                }
                v = f.mul(v, f.mul(binom[g][b], powers[*i][j][g - b]));
            }
            row[c] = v;
        }
    }
    mat
}

/// One row per generator `l_i^{d+1-m_i} x^beta`, `|beta| = m_i - 1`.
fn apolarity_matrix(
    sys: &LinearSystem,
    f: &Field,
    basis: &MonomialBasis,
    rng: &mut ChaCha8Rng,
) -> Matrix {
    let vars = sys.n() as usize + 1;
    let d = sys.d() as usize;
    let mut fact = vec![f.one(); d + 1];
    for i in 1..=d {
        fact[i] = f.mul(fact[i - 1], f.to_mont(i as u64));
    }
    let inv_fact: Vec<u64> = fact.iter().map(|&x| f.inv(x)).collect();
    let rows: usize = sys
        .mults()
        .iter()
        .map(|&m| exponents(vars, m - 1).len())
        .sum();
    let mut mat = Matrix::zeros(rows, basis.len());
    let mut r = 0;
    for &m in sys.mults() {
        let e = sys.d() + 1 - m;
        let form: Vec<u64> = (0..vars).map(|_| f.random(rng)).collect();
        let powers: Vec<Vec<u64>> = form.iter().map(|&a| power_table(f, a, d)).collect();
        // l^e = sum_alpha e!/alpha! a^alpha x^alpha
        let expansion: Vec<(Vec<u32>, u64)> = exponents(vars, e)
            .into_iter()
            .map(|alpha| {
                let mut c = fact[e as usize];
                for (j, &k) in alpha.iter().enumerate() {
                    c = f.mul(c, f.mul(inv_fact[k as usize], powers[j][k as usize]));
                }
                (alpha, c)
            })
            .collect();
        let mut gamma = vec![0u32; vars];
        for beta in exponents(vars, m - 1) {
            let row = mat.row_mut(r);
            for (alpha, c) in &expansion {
                for j in 0..vars {
                    gamma[j] = alpha[j] + beta[j];
                }
                let col = basis.position(&gamma).expect("degree-d monomial");
                row[col] = f.add(row[col], *c);
            }
            r += 1;
        }
    }
    mat
}

struct TrialOutcome {
    prime: u64,
    rank: usize,
    rows: usize,
}

fn run(sys: &LinearSystem, cfg: &OracleConfig, route: Route) -> Result<OracleResult> {
    cfg.validate(sys.d())?;
    if route == Route::Apolarity {
        if let Some(&m) = sys.mults().iter().find(|&&m| m > sys.d()) {
            return Err(Error::Precondition(format!(
                "apolarity needs every multiplicity at most d = {}, got {m}",
                sys.d()
            )));
        }
    }
    let basis = MonomialBasis::new(sys.n() as usize + 1, sys.d());
    let batch = |trials: std::ops::Range<u32>| -> Vec<TrialOutcome> {
        trials
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(cfg.seed, route, t);
                let prime = random_prime(cfg.prime_bits, &mut rng);
                let f = Field::new(prime);
                let mat = match route {
                    Route::Apolarity => apolarity_matrix(sys, &f, &basis, &mut rng),
                    _ => {
                        let pts = random_points(&f, sys.n() as usize, sys.s(), &mut rng);
                        interpolation_matrix(sys, &f, &basis, &pts)
                    }
                };
                let rows = mat.rows;
                TrialOutcome {
                    prime,
                    rank: mat.rank(&f),
                    rows,
                }
            })
            .collect()
    };
    let agree = |b: &[TrialOutcome]| b.windows(2).all(|w| w[0].rank == w[1].rank);
    let mut outcomes = batch(0..cfg.trials);
    let mut agreed = agree(&outcomes);
    let retried = !agreed;
    if retried {
        let second = batch(cfg.trials..2 * cfg.trials);
        agreed = agree(&second);
        outcomes.extend(second);
    }
    let cols = basis.len();
    let best = outcomes
        .iter()
        .max_by_key(|o| o.rank)
        .expect("at least one trial");
    Ok(OracleResult {
        dim: cols as i64 - best.rank as i64 - 1,
        rank: best.rank,
        per_trial: outcomes
            .iter()
            .map(|o| cols as i64 - o.rank as i64 - 1)
            .collect(),
        primes: outcomes.iter().map(|o| o.prime).collect(),
        agreed,
        retried,
        rows: best.rows,
        cols,
    })
}

/// Rank of the fat-point interpolation matrix at random points.
pub fn interpolation_dimension(sys: &LinearSystem, cfg: &OracleConfig) -> Result<OracleResult> {
    run(sys, cfg, Route::Interpolation)
}

/// Codimension, in degree `d`, of the ideal generated by the powers
/// `l_i^{d+1-m_i}` of random linear forms.
pub fn apolarity_dimension(sys: &LinearSystem, cfg: &OracleConfig) -> Result<OracleResult> {
    run(sys, cfg, Route::Apolarity)
}

fn poly_mul(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// Vanishing order of a general member of the system along the span of the
/// points in `index`, measured on a random line through a random point of
/// the span. Minimum over trials; an empty index measures at a random point.
pub fn cycle_multiplicity_probe(
    sys: &LinearSystem,
    index: &MultiIndex,
    cfg: &OracleConfig,
) -> Result<u32> {
    cfg.validate(sys.d())?;
    if let Some(&bad) = index.indices().iter().find(|&&i| i >= sys.s()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            points: sys.s(),
        });
    }
    let vars = sys.n() as usize + 1;
    let d = sys.d() as usize;
    let basis = MonomialBasis::new(vars, sys.d());
    let orders: Vec<Option<u32>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, Route::Probe, t);
            let f = Field::new(random_prime(cfg.prime_bits, &mut rng));
            let pts = random_points(&f, sys.n() as usize, sys.s(), &mut rng);
            let kernel = interpolation_matrix(sys, &f, &basis, &pts).kernel(&f);
            if kernel.is_empty() {
                return None;
            }
            let mut member = vec![0u64; basis.len()];
            for v in &kernel {
                let c = f.random(&mut rng);
                for (x, &y) in member.iter_mut().zip(v) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
            let mut q = vec![0u64; vars];
            if index.is_empty() {
                q = (0..vars).map(|_| f.random(&mut rng)).collect();
            }
            for &i in index.indices() {
                let lambda = f.random(&mut rng);
                q[0] = f.add(q[0], lambda);
                for j in 1..vars {
                    q[j] = f.add(q[j], f.mul(lambda, pts[i][j - 1]));
                }
            }
            let dir: Vec<u64> = (0..vars).map(|_| f.random(&mut rng)).collect();
            // (q_j + t v_j)^e for every variable and exponent
            let lin: Vec<Vec<Vec<u64>>> = (0..vars)
                .map(|j| {
                    let mut pw = vec![vec![f.one()]];
                    for e in 0..d {
                        let next = poly_mul(&f, &pw[e], &[q[j], dir[j]]);
                        pw.push(next);
                    }
                    pw
                })
                .collect();
            let mut restricted = vec![0u64; d + 1];
            for (c, gamma) in basis.monomials.iter().enumerate() {
                if member[c] == 0 {
                    continue;
                }
                let mut term = vec![member[c]];
                for j in 0..vars {
                    term = poly_mul(&f, &term, &lin[j][gamma[j] as usize]);
                }
                for (x, y) in restricted.iter_mut().zip(term) {
                    *x = f.add(*x, y);
                }
            }
            Some(restricted.iter().position(|&x| x != 0).unwrap_or(d + 1) as u32)
        })
        .collect();
    orders
        .into_iter()
        .flatten()
        .min()
        .ok_or_else(|| Error::EmptySystem {
            euler: linear_virtual_dimension(sys) + 1,
        })
}
