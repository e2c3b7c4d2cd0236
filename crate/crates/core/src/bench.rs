//! Deterministic instance families with a controlled sparsity parameter,
//! and a timing harness that emits one CSV row per run.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;

use crate::cnf_projections::{projection_support, CnfFormula};
use crate::oracles::brute_subset_sums;
use crate::rng::substream;
use crate::subset_sum::{solve_adaptive, AdaptiveConfig, Decision, SubsetSumInstance};
use crate::z2_hash::{linear_sat_count, Gf2Mat, Gf2Vec, LinearSatInstance};
use crate::{Error, Result};

/// `k` generic weights (a random superincreasing sequence, so all `2^k`
/// sums differ) followed by `k` zero weights: `n = 2k` and `S = 2^k`. The
/// target is the sum of a random subset of the generic weights.
pub fn subset_sum_family(k: usize, seed: u64) -> SubsetSumInstance {
    let mut rng = substream(seed, "bench-subset-sum", k as u64);
    let mut weights = Vec::with_capacity(2 * k);
    let mut total = 0u64;
    for _ in 0..k {
        let w = total + rng.gen_range(1..=1000);
        total += w;
        weights.push(w);
    }
    let target = weights.iter().filter(|_| rng.gen_bool(0.5)).sum();
    weights.extend(std::iter::repeat_n(0, k));
    SubsetSumInstance::new(weights, target)
}

/// `n` rows spanning a random rank-`r` subspace of `Z_2^m` (the first `r`
/// rows form a basis, the rest are random combinations of it), unit
/// weights, `t = n`, and `b` a random vector in the row space.
pub fn linear_sat_family(n: usize, m: usize, r: usize, seed: u64) -> Result<LinearSatInstance> {
    if r > n.min(m) {
        return Err(Error::InvalidArgument(format!(
            "rank {r} impossible for a {n} × {m} matrix"
        )));
    }
    let mut rng = substream(seed, "bench-linsat", (n * 4096 + r) as u64);
    // Pivot in column i of basis row i guarantees independence.
    let basis: Vec<Gf2Vec> = (0..r)
        .map(|i| {
            let mut v = Gf2Vec::from_bools(&(0..m).map(|j| j > i && rng.gen()).collect::<Vec<_>>());
            v.set(i, true);
            v
        })
        .collect();
    let combo = |rng: &mut crate::rng::StreamRng| {
        basis
            .iter()
            .filter(|_| rng.gen())
            .fold(Gf2Vec::zeros(m), |acc, v| acc.xor(v))
    };
    let mut rows = basis.clone();
    while rows.len() < n {
        rows.push(combo(&mut rng));
    }
    let b = combo(&mut rng);
    LinearSatInstance::new(Gf2Mat::new(rows, m)?, b, vec![1; n], n as u64)
}

/// `j` unit clauses `(x_1), …, (x_j)` padded to `m` clauses with copies of
/// `(x_1)`, over `n ≥ j` variables: exactly `2^j` projections.
pub fn cnf_family(n: usize, m: usize, j: usize) -> Result<CnfFormula> {
    if j > n || j > m || (j == 0 && m > 0) {
        return Err(Error::InvalidArgument(format!(
            "cannot place {j} distinct unit clauses among {m} clauses over {n} variables"
        )));
    }
    let clauses: Vec<Vec<i32>> = (0..m)
        .map(|i| vec![if i < j { i as i32 + 1 } else { 1 }])
        .collect();
    CnfFormula::from_literals(n, &clauses)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    SubsetSum,
    LinSat,
    Cnf,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subsetsum" => Ok(Suite::SubsetSum),
            "linsat" => Ok(Suite::LinSat),
            "cnf" => Ok(Suite::Cnf),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown bench suite {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub suite: Suite,
    /// Sparsity exponents: `log₂ S` for subset sum, the rank for Linear Sat,
    /// `log₂ P` for CNF.
    pub exponents: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

impl BenchSpec {
    pub fn default_for(suite: Suite, seed: u64) -> Self {
        Self {
            suite,
            exponents: vec![8, 10, 12],
            reps: 3,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: &'static str,
    /// `S`, `2^rank` or `P`.
    pub sparsity_name: &'static str,
    pub sparsity: u64,
    pub rep: usize,
    pub seconds: f64,
    pub answer: String,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "instance,algorithm,sparsity_name,sparsity,rep,seconds,answer";
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{:.6},{}",
            self.instance, self.algorithm, self.sparsity_name, self.sparsity, self.rep, self.seconds, self.answer
        )
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64()))
}

/// Runs every family member `reps` times, in a fixed order.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    let suites: &[Suite] = match spec.suite {
        Suite::All => &[Suite::SubsetSum, Suite::LinSat, Suite::Cnf],
        ref s => std::slice::from_ref(s),
    };
    for &suite in suites {
        for &e in &spec.exponents {
            for rep in 0..spec.reps {
                rows.push(bench_one(suite, e, rep, spec.seed)?);
            }
        }
    }
    Ok(rows)
}

fn bench_one(suite: Suite, e: usize, rep: usize, seed: u64) -> Result<BenchRow> {
    match suite {
        Suite::SubsetSum => {
            let inst = subset_sum_family(e, seed);
            let s = brute_subset_sums(&inst.weights()[..e])?.distinct as u64;
            let mut rng = substream(seed, "bench-adaptive", rep as u64);
            let (out, seconds) = timed(|| solve_adaptive(&inst, &AdaptiveConfig::default(), &mut rng))?;
            Ok(BenchRow {
                instance: format!("subsetsum-k{e}"),
                algorithm: "solve_adaptive",
                sparsity_name: "S",
                sparsity: s,
                rep,
                seconds,
                answer: match out.decision {
                    Decision::Yes(_) => "YES".into(),
                    Decision::No => "NO".into(),
                },
            })
        }
        Suite::LinSat => {
            let n = 2 * e + 4;
            let inst = linear_sat_family(n, e + 4, e, seed)?;
            let mut rng = substream(seed, "bench-linsat-hash", rep as u64);
            let (count, seconds) = timed(|| linear_sat_count(&inst, &mut rng))?;
            Ok(BenchRow {
                instance: format!("linsat-r{e}"),
                algorithm: "linear_sat_count",
                sparsity_name: "2^rank",
                sparsity: 1 << inst.rank(),
                rep,
                seconds,
                answer: count.to_string(),
            })
        }
        Suite::Cnf => {
            let phi = cnf_family(e + 2, e + 2, e)?;
            let (support, seconds) = timed(|| Ok(projection_support(&phi)))?;
            Ok(BenchRow {
                instance: format!("cnf-p{e}"),
                algorithm: "projection_support",
                sparsity_name: "P",
                sparsity: support.len() as u64,
                rep,
                seconds,
                answer: support.count(crate::family::full_mask(phi.num_clauses())).to_string(),
            })
        }
        Suite::All => unreachable!("expanded by run_bench"),
    }
}

/// Median of the `seconds` column for each sparsity value, increasing.
pub fn medians(rows: &[BenchRow]) -> Vec<(u64, f64)> {
    let mut keys: Vec<u64> = rows.iter().map(|r| r.sparsity).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|k| {
            let mut t: Vec<f64> = rows.iter().filter(|r| r.sparsity == k).map(|r| r.seconds).collect();
            t.sort_by(f64::total_cmp);
            (k, t[t.len() / 2])
        })
        .collect()
}
