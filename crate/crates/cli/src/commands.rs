//! One runner per subcommand. Each returns a report and, when `--oracle`
//! was requested and the brute-force check disagreed, both answers.

use std::fmt;

use anyhow::Result;
use homhash::budget::StepBudget;
use homhash::cnf_projections::{count_sat_with, projection_support, CountRoute};
use homhash::formats::{ParsedCnf, ParsedSetFamily};
use homhash::oracles::{
    brute_cnf, brute_cover_partition, brute_linear_sat, brute_subset_sums, CoverMode,
    MAX_CNF_VARS, MAX_FAMILY_SIZE, MAX_LINEAR_SAT_N, MAX_SUBSET_SUM_N,
};
use homhash::rng::stream;
use homhash::set_cover::{set_cover_decide, SetCoverInstance};
use homhash::subset_sum::{
    count_derandomized_with, solve_adaptive, AdaptiveConfig, Decision, DerandomizedConfig,
    ResidueEngine, SubsetSumInstance,
};
use homhash::z2_hash::{
    linear_sat_count_amplified, linear_sat_high_rank, linear_sat_winwin,
    set_partition_count_expspace, set_partition_polyspace_amplified, LinearSatInstance,
};
use num_bigint::BigUint;

use crate::report::{Answer, Problem, RunReport};

/// Flags shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Settings {
    pub seed: u64,
    pub algo: Option<String>,
    pub oracle: bool,
    pub repeats: usize,
    pub budget: u64,
}

impl Settings {
    /// The `--algo` value if it is one of `allowed`, else the first entry.
    fn algo<'a>(&self, allowed: &[&'a str]) -> Result<&'a str> {
        match &self.algo {
            None => Ok(allowed[0]),
            Some(a) => allowed.iter().find(|&&x| x == a).copied().ok_or_else(|| {
                Usage(format!("unknown --algo {a:?}; expected one of {allowed:?}")).into()
            }),
        }
    }
}

/// An error caused by the invocation or the input file (exit status 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    /// `(algorithm answer, oracle answer)` on disagreement.
    pub mismatch: Option<(String, String)>,
}

impl Outcome {
    fn new(report: RunReport) -> Self {
        Self {
            report,
            mismatch: None,
        }
    }

    /// Records an oracle comparison; `None` means the oracle refused.
    fn check(&mut self, ours: String, oracle: Option<String>) {
        match oracle {
            Some(o) if o == ours => self.report.oracle_checked = true,
            Some(o) => self.mismatch = Some((ours, o)),
            None => {}
        }
    }
}

fn count(c: impl ToString) -> Answer {
    Answer::Count(c.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DecideOrCount {
    Decide,
    Count,
}

pub fn subset_sum(mode: DecideOrCount, inst: &SubsetSumInstance, s: &Settings) -> Result<Outcome> {
    let t = u128::from(inst.target());
    let oracle = (s.oracle && inst.n() <= MAX_SUBSET_SUM_N)
        .then(|| brute_subset_sums(inst.weights()))
        .transpose()?;
    match mode {
        DecideOrCount::Decide => {
            let algo = s.algo(&["adaptive", "adaptive-table"])?;
            let config = AdaptiveConfig {
                engine: engine(algo),
                step_limit: s.budget,
            };
            let mut rng = stream(s.seed, "cli-subsetsum-adaptive");
            let out = solve_adaptive(inst, &config, &mut rng)?;
            let yes = matches!(out.decision, Decision::Yes(_));
            let mut report = RunReport::new(Problem::SubsetSum, algo, Answer::Decision(yes.into()), s.seed);
            if let Decision::Yes(w) = &out.decision {
                report.witness = Some(w.clone());
            }
            report
                .param("n", inst.n())
                .param("support_guess", out.support_guess)
                .param("p", out.prime)
                .param("rounds", out.rounds)
                .param("steps", out.steps);
            let mut outcome = Outcome::new(report);
            if let Some(o) = &oracle {
                outcome.report.param("S", o.distinct);
                let truth = o.count(t) > 0;
                let witness_ok = match &out.decision {
                    Decision::Yes(w) => inst.verify_witness(w),
                    Decision::No => true,
                };
                let ours = if witness_ok { verdict(yes) } else { "invalid witness".into() };
                outcome.check(ours, Some(verdict(truth)));
            }
            Ok(outcome)
        }
        DecideOrCount::Count => {
            let algo = s.algo(&["derandomized", "derandomized-table"])?;
            let config = DerandomizedConfig {
                support_bound: None,
                engine: engine(algo),
                step_limit: s.budget,
            };
            let c = count_derandomized_with(inst, &config)?;
            let mut report = RunReport::new(Problem::SubsetSum, algo, count(&c), s.seed);
            report.param("n", inst.n());
            let mut outcome = Outcome::new(report);
            if let Some(o) = &oracle {
                outcome.report.param("S", o.distinct);
                outcome.check(c.to_string(), Some(o.count(t).to_string()));
            }
            Ok(outcome)
        }
    }
}

fn engine(algo: &str) -> ResidueEngine {
    if algo.ends_with("-table") {
        ResidueEngine::Table
    } else {
        ResidueEngine::Stream
    }
}

fn verdict(yes: bool) -> String {
    if yes { "YES" } else { "NO" }.to_owned()
}

pub fn linear_sat(mode: DecideOrCount, inst: &LinearSatInstance, s: &Settings) -> Result<Outcome> {
    let algo = s.algo(&["winwin", "hash", "highrank"])?;
    let mut rng = stream(s.seed, "cli-linsat");
    let rank = inst.rank();
    let (c, branch): (BigUint, &str) = match algo {
        "winwin" => {
            let out = linear_sat_winwin(inst, s.repeats, &mut rng)?;
            let branch = match out.branch {
                homhash::z2_hash::WinWinBranch::HighRank => "highrank",
                homhash::z2_hash::WinWinBranch::Hash => "hash",
            };
            (out.count, branch)
        }
        "hash" => (linear_sat_count_amplified(inst, s.repeats, &mut rng)?, "hash"),
        _ => (linear_sat_high_rank(inst)?, "highrank"),
    };
    let answer = match mode {
        DecideOrCount::Decide => Answer::Decision((c != BigUint::default()).into()),
        DecideOrCount::Count => count(&c),
    };
    let mut report = RunReport::new(Problem::LinSat, algo, answer, s.seed);
    report
        .param("n", inst.n())
        .param("m", inst.m())
        .param("rank", rank)
        .param("branch", branch)
        .param("repeats", s.repeats);
    let mut outcome = Outcome::new(report);
    if s.oracle && inst.n() <= MAX_LINEAR_SAT_N {
        let truth = brute_linear_sat(inst)?.count;
        let (ours, theirs) = match mode {
            DecideOrCount::Decide => (verdict(c != BigUint::default()), verdict(truth > 0)),
            DecideOrCount::Count => (c.to_string(), truth.to_string()),
        };
        outcome.check(ours, Some(theirs));
    }
    Ok(outcome)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SpaceMode {
    Poly,
    Exp,
}

pub fn set_partition(mode: SpaceMode, p: &ParsedSetFamily, s: &Settings) -> Result<Outcome> {
    let family = &p.family;
    let t = p.bound;
    let mut rng = stream(s.seed, "cli-setpart");
    let mut report = match mode {
        SpaceMode::Poly => {
            let c = set_partition_polyspace_amplified(family, t, s.repeats, &mut rng)?;
            let mut r = RunReport::new(Problem::SetPart, "polyspace", count(&c), s.seed);
            r.param("repeats", s.repeats);
            r
        }
        SpaceMode::Exp => {
            // Keep the smallest count over runs whose divisions were exact;
            // a collision-free run is exact and ends the search.
            let mut best: Option<BigUint> = None;
            let mut last = None;
            for _ in 0..s.repeats.max(1) {
                let run = set_partition_count_expspace(family, t, &mut rng)?;
                let bound = usize::try_from(t).unwrap_or(usize::MAX);
                if let Some(c) = run.at_most(bound) {
                    if best.as_ref().is_none_or(|b| c < *b) {
                        best = Some(c);
                    }
                }
                let done = run.collision_free && run.by_size.is_some();
                last = Some(run);
                if done {
                    break;
                }
            }
            let run = last.expect("at least one run");
            let c = best.ok_or_else(|| anyhow::anyhow!("every hashed run had an inexact division"))?;
            let mut r = RunReport::new(Problem::SetPart, "expspace", count(&c), s.seed);
            r.param("s", run.s)
                .param("rank", run.rank)
                .param("collision_free", run.collision_free);
            r
        }
    };
    report
        .param("universe", family.universe())
        .param("family_size", family.len())
        .param("t", t);
    let answer = match &report.answer {
        Answer::Count(c) => c.clone(),
        Answer::Decision(_) => unreachable!("set partition reports counts"),
    };
    let mut outcome = Outcome::new(report);
    if s.oracle && family.len() <= MAX_FAMILY_SIZE && family.universe() < 64 {
        let bound = usize::try_from(t).unwrap_or(usize::MAX);
        let truth = brute_cover_partition(family.universe(), family.sets(), bound, CoverMode::Partition)?;
        outcome.check(answer, Some(truth.to_string()));
    }
    Ok(outcome)
}

pub fn set_cover(p: &ParsedSetFamily, s: &Settings) -> Result<Outcome> {
    s.algo(&["dovetail"])?;
    let k = usize::try_from(p.bound).map_err(|_| Usage("k does not fit in usize".into()))?;
    let inst = SetCoverInstance::new(p.family.clone(), k).map_err(|e| Usage(e.to_string()))?;
    let mut budget = StepBudget::new(s.budget);
    let d = set_cover_decide(&inst, &mut budget)?;
    let mut report = RunReport::new(Problem::SetCover, "dovetail", Answer::Decision(d.yes.into()), s.seed);
    report
        .param("universe", p.family.universe())
        .param("family_size", p.family.len())
        .param("k", k)
        .param("count", d.count.to_string())
        .param("steps", budget.used());
    if let Some(u) = d.union_count {
        report.param("union_count", u);
    }
    if let Some(a) = d.alpha {
        report.param("alpha", a);
    }
    let mut outcome = Outcome::new(report);
    if s.oracle && p.family.len() <= MAX_FAMILY_SIZE && p.family.universe() < 64 {
        let truth = brute_cover_partition(p.family.universe(), p.family.sets(), k, CoverMode::Cover)?;
        outcome.check(d.count.to_string(), Some(truth.to_string()));
    }
    Ok(outcome)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CnfMode {
    Count,
    Projections,
}

pub fn cnf(mode: CnfMode, p: &ParsedCnf, s: &Settings) -> Result<Outcome> {
    let phi = &p.formula;
    let algo = s.algo(&["projections", "union"])?;
    let support = projection_support(phi);
    let c = match algo {
        "projections" => support.count(full(phi.num_clauses())),
        _ => count_sat_with(phi, CountRoute::UnionCircuit, &mut StepBudget::new(s.budget))?,
    };
    let mut report = RunReport::new(Problem::Cnf, algo, count(&c), s.seed);
    report
        .param("n", phi.num_vars())
        .param("m", phi.num_clauses())
        .param("P", support.len())
        .param("normalized_clauses", p.normalized);
    if mode == CnfMode::Projections {
        let list: Vec<serde_json::Value> = support
            .entries()
            .iter()
            .map(|(x, c)| {
                let bits: String = (0..phi.num_clauses())
                    .map(|i| if x >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                serde_json::json!({ "projection": bits, "count": c.to_string() })
            })
            .collect();
        report.param("projections", list);
    }
    let mut outcome = Outcome::new(report);
    if s.oracle && phi.num_vars() <= MAX_CNF_VARS {
        let truth = brute_cnf(phi)?;
        let ours = match mode {
            CnfMode::Count => c.to_string(),
            CnfMode::Projections => format!(
                "{c} {:?}",
                support.entries().iter().map(|(x, c)| (*x, c.to_string())).collect::<Vec<_>>()
            ),
        };
        let theirs = match mode {
            CnfMode::Count => truth.model_count.to_string(),
            CnfMode::Projections => {
                let mut entries: Vec<(u64, u64)> = truth.projections.into_iter().collect();
                entries.sort_by_key(|&(x, _)| (x.count_ones(), x));
                format!(
                    "{} {:?}",
                    truth.model_count,
                    entries.iter().map(|(x, c)| (*x, c.to_string())).collect::<Vec<_>>()
                )
            }
        };
        outcome.check(ours, Some(theirs));
    }
    Ok(outcome)
}

fn full(m: usize) -> u64 {
    homhash::family::full_mask(m)
}
