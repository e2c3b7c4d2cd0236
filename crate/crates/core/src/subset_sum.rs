//! Subset Sum via counting modulo a hashed prime.
//!
//! `c(a)_j` is the number of subsets of the weights summing to `j`, and
//! `c^p(a)_j` sums `c(a)_i` over all `i ≡ j (mod p)`. Reducing modulo a
//! random prime is a ring homomorphism applied to the subset-sum generating
//! function, so `c^p(a)_t = 0` certifies `c(a)_t = 0`, and for most primes
//! up to a bound depending on the number `S` of distinct subset sums the two
//! values coincide.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::budget::StepBudget;
use crate::numtheory::{crt_combine, find_ntt_prime, is_prime, pickprime, primes_up_to, Montgomery};
use crate::{Error, Result};

/// Largest modulus accepted by the residue-table engine.
pub const MAX_TABLE_MODULUS: u64 = 1 << 32;

/// Bit size of the NTT primes used by the streaming engine.
const NTT_BITS: u32 = 62;

/// Evaluation points per parallel work item in the streaming engine.
const STREAM_CHUNK: u64 = 1 << 12;

/// Attempts at drawing a prime before a round counts as failed.
const PICKPRIME_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    weights: Vec<u64>,
    target: u64,
}

impl SubsetSumInstance {
    pub fn new(weights: Vec<u64>, target: u64) -> Self {
        Self { weights, target }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Bit length of `max(t, max_i a_i)`, so `2^β` exceeds every weight and
    /// the target.
    pub fn beta(&self) -> u32 {
        let m = self.weights.iter().copied().fold(self.target, u64::max);
        u64::BITS - m.leading_zeros()
    }

    pub fn total_weight(&self) -> u128 {
        self.weights.iter().map(|&a| u128::from(a)).sum()
    }

    /// Checks that the indices are distinct and their weights sum to `t`.
    pub fn verify_witness(&self, witness: &[usize]) -> bool {
        let mut seen = vec![false; self.n()];
        let mut sum = 0u128;
        for &i in witness {
            if i >= self.n() || std::mem::replace(&mut seen[i], true) {
                return false;
            }
            sum += u128::from(self.weights[i]);
        }
        sum == u128::from(self.target)
    }

    fn prefix(&self, len: usize, target: u64) -> Self {
        Self::new(self.weights[..len].to_vec(), target)
    }
}

/// `counts[j] = c^p(a)_j` for every residue `j < p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCountVector {
    pub p: u64,
    pub counts: Vec<BigUint>,
}

impl ResidueCountVector {
    pub fn get(&self, residue: u64) -> &BigUint {
        &self.counts[(residue % self.p) as usize]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

/// Residue-table DP with exact counts; `O(p)` space.
pub fn count_mod_p_dp(inst: &SubsetSumInstance, p: u64) -> Result<ResidueCountVector> {
    if p == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if p > MAX_TABLE_MODULUS {
        return Err(Error::TooLarge(format!(
            "modulus {p} exceeds table limit {MAX_TABLE_MODULUS}"
        )));
    }
    let counts = if inst.n() < 64 {
        table_u64(inst.weights(), p)
            .into_iter()
            .map(BigUint::from)
            .collect()
    } else {
        table_big(inst.weights(), p)
    };
    Ok(ResidueCountVector { p, counts })
}

// Entries never exceed 2^n ≤ 2^63.
fn table_u64(weights: &[u64], p: u64) -> Vec<u64> {
    let len = p as usize;
    let mut cur = vec![0u64; len];
    cur[0] = 1;
    let mut next = vec![0u64; len];
    for &a in weights {
        let r = (a % p) as usize;
        for j in 0..len {
            let src = if j >= r { j - r } else { j + len - r };
            next[j] = cur[j] + cur[src];
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

fn table_big(weights: &[u64], p: u64) -> Vec<BigUint> {
    let len = p as usize;
    let mut cur = vec![BigUint::zero(); len];
    cur[0] = BigUint::one();
    for &a in weights {
        let r = (a % p) as usize;
        cur = (0..len)
            .map(|j| &cur[j] + &cur[(j + len - r) % len])
            .collect();
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StreamMode {
    /// One NTT prime; only zero versus nonzero is reported.
    Decide,
    /// `⌈n/60⌉ + 1` NTT primes recombined by CRT into the exact count.
    Count,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamOutcome {
    Count(BigUint),
    Nonzero(bool),
}

impl StreamOutcome {
    pub fn is_nonzero(&self) -> bool {
        match self {
            Self::Count(c) => !c.is_zero(),
            Self::Nonzero(b) => *b,
        }
    }
}

/// `c^p(a)_t` by evaluation at the `p`-th roots of unity of an NTT field.
///
/// Uses `c^p_t = (1/p) Σ_k ω^{-tk} ∏_i (1 + ω^{k a_i})`, keeping one running
/// power per distinct residue weight: `O(p · n)` field operations and
/// `O(n)` words of memory. A decide-mode zero is wrong only if the NTT prime
/// divides the true count.
pub fn count_mod_p_stream<R: Rng + ?Sized>(
    inst: &SubsetSumInstance,
    p: u64,
    t: u64,
    mode: StreamMode,
    rng: &mut R,
) -> Result<StreamOutcome> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("modulus {p} is not prime")));
    }
    if t >= p {
        return Err(Error::InvalidArgument(format!("residue {t} not below {p}")));
    }
    let primes = match mode {
        StreamMode::Decide => 1,
        StreamMode::Count => inst.n().div_ceil(60) + 1,
    };
    let groups = residue_groups(inst.weights(), p);
    let mut residues: Vec<(u64, u64)> = Vec::with_capacity(primes);
    while residues.len() < primes {
        let (q, root) = ntt_prime_with_retry(p, rng)?;
        if residues.iter().any(|&(_, m)| m == q) {
            continue;
        }
        residues.push((stream_sum(&groups, p, t, q, root.omega.value()), q));
    }
    Ok(match mode {
        StreamMode::Decide => StreamOutcome::Nonzero(residues[0].0 != 0),
        StreamMode::Count => StreamOutcome::Count(crt_combine(&residues)?),
    })
}

fn ntt_prime_with_retry<R: Rng + ?Sized>(
    p: u64,
    rng: &mut R,
) -> Result<(u64, crate::numtheory::RootOfUnity)> {
    let mut last = None;
    for _ in 0..4 {
        match find_ntt_prime(p, NTT_BITS, rng) {
            Ok(found) => return Ok(found),
            Err(e @ Error::NotFound(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Weights reduced mod `p`, as `(residue, multiplicity)` with the zero
/// residue first (possibly with multiplicity 0).
fn residue_groups(weights: &[u64], p: u64) -> Vec<(u64, u64)> {
    let mut rs: Vec<u64> = weights.iter().map(|&a| a % p).collect();
    rs.sort_unstable();
    let mut groups = vec![(0u64, 0u64)];
    for r in rs {
        match groups.last_mut() {
            Some(g) if g.0 == r => g.1 += 1,
            _ => groups.push((r, 1)),
        }
    }
    groups
}

/// `c^p_t mod q` for an NTT prime `q` with `omega` of order `p`.
fn stream_sum(groups: &[(u64, u64)], p: u64, t: u64, q: u64, omega: u64) -> u64 {
    let m = Montgomery::new(q);
    let omega = m.to_mont(omega);
    let one = m.one();
    let steps: Vec<u64> = groups[1..].iter().map(|&(r, _)| m.pow(omega, r)).collect();
    let back = m.pow(omega, (p - t) % p);
    let chunks = p.div_ceil(STREAM_CHUNK);
    let total = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let k0 = c * STREAM_CHUNK;
            let k1 = (k0 + STREAM_CHUNK).min(p);
            let mut powers: Vec<u64> = groups[1..]
                .iter()
                .map(|&(r, _)| m.pow(omega, mul_mod_u64(r, k0, p)))
                .collect();
            let mut twist = m.pow(back, k0 % p);
            let mut acc = 0u64;
            for _ in k0..k1 {
                let mut term = twist;
                for (x, &(_, mult)) in powers.iter().zip(&groups[1..]) {
                    let f = m.add(one, *x);
                    term = m.mul(term, if mult == 1 { f } else { m.pow(f, mult) });
                }
                acc = m.add(acc, term);
                for (x, s) in powers.iter_mut().zip(&steps) {
                    *x = m.mul(*x, *s);
                }
                twist = m.mul(twist, back);
            }
            acc
        })
        .reduce(|| 0, |a, b| m.add(a, b));
    let two = m.to_mont(2);
    let zero_factor = m.pow(two, groups[0].1);
    let p_inv = m.pow(m.to_mont(p % q), q - 2);
    m.from_mont(m.mul(m.mul(total, p_inv), zero_factor))
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    crate::numtheory::mul_mod(a, b, m)
}

/// Upper limit `γ` for the hashing prime given a support bound `S̃`:
/// `S̃ · β · n · max(1, ⌈log₂ β⌉) · max(1, ⌈log₂ n⌉)`.
pub fn hash_prime_bound(support: u64, beta: u64, n: u64) -> Result<u64> {
    if support == 0 || beta == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "support bound, β and n must be positive".into(),
        ));
    }
    let factors = [support, beta, n, ceil_log2(beta).max(1), ceil_log2(n).max(1)];
    factors
        .iter()
        .try_fold(1u64, |acc, &f| acc.checked_mul(f))
        .filter(|&g| g <= 1 << 63)
        .ok_or_else(|| Error::TooLarge("hash prime bound exceeds 2^63".into()))
}

pub(crate) fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(u64::BITS - (x - 1).leading_zeros())
    }
}

/// How residue counts `c^p(a)_t` are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ResidueEngine {
    /// Root-of-unity evaluation, polynomial space.
    #[default]
    Stream,
    /// Residue-table DP, `O(p)` space.
    Table,
}

impl ResidueEngine {
    fn count<R: Rng + ?Sized>(
        self,
        inst: &SubsetSumInstance,
        p: u64,
        rng: &mut R,
    ) -> Result<BigUint> {
        let t = inst.target % p;
        match self {
            Self::Stream => match count_mod_p_stream(inst, p, t, StreamMode::Count, rng)? {
                StreamOutcome::Count(c) => Ok(c),
                StreamOutcome::Nonzero(_) => unreachable!("count mode"),
            },
            Self::Table if inst.n() < 64 && p <= MAX_TABLE_MODULUS => {
                Ok(BigUint::from(table_u64(inst.weights(), p)[t as usize]))
            }
            Self::Table => Ok(count_mod_p_dp(inst, p)?.get(t).clone()),
        }
    }

    fn nonzero<R: Rng + ?Sized>(
        self,
        inst: &SubsetSumInstance,
        p: u64,
        rng: &mut R,
    ) -> Result<bool> {
        let t = inst.target % p;
        match self {
            Self::Stream => {
                Ok(count_mod_p_stream(inst, p, t, StreamMode::Decide, rng)?.is_nonzero())
            }
            Self::Table => Ok(!self.count(inst, p, rng)?.is_zero()),
        }
    }

    fn cost(self, inst: &SubsetSumInstance, p: u64) -> u64 {
        p.saturating_mul(inst.n().max(1) as u64)
    }
}

fn hash_prime<R: Rng + ?Sized>(inst: &SubsetSumInstance, support: u64, rng: &mut R) -> Result<u64> {
    let gamma = hash_prime_bound(
        support,
        u64::from(inst.beta().max(1)),
        inst.n().max(1) as u64,
    )?
    .max(2);
    (0..PICKPRIME_ATTEMPTS)
        .find_map(|_| pickprime(gamma, rng))
        .ok_or_else(|| Error::NotFound(format!("no prime drawn below {gamma}")))
}

/// `c^p(a)_t` for a random prime `p ≤ γ(S̃, β, n)`.
///
/// A zero answer is always correct; if `S̃` bounds the number of distinct
/// subset sums the answer equals `c(a)_t` with probability at least 1/4.
pub fn count_with_bound<R: Rng + ?Sized>(
    inst: &SubsetSumInstance,
    support: u64,
    rng: &mut R,
) -> Result<BigUint> {
    count_with_bound_using(inst, support, ResidueEngine::default(), rng)
}

pub fn count_with_bound_using<R: Rng + ?Sized>(
    inst: &SubsetSumInstance,
    support: u64,
    engine: ResidueEngine,
    rng: &mut R,
) -> Result<BigUint> {
    let p = hash_prime(inst, support, rng)?;
    engine.count(inst, p, rng)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Indices of a subset summing to the target.
    Yes(Vec<usize>),
    No,
}

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveConfig {
    pub engine: ResidueEngine,
    pub step_limit: u64,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            engine: ResidueEngine::default(),
            step_limit: StepBudget::DEFAULT_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptiveOutcome {
    pub decision: Decision,
    /// Support guess `S̃` of the final round.
    pub support_guess: u64,
    /// Hashing prime of the final round.
    pub prime: u64,
    pub rounds: u32,
    pub steps: u64,
}

/// Decides Subset Sum without error in expected time `O*(S)`.
///
/// Round `r` guesses `S̃ = n · 2^r`, hashes with a random prime `p`, and
/// answers NO when `c^p(a)_t = 0` (confirmed exactly). Otherwise it builds a
/// witness by self-reduction with the same `p`: a prime with no collision at
/// `t` has none at any residual target either. A witness is returned only
/// after exact verification; any failure moves on to the next round.
pub fn solve_adaptive<R: Rng + ?Sized>(
    inst: &SubsetSumInstance,
    config: &AdaptiveConfig,
    rng: &mut R,
) -> Result<AdaptiveOutcome> {
    let mut budget = StepBudget::new(config.step_limit);
    let engine = config.engine;
    let n = inst.n();
    let mut support = (n as u64).max(1);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let p = match hash_prime(inst, support, rng) {
            Ok(p) => p,
            Err(Error::NotFound(_)) => {
                support = support.saturating_mul(2);
                continue;
            }
            Err(e) => return Err(e),
        };
        budget.charge(engine.cost(inst, p))?;
        let outcome = |decision| AdaptiveOutcome {
            decision,
            support_guess: support,
            prime: p,
            rounds,
            steps: 0,
        };
        if !engine.nonzero(inst, p, rng)? {
            budget.charge(engine.cost(inst, p))?;
            if engine.count(inst, p, rng)?.is_zero() {
                let mut out = outcome(Decision::No);
                out.steps = budget.used();
                return Ok(out);
            }
        }
        if let Some(witness) = self_reduce(inst, p, engine, &mut budget, rng)? {
            if inst.verify_witness(&witness) {
                let mut out = outcome(Decision::Yes(witness));
                out.steps = budget.used();
                return Ok(out);
            }
        }
        support = support.saturating_mul(2);
    }
}

fn self_reduce<R: Rng + ?Sized>(
    inst: &SubsetSumInstance,
    p: u64,
    engine: ResidueEngine,
    budget: &mut StepBudget,
    rng: &mut R,
) -> Result<Option<Vec<usize>>> {
    let mut residual = inst.target;
    let mut chosen = Vec::new();
    for i in (0..inst.n()).rev() {
        let exclude = inst.prefix(i, residual);
        budget.charge(engine.cost(&exclude, p))?;
        if engine.nonzero(&exclude, p, rng)? {
            continue;
        }
        match residual.checked_sub(inst.weights[i]) {
            Some(r) => {
                residual = r;
                chosen.push(i);
            }
            None => return Ok(None),
        }
    }
    chosen.reverse();
    Ok((residual == 0).then_some(chosen))
}

#[derive(Clone, Copy, Debug)]
pub struct DerandomizedConfig {
    /// Bound on the number of distinct subset sums; defaults to
    /// `min(2^n, Σ a_i + 1)`.
    pub support_bound: Option<u128>,
    pub engine: ResidueEngine,
    pub step_limit: u64,
}

impl Default for DerandomizedConfig {
    fn default() -> Self {
        Self {
            support_bound: None,
            engine: ResidueEngine::default(),
            step_limit: StepBudget::DEFAULT_LIMIT,
        }
    }
}

/// Exact `c(a)_t` with no randomness in the answer.
pub fn count_derandomized(inst: &SubsetSumInstance) -> Result<BigUint> {
    count_derandomized_with(inst, &DerandomizedConfig::default())
}

/// Majority vote over `c^{p_i}(a)_t` for the first `l = 2(β + ⌈log₂ n⌉)S̃ + 1`
/// primes.
///
/// At most `(β + ⌈log₂ n⌉)S̃` primes divide some nonzero `j - t` with `j` a
/// subset sum, so the majority is `c(a)_t`. Every prime above
/// `max(t, Σ a_i)` is good, and that tail is folded into the vote in one
/// step.
pub fn count_derandomized_with(
    inst: &SubsetSumInstance,
    config: &DerandomizedConfig,
) -> Result<BigUint> {
    let n = inst.n();
    let total = inst.total_weight();
    let support = config.support_bound.unwrap_or_else(|| {
        let all = if n >= 127 { u128::MAX } else { 1u128 << n };
        all.min(total.saturating_add(1))
    });
    if support == 0 {
        return Err(Error::InvalidArgument("support bound must be positive".into()));
    }
    let per_sum = u128::from(inst.beta()) + u128::from(ceil_log2(n as u64));
    let l = per_sum
        .saturating_mul(2)
        .saturating_mul(support)
        .saturating_add(1);
    let exact_above = total.max(u128::from(inst.target));
    // Residue counts are exact, so the stream RNG only picks NTT primes.
    let mut rng = crate::rng::stream(0, "derandomized-ntt");
    let mut budget = StepBudget::new(config.step_limit);
    // When the good tail alone exceeds l/2 votes it is the majority, and the
    // vote equals its common value.
    if exact_above <= u128::from(PRIME_COUNT_LIMIT) {
        let below = primes_up_to(exact_above as u64).len() as u128;
        if below.saturating_mul(2) < l {
            let p = next_prime(exact_above as u64)?;
            budget.charge(config.engine.cost(inst, p))?;
            return config.engine.count(inst, p, &mut rng);
        }
    }
    let mut vote = MajorityVote::default();
    let mut seen = 0u128;
    let mut p = 1u64;
    while seen < l {
        p = next_prime(p)?;
        budget.charge(config.engine.cost(inst, p))?;
        let value = config.engine.count(inst, p, &mut rng)?;
        if u128::from(p) > exact_above {
            vote.push(value, l - seen);
            break;
        }
        vote.push(value, 1);
        seen += 1;
    }
    Ok(vote.winner().unwrap_or_default())
}

/// Largest `max(t, Σ a_i)` for which the primes below it are counted by sieve.
const PRIME_COUNT_LIMIT: u64 = 1 << 24;

fn next_prime(p: u64) -> Result<u64> {
    (p + 1..=u64::MAX)
        .find(|&c| is_prime(c))
        .ok_or_else(|| Error::TooLarge("prime sequence exhausted".into()))
}

/// Boyer–Moore majority vote over a stream of weighted items.
#[derive(Clone, Debug, Default)]
struct MajorityVote {
    candidate: Option<BigUint>,
    weight: u128,
}

impl MajorityVote {
    /// Same state as pushing `x` individually `k` times.
    fn push(&mut self, x: BigUint, k: u128) {
        if self.weight == 0 {
            self.candidate = Some(x);
            self.weight = k;
        } else if self.candidate.as_ref() == Some(&x) {
            self.weight += k;
        } else if k <= self.weight {
            self.weight -= k;
        } else {
            self.weight = k - self.weight;
            self.candidate = Some(x);
        }
    }

    fn winner(self) -> Option<BigUint> {
        self.candidate
    }
}
