//! Model counting through projections.
//!
//! The projection of an assignment is the set of clause indices it
//! satisfies. Writing `f_X` for the number of assignments with projection
//! exactly `X`, the zeta transform `(fζ)_Y` has a closed form: every clause
//! outside `Y` must be falsified, which forces all its literals. The support
//! of `f` is grown clause by clause and recovered by Möbius inversion on the
//! candidate family, so the running time is polynomial in the number of
//! distinct projections. The model count is `f_{[m]}`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::budget::StepBudget;
use crate::circuits::{Circuit, CircuitBuilder};
use crate::family::{full_mask, MAX_UNIVERSE};
use crate::poset_moebius::{mobius_transform_poset, PosetOnFamily};
use crate::union_hash::{extract_top_dovetail, UnionAlgebraVec};
use crate::{Error, Result};

/// A disjunction of literals in DIMACS convention (`v` or `-v`, 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// Contains a variable in both polarities; satisfied by every assignment.
    Tautology,
    /// Distinct variables, sorted by variable index. May be empty.
    Literals(Vec<i32>),
}

impl Clause {
    /// Normalizes duplicate literals away and detects tautologies.
    pub fn new(literals: &[i32]) -> Result<Self> {
        if literals.contains(&0) {
            return Err(Error::InvalidArgument("literal 0 is not a variable".into()));
        }
        let mut lits = literals.to_vec();
        lits.sort_unstable_by_key(|l| (l.unsigned_abs(), *l));
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == -w[1]) {
            return Ok(Clause::Tautology);
        }
        Ok(Clause::Literals(lits))
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        match self {
            Clause::Tautology => true,
            Clause::Literals(lits) => lits
                .iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    n: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Fails on variables outside `1..=n`, on tautologies without variables,
    /// and on more than 64 clauses (projections are stored as masks).
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if clauses.len() > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!(
                "{} clauses exceed the limit {MAX_UNIVERSE}",
                clauses.len()
            )));
        }
        for (i, c) in clauses.iter().enumerate() {
            match c {
                Clause::Tautology if n == 0 => {
                    return Err(Error::InvalidArgument(format!(
                        "clause {} is a tautology over no variables",
                        i + 1
                    )))
                }
                Clause::Literals(lits) => {
                    if let Some(l) = lits.iter().find(|l| l.unsigned_abs() as usize > n) {
                        return Err(Error::InvalidArgument(format!(
                            "clause {} uses variable {} of {n}",
                            i + 1,
                            l.unsigned_abs()
                        )));
                    }
                }
                Clause::Tautology => {}
            }
        }
        Ok(Self { n, clauses })
    }

    /// Convenience constructor from DIMACS literal lists.
    pub fn from_literals(n: usize, clauses: &[Vec<i32>]) -> Result<Self> {
        let clauses = clauses.iter().map(|c| Clause::new(c)).collect::<Result<_>>()?;
        Self::new(n, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Mask of the clauses an assignment satisfies.
    pub fn projection(&self, assignment: &[bool]) -> u64 {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_satisfied_by(assignment))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Nonzero projection counts `f_X`, in the canonical poset order (by size,
/// then mask). Counts sum to `2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSupport {
    m: usize,
    entries: Vec<(u64, BigUint)>,
}

impl ProjectionSupport {
    pub fn num_clauses(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[(u64, BigUint)] {
        &self.entries
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(x, _)| x)
    }

    pub fn count(&self, mask: u64) -> BigUint {
        self.entries
            .iter()
            .find(|&&(x, _)| x == mask)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.entries.iter().map(|(_, c)| c).sum()
    }
}

/// Clauses as packed variable bitsets: falsifying clause `i` sets every
/// variable in `pos[i]` to 0 and every variable in `neg[i]` to 1.
struct Forcing {
    n: usize,
    words: usize,
    pos: Vec<Vec<u64>>,
    neg: Vec<Vec<u64>>,
    tautology: Vec<bool>,
}

impl Forcing {
    fn new(phi: &CnfFormula) -> Self {
        let words = phi.n.div_ceil(64);
        let mut pos = vec![vec![0u64; words]; phi.clauses.len()];
        let mut neg = pos.clone();
        let mut tautology = vec![false; phi.clauses.len()];
        for (i, c) in phi.clauses.iter().enumerate() {
            match c {
                Clause::Tautology => tautology[i] = true,
                Clause::Literals(lits) => {
                    for &l in lits {
                        let v = l.unsigned_abs() as usize - 1;
                        let target = if l > 0 { &mut pos[i] } else { &mut neg[i] };
                        target[v / 64] |= 1 << (v % 64);
                    }
                }
            }
        }
        Self {
            n: phi.n,
            words,
            pos,
            neg,
            tautology,
        }
    }

    /// Number of assignments falsifying every clause among the first
    /// `prefix` whose index is outside `y`.
    fn count(&self, prefix: usize, y: u64) -> BigUint {
        let mut zero = vec![0u64; self.words];
        let mut one = vec![0u64; self.words];
        for i in (0..prefix).filter(|&i| y >> i & 1 == 0) {
            if self.tautology[i] {
                return BigUint::zero();
            }
            for w in 0..self.words {
                zero[w] |= self.pos[i][w];
                one[w] |= self.neg[i][w];
            }
        }
        let mut forced = 0usize;
        for w in 0..self.words {
            if zero[w] & one[w] != 0 {
                return BigUint::zero();
            }
            forced += (zero[w] | one[w]).count_ones() as usize;
        }
        BigUint::one() << (self.n - forced)
    }
}

/// `(fζ)_Y`: the number of assignments that falsify every clause outside
/// `Y`. A conflicting forcing gives 0, otherwise `2^{free variables}`.
pub fn zeta_point_count(phi: &CnfFormula, y: u64) -> BigUint {
    Forcing::new(phi).count(phi.clauses.len(), y)
}

/// All projections with their counts by iterative compression over clause
/// prefixes: the projections of `C_1 ∧ … ∧ C_i` lie in
/// `supp_{i-1} ∪ {X ∪ {i}}`.
pub fn projection_support(phi: &CnfFormula) -> ProjectionSupport {
    let forcing = Forcing::new(phi);
    let mut current: Vec<(u64, BigUint)> = vec![(0, BigUint::one() << phi.n)];
    for i in 0..phi.clauses.len() {
        let bit = 1u64 << i;
        let poset = PosetOnFamily::new(current.iter().flat_map(|&(x, _)| [x, x | bit]).collect());
        let zeta: Vec<BigInt> = poset
            .elements()
            .par_iter()
            .map(|&y| BigInt::from(forcing.count(i + 1, y)))
            .collect();
        let f = mobius_transform_poset(&poset, &zeta).expect("length matches the poset");
        let next: Vec<(u64, BigUint)> = poset
            .elements()
            .iter()
            .zip(f)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&x, c)| (x, c.to_biguint().expect("projection counts are nonnegative")))
            .collect();
        assert!(
            next.len() >= current.len(),
            "projection support shrank from {} to {}",
            current.len(),
            next.len()
        );
        current = next;
    }
    ProjectionSupport {
        m: phi.clauses.len(),
        entries: current,
    }
}

/// Which algorithm [`count_sat_with`] runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CountRoute {
    /// Read `f_{[m]}` from [`projection_support`].
    #[default]
    Projections,
    /// Extract the top coefficient of [`union_circuit`] by dovetailing.
    UnionCircuit,
}

/// Number of satisfying assignments.
pub fn count_sat(phi: &CnfFormula) -> BigUint {
    projection_support(phi).count(full_mask(phi.clauses.len()))
}

pub fn count_sat_with(
    phi: &CnfFormula,
    route: CountRoute,
    budget: &mut StepBudget,
) -> Result<BigUint> {
    match route {
        CountRoute::Projections => Ok(count_sat(phi)),
        CountRoute::UnionCircuit => {
            let top = extract_top_dovetail(&union_circuit(phi)?, budget)?.value;
            top.to_biguint()
                .ok_or_else(|| Error::Arithmetic(format!("negative model count {top}")))
        }
    }
}

/// `∏_x (⟨1, V_x⟩ + ⟨1, V̄_x⟩)` over the ground set of clause indices, where
/// `V_x` (resp. `V̄_x`) holds the clauses with a positive (resp. negative)
/// literal of `x`. Its coefficient at `X` counts assignments with
/// projection `X`. Tautologies are attached to both sets of variable 1.
pub fn union_circuit(phi: &CnfFormula) -> Result<Circuit<UnionAlgebraVec>> {
    let m = phi.clauses.len();
    let mut pos = vec![0u64; phi.n];
    let mut neg = vec![0u64; phi.n];
    for (i, c) in phi.clauses.iter().enumerate() {
        match c {
            Clause::Tautology => {
                pos[0] |= 1 << i;
                neg[0] |= 1 << i;
            }
            Clause::Literals(lits) => {
                for &l in lits {
                    let v = l.unsigned_abs() as usize - 1;
                    if l > 0 {
                        pos[v] |= 1 << i;
                    } else {
                        neg[v] |= 1 << i;
                    }
                }
            }
        }
    }
    let mut b = CircuitBuilder::new();
    let factors: Vec<_> = pos
        .iter()
        .zip(&neg)
        .map(|(&p, &q)| {
            let x = b.input(UnionAlgebraVec::singleton(m, 1, p));
            let y = b.input(UnionAlgebraVec::singleton(m, 1, q));
            b.add([x, y])
        })
        .collect();
    let out = if factors.is_empty() {
        b.input(UnionAlgebraVec::one(m))
    } else {
        b.mul(factors)
    };
    b.finish(out)
}
