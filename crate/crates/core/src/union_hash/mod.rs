//! Sparse coefficient extraction in the union-product algebra `Z[(2^U, ∪)]`.
//!
//! No homomorphism into a smaller union algebra isolates coefficients, so
//! the output vector `v` is instead mapped into the Solomon algebra of a set
//! family `F ⊇ supp(v)`, where the zeta transform turns the circuit into
//! `|F|` scalar circuits. After `h` and `ζ_x`, an input `⟨c, W⟩` becomes the
//! scalar `c·[W ⊆ x]`; Möbius inversion on `(F, ⊆)` then recovers `v` on `F`.
//!
//! When `F` is unknown it is grown one ground element at a time
//! ([`extract_support_iterative`]), or the single top coefficient `v_U` is
//! read from a product poset ([`find2_top`], [`extract_top_dovetail`]).
//! Both rely on `supp(v^{i-1})` being the projection of `supp(v^i)`, which
//! needs nonnegative input coefficients.

mod algebra;
mod solomon;

pub use algebra::{UnionAlgebra, UnionAlgebraVec};
pub use solomon::{solomon_embed, solomon_multiply, SolomonAlgebraVec};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::budget::StepBudget;
use crate::circuits::{CheckedI128, Circuit, Gate, Integers};
use crate::family::full_mask;
use crate::poset_moebius::{
    mobius_transform_poset, mu_to_extremes, yates_in_place, Direction, PosetOnFamily,
};
use crate::{Error, Result};

/// Largest `s` for which [`support_of_restriction`] allocates `2^s` values.
pub const MAX_RESTRICTION_BITS: usize = 24;

/// A circuit over `Z[(2^U, ∪)]` prepared for scalar point evaluations
/// `x ↦ (vζ)_x` under a restriction mask.
struct PointEvaluator<'a> {
    circuit: &'a Circuit<UnionAlgebraVec>,
    n: usize,
    /// `(value, set)` per gate id; non-inputs hold `(0, 0)`.
    labels: Vec<(BigInt, u64)>,
    small: Option<Vec<i128>>,
}

impl<'a> PointEvaluator<'a> {
    fn new(circuit: &'a Circuit<UnionAlgebraVec>, require_nonnegative: bool) -> Result<Self> {
        let n = dimension(circuit)?;
        let labels = circuit
            .gates()
            .iter()
            .enumerate()
            .map(|(gate, g)| match g {
                Gate::Input(l) => {
                    let (v, set) = l.as_singleton().ok_or(Error::NonSingleton { gate })?;
                    if require_nonnegative && v < BigInt::zero() {
                        return Err(Error::NegativeCoefficient { gate });
                    }
                    Ok((v, set))
                }
                _ => Ok((BigInt::zero(), 0)),
            })
            .collect::<Result<Vec<_>>>()?;
        let small = labels.iter().map(|(v, _)| v.to_i128()).collect();
        Ok(Self {
            circuit,
            n,
            labels,
            small,
        })
    }

    /// Steps charged per evaluation.
    fn cost(&self) -> u64 {
        self.circuit.len() as u64
    }

    /// Output of the circuit with each input `⟨c, W⟩` replaced by
    /// `c·[W ∩ mask ⊆ x]`.
    fn eval(&self, mask: u64, x: u64) -> Result<BigInt> {
        let keep = |set: u64| set & mask & !x == 0;
        if let Some(small) = &self.small {
            let fast = self.circuit.evaluate_with(&CheckedI128, |gate, _| {
                Ok(if keep(self.labels[gate].1) { small[gate] } else { 0 })
            });
            match fast {
                Ok(v) => return Ok(BigInt::from(v)),
                Err(Error::Arithmetic(_)) => {}
                Err(e) => return Err(e),
            }
        }
        self.circuit.evaluate_with(&Integers, |gate, _| {
            let (v, set) = &self.labels[gate];
            Ok(if keep(*set) { v.clone() } else { BigInt::zero() })
        })
    }

    fn eval_many(&self, mask: u64, points: &[u64], budget: &mut StepBudget) -> Result<Vec<BigInt>> {
        budget.charge((points.len() as u64).saturating_mul(self.cost()))?;
        points.par_iter().map(|&x| self.eval(mask, x)).collect()
    }
}

/// Ground-set size shared by every input label.
fn dimension(circuit: &Circuit<UnionAlgebraVec>) -> Result<usize> {
    let mut dims = circuit.inputs().map(|(_, l)| l.dim());
    let n = dims
        .next()
        .ok_or_else(|| Error::Structural("circuit has no inputs".into()))?;
    if dims.any(|d| d != n) {
        return Err(Error::InvalidArgument(
            "input labels have different ground sets".into(),
        ));
    }
    Ok(n)
}

/// `(h(v)ζ)_x` for the output `v` of a circuit with singleton inputs:
/// the circuit evaluated with `⟨c, W⟩ ↦ c·[W ⊆ x]`.
pub fn zeta_point_eval(
    circuit: &Circuit<UnionAlgebraVec>,
    family: &PosetOnFamily,
    x: u64,
) -> Result<BigInt> {
    if !family.contains(x) {
        return Err(Error::NotFound(format!("{x:#b} is not in the family")));
    }
    let ev = PointEvaluator::new(circuit, false)?;
    ev.eval(full_mask(ev.n), x)
}

/// Nonzero coefficients `(X, v_X)` of the output, in the family's linear
/// extension order. Exact whenever `supp(v) ⊆ family`; `∅` is added to the
/// family if absent.
pub fn find(circuit: &Circuit<UnionAlgebraVec>, family: &[u64]) -> Result<Vec<(u64, BigInt)>> {
    let ev = PointEvaluator::new(circuit, false)?;
    find_masked(&ev, full_mask(ev.n), family, &mut StepBudget::unlimited())
}

/// [`find`] applied to the restriction of the circuit to `mask`.
fn find_masked(
    ev: &PointEvaluator<'_>,
    mask: u64,
    family: &[u64],
    budget: &mut StepBudget,
) -> Result<Vec<(u64, BigInt)>> {
    let mut elements = family.to_vec();
    elements.push(0);
    let poset = PosetOnFamily::new(elements);
    let w = ev.eval_many(mask, poset.elements(), budget)?;
    budget.charge((poset.len() as u64).saturating_pow(2))?;
    let v = mobius_transform_poset(&poset, &w)?;
    Ok(poset
        .elements()
        .iter()
        .copied()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// The circuit whose output is the restriction of the original output to
/// `set`: every input `⟨c, W⟩` becomes `⟨c, W ∩ set⟩`.
pub fn restrict_circuit(
    circuit: &Circuit<UnionAlgebraVec>,
    set: u64,
) -> Result<Circuit<UnionAlgebraVec>> {
    circuit.apply_input_homomorphism(|gate, label| {
        let (v, w) = label.as_singleton().ok_or(Error::NonSingleton { gate })?;
        Ok(UnionAlgebraVec::singleton(label.dim(), v, w & set))
    })
}

/// All nonzero coefficients of the output by iterative compression: the
/// support of the restriction to `{e_1, …, e_i}` lies in
/// `supp(v^{i-1}) ∪ {X ∪ {e_i}}`, so each step is one [`find`] call on a
/// family at most twice the size of the previous support.
///
/// Input coefficients must be nonnegative.
pub fn extract_support_iterative(
    circuit: &Circuit<UnionAlgebraVec>,
    budget: &mut StepBudget,
) -> Result<Vec<(u64, BigInt)>> {
    let ev = PointEvaluator::new(circuit, true)?;
    let mut current: Vec<(u64, BigInt)> = find_masked(&ev, 0, &[0], budget)?;
    for i in 0..ev.n {
        let e = 1u64 << i;
        let family: Vec<u64> = current
            .iter()
            .flat_map(|&(x, _)| [x, x | e])
            .collect();
        current = find_masked(&ev, full_mask(i + 1), &family, budget)?;
    }
    Ok(current)
}

/// Coefficients of `v^s`, the restriction of the output to the first `s`
/// ground elements, from `2^s` point evaluations and one Yates pass.
fn restriction_coefficients(
    ev: &PointEvaluator<'_>,
    s: usize,
    budget: &mut StepBudget,
) -> Result<Vec<(u64, BigInt)>> {
    if s > ev.n {
        return Err(Error::InvalidArgument(format!(
            "prefix length {s} exceeds ground set size {}",
            ev.n
        )));
    }
    if s > MAX_RESTRICTION_BITS {
        return Err(Error::TooLarge(format!(
            "2^{s} evaluation points exceed the limit 2^{MAX_RESTRICTION_BITS}"
        )));
    }
    let points: Vec<u64> = (0..1u64 << s).collect();
    let mut values = ev.eval_many(full_mask(s), &points, budget)?;
    budget.charge((s as u64) << s)?;
    yates_in_place(&mut values, Direction::Mobius)?;
    Ok(points
        .into_iter()
        .zip(values)
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// `supp(v^s)` over subsets of the first `s` ground elements, in increasing
/// mask order.
pub fn support_of_restriction(
    circuit: &Circuit<UnionAlgebraVec>,
    s: usize,
    budget: &mut StepBudget,
) -> Result<Vec<u64>> {
    let ev = PointEvaluator::new(circuit, false)?;
    Ok(restriction_coefficients(&ev, s, budget)?
        .into_iter()
        .map(|(x, _)| x)
        .collect())
}

/// `v_U` through the product poset `P' × 2^{U \ U_s}` with
/// `P' = supp(v^s) ∪ {∅}`:
/// `v_U = Σ w_{(X₁,X₂)} μ_{P'}(X₁, U_s) (-1)^{|(U \ U_s) \ X₂|}`.
///
/// Costs about `2^s + |supp(v^s)|·2^{n-s}` point evaluations. Input
/// coefficients must be nonnegative.
pub fn find2_top(
    circuit: &Circuit<UnionAlgebraVec>,
    s: usize,
    budget: &mut StepBudget,
) -> Result<BigInt> {
    let ev = PointEvaluator::new(circuit, true)?;
    find2_top_prepared(&ev, s, budget)
}

fn find2_top_prepared(ev: &PointEvaluator<'_>, s: usize, budget: &mut StepBudget) -> Result<BigInt> {
    let n = ev.n;
    if s == 0 || s > n {
        return Err(Error::InvalidArgument(format!(
            "prefix length {s} outside 1..={n}"
        )));
    }
    let prefix = full_mask(s);
    let rest = full_mask(n) & !prefix;
    let support = restriction_coefficients(ev, s, budget)?;
    // With nonnegative coefficients every W ⊇ U_s feeds (v^s)_{U_s}.
    if !support.iter().any(|&(x, _)| x == prefix) {
        return Ok(BigInt::zero());
    }
    let mut elements: Vec<u64> = support.iter().map(|&(x, _)| x).collect();
    elements.push(0);
    let poset = PosetOnFamily::new(elements);
    budget.charge((poset.len() as u64).saturating_pow(2))?;
    let to_top = mu_to_extremes(&poset, prefix)?.to_top;
    let weighted: Vec<(u64, i128)> = poset
        .elements()
        .iter()
        .copied()
        .zip(to_top)
        .filter(|&(_, mu)| mu != 0)
        .collect();
    let lifts = 1u64
        .checked_shl(rest.count_ones())
        .filter(|&l| l != 0)
        .ok_or_else(|| Error::TooLarge("too many product-poset points".into()))?;
    budget.charge(
        (weighted.len() as u64)
            .saturating_mul(lifts)
            .saturating_mul(ev.cost()),
    )?;
    let full = full_mask(n);
    weighted
        .par_iter()
        .map(|&(x1, mu)| {
            let mut acc = BigInt::zero();
            for x2 in submasks(rest) {
                let w = ev.eval(full, x1 | x2)?;
                if (rest & !x2).count_ones().is_multiple_of(2) {
                    acc += w;
                } else {
                    acc -= w;
                }
            }
            Ok(acc * mu)
        })
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))
}

/// All submasks of `mask`, including `0` and `mask`.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Outcome of [`extract_top_dovetail`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DovetailOutcome {
    pub value: BigInt,
    /// Prefix length of the lane that finished first; `None` for direct
    /// evaluation on ground sets of size at most one.
    pub s: Option<usize>,
    pub steps: u64,
}

/// `v_U` without knowing the support size: [`find2_top`] for every
/// `s ∈ 1..=n` in round-robin, each round doubling the per-lane step budget
/// and restarting the lanes that ran out. The first lane to finish wins.
///
/// Steps of abandoned attempts are charged to `budget`; lanes that exceed
/// the memory limit drop out.
pub fn extract_top_dovetail(
    circuit: &Circuit<UnionAlgebraVec>,
    budget: &mut StepBudget,
) -> Result<DovetailOutcome> {
    let ev = PointEvaluator::new(circuit, true)?;
    let n = ev.n;
    let start = budget.used();
    if n <= 1 {
        budget.charge(ev.cost() << n)?;
        let v = circuit.evaluate(&UnionAlgebra { n })?;
        return Ok(DovetailOutcome {
            value: v.coefficient(full_mask(n)),
            s: None,
            steps: budget.used() - start,
        });
    }
    let mut alive: Vec<usize> = (1..=n).collect();
    let mut lane_limit = ev.cost().saturating_mul(2);
    loop {
        let mut next_alive = Vec::with_capacity(alive.len());
        for &s in &alive {
            let mut lane = StepBudget::new(lane_limit.min(budget.remaining()));
            let result = find2_top_prepared(&ev, s, &mut lane);
            budget.charge(lane.used().min(lane.limit()))?;
            match result {
                Ok(value) => {
                    return Ok(DovetailOutcome {
                        value,
                        s: Some(s),
                        steps: budget.used() - start,
                    })
                }
                Err(Error::BudgetExceeded { .. }) => {
                    if budget.remaining() == 0 {
                        return Err(Error::BudgetExceeded {
                            used: budget.used(),
                            limit: budget.limit(),
                        });
                    }
                    next_alive.push(s);
                }
                Err(Error::TooLarge(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if next_alive.is_empty() {
            return Err(Error::TooLarge(format!(
                "every prefix length exceeds the memory limit for n = {n}"
            )));
        }
        alive = next_alive;
        lane_limit = lane_limit.saturating_mul(2);
    }
}
