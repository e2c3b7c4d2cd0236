//! Arithmetic circuits over commutative rings.
//!
//! A [`Circuit`] is an immutable DAG of input, addition and multiplication
//! gates with a single output. Input gates carry a label of type `L`; the
//! ring the circuit is evaluated over is supplied separately through the
//! [`Ring`] trait, so the same gate structure can be evaluated over the
//! integers, a prime field, a group algebra, or a scalar character by
//! relabelling its inputs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub type GateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate<L> {
    Input(L),
    Add(Vec<GateId>),
    Mul(Vec<GateId>),
}

impl<L> Gate<L> {
    pub fn children(&self) -> &[GateId] {
        match self {
            Gate::Input(_) => &[],
            Gate::Add(c) | Gate::Mul(c) => c,
        }
    }
}

/// Operations descriptor for a commutative ring.
///
/// Addition and multiplication are fallible so fixed-width rings can report
/// overflow instead of wrapping.
pub trait Ring {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

/// The integers, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a + b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a * b)
    }
}

/// 64-bit integers; overflow is an [`Error::Arithmetic`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckedI64;

impl Ring for CheckedI64 {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_add(*b)
            .ok_or_else(|| Error::Arithmetic(format!("i64 overflow in {a} + {b}")))
    }
    fn mul(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_mul(*b)
            .ok_or_else(|| Error::Arithmetic(format!("i64 overflow in {a} * {b}")))
    }
}

/// 128-bit integers; overflow is an [`Error::Arithmetic`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckedI128;

impl Ring for CheckedI128 {
    type Elem = i128;

    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn add(&self, a: &i128, b: &i128) -> Result<i128> {
        a.checked_add(*b)
            .ok_or_else(|| Error::Arithmetic("i128 overflow".into()))
    }
    fn mul(&self, a: &i128, b: &i128) -> Result<i128> {
        a.checked_mul(*b)
            .ok_or_else(|| Error::Arithmetic("i128 overflow".into()))
    }
}

/// Integers modulo `modulus` (any modulus ≥ 1 and < 2^63).
#[derive(Clone, Copy, Debug)]
pub struct ModRing {
    pub modulus: u64,
}

impl Ring for ModRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(((u128::from(*a) + u128::from(*b)) % u128::from(self.modulus)) as u64)
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(((u128::from(*a) * u128::from(*b)) % u128::from(self.modulus)) as u64)
    }
}

/// An immutable single-output arithmetic circuit.
#[derive(Clone, Debug)]
pub struct Circuit<L> {
    gates: Vec<Gate<L>>,
    output: GateId,
    order: Vec<GateId>,
    fanout: Vec<u32>,
}

impl<L> Circuit<L> {
    /// Validates an arbitrary gate list.
    ///
    /// Children may reference any gate id; the topological order is
    /// recovered with Kahn's algorithm (smallest ready id first), so the
    /// result is deterministic. Fails on dangling children, empty fan-in,
    /// cycles, or a sink other than `output`.
    pub fn from_gates(gates: Vec<Gate<L>>, output: GateId) -> Result<Self> {
        let n = gates.len();
        if output >= n {
            return Err(Error::Structural(format!(
                "output gate {output} out of range ({n} gates)"
            )));
        }
        let mut fanout = vec![0u32; n];
        let mut pending = vec![0usize; n];
        let mut parents: Vec<Vec<GateId>> = vec![Vec::new(); n];
        for (id, gate) in gates.iter().enumerate() {
            if let Gate::Add(c) | Gate::Mul(c) = gate {
                if c.is_empty() {
                    return Err(Error::Structural(format!("gate {id} has no children")));
                }
            }
            for &child in gate.children() {
                if child >= n {
                    return Err(Error::Structural(format!(
                        "gate {id} references missing gate {child}"
                    )));
                }
                fanout[child] += 1;
                pending[id] += 1;
                parents[child].push(id);
            }
        }
        let sinks: Vec<GateId> = (0..n).filter(|&g| fanout[g] == 0).collect();
        if sinks != [output] {
            return Err(Error::Structural(format!(
                "expected the output {output} to be the unique sink, found sinks {sinks:?}"
            )));
        }
        let mut ready: BinaryHeap<Reverse<GateId>> =
            (0..n).filter(|&g| pending[g] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(g)) = ready.pop() {
            order.push(g);
            for &p in &parents[g] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    ready.push(Reverse(p));
                }
            }
        }
        if order.len() != n {
            return Err(Error::Structural("gate graph contains a cycle".into()));
        }
        Ok(Self {
            gates,
            output,
            order,
            fanout,
        })
    }

    pub fn gates(&self) -> &[Gate<L>] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Children precede parents.
    pub fn topo_order(&self) -> &[GateId] {
        &self.order
    }

    /// `(gate id, label)` for every input gate, in id order.
    pub fn inputs(&self) -> impl Iterator<Item = (GateId, &L)> {
        self.gates.iter().enumerate().filter_map(|(id, g)| match g {
            Gate::Input(l) => Some((id, l)),
            _ => None,
        })
    }

    /// Evaluates the circuit over `ring`, translating each input label with
    /// `input`. This is evaluation of the circuit obtained by applying the
    /// label map, without materializing that circuit.
    pub fn evaluate_with<R, F>(&self, ring: &R, mut input: F) -> Result<R::Elem>
    where
        R: Ring,
        F: FnMut(GateId, &L) -> Result<R::Elem>,
    {
        let mut values: Vec<Option<R::Elem>> = vec![None; self.gates.len()];
        let mut remaining = self.fanout.clone();
        for &g in &self.order {
            let value = match &self.gates[g] {
                Gate::Input(label) => input(g, label)?,
                Gate::Add(children) => {
                    self.fold(&mut values, &mut remaining, children, |a, b| ring.add(a, b))?
                }
                Gate::Mul(children) => {
                    self.fold(&mut values, &mut remaining, children, |a, b| ring.mul(a, b))?
                }
            };
            values[g] = Some(value);
        }
        values[self.output]
            .take()
            .ok_or_else(|| Error::Structural("output was not evaluated".into()))
    }

    fn fold<E: Clone>(
        &self,
        values: &mut [Option<E>],
        remaining: &mut [u32],
        children: &[GateId],
        mut op: impl FnMut(&E, &E) -> Result<E>,
    ) -> Result<E> {
        let mut take = |c: GateId| -> E {
            remaining[c] -= 1;
            if remaining[c] == 0 {
                values[c].take().expect("child evaluated before parent")
            } else {
                values[c].clone().expect("child evaluated before parent")
            }
        };
        let mut acc = take(children[0]);
        for &c in &children[1..] {
            let v = take(c);
            acc = op(&acc, &v)?;
        }
        Ok(acc)
    }

    /// Evaluates over a ring whose elements are the labels themselves.
    pub fn evaluate<R>(&self, ring: &R) -> Result<L>
    where
        R: Ring<Elem = L>,
        L: Clone,
    {
        self.evaluate_with(ring, |_, l| Ok(l.clone()))
    }

    /// Returns the structurally identical circuit with every input label `l`
    /// replaced by `h(l)`. When `h` is a ring homomorphism, evaluating the
    /// result yields `h` of the original output.
    pub fn apply_input_homomorphism<M, F>(&self, mut h: F) -> Result<Circuit<M>>
    where
        F: FnMut(GateId, &L) -> Result<M>,
    {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(id, g)| {
                Ok(match g {
                    Gate::Input(l) => Gate::Input(h(id, l)?),
                    Gate::Add(c) => Gate::Add(c.clone()),
                    Gate::Mul(c) => Gate::Mul(c.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit {
            gates,
            output: self.output,
            order: self.order.clone(),
            fanout: self.fanout.clone(),
        })
    }

    /// Applies a label map given as a table indexed by gate id; a missing
    /// entry for an input gate is an error.
    pub fn relabel_from_table<M: Clone>(&self, table: &[Option<M>]) -> Result<Circuit<M>> {
        self.apply_input_homomorphism(|id, _| {
            table
                .get(id)
                .cloned()
                .flatten()
                .ok_or(Error::MissingLabel { gate: id })
        })
    }
}

/// Append-only circuit construction. Gates may only reference earlier
/// gates, so every finished circuit is acyclic.
#[derive(Clone, Debug)]
pub struct CircuitBuilder<L> {
    gates: Vec<Gate<L>>,
}

impl<L> Default for CircuitBuilder<L> {
    fn default() -> Self {
        Self { gates: Vec::new() }
    }
}

impl<L> CircuitBuilder<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self, label: L) -> GateId {
        self.gates.push(Gate::Input(label));
        self.gates.len() - 1
    }

    pub fn add(&mut self, children: impl IntoIterator<Item = GateId>) -> GateId {
        let c = children.into_iter().collect();
        self.gates.push(Gate::Add(c));
        self.gates.len() - 1
    }

    pub fn mul(&mut self, children: impl IntoIterator<Item = GateId>) -> GateId {
        let c = children.into_iter().collect();
        self.gates.push(Gate::Mul(c));
        self.gates.len() - 1
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Freezes the circuit. Gates not reachable from `output` are dropped
    /// and the rest renumbered, preserving relative order.
    pub fn finish(self, output: GateId) -> Result<Circuit<L>> {
        let n = self.gates.len();
        if output >= n {
            return Err(Error::Structural(format!(
                "output gate {output} out of range ({n} gates)"
            )));
        }
        for (id, g) in self.gates.iter().enumerate() {
            if let Gate::Add(c) | Gate::Mul(c) = g {
                if c.is_empty() {
                    return Err(Error::Structural(format!("gate {id} has no children")));
                }
            }
            if let Some(&bad) = g.children().iter().find(|&&c| c >= id) {
                return Err(Error::Structural(format!(
                    "gate {id} references non-earlier gate {bad}"
                )));
            }
        }
        let mut live = vec![false; n];
        live[output] = true;
        for id in (0..=output).rev() {
            if live[id] {
                for &c in self.gates[id].children() {
                    live[c] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut next = 0;
        for id in 0..n {
            if live[id] {
                remap[id] = next;
                next += 1;
            }
        }
        let gates: Vec<Gate<L>> = self
            .gates
            .into_iter()
            .enumerate()
            .filter(|(id, _)| live[*id])
            .map(|(_, g)| match g {
                Gate::Input(l) => Gate::Input(l),
                Gate::Add(c) => Gate::Add(c.into_iter().map(|x| remap[x]).collect()),
                Gate::Mul(c) => Gate::Mul(c.into_iter().map(|x| remap[x]).collect()),
            })
            .collect();
        let mut fanout = vec![0u32; gates.len()];
        for g in &gates {
            for &c in g.children() {
                fanout[c] += 1;
            }
        }
        Ok(Circuit {
            order: (0..gates.len()).collect(),
            output: remap[output],
            gates,
            fanout,
        })
    }
}

/// Evaluates a circuit to an integer under a scalar input map, first in
/// checked 128-bit arithmetic and, on overflow, again with big integers.
pub fn evaluate_scalar<L, F>(circuit: &Circuit<L>, mut input: F) -> Result<BigInt>
where
    F: FnMut(GateId, &L) -> Result<BigInt>,
{
    use num_traits::ToPrimitive;
    let fast = circuit.evaluate_with(&CheckedI128, |id, l| {
        input(id, l)?
            .to_i128()
            .ok_or_else(|| Error::Arithmetic("label exceeds i128".into()))
    });
    match fast {
        Ok(v) => Ok(BigInt::from(v)),
        Err(Error::Arithmetic(_)) => circuit.evaluate_with(&Integers, input),
        Err(e) => Err(e),
    }
}
