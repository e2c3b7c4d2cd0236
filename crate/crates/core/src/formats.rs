//! Plain-text instance formats.
//!
//! * `subsetsum`: `n t`, then the `n` weights (on one or more lines).
//! * `linsat`: `n m`, `n` rows of `m` bits, the `m`-bit vector `b`, the `n`
//!   weights, then `t`.
//! * `setfam`: `|U| |F| t`, then `|F|` membership strings of `|U|` bits. The
//!   third header field is the part bound for Set Partition and `k` for Set
//!   Cover.
//! * `dimacs`: `p cnf n m` and zero-terminated clauses.
//!
//! Bit strings list element 0 first. In the first three formats blank lines
//! and lines starting with `#` are ignored, and a zero-width bit string is
//! written `-`. Errors carry 1-based line numbers.

use std::fmt;
use std::str::FromStr;

use crate::cnf_projections::{Clause, CnfFormula};
use crate::family::{SetFamily, MAX_UNIVERSE};
use crate::subset_sum::SubsetSumInstance;
use crate::z2_hash::{Gf2Mat, Gf2Vec, LinearSatInstance};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    SubsetSum,
    LinSat,
    SetFam,
    Dimacs,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subsetsum" => Ok(Format::SubsetSum),
            "linsat" => Ok(Format::LinSat),
            "setfam" => Ok(Format::SetFam),
            "dimacs" => Ok(Format::Dimacs),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::SubsetSum => "subsetsum",
            Format::LinSat => "linsat",
            Format::SetFam => "setfam",
            Format::Dimacs => "dimacs",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedSetFamily {
    pub family: SetFamily,
    /// The third header field.
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedCnf {
    pub formula: CnfFormula,
    /// Clauses changed by normalization (duplicate literals removed or a
    /// tautology detected).
    pub normalized: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    SubsetSum(SubsetSumInstance),
    LinearSat(LinearSatInstance),
    SetFamily(ParsedSetFamily),
    Cnf(ParsedCnf),
}

pub fn parse_instance(text: &str, format: Format) -> Result<Instance> {
    Ok(match format {
        Format::SubsetSum => Instance::SubsetSum(parse_subset_sum(text)?),
        Format::LinSat => Instance::LinearSat(parse_linear_sat(text)?),
        Format::SetFam => Instance::SetFamily(parse_set_family(text)?),
        Format::Dimacs => Instance::Cnf(parse_dimacs(text)?),
    })
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Whitespace tokens tagged with their line numbers, skipping blank and
/// `#` lines.
struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#'))
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        let last_line = text.lines().count().max(1);
        Self {
            items,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self
            .items
            .get(self.pos)
            .copied()
            .ok_or_else(|| err(self.last_line, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    fn number(&mut self, what: &str) -> Result<(usize, u64)> {
        let (line, tok) = self.next(what)?;
        let value = tok.parse::<u64>().map_err(|e| {
            err(line, format!("{what}: cannot parse {tok:?} as an unsigned integer ({e})"))
        })?;
        Ok((line, value))
    }

    fn size(&mut self, what: &str) -> Result<(usize, usize)> {
        let (line, v) = self.number(what)?;
        let v = usize::try_from(v).map_err(|_| err(line, format!("{what} overflows")))?;
        Ok((line, v))
    }

    fn bits(&mut self, what: &str, width: usize) -> Result<(usize, Vec<bool>)> {
        let (line, tok) = self.next(what)?;
        let tok = if tok == "-" { "" } else { tok };
        if tok.len() != width {
            return Err(err(
                line,
                format!("{what} has {} bits, expected {width}", tok.len()),
            ));
        }
        let bits = tok
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(err(line, format!("{what}: {other:?} is not a bit"))),
            })
            .collect::<Result<_>>()?;
        Ok((line, bits))
    }

    fn finish(&self) -> Result<()> {
        match self.items.get(self.pos) {
            Some(&(line, tok)) => Err(err(line, format!("unexpected trailing token {tok:?}"))),
            None => Ok(()),
        }
    }
}

pub fn parse_subset_sum(text: &str) -> Result<SubsetSumInstance> {
    let mut t = Tokens::new(text);
    let (_, n) = t.size("n")?;
    let (_, target) = t.number("target t")?;
    let weights = (0..n)
        .map(|i| t.number(&format!("weight {}", i + 1)).map(|(_, w)| w))
        .collect::<Result<_>>()?;
    t.finish()?;
    Ok(SubsetSumInstance::new(weights, target))
}

pub fn parse_linear_sat(text: &str) -> Result<LinearSatInstance> {
    let mut t = Tokens::new(text);
    let (_, n) = t.size("n")?;
    let (_, m) = t.size("m")?;
    let rows = (0..n)
        .map(|i| t.bits(&format!("row {}", i + 1), m).map(|(_, b)| Gf2Vec::from_bools(&b)))
        .collect::<Result<Vec<_>>>()?;
    let (_, b) = t.bits("vector b", m)?;
    let weights = (0..n)
        .map(|i| t.number(&format!("weight {}", i + 1)).map(|(_, w)| w))
        .collect::<Result<Vec<_>>>()?;
    let (_, budget) = t.number("budget t")?;
    t.finish()?;
    LinearSatInstance::new(Gf2Mat::new(rows, m)?, Gf2Vec::from_bools(&b), weights, budget)
}

pub fn parse_set_family(text: &str) -> Result<ParsedSetFamily> {
    let mut t = Tokens::new(text);
    let (line, universe) = t.size("|U|")?;
    if universe > MAX_UNIVERSE {
        return Err(err(line, format!("|U| = {universe} exceeds {MAX_UNIVERSE}")));
    }
    let (_, count) = t.size("|F|")?;
    let (_, bound) = t.number("bound")?;
    let sets = (0..count)
        .map(|i| {
            t.bits(&format!("set {}", i + 1), universe).map(|(_, bits)| {
                bits.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
        })
        .collect::<Result<_>>()?;
    t.finish()?;
    Ok(ParsedSetFamily {
        family: SetFamily::new(universe, sets)?,
        bound,
    })
}

pub fn parse_dimacs(text: &str) -> Result<ParsedCnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        if l.starts_with('%') {
            break;
        }
        if l.starts_with('p') {
            if header.is_some() {
                return Err(err(line, "duplicate problem line"));
            }
            let fields: Vec<&str> = l.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(line, format!("malformed header {l:?}")))?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(line, "clause before the `p cnf n m` header"));
        };
        for tok in l.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|e| err(line, format!("cannot parse literal {tok:?} ({e})")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > n {
                return Err(err(line, format!("literal {lit} outside variables 1..={n}")));
            } else {
                current.push(lit);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| err(last_line.max(1), "missing `p cnf n m` header"))?;
    if !current.is_empty() {
        return Err(err(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(err(
            last_line,
            format!("header declares {m} clauses but {} were given", clauses.len()),
        ));
    }
    let mut normalized = 0;
    let clauses = clauses
        .iter()
        .map(|lits| {
            let c = Clause::new(lits)?;
            if !matches!(&c, Clause::Literals(l) if l.len() == lits.len()) {
                normalized += 1;
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedCnf {
        formula: CnfFormula::new(n, clauses)?,
        normalized,
    })
}
