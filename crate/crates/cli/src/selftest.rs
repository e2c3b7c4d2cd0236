//! Small fixed instances with hand-checked answers, run end to end.

use anyhow::Result;
use homhash::formats::{parse_dimacs, parse_linear_sat, parse_set_family, parse_subset_sum};
use serde_json::Value;

use crate::commands::{self, CnfMode, DecideOrCount, Settings, SpaceMode};
use crate::report::{Answer, Problem, RunReport, Verdict};

type Check = (&'static str, fn(&Settings) -> Result<Answer>);

fn checks() -> Vec<Check> {
    vec![
        ("subsetsum-decide", |s| {
            let inst = parse_subset_sum("3 8\n3 5 8")?;
            Ok(commands::subset_sum(DecideOrCount::Decide, &inst, s)?.report.answer)
        }),
        ("subsetsum-count", |s| {
            let inst = parse_subset_sum("3 8\n3 5 8")?;
            Ok(commands::subset_sum(DecideOrCount::Count, &inst, s)?.report.answer)
        }),
        ("linsat-count", |s| {
            let inst = parse_linear_sat("2 2\n10\n01\n11\n1 1\n2")?;
            Ok(commands::linear_sat(DecideOrCount::Count, &inst, s)?.report.answer)
        }),
        ("setpart-poly", |s| {
            let p = parse_set_family("3 4 2\n100\n011\n110\n001")?;
            Ok(commands::set_partition(SpaceMode::Poly, &p, s)?.report.answer)
        }),
        ("setpart-exp", |s| {
            let p = parse_set_family("3 4 2\n100\n011\n110\n001")?;
            Ok(commands::set_partition(SpaceMode::Exp, &p, s)?.report.answer)
        }),
        ("setcover", |s| {
            let p = parse_set_family("2 3 2\n10\n01\n11")?;
            Ok(commands::set_cover(&p, s)?.report.answer)
        }),
        ("cnf-count", |s| {
            let p = parse_dimacs("p cnf 2 2\n1 2 0\n-1 0\n")?;
            Ok(commands::cnf(CnfMode::Count, &p, s)?.report.answer)
        }),
    ]
}

fn expected(name: &str) -> Answer {
    let count = |c: &str| Answer::Count(c.to_owned());
    match name {
        "subsetsum-decide" | "setcover" => Answer::Decision(Verdict::Yes),
        // {8} and {3, 5}.
        "subsetsum-count" => count("2"),
        "linsat-count" | "cnf-count" => count("1"),
        // {1} + {2,3} and {1,2} + {3}.
        "setpart-poly" | "setpart-exp" => count("2"),
        other => unreachable!("no expectation for {other}"),
    }
}

/// Runs every check with the oracle enabled; the report lists PASS/FAIL
/// per check and the answer is the number of passes.
pub fn run(settings: &Settings) -> (RunReport, bool) {
    let s = Settings {
        algo: None,
        oracle: true,
        ..settings.clone()
    };
    let mut passed = 0;
    let mut all = true;
    let mut results = Vec::new();
    for (name, check) in checks() {
        let ok = matches!(check(&s), Ok(a) if a == expected(name));
        passed += usize::from(ok);
        all &= ok;
        results.push((name, ok));
    }
    let mut report = RunReport::new(Problem::SelfTest, "fixed", Answer::Count(passed.to_string()), s.seed);
    for (name, ok) in results {
        report.param(name, Value::from(if ok { "PASS" } else { "FAIL" }));
    }
    report.oracle_checked = all;
    (report, all)
}
