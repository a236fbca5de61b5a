//! Checks on the built-in reference fixtures.

use std::fmt::Write;

use gcoh_core::criterion::{CoherenceReport, ReportOptions, Status, TENSOR_CHECK_CAP};
use gcoh_core::fixtures;
use gcoh_core::module::{annihilator, betti_table};
use gcoh_core::parser::Document;
use gcoh_core::pipeline::CriterionJob;
use gcoh_core::twist::{check_hexagon, extend_twist, family_spec, run_family, FamilyOutcome, TwistOutcome};
use gcoh_core::{
    AlgebraError, Field, FreeExtension, GradedAlgebra, GradedIdeal, ModulePresentation, NcPolynomial, Side, Word,
};
use serde::Serialize;
use serde_json::json;

use crate::commands::CommandResult;
use crate::{CliError, JobConfig, DEFAULT_HOM_BOUND, DEFAULT_MAX_DEGREE};

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

type Outcome = Result<(bool, String), AlgebraError>;

fn words(alg: &GradedAlgebra, letters: &[&str]) -> NcPolynomial {
    let pres = alg.presentation();
    let w: Word = pres.word(letters).expect("fixture generator names");
    NcPolynomial::monomial(w, alg.field().one())
}

fn x_y_power(alg: &GradedAlgebra, k: usize) -> NcPolynomial {
    let mut letters = vec!["x"];
    letters.extend(std::iter::repeat_n("y", k));
    words(alg, &letters)
}

fn basis_check(c: &GradedAlgebra, d: u32) -> Outcome {
    let names = c.names();
    let (yz, xz) = (c.presentation().word(&["y", "z"])?, c.presentation().word(&["x", "z"])?);
    for n in 0..=d {
        let expected = (1usize << (n + 1)) - 1;
        if c.dim(n) != expected {
            return Ok((false, format!("dim C_{n} = {}, expected {expected}", c.dim(n))));
        }
        if let Some(w) = c
            .basis(n)?
            .iter()
            .find(|w| w.find_factor(yz.letters()).is_some() || w.find_factor(xz.letters()).is_some())
        {
            return Ok((
                false,
                format!("basis word {} contains a relation lead", w.display(&names)),
            ));
        }
    }
    Ok((
        true,
        format!("dim C_n = 2^(n+1) - 1 for n <= {d}; no basis word contains yz or xz"),
    ))
}

fn annihilator_check(c_pres: &gcoh_core::AlgebraPresentation, d: u32) -> Outcome {
    let c = GradedAlgebra::new(c_pres, d + 1);
    let z = words(&c, &["z"]);
    let left = annihilator(&c, &z, Side::Left, d)?;
    let degrees: Vec<u32> = left.minimal_generators(&c)?.iter().map(|(n, _)| *n).collect();
    if degrees != (1..=d).collect::<Vec<_>>() {
        return Ok((false, format!("minimal generator degrees {degrees:?}")));
    }
    let xy: Vec<NcPolynomial> = (0..d as usize).map(|k| x_y_power(&c, k)).collect();
    let generated = GradedIdeal::generate(&c, Side::Left, &xy, d)?;
    if generated.space() != left.space() {
        return Ok((false, "x*y^i do not generate the left annihilator".into()));
    }
    let right = annihilator(&c, &z, Side::Right, d)?;
    if right.dims().iter().any(|&n| n > 0) {
        return Ok((false, format!("right annihilator dims {:?}", right.dims())));
    }
    Ok((
        true,
        format!("left: one new generator per degree 1..={d}, generated by x*y^i; right: zero"),
    ))
}

fn witness_check(c: &GradedAlgebra, report: &CoherenceReport, d: u32, h: usize) -> Outcome {
    let m = ModulePresentation::cyclic_quotient(c, &[words(c, &["z"])])?;
    let table = betti_table(c, &m, h.max(2), d)?;
    let row: Vec<usize> = (2..=d).map(|n| table.get(2, n)).collect();
    let ok = row.iter().all(|&b| b == 1) && report.verdict == Status::WitnessedFailure;
    Ok((
        ok,
        format!("Tor_2(k, C/Cz)_n for n = 2..={d}: {row:?}; verdict {}", report.verdict),
    ))
}

fn per_probe(
    reports: &[(&str, FreeExtension, CoherenceReport)],
    what: &str,
    f: impl Fn(&gcoh_core::criterion::IdealReport) -> bool,
) -> (bool, String) {
    let mut total = 0;
    let mut bad = Vec::new();
    for (name, _, r) in reports {
        for i in &r.ideals {
            total += 1;
            if !f(i) {
                bad.push(format!("{name}/{}", i.label));
            }
        }
    }
    if bad.is_empty() {
        (true, format!("{what} for all {total} fixture ideals"))
    } else {
        (false, format!("{what} fails for {}", bad.join(", ")))
    }
}

fn twist_fixture_check(d: u32) -> Outcome {
    let doc = fixtures::document(fixtures::TWISTS);
    let upto = d.min(TENSOR_CHECK_CAP);
    let mut notes = Vec::new();
    let mut ok = true;
    for t in doc.twists() {
        match extend_twist(&t.spec, upto)? {
            TwistOutcome::Consistent(table) => {
                let hex = check_hexagon(&table, upto)?;
                ok &= hex.holds() && t.spec.name != "Conflict";
                notes.push(format!(
                    "{} consistent, hexagon {}",
                    t.spec.name,
                    if hex.holds() { "holds" } else { "fails" }
                ));
            }
            TwistOutcome::Conflict(w) => {
                ok &= t.spec.name == "Conflict";
                notes.push(format!("{} conflict at {}", t.spec.name, w.tensor));
            }
        }
    }
    Ok((ok, notes.join("; ")))
}

fn family_check(d: u32, h: usize) -> Outcome {
    let q = Field::Rational;
    let opts = ReportOptions {
        max_degree: d,
        homological_bound: h,
        strict_vanishing: false,
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for (a, b, c, want_conflict) in [(0, 0, 0, false), (0, 1, 0, false), (1, 1, 1, true)] {
        let spec = family_spec(q, q.from_i64(a), q.from_i64(b), q.from_i64(c))?;
        match run_family(&spec, &opts, gcoh_core::pipeline::DEFAULT_BATTERY_LIMIT)? {
            FamilyOutcome::Conflict(w) => {
                ok &= want_conflict;
                notes.push(format!("({a},{b},{c}) conflict at {}", w.tensor));
            }
            FamilyOutcome::Report(r) => {
                let pass = r.report.decomposition.as_ref().is_some_and(|x| x.all_pass);
                ok &= !want_conflict && pass && r.report.verdict == Status::EvidencePositive;
                notes.push(format!("({a},{b},{c}) {}", r.report.verdict));
            }
        }
    }
    Ok((ok, notes.join("; ")))
}

fn fixture_report(doc: &Document, d: u32, h: usize) -> Result<(FreeExtension, CoherenceReport), AlgebraError> {
    let decl = doc.jobs().next().expect("fixtures carry a job");
    let defaults = ReportOptions {
        max_degree: d,
        homological_bound: h,
        strict_vanishing: false,
    };
    let mut job = CriterionJob::from_document(doc, decl, &defaults)?;
    job.options.max_degree = d;
    job.options.homological_bound = h;
    job.run()
}

pub(crate) fn run(config: &JobConfig) -> Result<CommandResult, CliError> {
    let d = config.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    let h = config.homological_bound.unwrap_or(DEFAULT_HOM_BOUND);
    let ctx = |what: &str| CliError::algebra(format!("built-in fixture: {what}"));
    let c_doc = fixtures::document(fixtures::COUNTEREXAMPLE);
    let a_doc = fixtures::document(fixtures::THREE_VARIABLE);
    let (c_ext, c_report) = fixture_report(&c_doc, d, h).map_err(ctx("counterexample report"))?;
    let (a_ext, a_report) = fixture_report(&a_doc, d, h).map_err(ctx("three-variable report"))?;
    let c_pres = c_doc.algebra("C").expect("fixture algebra");

    let mut checks = Vec::new();
    let mut push = |name: &'static str, outcome: Outcome| -> Result<(), CliError> {
        let (passed, detail) = outcome.map_err(CliError::algebra(format!("built-in fixture: {name}")))?;
        checks.push(Check { name, passed, detail });
        Ok(())
    };
    push("counterexample basis", basis_check(c_ext.a(), d))?;
    push("annihilators of z", annihilator_check(c_pres, d))?;
    push("non-coherence witness", witness_check(c_ext.a(), &c_report, d, h))?;
    let reports = [("C", c_ext, c_report), ("A", a_ext, a_report)];
    push(
        "Q equals Tor_1",
        Ok(per_probe(&reports, "Q = Tor_1", |i| i.tor1_agrees_with_q)),
    )?;
    push(
        "tensor equals quotient",
        Ok(per_probe(&reports, "B (x) A/J = B/B.J", |i| {
            i.tensor_agrees_with_quotient
        })),
    )?;
    push(
        "Tor_2 vanishing",
        Ok(per_probe(&reports, "Tor_2(B, A/J) = 0", |i| i.tor2_vanishes)),
    )?;
    let free = reports
        .iter()
        .map(|(n, e, _)| {
            let rf = e.right_freeness();
            (
                rf.generator_degrees == [1] && rf.holds_in_window,
                format!("{n}: right generators {:?}", rf.generators),
            )
        })
        .collect::<Vec<_>>();
    push(
        "right-freeness",
        Ok((
            free.iter().all(|(ok, _)| *ok),
            free.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join("; "),
        )),
    )?;
    let a_report = &reports[1].2;
    let dec_ok = a_report.decomposition.as_ref().is_some_and(|x| x.all_pass);
    push(
        "three-variable decomposition",
        Ok((
            dec_ok && a_report.verdict == Status::EvidencePositive,
            format!(
                "decomposition checks {}; verdict {}",
                if dec_ok { "pass" } else { "fail" },
                a_report.verdict
            ),
        )),
    )?;
    push("twist family", family_check(d, h))?;
    push("twist fixtures", twist_fixture_check(d))?;

    let mut text = format!("built-in fixture checks through degree {d}, homological degree {h}\n");
    for c in &checks {
        writeln!(
            text,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )
        .unwrap();
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    writeln!(text, "{passed}/{} passed", checks.len()).unwrap();
    Ok(CommandResult {
        text,
        json: json!({ "max_degree": d, "homological_bound": h, "checks": checks, "passed": passed, "total": checks.len() }),
        witness: false,
        failure: passed < checks.len(),
    })
}
