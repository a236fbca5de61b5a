use std::fmt::Write;

use gcoh_core::criterion::{ExtensionSummary, ReportOptions, Status, TENSOR_CHECK_CAP};
use gcoh_core::module::{annihilator, betti_table, syzygies};
use gcoh_core::parser::{parse_document_with, parse_polynomial, JobDecl};
use gcoh_core::pipeline::{resolve_ideal, CriterionJob, DEFAULT_BATTERY_LIMIT};
use gcoh_core::twist::{
    build_product, check_associativity, check_family_shape, check_hexagon, run_family, FamilyOutcome, TwistOutcome,
    TwistSpec,
};
use gcoh_core::{
    AlgebraPresentation, CoherenceReport, Field, FreeExtension, FreeModule, GradedAlgebra, ModulePresentation,
    NcPolynomial, RewriteSystem, Side,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{parse_options, CliError, Command, Input, JobConfig, DEFAULT_HOM_BOUND, DEFAULT_MAX_DEGREE};

/// Associativity is checked on basis triples, which grow fastest.
const ASSOCIATIVITY_CAP: u32 = 6;

pub(crate) struct CommandResult {
    pub text: String,
    pub json: Value,
    /// A mathematical witness (non-coherence, twist conflict) was found.
    pub witness: bool,
    /// A check that should always pass did not.
    pub failure: bool,
}

impl CommandResult {
    fn plain(text: String, json: Value) -> Self {
        CommandResult {
            text,
            json,
            witness: false,
            failure: false,
        }
    }
}

pub(crate) fn run(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    match config.command {
        Command::Nf => nf(config, input),
        Command::Basis => basis(config, input),
        Command::Hilbert => hilbert(config, input),
        Command::Ann => ann(config, input),
        Command::Syzygy => syzygy(config, input),
        Command::Betti => betti(config, input),
        Command::Extension => extension(config, input),
        Command::Criterion => criterion(config, input),
        Command::Twist => twist(config, input),
        Command::VerifyPaper => unreachable!("handled by the verify module"),
    }
}

fn max_degree(config: &JobConfig) -> u32 {
    config.max_degree.unwrap_or(DEFAULT_MAX_DEGREE)
}

fn hom_bound(config: &JobConfig) -> usize {
    config.homological_bound.unwrap_or(DEFAULT_HOM_BOUND)
}

fn algebra<'a>(config: &JobConfig, input: &'a Input) -> Result<&'a AlgebraPresentation, CliError> {
    match &config.algebra {
        Some(name) => input
            .doc
            .algebra(name)
            .ok_or_else(|| CliError::Usage(format!("{}: no algebra named `{name}`", input.path.display()))),
        None => input
            .doc
            .algebras()
            .next()
            .ok_or_else(|| CliError::Usage(format!("{}: the document defines no algebra", input.path.display()))),
    }
}

/// `--expr` values parsed over `pres`; errors point into the expression.
fn exprs(config: &JobConfig, pres: &AlgebraPresentation) -> Result<Vec<NcPolynomial>, CliError> {
    config
        .exprs
        .iter()
        .map(|e| {
            parse_polynomial(e, pres).map_err(|source| CliError::Parse {
                path: "--expr".into(),
                source,
            })
        })
        .collect()
}

/// Ideal generators from `--ideal NAME` (checked for `side`) or `--expr`.
fn ideal_generators(
    config: &JobConfig,
    input: &Input,
    pres: &AlgebraPresentation,
    side: Side,
) -> Result<Option<(String, Vec<NcPolynomial>)>, CliError> {
    match (&config.ideal, config.exprs.is_empty()) {
        (Some(_), false) => Err(CliError::Usage("give either --ideal or --expr, not both".into())),
        (Some(name), true) => {
            let gens = resolve_ideal(&input.doc, name, pres.name(), side)
                .map_err(CliError::algebra(format!("{}: --ideal {name}", input.path.display())))?;
            Ok(Some((name.clone(), gens)))
        }
        (None, false) => {
            let gens = exprs(config, pres)?;
            Ok(Some((config.exprs.join(", "), gens)))
        }
        (None, true) => Ok(None),
    }
}

fn homogeneous_nonzero(alg: &GradedAlgebra, p: &NcPolynomial) -> Result<Option<(u32, NcPolynomial)>, CliError> {
    let names = alg.names();
    let nf = alg
        .normal_form(p)
        .map_err(CliError::algebra(format!("{}", p.display(&names))))?;
    if nf.is_zero() {
        return Ok(None);
    }
    let d = nf
        .homogeneous_degree()
        .ok_or_else(|| CliError::Usage(format!("`{}` is not homogeneous", p.display(&names))))?;
    Ok(Some((d, nf)))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Hilbert function recomputed over GF(p) from the same source text.
fn modular_check(config: &JobConfig, input: &Input, pres: &AlgebraPresentation, dims: &[usize]) -> Option<Value> {
    let p = config.verify_prime?;
    let field = Field::Prime(p);
    let doc = match parse_document_with(&input.text, &parse_options(config, Some(field))) {
        Ok(d) => d,
        Err(e) => return Some(json!({ "prime": p, "agrees": false, "dims": [], "note": e.to_string() })),
    };
    let modp = doc.algebra(pres.name()).expect("same document, same algebra names");
    let d = dims.len() as u32 - 1;
    let mod_dims = GradedAlgebra::new(modp, d).hilbert_function();
    let first_difference = dims.iter().zip(&mod_dims).position(|(a, b)| a != b);
    Some(json!({
        "prime": p,
        "agrees": first_difference.is_none(),
        "dims": mod_dims,
        "note": match first_difference {
            None => "dimensions agree in every degree".to_string(),
            Some(n) => format!("dimensions differ first in degree {n}"),
        },
    }))
}

fn push_modular(text: &mut String, json: &mut Value, check: Option<Value>) {
    if let Some(c) = check {
        writeln!(
            text,
            "modular check GF({}): {}",
            c["prime"],
            c["note"].as_str().unwrap_or("")
        )
        .unwrap();
        json["modular_check"] = c;
    }
}

fn nf(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let pres = algebra(config, input)?;
    if config.exprs.is_empty() {
        return Err(CliError::Usage("`nf` needs --expr".into()));
    }
    let names = pres.names();
    let polys = exprs(config, pres)?;
    let degree = polys.iter().filter_map(NcPolynomial::max_degree).max().unwrap_or(0);
    let system = RewriteSystem::complete(pres, max_degree(config).max(degree));
    let mut text = String::new();
    let mut rows = Vec::new();
    for (src, p) in config.exprs.iter().zip(&polys) {
        let nf = system
            .normal_form(p)
            .map_err(CliError::algebra(format!("--expr {src}")))?;
        let shown = nf.display(&names).to_string();
        writeln!(text, "{shown}").unwrap();
        rows.push(json!({ "expr": src, "normal_form": shown }));
    }
    Ok(CommandResult::plain(
        text,
        json!({ "algebra": pres.name(), "normal_forms": rows }),
    ))
}

fn basis(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let pres = algebra(config, input)?;
    let d = max_degree(config);
    let alg = GradedAlgebra::new(pres, d);
    let names = alg.names();
    let mut text = String::new();
    let mut degrees = Vec::new();
    for n in 0..=d {
        let words: Vec<String> = alg
            .basis(n)
            .map_err(CliError::algebra("basis"))?
            .iter()
            .map(|w| w.display(&names).to_string())
            .collect();
        writeln!(text, "{n} ({}): {}", words.len(), words.join(", ")).unwrap();
        degrees.push(json!({ "degree": n, "dim": words.len(), "words": words }));
    }
    let mut json = json!({ "algebra": pres.name(), "max_degree": d, "degrees": degrees });
    push_modular(
        &mut text,
        &mut json,
        modular_check(config, input, pres, &alg.hilbert_function()),
    );
    Ok(CommandResult::plain(text, json))
}

fn hilbert(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let pres = algebra(config, input)?;
    let d = max_degree(config);
    let dims = GradedAlgebra::new(pres, d).hilbert_function();
    let mut text = format!("{}\n", join(&dims));
    let mut json = json!({ "algebra": pres.name(), "max_degree": d, "dims": dims });
    push_modular(&mut text, &mut json, modular_check(config, input, pres, &dims));
    Ok(CommandResult::plain(text, json))
}

fn ann(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let pres = algebra(config, input)?;
    let [src] = config.exprs.as_slice() else {
        return Err(CliError::Usage("`ann` needs exactly one --expr".into()));
    };
    let d = max_degree(config);
    let w = exprs(config, pres)?.remove(0);
    let e = w.max_degree().unwrap_or(0);
    let alg = GradedAlgebra::new(pres, d + e);
    let names = alg.names();
    let ideal = annihilator(&alg, &w, config.side, d).map_err(CliError::algebra(format!("ann {src}")))?;
    let gens = ideal
        .minimal_generators(&alg)
        .map_err(CliError::algebra("minimal generators"))?;
    let dims = ideal.dims();
    let mut text = format!(
        "{} annihilator of {src} in {} through degree {d}\n",
        config.side,
        pres.name()
    );
    writeln!(text, "dims: {}", join(&dims)).unwrap();
    writeln!(text, "minimal generators: {}", gens.len()).unwrap();
    let mut rows = Vec::new();
    for (deg, v) in &gens {
        let shown = alg.element(*deg, v).display(&names).to_string();
        writeln!(text, "  {deg}: {shown}").unwrap();
        rows.push(json!({ "degree": deg, "element": shown }));
    }
    Ok(CommandResult::plain(
        text,
        json!({
            "algebra": pres.name(),
            "element": src,
            "side": config.side.to_string(),
            "max_degree": d,
            "dims": dims,
            "minimal_generators": rows,
        }),
    ))
}

fn syzygy(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let pres = algebra(config, input)?;
    let (label, gens) = ideal_generators(config, input, pres, Side::Left)?
        .ok_or_else(|| CliError::Usage("`syzygy` needs --ideal or --expr".into()))?;
    let d = max_degree(config);
    let alg = GradedAlgebra::new(pres, d);
    let names = alg.names();
    let mut elements = Vec::new();
    for g in &gens {
        if let Some((deg, nf)) = homogeneous_nonzero(&alg, g)? {
            elements.push((deg, alg.coords(&nf, deg).map_err(CliError::algebra("coordinates"))?));
        }
    }
    let syz = syzygies(&alg, &FreeModule::cyclic(), None, &elements, d).map_err(CliError::algebra("syzygies"))?;
    let counts = syz.generator_counts();
    let mut text = format!("syzygies of {label} in {} through degree {d}\n", pres.name());
    writeln!(text, "source shifts: {}", join(syz.source.shifts())).unwrap();
    writeln!(text, "kernel dims: {}", join(&syz.kernel.dims())).unwrap();
    writeln!(text, "minimal syzygies per degree: {}", join(&counts)).unwrap();
    let mut rows = Vec::new();
    for (deg, v) in &syz.minimal_generators {
        let parts: Vec<String> = (0..syz.source.rank())
            .map(|i| {
                let shift = syz.source.shifts()[i];
                if shift > *deg {
                    return "0".to_string();
                }
                let c = syz.source.component(&alg, *deg, v, i);
                alg.element(deg - shift, &c).display(&names).to_string()
            })
            .collect();
        writeln!(text, "  {deg}: ({})", parts.join(", ")).unwrap();
        rows.push(json!({ "degree": deg, "components": parts }));
    }
    Ok(CommandResult::plain(
        text,
        json!({
            "algebra": pres.name(),
            "ideal": label,
            "max_degree": d,
            "source_shifts": syz.source.shifts(),
            "kernel_dims": syz.kernel.dims(),
            "generator_counts": counts,
            "minimal_generators": rows,
        }),
    ))
}

fn betti_text(rows: &[Vec<usize>]) -> String {
    let width = rows
        .iter()
        .flatten()
        .map(|c| c.to_string().len())
        .max()
        .unwrap_or(1)
        .max(2);
    let mut out = format!("{:>4}", "n");
    for n in 0..rows.first().map_or(0, Vec::len) {
        write!(out, " {n:>width$}").unwrap();
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        write!(out, "{:>4}", format!("{i}:")).unwrap();
        for c in row {
            write!(out, " {c:>width$}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn betti(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let pres = algebra(config, input)?;
    let d = max_degree(config);
    let h = hom_bound(config);
    let alg = GradedAlgebra::new(pres, d);
    let (label, module) = match ideal_generators(config, input, pres, Side::Left)? {
        Some((label, gens)) => (
            format!("{}/{label}", pres.name()),
            ModulePresentation::cyclic_quotient(&alg, &gens).map_err(CliError::algebra("module"))?,
        ),
        None => ("k".to_string(), ModulePresentation::trivial(&alg)),
    };
    let table = betti_table(&alg, &module, h, d).map_err(CliError::algebra("betti table"))?;
    let text = format!(
        "dim Tor_i^{}(k, {label})_n, i <= {h}, n <= {d}\n{}",
        pres.name(),
        betti_text(&table.rows)
    );
    Ok(CommandResult::plain(
        text,
        json!({ "algebra": pres.name(), "module": label, "table": table }),
    ))
}

fn extension_ideal(
    config: &JobConfig,
    input: &Input,
    pres: &AlgebraPresentation,
) -> Result<(String, Vec<NcPolynomial>), CliError> {
    if let Some(found) = ideal_generators(config, input, pres, Side::TwoSided)? {
        return Ok(found);
    }
    let job = input
        .doc
        .jobs()
        .find(|j| j.extension.is_some() && j.algebra.as_deref() == Some(pres.name()))
        .ok_or_else(|| CliError::Usage("`extension` needs --ideal, --expr or a job with an extension".into()))?;
    let name = job.extension.clone().expect("filtered");
    let gens = resolve_ideal(&input.doc, &name, pres.name(), Side::TwoSided).map_err(CliError::algebra(format!(
        "{}: job {}",
        input.path.display(),
        job.name
    )))?;
    Ok((name, gens))
}

fn extension_text(s: &ExtensionSummary) -> String {
    let mut out = format!("A = {}, B = {} over {}\n", s.algebra, s.quotient, s.field);
    writeln!(out, "I generated by: {}", s.ideal_generators.join(", ")).unwrap();
    writeln!(out, "dim A_n: {}", join(&s.algebra_dims)).unwrap();
    writeln!(out, "dim B_n: {}", join(&s.quotient_dims)).unwrap();
    writeln!(out, "dim I_n: {}", join(&s.ideal_dims)).unwrap();
    let rf = &s.right_freeness;
    writeln!(
        out,
        "right generators: {} (degrees {})",
        rf.generators.join(", "),
        join(&rf.generator_degrees)
    )
    .unwrap();
    writeln!(out, "free module dims: {}", join(&rf.free_module_dims)).unwrap();
    writeln!(
        out,
        "right-free in window: {}; generators settled: {}",
        yes_no(rf.holds_in_window),
        yes_no(rf.generators_settled)
    )
    .unwrap();
    out
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn extension(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let pres = algebra(config, input)?;
    let d = max_degree(config);
    let (label, gens) = extension_ideal(config, input, pres)?;
    let ext = FreeExtension::new(pres, &gens, d).map_err(CliError::algebra(format!("extension by {label}")))?;
    let summary = ExtensionSummary::new(&ext, d);
    let mut text = extension_text(&summary);
    let mut json = json!({ "ideal": label, "max_degree": d, "summary": summary });
    push_modular(
        &mut text,
        &mut json,
        modular_check(config, input, pres, &summary.algebra_dims),
    );
    Ok(CommandResult::plain(text, json))
}

fn pick_job<'a>(config: &JobConfig, input: &'a Input, command: &str) -> Result<Option<&'a JobDecl>, CliError> {
    match &config.job {
        Some(name) => input
            .doc
            .jobs()
            .find(|j| &j.name == name)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("{}: no job named `{name}`", input.path.display()))),
        None => Ok(input.doc.jobs().find(|j| j.command.as_deref() == Some(command))),
    }
}

fn cli_options(config: &JobConfig) -> ReportOptions {
    ReportOptions {
        max_degree: max_degree(config),
        homological_bound: hom_bound(config),
        strict_vanishing: config.strict_vanishing,
    }
}

fn criterion_job(config: &JobConfig, input: &Input) -> Result<CriterionJob, CliError> {
    let mut job = match pick_job(config, input, "criterion")? {
        Some(decl) if config.ideal.is_none() && config.exprs.is_empty() => {
            let mut job = CriterionJob::from_document(&input.doc, decl, &cli_options(config)).map_err(
                CliError::algebra(format!("{}: job {}", input.path.display(), decl.name)),
            )?;
            if let Some(d) = config.max_degree {
                job.options.max_degree = d;
            }
            if let Some(h) = config.homological_bound {
                job.options.homological_bound = h;
            }
            job.options.strict_vanishing |= config.strict_vanishing;
            job
        }
        _ => {
            let pres = algebra(config, input)?;
            let (_, ideal) = extension_ideal(config, input, pres)?;
            CriterionJob {
                algebra: pres.clone(),
                ideal,
                battery: None,
                battery_limit: DEFAULT_BATTERY_LIMIT,
                decomposition: None,
                assertions: Vec::new(),
                options: cli_options(config),
            }
        }
    };
    if let Some(limit) = config.battery_limit {
        job.battery_limit = limit;
    }
    Ok(job)
}

fn criterion(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let job = criterion_job(config, input)?;
    let (_, report) = job
        .run()
        .map_err(CliError::algebra(format!("{}: criterion", input.path.display())))?;
    let mut text = report_text(&report);
    let mut json = serde_json::to_value(&report).expect("reports serialize");
    push_modular(
        &mut text,
        &mut json,
        modular_check(config, input, &job.algebra, &report.extension.algebra_dims),
    );
    let failure = report.decomposition.as_ref().is_some_and(|d| !d.all_pass);
    Ok(CommandResult {
        text,
        json,
        witness: report.verdict == Status::WitnessedFailure,
        failure,
    })
}

pub(crate) fn report_text(r: &CoherenceReport) -> String {
    let w = &r.window;
    let mut out = format!(
        "window: degrees <= {}, homological degree <= {}, trailing degrees {}..={}, tensor check <= {}\n",
        w.max_degree, w.homological_bound, w.trailing_from, w.max_degree, w.tensor_check_degree
    );
    out.push_str(&extension_text(&r.extension));
    if let Some(d) = &r.decomposition {
        writeln!(
            out,
            "decomposition: spans {}, direct {}, ideal closed {}, lifts annihilate {}",
            yes_no(d.spans),
            yes_no(d.direct),
            yes_no(d.ideal_closed),
            yes_no(d.lifts_annihilate)
        )
        .unwrap();
    }
    for a in &r.assertions {
        writeln!(out, "assumed: {} [{}]", a.claim, a.citation).unwrap();
    }
    for i in &r.ideals {
        writeln!(out, "ideal {} = ({})", i.label, i.generators.join(", ")).unwrap();
        for (k, v) in &i.series {
            writeln!(out, "  {k:<18} {}", join(v)).unwrap();
        }
        for (q, row) in i.betti.iter().enumerate() {
            writeln!(out, "  {:<18} {}", format!("tor{q}(k, A/J)"), join(row)).unwrap();
        }
        writeln!(
            out,
            "  Q = Tor_1: {}; tensor = quotient: {}; Tor_2 vanishes: {}; status: {}",
            yes_no(i.tor1_agrees_with_q),
            yes_no(i.tensor_agrees_with_quotient),
            yes_no(i.tor2_vanishes),
            i.status
        )
        .unwrap();
    }
    writeln!(out, "verdict: {} ({})", r.verdict, r.verdict_basis).unwrap();
    out
}

fn pick_twist<'a>(config: &JobConfig, input: &'a Input) -> Result<(&'a TwistSpec, Option<&'a JobDecl>), CliError> {
    let job = pick_job(config, input, "twist")?;
    let name = config.twist.clone().or_else(|| job.and_then(|j| j.twist.clone()));
    let spec = match name {
        Some(n) => input
            .doc
            .twist(&n)
            .ok_or_else(|| CliError::Usage(format!("{}: no twist named `{n}`", input.path.display())))?,
        None => {
            let mut all = input.doc.twists();
            match (all.next(), all.next()) {
                (Some(t), None) => t,
                (None, _) => return Err(CliError::Usage(format!("{}: no twist block", input.path.display()))),
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(format!(
                        "{}: several twists are defined; choose one with --twist",
                        input.path.display()
                    )))
                }
            }
        }
    };
    Ok((&spec.spec, job))
}

#[derive(Serialize)]
struct TwistSummary {
    product_relations: Vec<String>,
    hilbert: Vec<usize>,
    expected_hilbert: Vec<usize>,
    hilbert_identity: bool,
    table_matches_rewriting: bool,
    hexagon: gcoh_core::twist::AxiomCheck,
    associativity: gcoh_core::twist::AxiomCheck,
}

fn twist(config: &JobConfig, input: &Input) -> Result<CommandResult, CliError> {
    let (spec, job) = pick_twist(config, input)?;
    let d = config
        .max_degree
        .or(job.and_then(|j| j.max_degree))
        .unwrap_or(DEFAULT_MAX_DEGREE);
    let h = config
        .homological_bound
        .or(job.and_then(|j| j.hom_bound))
        .unwrap_or(DEFAULT_HOM_BOUND);
    let ctx = format!("{}: twist {}", input.path.display(), spec.name);
    let (table, product) = match build_product(spec, d).map_err(CliError::algebra(ctx.clone()))? {
        TwistOutcome::Conflict(w) => {
            let text = format!(
                "twist {}: inconsistent\nconflict in degree {} at {}: {} vs {}\n",
                spec.name, w.degree, w.tensor, w.first, w.second
            );
            return Ok(CommandResult {
                text,
                json: json!({ "twist": spec.name, "outcome": "conflict", "conflict": w }),
                witness: true,
                failure: false,
            });
        }
        TwistOutcome::Consistent(x) => x,
    };
    let hexagon = check_hexagon(&table, d.min(TENSOR_CHECK_CAP)).map_err(CliError::algebra(ctx.clone()))?;
    let associativity =
        check_associativity(&table, d.min(ASSOCIATIVITY_CAP)).map_err(CliError::algebra(ctx.clone()))?;
    let names = product.presentation.names();
    let summary = TwistSummary {
        product_relations: product
            .presentation
            .relations()
            .iter()
            .map(|r| r.display(&names).to_string())
            .collect(),
        hilbert: product.hilbert.clone(),
        expected_hilbert: product.expected_hilbert.clone(),
        hilbert_identity: product.hilbert_identity,
        table_matches_rewriting: product.table_matches_rewriting,
        hexagon,
        associativity,
    };
    let mut text = format!("twist {}: consistent through degree {d}\n", spec.name);
    writeln!(text, "product relations: {}", summary.product_relations.join(", ")).unwrap();
    writeln!(text, "dims: {}", join(&summary.hilbert)).unwrap();
    writeln!(text, "dim A_i * dim B_(n-i) sums: {}", join(&summary.expected_hilbert)).unwrap();
    for (label, c) in [("hexagon", &summary.hexagon), ("associativity", &summary.associativity)] {
        writeln!(
            text,
            "{label} through degree {}: {} ({} tuples){}",
            c.max_degree,
            if c.holds() { "holds" } else { "fails" },
            c.evaluated,
            c.first_failure
                .as_deref()
                .map(|f| format!(", first failure {f}"))
                .unwrap_or_default()
        )
        .unwrap();
    }
    let mut failure = !(summary.hilbert_identity
        && summary.table_matches_rewriting
        && summary.hexagon.holds()
        && summary.associativity.holds());
    let mut witness = false;
    let mut json = json!({ "twist": spec.name, "outcome": "consistent", "max_degree": d, "product": summary });
    if check_family_shape(spec).is_ok() {
        let opts = ReportOptions {
            max_degree: d,
            homological_bound: h,
            strict_vanishing: config.strict_vanishing,
        };
        let limit = config
            .battery_limit
            .or(job.and_then(|j| j.battery_limit))
            .unwrap_or(DEFAULT_BATTERY_LIMIT);
        let family = run_family(spec, &opts, limit).map_err(CliError::algebra(ctx))?;
        if let FamilyOutcome::Report(r) = &family {
            text.push_str("family coherence report:\n");
            text.push_str(&report_text(&r.report));
            failure |= r.report.decomposition.as_ref().is_some_and(|dec| !dec.all_pass);
            witness = r.report.verdict == Status::WitnessedFailure;
        }
        json["family"] = serde_json::to_value(&family).expect("reports serialize");
    }
    Ok(CommandResult {
        text,
        json,
        witness,
        failure,
    })
}
