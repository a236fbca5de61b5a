//! Turns parsed job blocks into runnable computations.

use crate::criterion::{
    coherence_report, default_battery, Assertion, CoherenceReport, DecompositionInput, FreeExtension, IdealProbe,
    ReportOptions,
};
use crate::error::AlgebraError;
use crate::module::Side;
use crate::parser::{BatterySpec, Document, JobDecl};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;

pub const DEFAULT_BATTERY_LIMIT: usize = 16;

/// Everything `coherence_report` needs, resolved against a document.
#[derive(Clone, Debug)]
pub struct CriterionJob {
    pub algebra: AlgebraPresentation,
    pub ideal: Vec<NcPolynomial>,
    /// `None` means the default battery.
    pub battery: Option<Vec<IdealProbe>>,
    pub battery_limit: usize,
    pub decomposition: Option<DecompositionInput>,
    pub assertions: Vec<Assertion>,
    pub options: ReportOptions,
}

impl CriterionJob {
    /// Job values take precedence over `defaults` only where the job sets them.
    pub fn from_document(doc: &Document, job: &JobDecl, defaults: &ReportOptions) -> Result<Self, AlgebraError> {
        let alg_name = job
            .algebra
            .as_deref()
            .ok_or_else(|| AlgebraError::Precondition(format!("job `{}` names no algebra", job.name)))?;
        let algebra = doc
            .algebra(alg_name)
            .ok_or_else(|| AlgebraError::Precondition(format!("unknown algebra `{alg_name}`")))?
            .clone();
        let ext_name = job
            .extension
            .as_deref()
            .ok_or_else(|| AlgebraError::Precondition(format!("job `{}` names no extension ideal", job.name)))?;
        let ideal = resolve_ideal(doc, ext_name, alg_name, Side::TwoSided)?;
        let battery = match &job.battery {
            None | Some(BatterySpec::Default) => None,
            Some(BatterySpec::Named(names)) => Some(
                names
                    .iter()
                    .map(|n| {
                        Ok(IdealProbe {
                            label: n.clone(),
                            generators: resolve_ideal(doc, n, alg_name, Side::Left)?,
                        })
                    })
                    .collect::<Result<Vec<_>, AlgebraError>>()?,
            ),
        };
        let has_decomposition = !job.subalgebra.is_empty() || !job.lifts.is_empty();
        let (decomposition, assertions) = if has_decomposition {
            (
                Some(DecompositionInput {
                    subalgebra_generators: job.subalgebra.clone(),
                    ideal_generators: job.lifts.clone(),
                    assertions: job.assertions.clone(),
                }),
                Vec::new(),
            )
        } else {
            (None, job.assertions.clone())
        };
        Ok(CriterionJob {
            algebra,
            ideal,
            battery,
            battery_limit: job.battery_limit.unwrap_or(DEFAULT_BATTERY_LIMIT),
            decomposition,
            assertions,
            options: ReportOptions {
                max_degree: job.max_degree.unwrap_or(defaults.max_degree),
                homological_bound: job.hom_bound.unwrap_or(defaults.homological_bound),
                strict_vanishing: job.strict_vanishing.unwrap_or(defaults.strict_vanishing),
            },
        })
    }

    pub fn run(&self) -> Result<(FreeExtension, CoherenceReport), AlgebraError> {
        let ext = FreeExtension::new(&self.algebra, &self.ideal, self.options.max_degree)?;
        let battery = match &self.battery {
            Some(b) => b.clone(),
            None => default_battery(ext.a(), self.battery_limit),
        };
        let report = coherence_report(
            &ext,
            &battery,
            self.decomposition.as_ref(),
            &self.assertions,
            &self.options,
        )?;
        Ok((ext, report))
    }
}

/// Generators of a named ideal, checked to live in `algebra` with `side`.
pub fn resolve_ideal(doc: &Document, name: &str, algebra: &str, side: Side) -> Result<Vec<NcPolynomial>, AlgebraError> {
    let (alg, decl) = doc
        .ideal(name)
        .ok_or_else(|| AlgebraError::Precondition(format!("unknown ideal `{name}`")))?;
    if alg != algebra {
        return Err(AlgebraError::Precondition(format!(
            "ideal `{name}` belongs to `{alg}`, not `{algebra}`"
        )));
    }
    if decl.side != side {
        return Err(AlgebraError::Precondition(format!(
            "ideal `{name}` is {} but a {side} ideal is needed",
            decl.side
        )));
    }
    Ok(decl.generators.clone())
}
