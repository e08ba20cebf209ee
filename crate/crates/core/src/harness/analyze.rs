use serde::Serialize;

use super::{GameSource, HarnessError};
use crate::games::{eliminate_dominated, optimal_welfare, sensitivity, ConstantSumTag, Game, Removal};
use crate::smoothness::{minty_certificate, rpoa, weighted_rpoa, SmoothnessCertificate, SmoothnessError};

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub z_min: Option<f64>,
    pub ratio_bound: Option<f64>,
    pub after_elimination: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MintyReport {
    pub feasible: bool,
    pub profile: Vec<Vec<f64>>,
    pub worst_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationReport {
    pub kept: Vec<Vec<usize>>,
    pub removals: Vec<Removal>,
    pub rpoa: Option<SmoothnessCertificate>,
}

/// Certificates JSON. Programs that need `OPT > 0` are `null` otherwise, with a note.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub game: String,
    pub actions: Vec<usize>,
    pub opt: f64,
    pub lipschitz: f64,
    pub sensitivity: f64,
    pub constant_sum: ConstantSumTag,
    pub rpoa: Option<SmoothnessCertificate>,
    pub weighted_rpoa: Option<SmoothnessCertificate>,
    pub minty: MintyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub after_elimination: Option<EliminationReport>,
    pub notes: Vec<String>,
}

fn optional(
    r: Result<SmoothnessCertificate, SmoothnessError>,
    what: &str,
    notes: &mut Vec<String>,
) -> Result<Option<SmoothnessCertificate>, HarnessError> {
    match r {
        Ok(c) => Ok(Some(c)),
        Err(SmoothnessError::NonPositiveOpt(opt)) => {
            notes.push(format!("{what} skipped: OPT = {opt} is not positive"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_analyze(source: &GameSource, seed: u64, options: &AnalyzeOptions) -> Result<AnalysisReport, HarnessError> {
    let loaded = source.load(seed)?;
    let normal = loaded.game.to_normal_form()?;
    let z_min = options.z_min.unwrap_or(0.0);
    let mut notes = Vec::new();
    let rpoa_cert = optional(rpoa(&normal, z_min), "rpoa", &mut notes)?;
    let weighted = optional(weighted_rpoa(&normal, options.ratio_bound, None), "weighted_rpoa", &mut notes)?;
    let minty = minty_certificate(&normal)?;
    let after_elimination = if options.after_elimination {
        let e = eliminate_dominated(&normal)?;
        let cert = optional(rpoa(&e.game, z_min), "rpoa after elimination", &mut notes)?;
        Some(EliminationReport { kept: e.kept, removals: e.removals, rpoa: cert })
    } else {
        None
    };
    Ok(AnalysisReport {
        game: loaded.label,
        actions: normal.actions().to_vec(),
        opt: optimal_welfare(&normal)?.0,
        lipschitz: loaded.game.lipschitz_bound(),
        sensitivity: sensitivity(&normal)?,
        constant_sum: normal.constant_sum(),
        rpoa: rpoa_cert,
        weighted_rpoa: weighted,
        minty: MintyReport {
            feasible: minty.feasible,
            profile: minty.profile.strategies().map(<[f64]>::to_vec).collect(),
            worst_slack: minty.worst_slack,
        },
        after_elimination,
        notes,
    })
}
