//! Iterated lifting of a singularity type, one coordinate per stage.

use serde::Serialize;

use super::{verify_decomposition_range, CheckReport, LiftInstance};
use crate::quotient::{lift_type, section_type};
use crate::{lcm_of, CyclicQuotientType, Error, Result, Singularity};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStage {
    /// 1-based.
    pub stage: usize,
    pub a: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    pub a_n: u64,
    /// Weights before reduction mod `m`.
    pub sigma: Vec<u64>,
    pub notation: String,
    pub quotient_type: CyclicQuotientType,
    /// Dropping the new coordinate gives back the previous type.
    pub section_round_trip: bool,
    pub instance: LiftInstance,
    pub report: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub start: String,
    pub start_sigma: Vec<u64>,
    pub start_type: CyclicQuotientType,
    pub d_max: u64,
    pub stages: Vec<ChainStage>,
    /// Stage whose check failed; later stages are not computed.
    pub halted_at: Option<usize>,
    pub limitations: Vec<String>,
}

fn notation(m: u64, sigma: &[u64]) -> String {
    let w: Vec<String> = sigma.iter().map(u64::to_string).collect();
    format!("1/{m}({})", w.join(","))
}

/// Lifts `start` once per entry of `a_sequence` with `a_n = a_t M_t`, where
/// `M_t` is the lcm of the current weights `sigma`, and checks every stage
/// for `d <= d_max`.
///
/// `sigma` defaults to the reduced weights of the start type, which must then
/// be nonzero.
pub fn chain_report(
    start: &Singularity,
    sigma: Option<&[u64]>,
    a_sequence: &[u64],
    d_max: u64,
) -> Result<ChainReport> {
    if a_sequence.is_empty() {
        return Err(Error::InvalidInstance("a_sequence must be nonempty".into()));
    }
    let ambient = start.ambient().clone();
    let start_sigma: Vec<u64> = match sigma {
        Some(s) => {
            if s.len() != ambient.dim() {
                return Err(Error::Dimension {
                    expected: ambient.dim(),
                    found: s.len(),
                });
            }
            s.to_vec()
        }
        None => ambient.weights().to_vec(),
    };
    if start_sigma.contains(&0) {
        return Err(Error::InvalidWeights(format!(
            "weights {start_sigma:?} of {ambient} contain 0; give positive representatives"
        )));
    }
    let m = ambient.order();
    if CyclicQuotientType::new(m, &start_sigma)? != ambient {
        return Err(Error::InvalidInstance(format!(
            "weights {start_sigma:?} do not reduce to {ambient}"
        )));
    }

    let mut limitations = vec![
        "checks are monomial identities of the ambient weighted ideals only".to_string(),
    ];
    if let Singularity::Hyper(h) = start {
        if !h.equation().is_zero() {
            limitations.push(format!(
                "the equation {} is carried along but membership modulo it is not tested",
                h.equation()
            ));
        }
    }

    let mut stages = Vec::with_capacity(a_sequence.len());
    let mut current_sigma = start_sigma.clone();
    let mut current_type = ambient.clone();
    let mut halted_at = None;
    for (t, &a) in a_sequence.iter().enumerate() {
        let instance = LiftInstance::new(&current_sigma, m, a)?;
        let big_m = lcm_of(&current_sigma)?;
        let a_n = a
            .checked_mul(big_m)
            .ok_or_else(|| Error::Overflow(format!("a_n = {a} * {big_m}")))?;
        let a_signed = i64::try_from(a_n).map_err(|_| Error::Overflow(format!("a_n = {a_n}")))?;
        let next_type = lift_type(&current_type, a_signed);
        let section_round_trip = section_type(&next_type, next_type.dim())? == current_type;
        let report = verify_decomposition_range(&instance, d_max, None)?;
        let passed = report.passed();
        current_sigma.push(a_n);
        stages.push(ChainStage {
            stage: t + 1,
            a,
            big_m,
            a_n,
            sigma: current_sigma.clone(),
            notation: notation(m, &current_sigma),
            quotient_type: next_type.clone(),
            section_round_trip,
            instance,
            report,
        });
        current_type = next_type;
        if !passed {
            halted_at = Some(t + 1);
            break;
        }
    }
    Ok(ChainReport {
        start: start.to_string(),
        start_type: ambient,
        start_sigma,
        d_max,
        stages,
        halted_at,
        limitations,
    })
}
