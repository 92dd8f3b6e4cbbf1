//! Threshold curves over a channel-parameter grid.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{reference_capacity, ChannelDescriptor, LabeledChannel, ReferenceKind};
use crate::format::float17;
use crate::posynomial::label_distribution;

use super::{compute_rates, ScanParams, ThresholdError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    /// Capacity of the labeled channel.
    pub c: f64,
    pub r_u: f64,
    pub r_l: f64,
    /// Unquantized BI-AWGN capacity, for the AWGN family only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_biawgn: Option<f64>,
    /// Real AWGN capacity with unit input power, for the AWGN family only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_awgn: Option<f64>,
}

/// Runs [`compute_rates`] for each parameter of `grid`, re-instantiating
/// the family of `template`.
pub fn sweep(
    template: &LabeledChannel,
    grid: &[f64],
    params: ScanParams,
) -> Result<Vec<SweepRow>, ThresholdError> {
    if grid.is_empty() {
        return Err(ThresholdError::BadParams("empty parameter grid".into()));
    }
    params.validate()?;
    let awgn = matches!(
        template.descriptor(),
        ChannelDescriptor::QuantizedBiAwgn { .. }
    );
    grid.par_iter()
        .map(|&param| {
            let ch = template.with_parameter(param)?;
            let tree = compute_rates(&ch, params)?;
            let (c_biawgn, c_awgn) = if awgn {
                (
                    Some(reference_capacity(ReferenceKind::BiAwgn, param)?),
                    Some(reference_capacity(ReferenceKind::Awgn, param)?),
                )
            } else {
                (None, None)
            };
            Ok(SweepRow {
                param,
                c: label_distribution(&ch).mutual_information(),
                r_u: tree.r_u,
                r_l: tree.r_l,
                c_biawgn,
                c_awgn,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let awgn = rows.first().is_some_and(|r| r.c_biawgn.is_some());
    let mut out = String::from(if awgn {
        "param,C,R_U,R_L,C_biawgn,C_awgn\n"
    } else {
        "param,C,R_U,R_L\n"
    });
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{}",
            float17(r.param),
            float17(r.c),
            float17(r.r_u),
            float17(r.r_l)
        );
        if let (Some(b), Some(a)) = (r.c_biawgn, r.c_awgn) {
            let _ = write!(out, ",{},{}", float17(b), float17(a));
        }
        out.push('\n');
    }
    out
}
