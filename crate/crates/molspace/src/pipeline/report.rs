//! Concordance report assembly, JSON serialization and the stdout table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::ranktau::{Space, TauResult};

use super::{AnalysisConfig, SpaceInputs};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub anchor_count: usize,
    pub seed: u64,
    pub spaces: Vec<String>,
    pub reference_space: String,
    pub min_shared_targets: usize,
    pub per_target_mean: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AnchorTau {
    pub anchor_id: String,
    pub swaps: u64,
    pub pairs: u64,
    pub normalized: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpaceReport {
    pub name: String,
    /// Means over successful anchors; absent when every anchor failed.
    pub mean_swaps: Option<f64>,
    pub mean_normalized: Option<f64>,
    pub anchors: Vec<AnchorTau>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AnchorFailure {
    pub anchor_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConcordanceReport {
    pub config: ConfigEcho,
    pub universe_size: usize,
    /// Anchors that produced results (failures excluded from means).
    pub effective_anchors: usize,
    pub metadata: BTreeMap<String, String>,
    pub spaces: Vec<SpaceReport>,
    pub failures: Vec<AnchorFailure>,
}

impl ConcordanceReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable table mirroring the published layout: one row per
    /// space with mean swap count and mean normalized Kendall-Tau.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "universe size: {}", self.universe_size).unwrap();
        writeln!(
            out,
            "anchors: {} requested, {} effective (seed {})",
            self.config.anchor_count, self.effective_anchors, self.config.seed
        )
        .unwrap();
        let name_w = self
            .spaces
            .iter()
            .map(|s| s.name.len())
            .chain(["molecular space".len()])
            .max()
            .unwrap_or(15)
            + 2;
        let header = ("molecular space", "number of swaps", "normalized kendall tau");
        writeln!(out, "{:<name_w$}{:<22}{}", header.0, header.1, header.2).unwrap();
        for space in &self.spaces {
            let (swaps, norm) = match (space.mean_swaps, space.mean_normalized) {
                (Some(s), Some(n)) => (s.to_string(), n.to_string()),
                _ => ("-".to_string(), "-".to_string()),
            };
            writeln!(out, "{:<name_w$}{:<22}{}", space.name, swaps, norm).unwrap();
        }
        if !self.failures.is_empty() {
            writeln!(out, "failed anchors: {}", self.failures.len()).unwrap();
        }
        out
    }
}

/// Ordered fold over anchor outcomes into the final report.
pub(super) fn assemble<'a>(
    cfg: &AnalysisConfig,
    inputs: &SpaceInputs,
    universe_size: usize,
    outcomes: impl Iterator<Item = (&'a str, &'a Result<Vec<(Space, TauResult)>, String>)>,
) -> ConcordanceReport {
    let mut per_space: Vec<(Space, Vec<AnchorTau>)> =
        cfg.spaces.iter().map(|&s| (s, Vec::new())).collect();
    let mut failures = Vec::new();
    let mut effective = 0usize;

    for (anchor, outcome) in outcomes {
        match outcome {
            Ok(taus) => {
                effective += 1;
                for (space, tau) in taus {
                    let slot = per_space
                        .iter_mut()
                        .find(|(s, _)| s == space)
                        .expect("space order is fixed");
                    slot.1.push(AnchorTau {
                        anchor_id: anchor.to_string(),
                        swaps: tau.swaps,
                        pairs: tau.pairs,
                        normalized: tau.normalized,
                    });
                }
            }
            Err(reason) => failures.push(AnchorFailure {
                anchor_id: anchor.to_string(),
                reason: reason.clone(),
            }),
        }
    }

    let spaces = per_space
        .into_iter()
        .map(|(space, anchors)| {
            let k = anchors.len();
            let (mean_swaps, mean_normalized) = if k == 0 {
                (None, None)
            } else {
                let swap_sum: u64 = anchors.iter().map(|a| a.swaps).sum();
                let norm_sum: f64 = anchors.iter().map(|a| a.normalized).sum();
                (
                    Some(swap_sum as f64 / k as f64),
                    Some(norm_sum / k as f64),
                )
            };
            SpaceReport {
                name: space.name().to_string(),
                mean_swaps,
                mean_normalized,
                anchors,
            }
        })
        .collect();

    let mut metadata = inputs.provenance.clone();
    metadata.insert(
        "docking_range_policy".to_string(),
        "min-max over molecules present per target".to_string(),
    );

    ConcordanceReport {
        config: ConfigEcho {
            anchor_count: cfg.anchor_count,
            seed: cfg.seed,
            spaces: cfg.spaces.iter().map(|s| s.name().to_string()).collect(),
            reference_space: Space::Docking.name().to_string(),
            min_shared_targets: cfg.min_shared_targets,
            per_target_mean: cfg.per_target_mean,
        },
        universe_size,
        effective_anchors: effective,
        metadata,
        spaces,
        failures,
    }
}
