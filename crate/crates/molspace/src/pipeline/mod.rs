//! Concordance analysis: anchor sampling, per-space orderings, their
//! Kendall-Tau distances to the docking reference, and the cross-rank
//! percentile probe for a single molecule pair.

mod report;
mod synth;

pub use report::{AnchorFailure, AnchorTau, ConcordanceReport, ConfigEcho, SpaceReport};
pub use synth::{synth_generate, SynthData, SynthParams};

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use thiserror::Error;

use crate::fingerprint::{morgan_fingerprint, tanimoto_distance, Fingerprint};
use crate::molgraph::MolGraph;
use crate::ranktau::{kendall_tau, rank_by_anchor, Ordering, Space, TauResult};
use crate::rng::{derive_stream, SplitMix64};
use crate::spaces::{
    featurize, pool_max, DockingMatrix, EmbeddingSet, FeatureConfig, SpaceError,
};

const STREAM_ANCHORS: u64 = 1;
const STREAM_RANDOM_SPACE: u64 = 2;
const STREAM_PERCENTILE: u64 = 3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no data loaded for the {0} space")]
    MissingData(Space),
    #[error("universe has {0} molecules; at least 3 are required")]
    UniverseTooSmall(usize),
    #[error("cannot sample {k} anchors from a universe of {universe}")]
    KTooLarge { k: usize, universe: usize },
    #[error("sample size {sample} plus the two probes exceeds the universe of {universe}")]
    SampleTooLarge { sample: usize, universe: usize },
    #[error("unknown molecule {0:?}")]
    UnknownMolecule(String),
    #[error("the two probe molecules must differ; both are {0:?}")]
    SameMolecule(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("ranking failed: {0}")]
    Rank(String),
}

/// Concordance run parameters.
#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    /// Anchors drawn without replacement from the universe.
    pub anchor_count: usize,
    pub seed: u64,
    /// Spaces compared against the docking reference; any of embedding,
    /// feature, fingerprint and random.
    pub spaces: Vec<Space>,
    /// Minimum contributing targets for a docking pair distance.
    pub min_shared_targets: usize,
    /// Divide docking sums by the contributing-target count.
    pub per_target_mean: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            anchor_count: 100,
            seed: 0,
            spaces: vec![Space::Embedding, Space::Feature, Space::Fingerprint, Space::Random],
            min_shared_targets: 1,
            per_target_mean: false,
        }
    }
}

/// Loaded data handles. The docking matrix is required for concordance
/// runs (it is the reference space); single-space operations only need
/// the data of the space they touch.
pub struct SpaceInputs {
    pub docking: Option<DockingMatrix>,
    pub embeddings: Option<EmbeddingSet>,
    pub graphs: Option<BTreeMap<String, MolGraph>>,
    pub fingerprints: Option<BTreeMap<String, Fingerprint>>,
    /// Morgan parameters when fingerprints are computed from graphs.
    pub fp_radius: u32,
    pub fp_width: usize,
    /// Feature vocabulary; derived from the graphs when absent.
    pub feature_config: Option<FeatureConfig>,
    /// Data provenance echoed into the report (file paths and the like).
    pub provenance: BTreeMap<String, String>,
}

impl Default for SpaceInputs {
    fn default() -> Self {
        SpaceInputs {
            docking: None,
            embeddings: None,
            graphs: None,
            fingerprints: None,
            fp_radius: crate::fingerprint::DEFAULT_RADIUS,
            fp_width: crate::fingerprint::DEFAULT_WIDTH,
            feature_config: None,
            provenance: BTreeMap::new(),
        }
    }
}

impl SpaceInputs {
    pub fn new(docking: DockingMatrix) -> Self {
        SpaceInputs {
            docking: Some(docking),
            ..SpaceInputs::default()
        }
    }

    fn docking(&self) -> Result<&DockingMatrix, PipelineError> {
        self.docking
            .as_ref()
            .ok_or(PipelineError::MissingData(Space::Docking))
    }
}

/// Draw `k` distinct molecules uniformly without replacement. Selection
/// runs a partial Fisher-Yates shuffle over the lexicographically sorted
/// universe, so the result depends only on (universe contents, k, seed).
pub fn sample_anchors(
    universe: &[String],
    k: usize,
    seed: u64,
) -> Result<Vec<String>, PipelineError> {
    if k > universe.len() {
        return Err(PipelineError::KTooLarge {
            k,
            universe: universe.len(),
        });
    }
    let mut pool: Vec<&String> = universe.iter().collect();
    pool.sort_unstable();
    let mut rng = SplitMix64::new(seed);
    let n = pool.len();
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        pool.swap(i, j);
    }
    Ok(pool[..k].iter().map(|m| m.to_string()).collect())
}

/// Pure arithmetic behind the cross-rank percentile: average the two
/// 0-based cross indices and scale by the ranked-list length
/// (sample_size + 1).
pub fn percentile_from_indices(i1: u64, i2: u64, sample_size: u64) -> f64 {
    let mean = (i1 as f64 + i2 as f64) / 2.0;
    mean / (sample_size + 1) as f64 * 100.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercentileResult {
    pub percentile: f64,
    /// 0-based index of m2 in m1's ranked list.
    pub index_in_first: u64,
    /// 0-based index of m1 in m2's ranked list.
    pub index_in_second: u64,
    /// Ranked-list length: sample_size + 1.
    pub list_len: u64,
}

/// Distance closures for all universe molecules in one space, backed by
/// tables precomputed per run.
enum SpaceTable {
    Pooled(Vec<Vec<f64>>),
    Fingerprints(Vec<Fingerprint>),
    Random,
}

struct Prepared {
    universe: Vec<String>,
    index: BTreeMap<String, usize>,
    tables: Vec<(Space, SpaceTable)>,
}

fn intersect_sorted(universe: &mut Vec<String>, keep: impl Fn(&str) -> bool) {
    universe.retain(|m| keep(m));
}

fn prepare(cfg: &AnalysisConfig, inputs: &SpaceInputs) -> Result<Prepared, PipelineError> {
    if cfg.spaces.is_empty() {
        return Err(PipelineError::InvalidConfig("no spaces requested".into()));
    }
    if cfg.anchor_count == 0 {
        return Err(PipelineError::InvalidConfig("anchor_count must be positive".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &s in &cfg.spaces {
        if s == Space::Docking {
            return Err(PipelineError::InvalidConfig(
                "docking is the reference space and cannot also be compared".into(),
            ));
        }
        if !seen.insert(s) {
            return Err(PipelineError::InvalidConfig(format!("space {s} requested twice")));
        }
    }

    // Universe: molecules available in docking and in every requested
    // space. The docking molecule list is sorted, so the universe stays
    // sorted under intersection.
    let mut universe: Vec<String> = inputs.docking()?.molecules().to_vec();
    let feature_cfg = match (&inputs.feature_config, &inputs.graphs) {
        (Some(cfg), _) => Some(cfg.clone()),
        (None, Some(graphs)) if !graphs.is_empty() => Some(
            FeatureConfig::from_graphs(graphs.values())
                .map_err(PipelineError::InvalidConfig)?,
        ),
        _ => None,
    };
    for &space in &cfg.spaces {
        match space {
            Space::Embedding => {
                let set = inputs
                    .embeddings
                    .as_ref()
                    .ok_or(PipelineError::MissingData(space))?;
                intersect_sorted(&mut universe, |m| set.contains(m));
            }
            Space::Feature => {
                let graphs = inputs.graphs.as_ref().ok_or(PipelineError::MissingData(space))?;
                let cfg = feature_cfg.as_ref().ok_or(PipelineError::MissingData(space))?;
                intersect_sorted(&mut universe, |m| {
                    graphs
                        .get(m)
                        .is_some_and(|g| featurize(g, cfg).is_ok())
                });
            }
            Space::Fingerprint => {
                if let Some(fps) = &inputs.fingerprints {
                    intersect_sorted(&mut universe, |m| fps.contains_key(m));
                } else if let Some(graphs) = &inputs.graphs {
                    intersect_sorted(&mut universe, |m| graphs.contains_key(m));
                } else {
                    return Err(PipelineError::MissingData(space));
                }
            }
            Space::Random => {}
            Space::Docking => unreachable!(),
        }
    }
    if universe.len() < 3 {
        return Err(PipelineError::UniverseTooSmall(universe.len()));
    }

    let index: BTreeMap<String, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();

    let mut tables = Vec::with_capacity(cfg.spaces.len());
    for &space in &cfg.spaces {
        let table = match space {
            Space::Embedding => {
                let set = inputs.embeddings.as_ref().unwrap();
                let pooled = universe
                    .iter()
                    .map(|m| set.pooled(m))
                    .collect::<Result<Vec<_>, _>>()?;
                SpaceTable::Pooled(pooled)
            }
            Space::Feature => {
                let graphs = inputs.graphs.as_ref().unwrap();
                let cfg = feature_cfg.as_ref().unwrap();
                let pooled = universe
                    .iter()
                    .map(|m| pool_max(&featurize(&graphs[m], cfg)?))
                    .collect::<Result<Vec<_>, _>>()?;
                SpaceTable::Pooled(pooled)
            }
            Space::Fingerprint => {
                let fps = if let Some(fps) = &inputs.fingerprints {
                    universe.iter().map(|m| fps[m].clone()).collect::<Vec<_>>()
                } else {
                    let graphs = inputs.graphs.as_ref().unwrap();
                    universe
                        .iter()
                        .map(|m| {
                            morgan_fingerprint(&graphs[m], inputs.fp_radius, inputs.fp_width)
                                .map_err(|e| PipelineError::InvalidConfig(e.to_string()))
                        })
                        .collect::<Result<Vec<_>, _>>()?
                };
                SpaceTable::Fingerprints(fps)
            }
            Space::Random => SpaceTable::Random,
            Space::Docking => unreachable!(),
        };
        tables.push((space, table));
    }

    Ok(Prepared {
        universe,
        index,
        tables,
    })
}

/// Distance from `anchor` to `mol` in a precomputed table space.
fn table_distance(
    table: &SpaceTable,
    index: &BTreeMap<String, usize>,
    anchor: &str,
    mol: &str,
) -> f64 {
    match table {
        SpaceTable::Pooled(vectors) => {
            let a = &vectors[index[anchor]];
            let b = &vectors[index[mol]];
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        }
        SpaceTable::Fingerprints(fps) => {
            tanimoto_distance(&fps[index[anchor]], &fps[index[mol]])
                .expect("uniform fingerprint widths")
        }
        SpaceTable::Random => unreachable!(),
    }
}

struct AnchorOutcome {
    anchor: String,
    result: Result<Vec<(Space, TauResult)>, String>,
}

/// Run the full concordance analysis.
pub fn run_concordance(
    cfg: &AnalysisConfig,
    inputs: &SpaceInputs,
) -> Result<ConcordanceReport, PipelineError> {
    run_concordance_with_progress(cfg, inputs, &|_, _| {})
}

/// As [`run_concordance`], invoking `progress(done, total)` as anchors
/// complete. Anchors are processed in parallel; the report is an ordered
/// fold over anchor index, so output is identical for any thread count.
pub fn run_concordance_with_progress(
    cfg: &AnalysisConfig,
    inputs: &SpaceInputs,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<ConcordanceReport, PipelineError> {
    let prepared = prepare(cfg, inputs)?;
    let docking = inputs.docking()?;
    let anchors = sample_anchors(&prepared.universe, cfg.anchor_count, derive_stream(cfg.seed, STREAM_ANCHORS))?;

    let done = AtomicUsize::new(0);
    let total = anchors.len();
    let outcomes: Vec<AnchorOutcome> = anchors
        .par_iter()
        .enumerate()
        .map(|(anchor_idx, anchor)| {
            let outcome = evaluate_anchor(cfg, docking, &prepared, anchor_idx, anchor);
            let n = done.fetch_add(1, AtomicOrdering::Relaxed) + 1;
            progress(n, total);
            AnchorOutcome {
                anchor: anchor.clone(),
                result: outcome,
            }
        })
        .collect();

    Ok(report::assemble(cfg, inputs, prepared.universe.len(), outcomes.iter().map(
        |o| (o.anchor.as_str(), &o.result),
    )))
}

fn evaluate_anchor(
    cfg: &AnalysisConfig,
    docking: &DockingMatrix,
    prepared: &Prepared,
    anchor_idx: usize,
    anchor: &str,
) -> Result<Vec<(Space, TauResult)>, String> {
    let universe = &prepared.universe;
    let docking_ordering = rank_by_anchor(anchor, Space::Docking, universe, |m| {
        let d = docking.docking_distance(anchor, m)?;
        if d.targets < cfg.min_shared_targets {
            return Err(SpaceError::NoCommonTargets(anchor.to_string(), m.to_string()));
        }
        Ok(d.value(cfg.per_target_mean))
    })
    .map_err(|e| e.to_string())?;

    let mut taus = Vec::with_capacity(prepared.tables.len());
    for (space, table) in &prepared.tables {
        let ordering = match table {
            SpaceTable::Random => {
                let stream = derive_stream(derive_stream(cfg.seed, STREAM_RANDOM_SPACE), anchor_idx as u64);
                random_ordering(anchor, universe, stream)
            }
            table => rank_by_anchor(anchor, *space, universe, |m| {
                Ok::<f64, std::convert::Infallible>(table_distance(table, &prepared.index, anchor, m))
            })
            .map_err(|e| e.to_string())?,
        };
        let tau = kendall_tau(&ordering, &docking_ordering).map_err(|e| e.to_string())?;
        taus.push((*space, tau));
    }
    Ok(taus)
}

/// A fresh uniform permutation of the universe minus the anchor: each
/// molecule draws an independent uniform pseudo-distance.
fn random_ordering(anchor: &str, universe: &[String], stream: u64) -> Ordering {
    let mut rng = SplitMix64::new(stream);
    let items: Vec<(String, f64)> = universe
        .iter()
        .filter(|m| m.as_str() != anchor)
        .map(|m| (m.clone(), rng.next_f64()))
        .collect();
    Ordering::from_distances(anchor, Space::Random, items).expect("non-empty universe")
}

/// Pairwise distance evaluator for one data-backed space: resolves the
/// needed handles once, then serves `distance(from, to)` queries and the
/// space's molecule universe.
pub struct SpaceDistance<'a> {
    space: Space,
    inputs: &'a SpaceInputs,
    feature_cfg: Option<FeatureConfig>,
    /// Divide docking sums by the contributing-target count.
    pub per_target_mean: bool,
}

impl<'a> SpaceDistance<'a> {
    pub fn new(space: Space, inputs: &'a SpaceInputs) -> Result<Self, PipelineError> {
        match space {
            Space::Random => {
                return Err(PipelineError::InvalidConfig(
                    "the random space has no pairwise distance".into(),
                ))
            }
            Space::Docking => {
                inputs.docking()?;
            }
            Space::Embedding => {
                inputs
                    .embeddings
                    .as_ref()
                    .ok_or(PipelineError::MissingData(space))?;
            }
            Space::Feature => {
                inputs.graphs.as_ref().ok_or(PipelineError::MissingData(space))?;
            }
            Space::Fingerprint => {
                if inputs.fingerprints.is_none() && inputs.graphs.is_none() {
                    return Err(PipelineError::MissingData(space));
                }
            }
        }
        let feature_cfg = match space {
            Space::Feature => Some(match &inputs.feature_config {
                Some(cfg) => cfg.clone(),
                None => FeatureConfig::from_graphs(inputs.graphs.as_ref().unwrap().values())
                    .map_err(PipelineError::InvalidConfig)?,
            }),
            _ => None,
        };
        Ok(SpaceDistance {
            space,
            inputs,
            feature_cfg,
            per_target_mean: false,
        })
    }

    /// Sorted mol_ids available in this space.
    pub fn universe(&self) -> Vec<String> {
        let mut ids: Vec<String> = match self.space {
            Space::Docking => self.inputs.docking.as_ref().unwrap().molecules().to_vec(),
            Space::Embedding => self
                .inputs
                .embeddings
                .as_ref()
                .unwrap()
                .mol_ids()
                .map(str::to_string)
                .collect(),
            Space::Fingerprint => match &self.inputs.fingerprints {
                Some(fps) => fps.keys().cloned().collect(),
                None => self.inputs.graphs.as_ref().unwrap().keys().cloned().collect(),
            },
            Space::Feature => self.inputs.graphs.as_ref().unwrap().keys().cloned().collect(),
            Space::Random => unreachable!(),
        };
        ids.sort_unstable();
        ids
    }

    pub fn distance(&self, from: &str, to: &str) -> Result<f64, PipelineError> {
        match self.space {
            Space::Docking => Ok(self
                .inputs
                .docking
                .as_ref()
                .unwrap()
                .docking_distance(from, to)?
                .value(self.per_target_mean)),
            Space::Embedding => Ok(crate::spaces::embedding_distance(
                from,
                to,
                self.inputs.embeddings.as_ref().unwrap(),
            )?),
            Space::Feature => {
                let graphs = self.inputs.graphs.as_ref().unwrap();
                let g1 = graphs
                    .get(from)
                    .ok_or_else(|| PipelineError::UnknownMolecule(from.to_string()))?;
                let g2 = graphs
                    .get(to)
                    .ok_or_else(|| PipelineError::UnknownMolecule(to.to_string()))?;
                Ok(crate::spaces::feature_distance(g1, g2, self.feature_cfg.as_ref().unwrap())?)
            }
            Space::Fingerprint => {
                let fp_of = |id: &str| -> Result<Fingerprint, PipelineError> {
                    if let Some(fps) = &self.inputs.fingerprints {
                        return fps
                            .get(id)
                            .cloned()
                            .ok_or_else(|| PipelineError::UnknownMolecule(id.to_string()));
                    }
                    let graphs = self.inputs.graphs.as_ref().unwrap();
                    let g = graphs
                        .get(id)
                        .ok_or_else(|| PipelineError::UnknownMolecule(id.to_string()))?;
                    morgan_fingerprint(g, self.inputs.fp_radius, self.inputs.fp_width)
                        .map_err(|e| PipelineError::InvalidConfig(e.to_string()))
                };
                tanimoto_distance(&fp_of(from)?, &fp_of(to)?)
                    .map_err(|e| PipelineError::InvalidConfig(e.to_string()))
            }
            Space::Random => unreachable!(),
        }
    }

    /// Ordering of a molecule set by distance to `anchor`.
    pub fn rank(&self, anchor: &str, universe: &[String]) -> Result<Ordering, PipelineError> {
        rank_by_anchor(anchor, self.space, universe, |m| self.distance(anchor, m))
            .map_err(|e| PipelineError::Rank(e.to_string()))
    }
}

/// Rank a background sample plus the two probes from each probe, and
/// average the cross indices into a percentile.
pub fn cross_rank_percentile(
    m1: &str,
    m2: &str,
    space: Space,
    sample_size: usize,
    seed: u64,
    inputs: &SpaceInputs,
) -> Result<PercentileResult, PipelineError> {
    if m1 == m2 {
        return Err(PipelineError::SameMolecule(m1.to_string()));
    }
    if space == Space::Random {
        return Err(PipelineError::InvalidConfig(
            "cross-rank percentile over the random space is meaningless".into(),
        ));
    }
    let evaluator = SpaceDistance::new(space, inputs)?;
    let universe = evaluator.universe();
    for probe in [m1, m2] {
        if !universe.iter().any(|m| m == probe) {
            return Err(PipelineError::UnknownMolecule(probe.to_string()));
        }
    }
    if sample_size + 2 > universe.len() {
        return Err(PipelineError::SampleTooLarge {
            sample: sample_size,
            universe: universe.len(),
        });
    }

    let background: Vec<String> = universe
        .iter()
        .filter(|m| m.as_str() != m1 && m.as_str() != m2)
        .cloned()
        .collect();
    let mut working =
        sample_anchors(&background, sample_size, derive_stream(seed, STREAM_PERCENTILE))?;
    working.push(m1.to_string());
    working.push(m2.to_string());
    working.sort_unstable();

    let ord1 = evaluator.rank(m1, &working)?;
    let ord2 = evaluator.rank(m2, &working)?;
    let index_in_first = ord1.index_of(m2).expect("m2 ranked from m1") as u64;
    let index_in_second = ord2.index_of(m1).expect("m1 ranked from m2") as u64;

    Ok(PercentileResult {
        percentile: percentile_from_indices(index_in_first, index_in_second, sample_size as u64),
        index_in_first,
        index_in_second,
        list_len: sample_size as u64 + 1,
    })
}
