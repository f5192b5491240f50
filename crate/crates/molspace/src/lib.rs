//! molspace measures how similar the *structure* of different molecular
//! similarity spaces is. Molecules are ranked by distance to anchor
//! molecules inside each space (docking scores, learned embeddings,
//! initial atom features, chemical fingerprints), and orderings from
//! different spaces are compared with the Kendall-Tau rank distance.
//!
//! The crate is organized along the data flow:
//!
//! * [`molgraph`] — SMILES parsing into molecular graphs
//! * [`fingerprint`] — Morgan fingerprints and Tanimoto distance
//! * [`spaces`] — docking, embedding and feature distances
//! * [`ranktau`] — anchor orderings and Kendall-Tau
//! * [`pipeline`] — concordance analysis, percentile probe, synthetic data
//!
//! All randomized steps run on the seeded, self-contained generator in
//! [`rng`], so identical inputs and seeds produce byte-identical results
//! on every platform and at every thread count.

pub mod fingerprint;
pub mod io;
pub mod molgraph;
pub mod pipeline;
pub mod ranktau;
pub mod rng;
pub mod spaces;

pub use fingerprint::{morgan_fingerprint, tanimoto_distance, tanimoto_similarity, Fingerprint};
pub use molgraph::{parse_smiles, MolGraph};
pub use pipeline::{
    cross_rank_percentile, percentile_from_indices, run_concordance,
    run_concordance_with_progress, sample_anchors, synth_generate, AnalysisConfig,
    ConcordanceReport, PercentileResult, SpaceDistance, SpaceInputs, SynthParams,
};
pub use ranktau::{count_inversions, kendall_tau, rank_by_anchor, Ordering, Space, TauResult};
pub use spaces::{DockingMatrix, EmbeddingSet, FeatureConfig};
