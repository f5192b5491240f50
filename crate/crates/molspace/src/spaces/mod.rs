//! The three data-backed molecular distance functions: docking-score
//! based, embedding based and initial-feature based.

mod docking;
mod embedding;
mod feature;

pub use docking::{load_docking_file, DockingDistance, DockingMatrix};
pub use embedding::{
    embedding_distance, l2_distance, load_embeddings_file, pool_max, AtomMatrix, EmbeddingSet,
    MolEmbedding,
};
pub use feature::{feature_distance, featurize, FeatureConfig};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("unknown molecule {0:?}")]
    UnknownMolecule(String),
    #[error("no common non-degenerate targets between {0:?} and {1:?}")]
    NoCommonTargets(String, String),
    #[error("dimension mismatch: {expected} vs {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty embedding matrix")]
    EmptyMatrix,
    #[error("non-finite embedding value")]
    NonFiniteValue,
    #[error("element {element} of molecule {mol_id:?} is not in the feature vocabulary")]
    ElementNotInVocabulary { mol_id: String, element: String },
}
