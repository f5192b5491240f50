//! Initial atom-level feature space: the numeric representation a graph
//! model would consume, used here as its own distance space.

use super::embedding::{l2_distance, pool_max, AtomMatrix};
use super::SpaceError;
use crate::molgraph::{atomic_number, element_symbol, MolGraph};

/// Feature layout: one-hot element over an ordered vocabulary, then the
/// enabled numeric channels (degree, total hydrogen count, formal
/// charge, aromatic flag), each as a real value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureConfig {
    vocabulary: Vec<u8>,
    pub degree: bool,
    pub hydrogens: bool,
    pub charge: bool,
    pub aromatic: bool,
}

impl FeatureConfig {
    /// Vocabulary entries are atomic numbers; order defines the one-hot
    /// layout. Duplicates are rejected.
    pub fn new(vocabulary: Vec<u8>) -> Result<Self, String> {
        if vocabulary.is_empty() {
            return Err("feature vocabulary must be non-empty".to_string());
        }
        let mut seen = std::collections::HashSet::new();
        for &z in &vocabulary {
            if !seen.insert(z) {
                return Err(format!("duplicate element {} in vocabulary", element_symbol(z)));
            }
        }
        Ok(FeatureConfig {
            vocabulary,
            degree: true,
            hydrogens: true,
            charge: true,
            aromatic: true,
        })
    }

    /// Parse a comma-separated symbol list, e.g. `"C,N,O"`.
    pub fn from_symbols(symbols: &str) -> Result<Self, String> {
        let vocab = symbols
            .split(',')
            .map(|s| {
                let s = s.trim();
                atomic_number(s).ok_or_else(|| format!("unknown element symbol {s:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(vocab)
    }

    /// Vocabulary of every element observed in `graphs`, sorted by
    /// atomic number — a deterministic default that always covers its
    /// own corpus.
    pub fn from_graphs<'a>(graphs: impl IntoIterator<Item = &'a MolGraph>) -> Result<Self, String> {
        let mut elements: Vec<u8> = graphs
            .into_iter()
            .flat_map(|g| g.atoms().iter().map(|a| a.element))
            .collect();
        elements.sort_unstable();
        elements.dedup();
        Self::new(elements)
    }

    pub fn vocabulary(&self) -> &[u8] {
        &self.vocabulary
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
            + usize::from(self.degree)
            + usize::from(self.hydrogens)
            + usize::from(self.charge)
            + usize::from(self.aromatic)
    }
}

/// Per-atom feature matrix of a molecule.
pub fn featurize(graph: &MolGraph, cfg: &FeatureConfig) -> Result<AtomMatrix, SpaceError> {
    let mut rows = Vec::with_capacity(graph.atom_count());
    for (i, atom) in graph.atoms().iter().enumerate() {
        let slot = cfg
            .vocabulary
            .iter()
            .position(|&z| z == atom.element)
            .ok_or_else(|| SpaceError::ElementNotInVocabulary {
                mol_id: graph.mol_id.clone(),
                element: element_symbol(atom.element).to_string(),
            })?;
        let mut row = vec![0.0; cfg.dim()];
        row[slot] = 1.0;
        let mut k = cfg.vocabulary.len();
        if cfg.degree {
            row[k] = graph.degree(i) as f64;
            k += 1;
        }
        if cfg.hydrogens {
            row[k] = graph.hydrogen_count(i) as f64;
            k += 1;
        }
        if cfg.charge {
            row[k] = atom.formal_charge as f64;
            k += 1;
        }
        if cfg.aromatic {
            row[k] = atom.aromatic as u8 as f64;
        }
        rows.push(row);
    }
    AtomMatrix::from_rows(rows)
}

/// Pooled-feature L2 distance between two molecules.
pub fn feature_distance(
    g1: &MolGraph,
    g2: &MolGraph,
    cfg: &FeatureConfig,
) -> Result<f64, SpaceError> {
    let a = pool_max(&featurize(g1, cfg)?)?;
    let b = pool_max(&featurize(g2, cfg)?)?;
    l2_distance(&a, &b)
}
