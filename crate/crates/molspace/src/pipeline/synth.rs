//! Synthetic desk-scale dataset generator.
//!
//! Every molecule gets a scalar "dockability" plus a latent direction
//! vector; per-target scores are affine projections of the latent with
//! Gaussian noise, coherent embeddings are the latent with independent
//! noise, and fingerprint surrogates are sign projections of the latent.
//! With noise 0 the docking and embedding spaces induce identical anchor
//! orderings by construction; raising the noise degrades the concordance
//! smoothly toward the random baseline. Roughly `drop_rate` of the
//! (molecule, target) scores are withheld to mimic docking failures.

use std::collections::BTreeMap;
use std::path::Path;

use crate::fingerprint::{Fingerprint, DEFAULT_WIDTH};
use crate::io::LoadError;
use crate::rng::{derive_stream, SplitMix64};
use crate::spaces::{AtomMatrix, DockingMatrix, EmbeddingSet, MolEmbedding};

use super::PipelineError;

const STREAM_LATENT: u64 = 11;
const STREAM_DIRECTION: u64 = 12;
const STREAM_TARGETS: u64 = 13;
const STREAM_SCORES: u64 = 14;
const STREAM_DROPS: u64 = 15;
const STREAM_EMBEDDING: u64 = 16;
const STREAM_ATOMS: u64 = 17;
const STREAM_FP: u64 = 18;
const STREAM_RANDOM_EMB: u64 = 19;

#[derive(Debug, Clone)]
pub struct SynthParams {
    pub molecules: usize,
    pub targets: usize,
    /// Latent and embedding dimensionality.
    pub dim: usize,
    /// Noise scale sigma >= 0 shared by score noise, latent spread and
    /// embedding noise.
    pub noise: f64,
    pub seed: u64,
    /// Fraction of (molecule, target) scores withheld.
    pub drop_rate: f64,
    /// Width of the fingerprint surrogates.
    pub fp_width: usize,
    /// Coherent embeddings track the latent; otherwise fresh Gaussians.
    pub coherent_embeddings: bool,
}

impl SynthParams {
    pub fn new(molecules: usize, targets: usize, dim: usize, noise: f64, seed: u64) -> Self {
        SynthParams {
            molecules,
            targets,
            dim,
            noise,
            seed,
            drop_rate: 0.05,
            fp_width: DEFAULT_WIDTH,
            coherent_embeddings: true,
        }
    }
}

pub struct SynthData {
    pub molecule_ids: Vec<String>,
    pub docking: DockingMatrix,
    pub embeddings: EmbeddingSet,
    pub fingerprints: BTreeMap<String, Fingerprint>,
}

impl SynthData {
    /// Write `docking.tsv`, `embeddings.tsv` and `fingerprints.fp` into
    /// a directory (created if needed).
    pub fn write_dir(&self, dir: &Path) -> Result<(), LoadError> {
        std::fs::create_dir_all(dir).map_err(|e| LoadError::io(dir, e))?;
        let docking_path = dir.join("docking.tsv");
        std::fs::write(&docking_path, self.docking.to_tsv())
            .map_err(|e| LoadError::io(&docking_path, e))?;
        let emb_path = dir.join("embeddings.tsv");
        std::fs::write(&emb_path, self.embeddings.to_tsv())
            .map_err(|e| LoadError::io(&emb_path, e))?;
        let fp_path = dir.join("fingerprints.fp");
        let fps: Vec<Fingerprint> = self.fingerprints.values().cloned().collect();
        let width = fps.first().map_or(DEFAULT_WIDTH, |f| f.width());
        crate::fingerprint::write_fingerprint_file(&fp_path, &fps, width, 0)
    }
}

pub fn synth_generate(params: &SynthParams) -> Result<SynthData, PipelineError> {
    if params.molecules < 3 {
        return Err(PipelineError::InvalidConfig(
            "synthetic universe needs at least 3 molecules".into(),
        ));
    }
    if params.targets < 1 || params.dim < 1 {
        return Err(PipelineError::InvalidConfig(
            "synthetic data needs at least 1 target and dimension 1".into(),
        ));
    }
    if !(params.noise.is_finite() && params.noise >= 0.0) {
        return Err(PipelineError::InvalidConfig("noise must be finite and >= 0".into()));
    }
    if !(0.0..1.0).contains(&params.drop_rate) {
        return Err(PipelineError::InvalidConfig("drop_rate must be in [0, 1)".into()));
    }

    let n = params.molecules;
    let d = params.dim;
    let id_width = (n.max(10) as f64).log10().ceil() as usize + 1;
    let molecule_ids: Vec<String> = (0..n).map(|i| format!("m{i:0id_width$}")).collect();
    let target_ids: Vec<String> = (0..params.targets)
        .map(|t| format!("t{t:04}"))
        .collect();

    // Shared latent direction.
    let mut dir_rng = SplitMix64::new(derive_stream(params.seed, STREAM_DIRECTION));
    let mut direction: Vec<f64> = (0..d).map(|_| dir_rng.gaussian()).collect();
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        direction[0] = 1.0;
    } else {
        for v in &mut direction {
            *v /= norm;
        }
    }

    // Per-molecule latent vector: a dockability scalar along the shared
    // direction plus isotropic noise.
    let mut latent_rng = SplitMix64::new(derive_stream(params.seed, STREAM_LATENT));
    let mut latent = Vec::with_capacity(n);
    for _ in 0..n {
        let s = latent_rng.gaussian();
        let vec: Vec<f64> = (0..d)
            .map(|j| s * direction[j] + params.noise * latent_rng.gaussian())
            .collect();
        latent.push(vec);
    }

    // Per-target affine parameters: slope magnitude in [0.5, 2] with a
    // random sign, intercept around a docking-flavored -8 kcal/mol.
    let mut target_rng = SplitMix64::new(derive_stream(params.seed, STREAM_TARGETS));
    let target_params: Vec<(f64, f64)> = (0..params.targets)
        .map(|_| {
            let magnitude = 0.5 + 1.5 * target_rng.next_f64();
            let slope = if target_rng.next_f64() < 0.5 { -magnitude } else { magnitude };
            let intercept = -8.0 + 2.0 * target_rng.gaussian();
            (slope, intercept)
        })
        .collect();

    let mut score_rng = SplitMix64::new(derive_stream(params.seed, STREAM_SCORES));
    let mut drop_rng = SplitMix64::new(derive_stream(params.seed, STREAM_DROPS));
    let mut triples = Vec::with_capacity(n * params.targets);
    for (mi, mol) in molecule_ids.iter().enumerate() {
        let projected: f64 = latent[mi]
            .iter()
            .zip(&direction)
            .map(|(x, u)| x * u)
            .sum();
        for (ti, target) in target_ids.iter().enumerate() {
            let (slope, intercept) = target_params[ti];
            // Draw both variates unconditionally so dropping a pair
            // never shifts the stream for later pairs.
            let eps = score_rng.gaussian();
            let dropped = drop_rng.next_f64() < params.drop_rate;
            if dropped {
                continue;
            }
            triples.push((
                mol.clone(),
                target.clone(),
                slope * projected + intercept + params.noise * eps,
            ));
        }
    }
    let docking = DockingMatrix::from_scores(triples)
        .map_err(PipelineError::InvalidConfig)?;

    // Embeddings: per-atom matrices whose max-pool readout recovers the
    // molecule vector exactly (first row is the vector, later rows only
    // subtract).
    let mut emb_rng = SplitMix64::new(derive_stream(params.seed, STREAM_EMBEDDING));
    let mut atom_rng = SplitMix64::new(derive_stream(params.seed, STREAM_ATOMS));
    let mut random_rng = SplitMix64::new(derive_stream(params.seed, STREAM_RANDOM_EMB));
    let mut embeddings = EmbeddingSet::new();
    for (mi, mol) in molecule_ids.iter().enumerate() {
        let vector: Vec<f64> = if params.coherent_embeddings {
            latent[mi]
                .iter()
                .map(|&x| x + params.noise * emb_rng.gaussian())
                .collect()
        } else {
            (0..d).map(|_| random_rng.gaussian()).collect()
        };
        let atoms = 1 + atom_rng.below(3) as usize;
        let mut rows = vec![vector.clone()];
        for _ in 1..atoms {
            rows.push(vector.iter().map(|&v| v - atom_rng.gaussian().abs()).collect());
        }
        embeddings
            .insert(mol, MolEmbedding::PerAtom(AtomMatrix::from_rows(rows).expect("non-empty")))
            .expect("uniform dimension");
    }

    // Fingerprint surrogates: sign projections of the latent.
    let mut fp_rng = SplitMix64::new(derive_stream(params.seed, STREAM_FP));
    let width = params.fp_width;
    let projections: Vec<(Vec<f64>, f64)> = (0..width)
        .map(|_| {
            let row: Vec<f64> = (0..d).map(|_| fp_rng.gaussian()).collect();
            let offset = 0.5 * fp_rng.gaussian();
            (row, offset)
        })
        .collect();
    let mut fingerprints = BTreeMap::new();
    for (mi, mol) in molecule_ids.iter().enumerate() {
        let mut fp = Fingerprint::empty(mol, width, 0)
            .map_err(|e| PipelineError::InvalidConfig(e.to_string()))?;
        for (bit, (row, offset)) in projections.iter().enumerate() {
            let v: f64 = row.iter().zip(&latent[mi]).map(|(a, b)| a * b).sum::<f64>() + offset;
            if v > 0.0 {
                fp.set_bit(bit);
            }
        }
        fingerprints.insert(mol.clone(), fp);
    }

    Ok(SynthData {
        molecule_ids,
        docking,
        embeddings,
        fingerprints,
    })
}
