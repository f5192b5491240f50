//! Per-molecule embeddings, max-pool graph readout and the pooled-vector
//! L2 distance.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::SpaceError;
use crate::io::{header_pairs, payload_lines, LoadError};

/// Row-major atoms-by-dim matrix of per-atom embedding vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomMatrix {
    atoms: usize,
    dim: usize,
    data: Vec<f64>,
}

impl AtomMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let Some(first) = rows.first() else {
            return Err(SpaceError::EmptyMatrix);
        };
        let dim = first.len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(SpaceError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(AtomMatrix {
            atoms: rows.len(),
            dim,
            data,
        })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// One molecule's embedding: raw per-atom matrix, or already pooled.
#[derive(Debug, Clone, PartialEq)]
pub enum MolEmbedding {
    PerAtom(AtomMatrix),
    Pooled(Vec<f64>),
}

/// Embeddings keyed by mol_id, with one shared dimensionality.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingSet {
    dim: usize,
    entries: BTreeMap<String, MolEmbedding>,
}

impl EmbeddingSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, mol_id: &str, emb: MolEmbedding) -> Result<(), SpaceError> {
        let dim = match &emb {
            MolEmbedding::PerAtom(m) => m.dim(),
            MolEmbedding::Pooled(v) => v.len(),
        };
        let finite = match &emb {
            MolEmbedding::PerAtom(m) => m.data.iter().all(|v| v.is_finite()),
            MolEmbedding::Pooled(v) => v.iter().all(|v| v.is_finite()),
        };
        if !finite {
            return Err(SpaceError::NonFiniteValue);
        }
        if self.entries.is_empty() {
            self.dim = dim;
        } else if dim != self.dim {
            return Err(SpaceError::DimensionMismatch {
                expected: self.dim,
                got: dim,
            });
        }
        self.entries.insert(mol_id.to_string(), emb);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, mol_id: &str) -> bool {
        self.entries.contains_key(mol_id)
    }

    pub fn mol_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get(&self, mol_id: &str) -> Option<&MolEmbedding> {
        self.entries.get(mol_id)
    }

    /// The molecule's pooled vector: the stored vector for pre-pooled
    /// entries, the max-pool readout otherwise.
    pub fn pooled(&self, mol_id: &str) -> Result<Vec<f64>, SpaceError> {
        match self.entries.get(mol_id) {
            None => Err(SpaceError::UnknownMolecule(mol_id.to_string())),
            Some(MolEmbedding::Pooled(v)) => Ok(v.clone()),
            Some(MolEmbedding::PerAtom(m)) => pool_max(m),
        }
    }

    /// Serialize to the embedding TSV format, with a `#format=` header.
    pub fn to_tsv(&self) -> String {
        let per_atom = self
            .entries
            .values()
            .any(|e| matches!(e, MolEmbedding::PerAtom(_)));
        let mut out = String::new();
        writeln!(out, "#format={}", if per_atom { "atoms" } else { "pooled" }).unwrap();
        for (id, emb) in &self.entries {
            match emb {
                MolEmbedding::PerAtom(m) => {
                    for i in 0..m.atoms() {
                        write!(out, "{id}\t{i}").unwrap();
                        for v in m.row(i) {
                            write!(out, "\t{v}").unwrap();
                        }
                        out.push('\n');
                    }
                }
                MolEmbedding::Pooled(v) => {
                    write!(out, "{id}").unwrap();
                    for x in v {
                        write!(out, "\t{x}").unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Column-wise maximum over the atom rows: the graph readout that turns
/// an atoms-by-dim matrix into one molecule-level vector.
pub fn pool_max(matrix: &AtomMatrix) -> Result<Vec<f64>, SpaceError> {
    if matrix.atoms() == 0 {
        return Err(SpaceError::EmptyMatrix);
    }
    let mut pooled = matrix.row(0).to_vec();
    for i in 1..matrix.atoms() {
        for (p, v) in pooled.iter_mut().zip(matrix.row(i)) {
            if *v > *p {
                *p = *v;
            }
        }
    }
    Ok(pooled)
}

/// Euclidean distance between equal-length vectors.
pub fn l2_distance(a: &[f64], b: &[f64]) -> Result<f64, SpaceError> {
    if a.len() != b.len() {
        return Err(SpaceError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// L2 norm of the pooled-vector difference of two molecules.
pub fn embedding_distance(m1: &str, m2: &str, set: &EmbeddingSet) -> Result<f64, SpaceError> {
    let a = set.pooled(m1)?;
    let b = set.pooled(m2)?;
    l2_distance(&a, &b)
}

/// Load an embedding TSV. Two row shapes exist:
/// `mol_id<TAB>atom_index<TAB>v0..v{d-1}` (per-atom) and
/// `mol_id<TAB>v0..v{d-1}` (pooled); a file must use exactly one. A
/// `#format=atoms|pooled` first line pins the shape; without it, rows
/// where the second field parses as an unsigned integer are treated as
/// per-atom. Atom indices per molecule must be 0..k contiguous.
pub fn load_embeddings_file(path: &Path) -> Result<EmbeddingSet, LoadError> {
    let contents = std::fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let declared = header_pairs(&contents)
        .into_iter()
        .find(|(k, _)| k == "format")
        .map(|(_, v)| v);
    let per_atom = match declared.as_deref() {
        Some("atoms") => true,
        Some("pooled") => false,
        Some(other) => {
            return Err(LoadError::data(
                path,
                1,
                format!("unknown embedding format {other:?} (expected atoms or pooled)"),
            ))
        }
        None => {
            // Heuristic: per-atom iff every row's second field is an
            // unsigned integer.
            let mut any = false;
            let mut all_indexed = true;
            for (_, line) in payload_lines(&contents) {
                any = true;
                let second = line.split('\t').nth(1).unwrap_or("");
                if second.parse::<u32>().is_err() {
                    all_indexed = false;
                    break;
                }
            }
            any && all_indexed
        }
    };

    let mut set = EmbeddingSet::new();
    if per_atom {
        let mut rows: BTreeMap<String, Vec<(u32, Vec<f64>)>> = BTreeMap::new();
        for (line_no, line) in payload_lines(&contents) {
            let mut fields = line.split('\t');
            let id = fields
                .next()
                .filter(|s| !s.is_empty())
                .ok_or_else(|| LoadError::data(path, line_no, "missing mol_id"))?;
            let idx: u32 = fields
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LoadError::data(path, line_no, "missing or bad atom_index"))?;
            let vector = parse_vector(fields, path, line_no)?;
            rows.entry(id.to_string()).or_default().push((idx, vector));
        }
        for (id, mut atom_rows) in rows {
            atom_rows.sort_by_key(|&(i, _)| i);
            for (expect, &(got, _)) in atom_rows.iter().enumerate() {
                if got as usize != expect {
                    return Err(LoadError::data(
                        path,
                        0,
                        format!("molecule {id:?}: atom indices are not contiguous from 0"),
                    ));
                }
            }
            let matrix = AtomMatrix::from_rows(atom_rows.into_iter().map(|(_, v)| v).collect())
                .map_err(|e| LoadError::data(path, 0, format!("molecule {id:?}: {e}")))?;
            set.insert(&id, MolEmbedding::PerAtom(matrix))
                .map_err(|e| LoadError::data(path, 0, format!("molecule {id:?}: {e}")))?;
        }
    } else {
        for (line_no, line) in payload_lines(&contents) {
            let mut fields = line.split('\t');
            let id = fields
                .next()
                .filter(|s| !s.is_empty())
                .ok_or_else(|| LoadError::data(path, line_no, "missing mol_id"))?;
            if set.contains(id) {
                return Err(LoadError::data(path, line_no, format!("duplicate mol_id {id:?}")));
            }
            let vector = parse_vector(fields, path, line_no)?;
            set.insert(id, MolEmbedding::Pooled(vector))
                .map_err(|e| LoadError::data(path, line_no, format!("molecule {id:?}: {e}")))?;
        }
    }
    Ok(set)
}

fn parse_vector<'a>(
    fields: impl Iterator<Item = &'a str>,
    path: &Path,
    line_no: usize,
) -> Result<Vec<f64>, LoadError> {
    let mut out = Vec::new();
    for f in fields {
        let v: f64 = f
            .parse()
            .map_err(|_| LoadError::data(path, line_no, format!("bad value {f:?}")))?;
        if !v.is_finite() {
            return Err(LoadError::data(path, line_no, format!("non-finite value {v}")));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(LoadError::data(path, line_no, "empty embedding vector"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(rows: &[&[f64]]) -> AtomMatrix {
        AtomMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn pool_max_worked_examples() {
        assert_eq!(pool_max(&matrix(&[&[1.0, 0.0], &[0.0, 2.0]])).unwrap(), vec![1.0, 2.0]);
        assert_eq!(pool_max(&matrix(&[&[0.5, -0.5]])).unwrap(), vec![0.5, -0.5]);
        assert_eq!(
            AtomMatrix::from_rows(vec![]).unwrap_err(),
            SpaceError::EmptyMatrix
        );
    }

    #[test]
    fn pool_max_row_permutation_invariant() {
        let a = matrix(&[&[1.0, -2.0], &[0.0, 5.0], &[3.0, 0.1]]);
        let b = matrix(&[&[3.0, 0.1], &[1.0, -2.0], &[0.0, 5.0]]);
        assert_eq!(pool_max(&a).unwrap(), pool_max(&b).unwrap());
    }

    #[test]
    fn embedding_distance_examples() {
        let mut set = EmbeddingSet::new();
        set.insert("a", MolEmbedding::Pooled(vec![1.0, 2.0])).unwrap();
        set.insert("b", MolEmbedding::Pooled(vec![0.5, 0.5])).unwrap();
        set.insert(
            "c",
            MolEmbedding::PerAtom(matrix(&[&[1.0, 0.0]])),
        )
        .unwrap();
        set.insert(
            "d",
            MolEmbedding::PerAtom(matrix(&[&[0.0, 1.0]])),
        )
        .unwrap();

        assert_eq!(embedding_distance("a", "a", &set).unwrap(), 0.0);
        let d = embedding_distance("a", "b", &set).unwrap();
        assert!((d - 2.5f64.sqrt()).abs() < 1e-12);
        let d = embedding_distance("c", "d", &set).unwrap();
        assert!((d - 2.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            embedding_distance("a", "zz", &set),
            Err(SpaceError::UnknownMolecule("zz".into()))
        );
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let mut set = EmbeddingSet::new();
        set.insert("a", MolEmbedding::Pooled(vec![1.0, 2.0])).unwrap();
        assert!(set.insert("b", MolEmbedding::Pooled(vec![1.0])).is_err());
    }

    #[test]
    fn file_round_trip_per_atom_and_pooled() {
        let dir = std::env::temp_dir().join(format!("molspace-emb-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("e.tsv");

        let mut set = EmbeddingSet::new();
        set.insert("m1", MolEmbedding::PerAtom(matrix(&[&[1.0, 2.0], &[3.0, -1.0]])))
            .unwrap();
        set.insert("m2", MolEmbedding::PerAtom(matrix(&[&[0.25, 0.5]])))
            .unwrap();
        std::fs::write(&path, set.to_tsv()).unwrap();
        let loaded = load_embeddings_file(&path).unwrap();
        assert_eq!(loaded.pooled("m1").unwrap(), vec![3.0, 2.0]);
        assert_eq!(loaded.pooled("m2").unwrap(), vec![0.25, 0.5]);

        let mut pooled = EmbeddingSet::new();
        pooled.insert("m1", MolEmbedding::Pooled(vec![1.5, -0.25])).unwrap();
        std::fs::write(&path, pooled.to_tsv()).unwrap();
        let loaded = load_embeddings_file(&path).unwrap();
        assert_eq!(loaded.pooled("m1").unwrap(), vec![1.5, -0.25]);

        // Headerless pooled floats fall back to the heuristic.
        std::fs::write(&path, "m1\t0.5\t1.5\nm2\t0.25\t-1\n").unwrap();
        let loaded = load_embeddings_file(&path).unwrap();
        assert_eq!(loaded.pooled("m2").unwrap(), vec![0.25, -1.0]);

        std::fs::write(&path, "m1\t0\t1.5\nm1\t1\t2.5\n").unwrap();
        let loaded = load_embeddings_file(&path).unwrap();
        assert_eq!(loaded.pooled("m1").unwrap(), vec![2.5]);

        std::fs::write(&path, "m1\t0\t1.5\nm1\t2\t2.5\n").unwrap();
        assert!(load_embeddings_file(&path).is_err());

        std::fs::write(&path, "m1\t0\t1.5\nm2\tinf\t2.5\n").unwrap();
        assert!(load_embeddings_file(&path).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    proptest! {
        // Raising any entry never lowers any pooled coordinate.
        #[test]
        fn pool_max_is_monotone(seed in any::<u64>()) {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let rows = 1 + (rng.next_u64() % 5) as usize;
            let dim = 1 + (rng.next_u64() % 4) as usize;
            let data: Vec<Vec<f64>> = (0..rows)
                .map(|_| (0..dim).map(|_| rng.gaussian()).collect())
                .collect();
            let base = pool_max(&AtomMatrix::from_rows(data.clone()).unwrap()).unwrap();

            let mut bumped = data;
            let r = (rng.next_u64() % rows as u64) as usize;
            let c = (rng.next_u64() % dim as u64) as usize;
            bumped[r][c] += rng.next_f64() * 3.0;
            let after = pool_max(&AtomMatrix::from_rows(bumped).unwrap()).unwrap();
            for (b, a) in base.iter().zip(&after) {
                prop_assert!(a >= b);
            }
        }
    }
}
