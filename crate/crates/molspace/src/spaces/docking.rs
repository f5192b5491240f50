//! Sparse molecule-by-target docking score table and the relative
//! docking-energy distance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::SpaceError;
use crate::io::{payload_lines, LoadError};

#[derive(Debug, Clone, Copy)]
struct TargetStats {
    count: usize,
    min: f64,
    max: f64,
}

impl TargetStats {
    /// A target contributes to distances only when it can define a
    /// non-zero score range: at least two present molecules with
    /// distinct scores.
    fn degenerate(&self) -> bool {
        self.count < 2 || self.min == self.max
    }
}

/// Sparse score table. Molecule and target lists are sorted, so the
/// structure is independent of input row order.
#[derive(Debug, Clone)]
pub struct DockingMatrix {
    molecules: Vec<String>,
    targets: Vec<String>,
    mol_index: HashMap<String, usize>,
    /// Per molecule: (target index, score), sorted by target index.
    rows: Vec<Vec<(u32, f64)>>,
    stats: Vec<TargetStats>,
}

/// Result of the pairwise docking distance: the raw sum over
/// contributing targets plus how many targets contributed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DockingDistance {
    pub sum: f64,
    pub targets: usize,
}

impl DockingDistance {
    /// The distance value: the raw sum, or the per-target mean when
    /// `per_target_mean` is set (useful on sparse data where pairs share
    /// varying numbers of targets).
    pub fn value(&self, per_target_mean: bool) -> f64 {
        if per_target_mean {
            self.sum / self.targets as f64
        } else {
            self.sum
        }
    }
}

impl DockingMatrix {
    /// Build from (molecule, target, score) triples. Scores must be
    /// finite; duplicate (molecule, target) pairs are rejected.
    pub fn from_scores<I, S>(scores: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: AsRef<str>,
    {
        let triples: Vec<(String, String, f64)> = scores
            .into_iter()
            .map(|(m, t, s)| (m.as_ref().to_string(), t.as_ref().to_string(), s))
            .collect();
        for (m, t, s) in &triples {
            if !s.is_finite() {
                return Err(format!("non-finite score {s} for ({m}, {t})"));
            }
        }

        let mut molecules: Vec<String> = triples.iter().map(|(m, _, _)| m.clone()).collect();
        molecules.sort_unstable();
        molecules.dedup();
        let mut targets: Vec<String> = triples.iter().map(|(_, t, _)| t.clone()).collect();
        targets.sort_unstable();
        targets.dedup();

        let mol_index: HashMap<String, usize> = molecules
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let target_index: HashMap<&str, u32> = targets
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i as u32))
            .collect();

        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); molecules.len()];
        let mut stats = vec![
            TargetStats {
                count: 0,
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            };
            targets.len()
        ];
        for (m, t, s) in &triples {
            let mi = mol_index[m.as_str()];
            let ti = target_index[t.as_str()];
            rows[mi].push((ti, *s));
            let st = &mut stats[ti as usize];
            st.count += 1;
            st.min = st.min.min(*s);
            st.max = st.max.max(*s);
        }
        for (mi, row) in rows.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(t, _)| t);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(format!(
                    "duplicate (molecule, target) score for {}",
                    molecules[mi]
                ));
            }
        }

        Ok(DockingMatrix {
            molecules,
            targets,
            mol_index,
            rows,
            stats,
        })
    }

    pub fn molecules(&self) -> &[String] {
        &self.molecules
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn contains(&self, mol_id: &str) -> bool {
        self.mol_index.contains_key(mol_id)
    }

    pub fn score(&self, mol_id: &str, target_id: &str) -> Option<f64> {
        let mi = *self.mol_index.get(mol_id)?;
        let ti = self.targets.iter().position(|t| t == target_id)? as u32;
        self.rows[mi]
            .binary_search_by_key(&ti, |&(t, _)| t)
            .ok()
            .map(|k| self.rows[mi][k].1)
    }

    /// Relative docking-energy distance: over every non-degenerate target
    /// where both molecules have scores, sum |t(m1) - t(m2)| divided by
    /// that target's score range. Scanning targets in sorted index order
    /// keeps the floating-point sum bit-stable.
    pub fn docking_distance(&self, m1: &str, m2: &str) -> Result<DockingDistance, SpaceError> {
        let i1 = *self
            .mol_index
            .get(m1)
            .ok_or_else(|| SpaceError::UnknownMolecule(m1.to_string()))?;
        let i2 = *self
            .mol_index
            .get(m2)
            .ok_or_else(|| SpaceError::UnknownMolecule(m2.to_string()))?;

        let (row1, row2) = (&self.rows[i1], &self.rows[i2]);
        let mut sum = 0.0f64;
        let mut used = 0usize;
        let (mut a, mut b) = (0usize, 0usize);
        while a < row1.len() && b < row2.len() {
            let (t1, s1) = row1[a];
            let (t2, s2) = row2[b];
            match t1.cmp(&t2) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    let st = &self.stats[t1 as usize];
                    if !st.degenerate() {
                        sum += (s1 - s2).abs() / (st.max - st.min);
                        used += 1;
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
        if used == 0 {
            return Err(SpaceError::NoCommonTargets(m1.to_string(), m2.to_string()));
        }
        Ok(DockingDistance { sum, targets: used })
    }

    /// Serialize as `mol_id<TAB>target_id<TAB>score` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (mi, row) in self.rows.iter().enumerate() {
            for &(ti, s) in row {
                writeln!(out, "{}\t{}\t{}", self.molecules[mi], self.targets[ti as usize], s)
                    .unwrap();
            }
        }
        out
    }
}

/// Load a docking TSV: `mol_id<TAB>target_id<TAB>score` per line, `#`
/// comments allowed.
pub fn load_docking_file(path: &Path) -> Result<DockingMatrix, LoadError> {
    let contents = std::fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let mut triples = Vec::new();
    for (line_no, line) in payload_lines(&contents) {
        let mut fields = line.split('\t');
        let (Some(mol), Some(target), Some(score), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(LoadError::data(
                path,
                line_no,
                "expected `mol_id<TAB>target_id<TAB>score`",
            ));
        };
        let score: f64 = score
            .parse()
            .map_err(|_| LoadError::data(path, line_no, format!("bad score {score:?}")))?;
        if !score.is_finite() {
            return Err(LoadError::data(path, line_no, format!("non-finite score {score}")));
        }
        triples.push((mol.to_string(), target.to_string(), score));
    }
    DockingMatrix::from_scores(triples).map_err(|msg| LoadError::data(path, 0, msg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_matrix() -> DockingMatrix {
        // Target A: m1 = -8, m2 = -6, plus molecules pinning the range to
        // [-10, -2]. Target B: m1 = m2 = -5 with a non-degenerate range.
        DockingMatrix::from_scores(vec![
            ("m1", "A", -8.0),
            ("m2", "A", -6.0),
            ("lo", "A", -10.0),
            ("hi", "A", -2.0),
            ("m1", "B", -5.0),
            ("m2", "B", -5.0),
            ("lo", "B", -9.0),
            ("hi", "B", -1.0),
        ])
        .unwrap()
    }

    #[test]
    fn worked_example() {
        let m = example_matrix();
        let d = m.docking_distance("m1", "m2").unwrap();
        assert_eq!(d.targets, 2);
        assert!((d.sum - 0.25).abs() < 1e-12, "{}", d.sum);
    }

    #[test]
    fn self_distance_is_zero_with_full_target_count() {
        let m = example_matrix();
        let d = m.docking_distance("m1", "m1").unwrap();
        assert_eq!(d.sum, 0.0);
        assert_eq!(d.targets, 2);
    }

    #[test]
    fn affine_rescaling_leaves_distance_unchanged() {
        let m = example_matrix();
        let base = m.docking_distance("m1", "m2").unwrap();
        // t' = 2t + 3 on target A only.
        let rescaled = DockingMatrix::from_scores(vec![
            ("m1", "A", 2.0 * -8.0 + 3.0),
            ("m2", "A", 2.0 * -6.0 + 3.0),
            ("lo", "A", 2.0 * -10.0 + 3.0),
            ("hi", "A", 2.0 * -2.0 + 3.0),
            ("m1", "B", -5.0),
            ("m2", "B", -5.0),
            ("lo", "B", -9.0),
            ("hi", "B", -1.0),
        ])
        .unwrap()
        .docking_distance("m1", "m2")
        .unwrap();
        assert!((base.sum - rescaled.sum).abs() <= 1e-9 * base.sum.abs());
        assert_eq!(base.targets, rescaled.targets);
    }

    #[test]
    fn degenerate_targets_are_skipped() {
        // Target D has a single molecule; target E has zero range.
        let m = DockingMatrix::from_scores(vec![
            ("m1", "A", -8.0),
            ("m2", "A", -6.0),
            ("m1", "D", -3.0),
            ("m1", "E", -4.0),
            ("m2", "E", -4.0),
        ])
        .unwrap();
        let d = m.docking_distance("m1", "m2").unwrap();
        assert_eq!(d.targets, 1);
    }

    #[test]
    fn no_common_targets_is_typed() {
        let m = DockingMatrix::from_scores(vec![
            ("m1", "A", -8.0),
            ("x", "A", -6.0),
            ("m2", "B", -5.0),
            ("y", "B", -1.0),
        ])
        .unwrap();
        assert_eq!(
            m.docking_distance("m1", "m2"),
            Err(SpaceError::NoCommonTargets("m1".into(), "m2".into()))
        );
        assert_eq!(
            m.docking_distance("m1", "zz"),
            Err(SpaceError::UnknownMolecule("zz".into()))
        );
    }

    #[test]
    fn per_target_mean_divides_by_count() {
        let d = DockingDistance { sum: 0.5, targets: 2 };
        assert_eq!(d.value(false), 0.5);
        assert_eq!(d.value(true), 0.25);
    }

    #[test]
    fn symmetric_and_bounded_by_target_count() {
        let mut rng = crate::rng::SplitMix64::new(11);
        let mut triples = Vec::new();
        for m in 0..20 {
            for t in 0..6 {
                if rng.next_f64() < 0.9 {
                    triples.push((format!("m{m}"), format!("t{t}"), -10.0 + 8.0 * rng.next_f64()));
                }
            }
        }
        let matrix = DockingMatrix::from_scores(triples).unwrap();
        for i in 0..10 {
            for j in (i + 1)..10 {
                let (a, b) = (format!("m{i}"), format!("m{j}"));
                let Ok(d1) = matrix.docking_distance(&a, &b) else {
                    continue;
                };
                let d2 = matrix.docking_distance(&b, &a).unwrap();
                assert_eq!(d1, d2);
                assert!(d1.sum >= 0.0);
                assert!(d1.sum <= d1.targets as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn loader_rejects_bad_rows() {
        let dir = std::env::temp_dir().join(format!("molspace-dock-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("d.tsv");

        std::fs::write(&path, "m1\tA\t-8.0\nm1\tA\t-7.0\n").unwrap();
        assert!(load_docking_file(&path).is_err());

        std::fs::write(&path, "m1\tA\tnan\n").unwrap();
        assert!(load_docking_file(&path).is_err());

        std::fs::write(&path, "m1\tA\n").unwrap();
        let err = load_docking_file(&path).unwrap_err();
        assert!(err.to_string().contains(":1"));

        std::fs::write(&path, "# ok\nm1\tA\t-8\nm2\tA\t-6\n").unwrap();
        let m = load_docking_file(&path).unwrap();
        assert_eq!(m.molecules(), &["m1".to_string(), "m2".to_string()]);
        std::fs::remove_dir_all(&dir).ok();
    }
}
