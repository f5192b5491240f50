//! Anchor-based orderings and the Kendall-Tau rank distance between
//! them, counted as discordant pairs (the bubble-sort swap count).

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::io::{payload_lines, LoadError};

/// The molecular spaces an ordering can come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    Docking,
    Embedding,
    Feature,
    Fingerprint,
    Random,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Docking => "docking",
            Space::Embedding => "embedding",
            Space::Feature => "feature",
            Space::Fingerprint => "fingerprint",
            Space::Random => "random",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "docking" => Ok(Space::Docking),
            "embedding" => Ok(Space::Embedding),
            "feature" => Ok(Space::Feature),
            "fingerprint" => Ok(Space::Fingerprint),
            "random" => Ok(Space::Random),
            other => Err(format!(
                "unknown space {other:?} (expected docking, embedding, feature, fingerprint or random)"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RankError<E> {
    #[error("anchor {0:?} is not in the universe")]
    UnknownAnchor(String),
    #[error("universe is empty after removing the anchor")]
    EmptyUniverse,
    #[error("distance to {mol_id:?} failed: {source}")]
    Distance { mol_id: String, source: E },
    #[error("invalid ordering: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TauError {
    #[error("orderings have different anchors: {0:?} vs {1:?}")]
    AnchorMismatch(String, String),
    #[error("orderings rank different molecule sets")]
    UniverseMismatch,
}

/// All molecules ranked by ascending distance to one anchor (the anchor
/// itself excluded). Ties in distance break by ascending mol_id, so the
/// ordering is total and deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Ordering {
    pub anchor: String,
    pub space: Space,
    ranked: Vec<String>,
    distances: Vec<f64>,
}

impl Ordering {
    /// Build from unsorted (mol_id, distance) pairs; the anchor must not
    /// appear among them.
    pub fn from_distances(
        anchor: &str,
        space: Space,
        mut items: Vec<(String, f64)>,
    ) -> Result<Self, String> {
        if items.is_empty() {
            return Err("ordering needs at least one ranked molecule".to_string());
        }
        for (id, d) in &items {
            if !d.is_finite() || *d < 0.0 {
                return Err(format!("invalid distance {d} for {id:?}"));
            }
            if id == anchor {
                return Err(format!("anchor {anchor:?} appears in its own ranking"));
            }
        }
        items.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let (ranked, distances) = items.into_iter().unzip();
        Ok(Ordering {
            anchor: anchor.to_string(),
            space,
            ranked,
            distances,
        })
    }

    pub fn ranked(&self) -> &[String] {
        &self.ranked
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    /// 0-based position of a molecule in the ranking.
    pub fn index_of(&self, mol_id: &str) -> Option<usize> {
        self.ranked.iter().position(|m| m == mol_id)
    }

    /// Serialize as `rank<TAB>mol_id<TAB>distance` rows (1-based ranks)
    /// under an `#anchor=<id> space=<name>` header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "#anchor={} space={}", self.anchor, self.space).unwrap();
        for (i, (id, d)) in self.ranked.iter().zip(&self.distances).enumerate() {
            writeln!(out, "{}\t{}\t{}", i + 1, id, d).unwrap();
        }
        out
    }
}

/// Rank every universe molecule (minus the anchor) by its distance to
/// the anchor. The distance closure is consulted once per molecule, in
/// sorted universe order.
pub fn rank_by_anchor<E>(
    anchor: &str,
    space: Space,
    universe: &[String],
    mut distance_to_anchor: impl FnMut(&str) -> Result<f64, E>,
) -> Result<Ordering, RankError<E>> {
    if !universe.iter().any(|m| m == anchor) {
        return Err(RankError::UnknownAnchor(anchor.to_string()));
    }
    if universe.len() < 2 {
        return Err(RankError::EmptyUniverse);
    }
    let mut items = Vec::with_capacity(universe.len() - 1);
    for mol in universe {
        if mol == anchor {
            continue;
        }
        let d = distance_to_anchor(mol).map_err(|source| RankError::Distance {
            mol_id: mol.clone(),
            source,
        })?;
        items.push((mol.clone(), d));
    }
    Ordering::from_distances(anchor, space, items).map_err(RankError::Invalid)
}

/// Kendall-Tau rank distance between two orderings of the same universe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauResult {
    /// Discordant pair count == bubble-sort swap count.
    pub swaps: u64,
    /// n(n-1)/2 for n ranked molecules.
    pub pairs: u64,
    /// swaps / pairs in [0, 1]; 0 for n < 2.
    pub normalized: f64,
}

/// Count discordant pairs in O(n log n): relabel `b`'s items with their
/// ranks in `a`, then count inversions of that sequence.
pub fn kendall_tau(a: &Ordering, b: &Ordering) -> Result<TauResult, TauError> {
    if a.anchor != b.anchor {
        return Err(TauError::AnchorMismatch(a.anchor.clone(), b.anchor.clone()));
    }
    if a.len() != b.len() {
        return Err(TauError::UniverseMismatch);
    }
    let rank_in_a: HashMap<&str, u64> = a
        .ranked
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_str(), i as u64))
        .collect();
    if rank_in_a.len() != a.len() {
        return Err(TauError::UniverseMismatch);
    }
    let relabeled: Vec<u64> = b
        .ranked
        .iter()
        .map(|m| rank_in_a.get(m.as_str()).copied().ok_or(TauError::UniverseMismatch))
        .collect::<Result<_, _>>()?;

    let n = relabeled.len() as u64;
    let swaps = count_inversions(&relabeled);
    let pairs = n * (n - 1) / 2;
    let normalized = if pairs == 0 { 0.0 } else { swaps as f64 / pairs as f64 };
    Ok(TauResult {
        swaps,
        pairs,
        normalized,
    })
}

/// Number of index pairs i < j with s[i] > s[j], via bottom-up merge
/// sort on a scratch copy; the input is left untouched.
pub fn count_inversions<T: Ord + Copy>(sequence: &[T]) -> u64 {
    let n = sequence.len();
    if n < 2 {
        return 0;
    }
    let mut src = sequence.to_vec();
    let mut dst = src.clone();
    let mut inversions = 0u64;
    let mut width = 1usize;
    while width < n {
        let mut offset = 0usize;
        while offset < n {
            let mid = (offset + width).min(n);
            let end = (offset + 2 * width).min(n);
            let (mut i, mut j, mut k) = (offset, mid, offset);
            while i < mid || j < end {
                if i < mid && (j >= end || src[i] <= src[j]) {
                    dst[k] = src[i];
                    i += 1;
                } else {
                    // src[j] jumps ahead of every element left in [i, mid).
                    inversions += (mid - i) as u64;
                    dst[k] = src[j];
                    j += 1;
                }
                k += 1;
            }
            offset = end;
        }
        std::mem::swap(&mut src, &mut dst);
        width *= 2;
    }
    inversions
}

/// Load an ordering TSV written by [`Ordering::to_tsv`].
pub fn load_ordering_file(path: &Path) -> Result<Ordering, LoadError> {
    let contents = std::fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let header = contents
        .lines()
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or_else(|| LoadError::data(path, 1, "missing `#anchor=<id> space=<name>` header"))?;
    let mut anchor = None;
    let mut space = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("anchor", v)) => anchor = Some(v.to_string()),
            Some(("space", v)) => {
                space = Some(Space::from_str(v).map_err(|e| LoadError::data(path, 1, e))?)
            }
            _ => return Err(LoadError::data(path, 1, format!("bad header field {tok:?}"))),
        }
    }
    let anchor = anchor.ok_or_else(|| LoadError::data(path, 1, "header missing anchor="))?;
    let space = space.ok_or_else(|| LoadError::data(path, 1, "header missing space="))?;

    let mut ranked = Vec::new();
    let mut distances: Vec<f64> = Vec::new();
    for (line_no, line) in payload_lines(&contents) {
        let mut fields = line.split('\t');
        let (Some(rank), Some(id), Some(dist), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(LoadError::data(path, line_no, "expected `rank<TAB>mol_id<TAB>distance`"));
        };
        let rank: usize = rank
            .parse()
            .map_err(|_| LoadError::data(path, line_no, format!("bad rank {rank:?}")))?;
        if rank != ranked.len() + 1 {
            return Err(LoadError::data(
                path,
                line_no,
                format!("rank column must count 1..n; found {rank}"),
            ));
        }
        let d: f64 = dist
            .parse()
            .map_err(|_| LoadError::data(path, line_no, format!("bad distance {dist:?}")))?;
        if let Some(&prev) = distances.last() {
            if d < prev {
                return Err(LoadError::data(path, line_no, "distances must be non-decreasing"));
            }
        }
        ranked.push(id.to_string());
        distances.push(d);
    }
    if ranked.is_empty() {
        return Err(LoadError::data(path, 1, "ordering has no rows"));
    }
    Ok(Ordering {
        anchor,
        space,
        ranked,
        distances,
    })
}
