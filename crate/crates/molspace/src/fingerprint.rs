//! Morgan-style extended-connectivity fingerprints and Tanimoto
//! similarity.
//!
//! The hashing scheme is pinned so two independent builds of this format
//! produce bit-identical fingerprints: every environment hash is 64-bit
//! FNV-1a over little-endian field encodings. Radius-0 atom invariants
//! hash the tuple (atomic number, degree, total hydrogen count, formal
//! charge, aromatic flag, in-ring flag), each field as an 8-byte
//! little-endian word. Higher radii hash (radius, own previous
//! invariant, sorted neighbor (bond code, neighbor invariant) pairs).
//! Bit patterns intentionally do not match any third-party ECFP
//! implementation; Tanimoto values on matched inputs are the
//! cross-implementation contract.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::io::{header_pairs, payload_lines, LoadError};
use crate::molgraph::MolGraph;

pub const DEFAULT_RADIUS: u32 = 2;
pub const DEFAULT_WIDTH: usize = 2048;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FingerprintError {
    #[error("fingerprint width {0} is not a power of two in [64, 65536]")]
    InvalidWidth(usize),
    #[error("fingerprint width mismatch: {a} vs {b}")]
    WidthMismatch { a: usize, b: usize },
}

/// Folded bit-vector fingerprint. Bit `i` lives in block `i / 64` at
/// position `63 - i % 64`, so the hex encoding reads MSB-first: bit 0 is
/// the most significant bit of the first hex character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub mol_id: String,
    width: usize,
    radius: u32,
    blocks: Vec<u64>,
}

fn valid_width(width: usize) -> bool {
    width.is_power_of_two() && (64..=65536).contains(&width)
}

impl Fingerprint {
    pub fn empty(mol_id: &str, width: usize, radius: u32) -> Result<Self, FingerprintError> {
        if !valid_width(width) {
            return Err(FingerprintError::InvalidWidth(width));
        }
        Ok(Fingerprint {
            mol_id: mol_id.to_string(),
            width,
            radius,
            blocks: vec![0; width / 64],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn set_bit(&mut self, i: usize) {
        debug_assert!(i < self.width);
        self.blocks[i >> 6] |= 1u64 << (63 - (i & 63));
    }

    pub fn bit(&self, i: usize) -> bool {
        self.blocks[i >> 6] >> (63 - (i & 63)) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    /// Popcounts of intersection and union, the two Tanimoto operands.
    pub fn overlap(&self, other: &Fingerprint) -> Result<(u64, u64), FingerprintError> {
        if self.width != other.width {
            return Err(FingerprintError::WidthMismatch {
                a: self.width,
                b: other.width,
            });
        }
        let mut inter = 0u64;
        let mut union = 0u64;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            inter += (a & b).count_ones() as u64;
            union += (a | b).count_ones() as u64;
        }
        Ok((inter, union))
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.width / 4);
        for b in &self.blocks {
            write!(s, "{b:016x}").unwrap();
        }
        s
    }

    pub fn from_hex(
        mol_id: &str,
        width: usize,
        radius: u32,
        hex: &str,
    ) -> Result<Self, FingerprintError> {
        if !valid_width(width) || hex.len() != width / 4 {
            return Err(FingerprintError::InvalidWidth(width));
        }
        let mut blocks = Vec::with_capacity(width / 64);
        for chunk in hex.as_bytes().chunks(16) {
            let text = std::str::from_utf8(chunk).map_err(|_| FingerprintError::InvalidWidth(width))?;
            let block =
                u64::from_str_radix(text, 16).map_err(|_| FingerprintError::InvalidWidth(width))?;
            blocks.push(block);
        }
        Ok(Fingerprint {
            mol_id: mol_id.to_string(),
            width,
            radius,
            blocks,
        })
    }
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(FNV_OFFSET)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.write(&v.to_le_bytes());
    }

    fn write_i64(&mut self, v: i64) {
        self.write(&v.to_le_bytes());
    }

    fn finish(self) -> u64 {
        self.0
    }
}

/// Radius-0 invariants: identical chemical environments yield identical
/// 64-bit values, and any differing field separates them.
pub fn atom_invariants(graph: &MolGraph) -> Vec<u64> {
    (0..graph.atom_count())
        .map(|i| {
            let atom = &graph.atoms()[i];
            let mut h = Fnv1a::new();
            h.write_u64(atom.element as u64);
            h.write_u64(graph.degree(i) as u64);
            h.write_u64(graph.hydrogen_count(i) as u64);
            h.write_i64(atom.formal_charge as i64);
            h.write_u64(atom.aromatic as u64);
            h.write_u64(graph.in_ring(i) as u64);
            h.finish()
        })
        .collect()
}

/// Iterative neighborhood hashing. Each atom contributes one environment
/// hash per radius; atoms without neighbors stop growing after radius 0.
/// Neighbor contributions are sorted by (bond code, neighbor invariant)
/// before mixing, so the result is independent of SMILES token order.
pub fn morgan_fingerprint(
    graph: &MolGraph,
    radius: u32,
    width: usize,
) -> Result<Fingerprint, FingerprintError> {
    let mut fp = Fingerprint::empty(&graph.mol_id, width, radius)?;
    let mask = width as u64 - 1;
    let mut inv = atom_invariants(graph);
    for &v in &inv {
        fp.set_bit((v & mask) as usize);
    }
    for r in 1..=radius {
        let mut next = inv.clone();
        for i in 0..graph.atom_count() {
            if graph.degree(i) == 0 {
                continue;
            }
            let mut pairs: Vec<(u64, u64)> = graph
                .neighbors(i)
                .iter()
                .map(|&(j, bi)| (graph.bonds()[bi].order.code(), inv[j]))
                .collect();
            pairs.sort_unstable();
            let mut h = Fnv1a::new();
            h.write_u64(r as u64);
            h.write_u64(inv[i]);
            for (code, ninv) in pairs {
                h.write_u64(code);
                h.write_u64(ninv);
            }
            next[i] = h.finish();
            fp.set_bit((next[i] & mask) as usize);
        }
        inv = next;
    }
    Ok(fp)
}

/// |a AND b| / |a OR b|; 1.0 when both vectors are all-zero.
pub fn tanimoto_similarity(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    let (inter, union) = a.overlap(b)?;
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}

pub fn tanimoto_distance(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    Ok(1.0 - tanimoto_similarity(a, b)?)
}

/// Write a fingerprint file: `#width=B radius=R` header, then
/// `mol_id<TAB>hex` rows (width/4 hex chars each).
pub fn write_fingerprint_file(
    path: &Path,
    fps: &[Fingerprint],
    width: usize,
    radius: u32,
) -> Result<(), LoadError> {
    let mut out = String::new();
    out.push_str(&format!("#width={width} radius={radius}\n"));
    for fp in fps {
        debug_assert_eq!(fp.width, width);
        out.push_str(&fp.mol_id);
        out.push('\t');
        out.push_str(&fp.to_hex());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| LoadError::io(path, e))
}

/// Load a fingerprint file keyed by mol_id.
pub fn load_fingerprint_file(path: &Path) -> Result<BTreeMap<String, Fingerprint>, LoadError> {
    let contents = std::fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let pairs = header_pairs(&contents);
    let width: usize = pairs
        .iter()
        .find(|(k, _)| k == "width")
        .and_then(|(_, v)| v.parse().ok())
        .ok_or_else(|| LoadError::data(path, 1, "missing `#width=B radius=R` header"))?;
    let radius: u32 = pairs
        .iter()
        .find(|(k, _)| k == "radius")
        .and_then(|(_, v)| v.parse().ok())
        .ok_or_else(|| LoadError::data(path, 1, "missing `#width=B radius=R` header"))?;
    if !valid_width(width) {
        return Err(LoadError::data(path, 1, FingerprintError::InvalidWidth(width)));
    }
    let mut fps = BTreeMap::new();
    for (line_no, line) in payload_lines(&contents) {
        let (id, hex) = line
            .split_once('\t')
            .ok_or_else(|| LoadError::data(path, line_no, "expected `mol_id<TAB>hex`"))?;
        let fp = Fingerprint::from_hex(id, width, radius, hex)
            .map_err(|_| LoadError::data(path, line_no, format!("bad hex field for {id}")))?;
        if fps.insert(id.to_string(), fp).is_some() {
            return Err(LoadError::data(path, line_no, format!("duplicate mol_id {id:?}")));
        }
    }
    Ok(fps)
}
