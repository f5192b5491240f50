//! Molecular graphs parsed from a SMILES subset.
//!
//! The parser covers organic-subset atoms, bracket atoms, bond symbols
//! `- = # :`, branches, ring closures (`1`-`9` and `%nn`), aromatic
//! lowercase atoms and `.`-separated fragments. Stereochemistry is
//! rejected with a typed error rather than silently dropped, and
//! aromaticity is taken verbatim from the input tokens — no ring
//! perception or other chemistry heuristics run behind the grammar.

mod elements;
mod parser;

use std::collections::BTreeMap;
use std::path::Path;

use crate::io::{payload_lines, LoadError};

pub use elements::{atomic_number, element_symbol, standard_valences};
pub use parser::{parse_smiles, SmilesError, SmilesErrorKind};

/// Bond orders of the supported grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Stable numeric code used in fingerprint hashing.
    pub fn code(self) -> u64 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }

    /// Twice the bond order, so the aromatic 1.5 stays integral.
    fn doubled_order(self) -> u32 {
        match self {
            BondOrder::Single => 2,
            BondOrder::Double => 4,
            BondOrder::Triple => 6,
            BondOrder::Aromatic => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    /// Atomic number.
    pub element: u8,
    pub formal_charge: i8,
    /// Hydrogen count fixed by a bracket atom; `None` means compute from
    /// standard valence.
    pub explicit_h: Option<u8>,
    pub aromatic: bool,
    pub isotope: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

/// Heavy-atom molecular graph. Immutable after construction; adjacency,
/// hydrogen counts and ring membership are derived once at build time.
#[derive(Debug, Clone, PartialEq)]
pub struct MolGraph {
    pub mol_id: String,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<(usize, usize)>>,
    hydrogens: Vec<u8>,
    in_ring: Vec<bool>,
    fragments: usize,
}

impl MolGraph {
    /// Assemble a graph from parsed atoms and bonds, deriving adjacency,
    /// implicit hydrogens and ring membership. `atom_offsets` carries the
    /// byte offset of each atom token for valence diagnostics.
    pub(crate) fn assemble(
        mol_id: String,
        atoms: Vec<Atom>,
        bonds: Vec<Bond>,
        atom_offsets: &[usize],
    ) -> Result<Self, SmilesError> {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (bi, bond) in bonds.iter().enumerate() {
            adjacency[bond.a].push((bond.b, bi));
            adjacency[bond.b].push((bond.a, bi));
        }
        let hydrogens = compute_hydrogens(&atoms, &bonds, &adjacency, atom_offsets)?;
        let in_ring = ring_membership(atoms.len(), &bonds, &adjacency);
        let fragments = count_fragments(atoms.len(), &adjacency);
        Ok(MolGraph {
            mol_id,
            atoms,
            bonds,
            adjacency,
            hydrogens,
            in_ring,
            fragments,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// Neighbor list of atom `i` as `(neighbor_index, bond_index)` pairs,
    /// in bond insertion order.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Total hydrogen count of atom `i` (explicit for bracket atoms,
    /// valence-derived otherwise).
    pub fn hydrogen_count(&self, i: usize) -> u8 {
        self.hydrogens[i]
    }

    pub fn total_hydrogens(&self) -> u32 {
        self.hydrogens.iter().map(|&h| h as u32).sum()
    }

    /// Whether atom `i` lies on any cycle.
    pub fn in_ring(&self, i: usize) -> bool {
        self.in_ring[i]
    }

    /// Number of connected components.
    pub fn fragment_count(&self) -> usize {
        self.fragments
    }
}

/// Per-atom hydrogen counts.
///
/// Bracket atoms use their explicit count (0 when omitted). Organic-subset
/// atoms get the smallest standard valence that covers the bond-order sum,
/// minus that sum; exceeding every allowed valence is a `ValenceViolation`.
/// For aromatic atoms the sum counts aromatic bonds as 1.5 and the check
/// is relaxed to `max(0, lowest valence - sum)`: without ring perception
/// the delocalized bond orders cannot be validated, and this rule
/// reproduces the conventional hydrogen counts for benzene, pyridine,
/// furan, thiophene and fused aromatics.
pub fn implicit_hydrogens(graph: &MolGraph) -> Vec<u8> {
    graph.hydrogens.clone()
}

fn compute_hydrogens(
    atoms: &[Atom],
    bonds: &[Bond],
    adjacency: &[Vec<(usize, usize)>],
    atom_offsets: &[usize],
) -> Result<Vec<u8>, SmilesError> {
    let mut out = Vec::with_capacity(atoms.len());
    for (i, atom) in atoms.iter().enumerate() {
        if let Some(h) = atom.explicit_h {
            out.push(h);
            continue;
        }
        let doubled: u32 = adjacency[i]
            .iter()
            .map(|&(_, bi)| bonds[bi].order.doubled_order())
            .sum();
        let needed = doubled.div_ceil(2) as u8;
        let allowed = standard_valences(atom.element).unwrap_or(&[]);
        if atom.aromatic {
            let lowest = allowed.first().copied().unwrap_or(0);
            out.push(lowest.saturating_sub(needed));
        } else {
            match allowed.iter().find(|&&v| v >= needed) {
                Some(&v) => out.push(v - needed),
                None => {
                    return Err(SmilesError::new(
                        atom_offsets.get(i).copied().unwrap_or(0),
                        SmilesErrorKind::ValenceViolation {
                            element: element_symbol(atom.element).to_string(),
                            bond_order_sum: needed,
                        },
                    ))
                }
            }
        }
    }
    Ok(out)
}

/// Ring membership via bridge detection: an atom is in a ring iff it is
/// incident to at least one edge that is not a bridge. Iterative DFS so
/// pathological chain inputs cannot overflow the stack.
fn ring_membership(n: usize, bonds: &[Bond], adjacency: &[Vec<(usize, usize)>]) -> Vec<bool> {
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_bridge = vec![false; bonds.len()];
    let mut timer = 0usize;

    for start in 0..n {
        if disc[start] != usize::MAX {
            continue;
        }
        // (node, parent bond index, next adjacency slot)
        let mut stack: Vec<(usize, usize, usize)> = vec![(start, usize::MAX, 0)];
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        while !stack.is_empty() {
            let frame = stack.len() - 1;
            let (u, parent_bond, slot) = stack[frame];
            if slot < adjacency[u].len() {
                stack[frame].2 += 1;
                let (v, bi) = adjacency[u][slot];
                if bi == parent_bond {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, bi, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        is_bridge[parent_bond] = true;
                    }
                }
            }
        }
    }

    let mut in_ring = vec![false; n];
    for (bi, bond) in bonds.iter().enumerate() {
        if !is_bridge[bi] {
            in_ring[bond.a] = true;
            in_ring[bond.b] = true;
        }
    }
    in_ring
}

fn count_fragments(n: usize, adjacency: &[Vec<(usize, usize)>]) -> usize {
    let mut seen = vec![false; n];
    let mut fragments = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        fragments += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    fragments
}

/// Load a SMILES file: one `mol_id<TAB>smiles` record per line, `#`
/// comments and blank lines ignored, mol_ids unique and whitespace-free.
/// Returns graphs keyed by mol_id.
pub fn load_smiles_file(path: &Path) -> Result<BTreeMap<String, MolGraph>, LoadError> {
    let contents = std::fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let mut graphs = BTreeMap::new();
    for (line_no, line) in payload_lines(&contents) {
        let (id, smiles) = line
            .split_once('\t')
            .ok_or_else(|| LoadError::data(path, line_no, "expected `mol_id<TAB>smiles`"))?;
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(LoadError::data(
                path,
                line_no,
                format!("invalid mol_id {id:?}: must be non-empty and whitespace-free"),
            ));
        }
        let graph = parse_smiles(id, smiles)
            .map_err(|e| LoadError::data(path, line_no, format!("{id}: {e}")))?;
        if graphs.insert(id.to_string(), graph).is_some() {
            return Err(LoadError::data(
                path,
                line_no,
                format!("duplicate mol_id {id:?}"),
            ));
        }
    }
    Ok(graphs)
}
