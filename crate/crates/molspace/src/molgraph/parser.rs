//! Recursive-descent-free SMILES parser: a single pass over the byte
//! string with an explicit branch stack, so arbitrarily deep nesting and
//! arbitrarily long chains parse in constant stack space.

use std::collections::HashMap;

use thiserror::Error;

use super::elements::{aromatic_subset, atomic_number, organic_subset};
use super::{Atom, Bond, BondOrder, MolGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesErrorKind {
    #[error("empty input")]
    EmptyInput,
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("ring bond {digit} opened but never closed")]
    UnmatchedRingBond { digit: u16 },
    #[error("unbalanced parenthesis")]
    UnbalancedParenthesis,
    #[error("bond order sum {bond_order_sum} exceeds every allowed valence of {element}")]
    ValenceViolation { element: String, bond_order_sum: u8 },
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(&'static str),
    #[error("syntax error: {0}")]
    Syntax(&'static str),
}

/// A parse failure, carrying the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("offset {offset}: {kind}")]
pub struct SmilesError {
    pub offset: usize,
    pub kind: SmilesErrorKind,
}

impl SmilesError {
    pub(crate) fn new(offset: usize, kind: SmilesErrorKind) -> Self {
        SmilesError { offset, kind }
    }
}

struct RingOpen {
    atom: usize,
    order: Option<BondOrder>,
    offset: usize,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    atom_offsets: Vec<usize>,
    bonds: Vec<Bond>,
    /// Normalized (min, max) endpoint pairs, to enforce at most one bond
    /// per atom pair.
    bonded_pairs: std::collections::HashSet<(usize, usize)>,
    prev: Option<usize>,
    pending_bond: Option<(BondOrder, usize)>,
    /// Saved `prev` and the offset of the `(` that opened each branch,
    /// plus the atom count at open time (an empty branch is an error).
    branch_stack: Vec<(Option<usize>, usize, usize)>,
    rings: HashMap<u16, RingOpen>,
}

/// Parse a SMILES record into a molecular graph. Atom indices follow
/// token order; repeated parses of the same string yield identical
/// graphs.
pub fn parse_smiles(mol_id: &str, smiles: &str) -> Result<MolGraph, SmilesError> {
    let mut p = Parser {
        bytes: smiles.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        atom_offsets: Vec::new(),
        bonds: Vec::new(),
        bonded_pairs: std::collections::HashSet::new(),
        prev: None,
        pending_bond: None,
        branch_stack: Vec::new(),
        rings: HashMap::new(),
    };
    p.run()?;
    MolGraph::assemble(mol_id.to_string(), p.atoms, p.bonds, &p.atom_offsets)
}

impl<'a> Parser<'a> {
    fn err(&self, offset: usize, kind: SmilesErrorKind) -> SmilesError {
        SmilesError::new(offset, kind)
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        if self.bytes.is_empty() {
            return Err(self.err(0, SmilesErrorKind::EmptyInput));
        }
        while self.pos < self.bytes.len() {
            let off = self.pos;
            match self.bytes[off] {
                b'(' => {
                    if self.prev.is_none() {
                        return Err(self.err(off, SmilesErrorKind::Syntax("branch before any atom")));
                    }
                    if self.pending_bond.is_some() {
                        return Err(
                            self.err(off, SmilesErrorKind::Syntax("bond symbol before branch"))
                        );
                    }
                    self.branch_stack.push((self.prev, off, self.atoms.len()));
                    self.pos += 1;
                }
                b')' => {
                    let Some((saved, _, atoms_at_open)) = self.branch_stack.pop() else {
                        return Err(self.err(off, SmilesErrorKind::UnbalancedParenthesis));
                    };
                    if self.pending_bond.is_some() {
                        return Err(
                            self.err(off, SmilesErrorKind::Syntax("bond symbol before `)`"))
                        );
                    }
                    if self.atoms.len() == atoms_at_open {
                        return Err(self.err(off, SmilesErrorKind::Syntax("empty branch")));
                    }
                    self.prev = saved;
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' => {
                    if self.pending_bond.is_some() {
                        return Err(self.err(off, SmilesErrorKind::Syntax("two bond symbols in a row")));
                    }
                    if self.prev.is_none() {
                        return Err(self.err(off, SmilesErrorKind::Syntax("bond before any atom")));
                    }
                    let order = match self.bytes[off] {
                        b'-' => BondOrder::Single,
                        b'=' => BondOrder::Double,
                        b'#' => BondOrder::Triple,
                        _ => BondOrder::Aromatic,
                    };
                    self.pending_bond = Some((order, off));
                    self.pos += 1;
                }
                b'/' | b'\\' => {
                    return Err(self.err(off, SmilesErrorKind::UnsupportedFeature("stereo bond")))
                }
                b'@' => {
                    return Err(
                        self.err(off, SmilesErrorKind::UnsupportedFeature("stereocenter marker"))
                    )
                }
                b'*' => {
                    return Err(self.err(off, SmilesErrorKind::UnsupportedFeature("wildcard atom")))
                }
                b'.' => {
                    if self.pending_bond.is_some() {
                        return Err(
                            self.err(off, SmilesErrorKind::Syntax("bond before fragment separator"))
                        );
                    }
                    if !self.branch_stack.is_empty() {
                        return Err(
                            self.err(off, SmilesErrorKind::Syntax("fragment separator inside branch"))
                        );
                    }
                    if self.prev.is_none() {
                        return Err(
                            self.err(off, SmilesErrorKind::Syntax("fragment separator before any atom"))
                        );
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                b'1'..=b'9' => {
                    let digit = (self.bytes[off] - b'0') as u16;
                    self.pos += 1;
                    self.ring_closure(digit, off)?;
                }
                b'0' => {
                    return Err(self.err(
                        off,
                        SmilesErrorKind::Syntax("ring closure digits are 1-9; use %nn for two-digit numbers"),
                    ))
                }
                b'%' => {
                    let d1 = self.bytes.get(off + 1).copied();
                    let d2 = self.bytes.get(off + 2).copied();
                    match (d1, d2) {
                        (Some(a), Some(b)) if a.is_ascii_digit() && b.is_ascii_digit() => {
                            let num = ((a - b'0') as u16) * 10 + (b - b'0') as u16;
                            self.pos += 3;
                            self.ring_closure(num, off)?;
                        }
                        _ => {
                            return Err(self.err(
                                off,
                                SmilesErrorKind::Syntax("`%` must be followed by two digits"),
                            ))
                        }
                    }
                }
                b'[' => {
                    let atom = self.parse_bracket_atom()?;
                    self.attach_atom(atom, off)?;
                }
                b'A'..=b'Z' => {
                    let atom = self.parse_organic_atom()?;
                    self.attach_atom(atom, off)?;
                }
                b'a'..=b'z' => {
                    let sym = &self.bytes[off..off + 1];
                    let sym = std::str::from_utf8(sym).unwrap();
                    let Some(z) = aromatic_subset(sym) else {
                        return Err(
                            self.err(off, SmilesErrorKind::UnknownElement(sym.to_string()))
                        );
                    };
                    self.pos += 1;
                    self.attach_atom(
                        Atom {
                            element: z,
                            formal_charge: 0,
                            explicit_h: None,
                            aromatic: true,
                            isotope: None,
                        },
                        off,
                    )?;
                }
                other => {
                    return Err(self.err(
                        off,
                        if other.is_ascii() {
                            SmilesErrorKind::Syntax("unexpected character")
                        } else {
                            SmilesErrorKind::Syntax("non-ASCII byte")
                        },
                    ))
                }
            }
        }

        if let Some((_, off)) = self.pending_bond {
            return Err(self.err(off, SmilesErrorKind::Syntax("dangling bond at end of input")));
        }
        if let Some((_, off, _)) = self.branch_stack.first() {
            return Err(self.err(*off, SmilesErrorKind::UnbalancedParenthesis));
        }
        if !self.rings.is_empty() {
            // Deterministic choice: report the earliest unmatched opening.
            let (&digit, open) = self
                .rings
                .iter()
                .min_by_key(|(_, open)| open.offset)
                .unwrap();
            return Err(self.err(open.offset, SmilesErrorKind::UnmatchedRingBond { digit }));
        }
        Ok(())
    }

    /// Add an atom, bonding it to `prev` unless it starts a fragment.
    fn attach_atom(&mut self, atom: Atom, offset: usize) -> Result<(), SmilesError> {
        let idx = self.atoms.len();
        let aromatic = atom.aromatic;
        self.atoms.push(atom);
        self.atom_offsets.push(offset);
        if let Some(p) = self.prev {
            let order = match self.pending_bond.take() {
                Some((order, _)) => order,
                None => {
                    if aromatic && self.atoms[p].aromatic {
                        BondOrder::Aromatic
                    } else {
                        BondOrder::Single
                    }
                }
            };
            self.add_bond(p, idx, order, offset)?;
        } else {
            // A pending bond always has a preceding atom; the bond token
            // handler rejects it otherwise.
            debug_assert!(self.pending_bond.is_none());
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn add_bond(
        &mut self,
        a: usize,
        b: usize,
        order: BondOrder,
        offset: usize,
    ) -> Result<(), SmilesError> {
        if a == b {
            return Err(self.err(offset, SmilesErrorKind::Syntax("ring bond to the same atom")));
        }
        let key = (a.min(b), a.max(b));
        if !self.bonded_pairs.insert(key) {
            return Err(self.err(offset, SmilesErrorKind::Syntax("duplicate bond between atoms")));
        }
        self.bonds.push(Bond { a, b, order });
        Ok(())
    }

    fn ring_closure(&mut self, digit: u16, offset: usize) -> Result<(), SmilesError> {
        let Some(current) = self.prev else {
            return Err(self.err(offset, SmilesErrorKind::Syntax("ring closure before any atom")));
        };
        let pending = self.pending_bond.take().map(|(order, _)| order);
        match self.rings.remove(&digit) {
            Some(open) => {
                let order = match (open.order, pending) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(
                            self.err(offset, SmilesErrorKind::Syntax("ring bond order mismatch"))
                        )
                    }
                    (Some(a), _) => a,
                    (None, Some(b)) => b,
                    (None, None) => {
                        if self.atoms[open.atom].aromatic && self.atoms[current].aromatic {
                            BondOrder::Aromatic
                        } else {
                            BondOrder::Single
                        }
                    }
                };
                self.add_bond(open.atom, current, order, offset)
            }
            None => {
                self.rings.insert(
                    digit,
                    RingOpen {
                        atom: current,
                        order: pending,
                        offset,
                    },
                );
                Ok(())
            }
        }
    }

    /// One- or two-letter organic-subset atom starting at `pos`.
    fn parse_organic_atom(&mut self) -> Result<Atom, SmilesError> {
        let off = self.pos;
        // Two-letter symbols first (Cl, Br).
        if let Some(&second) = self.bytes.get(off + 1) {
            if second.is_ascii_lowercase() {
                let sym = std::str::from_utf8(&self.bytes[off..off + 2]).unwrap();
                if let Some(z) = organic_subset(sym) {
                    self.pos += 2;
                    return Ok(Atom {
                        element: z,
                        formal_charge: 0,
                        explicit_h: None,
                        aromatic: false,
                        isotope: None,
                    });
                }
            }
        }
        let sym = std::str::from_utf8(&self.bytes[off..off + 1]).unwrap();
        match organic_subset(sym) {
            Some(z) => {
                self.pos += 1;
                Ok(Atom {
                    element: z,
                    formal_charge: 0,
                    explicit_h: None,
                    aromatic: false,
                    isotope: None,
                })
            }
            None => Err(self.err(off, SmilesErrorKind::UnknownElement(sym.to_string()))),
        }
    }

    /// Bracket atom: `[isotope? symbol (H count | charge)* ]`, where the
    /// hydrogen count and charge may appear in either order but at most
    /// once each.
    fn parse_bracket_atom(&mut self) -> Result<Atom, SmilesError> {
        let open = self.pos;
        self.pos += 1; // consume '['

        let isotope = {
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = self.pos - start;
            if digits == 0 {
                None
            } else if digits > 3 {
                return Err(self.err(start, SmilesErrorKind::Syntax("isotope has more than 3 digits")));
            } else {
                let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                Some(text.parse::<u16>().unwrap())
            }
        };

        let sym_off = self.pos;
        let (element, aromatic) = self.parse_bracket_symbol(sym_off)?;

        let mut explicit_h: Option<u8> = None;
        let mut charge: Option<i8> = None;
        loop {
            match self.bytes.get(self.pos).copied() {
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                Some(b'H') => {
                    if explicit_h.is_some() {
                        return Err(self.err(
                            self.pos,
                            SmilesErrorKind::Syntax("hydrogen count given twice in bracket atom"),
                        ));
                    }
                    self.pos += 1;
                    let count = self.read_small_number().unwrap_or(1);
                    explicit_h = Some(count);
                }
                Some(sign @ (b'+' | b'-')) => {
                    if charge.is_some() {
                        return Err(self.err(
                            self.pos,
                            SmilesErrorKind::Syntax("charge given twice in bracket atom"),
                        ));
                    }
                    self.pos += 1;
                    let magnitude = match self.read_small_number() {
                        Some(n) => n,
                        None => {
                            // Count repeated signs: `++` is +2, `---` is -3.
                            let mut reps = 1u8;
                            while self.bytes.get(self.pos) == Some(&sign) {
                                reps += 1;
                                self.pos += 1;
                            }
                            reps
                        }
                    };
                    if magnitude > 15 {
                        return Err(
                            self.err(self.pos, SmilesErrorKind::Syntax("charge magnitude above 15"))
                        );
                    }
                    charge = Some(if sign == b'+' {
                        magnitude as i8
                    } else {
                        -(magnitude as i8)
                    });
                }
                Some(b'@') => {
                    return Err(
                        self.err(self.pos, SmilesErrorKind::UnsupportedFeature("stereocenter marker"))
                    )
                }
                Some(b':') => {
                    return Err(
                        self.err(self.pos, SmilesErrorKind::UnsupportedFeature("atom class label"))
                    )
                }
                Some(_) => {
                    return Err(self.err(
                        self.pos,
                        SmilesErrorKind::Syntax("unexpected character in bracket atom"),
                    ))
                }
                None => {
                    return Err(self.err(open, SmilesErrorKind::Syntax("unclosed bracket atom")))
                }
            }
        }

        Ok(Atom {
            element,
            formal_charge: charge.unwrap_or(0),
            explicit_h: Some(explicit_h.unwrap_or(0)),
            aromatic,
            isotope,
        })
    }

    fn parse_bracket_symbol(&mut self, off: usize) -> Result<(u8, bool), SmilesError> {
        let first = match self.bytes.get(off).copied() {
            Some(c) if c.is_ascii_alphabetic() => c,
            _ => return Err(self.err(off, SmilesErrorKind::Syntax("expected element symbol"))),
        };
        if first.is_ascii_lowercase() {
            let sym = std::str::from_utf8(&self.bytes[off..off + 1]).unwrap();
            let Some(z) = aromatic_subset(sym) else {
                return Err(self.err(off, SmilesErrorKind::UnknownElement(sym.to_string())));
            };
            self.pos += 1;
            return Ok((z, true));
        }
        // Greedy two-letter match against the full symbol table, except
        // that a following `H` is always a hydrogen count, never the
        // second letter of a symbol (there is no two-letter symbol with
        // a lowercase second letter 'H').
        if let Some(&second) = self.bytes.get(off + 1) {
            if second.is_ascii_lowercase() {
                let sym = std::str::from_utf8(&self.bytes[off..off + 2]).unwrap();
                if let Some(z) = atomic_number(sym) {
                    self.pos += 2;
                    return Ok((z, false));
                }
            }
        }
        let sym = std::str::from_utf8(&self.bytes[off..off + 1]).unwrap();
        match atomic_number(sym) {
            Some(z) => {
                self.pos += 1;
                Ok((z, false))
            }
            None => Err(self.err(off, SmilesErrorKind::UnknownElement(sym.to_string()))),
        }
    }

    /// Up to two digits; `None` when the next byte is not a digit.
    fn read_small_number(&mut self) -> Option<u8> {
        let mut value: Option<u8> = None;
        for _ in 0..2 {
            match self.bytes.get(self.pos).copied() {
                Some(d) if d.is_ascii_digit() => {
                    value = Some(value.unwrap_or(0) * 10 + (d - b'0'));
                    self.pos += 1;
                }
                _ => break,
            }
        }
        value
    }
}
