//! Element symbol tables and standard valences.

/// All IUPAC element symbols, indexed by atomic number - 1.
const SYMBOLS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu",
    "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt",
    "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np",
    "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
    "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
];

/// Atomic number for an element symbol (case-sensitive), if known.
pub fn atomic_number(symbol: &str) -> Option<u8> {
    SYMBOLS
        .iter()
        .position(|&s| s == symbol)
        .map(|i| (i + 1) as u8)
}

/// Symbol for an atomic number; `"?"` for out-of-range values.
pub fn element_symbol(z: u8) -> &'static str {
    SYMBOLS
        .get((z as usize).wrapping_sub(1))
        .copied()
        .unwrap_or("?")
}

/// Standard valences used for implicit hydrogen computation, smallest
/// first. Only the organic subset has entries; bracket atoms never
/// consult this table.
pub fn standard_valences(z: u8) -> Option<&'static [u8]> {
    match z {
        5 => Some(&[3]),          // B
        6 => Some(&[4]),          // C
        7 => Some(&[3]),          // N
        8 => Some(&[2]),          // O
        15 => Some(&[3, 5]),      // P
        16 => Some(&[2, 4, 6]),   // S
        9 | 17 | 35 | 53 => Some(&[1]), // F, Cl, Br, I
        _ => None,
    }
}

/// Elements writable without brackets, keyed by symbol.
pub fn organic_subset(symbol: &str) -> Option<u8> {
    match symbol {
        "B" => Some(5),
        "C" => Some(6),
        "N" => Some(7),
        "O" => Some(8),
        "P" => Some(15),
        "S" => Some(16),
        "F" => Some(9),
        "Cl" => Some(17),
        "Br" => Some(35),
        "I" => Some(53),
        _ => None,
    }
}

/// Lowercase aromatic symbols of the supported grammar.
pub fn aromatic_subset(symbol: &str) -> Option<u8> {
    match symbol {
        "b" => Some(5),
        "c" => Some(6),
        "n" => Some(7),
        "o" => Some(8),
        "p" => Some(15),
        "s" => Some(16),
        _ => None,
    }
}
