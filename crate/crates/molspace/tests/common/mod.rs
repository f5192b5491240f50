//! Shared fixtures for the integration suites.

/// Curated SMILES corpus. Expected counts are frozen from the published
/// molecular formulas: `atoms` is the heavy-atom count, `hydrogens` the
/// formula hydrogen count, and `bonds` follows from atoms, fragment
/// count and ring count. `permuted` writes the same molecule with a
/// different token order (traversal direction, branch order or ring
/// digit relabeling).
pub struct CorpusEntry {
    pub id: &'static str,
    pub smiles: &'static str,
    pub permuted: &'static str,
    pub atoms: usize,
    pub bonds: usize,
    pub hydrogens: u32,
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry { id: "methane", smiles: "C", permuted: "[CH4]", atoms: 1, bonds: 0, hydrogens: 4 },
    CorpusEntry { id: "ethanol", smiles: "CCO", permuted: "OCC", atoms: 3, bonds: 2, hydrogens: 6 },
    CorpusEntry { id: "carbon-dioxide", smiles: "O=C=O", permuted: "C(=O)=O", atoms: 3, bonds: 2, hydrogens: 0 },
    CorpusEntry { id: "ethene", smiles: "C=C", permuted: "C(=C)", atoms: 2, bonds: 1, hydrogens: 4 },
    CorpusEntry { id: "acetonitrile", smiles: "CC#N", permuted: "N#CC", atoms: 3, bonds: 2, hydrogens: 3 },
    CorpusEntry { id: "cyclopropane", smiles: "C1CC1", permuted: "C2CC2", atoms: 3, bonds: 3, hydrogens: 6 },
    CorpusEntry { id: "cyclohexane", smiles: "C1CCCCC1", permuted: "C%10CCCCC%10", atoms: 6, bonds: 6, hydrogens: 12 },
    CorpusEntry { id: "benzene", smiles: "c1ccccc1", permuted: "c2ccccc2", atoms: 6, bonds: 6, hydrogens: 6 },
    CorpusEntry { id: "toluene", smiles: "Cc1ccccc1", permuted: "c1ccccc1C", atoms: 7, bonds: 7, hydrogens: 8 },
    CorpusEntry { id: "phenol", smiles: "Oc1ccccc1", permuted: "c1ccccc1O", atoms: 7, bonds: 7, hydrogens: 6 },
    CorpusEntry { id: "aniline", smiles: "Nc1ccccc1", permuted: "c1ccccc1N", atoms: 7, bonds: 7, hydrogens: 7 },
    CorpusEntry { id: "pyridine", smiles: "c1ccncc1", permuted: "n1ccccc1", atoms: 6, bonds: 6, hydrogens: 5 },
    CorpusEntry { id: "furan", smiles: "c1ccoc1", permuted: "o1cccc1", atoms: 5, bonds: 5, hydrogens: 4 },
    CorpusEntry { id: "thiophene", smiles: "c1ccsc1", permuted: "s1cccc1", atoms: 5, bonds: 5, hydrogens: 4 },
    CorpusEntry { id: "pyrrole", smiles: "c1cc[nH]c1", permuted: "[nH]1cccc1", atoms: 5, bonds: 5, hydrogens: 5 },
    CorpusEntry { id: "imidazole", smiles: "c1c[nH]cn1", permuted: "n1c[nH]cc1", atoms: 5, bonds: 5, hydrogens: 4 },
    CorpusEntry { id: "pyrimidine", smiles: "c1cncnc1", permuted: "n1cnccc1", atoms: 6, bonds: 6, hydrogens: 4 },
    CorpusEntry { id: "pyrazine", smiles: "c1cnccn1", permuted: "n1ccncc1", atoms: 6, bonds: 6, hydrogens: 4 },
    CorpusEntry { id: "naphthalene", smiles: "c1ccc2ccccc2c1", permuted: "c1ccc2c(c1)cccc2", atoms: 10, bonds: 11, hydrogens: 8 },
    CorpusEntry { id: "quinoline", smiles: "c1ccc2ncccc2c1", permuted: "c2ccc1ncccc1c2", atoms: 10, bonds: 11, hydrogens: 7 },
    CorpusEntry { id: "indole", smiles: "c1ccc2c(c1)cc[nH]2", permuted: "c1ccc2c(c1)[nH]cc2", atoms: 9, bonds: 10, hydrogens: 7 },
    CorpusEntry {
        id: "caffeine",
        smiles: "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
        permuted: "Cn2cnc1c2c(=O)n(C)c(=O)n1C",
        atoms: 14,
        bonds: 15,
        hydrogens: 10,
    },
    CorpusEntry {
        id: "aspirin",
        smiles: "CC(=O)Oc1ccccc1C(=O)O",
        permuted: "OC(=O)c1ccccc1OC(C)=O",
        atoms: 13,
        bonds: 13,
        hydrogens: 8,
    },
    CorpusEntry {
        id: "paracetamol",
        smiles: "CC(=O)Nc1ccc(O)cc1",
        permuted: "Oc1ccc(NC(C)=O)cc1",
        atoms: 11,
        bonds: 11,
        hydrogens: 9,
    },
    CorpusEntry {
        id: "ibuprofen",
        smiles: "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
        permuted: "OC(=O)C(C)c1ccc(CC(C)C)cc1",
        atoms: 15,
        bonds: 15,
        hydrogens: 18,
    },
    CorpusEntry {
        id: "nicotine",
        smiles: "CN1CCCC1c1cccnc1",
        permuted: "c1cc(cnc1)C1CCCN1C",
        atoms: 12,
        bonds: 13,
        hydrogens: 14,
    },
    CorpusEntry {
        id: "tnt",
        smiles: "Cc1c([N+](=O)[O-])cc([N+](=O)[O-])cc1[N+](=O)[O-]",
        permuted: "[O-][N+](=O)c1cc([N+](=O)[O-])cc([N+](=O)[O-])c1C",
        atoms: 16,
        bonds: 16,
        hydrogens: 5,
    },
    CorpusEntry {
        id: "glucose-open",
        smiles: "OCC(O)C(O)C(O)C(O)C=O",
        permuted: "O=CC(O)C(O)C(O)C(O)CO",
        atoms: 12,
        bonds: 11,
        hydrogens: 12,
    },
    CorpusEntry { id: "ammonium", smiles: "[NH4+]", permuted: "[NH4+1]", atoms: 1, bonds: 0, hydrogens: 4 },
    CorpusEntry { id: "acetate", smiles: "CC(=O)[O-]", permuted: "[O-]C(C)=O", atoms: 4, bonds: 3, hydrogens: 3 },
    CorpusEntry { id: "nitrate", smiles: "[O-][N+](=O)[O-]", permuted: "[N+](=O)([O-])[O-]", atoms: 4, bonds: 3, hydrogens: 0 },
    CorpusEntry { id: "phosphoric-acid", smiles: "OP(=O)(O)O", permuted: "P(=O)(O)(O)O", atoms: 5, bonds: 4, hydrogens: 3 },
    CorpusEntry { id: "dmso", smiles: "CS(=O)C", permuted: "CS(C)=O", atoms: 4, bonds: 3, hydrogens: 6 },
    CorpusEntry { id: "acetic-water", smiles: "CC(=O)O.O", permuted: "O.OC(C)=O", atoms: 5, bonds: 3, hydrogens: 6 },
    CorpusEntry { id: "isotope-ethane", smiles: "C[13CH3]", permuted: "[13CH3]C", atoms: 2, bonds: 1, hydrogens: 6 },
    CorpusEntry { id: "chlorobenzene", smiles: "Clc1ccccc1", permuted: "c1ccccc1Cl", atoms: 7, bonds: 7, hydrogens: 5 },
    CorpusEntry { id: "bromoethane", smiles: "CCBr", permuted: "BrCC", atoms: 3, bonds: 2, hydrogens: 5 },
    CorpusEntry {
        id: "trifluoroacetic-acid",
        smiles: "OC(=O)C(F)(F)F",
        permuted: "FC(F)(F)C(=O)O",
        atoms: 7,
        bonds: 6,
        hydrogens: 1,
    },
    CorpusEntry { id: "neopentane", smiles: "CC(C)(C)C", permuted: "C(C)(C)(C)C", atoms: 5, bonds: 4, hydrogens: 12 },
    CorpusEntry {
        id: "adenine",
        smiles: "Nc1ncnc2[nH]cnc12",
        permuted: "Nc2ncnc1[nH]cnc21",
        atoms: 10,
        bonds: 11,
        hydrogens: 5,
    },
];
