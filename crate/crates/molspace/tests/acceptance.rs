//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers. Oracles here are deliberately
//! independent routes: quadratic pair enumeration for inversion counts,
//! exact rational arithmetic for Tanimoto, and formula-derived corpus
//! fixtures for the parser.

mod common;

use std::collections::HashMap;
use std::time::Instant;

use molspace::fingerprint::{morgan_fingerprint, Fingerprint};
use molspace::molgraph::parse_smiles;
use molspace::pipeline::{
    cross_rank_percentile, percentile_from_indices, run_concordance, synth_generate,
    AnalysisConfig, SpaceInputs, SynthParams,
};
use molspace::ranktau::{kendall_tau, Ordering, Space};
use molspace::rng::SplitMix64;
use molspace::spaces::{pool_max, AtomMatrix, DockingMatrix, EmbeddingSet, MolEmbedding};

fn random_permutation(rng: &mut SplitMix64, n: usize) -> Vec<usize> {
    let mut items: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
    items
}

fn ordering_from_permutation(anchor: &str, space: Space, perm: &[usize]) -> Ordering {
    let items: Vec<(String, f64)> = perm
        .iter()
        .enumerate()
        .map(|(rank, &idx)| (format!("m{idx:05}"), rank as f64))
        .collect();
    Ordering::from_distances(anchor, space, items).expect("valid ordering")
}

/// O(n^2) discordant-pair oracle over two orderings.
fn brute_force_swaps(a: &Ordering, b: &Ordering) -> u64 {
    let rank_b: HashMap<&str, usize> = b
        .ranked()
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_str(), i))
        .collect();
    let ranks: Vec<usize> = a.ranked().iter().map(|m| rank_b[m.as_str()]).collect();
    let mut swaps = 0u64;
    for i in 0..ranks.len() {
        for j in (i + 1)..ranks.len() {
            if ranks[i] > ranks[j] {
                swaps += 1;
            }
        }
    }
    swaps
}

#[test]
fn criterion_01_kendall_tau_matches_quadratic_oracle() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xC1);
    for trial in 0..1000 {
        let n = 2 + (rng.below(199)) as usize;
        let a = ordering_from_permutation("x", Space::Docking, &random_permutation(&mut rng, n));
        let b = ordering_from_permutation("x", Space::Embedding, &random_permutation(&mut rng, n));
        let fast = kendall_tau(&a, &b).unwrap();
        let slow = brute_force_swaps(&a, &b);
        assert_eq!(fast.swaps, slow, "trial {trial}, n {n}");
        assert_eq!(fast.pairs, (n as u64) * (n as u64 - 1) / 2);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("PASS criterion 1: merge-sort Kendall-Tau == brute force on 1000 pairs (n in [2,200]) in {elapsed:.2?}");
}

#[test]
fn criterion_02_kendall_tau_metric_suite() {
    let mut rng = SplitMix64::new(0xC2);

    let ident = ordering_from_permutation("x", Space::Docking, &(0..50).collect::<Vec<_>>());
    assert_eq!(kendall_tau(&ident, &ident).unwrap().swaps, 0);

    let fwd: Vec<usize> = (0..50).collect();
    let rev: Vec<usize> = (0..50).rev().collect();
    let tau = kendall_tau(
        &ordering_from_permutation("x", Space::Docking, &fwd),
        &ordering_from_permutation("x", Space::Embedding, &rev),
    )
    .unwrap();
    assert_eq!(tau.swaps, 50 * 49 / 2);
    assert_eq!(tau.normalized, 1.0);

    for _ in 0..10_000 {
        let n = 2 + rng.below(59) as usize;
        let a = ordering_from_permutation("x", Space::Docking, &random_permutation(&mut rng, n));
        let b = ordering_from_permutation("x", Space::Embedding, &random_permutation(&mut rng, n));
        let c = ordering_from_permutation("x", Space::Feature, &random_permutation(&mut rng, n));
        let ab = kendall_tau(&a, &b).unwrap().swaps;
        let ba = kendall_tau(&b, &a).unwrap().swaps;
        let bc = kendall_tau(&b, &c).unwrap().swaps;
        let ac = kendall_tau(&a, &c).unwrap().swaps;
        assert_eq!(ab, ba);
        assert!(ac <= ab + bc, "triangle violated: {ac} > {ab} + {bc}");
        assert_eq!(kendall_tau(&a, &a).unwrap().swaps, 0);
    }
    println!("PASS criterion 2: identity, reversal, symmetry and triangle hold on 10^4 permutation triples");
}

#[test]
fn criterion_03_random_baseline_is_half() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xC3);
    let n = 1000;
    let mut total = 0.0;
    let trials = 100;
    for _ in 0..trials {
        let a = ordering_from_permutation("x", Space::Docking, &random_permutation(&mut rng, n));
        let b = ordering_from_permutation("x", Space::Random, &random_permutation(&mut rng, n));
        total += kendall_tau(&a, &b).unwrap().normalized;
    }
    let mean = total / trials as f64;
    let elapsed = start.elapsed();
    assert!((0.48..=0.52).contains(&mean), "mean normalized {mean}");
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("PASS criterion 3: random-vs-random mean normalized KT = {mean:.4} in [0.48, 0.52] ({elapsed:.2?})");
}

fn synthetic_docking(
    rng: &mut SplitMix64,
    molecules: usize,
    targets: usize,
    missing: f64,
    affine: Option<&[(f64, f64)]>,
) -> DockingMatrix {
    // Scores drawn once from a seeded stream; the affine variant must
    // consume the stream identically, so draws happen unconditionally.
    let mut triples = Vec::new();
    for m in 0..molecules {
        for t in 0..targets {
            let score = -12.0 + 10.0 * rng.next_f64();
            let dropped = rng.next_f64() < missing;
            if dropped {
                continue;
            }
            let score = match affine {
                Some(params) => {
                    let (a, b) = params[t];
                    a * score + b
                }
                None => score,
            };
            triples.push((format!("m{m:04}"), format!("t{t:02}"), score));
        }
    }
    DockingMatrix::from_scores(triples).unwrap()
}

#[test]
fn criterion_04_docking_distance_properties() {
    let (molecules, targets) = (1000, 50);
    let affine_params: Vec<(f64, f64)> = {
        let mut rng = SplitMix64::new(0xAFF);
        (0..targets)
            .map(|_| (0.25 + 4.0 * rng.next_f64(), -6.0 + 12.0 * rng.next_f64()))
            .collect()
    };
    let base = synthetic_docking(&mut SplitMix64::new(0xC4), molecules, targets, 0.05, None);
    let rescaled = synthetic_docking(
        &mut SplitMix64::new(0xC4),
        molecules,
        targets,
        0.05,
        Some(&affine_params),
    );

    let mut rng = SplitMix64::new(0xC41);
    for _ in 0..500 {
        let i = rng.below(molecules as u64) as usize;
        let j = rng.below(molecules as u64) as usize;
        let (a, b) = (format!("m{i:04}"), format!("m{j:04}"));
        let Ok(d_ab) = base.docking_distance(&a, &b) else {
            continue;
        };
        let d_ba = base.docking_distance(&b, &a).unwrap();
        assert_eq!(d_ab, d_ba, "symmetry");
        assert!(d_ab.sum >= 0.0);

        let r_ab = rescaled.docking_distance(&a, &b).unwrap();
        assert_eq!(d_ab.targets, r_ab.targets);
        let scale = d_ab.sum.abs().max(1e-300);
        assert!(
            (d_ab.sum - r_ab.sum).abs() / scale <= 1e-9,
            "affine invariance: {} vs {}",
            d_ab.sum,
            r_ab.sum
        );
    }
    for m in 0..molecules {
        let id = format!("m{m:04}");
        let d = base.docking_distance(&id, &id).unwrap();
        assert_eq!(d.sum, 0.0, "diagonal");
    }
    println!("PASS criterion 4: docking distance is symmetric, zero on the diagonal, affine-invariant (rel err <= 1e-9) on 1000x50 with 5% missing");
}

#[test]
fn criterion_05_pooling_and_embedding_distance_properties() {
    let mut rng = SplitMix64::new(0xC5);
    for _ in 0..10_000 {
        let rows = 1 + rng.below(6) as usize;
        let dim = 1 + rng.below(6) as usize;
        let data: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..dim).map(|_| rng.gaussian()).collect())
            .collect();
        let perm = random_permutation(&mut rng, rows);
        let shuffled: Vec<Vec<f64>> = perm.iter().map(|&i| data[i].clone()).collect();
        let a = pool_max(&AtomMatrix::from_rows(data).unwrap()).unwrap();
        let b = pool_max(&AtomMatrix::from_rows(shuffled).unwrap()).unwrap();
        assert_eq!(a, b, "row permutation changed the pooled vector");
    }

    let mut set = EmbeddingSet::new();
    let dim = 8;
    for i in 0..60 {
        let v: Vec<f64> = (0..dim).map(|_| rng.gaussian()).collect();
        set.insert(&format!("m{i:02}"), MolEmbedding::Pooled(v)).unwrap();
    }
    let dist = |i: usize, j: usize| {
        molspace::spaces::embedding_distance(&format!("m{i:02}"), &format!("m{j:02}"), &set)
            .unwrap()
    };
    for _ in 0..10_000 {
        let (i, j, k) = (
            rng.below(60) as usize,
            rng.below(60) as usize,
            rng.below(60) as usize,
        );
        let (ij, ji, jk, ik) = (dist(i, j), dist(j, i), dist(j, k), dist(i, k));
        assert_eq!(ij, ji, "symmetry");
        assert!(ij >= 0.0);
        assert!(ik <= ij + jk + 1e-9, "triangle: {ik} > {ij} + {jk}");
        assert_eq!(dist(i, i), 0.0);
    }
    println!("PASS criterion 5: max-pool row-permutation invariance (10^4 matrices) and embedding pseudometric axioms (10^4 triples)");
}

/// Exact rational Tanimoto distance as (numerator, denominator); the
/// all-zero pair has distance 0 by definition.
fn tanimoto_fraction(a: &Fingerprint, b: &Fingerprint) -> (u128, u128) {
    let (inter, union) = a.overlap(b).unwrap();
    if union == 0 {
        (0, 1)
    } else {
        ((union - inter) as u128, union as u128)
    }
}

#[test]
fn criterion_06_fingerprint_determinism_and_tanimoto_metric() {
    // Token-order permutations of the curated corpus must produce
    // bit-identical fingerprints.
    for entry in common::CORPUS {
        let g1 = parse_smiles(entry.id, entry.smiles).unwrap();
        let g2 = parse_smiles(entry.id, entry.permuted).unwrap();
        let f1 = morgan_fingerprint(&g1, 2, 2048).unwrap();
        let f2 = morgan_fingerprint(&g2, 2, 2048).unwrap();
        assert_eq!(
            f1.to_hex(),
            f2.to_hex(),
            "{}: permutation changed the fingerprint",
            entry.id
        );
        assert!(f1.count_ones() > 0, "{}: no bits set", entry.id);
    }

    // Tanimoto metric axioms on 10^5 random bit-vector triples, checked
    // in exact integer arithmetic.
    let mut rng = SplitMix64::new(0xC6);
    let width = 256;
    let random_fp = |rng: &mut SplitMix64| {
        let mut fp = Fingerprint::empty("r", width, 0).unwrap();
        // Vary density, occasionally producing the all-zero vector.
        let density = rng.next_f64() * rng.next_f64();
        for i in 0..width {
            if rng.next_f64() < density {
                fp.set_bit(i);
            }
        }
        fp
    };
    for trial in 0..100_000 {
        let a = random_fp(&mut rng);
        let b = random_fp(&mut rng);
        let c = random_fp(&mut rng);
        let (ab_n, ab_d) = tanimoto_fraction(&a, &b);
        let (ba_n, ba_d) = tanimoto_fraction(&b, &a);
        assert_eq!((ab_n, ab_d), (ba_n, ba_d), "symmetry, trial {trial}");
        let (ac_n, ac_d) = tanimoto_fraction(&a, &c);
        let (bc_n, bc_d) = tanimoto_fraction(&b, &c);
        // d(a,c) <= d(a,b) + d(b,c), cross-multiplied exactly.
        let lhs = ac_n * ab_d * bc_d;
        let rhs = (ab_n * bc_d + bc_n * ab_d) * ac_d;
        assert!(lhs <= rhs, "triangle violated at trial {trial}");
        let (aa_n, _) = tanimoto_fraction(&a, &a);
        assert_eq!(aa_n, 0, "identity");
    }
    println!(
        "PASS criterion 6: {} corpus permutation pairs give identical fingerprints; Tanimoto metric axioms exact on 10^5 triples",
        common::CORPUS.len()
    );
}

#[test]
fn criterion_07_parser_corpus_and_fuzzing() {
    // Formula-derived corpus counts.
    for entry in common::CORPUS {
        for smiles in [entry.smiles, entry.permuted] {
            let g = parse_smiles(entry.id, smiles).unwrap_or_else(|e| {
                panic!("{} ({smiles}): {e}", entry.id);
            });
            assert_eq!(g.atom_count(), entry.atoms, "{} atoms ({smiles})", entry.id);
            assert_eq!(g.bond_count(), entry.bonds, "{} bonds ({smiles})", entry.id);
            assert_eq!(
                g.total_hydrogens(),
                entry.hydrogens,
                "{} hydrogens ({smiles})",
                entry.id
            );
        }
    }

    // Fuzz 10^6 byte strings: arbitrary bytes and grammar-alphabet
    // strings both must yield a graph or a typed error, never a panic.
    let mut rng = SplitMix64::new(0xC7);
    let alphabet: &[u8] = b"BCNOPSFIbcnops()[]=#:+-.%0123456789@/\\*HhClBrlr ";
    let mut parsed_ok = 0u64;
    for trial in 0..1_000_000u64 {
        let len = rng.below(41) as usize;
        let raw: Vec<u8> = if trial % 2 == 0 {
            (0..len).map(|_| rng.next_u64() as u8).collect()
        } else {
            (0..len)
                .map(|_| alphabet[rng.below(alphabet.len() as u64) as usize])
                .collect()
        };
        let s = String::from_utf8_lossy(&raw);
        if parse_smiles("fuzz", &s).is_ok() {
            parsed_ok += 1;
        }
    }
    println!(
        "PASS criterion 7: {} corpus molecules match formula-derived counts; 10^6 fuzz inputs produced no crash ({parsed_ok} parsed)",
        common::CORPUS.len()
    );
}

#[test]
fn criterion_08_end_to_end_concordance_ordering() {
    let start = Instant::now();

    // Coherent embeddings at sigma = 0.1 must beat the random baseline
    // for at least 95 of 100 anchors.
    let mut params = SynthParams::new(1000, 50, 16, 0.1, 0xC8);
    params.fp_width = 256;
    let data = synth_generate(&params).unwrap();
    let mut inputs = SpaceInputs::new(data.docking);
    inputs.embeddings = Some(data.embeddings);
    let cfg = AnalysisConfig {
        anchor_count: 100,
        seed: 7,
        spaces: vec![Space::Embedding, Space::Random],
        min_shared_targets: 1,
        per_target_mean: true,
    };
    let report = run_concordance(&cfg, &inputs).unwrap();
    assert_eq!(report.effective_anchors, 100);
    let embedding = &report.spaces[0];
    let random = &report.spaces[1];
    let mut wins = 0;
    for (e, r) in embedding.anchors.iter().zip(&random.anchors) {
        assert_eq!(e.anchor_id, r.anchor_id);
        if e.normalized < r.normalized {
            wins += 1;
        }
    }
    assert!(wins >= 95, "coherent embedding beat random for only {wins}/100 anchors");
    let emb_mean = embedding.mean_normalized.unwrap();
    let rand_mean = random.mean_normalized.unwrap();
    assert!(emb_mean < rand_mean);

    // Zero noise: embedding orderings collapse onto the docking
    // orderings (per-target means cancel the sparsity-induced
    // shared-target count differences).
    let mut params0 = SynthParams::new(1000, 50, 16, 0.0, 0xC8);
    params0.fp_width = 256;
    let data0 = synth_generate(&params0).unwrap();
    let mut inputs0 = SpaceInputs::new(data0.docking);
    inputs0.embeddings = Some(data0.embeddings);
    let cfg0 = AnalysisConfig {
        anchor_count: 100,
        seed: 7,
        spaces: vec![Space::Embedding],
        min_shared_targets: 1,
        per_target_mean: true,
    };
    let report0 = run_concordance(&cfg0, &inputs0).unwrap();
    let zero_mean = report0.spaces[0].mean_normalized.unwrap();
    assert!(zero_mean <= 0.01, "sigma=0 mean normalized KT {zero_mean}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "PASS criterion 8: coherent beats random for {wins}/100 anchors (means {emb_mean:.4} < {rand_mean:.4}); sigma=0 mean = {zero_mean:.6} <= 0.01 ({elapsed:.2?})"
    );
}

#[test]
fn criterion_09_percentile_arithmetic() {
    // Cross-rank percentile over injected rank fixtures.
    let p33 = percentile_from_indices(31650, 34551, 100_000);
    assert!((p33 - 33.10016899831002).abs() < 1e-12, "{p33}");
    assert_eq!((p33 * 10.0).round() / 10.0, 33.1);

    let p58 = percentile_from_indices(50204, 67119, 100_000);
    assert!((p58 - 58.66091339086609).abs() < 1e-12, "{p58}");
    assert_eq!((p58 * 10.0).round() / 10.0, 58.7);

    // The full probe agrees with the pure arithmetic on a small dataset.
    let mut params = SynthParams::new(120, 10, 4, 0.3, 0xC9);
    params.fp_width = 64;
    let data = synth_generate(&params).unwrap();
    let m1 = data.molecule_ids[0].clone();
    let m2 = data.molecule_ids[1].clone();
    let mut inputs = SpaceInputs::new(data.docking);
    inputs.embeddings = Some(data.embeddings);
    let res = cross_rank_percentile(&m1, &m2, Space::Embedding, 50, 3, &inputs).unwrap();
    let expect = percentile_from_indices(res.index_in_first, res.index_in_second, 50);
    assert_eq!(res.percentile, expect);
    assert_eq!(res.list_len, 51);
    assert!(res.percentile >= 0.0 && res.percentile <= 100.0);

    println!("PASS criterion 9: cross-rank percentile arithmetic gives 33.1 and 58.7 on the reference index fixtures");
}

#[test]
fn criterion_10_reports_are_thread_count_independent() {
    let mut params = SynthParams::new(300, 20, 8, 0.2, 0xCA);
    params.fp_width = 128;
    let data = synth_generate(&params).unwrap();
    let mut inputs = SpaceInputs::new(data.docking);
    inputs.embeddings = Some(data.embeddings);
    inputs.fingerprints = Some(data.fingerprints);
    let cfg = AnalysisConfig {
        anchor_count: 40,
        seed: 11,
        spaces: vec![Space::Embedding, Space::Fingerprint, Space::Random],
        min_shared_targets: 1,
        per_target_mean: false,
    };

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_concordance(&cfg, &inputs).unwrap().to_json());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| run_concordance(&cfg, &inputs).unwrap().to_json());
    assert_eq!(single, many, "report JSON differs across thread counts");

    let again = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| run_concordance(&cfg, &inputs).unwrap().to_json());
    assert_eq!(single, again);
    println!("PASS criterion 10: identical report JSON at 1, 3 and 8 threads");
}
