//! molspace command-line front end.
//!
//! Exit codes: 0 on success, 1 on data errors (one-line diagnostic on
//! stderr naming the file and line where applicable), 2 on usage errors.

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use molspace::fingerprint::{
    load_fingerprint_file, morgan_fingerprint, write_fingerprint_file, Fingerprint,
};
use molspace::molgraph::load_smiles_file;
use molspace::pipeline::{
    cross_rank_percentile, run_concordance_with_progress, synth_generate, AnalysisConfig,
    SpaceDistance, SpaceInputs, SynthParams,
};
use molspace::ranktau::{kendall_tau, load_ordering_file, Space};
use molspace::spaces::{load_docking_file, load_embeddings_file, FeatureConfig};

#[derive(Parser)]
#[command(
    name = "molspace",
    version,
    about = "Concordance analysis of molecular similarity spaces",
    max_term_width = 100
)]
struct Cli {
    /// Worker thread cap (default: all cores; MOLSPACE_THREADS as fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Docking scores TSV: `mol_id<TAB>target_id<TAB>score`.
    #[arg(long)]
    docking: Option<PathBuf>,

    /// Embeddings TSV, per-atom (`mol_id atom_index v0..`) or pooled
    /// (`mol_id v0..`); an optional `#format=atoms|pooled` header pins
    /// the shape.
    #[arg(long)]
    embeddings: Option<PathBuf>,

    /// SMILES file: `mol_id<TAB>smiles`, one record per line.
    #[arg(long)]
    smiles: Option<PathBuf>,

    /// Precomputed fingerprint file (`#width=B radius=R` header).
    #[arg(long)]
    fingerprints: Option<PathBuf>,

    /// Morgan radius when fingerprints are computed from SMILES.
    #[arg(long, default_value_t = 2)]
    radius: u32,

    /// Fingerprint width in bits (power of two in [64, 65536]).
    #[arg(long, default_value_t = 2048)]
    width: usize,

    /// Feature vocabulary as comma-separated element symbols, e.g.
    /// `C,N,O,S`; defaults to every element observed in the SMILES file.
    #[arg(long)]
    vocab: Option<String>,
}

impl DataArgs {
    fn load(&self) -> Result<SpaceInputs> {
        let mut inputs = SpaceInputs {
            fp_radius: self.radius,
            fp_width: self.width,
            ..SpaceInputs::default()
        };
        if let Some(path) = &self.docking {
            inputs.docking = Some(load_docking_file(path)?);
            inputs
                .provenance
                .insert("docking_file".into(), path.display().to_string());
        }
        if let Some(path) = &self.embeddings {
            inputs.embeddings = Some(load_embeddings_file(path)?);
            inputs
                .provenance
                .insert("embeddings_file".into(), path.display().to_string());
        }
        if let Some(path) = &self.smiles {
            inputs.graphs = Some(load_smiles_file(path)?);
            inputs
                .provenance
                .insert("smiles_file".into(), path.display().to_string());
        }
        if let Some(path) = &self.fingerprints {
            inputs.fingerprints = Some(load_fingerprint_file(path)?);
            inputs
                .provenance
                .insert("fingerprints_file".into(), path.display().to_string());
        }
        if let Some(symbols) = &self.vocab {
            inputs.feature_config = Some(
                FeatureConfig::from_symbols(symbols).map_err(|e| anyhow!("--vocab: {e}"))?,
            );
        }
        Ok(inputs)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a SMILES file and print per-molecule graph statistics.
    Parse {
        /// SMILES file: `mol_id<TAB>smiles`.
        #[arg(long)]
        smiles: PathBuf,
    },

    /// Compute Morgan fingerprints for a SMILES file.
    Fp {
        #[arg(long)]
        smiles: PathBuf,
        /// Morgan radius (iteration count).
        #[arg(long, default_value_t = 2)]
        radius: u32,
        /// Width in bits (power of two in [64, 65536]).
        #[arg(long, default_value_t = 2048)]
        width: usize,
        /// Output fingerprint file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Distance between two molecules in one space.
    Dist {
        /// Space: docking, embedding, feature or fingerprint.
        #[arg(long)]
        space: Space,
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        /// Report the docking sum divided by the contributing-target count.
        #[arg(long)]
        per_target_mean: bool,
        #[command(flatten)]
        data: DataArgs,
    },

    /// Rank all molecules of one space by distance to an anchor.
    Rank {
        #[arg(long)]
        anchor: String,
        #[arg(long)]
        space: Space,
        #[arg(long)]
        per_target_mean: bool,
        /// Output ordering TSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        data: DataArgs,
    },

    /// Kendall-Tau rank distance between two ordering files.
    Kt {
        /// First ordering TSV (as written by `rank`).
        #[arg(long)]
        a: PathBuf,
        /// Second ordering TSV over the same molecules and anchor.
        #[arg(long)]
        b: PathBuf,
    },

    /// Full concordance analysis against the docking reference space.
    Analyze {
        /// Spaces to compare, comma-separated (embedding, feature,
        /// fingerprint, random); default: every space with loaded data,
        /// plus random.
        #[arg(long, value_delimiter = ',')]
        spaces: Vec<Space>,
        /// Number of anchor molecules sampled from the universe.
        #[arg(long, default_value_t = 100)]
        anchors: usize,
        /// Seed for anchor sampling and the random baseline.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum contributing targets for a docking pair distance.
        #[arg(long, default_value_t = 1)]
        min_shared_targets: usize,
        /// Divide docking sums by the contributing-target count.
        #[arg(long)]
        per_target_mean: bool,
        /// Write the JSON report here (the table always goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        data: DataArgs,
    },

    /// Cross-rank percentile of a molecule pair against a random sample.
    Percentile {
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        #[arg(long)]
        space: Space,
        /// Background molecules sampled around the pair.
        #[arg(long, default_value_t = 1000)]
        sample_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        data: DataArgs,
    },

    /// Generate a synthetic dataset (docking + embeddings + fingerprints).
    Synth {
        #[arg(long, default_value_t = 1000)]
        molecules: usize,
        #[arg(long, default_value_t = 50)]
        targets: usize,
        /// Latent/embedding dimensionality.
        #[arg(long, default_value_t = 16)]
        dim: usize,
        /// Noise scale sigma (0 = embedding space mirrors docking).
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fraction of (molecule, target) scores withheld.
        #[arg(long, default_value_t = 0.05)]
        drop_rate: f64,
        /// Width of the fingerprint surrogates.
        #[arg(long, default_value_t = 2048)]
        fp_width: usize,
        /// `coherent` embeddings track docking; `random` ignores it.
        #[arg(long, default_value = "coherent")]
        embedding_mode: String,
        /// Output directory for docking.tsv, embeddings.tsv, fingerprints.fp.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("MOLSPACE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("error: could not configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Parse { smiles } => cmd_parse(&smiles),
        Command::Fp {
            smiles,
            radius,
            width,
            out,
        } => cmd_fp(&smiles, radius, width, out.as_deref()),
        Command::Dist {
            space,
            m1,
            m2,
            per_target_mean,
            data,
        } => cmd_dist(space, &m1, &m2, per_target_mean, &data),
        Command::Rank {
            anchor,
            space,
            per_target_mean,
            out,
            data,
        } => cmd_rank(&anchor, space, per_target_mean, out.as_deref(), &data),
        Command::Kt { a, b } => cmd_kt(&a, &b),
        Command::Analyze {
            spaces,
            anchors,
            seed,
            min_shared_targets,
            per_target_mean,
            out,
            data,
        } => cmd_analyze(
            spaces,
            anchors,
            seed,
            min_shared_targets,
            per_target_mean,
            out.as_deref(),
            &data,
        ),
        Command::Percentile {
            m1,
            m2,
            space,
            sample_size,
            seed,
            data,
        } => cmd_percentile(&m1, &m2, space, sample_size, seed, &data),
        Command::Synth {
            molecules,
            targets,
            dim,
            noise,
            seed,
            drop_rate,
            fp_width,
            embedding_mode,
            out_dir,
        } => cmd_synth(
            molecules,
            targets,
            dim,
            noise,
            seed,
            drop_rate,
            fp_width,
            &embedding_mode,
            &out_dir,
        ),
    }
}

fn write_or_stdout(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, contents)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn cmd_parse(smiles: &Path) -> Result<()> {
    let graphs = load_smiles_file(smiles)?;
    println!("mol_id\tatoms\tbonds\thydrogens\tfragments");
    for (id, graph) in &graphs {
        println!(
            "{id}\t{}\t{}\t{}\t{}",
            graph.atom_count(),
            graph.bond_count(),
            graph.total_hydrogens(),
            graph.fragment_count()
        );
    }
    Ok(())
}

fn cmd_fp(smiles: &Path, radius: u32, width: usize, out: Option<&Path>) -> Result<()> {
    let graphs = load_smiles_file(smiles)?;
    let fps: Vec<Fingerprint> = graphs
        .values()
        .map(|g| morgan_fingerprint(g, radius, width))
        .collect::<Result<_, _>>()?;
    match out {
        Some(path) => {
            write_fingerprint_file(path, &fps, width, radius)?;
            eprintln!("wrote {} fingerprints to {}", fps.len(), path.display());
        }
        None => {
            println!("#width={width} radius={radius}");
            for fp in &fps {
                println!("{}\t{}", fp.mol_id, fp.to_hex());
            }
        }
    }
    Ok(())
}

fn cmd_dist(space: Space, m1: &str, m2: &str, per_target_mean: bool, data: &DataArgs) -> Result<()> {
    let inputs = data.load()?;
    let mut evaluator = SpaceDistance::new(space, &inputs)?;
    evaluator.per_target_mean = per_target_mean;
    let d = evaluator.distance(m1, m2)?;
    if space == Space::Docking {
        let detail = inputs
            .docking
            .as_ref()
            .unwrap()
            .docking_distance(m1, m2)?;
        println!("distance={d} targets={}", detail.targets);
    } else {
        println!("distance={d}");
    }
    Ok(())
}

fn cmd_rank(
    anchor: &str,
    space: Space,
    per_target_mean: bool,
    out: Option<&Path>,
    data: &DataArgs,
) -> Result<()> {
    let inputs = data.load()?;
    let mut evaluator = SpaceDistance::new(space, &inputs)?;
    evaluator.per_target_mean = per_target_mean;
    let universe = evaluator.universe();
    let ordering = evaluator.rank(anchor, &universe)?;
    write_or_stdout(out, &ordering.to_tsv())
}

fn cmd_kt(a: &Path, b: &Path) -> Result<()> {
    let ord_a = load_ordering_file(a)?;
    let ord_b = load_ordering_file(b)?;
    let tau = kendall_tau(&ord_a, &ord_b)?;
    println!(
        "swaps={} pairs={} normalized={}",
        tau.swaps, tau.pairs, tau.normalized
    );
    Ok(())
}

fn cmd_analyze(
    spaces: Vec<Space>,
    anchors: usize,
    seed: u64,
    min_shared_targets: usize,
    per_target_mean: bool,
    out: Option<&Path>,
    data: &DataArgs,
) -> Result<()> {
    let inputs = data.load()?;
    let spaces = if spaces.is_empty() {
        // Default: every space with loaded data, plus the random baseline.
        let mut inferred = Vec::new();
        if inputs.embeddings.is_some() {
            inferred.push(Space::Embedding);
        }
        if inputs.graphs.is_some() {
            inferred.push(Space::Feature);
        }
        if inputs.fingerprints.is_some() || inputs.graphs.is_some() {
            inferred.push(Space::Fingerprint);
        }
        inferred.push(Space::Random);
        inferred
    } else {
        spaces
    };
    let cfg = AnalysisConfig {
        anchor_count: anchors,
        seed,
        spaces,
        min_shared_targets,
        per_target_mean,
    };

    let show_progress = std::io::stderr().is_terminal();
    let progress = move |done: usize, total: usize| {
        if show_progress && (done.is_multiple_of(10) || done == total) {
            let mut err = std::io::stderr().lock();
            let _ = write!(err, "\ranchors: {done}/{total}");
            if done == total {
                let _ = writeln!(err);
            }
        }
    };
    let report = run_concordance_with_progress(&cfg, &inputs, &progress)?;

    print!("{}", report.to_table());
    if let Some(path) = out {
        std::fs::write(path, report.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("report written to {}", path.display());
    }
    Ok(())
}

fn cmd_percentile(
    m1: &str,
    m2: &str,
    space: Space,
    sample_size: usize,
    seed: u64,
    data: &DataArgs,
) -> Result<()> {
    let inputs = data.load()?;
    let res = cross_rank_percentile(m1, m2, space, sample_size, seed, &inputs)?;
    println!(
        "percentile={} index_in_first={} index_in_second={} list_len={}",
        res.percentile, res.index_in_first, res.index_in_second, res.list_len
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    molecules: usize,
    targets: usize,
    dim: usize,
    noise: f64,
    seed: u64,
    drop_rate: f64,
    fp_width: usize,
    embedding_mode: &str,
    out_dir: &Path,
) -> Result<()> {
    let coherent = match embedding_mode {
        "coherent" => true,
        "random" => false,
        other => {
            return Err(anyhow!(
                "--embedding-mode must be `coherent` or `random`, got {other:?}"
            ))
        }
    };
    let mut params = SynthParams::new(molecules, targets, dim, noise, seed);
    params.drop_rate = drop_rate;
    params.fp_width = fp_width;
    params.coherent_embeddings = coherent;
    let data = synth_generate(&params)?;
    data.write_dir(out_dir)?;
    eprintln!(
        "wrote {} molecules x {} targets (dim {dim}, noise {noise}, seed {seed}) to {}",
        molecules,
        targets,
        out_dir.display()
    );
    Ok(())
}
