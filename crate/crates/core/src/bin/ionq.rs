//! Command-line front end for the ion-qaoa laboratory.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ion_qaoa::csv::{emit_csv, Cell};
use ion_qaoa::error::Error;
use ion_qaoa::estimation::{
    concentration_bounds, estimate, sample_counts, sample_size_clt, sample_size_clt_noisy,
    ReadoutNoise,
};
use ion_qaoa::gates::{boolean_identity_check, verify_k_toffoli};
use ion_qaoa::ion::{build_couplings, heff_eigen, trap_spectrum, TrapParams, TwoLevelParams};
use ion_qaoa::optimize::{
    fraction_curve, ground_key, train_instance, ConfigVariant, InstanceDB, OptimizerConfig,
};
use ion_qaoa::sk::{enumerate_instances, spectrum, success_threshold, SKInstance};
use ion_qaoa::symmetry::{build_basis_m, classify_spectrum, min_energy_over_v, InstanceClass};
use ion_qaoa::vqe1q::{vqe_run, BlochHamiltonian};

#[derive(Parser)]
#[command(name = "ionq", version, about = "ion-native QAOA statevector laboratory")]
struct Cli {
    /// base RNG seed for anything stochastic
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// write tabular output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// rayon worker threads (0 = automatic)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Symmetric,
    Asymmetric,
    Search,
    Standard,
}

impl VariantArg {
    fn resolve(self, sets: usize) -> ConfigVariant {
        match self {
            VariantArg::Symmetric => ConfigVariant::Symmetric,
            VariantArg::Asymmetric => ConfigVariant::AsymmetricRandom,
            VariantArg::Search => ConfigVariant::ProblemSearch { sets },
            VariantArg::Standard => ConfigVariant::StandardQaoa,
        }
    }
}

#[derive(Args)]
struct NoiseArgs {
    /// P("0" | |1⟩)
    #[arg(long, default_value_t = 0.0)]
    eps01: f64,
    /// P("1" | |0⟩)
    #[arg(long, default_value_t = 0.0)]
    eps10: f64,
}

impl NoiseArgs {
    fn build(&self) -> Result<ReadoutNoise, Error> {
        ReadoutNoise::new(self.eps01, self.eps10)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the ion coupling matrix J_jk = J_max·A_j·A_k/|j−k|^α
    Couplings {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 4.0)]
        jmax: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// comma-separated A_j profile (defaults to all ones)
        #[arg(long)]
        profile: Option<String>,
    },
    /// Exact diagonal spectrum of an SK instance
    Spectrum {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        mask: u64,
    },
    /// Symmetry classification of one instance or the full n = 6 census
    Classify {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// classify a single instance instead of the census
        #[arg(long)]
        mask: Option<u64>,
    },
    /// Layerwise training on a single instance
    Train {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        mask: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::Symmetric)]
        variant: VariantArg,
        #[arg(long, default_value_t = 10)]
        sets: usize,
        #[arg(long, default_value_t = 20)]
        max_depth: usize,
        /// reduced restart budget for quick runs
        #[arg(long)]
        desk_scale: bool,
        /// instance database for cached results
        #[arg(long)]
        db: Option<PathBuf>,
    },
    /// Fraction of instances solved vs depth over a sampled census
    Fraction {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// number of census instances to sample uniformly (without replacement)
        #[arg(long, default_value_t = 32)]
        count: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Symmetric)]
        variant: VariantArg,
        #[arg(long, default_value_t = 10)]
        sets: usize,
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        #[arg(long)]
        desk_scale: bool,
    },
    /// Draw shots at a known probability and report the corrected estimate
    Shots {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        m: u64,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Concentration-bound ladder at a common (m, ε, δ) point
    Bounds {
        #[arg(long, default_value_t = 1000)]
        m: u64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0.25)]
        variance: f64,
        #[arg(long, default_value_t = 0.5)]
        mean: f64,
    },
    /// CLT sample-size planner
    Clt {
        #[arg(long, default_value_t = 0.05)]
        accuracy: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        h: f64,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Single-qubit VQE against a fixed Bloch Hamiltonian
    Vqe1q {
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        #[arg(long, default_value_t = 5)]
        restarts: u32,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Effective two-level / trap-mode spectra
    Ion {
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        rabi: f64,
        /// include the trap-mode spectrum at this secular frequency
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 12)]
        mmax: usize,
    },
    /// Verify the √X-power synthesis of the k-controlled X
    ToffoliVerify {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// also print the exponent-identity truth table
        #[arg(long)]
        identities: bool,
    },
}

fn write_table(out: &Option<PathBuf>, header: &[&str], rows: &[Vec<Cell>]) -> Result<(), Error> {
    match out {
        Some(path) => {
            let mut f = File::create(path)?;
            emit_csv(&mut f, header, rows)?;
            f.flush()?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            emit_csv(&mut stdout, header, rows)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Couplings { n, jmax, alpha, profile } => {
            let a: Vec<f64> = match profile {
                Some(s) => s
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Domain(format!("profile: {e}"))))
                    .collect::<Result<_, _>>()?,
                None => vec![1.0; n],
            };
            let c = build_couplings(n, jmax, alpha, &a)?;
            let header: Vec<String> = (0..n).map(|k| format!("j{k}")).collect();
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<Cell>> = (0..n)
                .map(|j| (0..n).map(|k| Cell::Real(c.j[j][k])).collect())
                .collect();
            write_table(&cli.out, &header_refs, &rows)?;
            eprintln!("reflection symmetric: {}", c.is_reflection_symmetric());
        }
        Command::Spectrum { n, mask } => {
            let inst = SKInstance::new(n, mask)?;
            let spec = spectrum(&inst);
            let threshold = success_threshold(&spec)?;
            let rows: Vec<Vec<Cell>> = spec
                .energies
                .iter()
                .enumerate()
                .map(|(z, &e)| vec![Cell::UInt(z as u64), Cell::Real(e)])
                .collect();
            write_table(&cli.out, &["basis_state", "energy"], &rows)?;
            eprintln!(
                "lambda_min = {}, gap = {}, ground states = {:?}, success threshold = {}",
                spec.lambda_min, spec.gap, spec.ground_indices, threshold
            );
        }
        Command::Classify { n, mask } => match mask {
            Some(mask) => {
                let inst = SKInstance::new(n, mask)?;
                let spec = spectrum(&inst);
                let class = classify_spectrum(n, &spec);
                let min_v = min_energy_over_v(&inst)?;
                println!("mask = {mask}: {class:?}");
                println!("lambda_min = {}, min over symmetric subspace = {min_v}", spec.lambda_min);
            }
            None => {
                let basis = build_basis_m(n)?;
                let (c1, c2, c3) = basis.class_counts();
                eprintln!("basis M: {} vectors (classes {c1}/{c2}/{c3})", basis.vectors.len());
                let mut easy = 0u64;
                let mut total = 0u64;
                for inst in enumerate_instances(n)? {
                    let spec = spectrum(&inst);
                    if classify_spectrum(n, &spec) == InstanceClass::EasySymmetric {
                        easy += 1;
                    }
                    total += 1;
                }
                println!(
                    "easy instances: {easy}/{total} ({:.4})",
                    easy as f64 / total as f64
                );
            }
        },
        Command::Train { n, mask, variant, sets, max_depth, desk_scale, db } => {
            let inst = SKInstance::new(n, mask)?;
            let mut cfg = if desk_scale { OptimizerConfig::desk_scale() } else { OptimizerConfig::default() };
            cfg.max_depth = max_depth;
            cfg.rng_seed = cli.seed;
            let spec = spectrum(&inst);
            let key = ground_key(n, &spec.ground_indices);
            if let Some(path) = &db {
                if path.exists() {
                    let cache = InstanceDB::load(path)?;
                    if let Some(rec) = cache.lookup(&key) {
                        println!(
                            "cached: preparable = {}, solved at depth {:?}",
                            rec.preparable, rec.solved_depth
                        );
                        return Ok(());
                    }
                }
            }
            let outcome = train_instance(&inst, variant.resolve(sets), &cfg)?;
            let rows: Vec<Vec<Cell>> = outcome
                .records
                .iter()
                .map(|r| {
                    vec![
                        Cell::UInt(r.depth as u64),
                        Cell::Real(r.best_energy),
                        Cell::Text(if r.solved { "yes" } else { "no" }.to_string()),
                        Cell::UInt(r.evaluations as u64),
                    ]
                })
                .collect();
            write_table(&cli.out, &["depth", "best_energy", "solved", "evaluations"], &rows)?;
            eprintln!("solved at depth: {:?}", outcome.solved_depth);
            if let Some(path) = &db {
                let mut cache = if path.exists() { InstanceDB::load(path)? } else { InstanceDB::new() };
                cache.insert(
                    key,
                    ion_qaoa::optimize::DbRecord {
                        preparable: outcome.solved_depth.is_some(),
                        solved_depth: outcome.solved_depth,
                    },
                );
                cache.save(path)?;
            }
        }
        Command::Fraction { n, count, variant, sets, max_depth, desk_scale } => {
            let mut cfg = if desk_scale { OptimizerConfig::desk_scale() } else { OptimizerConfig::default() };
            cfg.max_depth = max_depth;
            cfg.rng_seed = cli.seed;
            let mut census: Vec<SKInstance> = enumerate_instances(n)?.collect();
            if count == 0 || count > census.len() {
                return Err(Error::Domain(format!(
                    "count must lie in 1..={}", census.len()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed ^ 0xf7ac);
            // partial Fisher–Yates: the first `count` entries are a uniform sample
            for i in 0..count {
                let j = rand::Rng::gen_range(&mut rng, i..census.len());
                census.swap(i, j);
            }
            let instances = &census[..count];
            eprintln!("training {} instances to depth {max_depth}", instances.len());
            let curve = fraction_curve(instances, variant.resolve(sets), &cfg)?;
            let rows: Vec<Vec<Cell>> = curve
                .iter()
                .enumerate()
                .map(|(i, &f)| vec![Cell::UInt((i + 1) as u64), Cell::Real(f)])
                .collect();
            write_table(&cli.out, &["depth", "fraction_solved"], &rows)?;
        }
        Command::Shots { p, m, noise } => {
            let noise = noise.build()?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain("p must lie in [0, 1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let k = sample_counts(p, m, &noise, &mut rng);
            let report = estimate(k, m, &noise)?;
            println!("k = {} of m = {}", report.k, report.m);
            println!("p_hat = {}, p_ml = {}, h_hat = {}", report.p_hat, report.p_ml, report.h_hat);
            println!(
                "uncorrected bias = {}, variance = {}, g = {:?}, 95% ci radius on h = {}",
                report.bias, report.variance, report.g, report.ci_radius
            );
        }
        Command::Bounds { m, eps, delta, variance, mean } => {
            let b = concentration_bounds(m, eps, delta, variance, mean)?;
            println!("markov tail        = {}", b.markov_tail);
            println!("chebyshev tail     = {}", b.chebyshev_tail);
            println!("chebyshev (coin)   = {}", b.chebyshev_bernoulli);
            println!("hoeffding delta    = {}", b.hoeffding_delta);
            println!("hoeffding samples  = {}", b.hoeffding_sample_size);
            println!("hoeffding error    = {}", b.hoeffding_error);
        }
        Command::Clt { accuracy, alpha, h, noise } => {
            let noise = noise.build()?;
            let ideal = sample_size_clt(accuracy, alpha, h)?;
            println!("ideal readout:  n = {ideal}");
            if !noise.is_none() {
                let noisy = sample_size_clt_noisy(accuracy, alpha, &noise)?;
                println!("noisy readout (worst case h = 0): n = {noisy}");
            }
        }
        Command::Vqe1q { shots, restarts, noise } => {
            let noise = noise.build()?;
            let h = BlochHamiltonian::new(
                -(1.0f64 / 6.0).sqrt(),
                (2.0f64 / 6.0).sqrt(),
                -(3.0f64 / 6.0).sqrt(),
            )?;
            let run = vqe_run(&h, shots, &noise, cli.seed, restarts)?;
            println!("params  = ({}, {})", run.best_params[0], run.best_params[1]);
            println!("exact E = {} (error vs ground: {})", run.exact_energy, run.error);
            println!("overlap with ground state = {}", run.ground_overlap);
            println!(
                "shots per cost evaluation = {}, evaluations = {}",
                run.shots_per_evaluation, run.evaluations
            );
        }
        Command::Ion { delta, rabi, nu, eta, mmax } => {
            let p = TwoLevelParams { delta, rabi: num_complex::Complex64::new(rabi, 0.0) };
            let (lp, lm, vp, vm) = heff_eigen(&p);
            println!("lambda_+ = {lp}, eigenvector = [{}, {}]", vp[0], vp[1]);
            println!("lambda_- = {lm}, eigenvector = [{}, {}]", vm[0], vm[1]);
            if let Some(nu) = nu {
                let t = TrapParams::new(nu, eta, mmax)?;
                let s = trap_spectrum(&p, &t)?;
                let rows: Vec<Vec<Cell>> = s
                    .levels
                    .iter()
                    .map(|l| {
                        vec![
                            Cell::Real(l.energy),
                            Cell::UInt(l.fock as u64),
                            Cell::Text(if l.excited { "e".into() } else { "g".into() }),
                            Cell::Real(l.top_fock_population),
                        ]
                    })
                    .collect();
                write_table(&cli.out, &["energy", "fock", "qubit", "top_fock_population"], &rows)?;
                if s.truncation_warning {
                    eprintln!("warning: population at the Fock-space cutoff is not negligible");
                }
            }
        }
        Command::ToffoliVerify { k, identities } => {
            if identities {
                let report = boolean_identity_check();
                for (a, b, lhs, rhs) in &report.assignments {
                    println!("a = {a}, b = {b}: a + b − 2ab = {lhs}, a ⊕ b = {rhs}");
                }
                println!("generalized identity holds: {}", report.generalized_ok);
            }
            let report = verify_k_toffoli(k)?;
            println!(
                "k = {}: {} elements, max |Δ| = {:.3e}",
                report.k, report.elements, report.max_abs_error
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let verification = matches!(
                e,
                Error::Synthesis(_)
                    | Error::ConjugationMismatch { .. }
                    | Error::NotUnitary { .. }
                    | Error::InternalConsistency(_)
            );
            if verification {
                ExitCode::from(3)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
