//! Derivative-free and finite-difference local optimization, the layerwise
//! training heuristic with multi-seed restarts, solved-fraction curves, and
//! the ground-space database cache.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ansatz::{diagonal_energy, prepare_ion_native, prepare_standard_with_diagonal, AnsatzParams};
use crate::error::{Error, Result};
use crate::ion::build_couplings;
use crate::sk::{sk_diagonal, spectrum, success_threshold, SKInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NelderMead,
    LbfgsFd,
}

/// Training configuration. Full-scale studies use 25 seeds and 50 repeats;
/// the desk-scale constructor shrinks both so sweeps finish in minutes.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub seeds_per_step: usize,
    pub heuristic_repeats: usize,
    pub max_depth: usize,
    pub method: Method,
    pub fd_step: f64,
    pub tol: f64,
    pub rng_seed: u64,
    pub max_iters: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            seeds_per_step: 25,
            heuristic_repeats: 50,
            max_depth: 20,
            method: Method::NelderMead,
            fd_step: 1e-5,
            tol: 1e-8,
            rng_seed: 0,
            max_iters: 400,
        }
    }
}

impl OptimizerConfig {
    pub fn desk_scale() -> Self {
        Self { seeds_per_step: 10, heuristic_repeats: 5, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds_per_step == 0 || self.heuristic_repeats == 0 || self.max_depth == 0 || self.max_iters == 0 {
            return Err(Error::Domain("optimizer counts must be positive".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1e-2) {
            return Err(Error::Domain("fd_step must lie in (0, 1e-2)".into()));
        }
        if self.tol <= 0.0 {
            return Err(Error::Domain("tol must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a minimization run.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub aborted_seeds: usize,
}

/// Nelder-Mead simplex descent. Returns (x, f(x), evaluations).
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    init_step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, usize) {
    let d = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    simplex.push(x0.to_vec());
    for i in 0..d {
        let mut v = x0.to_vec();
        v[i] += init_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let sorted: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let sorted_vals: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = sorted;
        values = sorted_vals;

        if values[d] - values[0] < tol {
            break;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|i| simplex[..d].iter().map(|x| x[i]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();
        let reflected: Vec<f64> = (0..d).map(|i| centroid[i] + (centroid[i] - worst[i])).collect();
        let fr = eval(&reflected, &mut evals);

        if fr < values[0] {
            let expanded: Vec<f64> = (0..d).map(|i| centroid[i] + 2.0 * (centroid[i] - worst[i])).collect();
            let fe = eval(&expanded, &mut evals);
            if fe < fr {
                simplex[d] = expanded;
                values[d] = fe;
            } else {
                simplex[d] = reflected;
                values[d] = fr;
            }
        } else if fr < values[d - 1] {
            simplex[d] = reflected;
            values[d] = fr;
        } else {
            let contracted: Vec<f64> = if fr < values[d] {
                (0..d).map(|i| centroid[i] + 0.5 * (reflected[i] - centroid[i])).collect()
            } else {
                (0..d).map(|i| centroid[i] + 0.5 * (worst[i] - centroid[i])).collect()
            };
            let fc = eval(&contracted, &mut evals);
            if fc < values[d].min(fr) {
                simplex[d] = contracted;
                values[d] = fc;
            } else {
                // shrink toward the best vertex
                for j in 1..=d {
                    let best = simplex[0].clone();
                    for i in 0..d {
                        simplex[j][i] = best[i] + 0.5 * (simplex[j][i] - best[i]);
                    }
                    values[j] = eval(&simplex[j].clone(), &mut evals);
                }
            }
        }
    }

    let (best_idx, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap();
    (simplex[best_idx].clone(), values[best_idx], evals)
}

/// L-BFGS with central finite-difference gradients and Armijo backtracking.
pub fn lbfgs_fd<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    fd_step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, usize) {
    let d = x0.len();
    let memory = 8usize;
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut x = x0.to_vec();
    let mut fx = eval(&x, &mut evals);
    let grad = |x: &[f64], evals: &mut usize, eval: &mut dyn FnMut(&[f64], &mut usize) -> f64| -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        let mut xp = x.to_vec();
        for i in 0..x.len() {
            xp[i] = x[i] + fd_step;
            let fp = eval(&xp, evals);
            xp[i] = x[i] - fd_step;
            let fm = eval(&xp, evals);
            xp[i] = x[i];
            g[i] = (fp - fm) / (2.0 * fd_step);
        }
        g
    };

    let mut g = grad(&x, &mut evals, &mut eval);
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();

    for _ in 0..max_iter {
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < 1e-7 {
            break;
        }
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(s_hist.len());
        for (s, y) in s_hist.iter().zip(y_hist.iter()).rev() {
            let rho = 1.0 / dot(y, s);
            let alpha = rho * dot(s, &q);
            for i in 0..d {
                q[i] -= alpha * y[i];
            }
            alphas.push((rho, alpha));
        }
        let scale = if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            dot(s, y) / dot(y, y)
        } else {
            1.0
        };
        for v in &mut q {
            *v *= scale;
        }
        for ((s, y), (rho, alpha)) in s_hist.iter().zip(y_hist.iter()).zip(alphas.iter().rev()) {
            let beta = rho * dot(y, &q);
            for i in 0..d {
                q[i] += s[i] * (alpha - beta);
            }
        }
        let dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let slope = dot(&g, &dir);
        let dir = if slope >= 0.0 {
            g.iter().map(|v| -v).collect::<Vec<f64>>()
        } else {
            dir
        };
        let slope = dot(&g, &dir);

        // Armijo backtracking
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let xt: Vec<f64> = (0..d).map(|i| x[i] + step * dir[i]).collect();
            let ft = eval(&xt, &mut evals);
            if ft <= fx + 1e-4 * step * slope {
                let gt = grad(&xt, &mut evals, &mut eval);
                let s: Vec<f64> = (0..d).map(|i| xt[i] - x[i]).collect();
                let y: Vec<f64> = (0..d).map(|i| gt[i] - g[i]).collect();
                if dot(&s, &y) > 1e-12 {
                    s_hist.push(s);
                    y_hist.push(y);
                    if s_hist.len() > memory {
                        s_hist.remove(0);
                        y_hist.remove(0);
                    }
                }
                x = xt;
                g = gt;
                accepted = true;
                if (fx - ft).abs() < tol {
                    fx = ft;
                    return (x, fx, evals);
                }
                fx = ft;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, fx, evals)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Best of `seeds_per_step` restarts: the supplied start plus uniform random
/// starts in `ranges`. Seeds whose start evaluates non-finite are skipped.
pub fn local_minimize<F: Fn(&[f64]) -> f64>(
    objective: F,
    start: &[f64],
    ranges: &[(f64, f64)],
    cfg: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> MinimizeResult {
    let mut best_x = start.to_vec();
    let mut best_v = f64::INFINITY;
    let mut total_evals = 0usize;
    let mut aborted = 0usize;

    for seed_idx in 0..cfg.seeds_per_step {
        let x0: Vec<f64> = if seed_idx == 0 {
            start.to_vec()
        } else {
            ranges.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect()
        };
        let f0 = objective(&x0);
        total_evals += 1;
        if !f0.is_finite() {
            aborted += 1;
            continue;
        }
        let (x, v, evals) = match cfg.method {
            Method::NelderMead => nelder_mead(&objective, &x0, 0.3, cfg.tol, cfg.max_iters),
            Method::LbfgsFd => lbfgs_fd(&objective, &x0, cfg.fd_step, cfg.tol, cfg.max_iters),
        };
        total_evals += evals;
        let v = v.min(f0);
        let x = if v <= f0 { x } else { x0 };
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    MinimizeResult { x: best_x, value: best_v, evaluations: total_evals, aborted_seeds: aborted }
}

/// Per-depth training record.
#[derive(Debug, Clone)]
pub struct TrainRecord {
    pub depth: usize,
    pub best_params: AnsatzParams,
    pub best_energy: f64,
    pub solved: bool,
    pub evaluations: usize,
}

/// Layerwise heuristic: train layer 1; then repeatedly append a fresh layer
/// (frozen history), train it, and jointly refine all parameters. Energies are
/// non-increasing because new layers start at identity and every stage accepts
/// only improvement.
pub fn layerwise_train<F>(objective: F, threshold: f64, cfg: &OptimizerConfig, rng: &mut ChaCha8Rng) -> Vec<TrainRecord>
where
    F: Fn(&AnsatzParams) -> f64 + Sync,
{
    let pi = std::f64::consts::PI;
    let layer_ranges = [(0.0, pi), (0.0, 2.0 * pi)];
    let mut beta: Vec<f64> = Vec::new();
    let mut gamma: Vec<f64> = Vec::new();
    let mut incumbent_energy = f64::INFINITY;
    let mut records = Vec::new();

    for p in 1..=cfg.max_depth {
        beta.push(0.0);
        gamma.push(0.0);
        let mut evals = 0usize;

        // stage 1: new-layer parameters only, multi-seed
        {
            let frozen_beta = beta.clone();
            let frozen_gamma = gamma.clone();
            let stage = |x: &[f64]| {
                let mut b = frozen_beta.clone();
                let mut g = frozen_gamma.clone();
                b[p - 1] = x[0];
                g[p - 1] = x[1];
                objective(&AnsatzParams::unwrapped(b, g).unwrap())
            };
            let res = local_minimize(stage, &[0.0, 0.0], &layer_ranges, cfg, rng);
            evals += res.evaluations;
            if res.value < incumbent_energy || incumbent_energy.is_infinite() {
                beta[p - 1] = res.x[0];
                gamma[p - 1] = res.x[1];
                incumbent_energy = incumbent_energy.min(res.value);
            }
        }

        // stage 2: joint refinement of all 2p parameters from the incumbent
        {
            let joint = |x: &[f64]| objective(&AnsatzParams::from_flat(x).unwrap());
            let start = AnsatzParams::unwrapped(beta.clone(), gamma.clone()).unwrap().to_flat();
            let (x, v, e) = match cfg.method {
                Method::NelderMead => nelder_mead(&joint, &start, 0.2, cfg.tol, cfg.max_iters * 2),
                Method::LbfgsFd => lbfgs_fd(&joint, &start, cfg.fd_step, cfg.tol, cfg.max_iters),
            };
            evals += e;
            if v < incumbent_energy {
                let params = AnsatzParams::from_flat(&x).unwrap();
                beta = params.beta;
                gamma = params.gamma;
                incumbent_energy = v;
            }
        }

        let solved = incumbent_energy <= threshold;
        records.push(TrainRecord {
            depth: p,
            best_params: AnsatzParams::new(beta.clone(), gamma.clone()).unwrap(),
            best_energy: incumbent_energy,
            solved,
            evaluations: evals,
        });
        if solved {
            break;
        }
    }
    records
}

/// Repeat the layerwise heuristic and keep, per depth, the best record seen.
pub fn layerwise_train_repeated<F>(
    objective: F,
    threshold: f64,
    cfg: &OptimizerConfig,
) -> Vec<TrainRecord>
where
    F: Fn(&AnsatzParams) -> f64 + Sync,
{
    let mut best: Vec<TrainRecord> = Vec::new();
    for repeat in 0..cfg.heuristic_repeats {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(repeat as u64));
        let records = layerwise_train(&objective, threshold, cfg, &mut rng);
        for rec in records {
            let idx = rec.depth - 1;
            if idx >= best.len() {
                best.push(rec);
            } else if rec.best_energy < best[idx].best_energy {
                let evals = best[idx].evaluations + rec.evaluations;
                best[idx] = TrainRecord { evaluations: evals, ..rec };
            } else {
                best[idx].evaluations += rec.evaluations;
            }
        }
        if best.iter().any(|r| r.solved) {
            break;
        }
    }
    // keep the per-depth envelope monotone
    for i in 1..best.len() {
        if best[i].best_energy > best[i - 1].best_energy {
            best[i].best_energy = best[i - 1].best_energy;
            best[i].best_params = best[i - 1].best_params.clone();
            best[i].solved = best[i - 1].solved;
        }
    }
    best
}

/// Amplitude-profile configurations benchmarked in the depth sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigVariant {
    /// A_j = 1 for every ion (reflection symmetric)
    Symmetric,
    /// random A with the reflection symmetry deliberately broken
    AsymmetricRandom,
    /// best over `sets` random A assignments per instance
    ProblemSearch { sets: usize },
    /// standard QAOA with the problem Hamiltonian itself
    StandardQaoa,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub records: Vec<TrainRecord>,
    pub solved_depth: Option<usize>,
}

/// Train a single instance under a configuration variant.
pub fn train_instance(inst: &SKInstance, variant: ConfigVariant, cfg: &OptimizerConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let spec = spectrum(inst);
    let threshold = success_threshold(&spec)?;
    let problem_diag = sk_diagonal(inst);
    let n = inst.n;

    let ion_objective = |a: &[f64]| -> Result<Box<dyn Fn(&AnsatzParams) -> f64 + Sync + '_>> {
        let couplings = build_couplings(n, 4.0, 1.0, a)?;
        let diag = problem_diag.clone();
        Ok(Box::new(move |params: &AnsatzParams| {
            let state = prepare_ion_native(&couplings, params).expect("state preparation");
            diagonal_energy(&state, &diag)
        }))
    };

    let records = match variant {
        ConfigVariant::Symmetric => {
            let obj = ion_objective(&vec![1.0; n])?;
            layerwise_train_repeated(obj, threshold, cfg)
        }
        ConfigVariant::AsymmetricRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x51_7e_au64);
            let a = random_asymmetric_profile(n, &mut rng);
            let obj = ion_objective(&a)?;
            layerwise_train_repeated(obj, threshold, cfg)
        }
        ConfigVariant::ProblemSearch { sets } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x9e3779b9u64);
            let profiles: Vec<Vec<f64>> = (0..sets).map(|_| random_asymmetric_profile(n, &mut rng)).collect();
            let per_set_cfg = OptimizerConfig { heuristic_repeats: 1, ..cfg.clone() };
            let mut best: Vec<TrainRecord> = Vec::new();
            for a in &profiles {
                let obj = ion_objective(a)?;
                let records = layerwise_train_repeated(obj, threshold, &per_set_cfg);
                best = merge_best(best, records);
                if best.iter().any(|r| r.solved) {
                    break;
                }
            }
            best
        }
        ConfigVariant::StandardQaoa => {
            let diag = problem_diag.clone();
            let obj = move |params: &AnsatzParams| {
                let state = prepare_standard_with_diagonal(n, &diag, params).expect("state preparation");
                diagonal_energy(&state, &diag)
            };
            layerwise_train_repeated(obj, threshold, cfg)
        }
    };

    let solved_depth = records.iter().find(|r| r.solved).map(|r| r.depth);
    Ok(TrainOutcome { records, solved_depth })
}

fn merge_best(mut best: Vec<TrainRecord>, records: Vec<TrainRecord>) -> Vec<TrainRecord> {
    for rec in records {
        let idx = rec.depth - 1;
        if idx >= best.len() {
            best.push(rec);
        } else if rec.best_energy < best[idx].best_energy {
            best[idx] = rec;
        }
    }
    for i in 1..best.len() {
        if best[i].best_energy > best[i - 1].best_energy {
            best[i] = TrainRecord { depth: best[i].depth, ..best[i - 1].clone() };
            best[i].depth = i + 1;
        }
    }
    best
}

/// Uniform A ∈ [−1,1]^n resampled until the reflection symmetry is broken.
pub fn random_asymmetric_profile(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let symmetric = (0..n).all(|j| (a[j] - a[n - 1 - j]).abs() < 1e-3);
        let too_small = a.iter().any(|v| v.abs() < 0.05);
        if !symmetric && !too_small {
            return a;
        }
    }
}

/// Per-depth solved fraction over an instance list; monotone by construction.
pub fn fraction_curve(instances: &[SKInstance], variant: ConfigVariant, cfg: &OptimizerConfig) -> Result<Vec<f64>> {
    if instances.is_empty() {
        return Err(Error::Domain("fraction_curve needs at least one instance".into()));
    }
    let solved_depths: Vec<Option<usize>> = instances
        .par_iter()
        .map(|inst| {
            let per_inst = OptimizerConfig { rng_seed: cfg.rng_seed.wrapping_add(inst.mask), ..cfg.clone() };
            train_instance(inst, variant, &per_inst).map(|o| o.solved_depth)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = instances.len() as f64;
    Ok((1..=cfg.max_depth)
        .map(|p| solved_depths.iter().filter(|d| matches!(d, Some(q) if *q <= p)).count() as f64 / total)
        .collect())
}

/// Ground-space database record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DbRecord {
    pub preparable: bool,
    pub solved_depth: Option<usize>,
}

/// Cache keyed by canonical ground-space content.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceDB {
    map: BTreeMap<String, DbRecord>,
}

/// Canonical key: hex of the 2^n-bit ground-set bitmap, most significant
/// byte first.
pub fn ground_key(n: usize, ground_indices: &[usize]) -> String {
    let dim = 1usize << n;
    let bytes = dim.div_ceil(8);
    let mut bitmap = vec![0u8; bytes];
    for &z in ground_indices {
        bitmap[bytes - 1 - z / 8] |= 1 << (z % 8);
    }
    bitmap.iter().map(|b| format!("{b:02x}")).collect()
}

impl InstanceDB {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn lookup(&self, key: &str) -> Option<DbRecord> {
        self.map.get(key).copied()
    }

    pub fn insert(&mut self, key: String, record: DbRecord) {
        self.map.insert(key, record);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &DbRecord)> {
        self.map.iter()
    }

    /// Line-oriented text: `key_hex;preparable;solved_depth` (empty depth when unsolved).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut map = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(';').collect();
            if parts.len() != 3 {
                return Err(Error::DbParse { line: idx + 1, reason: "expected 3 fields".into() });
            }
            if parts[0].is_empty() || !parts[0].chars().all(|c| c.is_ascii_hexdigit()) {
                return Err(Error::DbParse { line: idx + 1, reason: "malformed key".into() });
            }
            let preparable = match parts[1] {
                "true" => true,
                "false" => false,
                _ => return Err(Error::DbParse { line: idx + 1, reason: "malformed preparable flag".into() }),
            };
            let solved_depth = if parts[2].is_empty() {
                None
            } else {
                Some(parts[2].parse::<usize>().map_err(|_| Error::DbParse {
                    line: idx + 1,
                    reason: "malformed solved depth".into(),
                })?)
            };
            map.insert(parts[0].to_string(), DbRecord { preparable, solved_depth });
        }
        Ok(Self { map })
    }

    /// Atomic save: write a sibling temp file, then rename over the target.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut file = std::fs::File::create(&tmp)?;
            for (key, rec) in &self.map {
                let depth = rec.solved_depth.map(|d| d.to_string()).unwrap_or_default();
                writeln!(file, "{key};{};{depth}", rec.preparable)?;
            }
            file.sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn nelder_mead_minimizes_standard_objectives() {
        let (x, v, _) = nelder_mead(&mut |x: &[f64]| sphere(x), &[1.0, -2.0, 0.5], 0.5, 1e-12, 2000);
        assert!(v < 1e-10);
        assert!(x.iter().all(|c| c.abs() < 1e-4));
        let (x, v, _) = nelder_mead(&mut |x: &[f64]| rosenbrock(x), &[-1.2, 1.0], 0.5, 1e-14, 5000);
        assert!(v < 1e-8, "rosenbrock value {v}");
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-3);
    }

    #[test]
    fn lbfgs_minimizes_standard_objectives() {
        let (x, v, _) = lbfgs_fd(&mut |x: &[f64]| sphere(x), &[3.0, -1.0], 1e-6, 1e-12, 200);
        assert!(v < 1e-12);
        assert!(x.iter().all(|c| c.abs() < 1e-6));
        let (_, v, _) = lbfgs_fd(&mut |x: &[f64]| rosenbrock(x), &[-1.2, 1.0], 1e-6, 1e-14, 2000);
        assert!(v < 1e-6, "rosenbrock value {v}");
    }

    #[test]
    fn local_minimize_is_deterministic_and_multi_seeded() {
        let cfg = OptimizerConfig { seeds_per_step: 6, rng_seed: 3, ..OptimizerConfig::default() };
        let ranges = [(-2.0, 2.0), (-2.0, 2.0)];
        // deceptive objective with a poor local minimum at the origin start
        let f = |x: &[f64]| (x[0] - 1.3).powi(2) * (x[0] + 1.0).powi(2) + x[1] * x[1];
        let mut rng1 = ChaCha8Rng::seed_from_u64(9);
        let mut rng2 = ChaCha8Rng::seed_from_u64(9);
        let a = local_minimize(f, &[0.0, 0.0], &ranges, &cfg, &mut rng1);
        let b = local_minimize(f, &[0.0, 0.0], &ranges, &cfg, &mut rng2);
        assert_eq!(a.x, b.x);
        assert!(a.value < 1e-8);
    }

    #[test]
    fn layerwise_energies_are_monotone_and_stop_on_success() {
        // toy objective: each layer can contribute −cos(β)·cos(γ) at best
        let obj = |p: &AnsatzParams| -> f64 {
            -p.beta
                .iter()
                .zip(&p.gamma)
                .map(|(b, g)| b.sin() * g.sin())
                .sum::<f64>()
        };
        let cfg = OptimizerConfig {
            seeds_per_step: 4,
            heuristic_repeats: 2,
            max_depth: 6,
            rng_seed: 5,
            ..OptimizerConfig::default()
        };
        let records = layerwise_train_repeated(obj, -3.5, &cfg);
        for w in records.windows(2) {
            assert!(w[1].best_energy <= w[0].best_energy + 1e-12);
        }
        let solved: Vec<&TrainRecord> = records.iter().filter(|r| r.solved).collect();
        assert_eq!(solved.len(), 1, "stops at first solved depth");
        assert!(solved[0].best_energy <= -3.5);
    }

    #[test]
    fn config_validation() {
        let mut cfg = OptimizerConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.seeds_per_step = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = OptimizerConfig::desk_scale();
        assert_eq!(cfg.seeds_per_step, 10);
        cfg.max_depth = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn asymmetric_profiles_break_reflection_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random_asymmetric_profile(6, &mut rng);
            assert_eq!(a.len(), 6);
            assert!((0..6).any(|j| (a[j] - a[5 - j]).abs() >= 1e-3));
            assert!(a.iter().all(|v| v.abs() >= 0.05 && v.abs() <= 1.0));
        }
    }

    #[test]
    fn ground_key_is_a_bitmap_in_hex() {
        // n = 4: ground set {0, 15} → bits 0 and 15 of a 16-bit map,
        // rendered most-significant byte first
        let key = ground_key(4, &[0, 15]);
        assert_eq!(key, "8001");
        assert_eq!(ground_key(4, &[1]), "0002");
        assert_eq!(ground_key(4, &[8]), "0100");
    }

    #[test]
    fn db_roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.db");
        let mut db = InstanceDB::new();
        db.insert("8001".into(), DbRecord { preparable: true, solved_depth: Some(4) });
        db.insert("4000".into(), DbRecord { preparable: false, solved_depth: None });
        db.save(&path).unwrap();
        let back = InstanceDB::load(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.lookup("8001"), Some(DbRecord { preparable: true, solved_depth: Some(4) }));
        assert_eq!(back.lookup("4000"), Some(DbRecord { preparable: false, solved_depth: None }));
        assert_eq!(back.lookup("ffff"), None);
    }

    #[test]
    fn db_load_reports_line_numbers_on_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.db");
        std::fs::write(&path, "8001;true;4\nnot;a;record\n").unwrap();
        match InstanceDB::load(&path) {
            Err(Error::DbParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn db_roundtrip_random_records(
            entries in proptest::collection::btree_map(
                "[0-9a-f]{16}",
                (any::<bool>(), proptest::option::of(1usize..40)),
                0..20,
            )
        ) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("r.db");
            let mut db = InstanceDB::new();
            for (k, (p, d)) in &entries {
                db.insert(k.clone(), DbRecord { preparable: *p, solved_depth: *d });
            }
            db.save(&path).unwrap();
            let back = InstanceDB::load(&path).unwrap();
            prop_assert_eq!(back.len(), entries.len());
            for (k, (p, d)) in &entries {
                prop_assert_eq!(back.lookup(k), Some(DbRecord { preparable: *p, solved_depth: *d }));
            }
        }
    }
}
