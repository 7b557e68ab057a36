//! Shot-based expectation estimation: Bernoulli sampling, readout-error
//! channel, ML bias correction, the variance factor g, concentration bounds,
//! and sample-size planners.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::statevector::{hadamard, PauliString, Statevector};

/// Readout misidentification probabilities. "0" is the bright state mapped to
/// Pauli outcome +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutNoise {
    /// P("0" | state |1⟩)
    pub eps01: f64,
    /// P("1" | state |0⟩)
    pub eps10: f64,
}

impl ReadoutNoise {
    pub const NONE: Self = Self { eps01: 0.0, eps10: 0.0 };

    pub fn new(eps01: f64, eps10: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps01) || !(0.0..1.0).contains(&eps10) || eps01 + eps10 >= 1.0 {
            return Err(Error::Domain(format!(
                "readout errors must satisfy 0 ≤ ε01, ε10 and ε01 + ε10 < 1 (got {eps01}, {eps10})"
            )));
        }
        Ok(Self { eps01, eps10 })
    }

    /// λ = p(1−ε10) + (1−p)ε01, the observed "0" probability.
    pub fn observed_probability(&self, p: f64) -> f64 {
        p * (1.0 - self.eps10) + (1.0 - p) * self.eps01
    }

    pub fn is_none(&self) -> bool {
        self.eps01 == 0.0 && self.eps10 == 0.0
    }
}

/// Ideal "0"-outcome probability p = (1 + h_ψ)/2 for the Pauli string, after
/// rotating each measured axis to Z.
pub fn outcome_probability(state: &Statevector, pauli: &PauliString) -> Result<f64> {
    if pauli.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Pauli string on {} qubits vs state of {}",
            pauli.n_qubits(),
            state.n_qubits()
        )));
    }
    let n = state.n_qubits();
    let mut rotated = state.clone();
    let h = hadamard();
    // S† then H sends Y to Z
    let s_dag = {
        use num_complex::Complex64;
        let zero = Complex64::new(0.0, 0.0);
        [[Complex64::new(1.0, 0.0), zero], [zero, Complex64::new(0.0, -1.0)]]
    };
    for (q, &axis) in pauli.axes.iter().enumerate() {
        match axis {
            0 | 3 => {}
            1 => rotated.apply_single_qubit(q, &h)?,
            2 => {
                rotated.apply_single_qubit(q, &s_dag)?;
                rotated.apply_single_qubit(q, &h)?;
            }
            _ => unreachable!(),
        }
    }
    let mut p = 0.0;
    for (z, a) in rotated.amplitudes().iter().enumerate() {
        let mut parity = 0usize;
        for (q, &axis) in pauli.axes.iter().enumerate() {
            if axis != 0 {
                parity ^= (z >> (n - 1 - q)) & 1;
            }
        }
        if parity == 0 {
            p += a.norm_sqr();
        }
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Draw the number of "0" outcomes: k ~ Binomial(m, λ) with
/// λ = p(1−ε10) + (1−p)ε01 and p = (1 + h_ψ)/2.
pub fn sample_shots<R: Rng>(
    state: &Statevector,
    pauli: &PauliString,
    m: u64,
    noise: &ReadoutNoise,
    rng: &mut R,
) -> Result<u64> {
    if m < 1 {
        return Err(Error::Domain("shot count must be at least 1".into()));
    }
    let p = outcome_probability(state, pauli)?;
    Ok(sample_counts(p, m, noise, rng))
}

/// Binomial draw at a known ideal probability, through the readout channel.
pub fn sample_counts<R: Rng>(p: f64, m: u64, noise: &ReadoutNoise, rng: &mut R) -> u64 {
    let lambda = noise.observed_probability(p).clamp(0.0, 1.0);
    Binomial::new(m, lambda).expect("valid binomial parameters").sample(rng)
}

/// Full estimate from observed counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub m: u64,
    pub k: u64,
    /// raw k/m
    pub p_hat: f64,
    /// ML-corrected probability (clipped to [0, 1])
    pub p_ml: f64,
    /// 2·p_ml − 1
    pub h_hat: f64,
    /// bias of the UNCORRECTED estimator, evaluated at h = h_hat
    pub bias: f64,
    /// g·p_ml(1−p_ml)/m
    pub variance: f64,
    /// variance inflation factor, absent at p_ml ∈ {0, 1}
    pub g: Option<f64>,
    /// 95% CLT radius on h
    pub ci_radius: f64,
}

/// ML correction: p_ml = (k/m − ε01)/(1 − ε01 − ε10) when k/m ≥ ε01, else 0.
pub fn estimate(k: u64, m: u64, noise: &ReadoutNoise) -> Result<EstimateReport> {
    if k > m || m == 0 {
        return Err(Error::Domain(format!("invalid counts k = {k}, m = {m}")));
    }
    let p_hat = k as f64 / m as f64;
    let p_ml = if p_hat >= noise.eps01 {
        ((p_hat - noise.eps01) / (1.0 - noise.eps01 - noise.eps10)).min(1.0)
    } else {
        0.0
    };
    let h_hat = 2.0 * p_ml - 1.0;
    let bias = (1.0 - h_hat) * noise.eps01 - (1.0 + h_hat) * noise.eps10;
    let g = variance_factor_g(p_ml, noise).ok();
    let variance = g.unwrap_or(1.0) * p_ml * (1.0 - p_ml) / m as f64;
    let ci_radius = normal_quantile(0.05 / 2.0) * (4.0 * variance).sqrt();
    Ok(EstimateReport { m, k, p_hat, p_ml, h_hat, bias, variance, g, ci_radius })
}

/// g = [p(1−ε10)+(1−p)ε01]·[p·ε10+(1−p)(1−ε01)] / [p(1−p)(1−ε01−ε10)²].
pub fn variance_factor_g(p: f64, noise: &ReadoutNoise) -> Result<f64> {
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::VarianceSingularity(p));
    }
    let lambda = noise.observed_probability(p);
    let numerator = lambda * (1.0 - lambda);
    let denominator = p * (1.0 - p) * (1.0 - noise.eps01 - noise.eps10).powi(2);
    Ok(numerator / denominator)
}

/// CLT sample-size plan: ceil((q_{α/2}/δ)²·(1−h²)).
pub fn sample_size_clt(accuracy: f64, alpha: f64, h: f64) -> Result<u64> {
    if accuracy <= 0.0 || !(0.0..1.0).contains(&alpha) || alpha == 0.0 {
        return Err(Error::Domain("need accuracy > 0 and failure probability in (0, 1)".into()));
    }
    let q = normal_quantile(alpha / 2.0);
    Ok(((q / accuracy).powi(2) * (1.0 - h * h)).ceil() as u64)
}

/// Worst-case (h = 0) plan under readout errors:
/// (q_{α/2}/δ)²·(1−(ε01−ε10)²)/(1−ε01−ε10)².
pub fn sample_size_clt_noisy(accuracy: f64, alpha: f64, noise: &ReadoutNoise) -> Result<u64> {
    if accuracy <= 0.0 || !(0.0..1.0).contains(&alpha) || alpha == 0.0 {
        return Err(Error::Domain("need accuracy > 0 and failure probability in (0, 1)".into()));
    }
    let q = normal_quantile(alpha / 2.0);
    let factor = (1.0 - (noise.eps01 - noise.eps10).powi(2)) / (1.0 - noise.eps01 - noise.eps10).powi(2);
    Ok(((q / accuracy).powi(2) * factor).ceil() as u64)
}

/// The ladder of concentration bounds at a common (m, ε, δ) point.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSet {
    /// Markov tail E/t at t = ε
    pub markov_tail: f64,
    /// Chebyshev tail V/ε²
    pub chebyshev_tail: f64,
    /// Chebyshev for Bernoulli means: 1/(4mε²)
    pub chebyshev_bernoulli: f64,
    /// Hoeffding failure probability 2·exp(−2mε²)
    pub hoeffding_delta: f64,
    /// Hoeffding sample size ⌈ln(2/δ)/(2ε²)⌉
    pub hoeffding_sample_size: u64,
    /// Hoeffding error √(ln(2/δ)/(2m))
    pub hoeffding_error: f64,
}

pub fn concentration_bounds(m: u64, eps: f64, delta: f64, variance: f64, mean: f64) -> Result<BoundSet> {
    if eps <= 0.0 || delta <= 0.0 || delta >= 1.0 {
        return Err(Error::Domain("ε and δ must be positive (δ < 1)".into()));
    }
    if m == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    if mean < 0.0 || variance < 0.0 {
        return Err(Error::Domain("Markov needs a non-negative mean; variance must be non-negative".into()));
    }
    let mf = m as f64;
    Ok(BoundSet {
        markov_tail: mean / eps,
        chebyshev_tail: variance / (eps * eps),
        chebyshev_bernoulli: 1.0 / (4.0 * mf * eps * eps),
        hoeffding_delta: 2.0 * (-2.0 * mf * eps * eps).exp(),
        hoeffding_sample_size: ((2.0 / delta).ln() / (2.0 * eps * eps)).ceil() as u64,
        hoeffding_error: ((2.0 / delta).ln() / (2.0 * mf)).sqrt(),
    })
}

/// Monte-Carlo check that (1−F)/d with d = g/(4m) follows χ²(1).
#[derive(Debug, Clone)]
pub struct InfidelityCheck {
    /// mean of (1−F)/d over the replicas; χ²(1) has mean 1
    pub normalized_mean: f64,
    /// one-sample Kolmogorov–Smirnov statistic against the χ²(1) CDF
    pub ks_statistic: f64,
    /// set when p sits too close to 0 or 1 for the asymptotics
    pub asymptotics_warning: bool,
}

/// Classical (Hellinger) fidelity between Bernoulli distributions.
pub fn classical_fidelity(p: f64, q: f64) -> f64 {
    let root = (p * q).sqrt() + ((1.0 - p) * (1.0 - q)).sqrt();
    root * root
}

pub fn infidelity_model<R: Rng>(
    p: f64,
    n_shots: u64,
    replicas: usize,
    noise: &ReadoutNoise,
    rng: &mut R,
) -> Result<InfidelityCheck> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain("p must lie in [0, 1]".into()));
    }
    if n_shots < 10_000 {
        return Err(Error::Domain("asymptotic test needs n_shots ≥ 10^4".into()));
    }
    if replicas == 0 {
        return Err(Error::Domain("need at least one replica".into()));
    }
    let g = variance_factor_g(p, noise)?;
    let d = g / (4.0 * n_shots as f64);
    let mut normalized: Vec<f64> = Vec::with_capacity(replicas);
    for _ in 0..replicas {
        let k = sample_counts(p, n_shots, noise, rng);
        let report = estimate(k, n_shots, noise)?;
        let infidelity = 1.0 - classical_fidelity(p, report.p_ml);
        normalized.push(infidelity / d);
    }
    let normalized_mean = normalized.iter().sum::<f64>() / replicas as f64;
    normalized.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ks: f64 = 0.0;
    for (i, &x) in normalized.iter().enumerate() {
        let cdf = chi_squared_1_cdf(x);
        let lo = i as f64 / replicas as f64;
        let hi = (i + 1) as f64 / replicas as f64;
        ks = ks.max((cdf - lo).abs()).max((cdf - hi).abs());
    }
    Ok(InfidelityCheck {
        normalized_mean,
        ks_statistic: ks,
        asymptotics_warning: !(0.05..=0.95).contains(&p),
    })
}

/// χ²(1) CDF: erf(√(x/2)).
pub fn chi_squared_1_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        erf((x / 2.0).sqrt())
    }
}

/// Error function, |error| < 1.5e-7 (sufficient for the KS comparison).
pub fn erf(x: f64) -> f64 {
    let sign = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// (1 − α)-th upper quantile of the standard normal: q such that P(Z > q) = α.
/// Rational approximation of the inverse CDF, |relative error| < 1.2e-9.
pub fn normal_quantile(alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "quantile argument must lie in (0, 1)");
    -inverse_normal_cdf(alpha)
}

/// Acklam's inverse normal CDF approximation.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p <= 0.0 || p >= 1.0 {
        panic!("inverse normal CDF argument must lie in (0, 1)");
    }
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}
