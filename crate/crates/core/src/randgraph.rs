//! Random d-regular digraphs and the Monte Carlo convergence harness.
//!
//! The configuration model matches the `nd` outgoing half-arcs with the `nd`
//! incoming half-arcs through a uniform random bijection. Conditioning on
//! the result being simple (rejection sampling) gives the uniform simple
//! d-regular digraph.
//!
//! Every draw is seeded from `(seed, trial, attempt)` through
//! [`derive_seed`], so results do not depend on how trials are scheduled
//! across threads.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::moments::star_moment_formula;
use crate::words::Word;

/// Name of the pseudo-random generator, reported in output metadata.
pub const GENERATOR: &str = "ChaCha8Rng";
/// Seed derivation scheme, reported in output metadata.
pub const SEED_SCHEME: &str = "splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ attempt)";
pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub max_attempts: usize,
}

impl SamplerConfig {
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        SamplerConfig {
            n,
            d,
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::InvalidArgument(format!(
                "need n ≥ 1 and d ≥ 1 (got n={}, d={})",
                self.n, self.d
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Configuration model, loops and parallel arcs allowed.
    Cm,
    /// Configuration model conditioned on being simple.
    Uniform,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cm" => Ok(Model::Cm),
            "uniform" => Ok(Model::Uniform),
            other => Err(Error::InvalidArgument(format!(
                "unknown model {other:?} (expected cm or uniform)"
            ))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Cm => "cm",
            Model::Uniform => "uniform",
        })
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, trial: u64, attempt: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ attempt)
}

/// Head of each out half-arc slot `p` (vertex `p / d`) after shuffling the
/// in half-arc labels.
fn half_arc_matching(n: usize, d: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_labels: Vec<usize> = (0..n * d).collect();
    in_labels.shuffle(&mut rng);
    in_labels
        .iter()
        .enumerate()
        .map(|(p, &q)| (p / d, q / d))
        .collect()
}

fn is_simple_arc_list(arcs: &[(usize, usize)]) -> bool {
    if arcs.iter().any(|&(t, h)| t == h) {
        return false;
    }
    let mut sorted = arcs.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|p| p[0] != p[1])
}

fn draw_cm(cfg: &SamplerConfig, trial: u64) -> Result<Digraph> {
    cfg.validate()?;
    Digraph::from_arcs(
        cfg.n,
        half_arc_matching(cfg.n, cfg.d, derive_seed(cfg.seed, trial, 0)),
    )
}

fn draw_uniform(cfg: &SamplerConfig, trial: u64) -> Result<Digraph> {
    cfg.validate()?;
    if cfg.n <= cfg.d {
        return Err(Error::InfeasibleParameters { n: cfg.n, d: cfg.d });
    }
    for attempt in 0..cfg.max_attempts as u64 {
        let arcs = half_arc_matching(cfg.n, cfg.d, derive_seed(cfg.seed, trial, attempt));
        if is_simple_arc_list(&arcs) {
            return Digraph::from_arcs(cfg.n, arcs);
        }
    }
    Err(Error::AttemptsExhausted(cfg.max_attempts))
}

fn draw(cfg: &SamplerConfig, trial: u64, model: Model) -> Result<Digraph> {
    match model {
        Model::Cm => draw_cm(cfg, trial),
        Model::Uniform => draw_uniform(cfg, trial),
    }
}

pub fn sample_configuration_model(cfg: &SamplerConfig) -> Result<Digraph> {
    draw_cm(cfg, 0)
}

/// First simple configuration-model draw among attempts `0..max_attempts`.
pub fn sample_uniform_regular(cfg: &SamplerConfig) -> Result<Digraph> {
    draw_uniform(cfg, 0)
}

pub fn sample(cfg: &SamplerConfig, model: Model) -> Result<Digraph> {
    draw(cfg, 0, model)
}

/// Fraction of configuration-model draws (attempts `0..attempts` of trial 0)
/// that are simple.
pub fn simple_acceptance_rate(cfg: &SamplerConfig, attempts: usize) -> Result<f64> {
    cfg.validate()?;
    let accepted = (0..attempts as u64)
        .into_par_iter()
        .filter(|&a| {
            is_simple_arc_list(&half_arc_matching(
                cfg.n,
                cfg.d,
                derive_seed(cfg.seed, 0, a),
            ))
        })
        .count();
    Ok(accepted as f64 / attempts as f64)
}

// ---------------------------------------------------------------------------
// Monte Carlo harness

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub d: usize,
    pub word: Word,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub target: num_bigint::BigUint,
    pub within_3se: bool,
}

impl ExperimentRecord {
    pub const CSV_HEADER: &'static str = "n,d,word,trials,mean,stderr,target,within_3se";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.d,
            self.word,
            self.trials,
            significant6(self.mean),
            significant6(self.stderr),
            self.target,
            self.within_3se
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleDensityRecord {
    pub n: usize,
    pub d: usize,
    pub length: usize,
    pub trials: usize,
    /// Mean of `c_j(G) / n`.
    pub mean: f64,
    pub stderr: f64,
    /// Mean of the raw count `c_j(G)`.
    pub mean_count: f64,
    /// `2^{j−1} / j`, the expected-count scale for large `n`.
    pub reference_scale: f64,
}

/// Mean and standard error of the mean (sample standard deviation over √m).
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Formats with six significant digits.
pub fn significant6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 trials (got {trials})"
        )));
    }
    Ok(())
}

/// Estimates `(1/n) E Tr A^w` over `trials` independent graphs.
pub fn monte_carlo_star_moment(
    cfg: &SamplerConfig,
    w: &Word,
    trials: usize,
    model: Model,
) -> Result<ExperimentRecord> {
    check_trials(trials)?;
    let target = star_moment_formula(w, cfg.d)?;
    let traces: Vec<u128> = (0..trials as u64)
        .into_par_iter()
        .map(|t| draw(cfg, t, model)?.star_moment_trace(w))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = traces.iter().map(|&tr| tr as f64 / cfg.n as f64).collect();
    let (mean, stderr) = mean_and_stderr(&values);
    let target_f = target.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    Ok(ExperimentRecord {
        n: cfg.n,
        d: cfg.d,
        word: w.clone(),
        trials,
        mean,
        stderr,
        within_3se: (mean - target_f).abs() <= 3.0 * stderr,
        target,
    })
}

/// Estimates `(1/n) E c_j(G)` and `E c_j(G)`.
pub fn monte_carlo_cycle_density(
    cfg: &SamplerConfig,
    j: usize,
    trials: usize,
    model: Model,
) -> Result<CycleDensityRecord> {
    check_trials(trials)?;
    if j == 0 || j > 8 {
        return Err(Error::InvalidArgument(format!(
            "cycle length must be in 1..=8 (got {j})"
        )));
    }
    let counts: Vec<u128> = (0..trials as u64)
        .into_par_iter()
        .map(|t| Ok(draw(cfg, t, model)?.plain_cycle_count(j)?.count))
        .collect::<Result<_>>()?;
    let densities: Vec<f64> = counts.iter().map(|&c| c as f64 / cfg.n as f64).collect();
    let (mean, stderr) = mean_and_stderr(&densities);
    Ok(CycleDensityRecord {
        n: cfg.n,
        d: cfg.d,
        length: j,
        trials,
        mean,
        stderr,
        mean_count: counts.iter().map(|&c| c as f64).sum::<f64>() / trials as f64,
        reference_scale: 2f64.powi(j as i32 - 1) / j as f64,
    })
}

/// One [`monte_carlo_star_moment`] record per size, in ascending `n`.
pub fn convergence_experiment(
    d: usize,
    w: &Word,
    sizes: &[usize],
    trials: usize,
    seed: u64,
    model: Model,
    max_attempts: usize,
) -> Result<Vec<ExperimentRecord>> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes
        .iter()
        .map(|&n| {
            let cfg = SamplerConfig {
                n,
                d,
                seed,
                max_attempts,
            };
            monte_carlo_star_moment(&cfg, w, trials, model)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn configuration_model_is_regular() {
        for (n, d, seed) in [(1, 1, 3), (100, 3, 42), (17, 5, 0), (50, 2, 9)] {
            let g = sample_configuration_model(&SamplerConfig::new(n, d, seed)).unwrap();
            assert!(g.is_d_regular(d));
        }
        let g = sample_configuration_model(&SamplerConfig::new(1, 1, 99)).unwrap();
        assert_eq!(g.multiplicities(), vec![(0, 0, 1)]);
    }

    #[test]
    fn two_vertex_draws() {
        let mut loops = 0;
        for seed in 0..200 {
            let g = sample_configuration_model(&SamplerConfig::new(2, 1, seed)).unwrap();
            match g.multiplicities().as_slice() {
                [(0, 0, 1), (1, 1, 1)] => loops += 1,
                [(0, 1, 1), (1, 0, 1)] => {}
                other => panic!("unexpected graph {other:?}"),
            }
        }
        assert!((60..=140).contains(&loops), "loops={loops}");
        for seed in 0..20 {
            let g = sample_uniform_regular(&SamplerConfig::new(2, 1, seed)).unwrap();
            assert_eq!(g.multiplicities(), vec![(0, 1, 1), (1, 0, 1)]);
        }
    }

    #[test]
    fn uniform_sampler_postconditions() {
        let g = sample_uniform_regular(&SamplerConfig::new(50, 2, 1)).unwrap();
        assert!(g.is_simple() && g.is_d_regular(2));
        assert_eq!(
            sample_uniform_regular(&SamplerConfig::new(1, 1, 0)),
            Err(Error::InfeasibleParameters { n: 1, d: 1 })
        );
        let cfg = SamplerConfig {
            max_attempts: 1,
            ..SamplerConfig::new(3, 2, 0)
        };
        // with one attempt some seed fails
        assert!((0..50).any(|s| {
            sample_uniform_regular(&SamplerConfig { seed: s, ..cfg })
                == Err(Error::AttemptsExhausted(1))
        }));
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = SamplerConfig::new(300, 3, 12345);
        assert_eq!(
            sample(&cfg, Model::Uniform).unwrap(),
            sample(&cfg, Model::Uniform).unwrap()
        );
        assert_ne!(
            sample(&cfg, Model::Cm).unwrap(),
            sample(&SamplerConfig { seed: 1, ..cfg }, Model::Cm).unwrap()
        );
    }

    #[test]
    fn exact_experiments() {
        let r = monte_carlo_star_moment(&SamplerConfig::new(2, 1, 5), &w("1*"), 4, Model::Uniform)
            .unwrap();
        assert_eq!(r.mean, 1.0);
        assert_eq!(r.target, 1u32.into());
        let rs = convergence_experiment(1, &w("1*"), &[10], 5, 3, Model::Uniform, 1000).unwrap();
        assert_eq!(rs[0].mean, 1.0);
        assert_eq!(rs[0].stderr, 0.0);
        assert!(rs[0].within_3se);
        let rs = convergence_experiment(3, &w(""), &[40, 20], 3, 3, Model::Cm, 1000).unwrap();
        assert_eq!(rs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![20, 40]);
        assert!(rs.iter().all(|r| r.mean == 1.0 && r.stderr == 0.0));
    }

    #[test]
    fn unbalanced_target_is_zero() {
        let r = monte_carlo_star_moment(&SamplerConfig::new(500, 3, 1), &w("11"), 10, Model::Cm)
            .unwrap();
        assert_eq!(r.target, 0u32.into());
        assert!(r.mean >= 0.0 && r.mean < 0.1);
    }

    #[test]
    fn two_vertex_loop_density() {
        let r = monte_carlo_cycle_density(&SamplerConfig::new(2, 1, 8), 1, 400, Model::Cm).unwrap();
        assert!((r.mean - 0.5).abs() < 0.1, "mean={}", r.mean);
    }

    #[test]
    fn csv_formatting() {
        assert_eq!(significant6(6.0), "6.00000");
        assert_eq!(significant6(15.123456), "15.1235");
        assert_eq!(significant6(0.0), "0");
        assert_eq!(significant6(0.00123456789), "0.00123457");
        assert_eq!(significant6(1234567.0), "1.23457e6");
    }

    #[test]
    fn trials_are_validated() {
        assert!(
            monte_carlo_star_moment(&SamplerConfig::new(5, 1, 0), &w("1*"), 1, Model::Cm).is_err()
        );
        assert!(monte_carlo_cycle_density(&SamplerConfig::new(5, 1, 0), 9, 3, Model::Cm).is_err());
    }
}
