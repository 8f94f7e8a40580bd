//! Monte-Carlo BPSK/AWGN link simulation of rate-matched codes under
//! successive-cancellation decoding.
//!
//! Every trial derives its own random streams from the master seed by
//! counter-based splitting, so results are bit-identical for a given seed
//! regardless of how trials are scheduled across threads. Message and noise
//! draws use separate streams, which gives common random numbers for free
//! when two configurations are compared under the same seed.

use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{encode, BitVector, Llr, ScDecoder};
use crate::error::{Error, Result};
use crate::rate_match::{allocate_channels, dematch, rate_match, RmConfig, RmConfigFile};

/// Trials evaluated per scheduling batch. Early stopping is decided on the
/// in-order fold of batch outcomes, which keeps parallel runs identical to
/// sequential ones.
const BATCH: u64 = 1024;

const LANE_MESSAGE: u64 = 0;
const LANE_NOISE: u64 = 1;

/// A full simulation request.
#[derive(Debug, Clone)]
pub struct SimSpec {
    pub cfg: RmConfig,
    /// Symbol-energy-to-noise ratios to sweep, in dB.
    pub esn0_grid_db: Vec<f64>,
    /// Trials per grid point.
    pub max_trials: u64,
    /// Stop a grid point once this many block errors accumulate
    /// (0 disables early stopping).
    pub target_errors: u64,
    pub seed: u64,
}

impl SimSpec {
    fn validate(&self) -> Result<()> {
        if self.esn0_grid_db.is_empty() {
            return Err(Error::InvalidArgument("empty Es/N0 grid".into()));
        }
        if self.max_trials == 0 {
            return Err(Error::InvalidArgument(
                "max_trials must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Estimate for one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub esn0_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Estimates across the grid, in grid order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub points: Vec<SimPoint>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("esn0_db,trials,errors,bler,ci_lo,ci_hi\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.esn0_db, p.trials, p.block_errors, p.bler, p.ci_lo, p.ci_hi
            ));
        }
        out
    }
}

/// 95% Wilson score interval for a binomial proportion; stays meaningful at
/// zero observed errors.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_stream(seed: u64, point: usize, trial: u64, lane: u64) -> ChaCha8Rng {
    let mut h = mix(seed ^ 0x9E37_79B9_7F4A_7C15);
    h = mix(h ^ (point as u64).wrapping_mul(0xA24B_AED4_963E_E407));
    h = mix(h ^ trial.wrapping_mul(0x9FB2_1C65_1E98_DF25));
    h = mix(h ^ lane);
    ChaCha8Rng::seed_from_u64(h)
}

struct TrialContext {
    cfg: RmConfig,
    info_positions: Vec<u32>,
    frozen_mask: Vec<bool>,
    seed: u64,
}

impl TrialContext {
    fn new(cfg: &RmConfig, seed: u64) -> Result<Self> {
        let alloc = allocate_channels(cfg)?;
        let len = cfg.mother_len() as usize;
        let mut frozen_mask = vec![true; len];
        for v in alloc.info.iter() {
            frozen_mask[v as usize] = false;
        }
        Ok(Self {
            cfg: cfg.clone(),
            info_positions: alloc.info.members().to_vec(),
            frozen_mask,
            seed,
        })
    }

    /// Runs one block; returns true on a block error.
    fn run(&self, decoder: &mut ScDecoder, point: usize, trial: u64, sigma2: f64) -> bool {
        let mut msg_rng = trial_stream(self.seed, point, trial, LANE_MESSAGE);
        let message: Vec<u8> = (0..self.info_positions.len())
            .map(|_| (msg_rng.next_u32() & 1) as u8)
            .collect();

        let mut u = BitVector::zero(self.cfg.order());
        for (&bit, &pos) in message.iter().zip(&self.info_positions) {
            u.set(pos as usize, bit);
        }
        let x = encode(&u);
        let codeword = rate_match(&x, &self.cfg).expect("config validated");

        let sigma = sigma2.sqrt();
        let mut noise_rng = trial_stream(self.seed, point, trial, LANE_NOISE);
        let received: Vec<Llr> = codeword
            .iter()
            .map(|&bit| {
                let symbol = if bit == 1 { -1.0 } else { 1.0 };
                let noise: f64 = noise_rng.sample(StandardNormal);
                2.0 * (symbol + sigma * noise) / sigma2
            })
            .collect();

        let intrinsic = dematch(&received, &self.cfg).expect("length checked");
        let decision = decoder.decode(&intrinsic, &self.frozen_mask);
        self.info_positions
            .iter()
            .zip(&message)
            .any(|(&pos, &bit)| decision.input.get(pos as usize) != bit)
    }
}

/// Runs the Monte-Carlo sweep. Deterministic for a fixed spec, including the
/// seed; early stopping truncates each grid point exactly where a sequential
/// run would.
pub fn simulate(spec: &SimSpec) -> Result<SimResult> {
    spec.validate()?;
    let ctx = TrialContext::new(&spec.cfg, spec.seed)?;
    let order = spec.cfg.order();
    let mut points = Vec::with_capacity(spec.esn0_grid_db.len());
    for (point_idx, &esn0_db) in spec.esn0_grid_db.iter().enumerate() {
        // Es/N0 = 1/N0 for unit-energy BPSK; noise variance is N0/2.
        let esn0 = 10f64.powf(esn0_db / 10.0);
        let sigma2 = 1.0 / (2.0 * esn0);
        let mut trials = 0u64;
        let mut errors = 0u64;
        'point: while trials < spec.max_trials {
            let start = trials;
            let end = (start + BATCH).min(spec.max_trials);
            let outcomes: Vec<bool> = (start..end)
                .into_par_iter()
                .map_init(
                    || ScDecoder::new(order).expect("valid order"),
                    |decoder, trial| ctx.run(decoder, point_idx, trial, sigma2),
                )
                .collect();
            for error in outcomes {
                trials += 1;
                errors += u64::from(error);
                if spec.target_errors > 0 && errors >= spec.target_errors {
                    break 'point;
                }
            }
        }
        let bler = errors as f64 / trials as f64;
        let (ci_lo, ci_hi) = wilson_interval(errors, trials);
        points.push(SimPoint {
            esn0_db,
            trials,
            block_errors: errors,
            bler,
            ci_lo,
            ci_hi,
        });
    }
    Ok(SimResult { points })
}

/// Per-point comparison of two paired runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparePoint {
    pub esn0_db: f64,
    pub bler_a: f64,
    pub bler_b: f64,
    /// `bler_a - bler_b`.
    pub diff: f64,
    /// Conservative interval for the difference from the two Wilson hulls.
    pub diff_ci_lo: f64,
    pub diff_ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareResult {
    pub a: SimResult,
    pub b: SimResult,
    pub diff: Vec<ComparePoint>,
}

impl CompareResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("esn0_db,bler_a,bler_b,diff,diff_ci_lo,diff_ci_hi\n");
        for p in &self.diff {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.esn0_db, p.bler_a, p.bler_b, p.diff, p.diff_ci_lo, p.diff_ci_hi
            ));
        }
        out
    }
}

/// Runs two specs under common random numbers and reports per-point BLER
/// differences. The grids and seeds must match so the noise streams pair up.
pub fn compare_patterns(spec_a: &SimSpec, spec_b: &SimSpec) -> Result<CompareResult> {
    if spec_a.esn0_grid_db != spec_b.esn0_grid_db {
        return Err(Error::InvalidArgument(
            "compared specs must share the Es/N0 grid".into(),
        ));
    }
    if spec_a.seed != spec_b.seed {
        return Err(Error::InvalidArgument(
            "compared specs must share the seed for common random numbers".into(),
        ));
    }
    let a = simulate(spec_a)?;
    let b = simulate(spec_b)?;
    let diff = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(pa, pb)| ComparePoint {
            esn0_db: pa.esn0_db,
            bler_a: pa.bler,
            bler_b: pb.bler,
            diff: pa.bler - pb.bler,
            diff_ci_lo: pa.ci_lo - pb.ci_hi,
            diff_ci_hi: pa.ci_hi - pb.ci_lo,
        })
        .collect();
    Ok(CompareResult { a, b, diff })
}

/// On-disk form of a simulation request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimSpecFile {
    pub cfg: RmConfigFile,
    pub esn0_grid_db: Vec<f64>,
    pub max_trials: u64,
    #[serde(default)]
    pub target_errors: u64,
    pub seed: u64,
}

impl SimSpecFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn resolve(&self, base_dir: &Path) -> Result<SimSpec> {
        Ok(SimSpec {
            cfg: self.cfg.resolve(base_dir)?,
            esn0_grid_db: self.esn0_grid_db.clone(),
            max_trials: self.max_trials,
            target_errors: self.target_errors,
            seed: self.seed,
        })
    }
}
