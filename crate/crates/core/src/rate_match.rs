//! The unified circular-buffer rate matcher.
//!
//! Encoder output is interleaved once by a posequence, stored in a circular
//! buffer, and the codeword is always read from slot 0, for puncturing,
//! shortening, and repetition alike. Dropping the buffer tail punctures the
//! most dominant outputs (silencing the complement set of inputs) or, in
//! shortening mode, is backed by fixing exactly those outputs to zero. Only
//! the derivation of the zero-capacity input set differs between modes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codec::{BitVector, Llr};
use crate::domination::{check_order, IndexSet, Posequence};
use crate::error::{Error, Result};

/// A non-negative rational, used for the mode-selection rate threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u32,
    den: u32,
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("ratio denominator is zero".into()));
        }
        Ok(Self { num, den })
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    /// True when `k/m` is at most this ratio (exact integer arithmetic).
    pub fn at_least_rate(self, k: u32, m: u32) -> bool {
        u64::from(k) * u64::from(self.den) <= u64::from(m) * u64::from(self.num)
    }
}

/// Default puncture/shorten boundary.
pub const DEFAULT_RATE_THRESHOLD: Ratio = Ratio { num: 7, den: 16 };

/// Default design erasure probability for the reliability recursion.
pub const DEFAULT_DESIGN_ERASURE: f64 = 0.5;

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidArgument(format!("bad ratio numerator: {e}")))?,
                b.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidArgument(format!("bad ratio denominator: {e}")))?,
            ),
            None => (
                s.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidArgument(format!("bad ratio: {e}")))?,
                1,
            ),
        };
        Ratio::new(num, den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// The three rate-matching techniques.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateMode {
    Puncture,
    Shorten,
    Repeat,
}

impl fmt::Display for RateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateMode::Puncture => write!(f, "puncture"),
            RateMode::Shorten => write!(f, "shorten"),
            RateMode::Repeat => write!(f, "repeat"),
        }
    }
}

fn log2_ceil(m: u32) -> u32 {
    32 - (m - 1).leading_zeros()
}

/// Chooses the mother code length `N` for a target length `M` and dimension
/// `K`: the next power of two, or half of it when `M` overshoots that half by
/// at most 1/8 and the rate stays below 9/16.
pub fn select_mother_code(m: u32, k: u32) -> Result<u32> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "codeword length M must be at least 2, got {m}"
        )));
    }
    if k > m {
        return Err(Error::InvalidArgument(format!(
            "information length K={k} exceeds codeword length M={m}"
        )));
    }
    let e = log2_ceil(m);
    if e > crate::domination::MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            n: e,
            max: crate::domination::MAX_ORDER,
        });
    }
    let half = 1u32 << (e - 1);
    if 8 * u64::from(m) <= 9 * u64::from(half) && 16 * u64::from(k) < 9 * u64::from(m) {
        Ok(half)
    } else {
        Ok(1 << e)
    }
}

/// Chooses the technique for the given mother length: repetition whenever
/// `M > N`, otherwise puncturing at or below the rate threshold and
/// shortening above it.
pub fn select_mode(m: u32, mother_len: u32, k: u32, threshold: Ratio) -> RateMode {
    if m > mother_len {
        RateMode::Repeat
    } else if threshold.at_least_rate(k, m) {
        RateMode::Puncture
    } else {
        RateMode::Shorten
    }
}

/// A fully resolved rate-matching configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RmConfig {
    m: u32,
    k: u32,
    order: u32,
    mode: RateMode,
    posequence: Posequence,
    reliability: Vec<u32>,
    rate_threshold: Ratio,
    design_erasure: f64,
}

impl RmConfig {
    pub fn builder(m: u32, k: u32) -> RmConfigBuilder {
        RmConfigBuilder {
            m,
            k,
            mother_order: None,
            mode: None,
            posequence: None,
            reliability: None,
            rate_threshold: DEFAULT_RATE_THRESHOLD,
            design_erasure: DEFAULT_DESIGN_ERASURE,
        }
    }

    /// Codeword length `M`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Information length `K`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Mother code order `n`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Mother code length `N = 2^n`.
    pub fn mother_len(&self) -> u32 {
        1 << self.order
    }

    /// Number of untransmitted buffer positions, `max(N - M, 0)`.
    pub fn dropped(&self) -> u32 {
        self.mother_len().saturating_sub(self.m)
    }

    pub fn mode(&self) -> RateMode {
        self.mode
    }

    pub fn posequence(&self) -> &Posequence {
        &self.posequence
    }

    /// Split-channel reliability order, least reliable first.
    pub fn reliability(&self) -> &[u32] {
        &self.reliability
    }

    pub fn rate_threshold(&self) -> Ratio {
        self.rate_threshold
    }

    pub fn design_erasure(&self) -> f64 {
        self.design_erasure
    }

    /// True when the information set uses every non-zero-capacity position of
    /// positive reliability rank, i.e. `K = N - |Z|`.
    pub fn at_capacity(&self) -> bool {
        let z = zero_capacity_set(self).len() as u32;
        self.k == self.mother_len() - z
    }
}

/// Step-by-step construction of an [`RmConfig`] with validation at `build`.
#[derive(Debug, Clone)]
pub struct RmConfigBuilder {
    m: u32,
    k: u32,
    mother_order: Option<u32>,
    mode: Option<RateMode>,
    posequence: Option<Posequence>,
    reliability: Option<Vec<u32>>,
    rate_threshold: Ratio,
    design_erasure: f64,
}

impl RmConfigBuilder {
    /// Forces the mother code order instead of deriving it from `M` and `K`.
    pub fn mother_order(mut self, n: u32) -> Self {
        self.mother_order = Some(n);
        self
    }

    pub fn mode(mut self, mode: RateMode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn posequence(mut self, p: Posequence) -> Self {
        self.posequence = Some(p);
        self
    }

    /// Overrides the reliability order (least reliable first; must be a
    /// permutation of `Z_N`).
    pub fn reliability(mut self, order: Vec<u32>) -> Self {
        self.reliability = Some(order);
        self
    }

    pub fn rate_threshold(mut self, threshold: Ratio) -> Self {
        self.rate_threshold = threshold;
        self
    }

    pub fn design_erasure(mut self, erasure: f64) -> Self {
        self.design_erasure = erasure;
        self
    }

    pub fn build(self) -> Result<RmConfig> {
        if self.k > self.m {
            return Err(Error::InvalidArgument(format!(
                "information length K={} exceeds codeword length M={}",
                self.k, self.m
            )));
        }
        let order = match self.mother_order {
            Some(n) => {
                check_order(n)?;
                n
            }
            None => {
                let mother = select_mother_code(self.m, self.k)?;
                mother.trailing_zeros()
            }
        };
        check_order(order)?;
        let mother_len = 1u32 << order;
        let mode = self
            .mode
            .unwrap_or_else(|| select_mode(self.m, mother_len, self.k, self.rate_threshold));
        match mode {
            RateMode::Repeat if self.m <= mother_len => {
                return Err(Error::InvalidArgument(format!(
                    "repeat mode requires M > N, got M={} N={mother_len}",
                    self.m
                )));
            }
            RateMode::Puncture | RateMode::Shorten if self.m > mother_len => {
                return Err(Error::InvalidArgument(format!(
                    "{mode} mode requires M <= N, got M={} N={mother_len}",
                    self.m
                )));
            }
            _ => {}
        }
        if !(self.design_erasure > 0.0 && self.design_erasure < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "design erasure must lie in (0, 1), got {}",
                self.design_erasure
            )));
        }
        let posequence = match self.posequence {
            Some(p) => {
                if p.n() != order {
                    return Err(Error::OrderMismatch {
                        left: p.n(),
                        right: order,
                    });
                }
                p
            }
            None => default_posequence(order, self.design_erasure)?,
        };
        let reliability = match self.reliability {
            Some(order_vec) => {
                if order_vec.len() != mother_len as usize {
                    return Err(Error::InvalidArgument(format!(
                        "reliability order must have {mother_len} entries, got {}",
                        order_vec.len()
                    )));
                }
                let mut seen = vec![false; mother_len as usize];
                for &v in &order_vec {
                    if v >= mother_len || seen[v as usize] {
                        return Err(Error::InvalidArgument(format!(
                            "reliability order is not a permutation of 0..{mother_len}"
                        )));
                    }
                    seen[v as usize] = true;
                }
                order_vec
            }
            None => reliability_sequence(order, self.design_erasure)?,
        };
        let config = RmConfig {
            m: self.m,
            k: self.k,
            order,
            mode,
            posequence,
            reliability,
            rate_threshold: self.rate_threshold,
            design_erasure: self.design_erasure,
        };
        let dropped = config.dropped();
        let capacity = mother_len - dropped;
        if self.k > capacity {
            return Err(Error::CapacityExceeded {
                k: self.k,
                capacity,
            });
        }
        Ok(config)
    }
}

/// Erasure-probability profile of every split channel under the binary
/// erasure proxy: starting from the design erasure, each binary digit of the
/// index (most significant first) applies `z ← 2z - z²` for a 0 digit and
/// `z ← z²` for a 1 digit.
pub fn erasure_profile(n: u32, design_erasure: f64) -> Result<Vec<f64>> {
    check_order(n)?;
    if !(design_erasure > 0.0 && design_erasure < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "design erasure must lie in (0, 1), got {design_erasure}"
        )));
    }
    let len = 1usize << n;
    let mut profile = Vec::with_capacity(len);
    for i in 0..len as u32 {
        let mut z = design_erasure;
        for t in (0..n).rev() {
            z = if i >> t & 1 == 1 {
                z * z
            } else {
                2.0 * z - z * z
            };
        }
        profile.push(z);
    }
    Ok(profile)
}

/// Split-channel order, least reliable first: indices sorted by descending
/// erasure probability, ties broken by ascending index. The order is always
/// consistent with domination: if `i ≺ j` then `i` appears before `j`.
pub fn reliability_sequence(n: u32, design_erasure: f64) -> Result<Vec<u32>> {
    let profile = erasure_profile(n, design_erasure)?;
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by(|&a, &b| {
        profile[b as usize]
            .total_cmp(&profile[a as usize])
            .then(a.cmp(&b))
    });
    Ok(order)
}

/// The buffer order used when none is supplied: indices sorted by ascending
/// Hamming weight, then descending erasure probability, then ascending index.
/// Weight-major ordering makes it a posequence for every `n`.
pub fn default_posequence(n: u32, design_erasure: f64) -> Result<Posequence> {
    let profile = erasure_profile(n, design_erasure)?;
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by(|&a, &b| {
        a.count_ones()
            .cmp(&b.count_ones())
            .then(profile[b as usize].total_cmp(&profile[a as usize]))
            .then(a.cmp(&b))
    });
    Posequence::new(n, order)
}

/// Buffer write order: output `x` rearranged so slot `i` holds `x[p_i]`.
pub fn interleave(x: &BitVector, p: &Posequence) -> Result<BitVector> {
    if x.n() != p.n() {
        return Err(Error::OrderMismatch {
            left: x.n(),
            right: p.n(),
        });
    }
    let bits = p.order().iter().map(|&v| x.get(v as usize)).collect();
    BitVector::from_bits(x.n(), bits)
}

/// Inverse of [`interleave`].
pub fn deinterleave(x_prime: &BitVector, p: &Posequence) -> Result<BitVector> {
    if x_prime.n() != p.n() {
        return Err(Error::OrderMismatch {
            left: x_prime.n(),
            right: p.n(),
        });
    }
    let mut out = BitVector::zero(x_prime.n());
    for (slot, &v) in p.order().iter().enumerate() {
        out.set(v as usize, x_prime.get(slot));
    }
    Ok(out)
}

/// Extracts the length-`M` codeword from the circular buffer: `c_i` is buffer
/// slot `i mod N`, starting from slot 0 in every mode.
pub fn rate_match(x: &BitVector, cfg: &RmConfig) -> Result<Vec<u8>> {
    if x.n() != cfg.order() {
        return Err(Error::OrderMismatch {
            left: x.n(),
            right: cfg.order(),
        });
    }
    let buffer = interleave(x, &cfg.posequence)?;
    let len = buffer.len();
    Ok((0..cfg.m as usize).map(|i| buffer.get(i % len)).collect())
}

/// The zero-capacity input set `Z` implied by the configuration: complements
/// of the dropped buffer tail when puncturing, the tail itself when
/// shortening, empty for repetition.
pub fn zero_capacity_set(cfg: &RmConfig) -> IndexSet {
    let dropped = cfg.dropped() as usize;
    match cfg.mode {
        RateMode::Repeat => IndexSet::empty(cfg.order),
        RateMode::Puncture => cfg
            .posequence
            .suffix_set(dropped)
            .expect("dropped <= N")
            .elementwise_complement(),
        RateMode::Shorten => cfg.posequence.suffix_set(dropped).expect("dropped <= N"),
    }
}

/// The three-way split of encoder input positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelAllocation {
    /// The `K` most reliable positions outside the zero-capacity set.
    pub info: IndexSet,
    /// Remaining positions, frozen to zero.
    pub frozen: IndexSet,
    /// Positions excluded from allocation by rate matching.
    pub zero_cap: IndexSet,
}

impl ChannelAllocation {
    /// The sets partition `Z_N`.
    pub fn is_partition(&self) -> bool {
        let n = self.info.n();
        if self.frozen.n() != n || self.zero_cap.n() != n {
            return false;
        }
        let total = self.info.len() + self.frozen.len() + self.zero_cap.len();
        if total != 1usize << n {
            return false;
        }
        let union = self
            .info
            .union(&self.frozen)
            .and_then(|u| u.union(&self.zero_cap));
        matches!(union, Ok(u) if u.len() == 1usize << n)
    }
}

/// Performs the split channel allocation: removes the zero-capacity indices
/// from the reliability order (keeping relative order), assigns the `K` most
/// reliable survivors to information, and freezes the rest.
pub fn allocate_channels(cfg: &RmConfig) -> Result<ChannelAllocation> {
    let zero_cap = zero_capacity_set(cfg);
    let survivors: Vec<u32> = cfg
        .reliability
        .iter()
        .copied()
        .filter(|&v| !zero_cap.contains(v))
        .collect();
    let k = cfg.k as usize;
    if k > survivors.len() {
        return Err(Error::CapacityExceeded {
            k: cfg.k,
            capacity: survivors.len() as u32,
        });
    }
    let split = survivors.len() - k;
    let info = IndexSet::new(cfg.order, survivors[split..].iter().copied())?;
    let frozen = IndexSet::new(cfg.order, survivors[..split].iter().copied())?;
    Ok(ChannelAllocation {
        info,
        frozen,
        zero_cap,
    })
}

/// Rebuilds length-`N` decoder inputs from `M` received soft values:
/// inverse-interleaves, sums the copies of repeated positions, leaves
/// punctured positions at exact zero, and pins fixed positions to the
/// infinite sentinel.
pub fn dematch(received: &[Llr], cfg: &RmConfig) -> Result<Vec<Llr>> {
    if received.len() != cfg.m as usize {
        return Err(Error::InvalidArgument(format!(
            "expected {} received values, got {}",
            cfg.m,
            received.len()
        )));
    }
    let len = cfg.mother_len() as usize;
    let order = cfg.posequence.order();
    let mut out = vec![0.0; len];
    for (i, &value) in received.iter().enumerate() {
        out[order[i % len] as usize] += value;
    }
    if cfg.mode == RateMode::Shorten {
        for &v in &order[cfg.m as usize..] {
            out[v as usize] = f64::INFINITY;
        }
    }
    Ok(out)
}

/// On-disk form of a rate-matching configuration. Paths are resolved
/// relative to the directory the file lives in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RmConfigFile {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "K")]
    pub k: u32,
    /// Mother code length; derived from `M` and `K` when absent.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default)]
    pub mode: ModeChoice,
    /// Path of a posequence file (`{"n": ..., "order": [...]}`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub posequence: Option<String>,
    /// Path of a reliability sequence file, least reliable first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reliability: Option<String>,
    #[serde(default = "default_threshold")]
    pub rate_threshold: Ratio,
    #[serde(default = "default_erasure")]
    pub design_erasure: f64,
}

fn default_threshold() -> Ratio {
    DEFAULT_RATE_THRESHOLD
}

fn default_erasure() -> f64 {
    DEFAULT_DESIGN_ERASURE
}

/// Mode requested by a configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    #[default]
    Auto,
    Puncture,
    Shorten,
    Repeat,
}

impl FromStr for ModeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ModeChoice::Auto),
            "puncture" => Ok(ModeChoice::Puncture),
            "shorten" => Ok(ModeChoice::Shorten),
            "repeat" => Ok(ModeChoice::Repeat),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode {other:?} (expected auto, puncture, shorten, or repeat)"
            ))),
        }
    }
}

impl ModeChoice {
    pub fn fixed(self) -> Option<RateMode> {
        match self {
            ModeChoice::Auto => None,
            ModeChoice::Puncture => Some(RateMode::Puncture),
            ModeChoice::Shorten => Some(RateMode::Shorten),
            ModeChoice::Repeat => Some(RateMode::Repeat),
        }
    }
}

/// Reliability sequence file: `{"n": ..., "order": [...]}`, least reliable
/// first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReliabilityFile {
    pub n: u32,
    pub order: Vec<u32>,
}

/// Reads and validates a posequence file.
pub fn load_posequence(path: &Path) -> Result<Posequence> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads a reliability sequence file.
pub fn load_reliability(path: &Path) -> Result<ReliabilityFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

impl RmConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Resolves file references against `base_dir` and builds the
    /// configuration.
    pub fn resolve(&self, base_dir: &Path) -> Result<RmConfig> {
        let mut builder = RmConfig::builder(self.m, self.k)
            .rate_threshold(self.rate_threshold)
            .design_erasure(self.design_erasure);
        if let Some(n_len) = self.n {
            if !n_len.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "mother length N must be a power of two, got {n_len}"
                )));
            }
            builder = builder.mother_order(n_len.trailing_zeros());
        }
        if let Some(mode) = self.mode.fixed() {
            builder = builder.mode(mode);
        }
        if let Some(path) = &self.posequence {
            builder = builder.posequence(load_posequence(&base_dir.join(path))?);
        }
        if let Some(path) = &self.reliability {
            let file = load_reliability(&base_dir.join(path))?;
            builder = builder.reliability(file.order);
        }
        builder.build()
    }
}
