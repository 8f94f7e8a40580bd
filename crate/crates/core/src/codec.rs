//! Polar encoding, successive-cancellation decoding, and symbolic zero-LLR
//! propagation over the stage graph.
//!
//! Soft values are `f64` with two reserved sentinels: exact `0.0` marks a
//! position the receiver knows nothing about (punctured), and `±INFINITY`
//! marks a position whose value is known with certainty (fixed by
//! shortening). Positive LLRs favor bit value 0.

use crate::domination::{check_order, dominates, IndexSet};
use crate::error::{Error, Result};

/// Soft value (log-likelihood ratio). Positive favors bit 0.
pub type Llr = f64;

/// Magnitude clamp applied before the tanh in the check-node update.
pub const LLR_CLAMP: f64 = 40.0;

/// Check-node combine (the `f` update): `2·atanh(tanh(a/2)·tanh(b/2))`.
///
/// Exact zeros absorb: if either input is zero the result is zero. An
/// infinite input passes the other operand through, signed. Saturates to the
/// infinite sentinel when both magnitudes exceed the clamp.
pub fn f_combine(a: Llr, b: Llr) -> Llr {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if a.is_infinite() {
        return if a > 0.0 { b } else { -b };
    }
    if b.is_infinite() {
        return if b > 0.0 { a } else { -a };
    }
    let x = (a.clamp(-LLR_CLAMP, LLR_CLAMP) / 2.0).tanh();
    let y = (b.clamp(-LLR_CLAMP, LLR_CLAMP) / 2.0).tanh();
    2.0 * (x * y).atanh()
}

/// Variable-node combine (the `g` update): `(1 - 2β)·a + b`.
///
/// Opposite infinite operands carry contradictory certainty and cancel to an
/// exact zero rather than NaN.
pub fn g_combine(a: Llr, b: Llr, hard: u8) -> Llr {
    let a = if hard & 1 == 1 { -a } else { a };
    if a.is_infinite() && b.is_infinite() && a.is_sign_positive() != b.is_sign_positive() {
        return 0.0;
    }
    a + b
}

/// A binary vector of length `2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    n: u32,
    bits: Vec<u8>,
}

impl BitVector {
    /// All-zero vector. Panics on an invalid order.
    pub fn zero(n: u32) -> Self {
        check_order(n).expect("valid order");
        Self {
            n,
            bits: vec![0; 1 << n],
        }
    }

    pub fn from_bits(n: u32, bits: Vec<u8>) -> Result<Self> {
        check_order(n)?;
        if bits.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "expected {} bits for order n={n}, got {}",
                1u32 << n,
                bits.len()
            )));
        }
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidArgument(format!(
                "bit values must be 0 or 1, got {bad}"
            )));
        }
        Ok(Self { n, bits })
    }

    /// The indicator vector of a single index.
    pub fn indicator(n: u32, index: u32) -> Result<Self> {
        crate::domination::check_index(index, n)?;
        let mut bits = vec![0; 1 << n];
        bits[index as usize] = 1;
        Ok(Self { n, bits })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, index: usize) -> u8 {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: u8) {
        assert!(value <= 1, "bit values must be 0 or 1");
        self.bits[index] = value;
    }
}

/// In-place butterfly realization of the length-`2^n` polar transform.
pub fn polar_transform(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut step = 1;
    while step < len {
        let mut base = 0;
        while base < len {
            for k in 0..step {
                bits[base + k] ^= bits[base + k + step];
            }
            base += 2 * step;
        }
        step <<= 1;
    }
}

/// Encodes `u` into `x`: output `x_j` is the XOR of `u_i` over all `i ⪰ j`.
pub fn encode(input: &BitVector) -> BitVector {
    let mut out = input.clone();
    polar_transform(&mut out.bits);
    out
}

/// Entry at row `i`, column `j` of the length-`2^n` generator: 1 iff `i ⪰ j`.
pub fn generator_entry(i: u32, j: u32, n: u32) -> u8 {
    let len = 1u32 << n;
    assert!(i < len && j < len, "indices must lie in [0, 2^{n})");
    u8::from(dominates(j, i))
}

/// The per-stage soft/hard state of one successive-cancellation pass:
/// `alpha` holds `n + 1` rows of `2^n` soft values (row `n` is the intrinsic
/// input), `beta` holds `n` rows of hard decisions.
#[derive(Debug, Clone)]
pub struct LlrGrid {
    n: u32,
    len: usize,
    alpha: Vec<Llr>,
    beta: Vec<u8>,
}

impl LlrGrid {
    fn new(n: u32) -> Self {
        let len = 1usize << n;
        Self {
            n,
            len,
            alpha: vec![0.0; (n as usize + 1) * len],
            beta: vec![0; (n as usize) * len],
        }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Soft value of variable node `index` at `stage` (0 = input side,
    /// n = intrinsic side).
    #[inline]
    pub fn alpha(&self, stage: usize, index: usize) -> Llr {
        self.alpha[stage * self.len + index]
    }

    /// Hard decision of variable node `index` at `stage < n`.
    #[inline]
    pub fn beta(&self, stage: usize, index: usize) -> u8 {
        self.beta[stage * self.len + index]
    }

    #[inline]
    fn set_alpha(&mut self, stage: usize, index: usize, value: Llr) {
        self.alpha[stage * self.len + index] = value;
    }

    #[inline]
    fn set_beta(&mut self, stage: usize, index: usize, value: u8) {
        self.beta[stage * self.len + index] = value;
    }
}

/// Result of one successive-cancellation pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScDecision {
    /// Estimated encoder input vector.
    pub input: BitVector,
    /// Re-encoded codeword estimate.
    pub output: BitVector,
}

/// A reusable successive-cancellation decoder for one code order.
///
/// Soft values propagate right to left through the stage grid while hard
/// decisions travel left to right; aside from the grid it owns no state, so
/// distinct decoder instances may run concurrently.
pub struct ScDecoder {
    grid: LlrGrid,
}

impl ScDecoder {
    pub fn new(n: u32) -> Result<Self> {
        check_order(n)?;
        Ok(Self {
            grid: LlrGrid::new(n),
        })
    }

    pub fn n(&self) -> u32 {
        self.grid.n
    }

    /// Grid state left by the most recent [`decode`](Self::decode) call.
    pub fn grid(&self) -> &LlrGrid {
        &self.grid
    }

    /// Runs one pass. `frozen[i]` forces input bit `i` to zero; everything
    /// else is a hard decision on its stage-0 soft value, with the tie at an
    /// exact zero resolved to bit 0.
    pub fn decode(&mut self, intrinsic: &[Llr], frozen: &[bool]) -> ScDecision {
        let len = self.grid.len;
        assert_eq!(intrinsic.len(), len, "intrinsic length must be 2^n");
        assert_eq!(frozen.len(), len, "frozen mask length must be 2^n");
        debug_assert!(intrinsic.iter().all(|v| !v.is_nan()));
        let n = self.grid.n as usize;
        for (i, &v) in intrinsic.iter().enumerate() {
            self.grid.set_alpha(n, i, v);
        }
        self.span(n, 0, frozen);
        let mut input = BitVector::zero(self.grid.n);
        for i in 0..len {
            input.bits[i] = self.grid.beta(0, i);
        }
        let output = encode(&input);
        ScDecision { input, output }
    }

    /// Decodes the sub-code whose stage-`t` nodes are `[base, base + 2^t)`.
    fn span(&mut self, t: usize, base: usize, frozen: &[bool]) {
        if t == 0 {
            let a = self.grid.alpha(0, base);
            let bit = if frozen[base] { 0 } else { u8::from(a < 0.0) };
            self.grid.set_beta(0, base, bit);
            return;
        }
        let half = 1usize << (t - 1);
        for k in 0..half {
            let i = base + k;
            let v = f_combine(self.grid.alpha(t, i), self.grid.alpha(t, i + half));
            self.grid.set_alpha(t - 1, i, v);
        }
        self.span(t - 1, base, frozen);
        for k in 0..half {
            let i = base + k;
            let v = g_combine(
                self.grid.alpha(t, i),
                self.grid.alpha(t, i + half),
                self.grid.beta(t - 1, i),
            );
            self.grid.set_alpha(t - 1, i + half, v);
        }
        self.span(t - 1, base + half, frozen);
        if t < self.grid.n as usize {
            for k in 0..half {
                let i = base + k;
                let merged = self.grid.beta(t - 1, i) ^ self.grid.beta(t - 1, i + half);
                self.grid.set_beta(t, i, merged);
                self.grid
                    .set_beta(t, i + half, self.grid.beta(t - 1, i + half));
            }
        }
    }
}

/// One-shot successive-cancellation decode with an [`IndexSet`] of frozen
/// input positions, all frozen to zero.
pub fn sc_decode(intrinsic: &[Llr], frozen: &IndexSet) -> Result<ScDecision> {
    let n = frozen.n();
    if intrinsic.len() != 1usize << n {
        return Err(Error::InvalidArgument(format!(
            "expected {} intrinsic values for order n={n}, got {}",
            1u32 << n,
            intrinsic.len()
        )));
    }
    let mut mask = vec![false; intrinsic.len()];
    for v in frozen.iter() {
        mask[v as usize] = true;
    }
    let mut decoder = ScDecoder::new(n)?;
    Ok(decoder.decode(intrinsic, &mask))
}

/// Which variable nodes carry a structurally zero soft value, per stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroProfile {
    n: u32,
    per_stage: Vec<IndexSet>,
}

impl ZeroProfile {
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Stage sets, index 0 (input side) through n (intrinsic side).
    pub fn per_stage(&self) -> &[IndexSet] {
        &self.per_stage
    }

    pub fn stage(&self, t: usize) -> &IndexSet {
        &self.per_stage[t]
    }

    /// The stage-0 set: input positions with no capacity left.
    pub fn incapable(&self) -> &IndexSet {
        &self.per_stage[0]
    }

    pub fn into_incapable(mut self) -> IndexSet {
        self.per_stage.swap_remove(0)
    }
}

/// Propagates the zero-LLR pattern of a punctured output set down the stage
/// graph, purely symbolically: a check-side (`f`) output is zero when either
/// parent is zero, a variable-side (`g`) output only when both parents are.
pub fn zero_llr_propagate(punctured: &IndexSet) -> ZeroProfile {
    let n = punctured.n();
    let len = 1usize << n;
    let mut stage = vec![false; len];
    for v in punctured.iter() {
        stage[v as usize] = true;
    }
    let mut per_stage = vec![IndexSet::empty(n); n as usize + 1];
    per_stage[n as usize] = punctured.clone();
    for t in (0..n).rev() {
        let step = 1usize << t;
        let mut next = vec![false; len];
        for (i, slot) in next.iter_mut().enumerate() {
            *slot = if i & step == 0 {
                stage[i] || stage[i + step]
            } else {
                stage[i] && stage[i - step]
            };
        }
        stage = next;
        per_stage[t as usize] = IndexSet::new(
            n,
            stage
                .iter()
                .enumerate()
                .filter(|(_, &z)| z)
                .map(|(i, _)| i as u32),
        )
        .expect("indices in range");
    }
    ZeroProfile { n, per_stage }
}
