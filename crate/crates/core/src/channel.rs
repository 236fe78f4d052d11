//! Gray-labelled square QAM, AWGN and soft demapping.
//!
//! Square QAM of order `4^m` is built from two independent `2^m`-level PAM
//! axes. The first `m` bits of a symbol label select the in-phase level, the
//! last `m` bits the quadrature level. On each axis the label (read MSB
//! first) is the binary-reflected Gray code of the level index, and level
//! index 0 is the most positive amplitude, so an all-zero label maps to the
//! upper-right corner. BPSK (order 2) uses the in-phase axis only and maps
//! bit 0 to +1.
//!
//! All constellations have unit average symbol energy. LLRs follow the
//! convention `log P(bit = 0) - log P(bit = 1)` and are clipped to
//! `±LLR_MAX`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Saturation magnitude for LLRs and decoder messages.
pub const LLR_MAX: f64 = 50.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("unsupported modulation order {0}; expected 2, 4, 16, 64 or 256")]
    UnsupportedOrder(usize),
    #[error("{len} bits cannot be split into {bits_per_symbol}-bit symbols")]
    Misaligned { len: usize, bits_per_symbol: usize },
    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),
}

/// A square QAM constellation (or BPSK).
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationScheme {
    order: usize,
    bits_per_symbol: usize,
    // Amplitudes of one axis, indexed by axis label value.
    axis_levels: Vec<f64>,
}

impl ModulationScheme {
    pub fn new(order: usize) -> Result<Self, ChannelError> {
        let bits_per_symbol = match order {
            2 => 1,
            4 => 2,
            16 => 4,
            64 => 6,
            256 => 8,
            _ => return Err(ChannelError::UnsupportedOrder(order)),
        };
        let axis_bits = if order == 2 { 1 } else { bits_per_symbol / 2 };
        let levels = 1usize << axis_bits;
        // Average energy of the unscaled constellation.
        let pam_energy = (levels * levels - 1) as f64 / 3.0;
        let energy = if order == 2 { pam_energy } else { 2.0 * pam_energy };
        let scale = energy.sqrt().recip();
        let mut axis_levels = vec![0.0; levels];
        for idx in 0..levels {
            let label = idx ^ (idx >> 1);
            axis_levels[label] = ((levels - 1) as f64 - 2.0 * idx as f64) * scale;
        }
        Ok(Self { order, bits_per_symbol, axis_levels })
    }

    pub fn bpsk() -> Self {
        Self::new(2).expect("order 2 is supported")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn is_bpsk(&self) -> bool {
        self.order == 2
    }

    fn axis_bits(&self) -> usize {
        if self.is_bpsk() {
            1
        } else {
            self.bits_per_symbol / 2
        }
    }

    /// Amplitudes of one axis, indexed by the axis label.
    pub fn axis_levels(&self) -> &[f64] {
        &self.axis_levels
    }

    /// Constellation point for a full symbol label (MSB first).
    pub fn point(&self, label: usize) -> Complex64 {
        if self.is_bpsk() {
            return Complex64::new(self.axis_levels[label & 1], 0.0);
        }
        let m = self.axis_bits();
        let mask = (1 << m) - 1;
        Complex64::new(self.axis_levels[(label >> m) & mask], self.axis_levels[label & mask])
    }

    /// All constellation points, indexed by label.
    pub fn points(&self) -> Vec<Complex64> {
        (0..self.order).map(|l| self.point(l)).collect()
    }
}

/// Noise parameters for one Eb/N0 operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    /// One-sided noise spectral density.
    pub n0: f64,
    /// Noise standard deviation per real dimension.
    pub sigma: f64,
}

impl ChannelParams {
    /// Parameters for a fixed `sigma`, bypassing the Eb/N0 conversion.
    pub fn from_sigma(sigma: f64) -> Self {
        Self { ebn0_db: f64::NAN, rate: f64::NAN, n0: 2.0 * sigma * sigma, sigma }
    }
}

/// `n0 = 1 / (R * bits_per_symbol * 10^(Eb/N0 / 10))` for unit symbol energy.
pub fn ebn0_to_params(ebn0_db: f64, rate: f64, scheme: &ModulationScheme) -> Result<ChannelParams, ChannelError> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(ChannelError::InvalidParams(format!("code rate {rate} outside (0, 1]")));
    }
    if !ebn0_db.is_finite() {
        return Err(ChannelError::InvalidParams(format!("Eb/N0 {ebn0_db} dB is not finite")));
    }
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    let n0 = 1.0 / (rate * scheme.bits_per_symbol() as f64 * ebn0);
    Ok(ChannelParams { ebn0_db, rate, n0, sigma: (n0 / 2.0).sqrt() })
}

pub fn modulate(bits: &[u8], scheme: &ModulationScheme) -> Result<Vec<Complex64>, ChannelError> {
    let bps = scheme.bits_per_symbol();
    if !bits.len().is_multiple_of(bps) {
        return Err(ChannelError::Misaligned { len: bits.len(), bits_per_symbol: bps });
    }
    Ok(bits
        .chunks_exact(bps)
        .map(|chunk| {
            let label = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
            scheme.point(label)
        })
        .collect())
}

/// Adds i.i.d. `N(0, sigma^2)` noise to each real dimension.
///
/// For BPSK the quadrature component also receives noise; the demapper
/// ignores it.
pub fn awgn<R: Rng + ?Sized>(symbols: &[Complex64], sigma: f64, rng: &mut R) -> Vec<Complex64> {
    symbols
        .iter()
        .map(|s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(s.re + sigma * re, s.im + sigma * im)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemapMode {
    /// Log-sum-exp over all constellation points.
    #[default]
    Exact,
    /// Max-log approximation.
    MaxLog,
}

/// Per-bit LLRs for a sequence of received symbols.
///
/// Square QAM factorizes over the two axes, so each bit LLR is computed from
/// its own axis only; this is exact, not an approximation. With `n0 == 0`
/// the output is `±LLR_MAX` according to the nearest level.
pub fn demap_llr(received: &[Complex64], scheme: &ModulationScheme, n0: f64, mode: DemapMode) -> Vec<f64> {
    let m = scheme.axis_bits();
    let mut out = Vec::with_capacity(received.len() * scheme.bits_per_symbol());
    for y in received {
        axis_llrs(y.re, scheme.axis_levels(), m, n0, mode, &mut out);
        if !scheme.is_bpsk() {
            axis_llrs(y.im, scheme.axis_levels(), m, n0, mode, &mut out);
        }
    }
    out
}

fn axis_llrs(y: f64, levels: &[f64], bits: usize, n0: f64, mode: DemapMode, out: &mut Vec<f64>) {
    for b in (0..bits).rev() {
        // Best (least distant) level for each bit value.
        let mut best = [(f64::INFINITY, 0.0f64); 2];
        for (label, &a) in levels.iter().enumerate() {
            let d = (y - a) * (y - a);
            let v = (label >> b) & 1;
            if d < best[v].0 {
                best[v] = (d, a);
            }
        }
        let (a0, a1) = (best[0].1, best[1].1);
        if n0 <= 0.0 {
            out.push(if best[0].0 <= best[1].0 { LLR_MAX } else { -LLR_MAX });
            continue;
        }
        // (d1 - d0) / n0 in factored form, accurate near y = (a0 + a1) / 2.
        let mut llr = (a0 - a1) * (2.0 * y - a0 - a1) / n0;
        if mode == DemapMode::Exact {
            let mut sums = [0.0f64; 2];
            for (label, &a) in levels.iter().enumerate() {
                let v = (label >> b) & 1;
                let d = (y - a) * (y - a);
                sums[v] += (-(d - best[v].0) / n0).exp();
            }
            llr += sums[0].ln() - sums[1].ln();
        }
        out.push(llr.clamp(-LLR_MAX, LLR_MAX));
    }
}
