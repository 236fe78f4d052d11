//! Deterministic Monte-Carlo BER/FER estimation.
//!
//! Every frame draws its information bits and its channel noise from two
//! ChaCha streams seeded by `(master_seed, point index, frame index)`, so a
//! frame's outcome never depends on which worker ran it or in which order.
//! All configured decoder variants decode the same LLR vector (paired
//! comparison). Per variant, frames are counted in index order up to and
//! including the frame that brings its error count to `stop_frame_errors`,
//! or up to `max_frames`.

mod csv;
mod optimize;

pub use csv::{emit_csv, emit_plot_script, format_g6, parse_csv, CSV_HEADER};
pub use optimize::{optimize_parameter, GridEntry, OptimizationResult, ParamGrid};

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{self, ChannelError, ChannelParams, DemapMode, ModulationScheme};
use crate::code::{CodeError, Codeword, LdpcCode};
use crate::decoder::{DecodeError, Decoder, DecoderVariant};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BerOver {
    #[default]
    InfoBits,
    AllBits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transmit {
    /// Random information bits, encoded. Needs an encoder.
    #[default]
    RandomCodewords,
    /// The all-zero codeword. Only meaningful for BPSK.
    AllZero,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub code: Arc<LdpcCode>,
    pub scheme: ModulationScheme,
    pub variants: Vec<DecoderVariant>,
    pub ebn0_db: Vec<f64>,
    pub max_iterations: u32,
    pub stop_frame_errors: u64,
    pub max_frames: u64,
    pub master_seed: u64,
    pub ber_over: BerOver,
    pub demap: DemapMode,
    pub transmit: Transmit,
    /// Forces the noise standard deviation, ignoring `ebn0_db`. Test hook.
    pub sigma_override: Option<f64>,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
}

impl SimConfig {
    pub fn new(code: Arc<LdpcCode>, scheme: ModulationScheme, variants: Vec<DecoderVariant>, ebn0_db: Vec<f64>) -> Self {
        Self {
            code,
            scheme,
            variants,
            ebn0_db,
            max_iterations: 50,
            stop_frame_errors: 100,
            max_frames: 100_000,
            master_seed: 0,
            ber_over: BerOver::InfoBits,
            demap: DemapMode::Exact,
            transmit: Transmit::RandomCodewords,
            sigma_override: None,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |m: &str| Err(SimError::Invalid(m.to_string()));
        if self.ebn0_db.is_empty() {
            return invalid("ebn0_db list is empty");
        }
        if self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return invalid("ebn0_db values must be finite");
        }
        if self.variants.is_empty() {
            return invalid("no decoder variants configured");
        }
        if self.stop_frame_errors == 0 {
            return invalid("stop_frame_errors must be at least 1");
        }
        if self.max_frames == 0 {
            return invalid("max_frames must be at least 1");
        }
        if self.max_iterations == 0 {
            return invalid("max_iterations must be at least 1");
        }
        if !self.code.descriptor.n.is_multiple_of(self.scheme.bits_per_symbol()) {
            return invalid(&format!(
                "codeword length {} is not a multiple of {} bits per symbol",
                self.code.descriptor.n,
                self.scheme.bits_per_symbol()
            ));
        }
        match self.transmit {
            Transmit::RandomCodewords if self.code.encoder.is_none() => {
                return invalid("random codewords need an eIRA code with an encoder; use transmit = all-zero");
            }
            Transmit::AllZero if !self.scheme.is_bpsk() => {
                return invalid("the all-zero shortcut is only valid for BPSK");
            }
            _ => {}
        }
        if self.ber_over == BerOver::InfoBits && self.code.encoder.is_none() {
            return invalid("information bit positions are unknown for this code; use ber_over = all_bits");
        }
        if let Some(s) = self.sigma_override {
            if !(s >= 0.0 && s.is_finite()) {
                return invalid("sigma override must be finite and non-negative");
            }
        }
        Ok(())
    }

    pub fn channel_params(&self, point: usize) -> Result<ChannelParams, SimError> {
        match self.sigma_override {
            Some(sigma) => Ok(ChannelParams::from_sigma(sigma)),
            None => Ok(channel::ebn0_to_params(self.ebn0_db[point], self.code.descriptor.rate(), &self.scheme)?),
        }
    }

    fn counted_bits(&self) -> usize {
        match self.ber_over {
            BerOver::InfoBits => self.code.descriptor.k,
            BerOver::AllBits => self.code.descriptor.n,
        }
    }
}

const STREAM_INFO: u64 = 0;
const STREAM_NOISE: u64 = 1;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one random stream of one frame.
pub fn frame_seed(master_seed: u64, point: usize, frame: u64, stream: u64) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ point as u64);
    h = splitmix64(h ^ frame);
    splitmix64(h ^ stream)
}

/// Transmitted codeword and demapped LLRs of one frame.
pub fn frame_llr(cfg: &SimConfig, params: &ChannelParams, point: usize, frame: u64) -> Result<(Codeword, Vec<f64>), SimError> {
    let n = cfg.code.descriptor.n;
    let word = match (cfg.transmit, &cfg.code.encoder) {
        (Transmit::RandomCodewords, Some(enc)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(frame_seed(cfg.master_seed, point, frame, STREAM_INFO));
            let info: Vec<u8> = (0..enc.k()).map(|_| rng.random::<bool>() as u8).collect();
            enc.encode(&info)?
        }
        (Transmit::RandomCodewords, None) => {
            return Err(SimError::Invalid("random codewords need an encoder".into()));
        }
        (Transmit::AllZero, _) => Codeword(vec![0; n]),
    };
    let symbols = channel::modulate(word.bits(), &cfg.scheme)?;
    let mut rng = ChaCha8Rng::seed_from_u64(frame_seed(cfg.master_seed, point, frame, STREAM_NOISE));
    let received = channel::awgn(&symbols, params.sigma, &mut rng);
    let llr = channel::demap_llr(&received, &cfg.scheme, params.n0, cfg.demap);
    Ok((word, llr))
}

/// Outcome of one variant on one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VariantOutcome {
    pub bit_errors: u64,
    pub frame_error: bool,
    pub iterations: u32,
}

fn simulate_frame(
    cfg: &SimConfig,
    params: &ChannelParams,
    point: usize,
    frame: u64,
    active: &[bool],
    decoders: &mut [Decoder<'_>],
) -> Result<Vec<Option<VariantOutcome>>, SimError> {
    let (word, llr) = frame_llr(cfg, params, point, frame)?;
    let counted = cfg.counted_bits();
    decoders
        .iter_mut()
        .zip(active)
        .map(|(dec, &on)| {
            if !on {
                return Ok(None);
            }
            let res = dec.decode(&llr)?;
            let bit_errors =
                res.bits[..counted].iter().zip(&word.bits()[..counted]).filter(|(a, b)| a != b).count() as u64;
            Ok(Some(VariantOutcome { bit_errors, frame_error: bit_errors > 0, iterations: res.iterations_used }))
        })
        .collect()
}

fn make_decoders(cfg: &SimConfig) -> Vec<Decoder<'_>> {
    cfg.variants.iter().map(|&v| Decoder::new(&cfg.code.h, v, cfg.max_iterations)).collect()
}

/// Decodes one frame with every configured variant.
pub fn run_frame(cfg: &SimConfig, point: usize, frame: u64) -> Result<Vec<VariantOutcome>, SimError> {
    cfg.validate()?;
    let params = cfg.channel_params(point)?;
    let active = vec![true; cfg.variants.len()];
    let mut decoders = make_decoders(cfg);
    Ok(simulate_frame(cfg, &params, point, frame, &active, &mut decoders)?.into_iter().flatten().collect())
}

/// One (variant, Eb/N0) operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub variant: DecoderVariant,
    pub ebn0_db: f64,
    pub frames: u64,
    pub bits_counted: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub mean_iterations: f64,
    /// Stopped by `max_frames` before reaching `stop_frame_errors`.
    pub low_confidence: bool,
}

#[derive(Debug, Clone, Default)]
struct Accumulator {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    iterations: u64,
    done: bool,
}

impl Accumulator {
    fn add(&mut self, o: &VariantOutcome, stop: u64) {
        self.frames += 1;
        self.bit_errors += o.bit_errors;
        self.frame_errors += u64::from(o.frame_error);
        self.iterations += u64::from(o.iterations);
        if self.frame_errors >= stop {
            self.done = true;
        }
    }

    fn finish(&self, variant: DecoderVariant, ebn0_db: f64, bits_per_frame: u64, stop: u64) -> BerPoint {
        let bits_counted = self.frames * bits_per_frame;
        BerPoint {
            variant,
            ebn0_db,
            frames: self.frames,
            bits_counted,
            bit_errors: self.bit_errors,
            frame_errors: self.frame_errors,
            ber: self.bit_errors as f64 / bits_counted as f64,
            fer: self.frame_errors as f64 / self.frames as f64,
            mean_iterations: self.iterations as f64 / self.frames as f64,
            low_confidence: self.frame_errors < stop,
        }
    }
}

/// Runs every (Eb/N0, variant) point. Output is ordered by point, then by
/// variant in configuration order.
pub fn run_ber_sweep(cfg: &SimConfig) -> Result<Vec<BerPoint>, SimError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    let batch = (4 * pool.current_num_threads()).max(16) as u64;
    let bits_per_frame = cfg.counted_bits() as u64;
    let mut out = Vec::with_capacity(cfg.ebn0_db.len() * cfg.variants.len());

    for (point, &ebn0) in cfg.ebn0_db.iter().enumerate() {
        let params = cfg.channel_params(point)?;
        let mut acc = vec![Accumulator::default(); cfg.variants.len()];
        let mut next = 0u64;
        while next < cfg.max_frames && acc.iter().any(|a| !a.done) {
            let end = (next + batch).min(cfg.max_frames);
            let active: Vec<bool> = acc.iter().map(|a| !a.done).collect();
            let outcomes: Vec<_> = pool.install(|| {
                (next..end)
                    .into_par_iter()
                    .map_init(
                        || make_decoders(cfg),
                        |decs, frame| simulate_frame(cfg, &params, point, frame, &active, decs),
                    )
                    .collect::<Result<Vec<_>, _>>()
            })?;
            for frame in outcomes {
                for (a, o) in acc.iter_mut().zip(frame) {
                    if let (false, Some(o)) = (a.done, o) {
                        a.add(&o, cfg.stop_frame_errors);
                    }
                }
            }
            next = end;
        }
        out.extend(
            acc.iter()
                .zip(&cfg.variants)
                .map(|(a, &v)| a.finish(v, ebn0, bits_per_frame, cfg.stop_frame_errors)),
        );
    }
    Ok(out)
}
