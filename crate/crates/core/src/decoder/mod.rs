//! Flooding belief-propagation decoder.
//!
//! Every iteration runs the horizontal step over all checks, then the
//! vertical step and the a-posteriori update over all variables, then a hard
//! decision and a syndrome check. The four variants differ only in the check
//! update:
//!
//! * `Spa`: tanh rule.
//! * `MinSum`: sign product times minimum magnitude.
//! * `ScaledMinSum`: min-sum output multiplied by a constant `alpha`.
//! * `SvsMinSum`: min-sum output multiplied by `1 - 2^-ceil(i/S)` in iteration `i`.

pub mod kernels;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::channel::LLR_MAX;
use crate::code::SparseParityCheck;
pub use kernels::{
    apply_scaling, check_update_minsum, check_update_minsum_batch, check_update_spa, check_update_spa_batch,
    hard_decision, posterior, svs_alpha, variable_update,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("LLR vector has length {got}, code has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("LLR at position {0} is not finite")]
    NonFinite(usize),
    #[error("max_iterations must be at least 1")]
    NoIterations,
    #[error("invalid decoder variant `{0}`")]
    BadVariant(String),
}

/// Decoding algorithm and its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderVariant {
    Spa,
    MinSum,
    ScaledMinSum { alpha: f64 },
    SvsMinSum { step: u32 },
}

impl DecoderVariant {
    pub fn scaled(alpha: f64) -> Result<Self, DecodeError> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self::ScaledMinSum { alpha })
        } else {
            Err(DecodeError::BadVariant(format!("scaled:alpha={alpha} (alpha must be in (0, 1])")))
        }
    }

    pub fn svs(step: u32) -> Result<Self, DecodeError> {
        if step >= 1 {
            Ok(Self::SvsMinSum { step })
        } else {
            Err(DecodeError::BadVariant("svs:S=0 (S must be at least 1)".into()))
        }
    }

    /// Scaling applied to check outputs in 1-based iteration `i`.
    pub fn alpha_at(&self, iteration: u32) -> f64 {
        match *self {
            Self::Spa | Self::MinSum => 1.0,
            Self::ScaledMinSum { alpha } => alpha,
            Self::SvsMinSum { step } => svs_alpha(iteration, step),
        }
    }
}

impl fmt::Display for DecoderVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Spa => write!(f, "spa"),
            Self::MinSum => write!(f, "minsum"),
            Self::ScaledMinSum { alpha } => write!(f, "scaled:alpha={alpha}"),
            Self::SvsMinSum { step } => write!(f, "svs:S={step}"),
        }
    }
}

impl FromStr for DecoderVariant {
    type Err = DecodeError;

    /// Accepts `spa`, `minsum`, `scaled:alpha=<x>` and `svs:S=<n>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DecodeError::BadVariant(s.to_string());
        let s = s.trim();
        match s.split_once(':') {
            None => match s {
                "spa" => Ok(Self::Spa),
                "minsum" => Ok(Self::MinSum),
                _ => Err(bad()),
            },
            Some(("scaled", param)) => {
                let v = param.strip_prefix("alpha=").ok_or_else(bad)?;
                Self::scaled(v.parse().map_err(|_| bad())?)
            }
            Some(("svs", param)) => {
                let v = param.strip_prefix("S=").ok_or_else(bad)?;
                Self::svs(v.parse().map_err(|_| bad())?)
            }
            Some(_) => Err(bad()),
        }
    }
}

/// Edge-indexed message buffers.
#[derive(Debug, Clone, Default)]
pub struct MessageState {
    /// Check-to-variable messages.
    pub r: Vec<f64>,
    /// Variable-to-check messages.
    pub q: Vec<f64>,
    /// A-posteriori LLR per variable.
    pub posterior: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub bits: Vec<u8>,
    pub converged: bool,
    pub iterations_used: u32,
    pub posterior: Vec<f64>,
}

/// Reusable decoder bound to one code.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    code: &'a SparseParityCheck,
    variant: DecoderVariant,
    max_iterations: u32,
    early_stop: bool,
    state: MessageState,
    bits: Vec<u8>,
    scratch: Vec<f64>,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a SparseParityCheck, variant: DecoderVariant, max_iterations: u32) -> Self {
        Self {
            code,
            variant,
            max_iterations,
            early_stop: true,
            state: MessageState {
                r: vec![0.0; code.n_edges()],
                q: vec![0.0; code.n_edges()],
                posterior: vec![0.0; code.n_vars()],
            },
            bits: vec![0; code.n_vars()],
            scratch: Vec::new(),
        }
    }

    /// With `false`, always run `max_iterations` iterations instead of stopping
    /// at the first zero syndrome.
    pub fn early_stop(mut self, enabled: bool) -> Self {
        self.early_stop = enabled;
        self
    }

    pub fn variant(&self) -> DecoderVariant {
        self.variant
    }

    /// Messages left by the last call to [`decode`](Self::decode).
    pub fn state(&self) -> &MessageState {
        &self.state
    }

    pub fn decode(&mut self, llr: &[f64]) -> Result<DecodeResult, DecodeError> {
        let code = self.code;
        if llr.len() != code.n_vars() {
            return Err(DecodeError::LengthMismatch { expected: code.n_vars(), got: llr.len() });
        }
        if let Some(pos) = llr.iter().position(|x| !x.is_finite()) {
            return Err(DecodeError::NonFinite(pos));
        }
        if self.max_iterations == 0 {
            return Err(DecodeError::NoIterations);
        }

        let MessageState { r, q, posterior } = &mut self.state;
        for (e, qe) in q.iter_mut().enumerate() {
            *qe = llr[code.edge_var(e)];
        }

        let mut converged = false;
        let mut iteration = 0;
        while iteration < self.max_iterations {
            iteration += 1;

            // Horizontal step.
            let alpha = self.variant.alpha_at(iteration);
            for m in 0..code.n_checks() {
                let edges = code.check_edges(m);
                let (qs, rs) = (&q[edges.clone()], &mut r[edges]);
                match self.variant {
                    DecoderVariant::Spa => check_update_spa_batch(qs, rs, &mut self.scratch),
                    _ => check_update_minsum_batch(qs, rs),
                }
                if alpha != 1.0 {
                    for x in rs.iter_mut() {
                        *x = apply_scaling(*x, alpha);
                    }
                }
            }

            // Vertical step, posterior and hard decision.
            for n in 0..code.n_vars() {
                let edges = code.var_edges(n);
                let total = llr[n] + edges.iter().map(|&e| r[e]).sum::<f64>();
                for &e in edges {
                    q[e] = (total - r[e]).clamp(-LLR_MAX, LLR_MAX);
                }
                posterior[n] = total.clamp(-LLR_MAX, LLR_MAX);
                self.bits[n] = hard_decision(posterior[n]);
            }

            converged = code.is_codeword(&self.bits);
            if converged && self.early_stop {
                break;
            }
        }

        Ok(DecodeResult {
            bits: self.bits.clone(),
            converged,
            iterations_used: iteration,
            posterior: posterior.clone(),
        })
    }
}

/// One-shot decode with syndrome-based early termination.
pub fn decode(
    llr: &[f64],
    code: &SparseParityCheck,
    variant: DecoderVariant,
    max_iterations: u32,
) -> Result<DecodeResult, DecodeError> {
    Decoder::new(code, variant, max_iterations).decode(llr)
}
