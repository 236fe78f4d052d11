//! Grid search for the constant scaling factor or the SVS step size.
//!
//! Every grid value becomes one decoder variant in a single paired sweep over
//! the probe Eb/N0 list, so all candidates see identical channel
//! realizations. The objective is the mean BER over the probes; the smallest
//! objective wins, ties going to the larger parameter value.

use super::{run_ber_sweep, BerPoint, SimConfig, SimError};
use crate::decoder::DecoderVariant;

#[derive(Debug, Clone, PartialEq)]
pub enum ParamGrid {
    Alpha(Vec<f64>),
    Step(Vec<u32>),
}

impl ParamGrid {
    /// `{8/16, 9/16, ..., 16/16}`.
    pub fn default_alpha() -> Self {
        Self::Alpha((8..=16).map(|k| k as f64 / 16.0).collect())
    }

    /// `{1, ..., 20}`.
    pub fn default_step() -> Self {
        Self::Step((1..=20).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Alpha(v) => v.len(),
            Self::Step(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Alpha(_) => "alpha",
            Self::Step(_) => "step_s",
        }
    }

    fn variants(&self) -> Result<Vec<(f64, DecoderVariant)>, SimError> {
        Ok(match self {
            Self::Alpha(v) => {
                v.iter().map(|&a| Ok((a, DecoderVariant::scaled(a)?))).collect::<Result<_, SimError>>()?
            }
            Self::Step(v) => {
                v.iter().map(|&s| Ok((s as f64, DecoderVariant::svs(s)?))).collect::<Result<_, SimError>>()?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridEntry {
    pub value: f64,
    pub variant: DecoderVariant,
    /// One point per probe Eb/N0, in probe order.
    pub points: Vec<BerPoint>,
    /// Mean BER over the probes.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub kind: &'static str,
    pub probes: Vec<f64>,
    pub table: Vec<GridEntry>,
    pub best: f64,
    pub best_variant: DecoderVariant,
}

impl OptimizationResult {
    /// Plain-text report with the full grid/BER table.
    pub fn report(&self) -> String {
        let mut s = format!("parameter: {}\nprobes_db:", self.kind);
        for p in &self.probes {
            s.push_str(&format!(" {}", super::format_g6(*p)));
        }
        s.push_str("\nvalue,variant,objective");
        for p in &self.probes {
            s.push_str(&format!(",ber@{}", super::format_g6(*p)));
        }
        s.push('\n');
        for e in &self.table {
            s.push_str(&format!("{},{},{}", super::format_g6(e.value), e.variant, super::format_g6(e.objective)));
            for p in &e.points {
                s.push_str(&format!(",{}", super::format_g6(p.ber)));
            }
            s.push('\n');
        }
        s.push_str(&format!("best: {} ({})\n", super::format_g6(self.best), self.best_variant));
        s
    }
}

/// Picks the entry with the smallest objective, preferring the larger value on ties.
fn pick_best(table: &[GridEntry]) -> &GridEntry {
    table
        .iter()
        .reduce(|best, e| {
            if e.objective < best.objective || (e.objective == best.objective && e.value > best.value) {
                e
            } else {
                best
            }
        })
        .expect("non-empty grid")
}

/// Simulates every grid value at the configured Eb/N0 probes; the variants
/// already in `cfg` are replaced by the grid.
pub fn optimize_parameter(cfg: &SimConfig, grid: &ParamGrid) -> Result<OptimizationResult, SimError> {
    if grid.is_empty() {
        return Err(SimError::Invalid("optimization grid is empty".into()));
    }
    let candidates = grid.variants()?;
    let mut sweep_cfg = cfg.clone();
    sweep_cfg.variants = candidates.iter().map(|&(_, v)| v).collect();
    let points = run_ber_sweep(&sweep_cfg)?;

    let n_var = candidates.len();
    let table: Vec<GridEntry> = candidates
        .iter()
        .enumerate()
        .map(|(i, &(value, variant))| {
            let pts: Vec<BerPoint> = points.iter().skip(i).step_by(n_var).cloned().collect();
            let objective = pts.iter().map(|p| p.ber).sum::<f64>() / pts.len() as f64;
            GridEntry { value, variant, points: pts, objective }
        })
        .collect();
    let best = pick_best(&table);
    Ok(OptimizationResult {
        kind: grid.kind(),
        probes: cfg.ebn0_db.clone(),
        best: best.value,
        best_variant: best.variant,
        table,
    })
}
