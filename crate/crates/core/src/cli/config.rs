//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are
//! comma-separated. Unknown or repeated keys are errors.
//!
//! | key                 | value                                             | default       |
//! |---------------------|---------------------------------------------------|---------------|
//! | `code`              | built-in id, `*.alist` path or address-table path | required      |
//! | `modulation`        | constellation order: 2, 4, 16, 64 or 256          | required      |
//! | `variants`          | e.g. `spa, minsum, scaled:alpha=0.9375, svs:S=10` | required for `ber` |
//! | `ebn0_db`           | list of Eb/N0 values in dB                        | required      |
//! | `max_iterations`    | integer ≥ 1                                       | 50            |
//! | `stop_frame_errors` | integer ≥ 1                                       | 100           |
//! | `max_frames`        | integer ≥ 1                                       | 100000        |
//! | `seed`              | u64                                               | drawn at random |
//! | `ber_over`          | `info_bits` or `all_bits`                         | `info_bits`   |
//! | `demapper`          | `exact` or `maxlog`                               | `exact`       |
//! | `transmit`          | `random` or `all-zero`                            | `random`      |
//! | `workers`           | thread count, 0 = all cores                       | 0             |
//! | `grid`              | optimization grid (alpha values or step sizes)    | default grid  |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::channel::DemapMode;
use crate::decoder::DecoderVariant;
use crate::sim::{format_g6, BerOver, Transmit};

const KEYS: &[&str] = &[
    "code",
    "modulation",
    "variants",
    "ebn0_db",
    "max_iterations",
    "stop_frame_errors",
    "max_frames",
    "seed",
    "ber_over",
    "demapper",
    "transmit",
    "workers",
    "grid",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub code: String,
    pub modulation: usize,
    pub variants: Vec<DecoderVariant>,
    pub ebn0_db: Vec<f64>,
    pub max_iterations: u32,
    pub stop_frame_errors: u64,
    pub max_frames: u64,
    pub seed: Option<u64>,
    pub ber_over: BerOver,
    pub demapper: DemapMode,
    pub transmit: Transmit,
    pub workers: usize,
    pub grid: Option<Vec<f64>>,
}

fn list<T>(value: &str, parse: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse).collect()
}

impl RunConfig {
    /// Parses a config. Relative code paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self, CliError> {
        let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| CliError::Config { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if entries.insert(key, (i + 1, value.trim())).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }

        let get = |key: &str| entries.get(key).copied();
        let required = |key: &str| {
            get(key).ok_or_else(|| CliError::MissingKey(key.to_string()))
        };
        fn parsed<T>(entry: Option<(usize, &str)>, default: T, parse: impl Fn(&str) -> Option<T>, what: &str) -> Result<T, CliError> {
            match entry {
                None => Ok(default),
                Some((line, v)) => {
                    parse(v).ok_or_else(|| CliError::Config { line, msg: format!("invalid {what} `{v}`") })
                }
            }
        }

        let (_, code) = required("code")?;
        let code = resolve_code_path(code, base_dir);
        let (mline, m) = required("modulation")?;
        let modulation = parsed(Some((mline, m)), 0, |s| s.parse().ok(), "modulation order")?;
        let variants = match get("variants") {
            None => Vec::new(),
            Some((line, v)) => list(v, |s| s.parse::<DecoderVariant>().ok())
                .ok_or_else(|| CliError::Config { line, msg: format!("invalid variant list `{v}`") })?,
        };
        let (eline, e) = required("ebn0_db")?;
        let ebn0_db = parsed(Some((eline, e)), Vec::new(), |s| list(s, |x| x.parse::<f64>().ok()), "Eb/N0 list")?;
        if ebn0_db.is_empty() {
            return Err(CliError::Config { line: eline, msg: "ebn0_db list is empty".into() });
        }

        Ok(Self {
            code,
            modulation,
            variants,
            ebn0_db,
            max_iterations: parsed(get("max_iterations"), 50, |s| s.parse().ok(), "max_iterations")?,
            stop_frame_errors: parsed(get("stop_frame_errors"), 100, |s| s.parse().ok(), "stop_frame_errors")?,
            max_frames: parsed(get("max_frames"), 100_000, |s| s.parse().ok(), "max_frames")?,
            seed: parsed(get("seed"), None, |s| s.parse().ok().map(Some), "seed")?,
            ber_over: parsed(
                get("ber_over"),
                BerOver::InfoBits,
                |s| match s {
                    "info_bits" => Some(BerOver::InfoBits),
                    "all_bits" => Some(BerOver::AllBits),
                    _ => None,
                },
                "ber_over",
            )?,
            demapper: parsed(
                get("demapper"),
                DemapMode::Exact,
                |s| match s {
                    "exact" => Some(DemapMode::Exact),
                    "maxlog" => Some(DemapMode::MaxLog),
                    _ => None,
                },
                "demapper",
            )?,
            transmit: parsed(
                get("transmit"),
                Transmit::RandomCodewords,
                |s| match s {
                    "random" => Some(Transmit::RandomCodewords),
                    "all-zero" => Some(Transmit::AllZero),
                    _ => None,
                },
                "transmit",
            )?,
            workers: parsed(get("workers"), 0, |s| s.parse().ok(), "workers")?,
            grid: parsed(get("grid"), None, |s| list(s, |x| x.parse::<f64>().ok()).map(Some), "grid")?,
        })
    }

    /// Canonical text form; parsing it yields `self` back.
    pub fn to_text(&self) -> String {
        let join_f = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut s = String::new();
        s.push_str(&format!("code = {}\n", self.code));
        s.push_str(&format!("modulation = {}\n", self.modulation));
        if !self.variants.is_empty() {
            let v: Vec<String> = self.variants.iter().map(ToString::to_string).collect();
            s.push_str(&format!("variants = {}\n", v.join(", ")));
        }
        s.push_str(&format!("ebn0_db = {}\n", join_f(&self.ebn0_db)));
        s.push_str(&format!("max_iterations = {}\n", self.max_iterations));
        s.push_str(&format!("stop_frame_errors = {}\n", self.stop_frame_errors));
        s.push_str(&format!("max_frames = {}\n", self.max_frames));
        if let Some(seed) = self.seed {
            s.push_str(&format!("seed = {seed}\n"));
        }
        let ber_over = match self.ber_over {
            BerOver::InfoBits => "info_bits",
            BerOver::AllBits => "all_bits",
        };
        s.push_str(&format!("ber_over = {ber_over}\n"));
        let demapper = match self.demapper {
            DemapMode::Exact => "exact",
            DemapMode::MaxLog => "maxlog",
        };
        s.push_str(&format!("demapper = {demapper}\n"));
        let transmit = match self.transmit {
            Transmit::RandomCodewords => "random",
            Transmit::AllZero => "all-zero",
        };
        s.push_str(&format!("transmit = {transmit}\n"));
        s.push_str(&format!("workers = {}\n", self.workers));
        if let Some(g) = &self.grid {
            s.push_str(&format!("grid = {}\n", join_f(g)));
        }
        s
    }

    /// Eb/N0 list rendered for humans.
    pub fn ebn0_summary(&self) -> String {
        self.ebn0_db.iter().map(|x| format_g6(*x)).collect::<Vec<_>>().join(" ")
    }
}

/// Built-in ids pass through; anything else is treated as a path relative to `base_dir`.
fn resolve_code_path(code: &str, base_dir: Option<&Path>) -> String {
    if crate::code::BUILTIN_CODES.contains(&code) {
        return code.to_string();
    }
    let p = PathBuf::from(code);
    let p = match base_dir {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    };
    std::fs::canonicalize(&p).unwrap_or(p).to_string_lossy().into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sweep
code = dvbt2-short-r12
modulation = 256
variants = spa, svs:S=10, scaled:alpha=0.9375, minsum
ebn0_db = 8.0, 8.2, 8.4
seed = 7
";

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::parse(SAMPLE, None).unwrap();
        assert_eq!(c.code, "dvbt2-short-r12");
        assert_eq!(c.modulation, 256);
        assert_eq!(c.variants.len(), 4);
        assert_eq!(c.variants[1], DecoderVariant::SvsMinSum { step: 10 });
        assert_eq!(c.ebn0_db, vec![8.0, 8.2, 8.4]);
        assert_eq!(c.max_iterations, 50);
        assert_eq!(c.stop_frame_errors, 100);
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.ber_over, BerOver::InfoBits);
        assert_eq!(c.grid, None);
    }

    #[test]
    fn canonical_text_round_trips() {
        let mut c = RunConfig::parse(SAMPLE, None).unwrap();
        c.grid = Some(vec![0.5, 0.9375]);
        c.demapper = DemapMode::MaxLog;
        assert_eq!(RunConfig::parse(&c.to_text(), None).unwrap(), c);
    }

    #[test]
    fn errors_name_the_line() {
        let text = format!("{SAMPLE}max_iteration = 50\n");
        let err = RunConfig::parse(&text, None).unwrap_err();
        assert!(matches!(err, CliError::Config { line: 7, ref msg } if msg.contains("unknown key")), "{err}");
        let text = format!("{SAMPLE}seed = 8\n");
        assert!(matches!(RunConfig::parse(&text, None), Err(CliError::Config { line: 7, .. })));
        let text = SAMPLE.replace("svs:S=10", "svs:S=ten");
        assert!(matches!(RunConfig::parse(&text, None), Err(CliError::Config { line: 4, .. })));
        let text = SAMPLE.replace("modulation = 256\n", "");
        assert!(matches!(RunConfig::parse(&text, None), Err(CliError::MissingKey(k)) if k == "modulation"));
        assert!(matches!(RunConfig::parse("code dvb\n", None), Err(CliError::Config { line: 1, .. })));
    }
}
