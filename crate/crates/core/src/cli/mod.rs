//! Command implementations behind the `ldpc-lab` binary.
//!
//! Each command validates all of its inputs before simulating or writing
//! anything, so a failing command leaves no partial artifacts behind.

mod config;

pub use config::RunConfig;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use thiserror::Error;

use crate::channel::ModulationScheme;
use crate::code::{self, AddressTable, CodeError, LdpcCode, SparseParityCheck};
use crate::decoder::{DecodeError, Decoder, DecoderVariant};
use crate::sim::{self, ParamGrid, SimConfig, SimError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("config: missing required key `{0}`")]
    MissingKey(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    CodeFile { path: String, source: CodeError },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Resolves a code argument: a built-in id, a `*.alist` file, or an address-table file.
pub fn load_code(source: &str) -> Result<LdpcCode, CliError> {
    if code::BUILTIN_CODES.contains(&source) {
        return Ok(LdpcCode::builtin(source)?);
    }
    let path = Path::new(source);
    let text = read(path)?;
    let tag = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| source.to_string());
    let wrap = |source_err: CodeError| CliError::CodeFile { path: source.to_string(), source: source_err };
    if path.extension().is_some_and(|e| e == "alist") {
        let h = code::load_alist(&text).map_err(wrap)?;
        Ok(LdpcCode::from_matrix(h, tag).map_err(wrap)?)
    } else {
        let table = AddressTable::parse(&text, &tag).map_err(wrap)?;
        Ok(LdpcCode::from_table(&table).map_err(wrap)?)
    }
}

/// Re-derives the column view from the row view and checks every structural invariant.
pub fn verify_structure(h: &SparseParityCheck) -> Result<(), CodeError> {
    let rebuilt = SparseParityCheck::from_checks(h.n_vars(), h.check_adj().to_vec())?;
    if rebuilt.var_adj() != h.var_adj() {
        return Err(CodeError::Invalid("column adjacency disagrees with row adjacency".into()));
    }
    let mut seen = vec![false; h.n_edges()];
    for m in 0..h.n_checks() {
        for &n in h.check_vars(m) {
            let e = h.edge_index(m, n).ok_or_else(|| CodeError::Invalid(format!("edge ({m}, {n}) has no id")))?;
            if std::mem::replace(&mut seen[e], true) {
                return Err(CodeError::Invalid(format!("edge id {e} assigned twice")));
            }
        }
    }
    Ok(())
}

fn histogram_line(label: &str, degrees: &[usize]) -> String {
    let parts: Vec<String> =
        SparseParityCheck::degree_histogram(degrees).iter().map(|(d, c)| format!("{d}:{c}")).collect();
    format!("{label} degree histogram (degree:count): {}\n", parts.join(" "))
}

/// Structural summary of a code.
pub fn describe(code: &LdpcCode) -> String {
    let mut s = format!("{}\n", code.descriptor);
    let _ = writeln!(s, "edges: {}", code.h.n_edges());
    s.push_str(&histogram_line("column", &code.h.col_degrees()));
    s.push_str(&histogram_line("row", &code.h.row_degrees()));
    s
}

/// `gen-code`: builds a code and writes `<tag>.alist` into `out_dir`.
pub fn cmd_gen_code(source: &str, out_dir: &Path) -> Result<String, CliError> {
    let code = load_code(source)?;
    verify_structure(&code.h)?;
    let alist = code::to_alist(&code.h);
    create_dir(out_dir)?;
    let path = out_dir.join(format!("{}.alist", code.descriptor.family_tag));
    write(&path, &alist)?;
    Ok(format!("{}wrote {}\n", describe(&code), path.display()))
}

/// `validate`: loads a code and checks its invariants and, for eIRA codes, the encoder.
pub fn cmd_validate(source: &str) -> Result<String, CliError> {
    let code = load_code(source)?;
    verify_structure(&code.h)?;
    let mut s = describe(&code);
    let reparsed = code::load_alist(&code::to_alist(&code.h))?;
    if reparsed != code.h {
        return Err(CodeError::Invalid("alist round trip changed the matrix".into()).into());
    }
    s.push_str("alist round trip: ok\n");
    if let Some(enc) = &code.encoder {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let info: Vec<u8> = (0..enc.k()).map(|_| rng.random::<bool>() as u8).collect();
            if !code.h.is_codeword(enc.encode(&info)?.bits()) {
                return Err(CodeError::Invalid("encoder produced a non-codeword".into()).into());
            }
        }
        s.push_str("encoder/syndrome check (100 random words): ok\n");
    }
    Ok(s)
}

/// Parses an LLR file: one decimal value per line.
pub fn parse_llr_file(text: &str) -> Result<Vec<f64>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("LLR file line {}: invalid number `{}`", i + 1, l.trim())))
        })
        .collect()
}

/// `decode`: decodes one LLR vector and reports bits, convergence and iterations.
pub fn cmd_decode(code_source: &str, llr_path: &Path, variant: &str, max_iterations: u32) -> Result<String, CliError> {
    let variant: DecoderVariant = variant.parse()?;
    let code = load_code(code_source)?;
    let llr = parse_llr_file(&read(llr_path)?)?;
    let res = Decoder::new(&code.h, variant, max_iterations).decode(&llr)?;
    let bits: String = res.bits.iter().map(|b| char::from(b'0' + b)).collect();
    Ok(format!(
        "variant: {variant}\nconverged: {}\niterations: {}\nbits: {bits}\n",
        res.converged, res.iterations_used
    ))
}

/// Options shared by the simulation commands.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

fn resolve_run(config_path: &Path, opts: &RunOptions) -> Result<(RunConfig, SimConfig), CliError> {
    let text = read(config_path)?;
    let mut rc = RunConfig::parse(&text, config_path.parent())?;
    if let Some(seed) = opts.seed {
        rc.seed = Some(seed);
    }
    if rc.seed.is_none() {
        rc.seed = Some(rand::random());
    }
    if let Some(w) = opts.workers {
        rc.workers = w;
    }
    let code = load_code(&rc.code)?;
    let scheme = ModulationScheme::new(rc.modulation).map_err(SimError::from)?;
    let mut cfg = SimConfig::new(Arc::new(code), scheme, rc.variants.clone(), rc.ebn0_db.clone());
    cfg.max_iterations = rc.max_iterations;
    cfg.stop_frame_errors = rc.stop_frame_errors;
    cfg.max_frames = rc.max_frames;
    cfg.master_seed = rc.seed.expect("seed resolved above");
    cfg.ber_over = rc.ber_over;
    cfg.demap = rc.demapper;
    cfg.transmit = rc.transmit;
    cfg.workers = rc.workers;
    Ok((rc, cfg))
}

/// Manifest text: metadata comments followed by the fully resolved config,
/// so the manifest itself can be passed back as `--config`.
pub fn manifest(command: &str, rc: &RunConfig, cfg: &SimConfig) -> String {
    let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!(
        "# ldpc-lab run manifest\n# command: {command}\n# version: {VERSION}\n# timestamp: {ts}\n# code: {}\n# seed: {}\n{}",
        cfg.code.descriptor,
        cfg.master_seed,
        rc.to_text()
    )
}

/// `ber`: runs a sweep and writes `ber.csv`, `plot_ber.py` and `manifest.txt`.
pub fn cmd_ber(config_path: &Path, opts: &RunOptions) -> Result<String, CliError> {
    let (rc, cfg) = resolve_run(config_path, opts)?;
    if rc.variants.is_empty() {
        return Err(CliError::MissingKey("variants".into()));
    }
    cfg.validate()?;
    let points = sim::run_ber_sweep(&cfg)?;
    create_dir(&opts.out_dir)?;
    let csv = sim::emit_csv(&points);
    write(&opts.out_dir.join("ber.csv"), &csv)?;
    write(&opts.out_dir.join("plot_ber.py"), &sim::emit_plot_script(&points))?;
    write(&opts.out_dir.join("manifest.txt"), &manifest("ber", &rc, &cfg))?;
    Ok(format!("seed: {}\n{csv}", cfg.master_seed))
}

/// `optimize`: grid search over `alpha` or `step_s`; writes `optimize_<kind>.txt` and `manifest.txt`.
pub fn cmd_optimize(config_path: &Path, kind: &str, opts: &RunOptions) -> Result<String, CliError> {
    let (rc, mut cfg) = resolve_run(config_path, opts)?;
    let grid = match (kind, &rc.grid) {
        ("alpha", None) => ParamGrid::default_alpha(),
        ("alpha", Some(g)) => ParamGrid::Alpha(g.clone()),
        ("step_s", None) => ParamGrid::default_step(),
        ("step_s", Some(g)) => {
            let steps = g
                .iter()
                .map(|&x| {
                    if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                        Ok(x as u32)
                    } else {
                        Err(CliError::Usage(format!("step size {x} is not a positive integer")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            ParamGrid::Step(steps)
        }
        _ => return Err(CliError::Usage(format!("unknown parameter kind `{kind}`; expected alpha or step_s"))),
    };
    if grid.is_empty() {
        return Err(CliError::Usage("optimization grid is empty".into()));
    }
    // Validate with a placeholder variant; the grid supplies the real ones.
    cfg.variants = vec![DecoderVariant::MinSum];
    cfg.validate()?;
    let result = sim::optimize_parameter(&cfg, &grid)?;
    let report = result.report();
    create_dir(&opts.out_dir)?;
    write(&opts.out_dir.join(format!("optimize_{kind}.txt")), &report)?;
    write(&opts.out_dir.join("manifest.txt"), &manifest(&format!("optimize {kind}"), &rc, &cfg))?;
    Ok(format!("seed: {}\n{report}", cfg.master_seed))
}
