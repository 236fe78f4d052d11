//! Sparse parity-check matrices, eIRA construction and encoding.
//!
//! A [`SparseParityCheck`] stores the Tanner graph of a binary LDPC code as a
//! pair of sorted adjacency lists. Edges are numbered check-major: the edges
//! of check 0 come first (in ascending variable order), then those of check 1,
//! and so on. Decoder message buffers are indexed by these edge ids.

mod alist;
mod eira;

pub use alist::{load_alist, to_alist};
pub use eira::{build_eira, builtin_table, AddressTable, EiraEncoder, BUILTIN_CODES};

use std::fmt;

use thiserror::Error;

/// Errors raised while loading, building or using a code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate connection between check {check} and variable {var}")]
    DuplicateEdge { check: usize, var: usize },
    #[error("invalid code: {0}")]
    Invalid(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown built-in code `{0}`")]
    UnknownBuiltin(String),
}

/// Binary parity-check matrix stored as a Tanner graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseParityCheck {
    n_vars: usize,
    check_adj: Vec<Vec<usize>>,
    var_adj: Vec<Vec<usize>>,
    // Edge ids of check m are check_start[m]..check_start[m + 1].
    check_start: Vec<usize>,
    // Edge variable for each edge id.
    edge_var: Vec<usize>,
    // For variable n, the edge ids of its connections, in the order of var_adj[n].
    var_edges: Vec<Vec<usize>>,
}

impl SparseParityCheck {
    /// Builds a matrix from per-check variable lists.
    ///
    /// Lists are sorted; duplicates, out-of-range indices, and empty rows or
    /// columns are rejected.
    pub fn from_checks(n_vars: usize, checks: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        if n_vars == 0 || checks.is_empty() {
            return Err(CodeError::Invalid("matrix must have at least one row and one column".into()));
        }
        let mut check_adj = checks;
        let mut var_adj = vec![Vec::new(); n_vars];
        for (m, row) in check_adj.iter_mut().enumerate() {
            row.sort_unstable();
            if row.is_empty() {
                return Err(CodeError::Invalid(format!("check {m} has no connections")));
            }
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(CodeError::DuplicateEdge { check: m, var: w[0] });
                }
            }
            for &n in row.iter() {
                if n >= n_vars {
                    return Err(CodeError::Invalid(format!(
                        "check {m} references variable {n}, but there are only {n_vars} variables"
                    )));
                }
                var_adj[n].push(m);
            }
        }
        if let Some(n) = var_adj.iter().position(|c| c.is_empty()) {
            return Err(CodeError::Invalid(format!("variable {n} has no connections")));
        }

        let mut check_start = Vec::with_capacity(check_adj.len() + 1);
        let mut edge_var = Vec::new();
        let mut var_edges = vec![Vec::new(); n_vars];
        check_start.push(0);
        for row in &check_adj {
            for &n in row {
                var_edges[n].push(edge_var.len());
                edge_var.push(n);
            }
            check_start.push(edge_var.len());
        }

        Ok(Self { n_vars, check_adj, var_adj, check_start, edge_var, var_edges })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Variables connected to check `m`, ascending.
    pub fn check_vars(&self, m: usize) -> &[usize] {
        &self.check_adj[m]
    }

    /// Checks connected to variable `n`, ascending.
    pub fn var_checks(&self, n: usize) -> &[usize] {
        &self.var_adj[n]
    }

    pub fn check_adj(&self) -> &[Vec<usize>] {
        &self.check_adj
    }

    pub fn var_adj(&self) -> &[Vec<usize>] {
        &self.var_adj
    }

    /// Range of edge ids belonging to check `m`.
    pub fn check_edges(&self, m: usize) -> std::ops::Range<usize> {
        self.check_start[m]..self.check_start[m + 1]
    }

    /// Edge ids of variable `n`, in the same order as [`var_checks`](Self::var_checks).
    pub fn var_edges(&self, n: usize) -> &[usize] {
        &self.var_edges[n]
    }

    pub fn edge_var(&self, e: usize) -> usize {
        self.edge_var[e]
    }

    /// Dense edge id of the connection `(m, n)`, if present.
    pub fn edge_index(&self, m: usize, n: usize) -> Option<usize> {
        let row = self.check_adj.get(m)?;
        row.binary_search(&n).ok().map(|pos| self.check_start[m] + pos)
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        self.var_adj.iter().map(Vec::len).collect()
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        self.check_adj.iter().map(Vec::len).collect()
    }

    /// Parity of each check over `bits`.
    pub fn syndrome(&self, bits: &[u8]) -> Result<Syndrome, CodeError> {
        if bits.len() != self.n_vars {
            return Err(CodeError::LengthMismatch { expected: self.n_vars, got: bits.len() });
        }
        let bits: Vec<u8> = self
            .check_adj
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &n| acc ^ (bits[n] & 1)))
            .collect();
        let is_zero = bits.iter().all(|&b| b == 0);
        Ok(Syndrome { is_zero, bits })
    }

    /// Same as `syndrome(bits)?.is_zero`, without allocating.
    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n_vars
            && self
                .check_adj
                .iter()
                .all(|row| row.iter().fold(0u8, |acc, &n| acc ^ (bits[n] & 1)) == 0)
    }

    /// Degree histogram as `(degree, count)` pairs, ascending by degree.
    pub fn degree_histogram(degrees: &[usize]) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for &d in degrees {
            *hist.entry(d).or_insert(0usize) += 1;
        }
        hist.into_iter().collect()
    }
}

/// Result of a syndrome computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome {
    pub is_zero: bool,
    pub bits: Vec<u8>,
}

/// Length and rate of a code plus a free-form family label.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeDescriptor {
    pub n: usize,
    pub k: usize,
    pub family_tag: String,
    /// `(n - k) / group_size` for eIRA codes.
    pub q_factor: Option<usize>,
}

impl CodeDescriptor {
    pub fn new(n: usize, k: usize, family_tag: impl Into<String>) -> Result<Self, CodeError> {
        if k == 0 || k >= n {
            return Err(CodeError::Invalid(format!("need 0 < k < n, got n={n}, k={k}")));
        }
        Ok(Self { n, k, family_tag: family_tag.into(), q_factor: None })
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

impl fmt::Display for CodeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: N={} K={} M={} R={:.6}", self.family_tag, self.n, self.k, self.n - self.k, self.rate())?;
        if let Some(q) = self.q_factor {
            write!(f, " q={q}")?;
        }
        Ok(())
    }
}

/// A codeword: `n` bits, each 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword(pub Vec<u8>);

impl Codeword {
    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A code ready for simulation: its matrix, descriptor and, for eIRA codes, an encoder.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    pub h: SparseParityCheck,
    pub descriptor: CodeDescriptor,
    pub encoder: Option<EiraEncoder>,
}

impl LdpcCode {
    pub fn from_table(table: &AddressTable) -> Result<Self, CodeError> {
        let h = build_eira(table)?;
        Ok(Self { h, descriptor: table.descriptor.clone(), encoder: Some(EiraEncoder::new(table)) })
    }

    /// Wraps a bare matrix. `k` is taken as `N - M`, which assumes full rank.
    pub fn from_matrix(h: SparseParityCheck, family_tag: impl Into<String>) -> Result<Self, CodeError> {
        let n = h.n_vars();
        let k = n.saturating_sub(h.n_checks());
        let descriptor = CodeDescriptor::new(n, k, family_tag)?;
        Ok(Self { h, descriptor, encoder: None })
    }

    pub fn builtin(id: &str) -> Result<Self, CodeError> {
        Self::from_table(&builtin_table(id)?)
    }
}
