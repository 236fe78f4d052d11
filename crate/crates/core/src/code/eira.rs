//! Extended irregular repeat-accumulate (eIRA) codes as used by DVB-T2.
//!
//! The information part of H is described by an address table: line `t`
//! lists base check addresses for the group of `group_size` information bits
//! `t * group_size .. (t + 1) * group_size`. Info bit `i` connects to checks
//! `(x + (i mod group_size) * q) mod (n - k)` for each base address `x`, with
//! `q = (n - k) / group_size`. The parity part is a dual-diagonal staircase:
//! check `j` contains parity bits `j` and `j - 1`.

use super::{CodeDescriptor, CodeError, Codeword, SparseParityCheck};

/// Identifiers of the shipped DVB-T2 tables.
pub const BUILTIN_CODES: &[&str] =
    &["dvbt2-short-r14", "dvbt2-short-r12", "dvbt2-short-r34", "dvbt2-normal-r12", "dvbt2-normal-r34"];

fn builtin_text(id: &str) -> Option<&'static str> {
    Some(match id {
        "dvbt2-short-r14" => include_str!("../../data/dvbt2-short-r14.txt"),
        "dvbt2-short-r12" => include_str!("../../data/dvbt2-short-r12.txt"),
        "dvbt2-short-r34" => include_str!("../../data/dvbt2-short-r34.txt"),
        "dvbt2-normal-r12" => include_str!("../../data/dvbt2-normal-r12.txt"),
        "dvbt2-normal-r34" => include_str!("../../data/dvbt2-normal-r34.txt"),
        _ => return None,
    })
}

/// Loads one of the [`BUILTIN_CODES`] tables.
pub fn builtin_table(id: &str) -> Result<AddressTable, CodeError> {
    let text = builtin_text(id).ok_or_else(|| CodeError::UnknownBuiltin(id.to_string()))?;
    AddressTable::parse(text, id)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AddressTable {
    pub descriptor: CodeDescriptor,
    pub group_size: usize,
    pub groups: Vec<Vec<usize>>,
}

impl AddressTable {
    pub fn new(n: usize, k: usize, group_size: usize, groups: Vec<Vec<usize>>, tag: &str) -> Result<Self, CodeError> {
        let mut descriptor = CodeDescriptor::new(n, k, tag)?;
        let parity = n - k;
        if group_size == 0 || !k.is_multiple_of(group_size) || !parity.is_multiple_of(group_size) {
            return Err(CodeError::Invalid(format!(
                "group size {group_size} must divide both k={k} and n-k={parity}"
            )));
        }
        if groups.len() != k / group_size {
            return Err(CodeError::Invalid(format!(
                "expected {} address lines, found {}",
                k / group_size,
                groups.len()
            )));
        }
        for (t, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(CodeError::Invalid(format!("address line {} is empty", t + 1)));
            }
            if let Some(&x) = g.iter().find(|&&x| x >= parity) {
                return Err(CodeError::Invalid(format!("address {x} on line {} is not below n-k={parity}", t + 1)));
            }
        }
        descriptor.q_factor = Some(parity / group_size);
        Ok(Self { descriptor, group_size, groups })
    }

    /// Parses `n k group_size` followed by one line of base addresses per group.
    pub fn parse(text: &str, tag: &str) -> Result<Self, CodeError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_line = |(i, l): (usize, &str)| -> Result<(usize, Vec<usize>), CodeError> {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| CodeError::Parse { line: i + 1, msg: format!("invalid number `{tok}`") })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(|v| (i + 1, v))
        };
        let (hline, header) = match lines.next() {
            Some(l) => parse_line(l)?,
            None => return Err(CodeError::Parse { line: 1, msg: "empty address table".into() }),
        };
        let [n, k, group_size] = header[..] else {
            return Err(CodeError::Parse { line: hline, msg: "header must be `n k group_size`".into() });
        };
        let mut groups = Vec::new();
        let mut last_line = hline;
        for l in lines {
            let (line, addrs) = parse_line(l)?;
            last_line = line;
            groups.push(addrs);
        }
        Self::new(n, k, group_size, groups, tag).map_err(|e| match e {
            CodeError::Invalid(msg) => CodeError::Parse { line: last_line, msg },
            other => other,
        })
    }

    pub fn n(&self) -> usize {
        self.descriptor.n
    }

    pub fn k(&self) -> usize {
        self.descriptor.k
    }

    pub fn n_parity(&self) -> usize {
        self.descriptor.n - self.descriptor.k
    }

    pub fn q_factor(&self) -> usize {
        self.n_parity() / self.group_size
    }

    /// Checks hit by information bit `i`, in table order.
    pub fn info_checks(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let m = self.n_parity();
        let shift = (i % self.group_size) * self.q_factor();
        self.groups[i / self.group_size].iter().map(move |&x| (x + shift) % m)
    }
}

/// Expands an address table into the full parity-check matrix.
pub fn build_eira(table: &AddressTable) -> Result<SparseParityCheck, CodeError> {
    let k = table.k();
    let m = table.n_parity();
    let mut checks = vec![Vec::new(); m];
    for i in 0..k {
        for c in table.info_checks(i) {
            if checks[c].last() == Some(&i) {
                return Err(CodeError::DuplicateEdge { check: c, var: i });
            }
            checks[c].push(i);
        }
    }
    for (j, row) in checks.iter_mut().enumerate() {
        if j > 0 {
            row.push(k + j - 1);
        }
        row.push(k + j);
    }
    SparseParityCheck::from_checks(table.n(), checks)
}

/// Systematic encoder: codeword = info bits followed by parity bits.
#[derive(Debug, Clone)]
pub struct EiraEncoder {
    k: usize,
    n_parity: usize,
    // Check indices hit by each info bit.
    info_checks: Vec<Vec<u32>>,
}

impl EiraEncoder {
    pub fn new(table: &AddressTable) -> Self {
        let info_checks = (0..table.k()).map(|i| table.info_checks(i).map(|c| c as u32).collect()).collect();
        Self { k: table.k(), n_parity: table.n_parity(), info_checks }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.k + self.n_parity
    }

    pub fn encode(&self, info: &[u8]) -> Result<Codeword, CodeError> {
        if info.len() != self.k {
            return Err(CodeError::LengthMismatch { expected: self.k, got: info.len() });
        }
        let mut parity = vec![0u8; self.n_parity];
        for (bit, checks) in info.iter().zip(&self.info_checks) {
            if bit & 1 == 1 {
                for &c in checks {
                    parity[c as usize] ^= 1;
                }
            }
        }
        for j in 1..self.n_parity {
            parity[j] ^= parity[j - 1];
        }
        let mut bits = Vec::with_capacity(self.n());
        bits.extend(info.iter().map(|b| b & 1));
        bits.extend(parity);
        Ok(Codeword(bits))
    }
}
