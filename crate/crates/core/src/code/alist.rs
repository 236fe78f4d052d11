//! MacKay alist interchange format.
//!
//! ```text
//! N M
//! max_col_degree max_row_degree
//! <N column degrees>
//! <M row degrees>
//! <N lines: 1-based check indices of each column, zero padded>
//! <M lines: 1-based variable indices of each row, zero padded>
//! ```

use super::{CodeError, SparseParityCheck};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-blank line as `(1-based line number, numbers)`.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), CodeError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| CodeError::Parse {
                        line: i + 1,
                        msg: format!("expected a non-negative integer in {what}, found `{tok}`"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((i + 1, nums));
        }
        Err(CodeError::Parse { line: self.last + 1, msg: format!("unexpected end of file, expected {what}") })
    }

    fn expect_count(&mut self, what: &str, count: usize) -> Result<(usize, Vec<usize>), CodeError> {
        let (line, nums) = self.next_numbers(what)?;
        if nums.len() != count {
            return Err(CodeError::Parse {
                line,
                msg: format!("{what}: expected {count} values, found {}", nums.len()),
            });
        }
        Ok((line, nums))
    }
}

/// Reads one adjacency line: `degree` 1-based indices below `bound`, then zeros.
fn adjacency_line(
    lines: &mut Lines<'_>,
    what: &str,
    degree: usize,
    max_degree: usize,
    bound: usize,
) -> Result<(usize, Vec<usize>), CodeError> {
    let (line, nums) = lines.next_numbers(what)?;
    if nums.len() > max_degree {
        return Err(CodeError::Parse {
            line,
            msg: format!("{what}: {} entries exceed the declared maximum degree {max_degree}", nums.len()),
        });
    }
    let listed = nums.iter().take_while(|&&x| x != 0).count();
    if nums[listed..].iter().any(|&x| x != 0) {
        return Err(CodeError::Parse { line, msg: format!("{what}: non-zero index after zero padding") });
    }
    if listed != degree {
        return Err(CodeError::Parse {
            line,
            msg: format!("{what}: declared degree {degree} but {listed} entries listed"),
        });
    }
    let mut out = Vec::with_capacity(degree);
    for &x in &nums[..listed] {
        if x > bound {
            return Err(CodeError::Parse { line, msg: format!("{what}: index {x} out of range 1..={bound}") });
        }
        out.push(x - 1);
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(CodeError::Parse { line, msg: format!("{what}: duplicate index") });
    }
    Ok((line, out))
}

/// Parses an alist file.
pub fn load_alist(text: &str) -> Result<SparseParityCheck, CodeError> {
    let mut lines = Lines::new(text);
    let (l1, dims) = lines.expect_count("header `N M`", 2)?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(CodeError::Parse { line: l1, msg: "N and M must be positive".into() });
    }
    let (l2, maxes) = lines.expect_count("maximum degrees", 2)?;
    let (max_col, max_row) = (maxes[0], maxes[1]);
    let (l3, col_deg) = lines.expect_count("column degrees", n)?;
    let (l4, row_deg) = lines.expect_count("row degrees", m)?;

    for (line, degs, max, kind) in [(l3, &col_deg, max_col, "column"), (l4, &row_deg, max_row, "row")] {
        if let Some(pos) = degs.iter().position(|&d| d == 0 || d > max) {
            return Err(CodeError::Parse {
                line,
                msg: format!("{kind} {} has degree {} outside 1..={max}", pos + 1, degs[pos]),
            });
        }
        if degs.iter().copied().max() != Some(max) {
            return Err(CodeError::Parse {
                line: l2,
                msg: format!("declared maximum {kind} degree {max} does not match the degree list"),
            });
        }
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(CodeError::Parse { line: l4, msg: "row and column degree sums differ".into() });
    }

    let mut cols = Vec::with_capacity(n);
    for (j, &d) in col_deg.iter().enumerate() {
        let (line, c) = adjacency_line(&mut lines, &format!("column {}", j + 1), d, max_col, m)?;
        cols.push((line, c));
    }
    let mut rows = Vec::with_capacity(m);
    for (i, &d) in row_deg.iter().enumerate() {
        let (line, r) = adjacency_line(&mut lines, &format!("row {}", i + 1), d, max_row, n)?;
        rows.push((line, r));
    }

    // Cross-check the two views edge by edge.
    let mut from_rows = vec![Vec::new(); n];
    for (i, (_, r)) in rows.iter().enumerate() {
        for &v in r {
            from_rows[v].push(i);
        }
    }
    for (j, (line, c)) in cols.iter().enumerate() {
        let mut c = c.clone();
        c.sort_unstable();
        if c != from_rows[j] {
            return Err(CodeError::Parse {
                line: *line,
                msg: format!("column {} does not match the row lists", j + 1),
            });
        }
    }

    let trailing = lines.next_numbers("nothing");
    if let Ok((line, _)) = trailing {
        return Err(CodeError::Parse { line, msg: "trailing data after row lists".into() });
    }

    SparseParityCheck::from_checks(n, rows.into_iter().map(|(_, r)| r).collect())
}

/// Serializes to canonical alist: sorted indices, zero padding, single spaces, LF endings.
pub fn to_alist(h: &SparseParityCheck) -> String {
    fn join(nums: impl Iterator<Item = usize>) -> String {
        nums.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
    fn padded(adj: &[usize], width: usize) -> String {
        join(adj.iter().map(|&x| x + 1).chain(std::iter::repeat_n(0, width - adj.len())))
    }
    let col_deg = h.col_degrees();
    let row_deg = h.row_degrees();
    let max_col = col_deg.iter().copied().max().unwrap_or(0);
    let max_row = row_deg.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    out.push_str(&format!("{} {}\n", h.n_vars(), h.n_checks()));
    out.push_str(&format!("{max_col} {max_row}\n"));
    out.push_str(&join(col_deg.iter().copied()));
    out.push('\n');
    out.push_str(&join(row_deg.iter().copied()));
    out.push('\n');
    for adj in h.var_adj() {
        out.push_str(&padded(adj, max_col));
        out.push('\n');
    }
    for adj in h.check_adj() {
        out.push_str(&padded(adj, max_row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPC3: &str = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 3\n";

    #[test]
    fn smallest_code() {
        let h = load_alist(SPC3).unwrap();
        assert_eq!(h.check_adj(), &[vec![0, 1, 2]]);
        assert_eq!(to_alist(&h), SPC3);
    }

    #[test]
    fn column_degree_mismatch_reports_line() {
        // Column 1 is declared with degree 2 but lists three checks.
        let text = "2 3\n3 2\n2 3\n2 2 1\n1 2 3\n1 2 3\n1 2\n1 2\n2 0\n";
        let err = load_alist(text).unwrap_err();
        assert_eq!(
            err,
            CodeError::Parse { line: 5, msg: "column 1: declared degree 2 but 3 entries listed".into() }
        );
    }

    #[test]
    fn row_column_disagreement() {
        let text = "3 2\n1 2\n1 1 1\n2 1\n1\n1\n2\n1 2\n2 0\n";
        // Row 2 says it holds variable 2, column 3 says it is in check 2.
        let err = load_alist(text).unwrap_err();
        assert!(matches!(err, CodeError::Parse { line: 6, .. }), "{err:?}");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(load_alist("3\n"), Err(CodeError::Parse { line: 1, .. })));
        assert!(matches!(load_alist("3 x\n"), Err(CodeError::Parse { line: 1, .. })));
        assert!(matches!(load_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n"), Err(CodeError::Parse { line: 7, .. })));
        // index out of range
        let text = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 4\n";
        assert!(matches!(load_alist(text), Err(CodeError::Parse { line: 8, .. })));
        // wrong declared maximum
        let text = "3 1\n2 3\n1 1 1\n3\n1 0\n1 0\n1 0\n1 2 3\n";
        assert!(matches!(load_alist(text), Err(CodeError::Parse { line: 2, .. })));
        // trailing junk
        let text = format!("{SPC3}1 2 3\n");
        assert!(matches!(load_alist(&text), Err(CodeError::Parse { line: 9, .. })));
    }

    #[test]
    fn accepts_unsorted_and_unpadded_lists() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1\n2 1\n2\n2 1\n3 2\n";
        let h = load_alist(text).unwrap();
        assert_eq!(h.check_adj(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(to_alist(&h), "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n");
    }
}
