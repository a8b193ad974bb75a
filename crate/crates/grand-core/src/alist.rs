//! alist interchange format for binary parity-check matrices.
//!
//! Layout: line 1 `n m`, line 2 max column/row degrees, then the n column
//! degrees, the m row degrees, one line of 1-indexed row positions per
//! column, and one line of 1-indexed column positions per row. Zero entries
//! (MacKay-style padding) are accepted on input and emitted on output.

use crate::bits::BitMatrix;
use crate::code::{CodeError, LinearCode};

struct Lines<'a> {
    inner: std::str::Lines<'a>,
    current: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines(),
            current: 0,
        }
    }

    /// Next non-blank line, with its 1-based line number.
    fn next_line(&mut self, section: &str) -> Result<(usize, &'a str), CodeError> {
        loop {
            match self.inner.next() {
                Some(line) => {
                    self.current += 1;
                    if !line.trim().is_empty() {
                        return Ok((self.current, line));
                    }
                }
                None => {
                    return Err(CodeError::AlistParse {
                        line: self.current + 1,
                        reason: format!("truncated file: missing {section}"),
                    })
                }
            }
        }
    }
}

fn parse_numbers(line: &str, lineno: usize, what: &str) -> Result<Vec<usize>, CodeError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| CodeError::AlistParse {
                line: lineno,
                reason: format!("invalid {what} '{tok}'"),
            })
        })
        .collect()
}

/// Parses an alist text into a code; G is derived from the imported H.
pub fn load_alist(text: &str, label: impl Into<String>) -> Result<LinearCode, CodeError> {
    let h = parse_alist_matrix(text)?;
    LinearCode::from_parity_check(h, label)
}

/// Parses only the parity-check matrix from alist text.
pub fn parse_alist_matrix(text: &str) -> Result<BitMatrix, CodeError> {
    let mut lines = Lines::new(text);

    let (lineno, line) = lines.next_line("size header (n m)")?;
    let dims = parse_numbers(line, lineno, "size")?;
    if dims.len() != 2 {
        return Err(CodeError::AlistParse {
            line: lineno,
            reason: format!("size header must hold exactly 'n m', found {} numbers", dims.len()),
        });
    }
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(CodeError::AlistParse {
            line: lineno,
            reason: format!("degenerate size n={n} m={m}"),
        });
    }

    let (lineno, line) = lines.next_line("maximum degree header")?;
    let maxima = parse_numbers(line, lineno, "maximum degree")?;
    if maxima.len() != 2 {
        return Err(CodeError::AlistParse {
            line: lineno,
            reason: "maximum degree header must hold exactly two numbers".into(),
        });
    }
    let (max_col_deg, max_row_deg) = (maxima[0], maxima[1]);

    let (lineno, line) = lines.next_line("column degree list")?;
    let col_degs = parse_numbers(line, lineno, "column degree")?;
    if col_degs.len() != n {
        return Err(CodeError::AlistParse {
            line: lineno,
            reason: format!("expected {n} column degrees, found {}", col_degs.len()),
        });
    }
    if let Some(d) = col_degs.iter().find(|&&d| d > max_col_deg) {
        return Err(CodeError::AlistParse {
            line: lineno,
            reason: format!("column degree {d} exceeds declared maximum {max_col_deg}"),
        });
    }

    let (lineno, line) = lines.next_line("row degree list")?;
    let row_degs = parse_numbers(line, lineno, "row degree")?;
    if row_degs.len() != m {
        return Err(CodeError::AlistParse {
            line: lineno,
            reason: format!("expected {m} row degrees, found {}", row_degs.len()),
        });
    }
    if let Some(d) = row_degs.iter().find(|&&d| d > max_row_deg) {
        return Err(CodeError::AlistParse {
            line: lineno,
            reason: format!("row degree {d} exceeds declared maximum {max_row_deg}"),
        });
    }

    let mut h = BitMatrix::zeros(m, n);
    for (c, &col_deg) in col_degs.iter().enumerate() {
        let (lineno, line) = lines.next_line(&format!("position list for column {}", c + 1))?;
        let entries = parse_numbers(line, lineno, "row position")?;
        let nonzero: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if nonzero.len() != col_deg {
            return Err(CodeError::AlistParse {
                line: lineno,
                reason: format!(
                    "column {} lists {} positions but declares degree {}",
                    c + 1,
                    nonzero.len(),
                    col_deg
                ),
            });
        }
        for r in nonzero {
            if r > m {
                return Err(CodeError::AlistParse {
                    line: lineno,
                    reason: format!("row index {r} out of range 1..={m}"),
                });
            }
            h.set(r - 1, c, true);
        }
    }

    for (r, &row_deg) in row_degs.iter().enumerate() {
        let (lineno, line) = lines.next_line(&format!("position list for row {}", r + 1))?;
        let entries = parse_numbers(line, lineno, "column position")?;
        let nonzero: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if nonzero.len() != row_deg {
            return Err(CodeError::AlistParse {
                line: lineno,
                reason: format!(
                    "row {} lists {} positions but declares degree {}",
                    r + 1,
                    nonzero.len(),
                    row_deg
                ),
            });
        }
        let mut listed: Vec<usize> = Vec::with_capacity(nonzero.len());
        for c in nonzero {
            if c > n {
                return Err(CodeError::AlistParse {
                    line: lineno,
                    reason: format!("column index {c} out of range 1..={n}"),
                });
            }
            listed.push(c - 1);
        }
        listed.sort_unstable();
        let from_cols: Vec<usize> = (0..n).filter(|&c| h.get(r, c)).collect();
        if listed != from_cols {
            return Err(CodeError::AlistParse {
                line: lineno,
                reason: format!("row {} positions disagree with the column lists", r + 1),
            });
        }
    }

    Ok(h)
}

/// Serializes the code's parity-check matrix in padded alist form.
pub fn save_alist(code: &LinearCode) -> String {
    let h = code.parity_check();
    let (m, n) = (h.rows(), h.cols());
    let col_positions: Vec<Vec<usize>> = (0..n)
        .map(|c| (0..m).filter(|&r| h.get(r, c)).collect())
        .collect();
    let row_positions: Vec<Vec<usize>> = (0..m)
        .map(|r| (0..n).filter(|&c| h.get(r, c)).collect())
        .collect();
    let max_col = col_positions.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = row_positions.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    out.push_str(&format!("{n} {m}\n"));
    out.push_str(&format!("{max_col} {max_row}\n"));
    let degrees = |lists: &[Vec<usize>]| {
        lists
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&degrees(&col_positions));
    out.push('\n');
    out.push_str(&degrees(&row_positions));
    out.push('\n');
    let padded = |positions: &[usize], width: usize| {
        let mut toks: Vec<String> = positions.iter().map(|p| (p + 1).to_string()).collect();
        toks.resize(width, "0".to_string());
        toks.join(" ")
    };
    for col in &col_positions {
        out.push_str(&padded(col, max_col));
        out.push('\n');
    }
    for row in &row_positions {
        out.push_str(&padded(row, max_row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_bch, by_name, extend_parity};

    #[test]
    fn repetition_code_roundtrip() {
        let text = "2 1\n1 2\n1 1\n2\n1\n1\n1 2\n";
        let code = load_alist(text, "rep-2-1").unwrap();
        assert_eq!((code.n(), code.k()), (2, 1));
        let reloaded = load_alist(&save_alist(&code), "rep-2-1").unwrap();
        assert_eq!(reloaded.parity_check(), code.parity_check());
    }

    #[test]
    fn ebch_32_21_roundtrip_preserves_h() {
        let code = by_name("ebch-32-21").unwrap();
        let text = save_alist(&code);
        let reloaded = load_alist(&text, "ebch-32-21").unwrap();
        assert_eq!(reloaded.parity_check(), code.parity_check());
        assert_eq!((reloaded.n(), reloaded.k()), (32, 21));
    }

    #[test]
    fn truncated_file_names_missing_section() {
        let text = "2 1\n2 1\n1 1\n";
        match load_alist(text, "x") {
            Err(CodeError::AlistParse { line, reason }) => {
                assert_eq!(line, 4);
                assert!(reason.contains("row degree list"), "reason: {reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_rejected() {
        let text = "2 1\n1 2\n1 1\n2\n3\n1\n1 2\n";
        match load_alist(text, "x") {
            Err(CodeError::AlistParse { line, reason }) => {
                assert_eq!(line, 5);
                assert!(reason.contains("out of range"), "reason: {reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_row_list_rejected() {
        // column lists say H = [1 1], row list claims column 1 only
        let text = "2 1\n2 2\n1 1\n2\n1\n1\n1 1\n";
        match load_alist(text, "x") {
            Err(CodeError::AlistParse { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rank_deficient_import_rejected() {
        // two identical rows
        let text = "2 2\n2 2\n2 2\n2 2\n1 2\n1 2\n1 2\n1 2\n";
        assert!(matches!(
            load_alist(text, "x"),
            Err(CodeError::RankDeficient(_))
        ));
    }

    #[test]
    fn padded_zero_entries_accepted() {
        let base = extend_parity(&build_bch(3, 1).unwrap());
        let text = save_alist(&base);
        assert!(text.lines().skip(4).any(|l| l.split_whitespace().any(|t| t == "0")));
        let code = load_alist(&text, "hamming-8-4").unwrap();
        assert_eq!(code.parity_check(), base.parity_check());
    }
}
