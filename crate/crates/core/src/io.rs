//! Text formats for systems and matrices.
//!
//! A system file holds one coordinate polynomial per line, either bare or as
//! `fi = ...`. Blank lines and `#` comments are ignored, and an optional
//! `field: q` directive names the field:
//!
//! ```text
//! field: 3
//! f1 = 1 - x1*x2
//! f2 = 1 + 2*x2
//! ```
//!
//! A matrix file has the same directive and comments, then one row per line
//! of whitespace- or comma-separated field literals.

use crate::dynamics::{FiniteDynamicalSystem, Matrix};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::poly::parse_polynomial;

/// Parse a field specification: `2`, `5`, `4`, `GF(4)`, `F_7`.
pub fn parse_field(spec: &str) -> Result<Field> {
    let s = spec.trim();
    let digits = s
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| s.strip_prefix("F_"))
        .or_else(|| s.strip_prefix('F'))
        .unwrap_or(s);
    let q: u64 = digits
        .parse()
        .map_err(|_| Error::Invalid(format!("`{s}` is not a field specification")))?;
    Field::with_order(q)
}

/// Non-comment lines as `(line number, column offset, trimmed content)`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            return None;
        }
        let offset = body.len() - body.trim_start().len();
        Some((i + 1, offset, trimmed.trim_end()))
    })
}

/// Split off a leading `field:` directive; `override_field` wins over it.
fn resolve_field(
    lines: &mut Vec<(usize, usize, &str)>,
    override_field: Option<Field>,
) -> Result<Field> {
    let mut declared = None;
    if let Some(&(line, offset, first)) = lines.first() {
        if let Some(rest) = first.strip_prefix("field:") {
            let col = offset + "field:".len() + 1 + (rest.len() - rest.trim_start().len());
            declared = Some(parse_field(rest).map_err(|e| Error::parse(line, col, e.to_string()))?);
            lines.remove(0);
        }
    }
    override_field.or(declared).ok_or_else(|| {
        Error::Invalid("no field given: add a `field: q` line or pass --field".into())
    })
}

pub fn parse_system(text: &str, field: Option<Field>) -> Result<FiniteDynamicalSystem> {
    let mut lines: Vec<_> = content_lines(text).collect();
    let k = resolve_field(&mut lines, field)?;
    if lines.is_empty() {
        return Err(Error::EmptyData);
    }
    let n = lines.len();
    let mut coords = Vec::with_capacity(n);
    for (i, &(line, offset, content)) in lines.iter().enumerate() {
        let (expr, start) = match content.split_once('=') {
            Some((lhs, rhs)) => {
                let label = lhs.trim();
                let expected = format!("f{}", i + 1);
                if label != expected {
                    return Err(Error::parse(
                        line,
                        offset + 1,
                        format!("expected `{expected} =`, found `{label} =`"),
                    ));
                }
                (rhs, lhs.len() + 1)
            }
            None => (content, 0),
        };
        let p = parse_polynomial(expr, k, n).map_err(|e| e.at(line, offset + start))?;
        coords.push(p);
    }
    FiniteDynamicalSystem::new(coords)
}

/// One `fi = ...` line per coordinate, preceded by the field directive.
pub fn format_system(fds: &FiniteDynamicalSystem) -> String {
    format!("field: {}\n{}", fds.field().order(), fds)
}

pub fn parse_matrix(text: &str, field: Option<Field>) -> Result<Matrix> {
    let mut lines: Vec<_> = content_lines(text).collect();
    let k = resolve_field(&mut lines, field)?;
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for &(line, offset, content) in &lines {
        let mut row = Vec::new();
        let mut pos = 0;
        for token in content.split(|c: char| c == ',' || c.is_whitespace()) {
            if !token.is_empty() {
                let v = k
                    .parse_literal(token)
                    .map_err(|e| Error::parse(line, offset + pos + 1, e.to_string()))?;
                row.push(v);
            }
            pos += token.len() + 1;
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::parse(
                    line,
                    offset + 1,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyData);
    }
    Matrix::from_rows(k, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "# two variables over F_3\nfield: 3\nf1 = 1 - x1*x2\nf2 = 1 + 2*x2\n";

    #[test]
    fn parses_labelled_system() {
        let f = parse_system(EXAMPLE, None).unwrap();
        assert_eq!(f.field(), Field::prime(3).unwrap());
        assert_eq!(f.step(&[1, 1]).unwrap(), vec![0, 0]);
        assert_eq!(parse_system(&format_system(&f), None).unwrap(), f);
    }

    #[test]
    fn bare_lines_and_override() {
        let f = parse_system("x2\nx1\n", Some(Field::prime(2).unwrap())).unwrap();
        assert_eq!(f.step(&[0, 1]).unwrap(), vec![1, 0]);
        let g = parse_system(EXAMPLE, Some(Field::prime(5).unwrap())).unwrap();
        assert_eq!(g.field().order(), 5);
        assert!(parse_system("x1\n", None).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_system("field: 3\nf1 = x1 +\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_system("field: 3\nf1 = x1\n  f3 = x2\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err:?}");
        let err = parse_system("field: 3\nf1 = x1 $ x2\nf2 = 1\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 9, .. }), "{err:?}");
        let err = parse_system("field: 6\nx1\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 8, .. }), "{err:?}");
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("field: 4\n0 a\na^2, 1\n", None).unwrap();
        assert_eq!((m.rows(), m.get(0, 1), m.get(1, 0), m.get(1, 1)), (2, 1, 2, 3));
        let err = parse_matrix("field: 2\n0 1\n1 2\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err:?}");
        let err = parse_matrix("field: 2\n0 1\n1\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn field_specs() {
        for (s, q) in [("2", 2), ("GF(4)", 4), ("F_7", 7), ("F5", 5)] {
            assert_eq!(parse_field(s).unwrap().order(), q);
        }
        assert!(parse_field("6").is_err());
        assert!(parse_field("x").is_err());
    }
}
