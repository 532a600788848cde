//! Line-oriented complex format:
//!
//! ```text
//! complex
//! vars x y
//! ranks 1 2 1
//! map 1
//! x, y
//! map 2
//! -y
//! x
//! end
//! ```
//!
//! `map k` is followed by `rank E_{k-1}` rows of comma separated entries. An optional
//! `order <name>` line may follow `vars`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use crate::poly::{MonomialOrder, PolyError, Ring, RingRef};

use super::{ComplexError, GradedFreeComplex, PolyMatrix};

pub fn emit_complex(c: &GradedFreeComplex) -> String {
    let mut s = String::from("complex\n");
    let _ = writeln!(s, "vars {}", c.ring().vars().join(" "));
    let ranks: Vec<String> = c.ranks().iter().map(usize::to_string).collect();
    let _ = writeln!(s, "ranks {}", ranks.join(" "));
    for k in 1..=c.length() {
        let _ = writeln!(s, "map {k}");
        let m = c.map(k);
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
            let _ = writeln!(s, "{}", row.join(", "));
        }
    }
    s.push_str("end\n");
    s
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ComplexError {
    ComplexError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a complex; line numbers in errors are counted from 1.
pub fn parse_complex(text: &str) -> Result<GradedFreeComplex, ComplexError> {
    parse_complex_at(text, 1)
}

pub(crate) fn parse_complex_at(text: &str, first_line: usize) -> Result<GradedFreeComplex, ComplexError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + first_line, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .peekable();
    let last_line = first_line + text.lines().count().saturating_sub(1);

    let mut next = |what: &str| -> Result<(usize, &str), ComplexError> {
        lines
            .next()
            .ok_or_else(|| err(last_line, 1, format!("unexpected end of input, expected {what}")))
    };

    let (ln, l) = next("`complex`")?;
    if l.trim() != "complex" {
        return Err(err(ln, col_of(l), "expected `complex`"));
    }
    let (ln, l) = next("`vars`")?;
    let vars: Vec<&str> = match l.trim().strip_prefix("vars") {
        Some(rest) => rest.split_whitespace().collect(),
        None => return Err(err(ln, col_of(l), "expected `vars`")),
    };
    if vars.is_empty() {
        return Err(err(ln, col_of(l), "no variables given"));
    }
    let (mut ln, mut l) = next("`ranks`")?;
    let mut order = MonomialOrder::default();
    if let Some(rest) = l.trim().strip_prefix("order") {
        order = MonomialOrder::parse(rest).map_err(|m| err(ln, col_of(l) + 6, m))?;
        (ln, l) = next("`ranks`")?;
    }
    let ring = Ring::new(&vars, order);
    let ranks: Vec<usize> = match l.trim().strip_prefix("ranks") {
        Some(rest) => rest
            .split_whitespace()
            .map(|t| t.parse::<usize>().ok().filter(|&r| r > 0))
            .collect::<Option<_>>()
            .ok_or_else(|| err(ln, col_of(l), "ranks must be positive integers"))?,
        None => return Err(err(ln, col_of(l), "expected `ranks`")),
    };
    if ranks.is_empty() {
        return Err(err(ln, col_of(l), "no ranks given"));
    }
    let mut maps = Vec::new();
    for k in 1..ranks.len() {
        let (ln, l) = next("`map`")?;
        if l.trim() != format!("map {k}") {
            return Err(err(ln, col_of(l), format!("expected `map {k}`")));
        }
        let mut m = PolyMatrix::zeros(&ring, ranks[k - 1], ranks[k]);
        for i in 0..ranks[k - 1] {
            let (ln, l) = next("a matrix row")?;
            let entries = parse_row(&ring, l, ln)?;
            if entries.len() != ranks[k] {
                return Err(err(
                    ln,
                    col_of(l),
                    format!("expected {} entries, found {}", ranks[k], entries.len()),
                ));
            }
            for (j, p) in entries.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        maps.push(m);
    }
    let (ln, l) = next("`end`")?;
    if l.trim() != "end" {
        return Err(err(ln, col_of(l), "expected `end`"));
    }
    if let Some((ln, l)) = lines.next() {
        return Err(err(ln, col_of(l), "trailing content after `end`"));
    }
    GradedFreeComplex::new(&ring, ranks, maps)
}

fn col_of(line: &str) -> usize {
    line.len() - line.trim_start().len() + 1
}

fn parse_row(ring: &RingRef, line: &str, ln: usize) -> Result<Vec<crate::poly::Polynomial>, ComplexError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in line.split(',') {
        let p = ring.parse(piece).map_err(|e| match e {
            PolyError::Parse { column, message } => err(ln, column + offset, message),
            other => ComplexError::Poly(other),
        })?;
        out.push(p);
        offset += piece.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::koszul_complex;
    use crate::poly::MonomialOrder;

    #[test]
    fn round_trip() {
        let r = Ring::new(&["x", "y", "z"], MonomialOrder::grevlex());
        let k = koszul_complex(&r, &[r.var(0), r.parse("y^2 - 1/2*z").unwrap(), r.var(2)]).unwrap();
        let text = emit_complex(&k);
        let back = parse_complex(&text).unwrap();
        assert_eq!(back, k);
        assert_eq!(emit_complex(&back), text);
    }

    #[test]
    fn errors_carry_positions() {
        let text = "complex\nvars x y\nranks 1 2\nmap 1\nx, q\nend\n";
        match parse_complex(text) {
            Err(ComplexError::Parse { line, column, .. }) => assert_eq!((line, column), (5, 4)),
            other => panic!("unexpected {other:?}"),
        }
        let short = "complex\nvars x\nranks 1 1\nmap 1\n";
        assert!(matches!(parse_complex(short), Err(ComplexError::Parse { .. })));
    }
}
