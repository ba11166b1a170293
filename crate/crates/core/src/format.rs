//! Line-oriented instance formats.
//!
//! ```text
//! c comment
//! p lin2 <n> <m>
//! <weight> <rhs> <i1> <i2> ...        weight: integer or p/q, rhs: +1 | -1
//!
//! p pbf <n> <t>
//! const <rational>                    optional, defaults to 0
//! <coef> <i1> <i2> ...
//!
//! p bsg <n> <m>
//! <u> <v> <=|!=>
//!
//! p cut <n> <m>
//! <u> <v>
//! ```
//!
//! Variable and vertex indices are 1-based and strictly increasing within a
//! line.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::gf2::BitVector;
use crate::graphapps::{EdgeLabel, LabeledGraph};
use crate::linsystem::{Equation, LinearSystem, Sign, Weight};
use crate::pseudobool::FourierPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields.first() {
            None => None,
            Some(f) if f.starts_with('c') && !f.starts_with("const") => None,
            _ => Some((i + 1, fields)),
        }
    })
}

fn parse_usize(line: usize, field: &str, what: &str) -> Result<usize, ParseError> {
    field
        .parse()
        .or_else(|_| err(line, format!("invalid {what} {field:?}")))
}

/// Parses `a`, `-a` or `p/q`.
pub fn parse_rational(field: &str) -> Option<Weight> {
    match field.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p).ok()?;
            let q = BigInt::from_str(q).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Weight::new(p, q))
        }
        None => BigInt::from_str(field).ok().map(Weight::from_integer),
    }
}

pub fn format_rational(value: &Weight) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

fn header(
    line: usize,
    fields: &[&str],
    kinds: &[&str],
) -> Result<(String, usize, usize), ParseError> {
    if fields.len() != 4 || fields[0] != "p" || !kinds.contains(&fields[1]) {
        return err(
            line,
            format!("expected header 'p {} <n> <count>'", kinds.join("|")),
        );
    }
    Ok((
        fields[1].to_string(),
        parse_usize(line, fields[2], "count")?,
        parse_usize(line, fields[3], "count")?,
    ))
}

/// Parses 1-based, strictly increasing indices into 0-based ones.
fn parse_indices(line: usize, fields: &[&str], n: usize) -> Result<Vec<usize>, ParseError> {
    let mut out: Vec<usize> = Vec::with_capacity(fields.len());
    for f in fields {
        let i = parse_usize(line, f, "index")?;
        if i == 0 || i > n {
            return err(line, format!("index {i} outside 1..={n}"));
        }
        if out.last().is_some_and(|&prev| prev >= i - 1) {
            return err(line, "indices must be strictly increasing");
        }
        out.push(i - 1);
    }
    Ok(out)
}

pub fn parse_lin2(text: &str) -> Result<LinearSystem, ParseError> {
    let mut lines = content_lines(text);
    let Some((hline, hfields)) = lines.next() else {
        return err(1, "missing header");
    };
    let (_, n, m) = header(hline, &hfields, &["lin2"])?;
    let mut equations = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, fields) in lines {
        last_line = line;
        if equations.len() == m {
            return err(line, format!("more than the declared {m} equations"));
        }
        if fields.len() < 2 {
            return err(line, "expected '<weight> <rhs> <indices...>'");
        }
        let weight = parse_rational(fields[0])
            .ok_or_else(|| ParseError {
                line,
                message: format!("invalid weight {:?}", fields[0]),
            })?;
        if !weight.is_positive() {
            return err(line, "weight must be positive");
        }
        let rhs = match fields[1] {
            "+1" | "1" => Sign::Plus,
            "-1" => Sign::Minus,
            other => return err(line, format!("rhs must be +1 or -1, found {other:?}")),
        };
        let vars = parse_indices(line, &fields[2..], n)?;
        if vars.is_empty() {
            return err(line, "equation has no variables");
        }
        equations.push(Equation::new(BitVector::from_indices(n, vars), rhs, weight));
    }
    if equations.len() != m {
        return err(
            last_line,
            format!("header declares {m} equations, found {}", equations.len()),
        );
    }
    let system = LinearSystem::new(n, equations).expect("parsed equations are validated");
    match var_names(text, n)? {
        Some(names) => Ok(system.with_var_names(names).expect("one name per variable")),
        None => Ok(system),
    }
}

/// Reads `c var <i> <name>` comments; either none or all variables are named.
fn var_names(text: &str, n: usize) -> Result<Option<Vec<String>>, ParseError> {
    let mut names: Vec<Option<String>> = vec![None; n];
    let mut any = false;
    for (i, l) in text.lines().enumerate() {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "c" || fields[1] != "var" {
            continue;
        }
        let line = i + 1;
        let idx = parse_usize(line, fields[2], "variable index")?;
        if idx == 0 || idx > n {
            return err(line, format!("variable {idx} outside 1..={n}"));
        }
        names[idx - 1] = Some(fields[3].to_string());
        any = true;
    }
    if !any {
        return Ok(None);
    }
    match names.into_iter().collect::<Option<Vec<_>>>() {
        Some(all) => Ok(Some(all)),
        None => err(1, "c var lines must name every variable"),
    }
}

pub fn write_lin2(s: &LinearSystem) -> String {
    let mut out = String::new();
    let defaults = s
        .var_names()
        .iter()
        .enumerate()
        .all(|(i, name)| *name == format!("x{}", i + 1));
    if !defaults {
        for (i, name) in s.var_names().iter().enumerate() {
            writeln!(out, "c var {} {}", i + 1, name).unwrap();
        }
    }
    writeln!(out, "p lin2 {} {}", s.n_vars(), s.n_equations()).unwrap();
    for e in s.equations() {
        write!(out, "{} {}", format_rational(&e.weight), e.rhs).unwrap();
        for i in e.lhs.ones_iter() {
            write!(out, " {}", i + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_pbf(text: &str) -> Result<FourierPolynomial, ParseError> {
    let mut lines = content_lines(text);
    let Some((hline, hfields)) = lines.next() else {
        return err(1, "missing header");
    };
    let (_, n, t) = header(hline, &hfields, &["pbf"])?;
    let mut f = FourierPolynomial::new(n);
    let mut seen_const = false;
    let mut count = 0;
    let mut last_line = hline;
    for (line, fields) in lines {
        last_line = line;
        if fields[0] == "const" {
            if seen_const {
                return err(line, "duplicate const line");
            }
            if fields.len() != 2 {
                return err(line, "expected 'const <rational>'");
            }
            let c = parse_rational(fields[1]).ok_or_else(|| ParseError {
                line,
                message: format!("invalid constant {:?}", fields[1]),
            })?;
            f.set_constant(c);
            seen_const = true;
            continue;
        }
        if count == t {
            return err(line, format!("more than the declared {t} terms"));
        }
        let coef = parse_rational(fields[0]).ok_or_else(|| ParseError {
            line,
            message: format!("invalid coefficient {:?}", fields[0]),
        })?;
        let vars = parse_indices(line, &fields[1..], n)?;
        if vars.is_empty() {
            return err(line, "term has no variables; use a const line");
        }
        f.add_term(&vars, coef).expect("indices are validated");
        count += 1;
    }
    if count != t {
        return err(last_line, format!("header declares {t} terms, found {count}"));
    }
    Ok(f)
}

pub fn write_pbf(f: &FourierPolynomial) -> String {
    let mut out = String::new();
    writeln!(out, "p pbf {} {}", f.n_vars(), f.n_terms()).unwrap();
    if !f.constant().is_zero() {
        writeln!(out, "const {}", format_rational(f.constant())).unwrap();
    }
    for (vars, coef) in f.terms() {
        write!(out, "{}", format_rational(coef)).unwrap();
        for i in vars {
            write!(out, " {}", i + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses either a `p bsg` or a `p cut` file.
pub fn parse_graph(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut lines = content_lines(text);
    let Some((hline, hfields)) = lines.next() else {
        return err(1, "missing header");
    };
    let (kind, n, m) = header(hline, &hfields, &["bsg", "cut"])?;
    let labeled = kind == "bsg";
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, fields) in lines {
        last_line = line;
        if edges.len() == m {
            return err(line, format!("more than the declared {m} edges"));
        }
        let expected = if labeled { 3 } else { 2 };
        if fields.len() != expected {
            return err(
                line,
                if labeled {
                    "expected '<u> <v> <=|!=>'"
                } else {
                    "expected '<u> <v>'"
                },
            );
        }
        let u = parse_usize(line, fields[0], "vertex")?;
        let v = parse_usize(line, fields[1], "vertex")?;
        for x in [u, v] {
            if x == 0 || x > n {
                return err(line, format!("vertex {x} outside 1..={n}"));
            }
        }
        if u == v {
            return err(line, "self-loops are not allowed");
        }
        let label = if labeled {
            match fields[2] {
                "=" => EdgeLabel::Equal,
                "!=" => EdgeLabel::NotEqual,
                other => return err(line, format!("label must be = or !=, found {other:?}")),
            }
        } else {
            EdgeLabel::NotEqual
        };
        edges.push((u - 1, v - 1, label));
    }
    if edges.len() != m {
        return err(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        );
    }
    Ok(LabeledGraph::new(n, edges).expect("parsed edges are validated"))
}

/// Writes a `p cut` file when every edge is `!=`, a `p bsg` file otherwise.
pub fn write_graph(g: &LabeledGraph) -> String {
    let mut out = String::new();
    let cut = g.is_cut_instance();
    writeln!(
        out,
        "p {} {} {}",
        if cut { "cut" } else { "bsg" },
        g.n_vertices(),
        g.n_edges()
    )
    .unwrap();
    for e in g.edges() {
        if cut {
            writeln!(out, "{} {}", e.u + 1, e.v + 1).unwrap();
        } else {
            writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.label).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lin2_roundtrip() {
        let text = "c sample\np lin2 3 3\n2 +1 1 2\n1/2 -1 2 3\n5 1 3\n";
        let s = parse_lin2(text).unwrap();
        assert_eq!(s.n_equations(), 3);
        assert_eq!(s.equations()[1].weight, Weight::new(1.into(), 2.into()));
        let again = parse_lin2(&write_lin2(&s)).unwrap();
        assert_eq!(s, again);
        let named = s.clone().with_var_names(vec!["x4".into(), "x7".into(), "x9".into()]).unwrap();
        assert_eq!(parse_lin2(&write_lin2(&named)).unwrap(), named);
        assert_eq!(
            write_lin2(&s),
            "p lin2 3 3\n2 +1 1 2\n1/2 -1 2 3\n5 +1 3\n"
        );
    }

    #[test]
    fn lin2_errors_carry_line_numbers() {
        let cases = [
            ("p lin2 2 1\n0 +1 1\n", 2, "positive"),
            ("p lin2 2 1\n1 +1 2 1\n", 2, "increasing"),
            ("p lin2 2 1\n1 +1 3\n", 2, "outside"),
            ("p lin2 2 1\n1 +1\n", 2, "no variables"),
            ("p lin2 2 1\n1 0 1\n", 2, "rhs"),
            ("p lin2 2 2\n1 +1 1\n", 2, "declares"),
            ("c x\np lin 2 2\n", 2, "header"),
            ("p lin2 2 1\n1 +1 1\n1 +1 2\n", 3, "more than"),
            ("p lin2 2 1\n1/0 +1 1\n", 2, "weight"),
        ];
        for (text, line, needle) in cases {
            let e = parse_lin2(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn pbf_parse_merges_duplicates() {
        let text = "p pbf 3 3\nconst 1\n2 1 2\n-1 2 3\n1 1 2\n";
        let f = parse_pbf(text).unwrap();
        assert_eq!(f.n_terms(), 2);
        assert_eq!(f.constant(), &Weight::from_integer(1.into()));
        let f2 = parse_pbf(&write_pbf(&f)).unwrap();
        assert_eq!(f, f2);
    }

    #[test]
    fn graph_formats() {
        let g = parse_graph("p cut 3 3\n1 2\n2 3\n1 3\n").unwrap();
        assert!(g.is_cut_instance());
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let b = parse_graph("c signed\np bsg 3 2\n1 2 =\n2 3 !=\n").unwrap();
        assert_eq!(b.edges()[0].label, EdgeLabel::Equal);
        assert_eq!(parse_graph(&write_graph(&b)).unwrap(), b);
        let e = parse_graph("p bsg 2 1\n1 1 =\n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
