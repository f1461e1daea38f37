//! Text and JSON file formats.
//!
//! A complex is one facet per line with whitespace-separated labels; `#`
//! starts a comment line. The structured form is a JSON object
//! `{"facets": [...], "colors": {...}, "name": ...}`. A coloring is a header
//! `m <palette size>` followed by `vertex color` lines. Everything else
//! (catalogs, posets, cobordisms, reports) is JSON.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::core::{Complex, Face, VertexId};
use crate::error::{Error, Result};

/// The structured complex format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub facets: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Coloring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Lines that are neither blank nor comments, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with(['{', '['])
}

fn parse_label(line: usize, s: &str) -> Result<VertexId> {
    VertexId::parse(s).map_err(|e| parse_error(line, e.to_string()))
}

/// Parses either format; a JSON array is read as a bare facet list.
pub fn parse_complex_file(text: &str) -> Result<ComplexFile> {
    if looks_like_json(text) {
        if text.trim_start().starts_with('[') {
            return Ok(ComplexFile { facets: serde_json::from_str(text)?, colors: None, name: None });
        }
        return Ok(serde_json::from_str(text)?);
    }
    let mut facets = Vec::new();
    for (n, l) in content_lines(text) {
        let labels = l.split_whitespace().map(|s| parse_label(n, s)).collect::<Result<Vec<_>>>()?;
        facets.push(Face::new(labels).map_err(|e| parse_error(n, e.to_string()))?);
    }
    Ok(ComplexFile { facets: Complex::from_facets(facets), colors: None, name: None })
}

pub fn parse_complex(text: &str) -> Result<Complex> {
    Ok(parse_complex_file(text)?.facets)
}

/// Canonical text form: sorted labels within each facet, facets in order.
pub fn serialize_complex(c: &Complex) -> String {
    let mut out = String::new();
    for f in c.facets() {
        let line: Vec<&str> = f.vertices().iter().map(VertexId::as_str).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn serialize_complex_file(file: &ComplexFile) -> String {
    to_json(file)
}

/// Parses the text coloring format, or its JSON form.
pub fn parse_coloring(text: &str) -> Result<Coloring> {
    if looks_like_json(text) {
        return Ok(serde_json::from_str(text)?);
    }
    let mut lines = content_lines(text);
    let (n, header) = lines.next().ok_or_else(|| parse_error(1, "missing `m <int>` header"))?;
    let m = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["m", m] => m.parse::<usize>().map_err(|_| parse_error(n, format!("bad palette size {m:?}")))?,
        _ => return Err(parse_error(n, "expected `m <int>` header")),
    };
    let mut k = Coloring::new(m);
    for (n, l) in lines {
        let (v, c) = match l.split_whitespace().collect::<Vec<_>>()[..] {
            [v, c] => (parse_label(n, v)?, c.parse::<usize>().map_err(|_| parse_error(n, format!("bad color {c:?}")))?),
            _ => return Err(parse_error(n, "expected `vertex color`")),
        };
        if c >= m {
            return Err(parse_error(n, format!("color {c} is not below m = {m}")));
        }
        if k.get(&v).is_some() {
            return Err(parse_error(n, format!("vertex {v} is colored twice")));
        }
        k.set(v, c);
    }
    Ok(k)
}

pub fn serialize_coloring(k: &Coloring) -> String {
    let mut out = format!("m {}\n", k.m());
    for (v, c) in k.iter() {
        out.push_str(&format!("{v} {c}\n"));
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    Ok(fs::read_to_string(path)?)
}

pub fn read_complex(path: &Path) -> Result<ComplexFile> {
    parse_complex_file(&read_input(path)?)
}

pub fn read_coloring(path: &Path) -> Result<Coloring> {
    parse_coloring(&read_input(path)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read_input(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::generate;

    #[test]
    fn octahedron_round_trip_is_byte_identical() {
        let (c, k) = generate::cross_polytope_boundary(2).unwrap();
        let text = serialize_complex(&c);
        assert_eq!(parse_complex(&text).unwrap(), c);
        assert_eq!(serialize_complex(&parse_complex(&text).unwrap()), text);
        let kt = serialize_coloring(&k);
        assert_eq!(parse_coloring(&kt).unwrap(), k);
        assert_eq!(serialize_coloring(&parse_coloring(&kt).unwrap()), kt);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let plain = parse_complex("a b c\na b d\n").unwrap();
        let noisy = parse_complex("# a comment\n\n  b a c  \n\n# another\nd b a\n").unwrap();
        assert_eq!(plain, noisy);
    }

    #[test]
    fn repeated_vertex_reports_its_line() {
        let err = parse_complex("a b c\n# x\nb c b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn coloring_errors_carry_line_numbers() {
        assert!(matches!(parse_coloring("a 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_coloring("m 2\na 0\nb 2\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_coloring("m 2\na 0\na 1\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn structured_and_bare_json() {
        let (c, k) = generate::bipyramid(2).unwrap();
        let file = ComplexFile { facets: c.clone(), colors: Some(k), name: Some("oct".into()) };
        assert_eq!(parse_complex_file(&serialize_complex_file(&file)).unwrap(), file);
        assert_eq!(parse_complex(&serde_json::to_string(&c).unwrap()).unwrap(), c);
    }
}
