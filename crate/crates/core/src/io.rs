//! Text formats for complexes, encodings and encoding schedules.
//!
//! A complex file is TOML:
//!
//! ```toml
//! processes = 3
//! vertices = [
//!   { id = 0, color = 0, label = "0" },
//!   { id = 1, color = 1, label = "1" },
//!   { id = 2, color = 2, label = "2" },
//! ]
//! facets = [
//!   [0, 1, 2],
//! ]
//! ```
//!
//! An encoding file holds `codes = [[vertex, code], ...]`; a schedule file
//! holds one `[[rounds]]` table per round with `round` and `codes`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::complex::{ChromaticComplex, Color, Simplex, Vertex, VertexId};
use crate::distinguishability::Encoding;
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: u32,
    color: u32,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    processes: u32,
    vertices: Vec<Spanned<RawVertex>>,
    facets: Vec<Spanned<Vec<u32>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEncoding {
    codes: Vec<Spanned<(u32, u32)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRound {
    round: usize,
    codes: Vec<Spanned<(u32, u32)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    rounds: Vec<RawRound>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

fn parse_err(path: &str, text: &str, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line: line_of(text, offset),
        message: message.into(),
    }
}

fn decode_toml<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let offset = e.span().map(|s| s.start).unwrap_or(0);
        parse_err(path, text, offset, e.message().to_string())
    })
}

/// Parses a complex file. `path` is used in error messages only.
pub fn parse_complex(text: &str, path: &str) -> Result<ChromaticComplex> {
    let raw: RawComplex = decode_toml(text, path)?;
    let mut vertices = Vec::with_capacity(raw.vertices.len());
    let mut color_of = std::collections::HashMap::new();
    for sv in &raw.vertices {
        let v = sv.get_ref();
        if v.color >= raw.processes {
            return Err(parse_err(
                path,
                text,
                sv.span().start,
                format!(
                    "vertex {} has color {} but processes = {}",
                    v.id, v.color, raw.processes
                ),
            ));
        }
        if color_of.insert(v.id, v.color).is_some() {
            return Err(parse_err(
                path,
                text,
                sv.span().start,
                format!("duplicate vertex id {}", v.id),
            ));
        }
        vertices.push(Vertex {
            id: VertexId(v.id),
            color: Color(v.color),
            label: v.label.clone().unwrap_or_else(|| v.id.to_string()),
        });
    }
    let mut simplices = Vec::with_capacity(raw.facets.len());
    for sf in &raw.facets {
        let at = sf.span().start;
        let mut pairs = Vec::new();
        for &id in sf.get_ref() {
            let c = color_of
                .get(&id)
                .ok_or_else(|| parse_err(path, text, at, format!("facet uses unknown vertex {id}")))?;
            pairs.push((Color(*c), VertexId(id)));
        }
        if pairs.is_empty() {
            return Err(parse_err(path, text, at, "empty facet"));
        }
        let s = Simplex::new(pairs).map_err(|e| match e {
            Error::NonChromatic(c) => parse_err(
                path,
                text,
                at,
                format!("facet is not chromatic: color {c} repeats"),
            ),
            other => parse_err(path, text, at, other.to_string()),
        })?;
        simplices.push(s);
    }
    ChromaticComplex::new(raw.processes, vertices, simplices)
        .map_err(|e| parse_err(path, text, 0, e.to_string()))
}

pub fn load_complex(path: &Path) -> Result<ChromaticComplex> {
    let text = read(path)?;
    parse_complex(&text, &path.display().to_string())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Deterministic rendering: vertices by id, facets in canonical order.
pub fn write_complex(c: &ChromaticComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "processes = {}", c.processes());
    out.push_str("vertices = [\n");
    for v in c.vertices() {
        let _ = writeln!(
            out,
            "  {{ id = {}, color = {}, label = {} }},",
            v.id,
            v.color,
            quote(&v.label)
        );
    }
    out.push_str("]\nfacets = [\n");
    for f in c.facets() {
        let mut ids: Vec<u32> = f.vertices().map(|v| v.0).collect();
        ids.sort_unstable();
        let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "  [{}],", ids.join(", "));
    }
    out.push_str("]\n");
    out
}

fn codes_from(raw: &[Spanned<(u32, u32)>], text: &str, path: &str) -> Result<Encoding> {
    let mut e = Encoding::new();
    for sc in raw {
        let (v, code) = *sc.get_ref();
        if code == 0 {
            return Err(parse_err(
                path,
                text,
                sc.span().start,
                format!("code for vertex {v} must be >= 1"),
            ));
        }
        if e.get(VertexId(v)).is_some() {
            return Err(parse_err(
                path,
                text,
                sc.span().start,
                format!("vertex {v} listed twice"),
            ));
        }
        e.set(VertexId(v), code);
    }
    Ok(e)
}

pub fn parse_encoding(text: &str, path: &str) -> Result<Encoding> {
    let raw: RawEncoding = decode_toml(text, path)?;
    codes_from(&raw.codes, text, path)
}

pub fn load_encoding(path: &Path) -> Result<Encoding> {
    parse_encoding(&read(path)?, &path.display().to_string())
}

fn write_codes(out: &mut String, e: &Encoding) {
    out.push_str("codes = [\n");
    for (v, c) in e.iter() {
        let _ = writeln!(out, "  [{v}, {c}],");
    }
    out.push_str("]\n");
}

pub fn write_encoding(e: &Encoding) -> String {
    let mut out = String::new();
    write_codes(&mut out, e);
    out
}

/// Encodings indexed by round; rounds must be listed as `0, 1, …`.
pub fn parse_schedule(text: &str, path: &str) -> Result<Vec<Encoding>> {
    let raw: RawSchedule = decode_toml(text, path)?;
    let mut out = Vec::with_capacity(raw.rounds.len());
    for (i, r) in raw.rounds.iter().enumerate() {
        if r.round != i {
            let at = r.codes.first().map(|c| c.span().start).unwrap_or(0);
            return Err(parse_err(
                path,
                text,
                at,
                format!("expected round {i}, found {}", r.round),
            ));
        }
        out.push(codes_from(&r.codes, text, path)?);
    }
    Ok(out)
}

pub fn load_schedule(path: &Path) -> Result<Vec<Encoding>> {
    parse_schedule(&read(path)?, &path.display().to_string())
}

pub fn write_schedule(rounds: &[Encoding]) -> String {
    let mut out = String::new();
    for (i, e) in rounds.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "[[rounds]]\nround = {i}");
        write_codes(&mut out, e);
    }
    out
}
