//! Burmeister `.cxt` contexts and `.rel` agent relations.
//!
//! ```text
//! B                 R 1
//!                   X.
//! 2                 .X
//! 2
//!
//! a1
//! a2
//! x1
//! x2
//! X.
//! .X
//! ```
//!
//! Rows use `X` for a pair in the relation and `.` otherwise. Writers emit
//! exactly this layout with a final newline.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::bits::{Bits, MAX_SORT};
use crate::context::FormalContext;
use crate::error::{Error, FormatError, Result};
use crate::modal::{AgentId, AgentRelation};

fn ferr(line: usize, message: impl Into<String>) -> Error {
    Error::Format(FormatError {
        line,
        message: message.into(),
    })
}

fn lines_of(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    lines
}

fn parse_row(line: &str, lineno: usize, width: usize) -> Result<Bits> {
    let chars: Vec<char> = line.chars().collect();
    if chars.len() != width {
        return Err(ferr(
            lineno,
            format!("row has {} entries, expected {width}", chars.len()),
        ));
    }
    let mut row = Bits::EMPTY;
    for (i, c) in chars.into_iter().enumerate() {
        match c {
            'X' => row.insert(i),
            '.' => {}
            other => {
                return Err(ferr(
                    lineno,
                    format!("illegal character `{other}` at column {}", i + 1),
                ))
            }
        }
    }
    Ok(row)
}

fn write_row(out: &mut String, row: Bits, width: usize) {
    out.extend((0..width).map(|i| if row.contains(i) { 'X' } else { '.' }));
    out.push('\n');
}

pub fn parse_cxt(text: &str) -> Result<FormalContext> {
    let lines = lines_of(text);
    let at = |i: usize| {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| ferr(i + 1, "unexpected end of file"))
    };
    if at(0)?.trim() != "B" {
        return Err(ferr(1, "expected `B`"));
    }
    if !at(1)?.trim().is_empty() {
        return Err(ferr(2, "expected a blank line"));
    }
    let count = |i: usize, what: &str| -> Result<usize> {
        let n: usize = at(i)?
            .trim()
            .parse()
            .map_err(|_| ferr(i + 1, format!("expected the number of {what}")))?;
        if n > MAX_SORT {
            return Err(ferr(
                i + 1,
                format!("at most {MAX_SORT} {what} are supported"),
            ));
        }
        Ok(n)
    };
    let n = count(2, "objects")?;
    let m = count(3, "features")?;
    if !at(4)?.trim().is_empty() {
        return Err(ferr(5, "expected a blank line"));
    }
    let mut names = Vec::with_capacity(n + m);
    for i in 5..5 + n + m {
        let name = at(i)?;
        if name.trim().is_empty() {
            return Err(ferr(i + 1, "empty name"));
        }
        names.push(name.to_string());
    }
    for (part, offset) in [(&names[..n], 5), (&names[n..], 5 + n)] {
        let mut seen = HashSet::new();
        for (k, name) in part.iter().enumerate() {
            if !seen.insert(name) {
                return Err(ferr(offset + k + 1, format!("duplicate name `{name}`")));
            }
        }
    }
    let start = 5 + n + m;
    let mut rows = Vec::with_capacity(n);
    for i in start..start + n {
        rows.push(parse_row(at(i)?, i + 1, m)?);
    }
    if lines.len() > start + n {
        return Err(ferr(
            start + n + 1,
            "trailing content after the incidence rows",
        ));
    }
    let features = names.split_off(n);
    FormalContext::from_rows(names, features, rows).map_err(|e| ferr(1, e.to_string()))
}

pub fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = format!("B\n\n{}\n{}\n\n", ctx.n_objects(), ctx.n_features());
    for name in ctx.objects().iter().chain(ctx.features()) {
        out.push_str(name);
        out.push('\n');
    }
    for a in 0..ctx.n_objects() {
        write_row(&mut out, ctx.row(a).bits(), ctx.n_features());
    }
    out
}

pub fn parse_rel(text: &str, ctx: &FormalContext) -> Result<AgentRelation> {
    let lines = lines_of(text);
    let header = lines
        .first()
        .ok_or_else(|| ferr(1, "empty relation file"))?;
    let agent = header
        .strip_prefix("R ")
        .and_then(|s| s.trim().parse::<u32>().ok())
        .ok_or_else(|| ferr(1, "expected header `R <agent-id>` with a numeric agent id"))?;
    let body = &lines[1..];
    if body.len() != ctx.n_objects() {
        let line = if body.len() < ctx.n_objects() {
            lines.len() + 1
        } else {
            ctx.n_objects() + 2
        };
        return Err(ferr(
            line,
            format!("{} rows for {} objects", body.len(), ctx.n_objects()),
        ));
    }
    let rows = body
        .iter()
        .enumerate()
        .map(|(i, l)| parse_row(l, i + 2, ctx.n_features()))
        .collect::<Result<_>>()?;
    AgentRelation::new(AgentId(agent), ctx, rows)
}

pub fn write_rel(r: &AgentRelation) -> String {
    let mut out = format!("R {}\n", r.agent());
    for &row in r.rows() {
        write_row(&mut out, row, r.n_features());
    }
    out
}

pub fn load_cxt(path: impl AsRef<Path>) -> Result<FormalContext> {
    parse_cxt(&fs::read_to_string(path)?)
}

pub fn save_cxt(path: impl AsRef<Path>, ctx: &FormalContext) -> Result<()> {
    Ok(fs::write(path, write_cxt(ctx))?)
}

pub fn load_rel(path: impl AsRef<Path>, ctx: &FormalContext) -> Result<AgentRelation> {
    parse_rel(&fs::read_to_string(path)?, ctx)
}

pub fn save_rel(path: impl AsRef<Path>, r: &AgentRelation) -> Result<()> {
    Ok(fs::write(path, write_rel(r))?)
}
