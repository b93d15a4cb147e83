//! Plain-text point-set format.
//!
//! ```text
//! group 2 mod 3
//! # free coordinates first, then one residue per torsion factor
//! 0 0 1
//! 1 0 2
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::context::{GroupContext, GroupVector};
use crate::group::set::PointSet;

/// Non-empty, comment-stripped lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn parse_header(line_no: usize, line: &str) -> Result<GroupContext> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some("group") {
        return Err(Error::parse(line_no, "expected header `group <free_rank> [mod <m1> ...]`"));
    }
    let rank = toks
        .next()
        .ok_or_else(|| Error::parse(line_no, "missing free rank"))?
        .parse::<usize>()
        .map_err(|_| Error::parse(line_no, "free rank must be a nonnegative integer"))?;
    let mut moduli = Vec::new();
    match toks.next() {
        None => {}
        Some("mod") => {
            for t in toks {
                let m = t
                    .parse::<u64>()
                    .map_err(|_| Error::parse(line_no, format!("bad modulus {t:?}")))?;
                moduli.push(m);
            }
            if moduli.is_empty() {
                return Err(Error::parse(line_no, "`mod` needs at least one modulus"));
            }
        }
        Some(t) => return Err(Error::parse(line_no, format!("unexpected token {t:?} in header"))),
    }
    GroupContext::new(rank, moduli).map_err(|e| Error::parse(line_no, e.to_string()))
}

pub(crate) fn parse_coords(line_no: usize, toks: &[&str], ctx: &GroupContext) -> Result<GroupVector> {
    if toks.len() != ctx.arity() {
        return Err(Error::parse(
            line_no,
            format!("expected {} coordinates, found {}", ctx.arity(), toks.len()),
        ));
    }
    let coords = toks
        .iter()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::parse(line_no, format!("bad integer {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ctx.from_coords(&coords).map_err(|e| Error::parse(line_no, e.to_string()))
}

pub(crate) fn write_header(out: &mut String, ctx: &GroupContext) {
    write!(out, "group {}", ctx.free_rank()).unwrap();
    if !ctx.is_torsion_free() {
        out.push_str(" mod");
        for m in ctx.torsion_moduli() {
            write!(out, " {m}").unwrap();
        }
    }
    out.push('\n');
}

pub(crate) fn write_coords(out: &mut String, v: &GroupVector) {
    let c = v.coords();
    for (i, x) in c.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x}").unwrap();
    }
}

/// Parses a point set. Duplicate points (after torsion reduction) are an error.
pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let ctx = parse_header(hl, header)?;
    let mut seen = BTreeSet::new();
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let v = parse_coords(n, &toks, &ctx)?;
        if !seen.insert(v.clone()) {
            return Err(Error::parse(n, format!("duplicate point {v}")));
        }
    }
    PointSet::new(ctx, seen)
}

/// Canonical text: header, then one line per point in canonical order.
pub fn format_point_set(a: &PointSet) -> String {
    let mut out = String::new();
    write_header(&mut out, a.context());
    for p in a {
        write_coords(&mut out, p);
        out.push('\n');
    }
    out
}
