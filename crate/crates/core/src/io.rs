//! On-disk text formats.
//!
//! All formats are line-oriented ASCII. A `#` starts a comment running to
//! the end of the line; blank lines are insignificant except where a format
//! uses one as a terminator. Elements are written as 0-based indices.
//!
//! Matroid:
//! ```text
//! matroid uniform <rank> <n>
//! matroid linear <q> <rows> <cols>   (followed by <rows> lines of <cols> entries)
//! matroid graphic <vertices> <edges> (followed by <edges> lines of "<u> <v>")
//! matroid pg <rank> <q>
//! matroid bases <n>                  (followed by one basis per line)
//! ```
//!
//! Family: one member per line as space-separated indices; an empty line
//! terminates the family. Writing an empty member is an error since it has
//! no line representation.
//!
//! Cover: a header `cover d=<d> weight=<w> count=<k>` followed by k flat
//! lines.
//!
//! Pyramid: a header `pyramid a=<a> q=<q> h=<h> d=<d> spine=<i,j,...>` with
//! optional `contract=<...>` and `delete=<...>` fields, then the family,
//! a blank line, and one line naming the matroid file it refers to.

use crate::cover::FlatCover;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::matroid::{field_from_order, Kind, LinearRep, Matroid, Minor};
use crate::pyramid::{Pyramid, PyramidParams};
use crate::subset::Subset;
use std::fmt::Write as _;
use std::sync::Arc;

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Non-blank content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what}: {tok:?}") })
}

fn parse_u64(line: usize, tok: &str, what: &str) -> Result<u64> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what}: {tok:?}") })
}

fn parse_subset_tokens<'a>(
    line: usize,
    toks: impl Iterator<Item = &'a str>,
    n: usize,
) -> Result<Subset> {
    let mut s = Subset::EMPTY;
    for t in toks {
        let e = parse_usize(line, t, "element")?;
        if e >= n {
            return Err(Error::Parse { line, msg: format!("element {e} out of range (n = {n})") });
        }
        s = s.with(e);
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// Matroid
// ---------------------------------------------------------------------------

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or(Error::Parse { line: 0, msg: "empty matroid description".into() })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"matroid") {
        return Err(Error::Parse { line: ln, msg: "expected a 'matroid' header".into() });
    }
    match toks.get(1) {
        Some(&"uniform") => {
            let [r, n] = two(ln, &toks[2..])?;
            Matroid::uniform(r, n)
        }
        Some(&"linear") => {
            let [q, rows, cols] = three(ln, &toks[2..])?;
            let field = field_from_order(q as u32)?;
            let mut entries = vec![0u8; rows * cols];
            for row in 0..rows {
                let (ln2, l) = lines
                    .next()
                    .ok_or(Error::Parse { line: ln, msg: format!("missing matrix row {row}") })?;
                let vals: Vec<&str> = l.split_whitespace().collect();
                if vals.len() != cols {
                    return Err(Error::Parse {
                        line: ln2,
                        msg: format!("row has {} entries, expected {cols}", vals.len()),
                    });
                }
                for (c, v) in vals.iter().enumerate() {
                    entries[row * cols + c] = parse_usize(ln2, v, "entry")? as u8;
                }
            }
            Matroid::linear(LinearRep::new(field, rows, cols, entries)?)
        }
        Some(&"graphic") => {
            let [nv, ne] = two(ln, &toks[2..])?;
            let mut edges = Vec::with_capacity(ne);
            for k in 0..ne {
                let (ln2, l) = lines
                    .next()
                    .ok_or(Error::Parse { line: ln, msg: format!("missing edge {k}") })?;
                let vals: Vec<&str> = l.split_whitespace().collect();
                if vals.len() != 2 {
                    return Err(Error::Parse { line: ln2, msg: "edge needs two endpoints".into() });
                }
                edges.push((parse_usize(ln2, vals[0], "vertex")?, parse_usize(ln2, vals[1], "vertex")?));
            }
            Matroid::graphic(nv, edges)
        }
        Some(&"pg") => {
            let [r, q] = two(ln, &toks[2..])?;
            Matroid::pg(r, q as u32)
        }
        Some(&"bases") => {
            let n = match toks.get(2) {
                Some(t) => parse_usize(ln, t, "ground size")?,
                None => return Err(Error::Parse { line: ln, msg: "bases header needs n".into() }),
            };
            let mut bases = Vec::new();
            for (ln2, l) in lines {
                bases.push(parse_subset_tokens(ln2, l.split_whitespace(), n)?);
            }
            Matroid::from_bases(n, bases)
        }
        other => Err(Error::Parse { line: ln, msg: format!("unknown matroid kind {other:?}") }),
    }
}

fn two(line: usize, toks: &[&str]) -> Result<[usize; 2]> {
    if toks.len() != 2 {
        return Err(Error::Parse { line, msg: format!("expected 2 fields, got {}", toks.len()) });
    }
    Ok([parse_usize(line, toks[0], "field")?, parse_usize(line, toks[1], "field")?])
}

fn three(line: usize, toks: &[&str]) -> Result<[usize; 3]> {
    if toks.len() != 3 {
        return Err(Error::Parse { line, msg: format!("expected 3 fields, got {}", toks.len()) });
    }
    Ok([
        parse_usize(line, toks[0], "field")?,
        parse_usize(line, toks[1], "field")?,
        parse_usize(line, toks[2], "field")?,
    ])
}

pub fn write_matroid(m: &Matroid) -> String {
    let mut out = String::new();
    match m.kind() {
        Kind::Uniform { rank } => {
            let _ = writeln!(out, "matroid uniform {} {}", rank, m.n());
        }
        Kind::Linear(rep) => {
            let _ = writeln!(out, "matroid linear {} {} {}", rep.field.q(), rep.rows, rep.cols);
            for r in 0..rep.rows {
                let row: Vec<String> =
                    (0..rep.cols).map(|c| rep.entry(r, c).to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        Kind::Graphic { vertices, edges } => {
            let _ = writeln!(out, "matroid graphic {} {}", vertices, edges.len());
            for (u, v) in edges {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        Kind::ProjectiveGeometry { rep } => {
            let _ = writeln!(out, "matroid pg {} {}", rep.rows, rep.field.q());
        }
        Kind::ExplicitBases { bases } => {
            let _ = writeln!(out, "matroid bases {}", m.n());
            for b in bases {
                let _ = writeln!(out, "{b}");
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Family
// ---------------------------------------------------------------------------

/// Parse a family block: one member per line, empty line (after comment
/// stripping) terminates. Returns the family and the number of raw lines
/// consumed including the terminator.
pub fn parse_family_block(lines: &[&str], start: usize, n: usize) -> Result<(SetFamily, usize)> {
    let mut fam = SetFamily::empty();
    let mut i = start;
    while i < lines.len() {
        let content = strip_comment(lines[i]).trim();
        if content.is_empty() {
            return Ok((fam, i + 1 - start));
        }
        fam.push(parse_subset_tokens(i + 1, content.split_whitespace(), n)?);
        i += 1;
    }
    Ok((fam, i - start))
}

pub fn parse_family(text: &str, n: usize) -> Result<SetFamily> {
    let lines: Vec<&str> = text.lines().collect();
    // Skip leading blanks/comments, then read the block.
    let mut start = 0;
    while start < lines.len() && strip_comment(lines[start]).trim().is_empty() {
        start += 1;
    }
    let (fam, _) = parse_family_block(&lines, start, n)?;
    Ok(fam)
}

pub fn write_family(fam: &SetFamily) -> Result<String> {
    let mut out = String::new();
    for (i, m) in fam.iter().enumerate() {
        if m.is_empty() {
            return Err(Error::Input(format!(
                "member {i} is empty and has no line representation"
            )));
        }
        let _ = writeln!(out, "{m}");
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Cover
// ---------------------------------------------------------------------------

pub fn write_cover(ctx: &Minor, cover: &FlatCover) -> Result<String> {
    let w = cover.weight(ctx)?;
    let mut out = String::new();
    let _ = writeln!(out, "cover d={} weight={} count={}", cover.d, w, cover.flats.len());
    for f in &cover.flats {
        let _ = writeln!(out, "{f}");
    }
    Ok(out)
}

/// Parsed cover: (d, claimed weight, flats). Validation against a view is a
/// separate step ([`crate::cover::validate_element_cover`]).
pub fn parse_cover(text: &str, n: usize) -> Result<(u64, u64, Vec<Subset>)> {
    let mut lines = content_lines(text);
    let (ln, header) =
        lines.next().ok_or(Error::Parse { line: 0, msg: "empty cover description".into() })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"cover") {
        return Err(Error::Parse { line: ln, msg: "expected a 'cover' header".into() });
    }
    let mut d = None;
    let mut weight = None;
    let mut count = None;
    for t in &toks[1..] {
        match t.split_once('=') {
            Some(("d", v)) => d = Some(parse_u64(ln, v, "d")?),
            Some(("weight", v)) => weight = Some(parse_u64(ln, v, "weight")?),
            Some(("count", v)) => count = Some(parse_usize(ln, v, "count")?),
            _ => return Err(Error::Parse { line: ln, msg: format!("unknown cover field {t:?}") }),
        }
    }
    let d = d.ok_or(Error::Parse { line: ln, msg: "cover header needs d=".into() })?;
    let weight = weight.ok_or(Error::Parse { line: ln, msg: "cover header needs weight=".into() })?;
    let count = count.ok_or(Error::Parse { line: ln, msg: "cover header needs count=".into() })?;
    let mut flats = Vec::with_capacity(count);
    for (ln2, l) in lines {
        flats.push(parse_subset_tokens(ln2, l.split_whitespace(), n)?);
    }
    if flats.len() != count {
        return Err(Error::Parse {
            line: ln,
            msg: format!("cover lists {} flats, header says {count}", flats.len()),
        });
    }
    Ok((d, weight, flats))
}

// ---------------------------------------------------------------------------
// Pyramid
// ---------------------------------------------------------------------------

/// A parsed pyramid file, not yet bound to a matroid.
#[derive(Clone, Debug)]
pub struct PyramidFile {
    pub params: PyramidParams,
    pub spine: Vec<usize>,
    pub contract: Vec<usize>,
    pub delete: Vec<usize>,
    pub family_lines: Vec<String>,
    pub matroid_ref: String,
}

impl PyramidFile {
    /// Bind to a base matroid, building the view and the family.
    pub fn realize(&self, base: Arc<Matroid>) -> Result<Pyramid> {
        let n = base.n();
        let check = |v: &[usize]| -> Result<Subset> {
            for &e in v {
                if e >= n {
                    return Err(Error::IndexOutOfRange { index: e, n });
                }
            }
            Ok(Subset::from_indices(v.iter().copied()))
        };
        let contract = check(&self.contract)?;
        let delete = check(&self.delete)?;
        check(&self.spine)?;
        let ctx = Minor::assemble(base, contract, delete)?;
        let mut family = SetFamily::empty();
        for (i, l) in self.family_lines.iter().enumerate() {
            family.push(parse_subset_tokens(i + 1, l.split_whitespace(), n)?);
        }
        Ok(Pyramid::new(ctx, family, self.spine.clone(), self.params))
    }
}

fn parse_index_list(line: usize, v: &str) -> Result<Vec<usize>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|t| parse_usize(line, t.trim(), "index")).collect()
}

pub fn parse_pyramid(text: &str) -> Result<PyramidFile> {
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() && strip_comment(lines[i]).trim().is_empty() {
        i += 1;
    }
    if i == lines.len() {
        return Err(Error::Parse { line: 0, msg: "empty pyramid description".into() });
    }
    let ln = i + 1;
    let header = strip_comment(lines[i]).trim();
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"pyramid") {
        return Err(Error::Parse { line: ln, msg: "expected a 'pyramid' header".into() });
    }
    let (mut a, mut q, mut h, mut d, mut spine) = (None, None, None, None, None);
    let (mut contract, mut delete) = (Vec::new(), Vec::new());
    for t in &toks[1..] {
        match t.split_once('=') {
            Some(("a", v)) => a = Some(parse_usize(ln, v, "a")?),
            Some(("q", v)) => q = Some(parse_usize(ln, v, "q")?),
            Some(("h", v)) => h = Some(parse_usize(ln, v, "h")?),
            Some(("d", v)) => d = Some(parse_u64(ln, v, "d")?),
            Some(("spine", v)) => spine = Some(parse_index_list(ln, v)?),
            Some(("contract", v)) => contract = parse_index_list(ln, v)?,
            Some(("delete", v)) => delete = parse_index_list(ln, v)?,
            _ => return Err(Error::Parse { line: ln, msg: format!("unknown pyramid field {t:?}") }),
        }
    }
    let params = PyramidParams {
        a: a.ok_or(Error::Parse { line: ln, msg: "pyramid header needs a=".into() })?,
        q: q.ok_or(Error::Parse { line: ln, msg: "pyramid header needs q=".into() })?,
        h: h.ok_or(Error::Parse { line: ln, msg: "pyramid header needs h=".into() })?,
        d: d.ok_or(Error::Parse { line: ln, msg: "pyramid header needs d=".into() })?,
    };
    let spine = spine.ok_or(Error::Parse { line: ln, msg: "pyramid header needs spine=".into() })?;
    if spine.len() != params.h {
        return Err(Error::Parse {
            line: ln,
            msg: format!("spine lists {} elements, h = {}", spine.len(), params.h),
        });
    }
    // Family block: lines until blank.
    i += 1;
    let mut family_lines = Vec::new();
    while i < lines.len() {
        let content = strip_comment(lines[i]).trim();
        if content.is_empty() {
            break;
        }
        family_lines.push(content.to_string());
        i += 1;
    }
    // Matroid reference: the next non-blank line.
    while i < lines.len() && strip_comment(lines[i]).trim().is_empty() {
        i += 1;
    }
    if i == lines.len() {
        return Err(Error::Parse { line: lines.len(), msg: "missing matroid reference line".into() });
    }
    let matroid_ref = strip_comment(lines[i]).trim().to_string();
    Ok(PyramidFile { params, spine, contract, delete, family_lines, matroid_ref })
}

pub fn write_pyramid(p: &Pyramid, matroid_ref: &str) -> Result<String> {
    let mut out = String::new();
    let spine: Vec<String> = p.spine.iter().map(|e| e.to_string()).collect();
    let _ = write!(
        out,
        "pyramid a={} q={} h={} d={} spine={}",
        p.params.a,
        p.params.q,
        p.params.h,
        p.params.d,
        spine.join(",")
    );
    let contract = p.ctx.contract_set();
    if !contract.is_empty() {
        let parts: Vec<String> = contract.to_vec().iter().map(|e| e.to_string()).collect();
        let _ = write!(out, " contract={}", parts.join(","));
    }
    let delete = p.ctx.delete_set();
    if !delete.is_empty() {
        let parts: Vec<String> = delete.to_vec().iter().map(|e| e.to_string()).collect();
        let _ = write!(out, " delete={}", parts.join(","));
    }
    out.push('\n');
    out.push_str(&write_family(&p.family)?);
    out.push('\n');
    let _ = writeln!(out, "{matroid_ref}");
    Ok(out)
}
