//! Line-oriented text format for tables, version `v1`.
//!
//! ```text
//! tablespec v1 <name>
//! arc id=<id> center=<x>,<y> radius=<r> from=<rad> to=<rad> <ccw|cw>
//! line id=<id> from=<x>,<y> to=<x>,<y>
//! curve id=<id> start=<x>,<y> heading=<rad> length=<L> kappa=[s0:k0,s1:k1,...]
//! ```
//!
//! Comments (`# ...`) and blank lines are ignored. Angles are radians. The
//! emitter writes parameters in the order above with 17 significant digits,
//! which round-trips every finite f64 bit-exactly, so parse-emit is a fixed
//! point on canonical text.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geom::{
    ArcSegment, CurvatureProfile, IntrinsicCurve, LineSegment, SegmentGeom, Table, TableSegment,
    Vec2,
};

/// Parsed document: the statements plus, when it came from text, the source
/// line of each statement for semantic error reporting.
#[derive(Clone, Debug, PartialEq)]
pub struct TableSpecDoc {
    pub name: String,
    pub statements: Vec<Statement>,
    lines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Arc { id: String, center: Vec2, radius: f64, from: f64, to: f64, ccw: bool },
    Line { id: String, from: Vec2, to: Vec2 },
    Curve { id: String, start: Vec2, heading: f64, length: f64, kappa: Vec<(f64, f64)> },
}

impl Statement {
    pub fn id(&self) -> &str {
        match self {
            Statement::Arc { id, .. } | Statement::Line { id, .. } | Statement::Curve { id, .. } => {
                id
            }
        }
    }
}

impl TableSpecDoc {
    pub fn new(name: impl Into<String>, statements: Vec<Statement>) -> Self {
        TableSpecDoc { name: name.into(), statements, lines: Vec::new() }
    }

    fn line_of(&self, i: usize) -> usize {
        self.lines.get(i).copied().unwrap_or(0)
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

struct Tok<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut toks = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                toks.push(Tok { col: s + 1, text: &line[s..i] });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        toks.push(Tok { col: s + 1, text: &line[s..] });
    }
    toks
}

fn parse_f64(text: &str, line: usize, col: usize) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| err(line, col, format!("expected a number, got `{text}`")))?;
    if !v.is_finite() {
        return Err(err(line, col, format!("numeric literal must be finite, got `{text}`")));
    }
    Ok(v)
}

fn parse_pair(text: &str, line: usize, col: usize) -> Result<Vec2> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| err(line, col, format!("expected `x,y`, got `{text}`")))?;
    Ok(Vec2::new(
        parse_f64(a, line, col)?,
        parse_f64(b, line, col + a.len() + 1)?,
    ))
}

fn parse_knots(text: &str, line: usize, col: usize) -> Result<Vec<(f64, f64)>> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(line, col, format!("expected `[s0:k0,...]`, got `{text}`")))?;
    if inner.is_empty() {
        return Err(err(line, col, "curvature knot list is empty"));
    }
    let mut out = Vec::new();
    let mut off = 1;
    for item in inner.split(',') {
        let (s, k) = item
            .split_once(':')
            .ok_or_else(|| err(line, col + off, format!("expected `s:kappa`, got `{item}`")))?;
        out.push((
            parse_f64(s, line, col + off)?,
            parse_f64(k, line, col + off + s.len() + 1)?,
        ));
        off += item.len() + 1;
    }
    Ok(out)
}

/// key=value parameters of one statement, consumed by name.
struct Params<'a> {
    line_no: usize,
    line_end: usize,
    entries: Vec<(usize, &'a str, usize, &'a str, bool)>, // col, key, value col, value, used
}

impl<'a> Params<'a> {
    fn collect(
        toks: &[Tok<'a>],
        line_no: usize,
        line_end: usize,
        bare_choices: &[&str],
    ) -> Result<(Params<'a>, Option<(usize, &'a str)>)> {
        let mut entries = Vec::new();
        let mut bare: Option<(usize, &'a str)> = None;
        for tok in toks {
            match tok.text.split_once('=') {
                Some((key, value)) => {
                    if key.is_empty() {
                        return Err(err(line_no, tok.col, "missing parameter name before `=`"));
                    }
                    if value.is_empty() {
                        return Err(err(
                            line_no,
                            tok.col,
                            format!("missing value for parameter `{key}`"),
                        ));
                    }
                    if entries.iter().any(|&(_, k, _, _, _)| k == key) {
                        return Err(err(
                            line_no,
                            tok.col,
                            format!("duplicate parameter `{key}`"),
                        ));
                    }
                    entries.push((tok.col, key, tok.col + key.len() + 1, value, false));
                }
                None => {
                    if bare_choices.contains(&tok.text) {
                        if bare.is_some() {
                            return Err(err(
                                line_no,
                                tok.col,
                                format!("duplicate orientation flag `{}`", tok.text),
                            ));
                        }
                        bare = Some((tok.col, tok.text));
                    } else {
                        return Err(err(
                            line_no,
                            tok.col,
                            format!("unexpected token `{}`", tok.text),
                        ));
                    }
                }
            }
        }
        Ok((Params { line_no, line_end, entries }, bare))
    }

    fn take(&mut self, key: &str) -> Result<(usize, &'a str)> {
        for e in self.entries.iter_mut() {
            if e.1 == key {
                e.4 = true;
                return Ok((e.2, e.3));
            }
        }
        Err(err(
            self.line_no,
            self.line_end,
            format!("missing parameter `{key}`"),
        ))
    }

    fn finish(self) -> Result<()> {
        for (col, key, _, _, used) in self.entries {
            if !used {
                return Err(err(self.line_no, col, format!("unknown parameter `{key}`")));
            }
        }
        Ok(())
    }
}

/// Parse tablespec text into a document without geometric validation.
pub fn parse_document(text: &str) -> Result<TableSpecDoc> {
    let mut name: Option<String> = None;
    let mut statements = Vec::new();
    let mut lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let toks = tokenize(content);
        if toks.is_empty() {
            continue;
        }
        let line_end = content.len() + 1;

        if name.is_none() {
            if toks[0].text != "tablespec" {
                return Err(err(
                    line_no,
                    toks[0].col,
                    format!("expected `tablespec v1 <name>` header, got `{}`", toks[0].text),
                ));
            }
            if toks.len() < 2 || toks[1].text != "v1" {
                let col = toks.get(1).map(|t| t.col).unwrap_or(line_end);
                return Err(err(line_no, col, "expected format version `v1`"));
            }
            if toks.len() < 3 {
                return Err(err(line_no, line_end, "missing table name"));
            }
            if toks.len() > 3 {
                return Err(err(
                    line_no,
                    toks[3].col,
                    format!("unexpected token `{}` after table name", toks[3].text),
                ));
            }
            name = Some(toks[2].text.to_string());
            continue;
        }

        let keyword = &toks[0];
        let rest = &toks[1..];
        let stmt = match keyword.text {
            "arc" => {
                let (mut p, bare) = Params::collect(rest, line_no, line_end, &["ccw", "cw"])?;
                let id = p.take("id")?.1.to_string();
                let (ccol, cval) = p.take("center")?;
                let center = parse_pair(cval, line_no, ccol)?;
                let (rcol, rval) = p.take("radius")?;
                let radius = parse_f64(rval, line_no, rcol)?;
                let (fcol, fval) = p.take("from")?;
                let from = parse_f64(fval, line_no, fcol)?;
                let (tcol, tval) = p.take("to")?;
                let to = parse_f64(tval, line_no, tcol)?;
                p.finish()?;
                let ccw = match bare {
                    Some((_, "ccw")) => true,
                    Some((_, "cw")) => false,
                    _ => return Err(err(line_no, line_end, "missing orientation flag `ccw` or `cw`")),
                };
                Statement::Arc { id, center, radius, from, to, ccw }
            }
            "line" => {
                let (mut p, _) = Params::collect(rest, line_no, line_end, &[])?;
                let id = p.take("id")?.1.to_string();
                let (fcol, fval) = p.take("from")?;
                let from = parse_pair(fval, line_no, fcol)?;
                let (tcol, tval) = p.take("to")?;
                let to = parse_pair(tval, line_no, tcol)?;
                p.finish()?;
                Statement::Line { id, from, to }
            }
            "curve" => {
                let (mut p, _) = Params::collect(rest, line_no, line_end, &[])?;
                let id = p.take("id")?.1.to_string();
                let (scol, sval) = p.take("start")?;
                let start = parse_pair(sval, line_no, scol)?;
                let (hcol, hval) = p.take("heading")?;
                let heading = parse_f64(hval, line_no, hcol)?;
                let (lcol, lval) = p.take("length")?;
                let length = parse_f64(lval, line_no, lcol)?;
                let (kcol, kval) = p.take("kappa")?;
                let kappa = parse_knots(kval, line_no, kcol)?;
                p.finish()?;
                Statement::Curve { id, start, heading, length, kappa }
            }
            other => {
                return Err(err(
                    line_no,
                    keyword.col,
                    format!("expected `arc`, `line`, or `curve`, got `{other}`"),
                ));
            }
        };
        statements.push(stmt);
        lines.push(line_no);
    }

    match name {
        Some(name) => Ok(TableSpecDoc { name, statements, lines }),
        None => Err(err(1, 1, "empty document: expected `tablespec v1 <name>` header")),
    }
}

/// Realize a document as a validated table. Geometric failures are reported
/// against the statement's source line.
pub fn doc_to_table(doc: &TableSpecDoc) -> Result<Table> {
    if doc.statements.is_empty() {
        return Err(Error::Geometry("document declares no segments".into()));
    }
    let mut seen = HashSet::new();
    for (i, st) in doc.statements.iter().enumerate() {
        if !seen.insert(st.id().to_string()) {
            return Err(err(
                doc.line_of(i),
                1,
                format!("duplicate segment id `{}`", st.id()),
            ));
        }
    }

    let mut segments = Vec::with_capacity(doc.statements.len());
    for (i, st) in doc.statements.iter().enumerate() {
        let located = |e: Error| err(doc.line_of(i), 1, e.to_string());
        let geom = match st {
            Statement::Arc { center, radius, from, to, ccw, .. } => {
                SegmentGeom::Arc(ArcSegment::new(*center, *radius, *from, *to, *ccw).map_err(located)?)
            }
            Statement::Line { from, to, .. } => {
                SegmentGeom::Line(LineSegment::new(*from, *to).map_err(located)?)
            }
            Statement::Curve { start, heading, length, kappa, .. } => {
                let profile = CurvatureProfile::new(kappa).map_err(located)?;
                SegmentGeom::Curve(
                    IntrinsicCurve::new(*start, *heading, *length, profile).map_err(located)?,
                )
            }
        };
        segments.push(TableSegment::new(st.id().to_string(), geom));
    }

    Table::from_segments(segments).map_err(|e| match e {
        Error::ChainGap { index, gap } => {
            let next = (index + 1) % doc.statements.len();
            err(
                doc.line_of(next),
                1,
                format!(
                    "open chain: segment `{}` does not start where `{}` ends (gap {gap:.3e})",
                    doc.statements[next].id(),
                    doc.statements[index].id()
                ),
            )
        }
        other => other,
    })
}

pub fn parse_table(text: &str) -> Result<Table> {
    doc_to_table(&parse_document(text)?)
}

/// Reconstruct a document from a live table.
pub fn table_to_doc(table: &Table, name: &str) -> TableSpecDoc {
    let statements = table
        .segments()
        .iter()
        .map(|seg| {
            let id = seg.id.clone();
            match &seg.geom {
                SegmentGeom::Arc(a) => Statement::Arc {
                    id,
                    center: a.center(),
                    radius: a.radius(),
                    from: a.theta_from(),
                    to: a.theta_to(),
                    ccw: a.ccw(),
                },
                SegmentGeom::Line(l) => Statement::Line { id, from: l.from(), to: l.to() },
                SegmentGeom::Curve(c) => Statement::Curve {
                    id,
                    start: c.start(),
                    heading: c.heading_start(),
                    length: c.length(),
                    kappa: c.profile().knots(),
                },
            }
        })
        .collect();
    TableSpecDoc::new(name, statements)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical text form: fixed parameter order, 17 significant digits.
pub fn emit_document(doc: &TableSpecDoc) -> String {
    let mut out = format!("tablespec v1 {}\n", doc.name);
    for st in &doc.statements {
        match st {
            Statement::Arc { id, center, radius, from, to, ccw } => {
                out.push_str(&format!(
                    "arc id={id} center={},{} radius={} from={} to={} {}\n",
                    num(center.x),
                    num(center.y),
                    num(*radius),
                    num(*from),
                    num(*to),
                    if *ccw { "ccw" } else { "cw" },
                ));
            }
            Statement::Line { id, from, to } => {
                out.push_str(&format!(
                    "line id={id} from={},{} to={},{}\n",
                    num(from.x),
                    num(from.y),
                    num(to.x),
                    num(to.y),
                ));
            }
            Statement::Curve { id, start, heading, length, kappa } => {
                let knots: Vec<String> =
                    kappa.iter().map(|&(s, k)| format!("{}:{}", num(s), num(k))).collect();
                out.push_str(&format!(
                    "curve id={id} start={},{} heading={} length={} kappa=[{}]\n",
                    num(start.x),
                    num(start.y),
                    num(*heading),
                    num(*length),
                    knots.join(","),
                ));
            }
        }
    }
    out
}

pub fn emit_table(table: &Table, name: &str) -> String {
    emit_document(&table_to_doc(table, name))
}
