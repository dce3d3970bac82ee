//! Data model, text format, parser, and combinatorial validator for generic
//! (1,1)-tangle diagrams.
//!
//! A diagram is a single strand cut open at one point, drawn generically
//! with respect to the height function. Cutting at every crossing decomposes
//! it into arcs; each crossing consumes four arc ends (NW, NE, SW, SE) and
//! each tangle endpoint consumes one, so a sound diagram references every
//! arc exactly twice. Local extrema are markers on arcs: only those whose
//! arc runs left to right carry a weight in the state sum.
//!
//! Text format (line oriented, UTF-8, `#` starts a comment):
//!
//! ```text
//! open in=<arc> out=<arc>                      # exactly once
//! cross <X1..X8> nw=<arc> ne=<arc> sw=<arc> se=<arc>
//! min <arc> dir=<ltr|rtl>
//! max <arc> dir=<ltr|rtl>
//! ```
//!
//! Arc names match `[A-Za-z0-9_]+` and are declared implicitly on first use.

use std::fmt;

use thiserror::Error;

use crate::error::{Error as CoreError, Result as CoreResult};

/// Index of an arc within its diagram, in first-use order.
pub type ArcId = usize;

/// The eight oriented crossing forms, numbered in the order of the weight
/// table's pictures. Each kind carries two Kronecker-delta constraints
/// `lhs = rhs ± m` relating its four arc labels to the crossing label `m`;
/// see [`CrossingKind::constraints`].
///
/// X1/X2/X7/X8 are positive crossings (weights in `(q)`), X3/X4/X5/X6
/// negative (weights in `(q̄)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossingKind {
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
    X7,
    X8,
}

/// One of the four arc slots at a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Nw,
    Ne,
    Sw,
    Se,
}

/// `lhs = rhs + m_sign * m`, with slots naming arc labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaConstraint {
    pub lhs: Slot,
    pub rhs: Slot,
    pub m_sign: i8,
}

impl CrossingKind {
    pub const ALL: [CrossingKind; 8] = [
        CrossingKind::X1,
        CrossingKind::X2,
        CrossingKind::X3,
        CrossingKind::X4,
        CrossingKind::X5,
        CrossingKind::X6,
        CrossingKind::X7,
        CrossingKind::X8,
    ];

    pub fn from_name(s: &str) -> Option<CrossingKind> {
        Self::ALL.iter().copied().find(|k| k.name() == s)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CrossingKind::X1 => "X1",
            CrossingKind::X2 => "X2",
            CrossingKind::X3 => "X3",
            CrossingKind::X4 => "X4",
            CrossingKind::X5 => "X5",
            CrossingKind::X6 => "X6",
            CrossingKind::X7 => "X7",
            CrossingKind::X8 => "X8",
        }
    }

    /// The two delta constraints of the kind, in table order.
    pub fn constraints(&self) -> [DeltaConstraint; 2] {
        use Slot::*;
        let c = |lhs, rhs, m_sign| DeltaConstraint { lhs, rhs, m_sign };
        match self {
            CrossingKind::X1 => [c(Se, Nw, 1), c(Sw, Ne, -1)],
            CrossingKind::X2 => [c(Nw, Se, 1), c(Ne, Sw, -1)],
            CrossingKind::X3 => [c(Se, Nw, -1), c(Sw, Ne, 1)],
            CrossingKind::X4 => [c(Nw, Se, -1), c(Ne, Sw, 1)],
            CrossingKind::X5 => [c(Ne, Sw, -1), c(Se, Nw, 1)],
            CrossingKind::X6 => [c(Sw, Ne, -1), c(Nw, Se, 1)],
            CrossingKind::X7 => [c(Ne, Sw, 1), c(Se, Nw, -1)],
            CrossingKind::X8 => [c(Sw, Ne, 1), c(Nw, Se, -1)],
        }
    }
}

impl fmt::Display for CrossingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinMax {
    Min,
    Max,
}

/// Direction the strand passes through an extremum. Only left-to-right
/// extrema are weighted; right-to-left ones are recorded but weigh 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Ltr,
    Rtl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extremum {
    pub which: MinMax,
    pub direction: Direction,
    pub arc: ArcId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub nw: ArcId,
    pub ne: ArcId,
    pub sw: ArcId,
    pub se: ArcId,
}

impl Crossing {
    pub fn slot(&self, s: Slot) -> ArcId {
        match s {
            Slot::Nw => self.nw,
            Slot::Ne => self.ne,
            Slot::Sw => self.sw,
            Slot::Se => self.se,
        }
    }
}

/// An immutable (1,1)-tangle diagram. Arc ids index `arc_names` in first-use
/// order, which downstream code relies on for deterministic reductions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleDiagram {
    arc_names: Vec<String>,
    crossings: Vec<Crossing>,
    extrema: Vec<Extremum>,
    endpoint_in: ArcId,
    endpoint_out: ArcId,
}

impl TangleDiagram {
    pub fn arc_count(&self) -> usize {
        self.arc_names.len()
    }

    pub fn arc_name(&self, id: ArcId) -> &str {
        &self.arc_names[id]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn extrema(&self) -> &[Extremum] {
        &self.extrema
    }

    pub fn endpoints(&self) -> (ArcId, ArcId) {
        (self.endpoint_in, self.endpoint_out)
    }
}

/// A parse failure with its position in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, col, message: message.into() }
}

fn valid_arc_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Builder {
    arc_names: Vec<String>,
    crossings: Vec<Crossing>,
    extrema: Vec<Extremum>,
    endpoints: Option<(ArcId, ArcId)>,
}

impl Builder {
    fn arc(&mut self, name: &str, line: usize, col: usize) -> Result<ArcId, ParseError> {
        if !valid_arc_name(name) {
            return Err(err(line, col, format!("invalid arc name {name:?}")));
        }
        if let Some(i) = self.arc_names.iter().position(|a| a == name) {
            return Ok(i);
        }
        self.arc_names.push(name.to_string());
        Ok(self.arc_names.len() - 1)
    }
}

/// Splits a line into `(column, token)` pairs, columns 1-based.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn expect_kv<'a>(
    tok: Option<&(usize, &'a str)>,
    key: &str,
    line: usize,
) -> Result<(usize, &'a str), ParseError> {
    match tok {
        Some(&(col, t)) => match t.split_once('=') {
            Some((k, v)) if k == key => Ok((col, v)),
            _ => Err(err(line, col, format!("expected {key}=<arc>, got {t:?}"))),
        },
        None => Err(err(line, 1, format!("missing {key}=<arc>"))),
    }
}

/// Parses the tangle text format. Returns a structurally well-formed diagram
/// (the deeper arity checks live in [`validate`]).
pub fn parse_tangle(text: &str) -> Result<TangleDiagram, ParseError> {
    let mut b = Builder {
        arc_names: Vec::new(),
        crossings: Vec::new(),
        extrema: Vec::new(),
        endpoints: None,
    };
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let (head_col, head) = toks[0];
        match head {
            "open" => {
                if b.endpoints.is_some() {
                    return Err(err(lineno, head_col, "duplicate endpoint declaration"));
                }
                let (c1, in_name) = expect_kv(toks.get(1), "in", lineno)?;
                let (c2, out_name) = expect_kv(toks.get(2), "out", lineno)?;
                if toks.len() > 3 {
                    return Err(err(lineno, toks[3].0, "unexpected trailing tokens"));
                }
                let a_in = b.arc(in_name, lineno, c1)?;
                let a_out = b.arc(out_name, lineno, c2)?;
                b.endpoints = Some((a_in, a_out));
            }
            "cross" => {
                let (kcol, kname) = *toks
                    .get(1)
                    .ok_or_else(|| err(lineno, head_col, "missing crossing kind"))?;
                let kind = CrossingKind::from_name(kname)
                    .ok_or_else(|| err(lineno, kcol, format!("unknown crossing kind {kname:?}")))?;
                let (c1, nw) = expect_kv(toks.get(2), "nw", lineno)?;
                let (c2, ne) = expect_kv(toks.get(3), "ne", lineno)?;
                let (c3, sw) = expect_kv(toks.get(4), "sw", lineno)?;
                let (c4, se) = expect_kv(toks.get(5), "se", lineno)?;
                if toks.len() > 6 {
                    return Err(err(lineno, toks[6].0, "unexpected trailing tokens"));
                }
                let nw = b.arc(nw, lineno, c1)?;
                let ne = b.arc(ne, lineno, c2)?;
                let sw = b.arc(sw, lineno, c3)?;
                let se = b.arc(se, lineno, c4)?;
                b.crossings.push(Crossing { kind, nw, ne, sw, se });
            }
            "min" | "max" => {
                let which = if head == "min" { MinMax::Min } else { MinMax::Max };
                let (acol, aname) = *toks
                    .get(1)
                    .ok_or_else(|| err(lineno, head_col, "missing arc name"))?;
                let (dcol, dir) = expect_kv(toks.get(2), "dir", lineno)?;
                if toks.len() > 3 {
                    return Err(err(lineno, toks[3].0, "unexpected trailing tokens"));
                }
                let direction = match dir {
                    "ltr" => Direction::Ltr,
                    "rtl" => Direction::Rtl,
                    other => {
                        return Err(err(lineno, dcol, format!("dir must be ltr or rtl, got {other:?}")))
                    }
                };
                let arc = b.arc(aname, lineno, acol)?;
                b.extrema.push(Extremum { which, direction, arc });
            }
            other => {
                return Err(err(lineno, head_col, format!("unknown directive {other:?}")));
            }
        }
    }
    let (endpoint_in, endpoint_out) = b
        .endpoints
        .ok_or_else(|| err(text.lines().count().max(1), 1, "missing open declaration"))?;
    Ok(TangleDiagram {
        arc_names: b.arc_names,
        crossings: b.crossings,
        extrema: b.extrema,
        endpoint_in,
        endpoint_out,
    })
}

/// Writes a diagram back out in the text format; `parse_tangle` of the
/// result reconstructs a structurally equal diagram.
pub fn serialize(d: &TangleDiagram) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "open in={} out={}\n",
        d.arc_name(d.endpoint_in),
        d.arc_name(d.endpoint_out)
    ));
    for c in &d.crossings {
        out.push_str(&format!(
            "cross {} nw={} ne={} sw={} se={}\n",
            c.kind,
            d.arc_name(c.nw),
            d.arc_name(c.ne),
            d.arc_name(c.sw),
            d.arc_name(c.se)
        ));
    }
    for e in &d.extrema {
        let which = match e.which {
            MinMax::Min => "min",
            MinMax::Max => "max",
        };
        let dir = match e.direction {
            Direction::Ltr => "ltr",
            Direction::Rtl => "rtl",
        };
        out.push_str(&format!("{which} {} dir={dir}\n", d.arc_name(e.arc)));
    }
    out
}

/// A combinatorial violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An arc must be consumed exactly twice across crossing slots and
    /// endpoint declarations (each interior arc end exactly once).
    ArcConsumption { arc: String, count: usize },
    /// Distinct endpoint arcs are required once crossings exist.
    EndpointsCoincide { arc: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ArcConsumption { arc, count } => {
                write!(f, "arc {arc:?} has {count} end references, expected 2")
            }
            Violation::EndpointsCoincide { arc } => {
                write!(f, "endpoint arcs coincide on {arc:?} in a diagram with crossings")
            }
        }
    }
}

/// Checks the arity/reference invariants. Planarity is deliberately not
/// checked; the format trusts the author to supply a genuine diagram.
pub fn validate(d: &TangleDiagram) -> Vec<Violation> {
    let mut count = vec![0usize; d.arc_count()];
    count[d.endpoint_in] += 1;
    count[d.endpoint_out] += 1;
    for c in &d.crossings {
        for s in [Slot::Nw, Slot::Ne, Slot::Sw, Slot::Se] {
            count[c.slot(s)] += 1;
        }
    }
    let mut out = Vec::new();
    for (id, &n) in count.iter().enumerate() {
        if n != 2 {
            out.push(Violation::ArcConsumption { arc: d.arc_name(id).to_string(), count: n });
        }
    }
    if d.endpoint_in == d.endpoint_out && !d.crossings.is_empty() {
        out.push(Violation::EndpointsCoincide { arc: d.arc_name(d.endpoint_in).to_string() });
    }
    out
}

pub const FIG8_TANGLE: &str = include_str!("../fixtures/4_1.tangle");
pub const FIG8_ROTATED_TANGLE: &str = include_str!("../fixtures/4_1_rotated.tangle");
pub const UNKNOT_CURLS_TANGLE: &str = include_str!("../fixtures/unknot_curls.tangle");

/// The named fixtures: `"trivial"` (the bare strand) and `"4_1"` (the
/// figure-eight knot, whose state sum reduces to the classical double sum
/// over `0 <= i, j, i+j <= N-1`).
pub fn builtin_diagram(name: &str) -> CoreResult<TangleDiagram> {
    match name {
        "trivial" => Ok(parse_tangle("open in=s out=s").expect("trivial fixture parses")),
        "4_1" => Ok(parse_tangle(FIG8_TANGLE).expect("4_1 fixture parses")),
        other => Err(CoreError::UnknownBuiltin(other.to_string())),
    }
}
