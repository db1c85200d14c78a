//! Text and JSON formats for tables, monomial modules, codimension
//! sequences and windows. Rationals travel as strings (`"p/q"` or `"p"`).

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::koszul::{minimize, KoszulError, MonomialModule, Summand};
use crate::tables::{BettiTable, CodimLevel, CodimensionSequence, Rational, TableError, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected `i j value`, found {found} field(s)")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: `{text}` is not an integer index")]
    Index { line: usize, text: String },
    #[error("{location}: `{text}` is not a rational number")]
    Rational { location: String, text: String },
    #[error("{location}: duplicate entry at ({i}, {j})")]
    Duplicate { location: String, i: i64, j: i64 },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("exponent vector {index} of summand {summand} has a negative or non-integer entry")]
    NegativeExponent { summand: usize, index: usize },
    #[error(transparent)]
    Module(#[from] KoszulError),
    #[error("codimension sequence `{text}`: {reason}")]
    Codim { text: String, reason: String },
    #[error("window `{text}`: {reason}")]
    Window { text: String, reason: String },
}

/// A parsed value with the non-fatal issues met along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() || text.contains(char::is_whitespace) {
        return None;
    }
    Rational::from_str(text).ok()
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

/// Accepts the line format or a JSON document with a `"table"` array.
pub fn parse_betti_table(text: &str) -> Result<Parsed<BettiTable>, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_betti_json(text)
    } else {
        parse_betti_lines(text)
    }
}

fn insert_entry(
    entries: &mut BTreeMap<(i64, i64), Rational>,
    warnings: &mut Vec<String>,
    location: String,
    (i, j): (i64, i64),
    value: Rational,
) -> Result<(), ParseError> {
    if entries.contains_key(&(i, j)) {
        return Err(ParseError::Duplicate { location, i, j });
    }
    if num_traits::Zero::is_zero(&value) {
        warnings.push(format!("{location}: zero entry at ({i}, {j}) dropped"));
    }
    entries.insert((i, j), value);
    Ok(())
}

fn parse_betti_lines(text: &str) -> Result<Parsed<BettiTable>, ParseError> {
    let mut entries = BTreeMap::new();
    let mut warnings = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ParseError::FieldCount { line, found: fields.len() });
        }
        let index = |s: &str| s.parse::<i64>().map_err(|_| ParseError::Index { line, text: s.to_string() });
        let (i, j) = (index(fields[0])?, index(fields[1])?);
        let value = parse_rational(fields[2]).ok_or_else(|| ParseError::Rational {
            location: format!("line {line}"),
            text: fields[2].to_string(),
        })?;
        insert_entry(&mut entries, &mut warnings, format!("line {line}"), (i, j), value)?;
    }
    Ok(Parsed { value: BettiTable::from_entries(entries), warnings })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub i: i64,
    pub j: i64,
    pub beta: String,
}

fn parse_betti_json(text: &str) -> Result<Parsed<BettiTable>, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let list = doc.get("table").ok_or_else(|| ParseError::Json("missing \"table\" array".into()))?;
    let rows: Vec<Value> =
        serde_json::from_value(list.clone()).map_err(|e| ParseError::Json(format!("\"table\": {e}")))?;
    let mut entries = BTreeMap::new();
    let mut warnings = Vec::new();
    for (k, row) in rows.into_iter().enumerate() {
        let location = format!("table[{k}]");
        // Integers are accepted in place of strings for `beta`.
        let row = match row {
            Value::Object(mut map) => {
                if let Some(Value::Number(n)) = map.get("beta").cloned() {
                    if n.is_i64() || n.is_u64() {
                        map.insert("beta".into(), Value::String(n.to_string()));
                    }
                }
                Value::Object(map)
            }
            other => other,
        };
        let entry: TableEntry =
            serde_json::from_value(row).map_err(|e| ParseError::Json(format!("{location}: {e}")))?;
        let value = parse_rational(&entry.beta)
            .ok_or_else(|| ParseError::Rational { location: location.clone(), text: entry.beta.clone() })?;
        insert_entry(&mut entries, &mut warnings, location, (entry.i, entry.j), value)?;
    }
    Ok(Parsed { value: BettiTable::from_entries(entries), warnings })
}

/// Canonical line format: sorted, lowest terms, one entry per line.
pub fn serialize_betti_lines(table: &BettiTable) -> String {
    table.to_string()
}

pub fn table_entries(table: &BettiTable) -> Vec<TableEntry> {
    table.iter().map(|((i, j), v)| TableEntry { i, j, beta: rational_string(v) }).collect()
}

/// `{"table": [...]}` as a canonical JSON string.
pub fn serialize_betti_json(table: &BettiTable) -> String {
    serde_json::to_string(&serde_json::json!({ "table": table_entries(table) })).expect("tables serialize")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SummandDoc {
    pub gens: Vec<Vec<i64>>,
    #[serde(default)]
    pub twist: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub d: usize,
    pub summands: Vec<SummandDoc>,
}

/// `{"d": 2, "summands": [{"gens": [[2,0],[1,1]], "twist": 0}]}`; a summand
/// with twist `s` is `(S/I)(-s)`, generated in degree `s`.
pub fn parse_monomial_module(text: &str) -> Result<Parsed<MonomialModule>, ParseError> {
    let doc: ModuleDoc = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let mut warnings = Vec::new();
    let mut summands = Vec::with_capacity(doc.summands.len());
    for (k, s) in doc.summands.iter().enumerate() {
        let mut gens = Vec::with_capacity(s.gens.len());
        for (index, g) in s.gens.iter().enumerate() {
            if g.len() != doc.d {
                return Err(KoszulError::WrongLength {
                    exponents: g.iter().map(|&x| x.max(0) as u32).collect(),
                    expected: doc.d,
                    got: g.len(),
                }
                .into());
            }
            let exps: Option<Vec<u32>> = g.iter().map(|&x| u32::try_from(x).ok()).collect();
            gens.push(exps.ok_or(ParseError::NegativeExponent { summand: k, index })?);
        }
        let (kept, dropped) = minimize(&gens);
        for g in dropped {
            warnings.push(format!("summand {k}: non-minimal generator {g:?} removed"));
        }
        summands.push(Summand { gens: kept, twist: s.twist });
    }
    Ok(Parsed { value: MonomialModule::new(doc.d, summands)?, warnings })
}

pub fn module_doc(module: &MonomialModule) -> ModuleDoc {
    ModuleDoc {
        d: module.d(),
        summands: module
            .summands()
            .iter()
            .map(|s| SummandDoc {
                gens: s.gens.iter().map(|g| g.iter().map(|&x| x as i64).collect()).collect(),
                twist: s.twist,
            })
            .collect(),
    }
}

fn parse_level(text: &str) -> Option<CodimLevel> {
    match text.trim() {
        "empty" | "none" | "-" => Some(CodimLevel::Empty),
        "inf" | "infinity" => Some(CodimLevel::Infinite),
        v => v.parse::<u32>().ok().map(CodimLevel::Finite),
    }
}

/// Compact codimension-sequence syntax:
///
/// * `const:c`: the constant sequence `c`;
/// * `mod:c`: `(..., empty, c, inf, ...)` with `c` at position 0;
/// * `short:d`: `(..., empty, d, d, ...)` with the first `d` at position 0;
/// * `@p:v,...`: jump list, `empty` before the first jump; a bare value
///   after a jump occupies the next position, so `@0:2,inf` is `mod:2`;
/// * `left=v;@p:v,...`: jump list with another left tail.
///
/// The ambient dimension defaults to the largest finite value mentioned.
pub fn parse_codim(text: &str, ambient_dim: Option<u32>) -> Result<CodimensionSequence, ParseError> {
    let err = |reason: String| ParseError::Codim { text: text.to_string(), reason };
    let number = |s: &str| s.trim().parse::<u32>().map_err(|_| err(format!("`{s}` is not a level")));
    let table_err = |e: TableError| err(e.to_string());
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix("const:") {
        let c = number(rest)?;
        return CodimensionSequence::constant(c, ambient_dim.unwrap_or(c)).map_err(table_err);
    }
    if let Some(rest) = trimmed.strip_prefix("mod:") {
        let c = number(rest)?;
        return CodimensionSequence::module(c, ambient_dim.unwrap_or(c)).map_err(table_err);
    }
    if let Some(rest) = trimmed.strip_prefix("short:") {
        let d = number(rest)?;
        if ambient_dim.is_some_and(|dim| dim != d) {
            return Err(err("short complexes use the ambient dimension as level".into()));
        }
        return Ok(CodimensionSequence::short(d));
    }
    let (left, trimmed) = match trimmed.strip_prefix("left=") {
        Some(rest) => {
            let (level, jumps) = rest.split_once(';').ok_or_else(|| err("`left=` needs `;`".into()))?;
            let level = parse_level(level).ok_or_else(|| err(format!("`{level}` is not a level")))?;
            (level, jumps.trim())
        }
        None => (CodimLevel::Empty, trimmed),
    };
    if !trimmed.starts_with('@') {
        return Err(err("expected const:, mod:, short: or a jump list starting with @".into()));
    }
    let mut jumps = Vec::new();
    let mut cursor: Option<i64> = None;
    for token in trimmed.split(',') {
        let token = token.trim();
        let (position, level) = if let Some(jump) = token.strip_prefix('@') {
            let (p, v) = jump.split_once(':').ok_or_else(|| err(format!("`{token}` lacks `:`")))?;
            let p = p.trim().parse::<i64>().map_err(|_| err(format!("`{p}` is not a position")))?;
            (p, v)
        } else {
            let p = cursor.ok_or_else(|| err("bare value before any jump".into()))? + 1;
            (p, token)
        };
        let level = parse_level(level).ok_or_else(|| err(format!("`{level}` is not a level")))?;
        jumps.push((position, level));
        cursor = Some(position);
    }
    let max_finite = jumps
        .iter()
        .chain(std::iter::once(&(i64::MIN, left)))
        .filter_map(|(_, l)| match l {
            CodimLevel::Finite(v) => Some(*v),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut sorted = jumps.clone();
    sorted.sort_by_key(|(p, _)| *p);
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(err("position listed twice".into()));
    }
    CodimensionSequence::from_jumps(ambient_dim.unwrap_or(max_finite), left, jumps).map_err(table_err)
}

/// Canonical text for a codimension sequence, accepted by [`parse_codim`].
pub fn codim_string(c: &CodimensionSequence) -> String {
    if let Some(v) = c.as_constant() {
        return format!("const:{v}");
    }
    let jumps: Vec<String> = c.jumps().map(|(p, v)| format!("@{p}:{v}")).collect();
    match c.left_tail() {
        CodimLevel::Empty => jumps.join(","),
        left => format!("left={left};{}", jumps.join(",")),
    }
}

/// `"imin:imax,jmin:jmax"`.
pub fn parse_window(text: &str) -> Result<Window, ParseError> {
    let err = |reason: &str| ParseError::Window { text: text.to_string(), reason: reason.to_string() };
    let (i_part, j_part) = text.split_once(',').ok_or_else(|| err("expected `imin:imax,jmin:jmax`"))?;
    let range = |s: &str| -> Result<(i64, i64), ParseError> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| err("ranges are written lo:hi"))?;
        let lo = lo.trim().parse::<i64>().map_err(|_| err("bound is not an integer"))?;
        let hi = hi.trim().parse::<i64>().map_err(|_| err("bound is not an integer"))?;
        Ok((lo, hi))
    };
    Window::new(range(i_part)?, range(j_part)?).map_err(|e| err(&e.to_string()))
}

pub fn window_string(w: &Window) -> String {
    format!("{}:{},{}:{}", w.i_min, w.i_max, w.j_min, w.j_max)
}
