use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use super::numfmt::format_exact;
use crate::dimension::ArityN;
use crate::error::{Error, Result};
use crate::geometry::{CantorParams, Interval, IntervalSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalFormat {
    Json,
    Csv,
}

impl IntervalFormat {
    /// Picks the format from a `.json` or `.csv` extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(IntervalFormat::Json),
            "csv" => Some(IntervalFormat::Csv),
            _ => None,
        }
    }
}

impl FromStr for IntervalFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(IntervalFormat::Json),
            "csv" => Ok(IntervalFormat::Csv),
            other => Err(Error::domain(format!("unknown interval format {other:?}"))),
        }
    }
}

pub fn export_intervals<W: Write>(
    set: &IntervalSet,
    format: IntervalFormat,
    mut out: W,
) -> Result<()> {
    match format {
        IntervalFormat::Json => write_json(set, &mut out)?,
        IntervalFormat::Csv => write_csv(set, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

pub fn export_intervals_to_string(set: &IntervalSet, format: IntervalFormat) -> String {
    let mut buf = Vec::new();
    export_intervals(set, format, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("exports are ASCII")
}

fn write_json<W: Write>(set: &IntervalSet, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{{")?;
    if let Some(p) = set.params() {
        writeln!(out, "  \"n\": {},", p.n())?;
        writeln!(out, "  \"gamma\": {},", format_exact(p.gamma()))?;
        writeln!(out, "  \"epsilon\": {},", format_exact(p.epsilon()))?;
        writeln!(out, "  \"stage\": {},", p.stage())?;
    }
    if set.is_empty() {
        writeln!(out, "  \"intervals\": []")?;
    } else {
        writeln!(out, "  \"intervals\": [")?;
        let last = set.len() - 1;
        for (i, iv) in set.intervals().iter().enumerate() {
            let sep = if i == last { "" } else { "," };
            writeln!(
                out,
                "    [{}, {}]{sep}",
                format_exact(iv.start),
                format_exact(iv.end)
            )?;
        }
        writeln!(out, "  ]")?;
    }
    writeln!(out, "}}")
}

fn write_csv<W: Write>(set: &IntervalSet, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "start,end")?;
    for iv in set.intervals() {
        writeln!(out, "{},{}", format_exact(iv.start), format_exact(iv.end))?;
    }
    Ok(())
}

pub fn import_intervals<R: Read>(mut input: R, format: IntervalFormat) -> Result<IntervalSet> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    import_intervals_from_str(&text, format)
}

pub fn import_intervals_from_str(text: &str, format: IntervalFormat) -> Result<IntervalSet> {
    match format {
        IntervalFormat::Json => parse_json(text),
        IntervalFormat::Csv => parse_csv(text),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalDocument {
    n: Option<u32>,
    gamma: Option<f64>,
    epsilon: Option<f64>,
    stage: Option<u32>,
    intervals: Vec<[f64; 2]>,
}

fn parse_json(text: &str) -> Result<IntervalSet> {
    let doc: IntervalDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        field: format!("column {}", e.column()),
        message: e.to_string(),
    })?;
    let params = match (doc.n, doc.gamma, doc.epsilon, doc.stage) {
        (None, None, None, None) => None,
        (Some(n), Some(gamma), Some(epsilon), Some(stage)) => {
            let n = ArityN::new(n).map_err(|e| Error::Invariant(e.to_string()))?;
            Some(
                CantorParams::new(n, gamma, epsilon, stage)
                    .map_err(|e| Error::Invariant(e.to_string()))?,
            )
        }
        _ => {
            return Err(Error::Parse {
                line: 1,
                field: "n/gamma/epsilon/stage".into(),
                message: "construction parameters must be given all together or not at all".into(),
            })
        }
    };
    let intervals = doc
        .intervals
        .iter()
        .map(|[s, e]| Interval::new(*s, *e))
        .collect::<Result<Vec<_>>>()?;
    IntervalSet::new(intervals, params)
}

fn parse_csv(text: &str) -> Result<IntervalSet> {
    let mut lines = text.split('\n').enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == "start,end" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                field: "header".into(),
                message: "expected header `start,end`".into(),
            })
        }
    }
    let mut intervals = Vec::new();
    let mut rows = lines.peekable();
    while let Some((idx, raw)) = rows.next() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() && rows.peek().is_none() {
            break;
        }
        let mut fields = row.split(',');
        let start = parse_field(fields.next(), line, "start")?;
        let end = parse_field(fields.next(), line, "end")?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line,
                field: "end".into(),
                message: "unexpected extra field".into(),
            });
        }
        intervals.push(Interval::new(start, end)?);
    }
    IntervalSet::new(intervals, None)
}

fn parse_field(raw: Option<&str>, line: usize, field: &str) -> Result<f64> {
    let raw = raw.unwrap_or("");
    raw.trim().parse::<f64>().map_err(|e| Error::Parse {
        line,
        field: field.into(),
        message: format!("{raw:?}: {e}"),
    })
}
