//! JSON frame files: a small header plus one row per frame vector.
//!
//! ```json
//! {
//!   "field": "complex",
//!   "dim": 2,
//!   "count": 3,
//!   "label": "harmonic(M=2,N=3)",
//!   "recipe": {"kind": "harmonic", "dim": 2, "count": 3, "drop_dc": false, "real": false},
//!   "vectors": [
//!     [[0.7071067811865475, 0.0], [0.7071067811865475, 0.0]],
//!     ...
//!   ]
//! }
//! ```
//!
//! Real entries are plain numbers and complex entries are `[re, im]` pairs.
//! Doubles are written in shortest round-trip form, so write then read gives
//! back the same bits.

use std::fmt;
use std::path::Path;

use framedist_core::constructors::FrameRecipe;
use framedist_core::{Field, Frame, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A frame file that failed to load, with the offending line (1-based) and
/// JSON field when known.
#[derive(Debug, Clone, PartialEq)]
pub struct FileError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl FileError {
    fn at(line: Option<usize>, field: impl Into<String>, message: impl Into<String>) -> Self {
        FileError {
            line,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field `{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for FileError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    field: Field,
    dim: usize,
    count: usize,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    recipe: Option<FrameRecipe>,
    vectors: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameFile {
    pub frame: Frame,
    pub recipe: Option<FrameRecipe>,
}

#[derive(Serialize)]
struct Header<'a> {
    field: Field,
    dim: usize,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    recipe: Option<&'a FrameRecipe>,
}

impl FrameFile {
    pub fn new(frame: Frame, recipe: Option<FrameRecipe>) -> Self {
        FrameFile { frame, recipe }
    }

    pub fn to_json(&self) -> String {
        let f = &self.frame;
        let header = Header {
            field: f.field(),
            dim: f.dim(),
            count: f.len(),
            label: f.label(),
            recipe: self.recipe.as_ref(),
        };
        let Value::Object(map) = serde_json::to_value(&header).expect("header serializes") else {
            unreachable!()
        };
        let mut out = String::from("{\n");
        for (k, v) in &map {
            out.push_str(&format!("  {}: {},\n", Value::String(k.clone()), v));
        }
        out.push_str("  \"vectors\": [\n");
        let rows: Vec<String> = f.vectors().iter().map(|v| format!("    {}", row_json(v, f.field()))).collect();
        out.push_str(&rows.join(",\n"));
        if !rows.is_empty() {
            out.push('\n');
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| FileError {
            line: (e.line() > 0).then_some(e.line()),
            field: None,
            message: e.to_string(),
        })?;
        let row_lines = vector_row_lines(text);
        let line_of = |i: usize| row_lines.get(i).copied();

        if raw.dim == 0 {
            return Err(FileError::at(None, "dim", "must be at least 1"));
        }
        if raw.vectors.len() != raw.count {
            return Err(FileError::at(
                line_of(raw.vectors.len().min(raw.count)),
                "vectors",
                format!("header says count={} but {} rows follow", raw.count, raw.vectors.len()),
            ));
        }
        let mut vectors = Vec::with_capacity(raw.count);
        for (i, row) in raw.vectors.iter().enumerate() {
            let name = format!("vectors[{i}]");
            if row.len() != raw.dim {
                return Err(FileError::at(
                    line_of(i),
                    name,
                    format!("expected {} entries (dim), found {}", raw.dim, row.len()),
                ));
            }
            let v = row
                .iter()
                .enumerate()
                .map(|(j, e)| entry(e, raw.field).map_err(|m| FileError::at(line_of(i), format!("{name}[{j}]"), m)))
                .collect::<Result<Vec<C64>, _>>()?;
            vectors.push(v);
        }
        let mut frame = Frame::new(raw.field, raw.dim, vectors)
            .map_err(|e| FileError::at(None, "vectors", e.to_string()))?;
        if let Some(label) = raw.label {
            frame = frame.with_label(label);
        }
        Ok(FrameFile {
            frame,
            recipe: raw.recipe,
        })
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|e| FileError {
            line: None,
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }
}

fn row_json(v: &[C64], field: Field) -> String {
    let row: Value = match field {
        Field::Real => v.iter().map(|z| number(z.re)).collect(),
        Field::Complex => v.iter().map(|z| Value::Array(vec![number(z.re), number(z.im)])).collect(),
    };
    row.to_string()
}

fn number(x: f64) -> Value {
    // -0.0 would otherwise print as "-0.0"
    serde_json::Number::from_f64(if x == 0.0 { 0.0 } else { x })
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn entry(e: &Value, field: Field) -> Result<C64, String> {
    let num = |v: &Value| v.as_f64().ok_or_else(|| format!("expected a number, found {v}"));
    match (e, field) {
        (Value::Number(_), _) => Ok(C64::new(num(e)?, 0.0)),
        (Value::Array(pair), Field::Complex) if pair.len() == 2 => Ok(C64::new(num(&pair[0])?, num(&pair[1])?)),
        (Value::Array(_), Field::Complex) => Err(format!("expected an [re, im] pair, found {e}")),
        (Value::Array(_), Field::Real) => Err("complex entry in a real frame (set \"field\": \"complex\")".into()),
        _ => Err(format!("expected a number, found {e}")),
    }
}

/// 1-based line where each row of the top-level `vectors` array starts. Only
/// used for diagnostics, after the text is known to be valid JSON.
fn vector_row_lines(text: &str) -> Vec<usize> {
    let bytes = text.as_bytes();
    let Some(key) = text.find("\"vectors\"") else {
        return Vec::new();
    };
    let Some(open) = text[key..].find('[').map(|o| key + o) else {
        return Vec::new();
    };
    let mut line = 1 + text[..open].matches('\n').count();
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    let mut out = Vec::new();
    for &b in &bytes[open..] {
        if in_string {
            match (escaped, b) {
                (true, _) => escaped = false,
                (false, b'\\') => escaped = true,
                (false, b'"') => in_string = false,
                _ => {}
            }
            if b == b'\n' {
                line += 1;
            }
            continue;
        }
        match b {
            b'\n' => line += 1,
            b'"' => in_string = true,
            b'[' => {
                depth += 1;
                if depth == 2 {
                    out.push(line);
                }
            }
            b']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use framedist_core::constructors::{harmonic_frame, simplex_frame};

    #[test]
    fn round_trip_is_exact() {
        for f in [simplex_frame(3).unwrap(), harmonic_frame(3, 7, true).unwrap()] {
            let file = FrameFile::new(f.clone(), None);
            let back = FrameFile::parse(&file.to_json()).unwrap();
            assert_eq!(back.frame, f);
        }
    }

    #[test]
    fn recipe_is_echoed() {
        let recipe = FrameRecipe::Simplex { dim: 2 };
        let file = FrameFile::new(recipe.build().unwrap(), Some(recipe.clone()));
        let text = file.to_json();
        assert!(text.contains("\"kind\":\"simplex\""));
        assert_eq!(FrameFile::parse(&text).unwrap().recipe, Some(recipe));
    }

    #[test]
    fn short_row_names_line_and_field() {
        let text = "{\n \"field\": \"real\",\n \"dim\": 2,\n \"count\": 2,\n \"vectors\": [\n  [1, 0],\n  [1]\n ]\n}\n";
        let err = FrameFile::parse(text).unwrap_err();
        assert_eq!(err.line, Some(7));
        assert_eq!(err.field.as_deref(), Some("vectors[1]"));
    }

    #[test]
    fn complex_entry_in_real_file() {
        let text = "{\"field\":\"real\",\"dim\":1,\"count\":1,\"vectors\":[[[1,0]]]}";
        let err = FrameFile::parse(text).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("vectors[0][0]"));
    }

    #[test]
    fn syntax_errors_carry_the_line() {
        let err = FrameFile::parse("{\n\"field\": \"real\",\n\"dim\": 2,,\n}").unwrap_err();
        assert_eq!(err.line, Some(3));
    }
}
