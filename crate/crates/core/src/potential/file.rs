//! Structured key-value text format for potentials.
//!
//! One `key = value` pair per line; `#` starts a comment; blank lines are
//! ignored. Arrays are comma-separated decimal literals.
//!
//! ```text
//! kind = piecewise          # piecewise | sampled | analytic
//! breakpoints = 0, 0.5, 1   # piecewise only, ascending from 0 to 1
//! values = 1, 3             # piecewise cells or uniform samples
//! tag = cos                 # analytic only: zero | constant | cos | sin | table
//! k = 1                     # cos/sin frequency (cos(2 pi k x))
//! c = 5.0                   # constant value
//! scale = 1.0               # optional affine layer
//! offset = 0.0              # optional affine layer
//! ```

use super::{Kind, Potential, Waveform};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

struct Entry {
    line: usize,
    col: usize,
    value: String,
}

fn parse_f64(entry: &Entry) -> Result<f64> {
    entry.value.trim().parse::<f64>().map_err(|_| Error::Parse {
        line: entry.line,
        column: entry.col,
        message: format!("expected a decimal number, got `{}`", entry.value.trim()),
    })
}

fn parse_array(entry: &Entry) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut col = entry.col;
    for token in entry.value.split(',') {
        let trimmed = token.trim();
        if trimmed.is_empty() {
            return Err(Error::Parse {
                line: entry.line,
                column: col,
                message: "empty array element".into(),
            });
        }
        let v: f64 = trimmed.parse().map_err(|_| Error::Parse {
            line: entry.line,
            column: col,
            message: format!("expected a decimal number, got `{trimmed}`"),
        })?;
        out.push(v);
        col += token.len() + 1;
    }
    Ok(out)
}

/// Parses a potential from the key-value text format.
pub fn parse_str(text: &str) -> Result<Potential> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        let eq = stripped.find('=').ok_or(Error::Parse {
            line: line_no,
            column: 1,
            message: "expected `key = value`".into(),
        })?;
        let key = stripped[..eq].trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                message: "missing key before `=`".into(),
            });
        }
        let entry = Entry {
            line: line_no,
            col: eq + 2,
            value: stripped[eq + 1..].to_string(),
        };
        if entries.insert(key.clone(), entry).is_some() {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                message: format!("duplicate key `{key}`"),
            });
        }
    }

    let kind_entry = entries.get("kind").ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing required key `kind`".into(),
    })?;
    let kind_name = kind_entry.value.trim().to_ascii_lowercase();

    let known_keys: &[&str] = &[
        "kind",
        "breakpoints",
        "values",
        "tag",
        "k",
        "c",
        "scale",
        "offset",
    ];
    for (key, entry) in &entries {
        if !known_keys.contains(&key.as_str()) {
            return Err(Error::Parse {
                line: entry.line,
                column: 1,
                message: format!("unknown key `{key}`"),
            });
        }
    }

    let scale = entries.get("scale").map(parse_f64).transpose()?.unwrap_or(1.0);
    let offset = entries
        .get("offset")
        .map(parse_f64)
        .transpose()?
        .unwrap_or(0.0);

    let require = |key: &str| -> Result<&Entry> {
        entries.get(key).ok_or(Error::Parse {
            line: kind_entry.line,
            column: 1,
            message: format!("kind `{kind_name}` requires key `{key}`"),
        })
    };

    let base = match kind_name.as_str() {
        "piecewise" => {
            let breakpoints = parse_array(require("breakpoints")?)?;
            let values = parse_array(require("values")?)?;
            Potential::piecewise_constant(breakpoints, values)?
        }
        "sampled" => Potential::sampled(parse_array(require("values")?)?)?,
        "analytic" => {
            let tag_entry = require("tag")?;
            let tag = tag_entry.value.trim().to_ascii_lowercase();
            match tag.as_str() {
                "zero" => Potential::zero(),
                "constant" => Potential::constant(parse_f64(require("c")?)?),
                "cos" | "sin" => {
                    let k_entry = require("k")?;
                    let k = k_entry.value.trim().parse::<u32>().map_err(|_| Error::Parse {
                        line: k_entry.line,
                        column: k_entry.col,
                        message: format!("expected a positive integer, got `{}`", k_entry.value.trim()),
                    })?;
                    if k == 0 {
                        return Err(Error::Parse {
                            line: k_entry.line,
                            column: k_entry.col,
                            message: "frequency index must be >= 1".into(),
                        });
                    }
                    if tag == "cos" {
                        Potential::cosine(k)
                    } else {
                        Potential::sine(k)
                    }
                }
                "table" => Potential::from_table(parse_array(require("values")?)?)?,
                other => {
                    return Err(Error::Parse {
                        line: tag_entry.line,
                        column: tag_entry.col,
                        message: format!(
                            "unknown analytic tag `{other}` (expected zero, constant, cos, sin or table)"
                        ),
                    })
                }
            }
        }
        other => {
            return Err(Error::Parse {
                line: kind_entry.line,
                column: kind_entry.col,
                message: format!("unknown kind `{other}` (expected piecewise, sampled or analytic)"),
            })
        }
    };

    Potential::from_parts(
        base.kind().clone(),
        scale * base.scale_factor(),
        scale * base.offset_value() + offset,
    )
}

/// Writes a potential in the canonical form accepted by [`parse_str`].
///
/// Combination potentials (results of cross-representation arithmetic)
/// have no file form and are rejected.
pub fn write_str(p: &Potential) -> Result<String> {
    let mut out = String::new();
    match p.kind() {
        Kind::PiecewiseConstant {
            breakpoints,
            values,
        } => {
            out.push_str("kind = piecewise\n");
            out.push_str(&format!("breakpoints = {}\n", join(breakpoints)));
            out.push_str(&format!("values = {}\n", join(values)));
        }
        Kind::Sampled { values } => {
            out.push_str("kind = sampled\n");
            out.push_str(&format!("values = {}\n", join(values)));
        }
        Kind::Analytic(Waveform::Zero) => {
            if p.scale_factor() == 1.0 && p.offset_value() != 0.0 {
                out.push_str("kind = analytic\ntag = constant\n");
                out.push_str(&format!("c = {:.16e}\n", p.offset_value()));
                return Ok(out);
            }
            out.push_str("kind = analytic\ntag = zero\n");
        }
        Kind::Analytic(Waveform::Cos(k)) => {
            out.push_str(&format!("kind = analytic\ntag = cos\nk = {k}\n"));
        }
        Kind::Analytic(Waveform::Sin(k)) => {
            out.push_str(&format!("kind = analytic\ntag = sin\nk = {k}\n"));
        }
        Kind::Mix(_) => {
            return Err(Error::Usage(
                "combination potentials have no file representation".into(),
            ))
        }
    }
    if p.scale_factor() != 1.0 {
        out.push_str(&format!("scale = {:.16e}\n", p.scale_factor()));
    }
    if p.offset_value() != 0.0 {
        out.push_str(&format!("offset = {:.16e}\n", p.offset_value()));
    }
    Ok(out)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_piecewise() {
        let q = parse_str("kind = piecewise\nbreakpoints = 0, 0.5, 1\nvalues = 1, 3\n").unwrap();
        assert_eq!(q.eval(0.25).unwrap(), 1.0);
        assert_eq!(q.eval(0.75).unwrap(), 3.0);
    }

    #[test]
    fn parses_analytic_with_comments() {
        let q = parse_str("# reference potential\nkind = analytic\ntag = cos\nk = 2\n").unwrap();
        assert!((q.eval(0.25).unwrap() - (std::f64::consts::PI).cos()).abs() < 1e-15);
    }

    #[test]
    fn parses_constant_and_scale() {
        let q = parse_str("kind = analytic\ntag = constant\nc = 5\n").unwrap();
        assert_eq!(q.eval(0.9).unwrap(), 5.0);
        let scaled = parse_str("kind = analytic\ntag = cos\nk = 1\nscale = -2\noffset = 1\n").unwrap();
        assert_eq!(scaled.eval(0.0).unwrap(), -1.0);
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = parse_str("kind = piecewise\nbreakpoints = 0, oops, 1\nvalues = 1, 3\n")
            .unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_str("kind = nonsense\n").is_err());
        assert!(parse_str("values = 1, 2, 3\n").is_err());
        assert!(parse_str("kind = analytic\ntag = cos\nk = 0\n").is_err());
    }

    #[test]
    fn round_trips_canonical_form() {
        let cases = vec![
            Potential::piecewise_constant(vec![0.0, 0.5, 1.0], vec![1.0, 3.0]).unwrap(),
            Potential::sampled(vec![0.5, -1.25, 2.0]).unwrap(),
            Potential::zero(),
            Potential::constant(-3.75),
            Potential::cosine(3),
            Potential::sine(1).scaled(0.3).shift(-2.0),
        ];
        for q in cases {
            let text = write_str(&q).unwrap();
            let back = parse_str(&text).unwrap();
            assert_eq!(q, back, "round-trip failed for\n{text}");
        }
    }
}
