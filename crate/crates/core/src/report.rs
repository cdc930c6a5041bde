//! Text formats for condition reports and spectral data.
//!
//! Two equivalent encodings of [`ConditionReport`] are provided:
//!
//! - a flat, line-oriented record (`key = value` per line, records
//!   separated by blank lines), and
//! - an indented tree (two spaces per level, `name value` leaves).
//!
//! Numbers are written in locale-independent scientific notation with 17
//! significant digits, so every value round-trips bit-exactly; both
//! formats parse back into identical in-memory reports. Spectral data
//! serializes to comma-separated tables with a header row.

use crate::ambarzumyan::{
    ConditionReport, ExtremalBranch, Overall, TheoremKind, Tolerances, Verdict, Verdicts,
};
use crate::error::{Error, Result};
use crate::solver::{Backend, SpectralData};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// 17-significant-digit decimal form; round-trips every finite f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Strict float parsing for report values.
pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Usage(format!("expected a decimal number, got `{s}`")))
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => "unsupported".into(),
    }
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.trim() == "unsupported" {
        Ok(None)
    } else {
        parse_f64(s).map(Some)
    }
}

fn backend_from_label(s: &str) -> Result<Backend> {
    match s {
        "shooting" => Ok(Backend::Shooting),
        "matrix" => Ok(Backend::Matrix),
        other => Err(Error::Usage(format!("unknown backend `{other}`"))),
    }
}

/// Field list shared by both encodings, in serialization order.
fn fields(report: &ConditionReport) -> Vec<(&'static str, String)> {
    let mut out = vec![
        ("theorem", report.theorem.label().to_string()),
        ("n", report.n.to_string()),
        ("index_internal", report.index_internal.to_string()),
        ("backend", report.backend.label().to_string()),
        ("bc", report.bc.clone()),
        ("q", report.q_label.clone()),
        ("qt", report.qt_label.clone()),
        ("degenerate", report.degenerate.to_string()),
        ("delta", fmt_f64(report.delta)),
        (
            "inner_product_value",
            fmt_f64(report.inner_product_value),
        ),
        ("ess_inf_qhat", fmt_opt(report.ess_inf_qhat)),
        ("ess_sup_qhat", fmt_opt(report.ess_sup_qhat)),
    ];
    if let Some(b) = report.extremal_branch {
        out.push(("extremal_branch", b.label().to_string()));
    }
    out.push(("residual_inner", fmt_f64(report.residual_inner)));
    out.push(("residual_extremal", fmt_opt(report.residual_extremal)));
    out.push((
        "proof_identity_residual",
        fmt_f64(report.proof_identity_residual),
    ));
    out.push((
        "conclusion_l1_residual",
        fmt_f64(report.conclusion_l1_residual),
    ));
    if let Some(v) = report.conclusion_linf_residual {
        out.push(("conclusion_linf_residual", fmt_f64(v)));
    }
    if let Some(v) = report.conclusion_strengthened_l1 {
        out.push(("conclusion_strengthened_l1", fmt_f64(v)));
    }
    if let Some(v) = report.mean_residual {
        out.push(("mean_residual", fmt_f64(v)));
    }
    out.push(("tol_condition", fmt_f64(report.tolerances.condition)));
    out.push(("tol_root", fmt_f64(report.tolerances.root)));
    out.push(("tol_quad", fmt_f64(report.tolerances.quad)));
    out.push(("verdict_inner", report.verdicts.inner.label().to_string()));
    out.push((
        "verdict_extremal",
        report.verdicts.extremal.label().to_string(),
    ));
    if let Some(m) = report.verdicts.mean {
        out.push(("verdict_mean", m.label().to_string()));
    }
    out.push((
        "verdict_conclusion",
        report.verdicts.conclusion.label().to_string(),
    ));
    out.push((
        "verdict_overall",
        report.verdicts.overall.label().to_string(),
    ));
    out
}

/// Flat line-oriented encoding: one `key = value` per line.
pub fn write_flat(report: &ConditionReport) -> String {
    let mut out = String::from("record = condition_report\n");
    for (k, v) in fields(report) {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}

/// Tree-structured encoding: indented sections with `name value` leaves.
pub fn write_tree(report: &ConditionReport) -> String {
    let all: BTreeMap<&str, String> = fields(report).into_iter().collect();
    let mut out = String::from("condition_report\n");
    let section = |out: &mut String, name: &str, keys: &[&str]| {
        let mut body = String::new();
        for k in keys {
            if let Some(v) = all.get(k) {
                let short = k
                    .trim_start_matches("residual_")
                    .trim_start_matches("tol_")
                    .trim_start_matches("verdict_");
                let _ = writeln!(body, "    {short} {v}");
            }
        }
        if !body.is_empty() {
            let _ = writeln!(out, "  {name}");
            out.push_str(&body);
        }
    };
    section(
        &mut out,
        "problem",
        &[
            "theorem",
            "n",
            "index_internal",
            "backend",
            "bc",
            "q",
            "qt",
            "degenerate",
        ],
    );
    section(
        &mut out,
        "quantities",
        &[
            "delta",
            "inner_product_value",
            "ess_inf_qhat",
            "ess_sup_qhat",
            "extremal_branch",
        ],
    );
    // residual keys keep their full names to stay unambiguous
    let mut body = String::new();
    for k in [
        "residual_inner",
        "residual_extremal",
        "proof_identity_residual",
        "conclusion_l1_residual",
        "conclusion_linf_residual",
        "conclusion_strengthened_l1",
        "mean_residual",
    ] {
        if let Some(v) = all.get(k) {
            let _ = writeln!(body, "    {k} {v}");
        }
    }
    out.push_str("  residuals\n");
    out.push_str(&body);
    section(&mut out, "tolerances", &["tol_condition", "tol_root", "tol_quad"]);
    section(
        &mut out,
        "verdicts",
        &[
            "verdict_inner",
            "verdict_extremal",
            "verdict_mean",
            "verdict_conclusion",
            "verdict_overall",
        ],
    );
    out
}

/// Reassembles a report from the key/value map shared by both parsers.
fn report_from_map(map: &BTreeMap<String, String>) -> Result<ConditionReport> {
    let get = |k: &str| -> Result<&String> {
        map.get(k)
            .ok_or_else(|| Error::Usage(format!("missing report field `{k}`")))
    };
    let verdicts = Verdicts {
        inner: Verdict::from_label(get("verdict_inner")?)?,
        extremal: Verdict::from_label(get("verdict_extremal")?)?,
        mean: map
            .get("verdict_mean")
            .map(|v| Verdict::from_label(v))
            .transpose()?,
        conclusion: Verdict::from_label(get("verdict_conclusion")?)?,
        overall: Overall::from_label(get("verdict_overall")?)?,
    };
    Ok(ConditionReport {
        theorem: TheoremKind::from_label(get("theorem")?)?,
        n: get("n")?
            .parse()
            .map_err(|_| Error::Usage("bad index n".into()))?,
        index_internal: get("index_internal")?
            .parse()
            .map_err(|_| Error::Usage("bad internal index".into()))?,
        backend: backend_from_label(get("backend")?)?,
        bc: get("bc")?.clone(),
        q_label: get("q")?.clone(),
        qt_label: get("qt")?.clone(),
        degenerate: get("degenerate")?
            .parse()
            .map_err(|_| Error::Usage("bad degenerate flag".into()))?,
        delta: parse_f64(get("delta")?)?,
        inner_product_value: parse_f64(get("inner_product_value")?)?,
        ess_inf_qhat: parse_opt(get("ess_inf_qhat")?)?,
        ess_sup_qhat: parse_opt(get("ess_sup_qhat")?)?,
        extremal_branch: map
            .get("extremal_branch")
            .map(|v| ExtremalBranch::from_label(v))
            .transpose()?,
        residual_inner: parse_f64(get("residual_inner")?)?,
        residual_extremal: parse_opt(get("residual_extremal")?)?,
        proof_identity_residual: parse_f64(get("proof_identity_residual")?)?,
        conclusion_l1_residual: parse_f64(get("conclusion_l1_residual")?)?,
        conclusion_linf_residual: map
            .get("conclusion_linf_residual")
            .map(|v| parse_f64(v))
            .transpose()?,
        conclusion_strengthened_l1: map
            .get("conclusion_strengthened_l1")
            .map(|v| parse_f64(v))
            .transpose()?,
        mean_residual: map
            .get("mean_residual")
            .map(|v| parse_f64(v))
            .transpose()?,
        tolerances: Tolerances {
            condition: parse_f64(get("tol_condition")?)?,
            root: parse_f64(get("tol_root")?)?,
            quad: parse_f64(get("tol_quad")?)?,
        },
        verdicts,
    })
}

/// Parses the flat encoding produced by [`write_flat`].
pub fn parse_flat(text: &str) -> Result<ConditionReport> {
    let mut map = BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("expected `key = value`, got `{line}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    if map.remove("record").as_deref() != Some("condition_report") {
        return Err(Error::Usage("not a condition_report record".into()));
    }
    report_from_map(&map)
}

/// Parses the tree encoding produced by [`write_tree`].
pub fn parse_tree(text: &str) -> Result<ConditionReport> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("condition_report") {
        return Err(Error::Usage("not a condition_report tree".into()));
    }
    let mut section = String::new();
    let mut map = BTreeMap::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let depth = line.len() - line.trim_start().len();
        let body = line.trim();
        if depth == 2 {
            section = body.to_string();
            continue;
        }
        if depth != 4 {
            return Err(Error::Usage(format!("unexpected indentation: `{line}`")));
        }
        let (name, value) = body
            .split_once(' ')
            .ok_or_else(|| Error::Usage(format!("expected `name value`, got `{body}`")))?;
        // undo the per-section abbreviations of the writer
        let key = match section.as_str() {
            "residuals" => name.to_string(),
            "tolerances" => format!("tol_{name}"),
            "verdicts" => format!("verdict_{name}"),
            _ => name.to_string(),
        };
        map.insert(key, value.trim().to_string());
    }
    report_from_map(&map)
}

/// Eigenvalue table: comma-separated with a header row.
pub fn write_spectrum_table(data: &SpectralData) -> String {
    let mut out = String::from("index,eigenvalue,node_count,backend\n");
    for p in &data.pairs {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.index,
            fmt_f64(p.eigenvalue),
            p.node_count,
            p.backend.label()
        );
    }
    out
}

/// Parses the rows of [`write_spectrum_table`].
pub fn parse_spectrum_table(text: &str) -> Result<Vec<(usize, f64, usize, String)>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "index,eigenvalue,node_count,backend" {
        return Err(Error::Usage(format!("unexpected header `{header}`")));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Usage(format!("bad table row `{line}`")));
        }
        rows.push((
            cols[0]
                .parse()
                .map_err(|_| Error::Usage("bad index".into()))?,
            parse_f64(cols[1])?,
            cols[2]
                .parse()
                .map_err(|_| Error::Usage("bad node count".into()))?,
            cols[3].to_string(),
        ));
    }
    Ok(rows)
}

/// Eigenfunction sample table: `x` column plus one column per pair.
pub fn write_eigenfunction_table(data: &SpectralData) -> String {
    let mut out = String::from("x");
    for p in &data.pairs {
        let _ = write!(out, ",y_{}", p.index);
    }
    out.push('\n');
    if data.pairs.is_empty() {
        return out;
    }
    let len = data.pairs[0].eigenfunction.len();
    for i in 0..len {
        let _ = write!(out, "{}", fmt_f64(data.pairs[0].x(i)));
        for p in &data.pairs {
            let _ = write!(out, ",{}", fmt_f64(p.eigenfunction[i]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambarzumyan::{check_main, CheckOptions};
    use crate::potential::Potential;
    use crate::solver::BoundaryCondition;

    fn sample_report() -> ConditionReport {
        let qt = Potential::cosine(1);
        let q = qt.shift(0.75);
        check_main(&q, &qt, &BoundaryCondition::dirichlet(), 1, &CheckOptions::default()).unwrap()
    }

    #[test]
    fn flat_round_trip_is_identical() {
        let report = sample_report();
        let text = write_flat(&report);
        let back = parse_flat(&text).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn tree_round_trip_is_identical() {
        let report = sample_report();
        let text = write_tree(&report);
        let back = parse_tree(&text).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn unsupported_bounds_round_trip() {
        let mut report = sample_report();
        report.ess_inf_qhat = None;
        report.ess_sup_qhat = None;
        report.residual_extremal = None;
        report.extremal_branch = None;
        report.verdicts.extremal = Verdict::Unsupported;
        let back = parse_flat(&write_flat(&report)).unwrap();
        assert_eq!(report, back);
        let back2 = parse_tree(&write_tree(&report)).unwrap();
        assert_eq!(report, back2);
    }

    #[test]
    fn seventeen_digit_format_round_trips_bit_exactly() {
        for &x in &[
            std::f64::consts::PI,
            -1.0 / 3.0,
            6.02214076e23,
            5e-324,
            -0.0,
            9.869604401089358,
        ] {
            let s = fmt_f64(x);
            let back = parse_f64(&s).unwrap();
            assert_eq!(x.to_bits(), back.to_bits(), "{x} -> {s} -> {back}");
        }
    }
}
