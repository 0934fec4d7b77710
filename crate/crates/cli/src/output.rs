//! CSV and JSON writers. Floats are printed with 17 significant digits so that
//! files round-trip and repeated runs compare byte for byte.

use modegate::detection::{Basis, DetectorModel, TableKind, TruthTable, Window};
use modegate::sweep::{Dataset, Output, Point, SweepRow};
use serde_json::{json, Value};

use crate::settings::Format;
use crate::CliError;

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn window_cell(window: Option<Window>) -> String {
    match window {
        None => "pointwise".to_string(),
        Some(Window::Full) => "full".to_string(),
        Some(Window::Finite(w)) => real(w),
    }
}

fn window_json(window: Option<Window>) -> Value {
    match window {
        None => json!("pointwise"),
        Some(Window::Full) => json!("full"),
        Some(Window::Finite(w)) => json!(w),
    }
}

pub const PARAMETER_HEADER: [&str; 7] = ["tau", "omega", "t_c", "t_t", "t_w", "model", "basis"];

/// The seven leading parameter cells shared by every row-per-point file.
fn parameter_cells(
    p: &Point,
    window: Option<Window>,
    model: DetectorModel,
    basis: Basis,
) -> Vec<String> {
    vec![
        real(p.tau),
        real(p.omega),
        real(p.t_c),
        real(p.t_t),
        window_cell(window),
        model.name().to_string(),
        basis.to_string(),
    ]
}

fn parameter_json(
    p: &Point,
    window: Option<Window>,
    model: DetectorModel,
    basis: Basis,
) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tau".into(), json!(p.tau));
    m.insert("omega".into(), json!(p.omega));
    m.insert("t_c".into(), json!(p.t_c));
    m.insert("t_t".into(), json!(p.t_t));
    m.insert("t_w".into(), window_json(window));
    m.insert("model".into(), json!(model.name()));
    m.insert("basis".into(), json!(basis.to_string()));
    m
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// A computed truth table with the parameters that produced it.
pub struct TableReport {
    pub point: Point,
    /// `None` for pointwise densities.
    pub window: Option<Window>,
    pub model: DetectorModel,
    pub basis: Basis,
    pub table: TruthTable,
    pub success: Option<[f64; 4]>,
    pub similarity: f64,
}

pub fn truth_table(r: &TableReport, format: Format) -> Result<String, CliError> {
    let labels = r.basis.labels();
    match format {
        Format::Csv => {
            let mut header = vec!["input".to_string()];
            header.extend(labels.iter().map(|l| l.to_string()));
            header.push("success_probability".into());
            header.push("similarity".into());
            let mut rows = vec![header];
            for (k, label) in labels.iter().enumerate() {
                let mut row = vec![label.to_string()];
                row.extend((0..4).map(|m| real(r.table.get(k, m))));
                row.push(r.success.map(|s| real(s[k])).unwrap_or_default());
                row.push(real(r.similarity));
                rows.push(row);
            }
            csv_string(rows)
        }
        Format::Json => {
            let mut m = parameter_json(&r.point, r.window, r.model, r.basis);
            m.insert(
                "kind".into(),
                json!(match r.table.kind() {
                    TableKind::Density => "density",
                    TableKind::Probability => "probability",
                }),
            );
            m.insert("labels".into(), json!(labels));
            m.insert("entries".into(), json!(r.table.entries()));
            m.insert("success_probabilities".into(), json!(r.success));
            m.insert("similarity".into(), json!(r.similarity));
            Ok(json_string(&Value::Object(m)))
        }
    }
}

pub struct SimilarityReport {
    pub point: Point,
    pub window: Option<Window>,
    pub model: DetectorModel,
    pub basis: Basis,
    pub from_table: f64,
    pub closed_form: f64,
    /// Similarity of the windowed table, when a window was requested.
    pub windowed: Option<f64>,
}

pub fn similarity(r: &SimilarityReport, format: Format) -> Result<String, CliError> {
    let difference = r.from_table - r.closed_form;
    match format {
        Format::Csv => {
            let mut header: Vec<String> = PARAMETER_HEADER.iter().map(|s| s.to_string()).collect();
            header.extend(
                [
                    "similarity_table",
                    "similarity_closed_form",
                    "difference",
                    "similarity_windowed",
                ]
                .map(String::from),
            );
            let mut row = parameter_cells(&r.point, r.window, r.model, r.basis);
            row.extend([
                real(r.from_table),
                real(r.closed_form),
                real(difference),
                r.windowed.map(real).unwrap_or_default(),
            ]);
            csv_string(vec![header, row])
        }
        Format::Json => {
            let mut m = parameter_json(&r.point, r.window, r.model, r.basis);
            m.insert("similarity_table".into(), json!(r.from_table));
            m.insert("similarity_closed_form".into(), json!(r.closed_form));
            m.insert("difference".into(), json!(difference));
            m.insert("similarity_windowed".into(), json!(r.windowed));
            Ok(json_string(&Value::Object(m)))
        }
    }
}

fn output_columns(output: Output, basis: Basis) -> Vec<String> {
    let labels = basis.labels();
    match output {
        Output::Similarity => vec!["similarity".into()],
        Output::PMin => vec!["p_min".into()],
        Output::SuccessProbs => labels.iter().map(|l| format!("success_{l}")).collect(),
        Output::TruthTable => labels
            .iter()
            .flat_map(|i| labels.iter().map(move |o| format!("m_{i}_{o}")))
            .collect(),
    }
}

fn output_cells(output: Output, row: &SweepRow) -> Vec<String> {
    let width = output_columns(output, row.basis).len();
    let Ok(v) = &row.values else {
        return vec![String::new(); width];
    };
    match output {
        Output::Similarity => vec![v.similarity.map(real).unwrap_or_default()],
        Output::PMin => vec![v.p_min.map(real).unwrap_or_default()],
        Output::SuccessProbs => v
            .success_probs
            .map(|s| s.map(real).to_vec())
            .unwrap_or_else(|| vec![String::new(); 4]),
        Output::TruthTable => v
            .truth_table
            .map(|t| t.entries().iter().flatten().map(|&x| real(x)).collect())
            .unwrap_or_else(|| vec![String::new(); 16]),
    }
}

fn status(row: &SweepRow) -> String {
    match &row.values {
        Ok(_) => "ok".to_string(),
        Err(e) => format!("error: {e}"),
    }
}

pub fn dataset(data: &Dataset, basis: Basis, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut header: Vec<String> = PARAMETER_HEADER.iter().map(|s| s.to_string()).collect();
            header.extend(data.outputs.iter().flat_map(|&o| output_columns(o, basis)));
            header.push("status".into());
            let mut rows = vec![header];
            for row in &data.rows {
                let mut cells =
                    parameter_cells(&row.point, Some(row.point.window), row.model, row.basis);
                cells.extend(data.outputs.iter().flat_map(|&o| output_cells(o, row)));
                cells.push(status(row));
                rows.push(cells);
            }
            csv_string(rows)
        }
        Format::Json => {
            let rows: Vec<Value> = data
                .rows
                .iter()
                .map(|row| {
                    let mut m =
                        parameter_json(&row.point, Some(row.point.window), row.model, row.basis);
                    if let Ok(v) = &row.values {
                        for o in &data.outputs {
                            let value = match o {
                                Output::Similarity => json!(v.similarity),
                                Output::PMin => json!(v.p_min),
                                Output::SuccessProbs => json!(v.success_probs),
                                Output::TruthTable => json!(v.truth_table.map(|t| *t.entries())),
                            };
                            m.insert(o.name().into(), value);
                        }
                    }
                    m.insert("status".into(), json!(status(row)));
                    Value::Object(m)
                })
                .collect();
            Ok(json_string(&Value::Array(rows)))
        }
    }
}
