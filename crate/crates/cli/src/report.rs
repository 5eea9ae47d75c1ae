//! Tabular renderings of analysis results.

use prodsurf::classifier::{ClassificationVerdict, TheoremReport};
use prodsurf::json::{format_f64, to_report_json, SCHEMA_VERSION};
use prodsurf::{jet, CurvatureSample, FunctionSpec, SampleGrid, SubstitutionSample};
use serde_json::{json, Map, Value};

/// Per-point indicator table; `None` marks a value undefined at that point.
pub struct Table {
    family: &'static str,
    n: usize,
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

fn columns(n: usize) -> Vec<String> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut c: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    c.extend(["f", "w", "K", "H"].map(String::from));
    c.extend(pairs.iter().map(|(i, j)| format!("K_{i}_{j}")));
    c.extend((0..n).map(|i| format!("E_{i}")));
    for i in 0..n {
        c.extend((0..n).filter(|&j| j != i).map(|j| format!("MRS_{i}_{j}")));
    }
    c.extend(pairs.iter().map(|(i, j)| format!("Hicks_{i}_{j}")));
    c.extend(pairs.iter().map(|(i, j)| format!("Allen_{i}_{j}")));
    c.push("Delta".into());
    c
}

pub fn analyze(spec: &FunctionSpec, grid: &SampleGrid) -> prodsurf::Result<Table> {
    let n = spec.n();
    let mut rows = Vec::new();
    for p in grid.points() {
        let j = jet(spec, &p).map_err(|e| e.at(p.coords()))?;
        let c = CurvatureSample::from_jet(p.clone(), &j, &[])?;
        let s = SubstitutionSample::from_jet(p.clone(), &j)?;
        let mut row: Vec<Option<f64>> = p.coords().iter().map(|&x| Some(x)).collect();
        row.extend([Some(j.value), Some(c.w), Some(c.gauss_kronecker), Some(c.mean)]);
        for i in 0..n {
            row.extend(((i + 1)..n).map(|k| c.sectional[i][k]));
        }
        row.extend(s.elasticities.iter().map(|&e| Some(e)));
        for i in 0..n {
            row.extend((0..n).filter(|&k| k != i).map(|k| s.mrs[i][k]));
        }
        for i in 0..n {
            row.extend(((i + 1)..n).map(|k| s.hicks[i][k]));
        }
        for i in 0..n {
            row.extend(((i + 1)..n).map(|k| s.allen[i][k]));
        }
        row.push(Some(s.allen_determinant));
        rows.push(row);
    }
    Ok(Table { family: spec.family().tag(), n, columns: columns(n), rows })
}

impl Table {
    pub fn render(&self, csv: bool) -> String {
        if csv {
            let mut out = self.columns.join(",") + "\n";
            for r in &self.rows {
                let cells: Vec<String> = r.iter().map(|v| v.map(format_f64).unwrap_or_default()).collect();
                out += &(cells.join(",") + "\n");
            }
            return out;
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self.columns.iter().cloned().zip(r.iter().map(|v| json!(v))).collect();
                Value::Object(m)
            })
            .collect();
        to_report_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "family": self.family,
            "n": self.n,
            "rows": rows,
        })) + "\n"
    }
}

fn cell(v: Option<f64>) -> String {
    v.filter(|x| x.is_finite()).map(format_f64).unwrap_or_default()
}

fn point_cell(p: &[f64]) -> String {
    p.iter().map(|&x| format_f64(x)).collect::<Vec<_>>().join(";")
}

pub fn verdict_csv(v: &ClassificationVerdict) -> String {
    let mut out = String::from("property,holds,worst_value,threshold_used,min_value,worst_point\n");
    for p in &v.properties {
        out += &format!(
            "{},{},{},{},{},{}\n",
            p.property,
            p.holds,
            cell(Some(p.worst_value)),
            cell(Some(p.threshold_used)),
            cell(p.min_value),
            point_cell(&p.worst_point)
        );
    }
    if let Some(s) = v.sigma_estimate {
        out += &format!("sigma_estimate,,{},,,\n", format_f64(s));
    }
    out
}

pub fn theorem_csv(r: &TheoremReport) -> String {
    let mut out = String::from("fixture,property,expected,observed,passed,worst_value,threshold_used,min_value,worst_point\n");
    for e in &r.entries {
        out += &format!(
            "{},{},{},{},{},{},{},{},{}\n",
            e.fixture,
            e.property,
            e.expected,
            e.observed.map(|b| b.to_string()).unwrap_or_default(),
            e.passed,
            cell(e.worst_value),
            cell(e.threshold_used),
            cell(e.min_value),
            point_cell(&e.worst_point)
        );
    }
    out
}
