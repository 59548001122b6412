//! Per-run result rows, their CSV form, and report comparison.

use std::io::{Read, Write};

use thiserror::Error;

use crate::sweep::{Algorithm, RunOutcome};

pub const CSV_HEADER: [&str; 10] = [
    "dataset",
    "algo",
    "c",
    "density",
    "s_size",
    "t_size",
    "peak_edges",
    "passes_or_rounds",
    "wall_ms",
    "seed",
];

const DENSITY_DIGITS: usize = 6;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected CSV header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: bad {column} value {value:?}")]
    Field {
        row: usize,
        column: &'static str,
        value: String,
    },
    #[error("reports cover different c grids (row {row}: {a} vs {b})")]
    GridMismatch { row: usize, a: f64, b: f64 },
    #[error("reports have {a} and {b} rows")]
    LengthMismatch { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub dataset: String,
    pub algo: Algorithm,
    pub c: f64,
    /// Rounded to six significant digits, as written.
    pub density: f64,
    pub s_size: usize,
    pub t_size: usize,
    pub peak_edges: Option<usize>,
    pub passes_or_rounds: u64,
    pub wall_ms: f64,
    pub seed: u64,
    pub error: Option<String>,
}

impl RunRow {
    pub fn from_outcome(dataset: &str, algo: Algorithm, seed: u64, out: &RunOutcome) -> Self {
        let (s_size, t_size) = out.pair.sizes();
        RunRow {
            dataset: dataset.to_string(),
            algo,
            c: crate::sweep::ratio_to_f64(out.c),
            density: round_significant(out.density.value(), DENSITY_DIGITS),
            s_size,
            t_size,
            peak_edges: out.peak_edges,
            passes_or_rounds: out.passes_or_rounds,
            wall_ms: round_millis(out.wall_ms()),
            seed,
            error: None,
        }
    }

    pub fn failed(dataset: &str, algo: Algorithm, c: f64, seed: u64, error: String) -> Self {
        RunRow {
            dataset: dataset.to_string(),
            algo,
            c,
            density: 0.0,
            s_size: 0,
            t_size: 0,
            peak_edges: None,
            passes_or_rounds: 0,
            wall_ms: 0.0,
            seed,
            error: Some(error),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub rows: Vec<RunRow>,
}

impl RunReport {
    pub fn max_density(&self) -> f64 {
        self.ok_rows().map(|r| r.density).fold(0.0, f64::max)
    }

    pub fn total_wall_ms(&self) -> f64 {
        self.ok_rows().map(|r| r.wall_ms).sum()
    }

    fn ok_rows(&self) -> impl Iterator<Item = &RunRow> {
        self.rows.iter().filter(|r| r.error.is_none())
    }

    /// Writes the CSV. The `error` column is added only when some row failed.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ReportError> {
        let with_error = self.rows.iter().any(|r| r.error.is_some());
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = CSV_HEADER.to_vec();
        if with_error {
            header.push("error");
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.dataset.clone(),
                r.algo.label().to_string(),
                r.c.to_string(),
                format_significant(r.density, DENSITY_DIGITS),
                r.s_size.to_string(),
                r.t_size.to_string(),
                r.peak_edges.map(|p| p.to_string()).unwrap_or_default(),
                r.passes_or_rounds.to_string(),
                format!("{:.3}", r.wall_ms),
                r.seed.to_string(),
            ];
            if with_error {
                rec.push(r.error.clone().unwrap_or_default());
            }
            w.write_record(&rec)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, ReportError> {
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let with_error = header.len() == CSV_HEADER.len() + 1 && header[10] == "error";
        if header[..CSV_HEADER.len().min(header.len())] != CSV_HEADER
            || !(header.len() == CSV_HEADER.len() || with_error)
        {
            return Err(ReportError::Header(header));
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = i + 1;
            let field = |k: usize| rec.get(k).unwrap_or("");
            fn parse<T: std::str::FromStr>(
                row: usize,
                column: &'static str,
                value: &str,
            ) -> Result<T, ReportError> {
                value.parse().map_err(|_| ReportError::Field {
                    row,
                    column,
                    value: value.to_string(),
                })
            }
            let peak = field(6);
            let error = if with_error && !field(10).is_empty() {
                Some(field(10).to_string())
            } else {
                None
            };
            rows.push(RunRow {
                dataset: field(0).to_string(),
                algo: parse(row, "algo", field(1))?,
                c: parse(row, "c", field(2))?,
                density: parse(row, "density", field(3))?,
                s_size: parse(row, "s_size", field(4))?,
                t_size: parse(row, "t_size", field(5))?,
                peak_edges: if peak.is_empty() {
                    None
                } else {
                    Some(parse(row, "peak_edges", peak)?)
                },
                passes_or_rounds: parse(row, "passes_or_rounds", field(7))?,
                wall_ms: parse(row, "wall_ms", field(8))?,
                seed: parse(row, "seed", field(9))?,
                error,
            });
        }
        Ok(RunReport { rows })
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    format_significant(x, digits).parse().unwrap_or(x)
}

fn round_millis(ms: f64) -> f64 {
    (ms * 1e3).round() / 1e3
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparedRow {
    pub c: f64,
    pub density_a: f64,
    pub density_b: f64,
    /// `density_b / density_a`, 1 when both are zero.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ComparedRow>,
    /// Max density of `b` over max density of `a`.
    pub max_density_ratio: f64,
    /// Total wall time of `a` over that of `b`.
    pub speedup: f64,
    /// Pearson correlation of the two density-vs-c curves.
    pub correlation: f64,
}

fn ratio(b: f64, a: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        1.0
    } else {
        b / a
    }
}

/// Aligns two reports row by row; both must cover the same `c` values in the
/// same order.
pub fn compare_reports(a: &RunReport, b: &RunReport) -> Result<Comparison, ReportError> {
    if a.rows.len() != b.rows.len() {
        return Err(ReportError::LengthMismatch {
            a: a.rows.len(),
            b: b.rows.len(),
        });
    }
    let mut rows = Vec::with_capacity(a.rows.len());
    for (i, (ra, rb)) in a.rows.iter().zip(&b.rows).enumerate() {
        if (ra.c - rb.c).abs() > 1e-12 * ra.c.abs().max(rb.c.abs()) {
            return Err(ReportError::GridMismatch {
                row: i + 1,
                a: ra.c,
                b: rb.c,
            });
        }
        rows.push(ComparedRow {
            c: ra.c,
            density_a: ra.density,
            density_b: rb.density,
            ratio: ratio(rb.density, ra.density),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.density_a).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.density_b).collect();
    Ok(Comparison {
        max_density_ratio: ratio(b.max_density(), a.max_density()),
        speedup: ratio(a.total_wall_ms(), b.total_wall_ms()),
        correlation: pearson(&xs, &ys),
        rows,
    })
}

/// Pearson correlation; 1 for two constant, identical series.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    if n == 0.0 {
        return f64::NAN;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 && syy == 0.0 {
        return if xs == ys { 1.0 } else { f64::NAN };
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(c: f64, density: f64, wall_ms: f64) -> RunRow {
        RunRow {
            dataset: "toy".into(),
            algo: Algorithm::Baseline,
            c,
            density,
            s_size: 3,
            t_size: 4,
            peak_edges: None,
            passes_or_rounds: 5,
            wall_ms,
            seed: 7,
            error: None,
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(1.0, 6), "1");
        assert_eq!(format_significant(10.954451150103322, 6), "10.9545");
        assert_eq!(format_significant(2.449489742783178, 6), "2.44949");
        assert_eq!(format_significant(123456789.0, 6), "1.23457e+08");
        assert_eq!(format_significant(0.000012345678, 6), "1.23457e-05");
        assert_eq!(format_significant(0.5, 6), "0.5");
        assert_eq!(format_significant(999999.7, 6), "1e+06");
    }

    #[test]
    fn header_is_exact() {
        let report = RunReport {
            rows: vec![row(0.5, 1.0, 1.0)],
        };
        let csv = report.to_csv_string();
        assert!(csv.starts_with(
            "dataset,algo,c,density,s_size,t_size,peak_edges,passes_or_rounds,wall_ms,seed\n"
        ));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn error_column_only_when_needed() {
        let mut report = RunReport {
            rows: vec![row(0.5, 1.0, 1.0)],
        };
        report.rows.push(RunRow::failed(
            "toy",
            Algorithm::Baseline,
            1.0,
            7,
            "bad f".into(),
        ));
        let csv = report.to_csv_string();
        assert!(csv.lines().next().unwrap().ends_with(",seed,error"));
        assert_eq!(RunReport::read_csv(csv.as_bytes()).unwrap(), report);
    }

    #[test]
    fn rejects_foreign_headers() {
        assert!(matches!(
            RunReport::read_csv("a,b\n1,2\n".as_bytes()),
            Err(ReportError::Header(_))
        ));
    }

    #[test]
    fn identical_reports_compare_to_one() {
        let a = RunReport {
            rows: vec![row(0.5, 2.0, 3.0), row(1.0, 4.0, 5.0), row(2.0, 1.0, 1.0)],
        };
        let cmp = compare_reports(&a, &a).unwrap();
        assert!(cmp.rows.iter().all(|r| r.ratio == 1.0));
        assert_eq!(cmp.max_density_ratio, 1.0);
        assert_eq!(cmp.speedup, 1.0);
        assert!((cmp.correlation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubled_densities_give_ratio_two() {
        let a = RunReport {
            rows: vec![row(0.5, 2.0, 3.0), row(1.0, 4.0, 5.0)],
        };
        let mut b = a.clone();
        for r in &mut b.rows {
            r.density *= 2.0;
        }
        assert_eq!(compare_reports(&a, &b).unwrap().max_density_ratio, 2.0);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = RunReport {
            rows: vec![row(0.5, 2.0, 3.0)],
        };
        let b = RunReport {
            rows: vec![row(0.25, 2.0, 3.0)],
        };
        assert!(matches!(
            compare_reports(&a, &b),
            Err(ReportError::GridMismatch { row: 1, .. })
        ));
        assert!(matches!(
            compare_reports(&a, &RunReport::default()),
            Err(ReportError::LengthMismatch { a: 1, b: 0 })
        ));
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
    }
}
