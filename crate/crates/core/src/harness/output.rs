use std::io::Write;

use super::monte_carlo::{AggregateRow, MeanStd};
use super::run::StepRecord;

/// `%.9g`: nine significant digits, trailing zeros trimmed, exponent form
/// outside `1e-4 <= |x| < 1e9`.
pub fn format_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const STEP_HEADER: [&str; 11] = [
    "k", "n_true", "n_est", "ospa", "ospa_loc", "ospa_card", "sensor_x", "sensor_y", "cmd_id",
    "cost", "ctrl_ms",
];

/// Writes the step table. Without `timing` the `ctrl_ms` column is zero so
/// output depends only on the scenario and seed.
pub fn write_steps<W: Write>(out: W, records: &[StepRecord], timing: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STEP_HEADER)?;
    for r in records {
        w.write_record([
            r.k.to_string(),
            r.n_true.to_string(),
            r.n_est.to_string(),
            format_g9(r.ospa),
            format_g9(r.ospa_loc),
            format_g9(r.ospa_card),
            format_g9(r.sensor_x),
            format_g9(r.sensor_y),
            r.cmd_id.to_string(),
            format_g9(r.cost),
            format_g9(if timing { r.ctrl_ms } else { 0.0 }),
        ])?;
    }
    w.flush()?;
    Ok(())
}

const AGGREGATE_METRICS: [&str; 7] = [
    "ospa",
    "ospa_loc",
    "ospa_card",
    "n_est",
    "card_err",
    "centroid_dist",
    "ctrl_ms",
];

fn metric_columns(row: &AggregateRow, timing: bool) -> [MeanStd; 7] {
    let ctrl = if timing { row.ctrl_ms } else { MeanStd::default() };
    [
        row.ospa,
        row.ospa_loc,
        row.ospa_card,
        row.n_est,
        row.card_err,
        row.centroid_distance,
        ctrl,
    ]
}

fn aggregate_header(prefix: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    h.push("k".into());
    for m in AGGREGATE_METRICS {
        h.push(format!("{m}_mean"));
        h.push(format!("{m}_std"));
    }
    h
}

fn aggregate_fields(row: &AggregateRow, timing: bool) -> Vec<String> {
    let mut f = vec![row.k.to_string()];
    for m in metric_columns(row, timing) {
        f.push(format_g9(m.mean));
        f.push(format_g9(m.std));
    }
    f
}

pub fn write_aggregate<W: Write>(out: W, rows: &[AggregateRow], timing: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(aggregate_header(&[]))?;
    for row in rows {
        w.write_record(aggregate_fields(row, timing))?;
    }
    w.flush()?;
    Ok(())
}

/// Aggregate tables for several values of one parameter, keyed by a leading
/// `value` column.
pub fn write_sweep<W: Write>(
    out: W,
    tables: &[(String, Vec<AggregateRow>)],
    timing: bool,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(aggregate_header(&["value"]))?;
    for (value, rows) in tables {
        for row in rows {
            let mut fields = vec![value.clone()];
            fields.extend(aggregate_fields(row, timing));
            w.write_record(fields)?;
        }
    }
    w.flush()?;
    Ok(())
}
