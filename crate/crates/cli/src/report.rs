//! `report`: per-mechanism summary of `run` CSV files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};

#[derive(Default)]
struct Stats {
    rows: usize,
    ratios: Vec<f64>,
    payments: Vec<f64>,
    frugality: Vec<f64>,
    parts: Vec<f64>,
}

fn mean(v: &[f64]) -> String {
    if v.is_empty() {
        String::new()
    } else {
        (v.iter().sum::<f64>() / v.len() as f64).to_string()
    }
}

fn max(v: &[f64]) -> String {
    v.iter()
        .copied()
        .reduce(f64::max)
        .map_or_else(String::new, |x| x.to_string())
}

pub fn run_report(inputs: &[PathBuf], out: &mut dyn Write) -> Result<()> {
    let mut by_mech: BTreeMap<String, Stats> = BTreeMap::new();
    for path in inputs {
        let mut r =
            csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
        let headers = r.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| anyhow!("{}: missing column {name}", path.display()))
        };
        let (mech, ratio, pay, fr, parts) = (
            col("mechanism")?,
            col("ratio")?,
            col("payments")?,
            col("frugality_ratio")?,
            col("parts")?,
        );
        for rec in r.records() {
            let rec = rec?;
            let s = by_mech.entry(rec[mech].to_string()).or_default();
            s.rows += 1;
            let push = |v: &mut Vec<f64>, k: usize| -> Result<()> {
                if !rec[k].is_empty() {
                    v.push(rec[k].parse().with_context(|| {
                        format!("{}: bad number {:?}", path.display(), &rec[k])
                    })?);
                }
                Ok(())
            };
            push(&mut s.ratios, ratio)?;
            push(&mut s.payments, pay)?;
            push(&mut s.frugality, fr)?;
            push(&mut s.parts, parts)?;
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "mechanism",
        "rows",
        "mean_ratio",
        "max_ratio",
        "mean_payments",
        "mean_frugality_ratio",
        "max_frugality_ratio",
        "mean_parts",
        "max_parts",
    ])?;
    for (m, s) in &by_mech {
        w.write_record([
            m.clone(),
            s.rows.to_string(),
            mean(&s.ratios),
            max(&s.ratios),
            mean(&s.payments),
            mean(&s.frugality),
            max(&s.frugality),
            mean(&s.parts),
            max(&s.parts),
        ])?;
    }
    w.flush()?;
    Ok(())
}
