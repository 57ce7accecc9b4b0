//! `run`: batch mechanism runs emitted as CSV or JSON rows.

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Result};
use serde_json::{Map, Value};

use covermech::oracles::ufl::solve_flp;
use covermech::oracles::vc::min_vertex_cover_exact;
use covermech::par::{self, Exec};
use covermech::ufl::{run_ufl_mechanism, UflOptions};
use covermech::verify::frugality_nu;
use covermech::{Error, UflInstance, VcInstance};

use crate::mechanisms::{run_mechanism, MechanismSpec};

/// Column order of every output row.
pub const COLUMNS: [&str; 11] = [
    "instance",
    "seed",
    "mechanism",
    "cost",
    "opt",
    "ratio",
    "payments",
    "nu",
    "frugality_ratio",
    "parts",
    "lambda_max",
];

#[derive(Debug, Clone, Default)]
pub struct Row {
    pub instance: String,
    pub seed: u64,
    pub mechanism: String,
    pub cost: f64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub payments: f64,
    pub nu: Option<f64>,
    pub frugality_ratio: Option<f64>,
    pub parts: Option<usize>,
    pub lambda_max: Option<f64>,
    pub wall_ms: Option<f64>,
}

fn num(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

impl Row {
    fn fields(&self) -> Vec<String> {
        let mut f = vec![
            self.instance.clone(),
            self.seed.to_string(),
            self.mechanism.clone(),
            self.cost.to_string(),
            num(self.opt),
            num(self.ratio),
            self.payments.to_string(),
            num(self.nu),
            num(self.frugality_ratio),
            self.parts.map_or_else(String::new, |p| p.to_string()),
            num(self.lambda_max),
        ];
        if let Some(ms) = self.wall_ms {
            f.push(format!("{ms:.3}"));
        }
        f
    }

    fn json(&self) -> Value {
        let opt = |v: Option<f64>| v.map_or(Value::Null, Value::from);
        let mut m = Map::new();
        m.insert("instance".into(), self.instance.clone().into());
        m.insert("seed".into(), self.seed.into());
        m.insert("mechanism".into(), self.mechanism.clone().into());
        m.insert("cost".into(), self.cost.into());
        m.insert("opt".into(), opt(self.opt));
        m.insert("ratio".into(), opt(self.ratio));
        m.insert("payments".into(), self.payments.into());
        m.insert("nu".into(), opt(self.nu));
        m.insert("frugality_ratio".into(), opt(self.frugality_ratio));
        m.insert("parts".into(), self.parts.map_or(Value::Null, Value::from));
        m.insert("lambda_max".into(), opt(self.lambda_max));
        if let Some(ms) = self.wall_ms {
            m.insert("wall_ms".into(), ms.into());
        }
        Value::Object(m)
    }
}

/// Turns oracle size limits into blanks.
fn limited<T>(r: covermech::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::SizeLimit { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn ratio(cost: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        cost / opt
    } else if cost > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

pub fn vc_row(
    id: &str,
    inst: &VcInstance,
    spec: &MechanismSpec,
    with_nu: bool,
    timing: bool,
) -> Result<Row> {
    let start = Instant::now();
    let out = run_mechanism(spec, inst, Exec::Sequential)?;
    let wall_ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    if !out.result.is_cover {
        bail!("{id}: mechanism {} returned a non-cover", spec.kind.name());
    }
    let cost = out.result.cost(inst);
    let payments = out.result.total_payment();
    let opt = limited(min_vertex_cover_exact(inst.graph(), &inst.node_costs()))?.map(|(_, v)| v);
    let nu = if with_nu {
        limited(frugality_nu(inst.graph(), &inst.node_costs()))?.map(|r| r.nu)
    } else {
        None
    };
    Ok(Row {
        instance: id.to_string(),
        seed: spec.seed,
        mechanism: spec.kind.name().to_string(),
        cost,
        opt,
        ratio: opt.map(|o| ratio(cost, o)),
        payments,
        nu,
        frugality_ratio: nu.filter(|&v| v > 0.0).map(|v| payments / v),
        parts: out.parts,
        lambda_max: out.lambda_max,
        wall_ms,
    })
}

/// Expected cost and payments of the facility-location mechanism; OPT is the LP optimum.
pub fn ufl_row(
    id: &str,
    inst: &UflInstance,
    seed: u64,
    enumerate: bool,
    timing: bool,
) -> Result<Row> {
    let start = Instant::now();
    let res = run_ufl_mechanism(
        inst,
        seed,
        UflOptions {
            exec: Exec::Sequential,
            enumerate,
        },
    )?;
    let wall_ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let cost = res.expected_cost();
    let opt = solve_flp(inst)?.value;
    Ok(Row {
        instance: id.to_string(),
        seed,
        mechanism: "ufl".into(),
        cost,
        opt: Some(opt),
        ratio: Some(ratio(cost, opt)),
        payments: (0..inst.agent_count())
            .map(|a| res.expected_payment(a))
            .sum(),
        parts: Some(res.outcomes.len()),
        wall_ms,
        ..Default::default()
    })
}

/// Evaluates jobs in parallel and returns rows in job order.
pub fn collect_rows<J, F>(jobs: &[J], f: F) -> Result<Vec<Row>>
where
    J: Sync,
    F: Fn(&J) -> Result<Row> + Sync + Send,
{
    par::map_indexed(Exec::default(), jobs.len(), |k| f(&jobs[k]))
        .into_iter()
        .collect()
}

pub fn write_rows(out: &mut dyn Write, rows: &[Row], json: bool, timing: bool) -> Result<()> {
    if json {
        let v: Vec<Value> = rows.iter().map(Row::json).collect();
        serde_json::to_writer_pretty(&mut *out, &v)?;
        writeln!(out)?;
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if timing {
        header.push("wall_ms");
    }
    w.write_record(&header)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}
