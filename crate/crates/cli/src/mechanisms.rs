//! Mechanism selection shared by `run`, `verify` and `frugality`.

use anyhow::bail;
use clap::ValueEnum;

use covermech::decomposition::{
    minor_closed_mechanism, rdim_mechanism, threehop_mechanism, DecompositionOptions,
};
use covermech::par::Exec;
use covermech::threshold::{
    alpha_gx, ax_mechanism, bx_mechanism, perron_vector, run_threshold_mechanism, ScalingVector,
};
use covermech::{Error, Graph, MechanismResult, Result, VcInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MechanismKind {
    Ax,
    Bx,
    Rdim,
    Minor,
    Threehop,
}

impl MechanismKind {
    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::Ax => "ax",
            MechanismKind::Bx => "bx",
            MechanismKind::Rdim => "rdim",
            MechanismKind::Minor => "minor",
            MechanismKind::Threehop => "threehop",
        }
    }

    pub fn parse(s: &str) -> anyhow::Result<Self> {
        match <Self as ValueEnum>::from_str(s, true) {
            Ok(k) => Ok(k),
            Err(_) => bail!("unknown mechanism {s:?} (expected ax, bx, rdim, minor or threehop)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Scaling {
    #[default]
    Ones,
    Degree,
    Perron,
}

#[derive(Debug, Clone, Copy)]
pub struct MechanismSpec {
    pub kind: MechanismKind,
    pub scaling: Scaling,
    pub gamma: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: MechanismResult,
    pub parts: Option<usize>,
    /// Largest adjacency eigenvalue when the Perron scaling is used.
    pub lambda_max: Option<f64>,
    /// Proven approximation ratio, when known at this size.
    pub ratio_bound: Option<f64>,
}

pub fn scaling_vector(g: &Graph, s: Scaling) -> (ScalingVector, Option<f64>) {
    match s {
        Scaling::Ones => (ScalingVector::ones(g.n()), None),
        Scaling::Degree => (ScalingVector::degrees(g), None),
        Scaling::Perron => {
            let (x, lambda) = perron_vector(g, 1e-12);
            (x, Some(lambda))
        }
    }
}

fn alpha_bound(g: &Graph, x: &ScalingVector) -> Result<Option<f64>> {
    match alpha_gx(g, x) {
        Ok(w) => Ok(Some(w.value + 1.0)),
        Err(Error::SizeLimit { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn run_mechanism(spec: &MechanismSpec, inst: &VcInstance, exec: Exec) -> Result<Outcome> {
    let opts = DecompositionOptions {
        exec,
        ..Default::default()
    };
    let g = inst.graph();
    Ok(match spec.kind {
        MechanismKind::Ax | MechanismKind::Bx => {
            let (x, lambda_max) = scaling_vector(g, spec.scaling);
            let result = if spec.kind == MechanismKind::Ax {
                run_threshold_mechanism(&ax_mechanism(g, &x), inst)?
            } else {
                run_threshold_mechanism(&bx_mechanism(g, &x), inst)?
            };
            Outcome {
                result,
                parts: None,
                lambda_max,
                ratio_bound: alpha_bound(g, &x)?,
            }
        }
        kind => {
            let run = match kind {
                MechanismKind::Rdim => rdim_mechanism(inst, spec.seed, opts)?,
                MechanismKind::Minor => minor_closed_mechanism(inst, spec.gamma, spec.seed, opts)?,
                _ => threehop_mechanism(inst, spec.gamma, opts)?,
            };
            Outcome {
                parts: Some(run.part_count()),
                ratio_bound: Some(run.ratio_bound()),
                lambda_max: None,
                result: run.result,
            }
        }
    })
}
