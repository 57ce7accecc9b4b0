//! `key=value` generator specs and instance loading.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use covermech::instance::{
    generate_gadget, generate_random_ufl, generate_random_vc_instance, generate_ring_ufl,
    load_instance, Instance, UflParams,
};
use covermech::{UflInstance, VcInstance};

/// Parsed `key=value` words with the set of keys a generator accepts.
pub struct KeyValues {
    what: &'static str,
    map: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(what: &'static str, words: &[String], allowed: &[&str]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| anyhow!("{what}: expected key=value, got {w:?}"))?;
            if !allowed.contains(&k) {
                bail!(
                    "{what}: unknown key {k:?} (allowed: {})",
                    allowed.join(", ")
                );
            }
            if map.insert(k.to_string(), v.to_string()).is_some() {
                bail!("{what}: key {k:?} given twice");
            }
        }
        Ok(KeyValues { what, map })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str, default: Option<T>) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.map.get(key) {
            Some(v) => v
                .parse()
                .map_err(|e| anyhow!("{}: bad value {v:?} for {key}: {e}", self.what)),
            None => default.ok_or_else(|| anyhow!("{}: missing {key}=...", self.what)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomVcSpec {
    pub n: usize,
    pub p: f64,
    pub r: usize,
    pub seed: u64,
}

impl RandomVcSpec {
    pub fn parse(words: &[String]) -> Result<Self> {
        let kv = KeyValues::parse("--random", words, &["n", "p", "r", "seed"])?;
        Ok(RandomVcSpec {
            n: kv.get("n", None)?,
            p: kv.get("p", None)?,
            r: kv.get("r", Some(1))?,
            seed: kv.get("seed", Some(0))?,
        })
    }

    pub fn id(&self) -> String {
        format!("random-n{}-p{}-r{}-s{}", self.n, self.p, self.r, self.seed)
    }

    pub fn generate(&self) -> Result<VcInstance> {
        Ok(generate_random_vc_instance(
            self.n, self.p, self.r, self.seed,
        )?)
    }
}

pub fn ufl_params(words: &[String]) -> Result<UflParams> {
    let kv = KeyValues::parse(
        "--ufl",
        words,
        &["facilities", "clients", "agents", "dims", "seed"],
    )?;
    Ok(UflParams {
        facilities: kv.get("facilities", None)?,
        clients: kv.get("clients", None)?,
        agents: kv.get("agents", Some(2))?,
        dims: kv.get("dims", Some(1))?,
        seed: kv.get("seed", Some(0))?,
    })
}

pub fn ring_ufl(words: &[String]) -> Result<UflInstance> {
    let kv = KeyValues::parse("--ring", words, &["k", "agents", "seed"])?;
    Ok(generate_ring_ufl(
        kv.get("k", None)?,
        kv.get("agents", Some(2))?,
        kv.get("seed", Some(0))?,
    )?)
}

/// The gadget on `2n` nodes with unit costs.
pub fn gadget_instance(n: usize) -> Result<VcInstance> {
    let (g, own) = generate_gadget(n)?;
    Ok(VcInstance::from_node_costs(g, own, &vec![1.0; 2 * n])?)
}

pub fn generate_ufl(words: &[String]) -> Result<UflInstance> {
    Ok(generate_random_ufl(ufl_params(words)?)?)
}

/// A named instance for batch runs.
pub struct Named<T> {
    pub id: String,
    pub instance: T,
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

/// Files given directly, plus every `*.json` inside given directories, sorted by path.
pub fn expand_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inside: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading directory {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|q| q.extension().is_some_and(|x| x == "json"))
                .collect();
            inside.sort();
            out.extend(inside);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn load_any(path: &Path) -> Result<Named<Instance>> {
    let instance = load_instance(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(Named {
        id: stem(path),
        instance,
    })
}

pub fn load_vc(path: &Path) -> Result<Named<VcInstance>> {
    let n = load_any(path)?;
    match n.instance {
        Instance::Vc(v) => Ok(Named {
            id: n.id,
            instance: v,
        }),
        Instance::Ufl(_) => bail!(
            "{} is a facility-location instance, expected vertex cover",
            path.display()
        ),
    }
}

pub fn load_ufl(path: &Path) -> Result<Named<UflInstance>> {
    let n = load_any(path)?;
    match n.instance {
        Instance::Ufl(u) => Ok(Named {
            id: n.id,
            instance: u,
        }),
        Instance::Vc(_) => bail!(
            "{} is a vertex-cover instance, expected facility location",
            path.display()
        ),
    }
}
