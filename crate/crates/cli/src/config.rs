//! Kernel strings, default fidelity-weight tables and the flat key=value
//! sweep configuration format.

use std::path::PathBuf;

use ogstv_core::{GroupConfig, KernelSpec, SolverParams};

/// A parsed `--kernel` argument. `delta` is the 1x1 average (the identity),
/// kept distinct only in its label.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelChoice {
    pub spec: KernelSpec,
    pub label: String,
}

/// Accepts `gaussian:SIZE:SIGMA`, `average:SIZE` or `delta`.
pub fn parse_kernel(s: &str) -> Result<KernelChoice, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let choice = match parts.as_slice() {
        ["delta"] => KernelChoice {
            spec: KernelSpec::Average { size: 1 },
            label: "delta".into(),
        },
        ["average", size] => {
            let size: usize = size.parse().map_err(|_| format!("bad size in `{s}`"))?;
            KernelChoice {
                spec: KernelSpec::Average { size },
                label: format!("average:{size}"),
            }
        }
        ["gaussian", size, sigma] => {
            let size: usize = size.parse().map_err(|_| format!("bad size in `{s}`"))?;
            let sigma: f64 = sigma.parse().map_err(|_| format!("bad sigma in `{s}`"))?;
            KernelChoice {
                spec: KernelSpec::Gaussian { size, sigma },
                label: format!("gaussian:{size}:{sigma}"),
            }
        }
        _ => {
            return Err(format!(
                "unrecognized kernel `{s}` (expected gaussian:SIZE:SIGMA, average:SIZE or delta)"
            ))
        }
    };
    choice.spec.validate().map_err(|e| e.to_string())?;
    Ok(choice)
}

/// Built-in fidelity weights per kernel family and noise level.
pub fn default_mu(spec: &KernelSpec, level: f64) -> Option<f64> {
    let slot = [0.3, 0.4, 0.5, 0.6]
        .iter()
        .position(|l| (l - level).abs() < 1e-9)?;
    let table: [f64; 4] = match spec {
        KernelSpec::Gaussian { size: 7, .. } => [100.0, 80.0, 60.0, 40.0],
        KernelSpec::Gaussian { size: 15, .. } => [120.0, 110.0, 100.0, 90.0],
        KernelSpec::Average { size: 7 } => [100.0, 80.0, 60.0, 40.0],
        _ => return None,
    };
    Some(table[slot])
}

/// Optional solver-parameter overrides layered on top of the defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverOverrides {
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub beta3: Option<f64>,
    pub gamma: Option<f64>,
    pub group_size: Option<usize>,
    pub inner_iters: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
}

impl SolverOverrides {
    pub fn apply(&self, mu: f64) -> Result<SolverParams, String> {
        let mut p = SolverParams::new(mu);
        if let Some(v) = self.beta1 {
            p.beta1 = v;
        }
        if let Some(v) = self.beta2 {
            p.beta2 = v;
        }
        if let Some(v) = self.beta3 {
            p.beta3 = v;
        }
        if let Some(v) = self.gamma {
            p.gamma = v;
        }
        if let Some(k) = self.group_size {
            p.group = GroupConfig::new(k).map_err(|e| e.to_string())?;
        }
        if let Some(n) = self.inner_iters {
            p.inner.max_inner_iterations = n;
        }
        if let Some(v) = self.tol {
            p.outer_tolerance = v;
        }
        if let Some(n) = self.max_iters {
            p.max_outer_iterations = n;
        }
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }

    /// Right-biased merge: values set in `over` win.
    pub fn merged_with(&self, over: &SolverOverrides) -> SolverOverrides {
        SolverOverrides {
            beta1: over.beta1.or(self.beta1),
            beta2: over.beta2.or(self.beta2),
            beta3: over.beta3.or(self.beta3),
            gamma: over.gamma.or(self.gamma),
            group_size: over.group_size.or(self.group_size),
            inner_iters: over.inner_iters.or(self.inner_iters),
            tol: over.tol.or(self.tol),
            max_iters: over.max_iters.or(self.max_iters),
        }
    }
}

/// A parsed sweep description: the Cartesian grid of noise levels and seeds
/// to run over one clean image.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub image: PathBuf,
    pub output_dir: Option<PathBuf>,
    pub kernel: KernelChoice,
    pub levels: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Explicit level -> mu entries; levels without one fall back to the
    /// built-in tables.
    pub mu_per_level: Vec<(f64, f64)>,
    pub solver: SolverOverrides,
}

impl SweepConfig {
    pub fn resolve_mu(&self, level: f64) -> Option<f64> {
        self.mu_per_level
            .iter()
            .find(|(l, _)| (l - level).abs() < 1e-9)
            .map(|(_, m)| *m)
            .or_else(|| default_mu(&self.kernel.spec, level))
    }

    /// Every listed level must resolve to a fidelity weight.
    pub fn validate(&self) -> Result<(), String> {
        for level in &self.levels {
            if !(0.0..=1.0).contains(level) {
                return Err(format!("noise level {level} outside [0, 1]"));
            }
            if self.resolve_mu(*level).is_none() {
                return Err(format!(
                    "no mu for level {level}: add `mu.{level} = VALUE` or `mu = VALUE`"
                ));
            }
        }
        if self.seeds.is_empty() {
            return Err("at least one seed is required".into());
        }
        Ok(())
    }
}

/// Parses the flat `key = value` format with `#` comments. CLI flags are
/// layered on top by the caller.
pub fn parse_sweep_config(text: &str) -> Result<SweepConfig, String> {
    let mut image = None;
    let mut output_dir = None;
    let mut kernel = None;
    let mut levels = Vec::new();
    let mut seeds = vec![1u64];
    let mut mu_per_level = Vec::new();
    let mut flat_mu: Option<f64> = None;
    let mut solver = SolverOverrides::default();

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| format!("line {}: bad {what} `{value}`", lineno + 1);
        match key {
            "image" => image = Some(PathBuf::from(value)),
            "output_dir" => output_dir = Some(PathBuf::from(value)),
            "kernel" => kernel = Some(parse_kernel(value).map_err(|e| format!("line {}: {e}", lineno + 1))?),
            "levels" => {
                levels = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<f64>().map_err(|_| bad("level")))
                    .collect::<Result<_, _>>()?;
            }
            "seeds" => {
                seeds = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<u64>().map_err(|_| bad("seed")))
                    .collect::<Result<_, _>>()?;
            }
            "mu" => flat_mu = Some(value.parse().map_err(|_| bad("mu"))?),
            "beta1" => solver.beta1 = Some(value.parse().map_err(|_| bad("beta1"))?),
            "beta2" => solver.beta2 = Some(value.parse().map_err(|_| bad("beta2"))?),
            "beta3" => solver.beta3 = Some(value.parse().map_err(|_| bad("beta3"))?),
            "gamma" => solver.gamma = Some(value.parse().map_err(|_| bad("gamma"))?),
            "group_size" => solver.group_size = Some(value.parse().map_err(|_| bad("group_size"))?),
            "inner_iters" => solver.inner_iters = Some(value.parse().map_err(|_| bad("inner_iters"))?),
            "tol" => solver.tol = Some(value.parse().map_err(|_| bad("tol"))?),
            "max_iters" => solver.max_iters = Some(value.parse().map_err(|_| bad("max_iters"))?),
            _ if key.starts_with("mu.") => {
                let level: f64 = key[3..].parse().map_err(|_| bad("mu level key"))?;
                let mu: f64 = value.parse().map_err(|_| bad("mu"))?;
                mu_per_level.push((level, mu));
            }
            _ => return Err(format!("line {}: unknown key `{key}`", lineno + 1)),
        }
    }

    if let Some(mu) = flat_mu {
        // flat mu backfills every level without an explicit entry
        for level in &levels {
            if !mu_per_level.iter().any(|(l, _)| (l - level).abs() < 1e-9) {
                mu_per_level.push((*level, mu));
            }
        }
    }

    let config = SweepConfig {
        image: image.ok_or("missing `image`")?,
        output_dir,
        kernel: kernel.ok_or("missing `kernel`")?,
        levels,
        seeds,
        mu_per_level,
        solver,
    };
    config.validate()?;
    Ok(config)
}
