//! Experiment configuration: model/scheme selection, grid and scheme
//! parameters, snapshot times. Specs come from a flat key=value config
//! file overlaid with command-line flags.

use noflow::{Boundary, KShift, LimiterKind};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    BurgersP1,
    BurgersP2,
    LwrBackward,
    LwrForward,
    KeyfitzKranzer,
    Custom,
}

impl ModelKind {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "burgers_p1" => Ok(Self::BurgersP1),
            "burgers_p2" => Ok(Self::BurgersP2),
            "lwr_backward" => Ok(Self::LwrBackward),
            "lwr_forward" => Ok(Self::LwrForward),
            "keyfitz_kranzer" => Ok(Self::KeyfitzKranzer),
            "custom" => Ok(Self::Custom),
            other => Err(format!("unknown model '{other}'")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::BurgersP1 => "burgers_p1",
            Self::BurgersP2 => "burgers_p2",
            Self::LwrBackward => "lwr_backward",
            Self::LwrForward => "lwr_forward",
            Self::KeyfitzKranzer => "keyfitz_kranzer",
            Self::Custom => "custom",
        }
    }

    pub fn is_system(&self) -> bool {
        matches!(self, Self::KeyfitzKranzer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Nsle,
    Godunov,
    Rusanov,
    LaxFriedrichs,
}

impl SchemeKind {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "nsle" => Ok(Self::Nsle),
            "godunov" => Ok(Self::Godunov),
            "rusanov" => Ok(Self::Rusanov),
            "lax_friedrichs" => Ok(Self::LaxFriedrichs),
            other => Err(format!("unknown scheme '{other}'")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Nsle => "nsle",
            Self::Godunov => "godunov",
            Self::Rusanov => "rusanov",
            Self::LaxFriedrichs => "lax_friedrichs",
        }
    }

    pub fn is_baseline(&self) -> bool {
        !matches!(self, Self::Nsle)
    }
}

/// Flux choice for the `custom` model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CustomFlux {
    Burgers,
    Linear { velocity: f64 },
}

/// Initial data for the `custom` model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CustomInit {
    /// `offset + amplitude * sin(2 pi frequency x)`.
    Sine { offset: f64, amplitude: f64, frequency: f64 },
    /// Two constant states separated at `jump_at`.
    Riemann { left: f64, right: f64, jump_at: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CustomSpec {
    pub flux: CustomFlux,
    pub init: CustomInit,
    pub domain: (f64, f64),
    pub boundary: Boundary,
}

impl Default for CustomSpec {
    fn default() -> Self {
        Self {
            flux: CustomFlux::Burgers,
            init: CustomInit::Sine { offset: 1.0, amplitude: 0.5, frequency: 1.0 },
            domain: (0.0, 1.0),
            boundary: Boundary::Periodic,
        }
    }
}

/// A single experiment: what to solve, on how many cells, until when,
/// and which outputs to produce.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub model: ModelKind,
    pub scheme: SchemeKind,
    pub n_cells: usize,
    pub t_final: f64,
    pub limiter: LimiterKind,
    pub cfl: f64,
    /// `None` picks the model preset's default shift.
    pub k_mode: Option<KShift>,
    pub tvni: bool,
    /// Solution snapshot times; empty means the final time only.
    pub snapshots: Vec<f64>,
    pub dt_max: f64,
    pub custom: CustomSpec,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            model: ModelKind::BurgersP1,
            scheme: SchemeKind::Nsle,
            n_cells: 512,
            t_final: 0.25,
            limiter: LimiterKind::MinMod2,
            cfl: 0.45,
            k_mode: None,
            tvni: false,
            snapshots: Vec::new(),
            dt_max: 1.0,
            custom: CustomSpec::default(),
            out_dir: None,
        }
    }
}

impl ExperimentSpec {
    /// Snapshot schedule; the final time is always the last entry, so a
    /// run integrates to `t_final` whatever intermediate times are asked
    /// for.
    pub fn snapshot_times(&self) -> Vec<f64> {
        let mut times = self.snapshots.clone();
        match times.last() {
            Some(&last) if last < self.t_final * (1.0 - 1e-12) => times.push(self.t_final),
            None => times.push(self.t_final),
            _ => {}
        }
        times
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.t_final <= 0.0 || self.t_final.is_nan() {
            return Err(format!("t_final {} must be positive", self.t_final));
        }
        if self.n_cells < 16 {
            return Err(format!("n_cells {} below the minimum of 16", self.n_cells));
        }
        if self.scheme.is_baseline() && self.model.is_system() {
            return Err("baseline schemes only run scalar models".into());
        }
        if self.scheme == SchemeKind::Godunov
            && matches!(self.model, ModelKind::LwrBackward | ModelKind::LwrForward)
        {
            return Err("the Godunov baseline requires a convex flux".into());
        }
        let times = self.snapshot_times();
        for w in times.windows(2) {
            if w[1] <= w[0] {
                return Err("snapshot times must be strictly increasing".into());
            }
        }
        if times[0] <= 0.0 {
            return Err("snapshot times must be positive".into());
        }
        if *times.last().unwrap() > self.t_final + 1e-12 {
            return Err("snapshots must not exceed t_final".into());
        }
        let cfg = self.scheme_config();
        cfg.validate()?;
        Ok(())
    }

    pub fn scheme_config(&self) -> noflow::SchemeConfig {
        noflow::SchemeConfig {
            limiter: self.limiter,
            cfl_number: self.cfl,
            k_shift: self.k_mode.unwrap_or(KShift::Zero),
            tvni_mode: self.tvni,
            dt_max: self.dt_max,
        }
    }

    /// Flat key=value echo of the full configuration (metadata output).
    pub fn describe(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = vec![
            ("model".into(), self.model.name().into()),
            ("scheme".into(), self.scheme.name().into()),
            ("cells".into(), self.n_cells.to_string()),
            ("tfinal".into(), format!("{}", self.t_final)),
            ("limiter".into(), limiter_name(self.limiter)),
            ("cfl".into(), format!("{}", self.cfl)),
            (
                "k_mode".into(),
                match self.k_mode {
                    None => "preset".into(),
                    Some(KShift::Zero) => "zero".into(),
                    Some(KShift::Auto) => "auto".into(),
                    Some(KShift::Fixed(v)) => format!("fixed:{v}"),
                },
            ),
            ("tvni".into(), self.tvni.to_string()),
            ("dt_max".into(), format!("{}", self.dt_max)),
        ];
        if !self.snapshots.is_empty() {
            let list: Vec<String> = self.snapshots.iter().map(|t| format!("{t}")).collect();
            kv.push(("snapshots".into(), list.join(",")));
        }
        if self.model == ModelKind::Custom {
            let flux = match self.custom.flux {
                CustomFlux::Burgers => "burgers".into(),
                CustomFlux::Linear { velocity } => format!("linear:{velocity}"),
            };
            let init = match self.custom.init {
                CustomInit::Sine { offset, amplitude, frequency } => {
                    format!("sine:{offset}:{amplitude}:{frequency}")
                }
                CustomInit::Riemann { left, right, jump_at } => {
                    format!("riemann:{left}:{right}:{jump_at}")
                }
            };
            kv.push(("custom.flux".into(), flux));
            kv.push(("custom.init".into(), init));
            kv.push(("custom.domain".into(), format!("{}:{}", self.custom.domain.0, self.custom.domain.1)));
            kv.push((
                "custom.boundary".into(),
                match self.custom.boundary {
                    Boundary::Periodic => "periodic".into(),
                    Boundary::ConstantExtension => "constant".into(),
                },
            ));
        }
        kv
    }
}

pub fn limiter_name(l: LimiterKind) -> String {
    match l {
        LimiterKind::MinMod2 => "mm2".into(),
        LimiterKind::MinMod3 { alpha } => format!("mm3:{alpha}"),
        LimiterKind::Uno => "uno".into(),
    }
}

pub fn parse_limiter(s: &str) -> Result<LimiterKind, String> {
    if s == "mm2" {
        Ok(LimiterKind::MinMod2)
    } else if s == "uno" {
        Ok(LimiterKind::Uno)
    } else if s == "mm3" {
        Ok(LimiterKind::minmod3_default())
    } else if let Some(alpha) = s.strip_prefix("mm3:") {
        let alpha: f64 = alpha.parse().map_err(|_| format!("bad mm3 alpha '{alpha}'"))?;
        Ok(LimiterKind::MinMod3 { alpha })
    } else {
        Err(format!("unknown limiter '{s}'"))
    }
}

pub fn parse_k_mode(s: &str) -> Result<KShift, String> {
    if s == "zero" {
        Ok(KShift::Zero)
    } else if s == "auto" {
        Ok(KShift::Auto)
    } else if let Some(v) = s.strip_prefix("fixed:") {
        let v: f64 = v.parse().map_err(|_| format!("bad k value '{v}'"))?;
        if v < 0.0 {
            return Err("k shift must be nonnegative".into());
        }
        Ok(KShift::Fixed(v))
    } else {
        Err(format!("unknown k mode '{s}' (zero | auto | fixed:<v>)"))
    }
}

pub fn parse_custom_flux(s: &str) -> Result<CustomFlux, String> {
    if s == "burgers" {
        Ok(CustomFlux::Burgers)
    } else if let Some(v) = s.strip_prefix("linear:") {
        Ok(CustomFlux::Linear { velocity: v.parse().map_err(|_| format!("bad velocity '{v}'"))? })
    } else {
        Err(format!("unknown custom flux '{s}'"))
    }
}

pub fn parse_custom_init(s: &str) -> Result<CustomInit, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| -> Result<f64, String> { p.parse().map_err(|_| format!("bad number '{p}'")) };
    match parts.as_slice() {
        ["sine", o, a, f] => {
            Ok(CustomInit::Sine { offset: num(o)?, amplitude: num(a)?, frequency: num(f)? })
        }
        ["riemann", l, r, x0] => {
            Ok(CustomInit::Riemann { left: num(l)?, right: num(r)?, jump_at: num(x0)? })
        }
        _ => Err(format!("unknown custom init '{s}' (sine:o:a:f | riemann:ul:ur:x0)")),
    }
}

/// Read a flat `key = value` config file; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("{}:{}: expected key = value", path.display(), lineno + 1));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Apply config-file entries onto a spec (CLI flags are applied on top by
/// the caller).
pub fn apply_config(spec: &mut ExperimentSpec, map: &BTreeMap<String, String>) -> Result<(), String> {
    for (key, value) in map {
        match key.as_str() {
            "model" => spec.model = ModelKind::parse(value)?,
            "scheme" => spec.scheme = SchemeKind::parse(value)?,
            "cells" => spec.n_cells = value.parse().map_err(|_| format!("bad cells '{value}'"))?,
            "tfinal" => spec.t_final = value.parse().map_err(|_| format!("bad tfinal '{value}'"))?,
            "limiter" => spec.limiter = parse_limiter(value)?,
            "cfl" => spec.cfl = value.parse().map_err(|_| format!("bad cfl '{value}'"))?,
            "k_mode" => spec.k_mode = Some(parse_k_mode(value)?),
            "tvni" => spec.tvni = value.parse().map_err(|_| format!("bad tvni '{value}'"))?,
            "dt_max" => spec.dt_max = value.parse().map_err(|_| format!("bad dt_max '{value}'"))?,
            "snapshots" => spec.snapshots = parse_snapshot_list(value)?,
            "out_dir" => spec.out_dir = Some(PathBuf::from(value)),
            "custom.flux" => spec.custom.flux = parse_custom_flux(value)?,
            "custom.init" => spec.custom.init = parse_custom_init(value)?,
            "custom.domain" => {
                let (a, b) = value
                    .split_once(':')
                    .ok_or_else(|| format!("bad domain '{value}' (xl:xr)"))?;
                spec.custom.domain = (
                    a.trim().parse().map_err(|_| format!("bad number '{a}'"))?,
                    b.trim().parse().map_err(|_| format!("bad number '{b}'"))?,
                );
            }
            "custom.boundary" => {
                spec.custom.boundary = match value.as_str() {
                    "periodic" => Boundary::Periodic,
                    "constant" => Boundary::ConstantExtension,
                    other => return Err(format!("unknown boundary '{other}'")),
                }
            }
            other => return Err(format!("unknown config key '{other}'")),
        }
    }
    Ok(())
}

pub fn parse_snapshot_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad snapshot time '{p}'")))
        .collect()
}
