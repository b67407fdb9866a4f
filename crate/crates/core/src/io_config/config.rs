use std::collections::BTreeMap;
use std::fmt;

use ini::Ini;

use crate::constitutive::{ConstitutiveModel, FKind, FLaw, PhysicalParams, SystemVariant, Table};
use crate::galerkin::{RunSettings, StepControl};
use crate::spectral::GridSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// `section.key`, or the section name for section-level problems.
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

/// Nonempty list of problems found in a config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, PartialEq)]
pub enum VelocityKind {
    Zero,
    TaylorGreen,
    RandomSmooth { seed: u64, spectrum_slope: f64, amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StressKind {
    Zero,
    RandomSmooth { seed: u64, spectrum_slope: f64, amplitude: f64 },
    /// `amplitude · cos(k·x) · I`.
    ScaledIdentityMode { amplitude: f64, mode: (i64, i64) },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialConfig {
    pub velocity: VelocityKind,
    pub stress: StressKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub t_end: f64,
    pub control: StepControl,
    pub snapshot_interval: Option<f64>,
    /// Spacing of rows written to the ledger file; every step when `None`.
    pub ledger_interval: Option<f64>,
}

impl RunConfig {
    pub fn settings(&self) -> RunSettings {
        RunSettings {
            t_end: self.t_end,
            control: self.control,
            snapshot_interval: self.snapshot_interval,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsConfig {
    pub tail_thresholds: Vec<f64>,
    pub r_split: f64,
    pub enable_decomposition: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub grid: GridSpec,
    /// Spatial dimension. Only 2 can be simulated.
    pub dimension: u32,
    pub model: ConstitutiveModel,
    pub params: PhysicalParams,
    pub run: RunConfig,
    pub initial: InitialConfig,
    pub diagnostics: DiagnosticsConfig,
}

impl SimulationConfig {
    /// Same config on another grid.
    pub fn with_grid(&self, grid: GridSpec) -> Self {
        Self {
            grid,
            ..self.clone()
        }
    }
}

const SECTIONS: [&str; 6] = ["grid", "model", "physical", "run", "initial", "diagnostics"];

struct Reader {
    entries: BTreeMap<(String, String), String>,
    used: BTreeMap<(String, String), ()>,
    errors: Vec<ConfigError>,
}

fn err(key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.into(),
        message: message.into(),
    }
}

impl Reader {
    fn raw(&mut self, section: &str, key: &str) -> Option<String> {
        let id = (section.to_string(), key.to_string());
        let value = self.entries.get(&id).cloned();
        if value.is_some() {
            self.used.insert(id, ());
        }
        value
    }

    fn fail(&mut self, section: &str, key: &str, message: impl Into<String>) {
        self.errors.push(err(format!("{section}.{key}"), message));
    }

    fn parsed<T: std::str::FromStr>(&mut self, section: &str, key: &str, what: &str) -> Option<T> {
        let raw = self.raw(section, key)?;
        match raw.trim().parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(section, key, format!("expected {what}, got {raw:?}"));
                None
            }
        }
    }

    fn required<T: std::str::FromStr>(&mut self, section: &str, key: &str, what: &str) -> Option<T> {
        if !self.entries.contains_key(&(section.to_string(), key.to_string())) {
            self.fail(section, key, "missing required key");
            return None;
        }
        self.parsed(section, key, what)
    }

    fn real(&mut self, section: &str, key: &str) -> Option<f64> {
        let v: f64 = self.parsed(section, key, "a real number")?;
        if v.is_finite() {
            Some(v)
        } else {
            self.fail(section, key, "must be finite");
            None
        }
    }

    fn required_real(&mut self, section: &str, key: &str) -> Option<f64> {
        if !self.entries.contains_key(&(section.to_string(), key.to_string())) {
            self.fail(section, key, "missing required key");
            return None;
        }
        self.real(section, key)
    }

    fn flag(&mut self, section: &str, key: &str) -> Option<bool> {
        let raw = self.raw(section, key)?;
        match raw.trim() {
            "true" | "yes" | "on" | "1" => Some(true),
            "false" | "no" | "off" | "0" => Some(false),
            _ => {
                self.fail(section, key, format!("expected true or false, got {raw:?}"));
                None
            }
        }
    }

    fn list(&mut self, section: &str, key: &str) -> Option<Vec<f64>> {
        let raw = self.raw(section, key)?;
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push(v),
                _ => {
                    self.fail(section, key, format!("expected a comma-separated list of reals, got {raw:?}"));
                    return None;
                }
            }
        }
        Some(out)
    }
}

/// Parses raw bytes; non-UTF-8 input is reported as an error.
pub fn parse_config_bytes(bytes: &[u8]) -> Result<SimulationConfig, ConfigErrors> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_config(text),
        Err(e) => Err(ConfigErrors(vec![err("input", format!("not valid UTF-8: {e}"))])),
    }
}

/// Parses and validates a config. Every problem found is reported.
pub fn parse_config(text: &str) -> Result<SimulationConfig, ConfigErrors> {
    let ini = Ini::load_from_str_noescape(text)
        .map_err(|e| ConfigErrors(vec![err("input", format!("malformed INI: {e}"))]))?;
    let mut r = Reader {
        entries: BTreeMap::new(),
        used: BTreeMap::new(),
        errors: Vec::new(),
    };
    for (section, props) in &ini {
        let Some(section) = section else {
            for (k, _) in props.iter() {
                r.errors.push(err(k, "key outside of any section"));
            }
            continue;
        };
        if !SECTIONS.contains(&section) {
            r.errors.push(err(section, "unknown section"));
            continue;
        }
        for (k, v) in props.iter() {
            let id = (section.to_string(), k.to_string());
            if r.entries.insert(id, v.to_string()).is_some() {
                r.fail(section, k, "duplicate key");
            }
        }
    }
    let cfg = build(&mut r);
    for id in r.entries.keys() {
        if !r.used.contains_key(id) {
            r.errors.push(err(format!("{}.{}", id.0, id.1), "unknown key"));
        }
    }
    match cfg {
        Some(c) if r.errors.is_empty() => Ok(c),
        _ => {
            if r.errors.is_empty() {
                r.errors.push(err("input", "invalid config"));
            }
            Err(ConfigErrors(r.errors))
        }
    }
}

fn parse_table(raw: &str) -> Result<Table, String> {
    let mut knots = Vec::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (s, phi) = item
            .split_once(':')
            .ok_or_else(|| format!("table entries must be s:phi pairs, got {item:?}"))?;
        let s: f64 = s.trim().parse().map_err(|_| format!("bad table abscissa {s:?}"))?;
        let phi: f64 = phi.trim().parse().map_err(|_| format!("bad table value {phi:?}"))?;
        knots.push((s, phi));
    }
    Table::new(knots).map_err(|e| e.to_string())
}

fn build(r: &mut Reader) -> Option<SimulationConfig> {
    // grid
    let n: Option<usize> = r.required("grid", "modes_per_axis", "a positive integer");
    let grid = n.and_then(|n| match GridSpec::new(n) {
        Ok(g) => Some(g),
        Err(e) => {
            r.fail("grid", "modes_per_axis", e.to_string());
            None
        }
    });
    let dimension: u32 = r.parsed("grid", "dimension", "2 or 3").unwrap_or(2);

    // model
    let kind_name: Option<String> = r.required("model", "f_kind", "a law name");
    let p = r.required_real("model", "p");
    let nu0 = r.real("model", "nu0");
    let table_raw = r.raw("model", "table");
    let variant_name: Option<String> = r.required("model", "variant", "S, S1 or S2");
    let kind = match kind_name.as_deref().map(str::trim) {
        Some("power_additive") => Some(FKind::PowerAdditive),
        Some("power_quadratic") => Some(FKind::PowerQuadratic),
        Some("linear") => match nu0 {
            Some(nu0) => Some(FKind::Linear { nu0 }),
            None => {
                r.fail("model", "nu0", "required when f_kind = linear");
                None
            }
        },
        Some("tabulated") => match table_raw.as_deref().map(parse_table) {
            Some(Ok(t)) => Some(FKind::Tabulated(t)),
            Some(Err(e)) => {
                r.fail("model", "table", e);
                None
            }
            None => {
                r.fail("model", "table", "required when f_kind = tabulated");
                None
            }
        },
        Some(other) => {
            r.fail(
                "model",
                "f_kind",
                format!("unknown law {other:?} (expected power_additive, power_quadratic, linear or tabulated)"),
            );
            None
        }
        None => None,
    };
    let variant = match variant_name.as_deref().map(str::trim) {
        Some("S") => Some(SystemVariant::S),
        Some("S1") => Some(SystemVariant::S1),
        Some("S2") => Some(SystemVariant::S2),
        Some(other) => {
            r.fail("model", "variant", format!("unknown variant {other:?} (expected S, S1 or S2)"));
            None
        }
        None => None,
    };
    match dimension {
        2 => {}
        3 => {
            if p.is_some_and(|p| p <= 2.5) {
                r.fail("grid", "dimension", "three dimensions require p > 5/2");
            }
        }
        d => r.fail("grid", "dimension", format!("must be 2 or 3, got {d}")),
    }

    // physical
    let we = r.required_real("physical", "weissenberg");
    let theta = r.required_real("physical", "theta");
    let nu = r.required_real("physical", "nu");
    let lambda = r.real("physical", "lambda").unwrap_or(0.0);
    let r_exp = r.real("physical", "r").unwrap_or(2.0);
    let params = match (we, theta, nu) {
        (Some(we), Some(theta), Some(nu)) => match PhysicalParams::new(we, theta, nu, lambda) {
            Ok(p) => Some(p),
            Err(e) => {
                r.errors.push(err("physical", e.to_string()));
                None
            }
        },
        _ => None,
    };
    let model = match (kind, p, variant) {
        (Some(kind), Some(p), Some(variant)) => {
            match ConstitutiveModel::new(FLaw::new(kind, p), lambda, r_exp, variant) {
                Ok(m) => Some(m),
                Err(e) => {
                    r.errors.push(err("model", e.to_string()));
                    None
                }
            }
        }
        _ => None,
    };

    // run
    let t_end = r.required_real("run", "t_end");
    if t_end.is_some_and(|t| t < 0.0) {
        r.fail("run", "t_end", "must be >= 0");
    }
    let d = StepControl::default();
    let control = StepControl {
        dt_init: r.real("run", "dt_init").unwrap_or(d.dt_init),
        dt_min: r.real("run", "dt_min").unwrap_or(d.dt_min),
        dt_max: r.real("run", "dt_max").unwrap_or(d.dt_max),
        rel_tol: r.real("run", "rel_tol").unwrap_or(d.rel_tol),
        abs_tol: r.real("run", "abs_tol").unwrap_or(d.abs_tol),
        blowup_threshold: r.real("run", "blowup_threshold").unwrap_or(d.blowup_threshold),
    };
    if let Err(e) = control.validate() {
        r.errors.push(err("run", e));
    }
    let snapshot_interval = r.real("run", "snapshot_interval");
    let ledger_interval = r.real("run", "ledger_interval");
    for (key, v) in [("snapshot_interval", snapshot_interval), ("ledger_interval", ledger_interval)] {
        if v.is_some_and(|v| v <= 0.0) {
            r.fail("run", key, "must be > 0");
        }
    }

    // initial
    let velocity = match r.raw("initial", "velocity_kind").as_deref().map(str::trim) {
        None | Some("zero") => Some(VelocityKind::Zero),
        Some("taylor_green") => Some(VelocityKind::TaylorGreen),
        Some("random_smooth") => Some(VelocityKind::RandomSmooth {
            seed: r.parsed("initial", "velocity_seed", "an unsigned integer").unwrap_or(0),
            spectrum_slope: r.real("initial", "velocity_spectrum_slope").unwrap_or(2.0),
            amplitude: r.real("initial", "velocity_amplitude").unwrap_or(1.0),
        }),
        Some(other) => {
            r.fail(
                "initial",
                "velocity_kind",
                format!("unknown kind {other:?} (expected zero, taylor_green or random_smooth)"),
            );
            None
        }
    };
    let stress = match r.raw("initial", "stress_kind").as_deref().map(str::trim) {
        None | Some("zero") => Some(StressKind::Zero),
        Some("random_smooth") => Some(StressKind::RandomSmooth {
            seed: r.parsed("initial", "stress_seed", "an unsigned integer").unwrap_or(0),
            spectrum_slope: r.real("initial", "stress_spectrum_slope").unwrap_or(2.0),
            amplitude: r.real("initial", "stress_amplitude").unwrap_or(1.0),
        }),
        Some("scaled_identity_mode") => {
            let k1: i64 = r.parsed("initial", "stress_mode_k1", "an integer").unwrap_or(1);
            let k2: i64 = r.parsed("initial", "stress_mode_k2", "an integer").unwrap_or(0);
            let amplitude = r.real("initial", "stress_amplitude").unwrap_or(1.0);
            if k1 == 0 && k2 == 0 {
                r.fail("initial", "stress_mode_k1", "the identity mode must have nonzero wavevector");
            }
            if let Some(g) = grid {
                let k = g.cutoff() as i64;
                if k1.abs() > k || k2.abs() > k {
                    r.fail(
                        "initial",
                        "stress_mode_k1",
                        format!("mode ({k1},{k2}) lies outside the retained square |k| <= {k}"),
                    );
                }
            }
            Some(StressKind::ScaledIdentityMode {
                amplitude,
                mode: (k1, k2),
            })
        }
        Some(other) => {
            r.fail(
                "initial",
                "stress_kind",
                format!("unknown kind {other:?} (expected zero, random_smooth or scaled_identity_mode)"),
            );
            None
        }
    };

    // diagnostics
    let mut tail_thresholds = r
        .list("diagnostics", "tail_thresholds")
        .unwrap_or_else(|| vec![0.0, 0.1, 0.5, 1.0, 2.0]);
    if tail_thresholds.iter().any(|&m| m < 0.0) {
        r.fail("diagnostics", "tail_thresholds", "thresholds must be >= 0");
    }
    tail_thresholds.sort_by(f64::total_cmp);
    let r_split = r.real("diagnostics", "r_split").unwrap_or(1.0);
    if !(r_split > 0.0) {
        r.fail("diagnostics", "r_split", "must be > 0");
    }
    let enable_decomposition = r.flag("diagnostics", "enable_decomposition").unwrap_or(false);

    Some(SimulationConfig {
        grid: grid?,
        dimension,
        model: model?,
        params: params?,
        run: RunConfig {
            t_end: t_end?,
            control,
            snapshot_interval,
            ledger_interval,
        },
        initial: InitialConfig {
            velocity: velocity?,
            stress: stress?,
        },
        diagnostics: DiagnosticsConfig {
            tail_thresholds,
            r_split,
            enable_decomposition,
        },
    })
}
