//! Effective run parameters and the `key=value` format shared by config
//! files and manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use ssw_core::cases::{self, CaseSpec};
use ssw_core::grid::Dim;
use ssw_core::solver::{SchemeConfig, DEFAULT_CFL, DEFAULT_MAX_HALVINGS};
use ssw_core::{SchemeOrder, WaveSpeeds};

/// Keys accepted in config files, in manifest order.
pub const KEYS: [&str; 14] = [
    "case",
    "scheme",
    "n",
    "ny",
    "cfl",
    "tend",
    "g",
    "c_f",
    "c_r",
    "phi",
    "theta",
    "source",
    "wave_speeds",
    "max_halvings",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub case: String,
    pub scheme: SchemeOrder,
    pub n: usize,
    pub ny: Option<usize>,
    pub cfl: f64,
    pub tend: f64,
    pub g: f64,
    pub c_f: f64,
    pub c_r: f64,
    pub phi: f64,
    pub theta: f64,
    pub source: bool,
    pub wave_speeds: WaveSpeeds,
    pub max_halvings: u32,
}

/// Parsed `key=value` lines, kept in file order with their line numbers.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    pub entries: Vec<(usize, String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value, got '{line}'", k + 1))?;
            let key = key.trim().to_ascii_lowercase();
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{key}' (known: {})", k + 1, KEYS.join(", ")));
            }
            entries.push((k + 1, key, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Last value given for `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(_, k, _)| k == key).map(|(_, _, v)| v.as_str())
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("invalid value '{value}' for {key}: {e}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(format!("invalid value '{value}' for {key}: expected true or false")),
    }
}

impl Settings {
    /// Defaults of a case; the scheme has no case default and starts at O4.
    pub fn defaults(case: &CaseSpec) -> Self {
        Self {
            case: case.name.clone(),
            scheme: SchemeOrder::O4,
            n: case.default_nx,
            ny: None,
            cfl: DEFAULT_CFL,
            tend: case.end_time,
            g: case.params.g,
            c_f: case.params.c_f,
            c_r: case.params.c_r,
            phi: case.params.phi,
            theta: case.params.theta,
            source: case.source,
            wave_speeds: WaveSpeeds::default(),
            max_halvings: DEFAULT_MAX_HALVINGS,
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "case" => {
                if value != self.case {
                    return Err(format!("case '{value}' conflicts with '{}'", self.case));
                }
            }
            "scheme" => self.scheme = parse(key, value)?,
            "n" => self.n = parse(key, value)?,
            "ny" => self.ny = Some(parse(key, value)?),
            "cfl" => self.cfl = parse(key, value)?,
            "tend" => self.tend = parse(key, value)?,
            "g" => self.g = parse(key, value)?,
            "c_f" => self.c_f = parse(key, value)?,
            "c_r" => self.c_r = parse(key, value)?,
            "phi" => self.phi = parse(key, value)?,
            "theta" => self.theta = parse(key, value)?,
            "source" => self.source = parse_bool(key, value)?,
            "wave_speeds" => self.wave_speeds = parse(key, value)?,
            "max_halvings" => self.max_halvings = parse(key, value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    pub fn apply_file(&mut self, file: &ConfigFile) -> Result<(), String> {
        for (line, key, value) in &file.entries {
            self.set(key, value).map_err(|e| format!("config line {line}: {e}"))?;
        }
        Ok(())
    }

    /// Case with the physical parameters and end time replaced.
    pub fn case_spec(&self, base: &CaseSpec) -> Result<CaseSpec, String> {
        if self.n == 0 {
            return Err("n must be positive".into());
        }
        match (base.dim, self.ny) {
            (Dim::One, Some(_)) => return Err(format!("case '{}' is one-dimensional; ny is not allowed", self.case)),
            (Dim::Two, Some(0)) => return Err("ny must be positive".into()),
            _ => {}
        }
        let mut case = base.clone();
        case.end_time = self.tend;
        case.params.g = self.g;
        case.params.c_f = self.c_f;
        case.params.c_r = self.c_r;
        case.params.phi = self.phi;
        case.params.theta = self.theta;
        case.params.validate().map_err(|e| e.to_string())?;
        Ok(case)
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig, String> {
        let config = SchemeConfig {
            cfl: self.cfl,
            wave_speeds: self.wave_speeds,
            max_halvings: self.max_halvings,
            source_enabled: self.source,
            ..SchemeConfig::new(self.scheme, self.tend)
        };
        config.validate().map_err(|e| e.to_string())?;
        Ok(config)
    }

    /// Every effective parameter as `key=value`, readable by [`ConfigFile`].
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "case={}", self.case);
        let _ = writeln!(s, "scheme={}", self.scheme.name());
        let _ = writeln!(s, "n={}", self.n);
        if let Some(ny) = self.ny {
            let _ = writeln!(s, "ny={ny}");
        }
        for (k, v) in [
            ("cfl", self.cfl),
            ("tend", self.tend),
            ("g", self.g),
            ("c_f", self.c_f),
            ("c_r", self.c_r),
            ("phi", self.phi),
            ("theta", self.theta),
        ] {
            let _ = writeln!(s, "{k}={v:?}");
        }
        let _ = writeln!(s, "source={}", self.source);
        let _ = writeln!(s, "wave_speeds={}", self.wave_speeds);
        let _ = writeln!(s, "max_halvings={}", self.max_halvings);
        s
    }
}

/// Case named on the command line, else in the config file.
pub fn resolve_case(flag: Option<&str>, file: &ConfigFile) -> Result<CaseSpec, String> {
    let name = flag
        .or_else(|| file.get("case"))
        .ok_or_else(|| format!("no case given (known: {})", cases::CASE_NAMES.join(", ")))?;
    cases::by_name(name).ok_or_else(|| format!("unknown case '{name}' (known: {})", cases::CASE_NAMES.join(", ")))
}
