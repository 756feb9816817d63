//! Scenario configuration: flags > config file > defaults.
//!
//! The config file is flat `key = value` text; `#` starts a comment. Keys
//! match the long flag names, with `-` or `_` accepted as separator.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use ptphase::{ClassicalRegime, Grid, TwoLevelState};

pub const KEYS: [&str; 12] = [
    "lambda",
    "theta",
    "phi",
    "tau",
    "tau_steps",
    "grid",
    "truncation_k",
    "mixed",
    "out",
    "format",
    "regime",
    "component",
];

/// Bad user input; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classical,
    Wigner,
    Flow,
    Liouvillian,
    Infoprofile,
    Bipartite,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classical => "classical",
            Command::Wigner => "wigner",
            Command::Flow => "flow",
            Command::Liouvillian => "liouvillian",
            Command::Infoprofile => "infoprofile",
            Command::Bipartite => "bipartite",
            Command::Validate => "validate",
        }
    }

    fn is_sweep(self) -> bool {
        matches!(self, Command::Infoprofile | Command::Bipartite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    W00,
    W11,
    W10Re,
    W10Im,
}

impl Component {
    pub fn indices(self) -> (u32, u32, bool) {
        match self {
            Component::W00 => (0, 0, false),
            Component::W11 => (1, 1, false),
            Component::W10Re => (1, 0, false),
            Component::W10Im => (1, 0, true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeSel {
    Bound,
    Separatrix,
    Unbound,
    All,
}

/// Fully resolved scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub command: Command,
    pub lambda_lo: u32,
    pub lambda_hi: u32,
    pub theta: f64,
    pub phi: f64,
    pub mixed: bool,
    pub tau: f64,
    pub tau_steps: usize,
    pub grid: Grid,
    pub truncation_k: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub regime: RegimeSel,
    pub component: Option<Component>,
    /// Resolved values as text, for the output header.
    pub echo: BTreeMap<String, String>,
}

impl ScenarioConfig {
    pub fn lambda(&self) -> u32 {
        self.lambda_lo
    }

    pub fn state(&self) -> TwoLevelState {
        if self.mixed {
            TwoLevelState::Mixed { theta: self.theta }
        } else {
            TwoLevelState::Pure { theta: self.theta, phi: self.phi }
        }
    }

    /// τ values of the run: one value, or k·τ for k = 0..=tau_steps.
    pub fn taus(&self) -> Vec<f64> {
        if self.tau_steps == 0 {
            vec![self.tau]
        } else {
            (0..=self.tau_steps).map(|k| k as f64 * self.tau).collect()
        }
    }

    pub fn regimes(&self) -> Vec<ClassicalRegime> {
        let p = self.lambda() as f64;
        let all = [
            ClassicalRegime::Bound { ell: p },
            ClassicalRegime::Separatrix { ell: p },
            ClassicalRegime::Unbound { lambda: p },
        ];
        match self.regime {
            RegimeSel::Bound => vec![all[0]],
            RegimeSel::Separatrix => vec![all[1]],
            RegimeSel::Unbound => vec![all[2]],
            RegimeSel::All => all.to_vec(),
        }
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_").to_ascii_lowercase()
}

/// Parses the flat key-value format. Unknown and repeated keys are errors.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return err(format!("config line {}: expected key = value", n + 1));
        };
        let key = normalize(k);
        if !KEYS.contains(&key.as_str()) {
            return err(format!("config line {}: unknown key '{}'", n + 1, k.trim()));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return err(format!("config line {}: key '{key}' given twice", n + 1));
        }
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim().parse().or_else(|_| err(format!("{key}: cannot parse '{v}'")))
}

fn finite(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = num(key, v)?;
    if !x.is_finite() {
        return err(format!("{key} must be finite"));
    }
    Ok(x)
}

fn boolean(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => err(format!("{key}: expected true or false, got '{v}'")),
    }
}

/// `n` or `lo:hi`.
fn lambda_range(v: &str) -> Result<(u32, u32), ConfigError> {
    let (lo, hi) = match v.split_once(':') {
        Some((a, b)) => (num("lambda", a)?, num("lambda", b)?),
        None => {
            let n = num("lambda", v)?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        return err(format!("lambda: need 1 <= lo <= hi, got '{v}'"));
    }
    Ok((lo, hi))
}

fn defaults(command: Command) -> BTreeMap<String, String> {
    let lambda = if command.is_sweep() { "2:20" } else { "2" };
    let (tau, steps) = if command == Command::Classical { ("0.05", "200") } else { ("0", "0") };
    [
        ("lambda", lambda),
        ("theta", "0.7853981633974483"),
        ("phi", "0"),
        ("tau", tau),
        ("tau_steps", steps),
        ("grid", "-3:3:121,-3:3:121"),
        ("truncation_k", "3"),
        ("mixed", "false"),
        ("format", "csv"),
        ("regime", "all"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Merges the layers and validates every value.
pub fn resolve(
    command: Command,
    file: BTreeMap<String, String>,
    flags: BTreeMap<String, String>,
) -> Result<ScenarioConfig, ConfigError> {
    let mut map = defaults(command);
    map.extend(file);
    map.extend(flags);
    let get = |k: &str| map.get(k).map(String::as_str);

    let (lambda_lo, lambda_hi) = lambda_range(get("lambda").unwrap_or_default())?;
    if !command.is_sweep() && lambda_lo != lambda_hi {
        return err(format!("{} takes a single lambda", command.name()));
    }
    if command.is_sweep() && lambda_lo < 2 {
        return err("sweeps need lambda >= 2");
    }
    let theta = finite("theta", get("theta").unwrap_or_default())?;
    let phi = finite("phi", get("phi").unwrap_or_default())?;
    let tau = finite("tau", get("tau").unwrap_or_default())?;
    let tau_steps: usize = num("tau_steps", get("tau_steps").unwrap_or_default())?;
    if tau_steps > 0 && tau <= 0.0 {
        return err("a tau sweep needs tau > 0 as its step");
    }
    let grid: Grid = get("grid").unwrap_or_default().parse().map_err(|e: ptphase::Error| ConfigError(e.to_string()))?;
    let truncation_k: usize = num("truncation_k", get("truncation_k").unwrap_or_default())?;
    if truncation_k > ptphase::flow::MAX_TRUNCATION {
        return err(format!("truncation_k must be at most {}", ptphase::flow::MAX_TRUNCATION));
    }
    let mixed = boolean("mixed", get("mixed").unwrap_or_default())?;
    let out = get("out").filter(|s| !s.is_empty()).map(PathBuf::from);
    let format = match get("format").unwrap_or_default() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return err(format!("format: expected csv or json, got '{other}'")),
    };
    let regime = match get("regime").unwrap_or_default() {
        "bound" => RegimeSel::Bound,
        "separatrix" => RegimeSel::Separatrix,
        "unbound" => RegimeSel::Unbound,
        "all" => RegimeSel::All,
        other => return err(format!("regime: expected bound, separatrix, unbound or all, got '{other}'")),
    };
    let component = match get("component") {
        None | Some("") | Some("total") => None,
        Some("00") => Some(Component::W00),
        Some("11") => Some(Component::W11),
        Some("10re") => Some(Component::W10Re),
        Some("10im") => Some(Component::W10Im),
        Some(other) => return err(format!("component: expected 00, 11, 10re, 10im or total, got '{other}'")),
    };
    if tau_steps > 0 && out.is_none() && matches!(command, Command::Wigner | Command::Flow | Command::Liouvillian) {
        return err("a tau sweep writes one file per step and needs --out");
    }
    Ok(ScenarioConfig {
        command,
        lambda_lo,
        lambda_hi,
        theta,
        phi,
        mixed,
        tau,
        tau_steps,
        grid,
        truncation_k,
        out,
        format,
        regime,
        component,
        echo: map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn parses_flat_files() {
        let m = parse_config_text("# scenario\nlambda = 3\n\ntruncation-K = 2 # trailing\n").unwrap();
        assert_eq!(m["lambda"], "3");
        assert_eq!(m["truncation_k"], "2");
    }

    #[test]
    fn rejects_unknown_and_repeated_keys() {
        assert!(parse_config_text("lamda = 3").is_err());
        assert!(parse_config_text("lambda = 3\nlambda = 4").is_err());
        assert!(parse_config_text("lambda 3").is_err());
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file = flags(&[("lambda", "4"), ("theta", "0.1")]);
        let c = resolve(Command::Wigner, file, flags(&[("lambda", "5")])).unwrap();
        assert_eq!(c.lambda(), 5);
        assert_eq!(c.theta, 0.1);
        assert_eq!(c.truncation_k, 3);
    }

    #[test]
    fn validates_values() {
        let bad = [
            ("lambda", "0"),
            ("lambda", "2:5"),
            ("theta", "nan"),
            ("grid", "0:1:1,0:1:3"),
            ("truncation_k", "7"),
            ("format", "xml"),
            ("mixed", "maybe"),
        ];
        for (k, v) in bad {
            assert!(resolve(Command::Wigner, BTreeMap::new(), flags(&[(k, v)])).is_err(), "{k}={v}");
        }
        assert!(resolve(Command::Bipartite, BTreeMap::new(), flags(&[("lambda", "2:5")])).is_ok());
    }

    #[test]
    fn tau_sweep_values() {
        let c =
            resolve(Command::Wigner, BTreeMap::new(), flags(&[("tau", "0.5"), ("tau_steps", "3"), ("out", "x.csv")]))
                .unwrap();
        assert_eq!(c.taus(), vec![0.0, 0.5, 1.0, 1.5]);
    }
}
