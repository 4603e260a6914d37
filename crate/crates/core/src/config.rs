//! Run configuration: a line-oriented `[section]` / `key = value` format.
//!
//! ```text
//! # Gaussian-pulsed 15-element Chebyshev phased array
//! [array]
//! n = 15
//! taper = chebyshev:30
//!
//! [pulse]
//! shape = gaussian
//! center = -1ms
//! sigma = 0.15ms
//! ```
//!
//! Quantities are SI base units unless suffixed (`ms`, `us`, `ns`, `km`,
//! `cm`, `mm`, `m`, `s`, `Hz`, `kHz`, `MHz`, `GHz`, `deg`, `rad`, `dB`).
//! Bare angles are radians. Unknown sections and keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::analysis::{GridSpec, PatternMode};
use crate::array::{
    chebyshev_offsets, chebyshev_taper, half_wavelength, ArrayConfig, PropagationEnv,
    DEFAULT_CARRIER_HZ, DEFAULT_SIDELOBE_DB, SPEED_OF_LIGHT,
};
use crate::error::{Error, Result};
use crate::waveform::PulseSpec;

pub const DEFAULT_DB_FLOOR: f64 = -60.0;

const REQUIRED: &[(&str, &str)] = &[("array", "n"), ("pulse", "shape")];

const KNOWN: &[(&str, &[&str])] = &[
    ("array", &["n", "spacing", "carrier", "taper", "offsets"]),
    ("pulse", &["shape", "center", "width", "sigma"]),
    (
        "grid",
        &[
            "r_min",
            "r_max",
            "n_range",
            "theta_min",
            "theta_max",
            "n_theta",
            "time",
            "mode",
        ],
    ),
    ("env", &["wave_speed", "rx_gain", "tx_gain"]),
    (
        "output",
        &["out_dir", "prefix", "format", "db_floor", "csv_db"],
    ),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    HalfWavelength,
    Meters(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Taper {
    Uniform,
    Chebyshev { sidelobe_db: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Offsets {
    None,
    Linear { base_hz: f64 },
    Chebyshev { max_hz: f64, sidelobe_db: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArraySection {
    pub n: usize,
    pub spacing: Spacing,
    pub carrier_hz: f64,
    pub taper: Taper,
    pub offsets: Offsets,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TxGain {
    Uniform(f64),
    PerElement(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvSection {
    pub wave_speed: f64,
    pub rx_gain: f64,
    pub tx_gain: TxGain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Pgm,
    Both,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Pgm => "pgm",
            OutputFormat::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "pgm" => Some(OutputFormat::Pgm),
            "both" => Some(OutputFormat::Both),
            _ => None,
        }
    }

    pub fn wants_csv(&self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn wants_pgm(&self) -> bool {
        matches!(self, OutputFormat::Pgm | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub out_dir: PathBuf,
    pub prefix: String,
    pub format: OutputFormat,
    pub db_floor: f64,
    /// Write CSV values in dB relative to the raster peak instead of linear.
    pub csv_db: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub array: ArraySection,
    pub pulse: PulseSpec,
    pub grid: GridSpec,
    /// `None` infers the mode from the array and pulse.
    pub mode: Option<PatternMode>,
    pub env: EnvSection,
    pub output: OutputSection,
}

/// A parsed config plus one line per default that was filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: RunConfig,
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

type RawMap = BTreeMap<(String, String), Entry>;

pub fn parse_config(text: &str) -> Result<ParsedConfig> {
    parse_config_with_overrides(text, &[])
}

/// Parses `text`, then applies `section.key=value` overrides on top.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<ParsedConfig> {
    let mut raw = tokenize(text)?;
    for ov in overrides {
        let (path, value) = ov.split_once('=').ok_or_else(|| Error::ConfigKey {
            key: ov.clone(),
            message: "override must look like section.key=value".into(),
        })?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::ConfigKey {
                key: path.trim().to_string(),
                message: "override key must look like section.key".into(),
            })?;
        check_known(section, key)?;
        raw.insert(
            (section.to_string(), key.to_string()),
            Entry {
                value: value.trim().to_string(),
                line: 0,
            },
        );
    }
    Builder::new(raw).build()
}

fn tokenize(text: &str) -> Result<RawMap> {
    let mut raw = RawMap::new();
    let mut section: Option<String> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| Error::Syntax {
                line: line_no,
                message: "unterminated section header".into(),
            })?;
            let name = name.trim();
            if !KNOWN.iter().any(|(s, _)| *s == name) {
                return Err(Error::Syntax {
                    line: line_no,
                    message: format!("unknown section [{name}]"),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Syntax {
            line: line_no,
            message: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.as_deref().ok_or_else(|| Error::Syntax {
            line: line_no,
            message: "key outside of any [section]".into(),
        })?;
        if key.is_empty() || value.is_empty() {
            return Err(Error::Syntax {
                line: line_no,
                message: "empty key or value".into(),
            });
        }
        check_known(sec, key)?;
        let slot = (sec.to_string(), key.to_string());
        if let Some(prev) = raw.get(&slot) {
            return Err(Error::Syntax {
                line: line_no,
                message: format!(
                    "duplicate key `{sec}.{key}` (first set on line {})",
                    prev.line
                ),
            });
        }
        raw.insert(
            slot,
            Entry {
                value: value.to_string(),
                line: line_no,
            },
        );
    }
    Ok(raw)
}

fn check_known(section: &str, key: &str) -> Result<()> {
    let keys = KNOWN
        .iter()
        .find(|(s, _)| *s == section)
        .map(|(_, k)| *k)
        .ok_or_else(|| Error::ConfigKey {
            key: format!("{section}.{key}"),
            message: "unknown section".into(),
        })?;
    if keys.contains(&key) {
        Ok(())
    } else {
        Err(Error::ConfigKey {
            key: format!("{section}.{key}"),
            message: "unknown key".into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Time,
    Length,
    Frequency,
    Angle,
    Level,
    Plain,
}

fn unit_scale(unit: Unit, suffix: &str) -> Option<f64> {
    let table: &[(&str, f64)] = match unit {
        Unit::Time => &[
            ("", 1.0),
            ("s", 1.0),
            ("ms", 1e-3),
            ("us", 1e-6),
            ("ns", 1e-9),
        ],
        Unit::Length => &[
            ("", 1.0),
            ("m", 1.0),
            ("km", 1e3),
            ("cm", 1e-2),
            ("mm", 1e-3),
        ],
        Unit::Frequency => &[
            ("", 1.0),
            ("Hz", 1.0),
            ("kHz", 1e3),
            ("MHz", 1e6),
            ("GHz", 1e9),
        ],
        Unit::Angle => &[
            ("", 1.0),
            ("rad", 1.0),
            ("deg", std::f64::consts::PI / 180.0),
        ],
        Unit::Level => &[("", 1.0), ("dB", 1.0)],
        Unit::Plain => &[("", 1.0)],
    };
    table.iter().find(|(s, _)| *s == suffix).map(|(_, k)| *k)
}

/// Parses `<number>[ ]<suffix>` into SI units.
fn parse_quantity(text: &str, unit: Unit) -> std::result::Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|(i, ch)| {
            ch.is_ascii_alphabetic()
                && !((*ch == 'e' || *ch == 'E')
                    && text[i + 1..]
                        .chars()
                        .next()
                        .is_some_and(|n| n.is_ascii_digit() || n == '-' || n == '+'))
        })
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (num, suffix) = text.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    let scale = unit_scale(unit, suffix.trim())
        .ok_or_else(|| format!("unit `{}` not allowed here", suffix.trim()))?;
    let v = if scale == 1.0 {
        value
    } else if unit == Unit::Angle {
        value.to_radians()
    } else {
        value * scale
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

struct Builder {
    raw: RawMap,
    provenance: Vec<String>,
}

impl Builder {
    fn new(raw: RawMap) -> Self {
        Self {
            raw,
            provenance: Vec::new(),
        }
    }

    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.raw.get(&(section.to_string(), key.to_string()))
    }

    fn err(section: &str, key: &str, message: impl Into<String>) -> Error {
        Error::ConfigKey {
            key: format!("{section}.{key}"),
            message: message.into(),
        }
    }

    fn default_note(&mut self, section: &str, key: &str, shown: &str) {
        self.provenance
            .push(format!("{section}.{key} = {shown} (default)"));
    }

    fn quantity(&mut self, section: &str, key: &str, unit: Unit, default: f64) -> Result<f64> {
        match self.get(section, key) {
            Some(e) => parse_quantity(&e.value, unit).map_err(|m| Self::err(section, key, m)),
            None => {
                self.default_note(section, key, &format!("{default:?}"));
                Ok(default)
            }
        }
    }

    fn required_quantity(&self, section: &str, key: &str, unit: Unit) -> Result<f64> {
        let e = self
            .get(section, key)
            .ok_or_else(|| Self::err(section, key, "required for this pulse shape"))?;
        parse_quantity(&e.value, unit).map_err(|m| Self::err(section, key, m))
    }

    fn count(&mut self, section: &str, key: &str, default: Option<usize>) -> Result<usize> {
        match (self.get(section, key), default) {
            (Some(e), _) => e
                .value
                .parse::<usize>()
                .map_err(|_| Self::err(section, key, format!("`{}` is not a count", e.value))),
            (None, Some(d)) => {
                self.default_note(section, key, &d.to_string());
                Ok(d)
            }
            (None, None) => Err(Self::err(section, key, "required")),
        }
    }

    fn text(&mut self, section: &str, key: &str, default: &str) -> String {
        match self.get(section, key) {
            Some(e) => e.value.clone(),
            None => {
                self.default_note(section, key, default);
                default.to_string()
            }
        }
    }

    fn build(mut self) -> Result<ParsedConfig> {
        let missing: Vec<String> = REQUIRED
            .iter()
            .filter(|(s, k)| self.get(s, k).is_none())
            .map(|(s, k)| format!("{s}.{k}"))
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingKeys(missing));
        }

        let env = self.env()?;
        let array = self.array()?;
        let pulse = self.pulse()?;
        let grid = self.grid()?;
        let mode = match self.text("grid", "mode", "auto").as_str() {
            "auto" => None,
            other => Some(
                other
                    .parse::<PatternMode>()
                    .map_err(|_| Self::err("grid", "mode", format!("unknown mode `{other}`")))?,
            ),
        };
        let output = self.output()?;
        let config = RunConfig {
            array,
            pulse,
            grid,
            mode,
            env,
            output,
        };
        config.validate()?;
        Ok(ParsedConfig {
            config,
            provenance: self.provenance,
        })
    }

    fn array(&mut self) -> Result<ArraySection> {
        let n = self.count("array", "n", None)?;
        if n == 0 {
            return Err(Self::err("array", "n", "must be at least 1"));
        }
        let spacing = match self.text("array", "spacing", "half-wavelength").as_str() {
            "half-wavelength" => Spacing::HalfWavelength,
            other => Spacing::Meters(
                parse_quantity(other, Unit::Length)
                    .map_err(|m| Self::err("array", "spacing", m))?,
            ),
        };
        let carrier_hz = self.quantity("array", "carrier", Unit::Frequency, DEFAULT_CARRIER_HZ)?;
        let taper_text = self.text("array", "taper", "uniform");
        let taper = match taper_text.split_once(':') {
            None if taper_text == "uniform" => Taper::Uniform,
            None if taper_text == "chebyshev" => {
                self.default_note("array", "taper", "chebyshev:30");
                Taper::Chebyshev {
                    sidelobe_db: DEFAULT_SIDELOBE_DB,
                }
            }
            Some(("chebyshev", sll)) => Taper::Chebyshev {
                sidelobe_db: parse_quantity(sll, Unit::Level)
                    .map_err(|m| Self::err("array", "taper", m))?,
            },
            _ => {
                return Err(Self::err(
                    "array",
                    "taper",
                    format!("`{taper_text}` is not uniform or chebyshev[:SLL]"),
                ))
            }
        };
        let offsets_text = self.text("array", "offsets", "none");
        let offsets = match offsets_text.split_once(':') {
            None if offsets_text == "none" => Offsets::None,
            Some(("linear", base)) => Offsets::Linear {
                base_hz: parse_quantity(base, Unit::Frequency)
                    .map_err(|m| Self::err("array", "offsets", m))?,
            },
            Some(("chebyshev", rest)) => {
                let (max, sll) = match rest.split_once(',') {
                    Some((m, s)) => (
                        m,
                        parse_quantity(s, Unit::Level)
                            .map_err(|e| Self::err("array", "offsets", e))?,
                    ),
                    None => (rest, DEFAULT_SIDELOBE_DB),
                };
                Offsets::Chebyshev {
                    max_hz: parse_quantity(max, Unit::Frequency)
                        .map_err(|m| Self::err("array", "offsets", m))?,
                    sidelobe_db: sll,
                }
            }
            _ => {
                return Err(Self::err(
                    "array",
                    "offsets",
                    format!("`{offsets_text}` is not none, linear:BASE or chebyshev:MAX[,SLL]"),
                ))
            }
        };
        Ok(ArraySection {
            n,
            spacing,
            carrier_hz,
            taper,
            offsets,
        })
    }

    fn pulse(&mut self) -> Result<PulseSpec> {
        let shape = self.text("pulse", "shape", "cw");
        let allowed: &[&str] = match shape.as_str() {
            "cw" => &["shape"],
            "rect" => &["shape", "center", "width"],
            "gaussian" => &["shape", "center", "sigma"],
            other => {
                return Err(Self::err(
                    "pulse",
                    "shape",
                    format!("`{other}` is not cw, rect or gaussian"),
                ))
            }
        };
        if let Some((_, key)) = self
            .raw
            .keys()
            .find(|(s, k)| s == "pulse" && !allowed.contains(&k.as_str()))
        {
            return Err(Self::err(
                "pulse",
                key,
                format!("not used by shape `{shape}`"),
            ));
        }
        let pulse = match shape.as_str() {
            "cw" => PulseSpec::Cw,
            "rect" => PulseSpec::rect(
                self.required_quantity("pulse", "center", Unit::Time)?,
                self.required_quantity("pulse", "width", Unit::Time)?,
            )
            .map_err(|e| Self::err("pulse", "width", e.to_string()))?,
            _ => PulseSpec::gaussian(
                self.required_quantity("pulse", "center", Unit::Time)?,
                self.required_quantity("pulse", "sigma", Unit::Time)?,
            )
            .map_err(|e| Self::err("pulse", "sigma", e.to_string()))?,
        };
        Ok(pulse)
    }

    fn grid(&mut self) -> Result<GridSpec> {
        let d = GridSpec::default();
        let grid = GridSpec {
            r_min_m: self.quantity("grid", "r_min", Unit::Length, d.r_min_m)?,
            r_max_m: self.quantity("grid", "r_max", Unit::Length, d.r_max_m)?,
            n_range: self.count("grid", "n_range", Some(d.n_range))?,
            theta_min_rad: self.quantity("grid", "theta_min", Unit::Angle, d.theta_min_rad)?,
            theta_max_rad: self.quantity("grid", "theta_max", Unit::Angle, d.theta_max_rad)?,
            n_theta: self.count("grid", "n_theta", Some(d.n_theta))?,
            t_s: self.quantity("grid", "time", Unit::Time, d.t_s)?,
        };
        grid.validate()
            .map_err(|e| Self::err("grid", "bounds", e.to_string()))?;
        Ok(grid)
    }

    fn env(&mut self) -> Result<EnvSection> {
        let wave_speed = self.quantity("env", "wave_speed", Unit::Plain, SPEED_OF_LIGHT)?;
        let rx_gain = self.quantity("env", "rx_gain", Unit::Plain, 1.0)?;
        let tx_text = self.text("env", "tx_gain", "1.0");
        let mut gains = tx_text
            .split(',')
            .map(|g| parse_quantity(g, Unit::Plain).map_err(|m| Self::err("env", "tx_gain", m)))
            .collect::<Result<Vec<f64>>>()?;
        let tx_gain = if gains.len() == 1 {
            TxGain::Uniform(gains.remove(0))
        } else {
            TxGain::PerElement(gains)
        };
        Ok(EnvSection {
            wave_speed,
            rx_gain,
            tx_gain,
        })
    }

    fn output(&mut self) -> Result<OutputSection> {
        let out_dir = PathBuf::from(self.text("output", "out_dir", "."));
        let prefix = self.text("output", "prefix", "fdasim");
        let format_text = self.text("output", "format", "both");
        let format = OutputFormat::parse(&format_text)
            .ok_or_else(|| Self::err("output", "format", "must be csv, pgm or both"))?;
        let db_floor = self.quantity("output", "db_floor", Unit::Level, DEFAULT_DB_FLOOR)?;
        if !(db_floor < 0.0) {
            return Err(Self::err("output", "db_floor", "must be < 0"));
        }
        let csv_db = match self.text("output", "csv_db", "false").as_str() {
            "true" => true,
            "false" => false,
            other => {
                return Err(Self::err(
                    "output",
                    "csv_db",
                    format!("`{other}` is not true/false"),
                ))
            }
        };
        Ok(OutputSection {
            out_dir,
            prefix,
            format,
            db_floor,
            csv_db,
        })
    }
}

impl RunConfig {
    pub fn build_env(&self) -> Result<PropagationEnv> {
        let tx = match &self.env.tx_gain {
            TxGain::Uniform(g) if *g == 1.0 => None,
            TxGain::Uniform(g) => Some(vec![*g; self.array.n]),
            TxGain::PerElement(g) => Some(g.clone()),
        };
        let env = PropagationEnv::new(self.env.wave_speed, self.env.rx_gain, tx)?;
        env.check_elements(self.array.n)?;
        Ok(env)
    }

    pub fn build_array(&self) -> Result<ArrayConfig> {
        let a = &self.array;
        let spacing = match a.spacing {
            Spacing::HalfWavelength => half_wavelength(a.carrier_hz, self.env.wave_speed),
            Spacing::Meters(m) => m,
        };
        let weights = match a.taper {
            Taper::Uniform => vec![1.0; a.n],
            Taper::Chebyshev { sidelobe_db } => chebyshev_taper(a.n, sidelobe_db)?,
        };
        let offsets = match a.offsets {
            Offsets::None => vec![0.0; a.n],
            Offsets::Linear { base_hz } => (0..a.n).map(|i| i as f64 * base_hz).collect(),
            Offsets::Chebyshev {
                max_hz,
                sidelobe_db,
            } => chebyshev_offsets(a.n, max_hz, sidelobe_db)?,
        };
        ArrayConfig::new(a.n, spacing, a.carrier_hz, weights, vec![0.0; a.n], offsets)
    }

    /// The pulse as consumed by raster evaluation; CW means no pulse.
    pub fn pulse_option(&self) -> Option<PulseSpec> {
        (!self.pulse.is_cw()).then_some(self.pulse)
    }

    pub fn resolved_mode(&self) -> Result<PatternMode> {
        let cfg = self.build_array()?;
        Ok(self
            .mode
            .unwrap_or_else(|| PatternMode::infer(&cfg, self.pulse_option().as_ref())))
    }

    pub fn validate(&self) -> Result<()> {
        self.build_env().map_err(|e| Error::ConfigKey {
            key: "env".into(),
            message: e.to_string(),
        })?;
        let cfg = self.build_array().map_err(|e| Error::ConfigKey {
            key: "array".into(),
            message: e.to_string(),
        })?;
        let pulse = self.pulse_option();
        if pulse.is_some() && !cfg.is_phased_array() {
            return Err(Error::ConfigKey {
                key: "array.offsets".into(),
                message: "pulsed excitation of a frequency diverse array is not defined".into(),
            });
        }
        let mode = self.resolved_mode()?;
        mode.check_inputs(&cfg, pulse.as_ref())
            .map_err(|e| Error::ConfigKey {
                key: "grid.mode".into(),
                message: e.to_string(),
            })?;
        Ok(())
    }

    /// Canonical text form with every value explicit; parsing it back
    /// yields an identical config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let a = &self.array;
        let _ = writeln!(s, "[array]");
        let _ = writeln!(s, "n = {}", a.n);
        match a.spacing {
            Spacing::HalfWavelength => {
                let _ = writeln!(s, "spacing = half-wavelength");
            }
            Spacing::Meters(m) => {
                let _ = writeln!(s, "spacing = {m:?}");
            }
        }
        let _ = writeln!(s, "carrier = {:?}", a.carrier_hz);
        match a.taper {
            Taper::Uniform => {
                let _ = writeln!(s, "taper = uniform");
            }
            Taper::Chebyshev { sidelobe_db } => {
                let _ = writeln!(s, "taper = chebyshev:{sidelobe_db:?}");
            }
        }
        match a.offsets {
            Offsets::None => {
                let _ = writeln!(s, "offsets = none");
            }
            Offsets::Linear { base_hz } => {
                let _ = writeln!(s, "offsets = linear:{base_hz:?}");
            }
            Offsets::Chebyshev {
                max_hz,
                sidelobe_db,
            } => {
                let _ = writeln!(s, "offsets = chebyshev:{max_hz:?},{sidelobe_db:?}");
            }
        }

        let _ = writeln!(s, "\n[pulse]");
        match self.pulse {
            PulseSpec::Cw => {
                let _ = writeln!(s, "shape = cw");
            }
            PulseSpec::Rect { center_s, width_s } => {
                let _ = writeln!(
                    s,
                    "shape = rect\ncenter = {center_s:?}\nwidth = {width_s:?}"
                );
            }
            PulseSpec::Gaussian { center_s, sigma_s } => {
                let _ = writeln!(
                    s,
                    "shape = gaussian\ncenter = {center_s:?}\nsigma = {sigma_s:?}"
                );
            }
        }

        let g = &self.grid;
        let _ = writeln!(s, "\n[grid]");
        let _ = writeln!(s, "r_min = {:?}", g.r_min_m);
        let _ = writeln!(s, "r_max = {:?}", g.r_max_m);
        let _ = writeln!(s, "n_range = {}", g.n_range);
        let _ = writeln!(s, "theta_min = {:?}", g.theta_min_rad);
        let _ = writeln!(s, "theta_max = {:?}", g.theta_max_rad);
        let _ = writeln!(s, "n_theta = {}", g.n_theta);
        let _ = writeln!(s, "time = {:?}", g.t_s);
        let _ = writeln!(s, "mode = {}", self.mode.map_or("auto", |m| m.as_str()));

        let e = &self.env;
        let _ = writeln!(s, "\n[env]");
        let _ = writeln!(s, "wave_speed = {:?}", e.wave_speed);
        let _ = writeln!(s, "rx_gain = {:?}", e.rx_gain);
        match &e.tx_gain {
            TxGain::Uniform(g) => {
                let _ = writeln!(s, "tx_gain = {g:?}");
            }
            TxGain::PerElement(gs) => {
                let list: Vec<String> = gs.iter().map(|g| format!("{g:?}")).collect();
                let _ = writeln!(s, "tx_gain = {}", list.join(","));
            }
        }

        let o = &self.output;
        let _ = writeln!(s, "\n[output]");
        let _ = writeln!(s, "out_dir = {}", o.out_dir.display());
        let _ = writeln!(s, "prefix = {}", o.prefix);
        let _ = writeln!(s, "format = {}", o.format.as_str());
        let _ = writeln!(s, "db_floor = {:?}", o.db_floor);
        let _ = writeln!(s, "csv_db = {}", o.csv_db);
        s
    }
}
