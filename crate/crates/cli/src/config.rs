//! JSON configuration: schema checking, defaults and sweep description.
//!
//! Every problem found in a document is collected as a [`Diagnostic`] that
//! names the offending location with a JSON pointer, so one run reports
//! all of them.
//!
//! ```json
//! {
//!   "units": "natural",
//!   "params": {"mass": 1, "gravity": 1, "hbar": 1, "tau_start": 0, "tau_end": 1},
//!   "z1": 0, "z2": 0.5,
//!   "frame_profile": {"kind": "constant", "value": 1},
//!   "beam_a": {"trajectory": {"kind": "constant", "value": 0.1}, "resolution": 1},
//!   "beam_b": {"trajectory": {"kind": "constant", "value": -0.1}, "resolution": 2},
//!   "sweep": {"parameter": "z2", "start": 0, "stop": 1, "steps": 11,
//!             "mode": "both", "oracle": [256, 512, 1024]}
//! }
//! ```

use std::fmt;
use std::str::FromStr;

use rpif_core::{
    validate_scenario, Error, Mode, PhysicalParams, RawBeam, RawScenario, TimeFunctionSpec,
};
use serde_json::{Map, Value};

/// One schema or invariant violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "{at}: {}", self.message)
    }
}

/// Every diagnostic raised while reading a configuration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{} configuration error(s): {}", .0.len(), join(.0))]
pub struct ConfigError(pub Vec<Diagnostic>);

impl ConfigError {
    pub fn mentions(&self, pointer: &str) -> bool {
        self.0.iter().any(|d| d.pointer == pointer)
    }
}

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Unit system of the numbers in a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    /// Values are used as given.
    #[default]
    Natural,
    /// Values are SI and are rescaled to m = ħ = T = 1 before evaluation.
    Si,
}

/// Scenario quantity varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    Z2,
    DeltaA,
    DeltaB,
    Gravity,
    /// Multiplies the mass, and with it m/ħ, by the swept value.
    MassOverHbarScale,
}

impl SweptParameter {
    pub const NAMES: [&'static str; 5] = ["z2", "delta_a", "delta_b", "g", "m_over_hbar_scale"];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Z2 => "z2",
            Self::DeltaA => "delta_a",
            Self::DeltaB => "delta_b",
            Self::Gravity => "g",
            Self::MassOverHbarScale => "m_over_hbar_scale",
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &RawScenario, value: f64) -> RawScenario {
        let mut raw = base.clone();
        match self {
            Self::Z2 => raw.z2 = value,
            Self::DeltaA => raw.beam_a.resolution = value,
            Self::DeltaB => raw.beam_b.resolution = value,
            Self::Gravity => raw.params.gravity = value,
            Self::MassOverHbarScale => raw.params.mass *= value,
        }
        raw
    }

    /// Value of this parameter in an unswept scenario.
    pub fn current(self, raw: &RawScenario) -> f64 {
        match self {
            Self::Z2 => raw.z2,
            Self::DeltaA => raw.beam_a.resolution,
            Self::DeltaB => raw.beam_b.resolution,
            Self::Gravity => raw.params.gravity,
            Self::MassOverHbarScale => 1.0,
        }
    }

    /// JSON pointer of the scenario field a bad swept value lands on.
    fn target_pointer(self) -> &'static str {
        match self {
            Self::Z2 => "/z2",
            Self::DeltaA => "/beam_a/resolution",
            Self::DeltaB => "/beam_b/resolution",
            Self::Gravity => "/params/gravity",
            Self::MassOverHbarScale => "/params/mass",
        }
    }
}

impl FromStr for SweptParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "z2" => Ok(Self::Z2),
            "delta_a" => Ok(Self::DeltaA),
            "delta_b" => Ok(Self::DeltaB),
            "g" => Ok(Self::Gravity),
            "m_over_hbar_scale" => Ok(Self::MassOverHbarScale),
            other => Err(format!(
                "unknown sweep parameter `{other}`, expected one of {}",
                Self::NAMES.join(", ")
            )),
        }
    }
}

/// Which evaluators produce rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeSelection {
    Literal,
    #[default]
    Derived,
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> &'static [Mode] {
        match self {
            Self::Literal => &[Mode::PaperLiteral],
            Self::Derived => &[Mode::Derived],
            Self::Both => &[Mode::PaperLiteral, Mode::Derived],
        }
    }
}

impl FromStr for ModeSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "literal" | "paper-literal" => Ok(Self::Literal),
            "derived" => Ok(Self::Derived),
            "both" => Ok(Self::Both),
            other => Err(format!(
                "unknown mode `{other}`, expected literal, derived or both"
            )),
        }
    }
}

/// Sweep over one parameter on an evenly spaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweptParameter,
    pub start: f64,
    pub stop: f64,
    /// Number of grid points, both ends included.
    pub steps: usize,
    pub mode: ModeSelection,
    /// Lattice sizes for the oracle, each double the previous.
    pub oracle: Option<Vec<usize>>,
}

impl SweepSpec {
    /// Grid values from `start` to `stop`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + span * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// Checks an oracle schedule: at least three sizes, each positive and double
/// the previous one.
pub fn check_oracle_schedule(levels: &[usize]) -> Result<(), String> {
    if levels.len() < 3 {
        return Err(format!(
            "oracle schedule needs at least 3 lattice sizes, got {}",
            levels.len()
        ));
    }
    if levels[0] == 0 {
        return Err("lattice sizes must be positive".into());
    }
    if levels.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err("each lattice size must double the previous one".into());
    }
    Ok(())
}

/// A fully checked configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub units: UnitSystem,
    pub scenario: RawScenario,
    pub sweep: SweepSpec,
}

impl Config {
    /// Raw scenarios of every sweep point, in grid order.
    pub fn points(&self) -> Vec<(f64, RawScenario)> {
        self.sweep
            .values()
            .into_iter()
            .map(|v| (v, self.sweep.parameter.apply(&self.scenario, v)))
            .collect()
    }
}

/// Reads and validates a configuration document.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        ConfigError(vec![Diagnostic {
            pointer: String::new(),
            message: format!("malformed JSON: {e}"),
        }])
    })?;
    let mut reader = Reader::default();
    let config = reader.document(&doc);
    match config {
        Some(c) if reader.diags.is_empty() => Ok(c),
        _ => Err(ConfigError(reader.diags)),
    }
}

#[derive(Default)]
struct Reader {
    diags: Vec<Diagnostic>,
}

fn child(pointer: &str, key: &str) -> String {
    format!("{pointer}/{}", key.replace('~', "~0").replace('/', "~1"))
}

/// Maps a dotted scenario field such as `beam_a.resolution` to a pointer.
fn field_pointer(field: &str) -> String {
    field
        .split('.')
        .fold(String::new(), |acc, k| child(&acc, k))
}

impl Reader {
    fn report(&mut self, pointer: impl Into<String>, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            pointer: pointer.into(),
            message: message.into(),
        });
    }

    fn object<'v>(&mut self, v: &'v Value, pointer: &str) -> Option<&'v Map<String, Value>> {
        match v.as_object() {
            Some(o) => Some(o),
            None => {
                self.report(pointer, format!("expected an object, got {}", type_name(v)));
                None
            }
        }
    }

    fn unknown_keys(&mut self, obj: &Map<String, Value>, pointer: &str, allowed: &[&str]) {
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                self.report(
                    child(pointer, key),
                    format!("unknown field, expected one of {}", allowed.join(", ")),
                );
            }
        }
    }

    fn number(
        &mut self,
        obj: &Map<String, Value>,
        key: &str,
        pointer: &str,
    ) -> Option<Option<f64>> {
        let p = child(pointer, key);
        match obj.get(key) {
            None => Some(None),
            Some(Value::Number(n)) => match n.as_f64() {
                Some(x) if x.is_finite() => Some(Some(x)),
                _ => {
                    self.report(p, "number out of range");
                    None
                }
            },
            Some(v) => {
                self.report(p, format!("expected a number, got {}", type_name(v)));
                None
            }
        }
    }

    fn required_number(
        &mut self,
        obj: &Map<String, Value>,
        key: &str,
        pointer: &str,
    ) -> Option<f64> {
        match self.number(obj, key, pointer)? {
            Some(x) => Some(x),
            None => {
                self.report(child(pointer, key), "missing required field");
                None
            }
        }
    }

    fn number_or(
        &mut self,
        obj: &Map<String, Value>,
        key: &str,
        pointer: &str,
        default: f64,
    ) -> Option<f64> {
        Some(self.number(obj, key, pointer)?.unwrap_or(default))
    }

    fn numbers(&mut self, obj: &Map<String, Value>, key: &str, pointer: &str) -> Option<Vec<f64>> {
        let p = child(pointer, key);
        let Some(v) = obj.get(key) else {
            self.report(p, "missing required field");
            return None;
        };
        let Some(items) = v.as_array() else {
            self.report(
                p,
                format!("expected an array of numbers, got {}", type_name(v)),
            );
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match item.as_f64() {
                Some(x) if x.is_finite() => out.push(x),
                _ => {
                    self.report(child(&p, &i.to_string()), "expected a finite number");
                    ok = false;
                }
            }
        }
        ok.then_some(out)
    }

    fn string<'v>(
        &mut self,
        obj: &'v Map<String, Value>,
        key: &str,
        pointer: &str,
    ) -> Option<Option<&'v str>> {
        match obj.get(key) {
            None => Some(None),
            Some(Value::String(s)) => Some(Some(s)),
            Some(v) => {
                self.report(
                    child(pointer, key),
                    format!("expected a string, got {}", type_name(v)),
                );
                None
            }
        }
    }

    fn document(&mut self, doc: &Value) -> Option<Config> {
        let root = self.object(doc, "")?;
        self.unknown_keys(
            root,
            "",
            &[
                "units",
                "params",
                "z1",
                "z2",
                "frame_profile",
                "beam_a",
                "beam_b",
                "sweep",
            ],
        );

        let units = match self.string(root, "units", "") {
            Some(None) => Some(UnitSystem::Natural),
            Some(Some("natural")) => Some(UnitSystem::Natural),
            Some(Some("si")) => Some(UnitSystem::Si),
            Some(Some(other)) => {
                self.report(
                    "/units",
                    format!("unknown unit system `{other}`, expected natural or si"),
                );
                None
            }
            None => None,
        };
        let params = self.params(root.get("params"));
        let z1 = self.number_or(root, "z1", "", 0.0);
        let z2 = self.number_or(root, "z2", "", 0.5);
        let frame_profile = match root.get("frame_profile") {
            None => Some(TimeFunctionSpec::Constant(1.0)),
            Some(v) => self.time_function(v, "/frame_profile"),
        };
        let beam_a = self.beam(root.get("beam_a"), "/beam_a");
        let beam_b = self.beam(root.get("beam_b"), "/beam_b");
        let sweep = self.sweep(root.get("sweep"), z2.unwrap_or(0.5));

        let complete = params.is_some()
            && z1.is_some()
            && z2.is_some()
            && frame_profile.is_some()
            && beam_a.is_some()
            && beam_b.is_some();
        // Stand-ins for unreadable parts let the invariant checks run on the
        // rest; violations under an already reported location are dropped.
        let placeholder_beam = || RawBeam {
            trajectory: TimeFunctionSpec::Constant(0.0),
            resolution: 1.0,
        };
        let scenario = RawScenario {
            params: params.unwrap_or(PhysicalParams::NATURAL),
            z1: z1.unwrap_or(0.0),
            z2: z2.unwrap_or(0.0),
            frame_profile: frame_profile.unwrap_or(TimeFunctionSpec::Constant(0.0)),
            beam_a: beam_a.unwrap_or_else(placeholder_beam),
            beam_b: beam_b.unwrap_or_else(placeholder_beam),
        };
        if let Err(e) = validate_scenario(&scenario) {
            let reported: Vec<String> = self.diags.iter().map(|d| d.pointer.clone()).collect();
            let before = self.diags.len();
            self.scenario_errors(&e, None);
            let mut fresh = self.diags.split_off(before);
            fresh.retain(|d| {
                !reported.iter().any(|r| {
                    d.pointer == *r
                        || d.pointer.starts_with(&format!("{r}/"))
                        || r.starts_with(&format!("{}/", d.pointer))
                })
            });
            self.diags.extend(fresh);
        }
        if !complete {
            return None;
        }
        let config = Config {
            units: units?,
            scenario,
            sweep: sweep?,
        };
        self.sweep_points(&config);
        Some(config)
    }

    fn scenario_errors(&mut self, e: &Error, sweep: Option<(SweptParameter, f64)>) {
        let suffix = sweep
            .map(|(p, v)| format!(" (at sweep point {} = {v})", p.as_str()))
            .unwrap_or_default();
        match e {
            Error::Validation(violations) => {
                for v in violations.iter() {
                    self.report(field_pointer(&v.field), format!("{}{suffix}", v.message));
                }
            }
            other => self.report("", format!("{other}{suffix}")),
        }
    }

    /// Each grid point must itself be a valid scenario.
    fn sweep_points(&mut self, config: &Config) {
        if !self.diags.is_empty() {
            return;
        }
        let parameter = config.sweep.parameter;
        for (value, raw) in config.points() {
            let checked = validate_scenario(&raw).and_then(|s| match config.units {
                UnitSystem::Si => s.nondimensionalized().map(|_| ()),
                UnitSystem::Natural => Ok(()),
            });
            if let Err(e) = checked {
                let before = self.diags.len();
                self.scenario_errors(&e, Some((parameter, value)));
                if self.diags[before..]
                    .iter()
                    .any(|d| d.pointer == parameter.target_pointer())
                {
                    self.report(
                        "/sweep",
                        format!("sweep reaches an invalid {} = {value}", parameter.as_str()),
                    );
                }
                return;
            }
        }
    }

    fn params(&mut self, v: Option<&Value>) -> Option<PhysicalParams> {
        let d = PhysicalParams::NATURAL;
        let Some(v) = v else { return Some(d) };
        let obj = self.object(v, "/params")?;
        self.unknown_keys(
            obj,
            "/params",
            &["mass", "gravity", "hbar", "tau_start", "tau_end"],
        );
        let mass = self.number_or(obj, "mass", "/params", d.mass);
        let gravity = self.number_or(obj, "gravity", "/params", d.gravity);
        let hbar = self.number_or(obj, "hbar", "/params", d.hbar);
        let tau_start = self.number_or(obj, "tau_start", "/params", d.tau_start);
        let tau_end = self.number_or(obj, "tau_end", "/params", d.tau_end);
        Some(PhysicalParams {
            mass: mass?,
            gravity: gravity?,
            hbar: hbar?,
            tau_start: tau_start?,
            tau_end: tau_end?,
        })
    }

    fn beam(&mut self, v: Option<&Value>, pointer: &str) -> Option<RawBeam> {
        let Some(v) = v else {
            self.report(pointer, "missing required field");
            return None;
        };
        let obj = self.object(v, pointer)?;
        self.unknown_keys(obj, pointer, &["trajectory", "resolution"]);
        let trajectory = match obj.get("trajectory") {
            None => Some(TimeFunctionSpec::Constant(0.0)),
            Some(t) => self.time_function(t, &child(pointer, "trajectory")),
        };
        let resolution = self.required_number(obj, "resolution", pointer);
        Some(RawBeam {
            trajectory: trajectory?,
            resolution: resolution?,
        })
    }

    fn time_function(&mut self, v: &Value, pointer: &str) -> Option<TimeFunctionSpec> {
        let obj = self.object(v, pointer)?;
        let kind = match self.string(obj, "kind", pointer)? {
            Some(k) => k,
            None => {
                self.report(child(pointer, "kind"), "missing required field");
                return None;
            }
        };
        let allowed: &[&str] = match kind {
            "constant" => &["kind", "value"],
            "linear" => &["kind", "slope", "intercept"],
            "sinusoid" => &["kind", "amplitude", "angular_frequency", "phase", "offset"],
            "polynomial" => &["kind", "coefficients"],
            "tabulated" => &["kind", "times", "values"],
            other => {
                self.report(
                    child(pointer, "kind"),
                    format!(
                        "unknown time-function kind `{other}`, expected constant, linear, \
                         sinusoid, polynomial or tabulated"
                    ),
                );
                return None;
            }
        };
        self.unknown_keys(obj, pointer, allowed);
        match kind {
            "constant" => Some(TimeFunctionSpec::Constant(
                self.required_number(obj, "value", pointer)?,
            )),
            "linear" => {
                let slope = self.required_number(obj, "slope", pointer);
                let intercept = self.number_or(obj, "intercept", pointer, 0.0);
                Some(TimeFunctionSpec::Linear {
                    slope: slope?,
                    intercept: intercept?,
                })
            }
            "sinusoid" => {
                let amplitude = self.required_number(obj, "amplitude", pointer);
                let angular_frequency = self.required_number(obj, "angular_frequency", pointer);
                let phase = self.number_or(obj, "phase", pointer, 0.0);
                let offset = self.number_or(obj, "offset", pointer, 0.0);
                Some(TimeFunctionSpec::Sinusoid {
                    amplitude: amplitude?,
                    angular_frequency: angular_frequency?,
                    phase: phase?,
                    offset: offset?,
                })
            }
            "polynomial" => Some(TimeFunctionSpec::Polynomial(self.numbers(
                obj,
                "coefficients",
                pointer,
            )?)),
            _ => {
                let times = self.numbers(obj, "times", pointer);
                let values = self.numbers(obj, "values", pointer);
                Some(TimeFunctionSpec::Tabulated {
                    times: times?,
                    values: values?,
                })
            }
        }
    }

    fn sweep(&mut self, v: Option<&Value>, z2: f64) -> Option<SweepSpec> {
        let Some(v) = v else {
            return Some(SweepSpec {
                parameter: SweptParameter::Z2,
                start: z2,
                stop: z2,
                steps: 1,
                mode: ModeSelection::default(),
                oracle: None,
            });
        };
        let p = "/sweep";
        let obj = self.object(v, p)?;
        self.unknown_keys(
            obj,
            p,
            &["parameter", "start", "stop", "steps", "mode", "oracle"],
        );

        let parameter = match self.string(obj, "parameter", p)? {
            Some(name) => match name.parse::<SweptParameter>() {
                Ok(x) => Some(x),
                Err(msg) => {
                    self.report("/sweep/parameter", msg);
                    None
                }
            },
            None => {
                self.report("/sweep/parameter", "missing required field");
                None
            }
        };
        let start = self.required_number(obj, "start", p);
        let stop = self.required_number(obj, "stop", p);
        let steps = match obj.get("steps") {
            None => {
                self.report("/sweep/steps", "missing required field");
                None
            }
            Some(s) => match s.as_u64() {
                Some(n) if n >= 1 => Some(n as usize),
                _ => {
                    self.report("/sweep/steps", format!("must be an integer >= 1, got {s}"));
                    None
                }
            },
        };
        let mode = match self.string(obj, "mode", p)? {
            None => Some(ModeSelection::default()),
            Some(m) => match m.parse() {
                Ok(x) => Some(x),
                Err(msg) => {
                    self.report("/sweep/mode", msg);
                    None
                }
            },
        };
        let oracle = match obj.get("oracle") {
            None | Some(Value::Null) => Some(None),
            Some(Value::Array(items)) => {
                let levels: Option<Vec<usize>> = items
                    .iter()
                    .map(|x| x.as_u64().map(|n| n as usize))
                    .collect();
                match levels {
                    None => {
                        self.report("/sweep/oracle", "expected an array of positive integers");
                        None
                    }
                    Some(levels) => match check_oracle_schedule(&levels) {
                        Ok(()) => Some(Some(levels)),
                        Err(msg) => {
                            self.report("/sweep/oracle", msg);
                            None
                        }
                    },
                }
            }
            Some(other) => {
                self.report(
                    "/sweep/oracle",
                    format!(
                        "expected an array of positive integers, got {}",
                        type_name(other)
                    ),
                );
                None
            }
        };
        if let (Some(a), Some(b)) = (start, stop) {
            if a > b {
                self.report("/sweep/stop", format!("stop {b} is below start {a}"));
                return None;
            }
        }
        Some(SweepSpec {
            parameter: parameter?,
            start: start?,
            stop: stop?,
            steps: steps?,
            mode: mode?,
            oracle: oracle?,
        })
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}
