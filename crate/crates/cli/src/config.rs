//! Job configuration: one struct shared by the flag parser and `boij run`.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use boij_core::io::{
    codim_string, parse_codim, parse_rational, parse_window, rational_string, window_string,
};
use boij_core::sheaf::minimal_ulrich_window;
use boij_core::tables::{ratio, CodimensionSequence, Rational, Window};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Pure,
    Decompose,
    Member,
    Short,
    Bounds,
    Hilb,
    Koszul,
    Dims,
    Mult,
    Cohom,
    Limulrich,
    Utrivial,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Pure => "pure",
            Command::Decompose => "decompose",
            Command::Member => "member",
            Command::Short => "short",
            Command::Bounds => "bounds",
            Command::Hilb => "hilb",
            Command::Koszul => "koszul",
            Command::Dims => "dims",
            Command::Mult => "mult",
            Command::Cohom => "cohom",
            Command::Limulrich => "limulrich",
            Command::Utrivial => "utrivial",
        }
    }

    pub fn usage(self) -> &'static str {
        match self {
            Command::Pure => {
                "pure TABLE | pure --degrees 0,2,3 [--start a] | pure --window W --codim C"
            }
            Command::Decompose => "decompose --codim C TABLE",
            Command::Member => "member --codim C TABLE",
            Command::Short => "short --dim d TABLE",
            Command::Bounds => "bounds --er e TABLE",
            Command::Hilb => "hilb MODULE | hilb --dim d TABLE",
            Command::Koszul => "koszul MODULE",
            Command::Dims => "dims MODULE",
            Command::Mult => "mult MODULE",
            Command::Cohom => {
                "cohom --m m (--line a | --twists a1,..,am | --p p --n n) [--p p --n n] [--window W]"
            }
            Command::Limulrich => {
                "limulrich --m m (--p p | --line a) --nmax N --window W [--threshold r]"
            }
            Command::Utrivial => {
                "utrivial --m m (--p p | --line a | --twists ..) --u SCALE --nmax N --window W [--threshold r]"
            }
        }
    }
}

/// Every option of every command. `boij run` reads this as JSON; unknown
/// fields are rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Input files (a Betti table or a monomial module document).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<PathBuf>,
    /// Codimension sequence: const:c, mod:c, short:d or @p:v,... jump lists.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codim: Option<String>,
    /// Ambient dimension d of the polynomial ring.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    /// Multiplicity e(R) of the base ring.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub er: Option<String>,
    /// Dimension of projective space.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Characteristic for the Frobenius pushforward.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Frobenius iterate.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Horizon of a sequence check.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<u32>,
    /// Window "imin:imax,jmin:jmax" (j is the twist t for sheaf commands).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    /// Decay threshold for ratio checks.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    /// Line bundle O(a) on P^m.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<i64>,
    /// Line bundle O(a_1,..,a_m) on (P^1)^m, pushed to P^m.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<i64>>,
    /// Degree sequence of a pure diagram.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
    /// Starting homological position of --degrees.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<i64>,
    /// Normalizer u_n: n, n^k, const:k, scale or scale^k.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    /// Write the result document here instead of stdout.
    #[arg(short, long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Normalizer for u-trivial checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UScale {
    Const(u64),
    Power(u32),
    ScalePower(u32),
}

impl UScale {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let power = |s: &str| -> Result<u32> {
            s.parse::<u32>().map_err(|_| anyhow!("`{text}`: exponent `{s}` is not a nonnegative integer"))
        };
        if let Some(k) = text.strip_prefix("const:") {
            let k: u64 = k.parse().map_err(|_| anyhow!("`{text}`: constant must be a positive integer"))?;
            if k == 0 {
                bail!("`{text}`: constant must be positive");
            }
            return Ok(UScale::Const(k));
        }
        match text {
            "n" => Ok(UScale::Power(1)),
            "scale" => Ok(UScale::ScalePower(1)),
            _ => {
                if let Some(k) = text.strip_prefix("n^") {
                    Ok(UScale::Power(power(k)?))
                } else if let Some(k) = text.strip_prefix("scale^") {
                    Ok(UScale::ScalePower(power(k)?))
                } else {
                    bail!("`{text}` is not a normalizer (n, n^k, const:k, scale, scale^k)")
                }
            }
        }
    }

    pub fn text(self) -> String {
        match self {
            UScale::Const(k) => format!("const:{k}"),
            UScale::Power(1) => "n".into(),
            UScale::Power(k) => format!("n^{k}"),
            UScale::ScalePower(1) => "scale".into(),
            UScale::ScalePower(k) => format!("scale^{k}"),
        }
    }
}

/// Which sheaf table or sequence a sheaf command talks about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Line(i64),
    Product(Vec<i64>),
    /// The Frobenius family O(p^n, 2p^n, .., m p^n) pushed to P^m.
    En,
}

/// A validated job: flags parsed into exact values.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub command: Command,
    pub config: JobConfig,
    pub codim: Option<CodimensionSequence>,
    pub window: Option<Window>,
    pub er: Rational,
    pub threshold: Rational,
    pub u: Option<UScale>,
    pub family: Option<Family>,
    pub m: Option<usize>,
}

fn usage_error(command: Command, message: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("{}: {message}\nusage: boij {}", command.name(), command.usage())
}

fn parse_rational_flag(command: Command, flag: &str, text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| usage_error(command, format!("--{flag} `{text}` is not a rational")))
}

impl JobConfig {
    pub fn validate(&self) -> Result<Resolved> {
        let command = self.command.ok_or_else(|| anyhow!("job has no `command`"))?;
        let err = |msg: &str| usage_error(command, msg);
        let one_input = || -> Result<()> {
            match self.inputs.len() {
                1 => Ok(()),
                0 => Err(err("missing input file")),
                _ => Err(err("expected exactly one input file")),
            }
        };

        let codim = self
            .codim
            .as_deref()
            .map(|text| parse_codim(text, self.dim).map_err(|e| usage_error(command, e)))
            .transpose()?;
        let window = self
            .window
            .as_deref()
            .map(|text| parse_window(text).map_err(|e| usage_error(command, e)))
            .transpose()?;
        let er = match &self.er {
            Some(text) => parse_rational_flag(command, "er", text)?,
            None => ratio(1, 1),
        };
        if er <= ratio(0, 1) {
            return Err(err("--er must be positive"));
        }
        let threshold = match &self.threshold {
            Some(text) => parse_rational_flag(command, "threshold", text)?,
            None => ratio(1, 100),
        };
        let u = self.u.as_deref().map(UScale::parse).transpose().map_err(|e| usage_error(command, e))?;

        let family = match (&self.line, &self.twists) {
            (Some(_), Some(_)) => return Err(err("--line and --twists are exclusive")),
            (Some(a), None) => Some(Family::Line(*a)),
            (None, Some(t)) => Some(Family::Product(t.clone())),
            (None, None) if self.p.is_some() => Some(Family::En),
            (None, None) => None,
        };
        let m = match (&family, self.m) {
            (Some(Family::Product(t)), Some(m)) if m != t.len() => {
                return Err(err("--m disagrees with the number of --twists"))
            }
            (Some(Family::Product(t)), _) => Some(t.len()),
            (_, m) => m,
        };

        match command {
            Command::Pure => {
                let modes =
                    [!self.inputs.is_empty(), self.degrees.is_some(), window.is_some() || codim.is_some()];
                if modes.iter().filter(|&&b| b).count() != 1 {
                    return Err(err("give a table, --degrees, or --window with --codim"));
                }
                if !self.inputs.is_empty() {
                    one_input()?;
                }
                if (window.is_some() || codim.is_some()) && (window.is_none() || codim.is_none()) {
                    return Err(err("enumeration needs both --window and --codim"));
                }
            }
            Command::Decompose | Command::Member => {
                one_input()?;
                if codim.is_none() {
                    return Err(err("--codim is required"));
                }
            }
            Command::Short => {
                one_input()?;
                if self.dim.is_none() {
                    return Err(err("--dim is required"));
                }
            }
            Command::Bounds => {
                one_input()?;
                if self.er.is_none() {
                    return Err(err("--er is required"));
                }
            }
            Command::Hilb | Command::Koszul | Command::Dims | Command::Mult => one_input()?,
            Command::Cohom => {
                if m.is_none() {
                    return Err(err("--m is required"));
                }
                if family.is_none() {
                    return Err(err("choose a table with --line, --twists, or --p with --n"));
                }
                if self.p.is_some() != self.n.is_some() {
                    return Err(err("--p and --n go together"));
                }
            }
            Command::Limulrich | Command::Utrivial => {
                if m.is_none() {
                    return Err(err("--m is required"));
                }
                if self.nmax.is_none() {
                    return Err(err("--nmax is required"));
                }
                if window.is_none() {
                    return Err(err("--window is required"));
                }
                match (&family, command) {
                    (None, _) => return Err(err("choose a sequence with --p or --line")),
                    (Some(Family::Product(_)), Command::Limulrich) => {
                        return Err(err("--twists gives a single table; use --line or --p"))
                    }
                    _ => {}
                }
                if command == Command::Utrivial && u.is_none() {
                    return Err(err("--u is required"));
                }
            }
        }
        if let Some(m) = m {
            if m == 0 {
                return Err(err("--m must be at least 1"));
            }
        }
        let window = match (command, window, m) {
            (Command::Cohom, None, Some(m)) => Some(minimal_ulrich_window(m)),
            (_, w, _) => w,
        };
        Ok(Resolved { command, config: self.clone(), codim, window, er, threshold, u, family, m })
    }
}

impl Resolved {
    /// The configuration as it was understood, in canonical text forms.
    pub fn echo(&self) -> Value {
        let c = &self.config;
        let mut doc = json!({ "command": self.command.name() });
        let map = doc.as_object_mut().expect("object");
        let mut put = |k: &str, v: Value| {
            map.insert(k.to_string(), v);
        };
        if !c.inputs.is_empty() {
            put("inputs", json!(c.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>()));
        }
        if let Some(codim) = &self.codim {
            put("codim", json!(codim_string(codim)));
        }
        if let Some(window) = &self.window {
            put("window", json!(window_string(window)));
        }
        if let Some(d) = c.dim {
            put("dim", json!(d));
        }
        if matches!(self.command, Command::Bounds) || c.er.is_some() {
            put("er", json!(rational_string(&self.er)));
        }
        if matches!(self.command, Command::Limulrich | Command::Utrivial) {
            put("threshold", json!(rational_string(&self.threshold)));
        }
        if let Some(m) = self.m {
            put("m", json!(m));
        }
        for (k, v) in
            [("p", c.p.map(|x| json!(x))), ("n", c.n.map(|x| json!(x))), ("nmax", c.nmax.map(|x| json!(x)))]
        {
            if let Some(v) = v {
                put(k, v);
            }
        }
        if let Some(a) = c.line {
            put("line", json!(a));
        }
        if let Some(t) = &c.twists {
            put("twists", json!(t));
        }
        if let Some(t) = &c.degrees {
            put("degrees", json!(t));
            put("start", json!(c.start.unwrap_or(0)));
        }
        if let Some(u) = self.u {
            put("u", json!(u.text()));
        }
        doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(command: Command) -> JobConfig {
        JobConfig { command: Some(command), ..Default::default() }
    }

    #[test]
    fn member_needs_codim() {
        let mut j = job(Command::Member);
        j.inputs = vec!["t.txt".into()];
        let e = j.validate().unwrap_err().to_string();
        assert!(e.contains("--codim") && e.contains("usage: boij member"), "{e}");
        j.codim = Some("@0:2,inf".into());
        assert!(j.validate().is_ok());
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = r#"{"command": "koszul", "inputs": ["m.json"], "colour": 3}"#;
        assert!(serde_json::from_str::<JobConfig>(bad).is_err());
        let good = r#"{"command": "limulrich", "m": 1, "p": 2, "nmax": 8, "window": "0:1,-4:4"}"#;
        let r = serde_json::from_str::<JobConfig>(good).unwrap().validate().unwrap();
        assert_eq!(r.family, Some(Family::En));
        assert_eq!(r.threshold, ratio(1, 100));
    }

    #[test]
    fn normalizers() {
        for text in ["n", "n^2", "const:3", "scale", "scale^2"] {
            assert_eq!(UScale::parse(text).unwrap().text(), text);
        }
        assert!(UScale::parse("const:0").is_err());
        assert!(UScale::parse("log n").is_err());
    }

    #[test]
    fn cohom_defaults_to_ulrich_window() {
        let mut j = job(Command::Cohom);
        j.m = Some(2);
        j.line = Some(-1);
        assert_eq!(j.validate().unwrap().window, Some(minimal_ulrich_window(2)));
    }
}
