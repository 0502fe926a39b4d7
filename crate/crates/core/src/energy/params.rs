use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::tactics::TacticKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter {key} must be positive, got {value}")]
    NotPositive { key: &'static str, value: f64 },
    #[error("parameters must satisfy r_eye > r_net > r_lad > r_inv > r_red > r_sl >= r_none; {0}")]
    Order(String),
    #[error("r_eye must exceed 1, got {0}")]
    EyeBase(f64),
    #[error("d_max must be at least 1")]
    DistanceCap,
    #[error("line {line}: {detail}")]
    Syntax { line: usize, detail: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key {key:?} given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("cannot read {path}: {detail}")]
    Io { path: String, detail: String },
}

/// Pattern weights, field strength and corridor cap.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ParameterSet {
    pub r_eye: f64,
    pub r_net: f64,
    pub r_lad: f64,
    pub r_inv: f64,
    pub r_red: f64,
    pub r_sl: f64,
    pub r_none: f64,
    pub mu: f64,
    pub d_max: u32,
}

pub const PARAMETER_KEYS: [&str; 9] = ["r_eye", "r_net", "r_lad", "r_inv", "r_red", "r_sl", "r_none", "mu", "d_max"];

impl Default for ParameterSet {
    fn default() -> Self {
        Self { r_eye: 8.0, r_net: 5.0, r_lad: 4.0, r_inv: 3.0, r_red: 2.0, r_sl: 1.0, r_none: 1.0, mu: 1.0, d_max: 6 }
    }
}

impl ParameterSet {
    pub fn validate(&self) -> Result<(), ParamError> {
        let reals = [
            ("r_eye", self.r_eye),
            ("r_net", self.r_net),
            ("r_lad", self.r_lad),
            ("r_inv", self.r_inv),
            ("r_red", self.r_red),
            ("r_sl", self.r_sl),
            ("r_none", self.r_none),
            ("mu", self.mu),
        ];
        for (key, value) in reals {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::NotPositive { key, value });
            }
        }
        let chain = &reals[..6];
        for pair in chain.windows(2) {
            if pair[0].1 <= pair[1].1 {
                return Err(ParamError::Order(format!("{} = {} is not above {} = {}", pair[0].0, pair[0].1, pair[1].0, pair[1].1)));
            }
        }
        if self.r_sl < self.r_none {
            return Err(ParamError::Order(format!("r_sl = {} is below r_none = {}", self.r_sl, self.r_none)));
        }
        if self.r_eye <= 1.0 {
            return Err(ParamError::EyeBase(self.r_eye));
        }
        if self.d_max < 1 {
            return Err(ParamError::DistanceCap);
        }
        Ok(())
    }

    /// Weight of a chain's strongest tactic. Connections carry no weight of their own.
    pub fn r_for(&self, kind: TacticKind) -> f64 {
        match kind {
            TacticKind::Eye => self.r_eye,
            TacticKind::Net => self.r_net,
            TacticKind::Ladder => self.r_lad,
            TacticKind::Invasion => self.r_inv,
            TacticKind::Reduction => self.r_red,
            TacticKind::Connection | TacticKind::None => self.r_none,
        }
    }

    /// Parses `key = value` lines. `#` starts a comment; missing keys keep
    /// their defaults.
    pub fn from_config_str(text: &str) -> Result<Self, ParamError> {
        let mut params = Self::default();
        let mut seen = [false; PARAMETER_KEYS.len()];
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ParamError::Syntax { line: line_no, detail: format!("expected key = value, got {line:?}") })?;
            let (key, value) = (key.trim(), value.trim());
            let slot = PARAMETER_KEYS
                .iter()
                .position(|&k| k == key)
                .ok_or_else(|| ParamError::UnknownKey { line: line_no, key: key.to_string() })?;
            if std::mem::replace(&mut seen[slot], true) {
                return Err(ParamError::DuplicateKey { line: line_no, key: key.to_string() });
            }
            let bad = |detail: String| ParamError::Syntax { line: line_no, detail };
            if key == "d_max" {
                params.d_max = value.parse().map_err(|e| bad(format!("d_max: {e}")))?;
                continue;
            }
            let v: f64 = value.parse().map_err(|e| bad(format!("{key}: {e}")))?;
            match key {
                "r_eye" => params.r_eye = v,
                "r_net" => params.r_net = v,
                "r_lad" => params.r_lad = v,
                "r_inv" => params.r_inv = v,
                "r_red" => params.r_red = v,
                "r_sl" => params.r_sl = v,
                "r_none" => params.r_none = v,
                _ => params.mu = v,
            }
        }
        params.validate()?;
        Ok(params)
    }

    pub fn from_file(path: &Path) -> Result<Self, ParamError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ParamError::Io { path: path.display().to_string(), detail: e.to_string() })?;
        Self::from_config_str(&text)
    }

    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let reals = [self.r_eye, self.r_net, self.r_lad, self.r_inv, self.r_red, self.r_sl, self.r_none, self.mu];
        for (key, value) in PARAMETER_KEYS.iter().zip(reals) {
            let _ = writeln!(out, "{key} = {value}");
        }
        let _ = writeln!(out, "d_max = {}", self.d_max);
        out
    }
}
