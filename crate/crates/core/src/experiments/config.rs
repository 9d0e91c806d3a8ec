//! `key = value` experiment configs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exponents::{parse_exponent, ExponentVector, Field};
use crate::numfmt::sig15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    VerifyUpper,
    SharpnessGrowth,
    BilinearSharp,
    MixedL2Check,
    CounterexampleGrowth,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::VerifyUpper => "verify_upper",
            Kind::SharpnessGrowth => "sharpness_growth",
            Kind::BilinearSharp => "bilinear_sharp",
            Kind::MixedL2Check => "mixed_l2_check",
            Kind::CounterexampleGrowth => "counterexample_growth",
        }
    }

    fn default_n_values(self) -> Vec<usize> {
        match self {
            Kind::SharpnessGrowth | Kind::CounterexampleGrowth => vec![4, 8, 16, 32, 64],
            Kind::BilinearSharp => (2..=12).collect(),
            Kind::VerifyUpper | Kind::MixedL2Check => (2..=8).collect(),
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Kind::SharpnessGrowth | Kind::CounterexampleGrowth => 16,
            Kind::BilinearSharp => 100,
            Kind::VerifyUpper | Kind::MixedL2Check => 50,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "verify_upper" => Kind::VerifyUpper,
            "sharpness_growth" => Kind::SharpnessGrowth,
            "bilinear_sharp" => Kind::BilinearSharp,
            "mixed_l2_check" => Kind::MixedL2Check,
            "counterexample_growth" => Kind::CounterexampleGrowth,
            other => return Err(Error::Config(format!("unknown experiment kind '{other}'"))),
        })
    }
}

/// A fully resolved experiment configuration.
///
/// `trials` is the number of random forms per `n` for the verification
/// kinds and the number of sampled sign tensors per KSZ form for the growth
/// kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub m: usize,
    pub s: f64,
    pub q_cod: f64,
    pub p: ExponentVector,
    pub q: Option<ExponentVector>,
    pub n_values: Vec<usize>,
    pub seed: u64,
    pub trials: usize,
    pub restarts: usize,
    pub field: Field,
    pub vector_valued: bool,
    pub cotype2_constant: f64,
    pub summing_norm: f64,
}

const KEYS: &[&str] = &[
    "kind",
    "m",
    "s",
    "q_cod",
    "p",
    "q",
    "n_values",
    "seed",
    "trials",
    "restarts",
    "field",
    "vector_valued",
    "cotype2_constant",
    "summing_norm",
];

fn exponent_text(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        sig15(x)
    }
}

fn vector_text(v: &ExponentVector) -> String {
    v.values().iter().map(|&x| exponent_text(x)).collect::<Vec<_>>().join(",")
}

fn bad(key: &str, value: &str, why: impl fmt::Display) -> Error {
    Error::Config(format!("{key} = {value}: {why}"))
}

impl ExperimentConfig {
    /// Defaults for `kind` at arity `m`.
    pub fn new(kind: Kind, m: usize) -> Self {
        Self {
            kind,
            m,
            s: 1.0,
            q_cod: 2.0,
            p: ExponentVector::infinite(m.max(1)),
            q: None,
            n_values: kind.default_n_values(),
            seed: 0,
            trials: kind.default_trials(),
            restarts: 32,
            field: Field::Real,
            vector_valued: false,
            cotype2_constant: 1.0,
            summing_norm: 1.0,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: "expected 'key = value'".into(),
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("unknown key '{k}'"),
                });
            }
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("duplicate key '{k}'"),
                });
            }
            pairs.push((k, v));
        }
        let get = |key: &str| pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());

        let kind: Kind = get("kind")
            .ok_or_else(|| Error::Config("missing required key 'kind'".into()))?
            .parse()?;
        let p: Option<ExponentVector> = get("p").map(|v| v.parse().map_err(|e| bad("p", v, e))).transpose()?;
        let q: Option<ExponentVector> = get("q").filter(|v| *v != "none").map(|v| v.parse().map_err(|e| bad("q", v, e))).transpose()?;
        let m = match get("m") {
            Some(v) => v.parse::<usize>().map_err(|e| bad("m", v, e))?,
            None => q.as_ref().or(p.as_ref()).map_or(2, |v| v.m()),
        };
        if m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        let mut cfg = Self::new(kind, m);
        if let Some(p) = p {
            cfg.p = p;
        }
        cfg.q = q;
        for (key, value) in &pairs {
            let v = value.as_str();
            match key.as_str() {
                "s" => cfg.s = parse_exponent(v).map_err(|e| bad(key, v, e))?,
                "q_cod" => cfg.q_cod = parse_exponent(v).map_err(|e| bad(key, v, e))?,
                "n_values" => {
                    cfg.n_values = v
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse::<usize>().map_err(|e| bad(key, v, e)))
                        .collect::<Result<_>>()?
                }
                "seed" => cfg.seed = v.parse().map_err(|e| bad(key, v, e))?,
                "trials" => cfg.trials = v.parse().map_err(|e| bad(key, v, e))?,
                "restarts" => cfg.restarts = v.parse().map_err(|e| bad(key, v, e))?,
                "field" => cfg.field = v.parse().map_err(|e| bad(key, v, e))?,
                "vector_valued" => cfg.vector_valued = v.parse().map_err(|e| bad(key, v, e))?,
                "cotype2_constant" => cfg.cotype2_constant = v.parse().map_err(|e| bad(key, v, e))?,
                "summing_norm" => cfg.summing_norm = v.parse().map_err(|e| bad(key, v, e))?,
                _ => {}
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.m() != self.m {
            return Err(Error::Config(format!("p has {} entries but m = {}", self.p.m(), self.m)));
        }
        if let Some(q) = &self.q {
            if q.m() != self.m {
                return Err(Error::Config(format!("q has {} entries but m = {}", q.m(), self.m)));
            }
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(Error::Config("n_values must be nonempty and positive".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_values must be strictly increasing".into()));
        }
        if self.trials == 0 || self.restarts == 0 {
            return Err(Error::Config("trials and restarts must be at least 1".into()));
        }
        if !(self.cotype2_constant > 0.0) || !(self.summing_norm > 0.0) {
            return Err(Error::Config("constants must be positive".into()));
        }
        Ok(())
    }

    /// Canonical `key = value` text: every key, fixed order.
    pub fn to_text(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("kind", self.kind.to_string()),
            ("m", self.m.to_string()),
            ("s", exponent_text(self.s)),
            ("q_cod", exponent_text(self.q_cod)),
            ("p", vector_text(&self.p)),
            ("q", self.q.as_ref().map(vector_text).unwrap_or_else(|| "none".into())),
            (
                "n_values",
                self.n_values.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
            ),
            ("seed", self.seed.to_string()),
            ("trials", self.trials.to_string()),
            ("restarts", self.restarts.to_string()),
            ("field", self.field.to_string()),
            ("vector_valued", self.vector_valued.to_string()),
            ("cotype2_constant", sig15(self.cotype2_constant)),
            ("summing_norm", sig15(self.summing_norm)),
        ]
    }

    /// First 16 hex digits of the SHA-256 of [`Self::to_text`].
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_text().as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub(crate) fn require_q(&self) -> Result<&ExponentVector> {
        self.q
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{} needs the exponent vector q", self.kind)))
    }
}
