//! Verification and sharpness experiments over a grid of dimensions `n`,
//! with log-log growth fits and CSV/JSON output.

mod config;
mod runs;

pub use config::{ExperimentConfig, Kind};
pub use runs::{
    run_bilinear_sharp, run_counterexample_growth, run_mixed_l2_check, run_sharpness_growth,
    run_verify_upper,
};

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::numfmt::sig15;
use crate::opnorm::NormKind;

/// Slack allowed between a fitted and a predicted growth slope.
pub const SLOPE_TOLERANCE: f64 = 0.15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub mixed_norm: f64,
    pub norm_estimate: f64,
    pub norm_kind: NormKind,
    pub ratio: f64,
    pub seed: u64,
    pub config_digest: String,
}

impl ExperimentRecord {
    pub fn certified(&self) -> bool {
        self.norm_kind == NormKind::Exact
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub predicted_slope: f64,
}

impl GrowthFit {
    pub fn agrees(&self, tol: f64) -> bool {
        (self.slope - self.predicted_slope).abs() <= tol
    }
}

/// Unweighted least squares of `ln ratio` against `ln n`.
pub fn growth_fit(records: &[ExperimentRecord], predicted_slope: f64) -> Result<GrowthFit> {
    if records.len() < 3 {
        return Err(Error::Data(format!(
            "a growth fit needs at least 3 records, got {}",
            records.len()
        )));
    }
    if let Some(r) = records.iter().find(|r| !(r.ratio > 0.0) || !r.ratio.is_finite()) {
        return Err(Error::Data(format!("ratio {} at n = {} is not positive", r.ratio, r.n)));
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|r| ((r.n as f64).ln(), r.ratio.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Data("all records share one n".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    Ok(GrowthFit {
        slope,
        intercept,
        stderr,
        predicted_slope,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<ExperimentRecord>,
    pub fit: Option<GrowthFit>,
    pub verdict: Verdict,
    /// One-line summary such as `max_ratio=… bound=…`.
    pub headline: String,
    pub details: Map<String, Value>,
}

impl ExperimentReport {
    pub fn detail_f64(&self, key: &str) -> Option<f64> {
        self.details.get(key).and_then(Value::as_f64)
    }

    pub fn to_json(&self) -> Value {
        let config: Map<String, Value> = self
            .config
            .pairs()
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::String(v)))
            .collect();
        json!({
            "config": config,
            "records": self.records,
            "fit": self.fit,
            "verdict": self.verdict,
            "headline": self.headline,
            "details": self.details,
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "n",
            "mixed_norm",
            "norm_estimate",
            "norm_kind",
            "ratio",
            "seed",
            "config_digest",
        ])?;
        for r in &self.records {
            out.write_record([
                r.n.to_string(),
                sig15(r.mixed_norm),
                sig15(r.norm_estimate),
                r.norm_kind.to_string(),
                sig15(r.ratio),
                r.seed.to_string(),
                r.config_digest.clone(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes `<kind>_<digest>.csv` and `.json` into `dir`, each through a
    /// temporary file renamed into place.
    pub fn write_outputs(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        let stem = format!("{}_{}", self.config.kind, self.config.digest());
        let csv_path = dir.join(format!("{stem}.csv"));
        let json_path = dir.join(format!("{stem}.json"));

        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        self.write_csv(&mut tmp)?;
        tmp.persist(&csv_path).map_err(|e| Error::Io(e.error))?;

        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer_pretty(&mut tmp, &self.to_json())?;
        writeln!(tmp)?;
        tmp.persist(&json_path).map_err(|e| Error::Io(e.error))?;
        Ok((csv_path, json_path))
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match cfg.kind {
        Kind::VerifyUpper => run_verify_upper(cfg),
        Kind::SharpnessGrowth => run_sharpness_growth(cfg),
        Kind::BilinearSharp => run_bilinear_sharp(cfg),
        Kind::MixedL2Check => run_mixed_l2_check(cfg),
        Kind::CounterexampleGrowth => run_counterexample_growth(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn records(points: &[(usize, f64)]) -> Vec<ExperimentRecord> {
        points
            .iter()
            .map(|&(n, ratio)| ExperimentRecord {
                n,
                mixed_norm: ratio,
                norm_estimate: 1.0,
                norm_kind: NormKind::Exact,
                ratio,
                seed: 0,
                config_digest: String::new(),
            })
            .collect()
    }

    #[test]
    fn fit_examples() {
        let ns = [4usize, 8, 16, 32];
        let exact: Vec<(usize, f64)> = ns.iter().map(|&n| (n, 3.0 * (n as f64).powf(0.7))).collect();
        let f = growth_fit(&records(&exact), 0.7).unwrap();
        assert_abs_diff_eq!(f.slope, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(f.intercept, 3f64.ln(), epsilon = 1e-12);
        assert!(f.stderr < 1e-12);
        assert!(f.agrees(1e-9));

        let flat: Vec<(usize, f64)> = ns.iter().map(|&n| (n, 2.5)).collect();
        assert_abs_diff_eq!(growth_fit(&records(&flat), 0.0).unwrap().slope, 0.0, epsilon = 1e-15);

        let half: Vec<(usize, f64)> = ns.iter().map(|&n| (n, (n as f64).sqrt())).collect();
        assert_abs_diff_eq!(growth_fit(&records(&half), 0.5).unwrap().slope, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(growth_fit(&records(&[(4, 1.0), (8, 2.0)]), 0.0), Err(Error::Data(_))));
        assert!(matches!(
            growth_fit(&records(&[(4, 1.0), (8, 0.0), (16, 2.0)]), 0.0),
            Err(Error::Data(_))
        ));
        assert!(growth_fit(&records(&[(4, 1.0), (4, 2.0), (4, 3.0)]), 0.0).is_err());
    }

    #[test]
    fn fit_recovers_noisy_slope() {
        let pts: Vec<(usize, f64)> = [4usize, 8, 16, 32, 64]
            .iter()
            .enumerate()
            .map(|(i, &n)| (n, (n as f64).powf(0.5) * (1.0 + 0.01 * (i as f64 - 2.0))))
            .collect();
        let f = growth_fit(&records(&pts), 0.5).unwrap();
        assert!(f.agrees(0.02));
        assert!(f.stderr > 0.0);
    }
}
