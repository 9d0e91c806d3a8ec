use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{growth_fit, ExperimentConfig, ExperimentRecord, ExperimentReport, Verdict, SLOPE_TOLERANCE};
use crate::constructions::{
    degenerate_counterexample, ksz_random, ksz_vector, littlewood_extremizer, random_gaussian_tensor,
    random_unimodular_tensor, RandomScalar,
};
use crate::error::{Error, Result};
use crate::exponents::{constant_bounds, feasibility, ConstantSpec, ExponentVector, Field, ProblemSpec, FEASIBILITY_TOL};
use crate::numfmt::sig15;
use crate::opnorm::{exact_sign_enumeration, operator_norm, Method, MultilinearForm, NormEstimate, NormOptions};
use crate::rng::{derive_seed, stream};
use crate::tensor::{mixed_norm, uniform_norm_tensor, CoefficientTensor, MixedNormSpec};

/// Slack on certified `ratio ≤ constant` checks.
const BOUND_SLACK: f64 = 1e-9;

fn n_seed(cfg: &ExperimentConfig, n: usize) -> u64 {
    derive_seed(cfg.seed, stream::EXPERIMENT, n as u64)
}

fn form_seed(cfg: &ExperimentConfig, n: usize, t: usize) -> u64 {
    derive_seed(n_seed(cfg, n), stream::TRIAL_SEED, t as u64)
}

fn options(cfg: &ExperimentConfig) -> NormOptions {
    NormOptions {
        restarts: cfg.restarts,
        ..NormOptions::default()
    }
}

fn record<S>(n: usize, mixed: f64, norm: &NormEstimate<S>, seed: u64, digest: &str) -> Result<ExperimentRecord> {
    if !(norm.value > 0.0) {
        return Err(Error::DegenerateForm);
    }
    Ok(ExperimentRecord {
        n,
        mixed_norm: mixed,
        norm_estimate: norm.value,
        norm_kind: norm.kind,
        ratio: mixed / norm.value,
        seed,
        config_digest: digest.to_string(),
    })
}

/// Scalar forms are measured against the Bohnenblust–Hille codomain setting.
fn problem_spec(cfg: &ExperimentConfig) -> Result<ProblemSpec> {
    let (s, q_cod) = if cfg.vector_valued { (cfg.s, cfg.q_cod) } else { (1.0, 2.0) };
    ProblemSpec::new(cfg.p.clone(), s, q_cod, cfg.field)
}

fn norm_spec(cfg: &ExperimentConfig, q: &ExponentVector) -> MixedNormSpec {
    let spec = MixedNormSpec::new(q.clone());
    if cfg.vector_valued {
        spec.with_codomain(cfg.q_cod)
    } else {
        spec
    }
}

/// Random form `t` at dimension `n`: even `t` unimodular, odd `t` Gaussian.
fn random_form<S: RandomScalar>(
    cfg: &ExperimentConfig,
    n: usize,
    seed: u64,
    t: usize,
) -> Result<MultilinearForm<S>> {
    let codomain = cfg.vector_valued.then_some(n);
    let tensor: CoefficientTensor<S> = if t % 2 == 0 {
        random_unimodular_tensor(vec![n; cfg.m], codomain, seed)?
    } else {
        random_gaussian_tensor(vec![n; cfg.m], codomain, seed)?
    };
    if cfg.vector_valued {
        MultilinearForm::vector_valued(tensor, cfg.p.clone(), cfg.s)
    } else {
        MultilinearForm::new(tensor, cfg.p.clone())
    }
}

fn jobs(cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    cfg.n_values
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect()
}

struct BoundCheck {
    max_ratio: f64,
    max_certified: f64,
    certified: usize,
    estimated: usize,
    violations: usize,
}

fn check_bound(records: &[ExperimentRecord], bound: f64) -> BoundCheck {
    let mut c = BoundCheck {
        max_ratio: 0.0,
        max_certified: 0.0,
        certified: 0,
        estimated: 0,
        violations: 0,
    };
    for r in records {
        c.max_ratio = c.max_ratio.max(r.ratio);
        if r.certified() {
            c.certified += 1;
            c.max_certified = c.max_certified.max(r.ratio);
            if r.ratio > bound + BOUND_SLACK {
                c.violations += 1;
            }
        } else {
            c.estimated += 1;
        }
    }
    c
}

impl BoundCheck {
    fn into_details(self, bound: f64, source: &str) -> Map<String, Value> {
        let mut d = Map::new();
        d.insert("max_ratio".into(), json!(self.max_ratio));
        d.insert("max_certified_ratio".into(), json!(self.max_certified));
        d.insert("bound".into(), json!(bound));
        d.insert("bound_source".into(), json!(source));
        d.insert("certified".into(), json!(self.certified));
        d.insert("estimated".into(), json!(self.estimated));
        d.insert("violations".into(), json!(self.violations));
        d
    }
}

fn constants(cfg: &ExperimentConfig) -> Result<ConstantSpec> {
    let base = ConstantSpec::scalar_default(cfg.field);
    ConstantSpec::new(cfg.cotype2_constant, cfg.summing_norm, base.khintchine_base)
}

/// Random forms at every `n`, ratios against the best available norm, and
/// the largest certified ratio compared with the known constant.
pub fn run_verify_upper(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let q = cfg.require_q()?;
    let spec = problem_spec(cfg)?;
    let feas = feasibility(q, &spec).map_err(|e| Error::Refused(e.to_string()))?;
    if !feas.feasible {
        return Err(Error::Refused(format!(
            "q = {q} is infeasible (slack {})",
            sig15(feas.slack)
        )));
    }
    let records = match cfg.field {
        Field::Real => verify_records::<f64>(cfg, q)?,
        Field::Complex => verify_records::<Complex64>(cfg, q)?,
    };
    let bounds = constant_bounds(cfg.m, cfg.field, &constants(cfg)?)?;
    let scalar_c0 = !cfg.vector_valued && cfg.p.all_infinite();
    let (bound, source) = if scalar_c0 && cfg.m == 2 && cfg.field == Field::Real {
        (bounds.bilinear_sharp(q.values()[0], q.values()[1])?, "bilinear_sharp")
    } else if scalar_c0 {
        (bounds.bh_upper, "bh_upper")
    } else {
        (bounds.mixed_upper, "mixed_upper")
    };
    let check = check_bound(&records, bound);
    let verdict = Verdict::from(check.violations == 0);
    let shown = if check.certified > 0 { check.max_certified } else { check.max_ratio };
    let headline = format!("max_ratio={} bound={}", sig15(shown), sig15(bound));
    let mut details = check.into_details(bound, source);
    details.insert("slack".into(), json!(feas.slack));
    details.insert("lambda".into(), json!(feas.lambda));
    Ok(ExperimentReport {
        config: cfg.clone(),
        records,
        fit: None,
        verdict,
        headline,
        details,
    })
}

fn verify_records<S: RandomScalar>(cfg: &ExperimentConfig, q: &ExponentVector) -> Result<Vec<ExperimentRecord>> {
    let digest = cfg.digest();
    let spec = norm_spec(cfg, q);
    let opts = options(cfg);
    jobs(cfg)
        .into_par_iter()
        .map(|(n, t)| {
            let seed = form_seed(cfg, n, t);
            let form = random_form::<S>(cfg, n, seed, t)?;
            let est = operator_norm(&form, Method::Auto, &opts, derive_seed(seed, stream::ASCENT_START, 0))?;
            record(n, mixed_norm(form.tensor(), &spec)?, &est, seed, &digest)
        })
        .collect()
}

/// Exponent `Σ 1/q_i (+ 1/q_cod)` of the mixed norm of a unimodular tensor on `n^m`.
fn unimodular_exponent(cfg: &ExperimentConfig, q: &ExponentVector) -> f64 {
    q.reciprocal_sum() + if cfg.vector_valued { 1.0 / cfg.q_cod } else { 0.0 }
}

/// KSZ forms at every `n`; the fitted slope of the ratio is compared with
/// the exponent gap between the mixed norm and the KSZ norm bound.
pub fn run_sharpness_growth(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let q = cfg.require_q()?;
    if cfg.n_values.len() < 3 {
        return Err(Error::Config("growth fits need at least 3 n values".into()));
    }
    let spec = problem_spec(cfg)?;
    let predicted = q.reciprocal_sum() - (cfg.m as f64 / 2.0 + spec.excess());
    let records = match cfg.field {
        Field::Real => growth_records::<f64>(cfg, q)?,
        Field::Complex => growth_records::<Complex64>(cfg, q)?,
    };
    let fit = growth_fit(&records, predicted)?;
    let e = unimodular_exponent(cfg, q);
    let closed_form_dev = records
        .iter()
        .map(|r| (r.mixed_norm / (r.n as f64).powf(e) - 1.0).abs())
        .fold(0.0, f64::max);
    let certified = records.iter().all(|r| r.certified());
    let mut details = Map::new();
    details.insert("certified".into(), json!(certified));
    details.insert("mixed_norm_exponent".into(), json!(e));
    details.insert("mixed_norm_max_rel_dev".into(), json!(closed_form_dev));
    details.insert("slope_tolerance".into(), json!(SLOPE_TOLERANCE));
    Ok(ExperimentReport {
        config: cfg.clone(),
        verdict: Verdict::from(fit.agrees(SLOPE_TOLERANCE)),
        headline: format!("slope={} predicted={}", sig15(fit.slope), sig15(fit.predicted_slope)),
        records,
        fit: Some(fit),
        details,
    })
}

fn growth_records<S: RandomScalar>(cfg: &ExperimentConfig, q: &ExponentVector) -> Result<Vec<ExperimentRecord>> {
    let digest = cfg.digest();
    let spec = norm_spec(cfg, q);
    let opts = options(cfg);
    cfg.n_values
        .par_iter()
        .map(|&n| {
            let seed = n_seed(cfg, n);
            let ksz = if cfg.vector_valued {
                ksz_vector::<S>(cfg.m, n, &cfg.p, cfg.s, seed, cfg.trials, &opts)?
            } else {
                ksz_random::<S>(cfg.m, n, &cfg.p, seed, cfg.trials, &opts)?
            };
            record(n, mixed_norm(ksz.form.tensor(), &spec)?, &ksz.norm, seed, &digest)
        })
        .collect()
}

/// The 2×2 extremizer attains `2^{1/p+1/q−1}` and no random square form
/// exceeds it.
pub fn run_bilinear_sharp(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let q = cfg.require_q()?;
    if cfg.m != 2 || cfg.field != Field::Real {
        return Err(Error::Refused("bilinear_sharp needs m = 2 over the reals".into()));
    }
    let (a, b) = (q.values()[0], q.values()[1]);
    if !(1.0..=2.0).contains(&a) || !(1.0..=2.0).contains(&b) || 1.0 / a + 1.0 / b > 1.5 + FEASIBILITY_TOL {
        return Err(Error::Refused(format!(
            "exponent pair ({}, {}) needs entries in [1, 2] and 1/p + 1/q <= 3/2",
            sig15(a),
            sig15(b)
        )));
    }
    let bound = constant_bounds(2, Field::Real, &constants(cfg)?)?.bilinear_sharp(a, b)?;
    let spec = MixedNormSpec::new(q.clone());
    let ext = littlewood_extremizer();
    let ext_norm = exact_sign_enumeration(&ext)?;
    let ext_ratio = mixed_norm(ext.tensor(), &spec)? / ext_norm.value;
    let equality = (ext_ratio - bound).abs() <= 1e-12 * bound;

    let digest = cfg.digest();
    let records: Vec<ExperimentRecord> = jobs(cfg)
        .into_par_iter()
        .map(|(n, t)| {
            let seed = form_seed(cfg, n, t);
            let tensor = if t % 2 == 0 {
                random_unimodular_tensor::<f64>(vec![n, n], None, seed)?
            } else {
                random_gaussian_tensor::<f64>(vec![n, n], None, seed)?
            };
            let form = MultilinearForm::new(tensor, ExponentVector::infinite(2))?;
            let est = exact_sign_enumeration(&form)?;
            record(n, mixed_norm(form.tensor(), &spec)?, &est, seed, &digest)
        })
        .collect::<Result<_>>()?;
    let check = check_bound(&records, bound);
    let verdict = Verdict::from(equality && check.violations == 0);
    let mut details = check.into_details(bound, "bilinear_sharp");
    details.insert("extremizer_ratio".into(), json!(ext_ratio));
    details.insert("equality".into(), json!(equality));
    Ok(ExperimentReport {
        config: cfg.clone(),
        records,
        fit: None,
        verdict,
        headline: format!("ratio={} bound={}", sig15(ext_ratio), sig15(bound)),
        details,
    })
}

/// Index `l` with `Σ_{k≠l} 1/p_k > 1/2`, if any.
fn violated_slot(p: &ExponentVector) -> Option<usize> {
    let total = p.reciprocal_sum();
    let recips: Vec<f64> = p.reciprocals().collect();
    (0..p.m()).find(|&l| total - recips[l] > 0.5 + FEASIBILITY_TOL)
}

/// `(Σ_{i_k}(Σ_{î_k}|A_i|²)^{λ/2})^{1/λ} ≤ (√2 C_2)^{m−1} π ‖A‖` for every `k`,
/// with `λ = 1/(1 − |1/p|)`. When the side condition on `p` fails the
/// degenerate counterexample is run instead and is expected to grow.
pub fn run_mixed_l2_check(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.vector_valued {
        return Err(Error::Refused("mixed_l2_check covers scalar forms only".into()));
    }
    if let Some(l) = violated_slot(&cfg.p) {
        let mut moved = cfg.clone();
        let mut p = cfg.p.values().to_vec();
        let pl = p.remove(l);
        p.push(pl);
        moved.p = ExponentVector::new(p)?;
        let mut report = run_counterexample_growth(&moved)?;
        report.config = cfg.clone();
        report.details.insert("mode".into(), json!("expect_failure"));
        report.details.insert("violated_slot".into(), json!(l + 1));
        return Ok(report);
    }
    let inv = cfg.p.reciprocal_sum();
    if inv >= 1.0 {
        return Err(Error::Refused(format!(
            "|1/p| = {} leaves no finite lambda",
            sig15(inv)
        )));
    }
    let lambda = 1.0 / (1.0 - inv);
    let records = match cfg.field {
        Field::Real => mixed_l2_records::<f64>(cfg, lambda)?,
        Field::Complex => mixed_l2_records::<Complex64>(cfg, lambda)?,
    };
    let bound = constant_bounds(cfg.m, cfg.field, &constants(cfg)?)?.mixed_upper;
    let check = check_bound(&records, bound);
    let verdict = Verdict::from(check.violations == 0);
    let headline = format!("max_ratio={} bound={}", sig15(check.max_ratio), sig15(bound));
    let mut details = check.into_details(bound, "mixed_upper");
    details.insert("lambda".into(), json!(lambda));
    details.insert("mode".into(), json!("verify"));
    Ok(ExperimentReport {
        config: cfg.clone(),
        records,
        fit: None,
        verdict,
        headline,
        details,
    })
}

fn mixed_l2_records<S: RandomScalar>(cfg: &ExperimentConfig, lambda: f64) -> Result<Vec<ExperimentRecord>> {
    let digest = cfg.digest();
    let opts = options(cfg);
    jobs(cfg)
        .into_par_iter()
        .map(|(n, t)| {
            let seed = form_seed(cfg, n, t);
            let form = random_form::<S>(cfg, n, seed, t)?;
            let est = operator_norm(&form, Method::Auto, &opts, derive_seed(seed, stream::ASCENT_START, 0))?;
            let lhs = (0..cfg.m)
                .map(|k| uniform_norm_tensor(form.tensor(), k, lambda, None))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            record(n, lhs, &est, seed, &digest)
        })
        .collect()
}

/// `A = z^{(m)}_1 F(z^{(1)}, …, z^{(m−1)})` with a KSZ form `F`: the mixed
/// `(ℓ_λ, ℓ_2)` quotient grows like `n^{Σ_{k<m} 1/p_k − 1/2}`.
pub fn run_counterexample_growth(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.m < 2 {
        return Err(Error::Refused("counterexample_growth needs m >= 2".into()));
    }
    if cfg.n_values.len() < 3 {
        return Err(Error::Config("growth fits need at least 3 n values".into()));
    }
    let leading = cfg.p.prefix(cfg.m - 1)?.reciprocal_sum();
    if leading <= 0.5 + FEASIBILITY_TOL {
        return Err(Error::Refused(format!(
            "sum of 1/p_k over the first m-1 slots is {} <= 1/2; the side condition holds",
            sig15(leading)
        )));
    }
    let predicted = leading - 0.5;
    let inv = cfg.p.reciprocal_sum();
    let lambda = if inv >= 1.0 { 2.0 } else { (1.0 / (1.0 - inv)).clamp(1.0, 2.0) };
    let digest = cfg.digest();
    let opts = options(cfg);
    let rows: Vec<(ExperimentRecord, f64, f64)> = cfg
        .n_values
        .par_iter()
        .map(|&n| {
            let seed = n_seed(cfg, n);
            let d = degenerate_counterexample(cfg.m, n, &cfg.p, seed, cfg.trials, &opts)?;
            let lhs = uniform_norm_tensor(d.form.tensor(), cfg.m - 1, lambda, None)?;
            let expected = (n as f64).powf((cfg.m as f64 - 1.0) / 2.0);
            let r = record(n, lhs, &d.inner.norm, seed, &digest)?;
            Ok((r, (lhs / expected - 1.0).abs(), d.inner.predicted_norm_exponent))
        })
        .collect::<Result<_>>()?;
    let lhs_dev = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let norm_exponent = rows[0].2;
    let records: Vec<ExperimentRecord> = rows.into_iter().map(|r| r.0).collect();
    let fit = growth_fit(&records, predicted)?;
    let mut details = Map::new();
    details.insert("lambda".into(), json!(lambda));
    details.insert("lhs_max_rel_dev".into(), json!(lhs_dev));
    details.insert("inner_norm_exponent".into(), json!(norm_exponent));
    details.insert("certified".into(), json!(records.iter().all(|r| r.certified())));
    details.insert("slope_tolerance".into(), json!(SLOPE_TOLERANCE));
    Ok(ExperimentReport {
        config: cfg.clone(),
        verdict: Verdict::from(fit.agrees(SLOPE_TOLERANCE)),
        headline: format!("slope={} predicted={}", sig15(fit.slope), sig15(fit.predicted_slope)),
        records,
        fit: Some(fit),
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::run_experiment;
    use approx::assert_relative_eq;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::parse(text).unwrap()
    }

    #[test]
    fn verify_upper_littlewood() {
        let r = run_verify_upper(&cfg("kind = verify_upper\nq = 4/3,4/3\nn_values = 2,3,4,5\ntrials = 6\nseed = 3")).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.records.len(), 24);
        assert!(r.records.iter().all(|x| x.certified()));
        assert_relative_eq!(r.detail_f64("bound").unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        for x in &r.records {
            assert_relative_eq!(x.ratio, x.mixed_norm / x.norm_estimate, max_relative = 1e-12);
        }
    }

    #[test]
    fn verify_upper_hilbertian_bound_is_one() {
        let r = run_verify_upper(&cfg("kind = verify_upper\nq = 2,2\nn_values = 2,3,4\ntrials = 4")).unwrap();
        assert_eq!(r.detail_f64("bound"), Some(1.0));
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.detail_f64("max_ratio").unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn verify_upper_refuses_infeasible() {
        let e = run_verify_upper(&cfg("kind = verify_upper\nq = 1.2,1.2")).unwrap_err();
        assert!(matches!(e, Error::Refused(_)));
        assert!(e.to_string().contains("slack"));
    }

    #[test]
    fn reproducible() {
        let c = cfg("kind = verify_upper\nq = 1.5,1.5,1.5\nn_values = 2,3\ntrials = 3\nseed = 11");
        assert_eq!(run_experiment(&c).unwrap(), run_experiment(&c).unwrap());
    }

    #[test]
    fn sharpness_predicted_slopes() {
        let r = run_sharpness_growth(&cfg("kind = sharpness_growth\nq = 1,1\nn_values = 2,3,4\ntrials = 2")).unwrap();
        assert_relative_eq!(r.fit.unwrap().predicted_slope, 0.5, max_relative = 1e-15);
        assert!(r.detail_f64("mixed_norm_max_rel_dev").unwrap() < 1e-10);
        let r = run_sharpness_growth(&cfg("kind = sharpness_growth\nq = 4/3,4/3\nn_values = 2,3,4\ntrials = 2")).unwrap();
        assert!(r.fit.unwrap().predicted_slope.abs() < 1e-12);
        let r = run_sharpness_growth(&cfg(
            "kind = sharpness_growth\nq = 1,1\nvector_valued = true\ns = 1\nq_cod = 2\nn_values = 2,3,4\ntrials = 2",
        ))
        .unwrap();
        assert_relative_eq!(r.fit.unwrap().predicted_slope, 0.5, max_relative = 1e-15);
        assert!(r.detail_f64("mixed_norm_max_rel_dev").unwrap() < 1e-10);
        assert!(run_sharpness_growth(&cfg("kind = sharpness_growth\nq = 1,1\nn_values = 2,3")).is_err());
    }

    #[test]
    fn bilinear_sharp_examples() {
        for (q, bound) in [("4/3,4/3", 2f64.sqrt()), ("2,2", 1.0), ("1,2", 2f64.sqrt())] {
            let r = run_bilinear_sharp(&cfg(&format!("kind = bilinear_sharp\nq = {q}\nn_values = 2,3,4\ntrials = 10"))).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{q}");
            assert_relative_eq!(r.detail_f64("extremizer_ratio").unwrap(), bound, max_relative = 1e-12);
        }
        assert!(matches!(
            run_bilinear_sharp(&cfg("kind = bilinear_sharp\nq = 1,1")),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn mixed_l2_examples() {
        let r = run_mixed_l2_check(&cfg("kind = mixed_l2_check\nm = 2\nn_values = 2,3,4\ntrials = 6")).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.detail_f64("lambda"), Some(1.0));
        // m = 1, p = ∞: ℓ_1 of the coefficients equals the norm
        let r = run_mixed_l2_check(&cfg("kind = mixed_l2_check\nm = 1\nn_values = 2,3,4\ntrials = 4")).unwrap();
        for x in &r.records {
            assert_relative_eq!(x.ratio, 1.0, max_relative = 1e-12);
        }
        let r = run_mixed_l2_check(&cfg("kind = mixed_l2_check\np = 1,inf\nn_values = 4,8,16\ntrials = 2")).unwrap();
        assert_eq!(r.details.get("mode").and_then(|v| v.as_str()), Some("expect_failure"));
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn counterexample_examples() {
        let r = run_counterexample_growth(&cfg("kind = counterexample_growth\np = 1,inf\nn_values = 4,8,16,32\ntrials = 2")).unwrap();
        let fit = r.fit.unwrap();
        assert_eq!(fit.predicted_slope, 0.5);
        assert!((fit.slope - 0.5).abs() < 1e-10);
        assert!(r.detail_f64("lhs_max_rel_dev").unwrap() < 1e-10);
        let r = run_counterexample_growth(&cfg("kind = counterexample_growth\np = 2,2,inf\nn_values = 2,3,4\ntrials = 2")).unwrap();
        assert_eq!(r.fit.unwrap().predicted_slope, 0.5);
        assert!(matches!(
            run_counterexample_growth(&cfg("kind = counterexample_growth\np = 2,inf\nn_values = 2,3,4")),
            Err(Error::Refused(_))
        ));
    }
}
