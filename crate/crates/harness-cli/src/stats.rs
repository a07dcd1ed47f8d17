//! Test statistics and pass/fail records.

use serde::Serialize;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StatError {
    #[error("{0}: need at least {1} samples, got {2}")]
    TooFew(String, usize, usize),
    #[error("{0}: non-finite sample")]
    NonFinite(String),
}

/// Smallest sample accepted by the tests below.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// Kolmogorov-Smirnov sup distance.
    Ks,
    AbsError,
    RelError,
    /// `|estimate - target| / s.e.`
    ZScore,
}

/// One checked quantity. `pass` is `value <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatReport {
    pub suite: String,
    pub id: String,
    pub statistic: Statistic,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n: usize,
    pub seed: u64,
    /// Wall time of the whole suite; left out of reports meant to be compared.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

impl StatReport {
    pub fn new(id: impl Into<String>, statistic: Statistic, value: f64, threshold: f64, n: usize) -> Self {
        Self {
            suite: String::new(),
            id: id.into(),
            statistic,
            value,
            threshold,
            pass: value <= threshold,
            n,
            seed: 0,
            runtime_s: None,
        }
    }

    /// `pass/FAIL id: value <= threshold`.
    pub fn line(&self) -> String {
        format!(
            "{} {}/{}: {:?} {} (threshold {}, n {})",
            if self.pass { "pass" } else { "FAIL" },
            self.suite,
            self.id,
            self.statistic,
            short(self.value),
            short(self.threshold),
            self.n
        )
    }
}

fn short(x: f64) -> String {
    if x == 0.0 || (1e-3..1e4).contains(&x.abs()) {
        format!("{x:.4}")
    } else {
        format!("{x:.3e}")
    }
}

fn check(id: &str, xs: &[f64]) -> Result<(), StatError> {
    if xs.len() < MIN_SAMPLES {
        return Err(StatError::TooFew(id.into(), MIN_SAMPLES, xs.len()));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(StatError::NonFinite(id.into()));
    }
    Ok(())
}

/// Sup distance between the empirical CDF and `cdf`, checked on both sides of
/// every distinct sample value, so atoms in either are handled.
pub fn ks_statistic(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        d = d.max((cdf(x) - j as f64 / n).abs()).max((cdf(x.next_down()) - i as f64 / n).abs());
        i = j;
    }
    d
}

pub fn ks2_statistic(a: &[f64], b: &[f64]) -> f64 {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn ks_test(id: &str, xs: &[f64], cdf: impl Fn(f64) -> f64, threshold: f64) -> Result<StatReport, StatError> {
    check(id, xs)?;
    Ok(StatReport::new(id, Statistic::Ks, ks_statistic(xs, cdf), threshold, xs.len()))
}

pub fn ks_two_sample(id: &str, a: &[f64], b: &[f64], threshold: f64) -> Result<StatReport, StatError> {
    check(id, a)?;
    check(id, b)?;
    Ok(StatReport::new(id, Statistic::Ks, ks2_statistic(a, b), threshold, a.len().min(b.len())))
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Sample mean against `target`, passing at three standard errors.
pub fn z_check(id: &str, xs: &[f64], target: f64) -> Result<StatReport, StatError> {
    check(id, xs)?;
    let (m, se) = mean_se(xs);
    let z = if se > 0.0 { (m - target).abs() / se } else if m == target { 0.0 } else { f64::INFINITY };
    Ok(StatReport::new(id, Statistic::ZScore, z, 3.0, xs.len()))
}

/// Compare `E exp(-lambda X)` itself, or its logarithm, with a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplaceScale {
    Value,
    Log,
}

/// Largest relative error over `lambdas` of the empirical Laplace transform
/// against `exact(lambda)`, which is on the scale given by `scale`.
pub fn laplace_check(
    id: &str,
    xs: &[f64],
    lambdas: &[f64],
    exact: impl Fn(f64) -> f64,
    scale: LaplaceScale,
    threshold: f64,
) -> Result<StatReport, StatError> {
    check(id, xs)?;
    let n = xs.len() as f64;
    let worst = lambdas
        .iter()
        .map(|&l| {
            let m = xs.iter().map(|x| (-l * x).exp()).sum::<f64>() / n;
            let emp = match scale {
                LaplaceScale::Value => m,
                LaplaceScale::Log => m.ln(),
            };
            let e = exact(l);
            (emp - e).abs() / e.abs()
        })
        .fold(0.0, f64::max);
    Ok(StatReport::new(id, Statistic::RelError, worst, threshold, xs.len()))
}
