//! Prediction error, Kruskal-Wallis significance with a `+ / − / ≈` verdict,
//! runtime benchmarking and CSV reports.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Significance level used unless a caller overrides it.
pub const ALPHA: f64 = 0.05;

/// `ξ = (1/N) Σ |v_true(i) − v_pred(i)|`.
pub fn prediction_error(v_true: &[f64], v_pred: &[f64]) -> Result<f64> {
    if v_true.len() != v_pred.len() {
        return Err(Error::LengthMismatch(v_true.len(), v_pred.len()));
    }
    if v_true.is_empty() {
        return Err(Error::Stats("prediction error of empty curves".into()));
    }
    let sum: f64 = v_true.iter().zip(v_pred).map(|(a, b)| (a - b).abs()).sum();
    Ok(sum / v_true.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KruskalWallis {
    pub h: f64,
    pub p: f64,
    pub df: usize,
    /// Some group has fewer than 5 observations, where the chi-square
    /// approximation is unreliable.
    pub small_groups: bool,
}

/// Kruskal-Wallis H with midranks and tie correction; `p` from the
/// chi-square survival function with `k − 1` degrees of freedom.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<KruskalWallis> {
    if groups.len() < 2 {
        return Err(Error::Stats(format!("need at least 2 groups, got {}", groups.len())));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::Stats("empty group".into()));
    }
    if groups.iter().flat_map(|g| g.iter()).any(|v| v.is_nan()) {
        return Err(Error::Stats("NaN observation".into()));
    }
    let mut pooled: Vec<(f64, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| g.iter().map(move |&v| (v, gi)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pooled.len();
    let mut rank_sums = vec![0.0; groups.len()];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // ranks i+1..=j share their mean
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &(_, gi) in &pooled[i..j] {
            rank_sums[gi] += midrank;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let nf = n as f64;
    let df = groups.len() - 1;
    let small_groups = groups.iter().any(|g| g.len() < 5);
    let correction = 1.0 - tie_term / (nf * nf * nf - nf);
    if correction <= 0.0 {
        return Ok(KruskalWallis {
            h: 0.0,
            p: 1.0,
            df,
            small_groups,
        });
    }
    let raw: f64 = groups
        .iter()
        .zip(&rank_sums)
        .map(|(g, r)| r * r / g.len() as f64)
        .sum::<f64>()
        * 12.0
        / (nf * (nf + 1.0))
        - 3.0 * (nf + 1.0);
    let h = (raw / correction).max(0.0);
    let chi = ChiSquared::new(df as f64).map_err(|e| Error::Stats(e.to_string()))?;
    Ok(KruskalWallis {
        h,
        p: chi.sf(h),
        df,
        small_groups,
    })
}

/// `+`: the first sample has significantly smaller errors; `−`:
/// significantly larger; `≈`: no significant difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Better,
    #[serde(rename = "-")]
    Worse,
    #[serde(rename = "≈")]
    Indistinct,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Better => "+",
            Sign::Worse => "-",
            Sign::Indistinct => "≈",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub h: f64,
    pub p: f64,
    pub sign: Sign,
}

/// Compares error samples `a` (the method under test) against `b`.
pub fn significance_sign(a: &[f64], b: &[f64], alpha: f64) -> Result<SignificanceResult> {
    let kw = kruskal_wallis(&[a, b])?;
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let sign = if kw.p >= alpha || ma == mb {
        Sign::Indistinct
    } else if ma < mb {
        Sign::Better
    } else {
        Sign::Worse
    };
    Ok(SignificanceResult {
        h: kw.h,
        p: kw.p,
        sign,
    })
}

/// Wall-clock summary in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub samples: Vec<f64>,
}

impl Timing {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Stats("no timing samples".into()));
        }
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let k = sorted.len();
        let median = if k % 2 == 1 {
            sorted[k / 2]
        } else {
            (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0
        };
        let min = sorted[0];
        samples.shrink_to_fit();
        Ok(Self {
            median,
            mean,
            min,
            samples,
        })
    }
}

/// Times `task` `repetitions` times after `warmups` untimed runs.
pub fn bench_runtime<F: FnMut()>(mut task: F, warmups: usize, repetitions: usize) -> Result<Timing> {
    if repetitions == 0 {
        return Err(Error::Stats("repetitions must be at least 1".into()));
    }
    for _ in 0..warmups {
        task();
    }
    let samples = (0..repetitions)
        .map(|_| {
            let start = Instant::now();
            task();
            start.elapsed().as_secs_f64()
        })
        .collect();
    Timing::from_samples(samples)
}

/// One evaluated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRow {
    pub dataset_id: String,
    pub model: String,
    pub n: usize,
    pub measure: String,
    pub directed: bool,
    pub method: String,
    pub xi: f64,
    /// Seconds; absent when not measured.
    pub runtime: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub model: String,
    pub measure: String,
    pub directed: bool,
    pub method: String,
    pub count: usize,
    pub mean_xi: f64,
    pub median_runtime: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<InstanceRow>,
}

impl EvalReport {
    pub fn push(&mut self, row: InstanceRow) {
        self.rows.push(row);
    }

    pub fn mean_xi(&self) -> Option<f64> {
        (!self.rows.is_empty())
            .then(|| self.rows.iter().map(|r| r.xi).sum::<f64>() / self.rows.len() as f64)
    }

    /// ξ values of one method, in row order.
    pub fn errors_of(&self, method: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.xi)
            .collect()
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut groups: BTreeMap<(String, String, bool, String), Vec<&InstanceRow>> =
            BTreeMap::new();
        for r in &self.rows {
            groups
                .entry((r.model.clone(), r.measure.clone(), r.directed, r.method.clone()))
                .or_default()
                .push(r);
        }
        groups
            .into_iter()
            .map(|((model, measure, directed, method), rows)| {
                let times: Vec<f64> = rows.iter().filter_map(|r| r.runtime).collect();
                SummaryRow {
                    model,
                    measure,
                    directed,
                    method,
                    count: rows.len(),
                    mean_xi: rows.iter().map(|r| r.xi).sum::<f64>() / rows.len() as f64,
                    median_runtime: Timing::from_samples(times).ok().map(|t| t.median),
                }
            })
            .collect()
    }

    pub fn instances_csv(&self) -> String {
        let mut out = String::from("dataset_id,model,n,measure,directed,method,xi,runtime\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.dataset_id,
                r.model,
                r.n,
                r.measure,
                u8::from(r.directed),
                r.method,
                fmt_g9(r.xi),
                r.runtime.map(fmt_g9).unwrap_or_default()
            ));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("model,measure,directed,method,count,mean_xi,median_runtime\n");
        for s in self.summary() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                s.model,
                s.measure,
                u8::from(s.directed),
                s.method,
                s.count,
                fmt_g9(s.mean_xi),
                s.median_runtime.map(fmt_g9).unwrap_or_default()
            ));
        }
        out
    }
}

/// C `%.9g` formatting.
pub fn fmt_g9(v: f64) -> String {
    fmt_g(v, 9)
}

fn fmt_g(v: f64, precision: usize) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let p = precision.max(1);
    // exponent after rounding to p significant digits
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
