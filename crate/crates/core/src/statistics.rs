//! Monte Carlo harness: coprime vectors drawn uniformly from T·D, their
//! normalized Frobenius numbers, and the summary statistics compared against
//! the limit laws.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::support_min;
use crate::coprime::{gcd_vector, CoprimeVector, NormalizationKind, DEFAULT_MAGNITUDE_CAP};
use crate::frobenius::{FrobeniusResult, FrobeniusSolver};
use crate::rng::{chunks, stream};
use crate::{Error, Result};

/// Samples kept in memory; larger runs go through [`sample_summary`].
pub const MAX_RETAINED: u64 = 10_000_000;

/// Redraws allowed for a single sample before its capacity error is fatal.
const MAX_REDRAWS_PER_SAMPLE: u64 = 1000;

/// Largest T^n accepted by [`count_unbalanced`].
pub const UNBALANCED_MAX_POINTS: u64 = 100_000_000;

/// Recorded bound for count·α³/(50³·ln(2+α)) at n = 3, T = 50 over
/// α ∈ {1.5, 2, 4, 8}; the measured maximum is 2.12, at α = 2.
pub const AGM_RECORDED_BOUND: f64 = 2.5;

/// Sampling box as a fraction of T, per axis.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// (0, 1]^d
    #[default]
    UnitCube,
    /// (lo_i, hi_i] per axis with 0 ≤ lo_i < hi_i ≤ 1.
    SubBox(Vec<(f64, f64)>),
}

impl Domain {
    /// The same interval (lo, hi] on every axis.
    pub fn uniform(d: usize, lo: f64, hi: f64) -> Self {
        Domain::SubBox(vec![(lo, hi); d])
    }

    fn bounds(&self, d: usize) -> Vec<(f64, f64)> {
        match self {
            Domain::UnitCube => vec![(0.0, 1.0); d],
            Domain::SubBox(b) => b.clone(),
        }
    }

    /// Largest Euclidean norm of a point of the domain.
    pub fn sup_norm(&self, d: usize) -> f64 {
        self.bounds(d).iter().map(|(_, hi)| hi * hi).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub d: usize,
    #[serde(rename = "T")]
    pub t: u64,
    pub count: u64,
    pub seed: u64,
    #[serde(default)]
    pub domain: Domain,
    #[serde(default)]
    pub normalization: NormalizationKind,
}

impl ExperimentConfig {
    /// Unit-cube configuration normalized by the product power.
    pub fn new(d: usize, t: u64, count: u64, seed: u64) -> Self {
        Self {
            d,
            t,
            count,
            seed,
            domain: Domain::UnitCube,
            normalization: NormalizationKind::ProdPower,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::usage(format!("d must be at least 2, got {}", self.d)));
        }
        if self.t < 2 {
            return Err(Error::usage(format!("T must be at least 2, got {}", self.t)));
        }
        if self.count == 0 {
            return Err(Error::usage("count must be at least 1"));
        }
        if let Domain::SubBox(b) = &self.domain {
            if b.len() != self.d {
                return Err(Error::usage(format!("domain has {} axes, expected {}", b.len(), self.d)));
            }
            if let Some((lo, hi)) = b.iter().find(|(lo, hi)| !(0.0 <= *lo && lo < hi && *hi <= 1.0)) {
                return Err(Error::usage(format!("domain axis ({lo}, {hi}] outside 0 <= lo < hi <= 1")));
            }
        }
        if self.t > DEFAULT_MAGNITUDE_CAP {
            return Err(Error::Capacity {
                coefficient: self.t,
                limit: DEFAULT_MAGNITUDE_CAP,
            });
        }
        self.integer_ranges().map(|_| ())
    }

    /// Integer range (lo·T, hi·T] ∩ Z per axis.
    pub fn integer_ranges(&self) -> Result<Vec<(u64, u64)>> {
        let t = self.t as f64;
        self.domain
            .bounds(self.d)
            .into_iter()
            .map(|(lo, hi)| {
                let a = ((lo * t).floor() as u64 + 1).max(1);
                let b = (hi * t).floor() as u64;
                if a > b {
                    Err(Error::usage(format!("no integers in ({}, {}]", lo * t, hi * t)))
                } else {
                    Ok((a, b))
                }
            })
            .collect()
    }
}

/// Draws coordinates uniformly from the given ranges until the gcd is 1.
pub fn draw_coprime(rng: &mut ChaCha8Rng, ranges: &[(u64, u64)]) -> CoprimeVector {
    let mut c = vec![0u64; ranges.len()];
    loop {
        for (x, &(lo, hi)) in c.iter_mut().zip(ranges) {
            *x = rng.random_range(lo..=hi);
        }
        if gcd_vector(&c).expect("non-empty") == 1 {
            return CoprimeVector::with_cap(c, u64::MAX).expect("positive coprime coordinates");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub a: Vec<u64>,
    pub result: FrobeniusResult,
}

/// Raw output of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub config: ExperimentConfig,
    pub records: Vec<SampleRecord>,
    /// Draws discarded because the Frobenius engine hit its capacity.
    pub redraws: u64,
}

impl Sweep {
    pub fn distribution(&self) -> EmpiricalDistribution {
        let values = self
            .records
            .iter()
            .map(|r| match self.config.normalization {
                NormalizationKind::ProdPower => r.result.norm_prod,
                NormalizationKind::SOfA => r.result.norm_s,
            })
            .collect();
        EmpiricalDistribution::from_values(values, self.config.clone())
    }
}

/// Execution knobs that never affect results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub solver: FrobeniusSolver,
}

/// Runs `f` on a pool of the requested size.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::usage("worker count must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::usage(format!("cannot start worker pool: {e}"))),
    }
}

fn sample_one(index: u64, seed: u64, ranges: &[(u64, u64)], solver: &FrobeniusSolver) -> Result<(SampleRecord, u64)> {
    let mut rng = stream(seed, index);
    let mut redraws = 0;
    loop {
        let a = draw_coprime(&mut rng, ranges);
        match solver.solve(&a) {
            Ok(result) => {
                let record = SampleRecord {
                    index,
                    a: a.coeffs().to_vec(),
                    result,
                };
                return Ok((record, redraws));
            }
            Err(e @ Error::Capacity { .. }) => {
                redraws += 1;
                if redraws >= MAX_REDRAWS_PER_SAMPLE {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Draws `config.count` samples; sample i uses the random stream (seed, i).
pub fn run_sweep(config: &ExperimentConfig, options: RunOptions) -> Result<Sweep> {
    config.validate()?;
    if config.count > MAX_RETAINED {
        return Err(Error::usage(format!(
            "{} samples exceed the in-memory limit {MAX_RETAINED}; use a streaming summary",
            config.count
        )));
    }
    let ranges = config.integer_ranges()?;
    let solver = options.solver;
    let out: Vec<(SampleRecord, u64)> = with_workers(options.workers, || {
        (0..config.count)
            .into_par_iter()
            .map(|i| sample_one(i, config.seed, &ranges, &solver))
            .collect::<Result<_>>()
    })??;
    let redraws = out.iter().map(|(_, r)| r).sum();
    Ok(Sweep {
        config: config.clone(),
        records: out.into_iter().map(|(r, _)| r).collect(),
        redraws,
    })
}

pub fn sample_coprime(config: &ExperimentConfig) -> Result<EmpiricalDistribution> {
    Ok(run_sweep(config, RunOptions::default())?.distribution())
}

/// Sorted normalized Frobenius values with the configuration that made them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    config: ExperimentConfig,
}

impl EmpiricalDistribution {
    /// Sorts `values`; `config.count` is set to their number.
    pub fn from_values(mut values: Vec<f64>, mut config: ExperimentConfig) -> Self {
        values.sort_by(f64::total_cmp);
        config.count = values.len() as u64;
        Self { values, config }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Fraction of values strictly greater than `r`.
pub fn empirical_psi(dist: &EmpiricalDistribution, r: f64) -> f64 {
    if dist.is_empty() {
        return 0.0;
    }
    let at_most = dist.values.partition_point(|&v| v <= r);
    (dist.len() - at_most) as f64 / dist.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    /// Bin index floor(value / bin_width) → count.
    pub counts: BTreeMap<i64, u64>,
    pub total: u64,
}

impl Histogram {
    pub fn new(bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::usage(format!("bin width must be positive, got {bin_width}")));
        }
        Ok(Self {
            bin_width,
            counts: BTreeMap::new(),
            total: 0,
        })
    }

    pub fn add(&mut self, v: f64) {
        *self.counts.entry((v / self.bin_width).floor() as i64).or_default() += 1;
        self.total += 1;
    }

    /// (bin_lo, count, count/(N·width)) in bin order.
    pub fn rows(&self) -> Vec<(f64, u64, f64)> {
        let scale = self.total as f64 * self.bin_width;
        self.counts
            .iter()
            .map(|(&b, &c)| (b as f64 * self.bin_width, c, c as f64 / scale))
            .collect()
    }

    /// Merges `factor` adjacent bins into one.
    pub fn coarsen(&self, factor: u32) -> Result<Self> {
        if factor == 0 {
            return Err(Error::usage("coarsening factor must be positive"));
        }
        let mut out = Self::new(self.bin_width * factor as f64)?;
        for (&b, &c) in &self.counts {
            *out.counts.entry(b.div_euclid(factor as i64)).or_default() += c;
        }
        out.total = self.total;
        Ok(out)
    }

    /// Lower edge of the fullest bin (earliest on ties).
    pub fn mode(&self) -> Option<f64> {
        let top = self.counts.values().copied().max()?;
        self.counts.iter().find(|(_, &c)| c == top).map(|(&b, _)| b as f64 * self.bin_width)
    }
}

pub fn histogram(dist: &EmpiricalDistribution, bin_width: f64) -> Result<Histogram> {
    let mut h = Histogram::new(bin_width)?;
    for &v in &dist.values {
        h.add(v);
    }
    Ok(h)
}

/// sup |F_n - F| over sample points, taken on both sides of each step. The
/// left side compares F_n(x-) with F just below x.
pub fn ks_distance(dist: &EmpiricalDistribution, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = dist.len() as f64;
    let v = &dist.values;
    let mut best = 0.0f64;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let right = (j as f64 / n - cdf(v[i])).abs();
        let left = (cdf(v[i].next_down()) - i as f64 / n).abs();
        best = best.max(right).max(left);
        i = j;
    }
    best
}

/// KS distance against a continuous CDF given at each sorted value, as
/// produced for example by `analytic::psi3_tail_sorted`.
pub fn ks_distance_tabulated(dist: &EmpiricalDistribution, cdf_values: &[f64]) -> Result<f64> {
    if cdf_values.len() != dist.len() {
        return Err(Error::usage("one CDF value per sample is required"));
    }
    let n = dist.len() as f64;
    let v = &dist.values;
    let mut best = 0.0f64;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let f = cdf_values[i];
        best = best.max((j as f64 / n - f).abs()).max((f - i as f64 / n).abs());
        i = j;
    }
    Ok(best)
}

/// empirical_psi(R)·R^{d-1}, to be compared with d/(2ζ(d-1)).
pub fn tail_constant(dist: &EmpiricalDistribution, r: f64) -> f64 {
    empirical_psi(dist, r) * r.powi(dist.config.d as i32 - 1)
}

/// Mean of value^k; only 1 ≤ k ≤ d - 2 correspond to finite limit moments.
pub fn moment_estimate(dist: &EmpiricalDistribution, k: u32) -> Result<f64> {
    let d = dist.config.d;
    if k == 0 || k as usize + 2 > d {
        return Err(Error::usage(format!("moment order {k} outside [1, {}]", d as i64 - 2)));
    }
    if dist.is_empty() {
        return Err(Error::usage("moment of an empty distribution"));
    }
    Ok(dist.values.iter().map(|v| v.powi(k as i32)).sum::<f64>() / dist.len() as f64)
}

/// Fraction of product-power values in (m, α·m), m = ((d-1)!)^{1/(d-1)}.
pub fn concentration_fraction(dist: &EmpiricalDistribution, alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::usage(format!("alpha must exceed 1, got {alpha}")));
    }
    if dist.config.normalization != NormalizationKind::ProdPower {
        return Err(Error::usage("concentration is defined for the product-power normalization"));
    }
    if dist.is_empty() {
        return Ok(0.0);
    }
    let m = support_min(dist.config.d);
    let hits = dist.values.iter().filter(|&&v| v > m && v < alpha * m).count();
    Ok(hits as f64 / dist.len() as f64)
}

/// Exact count of x ∈ {1..T}^n with max(x) / (x_1···x_n)^{1/n} > α.
pub fn count_unbalanced(n: usize, t: u64, alpha: f64) -> Result<u64> {
    if n == 0 || t == 0 {
        return Err(Error::usage("need n >= 1 and T >= 1"));
    }
    let points = (t as u128).checked_pow(n as u32).filter(|&p| p <= UNBALANCED_MAX_POINTS as u128);
    if points.is_none() {
        return Err(Error::usage(format!("T^n exceeds {UNBALANCED_MAX_POINTS}")));
    }
    let alpha_n = alpha.powi(n as i32);
    let mut x = vec![1u64; n];
    let mut count = 0u64;
    loop {
        let max = *x.iter().max().expect("n >= 1") as f64;
        let prod: f64 = x.iter().map(|&c| c as f64).product();
        if max.powi(n as i32) > alpha_n * prod {
            count += 1;
        }
        // odometer
        let mut k = 0;
        while k < n && x[k] == t {
            x[k] = 1;
            k += 1;
        }
        if k == n {
            return Ok(count);
        }
        x[k] += 1;
    }
}

/// Histogram and power sums for runs too large to keep every value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamingSummary {
    pub count: u64,
    pub min: f64,
    pub max: f64,
    /// Σ v^k for k = 1, 2, 3, 4.
    pub power_sums: [f64; 4],
    pub histogram: Histogram,
    pub redraws: u64,
}

impl StreamingSummary {
    fn new(bin_width: f64) -> Result<Self> {
        Ok(Self {
            count: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            power_sums: [0.0; 4],
            histogram: Histogram::new(bin_width)?,
            redraws: 0,
        })
    }

    fn add(&mut self, v: f64) {
        self.count += 1;
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        let mut p = 1.0;
        for s in self.power_sums.iter_mut() {
            p *= v;
            *s += p;
        }
        self.histogram.add(v);
    }

    fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        for (s, o) in self.power_sums.iter_mut().zip(other.power_sums) {
            *s += o;
        }
        for (&b, &c) in &other.histogram.counts {
            *self.histogram.counts.entry(b).or_default() += c;
        }
        self.histogram.total += other.histogram.total;
        self.redraws += other.redraws;
    }

    pub fn mean(&self) -> f64 {
        self.power_sums[0] / self.count as f64
    }
}

/// Same samples as [`run_sweep`], folded into a summary chunk by chunk.
pub fn sample_summary(config: &ExperimentConfig, bin_width: f64, options: RunOptions) -> Result<StreamingSummary> {
    config.validate()?;
    let ranges = config.integer_ranges()?;
    let solver = options.solver;
    let parts: Vec<StreamingSummary> = with_workers(options.workers, || {
        chunks(config.count)
            .into_par_iter()
            .map(|(_, start, len)| {
                let mut part = StreamingSummary::new(bin_width)?;
                for i in start..start + len {
                    let (record, redraws) = sample_one(i, config.seed, &ranges, &solver)?;
                    part.redraws += redraws;
                    part.add(match config.normalization {
                        NormalizationKind::ProdPower => record.result.norm_prod,
                        NormalizationKind::SOfA => record.result.norm_s,
                    });
                }
                Ok(part)
            })
            .collect::<Result<_>>()
    })??;
    let mut total = StreamingSummary::new(bin_width)?;
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coprime::cutoff_radius;
    use proptest::prelude::*;

    fn dist(values: &[f64], d: usize) -> EmpiricalDistribution {
        EmpiricalDistribution::from_values(values.to_vec(), ExperimentConfig::new(d, 10, 1, 0))
    }

    #[test]
    fn small_box_pairs() {
        let sweep = run_sweep(&ExperimentConfig::new(2, 3, 500, 1), RunOptions::default()).unwrap();
        let allowed = [[1, 1], [1, 2], [2, 1], [1, 3], [3, 1], [2, 3], [3, 2]];
        for r in &sweep.records {
            assert!(allowed.iter().any(|p| p[..] == r.a[..]), "{:?}", r.a);
        }
        assert_eq!(sweep.records.len(), 500);
    }

    #[test]
    fn deterministic_across_workers() {
        let cfg = ExperimentConfig::new(3, 10_000, 1000, 17);
        let run = |w| {
            run_sweep(
                &cfg,
                RunOptions {
                    workers: Some(w),
                    ..Default::default()
                },
            )
            .unwrap()
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(8));
        assert_eq!(one.distribution(), sample_coprime(&cfg).unwrap());
    }

    #[test]
    fn d3_values_exceed_support() {
        let d = sample_coprime(&ExperimentConfig::new(3, 10_000, 2000, 5)).unwrap();
        assert!(d.values()[0] > 2f64.sqrt());
        assert!(d.values()[0] > 3f64.sqrt() - 1e-12);
    }

    #[test]
    fn sub_box_ranges() {
        let mut cfg = ExperimentConfig::new(3, 100, 200, 2);
        cfg.domain = Domain::uniform(3, 0.5, 1.0);
        assert_eq!(cfg.integer_ranges().unwrap(), vec![(51, 100); 3]);
        let sweep = run_sweep(&cfg, RunOptions::default()).unwrap();
        assert!(sweep.records.iter().all(|r| r.a.iter().all(|&c| c >= 50)));
        cfg.domain = Domain::uniform(3, 0.5, 0.4);
        assert!(cfg.validate().is_err());
        cfg.domain = Domain::uniform(2, 0.0, 1.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(1, 10, 1, 0).validate().is_err());
        assert!(ExperimentConfig::new(3, 1, 1, 0).validate().is_err());
        assert!(ExperimentConfig::new(3, 10, 0, 0).validate().is_err());
    }

    #[test]
    fn capacity_redraws_are_counted() {
        let cfg = ExperimentConfig::new(2, 20, 200, 3);
        let solver = FrobeniusSolver {
            max_modulus: 10,
            ..Default::default()
        };
        let sweep = run_sweep(&cfg, RunOptions { workers: None, solver }).unwrap();
        assert!(sweep.redraws > 0);
        assert!(sweep.records.iter().all(|r| r.a.iter().min().unwrap() <= &10));
    }

    #[test]
    fn psi_examples() {
        let d = dist(&[1.0, 2.0, 3.0], 3);
        assert!((empirical_psi(&d, 2.5) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(empirical_psi(&d, 0.5), 1.0);
        assert_eq!(empirical_psi(&d, 3.0), 0.0);
    }

    #[test]
    fn psi_vanishes_at_cutoffs() {
        for kind in [NormalizationKind::ProdPower, NormalizationKind::SOfA] {
            let mut cfg = ExperimentConfig::new(3, 500, 2000, 8);
            cfg.normalization = kind;
            let d = sample_coprime(&cfg).unwrap();
            let cut = cutoff_radius(kind, 500.0, cfg.domain.sup_norm(3), 3).unwrap();
            assert_eq!(empirical_psi(&d, cut), 0.0);
        }
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&dist(&[1.005, 1.007], 3), 0.01).unwrap();
        assert_eq!(h.counts.len(), 1);
        assert_eq!(h.counts[&100], 2);
        let rows = h.rows();
        assert!((rows[0].2 - 100.0).abs() < 1e-9);
        let h = histogram(&dist(&[0.005, 0.015, 0.025, 0.035], 3), 0.01).unwrap();
        let c = h.coarsen(2).unwrap();
        assert_eq!(c.counts.len(), 2);
        assert_eq!(c.total, 4);
        assert!(histogram(&dist(&[1.0], 3), 0.0).is_err());
    }

    #[test]
    fn ks_examples() {
        let d = dist(&[1.0, 3.0], 3);
        let point_mass = |x: f64| if x >= 2.0 { 1.0 } else { 0.0 };
        assert!((ks_distance(&d, point_mass) - 0.5).abs() < 1e-15);
        let uniform = |x: f64| x.clamp(0.0, 1.0);
        assert!((ks_distance(&dist(&[0.5], 3), uniform) - 0.5).abs() < 1e-15);
        let e = dist(&[1.0, 2.0, 2.0, 5.0], 3);
        let own = |x: f64| empirical_psi(&e, x).mul_add(-1.0, 1.0);
        assert_eq!(ks_distance(&e, own), 0.0);
    }

    #[test]
    fn tabulated_ks_agrees_with_closure() {
        let d = dist(&[0.1, 0.25, 0.25, 0.7, 0.9], 3);
        let table: Vec<f64> = d.values().to_vec();
        let direct = ks_distance(&d, |x| x.clamp(0.0, 1.0));
        assert!((ks_distance_tabulated(&d, &table).unwrap() - direct).abs() < 1e-15);
        assert!(ks_distance_tabulated(&d, &table[1..]).is_err());
    }

    #[test]
    fn tail_and_moment_examples() {
        let d = dist(&[2.0, 4.0, 8.0], 3);
        assert!((tail_constant(&d, 2.0) - 8.0 / 3.0).abs() < 1e-12);
        assert_eq!(tail_constant(&d, 100.0), 0.0);
        assert!((moment_estimate(&dist(&[1.0, 2.0, 3.0], 3), 1).unwrap() - 2.0).abs() < 1e-15);
        assert!((moment_estimate(&dist(&[2.0, 2.0], 3), 1).unwrap() - 2.0).abs() < 1e-15);
        assert!(moment_estimate(&dist(&[2.0], 3), 2).is_err());
        assert!(moment_estimate(&dist(&[2.0], 3), 0).is_err());
        assert!(moment_estimate(&dist(&[2.0], 5), 3).is_ok());
    }

    #[test]
    fn concentration_examples() {
        let d = dist(&[2.0, 5.0], 3);
        assert!((concentration_fraction(&d, 1.757).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(concentration_fraction(&d, 1e9).unwrap(), 1.0);
        assert!(concentration_fraction(&d, 1.0).is_err());
        let mut cfg = ExperimentConfig::new(3, 10, 1, 0);
        cfg.normalization = NormalizationKind::SOfA;
        assert!(concentration_fraction(&EmpiricalDistribution::from_values(vec![2.0], cfg), 2.0).is_err());
    }

    #[test]
    fn unbalanced_examples() {
        assert_eq!(count_unbalanced(2, 4, 1.5).unwrap(), 4);
        assert_eq!(count_unbalanced(3, 5, 0.9).unwrap(), 125);
        assert!(count_unbalanced(3, 1000, 2.0).is_err());
    }

    #[test]
    fn unbalanced_matches_brute_force() {
        for alpha in [1.2, 2.0, 3.5] {
            let mut brute = 0;
            for x in 1..=12u64 {
                for y in 1..=12u64 {
                    let m = x.max(y) as f64;
                    if m / ((x * y) as f64).sqrt() > alpha {
                        brute += 1;
                    }
                }
            }
            assert_eq!(count_unbalanced(2, 12, alpha).unwrap(), brute);
        }
    }

    #[test]
    fn streaming_summary_matches_sweep() {
        let cfg = ExperimentConfig::new(3, 1000, 5000, 4);
        let sweep = run_sweep(&cfg, RunOptions::default()).unwrap();
        let s = sample_summary(&cfg, 0.01, RunOptions::default()).unwrap();
        let h = histogram(&sweep.distribution(), 0.01).unwrap();
        assert_eq!(s.histogram, h);
        assert_eq!(s.count, 5000);
        assert!((s.mean() - sweep.distribution().mean()).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn psi_non_increasing(v in proptest::collection::vec(0.0f64..10.0, 1..50), r1 in 0.0f64..10.0, r2 in 0.0f64..10.0) {
            let d = dist(&v, 3);
            let (a, b) = (r1.min(r2), r1.max(r2));
            prop_assert!(empirical_psi(&d, a) >= empirical_psi(&d, b));
        }

        #[test]
        fn histogram_conserves_mass(v in proptest::collection::vec(-5.0f64..50.0, 0..200), w in 0.001f64..2.0) {
            let h = histogram(&dist(&v, 3), w).unwrap();
            prop_assert_eq!(h.counts.values().sum::<u64>(), v.len() as u64);
        }
    }
}
