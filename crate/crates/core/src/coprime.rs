//! Positive coprime integer vectors and the normalization factors applied to
//! their Frobenius numbers.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default per-coefficient magnitude cap. The residue-table engine needs
/// memory proportional to the smallest coefficient.
pub const DEFAULT_MAGNITUDE_CAP: u64 = 100_000_000;

/// A vector of positive integers with overall gcd 1 and length at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct CoprimeVector {
    coeffs: Vec<u64>,
}

impl CoprimeVector {
    pub fn new(coeffs: Vec<u64>) -> Result<Self> {
        Self::with_cap(coeffs, DEFAULT_MAGNITUDE_CAP)
    }

    pub fn with_cap(coeffs: Vec<u64>, cap: u64) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::usage(format!("need at least 2 coefficients, got {}", coeffs.len())));
        }
        if let Some(&z) = coeffs.iter().find(|&&c| c == 0) {
            return Err(Error::usage(format!("coefficient {z} is not positive")));
        }
        if let Some(&big) = coeffs.iter().find(|&&c| c > cap) {
            return Err(Error::Capacity {
                coefficient: big,
                limit: cap,
            });
        }
        let g = gcd_vector(&coeffs)?;
        if g != 1 {
            return Err(Error::usage(format!("coefficients share the factor {g}")));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min(&self) -> u64 {
        *self.coeffs.iter().min().expect("non-empty")
    }

    pub fn max(&self) -> u64 {
        *self.coeffs.iter().max().expect("non-empty")
    }

    pub fn sum(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Exact squared Euclidean norm.
    pub fn norm_sq(&self) -> u128 {
        self.coeffs.iter().map(|&c| (c as u128) * (c as u128)).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// Coefficients in ascending order; every floating-point reduction goes
    /// through this so results do not depend on input order.
    fn sorted(&self) -> Vec<u64> {
        let mut v = self.coeffs.clone();
        v.sort_unstable();
        v
    }
}

impl TryFrom<Vec<u64>> for CoprimeVector {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CoprimeVector> for Vec<u64> {
    fn from(a: CoprimeVector) -> Self {
        a.coeffs
    }
}

/// Which factor divides f(a) to produce the normalized Frobenius number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationKind {
    /// (a_1 ··· a_d)^{1/(d-1)}
    #[default]
    ProdPower,
    /// s(a)
    SOfA,
}

impl NormalizationKind {
    pub fn factor(self, a: &CoprimeVector) -> f64 {
        match self {
            NormalizationKind::ProdPower => prod_norm_factor(a),
            NormalizationKind::SOfA => s_norm(a),
        }
    }
}

pub fn gcd_vector(coeffs: &[u64]) -> Result<u64> {
    if coeffs.is_empty() {
        return Err(Error::usage("gcd of an empty sequence"));
    }
    Ok(coeffs.iter().fold(0u64, |g, &c| g.gcd(&c)))
}

/// s(a) = Σ_j a_j sqrt(|a|² - a_j²) / |a|^{1 - 1/(d-1)}.
pub fn s_norm(a: &CoprimeVector) -> f64 {
    let d = a.dim() as f64;
    let nsq = a.norm_sq();
    let numer: f64 = a
        .sorted()
        .iter()
        .map(|&c| {
            let rest = nsq - (c as u128) * (c as u128);
            c as f64 * (rest as f64).sqrt()
        })
        .sum();
    numer / a.norm().powf(1.0 - 1.0 / (d - 1.0))
}

/// (a_1 ··· a_d)^{1/(d-1)}, accumulated in log space.
pub fn prod_norm_factor(a: &CoprimeVector) -> f64 {
    let d = a.dim() as f64;
    let log_sum: f64 = a.sorted().iter().map(|&c| (c as f64).ln()).sum();
    (log_sum / (d - 1.0)).exp()
}

/// Schur's bound a_min·a_max - a_min - a_max on g(a).
pub fn schur_bound(a: &CoprimeVector) -> i64 {
    let (lo, hi) = (a.min() as i64, a.max() as i64);
    lo * hi - lo - hi
}

/// |a|^{1 - 1/(d-1)}, the strict upper bound on f(a)/s(a).
pub fn fsineq_rhs(a: &CoprimeVector) -> f64 {
    let d = a.dim() as f64;
    a.norm().powf(1.0 - 1.0 / (d - 1.0))
}

/// Radius beyond which no vector in T·D can have a larger normalized
/// Frobenius number. `sup_norm` is the largest Euclidean norm of a point of D.
pub fn cutoff_radius(kind: NormalizationKind, t: f64, sup_norm: f64, d: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::usage("cutoff radius needs d >= 3"));
    }
    if !(t > 0.0 && sup_norm > 0.0) {
        return Err(Error::usage("cutoff radius needs T > 0 and sup |x| > 0"));
    }
    let base = (t * sup_norm).powf(1.0 - 1.0 / (d as f64 - 1.0));
    Ok(match kind {
        NormalizationKind::SOfA => base,
        NormalizationKind::ProdPower => d as f64 * base,
    })
}


#[cfg(test)]
mod comparability {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    /// Largest prod_norm_factor/s_norm and s_norm/|a|^{d/(d-1)} over uniform draws in [1, t]^d.
    fn ratio_maxima(d: usize, t: u64, count: u64, seed: u64) -> (f64, f64) {
        let (mut c1, mut c2) = (0f64, 0f64);
        let mut rng = stream(seed, 0);
        let mut drawn = 0;
        while drawn < count {
            let c: Vec<u64> = (0..d).map(|_| rng.random_range(1..=t)).collect();
            let Ok(a) = CoprimeVector::new(c) else { continue };
            drawn += 1;
            let s = s_norm(&a);
            c1 = c1.max(prod_norm_factor(&a) / s);
            c2 = c2.max(s / a.norm().powf(d as f64 / (d as f64 - 1.0)));
        }
        (c1, c2)
    }

    /// Recorded maxima per d = 3..=6, rounded up.
    const C1: [f64; 4] = [0.32, 0.24, 0.19, 0.16];
    const C2: [f64; 4] = [1.42, 1.74, 2.01, 2.24];

    #[test]
    fn s_norm_comparability_stays_bounded() {
        for d in 3..=6 {
            for t in [1_000u64, 100_000, 10_000_000] {
                let (c1, c2) = ratio_maxima(d, t, 20_000, 77 + t);
                assert!(c1 <= C1[d - 3], "d = {d}, T = {t}: prod/s reached {c1}");
                assert!(c2 <= C2[d - 3], "d = {d}, T = {t}: s/|a|^(d/(d-1)) reached {c2}");
            }
        }
    }
}
