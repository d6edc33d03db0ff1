//! Exact reference values: the three-coefficient limit density ψ₃ and tail
//! Ψ₃, the tail main term d/(2ζ(d-1))·R^{-(d-1)}, the Riemann zeta function,
//! the first moment for d = 3, and the concentration constants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate, integrate_with_knots};
use crate::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Beyond this radius Ψ₃ is replaced by its two-term asymptotic expansion.
pub const TAIL_CLOSURE_R: f64 = 1000.0;

/// Absolute quadrature tolerance used for Ψ₃ and the moments.
const QUAD_TOL: f64 = 1e-13;

/// Relative tolerance of the upper-tail integral.
const TAIL_REL_TOL: f64 = 1e-13;

/// 9/π², the R^{-2} coefficient of Ψ₃.
pub fn tail_c3() -> f64 {
    9.0 / (PI * PI)
}

/// 33/(2π²), the R^{-4} coefficient of Ψ₃.
pub fn tail_c3_second() -> f64 {
    33.0 / (2.0 * PI * PI)
}

/// Middle branch of ψ₃, valid on [√3, 2]. Exposed for continuity checks.
pub fn psi3_middle_branch(r: f64) -> f64 {
    12.0 / PI * (r / SQRT3 - (4.0 - r * r).max(0.0).sqrt())
}

/// Upper branch of ψ₃, valid on [2, ∞). At R = 2 the logarithmic term is
/// taken at its limit 0.
///
/// The arccos argument x = (R + 3√(R²-4)) / (4√(R²-3)) tends to 1 as R grows,
/// so arccos is evaluated as atan2(√(1-x²), x) with the closed form
/// 1 - x² = 3 / (2 (R²-3)(R²-2+R√(R²-4))), which has no cancellation.
pub fn psi3_upper_branch(r: f64) -> f64 {
    let r2 = r * r;
    let s4 = (r2 - 4.0).max(0.0).sqrt();
    let s3 = (r2 - 3.0).sqrt();
    let x = (r + 3.0 * s4) / (4.0 * s3);
    let one_minus_x2 = 3.0 / (2.0 * (r2 - 3.0) * (r2 - 2.0 + r * s4));
    let angle = one_minus_x2.sqrt().atan2(x);
    let log_term = if s4 == 0.0 { 0.0 } else { 1.5 * s4 * (-1.0 / (r2 - 3.0)).ln_1p() };
    12.0 / (PI * PI) * (r * SQRT3 * angle + log_term)
}

/// Limit density ψ₃(R) of the normalized Frobenius number for d = 3.
pub fn psi3_density(r: f64) -> f64 {
    if r <= SQRT3 {
        0.0
    } else if r <= 2.0 {
        psi3_middle_branch(r)
    } else {
        psi3_upper_branch(r)
    }
}

/// Two-term expansion 9/π² R^{-2} + 33/(2π²) R^{-4} of Ψ₃.
pub fn psi3_tail_asymptotic(r: f64) -> f64 {
    let inv2 = 1.0 / (r * r);
    inv2 * (tail_c3() + tail_c3_second() * inv2)
}

/// Ψ₃(R) = ∫_R^∞ ψ₃.
///
/// Below R = 2 this is 1 - ∫_√3^R ψ₃; from R = 2 on the upper tail is
/// integrated directly up to [`TAIL_CLOSURE_R`] and closed with the
/// asymptotic expansion, which keeps full relative accuracy for large R.
pub fn psi3_tail(r: f64) -> f64 {
    if r <= SQRT3 {
        1.0
    } else if r < 2.0 {
        1.0 - integrate(psi3_middle_branch, SQRT3, r, QUAD_TOL).value
    } else if r < TAIL_CLOSURE_R {
        let tol = TAIL_REL_TOL * psi3_tail_asymptotic(r);
        integrate(psi3_upper_branch, r, TAIL_CLOSURE_R, tol).value + psi3_tail_asymptotic(TAIL_CLOSURE_R)
    } else {
        psi3_tail_asymptotic(r)
    }
}

/// Ψ₃ at every point of an ascending sequence, integrating ψ₃ between
/// consecutive points instead of from scratch.
pub fn psi3_tail_sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::usage("points must be ascending"));
    }
    let mut out = Vec::with_capacity(xs.len());
    let mut prev: Option<(f64, f64)> = None;
    for &x in xs {
        let tail = match prev {
            // restart at the knots so no step straddles a kink
            Some((p, tp)) if p > SQRT3 && (p >= 2.0 || x < 2.0) && x < TAIL_CLOSURE_R => {
                let scale = if p >= 2.0 {
                    TAIL_REL_TOL * psi3_tail_asymptotic(x)
                } else {
                    QUAD_TOL
                };
                tp - integrate(psi3_density, p, x, scale * 1e-3).value
            }
            _ => psi3_tail(x),
        };
        out.push(tail);
        prev = Some((x, tail));
    }
    Ok(out)
}

/// CDF 1 - Ψ₃(R) of the d = 3 limit law.
pub fn psi3_cdf(r: f64) -> f64 {
    1.0 - psi3_tail(r)
}

/// ∫ ψ₃ over [√3, ∞), piecewise with the knots √3, 2 and the tail closure.
pub fn psi3_total_mass() -> f64 {
    integrate_with_knots(psi3_density, &[SQRT3, 2.0, TAIL_CLOSURE_R], QUAD_TOL).value + psi3_tail_asymptotic(TAIL_CLOSURE_R)
}

/// Rows `(R, ψ₃(R), Ψ₃(R))` for R = lo, lo + step, ..., up to hi.
pub fn psi3_table(lo: f64, hi: f64, step: f64) -> Result<Vec<(f64, f64, f64)>> {
    if !(step > 0.0) || !(lo >= 0.0) || !(hi >= lo) {
        return Err(Error::usage("psi3 table needs 0 <= lo <= hi and step > 0"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let r = lo + i as f64 * step;
            (r, psi3_density(r), psi3_tail(r))
        })
        .collect())
}

/// Riemann ζ(s) for real s > 1 by Euler–Maclaurin summation.
pub fn zeta_real(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::usage(format!("zeta needs s > 1, got {s}")));
    }
    const N: u32 = 16;
    // B_{2k} / (2k)!
    const BERNOULLI_OVER_FACT: [f64; 8] = [
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40_320.0,
        5.0 / 66.0 / 3_628_800.0,
        -691.0 / 2730.0 / 479_001_600.0,
        7.0 / 6.0 / 87_178_291_200.0,
        -3617.0 / 510.0 / 20_922_789_888_000.0,
    ];
    let n = N as f64;
    let mut correction = 0.0;
    // rising factorial s (s+1) ... (s+2k-2), times N^{-s-2k+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, &b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        if k > 0 {
            rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
            power /= n * n;
        }
        correction += b * rising * power;
    }
    let head: f64 = (1..N).rev().map(|k| (k as f64).powf(-s)).sum();
    Ok(head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + correction)
}

fn tail_coefficient(d: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::usage("the tail law needs d >= 3"));
    }
    if d == 3 {
        return Ok(tail_c3());
    }
    Ok(d as f64 / (2.0 * zeta_real(d as f64 - 1.0)?))
}

/// Leading tail term d/(2ζ(d-1)) · R^{-(d-1)}.
pub fn main_term(d: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::usage("main term needs R > 0"));
    }
    Ok(tail_coefficient(d)? / r.powi(d as i32 - 1))
}

/// First moment of the d = 3 limit law, frozen from [`moment_exact_d3`].
pub const M3_1: f64 = 2.546_479_089_470_188;

/// k-th moment of the d = 3 limit law. Only k = 1 is a finite moment; k = 0
/// returns the total mass.
pub fn moment_exact_d3(k: u32) -> Result<f64> {
    match k {
        0 => Ok(psi3_total_mass()),
        1 => {
            let body = integrate_with_knots(|r| r * psi3_density(r), &[SQRT3, 2.0, TAIL_CLOSURE_R], QUAD_TOL).value;
            // ∫_X^∞ R (18/π² R^{-3} + 66/π² R^{-5}) dR
            let x = TAIL_CLOSURE_R;
            let closure = (18.0 / x + 22.0 / x.powi(3)) / (PI * PI);
            Ok(body + closure)
        }
        _ => Err(Error::usage(format!(
            "the d = 3 limit law has a finite k-th moment only for k = 1, got k = {k}"
        ))),
    }
}

/// Named constants of the large-d concentration result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticConstants {
    /// Root of e·ln η + η = 0.
    pub eta0: f64,
}

impl AnalyticConstants {
    /// ((d-1)!)^{1/(d-1)}, a strict lower bound on every normalized
    /// Frobenius number in dimension d.
    pub fn support_min(&self, d: usize) -> f64 {
        support_min(d)
    }

    /// d/(2ζ(d-1)).
    pub fn tail_c(&self, d: usize) -> Result<f64> {
        tail_coefficient(d)
    }

    /// 1 + η₀ ≈ 1.757: mass concentrates below this multiple of
    /// `support_min(d)` as d grows.
    pub fn concentration_alpha(&self) -> f64 {
        1.0 + self.eta0
    }
}

pub fn support_min(d: usize) -> f64 {
    let n = d.saturating_sub(1).max(1);
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    (log_fact / n as f64).exp()
}

pub fn constants() -> AnalyticConstants {
    let h = |x: f64| std::f64::consts::E * x.ln() + x;
    let (mut lo, mut hi) = (0.5f64, 0.9f64);
    // h is increasing; h(0.5) < 0 < h(0.9)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    AnalyticConstants { eta0: 0.5 * (lo + hi) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(psi3_density(1.5), 0.0);
        assert!(psi3_middle_branch(SQRT3).abs() < 1e-15);
        // (12/π)(1.9/√3 - √0.39)
        let expect = 12.0 / PI * (1.9 / 3f64.sqrt() - 0.39f64.sqrt());
        assert!((psi3_density(1.9) - expect).abs() < 1e-14);
        assert!((psi3_density(1.9) - 1.805).abs() < 1e-3);
    }

    #[test]
    fn upper_branch_matches_printed_formula() {
        // Where cancellation is harmless, the stable form must agree with a
        // direct transcription using acos.
        for &r in &[2.01, 2.3, 3.0, 5.0, 10.0] {
            let r2: f64 = r * r;
            let arg = (r + 3.0 * (r2 - 4.0).sqrt()) / (4.0 * (r2 - 3.0).sqrt());
            let naive = 12.0 / (PI * PI) * (r * 3f64.sqrt() * arg.acos() + 1.5 * (r2 - 4.0).sqrt() * ((r2 - 4.0) / (r2 - 3.0)).ln());
            assert!(
                ((psi3_upper_branch(r) - naive) / naive).abs() < 1e-9,
                "R = {r}: {} vs {naive}",
                psi3_upper_branch(r)
            );
        }
    }

    #[test]
    fn continuity_at_knots() {
        assert!((psi3_middle_branch(SQRT3) - 0.0).abs() < 1e-9);
        assert!((psi3_middle_branch(2.0) - psi3_upper_branch(2.0)).abs() < 1e-9);
    }

    #[test]
    fn total_mass_is_one() {
        assert!((psi3_total_mass() - 1.0).abs() < 1e-6);
        assert!((moment_exact_d3(0).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tail_routes_agree_at_two() {
        let below = 1.0 - integrate(psi3_middle_branch, SQRT3, 2.0, 1e-14).value;
        assert!((below - psi3_tail(2.0)).abs() < 1e-9);
    }

    #[test]
    fn sorted_tail_matches_pointwise() {
        let xs: Vec<f64> = (0..400)
            .map(|i| 1.7 + 0.013 * i as f64)
            .chain([20.0, 999.0, 1000.0, 1500.0])
            .collect();
        let fast = psi3_tail_sorted(&xs).unwrap();
        for (x, t) in xs.iter().zip(&fast) {
            assert!((t - psi3_tail(*x)).abs() < 1e-11, "{x}");
        }
        assert!(psi3_tail_sorted(&[2.0, 1.9]).is_err());
    }

    #[test]
    fn tail_examples() {
        assert_eq!(psi3_tail(SQRT3), 1.0);
        assert_eq!(psi3_tail(0.0), 1.0);
        let t = psi3_tail(100.0);
        assert!(((t - tail_c3() * 1e-4) / (tail_c3() * 1e-4)).abs() < 3e-4);
    }

    #[test]
    fn tail_expansion_residual() {
        // after the two printed terms the remainder is O(R^-6) with a stable coefficient
        for &r in &[50.0, 100.0, 200.0] {
            let resid = (psi3_tail(r) * r * r - tail_c3() - tail_c3_second() / (r * r)).abs();
            let scaled = resid * r.powi(4);
            assert!((3.8..3.9).contains(&scaled), "R = {r}: scaled residual {scaled}");
        }
    }

    #[test]
    fn density_nonnegative_tail_monotone() {
        let mut prev = f64::INFINITY;
        for i in 0..10_000 {
            let r = 50.0 * i as f64 / 9_999.0;
            assert!(psi3_density(r) >= 0.0, "psi3({r}) < 0");
            if i % 10 == 0 {
                let t = psi3_tail(r);
                assert!(t <= prev + 1e-12, "Psi3 increases at {r}");
                prev = t;
            }
        }
    }

    #[test]
    fn zeta_examples() {
        assert!((zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta_real(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((zeta_real(3.0).unwrap() - 1.202_056_903_2).abs() < 1e-10);
        assert!(zeta_real(1.0).is_err());
    }

    #[test]
    fn zeta_three_against_brute_force() {
        // Direct sum to 10^6 plus the integral tail estimate.
        let n = 1_000_000u64;
        let direct: f64 = (1..=n).rev().map(|k| (k as f64).powi(-3)).sum::<f64>() + 0.5 / (n as f64 * n as f64) - 0.5 / (n as f64).powi(3);
        assert!((zeta_real(3.0).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn main_term_examples() {
        let m = main_term(3, 10.0).unwrap();
        assert!((m - 9.118_906_528e-3).abs() < 1e-12);
        assert!((main_term(4, 1.0).unwrap() - 1.663_81).abs() < 1e-5);
        for &r in &[0.5, 2.0, 7.0, 123.0] {
            assert_eq!(main_term(3, r).unwrap(), 9.0 / (PI * PI) / (r * r));
        }
        assert!(main_term(2, 1.0).is_err());
    }

    #[test]
    fn moment_examples() {
        let m = moment_exact_d3(1).unwrap();
        assert!((m - M3_1).abs() < 1e-12);
        assert!((m - 8.0 / PI).abs() < 1e-11);
        assert!(moment_exact_d3(2).is_err());
    }

    #[test]
    fn constants_examples() {
        let c = constants();
        assert!((std::f64::consts::E * c.eta0.ln() + c.eta0).abs() < 1e-12);
        assert!((c.eta0 - 0.756).abs() < 1e-3);
        assert!((c.support_min(3) - 2f64.sqrt()).abs() < 1e-12);
        assert!((c.support_min(6) - 120f64.powf(0.2)).abs() < 1e-12);
        assert!((c.support_min(6) - 2.6052).abs() < 1e-4);
        assert!((c.tail_c(3).unwrap() - 9.0 / (PI * PI)).abs() < 1e-12);
        assert!((c.concentration_alpha() - 1.757).abs() < 1e-3);
    }

    #[test]
    fn table_rows() {
        let t = psi3_table(1.5, 2.5, 0.5).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], (1.5, 0.0, 1.0));
        assert!(psi3_table(1.0, 2.0, 0.0).is_err());
    }
}
