//! The standard simplex Δ = {x ≥ 0 : x·e ≤ 1}: directional widths, its
//! gauge, Monte Carlo checks of two volume constants, and certified covering
//! radii of planar lattices.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::{lll_reduce, LatticeBasis};
use crate::rng::{chunks, stream};
use crate::{Error, Result};

/// Cells examined by [`covering_radius_2d`] before giving up.
pub const DEFAULT_COVER_BUDGET: u64 = 2_000_000;

/// A unit vector in R^n, n ≥ 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    v: Vec<f64>,
}

impl Direction {
    /// Accepts `v` if it already has unit length within 1e-12.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::usage("directions need n >= 2"));
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::usage(format!("direction has norm {norm}, expected 1")));
        }
        Ok(Self { v })
    }

    /// Scales a nonzero vector to unit length.
    pub fn normalize(v: Vec<f64>) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::usage("cannot normalize a zero or non-finite vector"));
        }
        Self::new(v.into_iter().map(|x| x / norm).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }
}

/// Width of Δ in direction v: ℓ₊(v) - ℓ₋(v), where ℓ₊ = max(0, v_1, …, v_n)
/// and ℓ₋ = min(0, v_1, …, v_n).
pub fn width(v: &Direction) -> f64 {
    width_raw(&v.v)
}

fn width_raw(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(0.0, f64::max);
    let lo = v.iter().copied().fold(0.0, f64::min);
    hi - lo
}

/// Least ρ ≥ 0 with x ∈ ρΔ.
pub fn simplex_gauge(x: &[f64]) -> f64 {
    if x.iter().all(|&c| c >= 0.0) {
        x.iter().sum()
    } else {
        f64::INFINITY
    }
}

/// Membership in K = {x ∈ [-1, 1]^n : |x_j - x_k| ≤ 1}, equivalently the
/// spread of (0, x_1, …, x_n) is at most 1.
pub fn in_k(x: &[f64]) -> bool {
    x.iter().all(|c| c.abs() <= 1.0) && width_raw(x) <= 1.0
}

/// Surface area of the unit sphere S^{n-1}.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

/// Γ(n/2) for a positive integer n.
fn gamma_half(n: usize) -> f64 {
    let mut g = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut x = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < n as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Parallel chunked mean; chunk results are reduced in index order.
fn chunked_mean<F>(samples: u64, seed: u64, per_chunk: F) -> f64
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, u64) -> f64 + Sync,
{
    let sums: Vec<f64> = chunks(samples)
        .into_par_iter()
        .map(|(c, _, len)| per_chunk(&mut stream(seed, c), len))
        .collect();
    sums.iter().sum::<f64>() / samples as f64
}

/// Monte Carlo estimate of ½∫_{S^{n-1}} ℓ(v)^{-n} dv.
pub fn mc_width_integral(n: usize, samples: u64, seed: u64) -> Result<f64> {
    if n < 2 || samples == 0 {
        return Err(Error::usage("need n >= 2 and at least one sample"));
    }
    let mean = chunked_mean(samples, seed, |rng, len| {
        let mut v = vec![0.0; n];
        let mut acc = 0.0;
        for _ in 0..len {
            let norm = loop {
                for x in v.iter_mut() {
                    *x = rng.sample(StandardNormal);
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.0 {
                    break norm;
                }
            };
            acc += (width_raw(&v) / norm).powi(-(n as i32));
        }
        acc
    });
    Ok(mean * sphere_area(n) / 2.0)
}

/// Monte Carlo estimate of vol(K): 2^n times the hit rate in [-1, 1]^n.
pub fn mc_volume_k(n: usize, samples: u64, seed: u64) -> Result<f64> {
    if n < 2 || samples == 0 {
        return Err(Error::usage("need n >= 2 and at least one sample"));
    }
    let rate = chunked_mean(samples, seed, |rng, len| {
        let mut x = vec![0.0; n];
        let mut hits = 0u64;
        for _ in 0..len {
            for c in x.iter_mut() {
                *c = rng.random_range(-1.0..=1.0);
            }
            hits += u64::from(in_k(&x));
        }
        hits as f64
    });
    Ok(2f64.powi(n as i32) * rate)
}

/// Certified bracket for a covering radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverInterval {
    pub lo: f64,
    pub hi: f64,
}

impl CoverInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// F(ζ) = min over lattice points p of gauge(ζ + p) for a planar lattice.
struct CoverObjective {
    b: [[f64; 2]; 2],
    /// Columns of b^{-1}, for coefficient ranges.
    inv: [[f64; 2]; 2],
}

impl CoverObjective {
    fn new(b: [[f64; 2]; 2]) -> Self {
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        // p = c·b  ⇒  c = p·b^{-1}
        let inv = [[b[1][1] / det, -b[0][1] / det], [-b[1][0] / det, b[0][0] / det]];
        Self { b, inv }
    }

    /// Best c1 for a fixed c2, as the gauge value, or None if infeasible.
    fn best_for_row(&self, z: [f64; 2], c2: f64) -> Option<f64> {
        let (b1, b2) = (self.b[0], self.b[1]);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..2 {
            let r = -z[i] - c2 * b2[i];
            if b1[i] > 0.0 {
                lo = lo.max(r / b1[i]);
            } else if b1[i] < 0.0 {
                hi = hi.min(r / b1[i]);
            } else if r > 0.0 {
                return None;
            }
        }
        let (lo, hi) = ((lo - 1e-12).ceil(), (hi + 1e-12).floor());
        if lo > hi {
            return None;
        }
        let slope = b1[0] + b1[1];
        let c1 = if slope > 0.0 || (slope == 0.0 && lo.is_finite()) { lo } else { hi };
        if !c1.is_finite() {
            return None;
        }
        let x = [z[0] + c1 * b1[0] + c2 * b2[0], z[1] + c1 * b1[1] + c2 * b2[1]];
        Some(x[0].max(0.0) + x[1].max(0.0))
    }

    fn eval(&self, z: [f64; 2]) -> f64 {
        // Minimizers lie in the triangle z + p ∈ {x ≥ 0, Σx ≤ bound}; scan the
        // c2 values that triangle allows, doubling the bound until it holds.
        let mut bound = 4.0;
        loop {
            let c2_at = |x: [f64; 2]| (x[0] - z[0]) * self.inv[0][1] + (x[1] - z[1]) * self.inv[1][1];
            let vals = [c2_at([0.0, 0.0]), c2_at([bound, 0.0]), c2_at([0.0, bound])];
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min).floor() as i64;
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil() as i64;
            let best = (lo..=hi)
                .filter_map(|c2| self.best_for_row(z, c2 as f64))
                .fold(f64::INFINITY, f64::min);
            if best <= bound {
                return best;
            }
            bound *= 2.0;
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    ub: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.ub.total_cmp(&other.ub) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub.total_cmp(&other.ub)
    }
}

pub fn covering_radius_2d(basis: &LatticeBasis, tol: f64) -> Result<CoverInterval> {
    covering_radius_2d_with_budget(basis, tol, DEFAULT_COVER_BUDGET)
}

/// Bracket for the Δ-covering radius of a unimodular planar lattice.
///
/// Branch and bound over axis-parallel cells covering one period. For δ ≥ 0
/// the minimizer at ζ stays feasible at ζ + δ, so F(ζ + δ) ≤ F(ζ) + δ_1 + δ_2
/// and the lower-left corner value plus w + h bounds F on a w × h cell.
pub fn covering_radius_2d_with_budget(basis: &LatticeBasis, tol: f64, budget: u64) -> Result<CoverInterval> {
    if basis.rank() != 2 || basis.ambient_dim() != 2 {
        return Err(Error::usage("covering radius needs a rank-2 lattice in the plane"));
    }
    if (basis.det() - 1.0).abs() > 1e-9 {
        return Err(Error::usage(format!("covering radius needs covolume 1, got {}", basis.det())));
    }
    if !(tol >= 1e-4) {
        return Err(Error::usage(format!("tolerance {tol} below 1e-4")));
    }
    let rows = lll_reduce(basis, 0.99)?.vectors_f64();
    let b = [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]];
    let objective = CoverObjective::new(b);

    let corners = [[0.0, 0.0], b[0], b[1], [b[0][0] + b[1][0], b[0][1] + b[1][1]]];
    let x0 = corners.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
    let x1 = corners.iter().map(|c| c[0]).fold(f64::NEG_INFINITY, f64::max);
    let y0 = corners.iter().map(|c| c[1]).fold(f64::INFINITY, f64::min);
    let y1 = corners.iter().map(|c| c[1]).fold(f64::NEG_INFINITY, f64::max);

    let mut lo = 0.0f64;
    let mut cells = 0u64;
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Cell>, lo: &mut f64, x: f64, y: f64, w: f64, h: f64| {
        let f = objective.eval([x, y]);
        *lo = lo.max(f);
        heap.push(Cell { x, y, w, h, ub: f + w + h });
    };
    push(&mut heap, &mut lo, x0, y0, x1 - x0, y1 - y0);
    loop {
        let top = heap.pop().expect("heap never empties");
        if top.ub - lo <= tol {
            return Ok(CoverInterval { lo, hi: top.ub.max(lo) });
        }
        cells += 1;
        if cells > budget {
            return Err(Error::CoverBudget { lo, hi: top.ub, cells });
        }
        let (w, h) = (top.w / 2.0, top.h / 2.0);
        for (dx, dy) in [(0.0, 0.0), (w, 0.0), (0.0, h), (w, h)] {
            push(&mut heap, &mut lo, top.x + dx, top.y + dy, w, h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::sample_mu2_indexed;
    use proptest::prelude::*;

    fn unit(v: &[f64]) -> Direction {
        Direction::normalize(v.to_vec()).unwrap()
    }

    #[test]
    fn width_examples() {
        assert_eq!(width(&unit(&[1.0, 0.0])), 1.0);
        assert!((width(&unit(&[1.0, -1.0])) - 2f64.sqrt()).abs() < 1e-15);
        assert!((width(&unit(&[1.0, 1.0])) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(Direction::new(vec![1.0, 1.0]).is_err());
        assert!(Direction::new(vec![1.0]).is_err());
    }

    #[test]
    fn gauge_examples() {
        assert!((simplex_gauge(&[0.2, 0.3]) - 0.5).abs() < 1e-15);
        assert_eq!(simplex_gauge(&[-0.1, 0.3]), f64::INFINITY);
        assert_eq!(simplex_gauge(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn k_membership() {
        assert!(in_k(&[0.4, -0.4]));
        assert!(!in_k(&[0.6, -0.6]));
        assert!(!in_k(&[1.2, 0.5]));
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_seeded() {
        assert_eq!(mc_width_integral(2, 1, 9).unwrap(), mc_width_integral(2, 1, 9).unwrap());
        assert_eq!(mc_volume_k(3, 5000, 9).unwrap(), mc_volume_k(3, 5000, 9).unwrap());
        assert!(mc_width_integral(1, 10, 0).is_err());
    }

    #[test]
    fn monte_carlo_constants_small() {
        let w = mc_width_integral(3, 200_000, 1).unwrap();
        assert!((w / 6.0 - 1.0).abs() < 0.02, "{w}");
        let k = mc_volume_k(3, 200_000, 1).unwrap();
        assert!((k / 4.0 - 1.0).abs() < 0.02, "{k}");
    }

    /// Grid oracle: max of F over a fine grid of one period.
    fn grid_max(b: [[f64; 2]; 2], steps: usize) -> f64 {
        let obj = CoverObjective::new(b);
        let mut best = 0.0f64;
        for i in 0..steps {
            for j in 0..steps {
                let (s, t) = (i as f64 / steps as f64, j as f64 / steps as f64);
                let z = [s * b[0][0] + t * b[1][0], s * b[0][1] + t * b[1][1]];
                best = best.max(obj.eval(z));
            }
        }
        best
    }

    #[test]
    fn cover_z2() {
        let z2 = LatticeBasis::from_real_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let c = covering_radius_2d(&z2, 1e-3).unwrap();
        assert!(c.contains(2.0), "{c:?}");
        assert!(c.hi - c.lo <= 1e-3);
        let g = grid_max([[1.0, 0.0], [0.0, 1.0]], 400);
        assert!(g <= c.hi && g >= 2.0 - 0.01);
    }

    #[test]
    fn cover_rectangle() {
        let r = LatticeBasis::from_real_rows(vec![vec![2.0, 0.0], vec![0.0, 0.5]]).unwrap();
        let c = covering_radius_2d(&r, 1e-3).unwrap();
        assert!(c.contains(2.5), "{c:?}");
        let g = grid_max([[2.0, 0.0], [0.0, 0.5]], 400);
        assert!(g <= c.hi && g >= 2.5 - 0.01);
    }

    #[test]
    fn cover_matches_grid_on_random_lattices() {
        for i in 0..5 {
            let basis = sample_mu2_indexed(21, i);
            let c = covering_radius_2d(&basis, 1e-3).unwrap();
            let rows = basis.vectors_f64();
            let g = grid_max([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]], 300);
            assert!(g <= c.hi + 1e-12, "{g} {c:?}");
            assert!(c.lo >= 3f64.sqrt() - 1e-3, "{c:?}");
        }
    }

    #[test]
    fn cover_rejects_bad_input() {
        let scaled = LatticeBasis::from_real_rows(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(covering_radius_2d(&scaled, 1e-3), Err(Error::Usage(_))));
        let z2 = LatticeBasis::from_real_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(covering_radius_2d(&z2, 1e-5).is_err());
        assert!(matches!(
            covering_radius_2d_with_budget(&z2, 1e-3, 3),
            Err(Error::CoverBudget { .. })
        ));
    }

    proptest! {
        #[test]
        fn width_bounds(v in proptest::collection::vec(-1.0f64..1.0, 2..7)) {
            prop_assume!(v.iter().map(|x| x * x).sum::<f64>() > 1e-6);
            let d = Direction::normalize(v).unwrap();
            let n = d.dim() as f64;
            let w = width(&d);
            prop_assert!(w >= 1.0 / n.sqrt() - 1e-12 && w <= 2f64.sqrt() + 1e-12);
        }

        #[test]
        fn gauge_homogeneous_and_convex(
            x in proptest::collection::vec(0.0f64..5.0, 3),
            y in proptest::collection::vec(0.0f64..5.0, 3),
            t in 0.01f64..10.0,
            s in 0.0f64..1.0,
        ) {
            let tx: Vec<f64> = x.iter().map(|c| c * t).collect();
            prop_assert!((simplex_gauge(&tx) - t * simplex_gauge(&x)).abs() < 1e-9);
            let mix: Vec<f64> = x.iter().zip(&y).map(|(a, b)| s * a + (1.0 - s) * b).collect();
            prop_assert!(simplex_gauge(&mix) <= s * simplex_gauge(&x) + (1.0 - s) * simplex_gauge(&y) + 1e-9);
        }
    }
}
