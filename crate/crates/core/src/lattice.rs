//! Lattices of the geometry-of-numbers side: the kernel lattice
//! Λ_a = Z^d ∩ a^⊥, LLL reduction, exact successive minima, and a sampler for
//! random covolume-one lattices in the plane.

use std::f64::consts::PI;

use num_integer::Integer;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coprime::CoprimeVector;
use crate::frobenius::frobenius;
use crate::rng::stream;
use crate::{Error, Result};

/// Largest rank accepted by [`successive_minima`].
pub const MAX_ENUM_RANK: usize = 6;

/// Default cap on enumeration tree nodes.
pub const DEFAULT_ENUM_BUDGET: u64 = 50_000_000;

const LLL_MAX_ITERATIONS: u64 = 1_000_000;

/// Basis rows, exact when the lattice is integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rows", rename_all = "snake_case")]
pub enum Rows {
    Integer(Vec<Vec<i64>>),
    Real(Vec<Vec<f64>>),
}

/// k linearly independent row vectors in R^m with their covolume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeBasis {
    rows: Rows,
    det: f64,
}

fn check_shape<T>(rows: &[Vec<T>]) -> Result<()> {
    let Some(first) = rows.first() else {
        return Err(Error::usage("a basis needs at least one row"));
    };
    let m = first.len();
    if m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::usage("basis rows must be non-empty and of equal length"));
    }
    if rows.len() > m {
        return Err(Error::usage(format!("{} rows cannot be independent in dimension {m}", rows.len())));
    }
    Ok(())
}

impl LatticeBasis {
    pub fn from_integer_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        check_shape(&rows)?;
        let gram = integer_gram(&rows)?;
        let det_sq = match bareiss_det(gram.clone()) {
            Some(d) => d as f64,
            None => gram_det_f64(
                &gram
                    .iter()
                    .map(|r| r.iter().map(|&x| x as f64).collect())
                    .collect::<Vec<Vec<f64>>>(),
            ),
        };
        if det_sq <= 0.0 {
            return Err(Error::usage("basis rows are linearly dependent"));
        }
        Ok(Self {
            rows: Rows::Integer(rows),
            det: det_sq.sqrt(),
        })
    }

    pub fn from_real_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&rows)?;
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::usage("basis entries must be finite"));
        }
        let gram: Vec<Vec<f64>> = rows.iter().map(|a| rows.iter().map(|b| dot_f64(a, b)).collect()).collect();
        let scale: f64 = rows.iter().map(|r| dot_f64(r, r)).product();
        let det_sq = gram_det_f64(&gram);
        if !(det_sq > 1e-24 * scale) {
            return Err(Error::usage("basis rows are linearly dependent"));
        }
        Ok(Self {
            rows: Rows::Real(rows),
            det: det_sq.sqrt(),
        })
    }

    pub fn rows(&self) -> &Rows {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Integer(r) => r.len(),
            Rows::Real(r) => r.len(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match &self.rows {
            Rows::Integer(r) => r[0].len(),
            Rows::Real(r) => r[0].len(),
        }
    }

    /// Covolume within the real span.
    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.rows, Rows::Integer(_))
    }

    pub fn vectors_f64(&self) -> Vec<Vec<f64>> {
        match &self.rows {
            Rows::Integer(r) => r.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect(),
            Rows::Real(r) => r.clone(),
        }
    }

    /// Exact Gram determinant of an integral basis, if it fits in i128.
    pub fn exact_gram_det(&self) -> Option<i128> {
        match &self.rows {
            Rows::Integer(r) => bareiss_det(integer_gram(r).ok()?),
            Rows::Real(_) => None,
        }
    }
}

fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_i128(a: &[i64], b: &[i64]) -> Option<i128> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (&x, &y)| acc.checked_add(x as i128 * y as i128))
}

fn integer_gram(rows: &[Vec<i64>]) -> Result<Vec<Vec<i128>>> {
    rows.iter()
        .map(|a| rows.iter().map(|b| dot_i128(a, b).ok_or(Error::Overflow("gram matrix"))).collect())
        .collect()
}

/// Fraction-free determinant; `None` on i128 overflow.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| m[i][k] != 0)?;
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m.get(n.wrapping_sub(1)).map_or(1, |r| r[n - 1]))
}

/// Exact rank of small integer matrices (rows); `None` on overflow.
fn integer_rank(rows: &[Vec<i64>]) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[rank][c], m[i][c]);
            let g = a.gcd(&b);
            let (fa, fb) = (a / g, b / g);
            #[allow(clippy::needless_range_loop)]
            for j in c..cols {
                m[i][j] = m[i][j].checked_mul(fa)?.checked_sub(m[rank][j].checked_mul(fb)?)?;
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Product of the squared Gram–Schmidt lengths of a Gram matrix.
fn gram_det_f64(gram: &[Vec<f64>]) -> f64 {
    let (_, bstar) = gso_from_gram(gram);
    bstar.iter().product()
}

/// Gram–Schmidt coefficients μ and squared lengths |b*_i|² from a Gram matrix.
fn gso_from_gram(gram: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = gram.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = gram[i][j];
            for l in 0..j {
                s -= mu[j][l] * mu[i][l] * bstar[l];
            }
            mu[i][j] = if bstar[j] > 0.0 { s / bstar[j] } else { 0.0 };
        }
        let mut s = gram[i][i];
        for l in 0..i {
            s -= mu[i][l] * mu[i][l] * bstar[l];
        }
        bstar[i] = s;
        mu[i][i] = 1.0;
    }
    (mu, bstar)
}

/// Row arithmetic needed by LLL, exact for integers.
trait Coord: Copy + Send + Sync {
    fn gram(rows: &[Vec<Self>]) -> Result<Vec<Vec<f64>>>;
    fn sub_multiple(row: &mut [Self], other: &[Self], q: i64) -> Result<()>;
}

impl Coord for i64 {
    fn gram(rows: &[Vec<i64>]) -> Result<Vec<Vec<f64>>> {
        Ok(integer_gram(rows)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as f64).collect())
            .collect())
    }

    fn sub_multiple(row: &mut [i64], other: &[i64], q: i64) -> Result<()> {
        for (x, &y) in row.iter_mut().zip(other) {
            *x = q
                .checked_mul(y)
                .and_then(|p| x.checked_sub(p))
                .ok_or(Error::Overflow("LLL size reduction"))?;
        }
        Ok(())
    }
}

impl Coord for f64 {
    fn gram(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        Ok(rows.iter().map(|a| rows.iter().map(|b| dot_f64(a, b)).collect()).collect())
    }

    fn sub_multiple(row: &mut [f64], other: &[f64], q: i64) -> Result<()> {
        let q = q as f64;
        for (x, &y) in row.iter_mut().zip(other) {
            *x -= q * y;
        }
        Ok(())
    }
}

fn lll_rows<T: Coord>(b: &mut [Vec<T>], delta: f64) -> Result<()> {
    let n = b.len();
    let mut k = 1;
    let mut iterations = 0u64;
    while k < n {
        iterations += 1;
        if iterations > LLL_MAX_ITERATIONS {
            return Err(Error::Budget {
                what: "LLL reduction",
                spent: iterations,
            });
        }
        // Size-reduce b_k, recomputing GSO from exact Gram data until stable.
        let (mu, bstar) = loop {
            let (mu, bstar) = gso_from_gram(&T::gram(b)?);
            let Some(j) = (0..k).rev().find(|&j| mu[k][j].abs() > 0.501) else {
                break (mu, bstar);
            };
            let q = mu[k][j].round() as i64;
            let (head, tail) = b.split_at_mut(k);
            T::sub_multiple(&mut tail[0], &head[j], q)?;
        };
        if bstar[k] <= 0.0 || bstar[k - 1] <= 0.0 {
            return Err(Error::usage("basis rows are linearly dependent"));
        }
        if bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    Ok(())
}

/// LLL-reduces the basis with Lovász parameter `delta` ∈ (1/4, 1).
pub fn lll_reduce(basis: &LatticeBasis, delta: f64) -> Result<LatticeBasis> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::usage(format!("LLL delta {delta} outside (1/4, 1)")));
    }
    match &basis.rows {
        Rows::Integer(r) => {
            let mut rows = r.clone();
            lll_rows(&mut rows, delta)?;
            LatticeBasis::from_integer_rows(rows)
        }
        Rows::Real(r) => {
            let mut rows = r.clone();
            lll_rows(&mut rows, delta)?;
            LatticeBasis::from_real_rows(rows)
        }
    }
}

/// Lovász condition check used by tests and diagnostics.
pub fn is_lll_reduced(basis: &LatticeBasis, delta: f64) -> bool {
    let gram = match &basis.rows {
        Rows::Integer(r) => match i64::gram(r) {
            Ok(g) => g,
            Err(_) => return false,
        },
        Rows::Real(r) => f64::gram(r).expect("real gram"),
    };
    let (mu, bstar) = gso_from_gram(&gram);
    let n = bstar.len();
    (1..n).all(|k| (0..k).all(|j| mu[k][j].abs() <= 0.5 + 1e-6) && bstar[k] >= (delta - mu[k][k - 1].powi(2)) * bstar[k - 1] * (1.0 - 1e-9))
}

/// Integer basis of Λ_a = {x ∈ Z^d : a·x = 0}, LLL-reduced.
///
/// Column operations driven by the extended Euclidean algorithm carry a to
/// (0, …, 0, 1); the first d-1 columns of the accumulated unimodular matrix
/// then span the kernel.
pub fn kernel_lattice(a: &CoprimeVector) -> Result<LatticeBasis> {
    let d = a.dim();
    let mut w: Vec<i128> = a.coeffs().iter().map(|&c| c as i128).collect();
    // cols[j] is column j of the unimodular transform
    let mut cols: Vec<Vec<i128>> = (0..d).map(|j| (0..d).map(|i| i128::from(i == j)).collect()).collect();
    let last = d - 1;
    for j in 0..last {
        if w[j] == 0 {
            continue;
        }
        let e = w[j].extended_gcd(&w[last]);
        let (g, x, y) = (e.gcd, e.x, e.y);
        let (pj, pl) = (w[j] / g, w[last] / g);
        let (cj, cl) = (cols[j].clone(), cols[last].clone());
        for i in 0..d {
            cols[last][i] = x * cj[i] + y * cl[i];
            cols[j][i] = pl * cj[i] - pj * cl[i];
        }
        w[j] = 0;
        w[last] = g;
    }
    debug_assert_eq!(w[last], 1);
    let rows: Vec<Vec<i64>> = cols[..last]
        .iter()
        .map(|c| {
            c.iter()
                .map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("kernel basis")))
                .collect()
        })
        .collect::<Result<_>>()?;
    let raw = LatticeBasis::from_integer_rows(rows)?;
    lll_reduce(&raw, 0.99)
}

/// Euclidean successive minima λ_1 ≤ … ≤ λ_k with their ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaProfile {
    pub lambdas: Vec<f64>,
    /// ρ_j = λ_{j+1}/λ_j.
    pub ratios: Vec<f64>,
    /// Linearly independent lattice vectors realizing the minima.
    pub witnesses: Vec<Vec<f64>>,
}

/// Unit-ball volume in dimension k.
fn ball_volume(k: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_k = 2π/k · V_{k-2}
    let mut v = [1.0, 2.0];
    for j in 2..=k {
        v[j % 2] *= 2.0 * PI / j as f64;
    }
    v[k % 2]
}

impl MinimaProfile {
    fn from_lambdas(lambdas: Vec<f64>, witnesses: Vec<Vec<f64>>) -> Self {
        let ratios = lambdas.windows(2).map(|w| w[1] / w[0]).collect();
        Self {
            lambdas,
            ratios,
            witnesses,
        }
    }

    /// (2^k/k!)·det, (∏λ_j)·vol(B^k), 2^k·det.
    pub fn minkowski_sandwich(&self, det: f64) -> (f64, f64, f64) {
        let k = self.lambdas.len();
        let two_k = 2f64.powi(k as i32);
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        let middle = self.lambdas.iter().product::<f64>() * ball_volume(k);
        (two_k / fact * det, middle, two_k * det)
    }

    pub fn satisfies_sandwich(&self, det: f64) -> bool {
        let (lo, mid, hi) = self.minkowski_sandwich(det);
        lo <= mid * (1.0 + 1e-9) && mid <= hi * (1.0 + 1e-9)
    }
}

struct Enumeration<'a> {
    mu: &'a [Vec<f64>],
    bstar: &'a [f64],
    radius_sq: f64,
    x: Vec<i64>,
    found: Vec<Vec<i64>>,
    nodes: u64,
    budget: u64,
}

impl Enumeration<'_> {
    fn descend(&mut self, level: usize, partial: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "lattice enumeration",
                spent: self.nodes,
            });
        }
        let n = self.x.len();
        let center: f64 = -(level + 1..n).map(|j| self.x[j] as f64 * self.mu[j][level]).sum::<f64>();
        let room = self.radius_sq - partial;
        if room < 0.0 {
            return Ok(());
        }
        let half = (room / self.bstar[level]).sqrt();
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for v in lo..=hi {
            self.x[level] = v;
            let diff = v as f64 - center;
            let next = partial + diff * diff * self.bstar[level];
            if level == 0 {
                // keep one of ±x: the highest nonzero coordinate is positive
                if let Some(top) = self.x.iter().rev().find(|&&c| c != 0) {
                    if *top > 0 {
                        self.found.push(self.x.clone());
                    }
                }
            } else {
                self.descend(level - 1, next)?;
            }
        }
        self.x[level] = 0;
        Ok(())
    }
}

pub fn successive_minima(basis: &LatticeBasis) -> Result<MinimaProfile> {
    successive_minima_with_budget(basis, DEFAULT_ENUM_BUDGET)
}

/// Exact successive minima by enumerating every lattice vector no longer
/// than the longest LLL basis vector, then selecting greedily by length.
/// Floating Gram–Schmidt data only prunes; lengths and independence are
/// decided exactly for integral bases.
pub fn successive_minima_with_budget(basis: &LatticeBasis, budget: u64) -> Result<MinimaProfile> {
    let k = basis.rank();
    if k > MAX_ENUM_RANK {
        return Err(Error::usage(format!("successive minima supports rank <= {MAX_ENUM_RANK}, got {k}")));
    }
    let reduced = lll_reduce(basis, 0.99)?;
    let gram = match &reduced.rows {
        Rows::Integer(r) => i64::gram(r)?,
        Rows::Real(r) => f64::gram(r)?,
    };
    let (mu, bstar) = gso_from_gram(&gram);
    let radius_sq = (0..k).map(|i| gram[i][i]).fold(0.0, f64::max);
    let mut search = Enumeration {
        mu: &mu,
        bstar: &bstar,
        radius_sq: radius_sq * (1.0 + 1e-9) + 1e-12,
        x: vec![0; k],
        found: Vec::new(),
        nodes: 0,
        budget,
    };
    search.descend(k - 1, 0.0)?;

    let vectors = reduced.vectors_f64();
    let combine = |x: &[i64]| -> Vec<f64> {
        (0..reduced.ambient_dim())
            .map(|c| x.iter().zip(&vectors).map(|(&xi, row)| xi as f64 * row[c]).sum())
            .collect()
    };
    // (exact key, length², coefficients)
    let mut candidates: Vec<(i128, f64, Vec<i64>)> = match &reduced.rows {
        Rows::Integer(rows) => {
            let limit = radius_sq.round() as i128;
            search
                .found
                .into_iter()
                .filter_map(|x| {
                    let v: Vec<i64> = (0..reduced.ambient_dim())
                        .map(|c| x.iter().zip(rows).map(|(&xi, row)| xi * row[c]).sum())
                        .collect();
                    let n2 = dot_i128(&v, &v)?;
                    (n2 <= limit).then_some((n2, n2 as f64, x))
                })
                .collect()
        }
        Rows::Real(_) => search
            .found
            .into_iter()
            .filter_map(|x| {
                let v = combine(&x);
                let n2 = dot_f64(&v, &v);
                (n2 <= radius_sq * (1.0 + 1e-12)).then_some((0, n2, x))
            })
            .collect(),
    };
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(k);
    let mut lambdas = Vec::with_capacity(k);
    for (_, n2, x) in candidates {
        if chosen.len() == k {
            break;
        }
        chosen.push(x);
        match integer_rank(&chosen) {
            Some(r) if r == chosen.len() => lambdas.push(n2.sqrt()),
            Some(_) => {
                chosen.pop();
            }
            None => return Err(Error::Overflow("independence test")),
        }
    }
    if lambdas.len() != k {
        return Err(Error::usage("enumeration did not find a full set of minima"));
    }
    let witnesses = chosen.iter().map(|x| combine(x)).collect();
    Ok(MinimaProfile::from_lambdas(lambdas, witnesses))
}

/// Both sides of f(a)/s(a) ≤ (n/2)·|a|^{-1/n}·λ_n(Λ_a), n = d - 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlievHenkCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn check_aliev_henk(a: &CoprimeVector) -> Result<AlievHenkCheck> {
    if a.dim() < 3 {
        return Err(Error::usage("the kernel-lattice bound needs d >= 3"));
    }
    let lhs = frobenius(a)?.norm_s;
    let n = a.dim() - 1;
    let minima = successive_minima(&kernel_lattice(a)?)?;
    let rhs = 0.5 * n as f64 * a.norm().powf(-1.0 / n as f64) * minima.lambdas[n - 1];
    Ok(AlievHenkCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}

/// Membership in the standard fundamental domain of SL(2, Z) on the upper
/// half-plane: -1/2 < x ≤ 1/2 and |z| ≥ 1.
pub fn in_fundamental_domain(x: f64, y: f64) -> bool {
    y > 0.0 && x > -0.5 && x <= 0.5 && x * x + y * y >= 1.0
}

pub fn sample_mu2(seed: u64) -> LatticeBasis {
    sample_mu2_indexed(seed, 0)
}

/// Draws a covolume-one planar lattice from the normalized Haar measure.
///
/// The shape z = x + iy has density ∝ y^{-2} on the fundamental domain: x is
/// uniform on (-1/2, 1/2], y is drawn from y^{-2} on [√3/2, ∞) by inverse
/// CDF, and points below the unit circle are rejected (acceptance π√3/6).
/// The basis (1/√y, 0), (x/√y, √y) is then rotated by a uniform angle.
pub fn sample_mu2_indexed(seed: u64, index: u64) -> LatticeBasis {
    let mut rng = stream(seed, index);
    let y_floor = 3f64.sqrt() / 2.0;
    let (x, y) = loop {
        let x = 0.5 - rng.random::<f64>();
        let y = y_floor / (1.0 - rng.random::<f64>());
        if in_fundamental_domain(x, y) {
            break (x, y);
        }
    };
    let theta = 2.0 * PI * rng.random::<f64>();
    let (s, c) = theta.sin_cos();
    let rotate = |p: [f64; 2]| vec![p[0] * c - p[1] * s, p[0] * s + p[1] * c];
    let sy = y.sqrt();
    let rows = vec![rotate([1.0 / sy, 0.0]), rotate([x / sy, sy])];
    LatticeBasis::from_real_rows(rows).expect("sampled basis is non-degenerate")
}

/// Shape coordinate z = x + iy of a sampled lattice; for diagnostics.
pub fn mu2_shape(seed: u64, index: u64) -> (f64, f64) {
    let b = sample_mu2_indexed(seed, index).vectors_f64();
    let n1 = dot_f64(&b[0], &b[0]);
    let x = dot_f64(&b[0], &b[1]) / n1;
    let cross = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    (x, cross / n1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub j: usize,
    pub r: f64,
    pub fraction: f64,
}

pub const RATIO_THRESHOLDS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Tail fractions of the minima ratios ρ_j(Λ_a) over random coprime a in
/// [1, T]^d, at the thresholds in [`RATIO_THRESHOLDS`].
pub fn ratio_statistics(d: usize, t: u64, count: usize, seed: u64) -> Result<Vec<RatioRow>> {
    if !(3..=5).contains(&d) {
        return Err(Error::usage(format!("ratio statistics need d in 3..=5, got {d}")));
    }
    if t < 2 || count == 0 {
        return Err(Error::usage("ratio statistics need T >= 2 and count >= 1"));
    }
    let ranges = vec![(1, t); d];
    let ratios: Vec<Vec<f64>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let a = crate::statistics::draw_coprime(&mut rng, &ranges);
            Ok(successive_minima(&kernel_lattice(&a)?)?.ratios)
        })
        .collect::<Result<_>>()?;
    let mut table = Vec::new();
    for j in 1..d - 1 {
        for &r in &RATIO_THRESHOLDS {
            let hits = ratios.iter().filter(|rs| rs[j - 1] >= r).count();
            table.push(RatioRow {
                j,
                r,
                fraction: hits as f64 / count as f64,
            });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[u64]) -> CoprimeVector {
        CoprimeVector::new(c.to_vec()).unwrap()
    }

    fn int_rows(b: &LatticeBasis) -> Vec<Vec<i64>> {
        match b.rows() {
            Rows::Integer(r) => r.clone(),
            Rows::Real(_) => panic!("expected integer rows"),
        }
    }

    #[test]
    fn kernel_of_pair() {
        let b = kernel_lattice(&v(&[2, 3])).unwrap();
        let rows = int_rows(&b);
        assert_eq!(rows.len(), 1);
        assert!(rows[0] == vec![3, -2] || rows[0] == vec![-3, 2]);
        assert!((b.det() - 13f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kernel_of_ones() {
        let b = kernel_lattice(&v(&[1, 1, 1])).unwrap();
        assert_eq!(b.exact_gram_det(), Some(3));
        for row in int_rows(&b) {
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn kernel_det_is_norm_and_orthogonal() {
        for c in [[6u64, 10, 15, 1], [3, 5, 7, 11], [1000, 999, 17, 3], [97, 89, 83, 79]] {
            let a = v(&c);
            let b = kernel_lattice(&a).unwrap();
            assert_eq!(b.exact_gram_det(), Some(a.norm_sq() as i128));
            for row in int_rows(&b) {
                let dot: i64 = row.iter().zip(&c).map(|(x, &y)| x * y as i64).sum();
                assert_eq!(dot, 0);
            }
            let p = v(&[c[3], c[1], c[0], c[2]]);
            assert!((kernel_lattice(&p).unwrap().det() - b.det()).abs() < 1e-9 * b.det());
        }
    }

    #[test]
    fn lll_examples() {
        let id = LatticeBasis::from_integer_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(int_rows(&lll_reduce(&id, 0.99).unwrap()), vec![vec![1, 0], vec![0, 1]]);
        let skew = LatticeBasis::from_integer_rows(vec![vec![1, 0], vec![100, 1]]).unwrap();
        let red = lll_reduce(&skew, 0.99).unwrap();
        assert!(is_lll_reduced(&red, 0.99));
        for row in int_rows(&red) {
            assert!(row.iter().map(|x| x * x).sum::<i64>() <= 2);
        }
        assert_eq!(red.exact_gram_det(), skew.exact_gram_det());
        assert!(lll_reduce(&id, 0.2).is_err());
        assert!(lll_reduce(&id, 1.0).is_err());
    }

    #[test]
    fn dependent_rows_rejected() {
        assert!(LatticeBasis::from_integer_rows(vec![vec![1, 2], vec![2, 4]]).is_err());
        assert!(LatticeBasis::from_real_rows(vec![vec![1.0, 2.0], vec![0.5, 1.0]]).is_err());
        assert!(LatticeBasis::from_integer_rows(vec![vec![1, 0], vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn minima_examples() {
        let z2 = LatticeBasis::from_integer_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let m = successive_minima(&z2).unwrap();
        assert_eq!(m.lambdas, vec![1.0, 1.0]);
        assert_eq!(m.ratios, vec![1.0]);

        let rect = LatticeBasis::from_real_rows(vec![vec![2.0, 0.0], vec![0.0, 0.5]]).unwrap();
        let m = successive_minima(&rect).unwrap();
        assert!((m.lambdas[0] - 0.5).abs() < 1e-12 && (m.lambdas[1] - 2.0).abs() < 1e-12);
        assert!((m.ratios[0] - 4.0).abs() < 1e-12);

        let m = successive_minima(&kernel_lattice(&v(&[1, 1, 1])).unwrap()).unwrap();
        assert!((m.lambdas[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((m.lambdas[1] - 2f64.sqrt()).abs() < 1e-12);
        assert!((m.ratios[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_limit_and_budget() {
        let rows: Vec<Vec<i64>> = (0..7).map(|i| (0..7).map(|j| i64::from(i == j)).collect()).collect();
        let b = LatticeBasis::from_integer_rows(rows).unwrap();
        assert!(matches!(successive_minima(&b), Err(Error::Usage(_))));
        let z3 = LatticeBasis::from_integer_rows(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(matches!(successive_minima_with_budget(&z3, 2), Err(Error::Budget { .. })));
    }

    #[test]
    fn aliev_henk_examples() {
        for c in [[6u64, 10, 15], [3, 5, 7], [1, 1, 2]] {
            let check = check_aliev_henk(&v(&c)).unwrap();
            assert!(check.holds, "{c:?}: {check:?}");
        }
        assert!(check_aliev_henk(&v(&[2, 3])).is_err());
    }

    #[test]
    fn fundamental_domain_membership() {
        assert!(in_fundamental_domain(0.0, 1.0));
        assert!(!in_fundamental_domain(0.6, 0.9));
        assert!(!in_fundamental_domain(0.3, 0.9));
        assert!(in_fundamental_domain(0.5, 0.9));
        assert!(!in_fundamental_domain(-0.5, 0.9));
    }

    #[test]
    fn mu2_samples_are_unimodular_and_reproducible() {
        for i in 0..200 {
            let b = sample_mu2_indexed(11, i);
            assert!((b.det() - 1.0).abs() < 1e-9);
            let (x, y) = mu2_shape(11, i);
            assert!(in_fundamental_domain(x, y) || (x + 0.5).abs() < 1e-9, "{x} {y}");
        }
        assert_eq!(sample_mu2(5), sample_mu2(5));
        assert_ne!(sample_mu2(5), sample_mu2(6));
    }

    #[test]
    fn ratio_table_shape() {
        let t = ratio_statistics(4, 200, 200, 3).unwrap();
        assert_eq!(t.len(), 2 * RATIO_THRESHOLDS.len());
        for row in t.iter().filter(|r| r.r == 1.0) {
            assert_eq!(row.fraction, 1.0);
        }
        assert_eq!(t, ratio_statistics(4, 200, 200, 3).unwrap());
        assert!(ratio_statistics(6, 200, 10, 3).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((ball_volume(2) - PI).abs() < 1e-15);
        assert!((ball_volume(3) - 4.0 / 3.0 * PI).abs() < 1e-14);
    }
}
