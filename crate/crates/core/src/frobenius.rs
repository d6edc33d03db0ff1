//! Exact Frobenius numbers.
//!
//! The production engine builds the residue table (Apéry set) of the
//! semigroup modulo its smallest generator with the round-robin schedule: each
//! further generator is folded in by walking the cycles it induces on
//! `Z/a_min`. A Dijkstra variant over the same residue graph and a plain
//! boolean dynamic program serve as independent cross-checks.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::coprime::{prod_norm_factor, s_norm, schur_bound, CoprimeVector, DEFAULT_MAGNITUDE_CAP};
use crate::{Error, Result};

/// Largest bound accepted by [`frobenius_dp_oracle`].
pub const DP_ORACLE_MAX_BOUND: i64 = 10_000_000;

const UNREACHED: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusResult {
    /// Largest integer not a non-negative combination; -1 if there is none.
    pub g: i64,
    /// g + Σ a_i, the largest integer not a positive combination.
    pub f: i64,
    /// f / (a_1 ··· a_d)^{1/(d-1)}
    pub norm_prod: f64,
    /// f / s(a)
    pub norm_s: f64,
}

/// Residue-table construction strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    RoundRobin,
    Dijkstra,
}

/// Least representable integer in each residue class modulo the smallest
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueTable {
    modulus: u64,
    entries: Vec<u64>,
}

impl ResidueTable {
    /// Builds the table for the given generators with the selected engine.
    /// The modulus is the smallest generator (first occurrence on ties).
    pub fn build(coeffs: &[u64], engine: Engine) -> Self {
        let modulus = *coeffs.iter().min().expect("non-empty generator list");
        let mut others: Vec<u64> = coeffs.iter().copied().filter(|&c| c % modulus != 0).collect();
        others.sort_unstable();
        others.dedup();
        let entries = match engine {
            Engine::RoundRobin => round_robin(modulus, &others),
            Engine::Dijkstra => dijkstra(modulus, &others),
        };
        Self { modulus, entries }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Entry `r`, or `None` if no representable integer is ≡ r.
    pub fn entry(&self, r: usize) -> Option<u64> {
        match self.entries[r] {
            UNREACHED => None,
            e => Some(e),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest entry, or `None` if some residue class is unreachable
    /// (which happens exactly when the generators are not coprime).
    pub fn max_entry(&self) -> Option<u64> {
        let m = *self.entries.iter().max()?;
        (m != UNREACHED).then_some(m)
    }
}

fn round_robin(modulus: u64, others: &[u64]) -> Vec<u64> {
    let m = modulus as usize;
    let mut table = vec![UNREACHED; m];
    table[0] = 0;
    for &a in others {
        let step = (a % modulus) as usize;
        let d = modulus.gcd(&a) as usize;
        let cycle = m / d;
        for p in 0..d {
            let mut best = (p..m).step_by(d).map(|q| table[q]).min().unwrap_or(UNREACHED);
            if best == UNREACHED {
                continue;
            }
            let mut r = (best % modulus) as usize;
            for _ in 1..cycle {
                best += a;
                r += step;
                if r >= m {
                    r -= m;
                }
                best = best.min(table[r]);
                table[r] = best;
            }
        }
    }
    table
}

fn dijkstra(modulus: u64, others: &[u64]) -> Vec<u64> {
    let m = modulus as usize;
    let mut table = vec![UNREACHED; m];
    table[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, 0usize)));
    while let Some(Reverse((dist, r))) = heap.pop() {
        if dist > table[r] {
            continue;
        }
        for &a in others {
            let next = dist + a;
            let s = (next % modulus) as usize;
            if next < table[s] {
                table[s] = next;
                heap.push(Reverse((next, s)));
            }
        }
    }
    table
}

/// Frobenius engine with a memory budget on the residue-table size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSolver {
    pub max_modulus: u64,
    pub engine: Engine,
}

impl Default for FrobeniusSolver {
    fn default() -> Self {
        Self {
            max_modulus: DEFAULT_MAGNITUDE_CAP,
            engine: Engine::RoundRobin,
        }
    }
}

impl FrobeniusSolver {
    pub fn with_engine(engine: Engine) -> Self {
        Self { engine, ..Self::default() }
    }

    /// g(a) alone.
    pub fn frobenius_g(&self, a: &CoprimeVector) -> Result<i64> {
        let a_min = a.min();
        if a_min == 1 {
            return Ok(-1);
        }
        if a_min > self.max_modulus {
            return Err(Error::Capacity {
                coefficient: a_min,
                limit: self.max_modulus,
            });
        }
        let table = ResidueTable::build(a.coeffs(), self.engine);
        let top = table.max_entry().ok_or_else(|| Error::usage("coefficients are not coprime"))?;
        i64::try_from(top)
            .map(|t| t - a_min as i64)
            .map_err(|_| Error::Overflow("residue table entry"))
    }

    pub fn solve(&self, a: &CoprimeVector) -> Result<FrobeniusResult> {
        let g = self.frobenius_g(a)?;
        let sum = i64::try_from(a.sum()).map_err(|_| Error::Overflow("coefficient sum"))?;
        let f = g.checked_add(sum).ok_or(Error::Overflow("f = g + sum"))?;
        Ok(FrobeniusResult {
            g,
            f,
            norm_prod: f as f64 / prod_norm_factor(a),
            norm_s: f as f64 / s_norm(a),
        })
    }
}

/// g(a), f(a) and both normalizations with the default engine and budget.
pub fn frobenius(a: &CoprimeVector) -> Result<FrobeniusResult> {
    FrobeniusSolver::default().solve(a)
}

/// Boolean dynamic program over `[0, bound]`: returns the largest integer in
/// that range with no non-negative representation, or -1 if there is none.
///
/// Sound only when `bound` is at least the Schur bound, which is enforced.
pub fn frobenius_dp_oracle(a: &CoprimeVector, bound: i64) -> Result<i64> {
    let schur = schur_bound(a);
    if bound < schur {
        return Err(Error::usage(format!("oracle bound {bound} is below the Schur bound {schur}")));
    }
    if !(0..=DP_ORACLE_MAX_BOUND).contains(&bound) {
        return Err(Error::usage(format!("oracle bound {bound} outside [0, {DP_ORACLE_MAX_BOUND}]")));
    }
    let n = bound as usize;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for x in 1..=n {
        reach[x] = a.coeffs().iter().any(|&c| (c as usize) <= x && reach[x - c as usize]);
    }
    Ok(reach.iter().rposition(|&r| !r).map_or(-1, |i| i as i64))
}

/// Sylvester's closed form a1·a2 - a1 - a2 for a coprime pair.
pub fn sylvester(a1: u64, a2: u64) -> Result<i64> {
    if a1 == 0 || a2 == 0 {
        return Err(Error::usage("coefficients must be positive"));
    }
    if a1.gcd(&a2) != 1 {
        return Err(Error::usage(format!("{a1} and {a2} are not coprime")));
    }
    let (x, y) = (a1 as i128, a2 as i128);
    i64::try_from(x * y - x - y).map_err(|_| Error::Overflow("sylvester"))
}
