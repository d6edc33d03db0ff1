//! Named verification suites for `frobdist verify`. Each is a reduced-size
//! version of the corresponding acceptance check and finishes in seconds.

use frobdist::analytic::{psi3_middle_branch, psi3_tail, psi3_tail_sorted, psi3_total_mass, psi3_upper_branch, tail_c3};
use frobdist::coprime::{cutoff_radius, fsineq_rhs, gcd_vector, schur_bound};
use frobdist::frobenius::{frobenius_dp_oracle, sylvester};
use frobdist::lattice::{check_aliev_henk, sample_mu2_indexed};
use frobdist::simplex::{covering_radius_2d, mc_volume_k, mc_width_integral};
use frobdist::statistics::{concentration_fraction, empirical_psi, ks_distance_tabulated, run_sweep, RunOptions};
use frobdist::{analytic, frobenius, CoprimeVector, ExperimentConfig, LatticeBasis, NormalizationKind, Result};
use serde::Serialize;

pub const SUITES: [&str; 8] = [
    "sylvester",
    "oracle",
    "inequalities",
    "constants",
    "psi3",
    "ks",
    "cover",
    "concentration",
];

#[derive(Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

pub fn run(name: &str, options: RunOptions) -> Result<Option<SuiteReport>> {
    let mut r = SuiteReport {
        suite: name.to_string(),
        ..Default::default()
    };
    match name {
        "sylvester" => sylvester_suite(&mut r)?,
        "oracle" => oracle_suite(&mut r)?,
        "inequalities" => inequalities_suite(&mut r, options)?,
        "constants" => constants_suite(&mut r)?,
        "psi3" => psi3_suite(&mut r),
        "ks" => ks_suite(&mut r, options)?,
        "cover" => cover_suite(&mut r)?,
        "concentration" => concentration_suite(&mut r, options)?,
        _ => return Ok(None),
    }
    r.passed = r.failures.is_empty();
    Ok(Some(r))
}

fn sylvester_suite(r: &mut SuiteReport) -> Result<()> {
    for a1 in 2..=200u64 {
        for a2 in 2..=200u64 {
            if gcd_vector(&[a1, a2])? != 1 {
                continue;
            }
            let res = frobenius(&CoprimeVector::new(vec![a1, a2])?)?;
            r.check(res.f == (a1 * a2) as i64 && res.g == sylvester(a1, a2)?, || {
                format!("({a1}, {a2}): f = {}", res.f)
            });
        }
    }
    Ok(())
}

fn oracle_suite(r: &mut SuiteReport) -> Result<()> {
    for (d, top) in [(3usize, 30u64), (4, 12)] {
        let mut c = vec![1u64; d];
        loop {
            if gcd_vector(&c)? == 1 {
                let a = CoprimeVector::new(c.clone())?;
                let g = frobenius(&a)?.g;
                let oracle = frobenius_dp_oracle(&a, schur_bound(&a).max(0))?;
                r.check(g == oracle, || format!("{c:?}: engine {g}, oracle {oracle}"));
            }
            let mut k = 0;
            while k < d && c[k] == top {
                c[k] = 1;
                k += 1;
            }
            if k == d {
                break;
            }
            c[k] += 1;
        }
    }
    Ok(())
}

fn inequalities_suite(r: &mut SuiteReport, options: RunOptions) -> Result<()> {
    for d in [3usize, 4, 5] {
        let cfg = ExperimentConfig::new(d, 10_000, 2_000, 600 + d as u64);
        let sweep = run_sweep(&cfg, options)?;
        let floor = analytic::support_min(d);
        for rec in &sweep.records {
            let a = CoprimeVector::new(rec.a.clone())?;
            let res = rec.result;
            r.check(res.g <= schur_bound(&a), || format!("Schur bound fails for {:?}", rec.a));
            r.check(res.norm_s < fsineq_rhs(&a), || format!("f/s bound fails for {:?}", rec.a));
            r.check(res.norm_prod > floor, || format!("support floor fails for {:?}", rec.a));
            let ah = check_aliev_henk(&a)?;
            r.check(ah.holds, || {
                format!("kernel-lattice bound fails for {:?}: {} > {}", rec.a, ah.lhs, ah.rhs)
            });
        }
        for kind in [NormalizationKind::ProdPower, NormalizationKind::SOfA] {
            let mut s = sweep.clone();
            s.config.normalization = kind;
            let cut = cutoff_radius(kind, cfg.t as f64, cfg.domain.sup_norm(d), d)?;
            let above = empirical_psi(&s.distribution(), cut);
            r.check(above == 0.0, || {
                format!("d = {d}, {kind:?}: {above} of samples beyond the cutoff {cut}")
            });
        }
    }
    Ok(())
}

fn constants_suite(r: &mut SuiteReport) -> Result<()> {
    for n in 2..=5usize {
        let w = mc_width_integral(n, 1_000_000, 500 + n as u64)?;
        let k = mc_volume_k(n, 1_000_000, 600 + n as u64)?;
        let (we, ke) = ((n * (n + 1)) as f64 / 2.0, (n + 1) as f64);
        r.check((w / we - 1.0).abs() <= 0.01, || format!("n = {n}: width integral {w} vs {we}"));
        r.check((k / ke - 1.0).abs() <= 0.015, || format!("n = {n}: vol(K) {k} vs {ke}"));
        r.notes.push(format!("n = {n}: width integral {w:.5}, vol(K) {k:.5}"));
    }
    Ok(())
}

fn psi3_suite(r: &mut SuiteReport) {
    let sqrt3 = 3f64.sqrt();
    let mass = psi3_total_mass();
    r.check((mass - 1.0).abs() <= 1e-6, || format!("total mass {mass}"));
    r.check(psi3_middle_branch(sqrt3).abs() <= 1e-9, || "density jumps at sqrt(3)".into());
    let jump = (psi3_middle_branch(2.0) - psi3_upper_branch(2.0)).abs();
    r.check(jump <= 1e-9, || format!("density jumps by {jump} at 2"));
    r.check(psi3_tail(sqrt3) == 1.0, || "Psi3(sqrt 3) != 1".into());
    r.check(psi3_tail(1.5) == 1.0, || "Psi3(1.5) != 1".into());
    let rel = ((psi3_tail(100.0) * 1e4 - tail_c3()) / tail_c3()).abs();
    r.check(rel <= 3e-4, || format!("relative tail error {rel} at R = 100"));
}

fn ks_suite(r: &mut SuiteReport, options: RunOptions) -> Result<()> {
    let dist = run_sweep(&ExperimentConfig::new(3, 100_000, 20_000, 42), options)?.distribution();
    let cdf: Vec<f64> = psi3_tail_sorted(dist.values())?.into_iter().map(|t| 1.0 - t).collect();
    let ks = ks_distance_tabulated(&dist, &cdf)?;
    r.check(ks <= 0.03, || format!("KS distance {ks} above 0.03"));
    r.notes.push(format!("KS distance {ks:.5} over 20000 samples at T = 100000"));
    Ok(())
}

fn cover_suite(r: &mut SuiteReport) -> Result<()> {
    let tol = 1e-3;
    let z2 = covering_radius_2d(&LatticeBasis::from_real_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]])?, tol)?;
    r.check(z2.contains(2.0), || format!("Z^2 bracket {z2:?} misses 2"));
    let rect = covering_radius_2d(&LatticeBasis::from_real_rows(vec![vec![2.0, 0.0], vec![0.0, 0.5]])?, tol)?;
    r.check(rect.contains(2.5), || format!("rectangular bracket {rect:?} misses 2.5"));
    for i in 0..500 {
        let c = covering_radius_2d(&sample_mu2_indexed(8, i), tol)?;
        r.check(c.lo >= 3f64.sqrt() - tol, || {
            format!("lattice {i}: lower bracket {} below sqrt(3)", c.lo)
        });
    }
    Ok(())
}

fn concentration_suite(r: &mut SuiteReport, options: RunOptions) -> Result<()> {
    let alpha = analytic::constants().concentration_alpha();
    let mut prev = 0.0;
    for d in [4usize, 5, 6] {
        let dist = run_sweep(&ExperimentConfig::new(d, 100_000, 5_000, 110 + d as u64), options)?.distribution();
        let f = concentration_fraction(&dist, alpha)?;
        r.check(f >= prev, || format!("fraction drops to {f} at d = {d}"));
        r.notes.push(format!("d = {d}: fraction {f:.4}"));
        prev = f;
    }
    Ok(())
}
