//! Release acceptance report: one PASS/FAIL line per criterion, non-zero exit
//! if any fails. Runs the shipped experiment configs end to end.

mod common;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DVector;
use qas_core::chem::{build_electronic_hamiltonian, SectorSpectrum};
use qas_core::harness::{
    run_dynamics, run_lindep_report, run_resource_table, run_trotter_scan, run_variance_scan, DynamicsResult,
    ExperimentConfig, RunOptions,
};
use qas_core::resource::{crossover_threshold, heuristic_threshold, ScenarioParams};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, title: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} [{id:>2}] {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn load(name: &str) -> ExperimentConfig {
    let path = common::workspace_root().join("configs").join(format!("{name}.toml"));
    ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display())).0
}

fn opts(dir: &tempfile::TempDir, name: &str) -> RunOptions {
    let out: PathBuf = dir.path().join(name);
    RunOptions { out_dir: Some(out), ..Default::default() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

fn in_band(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn dynamics(name: &str, tmp: &tempfile::TempDir) -> (DynamicsResult, f64) {
    let cfg = load(name);
    let ((res, _), secs) = timed(|| run_dynamics(&cfg, &opts(tmp, name)).unwrap());
    (res, secs)
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().unwrap();
    let mut r = Report { failed: 0 };

    let (he, he_secs) = dynamics("he_dynamics", &tmp);
    let (h2, h2_secs) = dynamics("h2_dynamics", &tmp);

    // 1: exact-mode helium against the statevector oracle, plus an
    // independent dense-exponential check of the final populations.
    {
        let s = &he.summary;
        let pop_err = ["pop_1s", "pop_2s"].iter().map(|l| s.max_abs_error[*l]).fold(0.0, f64::max);
        let sys = common::helium();
        let dense_h = sys.h.to_dense();
        let t_end = *he.times.last().unwrap();
        let v = DVector::from_vec(common::dense_evolve(&dense_h, t_end, sys.psi0.amplitudes()));
        let dense_err = ["pop_1s", "pop_2s"]
            .iter()
            .map(|l| {
                let o = sys.obs.get(l).unwrap().to_dense();
                (v.dotc(&(&o * &v)).re - he.qas[*l].last().unwrap()).abs()
            })
            .fold(0.0, f64::max);
        r.line(
            1,
            "oracle equivalence, He exact mode",
            s.max_infidelity < 1e-8 && pop_err < 1e-6 && dense_err < 1e-6 && he_secs < 60.0,
            format!(
                "max infidelity {:.1e}, max population error {pop_err:.1e}, dense-expm final error {dense_err:.1e}, {} steps, run {he_secs:.1}s",
                s.max_infidelity, s.steps
            ),
        );
    }

    // 2 and 3: term counts and sector extremes from the fixtures.
    let he_ints = common::load("he_631g");
    let h2_ints = common::load("h2_631g_r1.4");
    let he_h = build_electronic_hamiltonian(&he_ints).unwrap();
    let h2_h = build_electronic_hamiltonian(&h2_ints).unwrap();
    r.line(
        2,
        "Pauli term counts",
        he_h.len() == 27 && h2_h.len() == 185,
        format!("He {} (want 27), H2 {} (want 185)", he_h.len(), h2_h.len()),
    );
    let he_spec = SectorSpectrum::new(&he_h, common::SECTOR).unwrap();
    let h2_spec = SectorSpectrum::new(&h2_h, common::SECTOR).unwrap();
    let ext = |s: &SectorSpectrum| (s.eigenvalue(0).unwrap(), s.eigenvalue(-1).unwrap());
    let (he_lo, he_hi) = ext(&he_spec);
    let (h2_lo, h2_hi) = ext(&h2_spec);
    let spec_ok = (he_lo + 2.87).abs() < 0.01
        && (he_hi - 0.609).abs() < 0.01
        && (h2_lo + 1.15).abs() < 0.01
        && (h2_hi - 1.93).abs() < 0.01;
    r.line(
        3,
        "sector spectrum extremes within 0.01 Ha",
        spec_ok,
        format!("He {he_lo:.4} / {he_hi:.4}, H2 {h2_lo:.4} / {h2_hi:.4}"),
    );

    // 4: dominant population frequency of the exact-mode series.
    {
        let tol = 2.0 * PI / 4.0;
        let freq = |res: &DynamicsResult, l: &str| res.summary.frequency_qas[l].unwrap_or(f64::NAN);
        let he_f = [freq(&he, "pop_1s"), freq(&he, "pop_2s")];
        let h2_f = [freq(&h2, "pop_1sigma"), freq(&h2, "pop_2sigma_star")];
        let ok = he_f.iter().all(|f| (f - 0.554).abs() <= tol) && h2_f.iter().all(|f| (f - 0.490).abs() <= tol);
        r.line(
            4,
            "population frequency within 2pi/T",
            ok,
            format!(
                "He {:.4} / {:.4} (0.554), H2 {:.4} / {:.4} (0.490), tolerance {tol:.3}",
                he_f[0], he_f[1], h2_f[0], h2_f[1]
            ),
        );
    }

    // 5: energy conservation and sampled energy spread.
    {
        let drift = he.summary.energy_drift_relative.max(h2.summary.energy_drift_relative);
        let sd = he.summary.energy_max_fractional_sd.unwrap_or(f64::NAN);
        r.line(
            5,
            "energy conservation and He sampled energy sd",
            drift < 1e-8 && in_band(sd, 0.002, 0.03),
            format!("exact relative drift {drift:.1e}, He E_total fractional sd {:.2}% (band 0.2-3%)", 100.0 * sd),
        );
    }

    // 6: shot-noise population bands.
    {
        let he_sd = ["pop_1s", "pop_2s"].map(|l| he.summary.max_fractional_sd[l]);
        let h2_sd = ["pop_1sigma", "pop_2sigma_star"].map(|l| h2.summary.max_fractional_sd[l]);
        let ok = he_sd.iter().all(|&s| in_band(s, 0.02, 0.08))
            && h2_sd.iter().all(|&s| in_band(s, 0.03, 0.10))
            && he_secs < 600.0
            && h2_secs < 600.0;
        r.line(
            6,
            "sampled population fractional sd",
            ok,
            format!(
                "He 1s {:.2}% 2s {:.2}% (2-8%), H2 1sigma {:.2}% 2sigma* {:.2}% (3-10%), {} samples in {he_secs:.1}s / {h2_secs:.1}s",
                100.0 * he_sd[0],
                100.0 * he_sd[1],
                100.0 * h2_sd[0],
                100.0 * h2_sd[1],
                he.summary.samples.unwrap_or(0)
            ),
        );
    }

    // 7: variance against shots.
    {
        let cfg = load("he_variance_scan");
        let (res, _) = run_variance_scan(&cfg, &opts(&tmp, "variance")).unwrap();
        let slopes: Vec<(String, f64)> = res
            .slopes
            .iter()
            .filter(|(l, _)| l.starts_with("pop_"))
            .map(|(l, s)| (l.clone(), s.unwrap_or(f64::NAN)))
            .collect();
        let ok = !slopes.is_empty() && slopes.iter().all(|(_, s)| (s + 1.0).abs() <= 0.1);
        let detail = slopes.iter().map(|(l, s)| format!("{l} {s:.3}")).collect::<Vec<_>>().join(", ");
        r.line(7, "population variance slope -1 +- 0.1", ok, format!("{detail} over N_s {:?}", res.shots));
    }

    // 8: crossover thresholds and the configured scenario.
    {
        let p = ScenarioParams { n: 2, l: 27.0, t_total: 4.0, dt: 0.001, gamma: 6.0, epsilon: 1e-3 };
        let cross = crossover_threshold(&p);
        let heur = heuristic_threshold(2);
        let cfg = load("he_resource_table");
        let (res, _) = run_resource_table(&cfg, &opts(&tmp, "resource")).unwrap();
        let at_4000: Vec<f64> = res.rows.iter().filter(|row| row.steps == 4000).map(|row| row.ratio_bound).collect();
        let worst = at_4000.iter().cloned().fold(f64::INFINITY, f64::min);
        let ok = cross == 383.0 && heur == 400 && !at_4000.is_empty() && worst > 1.0;
        r.line(
            8,
            "resource crossover",
            ok,
            format!(
                "crossover {cross}, heuristic {heur}, smallest standard/QAS ratio at 4000 steps {worst:.2} over {} algorithms",
                at_4000.len()
            ),
        );
    }

    // 9: overlap singularity at the gap period.
    {
        let cfg = load("he_lindep_report");
        let (res, _) = run_lindep_report(&cfg, &opts(&tmp, "lindep")).unwrap();
        let gap = res.eigengaps[0];
        let at_period = res.cases.iter().find(|c| (c.parameter_times[1] - 2.0 * PI / gap).abs() < 1e-12);
        let at_half = res.cases.iter().find(|c| c.parameter_times[1] == 0.5);
        let ok = matches!((at_period, at_half), (Some(a), Some(b))
            if a.report.singular && a.report.determinant < a.report.rel_cutoff && b.report.passes());
        let det = |c: Option<&qas_core::harness::runs::LindepCase>| c.map_or(f64::NAN, |c| c.report.determinant);
        r.line(
            9,
            "linear-independence diagnostics",
            ok,
            format!(
                "gap {gap:.4}, det F at s1 = 2pi/gap = {:.2} is {:.1e}; at s1 = 0.5 is {:.3}",
                2.0 * PI / gap,
                det(at_period),
                det(at_half)
            ),
        );
    }

    // 10: Trotterized basis.
    {
        let cfg = load("he_trotter_scan");
        let (res, _) = run_trotter_scan(&cfg, &opts(&tmp, "trotter")).unwrap();
        let clean = res.curve(None);
        let noisy = res.curve(Some(10_000));
        let monotone = clean.len() == 5 && clean.windows(2).all(|w| w[1].1 <= w[0].1);
        let at = |c: &[(usize, f64)], s: usize| c.iter().find(|x| x.0 == s).map_or(f64::NAN, |x| x.1);
        let (i3, i4) = (at(&noisy, 1000), at(&noisy, 10_000));
        let plateau = i4 > 0.0 && i3 > 0.0 && i4 / i3 <= 2.0 && i3 / i4 <= 2.0;
        let clean_str = clean.iter().map(|(_, v)| format!("{v:.1e}")).collect::<Vec<_>>().join(" ");
        r.line(
            10,
            "Trotter infidelity monotone and plateau",
            monotone && plateau,
            format!("noiseless {clean_str}; N_s=1e4 at 1e3 / 1e4 steps {i3:.3e} / {i4:.3e}"),
        );
    }

    // 11: property suites with a fixed generator seed.
    {
        let start = Instant::now();
        let mut failures = Vec::new();
        let suites = common::suites();
        for (name, prop, cases) in &suites {
            let mut runner = common::runner(*cases, true);
            if let Err(e) = prop(&mut runner) {
                failures.push(format!("{name}: {e}"));
            }
        }
        let secs = start.elapsed().as_secs_f64();
        let detail = if failures.is_empty() {
            format!("{} suites passed in {secs:.1}s", suites.len())
        } else {
            failures.join("; ")
        };
        r.line(11, "property suites", failures.is_empty() && secs < 300.0, detail);
    }

    println!("acceptance: {} of 11 criteria passed", 11 - r.failed);
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
