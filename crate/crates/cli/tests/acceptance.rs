//! Acceptance criteria 1–9. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails.

use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use infodens::bounds::{
    avg_mi_bound, chain_report, cmi_avg_bound, cond_sd_leakage_bound, cond_sd_moment_bound,
    cond_tail_relaxations, leakage_ordering_check, sd_leakage_bound, sd_moment_bound,
    tail_relaxations, BoundId, BoundSpec, Setting,
};
use infodens::info::{
    alpha_mi, cond_alpha_mi, cond_maximal_leakage, cond_renyi_divergence, maximal_leakage,
    mutual_information, renyi_information,
};
use infodens::models::Problem;
use infodens::verify::{
    check_exp_inequality_standard, check_exp_inequality_subset, coverage, gaussian_mi_validation,
    hoeffding_check, hoeffding_tail, standard_grid, strong_converse_check, subset_grid,
    RandomInstances,
};
use infodens::{FiniteDistribution, Order, StandardSystem, SubsetSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;
const DELTAS: [f64; 3] = [0.3, 0.1, 0.05];

type Check = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn problem(name: &str) -> Problem {
    Problem::from_path(fixture(name)).unwrap()
}

struct Instances {
    standard: Vec<(String, StandardSystem)>,
    subset: Vec<(String, SubsetSystem)>,
}

/// INST-A/B/C in both settings followed by `random` seeded instances per
/// setting.
fn instances(random: u64) -> Instances {
    let mut out = Instances {
        standard: Vec::new(),
        subset: Vec::new(),
    };
    for f in ["inst_a.json", "inst_b.json", "inst_c.json"] {
        let p = problem(f);
        out.standard.push((f.to_string(), p.standard().unwrap()));
        out.subset.push((f.to_string(), p.subset().unwrap()));
    }
    let r = RandomInstances::new(SEED);
    for i in 0..random {
        out.standard
            .push((format!("random #{i}"), r.standard(i).unwrap()));
        out.subset
            .push((format!("random #{i}"), r.subset(i).unwrap()));
    }
    out
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exp_inequalities() -> Check {
    let start = Instant::now();
    let inst = instances(200);
    let mut worst: f64 = 0.0;
    for (name, s) in &inst.standard {
        let r = check_exp_inequality_standard(s, &standard_grid(s)).map_err(|e| e.to_string())?;
        worst = worst.max(r.worst);
        ensure(r.holds, || {
            format!("{name} standard: {} at λ={}", r.worst, r.worst_lambda)
        })?;
    }
    for (name, s) in &inst.subset {
        let r = check_exp_inequality_subset(s, &subset_grid(s)).map_err(|e| e.to_string())?;
        worst = worst.max(r.worst);
        ensure(r.holds, || {
            format!("{name} subset: {} at λ={}", r.worst, r.worst_lambda)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "worst {worst:.12} over {} systems in {elapsed:.2?}",
        inst.standard.len() + inst.subset.len()
    ))
}

fn average_soundness() -> Check {
    let inst = instances(200);
    for (name, s) in &inst.standard {
        let e = avg_mi_bound(s).unwrap().value();
        ensure(s.expected_gen().abs() <= e + 1e-12, || {
            format!("{name}: avg-mi {e} < |E gen|")
        })?;
    }
    for (name, s) in &inst.subset {
        let e = cmi_avg_bound(s).unwrap().value();
        ensure(s.expected_gen().abs() <= e + 1e-12, || {
            format!("{name}: cmi-avg {e} < |E gen|")
        })?;
    }
    // ERM on INST-A is deterministic with P_W = (3/4, 1/4), so I(W; Z) = H(W)
    // and the bound is sqrt(2σ²/n · H(W)) with 2σ²/n = 1/4.
    let a = &inst.standard[0].1;
    let h = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
    let oracle = (0.25 * h).sqrt();
    let e = avg_mi_bound(a).unwrap().value();
    ensure((e - oracle).abs() <= 1e-9, || {
        format!("INST-A ε = {e}, oracle {oracle}")
    })?;
    ensure((e - 0.374945).abs() <= 5e-7, || format!("INST-A ε = {e}"))?;
    let truth = a.expected_gen();
    ensure((truth - 0.25).abs() <= 1e-9, || {
        format!("INST-A E[gen] = {truth}")
    })?;
    Ok(format!("INST-A ε = {e:.9} vs E[gen] = {truth:.9}"))
}

fn probabilistic_specs(setting: Setting) -> Vec<BoundSpec> {
    let mut out = Vec::new();
    for id in BoundId::ALL
        .into_iter()
        .filter(|id| id.setting() == setting && id.is_probabilistic())
    {
        let spec = BoundSpec::new(id);
        out.push(spec);
        if let Ok(g) = spec.to_gen() {
            out.push(g);
        }
        if id.uses_t() {
            out.push(spec.with_t(Order::Finite(1.0)));
            out.push(spec.with_t(Order::Infinite));
        }
        if id.uses_alpha() {
            out.push(spec.with_alpha(4.0));
        }
    }
    out
}

fn exact_coverage() -> Check {
    let inst = instances(50);
    let standard = probabilistic_specs(Setting::Standard);
    let subset = probabilistic_specs(Setting::Subset);
    let mut checks = 0;
    let mut worst_margin = f64::INFINITY;
    for &delta in &DELTAS {
        for (name, s) in &inst.standard {
            for spec in &standard {
                let r = coverage(s, spec, delta).map_err(|e| e.to_string())?;
                checks += 1;
                worst_margin = worst_margin.min(delta - r.exact_violation_prob);
                ensure(r.holds, || format!("{name}: {r:?}"))?;
            }
        }
        for (name, s) in &inst.subset {
            for spec in &subset {
                let r = coverage(s, spec, delta).map_err(|e| e.to_string())?;
                checks += 1;
                worst_margin = worst_margin.min(delta - r.exact_violation_prob);
                ensure(r.holds, || format!("{name}: {r:?}"))?;
            }
        }
    }
    Ok(format!(
        "{checks} coverage checks, smallest δ − P[violation] = {worst_margin:.3e}"
    ))
}

fn gap_identities() -> Check {
    let inst = instances(50);
    let mut worst: f64 = 0.0;
    for &delta in &DELTAS {
        for t in [Order::Finite(1.0), Order::Finite(2.0), Order::Infinite] {
            for (name, s) in &inst.standard {
                let sigma = s.loss().sigma();
                let gap = 2.0 * sigma * sigma / s.n() as f64 * LN_2;
                let (m, l) = tail_relaxations(s, delta, t).unwrap();
                let dm = m.value().powi(2) - sd_moment_bound(s, delta, t).unwrap().value().powi(2);
                let dl = l.value().powi(2) - sd_leakage_bound(s, delta).unwrap().value().powi(2);
                for d in [dm, dl] {
                    worst = worst.max((d - gap).abs());
                    ensure((d - gap).abs() <= 1e-12, || {
                        format!("{name} δ={delta} t={t}: {d} vs {gap}")
                    })?;
                }
            }
            for (name, s) in &inst.subset {
                let gap = 2.0 * s.range_constant().value / s.n() as f64 * LN_2;
                let (m, l) = cond_tail_relaxations(s, delta, t).unwrap();
                let dm =
                    m.value().powi(2) - cond_sd_moment_bound(s, delta, t).unwrap().value().powi(2);
                let dl =
                    l.value().powi(2) - cond_sd_leakage_bound(s, delta).unwrap().value().powi(2);
                for d in [dm, dl] {
                    worst = worst.max((d - gap).abs());
                    ensure((d - gap).abs() <= 1e-12, || {
                        format!("{name} δ={delta} t={t}: {d} vs {gap}")
                    })?;
                }
            }
        }
    }
    Ok(format!("largest deviation {worst:.3e}"))
}

fn inequality_chains() -> Check {
    let inst = instances(200);
    for (name, s) in &inst.standard {
        let c = chain_report(s, 0.1).unwrap();
        ensure(c.chain_holds, || format!("{name}: {c:?}"))?;
    }
    for (name, s) in &inst.subset {
        let o = leakage_ordering_check(s).unwrap();
        ensure(o.holds, || format!("{name}: {o:?}"))?;
    }
    let b = leakage_ordering_check(&inst.subset[1].1).unwrap();
    ensure(
        (b.conditional - LN_2).abs() <= 1e-12 && (b.induced - LN_2).abs() <= 1e-12,
        || format!("INST-B: {b:?}"),
    )?;
    Ok(format!(
        "INST-B: L(S→W|Z̃) = {:.12}, L(Z(S)→W) = {:.12}",
        b.conditional, b.induced
    ))
}

fn limits() -> Check {
    let inst = instances(50);
    let mut worst_kl: f64 = 0.0;
    for (name, s) in &inst.standard {
        let i = mutual_information(s).unwrap();
        for a in [1.0 - 1e-5, 1.0 + 1e-5] {
            let d = renyi_information(s, a).unwrap();
            worst_kl = worst_kl.max((d - i).abs());
            ensure((d - i).abs() <= 1e-5, || {
                format!("{name}: D_{a} = {d}, I = {i}")
            })?;
        }
    }
    let mut worst_leak: f64 = 0.0;
    for (name, s) in inst.standard.iter().take(3) {
        let gap = (alpha_mi(s, 1e4).unwrap() - maximal_leakage(s).unwrap()).abs();
        worst_leak = worst_leak.max(gap);
        ensure(gap <= 1e-3, || format!("{name}: |I_1e4 − L| = {gap}"))?;
    }
    for (name, s) in inst.subset.iter().take(3) {
        let gap = (cond_alpha_mi(s, 1e4).unwrap() - cond_maximal_leakage(s).unwrap()).abs();
        worst_leak = worst_leak.max(gap);
        ensure(gap <= 1e-3, || format!("{name}: |I_1e4 − L| = {gap}"))?;
    }
    for (name, s) in &inst.subset {
        for a in [1.5, 2.0, 4.0, 16.0] {
            let mi = cond_alpha_mi(s, a).unwrap();
            let d = cond_renyi_divergence(s, a).unwrap();
            ensure(mi <= d + 1e-12, || format!("{name}: α={a}: {mi} > {d}"))?;
        }
    }
    Ok(format!(
        "Rényi→KL deviation {worst_kl:.3e}, α-MI→leakage deviation {worst_leak:.3e}"
    ))
}

fn gaussian_validation() -> Check {
    let start = Instant::now();
    let v = gaussian_mi_validation(4, 1.0, 1.0, 100_000, SEED).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure((v.closed_form - 0.5 * 1.25f64.ln()).abs() <= 1e-15, || {
        format!("{v:?}")
    })?;
    ensure(v.within_3se, || format!("{v:?}"))?;
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "estimate {:.6} ± {:.6} vs {:.6} (z = {:.2}) in {elapsed:.2?}",
        v.estimate, v.std_error, v.closed_form, v.z_score
    ))
}

fn lemmas() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let labels = ["a", "b", "c", "d", "e", "f"];
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let w: Vec<f64> = (0..labels.len())
            .map(|_| rng.random::<f64>() + 1e-3)
            .collect();
        let t: f64 = w.iter().sum();
        w.iter().map(|x| x / t).collect()
    };
    for _ in 0..1000 {
        let p = FiniteDistribution::from_probs(labels, &draw(&mut rng)).unwrap();
        let q = FiniteDistribution::from_probs(labels, &draw(&mut rng)).unwrap();
        let mask: u8 = rng.random_range(0..64);
        let gamma = rng.random_range(-3.0..3.0);
        let r = strong_converse_check(&p, &q, |a| mask >> a & 1 == 1, gamma).unwrap();
        ensure(r.holds, || format!("{r:?}"))?;
    }
    let inst = instances(50);
    for (name, s) in &inst.standard {
        let p = s.joint().to_distribution();
        let q = s.product_reference().to_distribution();
        let nx = s.n_samples();
        let event = |a: usize| s.gen(a / nx, a % nx).abs() > 0.3;
        for gamma in [0.0, 1.0, 3.0] {
            let r = strong_converse_check(&p, &q, event, gamma).unwrap();
            ensure(r.holds, || format!("{name} γ={gamma}: {r:?}"))?;
        }
        for w in 0..s.n_hypotheses() {
            for eps in [0.05, 0.2, 0.5] {
                let h = hoeffding_check(s, w, eps).unwrap();
                ensure(h.holds, || format!("{name} w={w} ε={eps}: {h:?}"))?;
            }
        }
    }
    let v = hoeffding_tail(0.5, 2, 0.5).unwrap();
    ensure(v == 2.0 * (-1f64).exp(), || {
        format!("hoeffding_tail(1/2, 2, 1/2) = {v}")
    })?;
    Ok(format!("hoeffding_tail(1/2, 2, 1/2) = {v}"))
}

fn cli_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_infodens");
    let status = Command::new(bin)
        .args(["verify", "--config"])
        .arg(fixture("verify_default.json"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.code() == Some(0), || {
        format!(
            "verify exited {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        )
    })?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("report{i}.csv"));
        let s = Command::new(bin)
            .args(["report", "--config"])
            .arg(fixture("report_inst_a.json"))
            .arg("--out")
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(s.success(), || format!("report exited {s}"))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || {
        "report output differs between runs".into()
    })?;
    Ok(format!(
        "verify exit 0; report {} bytes identical across runs",
        outputs[0].len()
    ))
}

type Criterion = (&'static str, fn() -> Check);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("exponential inequalities", exp_inequalities),
        ("soundness of average bounds", average_soundness),
        ("exact coverage", exact_coverage),
        ("gap identities", gap_identities),
        ("inequality chains", inequality_chains),
        ("limits", limits),
        ("gaussian validation", gaussian_validation),
        ("strong converse and hoeffding", lemmas),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {} FAIL {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
