//! Verification suites run by the `verify` command.

use std::f64::consts::LN_2;

use infodens::bounds::{
    chain_report, cond_sd_leakage_bound, cond_sd_moment_bound, cond_tail_relaxations,
    leakage_ordering_check, sd_leakage_bound, sd_moment_bound, tail_relaxations, BoundId,
    BoundSpec, Setting,
};
use infodens::verify::{
    check_exp_inequality_standard_with, check_exp_inequality_subset_with, coverage, standard_grid,
    subset_grid, RandomInstances,
};
use infodens::{BoundResult, StandardSystem, SubsetSystem};
use serde::Serialize;

use crate::config::{ExperimentConfig, Fault, SettingDoc, Suite};
use crate::report::System;
use crate::{CliError, SCHEMA_VERSION};

/// Tolerance on the gap identities of the tail relaxations.
pub const GAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub schema_version: u32,
    pub suite: &'static str,
    pub checks: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub suite: &'static str,
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Default)]
pub struct VerifyOutcome {
    pub rows: Vec<SuiteRow>,
    pub failures: Vec<Failure>,
}

struct Named<T> {
    name: String,
    sys: T,
}

struct Instances {
    standard: Vec<Named<StandardSystem>>,
    subset: Vec<Named<SubsetSystem>>,
}

fn instances(cfg: &ExperimentConfig, random: u64) -> Result<Instances, CliError> {
    let mut out = Instances {
        standard: Vec::new(),
        subset: Vec::new(),
    };
    for (name, problem) in cfg.load_problems()? {
        for setting in [SettingDoc::Standard, SettingDoc::Subset] {
            let name = format!("{name} ({})", setting.as_str());
            match System::build(&problem, setting)? {
                System::Standard(sys) => out.standard.push(Named { name, sys }),
                System::Subset(sys) => out.subset.push(Named { name, sys }),
            }
        }
    }
    let r = RandomInstances::new(cfg.seed);
    for i in 0..random {
        let name = |setting| format!("random {setting} seed={} stream={i}", cfg.seed);
        out.standard.push(Named {
            name: name("standard"),
            sys: r.standard(i)?,
        });
        out.subset.push(Named {
            name: name("subset"),
            sys: r.subset(i)?,
        });
    }
    Ok(out)
}

struct Tally<'a> {
    out: &'a mut VerifyOutcome,
    suite: Suite,
    checks: usize,
    failures: usize,
}

impl<'a> Tally<'a> {
    fn new(out: &'a mut VerifyOutcome, suite: Suite) -> Self {
        Self {
            out,
            suite,
            checks: 0,
            failures: 0,
        }
    }

    fn check(&mut self, ok: bool, instance: &str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            self.out.failures.push(Failure {
                suite: self.suite.as_str(),
                instance: instance.to_string(),
                detail: detail(),
            });
        }
    }

    fn finish(self) {
        self.out.rows.push(SuiteRow {
            schema_version: SCHEMA_VERSION,
            suite: self.suite.as_str(),
            checks: self.checks,
            failures: self.failures,
        });
    }
}

/// Every bound of both settings, with the composed `gen:` variants,
/// expanded over the configured grids.
fn all_specs(cfg: &ExperimentConfig, setting: Setting) -> Vec<BoundSpec> {
    let mut base = Vec::new();
    for id in BoundId::ALL
        .into_iter()
        .filter(|id| id.setting() == setting)
    {
        let spec = BoundSpec::new(id);
        base.push(spec);
        if let Ok(g) = spec.to_gen() {
            base.push(g);
        }
    }
    cfg.expand(&base)
}

fn gap_ok(relaxed: &BoundResult, direct: &BoundResult, gap: f64) -> bool {
    let d = relaxed.value().powi(2) - direct.value().powi(2);
    (d - gap).abs() <= GAP_TOL
}

pub fn run(cfg: &ExperimentConfig) -> Result<VerifyOutcome, CliError> {
    let v = &cfg.verify;
    let mut out = VerifyOutcome::default();
    let suites = &v.suites;
    let main = instances(cfg, v.instances)?;

    if suites.contains(&Suite::ExpInequality) {
        let exp = instances(cfg, v.exp_instances)?;
        let mut t = Tally::new(&mut out, Suite::ExpInequality);
        for inst in &exp.standard {
            let mut sigma = inst.sys.loss().sigma();
            if v.fault == Some(Fault::SigmaQuarter) {
                sigma /= 4.0;
            }
            let r =
                check_exp_inequality_standard_with(&inst.sys, &standard_grid(&inst.sys), sigma)?;
            t.check(r.holds, &inst.name, || {
                format!("standard: worst {} at lambda {}", r.worst, r.worst_lambda)
            });
        }
        for inst in &exp.subset {
            let mut c = inst.sys.range_constant().value;
            if v.fault == Some(Fault::CQuarter) {
                c /= 4.0;
            }
            let r = check_exp_inequality_subset_with(&inst.sys, &subset_grid(&inst.sys), c)?;
            t.check(r.holds, &inst.name, || {
                format!("subset: worst {} at lambda {}", r.worst, r.worst_lambda)
            });
        }
        t.finish();
    }

    if suites.contains(&Suite::Coverage) {
        let mut t = Tally::new(&mut out, Suite::Coverage);
        let standard = all_specs(cfg, Setting::Standard);
        let subset = all_specs(cfg, Setting::Subset);
        for &delta in &cfg.deltas {
            for inst in &main.standard {
                for spec in &standard {
                    let r = coverage(&inst.sys, spec, delta)?;
                    t.check(r.holds, &inst.name, || {
                        format!(
                            "{} delta={delta}: violation {}",
                            r.bound_id, r.exact_violation_prob
                        )
                    });
                }
            }
            for inst in &main.subset {
                for spec in &subset {
                    let r = coverage(&inst.sys, spec, delta)?;
                    t.check(r.holds, &inst.name, || {
                        format!(
                            "{} delta={delta}: violation {}",
                            r.bound_id, r.exact_violation_prob
                        )
                    });
                }
            }
        }
        t.finish();
    }

    if suites.contains(&Suite::Chain) {
        let mut t = Tally::new(&mut out, Suite::Chain);
        for inst in &main.standard {
            for &delta in &cfg.deltas {
                let c = chain_report(&inst.sys, delta)?;
                t.check(c.chain_holds, &inst.name, || {
                    format!(
                        "L = {} , I_max = {}, I + M_inf = {}",
                        c.leakage, c.max_information, c.mi_plus_sup_deviation
                    )
                });
            }
        }
        t.finish();
    }

    if suites.contains(&Suite::Ordering) {
        let mut t = Tally::new(&mut out, Suite::Ordering);
        for inst in &main.subset {
            let o = leakage_ordering_check(&inst.sys)?;
            t.check(o.holds, &inst.name, || {
                format!("conditional {} > induced {}", o.conditional, o.induced)
            });
        }
        t.finish();
    }

    if suites.contains(&Suite::GapIdentity) {
        let mut t = Tally::new(&mut out, Suite::GapIdentity);
        for &delta in &cfg.deltas {
            for &order in &cfg.t {
                for inst in &main.standard {
                    let s = &inst.sys;
                    let sigma = s.loss().sigma();
                    let gap = 2.0 * sigma * sigma / s.n() as f64 * LN_2;
                    let (m, l) = tail_relaxations(s, delta, order)?;
                    let ok = gap_ok(&m, &sd_moment_bound(s, delta, order)?, gap)
                        && gap_ok(&l, &sd_leakage_bound(s, delta)?, gap);
                    t.check(ok, &inst.name, || format!("delta={delta} t={order}"));
                }
                for inst in &main.subset {
                    let s = &inst.sys;
                    let gap = 2.0 * s.range_constant().value / s.n() as f64 * LN_2;
                    let (m, l) = cond_tail_relaxations(s, delta, order)?;
                    let ok = gap_ok(&m, &cond_sd_moment_bound(s, delta, order)?, gap)
                        && gap_ok(&l, &cond_sd_leakage_bound(s, delta)?, gap);
                    t.check(ok, &inst.name, || format!("delta={delta} t={order}"));
                }
            }
        }
        t.finish();
    }

    Ok(out)
}
