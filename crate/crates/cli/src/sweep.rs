//! Families of systems run through the oracle and checked against the
//! dimension predictions.

use std::collections::BTreeMap;

use lindim::dimensions::EXHAUSTIVE_MAX_POINTS;
use lindim::{
    apolarity_dimension, effectivity, interpolation_dimension, linear_expected_dimension,
    n3_condition, virtual_dimension, ContainmentPolicy, DimensionReport, Effectivity, LinearSystem,
    OracleConfig,
};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{now, Cache, CacheKey, CacheRecord};
use crate::{CliError, Result, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PointCount {
    /// Every `s` in `lo..=hi`.
    Range { lo: usize, hi: usize },
    /// `s = from, from + 1, ...` up to and including the first empty system,
    /// never past `max`.
    UntilEmpty { from: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// `L_{n,d}(m^s)` over the given ranges.
    Homogeneous {
        n_range: (u32, u32),
        d_range: (u32, u32),
        m: u32,
        s: PointCount,
    },
    Explicit {
        systems: Vec<LinearSystem>,
    },
}

/// Which properties are asserted. A failed assertion is a violation and
/// makes the sweep exit with status 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    /// `dim >= vdim`.
    pub floor: bool,
    /// `ldim <= dim`.
    pub weak_conjecture: bool,
    /// `dim = ldim` for non-empty systems with `s <= n + 2`.
    pub few_points: bool,
    /// `dim = ldim` when the condition for `s >= n + 3` holds.
    pub n3_condition: bool,
    /// Interpolation and apolarity ranks agree (only when every `m <= d`).
    pub cross_oracle: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Checks {
            floor: true,
            weak_conjecture: true,
            few_points: true,
            n3_condition: true,
            cross_oracle: true,
        }
    }
}

impl Checks {
    pub fn none() -> Self {
        Checks {
            floor: false,
            weak_conjecture: false,
            few_points: false,
            n3_condition: false,
            cross_oracle: false,
        }
    }

    /// Comma-separated names, or `all` / `none`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut checks = Checks::none();
        for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "all" => checks = Checks::default(),
                "none" => checks = Checks::none(),
                "floor" => checks.floor = true,
                "weak-conjecture" => checks.weak_conjecture = true,
                "few-points" => checks.few_points = true,
                "n3-condition" => checks.n3_condition = true,
                "cross-oracle" => checks.cross_oracle = true,
                other => return Err(CliError::Spec(format!("unknown check `{other}`"))),
            }
        }
        Ok(checks)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub family: Family,
    pub checks: Checks,
    pub oracle: OracleConfig,
    pub policy: ContainmentPolicy,
    /// Worker threads; 0 uses the global pool.
    pub parallelism: usize,
}

impl SweepSpec {
    pub fn new(name: impl Into<String>, family: Family) -> Self {
        SweepSpec {
            name: name.into(),
            family,
            checks: Checks::default(),
            oracle: OracleConfig::default(),
            policy: ContainmentPolicy::default(),
            parallelism: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Spec(msg));
        match &self.family {
            Family::Homogeneous {
                n_range,
                d_range,
                m,
                s,
            } => {
                if n_range.0 == 0 || n_range.0 > n_range.1 {
                    return bad(format!(
                        "empty or invalid n range {}..={}",
                        n_range.0, n_range.1
                    ));
                }
                if d_range.0 > d_range.1 {
                    return bad(format!("empty d range {}..={}", d_range.0, d_range.1));
                }
                if *m == 0 {
                    return bad("multiplicity must be positive".into());
                }
                match *s {
                    PointCount::Range { lo, hi } if lo > hi => {
                        return bad(format!("empty s range {lo}..={hi}"))
                    }
                    PointCount::UntilEmpty { from, max } if from > max => {
                        return bad(format!("empty s range {from}..={max}"))
                    }
                    _ => {}
                }
            }
            Family::Explicit { systems } => {
                if systems.is_empty() {
                    return bad("explicit family has no systems".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub system: LinearSystem,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total: usize,
    pub computed: usize,
    pub reused: usize,
    pub counts: BTreeMap<String, usize>,
    /// `dim > edim`.
    pub special: Vec<LinearSystem>,
    pub linearly_special: Vec<LinearSystem>,
    pub violations: Vec<Violation>,
    /// Systems whose `ldim` depends on the containment policy.
    pub policy_disagreements: Vec<LinearSystem>,
    /// Unreadable cache lines.
    pub cache_skipped: usize,
}

enum Task {
    Fixed(Vec<LinearSystem>),
    UntilEmpty {
        n: u32,
        d: u32,
        m: u32,
        from: usize,
        max: usize,
    },
}

fn tasks(family: &Family) -> Result<Vec<Task>> {
    let mut out = Vec::new();
    match family {
        Family::Homogeneous {
            n_range,
            d_range,
            m,
            s,
        } => {
            for n in n_range.0..=n_range.1 {
                for d in d_range.0..=d_range.1 {
                    match *s {
                        PointCount::Range { lo, hi } => out.push(Task::Fixed(
                            (lo..=hi)
                                .map(|s| LinearSystem::new(n, d, vec![*m; s]))
                                .collect::<lindim::Result<_>>()?,
                        )),
                        PointCount::UntilEmpty { from, max } => out.push(Task::UntilEmpty {
                            n,
                            d,
                            m: *m,
                            from,
                            max,
                        }),
                    }
                }
            }
        }
        Family::Explicit { systems } => {
            out.extend(systems.iter().map(|s| Task::Fixed(vec![s.clone()])));
        }
    }
    Ok(out)
}

fn wants_apolarity(sys: &LinearSystem, checks: &Checks) -> bool {
    checks.cross_oracle && sys.mults().iter().all(|&m| m <= sys.d())
}

/// The cached record when it has everything this sweep asks for, else a
/// fresh one.
fn evaluate(sys: &LinearSystem, spec: &SweepSpec, cache: &Cache) -> Result<(CacheRecord, bool)> {
    let key = CacheKey::new(sys, &spec.oracle, spec.policy);
    let apolarity = wants_apolarity(sys, &spec.checks);
    if let Some(rec) = cache.get(&key) {
        if !apolarity || rec.apolarity.is_some() {
            return Ok((rec.clone(), true));
        }
    }
    let oracle = interpolation_dimension(sys, &spec.oracle)?;
    let apolarity = if apolarity {
        Some(apolarity_dimension(sys, &spec.oracle)?)
    } else {
        None
    };
    let report = DimensionReport::new(sys, spec.policy, Some(oracle.dim));
    let rec = CacheRecord {
        system: sys.clone(),
        config: spec.oracle,
        policy: spec.policy,
        report,
        oracle,
        apolarity,
        version: VERSION.to_string(),
        timestamp: now(),
    };
    Ok((rec, false))
}

fn run_task(task: &Task, spec: &SweepSpec, cache: &Cache) -> Result<Vec<(CacheRecord, bool)>> {
    match task {
        Task::Fixed(list) => list.iter().map(|s| evaluate(s, spec, cache)).collect(),
        Task::UntilEmpty { n, d, m, from, max } => {
            let mut out = Vec::new();
            for s in *from..=*max {
                let sys = LinearSystem::new(*n, *d, vec![*m; s])?;
                let (rec, reused) = evaluate(&sys, spec, cache)?;
                let empty = rec.oracle.dim < 0;
                out.push((rec, reused));
                if empty {
                    break;
                }
            }
            Ok(out)
        }
    }
}

pub fn check_record(rec: &CacheRecord, checks: &Checks) -> Vec<Violation> {
    let sys = &rec.system;
    let dim = BigInt::from(rec.oracle.dim);
    let mut out = Vec::new();
    let mut fail = |check: &str, detail: String| {
        out.push(Violation {
            system: sys.clone(),
            check: check.into(),
            detail,
        })
    };
    let vdim = &rec.report.vdim;
    let ldim = &rec.report.ldim;
    if checks.floor && &dim < vdim {
        fail("floor", format!("dim {dim} < vdim {vdim}"));
    }
    if checks.weak_conjecture && ldim > &dim {
        fail("weak-conjecture", format!("ldim {ldim} > dim {dim}"));
    }
    if checks.few_points && sys.s() <= sys.n() as usize + 2 {
        let expected = match effectivity(sys) {
            Effectivity::Nonempty => Some(ldim.clone()),
            Effectivity::Empty => Some(BigInt::from(-1)),
            Effectivity::Unknown => None,
        };
        if let Some(e) = expected {
            if e != dim {
                fail("few-points", format!("dim {dim} != {e}"));
            }
        }
    }
    if checks.n3_condition {
        let c = n3_condition(sys);
        if c.in_scope && c.satisfied && &dim != ldim {
            fail("n3-condition", format!("dim {dim} != ldim {ldim}"));
        }
    }
    if checks.cross_oracle {
        if let Some(a) = &rec.apolarity {
            if a.dim != rec.oracle.dim {
                fail(
                    "cross-oracle",
                    format!("interpolation {} != apolarity {}", rec.oracle.dim, a.dim),
                );
            }
        }
    }
    out
}

fn policy_dependent(sys: &LinearSystem) -> bool {
    sys.s() <= EXHAUSTIVE_MAX_POINTS
        && linear_expected_dimension(sys, ContainmentPolicy::PointDeletion)
            != linear_expected_dimension(sys, ContainmentPolicy::Exhaustive)
}

/// Runs the sweep, appending fresh records to `cache`. Records come back
/// sorted by system.
pub fn run_sweep(spec: &SweepSpec, cache: &mut Cache) -> Result<(Vec<CacheRecord>, SweepSummary)> {
    spec.validate()?;
    let tasks = tasks(&spec.family)?;
    let shared: &Cache = cache;
    let run = || -> Result<Vec<Vec<(CacheRecord, bool)>>> {
        tasks
            .par_iter()
            .map(|t| run_task(t, spec, shared))
            .collect()
    };
    let groups = if spec.parallelism > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.parallelism)
            .build()
            .map_err(|e| CliError::Spec(e.to_string()))?
            .install(run)?
    } else {
        run()?
    };
    let mut all: Vec<(CacheRecord, bool)> = groups.into_iter().flatten().collect();
    all.sort_by(|a, b| a.0.system.cmp(&b.0.system));
    all.dedup_by(|a, b| a.0.system == b.0.system);

    let mut summary = SweepSummary {
        cache_skipped: cache.skipped,
        ..Default::default()
    };
    let mut records = Vec::with_capacity(all.len());
    for (rec, reused) in all {
        if reused {
            summary.reused += 1;
        } else {
            summary.computed += 1;
            cache.insert(rec.clone())?;
        }
        summary.total += 1;
        *summary
            .counts
            .entry(rec.report.classification.to_string())
            .or_default() += 1;
        if BigInt::from(rec.oracle.dim) > rec.report.edim {
            summary.special.push(rec.system.clone());
        }
        if rec.report.classification == lindim::Classification::LinearlySpecial {
            summary.linearly_special.push(rec.system.clone());
        }
        summary.violations.extend(check_record(&rec, &spec.checks));
        if policy_dependent(&rec.system) {
            summary.policy_disagreements.push(rec.system.clone());
        }
        records.push(rec);
    }
    Ok((records, summary))
}

/// `vdim` as a plain integer, for table rendering.
pub fn vdim_i64(sys: &LinearSystem) -> Option<i64> {
    i64::try_from(virtual_dimension(sys)).ok()
}

pub const PRESETS: &[&str] = &["triple-p3", "triple-p4", "triple-p5", "degree10-p3"];

/// The degree 10 systems in `P^3` with nine or ten points of multiplicity
/// up to 5.
pub fn degree10_systems() -> Vec<LinearSystem> {
    [
        "5x9",
        "5x8,4",
        "5x8,3,2",
        "5x8,3",
        "5x8,2,2",
        "5x8,2",
        "5x7,4,4,2",
        "5x7,4,3,3",
        "5x7,4,4",
    ]
    .iter()
    .map(|m| LinearSystem::parse(3, 10, m).expect("valid preset"))
    .collect()
}

pub fn preset(name: &str) -> Option<SweepSpec> {
    let triple = |n: u32, dmax: u32| Family::Homogeneous {
        n_range: (n, n),
        d_range: (3, dmax),
        m: 3,
        s: PointCount::UntilEmpty { from: 1, max: 256 },
    };
    let family = match name {
        "triple-p3" => triple(3, 8),
        "triple-p4" => triple(4, 6),
        "triple-p5" => triple(5, 6),
        "degree10-p3" => Family::Explicit {
            systems: degree10_systems(),
        },
        _ => return None,
    };
    Some(SweepSpec::new(name, family))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut spec = SweepSpec::new(
            "x",
            Family::Homogeneous {
                n_range: (2, 1),
                d_range: (1, 2),
                m: 1,
                s: PointCount::Range { lo: 1, hi: 2 },
            },
        );
        assert!(spec.validate().is_err());
        spec.family = Family::Explicit { systems: vec![] };
        assert!(spec.validate().is_err());
        for p in PRESETS {
            preset(p).unwrap().validate().unwrap();
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn check_parsing() {
        assert_eq!(Checks::parse("all").unwrap(), Checks::default());
        let c = Checks::parse("floor,n3-condition").unwrap();
        assert!(c.floor && c.n3_condition && !c.cross_oracle);
        assert!(Checks::parse("bogus").is_err());
    }

    #[test]
    fn until_empty_stops() {
        let spec = SweepSpec::new(
            "lines",
            Family::Homogeneous {
                n_range: (2, 2),
                d_range: (1, 1),
                m: 1,
                s: PointCount::UntilEmpty { from: 0, max: 10 },
            },
        );
        let (recs, summary) = run_sweep(&spec, &mut Cache::in_memory()).unwrap();
        let dims: Vec<i64> = recs.iter().map(|r| r.oracle.dim).collect();
        assert_eq!(dims, vec![2, 1, 0, -1]);
        assert!(summary.violations.is_empty());
        assert_eq!(summary.computed, 4);
    }
}
