//! Virtual, expected, linear virtual and linear expected dimensions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::baselocus::walk_subsets;
use crate::error::{Error, Result};
use crate::system::{bigint_json, binomial, LinearSystem};

/// `binom(n+d, n) - sum binom(n+m_i-1, n) - 1`.
pub fn virtual_dimension(sys: &LinearSystem) -> BigInt {
    sys.ambient_forms() - sys.conditions() - 1
}

pub fn expected_dimension(sys: &LinearSystem) -> BigInt {
    virtual_dimension(sys).max(BigInt::from(-1))
}

/// `sum_{I} (-1)^{|I|} binom(n + k_I - |I|, n) - 1` over all index sets,
/// the empty one contributing `binom(n+d, n)`.
///
/// Only index sets with `k_I >= |I|` contribute, and those are exactly what
/// the subset walk visits with unit penalty.
pub fn linear_virtual_dimension(sys: &LinearSystem) -> BigInt {
    let n = sys.n() as i64;
    let mut acc = sys.ambient_forms() - 1;
    walk_subsets(sys.mults(), sys.d(), 1, -1, usize::MAX, |idx, k| {
        let term = binomial(n + k - idx.len() as i64, n as u64);
        if idx.len() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    });
    acc
}

/// Which systems containing `L` are inspected for a negative linear virtual
/// dimension.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContainmentPolicy {
    /// Drop any sub-multiset of the points.
    #[default]
    PointDeletion,
    /// Lower every multiplicity to any value in `[0, m_i]`; only for at most
    /// `EXHAUSTIVE_MAX_POINTS` points, beyond which point deletion is used.
    Exhaustive,
}

pub const EXHAUSTIVE_MAX_POINTS: usize = 6;

impl fmt::Display for ContainmentPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContainmentPolicy::PointDeletion => "point-deletion",
            ContainmentPolicy::Exhaustive => "exhaustive",
        })
    }
}

impl FromStr for ContainmentPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "point-deletion" | "deletion" => Ok(ContainmentPolicy::PointDeletion),
            "exhaustive" => Ok(ContainmentPolicy::Exhaustive),
            _ => Err(Error::Parse(format!("unknown containment policy `{s}`"))),
        }
    }
}

/// A system containing `L` whose linear virtual dimension is negative, if
/// the policy finds one. `L` itself is tried first.
///
/// Every candidate has fewer conditions than `L`, so its virtual dimension
/// is at least `vdim(L)`; since `vdim <= lvdim`, candidates with
/// non-negative virtual dimension are skipped together with everything
/// below them.
pub fn negative_container(sys: &LinearSystem, policy: ContainmentPolicy) -> Option<LinearSystem> {
    if linear_virtual_dimension(sys).is_negative() {
        return Some(sys.clone());
    }
    if !virtual_dimension(sys).is_negative() {
        return None;
    }
    match policy {
        ContainmentPolicy::Exhaustive if sys.s() <= EXHAUSTIVE_MAX_POINTS => lowering_search(sys),
        _ => deletion_search(sys),
    }
}

fn deletion_search(sys: &LinearSystem) -> Option<LinearSystem> {
    // (value, count) groups; a sub-multiset keeps 0..=count of each
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &m in sys.mults() {
        match groups.last_mut() {
            Some((v, c)) if *v == m => *c += 1,
            _ => groups.push((m, 1)),
        }
    }
    let n = sys.n() as i64;
    let cond = |m: u32| binomial(n + m as i64 - 1, n as u64);
    let mut keep: Vec<usize> = groups.iter().map(|g| g.1).collect();
    let base = virtual_dimension(sys);
    let mut found = None;
    deletion_rec(sys, &groups, &cond, 0, base, &mut keep, true, &mut found);
    found
}

/// Walks sub-multisets by removing points group by group, stopping a branch
/// once the virtual dimension is non-negative.
#[allow(clippy::too_many_arguments)]
fn deletion_rec(
    sys: &LinearSystem,
    groups: &[(u32, usize)],
    cond: &impl Fn(u32) -> BigInt,
    g: usize,
    vdim: BigInt,
    keep: &mut Vec<usize>,
    is_full: bool,
    found: &mut Option<LinearSystem>,
) {
    if found.is_some() || !vdim.is_negative() {
        return;
    }
    if g == groups.len() {
        if is_full {
            return;
        }
        let cand = sys.with_mults(
            groups
                .iter()
                .zip(keep.iter())
                .flat_map(|(&(v, _), &k)| std::iter::repeat_n(v, k)),
        );
        if linear_virtual_dimension(&cand).is_negative() {
            *found = Some(cand);
        }
        return;
    }
    let (value, count) = groups[g];
    let step = cond(value);
    let mut v = vdim;
    for removed in 0..=count {
        keep[g] = count - removed;
        deletion_rec(
            sys,
            groups,
            cond,
            g + 1,
            v.clone(),
            keep,
            is_full && removed == 0,
            found,
        );
        if found.is_some() || !v.is_negative() {
            break;
        }
        v += &step;
    }
    keep[g] = count;
}

fn lowering_search(sys: &LinearSystem) -> Option<LinearSystem> {
    // non-increasing sequences dominated by the sorted multiplicities are
    // exactly the sorted lowerings
    let mut seen = HashSet::new();
    let mut cur = Vec::with_capacity(sys.s());
    lowering_rec(sys, &mut cur, &mut seen)
}

fn lowering_rec(
    sys: &LinearSystem,
    cur: &mut Vec<u32>,
    seen: &mut HashSet<Vec<u32>>,
) -> Option<LinearSystem> {
    let i = cur.len();
    if i == sys.s() {
        let cand = sys.with_mults(cur.iter().copied());
        if cand.mults() == sys.mults() || !seen.insert(cand.mults().to_vec()) {
            return None;
        }
        if virtual_dimension(&cand).is_negative() && linear_virtual_dimension(&cand).is_negative() {
            return Some(cand);
        }
        return None;
    }
    let cap = sys.mults()[i].min(cur.last().copied().unwrap_or(u32::MAX));
    for m in (0..=cap).rev() {
        cur.push(m);
        let hit = lowering_rec(sys, cur, seen);
        cur.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// `-1` when some containing system found by `policy` has negative linear
/// virtual dimension, `max(lvdim, -1)` otherwise.
pub fn linear_expected_dimension(sys: &LinearSystem, policy: ContainmentPolicy) -> BigInt {
    if negative_container(sys, policy).is_some() {
        return BigInt::from(-1);
    }
    linear_virtual_dimension(sys).max(BigInt::from(-1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    NonSpecial,
    LinearlyNonSpecialButSpecial,
    LinearlySpecial,
    Empty,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NonSpecial => "non-special",
            Classification::LinearlyNonSpecialButSpecial => "linearly-non-special-but-special",
            Classification::LinearlySpecial => "linearly-special",
            Classification::Empty => "empty",
        })
    }
}

/// Linear speciality takes precedence; an empty system that matches its
/// linear expected dimension is reported as `Empty`.
pub fn classify_values(edim: &BigInt, ldim: &BigInt, actual: i64) -> Classification {
    let actual = BigInt::from(actual);
    if &actual != ldim {
        Classification::LinearlySpecial
    } else if actual == BigInt::from(-1) {
        Classification::Empty
    } else if &actual == edim {
        Classification::NonSpecial
    } else {
        Classification::LinearlyNonSpecialButSpecial
    }
}

pub fn classify(
    sys: &LinearSystem,
    actual: i64,
    policy: ContainmentPolicy,
) -> Result<Classification> {
    if actual < -1 {
        return Err(Error::Precondition(format!(
            "actual dimension {actual} below -1"
        )));
    }
    Ok(classify_values(
        &expected_dimension(sys),
        &linear_expected_dimension(sys, policy),
        actual,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    #[serde(with = "bigint_json")]
    pub vdim: BigInt,
    #[serde(with = "bigint_json")]
    pub edim: BigInt,
    #[serde(with = "bigint_json")]
    pub lvdim: BigInt,
    #[serde(with = "bigint_json")]
    pub ldim: BigInt,
    pub oracle_dim: Option<i64>,
    pub classification: Classification,
    /// No measured dimension was available; `classification` treats `ldim`
    /// as the actual dimension.
    #[serde(default)]
    pub predicted: bool,
}

impl DimensionReport {
    pub fn new(sys: &LinearSystem, policy: ContainmentPolicy, oracle_dim: Option<i64>) -> Self {
        let vdim = virtual_dimension(sys);
        let edim = vdim.clone().max(BigInt::from(-1));
        let lvdim = linear_virtual_dimension(sys);
        let ldim = linear_expected_dimension(sys, policy);
        let (actual, predicted) = match oracle_dim {
            Some(a) => (a, false),
            None => (ldim.to_i64().unwrap_or(i64::MAX), true),
        };
        let classification = classify_values(&edim, &ldim, actual);
        DimensionReport {
            vdim,
            edim,
            lvdim,
            ldim,
            oracle_dim,
            classification,
            predicted,
        }
    }
}

/// Scope and outcome of the sufficient condition for `dim = ldim` with at
/// least `n + 3` points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct N3Condition {
    /// Number of points of multiplicity `d`.
    pub s_d: usize,
    /// `min(n - s(d), s - n - 2)`.
    pub b: i64,
    pub satisfied: bool,
    /// `s >= n + 3`, `d >= 2` and every `m_i <= d`.
    pub in_scope: bool,
}

pub fn n3_condition(sys: &LinearSystem) -> N3Condition {
    let n = sys.n() as i64;
    let s = sys.s() as i64;
    let s_d = sys.mults().iter().filter(|&&m| m == sys.d()).count();
    let b = (n - s_d as i64).min(s - n - 2);
    let in_scope = s >= n + 3 && sys.d() >= 2 && sys.mults().iter().all(|&m| m <= sys.d());
    let satisfied = in_scope && (sys.mult_sum() as i64) <= n * sys.d() as i64 + b;
    N3Condition {
        s_d,
        b,
        satisfied,
        in_scope,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChandlerSplit {
    /// `L` with the pivot multiplicity lowered by one.
    pub reduced: LinearSystem,
    /// `L_{n-1,k-1}(c_i)`, `c_i = max(k + m_i - d - 1, 0)` over the other
    /// points.
    pub restriction: LinearSystem,
}

/// Splits `L` at the point `pivot` (0-based) of multiplicity `k`. Every other
/// point must have multiplicity at most `d - 1`.
pub fn chandler_decomposition(sys: &LinearSystem, pivot: usize) -> Result<ChandlerSplit> {
    if pivot >= sys.s() {
        return Err(Error::IndexOutOfRange {
            index: pivot,
            points: sys.s(),
        });
    }
    if sys.n() < 2 {
        return Err(Error::Precondition(
            "the restriction lives in P^{n-1}, needs n >= 2".into(),
        ));
    }
    let k = sys.mults()[pivot];
    let d = sys.d();
    let others = sys
        .mults()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pivot)
        .map(|(_, &m)| m);
    if let Some(m) = others.clone().find(|&m| m + 1 > d) {
        return Err(Error::Precondition(format!(
            "other multiplicities must be at most d - 1 = {}, found {m}",
            d as i64 - 1
        )));
    }
    let reduced =
        sys.with_mults(
            sys.mults()
                .iter()
                .enumerate()
                .map(|(i, &m)| if i == pivot { m - 1 } else { m }),
        );
    let c = others.map(|m| (k as i64 + m as i64 - d as i64 - 1).max(0) as u32);
    let restriction = LinearSystem::new(sys.n() - 1, k - 1, c)?;
    Ok(ChandlerSplit {
        reduced,
        restriction,
    })
}

/// `vdim <= lvdim` holds for every system; this is the gap.
pub fn linear_correction(sys: &LinearSystem) -> BigInt {
    linear_virtual_dimension(sys) - virtual_dimension(sys)
}
