//! Linear components of the base locus.
//!
//! For an index set `I` of `r + 1` base points, the span `L_I` is forced into
//! every member of the system with multiplicity at least
//! `k_I = max(sum_{i in I} m_i - r d, 0)`; the bound is exact when there are at
//! most `n + 2` points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::PicardClass;
use crate::system::{LinearSystem, MultiIndex};

/// Unclamped `K_I = sum_{i in I} m_i - (|I| - 1) d`.
pub fn excess(sys: &LinearSystem, indices: &[usize]) -> i64 {
    let d = sys.d() as i64;
    let sum: i64 = indices.iter().map(|&i| sys.mults()[i] as i64).sum();
    sum - (indices.len() as i64 - 1) * d
}

/// `k_I`; for the empty index set this is `d`.
pub fn k_value(sys: &LinearSystem, index: &MultiIndex) -> Result<u64> {
    if let Some(&bad) = index.indices().iter().find(|&&i| i >= sys.s()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            points: sys.s(),
        });
    }
    Ok(excess(sys, index.indices()).max(0) as u64)
}

/// Visits every non-empty index set `I` with `|I| <= max_len` whose score
/// `K_I - penalty * |I|` exceeds `threshold`, in depth-first lexicographic
/// order, passing the indices and `K_I`.
///
/// Adding point `j` changes the score by `m_j - d - penalty`. A branch is cut
/// once its score plus every positive increment still available is at most
/// `threshold`. When every `m_j <= d` and `penalty >= 0` the increments are
/// all non-positive, so this is plain monotone pruning at the threshold.
pub(crate) fn walk_subsets(
    mults: &[u32],
    d: u32,
    penalty: i64,
    threshold: i64,
    max_len: usize,
    mut visit: impl FnMut(&[usize], i64),
) {
    let d = d as i64;
    let steps: Vec<i64> = mults.iter().map(|&m| m as i64 - d - penalty).collect();
    // headroom[j] = sum of positive steps at positions >= j
    let mut headroom = vec![0i64; steps.len() + 1];
    for j in (0..steps.len()).rev() {
        headroom[j] = headroom[j + 1] + steps[j].max(0);
    }
    let mut path = Vec::with_capacity(max_len.min(mults.len()));
    descend(
        &steps,
        &headroom,
        threshold,
        max_len,
        0,
        d,
        &mut path,
        &mut |p, score| visit(p, score + penalty * p.len() as i64),
    );
}

#[allow(clippy::too_many_arguments)]
fn descend(
    steps: &[i64],
    headroom: &[i64],
    threshold: i64,
    max_len: usize,
    start: usize,
    score: i64,
    path: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], i64),
) {
    if path.len() == max_len {
        return;
    }
    for j in start..steps.len() {
        if score + headroom[j] <= threshold {
            break;
        }
        let next = score + steps[j];
        path.push(j);
        if next > threshold {
            visit(path, next);
        }
        if next + headroom[j + 1] > threshold {
            descend(
                steps,
                headroom,
                threshold,
                max_len,
                j + 1,
                next,
                path,
                visit,
            );
        }
        path.pop();
    }
}

/// A linear cycle `L_I` in the base locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCycle {
    #[serde(rename = "indices")]
    pub index_set: MultiIndex,
    pub r: usize,
    pub k: u64,
    /// `k` is the exact containment multiplicity (at most `n + 2` points);
    /// otherwise only a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseLocusReport {
    /// Dimension of the linear base locus, `-1` when there are no points.
    pub rbar: i64,
    pub cycles: Vec<BaseCycle>,
    /// False when some `m_i > d`, where `K` is not monotone under adding
    /// points and the enumeration cannot use the plain cut-off.
    pub pruned: bool,
}

impl BaseLocusReport {
    pub fn cycles_of_dim(&self, r: usize) -> impl Iterator<Item = &BaseCycle> {
        self.cycles.iter().filter(move |c| c.r == r)
    }
}

/// All index sets `I(r)`, `0 <= r <= min(n, s) - 1`, with `k_I > 0`, ordered
/// by dimension and then lexicographically.
pub fn enumerate_base_cycles(sys: &LinearSystem) -> BaseLocusReport {
    let exact = sys.s() <= sys.n() as usize + 2;
    let max_len = sys.s().min(sys.n() as usize);
    let mut cycles = Vec::new();
    walk_subsets(sys.mults(), sys.d(), 0, 0, max_len, |idx, k| {
        cycles.push(BaseCycle {
            index_set: MultiIndex::from_sorted_unchecked(idx.to_vec()),
            r: idx.len() - 1,
            k: k as u64,
            exact,
        });
    });
    cycles.sort_by(|a, b| (a.r, &a.index_set).cmp(&(b.r, &b.index_set)));
    let rbar = cycles.iter().map(|c| c.r as i64).max().unwrap_or(-1);
    BaseLocusReport {
        rbar,
        cycles,
        pruned: sys.mults().iter().all(|&m| m <= sys.d()),
    }
}

/// Result of peeling off every hyperplane `L_{I(n-1)}` with `k > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperplaneSplit {
    pub residual: PicardClass,
    pub splits: Vec<(MultiIndex, u64)>,
    /// The residual has non-negative degree and multiplicities. When false
    /// the original system is empty.
    pub effective: bool,
}

pub fn split_hyperplanes(sys: &LinearSystem) -> Result<HyperplaneSplit> {
    let n = sys.n() as usize;
    if sys.s() < n {
        return Err(Error::Precondition(format!(
            "hyperplane splitting needs at least n = {n} points, got {}",
            sys.s()
        )));
    }
    let mut splits = Vec::new();
    walk_subsets(sys.mults(), sys.d(), 0, 0, n, |idx, k| {
        if idx.len() == n {
            splits.push((MultiIndex::from_sorted_unchecked(idx.to_vec()), k as u64));
        }
    });
    splits.sort();
    let mut degree = sys.d() as i64;
    let mut mults: Vec<i64> = sys.mults().iter().map(|&m| m as i64).collect();
    for (idx, k) in &splits {
        degree -= *k as i64;
        for &i in idx.indices() {
            mults[i] -= *k as i64;
        }
    }
    let effective = degree >= 0 && mults.iter().all(|&m| m >= 0);
    Ok(HyperplaneSplit {
        residual: PicardClass::new(sys.n(), degree, mults),
        splits,
        effective,
    })
}

/// Outcome of stripping the points of multiplicity `d` (each makes every
/// member a cone with vertex there).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "system")]
pub enum ConeReduction {
    /// The equivalent system one dimension lower per stripped point.
    System(LinearSystem),
    /// Exactly `n` points of multiplicity `d` and nothing else: the only
    /// member is `d` times the hyperplane they span.
    Hyperplane,
    /// At least `n + 1` points of multiplicity `d` (or `n` plus any other
    /// point): no members.
    Empty,
}

pub fn reduce_cones(sys: &LinearSystem) -> ConeReduction {
    let d = sys.d();
    let n = sys.n() as usize;
    if d == 0 {
        return ConeReduction::System(sys.clone());
    }
    let vertices = sys.mults().iter().filter(|&&m| m == d).count();
    if vertices == 0 {
        return ConeReduction::System(sys.clone());
    }
    if vertices > n || (vertices == n && sys.s() > n) {
        return ConeReduction::Empty;
    }
    if vertices == n {
        return ConeReduction::Hyperplane;
    }
    let rest = sys.mults().iter().copied().filter(|&m| m != d);
    ConeReduction::System(
        LinearSystem::new((n - vertices) as u32, d, rest)
            .expect("ambient dimension stays positive"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: u32, d: u32, m: &str) -> LinearSystem {
        LinearSystem::parse(n, d, m).unwrap()
    }

    /// Reference: every subset by bitmask, no pruning at all.
    fn brute_cycles(s: &LinearSystem) -> Vec<(Vec<usize>, u64)> {
        let max_len = s.s().min(s.n() as usize);
        let mut out = Vec::new();
        for mask in 1u32..(1 << s.s()) {
            let idx: Vec<usize> = (0..s.s()).filter(|i| mask >> i & 1 == 1).collect();
            if idx.len() > max_len {
                continue;
            }
            let k = excess(s, &idx);
            if k > 0 {
                out.push((idx, k as u64));
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    #[test]
    fn k_value_examples() {
        let l = sys(4, 6, "5x3,4,3,2");
        assert_eq!(
            k_value(&l, &MultiIndex::from_labels(&[1, 2], 6).unwrap()).unwrap(),
            4
        );
        let l = sys(3, 6, "3x9");
        assert_eq!(
            k_value(&l, &MultiIndex::from_labels(&[1, 2], 9).unwrap()).unwrap(),
            0
        );
        assert_eq!(k_value(&l, &MultiIndex::empty()).unwrap(), 6);
        let bad = MultiIndex::new(vec![0, 9], 10).unwrap();
        assert!(matches!(
            k_value(&l, &bad),
            Err(Error::IndexOutOfRange { index: 9, .. })
        ));
    }

    #[test]
    fn sextics_in_p4_base_locus() {
        let l = sys(4, 6, "5x3,4,3,2");
        let rep = enumerate_base_cycles(&l);
        assert_eq!(rep.rbar, 3);
        assert!(rep.pruned);
        assert!(rep.cycles.iter().all(|c| c.exact));

        let lines: Vec<_> = rep
            .cycles_of_dim(1)
            .map(|c| (c.index_set.labels(), c.k))
            .collect();
        let expected_lines = vec![
            (vec![1, 2], 4),
            (vec![1, 3], 4),
            (vec![1, 4], 3),
            (vec![1, 5], 2),
            (vec![1, 6], 1),
            (vec![2, 3], 4),
            (vec![2, 4], 3),
            (vec![2, 5], 2),
            (vec![2, 6], 1),
            (vec![3, 4], 3),
            (vec![3, 5], 2),
            (vec![3, 6], 1),
            (vec![4, 5], 1),
        ];
        assert_eq!(lines, expected_lines);

        let planes: Vec<_> = rep
            .cycles_of_dim(2)
            .map(|c| (c.index_set.labels(), c.k))
            .collect();
        assert_eq!(
            planes,
            vec![
                (vec![1, 2, 3], 3),
                (vec![1, 2, 4], 2),
                (vec![1, 2, 5], 1),
                (vec![1, 3, 4], 2),
                (vec![1, 3, 5], 1),
                (vec![2, 3, 4], 2),
                (vec![2, 3, 5], 1),
            ]
        );
        let solids: Vec<_> = rep
            .cycles_of_dim(3)
            .map(|c| (c.index_set.labels(), c.k))
            .collect();
        assert_eq!(solids, vec![(vec![1, 2, 3, 4], 1)]);
    }

    #[test]
    fn no_lines_when_pairs_sum_to_degree() {
        let rep = enumerate_base_cycles(&sys(3, 6, "3x9"));
        assert_eq!(rep.rbar, 0);
        assert_eq!(rep.cycles.len(), 9);
        assert!(rep.cycles.iter().all(|c| !c.exact));
    }

    #[test]
    fn cones_contain_every_span_with_multiplicity_d() {
        for n in 1..=5u32 {
            for s in 0..=n as usize {
                let l = LinearSystem::new(n, 4, vec![4; s]).unwrap();
                let rep = enumerate_base_cycles(&l);
                assert_eq!(rep.cycles.len(), (1usize << s) - 1);
                assert!(rep.cycles.iter().all(|c| c.k == 4));
                assert_eq!(rep.rbar, s as i64 - 1);
            }
        }
    }

    #[test]
    fn empty_point_set_has_rbar_minus_one() {
        assert_eq!(enumerate_base_cycles(&sys(3, 2, "")).rbar, -1);
    }

    #[test]
    fn pruned_walk_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.random_range(1..=6u32);
            let d = rng.random_range(0..=9u32);
            let s = rng.random_range(0..=12usize);
            // occasionally allow m > d to exercise the fallback bound
            let top = if rng.random_bool(0.2) {
                d + 3
            } else {
                d.max(1)
            };
            let mults: Vec<u32> = (0..s).map(|_| rng.random_range(1..=top)).collect();
            let l = LinearSystem::new(n, d, mults).unwrap();
            let rep = enumerate_base_cycles(&l);
            let got: Vec<_> = rep
                .cycles
                .iter()
                .map(|c| (c.index_set.indices().to_vec(), c.k))
                .collect();
            assert_eq!(got, brute_cycles(&l), "{l}");
        }
    }

    #[test]
    fn split_examples() {
        let sp = split_hyperplanes(&sys(2, 3, "2,2,2")).unwrap();
        assert_eq!(sp.residual, PicardClass::new(2, 0, vec![0, 0, 0]));
        assert_eq!(sp.splits.len(), 3);
        assert!(sp.splits.iter().all(|(_, k)| *k == 1));
        assert!(sp.effective);

        let l = sys(3, 10, "5x4");
        let sp = split_hyperplanes(&l).unwrap();
        assert!(sp.splits.is_empty());
        assert_eq!(sp.residual, PicardClass::from_system(&l));

        let sp = split_hyperplanes(&sys(2, 2, "2,2")).unwrap();
        assert_eq!(
            sp.splits,
            vec![(MultiIndex::from_labels(&[1, 2], 2).unwrap(), 2)]
        );
        assert_eq!(sp.residual.degree(), 0);
    }

    #[test]
    fn split_reports_non_effective_residual() {
        let sp = split_hyperplanes(&sys(2, 2, "2,2,2")).unwrap();
        assert_eq!(sp.residual.degree(), 2 - 6);
        assert!(!sp.effective);
        assert!(split_hyperplanes(&sys(3, 2, "1,1")).is_err());
    }

    #[test]
    fn cone_reduction_examples() {
        assert_eq!(
            reduce_cones(&sys(4, 6, "6,6,3,3")),
            ConeReduction::System(sys(2, 6, "3,3"))
        );
        assert_eq!(reduce_cones(&sys(3, 5, "5x4")), ConeReduction::Empty);
        assert_eq!(
            reduce_cones(&sys(3, 5, "4,3")),
            ConeReduction::System(sys(3, 5, "4,3"))
        );
        assert_eq!(reduce_cones(&sys(3, 5, "5x3")), ConeReduction::Hyperplane);
        assert_eq!(reduce_cones(&sys(3, 5, "5x3,1")), ConeReduction::Empty);
    }
}
