//! Strict transforms along the linear base locus and their cohomology, for
//! non-empty systems with at most `n + 2` points.
//!
//! Blowing up all base cycles of dimension `<= r` gives the class
//! `D_(r) = dH - sum_{|I| <= r+1} k_I E_I`. Its only non-zero higher
//! cohomology sits in degree `r + 1`, and equals
//! `sum_{rho > r} (-1)^{rho-r-1} S_rho` with
//! `S_rho = sum_{I(rho)} binom(n + k_I - rho - 1, n)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::baselocus::{enumerate_base_cycles, split_hyperplanes, BaseLocusReport};
use crate::dimensions::{linear_expected_dimension, linear_virtual_dimension, ContainmentPolicy};
use crate::error::{Error, Result};
use crate::picard::{effectivity, Effectivity, PicardClass};
use crate::system::{bigint_json, binomial, LinearSystem, MultiIndex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub indices: MultiIndex,
    pub k: u64,
}

/// `D_(r)`: the base class with every `E_I`, `|I| <= r + 1`, `k_I > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictTransform {
    pub level: usize,
    pub base: LinearSystem,
    pub coefficients: Vec<Coefficient>,
}

fn level_count(sys: &LinearSystem) -> usize {
    sys.s().min(sys.n() as usize)
}

pub fn strict_transform(sys: &LinearSystem, r: i64) -> Result<StrictTransform> {
    let levels = level_count(sys);
    if r < 0 || r as usize >= levels {
        return Err(Error::LevelOutOfRange { level: r, levels });
    }
    let coefficients = enumerate_base_cycles(sys)
        .cycles
        .into_iter()
        .filter(|c| c.r <= r as usize)
        .map(|c| Coefficient {
            indices: c.index_set,
            k: c.k,
        })
        .collect();
    Ok(StrictTransform {
        level: r as usize,
        base: sys.clone(),
        coefficients,
    })
}

/// `S_rho = sum_{I(rho)} binom(n + k_I - rho - 1, n)` for
/// `rho = 0 .. min(n, s) - 1`: the contribution of the `rho`-dimensional
/// cycles, entering the linear virtual dimension with sign `(-1)^{rho+1}`.
pub fn cycle_contributions(sys: &LinearSystem) -> Vec<BigInt> {
    cycle_sums(sys, &enumerate_base_cycles(sys))
}

fn cycle_sums(sys: &LinearSystem, report: &BaseLocusReport) -> Vec<BigInt> {
    let n = sys.n() as i64;
    let mut sums = vec![BigInt::zero(); level_count(sys)];
    for c in &report.cycles {
        sums[c.r] += binomial(n + c.k as i64 - c.r as i64 - 1, n as u64);
    }
    sums
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub r: usize,
    /// Positive-degree cohomology by degree. Only degree `r + 1` can be
    /// non-zero and it is always listed.
    #[serde(with = "bigint_json::map")]
    pub h: BTreeMap<u32, BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub n: u32,
    #[serde(with = "bigint_json")]
    pub h0: BigInt,
    pub rbar: i64,
    pub levels: Vec<Level>,
    /// At level `n - 1` the hyperplanes of the base locus split off and
    /// leave this class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplane_residual: Option<PicardClass>,
}

impl CohomologyTable {
    /// `h^i(D_(r))` for `i >= 1`.
    pub fn h(&self, r: usize, i: u32) -> BigInt {
        self.levels
            .get(r)
            .and_then(|l| l.h.get(&i).cloned())
            .unwrap_or_else(BigInt::zero)
    }

    /// `h^{r+1}(D_(r))`.
    pub fn top(&self, r: usize) -> BigInt {
        self.h(r, r as u32 + 1)
    }

    /// `chi(D_(r)) = h^0 + (-1)^{r+1} h^{r+1}(D_(r))`.
    pub fn euler_characteristic(&self, r: usize) -> BigInt {
        let top = self.top(r);
        if r.is_multiple_of(2) {
            &self.h0 - top
        } else {
            &self.h0 + top
        }
    }

    /// Total speciality `h^1` of the system on projective space.
    pub fn h1(&self) -> BigInt {
        if self.levels.is_empty() {
            BigInt::zero()
        } else {
            self.top(0)
        }
    }
}

fn check_scope(sys: &LinearSystem) -> Result<()> {
    if sys.s() > sys.n() as usize + 2 {
        return Err(Error::OutOfScope(format!(
            "cohomology tables need s <= n + 2 = {}, got s = {}",
            sys.n() + 2,
            sys.s()
        )));
    }
    if effectivity(sys) == Effectivity::Empty {
        return Err(Error::EmptySystem {
            euler: linear_virtual_dimension(sys) + 1,
        });
    }
    Ok(())
}

pub fn cohomology_table(sys: &LinearSystem) -> Result<CohomologyTable> {
    check_scope(sys)?;
    let report = enumerate_base_cycles(sys);
    let sums = cycle_sums(sys, &report);
    let levels_n = sums.len();
    let mut levels = Vec::with_capacity(levels_n);
    // h^{r+1}(D_(r)) = S_{r+1} - h^{r+2}(D_(r+1)), from the top down
    let mut above = BigInt::zero();
    let mut tops = vec![BigInt::zero(); levels_n];
    for r in (0..levels_n).rev() {
        let next = sums.get(r + 1).cloned().unwrap_or_default();
        tops[r] = next - &above;
        above = tops[r].clone();
    }
    for (r, top) in tops.into_iter().enumerate() {
        levels.push(Level {
            r,
            h: BTreeMap::from([(r as u32 + 1, top)]),
        });
    }
    let hyperplane_residual = if sys.s() >= sys.n() as usize {
        Some(split_hyperplanes(sys)?.residual)
    } else {
        None
    };
    Ok(CohomologyTable {
        n: sys.n(),
        h0: linear_expected_dimension(sys, ContainmentPolicy::default()) + 1,
        rbar: report.rbar,
        levels,
        hyperplane_residual,
    })
}

/// `h^1` of a non-empty system with at most `n + 2` points:
/// `sum_{r >= 1} (-1)^{r-1} S_r`.
pub fn h1_speciality(sys: &LinearSystem) -> Result<BigInt> {
    Ok(cohomology_table(sys)?.h1())
}

fn check_cone_scope(n: u32, s: u32) -> Result<()> {
    if s > n + 1 {
        return Err(Error::OutOfScope(format!(
            "cone formulas need s <= n + 1 = {}, got {s}",
            n + 1
        )));
    }
    Ok(())
}

/// `h^1` of `L_{n,d}(d^s)`: `sum_{i=2}^s (-1)^i binom(n+d-i, n) binom(s, i)`.
pub fn cones_h1(n: u32, d: u32, s: u32) -> Result<BigInt> {
    check_cone_scope(n, s)?;
    let (n, d) = (n as i64, d as i64);
    let mut acc = BigInt::zero();
    for i in 2..=s as i64 {
        let term = binomial(n + d - i, n as u64) * binomial(s as i64, i as u64);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `h^0` of `L_{n,d}(d^s)`: `binom(n-s+d, d)`, and `0` once `s = n + 1`.
pub fn cones_h0(n: u32, d: u32, s: u32) -> Result<BigInt> {
    check_cone_scope(n, s)?;
    if s == n + 1 {
        return Ok(BigInt::zero());
    }
    Ok(binomial(n as i64 - s as i64 + d as i64, d as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimensions::virtual_dimension;

    fn sys(n: u32, d: u32, m: &str) -> LinearSystem {
        LinearSystem::parse(n, d, m).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn strict_transform_examples() {
        let st = strict_transform(&sys(4, 3, "3x3"), 1).unwrap();
        assert_eq!(st.coefficients.len(), 6);
        assert!(st.coefficients.iter().all(|c| c.k == 3));
        let st = strict_transform(&sys(4, 3, "3x3"), 2).unwrap();
        assert_eq!(st.coefficients.len(), 7);

        let st = strict_transform(&sys(3, 6, "3x9"), 1).unwrap();
        assert_eq!(st.coefficients.len(), 9);
        assert!(st.coefficients.iter().all(|c| c.indices.len() == 1));

        let st = strict_transform(&sys(4, 6, "5x3,4,3,2"), 3).unwrap();
        let solid = st
            .coefficients
            .iter()
            .find(|c| c.indices.len() == 4)
            .unwrap();
        assert_eq!((solid.indices.labels(), solid.k), (vec![1, 2, 3, 4], 1));

        assert!(matches!(
            strict_transform(&sys(4, 3, "3x3"), 3),
            Err(Error::LevelOutOfRange {
                level: 3,
                levels: 3
            })
        ));
        assert!(strict_transform(&sys(4, 3, "3x3"), -1).is_err());
    }

    #[test]
    fn triple_cubics() {
        for n in 3..=8u32 {
            let t = cohomology_table(&sys(n, 3, "3x3")).unwrap();
            assert_eq!(t.top(0), big(3 * n as i64 + 2), "n={n}");
            assert_eq!(t.top(1), big(1));
            assert_eq!(t.top(2), big(0));
            assert_eq!(t.h0, binomial(n as i64, 3));
            assert_eq!(t.rbar, 2);
        }
    }

    #[test]
    fn sextics_in_p4() {
        let l = sys(4, 6, "5x3,4,3,2");
        let t = cohomology_table(&l).unwrap();
        assert_eq!(t.top(0), big(62));
        assert_eq!(t.top(1), big(1));
        assert_eq!(t.top(2), big(0));
        assert_eq!(t.top(3), big(0));
        // sections, so one more than the dimension 6 of the system
        assert_eq!(t.h0, big(7));
        assert_eq!(t.euler_characteristic(0), virtual_dimension(&l) + 1);
        assert_eq!(t.rbar, 3);
        assert_eq!(h1_speciality(&l).unwrap(), big(62));
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["levels"][0], serde_json::json!({"r": 0, "h": {"1": 62}}));
        assert_eq!(v["h0"], 7);
        let back: CohomologyTable = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn speciality_examples() {
        assert_eq!(h1_speciality(&sys(3, 3, "3x3")).unwrap(), big(11));
        assert_eq!(h1_speciality(&sys(4, 2, "2,2")).unwrap(), big(1));
        let t = cohomology_table(&sys(3, 5, "2,2")).unwrap();
        assert_eq!(t.rbar, 0);
        assert!(t.levels.iter().all(|l| l.h.values().all(Zero::is_zero)));
    }

    #[test]
    fn scope_and_emptiness_errors() {
        assert!(matches!(
            cohomology_table(&sys(2, 4, "1x5")),
            Err(Error::OutOfScope(_))
        ));
        match cohomology_table(&sys(2, 3, "3x3")) {
            Err(Error::EmptySystem { euler }) => {
                assert_eq!(euler, linear_virtual_dimension(&sys(2, 3, "3x3")) + 1)
            }
            other => panic!("expected emptiness, got {other:?}"),
        }
    }

    #[test]
    fn euler_characteristic_matches_partial_sums() {
        for (n, d, m) in [
            (4, 6, "5x3,4,3,2"),
            (5, 3, "3x3"),
            (3, 7, "5,5,4,4,3"),
            (4, 5, "4x4,2"),
        ] {
            let l = sys(n, d, m);
            let t = cohomology_table(&l).unwrap();
            let report = enumerate_base_cycles(&l);
            let sums = cycle_sums(&l, &report);
            let mut partial = l.ambient_forms();
            for (r, sum) in sums.iter().enumerate().take(t.levels.len()) {
                if r % 2 == 0 {
                    partial -= sum;
                } else {
                    partial += sum;
                }
                assert_eq!(t.euler_characteristic(r), partial, "{l} r={r}");
                if r >= 1 {
                    // -h^{r+1}(D_(r)) = h^r(D_(r-1)) - S_r
                    assert_eq!(-t.top(r), t.top(r - 1) - &sums[r]);
                }
            }
            assert_eq!(
                t.top(0) - linear_virtual_dimension(&l) + virtual_dimension(&l),
                big(0)
            );
        }
    }

    #[test]
    fn cone_examples() {
        assert_eq!(cones_h1(4, 2, 2).unwrap(), big(1));
        assert_eq!(cones_h1(3, 3, 3).unwrap(), big(11));
        assert_eq!(cones_h0(3, 3, 3).unwrap(), big(1));
        assert_eq!(cones_h0(3, 3, 4).unwrap(), big(0));
        assert!(cones_h1(3, 3, 5).is_err());
        assert!(cones_h0(3, 3, 5).is_err());
    }

    #[test]
    fn cones_specialize_the_general_formula() {
        for n in 1..=7u32 {
            for d in 1..=7u32 {
                for s in 0..=n {
                    let l = LinearSystem::new(n, d, vec![d; s as usize]).unwrap();
                    assert_eq!(
                        h1_speciality(&l).unwrap(),
                        cones_h1(n, d, s).unwrap(),
                        "{l}"
                    );
                    assert_eq!(
                        linear_expected_dimension(&l, ContainmentPolicy::default()) + 1,
                        cones_h0(n, d, s).unwrap(),
                        "{l}"
                    );
                }
            }
        }
    }
}
