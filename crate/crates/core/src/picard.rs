//! The Picard lattice of projective `n`-space blown up at `s` points.
//!
//! A class `dH - sum m_i E_i` is stored as `(degree, mults)`, so the
//! exceptional divisor `E_i` is degree `0` with `m_i = -1`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{LinearSystem, MultiIndex};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PicardClass {
    n: u32,
    degree: i64,
    mults: Vec<i64>,
}

impl PicardClass {
    pub fn new(n: u32, degree: i64, mults: Vec<i64>) -> Self {
        PicardClass { n, degree, mults }
    }

    pub fn from_system(sys: &LinearSystem) -> Self {
        PicardClass {
            n: sys.n(),
            degree: sys.d() as i64,
            mults: sys.mults().iter().map(|&m| m as i64).collect(),
        }
    }

    /// The pull-back of a hyperplane, `H`.
    pub fn hyperplane(n: u32, s: usize) -> Self {
        PicardClass {
            n,
            degree: 1,
            mults: vec![0; s],
        }
    }

    /// `E_i` (0-based `i`).
    pub fn exceptional(n: u32, s: usize, i: usize) -> Self {
        let mut mults = vec![0; s];
        mults[i] = -1;
        PicardClass {
            n,
            degree: 0,
            mults,
        }
    }

    /// `-K = (n+1)H - (n-1) sum E_i`.
    pub fn anticanonical(n: u32, s: usize) -> Self {
        PicardClass {
            n,
            degree: n as i64 + 1,
            mults: vec![n as i64 - 1; s],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn s(&self) -> usize {
        self.mults.len()
    }

    /// The linear system of this class when degree and multiplicities are
    /// non-negative.
    pub fn to_system(&self) -> Option<LinearSystem> {
        if self.degree < 0 || self.mults.iter().any(|&m| m < 0) {
            return None;
        }
        LinearSystem::new(
            self.n,
            self.degree as u32,
            self.mults.iter().map(|&m| m as u32),
        )
        .ok()
    }

    fn check_lattice(&self, other: &PicardClass) -> Result<()> {
        if self.n != other.n || self.s() != other.s() {
            return Err(Error::LatticeMismatch(self.n, self.s(), other.n, other.s()));
        }
        Ok(())
    }

    /// `<A, B> = (n-1) d_A d_B - sum m_i(A) m_i(B)`.
    pub fn pairing(&self, other: &PicardClass) -> Result<i64> {
        self.check_lattice(other)?;
        let dot: i64 = self
            .mults
            .iter()
            .zip(&other.mults)
            .map(|(a, b)| a * b)
            .sum();
        Ok((self.n as i64 - 1) * self.degree * other.degree - dot)
    }

    fn check_subset(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let expected = self.n as usize + 1;
        if subset.len() != expected {
            return Err(Error::CremonaSubset {
                expected,
                got: subset.len(),
            });
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        Ok(MultiIndex::new(sorted, self.s())?.indices().to_vec())
    }

    /// `c = sum_{i in S} m_i - (n-1) d`.
    pub fn cremona_defect(&self, subset: &[usize]) -> Result<i64> {
        let subset = self.check_subset(subset)?;
        Ok(self.defect_unchecked(&subset))
    }

    fn defect_unchecked(&self, subset: &[usize]) -> i64 {
        subset.iter().map(|&i| self.mults[i]).sum::<i64>() - (self.n as i64 - 1) * self.degree
    }

    /// The standard Cremona transformation based at the `n + 1` points of
    /// `subset` (0-based).
    pub fn cremona(&self, subset: &[usize]) -> Result<PicardClass> {
        let subset = self.check_subset(subset)?;
        Ok(self.cremona_unchecked(&subset))
    }

    fn cremona_unchecked(&self, subset: &[usize]) -> PicardClass {
        let c = self.defect_unchecked(subset);
        let mut out = self.clone();
        out.degree -= c;
        for &i in subset {
            out.mults[i] -= c;
        }
        out
    }

    /// Indices of the `n + 1` largest multiplicities, ties broken by index.
    fn pivot(&self) -> Option<Vec<usize>> {
        let k = self.n as usize + 1;
        if self.s() < k {
            return None;
        }
        let mut order: Vec<usize> = (0..self.s()).collect();
        order.sort_by(|&a, &b| self.mults[b].cmp(&self.mults[a]).then(a.cmp(&b)));
        let mut top = order[..k].to_vec();
        top.sort_unstable();
        Some(top)
    }

    /// No Cremona transformation lowers the degree: `c <= 0` on every
    /// `(n+1)`-subset. Vacuously true with at most `n` points.
    pub fn is_cremona_reduced(&self) -> bool {
        match self.pivot() {
            Some(p) => self.defect_unchecked(&p) <= 0,
            None => true,
        }
    }
}

pub fn is_cremona_reduced(sys: &LinearSystem) -> bool {
    PicardClass::from_system(sys).is_cremona_reduced()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CremonaMove {
    Cremona {
        subset: MultiIndex,
        c: i64,
        result: PicardClass,
    },
    /// Negative multiplicities mean `E_i` is a fixed component; removing it
    /// leaves the same sections with `m_i = 0`.
    Normalize { result: PicardClass },
}

impl CremonaMove {
    pub fn result(&self) -> &PicardClass {
        match self {
            CremonaMove::Cremona { result, .. } | CremonaMove::Normalize { result } => result,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionVerdict {
    Reduced,
    NegativeDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaReduction {
    pub start: PicardClass,
    pub reduced: PicardClass,
    pub moves: Vec<CremonaMove>,
    pub verdict: ReductionVerdict,
}

/// Applies the Cremona transformation at the `n + 1` largest multiplicities
/// while it lowers the degree, clamping negative multiplicities to zero in
/// between. Stops with `NegativeDegree` as soon as the degree drops below 0.
pub fn cremona_reduce(start: &PicardClass) -> CremonaReduction {
    let mut cur = start.clone();
    let mut moves = Vec::new();
    let verdict = loop {
        if cur.degree < 0 {
            break ReductionVerdict::NegativeDegree;
        }
        let pivot = cur.pivot();
        if let Some(p) = pivot.as_deref() {
            let c = cur.defect_unchecked(p);
            if c > 0 {
                cur = cur.cremona_unchecked(p);
                moves.push(CremonaMove::Cremona {
                    subset: MultiIndex::from_sorted_unchecked(p.to_vec()),
                    c,
                    result: cur.clone(),
                });
                continue;
            }
        }
        if cur.mults.iter().any(|&m| m < 0) {
            for m in &mut cur.mults {
                *m = (*m).max(0);
            }
            moves.push(CremonaMove::Normalize {
                result: cur.clone(),
            });
            continue;
        }
        break ReductionVerdict::Reduced;
    };
    CremonaReduction {
        start: start.clone(),
        reduced: cur,
        moves,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitElement {
    pub class: PicardClass,
    /// Number of Cremona transformations needed to reach it.
    pub depth: usize,
}

fn subsets_of_size(s: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, s: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=s - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, s, k, cur, out);
            cur.pop();
        }
    }
    if k <= s {
        rec(0, s, k, &mut cur, &mut out);
    }
    out
}

/// Breadth-first closure of `E_1, ..., E_s` under all standard Cremona
/// transformations, up to `depth` applications. Elements come out in
/// discovery order, which is deterministic.
pub fn weyl_orbit(n: u32, s: usize, depth: usize) -> Result<Vec<OrbitElement>> {
    if s < n as usize + 1 {
        return Err(Error::Precondition(format!(
            "Weyl orbit needs s >= n + 1 = {}, got {s}",
            n + 1
        )));
    }
    let subsets = subsets_of_size(s, n as usize + 1);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in 0..s {
        let e = PicardClass::exceptional(n, s, i);
        seen.insert(e.clone());
        out.push(OrbitElement { class: e, depth: 0 });
    }
    let mut frontier = 0..out.len();
    for level in 1..=depth {
        let start = out.len();
        for j in frontier.clone() {
            for sub in &subsets {
                let img = out[j].class.cremona_unchecked(sub);
                if seen.insert(img.clone()) {
                    out.push(OrbitElement {
                        class: img,
                        depth: level,
                    });
                }
            }
        }
        if out.len() == start {
            break;
        }
        frontier = start..out.len();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylComponent {
    pub class: PicardClass,
    pub depth: usize,
    /// `-<D, F>`.
    pub mult: i64,
    /// `<D, F> = 0`: touches the base locus without forcing containment.
    pub zero: bool,
}

/// Orbit elements `F` with `<D, F> <= 0`, each contained in the base locus of
/// `D` with multiplicity `-<D, F>`. The exceptional classes themselves only
/// restate the assigned multiplicities and are left out unless asked for.
pub fn weyl_base_locus(
    class: &PicardClass,
    depth: usize,
    include_exceptional: bool,
) -> Result<Vec<WeylComponent>> {
    let orbit = weyl_orbit(class.n, class.s(), depth)?;
    let mut out = Vec::new();
    for el in orbit {
        if el.depth == 0 && !include_exceptional {
            continue;
        }
        let p = class.pairing(&el.class)?;
        if p <= 0 {
            out.push(WeylComponent {
                class: el.class,
                depth: el.depth,
                mult: -p,
                zero: p == 0,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Effectivity {
    Nonempty,
    Empty,
    Unknown,
}

fn satisfies_conditions(n: u32, degree: i64, mults: &[i64]) -> bool {
    mults.iter().all(|&m| m <= degree) && mults.iter().sum::<i64>() <= n as i64 * degree
}

/// Exact for at most `n + 2` points. Beyond that the same two conditions are
/// still sufficient; failing them, the Cremona reduction decides when it
/// reaches a negative degree, a point of multiplicity above the degree, or a
/// class supported on at most `n + 2` points.
pub fn effectivity(sys: &LinearSystem) -> Effectivity {
    let class = PicardClass::from_system(sys);
    let n = sys.n();
    if satisfies_conditions(n, class.degree, &class.mults) {
        return Effectivity::Nonempty;
    }
    if sys.s() <= n as usize + 2 || sys.mults().iter().any(|&m| m > sys.d()) {
        return Effectivity::Empty;
    }
    let red = cremona_reduce(&class);
    if red.verdict == ReductionVerdict::NegativeDegree {
        return Effectivity::Empty;
    }
    let r = &red.reduced;
    if r.mults.iter().any(|&m| m > r.degree) {
        return Effectivity::Empty;
    }
    let support: Vec<i64> = r.mults.iter().copied().filter(|&m| m > 0).collect();
    if support.len() <= n as usize + 2 {
        return if satisfies_conditions(n, r.degree, &support) {
            Effectivity::Nonempty
        } else {
            Effectivity::Empty
        };
    }
    Effectivity::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn class(n: u32, d: u32, m: &str) -> PicardClass {
        PicardClass::from_system(&LinearSystem::parse(n, d, m).unwrap())
    }

    #[test]
    fn pairing_examples() {
        let h = PicardClass::hyperplane(4, 3);
        assert_eq!(h.pairing(&h).unwrap(), 3);
        let d = class(2, 5, "3x3");
        let f = PicardClass::new(2, 1, vec![1, 1, 0]);
        assert_eq!(d.pairing(&f).unwrap(), -1);
        let e1 = PicardClass::exceptional(3, 2, 0);
        let e2 = PicardClass::exceptional(3, 2, 1);
        assert_eq!(e1.pairing(&e2).unwrap(), 0);
        assert_eq!(e1.pairing(&e1).unwrap(), -1);
        assert!(matches!(h.pairing(&e1), Err(Error::LatticeMismatch(..))));
    }

    #[test]
    fn cremona_examples() {
        let a = class(2, 2, "1x5");
        let b = a.cremona(&[0, 1, 2]).unwrap();
        assert_eq!(b, PicardClass::new(2, 1, vec![0, 0, 0, 1, 1]));
        assert_eq!(b.cremona(&[0, 1, 2]).unwrap(), a);

        let l = class(4, 10, "6x7");
        assert_eq!(l.cremona(&[0, 2, 3, 5, 6]).unwrap(), l);
        assert!(matches!(
            l.cremona(&[0, 1]),
            Err(Error::CremonaSubset {
                expected: 5,
                got: 2
            })
        ));
        assert!(l.cremona(&[0, 1, 2, 3, 9]).is_err());
        assert!(l.cremona(&[0, 1, 2, 3, 3]).is_err());
    }

    #[test]
    fn reduced_predicate() {
        assert!(class(3, 10, "5x9").is_cremona_reduced());
        assert!(!class(2, 2, "1x5").is_cremona_reduced());
        assert!(class(4, 10, "6x7").is_cremona_reduced());
        assert!(class(4, 10, "9,9").is_cremona_reduced());
    }

    #[test]
    fn reduce_quartic_with_four_triple_points() {
        let red = cremona_reduce(&class(3, 4, "3x4"));
        assert_eq!(red.moves.len(), 2);
        match &red.moves[0] {
            CremonaMove::Cremona { subset, c, result } => {
                assert_eq!(subset.labels(), vec![1, 2, 3, 4]);
                assert_eq!(*c, 4);
                assert_eq!(result, &PicardClass::new(3, 0, vec![-1; 4]));
            }
            other => panic!("unexpected move {other:?}"),
        }
        assert_eq!(
            red.moves[1],
            CremonaMove::Normalize {
                result: PicardClass::new(3, 0, vec![0; 4])
            }
        );
        assert_eq!(red.verdict, ReductionVerdict::Reduced);
        assert_eq!(
            effectivity(&LinearSystem::parse(3, 4, "3x4").unwrap()),
            Effectivity::Nonempty
        );
    }

    #[test]
    fn reduce_trivial_cases() {
        let l = class(4, 10, "6x7");
        let red = cremona_reduce(&l);
        assert!(red.moves.is_empty());
        assert_eq!(red.reduced, l);
        assert_eq!(red.verdict, ReductionVerdict::Reduced);

        let few = class(3, 2, "5,5");
        assert!(cremona_reduce(&few).moves.is_empty());

        // quadrics in P^2 through 6 general points: empty
        let red = cremona_reduce(&class(2, 2, "1x6"));
        assert_eq!(red.verdict, ReductionVerdict::NegativeDegree);
    }

    #[test]
    fn orbit_depth_one_in_the_plane() {
        let orbit = weyl_orbit(2, 3, 1).unwrap();
        let classes: Vec<_> = orbit.iter().map(|e| e.class.clone()).collect();
        assert_eq!(
            classes,
            vec![
                PicardClass::exceptional(2, 3, 0),
                PicardClass::exceptional(2, 3, 1),
                PicardClass::exceptional(2, 3, 2),
                PicardClass::new(2, 1, vec![0, 1, 1]),
                PicardClass::new(2, 1, vec![1, 0, 1]),
                PicardClass::new(2, 1, vec![1, 1, 0]),
            ]
        );
        assert_eq!(weyl_orbit(3, 6, 0).unwrap().len(), 6);
        assert!(weyl_orbit(3, 3, 1).is_err());
    }

    #[test]
    fn orbit_preserves_self_pairing_and_anticanonical_degree() {
        for (n, s) in [(2, 5), (3, 7), (4, 8)] {
            let k = PicardClass::anticanonical(n, s);
            for el in weyl_orbit(n, s, 3).unwrap() {
                assert_eq!(el.class.pairing(&el.class).unwrap(), -1);
                assert_eq!(el.class.pairing(&k).unwrap(), n as i64 - 1);
            }
        }
    }

    #[test]
    fn weyl_lines_in_the_plane() {
        let comps = weyl_base_locus(&class(2, 5, "3x3"), 1, false).unwrap();
        assert_eq!(comps.len(), 3);
        assert!(comps
            .iter()
            .all(|c| c.mult == 1 && !c.zero && c.class.degree() == 1));
        // <D, E_i> = m_i > 0, so the exceptional classes never qualify
        let with_e = weyl_base_locus(&class(2, 5, "3x3"), 1, true).unwrap();
        assert_eq!(with_e, comps);
        let d = class(2, 5, "3x3");
        assert_eq!(d.pairing(&PicardClass::exceptional(2, 3, 1)).unwrap(), 3);
        let neg = PicardClass::new(2, 5, vec![3, 3, -2]);
        let with_e = weyl_base_locus(&neg, 0, true).unwrap();
        assert_eq!(with_e.len(), 1);
        assert_eq!(with_e[0].mult, 2);
    }

    #[test]
    fn weyl_base_locus_of_cremona_invariant_system_is_empty() {
        let comps = weyl_base_locus(&class(4, 10, "6x7"), 2, false).unwrap();
        assert!(comps.is_empty());
    }

    #[test]
    fn weyl_lines_match_k_values_on_random_planar_systems() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let d = rng.random_range(1..=12u32);
            let s = rng.random_range(3..=7usize);
            let mults: Vec<u32> = (0..s).map(|_| rng.random_range(1..=d)).collect();
            let sys = LinearSystem::new(2, d, mults).unwrap();
            let comps = weyl_base_locus(&PicardClass::from_system(&sys), 1, false).unwrap();
            for i in 0..s {
                for j in i + 1..s {
                    let k = sys.mults()[i] as i64 + sys.mults()[j] as i64 - d as i64;
                    if k <= 0 {
                        continue;
                    }
                    let mut line = vec![0; s];
                    line[i] = 1;
                    line[j] = 1;
                    let line = PicardClass::new(2, 1, line);
                    let hit = comps
                        .iter()
                        .find(|c| c.class == line)
                        .expect("line in orbit");
                    assert_eq!(hit.mult, k, "{sys} pair {i},{j}");
                }
            }
        }
    }

    #[test]
    fn cremona_involution_and_pairing_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let n = rng.random_range(1..=5u32);
            let s = rng.random_range(n as usize + 1..=n as usize + 5);
            let rand_class = |rng: &mut rand_chacha::ChaCha8Rng| {
                PicardClass::new(
                    n,
                    rng.random_range(-5..=20),
                    (0..s).map(|_| rng.random_range(-3..=12)).collect(),
                )
            };
            let a = rand_class(&mut rng);
            let b = rand_class(&mut rng);
            let mut sub: Vec<usize> = (0..s).collect();
            for i in (1..s).rev() {
                sub.swap(i, rng.random_range(0..=i));
            }
            sub.truncate(n as usize + 1);
            let ca = a.cremona(&sub).unwrap();
            let cb = b.cremona(&sub).unwrap();
            assert_eq!(ca.cremona(&sub).unwrap(), a);
            assert_eq!(ca.pairing(&cb).unwrap(), a.pairing(&b).unwrap());
            let k = PicardClass::anticanonical(n, s);
            assert_eq!(k.cremona(&sub).unwrap(), k);
        }
    }

    #[test]
    fn reduction_terminates_within_degree_steps() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.random_range(1..=4u32);
            let d = rng.random_range(0..=15u32);
            let s = rng.random_range(0..=9usize);
            let mults: Vec<u32> = (0..s).map(|_| rng.random_range(1..=d.max(1))).collect();
            let sys = LinearSystem::new(n, d, mults).unwrap();
            let red = cremona_reduce(&PicardClass::from_system(&sys));
            let cremonas = red
                .moves
                .iter()
                .filter(|m| matches!(m, CremonaMove::Cremona { .. }))
                .count();
            assert!(cremonas as u32 <= d + 1, "{sys}");
            if red.verdict == ReductionVerdict::Reduced {
                assert!(red.reduced.is_cremona_reduced());
            }
        }
    }

    #[test]
    fn effectivity_examples() {
        let sys = |n, d, m| LinearSystem::parse(n, d, m).unwrap();
        assert_eq!(effectivity(&sys(4, 6, "5x3,4,3,2")), Effectivity::Nonempty);
        assert_eq!(effectivity(&sys(3, 4, "3x4")), Effectivity::Nonempty);
        for n in 1..=5u32 {
            let l = LinearSystem::new(n, 3, vec![3; n as usize + 1]).unwrap();
            assert_eq!(effectivity(&l), Effectivity::Empty);
        }
        assert_eq!(effectivity(&sys(2, 2, "1x6")), Effectivity::Empty);
        assert_eq!(effectivity(&sys(2, 3, "4")), Effectivity::Empty);
        assert_eq!(effectivity(&sys(3, 6, "3x9")), Effectivity::Unknown);
    }
}
