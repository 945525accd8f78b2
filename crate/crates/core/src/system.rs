//! Linear systems `L_{n,d}(m_1, ..., m_s)`, multi-indices over their base
//! points, and the generalized binomial used by every dimension formula.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `binom(a, k)` with the convention that it vanishes whenever `a < k`,
/// negative `a` included.
///
/// This is what makes the alternating sums over base cycles self-truncating:
/// a cycle of dimension `r` contained with multiplicity `k <= r` produces
/// `binom(n + k - r - 1, n) = 0`.
pub fn binomial(a: i64, k: u64) -> BigInt {
    if a < 0 || (a as u64) < k {
        return BigInt::zero();
    }
    let a = a as u64;
    let k = k.min(a - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Degree-`d` hypersurfaces of projective `n`-space through `s` general
/// points with multiplicities `m_1 >= ... >= m_s >= 1`.
///
/// The multiplicities are always kept sorted non-increasing, so two systems
/// compare equal exactly when they describe the same linear system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct LinearSystem {
    n: u32,
    d: u32,
    mults: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    n: i64,
    d: i64,
    mults: Vec<i64>,
}

impl TryFrom<RawSystem> for LinearSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        canonicalize(raw.n, raw.d, &raw.mults)
    }
}

impl From<LinearSystem> for RawSystem {
    fn from(sys: LinearSystem) -> Self {
        RawSystem {
            n: sys.n as i64,
            d: sys.d as i64,
            mults: sys.mults.iter().map(|&m| m as i64).collect(),
        }
    }
}

/// Builds the canonical form of `(n, d, mults)`: zero multiplicities are
/// dropped and the rest sorted non-increasing. Multiplicities above `d` are
/// kept; emptiness is decided elsewhere.
pub fn canonicalize(n: i64, d: i64, raw: &[i64]) -> Result<LinearSystem> {
    if n < 1 || n > u32::MAX as i64 {
        return Err(Error::AmbientDimension(n));
    }
    if d < 0 {
        return Err(Error::NegativeDegree(d));
    }
    let mut mults = Vec::with_capacity(raw.len());
    for &m in raw {
        if m < 0 {
            return Err(Error::NegativeMultiplicity(m));
        }
        if m > 0 {
            mults.push(m as u32);
        }
    }
    Ok(LinearSystem::from_sorted(n as u32, d as u32, mults))
}

impl LinearSystem {
    pub fn new(n: u32, d: u32, mults: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::AmbientDimension(0));
        }
        let mults = mults.into_iter().filter(|&m| m > 0).collect();
        Ok(Self::from_sorted(n, d, mults))
    }

    fn from_sorted(n: u32, d: u32, mut mults: Vec<u32>) -> Self {
        mults.sort_unstable_by(|a, b| b.cmp(a));
        LinearSystem { n, d, mults }
    }

    /// Parses the command-line multiplicity syntax: a comma list where each
    /// entry is either `m` or `mxk` (`k` copies of `m`), e.g. `5x3,4,3,2`.
    pub fn parse(n: u32, d: u32, mults: &str) -> Result<Self> {
        Self::new(n, d, parse_mults(mults)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    /// Number of base points.
    pub fn s(&self) -> usize {
        self.mults.len()
    }

    pub fn mult_sum(&self) -> u64 {
        self.mults.iter().map(|&m| m as u64).sum()
    }

    /// Dimension of the space of all degree-`d` forms, `binom(n+d, n)`.
    pub fn ambient_forms(&self) -> BigInt {
        binomial(self.n as i64 + self.d as i64, self.n as u64)
    }

    /// Number of linear conditions imposed by the fat points,
    /// `sum binom(n + m_i - 1, n)`.
    pub fn conditions(&self) -> BigInt {
        self.mults
            .iter()
            .map(|&m| binomial(self.n as i64 + m as i64 - 1, self.n as u64))
            .sum()
    }

    /// Same `n`, `d`, with a different multiplicity list.
    pub fn with_mults(&self, mults: impl IntoIterator<Item = u32>) -> Self {
        let mults = mults.into_iter().filter(|&m| m > 0).collect();
        Self::from_sorted(self.n, self.d, mults)
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{{{},{}}}(", self.n, self.d)?;
        let mut first = true;
        let mut i = 0;
        while i < self.mults.len() {
            let m = self.mults[i];
            let run = self.mults[i..].iter().take_while(|&&x| x == m).count();
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{m}^{run}")?;
            } else {
                write!(f, "{m}")?;
            }
            i += run;
        }
        f.write_str(")")
    }
}

/// Parses `"5,5,5,4,3,2"`, `"3x9"`, `"5x3,4,3,2"`; the empty string is the
/// empty point set.
pub fn parse_mults(spec: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (value, count) = match part.split_once(['x', '^']) {
            Some((v, c)) => (v.trim(), c.trim()),
            None => (part, "1"),
        };
        let value: u32 = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad multiplicity `{part}`")))?;
        let count: usize = count
            .parse()
            .map_err(|_| Error::Parse(format!("bad repeat count in `{part}`")))?;
        out.extend(std::iter::repeat_n(value, count));
    }
    Ok(out)
}

/// A set `I(r)` of base points spanning an `r`-dimensional linear cycle.
///
/// Indices are 0-based positions into the canonical multiplicity list;
/// JSON and `Display` use the 1-based point labels `p_1, ..., p_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// The empty index set `I(-1)`.
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(indices: Vec<usize>, points: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedIndex);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= points) {
            return Err(Error::IndexOutOfRange { index: bad, points });
        }
        Ok(MultiIndex(indices))
    }

    /// From 1-based labels, in any order.
    pub fn from_labels(labels: &[usize], points: usize) -> Result<Self> {
        let mut idx = Vec::with_capacity(labels.len());
        for &l in labels {
            if l == 0 || l > points {
                return Err(Error::IndexOutOfRange { index: l, points });
            }
            idx.push(l - 1);
        }
        idx.sort_unstable();
        Self::new(idx, points)
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>) -> Self {
        MultiIndex(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension of the spanned cycle; `-1` for the empty set.
    pub fn r(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (j, i) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(de)?;
        if labels.contains(&0) {
            return Err(serde::de::Error::custom("point labels are 1-based"));
        }
        let mut idx: Vec<usize> = labels.into_iter().map(|l| l - 1).collect();
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(serde::de::Error::custom("repeated point label"));
        }
        Ok(MultiIndex(idx))
    }
}

/// Serde adapter for big integers: plain JSON numbers when they fit in
/// `i64`, decimal strings otherwise.
pub mod bigint_json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => ser.serialize_i64(x),
            None => ser.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(de)? {
            Repr::Int(x) => Ok(BigInt::from(x)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }

    pub mod map {
        use std::collections::BTreeMap;

        use num_bigint::BigInt;
        use serde::ser::SerializeMap;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(
            m: &BTreeMap<u32, BigInt>,
            ser: S,
        ) -> Result<S::Ok, S::Error> {
            let mut map = ser.serialize_map(Some(m.len()))?;
            for (k, v) in m {
                map.serialize_entry(&k.to_string(), &super::Wrap(v))?;
            }
            map.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            de: D,
        ) -> Result<BTreeMap<u32, BigInt>, D::Error> {
            let raw = BTreeMap::<String, super::Owned>::deserialize(de)?;
            raw.into_iter()
                .map(|(k, v)| {
                    let k = k.parse().map_err(serde::de::Error::custom)?;
                    Ok((k, v.0))
                })
                .collect()
        }
    }

    pub struct Wrap<'a>(pub &'a BigInt);

    impl serde::Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            serialize(self.0, ser)
        }
    }

    pub struct Owned(pub BigInt);

    impl<'de> Deserialize<'de> for Owned {
        fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
            deserialize(de).map(Owned)
        }
    }
}
