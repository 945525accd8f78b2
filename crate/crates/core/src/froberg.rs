//! Truncated Hilbert series of ideals generated by powers of general linear
//! forms.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::LinearSystem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    /// `a_0 .. a_D` of `prod (1 - t^{e_i}) / (1 - t)^{n+1}`.
    #[serde(with = "big_vec")]
    pub raw: Vec<BigInt>,
    /// `b_i = a_i` while every `a_j`, `j <= i`, is positive; `0` afterwards.
    #[serde(with = "big_vec")]
    pub coefficients: Vec<BigInt>,
    /// First `i` with `a_i <= 0`.
    pub truncation_index: Option<usize>,
}

mod big_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::system::bigint_json::{Owned, Wrap};

    pub fn serialize<S: Serializer>(v: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Wrap).collect::<Vec<_>>().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<Owned>::deserialize(de)?
            .into_iter()
            .map(|o| o.0)
            .collect())
    }
}

pub fn truncated_series(n: u32, degrees: &[u32], top: usize) -> TruncatedSeries {
    let len = top + 1;
    let mut a = vec![BigInt::zero(); len];
    a[0] = BigInt::from(1);
    for &e in degrees {
        let e = e as usize;
        // multiply by (1 - t^e), high degrees first
        for i in (e..len).rev() {
            let prev = a[i - e].clone();
            a[i] -= prev;
        }
    }
    // divide by (1 - t)^{n+1}: n + 1 prefix sums
    for _ in 0..=n {
        for i in 1..len {
            let prev = a[i - 1].clone();
            a[i] += prev;
        }
    }
    let truncation_index = a.iter().position(|x| !x.is_positive());
    let mut b = a.clone();
    if let Some(t) = truncation_index {
        for x in &mut b[t..] {
            *x = BigInt::zero();
        }
    }
    TruncatedSeries {
        raw: a,
        coefficients: b,
        truncation_index,
    }
}

/// Generator degrees `d + 1 - m_i` of the ideal dual to the fat points.
pub fn apolar_degrees(sys: &LinearSystem) -> Result<Vec<u32>> {
    sys.mults()
        .iter()
        .map(|&m| {
            if m > sys.d() {
                Err(Error::Precondition(format!(
                    "multiplicity {m} exceeds the degree {}",
                    sys.d()
                )))
            } else {
                Ok(sys.d() + 1 - m)
            }
        })
        .collect()
}

/// `b_d - 1` for the generator degrees `d + 1 - m_i`.
pub fn froberg_prediction(sys: &LinearSystem) -> Result<BigInt> {
    let degrees = apolar_degrees(sys)?;
    let series = truncated_series(sys.n(), &degrees, sys.d() as usize);
    Ok(&series.coefficients[sys.d() as usize] - 1)
}
