//! Exponent vectors and their column positions.

use std::collections::HashMap;

/// Exponent vectors of `vars` variables with total degree exactly `deg`,
/// lexicographically decreasing.
pub fn exponents(vars: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0; vars];
    fill(&mut cur, 0, deg, &mut out);
    out
}

fn fill(cur: &mut [u32], i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.to_vec());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(cur, i + 1, left - e, out);
    }
}

/// Exponent vectors of total degree at most `deg`.
pub fn exponents_up_to(vars: usize, deg: u32) -> Vec<Vec<u32>> {
    (0..=deg).flat_map(|k| exponents(vars, k)).collect()
}

/// Column lookup for the degree-`d` monomials.
pub struct MonomialBasis {
    pub monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(vars: usize, deg: u32) -> Self {
        let monomials = exponents(vars, deg);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}
