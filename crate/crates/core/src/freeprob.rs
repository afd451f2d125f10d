//! Free cumulants of `a_d = u_1 + ⋯ + u_d` (free Haar unitaries) and the
//! moment-cumulant expansion over all non-crossing partitions.
//!
//! Mixed cumulants of free variables vanish and each `u_i` has cumulants
//! `(−1)^{p−1} C_{p−1}` on alternating words of length `2p`, so the
//! cumulants of `a_d` are `d` times those.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{check_cap, Result};
use crate::freegroup::check_degree;
use crate::partitions::{catalan, for_each_nc, NC_ENUMERATION_CAP};
use crate::words::{Letter, Word};

/// Cumulant lookup for a fixed `d`, keyed by the block subword.
#[derive(Debug, Clone)]
pub struct CumulantTable {
    degree: usize,
    // signed C_{p−1} indexed by p
    by_half_length: Vec<BigInt>,
}

impl CumulantTable {
    pub fn new(degree: usize, max_len: usize) -> Self {
        let by_half_length = (0..=max_len / 2)
            .map(|p| {
                if p == 0 {
                    return BigInt::zero();
                }
                let c = BigInt::from(catalan((p - 1) as u32)) * BigInt::from(degree);
                if (p - 1) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        CumulantTable {
            degree,
            by_half_length,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lookup(&self, block_word: &Word) -> BigInt {
        if !block_word.is_alternating() {
            return BigInt::zero();
        }
        let p = block_word.len() / 2;
        match self.by_half_length.get(p) {
            Some(c) => c.clone(),
            None => CumulantTable::new(self.degree, block_word.len()).by_half_length[p].clone(),
        }
    }
}

/// `κ(a_d^{w_1}, …, a_d^{w_ℓ})`.
pub fn free_cumulant_ad(w: &Word, d: usize) -> Result<BigInt> {
    check_degree(d)?;
    Ok(CumulantTable::new(d, w.len()).lookup(w))
}

/// `φ(a_d^{w_1} ⋯ a_d^{w_k}) = Σ_{π ∈ NC(k)} ∏_{V∈π} κ(w|_V)`, summed over
/// every non-crossing partition (non-alternating blocks contribute zero).
pub fn moment_via_cumulants(w: &Word, d: usize) -> Result<BigInt> {
    check_degree(d)?;
    check_cap("|w|", w.len() as u128, NC_ENUMERATION_CAP as u128)?;
    let table = CumulantTable::new(d, w.len());
    let letters = w.letters();
    let mut total = BigInt::zero();
    let mut block_letters: Vec<Letter> = Vec::with_capacity(w.len());
    for_each_nc(w.len(), |blocks| {
        let mut term = BigInt::from(1);
        for b in blocks {
            block_letters.clear();
            block_letters.extend(b.iter().map(|&x| letters[x - 1]));
            let k = table.lookup(&Word::new(block_letters.clone()));
            if k.is_zero() {
                return;
            }
            term *= k;
        }
        total += term;
    });
    Ok(total)
}
