//! Formula-based evaluation of the star moments `M(w)`.
//!
//! Two routes, both exact:
//!
//! * [`star_moment_formula`]: signed Catalan sum over alternating
//!   non-crossing partitions, `Σ_π ∏_V (−1)^{|V|/2−1} C_{|V|/2−1} · d^{|π|}`.
//! * [`star_moment_anc2`]: the fiber-size sum over alternating non-crossing
//!   pair partitions, `Σ_π ∏_V (d − 1_{V bad})`.
//!
//! [`verify_equivalence`] compares both against brute-force path counting
//! and the free-cumulant expansion.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{check_cap, Result};
use crate::freegroup::{check_degree, count_wpaths};
use crate::freeprob::moment_via_cumulants;
use crate::partitions::{bad_pairs, catalan, enumerate_anc2, for_each_anc, preimage_size};
use crate::words::Word;

/// Longest word accepted by the formula evaluators.
pub const FORMULA_MAX_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarMoment {
    pub word: Word,
    pub degree: usize,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub value: BigUint,
}

fn check_formula_input(w: &Word, d: usize) -> Result<()> {
    check_degree(d)?;
    check_cap("|w|", w.len() as u128, FORMULA_MAX_LEN as u128)
}

pub fn star_moment_formula(w: &Word, d: usize) -> Result<BigUint> {
    check_formula_input(w, d)?;
    let dd = BigInt::from(d);
    // Catalan weights by half block size, built once per call.
    let weights: Vec<BigInt> = (0..=w.len() / 2)
        .map(|half| {
            let c = BigInt::from(catalan(half.saturating_sub(1) as u32));
            if half >= 1 && (half - 1) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let mut total = BigInt::zero();
    for_each_anc(w, false, |blocks| {
        let mut term = dd.pow(blocks.len() as u32);
        for b in blocks {
            term *= &weights[b.len() / 2];
        }
        total += term;
    });
    Ok(total
        .to_biguint()
        .expect("star moment counts closed paths and cannot be negative"))
}

pub fn star_moment_anc2(w: &Word, d: usize) -> Result<BigUint> {
    check_formula_input(w, d)?;
    let mut total = BigUint::zero();
    for pi in enumerate_anc2(w) {
        total += preimage_size(&pi, w, d)?;
    }
    Ok(total)
}

pub fn star_moment(w: &Word, d: usize) -> Result<StarMoment> {
    Ok(StarMoment {
        word: w.clone(),
        degree: d,
        value: star_moment_formula(w, d)?,
    })
}

/// Four independent evaluations of `M(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub word: Word,
    pub degree: usize,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub brute_force: BigUint,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub anc2: BigUint,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub formula: BigUint,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub cumulant: BigInt,
    pub matches: bool,
}

pub fn verify_equivalence(w: &Word, d: usize) -> Result<EquivalenceReport> {
    let brute_force = BigUint::from(count_wpaths(w, d)?);
    let anc2 = star_moment_anc2(w, d)?;
    let formula = star_moment_formula(w, d)?;
    let cumulant = moment_via_cumulants(w, d)?;
    let matches =
        brute_force == anc2 && anc2 == formula && BigInt::from(formula.clone()) == cumulant;
    Ok(EquivalenceReport {
        word: w.clone(),
        degree: d,
        brute_force,
        anc2,
        formula,
        cumulant,
        matches,
    })
}

/// Sum over `ANC₂(w)` of `∏_V (d − 1_{V bad})`, expanded as the signed sum
/// over subsets of bad pairs. Used to cross-check the expansion step.
pub fn star_moment_inclusion_exclusion(w: &Word, d: usize) -> Result<BigInt> {
    check_formula_input(w, d)?;
    let dd = BigInt::from(d);
    let mut total = BigInt::zero();
    for pi in enumerate_anc2(w) {
        let nbad = bad_pairs(&pi, w)?.len();
        // Σ_{A ⊆ B(π)} (−1)^{|A|} d^{|π|−|A|}
        let mut binom = BigInt::one();
        for a in 0..=nbad {
            let term = &binom * dd.pow((pi.len() - a) as u32);
            if a % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
            binom = binom * BigInt::from(nbad - a) / BigInt::from(a + 1);
        }
    }
    Ok(total)
}
