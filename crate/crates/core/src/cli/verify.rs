//! Self-verification sweep: every cross-oracle identity over all words up
//! to a given length.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{check_cap, Result};
use crate::freegroup::{enumerate_wpaths, PATH_ENUMERATION_CAP};
use crate::moments::verify_equivalence;
use crate::partitions::{
    catalan, catalan_block_product, enumerate_anc, enumerate_anc2, enumerate_nc, enumerate_nc2,
    enumerate_preimage, merge_counts, preimage_size, skeleton, Partition,
};
use crate::words::Word;

pub const SWEEP_MAX_LEN: usize = 10;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    /// Up to five failing cases, for diagnostics.
    pub examples: Vec<String>,
}

impl CheckTally {
    fn new(name: &'static str) -> Self {
        CheckTally {
            name,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.examples.len() < 5 {
                self.examples.push(describe());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_len: usize,
    pub degrees: Vec<usize>,
    pub checks: Vec<CheckTally>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

fn brute_force_feasible(w: &Word, d: usize) -> bool {
    (d as u128)
        .checked_pow(w.len() as u32)
        .is_some_and(|s| s <= PATH_ENUMERATION_CAP)
}

pub fn verify_sweep(max_len: usize, degrees: &[usize]) -> Result<SweepReport> {
    check_cap("max_len", max_len as u128, SWEEP_MAX_LEN as u128)?;
    let mut moments = CheckTally::new("moments four ways");
    let mut fibers = CheckTally::new("skeleton fibers = preimages");
    let mut sizes = CheckTally::new("preimage sizes");
    let mut merges = CheckTally::new("merge counts = Catalan products");
    let mut counts = CheckTally::new("Catalan counts");

    for k in 0..=max_len {
        let c = enumerate_nc(k)?.len();
        counts.record(BigUint::from(c) == catalan(k as u32), || {
            format!("|NC({k})| = {c}")
        });
        if k % 2 == 0 {
            let c2 = enumerate_nc2(k)?.len();
            counts.record(BigUint::from(c2) == catalan(k as u32 / 2), || {
                format!("|NC2({k})| = {c2}")
            });
        }
    }

    for w in Word::all_up_to(max_len) {
        for &d in degrees {
            if brute_force_feasible(&w, d) {
                let r = verify_equivalence(&w, d)?;
                moments.record(r.matches, || format!("{r:?}"));
            }
            if d < 2 || !brute_force_feasible(&w, d) {
                continue;
            }
            let mut grouped: HashMap<Partition, Vec<Vec<usize>>> = HashMap::new();
            for path in enumerate_wpaths(&w, d)? {
                grouped
                    .entry(skeleton(&w, &path, d)?)
                    .or_default()
                    .push(path);
            }
            let anc2 = enumerate_anc2(&w);
            fibers.record(grouped.len() == anc2.len(), || {
                format!(
                    "w={w} d={d}: {} skeletons vs {} pairings",
                    grouped.len(),
                    anc2.len()
                )
            });
            for pi in &anc2 {
                let pre = enumerate_preimage(pi, &w, d)?;
                let size = preimage_size(pi, &w, d)?;
                sizes.record(BigUint::from(pre.len()) == size, || {
                    format!("w={w} d={d} π={pi}: {} vs {size}", pre.len())
                });
                fibers.record(grouped.get(pi) == Some(&pre), || {
                    format!("w={w} d={d} π={pi}")
                });
            }
        }
        if w.is_balanced() {
            let got = merge_counts(&w)?;
            let anc = enumerate_anc(&w);
            merges.record(got.len() == anc.len(), || {
                format!("w={w}: merge targets outside ANC")
            });
            for pi in anc {
                let c = got.get(&pi).copied().unwrap_or(0);
                merges.record(BigUint::from(c) == catalan_block_product(&pi), || {
                    format!("w={w} π={pi}: {c}")
                });
            }
        }
    }

    Ok(SweepReport {
        max_len,
        degrees: degrees.to_vec(),
        checks: vec![moments, fibers, sizes, merges, counts],
    })
}
