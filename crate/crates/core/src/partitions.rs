//! Set partitions of `{1..k}` and the combinatorics of alternating
//! non-crossing partitions of a word.
//!
//! Partitions are kept in canonical form (blocks ordered by their minimum,
//! elements ascending) so that equality and hashing are structural. Every
//! enumerator returns its results sorted by that canonical form.
//!
//! Generation works on intervals: the block containing the leftmost free
//! position is chosen first, and the gaps it leaves are filled independently.
//! For alternating partitions a gap can only be filled when its subword has
//! as many `1`s as `*`s, which prunes most of the search.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{check_cap, Error, Result};
use crate::freegroup::{check_degree, path_product, GroupElement};
use crate::words::Word;

/// Largest ground set accepted by [`enumerate_nc`] and [`enumerate_nc2`].
pub const NC_ENUMERATION_CAP: usize = 14;
/// Cap on `d^{|π|}` for [`enumerate_preimage`].
pub const PREIMAGE_ENUMERATION_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    ground_size: usize,
}

impl Partition {
    /// Builds a partition of `{1..ground_size}` from blocks given in any order.
    pub fn new(ground_size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; ground_size + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > ground_size {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside 1..={ground_size}"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {x} repeated")));
                }
                seen[x] = true;
            }
        }
        if let Some(missing) = (1..=ground_size).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!(
                "element {missing} not covered"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition {
            blocks,
            ground_size,
        })
    }

    /// Blocks already known to be a valid partition; only canonicalizes.
    fn from_blocks_unchecked(ground_size: usize, blocks: &[Vec<usize>]) -> Self {
        let mut blocks: Vec<Vec<usize>> = blocks.to_vec();
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition {
            blocks,
            ground_size,
        }
    }

    pub fn empty() -> Self {
        Partition {
            blocks: Vec::new(),
            ground_size: 0,
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of every element; `labels[0]` is unused.
    fn labels(&self) -> Vec<usize> {
        let mut labels = vec![usize::MAX; self.ground_size + 1];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x] = b;
            }
        }
        labels
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// No `a < b < c < e` with `a, c` in one block and `b, e` in another.
    pub fn is_noncrossing(&self) -> bool {
        let labels = self.labels();
        // For consecutive elements x < y of one block, every element strictly
        // between them must belong to a block lying entirely inside (x, y).
        for block in &self.blocks {
            for pair in block.windows(2) {
                let (lo, hi) = (pair[0], pair[1]);
                for &label in &labels[lo + 1..hi] {
                    let other = &self.blocks[label];
                    if other[0] < lo || *other.last().unwrap() > hi {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every block induces an alternating subword of `w`.
    pub fn is_alternating_for(&self, w: &Word) -> bool {
        self.ground_size == w.len()
            && self
                .blocks
                .iter()
                .all(|b| w.subword(b).map(|s| s.is_alternating()).unwrap_or(false))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "{{}}");
        }
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

/// `j ≻_π j′`: `inner` is the minimum of a block directly surrounded by the
/// block whose minimum is `outer`, and the two opening letters differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BadPair {
    pub outer: usize,
    pub inner: usize,
}

// ---------------------------------------------------------------------------
// Generation

#[derive(Clone, Copy)]
enum Family<'a> {
    Nc,
    NcPairs,
    Anc(&'a Word),
    AncPairs(&'a Word),
}

struct Generator<'a> {
    family: Family<'a>,
    /// prefix_ones[i] = number of `1` among the first i letters
    prefix_ones: Vec<usize>,
}

impl<'a> Generator<'a> {
    fn new(family: Family<'a>) -> Self {
        let prefix_ones = match family {
            Family::Anc(w) | Family::AncPairs(w) => {
                let mut acc = vec![0];
                for &l in w.letters() {
                    let last = *acc.last().unwrap();
                    acc.push(last + usize::from(l == crate::words::Letter::One));
                }
                acc
            }
            _ => Vec::new(),
        };
        Generator {
            family,
            prefix_ones,
        }
    }

    fn pairs_only(&self) -> bool {
        matches!(self.family, Family::NcPairs | Family::AncPairs(_))
    }

    /// Whether the positions `lo..=hi` (possibly empty) can be partitioned.
    fn gap_ok(&self, lo: usize, hi: usize) -> bool {
        if lo > hi {
            return true;
        }
        let len = hi - lo + 1;
        match self.family {
            Family::Nc => true,
            Family::NcPairs => len.is_multiple_of(2),
            Family::Anc(_) | Family::AncPairs(_) => {
                2 * (self.prefix_ones[hi] - self.prefix_ones[lo - 1]) == len
            }
        }
    }

    fn block_ok(&self, block: &[usize]) -> bool {
        match self.family {
            Family::Nc => true,
            Family::NcPairs | Family::AncPairs(_) => block.len() == 2,
            Family::Anc(_) => block.len().is_multiple_of(2),
        }
    }

    fn can_append(&self, block: &[usize], x: usize) -> bool {
        if self.pairs_only() && block.len() >= 2 {
            return false;
        }
        match self.family {
            Family::Anc(w) | Family::AncPairs(w) => w.at(*block.last().unwrap()) != w.at(x),
            _ => true,
        }
    }

    fn run<F: FnMut(&[Vec<usize>])>(&self, k: usize, visit: &mut F) {
        if !self.gap_ok(1, k) {
            return;
        }
        let mut blocks = Vec::new();
        self.next_interval(vec![(1, k)], &mut blocks, visit);
    }

    fn next_interval<F: FnMut(&[Vec<usize>])>(
        &self,
        mut pending: Vec<(usize, usize)>,
        blocks: &mut Vec<Vec<usize>>,
        visit: &mut F,
    ) {
        while let Some((lo, hi)) = pending.pop() {
            if lo <= hi {
                let mut block = vec![lo];
                let mut gaps = Vec::new();
                self.grow(&mut block, hi, &mut gaps, &pending, blocks, visit);
                return;
            }
        }
        visit(blocks);
    }

    fn grow<F: FnMut(&[Vec<usize>])>(
        &self,
        block: &mut Vec<usize>,
        hi: usize,
        gaps: &mut Vec<(usize, usize)>,
        pending: &[(usize, usize)],
        blocks: &mut Vec<Vec<usize>>,
        visit: &mut F,
    ) {
        let last = *block.last().unwrap();
        if self.block_ok(block) && self.gap_ok(last + 1, hi) {
            let mut next = pending.to_vec();
            next.push((last + 1, hi));
            next.extend(gaps.iter().copied());
            blocks.push(block.clone());
            self.next_interval(next, blocks, visit);
            blocks.pop();
        }
        for x in last + 1..=hi {
            if self.can_append(block, x) && self.gap_ok(last + 1, x - 1) {
                block.push(x);
                gaps.push((last + 1, x - 1));
                self.grow(block, hi, gaps, pending, blocks, visit);
                gaps.pop();
                block.pop();
            }
        }
    }
}

fn collect_sorted(k: usize, family: Family<'_>) -> Vec<Partition> {
    let mut out = Vec::new();
    Generator::new(family).run(k, &mut |blocks| {
        out.push(Partition::from_blocks_unchecked(k, blocks));
    });
    out.sort_unstable();
    out
}

/// Calls `visit` with the (unsorted) blocks of every alternating
/// non-crossing partition of `w`, or only the pair partitions.
pub fn for_each_anc<F: FnMut(&[Vec<usize>])>(w: &Word, pairs_only: bool, mut visit: F) {
    let family = if pairs_only {
        Family::AncPairs(w)
    } else {
        Family::Anc(w)
    };
    Generator::new(family).run(w.len(), &mut visit);
}

/// Calls `visit` with the (unsorted) blocks of every non-crossing partition
/// of `{1..k}`.
pub fn for_each_nc<F: FnMut(&[Vec<usize>])>(k: usize, mut visit: F) {
    Generator::new(Family::Nc).run(k, &mut visit);
}

pub fn enumerate_nc(k: usize) -> Result<Vec<Partition>> {
    check_cap("k", k as u128, NC_ENUMERATION_CAP as u128)?;
    Ok(collect_sorted(k, Family::Nc))
}

pub fn enumerate_nc2(k: usize) -> Result<Vec<Partition>> {
    check_cap("k", k as u128, NC_ENUMERATION_CAP as u128)?;
    Ok(collect_sorted(k, Family::NcPairs))
}

pub fn enumerate_anc(w: &Word) -> Vec<Partition> {
    collect_sorted(w.len(), Family::Anc(w))
}

pub fn enumerate_anc2(w: &Word) -> Vec<Partition> {
    collect_sorted(w.len(), Family::AncPairs(w))
}

pub fn catalan(m: u32) -> BigUint {
    // C_{i+1} = C_i · 2(2i+1) / (i+2), exact at every step
    let mut c = BigUint::one();
    for i in 0..m {
        c = c * (2u32 * (2 * i + 1)) / (i + 2);
    }
    c
}

// ---------------------------------------------------------------------------
// Bad pairs

fn check_anc2(pi: &Partition, w: &Word) -> Result<()> {
    if pi.ground_size() != w.len() {
        return Err(Error::GroundSizeMismatch {
            left: pi.ground_size(),
            right: w.len(),
        });
    }
    if !pi.is_pair_partition() {
        return Err(Error::NotPairPartition);
    }
    if !pi.is_alternating_for(w) {
        return Err(Error::NotAlternating);
    }
    if !pi.is_noncrossing() {
        return Err(Error::InvalidPartition("partition is crossing".into()));
    }
    Ok(())
}

/// For each block (by index), the index of the innermost block surrounding it.
fn parents(pi: &Partition) -> Vec<Option<usize>> {
    let mut out = vec![None; pi.len()];
    // Blocks sorted by minimum; a stack of open blocks gives the nesting.
    let mut open: Vec<usize> = Vec::new();
    for (b, block) in pi.blocks().iter().enumerate() {
        let lo = block[0];
        while let Some(&top) = open.last() {
            if *pi.blocks()[top].last().unwrap() < lo {
                open.pop();
            } else {
                break;
            }
        }
        out[b] = open.last().copied();
        open.push(b);
    }
    out
}

pub fn bad_pairs(pi: &Partition, w: &Word) -> Result<Vec<BadPair>> {
    check_anc2(pi, w)?;
    let parent = parents(pi);
    let mut out: Vec<BadPair> = pi
        .blocks()
        .iter()
        .enumerate()
        .filter_map(|(b, block)| {
            let p = parent[b]?;
            let outer = pi.blocks()[p][0];
            let inner = block[0];
            (w.at(outer) != w.at(inner)).then_some(BadPair { outer, inner })
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

pub fn bad_blocks(pi: &Partition, w: &Word) -> Result<Vec<Vec<usize>>> {
    let inner: BTreeSet<usize> = bad_pairs(pi, w)?.into_iter().map(|p| p.inner).collect();
    Ok(pi
        .blocks()
        .iter()
        .filter(|b| inner.contains(&b[0]))
        .cloned()
        .collect())
}

// ---------------------------------------------------------------------------
// Skeleton and its fibers

/// Skeleton of a closed w-path: the first return to the root pairs the first
/// step with the return step; the excursion in between and the remainder are
/// decomposed recursively.
pub fn skeleton(w: &Word, path: &[usize], d: usize) -> Result<Partition> {
    check_degree(d)?;
    if !path_product(w, path, d)?.is_identity() {
        return Err(Error::NotAClosedPath);
    }
    let mut blocks = Vec::with_capacity(w.len() / 2);
    skeleton_rec(w.letters(), path, 0, &mut blocks);
    Partition::new(w.len(), blocks)
}

fn skeleton_rec(
    letters: &[crate::words::Letter],
    path: &[usize],
    offset: usize,
    blocks: &mut Vec<Vec<usize>>,
) {
    if letters.is_empty() {
        return;
    }
    let mut g = GroupElement::identity();
    let mut r = 0;
    for (t, (&i, &l)) in path.iter().zip(letters).enumerate() {
        g.push(i, l);
        if g.is_identity() {
            r = t + 1;
            break;
        }
    }
    debug_assert!(r >= 2, "closed path must return");
    blocks.push(vec![offset + 1, offset + r]);
    skeleton_rec(&letters[1..r - 1], &path[1..r - 1], offset + 1, blocks);
    skeleton_rec(&letters[r..], &path[r..], offset + r, blocks);
}

/// `∏_{V∈π} (d − 1_{V bad})`.
pub fn preimage_size(pi: &Partition, w: &Word, d: usize) -> Result<BigUint> {
    check_degree(d)?;
    let bad = bad_pairs(pi, w)?.len();
    let good = pi.len() - bad;
    Ok(BigUint::from(d).pow(good as u32) * BigUint::from(d - 1).pow(bad as u32))
}

/// All tuples with equal indices inside each block and different indices
/// across each bad pair, in lexicographic order.
pub fn enumerate_preimage(pi: &Partition, w: &Word, d: usize) -> Result<Vec<Vec<usize>>> {
    check_degree(d)?;
    let bad = bad_pairs(pi, w)?;
    let size = (d as u128)
        .checked_pow(pi.len() as u32)
        .unwrap_or(u128::MAX);
    check_cap("d^|π|", size, PREIMAGE_ENUMERATION_CAP)?;

    let labels = pi.labels();
    // forbidden[b] = block whose value block b must avoid
    let mut forbidden = vec![None; pi.len()];
    for p in &bad {
        forbidden[labels[p.inner]] = Some(labels[p.outer]);
    }

    let mut out = Vec::new();
    let mut values = vec![0usize; pi.len()];
    assign_blocks(0, d, &forbidden, &mut values, &mut |vals| {
        let mut path = vec![0; pi.ground_size()];
        for (x, slot) in path.iter_mut().enumerate() {
            *slot = vals[labels[x + 1]];
        }
        out.push(path);
    });
    Ok(out)
}

fn assign_blocks<F: FnMut(&[usize])>(
    b: usize,
    d: usize,
    forbidden: &[Option<usize>],
    values: &mut [usize],
    emit: &mut F,
) {
    if b == values.len() {
        emit(values);
        return;
    }
    for v in 1..=d {
        // parents have smaller minima, hence are already assigned
        if forbidden[b].is_some_and(|p| values[p] == v) {
            continue;
        }
        values[b] = v;
        assign_blocks(b + 1, d, forbidden, values, emit);
    }
}

// ---------------------------------------------------------------------------
// Merging and refinement

/// Coarsening of `π` in which, for each bad pair of `a`, the inner block is
/// merged into its surrounding block.
pub fn gamma_merge(pi: &Partition, a: &[BadPair], w: &Word) -> Result<Partition> {
    let bad = bad_pairs(pi, w)?;
    for p in a {
        if !bad.contains(p) {
            return Err(Error::PairNotBad {
                outer: p.outer,
                inner: p.inner,
            });
        }
    }
    let labels = pi.labels();
    let mut root: Vec<usize> = (0..pi.len()).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for p in a {
        let (x, y) = (
            find(&mut root, labels[p.outer]),
            find(&mut root, labels[p.inner]),
        );
        root[y] = x;
    }
    let mut merged: HashMap<usize, Vec<usize>> = HashMap::new();
    for (b, block) in pi.blocks().iter().enumerate() {
        let r = find(&mut root, b);
        merged.entry(r).or_default().extend_from_slice(block);
    }
    Partition::new(pi.ground_size(), merged.into_values().collect())
}

/// True iff every block of `fine` lies inside a block of `coarse`.
pub fn is_refinement(fine: &Partition, coarse: &Partition) -> Result<bool> {
    if fine.ground_size() != coarse.ground_size() {
        return Err(Error::GroundSizeMismatch {
            left: fine.ground_size(),
            right: coarse.ground_size(),
        });
    }
    let labels = coarse.labels();
    Ok(fine
        .blocks()
        .iter()
        .all(|b| b.iter().all(|&x| labels[x] == labels[b[0]])))
}

/// Number of pairs `(π, A)` with `π ∈ ANC₂(w)`, `A ⊆ bad_pairs(π, w)` and
/// `γ(π, A) = π′`, grouped by `π′`. Every key is in `ANC(w)`.
pub fn merge_counts(w: &Word) -> Result<HashMap<Partition, u64>> {
    let mut counts = HashMap::new();
    for pi in enumerate_anc2(w) {
        let bad = bad_pairs(&pi, w)?;
        for mask in 0u64..1u64 << bad.len() {
            let a: Vec<BadPair> = bad
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| *p)
                .collect();
            *counts.entry(gamma_merge(&pi, &a, w)?).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// `∏_{V∈π} C_{|V|/2 − 1}`.
pub fn catalan_block_product(pi: &Partition) -> BigUint {
    pi.blocks()
        .iter()
        .map(|b| catalan((b.len() / 2).saturating_sub(1) as u32))
        .product()
}
