//! Reduced words in the free group `F_d` and brute-force enumeration of
//! closed w-paths in the d-regular directed tree.
//!
//! Vertices of the tree are group elements; an arc goes from `g` to
//! `g·e_i`. Following letter `1` along generator `i` multiplies by `e_i`,
//! letter `*` multiplies by `e_i^{-1}`. A w-path is closed when the full
//! product is the identity.

use std::fmt;

use rayon::prelude::*;

use crate::error::{check_cap, Error, Result};
use crate::words::{Letter, Word};

/// Largest supported number of generators.
pub const MAX_DEGREE: usize = 64;
/// Cap on `d^|w|` for brute-force path enumeration.
pub const PATH_ENUMERATION_CAP: u128 = 100_000_000;

/// A reduced word in the free group, stored as a stack of
/// `(generator, exponent)` factors with generators 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupElement {
    factors: Vec<(usize, Letter)>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::default()
    }

    pub fn factors(&self) -> &[(usize, Letter)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Right-multiplies in place by `e_index^{±1}`, cancelling the last factor
    /// when it is the inverse.
    pub fn push(&mut self, index: usize, exponent: Letter) {
        match self.factors.last() {
            Some(&(i, e)) if i == index && e != exponent => {
                self.factors.pop();
            }
            _ => self.factors.push((index, exponent)),
        }
    }

    pub fn multiply_generator(&self, index: usize, exponent: Letter) -> GroupElement {
        let mut g = self.clone();
        g.push(index, exponent);
        g
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "e");
        }
        for (k, (i, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            match e {
                Letter::One => write!(f, "e{i}")?,
                Letter::Star => write!(f, "e{i}^-1")?,
            }
        }
        Ok(())
    }
}

pub fn check_degree(d: usize) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&d) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange(d))
    }
}

/// Product `e_{i1}^{w1} ⋯ e_{ik}^{wk}`. Indices are 1-based.
pub fn path_product(w: &Word, path: &[usize], d: usize) -> Result<GroupElement> {
    if path.len() != w.len() {
        return Err(Error::InvalidArgument(format!(
            "path has {} entries but the word has {} letters",
            path.len(),
            w.len()
        )));
    }
    let mut g = GroupElement::identity();
    for (&i, &l) in path.iter().zip(w.letters()) {
        if i == 0 || i > d {
            return Err(Error::GeneratorOutOfRange {
                index: i,
                degree: d,
            });
        }
        g.push(i, l);
    }
    Ok(g)
}

pub fn is_closed_path(w: &Word, path: &[usize], d: usize) -> Result<bool> {
    Ok(path_product(w, path, d)?.is_identity())
}

fn check_enumeration(w: &Word, d: usize) -> Result<()> {
    check_degree(d)?;
    let size = (d as u128).checked_pow(w.len() as u32).unwrap_or(u128::MAX);
    check_cap("d^|w|", size, PATH_ENUMERATION_CAP)
}

/// Depth-first search over prefixes sharing one factor stack. A prefix is
/// abandoned once its reduced length exceeds the number of remaining steps.
struct PathSearch<'a> {
    letters: &'a [Letter],
    d: usize,
    stack: GroupElement,
    prefix: Vec<usize>,
}

impl<'a> PathSearch<'a> {
    fn new(letters: &'a [Letter], d: usize) -> Self {
        PathSearch {
            letters,
            d,
            stack: GroupElement::identity(),
            prefix: Vec::with_capacity(letters.len()),
        }
    }

    fn run<F: FnMut(&[usize])>(&mut self, visit: &mut F) {
        let step = self.prefix.len();
        if step == self.letters.len() {
            if self.stack.is_identity() {
                visit(&self.prefix);
            }
            return;
        }
        let remaining = self.letters.len() - step;
        let letter = self.letters[step];
        for i in 1..=self.d {
            let cancels =
                matches!(self.stack.factors.last(), Some(&(j, e)) if j == i && e != letter);
            self.stack.push(i, letter);
            if self.stack.len() < remaining {
                self.prefix.push(i);
                self.run(visit);
                self.prefix.pop();
            }
            if cancels {
                self.stack.factors.push((i, letter.flip()));
            } else {
                self.stack.factors.pop();
            }
        }
    }
}

fn search_branch<F: FnMut(&[usize])>(w: &Word, d: usize, first: usize, visit: &mut F) {
    let letters = w.letters();
    let mut search = PathSearch::new(letters, d);
    search.stack.push(first, letters[0]);
    if search.stack.len() < letters.len() {
        search.prefix.push(first);
        search.run(visit);
    }
}

/// All closed w-paths in lexicographic order. Branches on the first index
/// run in parallel and are concatenated in index order.
pub fn enumerate_wpaths(w: &Word, d: usize) -> Result<Vec<Vec<usize>>> {
    check_enumeration(w, d)?;
    if w.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let branches: Vec<Vec<Vec<usize>>> = (1..=d)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            search_branch(w, d, first, &mut |p| out.push(p.to_vec()));
            out
        })
        .collect();
    Ok(branches.into_iter().flatten().collect())
}

/// Number of closed w-paths, without materializing them.
pub fn count_wpaths(w: &Word, d: usize) -> Result<u64> {
    check_enumeration(w, d)?;
    if w.is_empty() {
        return Ok(1);
    }
    Ok((1..=d)
        .into_par_iter()
        .map(|first| {
            let mut n = 0u64;
            search_branch(w, d, first, &mut |_| n += 1);
            n
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Plain product over every tuple in [d]^k, no pruning.
    fn exhaustive(word: &Word, d: usize) -> Vec<Vec<usize>> {
        let k = word.len();
        let total = d.pow(k as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let mut path = vec![0; k];
            for slot in path.iter_mut().rev() {
                *slot = c % d + 1;
                c /= d;
            }
            if path_product(word, &path, d).unwrap().is_identity() {
                out.push(path);
            }
        }
        out
    }

    #[test]
    fn multiplication() {
        let e = GroupElement::identity();
        let a = e.multiply_generator(1, Letter::One);
        assert_eq!(a.factors(), &[(1, Letter::One)]);
        assert!(a.multiply_generator(1, Letter::Star).is_identity());
        assert_eq!(
            a.multiply_generator(2, Letter::Star).factors(),
            &[(1, Letter::One), (2, Letter::Star)]
        );
        assert!(e.is_identity());
        assert!(!a.is_identity());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(
            enumerate_wpaths(&w(""), 4).unwrap(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(
            enumerate_wpaths(&w("1*"), 3).unwrap(),
            vec![vec![1, 1], vec![2, 2], vec![3, 3]]
        );
        assert!(enumerate_wpaths(&w("11"), 3).unwrap().is_empty());
        assert_eq!(count_wpaths(&w("1*1*"), 2).unwrap(), 6);
        assert_eq!(count_wpaths(&w("1**1"), 2).unwrap(), 4);
        assert_eq!(count_wpaths(&w(""), 5).unwrap(), 1);
    }

    #[test]
    fn pruned_search_matches_exhaustive_scan() {
        for word in Word::all_up_to(6) {
            for d in 1..=3 {
                let pruned = enumerate_wpaths(&word, d).unwrap();
                assert_eq!(pruned, exhaustive(&word, d), "w={word} d={d}");
                assert_eq!(count_wpaths(&word, d).unwrap(), pruned.len() as u64);
            }
        }
    }

    #[test]
    fn reduced_length_changes_by_one() {
        let mut g = GroupElement::identity();
        let steps = [
            (1, Letter::One),
            (2, Letter::Star),
            (2, Letter::One),
            (3, Letter::One),
        ];
        for (i, l) in steps {
            let before = g.len();
            g.push(i, l);
            assert_eq!((g.len() as i64 - before as i64).abs(), 1);
        }
    }

    #[test]
    fn caps_and_bounds() {
        assert!(matches!(
            count_wpaths(&w("1*1*1*1*1*1*1*"), 64),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(count_wpaths(&w("1*"), 0), Err(Error::DegreeOutOfRange(0)));
        assert_eq!(
            path_product(&w("1*"), &[1, 3], 2),
            Err(Error::GeneratorOutOfRange {
                index: 3,
                degree: 2
            })
        );
    }

    #[test]
    fn degree_one_counts_balanced_words_once() {
        for word in Word::all_up_to(8) {
            let expected = u64::from(word.count(Letter::One) == word.count(Letter::Star));
            assert_eq!(count_wpaths(&word, 1).unwrap(), expected, "w={word}");
        }
    }
}
