//! Finite multidigraphs: regularity predicates, walk counts `A^w(v, v)`,
//! traces, plain-cycle counts and the local tree-likeness check.
//!
//! Vertices are `0..n` in the API; the text file format is 1-based. Each
//! parallel arc is a separate object with its own id, so a double arc
//! `i → j` contributes two distinct arcs to cycle counting.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::moments::star_moment_formula;
use crate::words::{Letter, Word};

/// Largest cycle length / radius accepted by the cycle routines.
pub const MAX_CYCLE_LEN: usize = 12;
/// Default vertex count above which traces use sparse matrix products.
pub const DEFAULT_TRACE_CROSSOVER: usize = 512;
/// Up to this length plain cycles are counted through canonical representatives.
const CANONICAL_CYCLE_LEN: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl Digraph {
    /// Graph on `n` vertices with one arc per entry (duplicates are parallel arcs).
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Digraph {
            n,
            arcs: Vec::new(),
            out_arcs: vec![Vec::new(); n],
            in_arcs: vec![Vec::new(); n],
        };
        for (tail, head) in arcs {
            if tail >= n || head >= n {
                return Err(Error::InvalidArgument(format!(
                    "arc ({tail}, {head}) outside 0..{n}"
                )));
            }
            let id = g.arcs.len();
            g.arcs.push(Arc { tail, head });
            g.out_arcs[tail].push(id);
            g.in_arcs[head].push(id);
        }
        Ok(g)
    }

    /// Graph from `(tail, head, multiplicity)` triples.
    pub fn from_multiplicities(n: usize, entries: &[(usize, usize, usize)]) -> Result<Self> {
        Digraph::from_arcs(
            n,
            entries
                .iter()
                .flat_map(|&(t, h, m)| std::iter::repeat_n((t, h), m)),
        )
    }

    pub fn directed_cycle(n: usize) -> Self {
        Digraph::from_arcs(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_arcs[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_arcs[v].len()
    }

    pub fn transpose(&self) -> Digraph {
        Digraph::from_arcs(self.n, self.arcs.iter().map(|a| (a.head, a.tail)))
            .expect("same vertex set")
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let shift = self.n;
        Digraph::from_arcs(
            self.n + other.n,
            self.arcs
                .iter()
                .map(|a| (a.tail, a.head))
                .chain(other.arcs.iter().map(|a| (a.tail + shift, a.head + shift))),
        )
        .expect("valid union")
    }

    /// `(tail, head, multiplicity)` sorted by tail then head.
    pub fn multiplicities(&self) -> Vec<(usize, usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self.arcs.iter().map(|a| (a.tail, a.head)).collect();
        pairs.sort_unstable();
        let mut out: Vec<(usize, usize, usize)> = Vec::new();
        for (t, h) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == t && last.1 == h => last.2 += 1,
                _ => out.push((t, h, 1)),
            }
        }
        out
    }

    pub fn is_d_regular(&self, d: usize) -> bool {
        (0..self.n).all(|v| self.out_degree(v) == d && self.in_degree(v) == d)
    }

    /// No self-loops and no parallel arcs.
    pub fn is_simple(&self) -> bool {
        self.multiplicities()
            .iter()
            .all(|&(t, h, m)| t != h && m == 1)
    }

    /// Neighbours reached by one step along `letter`: heads of out-arcs for
    /// `1`, tails of in-arcs for `*`.
    fn step_targets(&self, v: usize, letter: Letter) -> impl Iterator<Item = usize> + '_ {
        let (ids, forward) = match letter {
            Letter::One => (&self.out_arcs[v], true),
            Letter::Star => (&self.in_arcs[v], false),
        };
        ids.iter().map(move |&id| {
            let a = self.arcs[id];
            if forward {
                a.head
            } else {
                a.tail
            }
        })
    }

    /// `A^w(v, v)`: propagates the indicator of `v` through the letters,
    /// using `A` for `1` and `Aᵀ` for `*`.
    pub fn walk_count_diagonal(&self, v: usize, w: &Word) -> Result<u128> {
        if v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} outside 0..{}",
                self.n
            )));
        }
        let mut scratch = vec![0u128; self.n];
        let row = self.propagate(&[(v, 1)], w, &mut scratch)?;
        Ok(row.iter().find(|&&(u, _)| u == v).map_or(0, |&(_, c)| c))
    }

    /// Sparse row vector times `A^{w_1} ⋯ A^{w_k}`. `scratch` must be zeroed
    /// and of length `n`; it is left zeroed.
    fn propagate(
        &self,
        start: &[(usize, u128)],
        w: &Word,
        scratch: &mut [u128],
    ) -> Result<Vec<(usize, u128)>> {
        let mut row: Vec<(usize, u128)> = start.to_vec();
        let mut touched: Vec<usize> = Vec::new();
        for &letter in w.letters() {
            for &(u, c) in &row {
                for t in self.step_targets(u, letter) {
                    if scratch[t] == 0 {
                        touched.push(t);
                    }
                    scratch[t] = scratch[t]
                        .checked_add(c)
                        .ok_or(Error::Overflow("walk count"))?;
                }
            }
            row.clear();
            for &t in &touched {
                row.push((t, scratch[t]));
                scratch[t] = 0;
            }
            touched.clear();
        }
        Ok(row)
    }

    /// Unnormalized trace `Tr A^w`, choosing the evaluation strategy by size.
    pub fn star_moment_trace(&self, w: &Word) -> Result<u128> {
        self.star_moment_trace_with(
            w,
            TraceStrategy::Auto {
                crossover: DEFAULT_TRACE_CROSSOVER,
            },
        )
    }

    pub fn star_moment_trace_with(&self, w: &Word, strategy: TraceStrategy) -> Result<u128> {
        let sparse = match strategy {
            TraceStrategy::Auto { crossover } => self.n > crossover,
            TraceStrategy::PerVertex => false,
            TraceStrategy::SparseProduct => true,
        };
        if sparse {
            self.trace_by_products(w)
        } else {
            self.trace_per_vertex(w)
        }
    }

    fn trace_per_vertex(&self, w: &Word) -> Result<u128> {
        let counts: Vec<u128> = (0..self.n)
            .into_par_iter()
            .map_init(
                || vec![0u128; self.n],
                |scratch, v| {
                    let row = self.propagate(&[(v, 1)], w, scratch)?;
                    Ok(row.iter().find(|&&(u, _)| u == v).map_or(0, |&(_, c)| c))
                },
            )
            .collect::<Result<_>>()?;
        sum_checked(counts)
    }

    /// `Tr(A^{w_1} ⋯ A^{w_k})` through `k` sparse products of integer
    /// matrices held in compressed-row form.
    fn trace_by_products(&self, w: &Word) -> Result<u128> {
        let mut m = SparseMatrix::identity(self.n);
        for &letter in w.letters() {
            m = m.times_adjacency(self, letter)?;
        }
        sum_checked((0..self.n).map(|i| m.get(i, i)))
    }

    // -----------------------------------------------------------------------
    // Plain cycles

    /// Calls `visit` for every closed walk of exactly `j` distinct arcs
    /// starting at `start`, with the `(arc, letter)` sequence.
    fn closed_trails_from<F: FnMut(&[(usize, Letter)])>(
        &self,
        start: usize,
        j: usize,
        visit: &mut F,
    ) {
        let mut used = vec![false; self.arcs.len()];
        let mut seq = Vec::with_capacity(j);
        self.trail_dfs(start, start, j, &mut used, &mut seq, visit);
    }

    fn trail_dfs<F: FnMut(&[(usize, Letter)])>(
        &self,
        start: usize,
        cur: usize,
        j: usize,
        used: &mut [bool],
        seq: &mut Vec<(usize, Letter)>,
        visit: &mut F,
    ) {
        if seq.len() == j {
            if cur == start {
                visit(seq);
            }
            return;
        }
        for letter in [Letter::One, Letter::Star] {
            let ids = match letter {
                Letter::One => &self.out_arcs[cur],
                Letter::Star => &self.in_arcs[cur],
            };
            for &id in ids {
                if used[id] {
                    continue;
                }
                let a = self.arcs[id];
                let next = if letter == Letter::One {
                    a.head
                } else {
                    a.tail
                };
                used[id] = true;
                seq.push((id, letter));
                self.trail_dfs(start, next, j, used, seq, visit);
                seq.pop();
                used[id] = false;
            }
        }
    }

    /// Number of plain cycles of length `j`: closed walks of `j` distinct
    /// arcs (either orientation) divided by the `2j` rotations and reversals.
    pub fn plain_cycle_count(&self, j: usize) -> Result<CycleCount> {
        if j == 0 {
            return Err(Error::InvalidArgument(
                "cycle length must be at least 1".into(),
            ));
        }
        check_cap("cycle length", j as u128, MAX_CYCLE_LEN as u128)?;
        let per_vertex: Vec<(u128, u128)> = (0..self.n)
            .into_par_iter()
            .map(|v| {
                let mut raw = 0u128;
                let mut canonical = 0u128;
                self.closed_trails_from(v, j, &mut |seq| {
                    raw += 1;
                    if j <= CANONICAL_CYCLE_LEN && is_canonical_cycle(seq) {
                        canonical += 1;
                    }
                });
                (raw, canonical)
            })
            .collect();
        let raw: u128 = per_vertex.iter().map(|p| p.0).sum();
        let canonical: u128 = per_vertex.iter().map(|p| p.1).sum();
        let divisor = 2 * j as u128;
        if !raw.is_multiple_of(divisor) {
            return Err(Error::NormalizationFailure {
                length: j,
                raw,
                divisor,
            });
        }
        let count = if j <= CANONICAL_CYCLE_LEN {
            if canonical * divisor != raw {
                return Err(Error::NormalizationFailure {
                    length: j,
                    raw,
                    divisor,
                });
            }
            canonical
        } else {
            raw / divisor
        };
        Ok(CycleCount {
            length: j,
            count,
            raw,
        })
    }

    /// Vertices at undirected distance at most `k` from a vertex lying on a
    /// plain cycle of length at most `k`. Sorted ascending.
    pub fn bad_vertex_set(&self, k: usize) -> Result<Vec<usize>> {
        check_cap("radius", k as u128, MAX_CYCLE_LEN as u128)?;
        let on_cycle: Vec<bool> = (0..self.n)
            .into_par_iter()
            .map(|v| {
                (1..=k).any(|j| {
                    let mut found = false;
                    self.closed_trails_from(v, j, &mut |_| found = true);
                    found
                })
            })
            .collect();
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for v in (0..self.n).filter(|&v| on_cycle[v]) {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            if dist[v] == k {
                continue;
            }
            for letter in [Letter::One, Letter::Star] {
                for u in self.step_targets(v, letter) {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        Ok((0..self.n).filter(|&v| dist[v] != usize::MAX).collect())
    }

    /// For every vertex outside [`bad_vertex_set`](Self::bad_vertex_set) and
    /// every word of length at most `k`, compares `A^w(v, v)` with `M(w)`.
    pub fn tree_likeness_check(&self, d: usize, k: usize) -> Result<TreeCheckReport> {
        if !self.is_d_regular(d) {
            return Err(Error::NotRegular(d));
        }
        let bad = self.bad_vertex_set(k)?;
        let mut is_bad = vec![false; self.n];
        for &v in &bad {
            is_bad[v] = true;
        }
        let words: Vec<(Word, u128)> = Word::all_up_to(k)
            .map(|w| {
                let m = star_moment_formula(&w, d)?;
                let m = u128::try_from(m).map_err(|_| Error::Overflow("star moment"))?;
                Ok((w, m))
            })
            .collect::<Result<_>>()?;
        let good: Vec<usize> = (0..self.n).filter(|&v| !is_bad[v]).collect();
        let per_vertex: Vec<Vec<TreeViolation>> = good
            .par_iter()
            .map(|&v| {
                let mut found = Vec::new();
                for (w, expected) in &words {
                    let observed = self.walk_count_diagonal(v, w)?;
                    if observed != *expected {
                        found.push(TreeViolation {
                            vertex: v,
                            word: w.clone(),
                            observed,
                            expected: *expected,
                        });
                    }
                }
                Ok(found)
            })
            .collect::<Result<_>>()?;
        Ok(TreeCheckReport {
            n: self.n,
            d,
            radius: k,
            bad_vertices: bad.len(),
            bad_fraction: if self.n == 0 {
                0.0
            } else {
                bad.len() as f64 / self.n as f64
            },
            vertices_checked: good.len(),
            words_checked: words.len(),
            violations: per_vertex.into_iter().flatten().collect(),
        })
    }

    // -----------------------------------------------------------------------
    // Text format: first line `n d`, then `tail head multiplicity` (1-based).

    pub fn to_text(&self, d: usize) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n, d).unwrap();
        for (t, h, m) in self.multiplicities() {
            writeln!(s, "{} {} {}", t + 1, h + 1, m).unwrap();
        }
        s
    }

    /// Parses the text format, returning the graph and the declared degree.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<(Digraph, usize)> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::GraphFormat {
            line: 1,
            message: "missing header `n d`".into(),
        })?;
        let head = parse_fields(line, header, 2)?;
        let (n, d) = (head[0], head[1]);
        let mut entries = Vec::new();
        for (line, body) in lines {
            let f = parse_fields(line, body, 3)?;
            if f[0] == 0 || f[0] > n || f[1] == 0 || f[1] > n {
                return Err(Error::GraphFormat {
                    line,
                    message: format!("vertex outside 1..={n}"),
                });
            }
            if f[2] == 0 {
                return Err(Error::GraphFormat {
                    line,
                    message: "multiplicity must be ≥ 1".into(),
                });
            }
            entries.push((f[0] - 1, f[1] - 1, f[2]));
        }
        Ok((Digraph::from_multiplicities(n, &entries)?, d))
    }

    pub fn read_file(path: &Path) -> Result<(Digraph, usize)> {
        Digraph::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path, d: usize) -> Result<()> {
        std::fs::write(path, self.to_text(d))?;
        Ok(())
    }
}

fn parse_fields(line: usize, text: &str, expected: usize) -> Result<Vec<usize>> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != expected {
        return Err(Error::GraphFormat {
            line,
            message: format!("expected {expected} fields, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>().map_err(|_| Error::GraphFormat {
                line,
                message: format!("not a non-negative integer: {f:?}"),
            })
        })
        .collect()
}

fn sum_checked(values: impl IntoIterator<Item = u128>) -> Result<u128> {
    values
        .into_iter()
        .try_fold(0u128, |acc, x| acc.checked_add(x))
        .ok_or(Error::Overflow("trace"))
}

/// The `2j` rotations and reversals of a closed trail all describe the same
/// plain cycle; the lexicographically least one is the representative.
fn is_canonical_cycle(seq: &[(usize, Letter)]) -> bool {
    let j = seq.len();
    let reversed: Vec<(usize, Letter)> = seq.iter().rev().map(|&(a, l)| (a, l.flip())).collect();
    for base in [seq, &reversed[..]] {
        for r in 0..j {
            let rotated = base[r..].iter().chain(&base[..r]);
            if rotated.lt(seq.iter()) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStrategy {
    /// Per-vertex propagation up to `crossover` vertices, sparse products above.
    Auto {
        crossover: usize,
    },
    PerVertex,
    SparseProduct,
}

impl Default for TraceStrategy {
    fn default() -> Self {
        TraceStrategy::Auto {
            crossover: DEFAULT_TRACE_CROSSOVER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleCount {
    pub length: usize,
    pub count: u128,
    /// Number of closed trails before dividing by `2j`.
    pub raw: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeViolation {
    pub vertex: usize,
    pub word: Word,
    pub observed: u128,
    pub expected: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeCheckReport {
    pub n: usize,
    pub d: usize,
    pub radius: usize,
    pub bad_vertices: usize,
    pub bad_fraction: f64,
    pub vertices_checked: usize,
    pub words_checked: usize,
    pub violations: Vec<TreeViolation>,
}

/// Integer matrix in compressed-row form.
struct SparseMatrix {
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<u128>,
}

impl SparseMatrix {
    fn identity(n: usize) -> Self {
        SparseMatrix {
            row_start: (0..=n).collect(),
            cols: (0..n).collect(),
            vals: vec![1; n],
        }
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (usize, u128)> + '_ {
        let r = self.row_start[i]..self.row_start[i + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.vals[r].iter().copied())
    }

    fn get(&self, i: usize, j: usize) -> u128 {
        self.row(i).find(|&(c, _)| c == j).map_or(0, |(_, v)| v)
    }

    /// `self · A` for letter `1`, `self · Aᵀ` for `*`.
    fn times_adjacency(&self, g: &Digraph, letter: Letter) -> Result<SparseMatrix> {
        let n = g.n;
        let rows: Vec<Vec<(usize, u128)>> = (0..n)
            .into_par_iter()
            .map_init(
                || (vec![0u128; n], Vec::new()),
                |(acc, touched), i| {
                    for (k, v) in self.row(i) {
                        for t in g.step_targets(k, letter) {
                            if acc[t] == 0 {
                                touched.push(t);
                            }
                            acc[t] = acc[t]
                                .checked_add(v)
                                .ok_or(Error::Overflow("matrix product"))?;
                        }
                    }
                    touched.sort_unstable();
                    let row = touched
                        .iter()
                        .map(|&t| (t, std::mem::take(&mut acc[t])))
                        .collect();
                    touched.clear();
                    Ok(row)
                },
            )
            .collect::<Result<_>>()?;
        let mut out = SparseMatrix {
            row_start: vec![0],
            cols: Vec::new(),
            vals: Vec::new(),
        };
        for row in rows {
            for (c, v) in row {
                out.cols.push(c);
                out.vals.push(v);
            }
            out.row_start.push(out.cols.len());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn triangle() -> Digraph {
        Digraph::directed_cycle(3)
    }

    /// `Σ_v` over all vertex sequences of products of matrix entries: the
    /// literal definition of the cycle-count sum with an injectivity check on
    /// arc identities, enumerating arc choices explicitly.
    fn raw_cycle_sum_oracle(g: &Digraph, j: usize) -> u128 {
        let mut total = 0;
        for word in Word::all_of_length(j) {
            // every sequence of j arcs consistent with the letters
            let m = g.arc_count();
            let mut idx = vec![0usize; j];
            'outer: loop {
                let arcs: Vec<Arc> = idx.iter().map(|&i| g.arcs()[i]).collect();
                let distinct = {
                    let mut s = idx.clone();
                    s.sort_unstable();
                    s.windows(2).all(|p| p[0] != p[1])
                };
                if distinct {
                    // consecutive arcs chain along the letters and close up
                    let ends: Vec<(usize, usize)> = arcs
                        .iter()
                        .zip(word.letters())
                        .map(|(a, l)| match l {
                            Letter::One => (a.tail, a.head),
                            Letter::Star => (a.head, a.tail),
                        })
                        .collect();
                    let chained = (0..j).all(|t| ends[t].1 == ends[(t + 1) % j].0);
                    if chained {
                        total += 1;
                    }
                }
                for t in (0..j).rev() {
                    idx[t] += 1;
                    if idx[t] < m {
                        continue 'outer;
                    }
                    idx[t] = 0;
                }
                break;
            }
        }
        total
    }

    #[test]
    fn regularity_and_simplicity() {
        assert!(Digraph::directed_cycle(5).is_d_regular(1));
        let chord = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        assert!(!chord.is_d_regular(1));
        assert!(triangle().is_simple());
        assert!(!Digraph::from_arcs(1, [(0, 0)]).unwrap().is_simple());
        assert!(!Digraph::from_multiplicities(2, &[(0, 1, 2)])
            .unwrap()
            .is_simple());
    }

    #[test]
    fn walk_counts() {
        let g = triangle();
        assert_eq!(g.walk_count_diagonal(0, &w("")).unwrap(), 1);
        assert_eq!(g.walk_count_diagonal(0, &w("1*")).unwrap(), 1);
        assert_eq!(g.walk_count_diagonal(0, &w("111")).unwrap(), 1);
        assert_eq!(g.walk_count_diagonal(0, &w("11")).unwrap(), 0);
    }

    #[test]
    fn traces() {
        let g = triangle();
        assert_eq!(g.star_moment_trace(&w("111")).unwrap(), 3);
        assert_eq!(g.star_moment_trace(&w("")).unwrap(), 3);
        assert_eq!(
            g.disjoint_union(&g).star_moment_trace(&w("111")).unwrap(),
            6
        );
        for s in [TraceStrategy::PerVertex, TraceStrategy::SparseProduct] {
            assert_eq!(g.star_moment_trace_with(&w("1*1*"), s).unwrap(), 3);
        }
    }

    #[test]
    fn cycle_counts() {
        let loop1 = Digraph::from_arcs(1, [(0, 0)]).unwrap();
        assert_eq!(loop1.plain_cycle_count(1).unwrap().count, 1);
        assert_eq!(loop1.plain_cycle_count(1).unwrap().raw, 2);
        let digon = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(digon.plain_cycle_count(2).unwrap().count, 1);
        assert_eq!(triangle().plain_cycle_count(3).unwrap().count, 1);
        assert_eq!(triangle().plain_cycle_count(2).unwrap().count, 0);
        assert!(matches!(
            triangle().plain_cycle_count(13),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn cycle_dfs_matches_literal_sum() {
        let graphs = [
            triangle(),
            Digraph::from_arcs(2, [(0, 1), (1, 0), (0, 0), (0, 1)]).unwrap(),
            Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 2), (1, 1)]).unwrap(),
        ];
        for g in &graphs {
            for j in 1..=4 {
                let c = g.plain_cycle_count(j).unwrap();
                assert_eq!(c.raw, raw_cycle_sum_oracle(g, j), "j={j}");
            }
        }
    }

    #[test]
    fn long_cycles_use_division() {
        let g = Digraph::directed_cycle(8);
        assert_eq!(g.plain_cycle_count(8).unwrap().count, 1);
        assert_eq!(g.plain_cycle_count(7).unwrap().count, 0);
    }

    #[test]
    fn bad_vertices() {
        assert_eq!(triangle().bad_vertex_set(3).unwrap(), vec![0, 1, 2]);
        let path = Digraph::from_arcs(4, [(0, 1), (2, 1), (2, 3)]).unwrap();
        assert!(path.bad_vertex_set(5).unwrap().is_empty());
        assert!(Digraph::directed_cycle(10)
            .bad_vertex_set(3)
            .unwrap()
            .is_empty());
        // a triangle with a tail of length 3
        let g = Digraph::from_arcs(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(g.bad_vertex_set(3).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(g.bad_vertex_set(2).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn tree_check_on_cycles() {
        let r = triangle().tree_likeness_check(1, 2).unwrap();
        assert!(r.violations.is_empty());
        let r = triangle().tree_likeness_check(1, 3).unwrap();
        assert_eq!(r.vertices_checked, 0);
        let r = Digraph::directed_cycle(50)
            .tree_likeness_check(1, 2)
            .unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.vertices_checked, 50);
        assert_eq!(
            triangle().tree_likeness_check(2, 2),
            Err(Error::NotRegular(2))
        );
    }

    #[test]
    fn text_round_trip() {
        let g = Digraph::from_multiplicities(3, &[(0, 1, 2), (1, 2, 1), (2, 0, 1)]).unwrap();
        let text = g.to_text(2);
        assert_eq!(text, "3 2\n1 2 2\n2 3 1\n3 1 1\n");
        let (back, d) = Digraph::from_text(&text).unwrap();
        assert_eq!(d, 2);
        assert_eq!(back.multiplicities(), g.multiplicities());
        assert!(matches!(
            Digraph::from_text("2 1\n1 3 1\n"),
            Err(Error::GraphFormat { line: 2, .. })
        ));
        assert!(matches!(
            Digraph::from_text("2 1\n1 2\n"),
            Err(Error::GraphFormat { .. })
        ));
    }

    fn arb_graph() -> impl Strategy<Value = Digraph> {
        (1usize..=20).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..=3 * n)
                .prop_map(move |arcs| Digraph::from_arcs(n, arcs).unwrap())
        })
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::bool::ANY, 0..=6).prop_map(|b| {
            Word::new(
                b.into_iter()
                    .map(|s| if s { Letter::Star } else { Letter::One })
                    .collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trace_is_cyclic(g in arb_graph(), word in arb_word(), r in 0usize..6) {
            prop_assert_eq!(
                g.star_moment_trace(&word).unwrap(),
                g.star_moment_trace(&word.rotate(r)).unwrap()
            );
        }

        #[test]
        fn transpose_flips_letters(g in arb_graph(), word in arb_word()) {
            prop_assert_eq!(
                g.star_moment_trace(&word).unwrap(),
                g.transpose().star_moment_trace(&word.star_flip()).unwrap()
            );
        }

        #[test]
        fn strategies_agree(g in arb_graph(), word in arb_word()) {
            prop_assert_eq!(
                g.star_moment_trace_with(&word, TraceStrategy::PerVertex).unwrap(),
                g.star_moment_trace_with(&word, TraceStrategy::SparseProduct).unwrap()
            );
        }

        #[test]
        fn raw_cycle_sums_divide(g in arb_graph(), j in 1usize..=4) {
            let c = g.plain_cycle_count(j).unwrap();
            prop_assert_eq!(c.raw % (2 * j as u128), 0);
            prop_assert_eq!(c.count * 2 * j as u128, c.raw);
        }
    }
}
