//! Exhaustive search for binary pairs of maximum zone width.
//!
//! Every binary CZCP is width-equivalent to a canonical pair with `a_0 = b_0 = +`,
//! `b_i = a_i` on the first `Z` positions and `b_i = -a_i` on the last `Z`. For
//! such pairs every tail-zone condition holds identically, and the front-zone
//! condition reads `sum_{n : s_n = s_{n+tau}} a_n a_{n+tau} = 0` for
//! `1 <= tau <= Z`, where `b = a ⊙ s`. The search therefore enumerates the free
//! middle of `s` and, depth first, the bits of `a`, counting agreements over
//! precomputed bit masks and pruning on partial sums.

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::czcp::{czcp_width, SequencePair};
use crate::data::{parse_table_csv, table1_pairs, PrintedPair};
use crate::error::{Error, Result};
use crate::sequence::QarySequence;

/// Parameters of one search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub n: usize,
    /// Upper end of the descent; defaults to `N/2`.
    pub target_z: Option<usize>,
    /// Canonical-class enumeration; `false` enumerates all `2^(2N)` pairs.
    pub symmetry_reduction: bool,
    /// Worker threads; zero uses all available cores.
    pub workers: usize,
    /// Number of leading bits of `a` fixed per parallel subtask.
    pub split_depth: usize,
    pub max_n: usize,
    /// Maximum number of witnesses reported.
    pub witness_limit: usize,
}

/// Largest length accepted by the unreduced enumeration.
pub const NAIVE_MAX_N: usize = 12;

impl SearchTask {
    pub fn new(n: usize) -> Self {
        SearchTask {
            n,
            target_z: None,
            symmetry_reduction: true,
            workers: 0,
            split_depth: 8,
            max_n: 32,
            witness_limit: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::param(format!("length must be at least 2, got {}", self.n)));
        }
        if !self.n.is_multiple_of(2) {
            return Err(Error::OddLength(self.n));
        }
        if self.n > self.max_n.min(63) {
            return Err(Error::param(format!(
                "length {} exceeds the configured maximum {}",
                self.n,
                self.max_n.min(63)
            )));
        }
        if !self.symmetry_reduction && self.n > NAIVE_MAX_N {
            return Err(Error::param(format!(
                "unreduced enumeration is limited to N <= {NAIVE_MAX_N}"
            )));
        }
        if let Some(z) = self.target_z {
            if z == 0 || z > self.n / 2 {
                return Err(Error::param(format!("target width {z} outside 1..={}", self.n / 2)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub z_max: usize,
    /// Canonical witnesses in lexicographic order, `-` before `+`.
    pub witnesses: Vec<SequencePair>,
    /// Search-tree nodes visited.
    pub explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Precomputed masks for one pattern `s` at one width.
struct Kernel {
    n: usize,
    z: usize,
    /// `touch[k]`: shifts whose term `(k - tau, k)` counts.
    touch: Vec<Vec<u8>>,
    /// `rem[k][tau]`: counted terms with right end beyond `k`.
    rem: Vec<Vec<i32>>,
}

impl Kernel {
    /// `None` if some shift has an odd number of counted terms.
    #[allow(clippy::needless_range_loop)]
    fn new(n: usize, z: usize, s_minus: u64) -> Option<Self> {
        let bit = |x: u64, i: usize| (x >> i) & 1;
        let mut touch = vec![Vec::new(); n];
        let mut rem = vec![vec![0i32; z + 1]; n];
        for tau in 1..=z {
            let mut count = 0;
            for m in tau..n {
                if bit(s_minus, m - tau) == bit(s_minus, m) {
                    touch[m].push(tau as u8);
                    count += 1;
                }
            }
            if count % 2 != 0 {
                return None;
            }
            for k in 0..n {
                rem[k][tau] = touch[k + 1..].iter().filter(|t| t.contains(&(tau as u8))).count() as i32;
            }
        }
        Some(Kernel { n, z, touch, rem })
    }

    /// First `a` in lexicographic order (`-` first) extending `prefix` on bits `1..=depth`.
    fn first(&self, prefix: u64, depth: usize, explored: &mut u64) -> Option<u64> {
        let mut partial = vec![0i32; self.z + 1];
        self.dfs(1, 0, prefix, depth, &mut partial, explored)
    }

    fn dfs(&self, k: usize, a: u64, prefix: u64, depth: usize, partial: &mut [i32], explored: &mut u64) -> Option<u64> {
        if k == self.n {
            return Some(a);
        }
        let choices: &[u64] = if k <= depth {
            if (prefix >> k) & 1 == 1 {
                &[1]
            } else {
                &[0]
            }
        } else {
            &[1, 0]
        };
        for &bit in choices {
            *explored += 1;
            let a2 = a | (bit << k);
            let mut ok = true;
            for &t in &self.touch[k] {
                let t = t as usize;
                let same = ((a2 >> (k - t)) & 1) == bit;
                partial[t] += if same { 1 } else { -1 };
                if partial[t].abs() > self.rem[k][t] {
                    ok = false;
                }
            }
            if ok {
                if let Some(found) = self.dfs(k + 1, a2, prefix, depth, partial, explored) {
                    return Some(found);
                }
            }
            for &t in &self.touch[k] {
                let t = t as usize;
                let same = ((a2 >> (k - t)) & 1) == bit;
                partial[t] -= if same { 1 } else { -1 };
            }
        }
        None
    }
}

/// `b`'s sign mask from the free middle pattern.
fn s_mask(n: usize, z: usize, middle: u64) -> u64 {
    let tail = ((1u64 << z) - 1) << (n - z);
    tail | (middle << z)
}

fn bits_to_sequence(bits: u64, n: usize) -> QarySequence {
    QarySequence::binary_from_minus((0..n).map(|i| (bits >> i) & 1 == 1)).expect("non-empty")
}

/// Lexicographic key with `-` before `+`.
fn lex_key(a: u64, b: u64, n: usize) -> Vec<u8> {
    (0..n)
        .map(|i| (a >> i) & 1)
        .chain((0..n).map(|i| (b >> i) & 1))
        .map(|x| 1 - x as u8)
        .collect()
}

struct Found {
    key: Vec<u8>,
    a: u64,
    b: u64,
}

fn search_width(task: &SearchTask, z: usize) -> (Vec<Found>, u64) {
    let n = task.n;
    let middle_bits = n - 2 * z;
    let depth = task.split_depth.min(n - 1);
    let kernels: Vec<(u64, Kernel)> = (0..1u64 << middle_bits)
        .filter_map(|m| {
            let s = s_mask(n, z, m);
            Kernel::new(n, z, s).map(|k| (s, k))
        })
        .collect();
    let jobs: Vec<(usize, u64)> = (0..kernels.len())
        .flat_map(|i| (0..1u64 << depth).map(move |p| (i, p << 1)))
        .collect();
    let results: Vec<(Option<Found>, u64)> = jobs
        .par_iter()
        .map(|&(i, prefix)| {
            let (s, kernel) = &kernels[i];
            let mut explored = 0;
            let found = kernel.first(prefix, depth, &mut explored).map(|a| {
                let b = a ^ s;
                Found {
                    key: lex_key(a, b, n),
                    a,
                    b,
                }
            });
            (found, explored)
        })
        .collect();
    let explored = results.iter().map(|r| r.1).sum();
    let mut found: Vec<Found> = results.into_iter().filter_map(|r| r.0).collect();
    found.sort_by(|x, y| x.key.cmp(&y.key));
    (found, explored)
}

fn naive_width(a: u64, b: u64, n: usize) -> usize {
    let corr = |x: u64, y: u64, t: usize| -> i32 {
        let m = (1u64 << (n - t)) - 1;
        (n - t) as i32 - 2 * ((x ^ (y >> t)) & m).count_ones() as i32
    };
    let aac: Vec<bool> = (0..n).map(|t| corr(a, a, t) + corr(b, b, t) == 0).collect();
    let acc: Vec<bool> = (0..n).map(|t| corr(a, b, t) + corr(b, a, t) == 0).collect();
    (1..=n / 2)
        .take_while(|&z| (1..=z).all(|t| aac[t]) && (n - z..n).all(|t| aac[t] && acc[t]))
        .last()
        .unwrap_or(0)
}

/// Widest pair found for one `a`: its width and `(key, a, b)`.
type Best = (usize, Option<(Vec<u8>, u64, u64)>);

fn search_naive(task: &SearchTask, z_top: usize) -> (usize, Vec<Found>, u64) {
    let n = task.n;
    let per = 1u64 << n;
    let chunks: Vec<Best> = (0..per)
        .into_par_iter()
        .map(|a| {
            let mut best: Best = (0, None);
            for b in 0..per {
                let w = naive_width(a, b, n).min(z_top);
                if w > 0 {
                    let key = lex_key(a, b, n);
                    let better = match &best {
                        (bw, Some((bk, _, _))) => w > *bw || (w == *bw && key < *bk),
                        _ => true,
                    };
                    if better {
                        best = (w, Some((key, a, b)));
                    }
                }
            }
            best
        })
        .collect();
    let z_max = chunks.iter().map(|c| c.0).max().unwrap_or(0);
    let mut found: Vec<Found> = chunks
        .into_iter()
        .filter(|c| c.0 == z_max)
        .filter_map(|c| c.1)
        .map(|(_, a, b)| {
            let (a, b) = (if a & 1 == 1 { !a } else { a }, if b & 1 == 1 { !b } else { b });
            let mask = (1u64 << n) - 1;
            let (a, b) = (a & mask, b & mask);
            Found {
                key: lex_key(a, b, n),
                a,
                b,
            }
        })
        .collect();
    found.sort_by(|x, y| x.key.cmp(&y.key));
    found.dedup_by(|x, y| x.key == y.key);
    (z_max, found, per * per)
}

fn run<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Largest width of a binary pair of length `N`, with canonical witnesses.
pub fn search_max_z(task: &SearchTask) -> Result<SearchResult> {
    task.validate()?;
    let start = Instant::now();
    let n = task.n;
    let z_top = task.target_z.unwrap_or(n / 2);
    let (z_max, found, explored) = run(task.workers, || {
        if !task.symmetry_reduction {
            return search_naive(task, z_top);
        }
        let mut explored = 0;
        for z in (1..=z_top).rev() {
            let (found, e) = search_width(task, z);
            explored += e;
            if !found.is_empty() {
                return (z, found, explored);
            }
        }
        (0, Vec::new(), explored)
    })?;
    let witnesses = found
        .iter()
        .take(task.witness_limit.max(1))
        .map(|f| SequencePair::new(bits_to_sequence(f.a, n), bits_to_sequence(f.b, n)).expect("equal lengths"))
        .collect();
    Ok(SearchResult {
        n,
        z_max,
        witnesses,
        explored,
        elapsed: start.elapsed(),
    })
}

/// Comparison of one printed pair against its stated width and magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedCheck {
    pub n: usize,
    pub z_stated: usize,
    pub z_found: usize,
    /// One entry per disagreeing magnitude, naming the profile and shift.
    pub mismatches: Vec<String>,
}

impl PrintedCheck {
    pub fn passed(&self) -> bool {
        self.z_found == self.z_stated && self.mismatches.is_empty()
    }
}

/// Checks a printed pair; magnitudes are compared as exact squares.
pub fn check_printed_pair(p: &PrintedPair) -> PrintedCheck {
    let cert = czcp_width(&p.pair);
    let mut mismatches = Vec::new();
    let got = [
        ("aac-sum", cert.aac_sum_squared(), &p.aac_magnitudes),
        ("acc-sum", cert.acc_sum_squared(), &p.acc_magnitudes),
    ];
    for (name, squares, printed) in got {
        let squares = squares.expect("binary profiles are exact");
        for (t, (&sq, &m)) in squares.iter().zip(printed).enumerate() {
            if sq != m * m {
                mismatches.push(format!(
                    "N={}: {name} magnitude at tau={t} is sqrt({sq}), expected {m}",
                    p.n
                ));
            }
        }
    }
    PrintedCheck {
        n: p.n,
        z_stated: p.z,
        z_found: cert.z,
        mismatches,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub expected: usize,
    pub found: usize,
    /// Whether the reported witness passes the independent width check.
    pub witness_verified: bool,
    pub witness: Option<SequencePair>,
    pub explored: u64,
}

impl TableRow {
    pub fn passed(&self) -> bool {
        self.expected == self.found && self.witness_verified
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub printed: Vec<PrintedCheck>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(TableRow::passed) && self.printed.iter().all(PrintedCheck::passed)
    }

    /// Human-readable failures, each naming its length.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in self.rows.iter().filter(|r| !r.passed()) {
            out.push(format!(
                "N={}: expected z_max={}, found {} (witness verified: {})",
                r.n, r.expected, r.found, r.witness_verified
            ));
        }
        for p in &self.printed {
            if p.z_found != p.z_stated {
                out.push(format!(
                    "N={}: printed pair has width {}, stated {}",
                    p.n, p.z_found, p.z_stated
                ));
            }
            out.extend(p.mismatches.iter().cloned());
        }
        out
    }
}

/// Re-derives each expected row (lengths above `max_n` are skipped) and checks
/// the packaged printed pairs.
pub fn verify_rows(expected: &[(usize, usize)], workers: usize, max_n: usize) -> Result<TableReport> {
    let mut rows = Vec::new();
    for &(n, z) in expected.iter().filter(|r| r.0 <= max_n) {
        let mut task = SearchTask::new(n);
        task.workers = workers;
        let res = search_max_z(&task)?;
        let witness = res.witnesses.first().cloned();
        let witness_verified = witness.as_ref().is_some_and(|w| czcp_width(w).z == res.z_max);
        rows.push(TableRow {
            n,
            expected: z,
            found: res.z_max,
            witness_verified,
            witness,
            explored: res.explored,
        });
    }
    let printed = table1_pairs()
        .iter()
        .filter(|p| p.n <= max_n)
        .map(check_printed_pair)
        .collect();
    Ok(TableReport { rows, printed })
}

/// Reads an `n,z_max` CSV and runs [`verify_rows`] on it.
pub fn verify_table(path: &Path, workers: usize, max_n: usize) -> Result<TableReport> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::param(format!("cannot read {}: {e}", path.display())))?;
    verify_rows(&parse_table_csv(&text)?, workers, max_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn task(n: usize) -> SearchTask {
        let mut t = SearchTask::new(n);
        t.workers = 1;
        t
    }

    #[test]
    fn smallest_length() {
        let r = search_max_z(&task(2)).unwrap();
        assert_eq!(r.z_max, 1);
        assert_eq!(r.witnesses[0].a.to_string(), "+-");
        assert_eq!(r.witnesses[0].b.to_string(), "++");
    }

    #[test]
    fn small_rows_match() {
        for (n, z) in [(4, 2), (6, 2), (8, 4), (10, 4), (12, 5), (14, 6)] {
            let r = search_max_z(&task(n)).unwrap();
            assert_eq!(r.z_max, z, "N={n}");
            for w in &r.witnesses {
                assert_eq!(czcp_width(w).z, z);
                assert_eq!(w.a.phases()[0], 0);
                assert_eq!(w.b.phases()[0], 0);
            }
        }
    }

    #[test]
    fn rejects_bad_tasks() {
        assert_eq!(search_max_z(&task(7)).unwrap_err(), Error::OddLength(7));
        assert!(search_max_z(&task(34)).is_err());
        let mut t = task(8);
        t.target_z = Some(5);
        assert!(search_max_z(&t).is_err());
    }

    #[test]
    fn target_width_caps_descent() {
        let mut t = task(8);
        t.target_z = Some(2);
        let r = search_max_z(&t).unwrap();
        assert_eq!(r.z_max, 2);
        assert!(czcp_width(&r.witnesses[0]).z >= 2);
    }

    #[test]
    fn naive_agrees_on_tiny_lengths() {
        for n in [2, 4, 6] {
            let mut t = task(n);
            t.symmetry_reduction = false;
            let naive = search_max_z(&t).unwrap();
            let fast = search_max_z(&task(n)).unwrap();
            assert_eq!(naive.z_max, fast.z_max);
        }
    }

    #[test]
    fn witness_order_is_lexicographic() {
        let mut t = task(10);
        t.witness_limit = 50;
        let r = search_max_z(&t).unwrap();
        let keys: Vec<String> = r
            .witnesses
            .iter()
            .map(|w| format!("{}{}", w.a, w.b).replace('-', "0").replace('+', "1"))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn printed_check_flags_mismatch() {
        let mut p = table1_pairs()[3].clone();
        assert!(check_printed_pair(&p).passed());
        p.acc_magnitudes[1] = 2;
        let c = check_printed_pair(&p);
        assert!(!c.passed());
        assert!(c.mismatches[0].contains("N=8"));
    }
}
