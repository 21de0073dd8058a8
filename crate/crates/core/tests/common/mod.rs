#![allow(dead_code)]

use czcp::czcp::construction2_parameters;
use czcp::data::{example3, example5, example6, gcp16, table1_pairs};
use czcp::{construction2, SequencePair};

/// Every pair shipped with the crate plus a few constructed perfect pairs.
pub fn packaged_pairs() -> Vec<SequencePair> {
    let mut out: Vec<SequencePair> = table1_pairs().into_iter().map(|p| p.pair).collect();
    out.extend([example3().pair, example5().pair, example6().pair, gcp16()]);
    for (q, mu) in [(2, 3), (4, 3), (2, 4)] {
        let params = construction2_parameters(q, mu);
        for k in [0, params.len() / 3, params.len() - 1] {
            out.push(construction2(&params[k]).unwrap());
        }
    }
    out
}

/// `-` for a set bit, `+` otherwise; bit 0 is the first entry.
pub fn bits(x: u64, n: usize) -> Vec<i64> {
    (0..n).map(|i| if (x >> i) & 1 == 1 { -1 } else { 1 }).collect()
}

fn corr(a: &[i64], b: &[i64], tau: i64) -> i64 {
    let n = a.len() as i64;
    (0..n)
        .filter(|&k| (0..n).contains(&(k + tau)))
        .map(|k| a[k as usize] * b[(k + tau) as usize])
        .sum()
}

/// Width of a binary pair straight from the definition, scanning `Z` upward.
pub fn naive_width(a: &[i64], b: &[i64]) -> usize {
    let n = a.len() as i64;
    let mut z = 0;
    while 2 * (z + 1) <= n {
        let next = z + 1;
        let auto_ok = [next, n - next].iter().all(|&t| corr(a, a, t) + corr(b, b, t) == 0);
        let tail_ok = [n - next, -(n - next)]
            .iter()
            .all(|&t| corr(a, b, t) + corr(b, a, t) == 0);
        // Smaller shifts were checked on earlier iterations.
        if !(auto_ok && tail_ok) {
            break;
        }
        z = next;
    }
    z as usize
}

/// Largest width over all `2^(2N)` binary pairs.
pub fn naive_z_max(n: usize) -> usize {
    let seqs: Vec<Vec<i64>> = (0..1u64 << n).map(|x| bits(x, n)).collect();
    let mut best = 0;
    for a in &seqs {
        for b in &seqs {
            if corr(a, a, n as i64 - 1) + corr(b, b, n as i64 - 1) != 0 {
                continue;
            }
            best = best.max(naive_width(a, b));
            if best == n / 2 {
                return best;
            }
        }
    }
    best
}
