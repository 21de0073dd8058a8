//! Generalized Boolean functions and the Davis-Jedwab Golay pair construction.
//!
//! A function of `mu` binary variables is stored as its truth table. Entry
//! `kappa` evaluates the function at `x_i = (kappa >> (i - 1)) & 1`, so `x_1`
//! is the least significant bit.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::correlation::{acc, CorrelationValue};
use crate::czcp::SequencePair;
use crate::error::{Error, Result};
use crate::sequence::QarySequence;

/// Largest supported variable count.
pub const MAX_MU: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gbf {
    q: u32,
    mu: usize,
    truth_table: Vec<u32>,
}

/// A quadratic term `coeff * x_i * x_j`, variables indexed from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: u32,
}

fn check_q_mu(q: u32, mu: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidAlphabet(q));
    }
    if mu > MAX_MU {
        return Err(Error::param(format!("mu={mu} exceeds {MAX_MU}")));
    }
    Ok(())
}

impl Gbf {
    pub fn from_truth_table(q: u32, truth_table: Vec<u32>) -> Result<Self> {
        let len = truth_table.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::param(format!("truth table length {len} is not a power of two")));
        }
        let mu = len.trailing_zeros() as usize;
        check_q_mu(q, mu)?;
        if let Some(&phase) = truth_table.iter().find(|&&v| v >= q) {
            return Err(Error::PhaseOutOfRange { phase, q });
        }
        Ok(Gbf { q, mu, truth_table })
    }

    pub fn constant(q: u32, mu: usize, c: u32) -> Result<Self> {
        gbf_from_terms(q, mu, &[], &vec![0; mu], c)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn truth_table(&self) -> &[u32] {
        &self.truth_table
    }

    /// Pointwise sum modulo q.
    pub fn add(&self, other: &Gbf) -> Result<Gbf> {
        self.same_shape(other)?;
        let q = self.q;
        Ok(Gbf {
            q,
            mu: self.mu,
            truth_table: self
                .truth_table
                .iter()
                .zip(&other.truth_table)
                .map(|(&x, &y)| (x + y) % q)
                .collect(),
        })
    }

    fn same_shape(&self, other: &Gbf) -> Result<()> {
        if self.q != other.q {
            return Err(Error::AlphabetMismatch {
                left: self.q,
                right: other.q,
            });
        }
        if self.mu != other.mu {
            return Err(Error::LengthMismatch {
                left: self.truth_table.len(),
                right: other.truth_table.len(),
            });
        }
        Ok(())
    }

    /// The associated sequence `omega_q^{g_kappa}`.
    pub fn phase_sequence(&self) -> QarySequence {
        QarySequence::new(self.q, self.truth_table.clone()).expect("truth table is validated")
    }
}

/// Builds `sum c_ij x_i x_j + sum c_k x_k + c` over `Z_q`.
pub fn gbf_from_terms(q: u32, mu: usize, quad: &[QuadTerm], lin: &[u32], constant: u32) -> Result<Gbf> {
    check_q_mu(q, mu)?;
    if lin.len() != mu {
        return Err(Error::param(format!(
            "expected {mu} linear coefficients, got {}",
            lin.len()
        )));
    }
    for t in quad {
        for idx in [t.i, t.j] {
            if idx == 0 || idx > mu {
                return Err(Error::VariableIndex { index: idx, mu });
            }
        }
    }
    let q64 = u64::from(q);
    let truth_table = (0..1usize << mu)
        .map(|kappa| {
            let x = |i: usize| ((kappa >> (i - 1)) & 1) as u64;
            let mut v = u64::from(constant) % q64;
            for t in quad {
                v += u64::from(t.coeff) % q64 * (x(t.i) * x(t.j));
            }
            for (k, &c) in lin.iter().enumerate() {
                v += u64::from(c) % q64 * x(k + 1);
            }
            (v % q64) as u32
        })
        .collect();
    Ok(Gbf { q, mu, truth_table })
}

/// Parses `q=<q> mu=<mu> quad=(i,j,c);... lin=c1,...,cmu const=c`.
///
/// `quad` and `const` may be omitted; `lin` may be omitted for an all-zero linear part.
impl FromStr for Gbf {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut q = None;
        let mut mu = None;
        let mut quad = Vec::new();
        let mut lin = None;
        let mut constant = 0u32;
        let mut pos = 0usize;
        for field in line.split_whitespace() {
            let col = line[pos..].find(field).map_or(pos, |o| pos + o) + 1;
            pos = col - 1 + field.len();
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(1, col, format!("expected key=value, got '{field}'")))?;
            let vcol = col + key.len() + 1;
            let num = |s: &str, c: usize| -> Result<u32> {
                s.trim()
                    .parse()
                    .map_err(|_| Error::parse(1, c, format!("invalid integer '{s}'")))
            };
            match key {
                "q" => q = Some(num(value, vcol)?),
                "mu" => mu = Some(num(value, vcol)? as usize),
                "const" => constant = num(value, vcol)?,
                "lin" => {
                    let mut c = vcol;
                    let mut v = Vec::new();
                    for tok in value.split(',').filter(|t| !t.is_empty()) {
                        v.push(num(tok, c)?);
                        c += tok.len() + 1;
                    }
                    lin = Some(v);
                }
                "quad" => {
                    let mut c = vcol;
                    for tok in value.split(';') {
                        if tok.is_empty() {
                            c += 1;
                            continue;
                        }
                        let inner = tok
                            .strip_prefix('(')
                            .and_then(|t| t.strip_suffix(')'))
                            .ok_or_else(|| Error::parse(1, c, "expected (i,j,c)"))?;
                        let parts: Vec<&str> = inner.split(',').collect();
                        if parts.len() != 3 {
                            return Err(Error::parse(1, c, "expected (i,j,c)"));
                        }
                        quad.push(QuadTerm {
                            i: num(parts[0], c)? as usize,
                            j: num(parts[1], c)? as usize,
                            coeff: num(parts[2], c)?,
                        });
                        c += tok.len() + 1;
                    }
                }
                _ => return Err(Error::parse(1, col, format!("unknown key '{key}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::parse(1, 1, "missing q"))?;
        let mu = mu.ok_or_else(|| Error::parse(1, 1, "missing mu"))?;
        let lin = lin.unwrap_or_else(|| vec![0; mu]);
        gbf_from_terms(q, mu, &quad, &lin, constant)
    }
}

/// Aperiodic correlation of the sequences associated with two functions.
pub fn rho_q(g: &Gbf, h: &Gbf, tau: i64) -> Result<CorrelationValue> {
    g.same_shape(h)?;
    acc(&g.phase_sequence(), &h.phase_sequence(), tau)
}

/// Parameters of the quadratic form
/// `g = (q/2) sum x_{pi(k)} x_{pi(k+1)} + sum w_k x_k + w0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DjParams {
    pub q: u32,
    pub mu: usize,
    /// Permutation of `1..=mu`.
    pub pi: Vec<usize>,
    pub w: Vec<u32>,
    pub w0: u32,
    pub w_prime: u32,
}

impl DjParams {
    pub fn validate(&self) -> Result<()> {
        if self.q == 0 || !self.q.is_multiple_of(2) {
            return Err(Error::param(format!("q must be even, got {}", self.q)));
        }
        if self.mu == 0 {
            return Err(Error::param("mu must be at least 1"));
        }
        check_q_mu(self.q, self.mu)?;
        let mut seen = vec![false; self.mu + 1];
        if self.pi.len() != self.mu {
            return Err(Error::param(format!("pi must have {} entries", self.mu)));
        }
        for &p in &self.pi {
            if p == 0 || p > self.mu || seen[p] {
                return Err(Error::param(format!("pi is not a permutation of 1..={}", self.mu)));
            }
            seen[p] = true;
        }
        if self.w.len() != self.mu {
            return Err(Error::param(format!("w must have {} entries", self.mu)));
        }
        if let Some(&phase) = self.w.iter().chain([&self.w0, &self.w_prime]).find(|&&v| v >= self.q) {
            return Err(Error::PhaseOutOfRange { phase, q: self.q });
        }
        Ok(())
    }

    /// The quadratic form `g`.
    pub fn base_gbf(&self) -> Result<Gbf> {
        self.validate()?;
        let half = self.q / 2;
        let quad: Vec<QuadTerm> = self
            .pi
            .windows(2)
            .map(|w| QuadTerm {
                i: w[0],
                j: w[1],
                coeff: half,
            })
            .collect();
        gbf_from_terms(self.q, self.mu, &quad, &self.w, self.w0)
    }

    /// The partner `g + (q/2) x_{pi(1)} + w'`.
    pub fn partner_gbf(&self) -> Result<Gbf> {
        let g = self.base_gbf()?;
        let mut lin = vec![0; self.mu];
        lin[self.pi[0] - 1] = self.q / 2;
        g.add(&gbf_from_terms(self.q, self.mu, &[], &lin, self.w_prime)?)
    }
}

/// The Golay complementary pair generated by `p`.
pub fn davis_jedwab_pair(p: &DjParams) -> Result<SequencePair> {
    let a = p.base_gbf()?.phase_sequence();
    let b = p.partner_gbf()?.phase_sequence();
    SequencePair::new(a, b)
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::czcp::is_gcp;

    #[test]
    fn example_truth_tables() {
        let x1 = gbf_from_terms(2, 3, &[], &[1, 0, 0], 0).unwrap();
        assert_eq!(x1.truth_table(), &[0, 1, 0, 1, 0, 1, 0, 1]);
        let x3 = gbf_from_terms(2, 3, &[], &[0, 0, 1], 0).unwrap();
        assert_eq!(x3.truth_table(), &[0, 0, 0, 0, 1, 1, 1, 1]);
        let q = [QuadTerm { i: 1, j: 3, coeff: 2 }];
        let g = gbf_from_terms(4, 3, &q, &[0, 0, 0], 1).unwrap();
        assert_eq!(g.truth_table(), &[1, 1, 1, 1, 1, 3, 1, 3]);
    }

    #[test]
    fn parse_config_line() {
        let g: Gbf = "q=4 mu=3 quad=(1,3,2) lin=0,0,0 const=1".parse().unwrap();
        assert_eq!(g.truth_table(), &[1, 1, 1, 1, 1, 3, 1, 3]);
        let bad = "q=4 mu=3 quad=(1,4,2)".parse::<Gbf>();
        assert_eq!(bad, Err(Error::VariableIndex { index: 4, mu: 3 }));
        match "q=4 mu=x".parse::<Gbf>() {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alternating_sequence() {
        let g = gbf_from_terms(2, 2, &[], &[1, 0], 0).unwrap();
        assert_eq!(g.phase_sequence().to_string(), "+-+-");
    }

    #[test]
    fn smallest_dj_pair() {
        let p = DjParams {
            q: 2,
            mu: 1,
            pi: vec![1],
            w: vec![0],
            w0: 0,
            w_prime: 0,
        };
        let pair = davis_jedwab_pair(&p).unwrap();
        assert_eq!(pair.a.to_string(), "++");
        assert_eq!(pair.b.to_string(), "+-");
    }

    #[test]
    fn example_quaternary_pair() {
        let p = DjParams {
            q: 4,
            mu: 4,
            pi: vec![4, 2, 3, 1],
            w: vec![3, 2, 0, 1],
            w0: 0,
            w_prime: 2,
        };
        let pair = davis_jedwab_pair(&p).unwrap();
        assert_eq!(pair.a.phases(), &[0, 3, 2, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 2, 3, 0]);
        assert_eq!(pair.b.phases(), &[2, 1, 0, 3, 2, 3, 2, 3, 1, 0, 1, 0, 1, 2, 3, 0]);
        assert!(is_gcp(&pair));
    }

    #[test]
    fn dj_rejects_odd_q_and_bad_pi() {
        let mut p = DjParams {
            q: 3,
            mu: 2,
            pi: vec![1, 2],
            w: vec![0, 0],
            w0: 0,
            w_prime: 0,
        };
        assert!(davis_jedwab_pair(&p).is_err());
        p.q = 4;
        p.pi = vec![1, 1];
        assert!(davis_jedwab_pair(&p).is_err());
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(1), vec![vec![1]]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }
}
