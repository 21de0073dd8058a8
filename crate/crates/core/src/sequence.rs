//! Unit-modulus sequences over the q-th roots of unity, stored as phase exponents.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The alphabet `A_q` of q-th roots of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    q: u32,
}

impl Alphabet {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidAlphabet(q));
        }
        Ok(Alphabet { q })
    }

    pub fn q(self) -> u32 {
        self.q
    }

    /// True when every symbol is one of `1, i, -1, -i`, so correlations are Gaussian integers.
    pub fn is_exact(self) -> bool {
        4 % self.q == 0
    }

    /// The symbol `exp(2*pi*i*k/q)` as a complex number.
    pub fn symbol<T: Scalar>(self, k: u32) -> Option<Complex<T>> {
        T::unit_root(self.q, k)
    }
}

/// The root of unity `exp(2*pi*i*exponent/order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub order: u32,
    pub exponent: u32,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };

    pub fn new(order: u32, exponent: u32) -> Self {
        RootOfUnity { order, exponent }
    }

    /// The phase exponent of this root in `A_q`.
    pub fn phase_in(self, q: u32) -> Result<u32> {
        let not_in = Error::NotInAlphabet {
            order: self.order,
            exponent: self.exponent,
            q,
        };
        if self.order == 0 || q == 0 {
            return Err(not_in);
        }
        let num = u64::from(self.exponent % self.order) * u64::from(q);
        if num % u64::from(self.order) != 0 {
            return Err(not_in);
        }
        Ok((num / u64::from(self.order)) as u32 % q)
    }
}

/// Index and value transforms of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Reverse,
    Conjugate,
    Negate,
    Scale(RootOfUnity),
    /// Right cyclic shift `T^tau`.
    Shift(i64),
}

/// A length-N sequence whose entry `i` is `omega_q^phases[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct QarySequence {
    q: u32,
    phases: Vec<u32>,
}

impl QarySequence {
    pub fn new(q: u32, phases: Vec<u32>) -> Result<Self> {
        Alphabet::new(q)?;
        if phases.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(&phase) = phases.iter().find(|&&p| p >= q) {
            return Err(Error::PhaseOutOfRange { phase, q });
        }
        Ok(QarySequence { q, phases })
    }

    /// Builds a sequence, reducing every phase modulo `q`.
    pub fn from_phases_mod(q: u32, phases: impl IntoIterator<Item = i64>) -> Result<Self> {
        Alphabet::new(q)?;
        let m = i64::from(q);
        Self::new(q, phases.into_iter().map(|p| p.rem_euclid(m) as u32).collect())
    }

    /// A binary sequence from signs; `true` is `-1`.
    pub fn binary_from_minus(minus: impl IntoIterator<Item = bool>) -> Result<Self> {
        Self::new(2, minus.into_iter().map(u32::from).collect())
    }

    /// A binary sequence from `±1` integers.
    pub fn from_signs(signs: &[i32]) -> Result<Self> {
        let mut phases = Vec::with_capacity(signs.len());
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => phases.push(0),
                -1 => phases.push(1),
                _ => return Err(Error::parse(1, i + 1, format!("expected +1 or -1, got {s}"))),
            }
        }
        Self::new(2, phases)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet { q: self.q }
    }

    pub fn phases(&self) -> &[u32] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    /// `±1` values of a binary sequence.
    pub fn signs(&self) -> Result<Vec<i32>> {
        if self.q != 2 {
            return Err(Error::NotBinary(self.q));
        }
        Ok(self.phases.iter().map(|&p| 1 - 2 * p as i32).collect())
    }

    /// Complex values in the scalar type `T`.
    pub fn values<T: Scalar>(&self) -> Result<Vec<Complex<T>>> {
        let table = (0..self.q)
            .map(|k| T::unit_root(self.q, k))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::NotRepresentable { q: self.q })?;
        Ok(self.phases.iter().map(|&p| table[p as usize]).collect())
    }

    /// The same sequence viewed over `A_m` for a multiple `m` of `q`.
    pub fn lift(&self, m: u32) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(self.q) {
            return Err(Error::param(format!("cannot lift q={} to q={m}", self.q)));
        }
        let f = m / self.q;
        Ok(QarySequence {
            q: m,
            phases: self.phases.iter().map(|&p| p * f).collect(),
        })
    }

    pub fn reverse(&self) -> Self {
        let mut phases = self.phases.clone();
        phases.reverse();
        QarySequence { q: self.q, phases }
    }

    pub fn conjugate(&self) -> Self {
        let q = self.q;
        QarySequence {
            q,
            phases: self.phases.iter().map(|&p| (q - p) % q).collect(),
        }
    }

    /// Reversed and conjugated, written with an underline and a star.
    pub fn reverse_conjugate(&self) -> Self {
        self.reverse().conjugate()
    }

    pub fn negate(&self) -> Result<Self> {
        if !self.q.is_multiple_of(2) {
            return Err(Error::OddAlphabet(self.q));
        }
        Ok(self.add_phase(self.q / 2))
    }

    /// Multiplies every entry by `omega_q^k`.
    pub fn add_phase(&self, k: u32) -> Self {
        let q = self.q;
        QarySequence {
            q,
            phases: self.phases.iter().map(|&p| (p + k % q) % q).collect(),
        }
    }

    pub fn scale(&self, c: RootOfUnity) -> Result<Self> {
        Ok(self.add_phase(c.phase_in(self.q)?))
    }

    /// Right cyclic shift: entry `i` moves to position `i + tau (mod N)`.
    pub fn shift(&self, tau: i64) -> Self {
        let n = self.len();
        let t = tau.rem_euclid(n as i64) as usize;
        let mut phases = self.phases.clone();
        phases.rotate_right(t);
        QarySequence { q: self.q, phases }
    }

    pub fn transform(&self, op: Transform) -> Result<Self> {
        match op {
            Transform::Reverse => Ok(self.reverse()),
            Transform::Conjugate => Ok(self.conjugate()),
            Transform::Negate => self.negate(),
            Transform::Scale(c) => self.scale(c),
            Transform::Shift(t) => Ok(self.shift(t)),
        }
    }

    /// Concatenation of two sequences over the same alphabet.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::AlphabetMismatch {
                left: self.q,
                right: other.q,
            });
        }
        let mut phases = self.phases.clone();
        phases.extend_from_slice(&other.phases);
        Ok(QarySequence { q: self.q, phases })
    }

    /// Parses a single-line sequence; see [`FromStr`].
    pub fn parse_line(line: &str, line_no: usize) -> Result<Self> {
        line.parse::<Self>().map_err(|e| e.at_line(line_no))
    }
}

/// Parses `"+-+-"` (binary) or `"q=<q>:p0,p1,..."`.
impl FromStr for QarySequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lead = s.len() - s.trim_start().len();
        let body = s.trim();
        if body.is_empty() {
            return Err(Error::parse(1, 1, "empty sequence"));
        }
        if let Some(rest) = body.strip_prefix("q=") {
            let colon = rest
                .find(':')
                .ok_or_else(|| Error::parse(1, lead + 1, "expected ':' after alphabet order"))?;
            let q: u32 = rest[..colon]
                .trim()
                .parse()
                .map_err(|_| Error::parse(1, lead + 3, "invalid alphabet order"))?;
            if q == 0 {
                return Err(Error::parse(1, lead + 3, "alphabet order must be positive"));
            }
            let mut col = lead + 2 + colon + 2;
            let mut phases = Vec::new();
            for tok in rest[colon + 1..].split(',') {
                let t = tok.trim();
                let p: u32 = t
                    .parse()
                    .map_err(|_| Error::parse(1, col, format!("invalid phase '{t}'")))?;
                if p >= q {
                    return Err(Error::parse(1, col, format!("phase {p} outside Z_{q}")));
                }
                phases.push(p);
                col += tok.len() + 1;
            }
            return QarySequence::new(q, phases);
        }
        let mut phases = Vec::with_capacity(body.len());
        for (i, ch) in body.chars().enumerate() {
            match ch {
                '+' => phases.push(0),
                '-' | '\u{2212}' => phases.push(1),
                _ => return Err(Error::parse(1, lead + i + 1, format!("unexpected character '{ch}'"))),
            }
        }
        QarySequence::new(2, phases)
    }
}

impl fmt::Display for QarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 2 {
            for &p in &self.phases {
                f.write_str(if p == 0 { "+" } else { "-" })?;
            }
            return Ok(());
        }
        write!(f, "q={}:", self.q)?;
        for (i, p) in self.phases.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl From<QarySequence> for String {
    fn from(s: QarySequence) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for QarySequence {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q4(p: &[u32]) -> QarySequence {
        QarySequence::new(4, p.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let s: QarySequence = "+++-++-+".parse().unwrap();
        assert_eq!(s.phases(), &[0, 0, 0, 1, 0, 0, 1, 0]);
        assert_eq!(s.to_string(), "+++-++-+");
        let t: QarySequence = "q=4:0,1,1,2".parse().unwrap();
        assert_eq!(t.to_string(), "q=4:0,1,1,2");
        assert_eq!(t.to_string().parse::<QarySequence>().unwrap(), t);
    }

    #[test]
    fn parse_errors_carry_columns() {
        match "++x-".parse::<QarySequence>() {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        match "q=4:0,1,7".parse::<QarySequence>() {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!("".parse::<QarySequence>(), Err(Error::Parse { .. })));
        assert!(matches!(
            QarySequence::parse_line("+?", 7),
            Err(Error::Parse { line: 7, column: 2, .. })
        ));
    }

    #[test]
    fn example_reverse_conjugate() {
        let b = q4(&[0, 1, 1, 0, 1, 0, 3, 3, 1]);
        assert_eq!(b.reverse_conjugate().phases(), &[3, 1, 1, 0, 3, 0, 3, 3, 0]);
    }

    #[test]
    fn shifts() {
        let x = q4(&[0, 1, 2, 3, 1]);
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(1).phases(), &[1, 0, 1, 2, 3]);
        assert_eq!(x.shift(-3).shift(3), x);
        assert_eq!(x.shift(5), x);
    }

    #[test]
    fn scale_membership() {
        let x = q4(&[0, 1]);
        assert_eq!(x.scale(RootOfUnity::new(2, 1)).unwrap().phases(), &[2, 3]);
        assert!(x.scale(RootOfUnity::new(8, 1)).is_err());
        assert!(QarySequence::new(3, vec![0, 1]).unwrap().negate().is_err());
        assert_eq!(x.negate().unwrap().phases(), &[2, 3]);
    }

    #[test]
    fn values_exact_when_possible() {
        let x = q4(&[0, 1, 2, 3]);
        let v = x.values::<i64>().unwrap();
        assert_eq!(v[1], Complex::new(0, 1));
        let y = QarySequence::new(3, vec![1]).unwrap();
        assert!(y.values::<i64>().is_err());
        assert!(y.values::<f64>().is_ok());
    }
}
