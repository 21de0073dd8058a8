//! Reference sequences and expected values shipped with the crate.

use crate::czcp::SequencePair;
use crate::error::{Error, Result};
use crate::gbf::DjParams;
use crate::sequence::QarySequence;

/// Expected maximum widths, CSV `n,z_max`.
pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");
/// One binary representative per length with its magnitude profiles.
pub const TABLE1_PAIRS: &str = include_str!("../data/table1_pairs.txt");
const GCP16: &str = include_str!("../data/gcp16.txt");
const MSEQ31: &str = include_str!("../data/mseq31.txt");

/// Parses a CSV with header `n,z_max`.
pub fn parse_table_csv(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if !header_seen {
            if t.replace(' ', "") != "n,z_max" {
                return Err(Error::parse(line_no, 1, "expected header 'n,z_max'"));
            }
            header_seen = true;
            continue;
        }
        let (n, z) = t
            .split_once(',')
            .ok_or_else(|| Error::parse(line_no, 1, "expected 'n,z_max'"))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, 1, format!("invalid length '{n}'")))?;
        let z: usize = z
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, t.find(',').unwrap() + 2, format!("invalid width '{z}'")))?;
        rows.push((n, z));
    }
    if !header_seen {
        return Err(Error::parse(1, 1, "empty table"));
    }
    Ok(rows)
}

pub fn table1_expected() -> Vec<(usize, usize)> {
    parse_table_csv(TABLE1_CSV).expect("packaged table parses")
}

/// A pair transcribed together with the magnitudes printed beside it.
#[derive(Debug, Clone, PartialEq)]
pub struct PrintedPair {
    pub n: usize,
    pub z: usize,
    pub pair: SequencePair,
    pub aac_magnitudes: Vec<i64>,
    pub acc_magnitudes: Vec<i64>,
}

fn parse_magnitudes(field: &str, line: usize, column: usize) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for tok in field.split(',') {
        let (value, count) = match tok.split_once('*') {
            Some((v, k)) => (v, k.parse::<usize>().ok()),
            None => (tok, Some(1)),
        };
        let v: i64 = value
            .parse()
            .map_err(|_| Error::parse(line, column, format!("invalid magnitude '{tok}'")))?;
        let k = count.ok_or_else(|| Error::parse(line, column, format!("invalid repeat '{tok}'")))?;
        out.extend(std::iter::repeat_n(v, k));
    }
    Ok(out)
}

/// Parses lines `n z a b aac acc`.
pub fn parse_printed_pairs(text: &str) -> Result<Vec<PrintedPair>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::parse(
                line_no,
                1,
                format!("expected 6 fields, got {}", fields.len()),
            ));
        }
        let col = |k: usize| line.find(fields[k]).map_or(1, |c| c + 1);
        let int = |k: usize| -> Result<usize> {
            fields[k]
                .parse()
                .map_err(|_| Error::parse(line_no, col(k), format!("invalid integer '{}'", fields[k])))
        };
        let n = int(0)?;
        let z = int(1)?;
        let a = QarySequence::parse_line(fields[2], line_no)?;
        let b = QarySequence::parse_line(fields[3], line_no)?;
        let pair = SequencePair::new(a, b)?;
        if pair.len() != n {
            return Err(Error::parse(
                line_no,
                col(2),
                format!("pair length {} differs from n={n}", pair.len()),
            ));
        }
        let aac_magnitudes = parse_magnitudes(fields[4], line_no, col(4))?;
        let acc_magnitudes = parse_magnitudes(fields[5], line_no, col(5))?;
        for (k, m) in [(4, &aac_magnitudes), (5, &acc_magnitudes)] {
            if m.len() != n {
                return Err(Error::parse(
                    line_no,
                    col(k),
                    format!("expected {n} magnitudes, got {}", m.len()),
                ));
            }
        }
        out.push(PrintedPair {
            n,
            z,
            pair,
            aac_magnitudes,
            acc_magnitudes,
        });
    }
    Ok(out)
}

pub fn table1_pairs() -> Vec<PrintedPair> {
    parse_printed_pairs(TABLE1_PAIRS).expect("packaged pairs parse")
}

/// The pair for length `n` from [`table1_pairs`].
pub fn table1_pair(n: usize) -> Option<SequencePair> {
    table1_pairs().into_iter().find(|p| p.n == n).map(|p| p.pair)
}

/// A worked example: a pair, its width and squared magnitude profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceExample {
    pub name: &'static str,
    pub pair: SequencePair,
    pub z: usize,
    pub aac_sum_squared: Vec<i64>,
    pub acc_sum_squared: Vec<i64>,
}

fn q4(p: &[u32]) -> QarySequence {
    QarySequence::new(4, p.to_vec()).expect("valid phases")
}

fn padded(head: &[i64], n: usize) -> Vec<i64> {
    let mut v = head.to_vec();
    v.resize(n, 0);
    v
}

/// The quaternary length-9 pair of width 3.
pub fn example3() -> ReferenceExample {
    ReferenceExample {
        name: "example3",
        pair: SequencePair::new(q4(&[0, 1, 1, 2, 0, 2, 1, 1, 3]), q4(&[0, 1, 1, 0, 1, 0, 3, 3, 1])).unwrap(),
        z: 3,
        aac_sum_squared: vec![324, 0, 0, 0, 8, 4, 0, 0, 0],
        acc_sum_squared: vec![16, 32, 8, 8, 16, 4, 0, 0, 0],
    }
}

/// Squared magnitudes of `rho(b, rev-conj b) + rho(a, -rev-conj a)` for [`example3`],
/// as printed. The entry at `tau = 1` is a misprint; the pair gives 40.
pub const EXAMPLE3_SECOND_IDENTITY_SQUARED: [i64; 9] = [52, 104, 8, 8, 40, 16, 0, 0, 0];

/// Phases of `rev-conj(b)` for [`example3`].
pub const EXAMPLE3_B_REVERSE_CONJUGATE: [u32; 9] = [3, 1, 1, 0, 3, 0, 3, 3, 0];

/// The length-11 quaternary Golay pair `(e, f)` used as a seed.
pub fn example5_seed() -> (QarySequence, QarySequence) {
    (
        q4(&[0, 1, 2, 0, 2, 1, 3, 2, 1, 1, 0]),
        q4(&[0, 0, 3, 3, 3, 0, 0, 1, 2, 0, 2]),
    )
}

/// The perfect length-22 pair built from [`example5_seed`] with offset 1.
pub fn example5() -> ReferenceExample {
    ReferenceExample {
        name: "example5",
        pair: SequencePair::new(
            q4(&[0, 1, 2, 0, 2, 1, 3, 2, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 2, 3, 1, 3]),
            q4(&[0, 1, 2, 0, 2, 1, 3, 2, 1, 1, 0, 3, 3, 2, 2, 2, 3, 3, 0, 1, 3, 1]),
        )
        .unwrap(),
        z: 11,
        aac_sum_squared: padded(&[44 * 44], 22),
        acc_sum_squared: padded(&[0, 128, 16, 32, 16, 0, 16, 32, 16, 0, 16], 22),
    }
}

/// Parameters generating [`example6`].
pub fn example6_params() -> DjParams {
    DjParams {
        q: 4,
        mu: 4,
        pi: vec![4, 2, 3, 1],
        w: vec![3, 2, 0, 1],
        w0: 0,
        w_prime: 2,
    }
}

/// The perfect quaternary length-16 pair from the Golay-function construction.
pub fn example6() -> ReferenceExample {
    ReferenceExample {
        name: "example6",
        pair: SequencePair::new(
            q4(&[0, 3, 2, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 2, 3, 0]),
            q4(&[2, 1, 0, 3, 2, 3, 2, 3, 1, 0, 1, 0, 1, 2, 3, 0]),
        )
        .unwrap(),
        z: 8,
        aac_sum_squared: padded(&[32 * 32], 16),
        acc_sum_squared: padded(&[0, 144, 0, 16, 0, 16, 0, 16], 16),
    }
}

/// The binary length-16 Golay pair that is not a CZCP.
pub fn gcp16() -> SequencePair {
    let mut lines = GCP16.lines();
    SequencePair::parse(lines.next().unwrap(), lines.next().unwrap()).expect("packaged pair parses")
}

/// The length-31 m-sequence.
pub fn mseq31() -> QarySequence {
    QarySequence::parse_line(MSEQ31.trim(), 1).expect("packaged sequence parses")
}

/// The length-13 Barker sequence.
pub fn barker13() -> QarySequence {
    "+++++--++-+-+".parse().expect("valid sequence")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packaged_table() {
        let t = table1_expected();
        assert_eq!(t.len(), 13);
        assert_eq!(t[8], (18, 7));
        assert_eq!(t[12], (26, 12));
    }

    #[test]
    fn packaged_pairs() {
        let p = table1_pairs();
        assert_eq!(p.len(), 13);
        for (row, (n, z)) in p.iter().zip(table1_expected()) {
            assert_eq!((row.n, row.z), (n, z));
            assert!(row.pair.a.is_binary());
        }
        assert_eq!(p[5].aac_magnitudes, vec![24, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn table_parse_errors() {
        assert!(matches!(parse_table_csv(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_table_csv("n,z_max\n4,x\n"),
            Err(Error::Parse { line: 2, column: 3, .. })
        ));
        assert!(matches!(
            parse_printed_pairs("2 1 ++ +- 4 0,0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn baselines() {
        assert_eq!(gcp16().len(), 16);
        assert_eq!(mseq31().len(), 31);
        assert_eq!(barker13().len(), 13);
    }
}
