//! Sparse spatial-modulation training matrices.
//!
//! A characteristic matrix `Psi` holds `N_t x J` blocks of length `theta`. The
//! training matrix `Omega` places block `(n, j)` at offset `n * theta` inside
//! sub-block `j`, where each sub-block spans `N_t * theta` columns, so every
//! column carries exactly one non-zero entry.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::correlation::{aperiodic, periodic};
use crate::czcp::{canonicalize, SequencePair};
use crate::data;
use crate::error::{Error, Result};
use crate::scalar::{to_c64, Scalar};
use crate::sequence::QarySequence;

/// Dimensions of an `(N_t, J, theta)` matrix and the channel memory it targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingParams {
    pub n_t: usize,
    pub j: usize,
    pub theta: usize,
    pub lambda: usize,
}

impl TrainingParams {
    pub fn new(n_t: usize, j: usize, theta: usize, lambda: usize) -> Result<Self> {
        let p = TrainingParams { n_t, j, theta, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t < 2 || !self.n_t.is_multiple_of(2) {
            return Err(Error::param(format!(
                "N_t must be even and at least 2, got {}",
                self.n_t
            )));
        }
        if self.j < 2 || !self.j.is_multiple_of(2) {
            return Err(Error::param(format!("J must be even and at least 2, got {}", self.j)));
        }
        if self.theta == 0 || self.theta < self.lambda {
            return Err(Error::param(format!(
                "block length {} must be positive and at least lambda={}",
                self.theta, self.lambda
            )));
        }
        Ok(())
    }

    pub fn l(&self) -> usize {
        self.n_t * self.j * self.theta
    }

    pub fn q(&self) -> usize {
        self.j * self.theta
    }

    /// Row energy of a unimodular matrix.
    pub fn e(&self) -> usize {
        self.q()
    }
}

/// Which seed characteristic matrix a pair generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedVariant {
    /// `[[a, b], [a, b]]`
    Psi1,
    /// `[[a, b], [rev-conj b, -rev-conj a]]`
    Psi2,
}

impl FromStr for SeedVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psi1" | "1" => Ok(SeedVariant::Psi1),
            "psi2" | "2" => Ok(SeedVariant::Psi2),
            _ => Err(Error::param(format!("unknown seed variant '{s}'"))),
        }
    }
}

/// An `N_t x J` grid of equal-length blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicMatrix {
    blocks: Vec<Vec<QarySequence>>,
}

impl CharacteristicMatrix {
    pub fn new(blocks: Vec<Vec<QarySequence>>) -> Result<Self> {
        let first = blocks
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::DimensionMismatch("empty characteristic matrix".into()))?
            .clone();
        let j = blocks[0].len();
        for row in &blocks {
            if row.len() != j {
                return Err(Error::DimensionMismatch(format!(
                    "rows have {} and {} blocks",
                    j,
                    row.len()
                )));
            }
            for b in row {
                if b.len() != first.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "blocks of length {} and {}",
                        first.len(),
                        b.len()
                    )));
                }
                if b.q() != first.q() {
                    return Err(Error::AlphabetMismatch {
                        left: first.q(),
                        right: b.q(),
                    });
                }
            }
        }
        Ok(CharacteristicMatrix { blocks })
    }

    pub fn n_t(&self) -> usize {
        self.blocks.len()
    }

    pub fn j(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn theta(&self) -> usize {
        self.blocks[0][0].len()
    }

    pub fn q(&self) -> u32 {
        self.blocks[0][0].q()
    }

    pub fn block(&self, n: usize, j: usize) -> &QarySequence {
        &self.blocks[n][j]
    }

    pub fn blocks(&self) -> &[Vec<QarySequence>] {
        &self.blocks
    }

    /// Row-replicates a two-row seed: the first `n_t / 2` rows copy seed row 1,
    /// the rest copy seed row 2.
    pub fn expand(&self, n_t: usize) -> Result<Self> {
        if self.n_t() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "expansion needs a two-row seed, got {} rows",
                self.n_t()
            )));
        }
        if n_t < 2 || !n_t.is_multiple_of(2) {
            return Err(Error::param(format!("N_t must be even and at least 2, got {n_t}")));
        }
        let blocks = (0..n_t).map(|n| self.blocks[n / (n_t / 2)].clone()).collect();
        Ok(CharacteristicMatrix { blocks })
    }
}

/// The two-row seed generated by a pair. `Psi2` is seeded from the canonical form.
pub fn seed_psi(p: &SequencePair, variant: SeedVariant) -> Result<CharacteristicMatrix> {
    let blocks = match variant {
        SeedVariant::Psi1 => vec![vec![p.a.clone(), p.b.clone()], vec![p.a.clone(), p.b.clone()]],
        SeedVariant::Psi2 => {
            let c = canonicalize(p);
            vec![
                vec![c.a.clone(), c.b.clone()],
                vec![c.b.reverse_conjugate(), c.a.reverse_conjugate().negate()?],
            ]
        }
    };
    CharacteristicMatrix::new(blocks)
}

pub fn expand_psi(seed: &CharacteristicMatrix, n_t: usize) -> Result<CharacteristicMatrix> {
    seed.expand(n_t)
}

/// Shape and provenance of a training matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub n_t: usize,
    /// Sub-block count; one for the single-block layout.
    pub j: usize,
    pub theta: usize,
    /// Alphabet of the non-zero entries, when they are unimodular.
    pub q: Option<u32>,
    pub seed_kind: String,
}

/// An `N_t x L` matrix stored densely, with the owning row of every column.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingMatrix<T> {
    rows: Vec<Vec<Complex<T>>>,
    owner: Vec<Option<usize>>,
    column_invariant: bool,
    pub layout: Layout,
}

impl<T: Scalar> TrainingMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>, layout: Layout) -> Result<Self> {
        let l = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::DimensionMismatch("matrix has no rows".into()))?;
        if rows.iter().any(|r| r.len() != l) {
            return Err(Error::DimensionMismatch("rows differ in length".into()));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut owner = vec![None; l];
        let mut column_invariant = true;
        for c in 0..l {
            let mut count = 0;
            for (n, row) in rows.iter().enumerate() {
                if row[c] != zero {
                    count += 1;
                    owner[c].get_or_insert(n);
                }
            }
            column_invariant &= count == 1;
        }
        Ok(TrainingMatrix {
            rows,
            owner,
            column_invariant,
            layout,
        })
    }

    pub fn n_t(&self) -> usize {
        self.rows.len()
    }

    pub fn l(&self) -> usize {
        self.owner.len()
    }

    pub fn rows(&self) -> &[Vec<Complex<T>>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &[Complex<T>] {
        &self.rows[n]
    }

    /// The row holding the non-zero entry of each column.
    pub fn column_owner(&self) -> &[Option<usize>] {
        &self.owner
    }

    /// Whether every column has exactly one non-zero entry.
    pub fn has_one_nonzero_per_column(&self) -> bool {
        self.column_invariant
    }

    pub fn nonzeros_in_row(&self, n: usize) -> usize {
        self.owner.iter().filter(|&&o| o == Some(n)).count()
    }

    pub fn row_energy(&self, n: usize) -> T {
        self.rows[n].iter().fold(T::zero(), |s, v| s + v.norm_sqr())
    }

    pub fn to_f64(&self) -> TrainingMatrix<f64> {
        TrainingMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| to_c64(v)).collect())
                .collect(),
            owner: self.owner.clone(),
            column_invariant: self.column_invariant,
            layout: self.layout.clone(),
        }
    }

    /// CSV of `re+imj` entries preceded by a `# {json}` metadata line.
    pub fn to_csv(&self, lambda: Option<usize>) -> String {
        let meta = MatrixMeta {
            n_t: self.n_t(),
            j: self.layout.j,
            theta: self.layout.theta,
            lambda,
            seed_kind: self.layout.seed_kind.clone(),
            e: self.row_energy(0).to_f64(),
            q: self.layout.q,
        };
        let mut out = format!("# {}\n", serde_json::to_string(&meta).expect("metadata serializes"));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format_complex(to_c64(*v), T::EXACT)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

impl TrainingMatrix<f64> {
    /// Scales each row so that its energy equals `e`.
    pub fn normalize_energy(&mut self, e: f64) {
        for row in &mut self.rows {
            let cur: f64 = row.iter().map(|v| v.norm_sqr()).sum();
            if cur > 0.0 {
                let s = (e / cur).sqrt();
                for v in row.iter_mut() {
                    *v *= s;
                }
            }
        }
        self.layout.q = None;
    }
}

/// Metadata line of the matrix CSV export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub n_t: usize,
    pub j: usize,
    pub theta: usize,
    pub lambda: Option<usize>,
    pub seed_kind: String,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
}

fn format_complex(v: Complex<f64>, exact: bool) -> String {
    if exact {
        format!("{}{:+}j", v.re as i64, v.im as i64)
    } else {
        format!("{}{:+}j", v.re, v.im)
    }
}

/// Parses `re+imj` or `re-imj`.
pub fn parse_complex(s: &str) -> Option<Complex<f64>> {
    let body = s.trim().strip_suffix('j')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re = body[..split].parse().ok()?;
    let im = body[split..].parse().ok()?;
    Some(Complex::new(re, im))
}

/// Parses a matrix CSV export.
pub fn parse_matrix_csv(text: &str) -> Result<(TrainingMatrix<f64>, MatrixMeta)> {
    let mut meta: Option<MatrixMeta> = None;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(json) = t.strip_prefix('#') {
            if meta.is_none() {
                meta = Some(
                    serde_json::from_str(json.trim())
                        .map_err(|e| Error::parse(line_no, e.column().max(1), format!("bad metadata: {e}")))?,
                );
            }
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for tok in line.split(',') {
            let v = parse_complex(tok)
                .ok_or_else(|| Error::parse(line_no, col, format!("invalid entry '{}'", tok.trim())))?;
            row.push(v);
            col += tok.len() + 1;
        }
        rows.push(row);
    }
    let meta = meta.ok_or_else(|| Error::parse(1, 1, "missing '# {...}' metadata line"))?;
    if rows.len() != meta.n_t {
        return Err(Error::DimensionMismatch(format!(
            "metadata declares {} rows, found {}",
            meta.n_t,
            rows.len()
        )));
    }
    let layout = Layout {
        n_t: meta.n_t,
        j: meta.j,
        theta: meta.theta,
        q: meta.q,
        seed_kind: meta.seed_kind.clone(),
    };
    Ok((TrainingMatrix::from_rows(rows, layout)?, meta))
}

/// Maps `Psi` to `Omega`.
pub fn psi_to_omega<T: Scalar>(psi: &CharacteristicMatrix, seed_kind: &str) -> Result<TrainingMatrix<T>> {
    let (n_t, j, theta) = (psi.n_t(), psi.j(), psi.theta());
    let span = n_t * theta;
    let zero = Complex::new(T::zero(), T::zero());
    let mut rows = vec![vec![zero; j * span]; n_t];
    for (n, row) in rows.iter_mut().enumerate() {
        for jj in 0..j {
            let v = psi.block(n, jj).values::<T>()?;
            let base = jj * span + n * theta;
            row[base..base + theta].copy_from_slice(&v);
        }
    }
    TrainingMatrix::from_rows(
        rows,
        Layout {
            n_t,
            j,
            theta,
            q: Some(psi.q()),
            seed_kind: seed_kind.to_string(),
        },
    )
}

/// Recovers `Psi` from a unimodular `Omega` with a recorded layout.
pub fn omega_to_psi<T: Scalar>(omega: &TrainingMatrix<T>) -> Result<CharacteristicMatrix> {
    let Layout { n_t, j, theta, q, .. } = omega.layout;
    let q = q.ok_or_else(|| Error::param("matrix entries are not over a root-of-unity alphabet"))?;
    if omega.n_t() != n_t || omega.l() != n_t * j * theta {
        return Err(Error::DimensionMismatch("matrix does not match its layout".into()));
    }
    let roots: Vec<Complex<T>> = (0..q)
        .map(|k| T::unit_root(q, k))
        .collect::<Option<_>>()
        .ok_or(Error::NotRepresentable { q })?;
    let span = n_t * theta;
    let mut blocks = Vec::with_capacity(n_t);
    for n in 0..n_t {
        let mut row = Vec::with_capacity(j);
        for jj in 0..j {
            let base = jj * span + n * theta;
            let phases = omega.row(n)[base..base + theta]
                .iter()
                .map(|&v| {
                    roots
                        .iter()
                        .position(|&r| T::is_negligible(r - v, 1))
                        .map(|k| k as u32)
                        .ok_or_else(|| Error::DimensionMismatch(format!("entry in row {n} is not in A_{q}")))
                })
                .collect::<Result<Vec<_>>>()?;
            row.push(QarySequence::new(q, phases)?);
        }
        blocks.push(row);
    }
    CharacteristicMatrix::new(blocks)
}

/// Tiles a two-sub-block matrix `j / 2` times.
pub fn expand_omega<T: Scalar>(omega: &TrainingMatrix<T>, j: usize) -> Result<TrainingMatrix<T>> {
    if j < 2 || !j.is_multiple_of(2) {
        return Err(Error::param(format!("J must be even and at least 2, got {j}")));
    }
    if omega.layout.j != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expansion needs two sub-blocks, got {}",
            omega.layout.j
        )));
    }
    let rows = omega.rows.iter().map(|r| r.repeat(j / 2)).collect();
    let mut layout = omega.layout.clone();
    layout.j = j;
    TrainingMatrix::from_rows(rows, layout)
}

/// The single-block layout: row `n` carries `seqs[n]` on columns `nQ..(n+1)Q`.
pub fn single_block<T: Scalar>(seqs: &[QarySequence], seed_kind: &str) -> Result<TrainingMatrix<T>> {
    let psi = CharacteristicMatrix::new(seqs.iter().map(|s| vec![s.clone()]).collect())?;
    psi_to_omega(&psi, seed_kind)
}

/// Seeds, row-expands, maps and tiles a pair into an `(N_t, J, theta)` matrix.
pub fn proposed_matrix<T: Scalar>(
    p: &SequencePair,
    variant: SeedVariant,
    n_t: usize,
    j: usize,
) -> Result<TrainingMatrix<T>> {
    let kind = match variant {
        SeedVariant::Psi1 => "psi1",
        SeedVariant::Psi2 => "psi2",
    };
    let psi = expand_psi(&seed_psi(p, variant)?, n_t)?;
    expand_omega(&psi_to_omega(&psi, kind)?, j)
}

/// `X = [X_1 ... X_{N_t}]` with `X_n[k][c] = x_n[(k - c) mod L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedConvolutionMatrix<T: Scalar> {
    pub x: DMatrix<Complex<T>>,
    pub n_t: usize,
    pub lambda: usize,
}

pub fn assemble_x<T: Scalar>(omega: &TrainingMatrix<T>, lambda: usize) -> Result<StackedConvolutionMatrix<T>> {
    let (l, n_t) = (omega.l(), omega.n_t());
    if lambda + 1 > l {
        return Err(Error::DimensionMismatch(format!(
            "{} taps exceed the training length {l}",
            lambda + 1
        )));
    }
    let w = lambda + 1;
    let x = DMatrix::from_fn(l, n_t * w, |k, col| {
        let (n, c) = (col / w, col % w);
        omega.row(n)[(k + l - c) % l]
    });
    Ok(StackedConvolutionMatrix { x, n_t, lambda })
}

impl<T: Scalar> StackedConvolutionMatrix<T> {
    /// `X^H X`.
    pub fn gram(&self) -> DMatrix<Complex<T>> {
        let (rows, cols) = self.x.shape();
        DMatrix::from_fn(cols, cols, |r, c| {
            (0..rows).fold(Complex::new(T::zero(), T::zero()), |s, k| {
                s + self.x[(k, r)].conj() * self.x[(k, c)]
            })
        })
    }

    pub fn to_f64(&self) -> StackedConvolutionMatrix<f64> {
        StackedConvolutionMatrix {
            x: self.x.map(to_c64),
            n_t: self.n_t,
            lambda: self.lambda,
        }
    }
}

/// `X^H X` from periodic correlations: entry `((i, c1), (j, c2))` is
/// `conj(phi(x_i, x_j)(c1 - c2))`.
pub fn gram_from_pcc<T: Scalar>(omega: &TrainingMatrix<T>, lambda: usize) -> DMatrix<Complex<T>> {
    let w = lambda + 1;
    let n_t = omega.n_t();
    DMatrix::from_fn(n_t * w, n_t * w, |r, c| {
        let (i, c1) = (r / w, r % w);
        let (j, c2) = (c / w, c % w);
        periodic(omega.row(i), omega.row(j), c1 as i64 - c2 as i64).conj()
    })
}

/// A failed periodic condition: `phi(x_i, x_j)(tau)` (rows from 0) took `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub tau: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityReport<T: Scalar> {
    /// `X^H X = E I`, checked on the assembled matrix.
    pub optimal: bool,
    /// The equivalent periodic-correlation conditions.
    pub pcc_optimal: bool,
    pub energy: f64,
    pub gram: DMatrix<Complex<T>>,
    pub violations: Vec<Violation>,
}

/// Checks `X^H X = E I` both on the Gram matrix and through periodic correlations.
pub fn verify_optimal<T: Scalar>(omega: &TrainingMatrix<T>, lambda: usize) -> Result<OptimalityReport<T>> {
    let x = assemble_x(omega, lambda)?;
    let gram = x.gram();
    let l = omega.l();
    let e = omega.row_energy(0);
    let target = |same: bool| {
        if same {
            Complex::new(e, T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    };
    let optimal =
        (0..gram.nrows()).all(|r| (0..gram.ncols()).all(|c| T::is_negligible(gram[(r, c)] - target(r == c), l)));
    let mut violations = Vec::new();
    for i in 0..omega.n_t() {
        for j in 0..omega.n_t() {
            for tau in 0..=lambda {
                let v = periodic(omega.row(i), omega.row(j), tau as i64);
                if !T::is_negligible(v - target(i == j && tau == 0), l) {
                    let v = to_c64(v);
                    violations.push(Violation {
                        i,
                        j,
                        tau,
                        re: v.re,
                        im: v.im,
                    });
                }
            }
        }
    }
    Ok(OptimalityReport {
        optimal,
        pcc_optimal: violations.is_empty(),
        energy: e.to_f64(),
        gram,
        violations,
    })
}

/// The five families of seed conditions for a two-row, two-block seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedConditions {
    /// `rho(a_2^1, a_1^1) + rho(a_2^2, a_1^2)` at `theta - tau`.
    pub row_transition: bool,
    /// `rho(a_1^2, a_2^1) + rho(a_1^1, a_2^2)` at `theta - tau`.
    pub wraparound: bool,
    /// `rho(a_i^1) + rho(a_i^2)` at `tau` for both rows.
    pub aperiodic_sum: bool,
    /// `rho(a_1^1) + rho(a_1^2)` at `theta - tau`.
    pub upper_replica: bool,
    /// `rho(a_2^1) + rho(a_2^2)` at `theta - tau`.
    pub lower_replica: bool,
}

impl SeedConditions {
    pub fn all(&self) -> bool {
        self.row_transition && self.wraparound && self.aperiodic_sum && self.upper_replica && self.lower_replica
    }
}

fn seed_conditions_with<T: Scalar>(v: &[Vec<Vec<Complex<T>>>], theta: usize, lambda: usize) -> SeedConditions {
    let th = theta as i64;
    let zero = |x: Complex<T>| T::is_negligible(x, theta);
    let shifts = 1..=lambda as i64;
    let r = |x: &[Complex<T>], y: &[Complex<T>], t: i64| aperiodic(x, y, t);
    SeedConditions {
        row_transition: shifts
            .clone()
            .all(|t| zero(r(&v[1][0], &v[0][0], th - t) + r(&v[1][1], &v[0][1], th - t))),
        wraparound: shifts
            .clone()
            .all(|t| zero(r(&v[0][1], &v[1][0], th - t) + r(&v[0][0], &v[1][1], th - t))),
        aperiodic_sum: shifts
            .clone()
            .all(|t| (0..2).all(|i| zero(r(&v[i][0], &v[i][0], t) + r(&v[i][1], &v[i][1], t)))),
        upper_replica: shifts
            .clone()
            .all(|t| zero(r(&v[0][0], &v[0][0], th - t) + r(&v[0][1], &v[0][1], th - t))),
        lower_replica: shifts
            .clone()
            .all(|t| zero(r(&v[1][0], &v[1][0], th - t) + r(&v[1][1], &v[1][1], th - t))),
    }
}

/// Evaluates the seed conditions for channel memory `lambda`.
pub fn seed_conditions(seed: &CharacteristicMatrix, lambda: usize) -> Result<SeedConditions> {
    if seed.n_t() != 2 || seed.j() != 2 {
        return Err(Error::DimensionMismatch(
            "seed conditions need a 2 x 2 block seed".into(),
        ));
    }
    if lambda > seed.theta() {
        return Err(Error::param(format!(
            "lambda={lambda} exceeds the block length {}",
            seed.theta()
        )));
    }
    if seed.blocks()[0][0].alphabet().is_exact() {
        let v = seed
            .blocks()
            .iter()
            .map(|r| r.iter().map(|b| b.values::<i64>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(seed_conditions_with(&v, seed.theta(), lambda))
    } else {
        let v = seed
            .blocks()
            .iter()
            .map(|r| r.iter().map(|b| b.values::<f64>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(seed_conditions_with(&v, seed.theta(), lambda))
    }
}

/// Reference and random matrices for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineKind {
    /// The binary length-16 Golay pair in the two-sub-block layout.
    Gcp16,
    /// The length-31 m-sequence on every row of the single-block layout.
    Mseq31,
    /// The length-13 Barker sequence in the two-sub-block layout.
    Barker13,
    /// Four length-31 Gold sequences in the single-block layout.
    Gold31,
    /// Zadoff-Chu sequences of length 32 in the single-block layout.
    Zc32,
    /// Random signs with a random column-to-row assignment, `Q` columns per row.
    Random,
    /// Random binary length-`Q` rows in the single-block layout.
    RandomBlock,
}

impl BaselineKind {
    pub const FIXED: [BaselineKind; 5] = [Self::Gcp16, Self::Mseq31, Self::Barker13, Self::Gold31, Self::Zc32];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gcp16 => "gcp16",
            Self::Mseq31 => "mseq31",
            Self::Barker13 => "barker13",
            Self::Gold31 => "gold31",
            Self::Zc32 => "zc32",
            Self::Random => "random",
            Self::RandomBlock => "random-block",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, Self::Random | Self::RandomBlock)
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Self::Gcp16,
            Self::Mseq31,
            Self::Barker13,
            Self::Gold31,
            Self::Zc32,
            Self::Random,
            Self::RandomBlock,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::param(format!("unknown baseline kind '{s}'")))
    }
}

fn lfsr31(taps: &[usize]) -> Vec<u8> {
    let mut s = vec![1u8; 31];
    for k in 0..26 {
        s[k + 5] = taps.iter().fold(0, |acc, &t| acc ^ s[k + t]);
    }
    s
}

/// Gold sequences `u + T^{-k} v` for `k = 0..count` from the preferred pair
/// `x^5 + x^2 + 1`, `x^5 + x^4 + x^3 + x^2 + 1`.
pub fn gold31(count: usize) -> Vec<QarySequence> {
    let u = lfsr31(&[0, 2]);
    let v = lfsr31(&[0, 2, 3, 4]);
    (0..count)
        .map(|k| {
            QarySequence::new(2, (0..31).map(|i| u32::from(u[i] ^ v[(i + k) % 31])).collect()).expect("valid bits")
        })
        .collect()
}

/// Zadoff-Chu sequences `exp(-i pi u n^2 / 32)` for the first `count` odd roots,
/// as phases over `A_64`.
pub fn zadoff_chu32(count: usize) -> Vec<QarySequence> {
    (0..count as i64)
        .map(|r| {
            let u = 2 * r + 1;
            QarySequence::from_phases_mod(64, (0..32i64).map(|n| -u * n * n)).expect("valid phases")
        })
        .collect()
}

fn random_binary<R: Rng + ?Sized>(rng: &mut R, len: usize) -> QarySequence {
    QarySequence::new(2, (0..len).map(|_| rng.random_range(0..2u32)).collect()).expect("non-empty")
}

/// A random matrix with `q_len` signed unit entries per row and one per column.
pub fn random_regular<R: Rng + ?Sized>(rng: &mut R, n_t: usize, q_len: usize) -> Result<TrainingMatrix<f64>> {
    use rand::seq::SliceRandom;
    if n_t == 0 || q_len == 0 {
        return Err(Error::param("random matrix needs positive dimensions"));
    }
    let l = n_t * q_len;
    let mut assign: Vec<usize> = (0..l).map(|c| c / q_len).collect();
    assign.shuffle(rng);
    let mut rows = vec![vec![Complex::new(0.0, 0.0); l]; n_t];
    for (c, &n) in assign.iter().enumerate() {
        rows[n][c] = Complex::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0);
    }
    TrainingMatrix::from_rows(
        rows,
        Layout {
            n_t,
            j: 0,
            theta: 0,
            q: Some(2),
            seed_kind: BaselineKind::Random.name().into(),
        },
    )
}

/// Options for [`baseline_matrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineSpec {
    pub kind: BaselineKind,
    pub n_t: usize,
    /// Non-zeros per row for the random kinds.
    pub q_len: usize,
    /// Row energy after normalization; `None` keeps unit amplitudes.
    pub energy: Option<f64>,
}

impl BaselineSpec {
    pub fn new(kind: BaselineKind) -> Self {
        BaselineSpec {
            kind,
            n_t: 4,
            q_len: 32,
            energy: Some(32.0),
        }
    }
}

/// Builds a baseline matrix; `rng` is used by the random kinds only.
pub fn baseline_matrix<R: Rng + ?Sized>(spec: &BaselineSpec, rng: &mut R) -> Result<TrainingMatrix<f64>> {
    let n_t = spec.n_t;
    if n_t == 0 {
        return Err(Error::param("N_t must be positive"));
    }
    let kind = spec.kind.name();
    let mut m = match spec.kind {
        BaselineKind::Gcp16 => proposed_matrix::<f64>(&data::gcp16(), SeedVariant::Psi1, n_t, 2)?,
        BaselineKind::Mseq31 => single_block(&vec![data::mseq31(); n_t], kind)?,
        BaselineKind::Barker13 => {
            let psi = CharacteristicMatrix::new(vec![vec![data::barker13(); 2]; n_t])?;
            psi_to_omega(&psi, kind)?
        }
        BaselineKind::Gold31 => {
            if n_t > 33 {
                return Err(Error::param("at most 33 Gold sequences of length 31"));
            }
            single_block(&gold31(n_t), kind)?
        }
        BaselineKind::Zc32 => {
            if n_t > 16 {
                return Err(Error::param("at most 16 odd Zadoff-Chu roots below 32"));
            }
            single_block(&zadoff_chu32(n_t), kind)?
        }
        BaselineKind::Random => random_regular(rng, n_t, spec.q_len)?,
        BaselineKind::RandomBlock => {
            let seqs: Vec<QarySequence> = (0..n_t).map(|_| random_binary(rng, spec.q_len)).collect();
            single_block(&seqs, kind)?
        }
    };
    m.layout.seed_kind = kind.to_string();
    if let Some(e) = spec.energy {
        m.normalize_energy(e);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::pcc;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair84() -> SequencePair {
        SequencePair::parse("+++-++-+", "+++---+-").unwrap()
    }

    #[test]
    fn omega_layout_matches_block_picture() {
        let m = proposed_matrix::<i64>(&pair84(), SeedVariant::Psi1, 4, 2).unwrap();
        assert_eq!((m.n_t(), m.l()), (4, 64));
        assert!(m.has_one_nonzero_per_column());
        let a = pair84().a.values::<i64>().unwrap();
        let b = pair84().b.values::<i64>().unwrap();
        for n in 0..4 {
            assert_eq!(&m.row(n)[n * 8..n * 8 + 8], &a[..]);
            assert_eq!(&m.row(n)[32 + n * 8..32 + n * 8 + 8], &b[..]);
            assert_eq!(m.nonzeros_in_row(n), 16);
            assert_eq!(m.row_energy(n), 16);
        }
    }

    #[test]
    fn psi_round_trip() {
        for v in [SeedVariant::Psi1, SeedVariant::Psi2] {
            let psi = expand_psi(&seed_psi(&pair84(), v).unwrap(), 6).unwrap();
            let omega = psi_to_omega::<i64>(&psi, "t").unwrap();
            assert_eq!(omega_to_psi(&omega).unwrap(), psi);
        }
    }

    #[test]
    fn expansion_shapes() {
        let seed = seed_psi(&pair84(), SeedVariant::Psi2).unwrap();
        assert_eq!(expand_psi(&seed, 2).unwrap(), seed);
        let six = expand_psi(&seed, 6).unwrap();
        assert_eq!(six.n_t(), 6);
        for n in 0..3 {
            assert_eq!(six.blocks()[n], seed.blocks()[0]);
            assert_eq!(six.blocks()[n + 3], seed.blocks()[1]);
        }
        assert!(expand_psi(&seed, 3).is_err());
        let omega = psi_to_omega::<i64>(&expand_psi(&seed, 4).unwrap(), "t").unwrap();
        let six_j = expand_omega(&omega, 6).unwrap();
        assert_eq!(six_j.l(), 192);
        assert_eq!(six_j.row_energy(0), 48);
        assert!(expand_omega(&omega, 3).is_err());
        assert_eq!(expand_omega(&omega, 2).unwrap(), omega);
    }

    #[test]
    fn psi2_second_row() {
        let seed = seed_psi(&pair84(), SeedVariant::Psi2).unwrap();
        let p = pair84();
        assert_eq!(seed.block(1, 0), &p.b.reverse_conjugate());
        assert_eq!(seed.block(1, 1), &p.a.reverse_conjugate().negate().unwrap());
    }

    #[test]
    fn optimal_at_lambda_four() {
        let m = proposed_matrix::<i64>(&pair84(), SeedVariant::Psi1, 4, 2).unwrap();
        let x = assemble_x(&m, 4).unwrap();
        assert_eq!(x.x.shape(), (64, 20));
        let g = x.gram();
        assert_eq!(
            g,
            DMatrix::from_fn(20, 20, |r, c| Complex::new(if r == c { 16 } else { 0 }, 0))
        );
        assert_eq!(gram_from_pcc(&m, 4), g);
        let r = verify_optimal(&m, 4).unwrap();
        assert!(r.optimal && r.pcc_optimal);
        let r5 = verify_optimal(&m, 5).unwrap();
        assert!(!r5.optimal && !r5.pcc_optimal);
        assert!(!r5.violations.is_empty());
    }

    #[test]
    fn single_block_fails_beyond_flat_fading() {
        let p = pair84();
        let m = single_block::<i64>(&[p.a.clone(), p.b.clone(), p.a.clone(), p.b.clone()], "eq37").unwrap();
        assert!(m.has_one_nonzero_per_column());
        let r0 = verify_optimal(&m, 0).unwrap();
        assert!(r0.optimal);
        assert!(!verify_optimal(&m, 1).unwrap().optimal);
    }

    #[test]
    fn seed_conditions_track_width() {
        for v in [SeedVariant::Psi1, SeedVariant::Psi2] {
            let seed = seed_psi(&pair84(), v).unwrap();
            assert!(seed_conditions(&seed, 4).unwrap().all());
            assert!(!seed_conditions(&seed, 5).unwrap().all());
        }
    }

    #[test]
    fn lambda_zero_is_a_single_column() {
        let m = proposed_matrix::<i64>(&pair84(), SeedVariant::Psi1, 2, 2).unwrap();
        let x = assemble_x(&m, 0).unwrap();
        assert_eq!(x.x.ncols(), 2);
        for k in 0..m.l() {
            assert_eq!(x.x[(k, 0)], m.row(0)[k]);
        }
        assert!(assemble_x(&m, m.l()).is_err());
    }

    #[test]
    fn gold_and_zc_properties() {
        let g = gold31(4);
        let vals: Vec<i64> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .flat_map(|(i, j)| {
                let g = &g;
                (0..31).map(move |t| pcc(&g[i], &g[j], t).unwrap().as_exact().unwrap().re)
            })
            .collect();
        assert!(vals.iter().all(|v| [-9, -1, 7].contains(v)));
        let m = data::mseq31();
        for t in 1..31 {
            assert_eq!(pcc(&m, &m, t).unwrap().as_exact().unwrap().re, -1);
        }
        for z in zadoff_chu32(4) {
            for t in 1..32 {
                assert!(pcc(&z, &z, t).unwrap().is_zero(32));
            }
        }
    }

    #[test]
    fn baselines_are_sparse_and_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in BaselineKind::FIXED
            .into_iter()
            .chain([BaselineKind::Random, BaselineKind::RandomBlock])
        {
            let m = baseline_matrix(&BaselineSpec::new(kind), &mut rng).unwrap();
            assert!(m.has_one_nonzero_per_column(), "{kind:?}");
            for n in 0..4 {
                assert!((m.row_energy(n) - 32.0).abs() < 1e-9, "{kind:?}");
            }
        }
        let b = baseline_matrix(&BaselineSpec::new(BaselineKind::Barker13), &mut rng).unwrap();
        assert_eq!(b.l(), 104);
        assert!((b.row(0)[0].re - (32.0f64 / 26.0).sqrt()).abs() < 1e-12);
        assert!(!verify_optimal(&b, 1).unwrap().optimal);
        assert!(!verify_optimal(&b, 1).unwrap().violations.is_empty());
        assert!("nope".parse::<BaselineKind>().is_err());
    }

    #[test]
    fn random_regular_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let m = random_regular(&mut rng, 4, 16).unwrap();
            assert!(m.has_one_nonzero_per_column());
            assert!((0..4).all(|n| m.nonzeros_in_row(n) == 16));
        }
    }

    #[test]
    fn csv_round_trip() {
        let m = proposed_matrix::<i64>(&pair84(), SeedVariant::Psi2, 4, 2).unwrap();
        let csv = m.to_csv(Some(4));
        assert!(csv.starts_with("# {\"n_t\":4,\"j\":2,\"theta\":8,\"lambda\":4,\"seed_kind\":\"psi2\",\"E\":16.0"));
        let (back, meta) = parse_matrix_csv(&csv).unwrap();
        assert_eq!(meta.lambda, Some(4));
        assert_eq!(back, m.to_f64());
        assert_eq!(parse_complex("-0.5-1.5e-3j"), Some(Complex::new(-0.5, -1.5e-3)));
        assert_eq!(parse_complex("1+0j"), Some(Complex::new(1.0, 0.0)));
        assert!(matches!(parse_matrix_csv("# {}\n"), Err(Error::Parse { .. })));
    }
}
