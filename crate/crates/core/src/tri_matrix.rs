//! Upper-triangular matrices over `F_q`.
//!
//! Indices in this API are 0-based. The text format is 1-row-per-`;`, each
//! row listing its entries from the diagonal rightwards, e.g. `"0,1;0"` is the
//! 2×2 nilpotent Jordan block.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{Elem, Field, FieldError};
use crate::power_sums::eval_f;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("entry {value} at ({row}, {col}) is not an element of a field of order {q}")]
    FieldMismatch { row: usize, col: usize, value: u32, q: u32 },
    #[error("cannot parse matrix `{0}`")]
    Parse(String),
    #[error("index ({0}, {1}) is outside the upper triangle of a {2}×{2} matrix")]
    IndexOutOfRange(usize, usize, usize),
    #[error("bad partition {0:?}: parts must be positive")]
    BadPartition(Vec<usize>),
    #[error("diagonal entry {index} is not a k-th power")]
    DiagNotKthPower { index: usize },
    #[error("diagonal entries {0} and {1} coincide")]
    DiagNotDistinct(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no k-th root: entry ({row}, {col}) needs division by f(a_rr, a_ss) = 0")]
    NoRootAt { row: usize, col: usize },
    #[error("supplied root does not power to the supplied matrix")]
    RootMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An `n×n` upper-triangular matrix stored as its `n(n+1)/2` upper entries,
/// row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UTMatrix {
    n: usize,
    entries: Vec<Elem>,
}

impl UTMatrix {
    pub fn zero(n: usize) -> Self {
        UTMatrix { n, entries: vec![Elem::ZERO; n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Elem::ONE; n])
    }

    pub fn diagonal(diag: &[Elem]) -> Self {
        let mut m = Self::zero(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds from packed row-major entries.
    pub fn from_packed(n: usize, entries: Vec<Elem>) -> Result<Self, MatrixError> {
        if entries.len() != n * (n + 1) / 2 {
            return Err(MatrixError::Parse(format!(
                "{} packed entries for size {n}",
                entries.len()
            )));
        }
        Ok(UTMatrix { n, entries })
    }

    /// Builds from rows, where row `i` holds entries `(i, i..n)`.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n - i {
                return Err(MatrixError::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n - i
                )));
            }
            entries.extend(row.iter().map(|&v| Elem(v)));
        }
        Ok(UTMatrix { n, entries })
    }

    /// Builds from a full square array; entries below the diagonal must be zero.
    pub fn from_square(rows: &[Vec<u32>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut m = Self::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Parse(format!("row {} is not of length {n}", i + 1)));
            }
            for (j, &v) in row.iter().enumerate() {
                if j < i && v != 0 {
                    return Err(MatrixError::Parse(format!(
                        "nonzero entry below the diagonal at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if j >= i {
                    m.set(i, j, Elem(v));
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn packed(&self) -> &[Elem] {
        &self.entries
    }

    /// Entry `(i, j)`; zero below the diagonal.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        if i > j {
            Elem::ZERO
        } else {
            self.entries[packed_index(self.n, i, j)]
        }
    }

    /// Sets entry `(i, j)`. Panics below the diagonal.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        assert!(i <= j && j < self.n, "({i}, {j}) outside the upper triangle");
        self.entries[packed_index(self.n, i, j)] = v;
    }

    pub fn diag(&self) -> Vec<Elem> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal_support().is_empty()
    }

    pub fn is_strictly_upper(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_zero())
    }

    /// Positions `(i, j)`, `i < j`, holding nonzero entries, row-major.
    pub fn off_diagonal_support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.get(i, j).is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Copy with the diagonal replaced.
    pub fn with_diagonal(&self, diag: &[Elem]) -> Self {
        assert_eq!(diag.len(), self.n);
        let mut m = self.clone();
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Checks that every entry belongs to `f`.
    pub fn validate(&self, f: &Field) -> Result<(), MatrixError> {
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j);
                if !f.contains(v) {
                    return Err(MatrixError::FieldMismatch {
                        row: i,
                        col: j,
                        value: v.0,
                        q: f.order(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Parses the text format and validates entries against `f`.
    pub fn parse_in(text: &str, f: &Field) -> Result<Self, MatrixError> {
        let m: UTMatrix = text.parse()?;
        m.validate(f)?;
        Ok(m)
    }

    /// Mixed-radix code of the packed entries, first entry least significant.
    pub fn encode(&self, q: u32) -> u64 {
        self.entries.iter().rev().fold(0u64, |acc, e| acc * q as u64 + e.0 as u64)
    }

    pub fn decode(n: usize, q: u32, mut code: u64) -> Self {
        let mut m = Self::zero(n);
        for e in m.entries.iter_mut() {
            *e = Elem((code % q as u64) as u32);
            code /= q as u64;
        }
        m
    }
}

#[inline]
fn packed_index(n: usize, i: usize, j: usize) -> usize {
    // rows 0..i hold n + (n-1) + ... + (n-i+1) entries
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

impl fmt::Display for UTMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in i..self.n {
                if j > i {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

impl FromStr for UTMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(UTMatrix::zero(0));
        }
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|v| v.trim().parse::<u32>().map_err(|_| MatrixError::Parse(s.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        UTMatrix::from_rows(&rows).map_err(|e| match e {
            MatrixError::Parse(why) => MatrixError::Parse(format!("{s}: {why}")),
            other => other,
        })
    }
}

impl Serialize for UTMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn same_size(a: &UTMatrix, b: &UTMatrix) -> Result<(), MatrixError> {
    if a.n != b.n {
        return Err(MatrixError::SizeMismatch(a.n, b.n));
    }
    Ok(())
}

pub fn mat_add(f: &Field, a: &UTMatrix, b: &UTMatrix) -> Result<UTMatrix, MatrixError> {
    same_size(a, b)?;
    let entries = a.entries.iter().zip(&b.entries).map(|(&x, &y)| f.add(x, y)).collect();
    Ok(UTMatrix { n: a.n, entries })
}

pub fn mat_sub(f: &Field, a: &UTMatrix, b: &UTMatrix) -> Result<UTMatrix, MatrixError> {
    same_size(a, b)?;
    let entries = a.entries.iter().zip(&b.entries).map(|(&x, &y)| f.sub(x, y)).collect();
    Ok(UTMatrix { n: a.n, entries })
}

/// `(AB)_ij = Σ_{l=i..j} a_il b_lj`.
pub fn mat_mul(f: &Field, a: &UTMatrix, b: &UTMatrix) -> Result<UTMatrix, MatrixError> {
    same_size(a, b)?;
    Ok(mul_unchecked(f, a, b))
}

fn mul_unchecked(f: &Field, a: &UTMatrix, b: &UTMatrix) -> UTMatrix {
    let n = a.n;
    let mut out = UTMatrix::zero(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Elem::ZERO;
            for l in i..=j {
                acc = f.add(acc, f.mul(a.get(i, l), b.get(l, j)));
            }
            out.set(i, j, acc);
        }
    }
    out
}

pub fn mat_pow(f: &Field, a: &UTMatrix, mut k: u64) -> UTMatrix {
    let mut acc = UTMatrix::identity(a.n);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_unchecked(f, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mul_unchecked(f, &base, &base);
        }
    }
    acc
}

/// Smallest-encoding k-th root of each diagonal entry.
fn diagonal_roots(f: &Field, c: &UTMatrix, k: u64) -> Result<Vec<Elem>, MatrixError> {
    c.diag()
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            f.elements()
                .find(|&a| f.pow(a, k) == d)
                .ok_or(MatrixError::DiagNotKthPower { index: i })
        })
        .collect()
}

/// k-th root of `c` whose diagonal is the prescribed `diag_roots`.
///
/// Superdiagonal back-substitution: with all entries of superdiagonals `< d`
/// fixed, the `(r, s)` entry of `A^k` on superdiagonal `d` equals
/// `a_rs·f(a_rr, a_ss) + α_rs`, where `α_rs` is the `(r, s)` entry of the
/// k-th power of the partial matrix. A zero residual `c_rs − α_rs` is met by
/// `a_rs = 0`; otherwise `f(a_rr, a_ss)` must be invertible.
pub fn kth_root_with_diagonal(
    f: &Field,
    c: &UTMatrix,
    k: u64,
    diag_roots: &[Elem],
) -> Result<UTMatrix, MatrixError> {
    let n = c.n;
    if diag_roots.len() != n {
        return Err(MatrixError::SizeMismatch(n, diag_roots.len()));
    }
    for (i, &a) in diag_roots.iter().enumerate() {
        if f.pow(a, k) != c.get(i, i) {
            return Err(MatrixError::DiagNotKthPower { index: i });
        }
    }
    let mut a = UTMatrix::diagonal(diag_roots);
    for d in 1..n {
        let partial = mat_pow(f, &a, k);
        for r in 0..n - d {
            let s = r + d;
            let residual = f.sub(c.get(r, s), partial.get(r, s));
            if residual.is_zero() {
                continue;
            }
            let denom = eval_f(f, diag_roots[r], diag_roots[s], k);
            let inv = f.inv(denom).map_err(|_| MatrixError::NoRootAt { row: r, col: s })?;
            a.set(r, s, f.mul(residual, inv));
        }
    }
    Ok(a)
}

/// k-th root of a matrix whose diagonal entries are pairwise distinct k-th
/// powers. Diagonal roots are the smallest-encoding choices.
pub fn kth_root_distinct_diag(f: &Field, c: &UTMatrix, k: u64) -> Result<UTMatrix, MatrixError> {
    let diag = c.diag();
    for i in 0..c.n {
        for j in i + 1..c.n {
            if diag[i] == diag[j] {
                return Err(MatrixError::DiagNotDistinct(i, j));
            }
        }
    }
    let roots = diagonal_roots(f, c, k)?;
    kth_root_with_diagonal(f, c, k, &roots)
}

/// Checks the hypotheses of the sparse root construction: k-th power
/// diagonal, no chain `c_rs·c_st ≠ 0` with `r < s < t`, and distinct diagonal
/// ends for every nonzero off-diagonal entry.
pub fn check_sparse_rootable(f: &Field, c: &UTMatrix, k: u64) -> Result<Vec<Elem>, MatrixError> {
    let roots = diagonal_roots(f, c, k)?;
    let n = c.n;
    for r in 0..n {
        for s in r + 1..n {
            if c.get(r, s).is_zero() {
                continue;
            }
            if c.get(r, r) == c.get(s, s) {
                return Err(MatrixError::PreconditionViolated(format!(
                    "c({},{}) != 0 but c({},{}) = c({},{})",
                    r + 1,
                    s + 1,
                    r + 1,
                    r + 1,
                    s + 1,
                    s + 1
                )));
            }
            for t in s + 1..n {
                if !c.get(s, t).is_zero() {
                    return Err(MatrixError::PreconditionViolated(format!(
                        "chain c({},{})·c({},{}) != 0",
                        r + 1,
                        s + 1,
                        s + 1,
                        t + 1
                    )));
                }
            }
        }
    }
    Ok(roots)
}

/// k-th root of a chain-free matrix: `a_rs = c_rs / f(a_rr, a_ss)` entrywise.
pub fn kth_root_sparse(f: &Field, c: &UTMatrix, k: u64) -> Result<UTMatrix, MatrixError> {
    let roots = check_sparse_rootable(f, c, k)?;
    let mut a = UTMatrix::diagonal(&roots);
    for (r, s) in c.off_diagonal_support() {
        let denom = eval_f(f, roots[r], roots[s], k);
        let inv = f.inv(denom).map_err(|_| MatrixError::NoRootAt { row: r, col: s })?;
        a.set(r, s, f.mul(c.get(r, s), inv));
    }
    if mat_pow(f, &a, k) != *c {
        return Err(MatrixError::RootMismatch);
    }
    Ok(a)
}

/// Inserts a new row/column at index `l` (0-based, `0..=n`) holding only
/// `x^k` on the diagonal, and the matching root with `x` inserted.
pub fn embed_power(
    f: &Field,
    c: &UTMatrix,
    root_c: &UTMatrix,
    l: usize,
    x: Elem,
    k: u64,
) -> Result<(UTMatrix, UTMatrix), MatrixError> {
    same_size(c, root_c)?;
    let n = c.n;
    if l > n {
        return Err(MatrixError::IndexOutOfRange(l, l, n + 1));
    }
    if x.is_zero() {
        return Err(MatrixError::PreconditionViolated("inserted root must be nonzero".into()));
    }
    if mat_pow(f, root_c, k) != *c {
        return Err(MatrixError::RootMismatch);
    }
    let insert = |m: &UTMatrix, v: Elem| {
        let mut out = UTMatrix::zero(n + 1);
        let src = |i: usize| if i < l { i } else { i - 1 };
        for i in 0..=n {
            for j in i..=n {
                if i == l || j == l {
                    continue;
                }
                out.set(i, j, m.get(src(i), src(j)));
            }
        }
        out.set(l, l, v);
        out
    };
    let b = insert(c, f.pow(x, k));
    let root_b = insert(root_c, x);
    if mat_pow(f, &root_b, k) != b {
        return Err(MatrixError::RootMismatch);
    }
    Ok((b, root_b))
}

/// Inverse of an invertible triangular matrix, by back-substitution on
/// `A·X = I` column by column.
pub fn mat_inverse(f: &Field, a: &UTMatrix) -> Result<UTMatrix, MatrixError> {
    let n = a.n;
    let inv_diag = (0..n).map(|i| f.inv(a.get(i, i))).collect::<Result<Vec<_>, _>>()?;
    let mut x = UTMatrix::diagonal(&inv_diag);
    for j in 0..n {
        for i in (0..j).rev() {
            // (A·X)_ij = Σ_{i<=t<=j} a_it x_tj = 0
            let mut acc = Elem::ZERO;
            for t in i + 1..=j {
                acc = f.add(acc, f.mul(a.get(i, t), x.get(t, j)));
            }
            x.set(i, j, f.mul(f.neg(acc), inv_diag[i]));
        }
    }
    Ok(x)
}

/// `E_rs` of size `n` (0-based indices, `r <= s`).
pub fn elementary(n: usize, r: usize, s: usize) -> Result<UTMatrix, MatrixError> {
    if r > s || s >= n {
        return Err(MatrixError::IndexOutOfRange(r, s, n));
    }
    let mut m = UTMatrix::zero(n);
    m.set(r, s, Elem::ONE);
    Ok(m)
}

/// `J_{λ,n}`: `λ` on the diagonal, ones on the first superdiagonal.
pub fn jordan_block(lambda: Elem, n: usize) -> UTMatrix {
    let mut m = UTMatrix::diagonal(&vec![lambda; n]);
    for i in 0..n.saturating_sub(1) {
        m.set(i, i + 1, Elem::ONE);
    }
    m
}

/// Junction matrix of a partition: ones bridging the last index of each part
/// to the first index of the next.
pub fn junction_matrix(parts: &[usize]) -> Result<UTMatrix, MatrixError> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(MatrixError::BadPartition(parts.to_vec()));
    }
    let n: usize = parts.iter().sum();
    let mut m = UTMatrix::zero(n);
    let mut end = 0;
    for &part in &parts[..parts.len() - 1] {
        end += part;
        m.set(end - 1, end, Elem::ONE);
    }
    Ok(m)
}

/// Block direct sum `a ⊕ b`.
pub fn direct_sum(a: &UTMatrix, b: &UTMatrix) -> UTMatrix {
    let n = a.n + b.n;
    let mut m = UTMatrix::zero(n);
    for i in 0..a.n {
        for j in i..a.n {
            m.set(i, j, a.get(i, j));
        }
    }
    for i in 0..b.n {
        for j in i..b.n {
            m.set(a.n + i, a.n + j, b.get(i, j));
        }
    }
    m
}

/// Strictly upper part of `c` (diagonal zeroed).
pub fn strict_upper(c: &UTMatrix) -> UTMatrix {
    c.with_diagonal(&vec![Elem::ZERO; c.n])
}
