//! Conjugation by invertible upper-triangular matrices, and the graph view
//! of 0/1 nilpotent matrices.
//!
//! Entries are reduced in the order `≼`: `a_ij ≼ a_i'j'` when `i > i'`, or
//! `i = i'` and `j < j'`. That is bottom row first, left to right inside a
//! row. Conjugating by the transvection `I + s·E_lr` only touches column `r`
//! above row `l` and row `l` right of column `r`, so every entry before
//! `(l, r)` in that order survives untouched.
//!
//! Presentations describe a nilpotent 0/1 matrix as a graph on `1..=n`:
//!
//! ```
//! use tri_waring::canonical::{is_indecomposable, parse_presentation};
//!
//! let a = parse_presentation("12|34:13", 4).unwrap();
//! assert_eq!(a.to_string(), "0,1,1,0;0,0,0;0,1;0");
//! assert!(is_indecomposable(&a).unwrap());
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Elem, Field};
use crate::tri_matrix::{mat_inverse, mat_mul, MatrixError, UTMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("diagonal entries ({0}, {0}) and ({1}, {1}) are equal, entry cannot be annihilated")]
    EqualDiagonal(usize, usize),
    #[error("diagonal entries {0} and {1} coincide")]
    DiagNotDistinct(usize, usize),
    #[error("matrix is not strictly upper triangular")]
    NotNilpotent,
    #[error("bad position ({0}, {1}): need row < column < size")]
    BadPosition(usize, usize),
    #[error("cannot parse presentation `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("label {label} is outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("vertex {0} appears twice")]
    DuplicateVertex(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `after = S⁻¹ · before · S` with `S` invertible upper triangular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationWitness {
    #[serde(rename = "S")]
    pub s: UTMatrix,
    pub before: UTMatrix,
    pub after: UTMatrix,
}

impl ConjugationWitness {
    /// Recomputes `S⁻¹·before·S` and compares.
    pub fn verify(&self, f: &Field) -> bool {
        let Ok(inv) = mat_inverse(f, &self.s) else { return false };
        mat_mul(f, &inv, &self.before)
            .and_then(|m| mat_mul(f, &m, &self.s))
            .is_ok_and(|m| m == self.after)
    }
}

/// Positions `(l, r)`, `l < r`, in reduction order: bottom row upward, left
/// to right within a row.
pub fn reduction_order(n: usize) -> Vec<(usize, usize)> {
    (0..n).rev().flat_map(|l| (l + 1..n).map(move |r| (l, r))).collect()
}

/// Conjugates by `S = I + s·E_lr`, `s = −a_lr·(a_ll − a_rr)⁻¹`, clearing
/// `(l, r)` (0-based) and keeping all earlier entries.
pub fn annihilate_entry(
    f: &Field,
    a: &UTMatrix,
    l: usize,
    r: usize,
) -> Result<(UTMatrix, ConjugationWitness), CanonicalError> {
    let n = a.size();
    if l >= r || r >= n {
        return Err(CanonicalError::BadPosition(l, r));
    }
    let mut s_mat = UTMatrix::identity(n);
    let entry = a.get(l, r);
    if !entry.is_zero() {
        let gap = f.sub(a.get(l, l), a.get(r, r));
        let gap_inv = f.inv(gap).map_err(|_| CanonicalError::EqualDiagonal(l, r))?;
        s_mat.set(l, r, f.neg(f.mul(entry, gap_inv)));
    } else if a.get(l, l) == a.get(r, r) {
        return Err(CanonicalError::EqualDiagonal(l, r));
    }
    let after = conjugate(f, a, &s_mat)?;
    debug_assert!(after.get(l, r).is_zero());
    let w = ConjugationWitness { s: s_mat, before: a.clone(), after: after.clone() };
    Ok((after, w))
}

/// `S⁻¹·A·S`.
pub fn conjugate(f: &Field, a: &UTMatrix, s: &UTMatrix) -> Result<UTMatrix, CanonicalError> {
    let inv = mat_inverse(f, s)?;
    Ok(mat_mul(f, &mat_mul(f, &inv, a)?, s)?)
}

/// Diagonal form of a matrix with pairwise distinct diagonal entries, with
/// the composed transvection witness.
pub fn diagonalize_distinct(
    f: &Field,
    a: &UTMatrix,
) -> Result<(UTMatrix, ConjugationWitness), CanonicalError> {
    let n = a.size();
    let d = a.diag();
    for i in 0..n {
        for j in i + 1..n {
            if d[i] == d[j] {
                return Err(CanonicalError::DiagNotDistinct(i, j));
            }
        }
    }
    let mut current = a.clone();
    let mut total = UTMatrix::identity(n);
    for (l, r) in reduction_order(n) {
        if current.get(l, r).is_zero() {
            continue;
        }
        let (next, step) = annihilate_entry(f, &current, l, r)?;
        total = mat_mul(f, &total, &step.s)?;
        current = next;
    }
    debug_assert!(current.is_diagonal());
    let w = ConjugationWitness { s: total, before: a.clone(), after: current.clone() };
    Ok((current, w))
}

/// Whether the graph on `0..n` with an edge for every nonzero `a_ij`,
/// `i < j`, is connected.
pub fn is_indecomposable(a: &UTMatrix) -> Result<bool, CanonicalError> {
    if !a.is_strictly_upper() {
        return Err(CanonicalError::NotNilpotent);
    }
    let n = a.size();
    if n <= 1 {
        return Ok(true);
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for (i, j) in a.off_diagonal_support() {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            components -= 1;
        }
    }
    Ok(components == 1)
}

/// A 0/1 nilpotent matrix as blocks of a partition of `1..=n` (each block a
/// path through its ascending elements) plus extra arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub n: usize,
    /// 1-based labels.
    pub blocks: Vec<Vec<usize>>,
    /// 1-based `(i, j)`, `i < j`, ascending.
    pub extra_arcs: Vec<(usize, usize)>,
}

impl Presentation {
    pub fn parse(text: &str, n: usize) -> Result<Self, CanonicalError> {
        let err = |reason: &str| CanonicalError::Parse { text: text.into(), reason: reason.into() };
        let trimmed = text.trim();
        let (blocks_txt, arcs_txt) = match trimmed.split_once(':') {
            Some((b, a)) => (b, Some(a)),
            None => (trimmed, None),
        };
        let commas = n >= 10;
        let labels = |chunk: &str| -> Result<Vec<usize>, CanonicalError> {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(err("empty label list"));
            }
            let raw: Vec<Result<usize, _>> = if commas {
                chunk.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| err("bad label"))).collect()
            } else {
                chunk
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err("labels are single digits")))
                    .collect()
            };
            raw.into_iter()
                .map(|l| {
                    let l = l?;
                    if l == 0 || l > n {
                        Err(CanonicalError::LabelOutOfRange { label: l, n })
                    } else {
                        Ok(l)
                    }
                })
                .collect()
        };

        let mut seen = vec![false; n + 1];
        let mut blocks = Vec::new();
        for chunk in blocks_txt.split('|') {
            let block = labels(chunk)?;
            for &v in &block {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(CanonicalError::DuplicateVertex(v));
                }
            }
            if block.windows(2).any(|w| w[0] >= w[1]) {
                return Err(err("block elements must ascend"));
            }
            blocks.push(block);
        }
        if blocks.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return Err(err("block minima must ascend"));
        }
        if let Some(missing) = (1..=n).find(|&v| !seen[v]) {
            return Err(err(&format!("vertex {missing} is in no block")));
        }

        let implied: BTreeSet<(usize, usize)> =
            blocks.iter().flat_map(|b| b.windows(2).map(|w| (w[0], w[1]))).collect();
        let mut extra = BTreeSet::new();
        if let Some(arcs_txt) = arcs_txt {
            for chunk in arcs_txt.split('|') {
                let pair = labels(chunk)?;
                let &[i, j] = pair.as_slice() else { return Err(err("arcs join two labels")) };
                if i >= j {
                    return Err(err("arc must go from a smaller to a larger label"));
                }
                if implied.contains(&(i, j)) || !extra.insert((i, j)) {
                    return Err(err(&format!("arc {i}{j} is redundant")));
                }
            }
        }
        Ok(Presentation { n, blocks, extra_arcs: extra.into_iter().collect() })
    }

    /// All arcs (1-based), block paths first.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> =
            self.blocks.iter().flat_map(|b| b.windows(2).map(|w| (w[0], w[1]))).collect();
        out.extend(&self.extra_arcs);
        out
    }

    pub fn to_matrix(&self) -> UTMatrix {
        let mut m = UTMatrix::zero(self.n);
        for (i, j) in self.arcs() {
            m.set(i - 1, j - 1, Elem::ONE);
        }
        m
    }

    /// Greedy presentation of a 0/1 strictly upper matrix: each block starts
    /// at the smallest unplaced vertex and follows the smallest unplaced
    /// successor; leftover arcs become extra arcs.
    pub fn from_matrix(a: &UTMatrix) -> Result<Self, CanonicalError> {
        if !a.is_strictly_upper() {
            return Err(CanonicalError::NotNilpotent);
        }
        let n = a.size();
        let support = a.off_diagonal_support();
        if support.iter().any(|&(i, j)| a.get(i, j) != Elem::ONE) {
            return Err(CanonicalError::Parse {
                text: a.to_string(),
                reason: "entries must be 0 or 1".into(),
            });
        }
        let mut placed = vec![false; n];
        let mut blocks = Vec::new();
        let mut used = BTreeSet::new();
        for start in 0..n {
            if placed[start] {
                continue;
            }
            placed[start] = true;
            let mut block = vec![start + 1];
            let mut cur = start;
            while let Some(next) = (cur + 1..n).find(|&j| !placed[j] && !a.get(cur, j).is_zero()) {
                placed[next] = true;
                used.insert((cur, next));
                block.push(next + 1);
                cur = next;
            }
            blocks.push(block);
        }
        let extra_arcs = support
            .into_iter()
            .filter(|e| !used.contains(e))
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        Ok(Presentation { n, blocks, extra_arcs })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n >= 10 { "," } else { "" };
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(sep);
        let blocks: Vec<String> = self.blocks.iter().map(|b| join(b)).collect();
        f.write_str(&blocks.join("|"))?;
        if !self.extra_arcs.is_empty() {
            let arcs: Vec<String> = self.extra_arcs.iter().map(|&(i, j)| join(&[i, j])).collect();
            write!(f, ":{}", arcs.join("|"))?;
        }
        Ok(())
    }
}

/// The 0/1 nilpotent matrix of a presentation string.
pub fn parse_presentation(text: &str, n: usize) -> Result<UTMatrix, CanonicalError> {
    Ok(Presentation::parse(text, n)?.to_matrix())
}

/// Size implied by a digit presentation: its largest label.
pub fn presentation_size(text: &str) -> Option<usize> {
    if text.contains(',') {
        text.split([',', '|', ':']).filter_map(|t| t.trim().parse().ok()).max()
    } else {
        text.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).max()
    }
}
