//! Brute-force ground truth for tiny `T_n(F_q)`.
//!
//! Matrices are coded as mixed-radix integers over their packed entries
//! (see [`UTMatrix::encode`]), so sets of matrices are bitmaps over
//! `0..q^{n(n+1)/2}`. Every enumeration is guarded; the guard is an error,
//! never a silent truncation. `WARING_MAX_ENUM` replaces the default limits.
//!
//! ```
//! use tri_waring::{oracle, Field, UTMatrix};
//!
//! let f3 = Field::prime(3).unwrap();
//! let j: UTMatrix = "0,1;0".parse().unwrap();
//! let r = oracle::min_waring_number(&f3, &j, 2, 4).unwrap();
//! assert_eq!(r, oracle::MinCount::Exact(3));
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use bitvec::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::canonical::ConjugationWitness;
use crate::enumeration_limit;
use crate::field::{Elem, Field};
use crate::tri_matrix::{jordan_block, junction_matrix, mat_mul, mat_pow, MatrixError, UTMatrix};

/// Default limit on `|T_n(F_q)|`.
pub const MATRIX_LIMIT: u64 = 100_000_000;
/// Default limit on `|B_n(F_q)|`.
pub const GROUP_LIMIT: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration of {size} elements exceeds the limit {limit} (set WARING_MAX_ENUM to override)")]
    EnumerationTooLarge { size: u64, limit: u64 },
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn packed_len(n: usize) -> u32 {
    (n * (n + 1) / 2) as u32
}

/// `q^{n(n+1)/2}`, checked against the matrix guard.
pub fn space_size(q: u32, n: usize) -> Result<u64, OracleError> {
    let limit = enumeration_limit(MATRIX_LIMIT);
    let size = (q as u64).checked_pow(packed_len(n)).unwrap_or(u64::MAX);
    if size > limit {
        return Err(OracleError::EnumerationTooLarge { size, limit });
    }
    Ok(size)
}

/// `{A^k : A ∈ T_n(F_q)}`, with the smallest-code root of each power.
#[derive(Debug, Clone)]
pub struct PowerSet {
    n: usize,
    q: u32,
    k: u64,
    bits: BitVec,
    roots: HashMap<u64, u64>,
}

impl PowerSet {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, c: &UTMatrix) -> bool {
        c.size() == self.n && self.bits.get(c.encode(self.q) as usize).is_some_and(|b| *b)
    }

    /// A root `A` with `A^k = c`, the one of smallest code.
    pub fn root_of(&self, c: &UTMatrix) -> Option<UTMatrix> {
        if c.size() != self.n {
            return None;
        }
        self.roots.get(&c.encode(self.q)).map(|&r| UTMatrix::decode(self.n, self.q, r))
    }

    /// Codes of the powers, ascending.
    pub fn codes(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter_ones().map(|i| i as u64)
    }

    pub fn matrices(&self) -> impl Iterator<Item = UTMatrix> + '_ {
        self.codes().map(|c| UTMatrix::decode(self.n, self.q, c))
    }
}

/// All k-th powers in `T_n(F_q)`. The code range is split across threads;
/// merging keeps the smallest root per power, so the result does not depend
/// on scheduling.
pub fn all_kth_powers(f: &Field, n: usize, k: u64) -> Result<PowerSet, OracleError> {
    let q = f.order();
    let size = space_size(q, n)?;
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(16);
    let workers = if size < 50_000 { 1 } else { workers as u64 };
    let chunk = size.div_ceil(workers);
    let partial: Vec<Vec<(u64, u64)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(size);
                s.spawn(move || {
                    let mut seen: HashMap<u64, u64> = HashMap::new();
                    for code in lo..hi {
                        let a = UTMatrix::decode(n, q, code);
                        seen.entry(mat_pow(f, &a, k).encode(q)).or_insert(code);
                    }
                    seen.into_iter().collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut bits = bitvec![0; size as usize];
    let mut roots: HashMap<u64, u64> = HashMap::new();
    for (p, r) in partial.into_iter().flatten() {
        bits.set(p as usize, true);
        let e = roots.entry(p).or_insert(r);
        *e = (*e).min(r);
    }
    Ok(PowerSet { n, q, k, bits, roots })
}

/// Smallest number of summands, or `> cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MinCount {
    Exact(u32),
    AboveCap(u32),
}

impl MinCount {
    pub fn exact(self) -> Option<u32> {
        match self {
            MinCount::Exact(r) => Some(r),
            MinCount::AboveCap(_) => None,
        }
    }
}

impl fmt::Display for MinCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinCount::Exact(r) => write!(f, "{r}"),
            MinCount::AboveCap(c) => write!(f, ">{c}"),
        }
    }
}

impl Serialize for MinCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MinCount::Exact(r) => s.serialize_u32(*r),
            MinCount::AboveCap(_) => s.collect_str(self),
        }
    }
}

/// Sumsets `P^1 ⊆ P^2 ⊆ …` of a power set, built on demand.
pub struct Sumsets<'a> {
    f: &'a Field,
    powers: &'a PowerSet,
    power_digits: Vec<Vec<Elem>>,
    levels: Vec<BitVec>,
}

impl<'a> Sumsets<'a> {
    pub fn new(f: &'a Field, powers: &'a PowerSet) -> Self {
        let power_digits = powers.matrices().map(|m| m.packed().to_vec()).collect();
        Sumsets { f, powers, power_digits, levels: vec![powers.bits.clone()] }
    }

    fn encode(&self, digits: &[Elem]) -> u64 {
        let q = self.powers.q as u64;
        digits.iter().rev().fold(0, |acc, e| acc * q + e.0 as u64)
    }

    /// `P^r` (1-based).
    pub fn level(&mut self, r: usize) -> &BitVec {
        assert!(r >= 1);
        while self.levels.len() < r {
            let prev = self.levels.last().expect("level 1 exists");
            let mut next = prev.clone();
            let (n, q) = (self.powers.n, self.powers.q);
            for code in prev.iter_ones() {
                let base = UTMatrix::decode(n, q, code as u64);
                for p in &self.power_digits {
                    let sum: Vec<Elem> =
                        base.packed().iter().zip(p).map(|(&a, &b)| self.f.add(a, b)).collect();
                    next.set(self.encode(&sum) as usize, true);
                }
            }
            self.levels.push(next);
        }
        &self.levels[r - 1]
    }

    /// Whether `c ∈ P^r`, testing `c − p ∈ P^{r−1}` for every power `p`
    /// rather than building `P^r` itself.
    pub fn contains(&mut self, c: &UTMatrix, r: usize) -> bool {
        if r == 1 {
            return self.powers.contains(c);
        }
        let target = c.packed().to_vec();
        let prev = self.level(r - 1).clone();
        self.power_digits.iter().any(|p| {
            let diff: Vec<Elem> = target.iter().zip(p).map(|(&a, &b)| self.f.sub(a, b)).collect();
            prev[self.encode(&diff) as usize]
        })
    }

    /// `r` k-th roots whose powers sum to `c`, if `c ∈ P^r`.
    pub fn witness(&mut self, c: &UTMatrix, r: usize) -> Option<Vec<UTMatrix>> {
        if r == 1 {
            return self.powers.root_of(c).map(|a| vec![a]);
        }
        let (n, q) = (self.powers.n, self.powers.q);
        let prev = self.level(r - 1).clone();
        let target = c.packed().to_vec();
        let digits = self.power_digits.clone();
        for p in &digits {
            let diff: Vec<Elem> = target.iter().zip(p).map(|(&a, &b)| self.f.sub(a, b)).collect();
            let code = self.encode(&diff);
            if prev[code as usize] {
                let head = self.powers.root_of(&UTMatrix::from_packed(n, p.clone()).ok()?)?;
                let mut rest = self.witness(&UTMatrix::decode(n, q, code), r - 1)?;
                rest.insert(0, head);
                return Some(rest);
            }
        }
        None
    }
}

/// First `r ≤ cap` with `c ∈ P^r`.
pub fn min_waring_number(f: &Field, c: &UTMatrix, k: u64, cap: u32) -> Result<MinCount, OracleError> {
    Ok(min_waring_with_witness(f, c, k, cap)?.0)
}

/// Like [`min_waring_number`], with roots realising the minimum.
pub fn min_waring_with_witness(
    f: &Field,
    c: &UTMatrix,
    k: u64,
    cap: u32,
) -> Result<(MinCount, Option<Vec<UTMatrix>>), OracleError> {
    if cap == 0 {
        return Err(OracleError::InvalidArgument("cap must be at least 1".into()));
    }
    c.validate(f)?;
    let powers = all_kth_powers(f, c.size(), k)?;
    let mut sums = Sumsets::new(f, &powers);
    for r in 1..=cap as usize {
        if sums.contains(c, r) {
            return Ok((MinCount::Exact(r as u32), sums.witness(c, r)));
        }
    }
    Ok((MinCount::AboveCap(cap), None))
}

/// Minimum summand counts over all of `T_n(F_q)`.
#[derive(Debug, Clone, Serialize)]
pub struct WaringReport {
    pub field: String,
    pub n: usize,
    pub k: u64,
    pub cap: u32,
    pub matrices: u64,
    pub powers: usize,
    /// Count of matrices per minimum, keyed `"1"`, `"2"`, …, `">cap"`.
    pub histogram: BTreeMap<String, u64>,
    /// Largest minimum, or `">cap"` when some matrix needs more.
    pub max_over_field: MinCount,
    /// Matrices attaining the maximum, with roots.
    pub witnesses: Vec<WaringWitness>,
    #[serde(skip)]
    pub per_matrix_min: Vec<MinCount>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WaringWitness {
    pub target: UTMatrix,
    pub min: MinCount,
    pub parts: Vec<UTMatrix>,
}

impl WaringReport {
    /// One `matrix,min` line per element of `T_n(F_q)`, in code order.
    pub fn to_csv(&self, q: u32) -> String {
        let mut out = String::from("matrix,min\n");
        for (code, m) in self.per_matrix_min.iter().enumerate() {
            out.push_str(&format!("\"{}\",{}\n", UTMatrix::decode(self.n, q, code as u64), m));
        }
        out
    }
}

pub fn waring_report(f: &Field, n: usize, k: u64, cap: u32) -> Result<WaringReport, OracleError> {
    if cap == 0 {
        return Err(OracleError::InvalidArgument("cap must be at least 1".into()));
    }
    let q = f.order();
    let size = space_size(q, n)?;
    let powers = all_kth_powers(f, n, k)?;
    let mut sums = Sumsets::new(f, &powers);
    let mut per_matrix_min = vec![MinCount::AboveCap(cap); size as usize];
    let mut remaining = size;
    for r in 1..=cap as usize {
        let level = sums.level(r);
        for code in level.iter_ones() {
            if let MinCount::AboveCap(_) = per_matrix_min[code] {
                per_matrix_min[code] = MinCount::Exact(r as u32);
                remaining -= 1;
            }
        }
        if remaining == 0 {
            break;
        }
    }
    let mut histogram = BTreeMap::new();
    for m in &per_matrix_min {
        *histogram.entry(m.to_string()).or_insert(0) += 1;
    }
    let max_over_field = per_matrix_min
        .iter()
        .copied()
        .max_by_key(|m| match m {
            MinCount::Exact(r) => *r as u64,
            MinCount::AboveCap(_) => u64::MAX,
        })
        .unwrap_or(MinCount::Exact(1));
    let mut witnesses = Vec::new();
    if let MinCount::Exact(r) = max_over_field {
        for (code, m) in per_matrix_min.iter().enumerate() {
            if *m == max_over_field && witnesses.len() < 3 {
                let target = UTMatrix::decode(n, q, code as u64);
                if let Some(parts) = sums.witness(&target, r as usize) {
                    witnesses.push(WaringWitness { target, min: *m, parts });
                }
            }
        }
    }
    Ok(WaringReport {
        field: f.to_string(),
        n,
        k,
        cap,
        matrices: size,
        powers: powers.len(),
        histogram,
        max_over_field,
        witnesses,
        per_matrix_min,
    })
}

/// `|B_n(F_q)| = (q−1)^n q^{n(n−1)/2}`, checked against the group guard.
pub fn group_size(q: u32, n: usize) -> Result<u64, OracleError> {
    let limit = enumeration_limit(GROUP_LIMIT);
    let size = ((q - 1) as u64)
        .checked_pow(n as u32)
        .and_then(|d| d.checked_mul((q as u64).checked_pow((n * (n - 1) / 2) as u32)?))
        .unwrap_or(u64::MAX);
    if size > limit {
        return Err(OracleError::EnumerationTooLarge { size, limit });
    }
    Ok(size)
}

/// Smallest-code `P ∈ B_n` with `P⁻¹AP = B`, or `None`.
pub fn bn_conjugate(
    f: &Field,
    a: &UTMatrix,
    b: &UTMatrix,
) -> Result<Option<ConjugationWitness>, OracleError> {
    let n = a.size();
    if b.size() != n {
        return Err(OracleError::SizeMismatch(n, b.size()));
    }
    a.validate(f)?;
    b.validate(f)?;
    let q = f.order();
    group_size(q, n)?;
    // conjugation fixes the diagonal
    if a.diag() != b.diag() {
        return Ok(None);
    }
    let total = (q as u64).pow(packed_len(n));
    for code in 0..total {
        let p = UTMatrix::decode(n, q, code);
        if p.diag().iter().any(|d| d.is_zero()) {
            continue;
        }
        if mat_mul(f, a, &p)? == mat_mul(f, &p, b)? {
            return Ok(Some(ConjugationWitness { s: p, before: a.clone(), after: b.clone() }));
        }
    }
    Ok(None)
}

/// One machine-checked negative statement.
#[derive(Debug, Clone, Serialize)]
pub struct NegativeCheck {
    pub name: String,
    /// Whether the statement's hypotheses hold for this field and exponent.
    pub applies: bool,
    /// `Some(true)` when confirmed, `Some(false)` when refuted, `None` when skipped.
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativeReport {
    pub field: String,
    pub k: u64,
    pub checks: Vec<NegativeCheck>,
}

impl NegativeReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds != Some(false))
    }
}

/// Checks, where their hypotheses apply:
/// - `E_12 + E_34` is not a square in `T_4(F_3)`;
/// - `J_{0,n}`, `n ∈ {2, 3}`, is not a sum of two k-th powers when `−1` is
///   not a k-th power (odd characteristic);
/// - `[[1,1],[0,1]]` is not a k-th power when `p | k`.
pub fn negative_checks(f: &Field, k: u64) -> Result<NegativeReport, OracleError> {
    let mut checks = Vec::new();

    let applies = f.order() == 3 && k == 2;
    let holds = if applies {
        let junction = junction_matrix(&[2, 2])?;
        Some(!all_kth_powers(f, 4, 2)?.contains(&junction))
    } else {
        None
    };
    checks.push(NegativeCheck {
        name: "junction_2_2_not_square".into(),
        applies,
        holds,
        detail: "E12+E34 against all squares of T_4(F_3)".into(),
    });

    let applies = f.characteristic() != 2 && !f.minus_one_is_kth_power(k);
    for n in [2usize, 3] {
        let holds = if applies {
            let powers = all_kth_powers(f, n, k)?;
            Some(!Sumsets::new(f, &powers).contains(&jordan_block(Elem::ZERO, n), 2))
        } else {
            None
        };
        checks.push(NegativeCheck {
            name: format!("jordan_{n}_not_two_powers"),
            applies,
            holds,
            detail: format!("J_(0,{n}) against sums of two powers, k = {k}"),
        });
    }

    let applies = k >= 2 && k.is_multiple_of(f.characteristic() as u64);
    let holds = if applies {
        Some(!all_kth_powers(f, 2, k)?.contains(&jordan_block(Elem::ONE, 2)))
    } else {
        None
    };
    checks.push(NegativeCheck {
        name: "unipotent_2x2_not_power".into(),
        applies,
        holds,
        detail: format!("[[1,1],[0,1]] against all powers of T_2, k = {k}"),
    });

    Ok(NegativeReport { field: f.to_string(), k, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri_matrix::direct_sum;

    fn m(s: &str) -> UTMatrix {
        s.parse().unwrap()
    }

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn power_set_examples() {
        let f3 = fp(3);
        let cubes = all_kth_powers(&f3, 2, 3).unwrap();
        assert!(!cubes.contains(&m("1,1;1")));
        assert!(cubes.contains(&m("2,0;1")));

        let all = all_kth_powers(&f3, 2, 1).unwrap();
        assert_eq!(all.len(), 27);

        let squares = all_kth_powers(&f3, 2, 2).unwrap();
        assert!(squares.contains(&m("1,0;1")) && squares.contains(&m("1,1;0")));
        let root = squares.root_of(&m("1,1;0")).unwrap();
        assert_eq!(mat_pow(&f3, &root, 2), m("1,1;0"));
    }

    #[test]
    fn min_waring_examples() {
        let f3 = fp(3);
        let j = m("0,1;0");
        let (r, w) = min_waring_with_witness(&f3, &j, 2, 4).unwrap();
        assert_eq!(r, MinCount::Exact(3));
        let parts = w.unwrap();
        assert_eq!(parts.len(), 3);
        assert!(crate::decomposer::verify_decomposition(&f3, &j, &parts, 2).unwrap());

        assert_eq!(min_waring_number(&f3, &UTMatrix::zero(2), 2, 3).unwrap(), MinCount::Exact(1));
        assert_eq!(min_waring_number(&fp(13), &j, 2, 3).unwrap(), MinCount::Exact(2));
        assert_eq!(min_waring_number(&fp(7), &j, 2, 2).unwrap(), MinCount::AboveCap(2));
        assert_eq!(MinCount::AboveCap(2).to_string(), ">2");
    }

    #[test]
    fn report_over_small_field() {
        let rep = waring_report(&fp(3), 2, 2, 4).unwrap();
        assert_eq!(rep.matrices, 27);
        assert_eq!(rep.max_over_field, MinCount::Exact(3));
        assert_eq!(rep.histogram.values().sum::<u64>(), 27);
        assert!(rep.witnesses.iter().all(|w| w.parts.len() == 3));
        assert!(rep.to_csv(3).starts_with("matrix,min\n\"0,0;0\",1\n"));
    }

    #[test]
    fn conjugacy_examples() {
        let f7 = fp(7);
        let w = bn_conjugate(&f7, &m("1,1;2"), &m("1,0;2")).unwrap().unwrap();
        assert_eq!(w.s, m("1,1;1"));
        assert!(w.verify(&f7));
        let a = m("1,2,3;4,5;6");
        assert_eq!(bn_conjugate(&f7, &a, &a).unwrap().unwrap().s, UTMatrix::identity(3));
        assert!(bn_conjugate(&f7, &m("1,0;2"), &m("2,0;1")).unwrap().is_none());

        let f3 = fp(3);
        let j4 = jordan_block(Elem::ZERO, 4);
        let j2 = jordan_block(Elem::ZERO, 2);
        assert!(bn_conjugate(&f3, &mat_pow(&f3, &j4, 2), &direct_sum(&j2, &j2)).unwrap().is_none());
    }

    #[test]
    fn guards_are_errors() {
        assert!(matches!(
            all_kth_powers(&fp(13), 5, 2),
            Err(OracleError::EnumerationTooLarge { .. })
        ));
        assert!(matches!(group_size(13, 6), Err(OracleError::EnumerationTooLarge { .. })));
        assert_eq!(group_size(3, 4).unwrap(), 11664);
    }

    #[test]
    fn negative_check_examples() {
        let rep = negative_checks(&fp(3), 2).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.checks[0].holds, Some(true));
        assert_eq!(rep.checks[1].holds, Some(true));

        let rep = negative_checks(&fp(3), 3).unwrap();
        assert_eq!(rep.checks[3].holds, Some(true));

        let rep = negative_checks(&fp(13), 2).unwrap();
        assert!(rep.checks.iter().skip(1).all(|c| !c.applies));
    }

    #[test]
    fn even_characteristic_jordan_is_two_squares() {
        let f2 = fp(2);
        let j = m("0,1;0");
        assert_eq!(min_waring_number(&f2, &j, 2, 3).unwrap(), MinCount::Exact(2));
        assert!(crate::decomposer::verify_decomposition(&f2, &j, &[m("1,1;0"), m("1,0;0")], 2).unwrap());
    }
}
