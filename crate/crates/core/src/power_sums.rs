//! Diagonal equations `X^k + Y^k = λ` and `X^k + Y^k + Z^k = λ` over `F_q`.
//!
//! Solutions of the two-variable equation split by their power signature
//! `(x^k, y^k)`. The symmetric part `U` collects solutions with `x^k = y^k`;
//! every other signature forms one class `V_i`. Picking one representative
//! per class yields solutions whose x-powers are pairwise distinct and whose
//! y-powers are pairwise distinct, which is what the matrix constructions in
//! [`crate::decomposer`] consume.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::enumeration_limit;
use crate::field::{gcd, Elem, Field};

/// Default cap on `q^m` for exhaustive point counts.
pub const POINT_COUNT_LIMIT: u64 = 100_000_000;
/// Above this order pair enumeration goes through the power-image fibers.
pub const SCAN_ORDER_LIMIT: u32 = 2000;
/// Node budget for the backtracking pair assignment.
const ASSIGNMENT_BUDGET: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(
        "X^k + Y^k = {lambda} has {found} usable solution classes, {needed} needed \
         (x-powers in use: {used_x:?}, y-powers in use: {used_y:?})"
    )]
    InsufficientClasses {
        lambda: Elem,
        found: usize,
        needed: usize,
        used_x: Vec<Elem>,
        used_y: Vec<Elem>,
    },
    #[error("no shift z makes {lambda} - z^k nonzero and admissible")]
    NoAdmissibleShift { lambda: Elem },
    #[error("enumeration of {size} points exceeds the limit {limit}")]
    EnumerationTooLarge { size: u64, limit: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("class count mismatch: formula {formula}, observed {observed}")]
    CountMismatch { formula: u64, observed: u64 },
}

/// `f(x, y) = x^{k-1} + x^{k-2}y + … + y^{k-1}`, so that
/// `x^k − y^k = (x − y)·f(x, y)`.
pub fn eval_f(f: &Field, x: Elem, y: Elem, k: u64) -> Elem {
    let mut acc = Elem::ZERO;
    let mut xp = Elem::ONE;
    let mut yp = f.pow(y, k.saturating_sub(1));
    let y_inv = f.inv(y).ok();
    for i in 0..k {
        acc = f.add(acc, f.mul(xp, yp));
        xp = f.mul(xp, x);
        if i + 1 < k {
            yp = match y_inv {
                Some(inv) => f.mul(yp, inv),
                None => f.pow(y, k - 2 - i),
            };
        }
    }
    acc
}

/// The k-th power map of a field, with its fibers.
#[derive(Debug, Clone)]
pub struct PowerMap {
    k: u64,
    power: Vec<Elem>,
    fibers: Vec<Vec<Elem>>,
}

impl PowerMap {
    pub fn new(f: &Field, k: u64) -> Self {
        let q = f.order() as usize;
        let mut power = Vec::with_capacity(q);
        let mut fibers = vec![Vec::new(); q];
        for a in f.elements() {
            let v = f.pow(a, k);
            power.push(v);
            fibers[v.0 as usize].push(a);
        }
        PowerMap { k, power, fibers }
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    #[inline]
    pub fn power(&self, a: Elem) -> Elem {
        self.power[a.0 as usize]
    }

    /// Roots of `v`, ascending.
    #[inline]
    pub fn roots(&self, v: Elem) -> &[Elem] {
        &self.fibers[v.0 as usize]
    }

    pub fn is_power(&self, v: Elem) -> bool {
        !self.fibers[v.0 as usize].is_empty()
    }

    /// Smallest root of `v`, if any.
    pub fn smallest_root(&self, v: Elem) -> Option<Elem> {
        self.fibers[v.0 as usize].first().copied()
    }

    pub fn image(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.fibers.len() as u32).map(Elem).filter(|v| self.is_power(*v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairSolution {
    pub x: Elem,
    pub y: Elem,
    pub lambda: Elem,
    pub k: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TripleSolution {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
    pub lambda: Elem,
    pub k: u64,
}

/// Report of the exhaustive check of the zero set of `f`.
#[derive(Debug, Clone, Serialize)]
pub struct HomEqnReport {
    pub q: u32,
    pub k: u64,
    /// Pairs other than `(0, 0)` with `f(a, b) = 0`.
    pub zeros: usize,
    /// Zeros with `a = b` (only possible when `p | k`).
    pub diagonal_zeros: usize,
    /// Pairs where `f(a, b) = 0` disagrees with the predicted characterisation.
    pub violations: Vec<(Elem, Elem)>,
}

impl HomEqnReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Confirms over all `(a, b) ≠ (0, 0)` that `f(a, b) = 0` exactly when
/// `a = b` and `p | k`, or `a ≠ b` and `a^k = b^k`.
pub fn f_zero_characterization(f: &Field, k: u64) -> HomEqnReport {
    let pm = PowerMap::new(f, k);
    let p_divides_k = k.is_multiple_of(f.characteristic() as u64);
    let mut report =
        HomEqnReport { q: f.order(), k, zeros: 0, diagonal_zeros: 0, violations: Vec::new() };
    for a in f.elements() {
        for b in f.elements() {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let zero = eval_f(f, a, b, k).is_zero();
            let predicted = if a == b { p_divides_k } else { pm.power(a) == pm.power(b) };
            if zero {
                report.zeros += 1;
                if a == b {
                    report.diagonal_zeros += 1;
                }
            }
            if zero != predicted {
                report.violations.push((a, b));
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Raw `q²` scan.
    Scan,
    /// Pairs of power values summing to `λ`, expanded through root fibers.
    Convolution,
    /// Scan up to [`SCAN_ORDER_LIMIT`], convolution above.
    Auto,
}

/// All solutions of `X^k + Y^k = λ`, sorted by `(x, y)`.
pub fn enumerate_pair_solutions(f: &Field, lambda: Elem, k: u64) -> Vec<PairSolution> {
    enumerate_pair_solutions_with(f, &PowerMap::new(f, k), lambda, Enumeration::Auto)
}

pub fn enumerate_pair_solutions_with(
    f: &Field,
    pm: &PowerMap,
    lambda: Elem,
    strategy: Enumeration,
) -> Vec<PairSolution> {
    let k = pm.exponent();
    let strategy = match strategy {
        Enumeration::Auto if f.order() > SCAN_ORDER_LIMIT => Enumeration::Convolution,
        Enumeration::Auto => Enumeration::Scan,
        s => s,
    };
    let mut out = Vec::new();
    match strategy {
        Enumeration::Scan | Enumeration::Auto => {
            for x in f.elements() {
                let xk = pm.power(x);
                for y in f.elements() {
                    if f.add(xk, pm.power(y)) == lambda {
                        out.push(PairSolution { x, y, lambda, k });
                    }
                }
            }
        }
        Enumeration::Convolution => {
            for u in pm.image() {
                let v = f.sub(lambda, u);
                for &x in pm.roots(u) {
                    for &y in pm.roots(v) {
                        out.push(PairSolution { x, y, lambda, k });
                    }
                }
            }
            out.sort();
        }
    }
    out
}

/// One class `V_i`: all solutions sharing the signature `(x^k, y^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionClass {
    pub signature: (Elem, Elem),
    /// Members sorted by `(x, y)`; the first is the representative.
    pub members: Vec<PairSolution>,
}

impl SolutionClass {
    pub fn representative(&self) -> PairSolution {
        self.members[0]
    }
}

/// `S = U ∪ V_1 ∪ … ∪ V_r`, classes ordered by representative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionClassification {
    pub u: Vec<PairSolution>,
    pub classes: Vec<SolutionClass>,
}

impl SolutionClassification {
    /// Number of classes, counting a nonempty `U` as one.
    pub fn class_count(&self) -> usize {
        self.classes.len() + usize::from(!self.u.is_empty())
    }

    pub fn representatives(&self) -> impl Iterator<Item = PairSolution> + '_ {
        self.classes.iter().map(SolutionClass::representative)
    }

    pub fn solution_count(&self) -> usize {
        self.u.len() + self.classes.iter().map(|c| c.members.len()).sum::<usize>()
    }

    pub fn report(&self, q: u32, k: u64, lambda: Elem) -> ClassReport {
        ClassReport {
            q,
            k,
            lambda,
            classes: self
                .classes
                .iter()
                .map(|c| {
                    let r = c.representative();
                    ClassEntry {
                        sig: [c.signature.0, c.signature.1],
                        size: c.members.len(),
                        rep: [r.x, r.y],
                    }
                })
                .collect(),
            u_size: self.u.len(),
            class_count: self.class_count(),
            solutions: self.solution_count(),
        }
    }
}

/// Stable JSON shape of a classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub q: u32,
    pub k: u64,
    pub lambda: Elem,
    pub classes: Vec<ClassEntry>,
    #[serde(rename = "U_size")]
    pub u_size: usize,
    pub class_count: usize,
    pub solutions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub sig: [Elem; 2],
    pub size: usize,
    pub rep: [Elem; 2],
}

/// Partitions solutions sharing `(λ, k)` into `U` and the signature classes.
pub fn classify_solutions(f: &Field, sols: &[PairSolution]) -> SolutionClassification {
    let mut sorted = sols.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = SolutionClassification::default();
    let mut slot: BTreeMap<(Elem, Elem), usize> = BTreeMap::new();
    for s in sorted {
        let sig = (f.pow(s.x, s.k), f.pow(s.y, s.k));
        if sig.0 == sig.1 {
            out.u.push(s);
            continue;
        }
        match slot.get(&sig) {
            Some(&i) => out.classes[i].members.push(s),
            None => {
                slot.insert(sig, out.classes.len());
                out.classes.push(SolutionClass { signature: sig, members: vec![s] });
            }
        }
    }
    out
}

/// Enumerates and classifies `X^k + Y^k = λ`.
pub fn classify(f: &Field, lambda: Elem, k: u64) -> SolutionClassification {
    classify_solutions(f, &enumerate_pair_solutions(f, lambda, k))
}

/// `n` solutions with pairwise distinct x-powers and pairwise distinct
/// y-powers, one per class, excluding the symmetric part when `n ≥ 2`.
/// For `n = 1` the smallest solution overall is returned.
pub fn select_pairs(
    f: &Field,
    lambda: Elem,
    k: u64,
    n: usize,
) -> Result<Vec<PairSolution>, SolveError> {
    if n == 0 {
        return Err(SolveError::InvalidArgument("n must be at least 1".into()));
    }
    let sols = enumerate_pair_solutions(f, lambda, k);
    let insufficient = |found| SolveError::InsufficientClasses {
        lambda,
        found,
        needed: n,
        used_x: vec![],
        used_y: vec![],
    };
    if n == 1 {
        return sols.first().map(|s| vec![*s]).ok_or_else(|| insufficient(0));
    }
    let cls = classify_solutions(f, &sols);
    if cls.classes.len() < n {
        return Err(insufficient(cls.classes.len()));
    }
    Ok(cls.representatives().take(n).collect())
}

/// `l_i` positions that must each be written as `x^k + y^k = λ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Demand {
    pub lambda: Elem,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AssignedPair {
    pub lambda: Elem,
    pub x: Elem,
    pub y: Elem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Elem>,
}

/// Per-position choices `λ_i = x_i^k + y_i^k (+ z_i^k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairAssignment {
    pub k: u64,
    pub entries: Vec<AssignedPair>,
}

impl PairAssignment {
    /// Checks the sums and, when `strict`, the distinctness conditions:
    /// x-powers pairwise distinct, y-powers pairwise distinct, and
    /// `x_i^k ≠ y_i^k` whenever there are at least two entries.
    pub fn validate(&self, f: &Field, strict: bool) -> Result<(), String> {
        let k = self.k;
        for (i, e) in self.entries.iter().enumerate() {
            let mut sum = f.add(f.pow(e.x, k), f.pow(e.y, k));
            if let Some(z) = e.z {
                sum = f.add(sum, f.pow(z, k));
            }
            if sum != e.lambda {
                return Err(format!("entry {i}: powers sum to {sum}, not {}", e.lambda));
            }
        }
        if !strict {
            return Ok(());
        }
        let n = self.entries.len();
        for (i, a) in self.entries.iter().enumerate() {
            if n >= 2 && f.pow(a.x, k) == f.pow(a.y, k) {
                return Err(format!("entry {i}: x^k = y^k"));
            }
            for (j, b) in self.entries.iter().enumerate().skip(i + 1) {
                if f.pow(a.x, k) == f.pow(b.x, k) {
                    return Err(format!("entries {i} and {j} share an x-power"));
                }
                if f.pow(a.y, k) == f.pow(b.y, k) {
                    return Err(format!("entries {i} and {j} share a y-power"));
                }
            }
        }
        Ok(())
    }
}

/// Chooses `l_i` solutions of `X^k + Y^k = λ_i` for every demand so that all
/// `n = Σ l_i` x-powers are pairwise distinct and all y-powers are pairwise
/// distinct.
///
/// Demands are placed in decreasing multiplicity, then increasing `λ`; each
/// slot takes the first class representative whose powers are both unused.
/// Dead ends backtrack within a fixed node budget. The returned entries follow
/// the order of `demands`.
pub fn select_system_pairs(
    f: &Field,
    demands: &[Demand],
    k: u64,
) -> Result<PairAssignment, SolveError> {
    select_system_pairs_with(f, &PowerMap::new(f, k), demands)
}

pub fn select_system_pairs_with(
    f: &Field,
    pm: &PowerMap,
    demands: &[Demand],
) -> Result<PairAssignment, SolveError> {
    let k = pm.exponent();
    if demands.is_empty() || demands.iter().any(|d| d.multiplicity == 0) {
        return Err(SolveError::InvalidArgument("demands need positive multiplicities".into()));
    }
    let mut seen = HashSet::new();
    if !demands.iter().all(|d| seen.insert(d.lambda)) {
        return Err(SolveError::InvalidArgument("demand values must be distinct".into()));
    }
    let n: usize = demands.iter().map(|d| d.multiplicity).sum();

    if n == 1 {
        let d = demands[0];
        let sol = enumerate_pair_solutions_with(f, pm, d.lambda, Enumeration::Auto);
        let s = sol.first().ok_or(SolveError::InsufficientClasses {
            lambda: d.lambda,
            found: 0,
            needed: 1,
            used_x: vec![],
            used_y: vec![],
        })?;
        return Ok(PairAssignment {
            k,
            entries: vec![AssignedPair { lambda: d.lambda, x: s.x, y: s.y, z: None }],
        });
    }

    let candidates: Vec<Vec<PairSolution>> = demands
        .iter()
        .map(|d| {
            let sols = enumerate_pair_solutions_with(f, pm, d.lambda, Enumeration::Auto);
            classify_solutions(f, &sols).representatives().collect()
        })
        .collect();
    for (d, c) in demands.iter().zip(&candidates) {
        if c.len() < d.multiplicity {
            return Err(SolveError::InsufficientClasses {
                lambda: d.lambda,
                found: c.len(),
                needed: d.multiplicity,
                used_x: vec![],
                used_y: vec![],
            });
        }
    }

    let mut order: Vec<usize> = (0..demands.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(demands[i].multiplicity), demands[i].lambda));
    // one slot per required pair, grouped by demand in processing order
    let slots: Vec<usize> =
        order.iter().flat_map(|&i| std::iter::repeat_n(i, demands[i].multiplicity)).collect();

    let mut search = AssignmentSearch {
        pm,
        slots: &slots,
        candidates: &candidates,
        chosen: Vec::with_capacity(n),
        used_x: HashSet::new(),
        used_y: HashSet::new(),
        nodes: 0,
        deepest: (0, Vec::new(), Vec::new()),
    };
    if !search.run(0) {
        let (depth, used_x, used_y) = search.deepest;
        let d = demands[slots[depth.min(n - 1)]];
        return Err(SolveError::InsufficientClasses {
            lambda: d.lambda,
            found: candidates[slots[depth.min(n - 1)]].len(),
            needed: d.multiplicity,
            used_x,
            used_y,
        });
    }

    let mut per_demand: Vec<Vec<AssignedPair>> = vec![Vec::new(); demands.len()];
    for (slot, &ci) in slots.iter().zip(&search.chosen) {
        let s = candidates[*slot][ci];
        per_demand[*slot].push(AssignedPair { lambda: s.lambda, x: s.x, y: s.y, z: None });
    }
    Ok(PairAssignment { k, entries: per_demand.into_iter().flatten().collect() })
}

struct AssignmentSearch<'a> {
    pm: &'a PowerMap,
    slots: &'a [usize],
    candidates: &'a [Vec<PairSolution>],
    chosen: Vec<usize>,
    used_x: HashSet<Elem>,
    used_y: HashSet<Elem>,
    nodes: usize,
    deepest: (usize, Vec<Elem>, Vec<Elem>),
}

impl AssignmentSearch<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.slots.len() {
            return true;
        }
        if depth >= self.deepest.0 {
            let mut ux: Vec<Elem> = self.used_x.iter().copied().collect();
            let mut uy: Vec<Elem> = self.used_y.iter().copied().collect();
            ux.sort();
            uy.sort();
            self.deepest = (depth, ux, uy);
        }
        let demand = self.slots[depth];
        // classes of one demand are taken in increasing index order
        let start = match depth.checked_sub(1) {
            Some(prev) if self.slots[prev] == demand => self.chosen[prev] + 1,
            _ => 0,
        };
        for ci in start..self.candidates[demand].len() {
            self.nodes += 1;
            if self.nodes > ASSIGNMENT_BUDGET {
                return false;
            }
            let s = self.candidates[demand][ci];
            let (xk, yk) = (self.pm.power(s.x), self.pm.power(s.y));
            if self.used_x.contains(&xk) || self.used_y.contains(&yk) {
                continue;
            }
            self.used_x.insert(xk);
            self.used_y.insert(yk);
            self.chosen.push(ci);
            if self.run(depth + 1) {
                return true;
            }
            self.chosen.pop();
            self.used_x.remove(&xk);
            self.used_y.remove(&yk);
        }
        false
    }
}

/// Picks `z` so that `λ' = λ − z^k` is nonzero and not in `forbidden`;
/// `z = 0` when `λ` itself qualifies, else the smallest working encoding.
pub fn reduce_three_to_two(
    f: &Field,
    lambda: Elem,
    k: u64,
    forbidden: &[Elem],
) -> Result<(Elem, Elem), SolveError> {
    f.elements()
        .map(|z| (z, f.sub(lambda, f.pow(z, k))))
        .find(|(_, l)| !l.is_zero() && !forbidden.contains(l))
        .ok_or(SolveError::NoAdmissibleShift { lambda })
}

/// Exact zero count of `α_1 X_1^k + … + α_m X_m^k − 1` against the bound
/// `|N − q^{m−1}| ≤ k^{2m} √(q^{m−1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LangWeilReport {
    pub q: u32,
    pub k: u64,
    pub m: usize,
    pub alpha: Vec<Elem>,
    #[serde(rename = "N")]
    pub count: u64,
    pub expected: u64,
    pub deviation: u64,
    pub bound: f64,
    pub ok: bool,
}

pub fn lang_weil_check(f: &Field, k: u64, alpha: &[Elem]) -> Result<LangWeilReport, SolveError> {
    let m = alpha.len();
    if m == 0 {
        return Err(SolveError::InvalidArgument("arity must be at least 1".into()));
    }
    if alpha.iter().any(|a| a.is_zero() || !f.contains(*a)) {
        return Err(SolveError::InvalidArgument("coefficients must be nonzero elements".into()));
    }
    let q = f.order() as u64;
    let limit = enumeration_limit(POINT_COUNT_LIMIT);
    let size = q.checked_pow(m as u32).unwrap_or(u64::MAX);
    if size > limit {
        return Err(SolveError::EnumerationTooLarge { size, limit });
    }
    let pm = PowerMap::new(f, k);
    // terms[i][x] = α_i x^k
    let terms: Vec<Vec<Elem>> = alpha
        .iter()
        .map(|&a| f.elements().map(|x| f.mul(a, pm.power(x))).collect())
        .collect();
    let mut count = 0u64;
    let mut stack = vec![(0usize, Elem::ZERO)];
    while let Some((depth, partial)) = stack.pop() {
        if depth == m {
            if partial == Elem::ONE {
                count += 1;
            }
            continue;
        }
        for &t in &terms[depth] {
            stack.push((depth + 1, f.add(partial, t)));
        }
    }
    let expected = q.pow(m as u32 - 1);
    let deviation = count.abs_diff(expected);
    let bound = (k as f64).powi(2 * m as i32) * (expected as f64).sqrt();
    Ok(LangWeilReport {
        q: f.order(),
        k,
        m,
        alpha: alpha.to_vec(),
        count,
        expected,
        deviation,
        bound,
        ok: (deviation as f64) <= bound,
    })
}

/// `(q − 1)/gcd(k, q − 1) + 1`, the number of classes of `X^k + Y^k = 0`
/// (the zero solution counted as one), cross-checked by enumeration.
/// Requires odd characteristic and `−1` a k-th power.
pub fn count_zero_sum_classes(f: &Field, k: u64) -> Result<u64, SolveError> {
    if f.characteristic() == 2 {
        return Err(SolveError::HypothesisViolated("characteristic must be odd".into()));
    }
    if !f.minus_one_is_kth_power(k) {
        return Err(SolveError::HypothesisViolated(format!(
            "-1 is not a {k}-th power in F_{}",
            f.order()
        )));
    }
    let n = f.order() as u64 - 1;
    let formula = n / gcd(k, n) + 1;
    let observed = classify(f, Elem::ZERO, k).class_count() as u64;
    if formula != observed {
        return Err(SolveError::CountMismatch { formula, observed });
    }
    Ok(formula)
}
