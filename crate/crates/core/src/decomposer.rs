//! Writing `C ∈ T_n(F_q)` as `A^k + B^k` or `A^k + B^k + D^k`.
//!
//! The two-power construction puts every off-diagonal entry of `C` into
//! `A^k`, with diagonal `x_i^k`, and takes `B = diag(y_i)` where
//! `x_i^k + y_i^k = c_ii`. When the `x_i^k` are pairwise distinct the
//! triangular root of `A^k` exists, so the whole job is choosing the pairs.
//!
//! ```
//! use tri_waring::{decomposer, Field, UTMatrix};
//!
//! let f = Field::prime(13).unwrap();
//! let c: UTMatrix = "0,1;0".parse().unwrap();
//! let res = decomposer::decompose_two(&f, &c, 2).unwrap();
//! assert!(res.verified);
//! assert!(decomposer::verify_decomposition(&f, &c, &res.parts, 2).unwrap());
//! ```

pub mod tables;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::field::{Elem, Field};
use crate::power_sums::{
    classify, eval_f, select_pairs, select_system_pairs_with, AssignedPair, Demand,
    PairAssignment, PairSolution, PowerMap, SolveError,
};
use crate::tri_matrix::{
    kth_root_sparse, kth_root_with_diagonal, mat_add, mat_pow, strict_upper, MatrixError,
    UTMatrix,
};

/// Largest size accepted by [`decompose_structured`].
pub const STRUCTURED_MAX_N: usize = 8;
/// Largest number of nonzero off-diagonal entries accepted by [`decompose_structured`].
pub const STRUCTURED_MAX_ENTRIES: usize = 24;
/// Shift tuples tried by the strict three-power path.
const SHIFT_TUPLE_CAP: usize = 4096;
/// Node budget of the fallback searches.
const FALLBACK_BUDGET: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("{source}; success is only guaranteed for q > 4n²k¹⁶ = {threshold}")]
    InsufficientClasses { source: SolveError, n: usize, k: u64, threshold: u128 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Solve(SolveError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl DecomposeError {
    fn insufficient(source: SolveError, n: usize, k: u64) -> Self {
        DecomposeError::InsufficientClasses { source, n, k, threshold: sufficiency_threshold(n, k) }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            DecomposeError::EvenCharacteristic => "EvenCharacteristic",
            DecomposeError::InsufficientClasses { .. } => "InsufficientClasses",
            DecomposeError::PreconditionViolated(_) => "PreconditionViolated",
            DecomposeError::SizeMismatch(..) => "SizeMismatch",
            DecomposeError::Solve(_) => "SolveError",
            DecomposeError::Matrix(_) => "MatrixError",
        }
    }

    /// JSON object describing the failure.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({ "kind": self.kind(), "message": self.to_string() });
        if let DecomposeError::InsufficientClasses { source, threshold, .. } = self {
            v["threshold"] = json!(threshold.to_string());
            if let SolveError::InsufficientClasses { lambda, found, needed, used_x, used_y } =
                source
            {
                v["lambda"] = json!(lambda);
                v["found"] = json!(found);
                v["needed"] = json!(needed);
                v["used_x"] = json!(used_x);
                v["used_y"] = json!(used_y);
            }
        }
        v
    }
}

impl From<SolveError> for DecomposeError {
    fn from(e: SolveError) -> Self {
        DecomposeError::Solve(e)
    }
}

/// `4n²k¹⁶`, saturating.
pub fn sufficiency_threshold(n: usize, k: u64) -> u128 {
    let k16 = (k as u128).checked_pow(16).unwrap_or(u128::MAX);
    (4 * (n as u128) * (n as u128)).saturating_mul(k16)
}

/// How the diagonal pairs were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// One representative per solution class: x-powers pairwise distinct,
    /// y-powers pairwise distinct, symmetric solutions avoided.
    Strict,
    /// Only the x-powers are pairwise distinct, which is all the root of
    /// the first part needs.
    DistinctPowers,
    /// Per-position search that keeps only root existence.
    Relaxed,
    /// Two-coloring plan with chain-free parts.
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    pub target: UTMatrix,
    pub k: u64,
    /// The k-th roots, in order.
    pub parts: Vec<UTMatrix>,
    /// Diagonal pair (or triple) used at each position.
    pub assignment: PairAssignment,
    pub mode: Mode,
    pub verified: bool,
}

impl DecompositionResult {
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<Elem>> = self
            .assignment
            .entries
            .iter()
            .map(|e| {
                let mut r = vec![e.x, e.y];
                r.extend(e.z);
                r
            })
            .collect();
        json!({
            "target": self.target,
            "k": self.k,
            "mode": self.mode,
            "parts": self.parts,
            "assignment": rows,
            "verified": self.verified,
        })
    }
}

/// `Σ part^k == C`.
pub fn verify_decomposition(
    f: &Field,
    c: &UTMatrix,
    parts: &[UTMatrix],
    k: u64,
) -> Result<bool, DecomposeError> {
    let mut sum = UTMatrix::zero(c.size());
    for p in parts {
        if p.size() != c.size() {
            return Err(DecomposeError::SizeMismatch(c.size(), p.size()));
        }
        sum = mat_add(f, &sum, &mat_pow(f, p, k))?;
    }
    Ok(sum == *c)
}

fn check_inputs(f: &Field, c: &UTMatrix, k: u64) -> Result<(), DecomposeError> {
    if f.characteristic() == 2 {
        return Err(DecomposeError::EvenCharacteristic);
    }
    if k == 0 {
        return Err(DecomposeError::PreconditionViolated("k must be positive".into()));
    }
    c.validate(f)?;
    Ok(())
}

/// Distinct diagonal values in increasing order, with their positions.
pub fn eigen_demands(c: &UTMatrix) -> Vec<(Demand, Vec<usize>)> {
    let mut groups: BTreeMap<Elem, Vec<usize>> = BTreeMap::new();
    for (i, v) in c.diag().into_iter().enumerate() {
        groups.entry(v).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(lambda, pos)| (Demand { lambda, multiplicity: pos.len() }, pos))
        .collect()
}

/// Spreads an assignment listed demand by demand back onto positions.
fn scatter(groups: &[(Demand, Vec<usize>)], entries: &[AssignedPair], n: usize) -> Vec<AssignedPair> {
    let mut out = vec![AssignedPair { lambda: Elem::ZERO, x: Elem::ZERO, y: Elem::ZERO, z: None }; n];
    let positions = groups.iter().flat_map(|(_, pos)| pos.iter().copied());
    for (p, e) in positions.zip(entries) {
        out[p] = *e;
    }
    out
}

/// `A^k = strict_upper(C) + diag(x^k)` rooted at the given `x`; every other
/// part is diagonal.
fn assemble(
    f: &Field,
    c: &UTMatrix,
    k: u64,
    per_pos: Vec<AssignedPair>,
    mode: Mode,
) -> Result<DecompositionResult, DecomposeError> {
    let xs: Vec<Elem> = per_pos.iter().map(|e| e.x).collect();
    let x_pows: Vec<Elem> = xs.iter().map(|&x| f.pow(x, k)).collect();
    let a = kth_root_with_diagonal(f, &strict_upper(c).with_diagonal(&x_pows), k, &xs)?;
    let mut parts = vec![a, UTMatrix::diagonal(&per_pos.iter().map(|e| e.y).collect::<Vec<_>>())];
    if per_pos.iter().any(|e| e.z.is_some()) {
        parts.push(UTMatrix::diagonal(
            &per_pos.iter().map(|e| e.z.unwrap_or(Elem::ZERO)).collect::<Vec<_>>(),
        ));
    }
    let verified = verify_decomposition(f, c, &parts, k)?;
    Ok(DecompositionResult {
        target: c.clone(),
        k,
        parts,
        assignment: PairAssignment { k, entries: per_pos },
        mode,
        verified,
    })
}

/// `C = A^k + B^k` with `B` diagonal and `A^k` having pairwise distinct
/// diagonal entries.
///
/// The class-representative assignment is tried first. If some eigenvalue
/// has too few classes, a search over pairwise distinct x-powers follows,
/// where `y` may repeat powers or equal `x` in power. Failure of both is
/// reported as `InsufficientClasses`; it does not prove that no
/// decomposition exists.
pub fn decompose_two(f: &Field, c: &UTMatrix, k: u64) -> Result<DecompositionResult, DecomposeError> {
    check_inputs(f, c, k)?;
    let n = c.size();
    if n == 0 {
        return Ok(DecompositionResult {
            target: c.clone(),
            k,
            parts: vec![UTMatrix::zero(0), UTMatrix::zero(0)],
            assignment: PairAssignment { k, entries: vec![] },
            mode: Mode::Strict,
            verified: true,
        });
    }
    let pm = PowerMap::new(f, k);
    let groups = eigen_demands(c);
    let demands: Vec<Demand> = groups.iter().map(|g| g.0).collect();
    match select_system_pairs_with(f, &pm, &demands) {
        Ok(a) => assemble(f, c, k, scatter(&groups, &a.entries, n), Mode::Strict),
        Err(e @ SolveError::InsufficientClasses { .. }) => {
            match distinct_power_assignment(f, &pm, &groups) {
                Some(entries) => assemble(f, c, k, scatter(&groups, &entries, n), Mode::DistinctPowers),
                None => Err(DecomposeError::insufficient(e, n, k)),
            }
        }
        Err(e) => Err(e.into()),
    }
}

/// Pairwise distinct x-powers `a` with `λ − a` a k-th power, demand by
/// demand; powers of one demand ascend to avoid permuted duplicates.
fn distinct_power_assignment(
    f: &Field,
    pm: &PowerMap,
    groups: &[(Demand, Vec<usize>)],
) -> Option<Vec<AssignedPair>> {
    let options: Vec<Vec<(Elem, Elem)>> = groups
        .iter()
        .map(|(d, _)| {
            pm.image()
                .filter(|&a| pm.is_power(f.sub(d.lambda, a)))
                .map(|a| (a, f.sub(d.lambda, a)))
                .collect()
        })
        .collect();
    let slots: Vec<usize> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, (d, _))| std::iter::repeat_n(gi, d.multiplicity))
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(slots.len());
    let mut used = std::collections::HashSet::new();
    let mut nodes = 0usize;

    fn go(
        depth: usize,
        slots: &[usize],
        options: &[Vec<(Elem, Elem)>],
        chosen: &mut Vec<usize>,
        used: &mut std::collections::HashSet<Elem>,
        nodes: &mut usize,
    ) -> bool {
        if depth == slots.len() {
            return true;
        }
        let g = slots[depth];
        let start = match depth.checked_sub(1) {
            Some(p) if slots[p] == g => chosen[p] + 1,
            _ => 0,
        };
        for oi in start..options[g].len() {
            *nodes += 1;
            if *nodes > FALLBACK_BUDGET {
                return false;
            }
            let a = options[g][oi].0;
            if !used.insert(a) {
                continue;
            }
            chosen.push(oi);
            if go(depth + 1, slots, options, chosen, used, nodes) {
                return true;
            }
            chosen.pop();
            used.remove(&a);
        }
        false
    }

    if !go(0, &slots, &options, &mut chosen, &mut used, &mut nodes) {
        return None;
    }
    Some(
        slots
            .iter()
            .zip(&chosen)
            .map(|(&g, &oi)| {
                let (a, b) = options[g][oi];
                AssignedPair {
                    lambda: groups[g].0.lambda,
                    x: pm.smallest_root(a).expect("a is in the image"),
                    y: pm.smallest_root(b).expect("b is in the image"),
                    z: None,
                }
            })
            .collect(),
    )
}

/// `C = A^k + B^k + D^k` with `B`, `D` diagonal.
///
/// Strict path: one shift `z` per eigenvalue so that the shifted values
/// `λ − z^k` are nonzero and pairwise distinct, then the two-power class
/// assignment on the shifted demands. Shift tuples are tried in order, with
/// `z = 0` first for nonzero eigenvalues. If no tuple works, a per-position
/// search over triples `x^k + y^k + z^k = c_ii` keeps only what the root of
/// the first part needs.
pub fn decompose_three(
    f: &Field,
    c: &UTMatrix,
    k: u64,
) -> Result<DecompositionResult, DecomposeError> {
    check_inputs(f, c, k)?;
    let n = c.size();
    let pm = PowerMap::new(f, k);
    let groups = eigen_demands(c);

    // admissible shifts per eigenvalue, one z per distinct shifted value
    let shift_options: Vec<Vec<(Elem, Elem)>> = groups
        .iter()
        .map(|(d, _)| {
            let mut seen = std::collections::HashSet::new();
            f.elements()
                .map(|z| (z, f.sub(d.lambda, pm.power(z))))
                .filter(|&(_, l)| !l.is_zero() && seen.insert(l))
                .collect()
        })
        .collect();

    let mut last_err = None;
    if n > 0 && shift_options.iter().all(|o| !o.is_empty()) {
        let mut idx = vec![0usize; groups.len()];
        let mut tried = 0;
        'tuples: loop {
            let shifted: Vec<Elem> =
                idx.iter().zip(&shift_options).map(|(&i, o)| o[i].1).collect();
            let distinct = {
                let mut s = shifted.clone();
                s.sort();
                s.windows(2).all(|w| w[0] != w[1])
            };
            if distinct {
                tried += 1;
                let demands: Vec<Demand> = groups
                    .iter()
                    .zip(&shifted)
                    .map(|((d, _), &l)| Demand { lambda: l, multiplicity: d.multiplicity })
                    .collect();
                match select_system_pairs_with(f, &pm, &demands) {
                    Ok(a) => {
                        let mut entries = a.entries;
                        let mut e = entries.iter_mut();
                        for (gi, (d, _)) in groups.iter().enumerate() {
                            let z = shift_options[gi][idx[gi]].0;
                            for _ in 0..d.multiplicity {
                                let slot = e.next().expect("one entry per position");
                                slot.lambda = d.lambda;
                                slot.z = Some(z);
                            }
                        }
                        return assemble(f, c, k, scatter(&groups, &entries, n), Mode::Strict);
                    }
                    Err(err @ SolveError::InsufficientClasses { .. }) => last_err = Some(err),
                    Err(err) => return Err(err.into()),
                }
                if tried >= SHIFT_TUPLE_CAP {
                    break 'tuples;
                }
            }
            // odometer, last eigenvalue fastest
            let mut g = groups.len();
            loop {
                if g == 0 {
                    break 'tuples;
                }
                g -= 1;
                idx[g] += 1;
                if idx[g] < shift_options[g].len() {
                    break;
                }
                idx[g] = 0;
            }
        }
    }

    if let Some(per_pos) = relaxed_triples(f, &pm, c) {
        return assemble(f, c, k, per_pos, Mode::Relaxed);
    }
    let source = last_err.unwrap_or(SolveError::NoAdmissibleShift {
        lambda: groups.first().map_or(Elem::ZERO, |g| g.0.lambda),
    });
    Err(DecomposeError::insufficient(source, n, k))
}

/// Per position, candidate `x` (ascending) with `c_ii − x^k` a sum of two
/// k-th powers. Positions joined by a nonzero entry need `f(x_r, x_s) ≠ 0`;
/// each complete choice is confirmed by an actual root.
fn relaxed_triples(f: &Field, pm: &PowerMap, c: &UTMatrix) -> Option<Vec<AssignedPair>> {
    let n = c.size();
    let k = pm.exponent();
    // smallest (y, z) per value of y^k + z^k
    let mut two_sum: BTreeMap<Elem, (Elem, Elem)> = BTreeMap::new();
    for y in f.elements() {
        for z in f.elements() {
            two_sum.entry(f.add(pm.power(y), pm.power(z))).or_insert((y, z));
        }
    }
    let cands: Vec<Vec<AssignedPair>> = (0..n)
        .map(|i| {
            let lambda = c.get(i, i);
            f.elements()
                .filter_map(|x| {
                    two_sum.get(&f.sub(lambda, pm.power(x))).map(|&(y, z)| AssignedPair {
                        lambda,
                        x,
                        y,
                        z: Some(z),
                    })
                })
                .collect()
        })
        .collect();
    let mut chosen: Vec<AssignedPair> = Vec::with_capacity(n);
    let mut nodes = 0usize;

    fn go(
        f: &Field,
        c: &UTMatrix,
        k: u64,
        cands: &[Vec<AssignedPair>],
        chosen: &mut Vec<AssignedPair>,
        nodes: &mut usize,
    ) -> bool {
        let i = chosen.len();
        if i == cands.len() {
            let xs: Vec<Elem> = chosen.iter().map(|e| e.x).collect();
            let a0 = strict_upper(c).with_diagonal(&xs.iter().map(|&x| f.pow(x, k)).collect::<Vec<_>>());
            return kth_root_with_diagonal(f, &a0, k, &xs).is_ok();
        }
        for cand in &cands[i] {
            *nodes += 1;
            if *nodes > FALLBACK_BUDGET {
                return false;
            }
            let clash = chosen.iter().enumerate().any(|(r, prev)| {
                !c.get(r, i).is_zero() && eval_f(f, prev.x, cand.x, k).is_zero()
            });
            if clash {
                continue;
            }
            chosen.push(*cand);
            if go(f, c, k, cands, chosen, nodes) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    go(f, c, k, &cands, &mut chosen, &mut nodes).then_some(chosen)
}

/// Which part carries an off-diagonal entry in a structured plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    A,
    B,
}

/// Two-coloring of the diagonal plus ownership of every nonzero
/// off-diagonal entry. Position `i` of color `c` gets `x_c^k` in `A^k` and
/// `y_c^k` in `B^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredPlan {
    /// Colors 1 or 2, 0-based positions.
    pub coloring: Vec<u8>,
    /// 0-based entry positions, row-major.
    pub entry_owner: Vec<((usize, usize), Side)>,
    /// `(x_1, y_1)` and, when two colors are used, `(x_2, y_2)`.
    pub pairs: Vec<PairSolution>,
}

impl StructuredPlan {
    /// Checks the plan's invariants against `c`: every owned entry joins
    /// different colors, no side owns a chain `(r,s),(s,t)`, and the owned
    /// entries are exactly the nonzero off-diagonal entries.
    pub fn check(&self, c: &UTMatrix) -> Result<(), String> {
        let support = c.off_diagonal_support();
        let mut owned: Vec<(usize, usize)> = self.entry_owner.iter().map(|e| e.0).collect();
        owned.sort();
        if owned != support {
            return Err("owned entries differ from the nonzero entries".into());
        }
        for &((i, j), side) in &self.entry_owner {
            if self.coloring[i] == self.coloring[j] {
                return Err(format!("entry ({},{}) joins equal colors", i + 1, j + 1));
            }
            if let Some(&((r, s), _)) = self
                .entry_owner
                .iter()
                .find(|&&((r, s), o)| o == side && (s == i || r == j))
            {
                return Err(format!(
                    "side {side:?} owns both ({},{}) and ({},{})",
                    r + 1,
                    s + 1,
                    i + 1,
                    j + 1
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let side = |want: Side| -> Vec<[usize; 2]> {
            self.entry_owner
                .iter()
                .filter(|e| e.1 == want)
                .map(|&((i, j), _)| [i + 1, j + 1])
                .collect()
        };
        json!({
            "coloring": self.coloring,
            "A": side(Side::A),
            "B": side(Side::B),
            "pairs": self.pairs.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        })
    }
}

/// Why a coloring was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum Refutation {
    /// A nonzero entry joins two positions of the same color (1-based).
    SameColor { row: usize, col: usize },
    /// Colors are fine but every ownership split leaves a chain on one side.
    NoChainFreeSplit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutedColoring {
    pub coloring: Vec<u8>,
    #[serde(flatten)]
    pub reason: Refutation,
}

/// Exhaustion certificate of the structured search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    /// Colorings examined plus ownership nodes visited.
    pub explored: u64,
    pub refuted: Vec<RefutedColoring>,
}

impl Obstruction {
    pub fn refutes(&self, coloring: &[u8]) -> bool {
        self.refuted.iter().any(|r| r.coloring == coloring)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuredOutcome {
    Decomposed { result: DecompositionResult, plan: StructuredPlan },
    Obstruction(Obstruction),
}

/// Pair for color 1 is the smallest class representative `(x, y)`; color 2
/// takes the mirrored `(y, x)`, which always lies in another class.
pub fn structured_pairs(f: &Field, lambda: Elem, k: u64) -> Result<[PairSolution; 2], SolveError> {
    let cls = classify(f, lambda, k);
    let first = cls.classes.first().map(|c| c.representative()).ok_or(
        SolveError::InsufficientClasses {
            lambda,
            found: 0,
            needed: 2,
            used_x: vec![],
            used_y: vec![],
        },
    )?;
    Ok([first, PairSolution { x: first.y, y: first.x, ..first }])
}

/// Searches colorings (in increasing mask order, position 1 the lowest bit)
/// and chain-free ownership splits; builds both parts with the sparse root.
pub fn decompose_structured(
    f: &Field,
    c: &UTMatrix,
    k: u64,
) -> Result<StructuredOutcome, DecomposeError> {
    check_inputs(f, c, k)?;
    let n = c.size();
    let diag = c.diag();
    let Some(&lambda) = diag.first() else {
        return Err(DecomposeError::PreconditionViolated("empty matrix".into()));
    };
    if diag.iter().any(|&d| d != lambda) {
        return Err(DecomposeError::PreconditionViolated("diagonal entries must all be equal".into()));
    }
    let entries = c.off_diagonal_support();
    if n > STRUCTURED_MAX_N || entries.len() > STRUCTURED_MAX_ENTRIES {
        return Err(DecomposeError::PreconditionViolated(format!(
            "structured search handles n <= {STRUCTURED_MAX_N} and at most \
             {STRUCTURED_MAX_ENTRIES} nonzero entries"
        )));
    }

    if entries.is_empty() {
        let pair = select_pairs(f, lambda, k, 1).map_err(|e| DecomposeError::insufficient(e, n, k))?[0];
        let plan = StructuredPlan { coloring: vec![1; n], entry_owner: vec![], pairs: vec![pair] };
        let result = realize_plan(f, c, k, &plan)?;
        return Ok(StructuredOutcome::Decomposed { result, plan });
    }

    let pairs = structured_pairs(f, lambda, k).map_err(|e| DecomposeError::insufficient(e, n, k))?;
    let mut explored = 0u64;
    let mut refuted = Vec::new();
    for mask in 0u32..(1 << n) {
        explored += 1;
        let coloring: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8 + 1).collect();
        if let Some(&(i, j)) = entries.iter().find(|&&(i, j)| coloring[i] == coloring[j]) {
            refuted.push(RefutedColoring {
                coloring,
                reason: Refutation::SameColor { row: i + 1, col: j + 1 },
            });
            continue;
        }
        let mut owners = Vec::with_capacity(entries.len());
        if assign_owners(&entries, &mut owners, &mut explored) {
            let plan = StructuredPlan {
                coloring,
                entry_owner: entries.iter().copied().zip(owners).collect(),
                pairs: pairs.to_vec(),
            };
            let result = realize_plan(f, c, k, &plan)?;
            return Ok(StructuredOutcome::Decomposed { result, plan });
        }
        refuted.push(RefutedColoring { coloring, reason: Refutation::NoChainFreeSplit });
    }
    Ok(StructuredOutcome::Obstruction(Obstruction { explored, refuted }))
}

/// Sides for `entries` (row-major) with no chain on either side; `A` first.
fn assign_owners(entries: &[(usize, usize)], owners: &mut Vec<Side>, explored: &mut u64) -> bool {
    let d = owners.len();
    if d == entries.len() {
        return true;
    }
    let (i, j) = entries[d];
    for side in [Side::A, Side::B] {
        *explored += 1;
        let chain = entries[..d]
            .iter()
            .zip(owners.iter())
            .any(|(&(r, s), &o)| o == side && (s == i || r == j));
        if chain {
            continue;
        }
        owners.push(side);
        if assign_owners(entries, owners, explored) {
            return true;
        }
        owners.pop();
    }
    false
}

/// Builds `A^k`, `B^k` from a plan and takes both sparse roots.
pub fn realize_plan(
    f: &Field,
    c: &UTMatrix,
    k: u64,
    plan: &StructuredPlan,
) -> Result<DecompositionResult, DecomposeError> {
    plan.check(c).map_err(DecomposeError::PreconditionViolated)?;
    let n = c.size();
    let pair_of = |i: usize| plan.pairs[(plan.coloring[i] as usize - 1).min(plan.pairs.len() - 1)];
    let mut a0 = UTMatrix::diagonal(&(0..n).map(|i| f.pow(pair_of(i).x, k)).collect::<Vec<_>>());
    let mut b0 = UTMatrix::diagonal(&(0..n).map(|i| f.pow(pair_of(i).y, k)).collect::<Vec<_>>());
    for &((i, j), side) in &plan.entry_owner {
        match side {
            Side::A => a0.set(i, j, c.get(i, j)),
            Side::B => b0.set(i, j, c.get(i, j)),
        }
    }
    let parts = vec![kth_root_sparse(f, &a0, k)?, kth_root_sparse(f, &b0, k)?];
    let verified = verify_decomposition(f, c, &parts, k)?;
    let entries = (0..n)
        .map(|i| AssignedPair {
            lambda: c.get(i, i),
            x: parts[0].get(i, i),
            y: parts[1].get(i, i),
            z: None,
        })
        .collect();
    Ok(DecompositionResult {
        target: c.clone(),
        k,
        parts,
        assignment: PairAssignment { k, entries },
        mode: Mode::Structured,
        verified,
    })
}
