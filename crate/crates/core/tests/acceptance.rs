//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use tri_waring::canonical::{is_indecomposable, parse_presentation, Presentation};
use tri_waring::decomposer::{
    decompose_structured, decompose_three, decompose_two, tables, verify_decomposition,
    DecomposeError, StructuredOutcome,
};
use tri_waring::field::prime_power;
use tri_waring::oracle::{all_kth_powers, bn_conjugate, min_waring_number, MinCount};
use tri_waring::power_sums::{
    classify, count_zero_sum_classes, f_zero_characterization, lang_weil_check, select_pairs,
    SolveError,
};
use tri_waring::tri_matrix::{
    direct_sum, jordan_block, junction_matrix, kth_root_distinct_diag, kth_root_sparse, mat_pow,
};
use tri_waring::{Elem, Field, UTMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn field(q: u32) -> Field {
    q.to_string().parse().expect("prime power")
}

fn odd_prime_powers(max: u32) -> Vec<u32> {
    (3..=max).filter(|&q| q % 2 == 1 && prime_power(q as u64).is_some()).collect()
}

fn all_matrices(f: &Field, n: usize) -> impl Iterator<Item = UTMatrix> {
    let q = f.order();
    let count = (q as u64).pow((n * (n + 1) / 2) as u32);
    (0..count).map(move |code| UTMatrix::decode(n, q, code))
}

fn random_matrix(f: &Field, n: usize, rng: &mut StdRng) -> UTMatrix {
    let q = f.order();
    let mut c = UTMatrix::zero(n);
    for i in 0..n {
        for j in i..n {
            c.set(i, j, Elem(rng.gen_range(0..q)));
        }
    }
    c
}

fn homeqn() -> Outcome {
    let mut cases = 0;
    for q in odd_prime_powers(25) {
        let f = field(q);
        for k in 1..=8 {
            let report = f_zero_characterization(&f, k);
            if !report.holds() {
                return Err(format!("q={q} k={k}: {} violations", report.violations.len()));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (q,k) pairs, zero exceptions"))
}

fn zero_sum_count() -> Outcome {
    let mut cases = 0;
    for q in odd_prime_powers(49) {
        let f = field(q);
        for k in 1..=10 {
            if !f.minus_one_is_kth_power(k) {
                continue;
            }
            let got = count_zero_sum_classes(&f, k).map_err(|e| format!("q={q} k={k}: {e}"))?;
            if q == 13 && k == 3 && got != 5 {
                return Err(format!("q=13 k=3 gave {got}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (q,k) pairs match (q-1)/gcd(k,q-1)+1"))
}

fn lang_weil() -> Outcome {
    let mut cases = 0;
    let mut worst = 0.0f64;
    for q in odd_prime_powers(31) {
        let f = field(q);
        for k in 1..=5 {
            for m in [2, 3] {
                let r = lang_weil_check(&f, k, &vec![Elem::ONE; m]).map_err(|e| e.to_string())?;
                if !r.ok {
                    return Err(format!("q={q} k={k} m={m}: N={} bound {}", r.count, r.bound));
                }
                worst = worst.max(r.deviation as f64 / r.bound);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, max deviation/bound = {worst:.3}"))
}

fn root_round_trips() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    // 32 = 2^5 is past the supported extension degree
    let fields: Vec<Field> = (2..=49u32).filter_map(|q| q.to_string().parse().ok()).collect();
    let pick = |rng: &mut StdRng| {
        let f = &fields[rng.gen_range(0..fields.len())];
        let k = rng.gen_range(1..=6u64);
        (f, k, f.kth_power_image(k))
    };

    for trial in 0..10_000 {
        let (f, k, mut image) = pick(&mut rng);
        image.shuffle(&mut rng);
        let n = rng.gen_range(1..=image.len().min(6));
        let c = random_matrix(f, n, &mut rng).with_diagonal(&image[..n]);
        c.validate(f).map_err(|e| e.to_string())?;
        let root = kth_root_distinct_diag(f, &c, k)
            .map_err(|e| format!("distinct #{trial} q={} k={k} {c}: {e}", f.order()))?;
        if mat_pow(f, &root, k) != c {
            return Err(format!("distinct #{trial}: root of {c} does not round-trip"));
        }
    }

    for trial in 0..10_000 {
        let (f, k, image) = pick(&mut rng);
        let n = rng.gen_range(1..=6);
        let diag: Vec<Elem> = (0..n).map(|_| image[rng.gen_range(0..image.len())]).collect();
        let mut c = UTMatrix::diagonal(&diag);
        let mut cells: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        cells.shuffle(&mut rng);
        for (r, s) in cells {
            let chained = (s + 1..n).any(|t| !c.get(s, t).is_zero())
                || (0..r).any(|t| !c.get(t, r).is_zero());
            if diag[r] != diag[s] && !chained && rng.gen_bool(0.5) {
                c.set(r, s, Elem(rng.gen_range(1..f.order())));
            }
        }
        let root = kth_root_sparse(f, &c, k)
            .map_err(|e| format!("sparse #{trial} q={} k={k} {c}: {e}", f.order()))?;
        if mat_pow(f, &root, k) != c {
            return Err(format!("sparse #{trial}: root of {c} does not round-trip"));
        }
    }
    Ok("10000 distinct-diagonal + 10000 chain-free roots exact".into())
}

fn two_powers() -> Outcome {
    let f = field(13);
    let mut count = 0;
    for c in all_matrices(&f, 2) {
        let r = decompose_two(&f, &c, 2).map_err(|e| format!("{c}: {e}"))?;
        if !r.verified || !verify_decomposition(&f, &c, &r.parts, 2).map_err(|e| e.to_string())? {
            return Err(format!("{c}: not verified"));
        }
        count += 1;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    for _ in 0..10_000 {
        let c = random_matrix(&f, 3, &mut rng);
        let r = decompose_two(&f, &c, 2).map_err(|e| format!("{c}: {e}"))?;
        if !verify_decomposition(&f, &c, &r.parts, 2).map_err(|e| e.to_string())? {
            return Err(format!("{c}: not verified"));
        }
    }
    Ok(format!("all {count} of T_2(F_13) and 10000 random T_3(F_13), k=2"))
}

fn three_powers() -> Outcome {
    let mut count = 0;
    for q in [3, 5, 7, 9, 11, 13] {
        let f = field(q);
        for k in [2, 3] {
            for c in all_matrices(&f, 2) {
                let r = decompose_three(&f, &c, k).map_err(|e| format!("q={q} k={k} {c}: {e}"))?;
                if !verify_decomposition(&f, &c, &r.parts, k).map_err(|e| e.to_string())? {
                    return Err(format!("q={q} k={k} {c}: not verified"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} matrices, all verified"))
}

fn minus_one_needed() -> Outcome {
    let j = jordan_block(Elem::ZERO, 2);
    for q in [3, 7] {
        let f = field(q);
        let min = min_waring_number(&f, &j, 2, 4).map_err(|e| e.to_string())?;
        if min != MinCount::Exact(3) {
            return Err(format!("F_{q}: oracle minimum {min}"));
        }
        match decompose_two(&f, &j, 2) {
            Err(DecomposeError::InsufficientClasses { .. }) => {}
            other => return Err(format!("F_{q}: decompose_two gave {other:?}")),
        }
    }
    Ok("min = 3 over F_3 and F_7; decompose_two reports InsufficientClasses".into())
}

fn negative_remarks() -> Outcome {
    let f3 = field(3);
    let cubes = all_kth_powers(&f3, 2, 3).map_err(|e| e.to_string())?;
    if cubes.contains(&jordan_block(Elem::ONE, 2)) {
        return Err("[[1,1],[0,1]] is a cube".into());
    }
    let squares = all_kth_powers(&f3, 4, 2).map_err(|e| e.to_string())?;
    let junction = junction_matrix(&[2, 2]).map_err(|e| e.to_string())?;
    if squares.contains(&junction) {
        return Err("junction (2,2) is a square".into());
    }
    let j4sq = mat_pow(&f3, &jordan_block(Elem::ZERO, 4), 2);
    let j2 = jordan_block(Elem::ZERO, 2);
    let sum = direct_sum(&j2, &j2);
    if let Some(w) = bn_conjugate(&f3, &j4sq, &sum).map_err(|e| e.to_string())? {
        return Err(format!("conjugate via {}", w.s));
    }
    Ok(format!(
        "{} cubes in T_2, {} squares in T_4, 11664 conjugators scanned",
        cubes.len(),
        squares.len()
    ))
}

fn reference_tables() -> Outcome {
    let f = field(13);
    for row in &tables::REFERENCE_ROWS {
        let n = tables::row_size(row);
        let p = Presentation::parse(row.presentation, n).map_err(|e| e.to_string())?;
        let c = p.to_matrix();
        if !is_indecomposable(&c).map_err(|e| e.to_string())? {
            return Err(format!("{} is not connected", row.presentation));
        }
        if row.listed != row.presentation && parse_presentation(row.listed, n).is_ok() {
            return Err(format!("listed {} should not parse", row.listed));
        }
        for k in [2, 3] {
            let StructuredOutcome::Decomposed { result, plan } =
                decompose_structured(&f, &c, k).map_err(|e| e.to_string())?
            else {
                return Err(format!("{} k={k}: obstruction", row.presentation));
            };
            if !verify_decomposition(&f, &c, &result.parts, k).map_err(|e| e.to_string())? {
                return Err(format!("{} k={k}: not verified", row.presentation));
            }
            if !tables::coloring_matches(row, &plan.coloring) {
                return Err(format!("{} k={k}: coloring {:?}", row.presentation, plan.coloring));
            }
        }
    }
    Ok(format!("{} rows, k = 2 and 3, diagonal patterns match", tables::REFERENCE_ROWS.len()))
}

fn seven_by_seven() -> Outcome {
    let f = field(13);
    let c = tables::seven_by_seven();
    match decompose_structured(&f, &c, 2).map_err(|e| e.to_string())? {
        StructuredOutcome::Decomposed { .. } => Err("unexpected decomposition".into()),
        StructuredOutcome::Obstruction(ob) => {
            for pattern in tables::SEVEN_BY_SEVEN_PATTERNS {
                if !ob.refutes(&pattern) {
                    return Err(format!("pattern {pattern:?} not refuted"));
                }
            }
            Ok(format!("{} colorings refuted, 4 listed patterns among them", ob.refuted.len()))
        }
    }
}

fn two_solutions() -> Outcome {
    let f = field(7);
    let pairs = select_pairs(&f, Elem::ONE, 6, 2).map_err(|e| e.to_string())?;
    let classes = classify(&f, Elem::ONE, 6).class_count();
    if pairs.len() != 2 || classes != 2 {
        return Err(format!("{} pairs, {classes} classes", pairs.len()));
    }
    match select_pairs(&f, Elem::ONE, 6, 3) {
        Err(SolveError::InsufficientClasses { .. }) => Ok("n=2 gives 2 classes, n=3 fails".into()),
        other => Err(format!("n=3 gave {other:?}")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("homogeneous zero characterization", Duration::from_secs(5), homeqn),
        ("zero-sum class count", Duration::from_secs(5), zero_sum_count),
        ("point-count bound", Duration::from_secs(60), lang_weil),
        ("triangular root round-trips", Duration::from_secs(60), root_round_trips),
        ("two powers over F_13", Duration::from_secs(120), two_powers),
        ("three powers on T_2", Duration::from_secs(120), three_powers),
        ("necessity of -1 as a power", Duration::from_secs(30), minus_one_needed),
        ("negative remarks over F_3", Duration::from_secs(600), negative_remarks),
        ("reference tables", Duration::from_secs(60), reference_tables),
        ("7x7 obstruction", Duration::from_secs(60), seven_by_seven),
        ("two-solution remark", Duration::from_secs(1), two_solutions),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name} ({took:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
