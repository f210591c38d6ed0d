//! Brute-force ground truth: minimal numbers of k-th powers, and
//! conjugacy under invertible triangular matrices.

use tri_waring::oracle::{bn_conjugate, min_waring_with_witness, negative_checks, waring_report};
use tri_waring::tri_matrix::{direct_sum, jordan_block, mat_pow};
use tri_waring::{Elem, Field};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = Field::prime(3)?;
    let j = jordan_block(Elem::ZERO, 2);
    let (min, parts) = min_waring_with_witness(&f3, &j, 2, 4)?;
    let shown: Vec<String> = parts.unwrap_or_default().iter().map(ToString::to_string).collect();
    println!("J over F_3 needs {min} squares: {}", shown.join(" + "));

    let report = waring_report(&f3, 2, 2, 4)?;
    println!("T_2(F_3), k = 2: histogram {:?}, max {}", report.histogram, report.max_over_field);

    let j4 = mat_pow(&f3, &jordan_block(Elem::ZERO, 4), 2);
    let j22 = direct_sum(&j, &j);
    println!("J4^2 ~ J2+J2 under B_4: {}", bn_conjugate(&f3, &j4, &j22)?.is_some());

    println!("{}", serde_json::to_string_pretty(&negative_checks(&f3, 2)?)?);
    Ok(())
}
