//! k-th roots of upper-triangular matrices.

use tri_waring::tri_matrix::{kth_root_distinct_diag, kth_root_sparse, mat_pow};
use tri_waring::{Field, UTMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::prime(13)?;

    // distinct diagonal: back-substitution one superdiagonal at a time
    let c: UTMatrix = "1,1,5;4,2;3".parse()?;
    let a = kth_root_distinct_diag(&f, &c, 2)?;
    println!("C = {c}\nA = {a}\nA^2 = {}", mat_pow(&f, &a, 2));

    // equal diagonal entries are fine when no two nonzero entries chain
    let c: UTMatrix = "1,7,0,0;12,0,0;1,3;12".parse()?;
    let a = kth_root_sparse(&f, &c, 3)?;
    println!("C = {c}\nA = {a}\nA^3 = {}", mat_pow(&f, &a, 3));

    let chained: UTMatrix = "1,1,0;12,1;1".parse()?;
    println!("chain: {}", kth_root_sparse(&f, &chained, 2).unwrap_err());
    Ok(())
}
