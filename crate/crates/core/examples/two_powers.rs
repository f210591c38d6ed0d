//! C = A^k + B^k with B diagonal.

use tri_waring::decomposer::decompose_two;
use tri_waring::tri_matrix::{jordan_block, mat_pow};
use tri_waring::{Elem, Field, UTMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::prime(13)?;
    let c: UTMatrix = "6,1;0".parse()?;
    let r = decompose_two(&f, &c, 2)?;
    println!("C = {c}");
    for (i, p) in r.parts.iter().enumerate() {
        println!("  part {i}: {p}, squared {}", mat_pow(&f, p, 2));
    }
    println!("{}", serde_json::to_string_pretty(&r.to_json())?);

    // -1 is not a square in F_3, and two squares never suffice here
    let f3 = Field::prime(3)?;
    match decompose_two(&f3, &jordan_block(Elem::ZERO, 2), 2) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("F_3: {e}"),
    }
    Ok(())
}
