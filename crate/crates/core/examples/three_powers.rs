//! C = A^k + B^k + D^k, which succeeds on all of T_2(F_q) for small q.

use tri_waring::decomposer::decompose_three;
use tri_waring::{Field, UTMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::prime(7)?;
    let c: UTMatrix = "2,1;3".parse()?;
    let r = decompose_three(&f, &c, 3)?;
    println!("{}", serde_json::to_string_pretty(&r.to_json())?);

    let mut modes = std::collections::BTreeMap::new();
    for code in 0..7u64.pow(3) {
        let c = UTMatrix::decode(2, 7, code);
        let r = decompose_three(&f, &c, 3)?;
        assert!(r.verified);
        *modes.entry(format!("{:?}", r.mode)).or_insert(0) += 1;
    }
    println!("T_2(F_7), k = 3: {modes:?}");
    Ok(())
}
