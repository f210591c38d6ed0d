//! Solutions of X^k + Y^k = λ and their power-signature classes.

use tri_waring::power_sums::{classify, count_zero_sum_classes, select_pairs};
use tri_waring::{Elem, Field};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f13 = Field::prime(13)?;
    let cls = classify(&f13, Elem::ZERO, 3);
    println!("X^3 + Y^3 = 0 over F_13: {} solutions", cls.solution_count());
    println!("  symmetric part U: {:?}", cls.u.iter().map(|s| (s.x.0, s.y.0)).collect::<Vec<_>>());
    for c in &cls.classes {
        let r = c.representative();
        let (sx, sy) = c.signature;
        println!("  class ({sx}, {sy}): {} members, rep ({}, {})", c.members.len(), r.x, r.y);
    }
    println!("class count {} = (q-1)/gcd(k,q-1) + 1 = {}", cls.class_count(), count_zero_sum_classes(&f13, 3)?);

    // only two classes exist here, so asking for three fails
    let f7 = Field::prime(7)?;
    let two = select_pairs(&f7, Elem::ONE, 6, 2)?;
    println!("F_7, k = 6, λ = 1: {:?}", two.iter().map(|p| (p.x.0, p.y.0)).collect::<Vec<_>>());
    if let Err(e) = select_pairs(&f7, Elem::ONE, 6, 3) {
        println!("n = 3: {e}");
    }
    Ok(())
}
