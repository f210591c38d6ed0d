//! Point counts of x_1^k + ... + x_m^k = 1 against the Lang-Weil bound.

use tri_waring::power_sums::lang_weil_check;
use tri_waring::{Elem, Field};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>2} {:>2} {:>6} {:>6} {:>10}", "q", "k", "m", "N", "q^m-1", "bound");
    for q in [7u64, 11, 13] {
        let f = Field::prime(q)?;
        for k in 2..=4 {
            for m in [2, 3] {
                let r = lang_weil_check(&f, k, &vec![Elem::ONE; m])?;
                println!("{:>3} {:>2} {:>2} {:>6} {:>6} {:>10.1}", q, k, m, r.count, r.expected, r.bound);
                assert!(r.ok);
            }
        }
    }
    Ok(())
}
