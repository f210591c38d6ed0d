//! Arithmetic in F_9 = F_3[t]/(t^2 + 1).
//!
//! Run with `cargo run --example field_arithmetic`.

use tri_waring::Field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f: Field = "9".parse()?;
    println!("field {f}, q = {}", f.order());

    // elements are base-3 digits, low degree first: 5 = 2 + t
    let a = f.element(5)?;
    let b = f.element(7)?;
    println!("{a} + {b} = {}", f.add(a, b));
    println!("{a} * {b} = {}", f.mul(a, b));
    println!("{a}^-1 = {}", f.inv(a)?);

    for k in 1..=4 {
        let image = f.kth_power_image(k);
        println!(
            "k = {k}: {} distinct k-th powers, -1 is a k-th power: {}",
            image.len(),
            f.minus_one_is_kth_power(k)
        );
    }
    let t = f.element(3)?;
    println!("square roots of -1: {:?}", f.kth_roots(f.pow(t, 2), 2));
    Ok(())
}
