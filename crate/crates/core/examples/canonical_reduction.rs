//! Conjugating to diagonal form, and the presentation notation for 0/1
//! nilpotent matrices.

use tri_waring::canonical::{diagonalize_distinct, is_indecomposable, Presentation};
use tri_waring::{Field, UTMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::prime(7)?;
    let a: UTMatrix = "1,2,3;4,5;6".parse()?;
    let (d, w) = diagonalize_distinct(&f, &a)?;
    println!("A = {a}\nS = {}\nS^-1 A S = {d}\nwitness ok: {}", w.s, w.verify(&f));

    // blocks are chains, extra arcs follow the colon
    for text in ["123", "12|34:13", "14|23|56:15|25"] {
        let n = text.chars().filter(char::is_ascii_digit).max().unwrap().to_digit(10).unwrap();
        let p = Presentation::parse(text, n as usize)?;
        let m = p.to_matrix();
        println!("{text}: arcs {:?}, connected {}", p.arcs(), is_indecomposable(&m)?);
        assert_eq!(Presentation::from_matrix(&m)?.to_string(), text);
    }

    println!("{}", Presentation::parse("1234|56:34", 6).unwrap_err());
    Ok(())
}
