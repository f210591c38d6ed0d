//! Two-coloring splits of nilpotent 0/1 matrices, and the 7×7 case with no
//! such split.

use tri_waring::canonical::parse_presentation;
use tri_waring::decomposer::{decompose_structured, tables, StructuredOutcome};
use tri_waring::Field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::prime(13)?;
    for row in tables::REFERENCE_ROWS.iter().take(6) {
        let c = parse_presentation(row.presentation, tables::row_size(row))?;
        if let StructuredOutcome::Decomposed { result, plan } = decompose_structured(&f, &c, 2)? {
            println!(
                "{:<12} coloring {:?} verified {} plan {}",
                row.presentation, plan.coloring, result.verified, plan.to_json()
            );
        }
    }

    let seven = tables::seven_by_seven();
    if let StructuredOutcome::Obstruction(ob) = decompose_structured(&f, &seven, 2)? {
        println!("7x7: all {} colorings refuted, e.g.", ob.refuted.len());
        for r in ob.refuted.iter().filter(|r| tables::SEVEN_BY_SEVEN_PATTERNS.iter().any(|p| p[..] == r.coloring[..])) {
            println!("  {}", serde_json::to_string(r)?);
        }
    }
    Ok(())
}
