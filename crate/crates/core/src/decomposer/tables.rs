//! Reference two-power splits of the indecomposable nilpotent 0/1 forms of
//! size at most 6, and the 7×7 matrix on which the two-coloring technique
//! breaks down.
//!
//! Each row records a presentation, which entries go to `A^k` and which to
//! `B^k`, and the positions whose diagonal is `x_1^k` (the rest get
//! `x_2^k`). Some rows as originally listed were inconsistent: a presentation
//! with a repeated vertex, a redundant extra arc, a mistyped entry, or a
//! diagonal that contradicts its own entries. Those rows carry the corrected
//! data here, with the original text in `listed` and a short `note`.

use crate::canonical::presentation_size;
use crate::field::Elem;
use crate::tri_matrix::UTMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRow {
    /// 1, 2 or 3: which of the three reference tables.
    pub table: u8,
    /// Presentation used for the regression.
    pub presentation: &'static str,
    /// Presentation text as originally listed.
    pub listed: &'static str,
    /// Entries carried by `A^k` (1-based).
    pub a: &'static [(usize, usize)],
    /// Entries carried by `B^k` (1-based).
    pub b: &'static [(usize, usize)],
    /// Positions whose diagonal is `x_1^k` (1-based).
    pub x1: &'static [usize],
    /// Whether the recorded `A`/`B` split is itself chain-free.
    pub split_valid: bool,
    pub note: Option<&'static str>,
}

macro_rules! row {
    ($t:expr, $p:expr, $l:expr, a: [$(($ai:expr, $aj:expr)),*], b: [$(($bi:expr, $bj:expr)),*],
     x1: [$($x:expr),*], $valid:expr, $note:expr) => {
        ReferenceRow {
            table: $t,
            presentation: $p,
            listed: $l,
            a: &[$(($ai, $aj)),*],
            b: &[$(($bi, $bj)),*],
            x1: &[$($x),*],
            split_valid: $valid,
            note: $note,
        }
    };
}

pub const REFERENCE_ROWS: [ReferenceRow; 26] = [
    row!(1, "123", "123", a: [(1, 2)], b: [(2, 3)], x1: [1, 3], true, None),
    row!(1, "1234", "1234", a: [(1, 2), (3, 4)], b: [(2, 3)], x1: [1, 3], true, None),
    row!(1, "12|34:13", "12|34:13", a: [(1, 2), (3, 4)], b: [(1, 3)], x1: [1, 4], true, None),
    row!(1, "12345", "12345", a: [(1, 2), (3, 4)], b: [(2, 3), (4, 5)], x1: [1, 3, 5], true, None),
    row!(1, "12|345:13", "12|345:13", a: [(1, 2), (1, 3), (4, 5)], b: [(3, 4)], x1: [1, 4], true,
         Some("diagonal listed the x_2 positions twice")),
    row!(1, "123|45:24", "123|45:24", a: [(1, 2), (4, 5)], b: [(2, 3), (2, 4)], x1: [1, 3, 4], true, None),
    row!(1, "145|23:24", "145|23:24", a: [(1, 4), (2, 3), (2, 4)], b: [(4, 5)], x1: [1, 2, 5], true, None),
    row!(1, "125|34:13", "125|34:13", a: [(1, 2), (1, 3)], b: [(2, 5), (3, 4)], x1: [1, 4, 5], true, None),
    row!(2, "123456", "123456", a: [(1, 2), (3, 4), (5, 6)], b: [(2, 3), (4, 5)], x1: [1, 3, 5], true, None),
    row!(2, "12|3456:13", "12|3456:13", a: [(1, 2), (1, 3), (4, 5)], b: [(3, 4), (5, 6)], x1: [1, 4, 6], true, None),
    row!(2, "123|456:14", "123|456:14", a: [(1, 2), (1, 4), (5, 6)], b: [(2, 3), (4, 5)], x1: [1, 3, 5], true, None),
    row!(2, "1456|23:24", "1456|23:24", a: [(1, 4), (2, 4), (5, 6)], b: [(2, 3), (4, 5)], x1: [1, 2, 5], true, None),
    row!(2, "123|456:24", "123|456:24", a: [(2, 3), (2, 4), (5, 6)], b: [(1, 2), (4, 5)], x1: [1, 3, 4, 6], true, None),
    row!(2, "124|356:13", "124|356:13", a: [(1, 2), (1, 3), (5, 6)], b: [(2, 4), (3, 5)], x1: [1, 4, 5], true, None),
    row!(2, "14|23|56:15|25", "14|23|56:15|25", a: [(1, 4), (2, 3), (5, 6)], b: [(1, 5), (2, 5)], x1: [1, 2, 6], true,
         Some("diagonal listed position 6 for both colors; position 5 is x_2")),
    row!(2, "1256|34:13", "1256|34:13", a: [(1, 2), (1, 3), (5, 6)], b: [(2, 5), (3, 4)], x1: [1, 4, 5], true,
         Some("B entry listed as E24; the presentation has E34")),
    row!(2, "12|34|56:13|35", "12|34|56:13|35", a: [(1, 2), (1, 3), (5, 6)], b: [(3, 4), (3, 5)], x1: [1, 4, 5], true, None),
    row!(3, "134|256:35", "134|256:35", a: [(2, 5), (3, 4), (3, 5)], b: [(1, 3), (5, 6)], x1: [1, 4, 5], true,
         Some("diagonal listed the x_2 positions twice")),
    row!(3, "156|234:35", "156|234:35", a: [(1, 5), (3, 4), (3, 5)], b: [(2, 3), (5, 6)], x1: [1, 3, 6], true, None),
    row!(3, "1234|56:35", "1234|56:34", a: [(1, 2), (3, 4), (3, 5)], b: [(2, 3), (5, 6)], x1: [1, 3, 6], true,
         Some("extra arc 34 repeats a block arc; the listed entries use E35")),
    row!(3, "12|36|45:13|14", "12|36|45:13|14", a: [(1, 2), (1, 3), (1, 4)], b: [(3, 6), (4, 5)], x1: [1, 5, 6], true, None),
    row!(3, "145|236:24", "145|236:24", a: [(1, 4), (2, 3), (2, 4)], b: [(3, 6), (4, 5)], x1: [1, 2, 5, 6], true,
         Some("diagonal listed position 2 for both colors; the x_2 positions are 3 and 4")),
    row!(3, "1236|45:34", "1236|245", a: [(1, 2), (3, 6), (4, 5)], b: [(2, 3), (3, 4)], x1: [1, 3, 5], false,
         Some("vertex 2 repeated; the listed entries give the arcs 12,23,34,36,45. \
               Listed diagonal had positions 4 and 5 swapped, and B owns the chain 23,34")),
    row!(3, "126|345:13", "126|345:13", a: [(1, 2), (1, 3), (4, 5)], b: [(2, 6), (3, 4)], x1: [1, 4, 6], true, None),
    row!(3, "1256|34:13", "1256|34:13", a: [(1, 2), (1, 3), (5, 6)], b: [(2, 5), (3, 4)], x1: [1, 4, 5], true,
         Some("A entry listed as E45; the presentation has E56")),
    row!(3, "1256|34:13|35", "1256|34:13|35", a: [(1, 2), (1, 3), (5, 6)], b: [(2, 5), (3, 4), (3, 5)], x1: [1, 4, 5], true, None),
];

/// Size of a row's matrix.
pub fn row_size(row: &ReferenceRow) -> usize {
    presentation_size(row.presentation).expect("reference presentations are nonempty")
}

/// Coloring (values 1, 2; 0-based positions) implied by `row.x1`.
pub fn row_coloring(row: &ReferenceRow) -> Vec<u8> {
    (1..=row_size(row)).map(|i| if row.x1.contains(&i) { 1 } else { 2 }).collect()
}

/// Equal to the row's coloring, possibly with the two colors swapped.
pub fn coloring_matches(row: &ReferenceRow, coloring: &[u8]) -> bool {
    let want = row_coloring(row);
    want == coloring || want.iter().zip(coloring).all(|(a, b)| a != b)
}

/// Nonzero entries of the 7×7 matrix, 1-based.
pub const SEVEN_BY_SEVEN_ARCS: [(usize, usize); 7] =
    [(1, 2), (1, 3), (2, 6), (3, 4), (4, 5), (4, 6), (6, 7)];

/// The four diagonal patterns considered for the 7×7 matrix, as colors.
pub const SEVEN_BY_SEVEN_PATTERNS: [[u8; 7]; 4] = [
    [1, 2, 2, 1, 2, 1, 2],
    [1, 2, 1, 2, 1, 1, 2],
    [1, 2, 2, 1, 2, 2, 1],
    [1, 2, 1, 2, 1, 2, 1],
];

pub fn seven_by_seven() -> UTMatrix {
    let mut m = UTMatrix::zero(7);
    for (i, j) in SEVEN_BY_SEVEN_ARCS {
        m.set(i - 1, j - 1, Elem::ONE);
    }
    m
}
