//! Sylvester–Hadamard matrices and their interval-mode regularity.

use mdreg::patterns::{hadamard_regular_matrix, HadamardVariant};
use mdreg::Epsilon;

fn main() -> mdreg::Result<()> {
    for (k, eps) in [(2, "1/2"), (3, "1/2"), (4, "1/2"), (4, "1/4"), (5, "1/4"), (6, "1/4")] {
        let eps: Epsilon = eps.parse()?;
        for variant in [HadamardVariant::Raw, HadamardVariant::Balanced] {
            let h = hadamard_regular_matrix(k, variant, Some(eps))?;
            let verdict = h.regularity.as_ref().map(|c| c.verdict);
            println!("k={k} eps={eps} {variant:?}: density {}, {verdict:?}", h.density);
        }
    }
    Ok(())
}
