//! The 3D matrix built from a Hadamard matrix: every block has density 1/2 and
//! is regular, yet the 2×2×2 target never occurs.

use mdreg::counting::{count_structured, count_unstructured};
use mdreg::patterns::{build_counterexample, hadamard_regular_matrix, HadamardVariant};
use mdreg::{check_regularity, CheckConfig, Epsilon};

fn main() -> mdreg::Result<()> {
    let h = hadamard_regular_matrix(2, HadamardVariant::Balanced, None)?;
    let ce = build_counterexample(&h.tensor)?;
    let eps: Epsilon = "1/2".parse()?;
    println!("order {}, {} blocks", ce.tensor.dims()[0], ce.partition.len());
    for b in ce.partition.blocks() {
        let block = ce.tensor.extract(&b.axes)?;
        let cert = check_regularity(&block, eps, &CheckConfig::subsets())?;
        println!("  {}: density {}, {:?}", b.axes, ce.tensor.density(&b.axes, "1")?.to_rational(), cert.verdict);
    }
    println!("structured occurrences: {}", count_structured(&ce.tensor, &ce.partition, &ce.target)?);
    println!("unstructured occurrences: {}", count_unstructured(&ce.tensor, &ce.target)?);
    Ok(())
}
