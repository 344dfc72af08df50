//! Structured and unstructured counts of a 2×2 target, and the counting
//! lower bound on a 2×2 grid.

use mdreg::counting::{bound_2d, count_structured, count_unstructured_detailed, verify_counting, Hypothesis};
use mdreg::partition::BlockPartition;
use mdreg::patterns::random_tensor;
use mdreg::rational::rat;
use mdreg::{Alphabet, CheckConfig, Delta, Epsilon, Tensor};

fn main() -> mdreg::Result<()> {
    let a = random_tensor(&[12, 12], &Alphabet::binary(), &[rat(1, 4), rat(3, 4)], 21)?;
    let target = Tensor::binary_matrix(&[&[1, 1], &[1, 0]])?;
    let grid = BlockPartition::interval_grid(&[vec![6, 6], vec![6, 6]])?;

    println!("structured count: {}", count_structured(&a, &grid, &target)?);
    let u = count_unstructured_detailed(&a, &target, 1_000_000)?;
    println!("unstructured: {} locations, {} placements", u.distinct_locations, u.placements);

    let delta: Delta = "1/2".parse()?;
    let half = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]];
    println!("bound for 6+6 slabs at density 1/2: {}", bound_2d(&[6, 6], &[6, 6], &half, delta)?);

    let eps: Epsilon = "3/10".parse()?;
    let report = verify_counting(&a, &grid, &target, "9/10".parse()?, &Hypothesis::Regular(CheckConfig::intervals()), eps)?;
    println!(
        "count {} vs bound {}: satisfied {}, hypotheses hold {}, advisory {}",
        report.structured_count, report.bound, report.satisfied, report.hypotheses_hold, report.advisory
    );
    Ok(())
}
