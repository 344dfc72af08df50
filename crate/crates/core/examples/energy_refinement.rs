//! Energy of nested partitions: refining never lowers it, and the singleton
//! partition reaches the total volume.

use mdreg::partition::{energy, is_refinement, BlockPartition};
use mdreg::patterns::random_tensor;
use mdreg::rational::rat;
use mdreg::Alphabet;

fn main() -> mdreg::Result<()> {
    let alphabet = Alphabet::new(["a", "b", "c"])?;
    let t = random_tensor(&[6, 6], &alphabet, &[rat(1, 2), rat(1, 3), rat(1, 6)], 5)?;

    let chain = [
        BlockPartition::interval_grid(&[vec![6], vec![6]])?,
        BlockPartition::interval_grid(&[vec![3, 3], vec![6]])?,
        BlockPartition::interval_grid(&[vec![3, 3], vec![2, 4]])?,
        BlockPartition::interval_grid(&[vec![1, 2, 3], vec![2, 2, 2]])?,
        BlockPartition::singletons(t.dims())?,
    ];
    for (i, p) in chain.iter().enumerate() {
        let e = energy(&t, p)?;
        let refines = i == 0 || is_refinement(p, &chain[i - 1]);
        println!("{:>2} blocks: energy {} (refines previous: {refines})", p.len(), e.total);
    }
    println!("volume {}", t.total_volume());
    Ok(())
}
