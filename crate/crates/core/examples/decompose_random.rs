//! Run the regularity decomposition on a structured 12×12 matrix and print the
//! per-round audit.

use mdreg::szemeredi::{decompose, DecompositionConfig};
use mdreg::{Alphabet, Epsilon, Tensor};

fn main() -> mdreg::Result<()> {
    let eps: Epsilon = "1/5".parse()?;
    // dense corners in every 6×6 tile
    let t = Tensor::from_fn(vec![12, 12], Alphabet::binary(), |i| (i[0] % 6 < 3 && i[1] % 6 < 3) as u8)?;
    let cfg = DecompositionConfig::new(eps, t.ndim())?;
    println!("t0 = {}, round bound {}", cfg.initial_order, cfg.max_rounds);

    let dec = decompose(&t, &cfg)?;
    for r in &dec.trace.records {
        print!(
            "round {}: {} blocks of order {}, energy {}, {} irregular",
            r.round, r.cardinality, r.block_order, r.energy, r.irregular_blocks
        );
        match &r.audit {
            Some(a) => println!(", audit holds: {}", a.all_hold()),
            None => println!(),
        }
    }
    println!(
        "regular after {} rounds, exceptional volume {}",
        dec.trace.rounds(),
        dec.partition.partition().exceptional_volume()
    );
    Ok(())
}
