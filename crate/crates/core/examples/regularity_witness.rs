//! Find an irregularity witness in a structured matrix, verify it, and show
//! that a random matrix of the same size passes.

use mdreg::patterns::random_tensor;
use mdreg::rational::rat;
use mdreg::regularity::{check_line_density, verify_witness, LineDirection};
use mdreg::{check_regularity, Alphabet, BlockRef, CheckConfig, Epsilon, Tensor};

fn main() -> mdreg::Result<()> {
    let eps: Epsilon = "1/4".parse()?;

    // ones in the top-left quadrant only
    let quadrant = Tensor::from_fn(vec![8, 8], Alphabet::binary(), |i| (i[0] < 4 && i[1] < 4) as u8)?;
    let cert = check_regularity(&quadrant, eps, &CheckConfig::subsets())?;
    println!("quadrant: {:?} after {} boxes", cert.verdict, cert.probes_examined);
    if let Some(w) = &cert.witness {
        println!("  witness {} for symbol {:?}, deviation {}", w.block, w.symbol, w.deviation);
        println!("  witness re-verified: {}", verify_witness(&quadrant, eps, w)?);
    }

    let loose: Epsilon = "9/20".parse()?;
    let random = random_tensor(&[12, 12], &Alphabet::binary(), &[rat(1, 2), rat(1, 2)], 11)?;
    let cert = check_regularity(&random, loose, &CheckConfig::intervals())?;
    println!("random 12×12 at ε = {loose}, interval boxes: {:?}", cert.verdict);

    let constant = Tensor::constant(vec![8, 8], Alphabet::binary(), 1)?;
    let lines = BlockRef::full(&[8, 8]);
    let report = check_line_density(&constant, eps, LineDirection::V, &lines, "1")?;
    println!("constant matrix: {} bad lines of {} (bound {})", report.bad_count, report.lines, report.bound);
    Ok(())
}
