//! Pattern certification: exhaustive in 2D, sampled in 3D.

use mdreg::patterns::{check_pattern, random_balanced_binary, PatternConfig};
use mdreg::{Alphabet, Epsilon, Tensor};

fn main() -> mdreg::Result<()> {
    let eps: Epsilon = "1/4".parse()?;

    let identity = Tensor::from_fn(vec![8, 8], Alphabet::binary(), |i| (i[0] == i[1]) as u8)?;
    let cert = check_pattern(&identity, eps, &PatternConfig::exhaustive())?;
    println!("identity 8×8: {:?} ({} failing probe/direction pairs)", cert.verdict, cert.failures.len());

    let ones = Tensor::constant(vec![8, 8], Alphabet::binary(), 1)?;
    println!("all-ones 8×8: {:?}", check_pattern(&ones, eps, &PatternConfig::exhaustive())?.verdict);

    let mut passed = 0;
    for seed in 0..10 {
        let m = random_balanced_binary(&[32, 32], seed)?;
        passed += check_pattern(&m, eps, &PatternConfig::sampled(50, seed + 1000))?.passes() as usize;
    }
    println!("random balanced 32×32: {passed}/10 non-refuted");

    let cube = random_balanced_binary(&[6, 6, 6], 3)?;
    println!("random 6×6×6: {:?}", check_pattern(&cube, eps, &PatternConfig::sampled(20, 9))?.verdict);
    Ok(())
}
