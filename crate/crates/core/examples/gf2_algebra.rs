//! Bit vectors and matrices over GF(2): products, rank and the two-point
//! solution sets used by interactive hashing.

use wiretap_ot::gf2::{random_full_rank_matrix, solve_affine_pair, BitMatrix, BitVec};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let m = BitMatrix::parse(&["1101", "0110", "1011"])?;
    let x = BitVec::parse("1010")?;
    println!("M =\n{m}");
    println!("rank {}, M·{x} = {}", m.rank(), m.mat_vec_mul(&x)?);

    let mut rng = rng_from_seed(1);
    let a = random_full_rank_matrix(5, 6, &mut rng)?;
    let target = BitVec::random(5, &mut rng);
    let (s0, s1) = solve_affine_pair(&a, &target)?;
    println!("\nrandom 5x6 of rank {}; A·s = {target} has solutions {s0} and {s1}", a.rank());
    println!("s0 xor s1 = {} spans the kernel", s0.xor(&s1)?);
    Ok(())
}
