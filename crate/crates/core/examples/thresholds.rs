//! Exact values of the threshold tower.

use num_bigint::BigUint;
use product_density::{Bounds, ExactRational};

fn main() -> product_density::Result<()> {
    let b = Bounds::default();
    let half = ExactRational::frac(1, 2);

    println!(
        "sigma(1/4, 1/2, 2)      = {}",
        b.sigma(&ExactRational::frac(1, 4), &half, 2)?
    );
    println!("eps'(1/2, (2,2))        = {}", b.eps_prime(&half, &[2, 2])?);
    println!("T_1/2(2)                = {}", b.t_bound(&half, &[2])?);
    println!(
        "T_3/4(2)                = {}",
        b.t_bound(&ExactRational::frac(3, 4), &[2])?
    );
    println!("T_1/2(2,2)              = {}", b.t_bound(&half, &[2, 2])?);
    println!(
        "Q^1_(1/4,1/2)(2)        = {}",
        b.q_bound(
            &ExactRational::frac(1, 4),
            &half,
            &BigUint::from(1u32),
            &[2]
        )?
    );
    println!("V_1/2(2)                = {}", b.v_delta(&half, &[2], &[])?);

    let f = b.f_chain(&half, &[2, 2])?;
    println!(
        "f(1/2, (2,2))           = [{}, <{} bits>]",
        f[0],
        f[1].bits()
    );
    Ok(())
}
