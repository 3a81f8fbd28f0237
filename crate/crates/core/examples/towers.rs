//! Ackermann levels and comparisons against towers of twos that are never built.

use num_bigint::BigUint;
use product_density::bounds::leq_tower;
use product_density::{Bounds, ExactRational, TowerRef};

fn main() -> product_density::Result<()> {
    let b = Bounds::default();
    for n in 0..=3u64 {
        let row: Vec<String> = (0..=4u32)
            .map(|x| b.ackermann(n, &BigUint::from(x)).map(|v| v.to_string()))
            .collect::<Result<_, _>>()?;
        println!("A_{n}(0..=4) = {}", row.join(", "));
    }

    // 2^65536 fits; one more iteration of A_2 does not.
    let big = BigUint::from(1u32) << 65536u32;
    println!(
        "2^65536 <= A_2^(2)(16): {}",
        leq_tower(&big, &TowerRef::new(2, 16u32))
    );
    println!(
        "2^65536 <= A_2^(1)(16): {}",
        leq_tower(&big, &TowerRef::new(1, 16u32))
    );

    for row in b.check_f_tower(&ExactRational::frac(1, 2), &[2, 2])? {
        println!(
            "prefix {}: f has {} bits, f <= {} is {}",
            row.k,
            row.f.bits(),
            row.tower,
            row.holds
        );
    }
    Ok(())
}
