//! Seeded generation and the JSON instance and witness formats.

use product_density::workbench::{gen_planted, instance_checksum, Encoding, Instance, WitnessFile};
use product_density::{Budget, ExactRational, GridShape};

fn main() -> product_density::Result<()> {
    let budget = Budget::default();
    let base = GridShape::new(0, vec![3, 4])?;
    let (inst, planted) = gen_planted(
        1,
        &base,
        &[2, 2],
        &ExactRational::frac(1, 4),
        &[1, 2],
        &budget,
    )?;
    println!("checksum {:016x}", instance_checksum(&inst));

    let text = inst.to_json(Encoding::Points);
    println!("{text}");
    let bitset = inst.to_json(Encoding::Bitset);
    assert_eq!(Instance::from_json(&bitset)?, Instance::from_json(&text)?);

    let w = WitnessFile::new(&planted, None, inst.levels.keys());
    println!("{}", w.to_json());
    println!("verifies: {}", w.verify(&inst)?);

    match Instance::from_json(&text.replace("\"1/4\"", "\"3/0\"")) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("accepted a zero denominator"),
    }
    Ok(())
}
