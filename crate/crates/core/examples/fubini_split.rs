//! Cutting a family of levels at a coordinate and extracting behind a shared prefix pattern.

use product_density::extraction::{split_and_extract, split_density, ExtractMode};
use product_density::workbench::gen_planted;
use product_density::{Budget, ExactRational, GridShape};

fn main() -> product_density::Result<()> {
    let budget = Budget::default();
    let base = GridShape::new(0, vec![3, 6, 6, 6])?;
    let (inst, planted) = gen_planted(
        11,
        &base,
        &[2, 2, 2, 2],
        &ExactRational::zero(),
        &[2, 3, 4],
        &budget,
    )?;
    println!("planted {:?}, delta {}", planted.subsets, inst.delta);

    let eps = inst.delta.clone();
    let theta = eps.clone() * ExactRational::frac(1, 2);
    let out = split_and_extract(
        &inst.levels,
        1,
        &theta,
        &eps,
        &inst.targets,
        ExtractMode::Exhaustive,
        &budget,
    )?;
    let split = &out.split;
    println!(
        "gamma {:?} (density {} >= {theta}), kept {:?}",
        split.gamma.indices().collect::<Vec<_>>(),
        split.gamma.density(),
        split.kept
    );
    let floor = split_density(&theta, &eps, split.gamma.cells(), &budget)?;
    for (k, w) in &out.witnesses {
        let tail = split.tail.get(*k).unwrap();
        println!(
            "level {k}: tail density {} (floor {floor}), witness {:?}",
            tail.density(),
            w.as_ref().map(|w| &w.subsets)
        );
    }
    Ok(())
}
