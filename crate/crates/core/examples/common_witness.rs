//! One subgrid serving as many levels as possible.

use std::collections::BTreeMap;

use product_density::extraction::LevelFamily;
use product_density::family::{brute_force_common_witness, common_witness};
use product_density::workbench::gen_planted;
use product_density::{Budget, Error, ExactRational, GridShape, PointSet};

fn main() -> product_density::Result<()> {
    let budget = Budget::default();
    let base = GridShape::new(0, vec![5; 5])?;
    let (inst, planted) = gen_planted(
        2,
        &base,
        &[2; 5],
        &ExactRational::frac(1, 3),
        &[2, 3, 5],
        &budget,
    )?;
    let cw = common_witness(&inst.levels, &inst.targets, &inst.delta, 3, &budget)?;
    println!("planted {:?}", planted.subsets);
    println!("found   {:?} for levels {:?}", cw.witness.subsets, cw.kept);

    // Level 1 wants the first coordinate in {0,1}, level 2 wants it in {2,3}.
    let shape = |s: &[usize]| GridShape::new(0, s.to_vec());
    let levels = LevelFamily::new(
        shape(&[4, 4])?,
        BTreeMap::from([
            (1, PointSet::from_indices(shape(&[4])?, [0, 1])?),
            (2, PointSet::from_fn(shape(&[4, 4])?, |c| c[0] >= 2)),
        ]),
    )?;
    match common_witness(&levels, &[2, 2], &ExactRational::frac(1, 2), 2, &budget) {
        Err(Error::NotFound(msg)) => println!("t = 2: {msg}"),
        other => println!("t = 2: unexpected {other:?}"),
    }
    let (_, best) = brute_force_common_witness(&levels, &[2, 2], &budget)?.unwrap();
    println!("enumeration agrees: at most {} level(s)", best.len());
    Ok(())
}
