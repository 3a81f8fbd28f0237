//! Extracting a full subgrid from a dense set, in both modes.

use product_density::extraction::{
    brute_force_subgrid, extract_subgrid, proof_hypotheses, ExtractMode,
};
use product_density::grid::contains_product;
use product_density::workbench::gen_random_levels;
use product_density::{Budget, ExactRational, GridShape, PointSet};

fn main() -> product_density::Result<()> {
    let budget = Budget::default();
    let half = ExactRational::frac(1, 2);

    // 88 points is exactly the size at which density 1/2 forces a 2-subset.
    let inst = gen_random_levels(7, &GridShape::new(0, vec![88])?, &[2], &half, &[1], &budget)?;
    let d = inst.levels.get(1).unwrap();
    let hyp = proof_hypotheses(d, &[2], &half, &budget)?;
    let w = extract_subgrid(d, &[2], &half, ExtractMode::Proof, &budget)?;
    println!(
        "1-D, hypotheses hold: {}, witness {:?}",
        hyp.hold(),
        w.subsets
    );

    // A 6x6x6 set with a planted 2x2x2 block.
    let shape = GridShape::new(0, vec![6, 6, 6])?;
    let d = PointSet::from_fn(shape, |c| {
        c.iter().all(|&x| x == 1 || x == 4) || (c[0] * 7 + c[1] * 3 + c[2]) % 4 == 0
    });
    println!("3-D set of density {}", d.density());
    for mode in [ExtractMode::Exhaustive, ExtractMode::Proof] {
        match extract_subgrid(&d, &[2, 2, 2], &d.density(), mode, &budget) {
            Ok(w) => println!(
                "{mode:?}: {:?}, verified {}",
                w.subsets,
                contains_product(&d, &w, None)?
            ),
            Err(e) => println!("{mode:?}: {e}"),
        }
    }
    println!(
        "brute force: {:?}",
        brute_force_subgrid(&d, &[2, 2, 2], &budget)?.map(|w| w.subsets)
    );
    Ok(())
}
