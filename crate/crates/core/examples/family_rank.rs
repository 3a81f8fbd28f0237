//! Which sets of levels share a subgrid, and the rank of that family.

use product_density::family::{enumerate_family, rank_report, FiniteSetFamily};
use product_density::workbench::gen_planted;
use product_density::{Budget, ExactRational, GridShape, PointSet};

fn main() -> product_density::Result<()> {
    for n in [1usize, 3, 5] {
        let r = rank_report(&FiniteSetFamily::powerset((0..n).collect()))?;
        println!("powerset of {n} points: rank {}", r.end_extension);
    }

    let budget = Budget::default();
    let base = GridShape::new(0, vec![4, 4, 4, 4])?;
    let (inst, _) = gen_planted(
        5,
        &base,
        &[2, 2, 2, 2],
        &ExactRational::frac(1, 4),
        &[1, 2, 3, 4],
        &budget,
    )?;
    let unit = PointSet::full(GridShape::unit(0));
    let fam = enumerate_family(0, &unit, &inst.levels, &inst.targets, 4, &budget)?;
    println!("{} members, hereditary: {}", fam.len(), fam.is_hereditary());
    let r = rank_report(&fam)?;
    println!("rank {} (inclusion order {})", r.end_extension, r.inclusion);

    let sub = fam.restricted_to(&[2, 4]);
    println!(
        "restricted to {{2, 4}}: {:?}",
        sub.members().collect::<Vec<_>>()
    );
    Ok(())
}
