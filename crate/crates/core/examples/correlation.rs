//! Searching a family of events for k members with a large common intersection.

use product_density::correlation::{best_correlated, find_correlated, EventFamily, SearchMode};
use product_density::{Bounds, Budget, ExactRational};

fn main() -> product_density::Result<()> {
    let (theta, eps) = (ExactRational::frac(1, 4), ExactRational::frac(1, 2));
    let n = Bounds::default().sigma(&theta, &eps, 2)?;
    println!(
        "sigma(1/4, 1/2, 2) = {n}: any {n} events of measure 1/2 contain a pair meeting in >= 1/16"
    );

    // Six halves of an 8-point space.
    let events = vec![
        vec![0, 1, 2, 3],
        vec![4, 5, 6, 7],
        vec![0, 2, 4, 6],
        vec![1, 3, 5, 7],
        vec![0, 1, 4, 5],
        vec![2, 3, 6, 7],
    ];
    let fam = EventFamily::uniform(8, &events)?;
    let budget = Budget::default();
    for mode in [SearchMode::Exhaustive, SearchMode::Greedy] {
        let f = find_correlated(&fam, 2, &theta, mode, &budget)?;
        println!(
            "{mode:?}: {f:?} with measure {}",
            fam.intersection_measure(&f)?
        );
    }
    let (best, m) = best_correlated(&fam, 3, &budget)?;
    println!("best triple {best:?} has measure {m}");

    // Weighted points work the same way.
    let weighted = EventFamily::uniform(3, &[vec![0, 1], vec![0, 2]])?.with_weights(&[
        ExactRational::frac(1, 2),
        ExactRational::frac(1, 4),
        ExactRational::frac(1, 4),
    ])?;
    println!(
        "weighted pair measure {}",
        weighted.intersection_measure(&[0, 1])?
    );
    Ok(())
}
