//! Coloring the multispecies chain by species threshold gives a two-species
//! chain, and collapsing the ends of that gives the `D*` chain.
//!
//!     cargo run --example lumping

use weyl_tasep::lumping::{k_coloring, project_distribution, star_collapse, verify_lumping, CollapseMode};
use weyl_tasep::models::{build_dstar, build_multi, build_two_species, DStarParams};
use weyl_tasep::rational::q;
use weyl_tasep::weyl::{Family, WeylKind};

fn main() -> weyl_tasep::error::Result<()> {
    let n = 4;
    let big = build_multi(WeylKind::new(Family::D, n)?)?;
    let pi = big.exact_stationary()?;
    for k in 1..=n {
        let small = build_two_species(Family::D, n, k - 1)?;
        let report = verify_lumping(&big, |w| k_coloring(w, k), &small);
        let image = project_distribution(&pi, |w| k_coloring(w, k));
        println!(
            "D{n} {k}-coloring: lumps {}, image stationary {}, {} → {} states",
            report.pass,
            image.is_stationary_for(&small),
            big.len(),
            small.len()
        );
    }

    // The D two-species chain forgets its boundary sites onto D* at rate 1/2.
    let half = DStarParams::uniform(q(1, 2))?;
    for n0 in 1..=3 {
        let two = build_two_species(Family::D, 5, n0)?;
        let dstar = build_dstar(5, n0, &half)?;
        let report = verify_lumping(&two, |w| star_collapse(w, CollapseMode::BothEnds), &dstar);
        println!("D(5,{n0}) → D*(5,{n0}): {}", report.pass);
    }
    Ok(())
}
