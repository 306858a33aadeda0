//! Closed-form partition functions and last-two-site correlations, checked
//! against the exact two-species solve.
//!
//!     cargo run --example closed_forms

use weyl_tasep::closedform::{b_pair_table, z_b, z_d, z_semiperm};
use weyl_tasep::models::{build_two_species, Letter};
use weyl_tasep::rational::q;
use weyl_tasep::weyl::Family;

fn main() -> weyl_tasep::error::Result<()> {
    println!(" n  n0   Z_B      Z_D      Z_semiperm(1,1)");
    for n in 3..=8 {
        for n0 in 1..=2 {
            println!(
                "{n:>2} {n0:>3} {:>6} {:>8} {:>10}",
                z_b(n, n0)?,
                z_d(n, n0)?,
                z_semiperm(n, n0, &q(1, 1), &q(1, 1))?
            );
        }
    }

    let (n, n0) = (5, 2);
    let table = b_pair_table(n, n0)?;
    let pi = build_two_species(Family::B, n, n0)?.closed_class()?.exact_stationary()?;
    let letters = [(-1, Letter::Minus), (0, Letter::Zero), (1, Letter::Plus)];
    let mut agree = true;
    for (i, a) in letters {
        for (j, b) in letters {
            let exact = pi.mass(|w| w.0[n - 2] == a && w.0[n - 1] == b);
            agree &= exact == table.get(i, j);
            print!("{:>10}", table.get(i, j).to_string());
        }
        println!();
    }
    println!("closed form matches exact solve: {agree}");
    Ok(())
}
