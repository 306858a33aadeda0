//! Exact stationary law of the type B multispecies chain on four sites, and the
//! law of its last two sites.
//!
//!     cargo run --example exact_stationary

use weyl_tasep::closedform::last_two_table;
use weyl_tasep::models::build_multi;
use weyl_tasep::weyl::{Family, WeylKind};

fn main() -> weyl_tasep::error::Result<()> {
    let kind = WeylKind::new(Family::B, 4)?;
    let chain = build_multi(kind)?;
    let pi = chain.exact_stationary()?;
    println!("{} states, stationary: {}", chain.len(), pi.is_stationary_for(&chain));

    let mut heaviest: Vec<_> = pi.iter().collect();
    heaviest.sort_by(|a, b| b.1.cmp(a.1));
    for (w, p) in heaviest.iter().take(5) {
        println!("  {w:?}  {p}");
    }

    let t = last_two_table(&pi, "B");
    println!("P(w3 = i, w4 = ¬j):");
    for i in [-4, -3, -2, -1, 1, 2, 3, 4] {
        let row: Vec<String> = (1..=4).rev().map(|j| format!("{:>8}", t.get(i, -j).to_string())).collect();
        println!("  {i:>3} {}", row.join(""));
    }
    Ok(())
}
