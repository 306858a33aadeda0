//! The two-row chain with product-form weights `q(ω)`: its stationary law is
//! `q/Z*`, and its top row is the `D*` chain.
//!
//!     cargo run --example two_row -- 1/2 1/3 2/3 1/4

use weyl_tasep::lumping::project_distribution;
use weyl_tasep::models::{build_dstar, DStarParams};
use weyl_tasep::rational::parse_q;
use weyl_tasep::tworow;

fn main() -> weyl_tasep::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let rate = |i: usize, default: &str| parse_q(args.get(i).map_or(default, String::as_str));
    let p = DStarParams::new(rate(0, "1/2")?, rate(1, "1/3")?, rate(2, "2/3")?, rate(3, "1/4")?)?;
    let (n, n0) = (5, 1);

    let (law, z) = tworow::stationary(n, n0, &p)?;
    let chain = tworow::kernel(n, n0, &p)?;
    println!("{} configurations, Z* = {z}", law.support_len());
    println!("product form is stationary: {}", law.is_stationary_for(&chain.closed_class()?));
    for c in tworow::enumerate(n, n0)?.iter().take(4) {
        println!("  {} / {}  q = {}", c.top(), c.bottom(), tworow::q_weight(c, &p)?);
    }

    let top = project_distribution(&law, |c| c.top());
    let dstar = build_dstar(n, n0, &p)?.closed_class()?.exact_stationary()?;
    println!("top row matches the D* solve: {}", top == dstar);
    Ok(())
}
