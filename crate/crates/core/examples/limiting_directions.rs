//! Limiting directions of the reduced random walk for every classical type,
//! in closed form and, for small rank, from Lam's sum over the exact law.
//!
//!     cargo run --example limiting_directions

use weyl_tasep::closedform::{limdir_closed, limdir_exact_lam};
use weyl_tasep::weyl::{Family, WeylKind};

fn main() -> weyl_tasep::error::Result<()> {
    for f in [Family::B, Family::Bcheck, Family::C, Family::Ccheck, Family::D] {
        let lo = if matches!(f, Family::B | Family::Bcheck | Family::D) { 2 } else { 1 };
        for n in lo..=5 {
            let kind = WeylKind::new(f, n)?;
            let closed = limdir_closed(kind)?;
            let coeffs: Vec<String> = closed.coefficients.iter().map(ToString::to_string).collect();
            // Exact multispecies solves stay small through rank 3.
            let check = match n <= 3 && matches!(f, Family::B | Family::Ccheck | Family::D) {
                true => format!("  exact: {}", limdir_exact_lam(kind)?.is_positive_multiple_of(&closed)),
                false => String::new(),
            };
            println!("{f}{n}: ({}){check}", coeffs.join(", "));
        }
    }
    Ok(())
}
