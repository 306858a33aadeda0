//! Simulates the reduced alcove walk and compares its direction with the
//! closed form. Writes a path picture for the rank-2 case.
//!
//!     cargo run --release --example alcove_walk -- B 2 walk.svg

use weyl_tasep::walk::{estimate_direction, path_svg, walk_path};
use weyl_tasep::weyl::{Family, WeylKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let family: Family = args.first().map_or("B", String::as_str).parse()?;
    let n: usize = args.get(1).map_or(Ok(2), |s| s.parse())?;
    let kind = WeylKind::new(family, n)?;

    let est = estimate_direction(kind, 200_000, 8, 1)?;
    println!("estimate {:?}", est.direction_estimate);
    println!("closed   {:?}", est.closed_form);
    println!("cosine   {:?}, acceptance {:.3}", est.cosine_vs_closed_form, est.acceptance_rate);

    if let Some(path) = args.get(2) {
        std::fs::write(path, path_svg(&walk_path(kind, 2_000, 1)?)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
