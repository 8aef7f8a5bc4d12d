// Every gallery entry built through the integrators and verified.

use adscmc::gallery::{gallery, NAMES};
use adscmc::geometry::Orientation;
use adscmc::Tolerances;

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();
    for name in NAMES {
        let entry = gallery(name)?;
        let surface = entry.build(&entry.domain, &tol)?;
        let (rep, checks) = entry.verify(&surface, Orientation::Positive, &tol)?;
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        println!(
            "{name:20} H = {:+.6}  {} checks, {}",
            rep.summary.h_mode,
            checks.len(),
            if failed.is_empty() { "all pass".to_string() } else { format!("failed: {}", failed.join(", ")) }
        );
    }
    Ok(())
}
