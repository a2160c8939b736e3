//! Fixed points of the Ising-Potts mapping across parameter regimes, with
//! multiplier norms and stability classes.
//!
//! Run with: cargo run --example ising_fixed_points

use padic_lambda::dynamics::{RationalMap, SearchWindow};
use padic_lambda::poly::rat;

fn main() -> padic_lambda::Result<()> {
    // |theta| > 1: fixed points spread over valuations {-k v(theta), 0, ...}
    for (p, k, rho, label) in [
        (5u64, 2usize, rat(1, 5), "p=5 k=2 rho=1/5 (|theta| = 25)"),
        (5, 3, rat(1, 5), "p=5 k=3 rho=1/5 (|theta| = 25)"),
        (5, 2, rat(6, 1), "p=5 k=2 rho=6   (rho in E_5)"),
        (7, 2, rat(8, 1), "p=7 k=2 rho=8   (rho in E_7)"),
    ] {
        let map = RationalMap::ising_potts(p, k, &rho, 1, 48)?;
        let found = map.fixed_points(&SearchWindow::Auto)?;
        println!("{label}");
        println!("  search window (valuations): {:?}", found.window);
        for r in &found.reports {
            println!(
                "  x = {:<24} |x|_p = p^{:<3} multiplier norm {:<6} {:?}",
                truncate(&r.point.literal(), 24),
                -r.valuation.unwrap(),
                r.multiplier_norm.render(p),
                r.class,
            );
        }
        println!();
    }
    Ok(())
}

fn truncate(s: &str, n: usize) -> String {
    if s.len() <= n {
        s.to_string()
    } else {
        format!("{}..", &s[..n - 2])
    }
}
