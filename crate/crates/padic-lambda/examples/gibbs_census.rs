//! Census of translation-invariant generalized p-adic Gibbs measures for
//! the Ising model: fixed-point fields, boundedness, and the
//! phase-transition verdict.
//!
//! Run with: cargo run --example gibbs_census

use padic_lambda::gibbs::{self, ModelParams};
use padic_lambda::poly::rat;

fn main() -> padic_lambda::Result<()> {
    for (p, k, rho, label) in [
        (5u64, 2u8, rat(6, 1), "p=5 k=2 rho=6 (rho in E_5, |rho| = 1)"),
        (5, 2, rat(1, 5), "p=5 k=2 rho=1/5 (|rho| = 5)"),
        (5, 3, rat(1, 5), "p=5 k=3 rho=1/5"),
        (13, 2, rat(14, 1), "p=13 k=2 rho=14 (rho in E_13)"),
        (2, 2, rat(3, 1), "p=2 k=2 rho=3 (|rho|_2 = 1)"),
    ] {
        let params = ModelParams::ising(p, k, rho, 1, 48)?;
        let census = gibbs::ti_census_ising(&params)?;
        println!("{label}");
        for e in &census.entries {
            println!(
                "  h = {:<22} {:?}, {:?}  [{}]",
                truncate(&e.field.literal(), 22),
                e.class,
                e.bounded,
                e.criterion_path
            );
        }
        for x in &census.excluded {
            println!("  excluded: {x}");
        }
        println!(
            "  count {} ({} bounded, {} unbounded); verdict: {:?}",
            census.entries.len(),
            census.bounded_count,
            census.unbounded_count,
            census.verdict
        );
        println!("  theorem: {}", census.theorem.description);
        if let Some(exp) = census.theorem.expected_count {
            println!(
                "  published count {exp} vs computed {} (match: {:?})",
                census.theorem.found_count, census.theorem.matches
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
