//! The Kolmogorov compatibility condition, checked by brute force: it holds
//! exactly at fixed-point fields and fails with a concrete witness for a
//! perturbed field.
//!
//! Run with: cargo run --example compatibility_check

use padic_lambda::gibbs::{self, BoundaryField, ModelParams};
use padic_lambda::padic::PAdic;
use padic_lambda::poly::rat;

fn main() -> padic_lambda::Result<()> {
    let params = ModelParams::ising(5, 2, rat(6, 1), 1, 48)?;

    // every TI field from the census satisfies compatibility at n = 2, 3
    let fields = gibbs::hm_periodic_fields(&params, 1)?;
    for (i, field) in fields.iter().enumerate() {
        for n in [2u32, 3] {
            let rep = gibbs::check_compatibility(&params, n, field)?;
            println!(
                "census field {i}, levels {} vs {}: holds = {} ({} configurations)",
                n - 1,
                n,
                rep.holds,
                rep.checked_configs
            );
        }
    }
    println!();

    // perturbing a fixed point by p breaks the condition
    let h = PAdic::one(5, 48).add(&PAdic::from_integer(5, 5, 48)?)?;
    let rep = gibbs::check_compatibility(&params, 2, &BoundaryField::ti(h))?;
    println!("perturbed field h = 1 + 5: holds = {}", rep.holds);
    if let Some(w) = rep.worst {
        println!(
            "  witness configuration {:?} with discrepancy norm 5^{}",
            w.config, w.discrepancy_norm_exponent
        );
    }
    Ok(())
}
