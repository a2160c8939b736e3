//! Level-periodic boundary fields from m-cycles of the Ising-Potts map:
//! each 2-cycle yields a genuinely 2-periodic generalized p-adic quasi
//! Gibbs measure, re-validated against the compatibility condition.
//!
//! Run with: cargo run --example periodic_measures

use padic_lambda::gibbs::{self, BoundaryField, ModelParams};
use padic_lambda::poly::rat;

fn main() -> padic_lambda::Result<()> {
    let params = ModelParams::ising(5, 2, rat(6, 1), 1, 48)?;
    let map = params.ti_map();

    for m in 1..=3usize {
        let fields = gibbs::hm_periodic_fields(&params, m)?;
        println!("m = {m}: {} field(s)", fields.len());
        for f in &fields {
            match f {
                BoundaryField::TranslationInvariant { h } => {
                    println!("  TI field h = {}", truncate(&h.literal(), 40));
                }
                BoundaryField::LevelPeriodic { cycle } => {
                    println!("  level-periodic cycle:");
                    for (l, h) in cycle.iter().enumerate() {
                        println!("    level ≡ {l} (mod {m}): h = {}", truncate(&h.literal(), 40));
                    }
                    // the defining relation h_l = F(h_{l+1}) holds on re-evaluation
                    for l in 0..cycle.len() {
                        let next = &cycle[(l + 1) % cycle.len()];
                        let f_of_next = map.evaluate(next)?;
                        assert!(f_of_next.congruent_mod(&cycle[l], 20));
                    }
                    println!("    recurrence h_l = F(h_(l+1)) re-verified");
                }
            }
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
