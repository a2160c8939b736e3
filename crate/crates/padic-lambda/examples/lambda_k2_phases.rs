//! The order-two lambda-model: regime detection, fixed points of the
//! reduced maps, boundedness profiles, and phase-transition verdicts for
//! the small-rho and E_p regimes.
//!
//! Run with: cargo run --example lambda_k2_phases

use padic_lambda::gibbs::{self, InteractionSpec, ModelParams};
use padic_lambda::poly::rat;

fn main() -> padic_lambda::Result<()> {
    let cases = [
        (5u64, rat(5, 1), [1i64, 0, 3, 0], "small rho, 2l(1,1) < l(-1,1)"),
        (5, rat(5, 1), [3, 0, 4, 0], "small rho, 2l(1,1) > l(-1,1), sqrt exists"),
        (7, rat(7, 1), [3, 0, 4, 0], "small rho, sqrt(-rho^4) missing at p=7"),
        (5, rat(6, 1), [2, 1, 0, 3], "rho in E_5 (p = 1 mod 4)"),
        (7, rat(8, 1), [2, 1, 0, 3], "rho in E_7 (p = 3 mod 4)"),
    ];
    for (p, rho, table, label) in cases {
        let params = ModelParams::new(p, 2, rho, InteractionSpec::new(table), 48)?;
        let analysis = gibbs::lambda_k2_analysis(&params)?;
        println!("p={p}, lambda={table:?}  ({label})");
        println!("  regime: {:?}", analysis.regime);
        for e in &analysis.census.entries {
            println!(
                "  fixed point |u|_p = p^{:<3} {:?}; field h = u^2, {:?}, profile {:?}",
                -e.regime_point.valuation().unwrap(),
                e.class,
                e.bounded,
                e.profile.exponents
            );
        }
        println!(
            "  verdict: {:?} (theorem expects {:?}); count match: {:?}",
            analysis.census.verdict, analysis.expected_verdict, analysis.census.theorem.matches
        );
        println!();
    }
    Ok(())
}
