//! Exact arithmetic in Q_p: canonical expansions, norms, the p-adic
//! exponential, and region membership.
//!
//! Run with: cargo run --example padic_arithmetic

use padic_lambda::padic::PAdic;

fn main() -> padic_lambda::Result<()> {
    // 3/4 in Q_2: valuation -2, digits of the unit 3 = 1 + 2
    let x = PAdic::parse_rational(3, 4, 2, 16)?;
    println!("3/4 in Q_2      = {}", x.literal());
    println!("|3/4|_2         = {}", x.norm().render(2));

    // ultrametric addition: |x + y| = max when norms differ
    let a = PAdic::parse_rational(5, 1, 5, 16)?;
    let b = PAdic::parse_rational(25, 1, 5, 16)?;
    let s = a.add(&b)?;
    println!("|5 + 25|_5      = {} (max of 1/5 and 1/25)", s.norm().render(5));

    // subtraction tracks exact valuations; full cancellation is an error,
    // never a silent guess
    let six = PAdic::parse_rational(6, 1, 5, 16)?;
    let one = PAdic::one(5, 16);
    println!("|6 - 1|_5       = {}", six.sub(&one)?.norm().render(5));
    match six.sub(&six) {
        Err(e) => println!("6 - 6           -> {e}"),
        Ok(_) => unreachable!(),
    }

    // the p-adic exponential on its convergence domain
    let e = a.exp_p()?;
    println!("|exp_5(5)|_5    = {}", e.norm().render(5));
    println!("|exp_5(5)-1|_5  = {}", e.sub(&one)?.norm().render(5));
    match one.exp_p() {
        Err(e) => println!("exp_5(1)        -> {e}"),
        Ok(_) => unreachable!(),
    }

    // region predicates
    for v in [1i64, 6, 2, 5] {
        let x = PAdic::from_integer(v, 5, 16)?;
        println!(
            "x = {v}: in Z_5 = {}, |x|_5 = 1: {}, in E_5 = {}",
            x.in_zp(),
            x.in_unit_sphere(),
            x.in_ep()
        );
    }
    Ok(())
}
