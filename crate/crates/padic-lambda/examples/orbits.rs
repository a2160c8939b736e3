//! Orbit iteration: convergence into the attracting fixed point from its
//! basin, and repulsion away from a repelling one.
//!
//! Run with: cargo run --example orbits

use padic_lambda::dynamics::{RationalMap, SearchWindow, StabilityClass};
use padic_lambda::padic::PAdic;
use padic_lambda::poly::rat;

fn main() -> padic_lambda::Result<()> {
    let map = RationalMap::ising_potts(5, 2, &rat(6, 1), 1, 48)?;
    let found = map.fixed_points(&SearchWindow::Auto)?;
    let one = PAdic::one(5, 48);

    // starting inside E_5 the orbit falls into x = 1
    let start = PAdic::from_integer(11, 5, 48)?;
    let trace = map.iterate_orbit(&start, 40, 20, std::slice::from_ref(&one));
    println!("orbit of 11 (in E_5), distances to 1:");
    for (i, x) in trace.iterates.iter().enumerate() {
        match x.sub(&one) {
            Ok(d) => println!("  step {i}: |x - 1|_5 = 5^-{}", d.valuation().unwrap()),
            Err(_) => println!("  step {i}: indistinguishable from 1"),
        }
    }
    println!("  termination: {:?}", trace.termination);
    println!();

    // near a repelling point distances strictly grow
    let rep = found
        .reports
        .iter()
        .find(|r| r.class == StabilityClass::Repelling)
        .expect("repelling point exists in this regime")
        .point
        .clone();
    let offset = PAdic::from_integer(5i64.pow(6), 5, 48)?;
    let mut x = rep.add(&offset)?;
    println!("orbit near the repelling point {}...:", truncate(&rep.literal(), 18));
    for i in 0..4 {
        let d = x.sub(&rep)?;
        println!("  step {i}: |x - x*|_5 = 5^-{}", d.valuation().unwrap());
        x = map.evaluate(&x)?;
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
