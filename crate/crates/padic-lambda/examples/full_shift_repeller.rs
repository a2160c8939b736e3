//! The Ising repeller: ball cover around the k-th roots of -1, verified
//! scaling exponents, incidence matrix, the dynamical metric, and the
//! periodic-point witness that the dynamics is the full shift.
//!
//! Run with: cargo run --example full_shift_repeller

use padic_lambda::poly::rat;
use padic_lambda::subshift::{build_ising_repeller, SymbolSequence};

fn main() -> padic_lambda::Result<()> {
    // p = 5, k = 2, rho = 6 in E_5: theta = 36, |theta - 1| = 1/5 < |2|_5
    let mut setup = build_ising_repeller(5, 2, &rat(6, 1), 1, 48)?;
    println!("balls (closed radius |p(theta-1)|_5 = 5^-2):");
    for (i, b) in setup.balls.iter().enumerate() {
        println!(
            "  B_{i}: center {} (open radius exponent {})",
            b.center.literal(),
            b.radius_exponent
        );
    }
    setup.verify_scaling(64, 0)?;
    println!(
        "scaling exponents tau = {:?}, class {:?}, sampled-verification passed: {}",
        setup.scaling_exponents,
        setup.repeller_class,
        setup.scaling_witness.is_none()
    );

    let conj = setup.verify_shift_conjugacy(3)?;
    println!("incidence matrix: {:?}", conj.incidence.entries);
    println!("irreducible: {}", conj.incidence.irreducible);
    for row in &conj.rows {
        println!(
            "  m = {}: trace(A^m) = {}, f^m-invariant points in X = {} (match: {})",
            row.period, row.trace, row.periodic_points_in_cover, row.matches
        );
    }
    println!();

    // the metric d_f on admissible sequences
    let s = SymbolSequence::new(vec![0, 1, 0, 1]);
    let t = SymbolSequence::new(vec![0, 1, 1, 0]);
    println!(
        "d_f((0,1,0,1), (0,1,1,0)) = {}",
        setup.df_distance(&s, &t)?.render(5)
    );

    // itinerary of a period-2 point alternates ball indices
    let cycles = setup
        .map
        .periodic_points(2, &padic_lambda::dynamics::SearchWindow::Auto)?;
    let it = setup.itinerary(&cycles[0][0], 8);
    println!("itinerary of a period-2 point: {:?}", it.symbols);
    Ok(())
}
