//! k-th roots of -1: residue census mod p, existence in Q_p, Hensel
//! lifting, and the windowed root finder over Q_p.
//!
//! Run with: cargo run --example roots_of_minus_one

use padic_lambda::poly::{rat, rat_int};
use padic_lambda::residue::{
    exists_kth_root_minus_one_qp, hensel_lift, kth_roots_of_minus_one_mod_p, poly_roots_qp,
};
use padic_lambda::QpPoly;

fn main() -> padic_lambda::Result<()> {
    for (p, k) in [(5, 2), (7, 2), (13, 4), (3, 3)] {
        let r = kth_roots_of_minus_one_mod_p(p, k)?;
        println!(
            "p={p} k={k}: roots mod p = {:?}, Sol_p = {:?}, kappa_p = {}, N_kp = {:?}, in Q_p: {}",
            r.roots_mod_p, r.sol_set, r.kappa_p, r.n_kp, r.exists_in_qp
        );
    }
    println!();

    // lift 2 (a square root of -1 mod 5) into Z_5
    let poly = QpPoly::new(vec![rat_int(1), rat_int(0), rat_int(1)]); // x^2 + 1
    let i5 = hensel_lift(&poly, 2, 5, 24)?;
    println!("sqrt(-1) in Z_5 = {}", i5.literal());
    let check = poly.eval_padic(&i5)?;
    println!(
        "x^2 + 1 at the lift has norm {}",
        check.norm().render(5)
    );
    println!();

    // a windowed search finds roots together with their exact valuations:
    // (x - 5)(x - 1/5) has one root of norm 1/5 and one of norm 5
    let f = QpPoly::new(vec![rat_int(1), rat(-26, 5), rat_int(1)]);
    let found = poly_roots_qp(&f, &[-1, 0, 1], 5, 24)?;
    for root in &found.roots {
        println!(
            "root {} with norm {}",
            root.literal(),
            root.norm().render(5)
        );
    }
    println!();
    println!(
        "x^6 = -1 solvable in Q_13: {}",
        exists_kth_root_minus_one_qp(13, 6)?
    );
    println!(
        "x^2 = -1 solvable in Q_7:  {}",
        exists_kth_root_minus_one_qp(7, 2)?
    );
    Ok(())
}
