//! How the truncation dimension follows from the analytic tail of each
//! family, and what happens when the cap is too small.
//!
//! ```bash
//! cargo run --example truncation_policy
//! ```

use nlcs::truncation::tail_mass;
use nlcs::{choose_dim, TruncationPolicy};
use num_complex::Complex64;

fn main() -> nlcs::Result<()> {
    println!("{:>6} {:>4} {:>10} {:>10}", "alpha", "m", "D(1e-12)", "D(1e-24)");
    for r in [0.5, 2.0, 4.0, 8.0] {
        for m in [-10i64, -1, 0, 1, 10] {
            let alpha = Complex64::new(r, 0.0);
            let loose = choose_dim(alpha, m, &TruncationPolicy::new(1e-12, 512)?)?;
            let tight = choose_dim(alpha, m, &TruncationPolicy::new(1e-24, 512)?)?;
            println!("{r:>6} {m:>4} {loose:>10} {tight:>10}");
        }
    }
    let alpha = Complex64::new(2.0, 0.0);
    println!("\ntail of |2,-3> above D=10: {:.3e}", tail_mass(alpha, -3, 10));
    match choose_dim(Complex64::new(12.0, 0.0), 0, &TruncationPolicy::new(1e-12, 64)?) {
        Ok(d) => println!("unexpected dim {d}"),
        Err(e) => println!("alpha=12 with max_dim=64: {e}"),
    }
    Ok(())
}
