//! Run the invariant suite on the default grid, then again with a corrupted
//! deformation weight to show the eigenvalue checks catch it.
//!
//! ```bash
//! cargo run --release --example verify_suite
//! ```

use nlcs::verify::{run, VerifyGrid};

fn main() -> nlcs::Result<()> {
    let report = run(&VerifyGrid::default())?;
    let failed = report.failures().count();
    println!("default grid: {} checks, {failed} failed", report.checks.len());

    let corrupted = run(&VerifyGrid { weight_perturbation: 1e-6, ..VerifyGrid::default() })?;
    println!("f + 1e-6: {} of {} checks fail, e.g.", corrupted.failures().count(), corrupted.checks.len());
    for c in corrupted.failures().take(3) {
        println!("  {}  residual={:.2e} tol={:.0e}", c.name, c.residual, c.tolerance);
    }
    Ok(())
}
