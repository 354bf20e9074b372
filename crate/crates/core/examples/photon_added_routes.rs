//! Photon-added coherent states `|α,m> ∝ â†^m |α>` built three ways, and the
//! eigenvalue equation `f(n̂, m) â |α,m> = α |α,m>` they all satisfy.
//!
//! ```bash
//! cargo run --example photon_added_routes
//! ```

use nlcs::verify::strict_policy;
use nlcs::{fidelity, DeformedAnnihilator, Route, StateFamily};
use num_complex::Complex64;

fn main() -> nlcs::Result<()> {
    let policy = strict_policy();
    let alpha = Complex64::new(1.2, 0.5);
    for m in [1u32, 3, 6] {
        let family = StateFamily::photon_added(alpha, m);
        let dim = family.choose_dim(&policy)?;
        let series = family.build(Route::Series, dim, &policy)?;
        let a = DeformedAnnihilator::new(i64::from(m));
        println!("m={m} dim={dim}");
        for &route in family.routes() {
            let s = family.build(route, dim, &policy)?;
            println!(
                "  {route:<14} 1-F(series)={:.1e}  eigen residual={:.1e}",
                1.0 - fidelity(&s, &series)?,
                a.eigen_residual(&s, alpha)?
            );
        }
        // the gap below |m> is exact
        let low: f64 = (0..m as usize).map(|n| series.amplitude(n).norm_sqr()).sum();
        println!("  weight below |{m}> = {low}");
    }
    Ok(())
}
