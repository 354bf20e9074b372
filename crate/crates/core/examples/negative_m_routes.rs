//! The states `|α,-m>`: number-state series, inverse ladder operators and the
//! exponential `e^{α Ĝ†}|0>`, checked against the closed-form normalization
//! and photon distribution.
//!
//! ```bash
//! cargo run --example negative_m_routes
//! ```

use nlcs::observables::{negative_m_probability, photon_distribution};
use nlcs::states::negative_m_norm;
use nlcs::verify::strict_policy;
use nlcs::{fidelity, DeformedAnnihilator, Route, StateFamily};
use num_complex::Complex64;

fn main() -> nlcs::Result<()> {
    let policy = strict_policy();
    let (alpha, m) = (Complex64::new(2.0, 0.0), 3u32);
    let family = StateFamily::negative(alpha, m);
    let dim = family.choose_dim(&policy)?;
    let series = family.build(Route::Series, dim, &policy)?;
    let minus = DeformedAnnihilator::new(-i64::from(m));

    println!("|alpha={alpha}, -{m}>  dim={dim}  N={:.12}", negative_m_norm(alpha, m)?);
    for &route in family.routes() {
        let s = family.build(route, dim, &policy)?;
        println!(
            "  {route:<14} 1-F(series)={:.1e}  eigen residual={:.1e}",
            1.0 - fidelity(&s, &series)?,
            minus.eigen_residual(&s, alpha)?
        );
    }

    println!("\n  n   p(n) vector     p(n) closed form");
    for (n, p) in photon_distribution(&series).iter().enumerate().take(10) {
        println!("  {n:<3} {p:.10}    {:.10}", negative_m_probability(alpha, m, n)?);
    }
    Ok(())
}
