//! Coherent states in a truncated Fock space: dimension choice, the Poisson
//! photon distribution and unsqueezed quadratures.
//!
//! ```bash
//! cargo run --example coherent_states
//! ```

use nlcs::observables::photon_distribution;
use nlcs::{moments, Route, StateFamily, TruncationPolicy};
use num_complex::Complex64;

fn main() -> nlcs::Result<()> {
    let policy = TruncationPolicy::default();
    for r in [0.0, 0.5, 1.7, 4.0] {
        let alpha = Complex64::new(r, 0.0);
        let (state, dim) = StateFamily::coherent(alpha).build_auto(Route::Series, &policy)?;
        let rep = moments(&state)?;
        println!(
            "alpha={r:<4} dim={dim:<3} <n>={:.6} Var(x)={:.6} Var(p)={:.6} q={}",
            rep.mean_n,
            rep.var_x,
            rep.var_p,
            rep.mandel_q.map_or("undefined".into(), |q| format!("{q:.2e}"))
        );
    }

    let (state, _) = StateFamily::coherent(Complex64::new(1.5, 0.0)).build_auto(Route::Series, &policy)?;
    println!("\np(n) at alpha=1.5:");
    for (n, p) in photon_distribution(&state).iter().enumerate().take(8) {
        println!("  {n:>2}  {p:.6}  {}", "#".repeat((p * 100.0).round() as usize));
    }
    Ok(())
}
