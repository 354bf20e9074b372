//! The algebra of `Â = f(n̂, m) â`: which number states it annihilates, the
//! sectors `Â†` generates from them, and a raising operator `Ĝ†` with
//! `[Â, Ĝ†] = 1` on the infinite sector.
//!
//! ```bash
//! cargo run --example deformed_algebra
//! ```

use nlcs::fock::RaisingOperator;
use nlcs::DeformedAnnihilator;

fn main() -> nlcs::Result<()> {
    let dim = 24;
    for m in [0i64, 1, 4, -3] {
        let a = DeformedAnnihilator::new(m);
        let zeros = a.annihilated_states(dim)?;
        println!("m={m:>2}: A|n>=0 for n in {zeros:?}");
        for &seed in &zeros {
            let sector = a.sector(seed, dim)?;
            let shape = if sector.finite { "finite" } else { "reaches edge" };
            let span = format!("{}..={}", sector.members[0], sector.members.last().unwrap());
            match a.commutator_residual(&sector, dim) {
                Ok(r) => println!("    S_{seed} = {span} ({shape}), max |[A,G+]-1| = {r:.1e}"),
                Err(e) => println!("    S_{seed} = {span} ({shape}), {e}"),
            }
        }
    }

    // outside the sector plain â† does not close the algebra
    let a = DeformedAnnihilator::new(3);
    let creation = RaisingOperator::creation(dim)?;
    println!("\nm=3, G+ = a+, at |0>: residual {}", a.commutator_residual_at(&creation, 0)?);

    // a second-order annihilator a^2 and its Ĝ† on the even sector
    let g2 = DeformedAnnihilator::new(0).g_dagger(2, 0, dim)?;
    let coeffs: Vec<String> = (0..8).step_by(2).map(|n| format!("{:.4}", g2.coeff(n).re)).collect();
    println!("p=2, j=0: G+ coefficients on |0>,|2>,|4>,|6> = {}", coeffs.join(", "));
    Ok(())
}
