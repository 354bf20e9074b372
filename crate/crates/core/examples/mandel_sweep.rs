//! Mandel q of `|α,-m>` (super-Poissonian) and `|α,m>` (sub-Poissonian)
//! against |α|. Pass a path to write the negative-family table as CSV.
//!
//! ```bash
//! cargo run --release --example mandel_sweep -- /tmp/fig2.csv
//! ```

use nlcs::cli::{run_fig2, SweepSpec};
use nlcs::observables::mandel_sweep;
use nlcs::FamilyKind;

fn main() -> nlcs::Result<()> {
    let spec = SweepSpec::fig2_default();
    let grid = spec.grid()?;
    for kind in [FamilyKind::NegativeM, FamilyKind::PhotonAdded] {
        let rows = mandel_sweep(kind, &spec.m_values, &grid, &spec.policy)?;
        println!("{kind}:");
        for &m in &spec.m_values {
            let qs: Vec<(f64, f64)> =
                rows.iter().filter(|r| r.m == m).filter_map(|r| r.mandel_q.map(|q| (r.abs_alpha, q))).collect();
            let (lo, hi) = qs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, q)| (lo.min(q), hi.max(q)));
            let sample = |a: f64| qs.iter().find(|(r, _)| (r - a).abs() < 1e-9).map_or(f64::NAN, |p| p.1);
            println!("  m={m:<2} q in [{lo:+.4}, {hi:+.4}]  q(1)={:+.4}  q(5)={:+.4}", sample(1.0), sample(5.0));
        }
    }

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, run_fig2(&spec)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
