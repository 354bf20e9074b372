//! p-quadrature variance of `|α,-m>` over real α, for m = 1, 5, 10, written
//! as CSV. Pass a path to write the table to a file.
//!
//! ```bash
//! cargo run --release --example squeezing_sweep -- /tmp/fig1.csv
//! ```

use nlcs::cli::{run_fig1, SweepSpec};
use nlcs::observables::variance_sweep;

fn main() -> nlcs::Result<()> {
    let spec = SweepSpec::fig1_default();
    let rows = variance_sweep(spec.family, &spec.m_values, &spec.grid()?, &spec.policy)?;
    for &m in &spec.m_values {
        let (min_row, at_end) = {
            let of_m: Vec<_> = rows.iter().filter(|r| r.m == m).collect();
            let min = of_m.iter().min_by(|a, b| a.var_p.total_cmp(&b.var_p)).copied().unwrap();
            (min, *of_m.last().unwrap())
        };
        println!(
            "m={m:<2} min Var(p)={:.5} at alpha={:.2};  Var(p)={:.5} at alpha={:.2}",
            min_row.var_p, min_row.alpha, at_end.var_p, at_end.alpha
        );
    }

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, run_fig1(&spec)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
