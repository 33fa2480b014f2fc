//! Run the bundled presets (analytical curves only) and summarise each curve.
//!
//! `cargo run --example figure_presets -- fig5` limits the run to one preset.

use ris_secrecy::sweep::{self, Metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let only = std::env::args().nth(1);
    for name in sweep::preset_names().filter(|n| only.as_deref().is_none_or(|o| o == *n)) {
        let study = sweep::preset(name)?;
        println!("{name}:");
        for spec in &study.sweep {
            let mut spec = spec.clone();
            spec.outputs.retain(|m| matches!(m, Metric::Sop | Metric::Asc));
            let rows = sweep::run_sweep(&spec)?;
            let first = rows.first().and_then(|r| r.value).unwrap_or(f64::NAN);
            let last = rows.last().and_then(|r| r.value).unwrap_or(f64::NAN);
            println!(
                "  {:<28} {:>3} points  {:.4e} at {} dB -> {:.4e} at {} dB",
                rows[0].metric,
                rows.len(),
                first,
                spec.values[0],
                last,
                spec.values[spec.values.len() - 1]
            );
        }
    }
    Ok(())
}
