//! Build a sweep in code, run it and write CSV to stdout.

use ris_secrecy::channel::SystemParams;
use ris_secrecy::sweep::{self, Axis, Format, Metric, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = SystemParams::new(5, 10.0, -10.0).with_uniform_impairment(0.01);
    let mut spec = SweepSpec::new(
        Axis::NElements,
        vec![2.0, 4.0, 8.0, 16.0, 32.0],
        base,
        vec![Metric::Sop, Metric::Asc, Metric::McSop],
    )
    .with_label("snr_d=10dB");
    spec.mc.trials = 50_000;

    let rows = sweep::run_sweep(&spec)?;
    sweep::emit(&rows, Format::Csv, None)?;
    Ok(())
}
