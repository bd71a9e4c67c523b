//! Regenerates the committed CSV fixtures from the seeded generators.
//!
//! Usage: cargo run --example gen_fixtures [-- <output-dir>]
//! Default output directory is the crate's fixtures/.

use std::path::PathBuf;
use uavplan_core::synth::{
    layout_records_to_csv, synth_layout_records, synth_wind_records, wind_records_to_csv,
    SynthLayoutParams, SynthWindParams,
};

fn main() {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    std::fs::create_dir_all(&out_dir).expect("create output directory");

    let wind = wind_records_to_csv(&synth_wind_records(&SynthWindParams::default()));
    let wind_path = out_dir.join("wind_synth.csv");
    std::fs::write(&wind_path, wind).expect("write wind fixture");
    println!("wrote {}", wind_path.display());

    let layout = layout_records_to_csv(&synth_layout_records(&SynthLayoutParams::default()));
    let layout_path = out_dir.join("layout_synth_47.csv");
    std::fs::write(&layout_path, layout).expect("write layout fixture");
    println!("wrote {}", layout_path.display());
}
