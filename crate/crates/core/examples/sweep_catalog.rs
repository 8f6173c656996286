//! Runs the congruence over a JSON catalog. Entries whose preconditions
//! fail are reported rather than aborting the sweep.

use periodic_dw::congruence::{sweep, CatalogEntry, VerifyOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = match std::env::args().nth(1) {
        Some(p) => p,
        None => {
            // The bundled catalog names a table file relative to the crate.
            std::env::set_current_dir(env!("CARGO_MANIFEST_DIR"))?;
            "examples/data/catalog.json".into()
        }
    };
    let catalog: Vec<CatalogEntry> = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    let summary = sweep(&catalog, &VerifyOptions::default());
    for e in &summary.entries {
        println!(
            "{:<12} p={} k={} {:<45} {:?} ({} cases) {}",
            e.entry.braid,
            e.entry.p,
            e.entry.k,
            e.entry.group,
            e.status,
            e.cases_checked,
            e.message.as_deref().unwrap_or("")
        );
    }
    println!("{} passed, {} failed", summary.passed, summary.failed);
    std::process::exit(summary.exit_code());
}
