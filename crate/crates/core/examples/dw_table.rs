//! Sparse Dijkgraaf-Witten table of the (2,4) torus link over S3, keyed
//! by meridian tuple and longitude class in the centralizers.
//!
//!     cargo run --example dw_table -- "3: 1 -2 1 -2" "dihedral:5"

use periodic_dw::braid::BraidWord;
use periodic_dw::dw::{dw_table, XScope};
use periodic_dw::group::FiniteGroup;
use periodic_dw::holonomy::EnumOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let beta: BraidWord = std::env::args().nth(1).as_deref().unwrap_or("2: 1 1 1 1").parse()?;
    let g = FiniteGroup::from_spec(&std::env::args().nth(2).unwrap_or("symmetric:3".into()))?;
    let table = dw_table(&beta, &g, XScope::Representatives, &EnumOptions::default())?;
    println!("{} over {}: {} components", table.braid, table.group, table.components);
    let names = |v: &[u32]| v.iter().map(|&e| g.name(e).to_string()).collect::<Vec<_>>().join(",");
    for (key, count) in &table.classes {
        println!("  x=({:<8}) [h]=({:<8}) {count}", names(&key.x), names(&key.hclass));
    }
    println!("total homomorphisms with representative meridians: {}", table.total_homs());
    Ok(())
}
