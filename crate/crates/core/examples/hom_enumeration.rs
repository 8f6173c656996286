//! Counts representations of closed braid groups into finite groups and
//! prints meridian/longitude pairs for one of them.

use periodic_dw::braid::BraidWord;
use periodic_dw::group::FiniteGroup;
use periodic_dw::holonomy::{ClosedBraid, EnumOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = EnumOptions::default();
    let groups = ["cyclic:3", "symmetric:3", "quaternion:8", "dihedral:5"];
    let braids = [("unknot", "1:"), ("trefoil", "2: 1 1 1"), ("figure-eight", "3: 1 -2 1 -2"), ("Hopf", "2: 1 1")];

    print!("{:<14}", "");
    for g in groups {
        print!("{g:>14}");
    }
    println!();
    for (name, word) in braids {
        let closed = ClosedBraid::new(word.parse::<BraidWord>()?);
        print!("{name:<14}");
        for spec in groups {
            let g = FiniteGroup::from_spec(spec)?;
            print!("{:>14}", closed.count(&g, None, &opts)?);
        }
        println!();
    }

    let g = FiniteGroup::from_spec("symmetric:3")?;
    let trefoil = ClosedBraid::new("2: 1 1 1".parse()?);
    println!("\ntrefoil -> S3 with a transposition meridian:");
    let x = g.element_by_name("(1 2)")?;
    for r in trefoil.enumerate(&g, Some(&[x]), &opts)? {
        let names = |v: &[u32]| v.iter().map(|&e| g.name(e).to_string()).collect::<Vec<_>>().join(", ");
        println!("  generators [{}]  longitude {}", names(&r.tuple), names(&r.longitude));
    }
    Ok(())
}
