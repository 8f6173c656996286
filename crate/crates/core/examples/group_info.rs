//! Conjugacy classes and centralizers of a few groups.
//!
//!     cargo run --example group_info -- "dihedral:5"

use periodic_dw::group::FiniteGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs: Vec<String> = std::env::args().skip(1).collect();
    let specs = if specs.is_empty() {
        vec!["symmetric:3".into(), "quaternion:8".into(), "perm:4:(1 2 3 4);(1 3)".into()]
    } else {
        specs
    };
    for spec in specs {
        let g = FiniteGroup::from_spec(&spec)?;
        println!("{}: order {}, abelian {}", g.label(), g.order(), g.is_abelian());
        for c in g.conjugacy_classes() {
            let members: Vec<_> = c.members.iter().map(|&m| g.name(m)).collect();
            println!(
                "  class of {:<12} size {:>2}  |Cen| {:>3}  {{{}}}",
                g.name(c.representative),
                c.len(),
                g.centralizer(c.representative).order(),
                members.join(", ")
            );
        }
    }
    Ok(())
}
