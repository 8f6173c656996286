//! Components, writhes and linking numbers of closed braids, and how they
//! change under taking powers.

use periodic_dw::braid::BraidWord;

fn describe(beta: &BraidWord) {
    let c = beta.components();
    println!("{beta}");
    println!("  permutation {:?}", beta.permutation().images());
    for (t, cycle) in c.cycles.iter().enumerate() {
        println!("  component {t}: strands {cycle:?}, self-writhe {}", c.self_writhe[t]);
    }
    if c.count() > 1 {
        println!("  linking {:?}", c.linking);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let words = ["2: 1 1", "2: 1 1 1", "3: 1 -2 1 -2", "3: 1 2", "4: 1 2 3 -1 2"];
    for w in words {
        describe(&w.parse()?);
    }
    // A 3-periodic link: the cube of a braid whose closure is a knot.
    let beta: BraidWord = "3: 1 2".parse()?;
    describe(&beta.power(3));
    Ok(())
}
