//! Verifies DW(closure of β^{p^k}) ≡ DW(closure of β) (mod p) entrywise.
//!
//!     cargo run --example verify_congruence -- "3: 1 2" 2 1 "dihedral:3"

use std::sync::Arc;

use periodic_dw::braid::BraidWord;
use periodic_dw::congruence::{check_preconditions, verify, VerifyOptions};
use periodic_dw::group::FiniteGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (word, p, k, spec) = match args.as_slice() {
        [w, p, k, g] => (w.clone(), p.parse()?, k.parse()?, g.clone()),
        _ => ("2: 1 1".to_string(), 3, 1, "quaternion:8".to_string()),
    };
    let beta: BraidWord = word.parse()?;
    let g = Arc::new(FiniteGroup::from_spec(&spec)?);
    let inst = match check_preconditions(&beta, p, k, g.clone()) {
        Ok(inst) => inst,
        Err(e) => {
            println!("not applicable: {e}");
            return Ok(());
        }
    };
    println!("periodic braid has {} letters", inst.periodic().braid().len());
    let report = verify(&inst, &VerifyOptions { keep_cases: true, ..Default::default() })?;
    for c in report.cases.iter().flatten().filter(|c| c.lhs_count + c.rhs_count > 0) {
        let names = |v: &[u32]| v.iter().map(|&e| g.name(e).to_string()).collect::<Vec<_>>().join(",");
        println!(
            "  x=({}) [h]=({})  periodic {}  quotient {}",
            names(&c.x),
            names(&c.hclass),
            c.lhs_count,
            c.rhs_count
        );
    }
    println!(
        "{} cases, {} violations, {:.3}s",
        report.cases_checked,
        report.violations.len(),
        report.elapsed
    );
    Ok(())
}
