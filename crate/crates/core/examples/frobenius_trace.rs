//! tr(A^p) = tr(A)^p for random matrices over F_{p^e}: the linear-algebra
//! shadow of the congruence.

use std::sync::Arc;

use periodic_dw::field::{frobenius_trace_check, FqField, FqMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, e) in [(2, 1), (2, 3), (3, 2), (5, 1), (7, 2)] {
        let f = Arc::new(FqField::new(p, e)?);
        let r = frobenius_trace_check(&f, 4, 200, 7);
        println!(
            "F_{p}^{e} modulus {:?}: {}/{} single, iterated {:?}",
            f.modulus(),
            r.passed,
            r.trials,
            r.iterated_passed
        );
    }

    // tr(A^n) and tr(A)^n agree when n is a power of p, not in general.
    let f = Arc::new(FqField::new(3, 1)?);
    let a = FqMatrix::from_ints(f.clone(), &[vec![1, 1], vec![1, 0]])?;
    for n in 1..=4 {
        let lhs = a.pow(n).trace();
        let rhs = f.pow(a.trace(), n);
        println!("n={n}: tr(A^n)={:?} tr(A)^n={:?}", lhs.coeffs(&f), rhs.coeffs(&f));
    }
    Ok(())
}
