//! The special functions the learner relies on.

use steinolo::specfn::{erfi, erfi_inverse, normal_cdf, normal_pdf, owens_t};

fn main() -> steinolo::Result<()> {
    for h in [0.0, 0.5, 1.0, 2.5] {
        for a in [0.25, 1.0, 4.0] {
            println!("T({h}, {a}) = {:.15}", owens_t(h, a));
        }
    }
    for x in [0.1, 1.0, 3.0] {
        let y = erfi(x);
        println!("erfi({x}) = {y:.15e}, inverse back = {:.15}", erfi_inverse(y)?);
    }
    println!("Phi(1.96) = {:.15}, phi(0) = {:.15}", normal_cdf(1.96), normal_pdf(0.0));
    Ok(())
}
