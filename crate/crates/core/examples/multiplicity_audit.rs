//! Largest eigenvalue multiplicity of the free Laplacian on small cubes,
//! against the bound d(2L+1)^{d-1}.

use anderson_levels::free::{multiplicity_audit, DEFAULT_ENUMERATION_CAP};

fn main() -> anderson_levels::Result<()> {
    println!("d,L,max_multiplicity,at,bound,passed");
    for d in 1..=3 {
        for l in 0..=5 {
            let a = multiplicity_audit(d, l, DEFAULT_ENUMERATION_CAP)?;
            println!("{d},{l},{},{:.6},{},{}", a.max_multiplicity, a.at, a.bound, a.passed);
        }
    }
    Ok(())
}
