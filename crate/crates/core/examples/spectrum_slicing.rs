//! Eigenvalues of one random Hamiltonian in a narrow window, found three
//! ways: Sturm bisection, banded LDLᵀ inertia counts, and a full QL solve.

use anderson_levels::eigen::{banded_inertia, count_le, eigs_in_window, full_spectrum, tridiagonalize};
use anderson_levels::model::{assemble_hamiltonian, Cube, DisorderLaw, PotentialProfile, SiteField};

fn main() -> anderson_levels::Result<()> {
    let cube = Cube::new(2, 10)?;
    let profile = PotentialProfile::Decaying {
        amplitude: 1.0,
        epsilon: 0.5,
    };
    let field = SiteField::sample(cube, &profile, &DisorderLaw::UniformSym { half_width: 1.0 }, 7);
    let h = assemble_hamiltonian(&cube, Some(&field), None)?;
    let t = tridiagonalize(&h)?;

    let (a, b) = (0.4, 0.6);
    let window = eigs_in_window(&t, a, b, 1e-12);
    let below_a = banded_inertia(&h, a)?.count;
    let below_b = banded_inertia(&h, b)?.count;
    let all = full_spectrum(&t)?;
    let from_ql: Vec<f64> = all.into_iter().filter(|&x| x >= a && x <= b).collect();

    println!("N = {}, bandwidth = {}", h.order(), h.bandwidth());
    println!("sturm count in ({a}, {b}]: {}", count_le(&t, b) - count_le(&t, a));
    println!("LDLᵀ count in ({a}, {b}]: {}", below_b - below_a);
    println!("{:>4} {:>20} {:>20}", "i", "bisection", "QL");
    for (i, (x, y)) in window.values.iter().zip(&from_ql).enumerate() {
        println!("{i:>4} {x:>20.14} {y:>20.14}");
    }
    Ok(())
}
