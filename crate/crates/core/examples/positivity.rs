//! Lower bound on the free band-edge mass through a plateau test function,
//! compared with the density-of-states reference.

use anderson_levels::asymptotics::positivity_check;

fn main() -> anderson_levels::Result<()> {
    println!("d,E,K,delta,L,integral,reference,ratio");
    for (d, e, k) in [(3, 5.0, 2.0), (3, 5.0, 4.0), (2, 3.0, 1.0)] {
        let p = positivity_check(d, e, k, 0.5, 320)?;
        println!(
            "{d},{e},{k},0.5,320,{:.8},{:.8},{:.4}",
            p.integral, p.reference, p.ratio
        );
    }
    Ok(())
}
