//! The weighted martingale M_L for a few seeds, and the empirical variance of
//! its limit against the analytic series in d = 1.

use anderson_levels::asymptotics::{martingale_trace, martingale_variance};
use anderson_levels::model::DisorderLaw;

fn main() -> anderson_levels::Result<()> {
    let law = DisorderLaw::UniformSym { half_width: 1.0 };
    let trace = martingale_trace(3, 0.5, &law, 11, 50)?;
    print!("{}", trace.to_csv());

    let l = 1000;
    let samples: Vec<f64> = (0..200)
        .map(|s| martingale_trace(1, 1.0, &law, s, l).map(|t| t.values[l]))
        .collect::<Result<_, _>>()?;
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
    let exact = martingale_variance(1, 1.0, &law, l)?;
    eprintln!("d=1 eps=1: empirical Var(M_{l}) = {var:.6}, series = {exact:.6}");
    Ok(())
}
