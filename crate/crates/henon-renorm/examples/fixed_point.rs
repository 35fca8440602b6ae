//! Solves for the period-doubling fixed point and compares its scaling factor with
//! the superstable cascade of the quadratic family.

use henon_renorm::unimodal::{cascade, default_seed, renormalize_unimodal, solve_fixed_point};

fn main() -> anyhow::Result<()> {
    let start = std::time::Instant::now();
    let sol = solve_fixed_point(&default_seed(), 40, 1e-12)?;
    println!("newton iterations     {}", sol.iterations);
    println!("collocation residual  {:.3e}", sol.collocation_residual);
    println!("|Rf - f|              {:.3e}", sol.residual);
    println!("critical point        {:.15}", sol.critical_point());
    println!("sigma (interval)      {:.15}", sol.sigma);
    println!("normalization error   {:.3e}", sol.f_star.normalization_error().unwrap());

    let est = cascade(14);
    println!("sigma (cascade)       {:.15}", est.sigma);
    println!("delta (cascade)       {:.12}", est.delta);
    println!("mu_infinity           {:.15}", est.mu_infinity);
    println!("|sigma difference|    {:.3e}", (sol.sigma - est.sigma).abs());

    let twice = renormalize_unimodal(&renormalize_unimodal(&sol.f_star)?)?;
    println!("|R^2 f - f|           {:.3e}", twice.sup_distance(&sol.f_star, 1001));
    println!("elapsed               {:.2?}", start.elapsed());
    Ok(())
}
