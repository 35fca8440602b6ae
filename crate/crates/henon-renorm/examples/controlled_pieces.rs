//! Calibrates the regime constants for the default control parameters and counts
//! controlled words exactly, comparing with brute force and the push-up construction.

use henon_renorm::combinatorics::{
    count_controlled, count_controlled_brute_force, recursion_set, regime_calibrate, ControlParams, ControlRule,
};

fn main() -> anyhow::Result<()> {
    let cp = ControlParams::default();
    println!("a = {:.4}  A = {:.4}", cp.a(), cp.big_a());
    for k in 0..5 {
        println!("  s({k}) = {:8.3}  l({k}) = {:8.3}", cp.s(k), cp.l(k));
    }
    let theta = 0.99;
    let cal = regime_calibrate(&cp, theta, 10..=400)?;
    let rp = cal.params;
    println!(
        "calibrated K = {}  Q = {}  q0 = {:.4}  q1 = {:.4}  feasible n: {} (first {:?}, last {:?})",
        rp.k,
        rp.q,
        rp.q0(),
        rp.q1(),
        cal.feasible_ns.len(),
        cal.feasible_ns.first(),
        cal.feasible_ns.last()
    );
    println!("kappa0(n) <= log2 n from n = {:?}", cal.log_bound_threshold);

    println!("{:>4} {:>6} {:>7} {:>10} {:>12} {:>12}", "n", "kappa", "kappa0", "window", "mu(P_n)", "1-theta^n");
    for &n in cal.feasible_ns.iter().step_by(25) {
        let c = count_controlled(n, &cp, &rp);
        let row = &cal.rows[n - 10];
        println!(
            "{:>4} {:>6} {:>7} {:>4}..{:<4} {:>12.6} {:>12.6}",
            n,
            row.kappa,
            row.kappa0,
            row.window_lo,
            row.window_hi,
            c.measure_f64(),
            1.0 - theta.powi(n as i32)
        );
    }

    let violations: Vec<usize> = cal
        .feasible_ns
        .iter()
        .copied()
        .filter(|&n| count_controlled(n, &cp, &rp).measure_f64() < 1.0 - theta.powi(n as i32))
        .collect();
    println!("feasible n with mu(P_n) < 1 - theta^n: {violations:?}");

    let loose = henon_renorm::combinatorics::RegimeParams::new(0.9, 2.0, 0.5)?;
    for n in [10, 14, 18] {
        let dp = count_controlled(n, &cp, &loose);
        let bf = count_controlled_brute_force(n, &cp, &loose);
        let rule = ControlRule::new(n, &cp, &loose);
        let rec = if n <= 14 {
            let set = recursion_set(n, &cp, &loose);
            let differ = (0..1u64 << n).filter(|&w| set[w as usize] != rule.accepts_index(w)).count();
            format!("{differ} words differ from the push-up construction")
        } else {
            String::new()
        };
        println!("n = {n}: dp {} brute force {bf}  {rec}", dp.count);
    }
    Ok(())
}
