//! Oracle runs that fix the calibrated thresholds in defaults/calibrated.json.
//!
//! Runs every limit-statement verifier at 10x its acceptance truncation and
//! prints the measurements the shipped thresholds were derived from. Slow
//! (minutes); run with --release.

use cyclolab_core::arith::SieveTables;
use cyclolab_core::hp;
use cyclolab_core::ramanujan::{partial_sum_trace, TraceMode, TraceValue};
use cyclolab_core::verify::{self, default_calibration};
use rug::Float;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let cal = default_calibration();

    // ---- S_N(m) decay, m = 1..10, N up to 1e7 ----------------------------
    println!("# pnt_decay: S_N(m) checkpoints (float mode, 128-bit)");
    let schedule = [100u64, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];
    let sieve = SieveTables::build(10_000_000).expect("sieve to 1e7");
    println!("sieve(1e7) built at {:?}", t0.elapsed());
    for m in 1..=10u64 {
        let trace =
            partial_sum_trace(m, 10_000_000, &schedule, TraceMode::Float, 128, &sieve).unwrap();
        let row: Vec<String> = trace
            .checkpoints
            .iter()
            .map(|c| match &c.value {
                TraceValue::Float(x) => format!("{}:{}", c.n, hp::format_sig(x, 6)),
                TraceValue::Exact(_) => unreachable!(),
            })
            .collect();
        println!("m={m}  {}", row.join("  "));
    }
    println!("pnt traces done at {:?}", t0.elapsed());
    drop(sieve);

    // ---- r2 series at I = 1e6 (10x acceptance) and 1e5 (acceptance) ------
    println!("\n# r2_series averaged residuals");
    let sieve = SieveTables::build(2_000_001).expect("sieve to 2e6+1");
    for i_max in [100_000u64, 1_000_000] {
        let r = verify::verify_r2_series(&[1, 2, 3, 5, 7, 25], i_max, 128, &sieve, cal).unwrap();
        println!("I={i_max} -> residual {} details:", r.residual);
        for row in r.details["per_n"].as_array().unwrap() {
            println!(
                "  n={} raw={} averaged={}",
                row["n"], row["raw_residual"], row["averaged_residual"]
            );
        }
    }
    println!("r2 done at {:?}", t0.elapsed());

    // ---- r2 logderiv orders 60 at I = 1e4/1e5 ----------------------------
    println!("\n# r2_logderiv residuals (order 60)");
    for i_max in [10_000u64, 100_000] {
        let r = verify::verify_r2_product_logderiv(60, i_max, 128, &sieve, cal).unwrap();
        println!("I={i_max} -> max residual {}", r.residual);
    }

    // ---- pi/4 at z = 1/2, I = 1e4 (acceptance) and 1e5 (10x) -------------
    println!("\n# pi_over_4 at z = 0.5");
    for i_max in [10_000u64, 100_000] {
        let r = verify::verify_pi_over_4(0.5, i_max, 128, &sieve, cal).unwrap();
        println!(
            "I={i_max} -> |avg - pi/4| = {} raw_ratio={} averaged={}",
            r.residual, r.details["raw_ratio"], r.details["averaged_ratio"]
        );
    }
    drop(sieve);
    println!("pi/4 done at {:?}", t0.elapsed());

    // ---- zeta ratio at z = 1/2, s = 1, I = 1e4 and 1e5 -------------------
    println!("\n# zeta_ratio at z = 0.5, s = 1");
    let sieve = SieveTables::build(100_000).unwrap();
    for i_max in [10_000u64, 100_000] {
        let r = verify::verify_zeta_ratio(0.5, 1.0, i_max, 128, &sieve, cal).unwrap();
        println!(
            "I={i_max} -> |ratio - zeta(2)| = {} ratio={}",
            r.residual, r.details["ratio"]
        );
    }
    drop(sieve);

    // ---- interior convergence at z = 0.3 ---------------------------------
    println!("\n# interior product |P_N(0.3) - 1|");
    let r = verify::verify_interior_product(0.3, &[100, 1_000, 10_000, 100_000], 128, cal).unwrap();
    println!("deviations: {}", r.details["deviations"]);

    // ---- boundary grid interior rows -------------------------------------
    println!("\n# boundary grid max | |P_N| - 1 | on r = 0.1 (dense angles)");
    for n in [100u64, 500, 1000] {
        let rows = cyclolab_core::cyclotomic::boundary_grid(&[n], &[0.1], 128, 128).unwrap();
        let mut worst = Float::new(160);
        for row in &rows {
            let dev = Float::with_val(160, &row.abs_value - &Float::with_val(160, 1)).abs();
            if dev > worst {
                worst = dev;
            }
        }
        println!("N={n}: max deviation {}", hp::format_sig(&worst, 6));
    }

    // ---- boundary spike illustration --------------------------------------
    println!("\n# spike at theta=0, r=0.99, N=500");
    let z = rug::Complex::with_val(192, (0.99, 0.0));
    let pv = cyclolab_core::cyclotomic::truncated_product(500, &z, 128).unwrap();
    println!(
        "|P_500(0.99)| = {}",
        hp::format_sig(&Float::with_val(160, pv.value.abs_ref()), 6)
    );

    println!("\ntotal {:?}", t0.elapsed());
}
