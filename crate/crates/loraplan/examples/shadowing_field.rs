//! The seeded shadowing field: per-cell Gaussian draws that are identical
//! across runs, platforms and evaluation orders.
//!
//! ```bash
//! cargo run --example shadowing_field
//! ```

use loraplan::propagation::shadowing_sample;

fn main() {
    let seed = 42;
    let sigma = 4.0;

    println!("shadowing draws (dB), seed {seed}, sigma {sigma} dB:\n");
    for j in (0..12).rev() {
        let row: Vec<String> = (0..12)
            .map(|i| format!("{:>6.2}", shadowing_sample((i, j), seed, sigma)))
            .collect();
        println!("  {}", row.join(" "));
    }

    // The field is a pure function of (seed, i, j): re-evaluating in any
    // order reproduces it bit for bit.
    let forward: Vec<u64> = (0..100)
        .map(|k| shadowing_sample((k, k), seed, sigma).to_bits())
        .collect();
    let backward: Vec<u64> = (0..100)
        .rev()
        .map(|k| shadowing_sample((k, k), seed, sigma).to_bits())
        .rev()
        .collect();
    assert_eq!(forward, backward);
    println!("\nre-evaluation in reverse order is bit-identical");

    let n = 200_000u32;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for k in 0..n {
        let s = shadowing_sample((k % 500, k / 500), seed, sigma);
        sum += s;
        sum_sq += s * s;
    }
    let mean = sum / f64::from(n);
    let stddev = (sum_sq / f64::from(n) - mean * mean).sqrt();
    println!("{n} draws: mean {mean:.4} dB, stddev {stddev:.4} dB");
}
