//! Airtime, data rate and duty-cycle spacing across the SF ladder.
//!
//! ```bash
//! cargo run --example airtime
//! ```

use loraplan::radio::{
    data_rate, duty_cycle_min_interval, energy_per_tx, time_on_air, RadioConfig,
};
use loraplan::site::SiteConfig;

fn main() -> Result<(), loraplan::Error> {
    let config = SiteConfig::default();
    let duty = config.duty_cycle_limit;

    println!("20-byte payload, 125 kHz, CR 4/5, preamble 8, 1% duty cycle\n");
    println!("  SF   time-on-air   data rate    min spacing   energy @14dBm");
    for sf in 7u8..=12 {
        let rc = RadioConfig::new(sf, 14, &config)?;
        let toa = time_on_air(&rc);
        let rate = data_rate(sf, rc.bandwidth_hz, rc.coding_rate);
        let spacing = duty_cycle_min_interval(toa, duty);
        let energy = energy_per_tx(toa, rc.txpower_dbm, &config)?;
        println!(
            "  {sf:>2}   {:>8.2} ms   {:>7.1} bps   {:>8.2} s   {:>8.2} mJ",
            toa * 1000.0,
            rate,
            spacing,
            energy
        );
    }

    println!("\npayload scaling at SF9:");
    for payload in [1u8, 20, 51, 128, 255] {
        let mut rc = RadioConfig::new(9, 14, &config)?;
        rc.payload_bytes = payload;
        println!(
            "  {payload:>3} B -> {:>7.2} ms on air",
            time_on_air(&rc) * 1000.0
        );
    }
    Ok(())
}
