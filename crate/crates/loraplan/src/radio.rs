//! LoRa radio physics: the link-budget equation, receiver sensitivity,
//! packet time-on-air, data rate, duty-cycle spacing and per-transmission
//! energy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::site::{CodingRate, SiteConfig};

pub const SF_MIN: u8 = 7;
pub const SF_MAX: u8 = 12;
pub const TXPOWER_MIN_DBM: u8 = 2;
pub const TXPOWER_MAX_DBM: u8 = 20;

/// Framing assumed when the planner compares configurations and accounts
/// energy: a 20-byte payload with an 8-symbol preamble, explicit header and
/// CRC.
pub const PLANNING_PAYLOAD_BYTES: u8 = 20;
pub const DEFAULT_PREAMBLE_SYMBOLS: u16 = 8;

/// A complete transmit configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RadioConfig {
    /// Spreading factor in [7, 12].
    pub sf: u8,
    /// Transmit power in [2, 20] dBm.
    pub txpower_dbm: u8,
    pub bandwidth_hz: u32,
    pub coding_rate: CodingRate,
    /// Preamble length in symbols, >= 6.
    pub preamble_symbols: u16,
    /// Payload length in [1, 255] bytes.
    pub payload_bytes: u8,
    pub explicit_header: bool,
    pub crc_on: bool,
}

impl RadioConfig {
    /// Config with the site's bandwidth/coding rate and the planning framing.
    pub fn new(sf: u8, txpower_dbm: u8, config: &SiteConfig) -> Result<Self> {
        let rc = Self {
            sf,
            txpower_dbm,
            bandwidth_hz: config.bandwidth_hz,
            coding_rate: config.coding_rate,
            preamble_symbols: DEFAULT_PREAMBLE_SYMBOLS,
            payload_bytes: PLANNING_PAYLOAD_BYTES,
            explicit_header: true,
            crc_on: true,
        };
        rc.validate()?;
        Ok(rc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(SF_MIN..=SF_MAX).contains(&self.sf) {
            return Err(Error::Domain(format!(
                "spreading factor {} outside [{SF_MIN}, {SF_MAX}]",
                self.sf
            )));
        }
        if !(TXPOWER_MIN_DBM..=TXPOWER_MAX_DBM).contains(&self.txpower_dbm) {
            return Err(Error::Domain(format!(
                "TxPower {} dBm outside [{TXPOWER_MIN_DBM}, {TXPOWER_MAX_DBM}]",
                self.txpower_dbm
            )));
        }
        if self.preamble_symbols < 6 {
            return Err(Error::Domain("preamble must be at least 6 symbols".into()));
        }
        if self.payload_bytes == 0 {
            return Err(Error::Domain("payload must be at least 1 byte".into()));
        }
        Ok(())
    }

    /// Symbol duration 2^sf / bandwidth, seconds.
    pub fn symbol_time_s(&self) -> f64 {
        f64::from(1u32 << self.sf) / f64::from(self.bandwidth_hz)
    }

    /// Low-data-rate optimization engages when symbols last 16 ms or longer;
    /// derived, never stored.
    pub fn low_data_rate_optimize(&self) -> bool {
        self.symbol_time_s() >= 0.016
    }
}

/// Uplink feasibility snapshot for one link and configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkReport {
    pub rssi_dbm: f64,
    pub sensitivity_dbm: f64,
    /// rssi - sensitivity.
    pub snr_margin_db: f64,
    /// snr_margin_db >= the configured link margin.
    pub feasible: bool,
}

/// Received signal strength: TxPower + sender gain + receiver gain - path
/// loss. Exact and unclamped.
pub fn rssi(txpower_dbm: f64, g_s_dbi: f64, g_r_dbi: f64, path_loss_db: f64) -> f64 {
    txpower_dbm + g_s_dbi + g_r_dbi - path_loss_db
}

/// Demodulation SNR limit per spreading factor, dB.
fn snr_limit_db(sf: u8) -> Result<f64> {
    match sf {
        7 => Ok(-7.5),
        8 => Ok(-10.0),
        9 => Ok(-12.5),
        10 => Ok(-15.0),
        11 => Ok(-17.5),
        12 => Ok(-20.0),
        other => Err(Error::Domain(format!(
            "spreading factor {other} outside [{SF_MIN}, {SF_MAX}]"
        ))),
    }
}

/// Receiver sensitivity: -174 + 10 log10(BW) + NF + SNR_limit(sf), dBm.
/// Strictly decreasing in sf.
pub fn sensitivity(sf: u8, bandwidth_hz: u32, noise_figure_db: f64) -> Result<f64> {
    Ok(-174.0 + 10.0 * f64::from(bandwidth_hz).log10() + noise_figure_db + snr_limit_db(sf)?)
}

/// Build a report against the sensitivity-plus-margin threshold.
pub fn link_report(rssi_dbm: f64, sensitivity_dbm: f64, link_margin_db: f64) -> LinkReport {
    let snr_margin_db = rssi_dbm - sensitivity_dbm;
    LinkReport {
        rssi_dbm,
        sensitivity_dbm,
        snr_margin_db,
        feasible: snr_margin_db >= link_margin_db,
    }
}

/// Packet duration in seconds for the standard LoRa framing.
///
/// A zero payload is treated as the minimum legal 1 byte.
pub fn time_on_air(config: &RadioConfig) -> f64 {
    let t_sym = config.symbol_time_s();
    let payload = f64::from(config.payload_bytes.max(1));
    let sf = f64::from(config.sf);
    let de = if config.low_data_rate_optimize() {
        1.0
    } else {
        0.0
    };
    let ih = if config.explicit_header { 0.0 } else { 1.0 };
    let crc = if config.crc_on { 1.0 } else { 0.0 };

    let numerator = 8.0 * payload - 4.0 * sf + 28.0 + 16.0 * crc - 20.0 * ih;
    let denominator = 4.0 * (sf - 2.0 * de);
    let cr_denominator = f64::from(config.coding_rate.denominator());
    let n_payload = 8.0 + ((numerator / denominator).ceil() * cr_denominator).max(0.0);

    (f64::from(config.preamble_symbols) + 4.25 + n_payload) * t_sym
}

/// Raw bit rate sf * (BW / 2^sf) * (4 / CR_denominator), bits per second.
pub fn data_rate(sf: u8, bandwidth_hz: u32, coding_rate: CodingRate) -> f64 {
    f64::from(sf) * (f64::from(bandwidth_hz) / f64::from(1u32 << sf)) * 4.0
        / f64::from(coding_rate.denominator())
}

/// Minimum start-to-start spacing implied by a duty-cycle limit, seconds.
pub fn duty_cycle_min_interval(toa_s: f64, duty_cycle_limit: f64) -> f64 {
    toa_s / duty_cycle_limit
}

/// Energy of one transmission in millijoules: ToA * current(TxPower) * Vcc.
pub fn energy_per_tx(toa_s: f64, txpower_dbm: u8, config: &SiteConfig) -> Result<f64> {
    let current_ma = config.tx_current_table.get(&txpower_dbm).ok_or_else(|| {
        Error::Config(format!(
            "TxPower {txpower_dbm} dBm missing from tx_current_table"
        ))
    })?;
    Ok(toa_s * current_ma * config.supply_voltage_v)
}
