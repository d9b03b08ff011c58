//! Channel dumps.
//!
//! Binary layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `SATB` |
//! | 4 | `u32` version, currently 1 |
//! | 12 | `u32` M, B, N |
//! | 16·M·B·N | `(f64 re, f64 im)` per entry, `(m, b, antenna)` row-major |
//!
//! The link budget lives in a TOML sidecar next to the dump
//! (`<dump>.toml`) with keys `power`, `noise_var` and `sigma_ch`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use satcts_core::environment::{ChannelState, Perturbation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"SATB";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed header: {0}")]
    Header(String),
    #[error("dimension mismatch: header promises {expected} entries, file holds {found}")]
    Dimensions { expected: usize, found: usize },
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("sidecar {path}: {message}")]
    Sidecar { path: PathBuf, message: String },
    #[error(transparent)]
    Channel(#[from] satcts_core::Error),
}

/// Link budget stored beside a dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    /// Transmit power `p_b`, the same at every station.
    pub power: f64,
    /// Receiver noise variance `sigma_m^2`, the same at every UE.
    pub noise_var: f64,
    /// Absolute perturbation std.
    pub sigma_ch: f64,
}

pub fn sidecar_path(dump: &Path) -> PathBuf {
    let mut s = dump.as_os_str().to_owned();
    s.push(".toml");
    PathBuf::from(s)
}

/// Raw header and entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDump {
    pub ues: usize,
    pub stations: usize,
    pub antennas: usize,
    pub entries: Vec<Complex64>,
}

impl ChannelDump {
    pub fn parse(bytes: &[u8]) -> Result<Self, DumpError> {
        if bytes.len() < 20 {
            return Err(DumpError::Header(format!("{} bytes, need 20", bytes.len())));
        }
        if &bytes[..4] != MAGIC {
            return Err(DumpError::Header("bad magic".into()));
        }
        let mut r = &bytes[4..];
        let word = |r: &mut &[u8]| r.read_u32::<LittleEndian>().expect("length checked");
        let version = word(&mut r);
        if version != VERSION {
            return Err(DumpError::Header(format!("unsupported version {version}")));
        }
        let (m, b, n) = (
            word(&mut r) as usize,
            word(&mut r) as usize,
            word(&mut r) as usize,
        );
        if m == 0 || b == 0 || n == 0 {
            return Err(DumpError::Header(format!("zero dimension in {m}x{b}x{n}")));
        }
        let expected = m
            .checked_mul(b)
            .and_then(|v| v.checked_mul(n))
            .ok_or_else(|| DumpError::Header("dimensions overflow".into()))?;
        if !r.len().is_multiple_of(16) || r.len() / 16 != expected {
            return Err(DumpError::Dimensions {
                expected,
                found: r.len() / 16,
            });
        }
        let mut entries = Vec::with_capacity(expected);
        for i in 0..expected {
            let re = r.read_f64::<LittleEndian>().expect("length checked");
            let im = r.read_f64::<LittleEndian>().expect("length checked");
            if !(re.is_finite() && im.is_finite()) {
                return Err(DumpError::NonFinite(i));
            }
            entries.push(Complex64::new(re, im));
        }
        Ok(ChannelDump {
            ues: m,
            stations: b,
            antennas: n,
            entries,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 16 * self.entries.len());
        out.extend_from_slice(MAGIC);
        for w in [
            VERSION,
            self.ues as u32,
            self.stations as u32,
            self.antennas as u32,
        ] {
            out.write_u32::<LittleEndian>(w).expect("vec write");
        }
        for z in &self.entries {
            out.write_f64::<LittleEndian>(z.re).expect("vec write");
            out.write_f64::<LittleEndian>(z.im).expect("vec write");
        }
        out
    }
}

fn read_all(path: &Path) -> Result<Vec<u8>, DumpError> {
    let mut buf = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|source| DumpError::Io {
            path: path.to_owned(),
            source,
        })?;
    Ok(buf)
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar, DumpError> {
    let text = fs::read_to_string(path).map_err(|source| DumpError::Io {
        path: path.to_owned(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| DumpError::Sidecar {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Loads a dump and its sidecar into a channel state.
pub fn load_channel_dump(path: &Path) -> Result<ChannelState, DumpError> {
    let dump = ChannelDump::parse(&read_all(path)?)?;
    let side = read_sidecar(&sidecar_path(path))?;
    let state = ChannelState::from_mean(dump.ues, dump.stations, dump.antennas, dump.entries)?
        .with_link_budget(
            vec![side.power; dump.stations],
            vec![side.noise_var; dump.ues],
        )?
        .with_perturbation(Perturbation::Absolute(side.sigma_ch))?;
    Ok(state)
}

/// Writes the mean channel of `state` and a sidecar. The sidecar records
/// the first station's power, first UE's noise and first link's sigma.
pub fn save_channel_dump(path: &Path, state: &ChannelState) -> Result<(), DumpError> {
    let dump = ChannelDump {
        ues: state.ues(),
        stations: state.stations(),
        antennas: state.antennas(),
        entries: state.mean_entries().to_vec(),
    };
    let io = |p: &Path| {
        let p = p.to_owned();
        move |source| DumpError::Io { path: p, source }
    };
    fs::File::create(path)
        .and_then(|mut f| f.write_all(&dump.to_bytes()))
        .map_err(io(path))?;
    let side = Sidecar {
        power: state.power(0),
        noise_var: state.noise(0),
        sigma_ch: state.sigma(0, 0),
    };
    let sp = sidecar_path(path);
    let text = toml::to_string(&side).expect("plain struct serializes");
    fs::write(&sp, text).map_err(io(&sp))?;
    Ok(())
}
