//! Newline-delimited ledger files.
//!
//! ```text
//! # spectroqsim ledger v1
//! # protocol = pqp
//! # config_hash = <sha-256 hex>
//! #| <resolved config, one TOML line per row>
//! protocol,t1,t2,phase,slot,observable,value,seed,config_hash
//! pqp,0,0,0,0,X_pr,0.0123,1234567890,0a1b2c3d4e5f6071
//! ```
//!
//! Records carry the first 16 hex digits of the config hash. Anything after
//! the last newline is an interrupted write and is ignored on load.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use spectroqsim_core::ledger::{point_seed, LedgerKey, LedgerShape, MeasurementLedger};
use spectroqsim_core::protocol::{Block, Observable, Protocol};

use crate::config::{parse_config, RunConfig};
use crate::error::{io_err, Error, Result};

pub const LEDGER_VERSION: u32 = 1;
pub const SHORT_HASH_LEN: usize = 16;
pub const COLUMNS: [&str; 9] = [
    "protocol",
    "t1",
    "t2",
    "phase",
    "slot",
    "observable",
    "value",
    "seed",
    "config_hash",
];

const MAGIC: &str = "# spectroqsim ledger v";
const CONFIG_PREFIX: &str = "#| ";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Record {
    protocol: String,
    t1: usize,
    t2: usize,
    phase: usize,
    slot: usize,
    observable: String,
    value: f64,
    seed: u64,
    config_hash: String,
}

/// Ledger dimensions implied by a configuration.
pub fn ledger_shape(cfg: &RunConfig) -> Result<LedgerShape> {
    let protocol = cfg.protocol()?;
    let n_slots = match protocol {
        Protocol::Sqsp => cfg.grids.t3.map(|t| t.samples).unwrap_or(0),
        Protocol::Pqp => cfg.probes()?.len(),
    };
    Ok(LedgerShape {
        protocol,
        n_phase: cfg.scheme()?.len(),
        n_t1: cfg.grids.t1.samples,
        n_t2: cfg.grids.t2.samples,
        n_slots,
    })
}

/// Appends records to a ledger file through one buffered writer.
pub struct LedgerWriter {
    path: PathBuf,
    out: csv::Writer<BufWriter<File>>,
    protocol: Protocol,
    shape: LedgerShape,
    seed: u64,
    short_hash: String,
}

impl LedgerWriter {
    /// Starts a fresh file, replacing any existing one.
    pub fn create(path: &Path, cfg: &RunConfig) -> Result<Self> {
        let mut f = BufWriter::new(File::create(path).map_err(io_err(path))?);
        write_preamble(&mut f, cfg).map_err(io_err(path))?;
        f.flush().map_err(io_err(path))?;
        Self::wrap(path, f, cfg)
    }

    /// Continues a file whose contents end on a record boundary.
    pub fn append(path: &Path, cfg: &RunConfig) -> Result<Self> {
        let f = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(io_err(path))?;
        Self::wrap(path, BufWriter::new(f), cfg)
    }

    fn wrap(path: &Path, f: BufWriter<File>, cfg: &RunConfig) -> Result<Self> {
        Ok(Self {
            path: path.to_path_buf(),
            out: csv::WriterBuilder::new().has_headers(false).from_writer(f),
            protocol: cfg.protocol()?,
            shape: ledger_shape(cfg)?,
            seed: cfg.seed,
            short_hash: cfg.hash()[..SHORT_HASH_LEN].to_string(),
        })
    }

    pub fn write(&mut self, k: &LedgerKey, value: f64) -> Result<()> {
        let rec = Record {
            protocol: self.protocol.as_str().to_string(),
            t1: k.t1,
            t2: k.t2,
            phase: k.phase,
            slot: k.slot,
            observable: self.shape.observable(k).tag().to_string(),
            value,
            seed: point_seed(self.seed, self.protocol, k),
            config_hash: self.short_hash.clone(),
        };
        self.out.serialize(rec)?;
        Ok(())
    }

    pub fn write_block(&mut self, b: &Block) -> Result<()> {
        for t2 in 0..b.n_t2 {
            for slot in 0..b.n_slots {
                for obs in 0..b.n_obs {
                    let k = LedgerKey {
                        phase: b.phase,
                        t1: b.t1,
                        t2,
                        slot,
                        obs,
                    };
                    self.write(&k, b.value(t2, slot, obs))?;
                }
            }
        }
        Ok(())
    }

    /// Pushes buffered records to disk.
    pub fn flush(&mut self) -> Result<()> {
        self.out.flush().map_err(io_err(&self.path))?;
        Ok(())
    }
}

fn write_preamble(w: &mut impl Write, cfg: &RunConfig) -> std::io::Result<()> {
    writeln!(w, "{MAGIC}{LEDGER_VERSION}")?;
    writeln!(
        w,
        "# protocol = {}",
        cfg.protocol
            .map(|p| Protocol::from(p).as_str())
            .unwrap_or("none")
    )?;
    writeln!(w, "# config_hash = {}", cfg.hash())?;
    for line in cfg.to_toml().lines() {
        writeln!(w, "{CONFIG_PREFIX}{line}")?;
    }
    writeln!(w, "{}", COLUMNS.join(","))
}

/// A ledger as loaded from disk.
#[derive(Debug, Clone)]
pub struct LedgerFile {
    pub config: RunConfig,
    pub hash: String,
    pub ledger: MeasurementLedger,
    /// Bytes after the last newline, dropped as an interrupted write.
    pub dropped_tail: usize,
}

pub fn read_ledger(path: &Path) -> Result<LedgerFile> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let end = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    let body = &bytes[..end];
    let fmt = |line: usize, reason: String| Error::LedgerFormat {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let text = std::str::from_utf8(body).map_err(|e| fmt(0, e.to_string()))?;

    let mut lines = text.lines();
    let version = lines
        .next()
        .and_then(|l| l.strip_prefix(MAGIC))
        .ok_or_else(|| fmt(1, "not a spectroqsim ledger".into()))?;
    if version.trim() != LEDGER_VERSION.to_string() {
        return Err(fmt(1, format!("unsupported ledger version {version}")));
    }
    let mut hash = None;
    let mut config_text = String::new();
    for (i, line) in lines.enumerate() {
        if let Some(row) = line.strip_prefix(CONFIG_PREFIX) {
            config_text.push_str(row);
            config_text.push('\n');
        } else if let Some(h) = line.strip_prefix("# config_hash = ") {
            hash = Some(h.trim().to_string());
        } else if !line.starts_with('#') {
            if line != COLUMNS.join(",") {
                return Err(fmt(
                    i + 2,
                    format!("expected column header `{}`", COLUMNS.join(",")),
                ));
            }
            break;
        }
    }
    let hash = hash.ok_or_else(|| fmt(0, "missing config_hash header".into()))?;
    let config = parse_config(
        &config_text,
        &format!("{} (embedded config)", path.display()),
    )?;
    if config.hash() != hash {
        return Err(Error::HashMismatch {
            expected: hash,
            found: config.hash(),
        });
    }
    let shape = ledger_shape(&config)?;
    let protocol = shape.protocol;
    let short = &hash[..SHORT_HASH_LEN];

    let mut ledger = MeasurementLedger::new(shape);
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(body);
    let headers = rdr.headers()?.clone();
    let mut raw = csv::StringRecord::new();
    while rdr.read_record(&mut raw)? {
        let line = raw.position().map_or(0, |p| p.line() as usize);
        let rec: Record = raw.deserialize(Some(&headers))?;
        if rec.protocol != protocol.as_str() {
            return Err(fmt(
                line,
                format!(
                    "record protocol `{}` in a {} ledger",
                    rec.protocol,
                    protocol.as_str()
                ),
            ));
        }
        if rec.config_hash != short {
            return Err(Error::HashMismatch {
                expected: short.to_string(),
                found: rec.config_hash,
            });
        }
        let obs = Observable::from_tag(&rec.observable)
            .and_then(|o| shape.obs_index(o))
            .ok_or_else(|| {
                fmt(
                    line,
                    format!(
                        "observable `{}` is not measured by {}",
                        rec.observable,
                        protocol.as_str()
                    ),
                )
            })?;
        let k = LedgerKey {
            phase: rec.phase,
            t1: rec.t1,
            t2: rec.t2,
            slot: rec.slot,
            obs,
        };
        if ledger.get(&k).is_some() {
            return Err(fmt(line, format!("duplicate record {k:?}")));
        }
        if rec.seed != point_seed(config.seed, protocol, &k) {
            return Err(fmt(
                line,
                format!("seed of {k:?} does not match the config seed"),
            ));
        }
        ledger.insert(&k, rec.value)?;
    }
    Ok(LedgerFile {
        config,
        hash,
        ledger,
        dropped_tail: bytes.len() - end,
    })
}

/// Rewrites `path` with every complete block of `ledger` in canonical order.
///
/// The new file is written beside the old one and renamed over it, so a
/// crash leaves one of the two intact.
pub fn rewrite_complete_blocks(
    path: &Path,
    cfg: &RunConfig,
    ledger: &MeasurementLedger,
) -> Result<usize> {
    let tmp = path.with_extension("tmp");
    let mut w = LedgerWriter::create(&tmp, cfg)?;
    let s = *ledger.shape();
    let mut blocks = 0;
    for phase in 0..s.n_phase {
        for t1 in 0..s.n_t1 {
            if !ledger.has_block(phase, t1) {
                continue;
            }
            blocks += 1;
            for t2 in 0..s.n_t2 {
                for slot in 0..s.n_slots {
                    for obs in 0..s.n_obs() {
                        let k = LedgerKey {
                            phase,
                            t1,
                            t2,
                            slot,
                            obs,
                        };
                        w.write(&k, ledger.get(&k).expect("complete block"))?;
                    }
                }
            }
        }
    }
    w.flush()?;
    drop(w);
    fs::rename(&tmp, path).map_err(io_err(path))?;
    Ok(blocks)
}
