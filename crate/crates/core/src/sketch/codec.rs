//! Versioned binary encoding of sampler state, so that worker sketches can
//! be shipped and merged elsewhere.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic        4 bytes  "DSKS"
//! version      u16      1
//! flags        u8       bit 0: directed, bit 1: eps given, bit 2: independence cap given
//! n            u64
//! sample_size  u64
//! delta        f64
//! eps          f64      0 unless flag bit 1
//! c1, c2       f64, f64
//! cap          u64      0 unless flag bit 2
//! prime        u64
//! seed         u64
//! independence u64      derived; checked on load
//! levels       u32      derived; checked on load
//! rows         u32      derived; checked on load
//! width        u64      derived; checked on load
//! capacity     u64      derived; checked on load
//! live         i64
//! level_counts levels x i64
//! per level:   u8 present; if 1, rows*width cells of (count i64, id_sum u64, fp_sum u64)
//! ```
//!
//! Levels whose cells are all zero are written as absent, so equal states
//! always encode to equal bytes.

use super::sampler::{LeveledSampler, SamplerConfig};
use super::sparse::Cell;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"DSKS";
pub const FORMAT_VERSION: u16 = 1;

pub fn encode(sampler: &LeveledSampler) -> Vec<u8> {
    let cfg = sampler.config();
    let layout = sampler.layout();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    let flags = cfg.directed as u8
        | (cfg.min_wise_eps.is_some() as u8) << 1
        | (cfg.independence_cap.is_some() as u8) << 2;
    out.push(flags);
    for v in [cfg.n as u64, cfg.sample_size as u64] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in [cfg.delta, cfg.min_wise_eps.unwrap_or(0.0), cfg.c1, cfg.c2] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in [
        cfg.independence_cap.unwrap_or(0) as u64,
        cfg.prime,
        cfg.seed,
        layout.independence as u64,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(layout.levels as u32).to_le_bytes());
    out.extend_from_slice(&(layout.sparse.rows as u32).to_le_bytes());
    out.extend_from_slice(&(layout.sparse.width as u64).to_le_bytes());
    out.extend_from_slice(&(layout.sparse.capacity as u64).to_le_bytes());
    out.extend_from_slice(&sampler.live_edges().to_le_bytes());
    for c in sampler.level_counts() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    for level in sampler.levels() {
        if level.is_zero() {
            out.push(0);
            continue;
        }
        out.push(1);
        for cell in level.cells() {
            out.extend_from_slice(&cell.count.to_le_bytes());
            out.extend_from_slice(&cell.id_sum.to_le_bytes());
            out.extend_from_slice(&cell.fp_sum.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let bytes = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| Error::Format(format!("sketch blob truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(bytes.try_into().expect("slice of length N"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        self.take().map(u16::from_le_bytes)
    }

    fn u32(&mut self) -> Result<u32> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64> {
        self.take().map(u64::from_le_bytes)
    }

    fn i64(&mut self) -> Result<i64> {
        self.take().map(i64::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64> {
        self.take().map(f64::from_le_bytes)
    }
}

pub fn decode(bytes: &[u8]) -> Result<LeveledSampler> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if &r.take::<4>()? != MAGIC {
        return Err(Error::Format("not a sketch blob (bad magic)".into()));
    }
    let version = r.u16()?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported sketch format version {version}"
        )));
    }
    let flags = r.u8()?;
    let n = r.u64()? as usize;
    let sample_size = r.u64()? as usize;
    let delta = r.f64()?;
    let eps = r.f64()?;
    let c1 = r.f64()?;
    let c2 = r.f64()?;
    let cap = r.u64()? as usize;
    let config = SamplerConfig {
        n,
        directed: flags & 1 != 0,
        sample_size,
        delta,
        seed: 0,
        min_wise_eps: (flags & 2 != 0).then_some(eps),
        c1,
        c2,
        independence_cap: (flags & 4 != 0).then_some(cap),
        prime: r.u64()?,
    };
    let config = SamplerConfig {
        seed: r.u64()?,
        ..config
    };
    let layout = config.resolve()?;
    let stored = (
        r.u64()? as usize,
        r.u32()? as usize,
        r.u32()? as usize,
        r.u64()? as usize,
        r.u64()? as usize,
    );
    let derived = (
        layout.independence,
        layout.levels,
        layout.sparse.rows,
        layout.sparse.width,
        layout.sparse.capacity,
    );
    if stored != derived {
        return Err(Error::Format(format!(
            "stored layout {stored:?} disagrees with derived layout {derived:?}"
        )));
    }
    let live = r.i64()?;
    let level_counts = (0..layout.levels)
        .map(|_| r.i64())
        .collect::<Result<Vec<_>>>()?;
    let cells_per_level = layout.sparse.rows * layout.sparse.width;
    let mut cells = Vec::with_capacity(layout.levels);
    for _ in 0..layout.levels {
        match r.u8()? {
            0 => cells.push(None),
            1 => {
                let mut level = Vec::with_capacity(cells_per_level);
                for _ in 0..cells_per_level {
                    level.push(Cell {
                        count: r.i64()?,
                        id_sum: r.u64()?,
                        fp_sum: r.u64()?,
                    });
                }
                cells.push(Some(level));
            }
            other => return Err(Error::Format(format!("bad level marker {other}"))),
        }
    }
    if r.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes",
            bytes.len() - r.pos
        )));
    }
    LeveledSampler::restore(config, live, level_counts, cells)
}
