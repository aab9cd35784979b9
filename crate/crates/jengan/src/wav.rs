//! Canonical RIFF/WAVE reader and writer for 16-bit PCM.
//!
//! Samples are normalized by 32768 on read and rounded to the nearest code on
//! write, so a round trip is exact up to half a quantization step (one step
//! at full scale, where +1.0 clips to 32767).

use std::fs;
use std::path::Path;

use jengan_core::Signal;

use crate::{Error, Result};

const PCM: u16 = 1;
const SCALE: f64 = 32768.0;

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedWav(msg.into())
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

struct Format {
    channels: u16,
    sample_rate: u32,
}

fn parse_fmt(body: &[u8]) -> Result<Format> {
    if body.len() < 16 {
        return Err(malformed(format!("fmt chunk of {} bytes", body.len())));
    }
    let tag = u16_at(body, 0);
    let channels = u16_at(body, 2);
    let sample_rate = u32_at(body, 4);
    let block_align = u16_at(body, 12);
    let bits = u16_at(body, 14);
    if tag != PCM {
        return Err(Error::UnsupportedWav(format!("format tag {tag:#06x} (only PCM)")));
    }
    if bits != 16 {
        return Err(Error::UnsupportedWav(format!("{bits}-bit samples (only 16-bit)")));
    }
    if channels == 0 || sample_rate == 0 || block_align != 2 * channels {
        return Err(malformed(format!("{channels} channels at {sample_rate} Hz, block align {block_align}")));
    }
    Ok(Format { channels, sample_rate })
}

/// Parses a complete WAV file image.
pub fn decode(bytes: &[u8]) -> Result<Signal> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(malformed("missing RIFF/WAVE preamble"));
    }
    let mut at = 12;
    let mut format = None;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let size = u32_at(bytes, at + 4) as usize;
        let body_start = at + 8;
        let Some(body) = bytes.get(body_start..body_start + size) else {
            return Err(malformed(format!(
                "chunk {:?} declares {size} bytes, {} remain",
                String::from_utf8_lossy(id),
                bytes.len() - body_start
            )));
        };
        match id {
            b"fmt " => format = Some(parse_fmt(body)?),
            b"data" => {
                let fmt = format.ok_or_else(|| malformed("data chunk before fmt chunk"))?;
                return samples(body, fmt);
            }
            _ => {}
        }
        // chunks are padded to an even size
        at = body_start + size + (size & 1);
    }
    Err(malformed("no data chunk"))
}

fn samples(body: &[u8], fmt: Format) -> Result<Signal> {
    let channels = fmt.channels as usize;
    if !body.len().is_multiple_of(2 * channels) {
        return Err(malformed(format!("data chunk of {} bytes is not whole frames", body.len())));
    }
    let frames = body.len() / (2 * channels);
    let mut data = vec![0.0; frames * channels];
    for (i, pair) in body.chunks_exact(2).enumerate() {
        let v = i16::from_le_bytes([pair[0], pair[1]]);
        data[(i % channels) * frames + i / channels] = f64::from(v) / SCALE;
    }
    Ok(Signal::new(channels, f64::from(fmt.sample_rate), data)?)
}

fn quantize(v: f64) -> i16 {
    (v * SCALE).round().clamp(-SCALE, SCALE - 1.0) as i16
}

/// Encodes a signal as a canonical 44-byte-header PCM WAV image.
pub fn encode(x: &Signal) -> Result<Vec<u8>> {
    let rate = x.sample_rate();
    if rate.fract() != 0.0 || !(1.0..=f64::from(u32::MAX)).contains(&rate) {
        return Err(Error::UnsupportedWav(format!("sample rate {rate} is not a positive integer")));
    }
    let channels = u16::try_from(x.channels()).map_err(|_| Error::UnsupportedWav("too many channels".into()))?;
    let frames = x.len();
    let data_len = u32::try_from(2 * frames * x.channels())
        .ok()
        .filter(|n| *n <= u32::MAX - 36)
        .ok_or_else(|| Error::UnsupportedWav("signal too long for a RIFF file".into()))?;
    let rate = rate as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * 2 * u32::from(channels)).to_le_bytes());
    out.extend_from_slice(&(2 * channels).to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for t in 0..frames {
        for c in 0..x.channels() {
            out.extend_from_slice(&quantize(x.channel(c)[t]).to_le_bytes());
        }
    }
    Ok(out)
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    decode(&fs::read(path).map_err(Error::io(path))?)
}

pub fn write_wav(path: impl AsRef<Path>, x: &Signal) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(x)?).map_err(Error::io(path))
}
