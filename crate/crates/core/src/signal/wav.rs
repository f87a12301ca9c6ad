//! RIFF/WAVE parsing for 16-bit mono PCM recordings.

use crate::error::SignalError;

/// Raw decode result: sample rate plus amplitudes scaled to [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct WavData {
    pub sample_rate: u32,
    pub samples: Vec<f64>,
}

const PCM_FORMAT: u16 = 1;

fn read_u32(bytes: &[u8], at: usize) -> Option<u32> {
    bytes.get(at..at + 4).map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
}

fn read_u16(bytes: &[u8], at: usize) -> Option<u16> {
    bytes.get(at..at + 2).map(|b| u16::from_le_bytes([b[0], b[1]]))
}

/// Parse a RIFF/WAVE container holding 16-bit signed little-endian mono PCM.
///
/// Amplitudes are divided by 32768 (not the per-record maximum) so relative
/// loudness is preserved across recordings.
pub fn parse_wav(bytes: &[u8]) -> Result<WavData, SignalError> {
    if bytes.len() < 12 {
        return Err(SignalError::MalformedHeader("file shorter than RIFF header".into()));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(SignalError::MalformedHeader("missing RIFF magic".into()));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(SignalError::MalformedHeader("missing WAVE marker".into()));
    }

    let mut pos = 12;
    let mut fmt: Option<(u16, u16, u32, u16)> = None; // (format, channels, rate, bits)
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = read_u32(bytes, pos + 4)
            .ok_or_else(|| SignalError::MalformedHeader("truncated chunk header".into()))? as usize;
        let body_start = pos + 8;
        if body_start + size > bytes.len() {
            return Err(SignalError::MalformedHeader(format!(
                "chunk {:?} overruns file",
                String::from_utf8_lossy(id)
            )));
        }
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(SignalError::MalformedHeader("fmt chunk too small".into()));
                }
                let format = read_u16(bytes, body_start).unwrap();
                let channels = read_u16(bytes, body_start + 2).unwrap();
                let rate = read_u32(bytes, body_start + 4).unwrap();
                let bits = read_u16(bytes, body_start + 14).unwrap();
                fmt = Some((format, channels, rate, bits));
            }
            b"data" => {
                data = Some(&bytes[body_start..body_start + size]);
            }
            _ => {} // skip ancillary chunks (LIST, fact, ...)
        }
        // Chunk bodies are word-aligned; odd sizes carry a pad byte.
        pos = body_start + size + (size & 1);
    }

    let (format, channels, rate, bits) =
        fmt.ok_or_else(|| SignalError::MalformedHeader("no fmt chunk".into()))?;
    let data = data.ok_or_else(|| SignalError::MalformedHeader("no data chunk".into()))?;

    if format != PCM_FORMAT {
        return Err(SignalError::UnsupportedEncoding(format!("format code {format}, want PCM")));
    }
    if bits != 16 {
        return Err(SignalError::UnsupportedEncoding(format!("{bits}-bit samples, want 16")));
    }
    if channels != 1 {
        return Err(SignalError::UnsupportedEncoding(format!("{channels} channels, want mono")));
    }
    if rate == 0 {
        return Err(SignalError::MalformedHeader("zero sample rate".into()));
    }

    let samples: Vec<f64> = data
        .chunks_exact(2)
        .map(|pair| i16::from_le_bytes([pair[0], pair[1]]) as f64 / 32768.0)
        .collect();

    Ok(WavData { sample_rate: rate, samples })
}

/// Serialize 16-bit mono PCM. Lives next to the parser for the round-trip
/// property test and for fabricating fixtures; the production pipeline only
/// reads audio.
#[doc(hidden)]
pub fn write_wav16(sample_rate: u32, samples: &[i16]) -> Vec<u8> {
    let data_len = samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for s in samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_by_32768() {
        let bytes = write_wav16(2000, &[0, 16384, -16384, 32767]);
        let wav = parse_wav(&bytes).unwrap();
        assert_eq!(wav.sample_rate, 2000);
        assert_eq!(wav.samples, vec![0.0, 0.5, -0.5, 32767.0 / 32768.0]);
    }

    #[test]
    fn rejects_wrong_magic() {
        let mut bytes = write_wav16(2000, &[1, 2, 3]);
        bytes[3] = b'X'; // "RIFX"
        assert!(matches!(parse_wav(&bytes), Err(SignalError::MalformedHeader(_))));
    }

    #[test]
    fn rejects_stereo_and_wrong_depth() {
        let mut bytes = write_wav16(2000, &[1, 2, 3, 4]);
        bytes[22] = 2; // channel count
        assert!(matches!(parse_wav(&bytes), Err(SignalError::UnsupportedEncoding(_))));

        let mut bytes = write_wav16(2000, &[1, 2, 3, 4]);
        bytes[34] = 8; // bits per sample
        assert!(matches!(parse_wav(&bytes), Err(SignalError::UnsupportedEncoding(_))));

        let mut bytes = write_wav16(2000, &[1, 2]);
        bytes[20] = 3; // IEEE float format code
        assert!(matches!(parse_wav(&bytes), Err(SignalError::UnsupportedEncoding(_))));
    }

    #[test]
    fn skips_ancillary_chunks() {
        // RIFF / junk chunk / fmt / data
        let inner = write_wav16(8000, &[5, -5]);
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"RIFF");
        bytes.extend_from_slice(&0u32.to_le_bytes()); // size ignored by parser
        bytes.extend_from_slice(b"WAVE");
        bytes.extend_from_slice(b"LIST");
        bytes.extend_from_slice(&3u32.to_le_bytes());
        bytes.extend_from_slice(b"abc\0"); // odd size + pad byte
        bytes.extend_from_slice(&inner[12..]);
        let wav = parse_wav(&bytes).unwrap();
        assert_eq!(wav.sample_rate, 8000);
        assert_eq!(wav.samples.len(), 2);
    }
}
