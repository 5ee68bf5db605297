//! The SITB container: one feature matrix plus its labels.
//!
//! ```text
//! 0..4    magic "SITB"
//! 4       version (1)
//! 5       dtype (1 = f32 little-endian)
//! 6..8    reserved, zero
//! 8..16   n, u64 LE
//! 16..24  d, u64 LE
//! 24..    n*d f32 LE, row-major
//!         n, u64 LE (echo of the header count)
//!         n labels, u32 LE
//! ```

use site_core::{FeatureMatrix, LabelVector};
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"SITB";
pub const VERSION: u8 = 1;
pub const DTYPE_F32: u8 = 1;
pub const HEADER_LEN: usize = 24;
pub const ECHO_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("truncated header: {0} bytes, need 24")]
    TruncatedHeader(usize),
    #[error("bad magic {0:02x?}, expected \"SITB\"")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("unsupported dtype {0}")]
    UnsupportedDtype(u8),
    #[error("reserved bytes not zero: {0:02x?}")]
    ReservedBytes([u8; 2]),
    #[error("too few samples: n = {0}, need at least 2")]
    TooFewSamples(u64),
    #[error("zero dimension: d = 0")]
    ZeroDimension,
    #[error("size overflow for n = {n}, d = {d}")]
    SizeOverflow { n: u64, d: u64 },
    #[error("truncated payload: {found} bytes, header implies at least {expected}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("corrupt length: trailing count {echo} does not match header n = {n}")]
    CorruptLength { n: u64, echo: u64 },
    #[error("label count mismatch: expected {expected}, found {found}")]
    LabelCountMismatch { expected: usize, found: usize },
    #[error("trailing bytes: {0} beyond the label block")]
    TrailingBytes(usize),
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("too few classes: labels cover {0}, need at least 2")]
    TooFewClasses(usize),
    #[error("class {class} occurs {count} time(s), need at least 2")]
    ClassTooRare { class: u32, count: usize },
}

impl FormatError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Self::TruncatedHeader(_) => "truncated_header",
            Self::BadMagic(_) => "bad_magic",
            Self::UnsupportedVersion(_) => "unsupported_version",
            Self::UnsupportedDtype(_) => "unsupported_dtype",
            Self::ReservedBytes(_) => "reserved_bytes",
            Self::TooFewSamples(_) => "too_few_samples",
            Self::ZeroDimension => "zero_dimension",
            Self::SizeOverflow { .. } => "size_overflow",
            Self::TruncatedPayload { .. } => "truncated_payload",
            Self::CorruptLength { .. } => "corrupt_length",
            Self::LabelCountMismatch { .. } => "label_count_mismatch",
            Self::TrailingBytes(_) => "trailing_bytes",
            Self::NonFinite { .. } => "non_finite",
            Self::TooFewClasses(_) => "too_few_classes",
            Self::ClassTooRare { .. } => "class_too_rare",
        }
    }
}

/// Exact encoded size of an `n x d` f32 file.
pub fn encoded_len(n: usize, d: usize) -> Option<usize> {
    n.checked_mul(d)?
        .checked_mul(4)?
        .checked_add(HEADER_LEN + ECHO_LEN)?
        .checked_add(n.checked_mul(4)?)
}

pub fn encode(features: &FeatureMatrix, labels: &LabelVector) -> Result<Vec<u8>, FormatError> {
    let (n, d) = (features.n(), features.d());
    if labels.len() != n {
        return Err(FormatError::LabelCountMismatch {
            expected: n,
            found: labels.len(),
        });
    }
    let mut out = Vec::with_capacity(encoded_len(n, d).ok_or(FormatError::SizeOverflow {
        n: n as u64,
        d: d as u64,
    })?);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&[VERSION, DTYPE_F32, 0, 0]);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&(d as u64).to_le_bytes());
    for v in features.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for l in labels.labels() {
        out.extend_from_slice(&l.to_le_bytes());
    }
    Ok(out)
}

fn u64_at(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8-byte slice"))
}

/// Parsed header fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub n: usize,
    pub d: usize,
}

pub fn decode_header(bytes: &[u8]) -> Result<Header, FormatError> {
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::TruncatedHeader(bytes.len()));
    }
    let magic: [u8; 4] = bytes[0..4].try_into().expect("4-byte slice");
    if magic != MAGIC {
        return Err(FormatError::BadMagic(magic));
    }
    if bytes[4] != VERSION {
        return Err(FormatError::UnsupportedVersion(bytes[4]));
    }
    if bytes[5] != DTYPE_F32 {
        return Err(FormatError::UnsupportedDtype(bytes[5]));
    }
    if bytes[6] != 0 || bytes[7] != 0 {
        return Err(FormatError::ReservedBytes([bytes[6], bytes[7]]));
    }
    let (n, d) = (u64_at(bytes, 8), u64_at(bytes, 16));
    if n < 2 {
        return Err(FormatError::TooFewSamples(n));
    }
    if d == 0 {
        return Err(FormatError::ZeroDimension);
    }
    let overflow = FormatError::SizeOverflow { n, d };
    let n_us = usize::try_from(n).map_err(|_| overflow.clone())?;
    let d_us = usize::try_from(d).map_err(|_| overflow.clone())?;
    encoded_len(n_us, d_us).ok_or(overflow)?;
    Ok(Header { n: n_us, d: d_us })
}

/// Decodes and validates a whole file. Ids on the returned values are empty.
pub fn decode(bytes: &[u8]) -> Result<(FeatureMatrix, LabelVector), FormatError> {
    let Header { n, d } = decode_header(bytes)?;
    let payload_end = HEADER_LEN + n * d * 4;
    let echo_end = payload_end + ECHO_LEN;
    if bytes.len() < echo_end {
        return Err(FormatError::TruncatedPayload {
            expected: echo_end,
            found: bytes.len(),
        });
    }
    let echo = u64_at(bytes, payload_end);
    if echo != n as u64 {
        return Err(FormatError::CorruptLength { n: n as u64, echo });
    }
    let label_bytes = bytes.len() - echo_end;
    if label_bytes < n * 4 {
        return Err(FormatError::LabelCountMismatch {
            expected: n,
            found: label_bytes / 4,
        });
    }
    if label_bytes > n * 4 {
        return Err(FormatError::TrailingBytes(label_bytes - n * 4));
    }

    let values: Vec<f32> = bytes[HEADER_LEN..payload_end]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
        .collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(FormatError::NonFinite {
            row: i / d,
            col: i % d,
        });
    }
    let labels: Vec<u32> = bytes[echo_end..]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4-byte chunk")))
        .collect();
    let classes = labels.iter().max().map_or(0, |&m| m as usize + 1);
    if classes < 2 {
        return Err(FormatError::TooFewClasses(classes));
    }
    let mut counts = vec![0usize; classes];
    for &l in &labels {
        counts[l as usize] += 1;
    }
    if let Some((class, &count)) = counts.iter().enumerate().find(|(_, &c)| c < 2) {
        return Err(FormatError::ClassTooRare {
            class: class as u32,
            count,
        });
    }
    let features = FeatureMatrix::new("", "", n, d, values).expect("validated above");
    let labels = LabelVector::new("", labels).expect("validated above");
    Ok((features, labels))
}
