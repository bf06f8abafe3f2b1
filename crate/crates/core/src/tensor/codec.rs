//! JSON form of a sign tensor:
//! `{"dims":[n₁,…,n_d],"signs":"<base64>"}`.
//!
//! `signs` is standard padded base64 of a bit array with one bit per entry in
//! row-major order: entry `i` is bit `7 − i mod 8` of byte `i / 8` (most
//! significant bit first), `1 ↦ +1`, `0 ↦ −1`. Unused trailing bits are zero.

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Shape, SignTensor};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Wire {
    dims: Vec<usize>,
    signs: String,
}

pub fn pack_signs(signs: &[i8]) -> Vec<u8> {
    let mut bytes = vec![0u8; signs.len().div_ceil(8)];
    for (i, &s) in signs.iter().enumerate() {
        if s > 0 {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    bytes
}

pub fn unpack_signs(bytes: &[u8], len: usize) -> Result<Vec<i8>> {
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Decode(format!(
            "{} bytes for {len} entries, expected {}",
            bytes.len(),
            len.div_ceil(8)
        )));
    }
    if len % 8 != 0 {
        let unused = 0xffu8 >> (len % 8);
        if bytes[bytes.len() - 1] & unused != 0 {
            return Err(Error::Decode("padding bits are not zero".into()));
        }
    }
    Ok((0..len)
        .map(|i| if bytes[i / 8] & (0x80 >> (i % 8)) != 0 { 1 } else { -1 })
        .collect())
}

impl SignTensor {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sign tensor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Decode(e.to_string()))
    }
}

impl Serialize for SignTensor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            dims: self.dims().to_vec(),
            signs: STANDARD.encode(pack_signs(self.signs())),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignTensor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = Wire::deserialize(deserializer)?;
        let shape = Shape::new(wire.dims).map_err(D::Error::custom)?;
        let bytes = STANDARD.decode(wire.signs.as_bytes()).map_err(D::Error::custom)?;
        let signs = unpack_signs(&bytes, shape.len()).map_err(D::Error::custom)?;
        SignTensor::new(shape, signs).map_err(D::Error::custom)
    }
}
