//! The AGRN1 binary volume format.
//!
//! ```text
//! offset  size        content
//! 0       5           ASCII "AGRN1"
//! 5       4 × 3       u32 LE grid dims n1, n2, n3
//! 17      4           u32 LE component count C
//! 21      16 × N      f64 LE (re, im) pairs, N = n1·n2·n3·C
//! ```
//!
//! Samples are ordered with the component fastest, then x₁, x₂, x₃: sample
//! `c` of node `(i, j, k)` is pair number `C·(i + n1·(j + n2·k)) + c`.
//! Tensor volumes store the 9 entries of Ĝ row-major (C = 9).

use num_complex::Complex64;

use crate::{Error, Result};

pub const MAGIC: &[u8; 5] = b"AGRN1";
pub const HEADER_LEN: usize = 21;

/// A complex field sampled on a regular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldVolume {
    pub dims: [u32; 3],
    pub components: u32,
    pub data: Vec<Complex64>,
}

fn sample_count(dims: [u32; 3], components: u32) -> Option<usize> {
    let mut n: usize = 1;
    for d in dims.iter().chain(std::iter::once(&components)) {
        n = n.checked_mul(*d as usize)?;
    }
    Some(n)
}

impl FieldVolume {
    pub fn new(dims: [u32; 3], components: u32, data: Vec<Complex64>) -> Result<Self> {
        let expected = sample_count(dims, components)
            .ok_or_else(|| Error::Format(format!("grid {dims:?} x {components} overflows")))?;
        if data.len() != expected {
            return Err(Error::Format(format!(
                "{} samples for dims {dims:?} and {components} components (expected {expected})",
                data.len()
            )));
        }
        Ok(Self { dims, components, data })
    }

    pub fn node_count(&self) -> usize {
        self.dims.iter().map(|&d| d as usize).product()
    }

    /// Linear node index, x₁ fastest.
    pub fn node_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] as usize * (j + self.dims[1] as usize * k)
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> &[Complex64] {
        let c = self.components as usize;
        let start = c * self.node_index(i, j, k);
        &self.data[start..start + c]
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + 16 * self.data.len()
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(MAGIC);
        for d in self.dims {
            out.extend_from_slice(&d.to_le_bytes());
        }
        out.extend_from_slice(&self.components.to_le_bytes());
        for z in &self.data {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[..5] != MAGIC {
            return Err(Error::Format("bad magic, expected AGRN1".into()));
        }
        let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
        let dims = [word(5), word(9), word(13)];
        let components = word(17);
        let count = sample_count(dims, components)
            .and_then(|n| n.checked_mul(16))
            .ok_or_else(|| Error::Format(format!("grid {dims:?} x {components} overflows")))?;
        let payload = &bytes[HEADER_LEN..];
        if payload.len() != count {
            return Err(Error::Format(format!(
                "payload has {} bytes, header implies {count}",
                payload.len()
            )));
        }
        let data = payload
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        Ok(Self { dims, components, data })
    }

    /// CSV mirror: one node per row, x₁ fastest, with node coordinates
    /// `origin + spacing·(i, j, k)`.
    pub fn to_csv(&self, origin: [f64; 3], spacing: [f64; 3]) -> String {
        let c = self.components as usize;
        let mut out = String::from("i,j,k,x1,x2,x3");
        for n in 0..c {
            out.push_str(&format!(",c{n}_re,c{n}_im"));
        }
        out.push('\n');
        let [n1, n2, n3] = self.dims.map(|d| d as usize);
        for k in 0..n3 {
            for j in 0..n2 {
                for i in 0..n1 {
                    let x = [
                        origin[0] + spacing[0] * i as f64,
                        origin[1] + spacing[1] * j as f64,
                        origin[2] + spacing[2] * k as f64,
                    ];
                    out.push_str(&format!("{i},{j},{k},{:e},{:e},{:e}", x[0], x[1], x[2]));
                    for z in self.node(i, j, k) {
                        out.push_str(&format!(",{:e},{:e}", z.re, z.im));
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}
