//! Channel JSON format:
//! `{ "dims": [dA', dB', dA, dB], "choi_re": [...], "choi_im": [...] }`
//! with the Choi entries in row-major order.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BipartiteChannel, ChannelDims};
use crate::error::{Error, Result};
use crate::matcore::HermitianOperator;

#[derive(Serialize, Deserialize)]
struct ChannelFile {
    dims: [usize; 4],
    choi_re: Vec<f64>,
    choi_im: Vec<f64>,
}

impl BipartiteChannel {
    pub fn to_json(&self) -> String {
        let d = self.dims;
        let f = ChannelFile {
            dims: [d.a_in, d.b_in, d.a_out, d.b_out],
            choi_re: self.choi.entries().iter().map(|z| z.re).collect(),
            choi_im: self.choi.entries().iter().map(|z| z.im).collect(),
        };
        serde_json::to_string(&f).expect("plain data serializes")
    }

    /// Parses and validates (CPTP at the constructor tolerance).
    pub fn from_json(text: &str) -> Result<Self> {
        let ch = Self::from_json_unchecked(text)?;
        Self::from_choi(ch.dims, ch.choi)
    }

    /// Parses without the CPTP check, for inspecting invalid files.
    pub fn from_json_unchecked(text: &str) -> Result<Self> {
        let f: ChannelFile = serde_json::from_str(text)?;
        let [a_in, b_in, a_out, b_out] = f.dims;
        let dims = ChannelDims::new(a_in, b_in, a_out, b_out);
        let n = dims.choi_dim();
        if f.choi_re.len() != n * n || f.choi_im.len() != n * n {
            return Err(Error::Format(format!("expected {} Choi entries, got {}/{}", n * n, f.choi_re.len(), f.choi_im.len())));
        }
        let entries = f.choi_re.iter().zip(&f.choi_im).map(|(&re, &im)| Complex64::new(re, im)).collect();
        let choi = HermitianOperator::new(n, entries)?;
        Self::from_choi_unchecked(dims, choi)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
