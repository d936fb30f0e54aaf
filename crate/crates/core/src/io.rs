//! State files: a JSON array of exactly eight `[re, im]` pairs in basis order
//! `|000>, |001>, ..., |111>`.

use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::state::PureState3;

/// Parses a state file body. The state is normalized on the way in.
pub fn parse_state(text: &str) -> Result<PureState3> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let entries = value
        .as_array()
        .ok_or_else(|| Error::Parse("expected a JSON array of 8 [re, im] pairs".into()))?;
    if entries.len() != 8 {
        return Err(Error::Parse(format!("expected 8 amplitudes, found {}", entries.len())));
    }
    let mut amp = [Complex64::new(0.0, 0.0); 8];
    for (i, e) in entries.iter().enumerate() {
        let pair = e
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Parse(format!("entry {i}: expected [re, im]")))?;
        let num = |v: &Value| {
            v.as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse(format!("entry {i}: components must be finite numbers")))
        };
        amp[i] = Complex64::new(num(&pair[0])?, num(&pair[1])?);
    }
    PureState3::new(amp)
}

pub fn read_state(path: &Path) -> Result<PureState3> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_state(&text)
}

/// Serializes the amplitudes in the state-file layout.
pub fn state_to_json(state: &PureState3) -> String {
    let pairs: Vec<[f64; 2]> = state.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string(&pairs).expect("finite floats serialize")
}
