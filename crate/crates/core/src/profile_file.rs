//! Plain-text profile files.
//!
//! ```text
//! n=64
//! 1,0,1,2,3,1,1,1,1
//! 2,0,2,4,6,1,1,1,1
//! ```
//!
//! One header line `n=<N>`, then `u,tau1,tau2,tau3,tau4,c1,c2,c3,c4` per profile with the
//! rotations written as `1`, `-1`, `j` or `-j`. Blank lines are ignored on input; output has
//! no blank lines and ends with a newline.

use std::fmt::Write as _;
use std::path::Path;

use crate::class3::{ProfileSet, Rotation, ShiftRotationProfile};
use crate::error::{Error, Result};

pub fn format_profiles(set: &ProfileSet) -> String {
    let mut out = format!("n={}\n", set.n());
    for (label, p) in set.iter() {
        let [t1, t2, t3, t4] = p.tau();
        let [c1, c2, c3, c4] = p.rotations();
        writeln!(out, "{label},{t1},{t2},{t3},{t4},{c1},{c2},{c3},{c4}").expect("writing to a String");
    }
    out
}

pub fn parse_profiles(text: &str) -> Result<ProfileSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty profile file".into() })?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse { line: header_line, message: format!("expected header 'n=<N>', found '{header}'") })?;
    crate::error::check_slm_size(n).map_err(|e| Error::Parse { line: header_line, message: e.to_string() })?;

    let mut labels = Vec::new();
    let mut profiles = Vec::new();
    for (line, content) in lines {
        let fail = |message: String| Error::Parse { line, message };
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 9 {
            return Err(fail(format!("expected 9 comma-separated fields, found {}", fields.len())));
        }
        let label: usize = fields[0].parse().map_err(|_| fail(format!("bad profile index '{}'", fields[0])))?;
        let mut tau = [0usize; 4];
        for (slot, field) in tau.iter_mut().zip(&fields[1..5]) {
            *slot = field.parse().map_err(|_| fail(format!("bad cyclic shift '{field}'")))?;
        }
        let mut c = [Rotation::One; 4];
        for (slot, field) in c.iter_mut().zip(&fields[5..9]) {
            *slot = field.parse().map_err(|e: Error| fail(e.to_string()))?;
        }
        let profile = ShiftRotationProfile::new(n, tau, c).map_err(|e| fail(e.to_string()))?;
        labels.push(label);
        profiles.push(profile);
    }
    if profiles.is_empty() {
        return Err(Error::Parse { line: header_line, message: "no profiles after header".into() });
    }
    ProfileSet::with_labels(n, labels, profiles)
}

/// I/O failures are reported as a parse error on line 0.
pub fn read_profiles(path: &Path) -> Result<ProfileSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, message: format!("cannot read {}: {e}", path.display()) })?;
    parse_profiles(&text)
}
