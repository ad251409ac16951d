use std::io::{self, Write};

use super::{ProfileSample, SolitonProfile};
use crate::error::{Error, Result};
use crate::format::fmt_f64;

pub const PROFILE_CSV_HEADER: &str = "coordinate,field,derivative,energy_density,charge_density";

/// Writes the samples as CSV with 17 significant digits per value.
pub fn write_profile_csv<W: Write>(mut out: W, profile: &SolitonProfile) -> io::Result<()> {
    writeln!(out, "{PROFILE_CSV_HEADER}")?;
    for s in &profile.samples {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(s.coordinate),
            fmt_f64(s.field),
            fmt_f64(s.derivative),
            fmt_f64(s.energy_density),
            fmt_f64(s.charge_density)
        )?;
    }
    Ok(())
}

/// Parses profile CSV as written by [`write_profile_csv`]. Blank lines are
/// ignored; anything else must be a row of five numbers.
pub fn read_profile_csv(text: &str) -> Result<Vec<ProfileSample>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == PROFILE_CSV_HEADER => {}
        Some((i, header)) => {
            return Err(Error::Parse { line: i + 1, message: format!("unexpected header '{}'", header.trim()) })
        }
        None => return Err(Error::Parse { line: 1, message: "empty profile".into() }),
    }
    let mut samples = Vec::new();
    for (i, line) in lines {
        let mut values = [0.0; 5];
        let mut fields = line.split(',');
        for v in values.iter_mut() {
            let raw =
                fields.next().ok_or_else(|| Error::Parse { line: i + 1, message: "expected 5 columns".into() })?;
            *v = raw
                .trim()
                .parse()
                .map_err(|_| Error::Parse { line: i + 1, message: format!("bad number '{}'", raw.trim()) })?;
        }
        if fields.next().is_some() {
            return Err(Error::Parse { line: i + 1, message: "expected 5 columns".into() });
        }
        let [coordinate, field, derivative, energy_density, charge_density] = values;
        samples.push(ProfileSample { coordinate, field, derivative, energy_density, charge_density });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelParams, PotentialSpec, Sector};
    use crate::profile::{exact_profile, GridSpec};

    #[test]
    fn round_trip_is_lossless() {
        let params = ModelParams::new(Sector::Skyrme3D, 1.0, 1.0, 1);
        let prof = exact_profile(&params, &PotentialSpec::skyrme_standard(), &GridSpec::samples(50)).unwrap();
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, &prof).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(PROFILE_CSV_HEADER));
        let back = read_profile_csv(&text).unwrap();
        assert_eq!(back.len(), prof.samples.len());
        for (a, b) in back.iter().zip(&prof.samples) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(read_profile_csv("").is_err());
        assert!(read_profile_csv("x,h\n1,2\n").is_err());
        let bad = format!("{PROFILE_CSV_HEADER}\n1,2,3,4\n");
        assert!(matches!(read_profile_csv(&bad), Err(Error::Parse { line: 2, .. })));
        let bad = format!("{PROFILE_CSV_HEADER}\n1,2,3,4,5,6\n");
        assert!(read_profile_csv(&bad).is_err());
        let bad = format!("{PROFILE_CSV_HEADER}\n1,2,x,4,5\n");
        assert!(read_profile_csv(&bad).is_err());
    }
}
