//! Seed parameters for the minimizer, shipped as a plain-text table.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::prolate::StateLabel;
use crate::trial::TrialParams;

const BUILTIN: &str = include_str!("../data/presets.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct PresetRow {
    pub state: StateLabel,
    pub r: f64,
    pub values: [f64; 7],
}

#[derive(Clone, Debug, Default)]
pub struct PresetTable {
    rows: Vec<PresetRow>,
}

impl PresetTable {
    /// Parse `state R alpha gamma a1 a2 b2 b3 p` rows; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 9 {
                return Err(Error::Parse(format!(
                    "preset line {}: expected 9 columns, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let state: StateLabel = fields[0].parse()?;
            let nums = fields[1..]
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("preset line {}: {e}", lineno + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            let mut values = [0.0; 7];
            values.copy_from_slice(&nums[1..]);
            rows.push(PresetRow {
                state,
                r: nums[0],
                values,
            });
        }
        rows.sort_by(|a, b| a.r.total_cmp(&b.r));
        Ok(PresetTable { rows })
    }

    pub fn builtin() -> &'static PresetTable {
        static TABLE: OnceLock<PresetTable> = OnceLock::new();
        TABLE.get_or_init(|| PresetTable::parse(BUILTIN).expect("built-in preset table parses"))
    }

    pub fn rows(&self, state: StateLabel) -> impl Iterator<Item = &PresetRow> {
        self.rows.iter().filter(move |row| row.state == state)
    }

    /// Parameters linearly interpolated in `R` between neighbouring rows;
    /// clamped to the nearest row outside the tabulated range.
    pub fn seed(&self, state: StateLabel, r: f64) -> Result<TrialParams> {
        state.ensure_supported()?;
        let rows: Vec<&PresetRow> = self.rows(state).collect();
        if rows.is_empty() {
            return Err(Error::Evaluation(format!("no preset rows for {state}")));
        }
        let values = match rows.iter().position(|row| row.r >= r) {
            Some(0) => rows[0].values,
            None => rows[rows.len() - 1].values,
            Some(i) => {
                let (lo, hi) = (rows[i - 1], rows[i]);
                let t = (r - lo.r) / (hi.r - lo.r);
                let mut v = [0.0; 7];
                for k in 0..7 {
                    v[k] = lo.values[k] + t * (hi.values[k] - lo.values[k]);
                }
                v
            }
        };
        Ok(TrialParams::from_vec(&values, state, r))
    }
}

/// Seed from the built-in table.
pub fn preset_seed(state: StateLabel, r: f64) -> Result<TrialParams> {
    PresetTable::builtin().seed(state, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_contains_published_rows() {
        let t = PresetTable::builtin();
        let row = t
            .rows(StateLabel::SIGMA_G_1S)
            .find(|r| r.r == 1.997193)
            .expect("equilibrium row");
        assert_eq!(row.values[0], 1.48407);
        assert!(t.rows(StateLabel::SIGMA_U_2P).any(|r| r.r == 12.54525));
    }

    #[test]
    fn interpolation_and_clamping() {
        let t = PresetTable::parse("1ssg 1 1 1 1 1 1 1 1\n1ssg 3 3 3 3 3 3 3 3 # tail\n").unwrap();
        let s = t.seed(StateLabel::SIGMA_G_1S, 2.0).unwrap();
        assert_eq!(s.alpha, 2.0);
        assert_eq!(s.r, 2.0);
        assert_eq!(t.seed(StateLabel::SIGMA_G_1S, 0.5).unwrap().p, 1.0);
        assert_eq!(t.seed(StateLabel::SIGMA_G_1S, 9.0).unwrap().p, 3.0);
        assert!(t.seed(StateLabel::SIGMA_U_2P, 2.0).is_err());
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(PresetTable::parse("1ssg 1 2 3").is_err());
        assert!(PresetTable::parse("3dsg 1 1 1 1 1 1 1 1").is_err());
        assert!(PresetTable::parse("1ssg 1 1 1 1 x 1 1 1").is_err());
    }
}
