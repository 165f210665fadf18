//! Regenerate the dense part of `data/presets.txt`.
//!
//! Sweeps outward from R = 2 in both directions, solving every point from the
//! previous optimum and from the current preset seed and keeping the lower
//! energy. Rows go to stdout in preset-file format; progress goes to stderr.
//!
//! ```text
//! cargo run --release --example regenerate_presets > dense.txt
//! ```

use h2ion::variational::lower_energy;
use h2ion::{minimize, Error, Geometry, SolverConfig, StateLabel, TrialParams};

fn main() {
    let cfg = SolverConfig::default();
    let up = [2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0];
    let down = [2.0, 1.5, 1.0, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05];
    for state in [StateLabel::SIGMA_G_1S, StateLabel::SIGMA_U_2P] {
        let mut rows = Vec::new();
        for grid in [&up[..], &down[..]] {
            let mut prev: Option<TrialParams> = None;
            for &r in grid {
                let g = Geometry::new(r).expect("positive R");
                let warm = prev.map(|p| TrialParams::from_vec(&p.to_vec(), state, r));
                let res = match warm {
                    Some(w) => lower_energy(minimize(g, state, Some(w), &cfg), minimize(g, state, None, &cfg)),
                    None => minimize(g, state, None, &cfg),
                };
                let s = match res {
                    Ok(s) => s,
                    Err(Error::IterationLimit { best, .. }) => {
                        eprintln!("{state} R={r}: budget exhausted, keeping best point");
                        *best
                    }
                    Err(e) => {
                        eprintln!("{state} R={r}: {e}");
                        continue;
                    }
                };
                eprintln!("{state} R={r} E={:.12}", s.e_total);
                prev = Some(s.params);
                rows.push((r, s.params.to_vec()));
            }
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        rows.dedup_by(|a, b| a.0 == b.0);
        for (r, v) in rows {
            let cols: Vec<String> = v.iter().map(|x| format!("{x:.10e}")).collect();
            println!("{state} {r} {}", cols.join(" "));
        }
    }
}
