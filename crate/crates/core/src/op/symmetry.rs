use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::StateFunctional;
use super::word::Word;
use crate::monoid::Relabeling;
use crate::scalar::{modulus, to_pair, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Shift,
    Permutations,
    Spreading,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Shift => "shift",
            FamilyKind::Permutations => "permutations",
            FamilyKind::Spreading => "spreading",
        })
    }
}

/// A finite sample of relabelings standing in for one symmetry family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryFamily {
    pub kind: FamilyKind,
    pub maps: Vec<Relabeling>,
    pub seed: u64,
}

impl SymmetryFamily {
    pub fn new(kind: FamilyKind, maps: Vec<Relabeling>, seed: u64) -> Self {
        SymmetryFamily { kind, maps, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tol: f64,
    /// Relabeled words with an index outside this window are skipped.
    pub window: Option<(i64, i64)>,
    pub parallel: bool,
    pub max_witnesses: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { tol: 1e-10, window: None, parallel: false, max_witnesses: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub word: String,
    pub map: String,
    pub original: [f64; 2],
    pub relabeled: [f64; 2],
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub family: FamilyKind,
    pub state: String,
    pub samples: usize,
    pub skipped: usize,
    pub max_deviation: f64,
    pub witnesses: Vec<Witness>,
    pub seed: u64,
    pub tolerance: f64,
    pub passed: bool,
}

enum Outcome {
    Skipped,
    Checked { deviation: f64, witness: Option<Witness> },
}

/// Compares `φ(w)` with `φ(g·w)` for every word `w` and every map `g` in the
/// family. Pairs whose relabeled word leaves the window, or that the state
/// cannot evaluate, are skipped and counted.
///
/// Results are aggregated in (word, map) order, so the report does not depend
/// on whether evaluation ran in parallel.
pub fn check_symmetry<S: Scalar>(
    phi: &StateFunctional<S>,
    words: &[Word],
    family: &SymmetryFamily,
    options: &CheckOptions,
) -> SymmetryReport {
    let pairs: Vec<(usize, usize)> =
        (0..words.len()).flat_map(|w| (0..family.maps.len()).map(move |m| (w, m))).collect();
    let run = |&(wi, mi): &(usize, usize)| -> Outcome {
        let (w, g) = (&words[wi], &family.maps[mi]);
        let moved = w.relabel(g);
        if let Some((lo, hi)) = options.window {
            if moved.indices().any(|i| i < lo || i > hi) {
                return Outcome::Skipped;
            }
        }
        let (Ok(a), Ok(b)) = (phi.evaluate(w), phi.evaluate(&moved)) else {
            return Outcome::Skipped;
        };
        let deviation = modulus(&(a.clone() - b.clone()));
        let witness = (deviation > options.tol).then(|| Witness {
            word: w.to_string(),
            map: g.to_string(),
            original: to_pair(&a),
            relabeled: to_pair(&b),
            deviation,
        });
        Outcome::Checked { deviation, witness }
    };
    let outcomes: Vec<Outcome> =
        if options.parallel { pairs.par_iter().map(run).collect() } else { pairs.iter().map(run).collect() };

    let mut report = SymmetryReport {
        family: family.kind,
        state: phi.label().to_string(),
        samples: 0,
        skipped: 0,
        max_deviation: 0.0,
        witnesses: Vec::new(),
        seed: family.seed,
        tolerance: options.tol,
        passed: true,
    };
    for outcome in outcomes {
        match outcome {
            Outcome::Skipped => report.skipped += 1,
            Outcome::Checked { deviation, witness } => {
                report.samples += 1;
                report.max_deviation = report.max_deviation.max(deviation);
                if let Some(w) = witness {
                    report.passed = false;
                    if report.witnesses.len() < options.max_witnesses {
                        report.witnesses.push(w);
                    }
                }
            }
        }
    }
    report
}

impl SymmetryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{verdict} {} on {}: samples={} skipped={} max_dev={:.3e} tol={:.1e} seed={}",
            self.family, self.state, self.samples, self.skipped, self.max_deviation, self.tolerance, self.seed
        );
        for w in &self.witnesses {
            let _ = writeln!(
                s,
                "  word [{}] under {}: {:+.6}{:+.6}i vs {:+.6}{:+.6}i (dev {:.3e})",
                w.word, w.map, w.original[0], w.original[1], w.relabeled[0], w.relabeled[1], w.deviation
            );
        }
        s
    }
}
